//! FIFO scene queue gated on speech and animation completion.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::scene::Scene;
use super::NarrativeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Signal {
    SpeechDone,
    AnimationDone,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Advance {
    /// The current scene still waits for the other signal.
    Waiting,
    /// The current scene finished; `next` is now current (if any).
    Completed {
        finished: Box<Scene>,
        next: Option<Box<Scene>>,
    },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Timeline {
    queue: VecDeque<Scene>,
    current: Option<Scene>,
}

impl Timeline {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, scene: Scene) {
        self.queue.push_back(scene);
    }

    /// Scenes waiting behind the current one.
    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn is_idle(&self) -> bool {
        self.current.is_none() && self.queue.is_empty()
    }

    pub fn current(&self) -> Option<&Scene> {
        self.current.as_ref()
    }

    pub fn queued(&self) -> impl Iterator<Item = &Scene> {
        self.queue.iter()
    }

    /// Promotes the front of the queue when nothing is playing. Returns the
    /// newly started scene.
    pub fn start_next(&mut self) -> Option<&Scene> {
        if self.current.is_some() {
            return None;
        }
        self.current = self.queue.pop_front();
        self.current.as_ref()
    }

    pub fn advance(&mut self, signal: Signal) -> Result<Advance, NarrativeError> {
        let scene = self
            .current
            .as_mut()
            .ok_or(NarrativeError::SignalWithoutScene)?;
        match signal {
            Signal::SpeechDone => scene.speech_done = true,
            Signal::AnimationDone => scene.animation_done = true,
        }
        if !scene.is_complete() {
            return Ok(Advance::Waiting);
        }
        let finished = self.current.take().expect("checked above");
        self.current = self.queue.pop_front();
        Ok(Advance::Completed {
            finished: Box::new(finished),
            next: self.current.clone().map(Box::new),
        })
    }

    pub fn clear(&mut self) {
        self.queue.clear();
        self.current = None;
    }
}
