//! One visitor's conversation: visual state, scene timeline, exploration
//! plan, narration and the clock that drives them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::narrative::{
    add_to_timeline, build_scene, node_sorting, select_focus_node, ExplorationPlan, NarrationError,
    NarrationPayload, NarrationTemplates, NarrativeError, Scene, SceneKind, Signal, TaskType,
    Timeline,
};
use crate::router::{ModelContext, PendingDetail};
use crate::scene::{NodeId, SceneTree};
use crate::visual::{
    label_for, AnimationPlayer, AnimationSpec, CameraSnapshot, LogEntry, PlaneSnapshot, Pose,
    StateSnapshot, VisualError, VisualState,
};

pub const DEFAULT_WORDS_PER_SECOND: f64 = 2.5;
/// Conversation entries included in a state snapshot.
pub const LOG_TAIL: usize = 10;

pub const USER: &str = "user";
pub const GUIDE: &str = "guide";

/// Seconds needed to speak `text` at `words_per_second`.
pub fn speech_duration(text: &str, words_per_second: f64) -> f64 {
    text.split_whitespace().count() as f64 / words_per_second
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Narrative(#[from] NarrativeError),
    #[error(transparent)]
    Visual(#[from] VisualError),
    #[error(transparent)]
    Narration(#[from] NarrationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SessionOptions {
    pub seed: u64,
    pub words_per_second: f64,
    /// Emit SpeechDone by itself once the estimated speaking time elapsed.
    pub auto_speech: bool,
}

impl Default for SessionOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            words_per_second: DEFAULT_WORDS_PER_SECOND,
            auto_speech: true,
        }
    }
}

/// What a selection enqueued and what is offered next.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub node: NodeId,
    pub scenes: Vec<Scene>,
    pub options: Vec<NodeId>,
}

#[derive(Debug)]
pub struct Session {
    tree: Arc<SceneTree>,
    templates: Arc<NarrationTemplates>,
    options: SessionOptions,
    visual: VisualState,
    timeline: Timeline,
    player: AnimationPlayer,
    exploration: Option<ExplorationPlan>,
    pending_detail: Option<(String, PendingDetail)>,
    log: Vec<LogEntry>,
    utterances: u64,
    speech_elapsed: f64,
}

impl Session {
    /// A session at the default pose with the introduction queued.
    pub fn new(
        tree: Arc<SceneTree>,
        templates: Arc<NarrationTemplates>,
        options: SessionOptions,
    ) -> Self {
        let visual = VisualState::new(Arc::clone(&tree));
        let mut session = Self {
            tree,
            templates,
            options,
            visual,
            timeline: Timeline::new(),
            player: AnimationPlayer::default(),
            exploration: None,
            pending_detail: None,
            log: Vec::new(),
            utterances: 0,
            speech_elapsed: 0.0,
        };
        let intro = session.narrate(TaskType::Introduction, NarrationPayload::default());
        session.speak(&intro);
        session
    }

    pub fn tree(&self) -> &Arc<SceneTree> {
        &self.tree
    }

    pub fn options(&self) -> &SessionOptions {
        &self.options
    }

    pub fn visual(&self) -> &VisualState {
        &self.visual
    }

    pub fn visual_mut(&mut self) -> &mut VisualState {
        &mut self.visual
    }

    pub fn timeline(&self) -> &Timeline {
        &self.timeline
    }

    pub fn player(&self) -> &AnimationPlayer {
        &self.player
    }

    pub fn exploration(&self) -> Option<&ExplorationPlan> {
        self.exploration.as_ref()
    }

    pub fn exploration_active(&self) -> bool {
        self.exploration.as_ref().is_some_and(|p| p.is_active())
    }

    pub fn pending_options(&self) -> &[NodeId] {
        match &self.exploration {
            Some(p) if p.is_active() => p.options(),
            _ => &[],
        }
    }

    pub fn awaiting_detail(&self) -> bool {
        self.pending_detail.is_some()
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    pub fn model_context(&self) -> ModelContext {
        ModelContext::new(&self.tree, self.visual.current_node().as_str())
    }

    pub fn record(&mut self, speaker: &str, text: &str) {
        self.log.push(LogEntry {
            speaker: speaker.to_owned(),
            text: text.to_owned(),
        });
    }

    fn name_of(&self, id: &str) -> String {
        self.tree
            .node(id)
            .map_or_else(|| id.to_owned(), |n| n.name.clone())
    }

    /// Draws the next narration line. Every utterance uses its own seed
    /// derived from the session seed, so a replayed session says the same.
    pub fn narrate(&mut self, task: TaskType, mut payload: NarrationPayload) -> String {
        if payload.model.is_none() {
            payload.model = Some(self.tree.model_name().to_owned());
        }
        let seed = self.options.seed.wrapping_add(self.utterances);
        self.utterances += 1;
        self.templates
            .generate(task, &payload, seed)
            .unwrap_or_default()
    }

    fn enqueue(&mut self, scene: Scene) {
        self.timeline.push(scene);
        self.pump();
    }

    /// Starts the next queued scene when nothing is playing.
    fn pump(&mut self) {
        if self.timeline.current().is_none() && self.timeline.start_next().is_some() {
            self.begin();
        }
    }

    /// Starts playback of the scene that just became current.
    fn begin(&mut self) {
        let Some(scene) = self.timeline.current() else {
            return;
        };
        let silent = scene.speech.trim().is_empty();
        self.player.play(scene.animation.clone());
        self.speech_elapsed = 0.0;
        if silent {
            let _ = self.timeline.advance(Signal::SpeechDone);
        }
    }

    /// Queues a speech-only scene with a subtle swing of the current view.
    pub fn speak(&mut self, text: &str) -> Scene {
        let scene = build_scene(
            SceneKind::SpeechOnly,
            None,
            &self.tree,
            self.visual.pose(),
            Some(text),
        )
        .expect("speech-only scenes need no target");
        self.record(GUIDE, text);
        self.enqueue(scene.clone());
        scene
    }

    /// Queues a scene that plays an animation the visual state already
    /// committed.
    pub fn play(
        &mut self,
        kind: SceneKind,
        target: Option<NodeId>,
        speech: &str,
        animation: AnimationSpec,
    ) -> Result<Scene, SessionError> {
        let scene = Scene::new(kind, target, speech, animation)?;
        self.record(GUIDE, speech);
        self.enqueue(scene.clone());
        Ok(scene)
    }

    /// Overview for internal nodes, Focus for leaves. The scene's end pose
    /// becomes the committed view. A leaf without instances gets an Overview.
    pub fn show_node(&mut self, node: &str, speech: Option<&str>) -> Result<Scene, SessionError> {
        let from = self.visual.pose();
        let mut staging = Timeline::new();
        let mut scene = match add_to_timeline(&mut staging, node, &self.tree, from) {
            Err(NarrativeError::NoInstances(_)) => {
                build_scene(SceneKind::Overview, Some(node), &self.tree, from, None)?
            }
            other => other?,
        };
        if let Some(s) = speech {
            scene.speech = s.to_owned();
        }
        let id = scene.target_node_id.clone();
        self.visual
            .commit(scene.animation.end_pose(), id.as_ref())?;
        self.record(GUIDE, &scene.speech);
        self.enqueue(scene.clone());
        Ok(scene)
    }

    /// Shows the question's deepest mentioned node with `answer` as speech
    /// and starts a plan over the nodes the answer mentions.
    pub fn run_exploration(
        &mut self,
        question: &str,
        answer: &str,
    ) -> Result<Vec<Scene>, SessionError> {
        let focus = select_focus_node(question, &self.tree);
        let scene = match &focus {
            Some(node) => self.show_node(node.as_str(), Some(answer))?,
            None => self.speak(answer),
        };
        let plan = ExplorationPlan::start(node_sorting(answer, &self.tree), focus);
        self.exploration = Some(plan);
        Ok(vec![scene])
    }

    /// Spoken offer of the current options, if any.
    pub fn option_prompt(&mut self) -> Option<String> {
        let names: Vec<String> = self
            .pending_options()
            .iter()
            .map(|id| self.name_of(id.as_str()))
            .collect();
        if names.is_empty() {
            return None;
        }
        Some(self.narrate(TaskType::OptionPrompt, NarrationPayload::options(names)))
    }

    /// Picks option `index` (0-based), queues its scene and offers the next.
    pub fn select_option(&mut self, index: usize) -> Result<Selection, SessionError> {
        let plan = self
            .exploration
            .as_mut()
            .ok_or(NarrativeError::NoPendingOptions)?;
        let node = plan.select(index)?;
        let mut scenes = vec![self.show_node(node.as_str(), None)?];
        match self.option_prompt() {
            Some(prompt) => scenes.push(self.speak(&prompt)),
            None => {
                let bye = self.narrate(TaskType::ExplorationEnd, NarrationPayload::default());
                scenes.push(self.speak(&bye));
            }
        }
        Ok(Selection {
            node,
            scenes,
            options: self.pending_options().to_vec(),
        })
    }

    /// Skips the current options and offers the next ones.
    pub fn more_options(&mut self) -> Vec<NodeId> {
        match &mut self.exploration {
            Some(plan) if plan.is_active() => plan.next_options().to_vec(),
            _ => Vec::new(),
        }
    }

    pub fn end_exploration(&mut self) {
        if let Some(plan) = &mut self.exploration {
            plan.end();
        }
    }

    pub fn set_pending_detail(&mut self, topic: String, detail: PendingDetail) {
        self.pending_detail = Some((topic, detail));
    }

    pub fn take_pending_detail(&mut self) -> Option<(String, PendingDetail)> {
        self.pending_detail.take()
    }

    pub fn clear_pending_detail(&mut self) {
        self.pending_detail = None;
    }

    fn signal(&mut self, signal: Signal) -> bool {
        match self.timeline.advance(signal) {
            Ok(crate::narrative::Advance::Completed { next, .. }) => {
                if next.is_some() {
                    self.begin();
                }
                true
            }
            _ => false,
        }
    }

    /// Marks the current scene's speech as finished. Returns false when there
    /// is no scene or its speech already finished.
    pub fn speech_complete(&mut self) -> bool {
        self.pump();
        match self.timeline.current() {
            Some(scene) if !scene.speech_done => {
                self.signal(Signal::SpeechDone);
                true
            }
            _ => false,
        }
    }

    /// Seconds of speech left for the current scene.
    pub fn speech_remaining(&self) -> Option<f64> {
        let scene = self.timeline.current()?;
        if scene.speech_done {
            return None;
        }
        let total = speech_duration(&scene.speech, self.options.words_per_second);
        Some((total - self.speech_elapsed).max(0.0))
    }

    /// Advances the clock by `dt` seconds and returns the signals emitted.
    pub fn tick(&mut self, dt: f64) -> Vec<Signal> {
        let mut signals = Vec::new();
        self.pump();
        if self.options.auto_speech {
            if let Some(scene) = self.timeline.current() {
                if !scene.speech_done {
                    self.speech_elapsed += dt;
                    let total = speech_duration(&scene.speech, self.options.words_per_second);
                    if self.speech_elapsed >= total - 1e-9 {
                        signals.push(Signal::SpeechDone);
                        self.signal(Signal::SpeechDone);
                    }
                }
            }
        }
        if self.timeline.current().is_some() && self.player.tick(dt) {
            signals.push(Signal::AnimationDone);
            self.signal(Signal::AnimationDone);
        }
        signals
    }

    /// Whether anything is still playing or queued.
    pub fn is_busy_playing(&self) -> bool {
        !self.timeline.is_idle()
    }

    pub fn displayed_pose(&self) -> Pose {
        match self.timeline.current() {
            Some(_) => self.player.pose().unwrap_or_else(|| self.visual.pose()),
            None => self.visual.pose(),
        }
    }

    pub fn snapshot(&self) -> StateSnapshot {
        let shown = self.displayed_pose();
        let current = self.visual.current_node();
        let mut labels = Vec::new();
        if let Some(node) = self.tree.node(current.as_str()) {
            labels.push(label_for(node));
            labels.extend(
                node.child_ids
                    .iter()
                    .filter_map(|c| self.tree.node(c.as_str()))
                    .map(label_for),
            );
        }
        let highlight = match self.timeline.current() {
            Some(_) => self
                .player
                .highlight()
                .iter()
                .map(ToString::to_string)
                .collect(),
            None => Vec::new(),
        };
        let start = self.log.len().saturating_sub(LOG_TAIL);
        StateSnapshot {
            model_name: self.tree.model_name().to_owned(),
            camera: CameraSnapshot::from(&self.visual.camera),
            view: CameraSnapshot::from(&shown.camera),
            plane: PlaneSnapshot::from(&self.visual.plane),
            view_plane: PlaneSnapshot::from(&shown.plane),
            current_node: current.to_string(),
            scale_level: self.visual.scale_level(),
            pending_options: self
                .pending_options()
                .iter()
                .map(ToString::to_string)
                .collect(),
            current_scene: self.timeline.current().map(|s| s.kind),
            current_speech: self.timeline.current().map(|s| s.speech.clone()),
            queued_scenes: self.timeline.len(),
            highlight,
            labels,
            awaiting_detail: self.awaiting_detail(),
            animating: self.timeline.current().is_some() && self.player.is_active(),
            history_depth: self.visual.history().len(),
            conversation_tail: self.log[start..].to_vec(),
        }
    }
}
