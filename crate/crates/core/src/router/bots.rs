//! The pack of role bots and the typed operations built on them.

use std::fmt;
use std::sync::Arc;
use std::time::Duration;

use crate::narrative::{fold_text, mentions, select_focus_node};
use crate::scene::SceneTree;

use super::backend::{BackendError, BotBackend, ChatMessage};
use super::intent::{
    parse_pilot_reply, parse_transform, EncyclopediaAnswer, Intent, PilotCommand, PilotIntent,
    ScaleDirection, Transform,
};
use super::mock::{MockBot, MockConfig};
use super::prompts::{BotRole, ModelContext, PromptSet};
use super::RouterError;

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(30);

/// A backend plus the time one completion may take.
#[derive(Clone)]
pub struct BotHandle {
    backend: Arc<dyn BotBackend>,
    budget: Duration,
}

impl fmt::Debug for BotHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BotHandle")
            .field("budget", &self.budget)
            .finish_non_exhaustive()
    }
}

impl BotHandle {
    pub fn new(backend: Arc<dyn BotBackend>) -> Self {
        Self {
            backend,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> Duration {
        self.budget
    }

    pub async fn ask(&self, system_prompt: &str, query: &str) -> Result<String, BackendError> {
        let messages = [ChatMessage::user(query)];
        tokio::time::timeout(self.budget, self.backend.complete(system_prompt, &messages))
            .await
            .map_err(|_| BackendError::Timeout(self.budget))?
    }
}

/// One handle per role together with the prompt set they are asked with.
#[derive(Debug, Clone)]
pub struct BotSet {
    handles: [BotHandle; 6],
    prompts: Arc<PromptSet>,
}

impl BotSet {
    pub fn new(prompts: PromptSet, make: impl FnMut(BotRole) -> BotHandle) -> Self {
        Self {
            handles: BotRole::ALL.map(make),
            prompts: Arc::new(prompts),
        }
    }

    /// Rule-table bots for every role with the bundled prompts.
    pub fn mock(config: &MockConfig) -> Self {
        Self::mock_with_prompts(PromptSet::default(), config)
    }

    pub fn mock_with_prompts(prompts: PromptSet, config: &MockConfig) -> Self {
        Self::new(prompts, |role| {
            BotHandle::new(Arc::new(MockBot::new(role, config)))
        })
    }

    pub fn with_handle(mut self, role: BotRole, handle: BotHandle) -> Self {
        self.handles[role as usize] = handle;
        self
    }

    pub fn handle(&self, role: BotRole) -> &BotHandle {
        &self.handles[role as usize]
    }

    pub fn prompts(&self) -> &PromptSet {
        &self.prompts
    }

    pub async fn ask(
        &self,
        role: BotRole,
        ctx: &ModelContext,
        query: &str,
    ) -> Result<String, BackendError> {
        let prompt = self.prompts.render(role, ctx);
        self.handle(role).ask(&prompt, query).await
    }
}

fn non_empty(query: &str) -> Result<&str, RouterError> {
    let q = query.trim();
    if q.is_empty() {
        Err(RouterError::EmptyQuery)
    } else {
        Ok(q)
    }
}

pub async fn classify_intent(
    query: &str,
    ctx: &ModelContext,
    bots: &BotSet,
) -> Result<Intent, RouterError> {
    let reply = bots.ask(BotRole::Manager, ctx, non_empty(query)?).await?;
    reply.parse()
}

pub async fn classify_pilot(
    query: &str,
    tree: &SceneTree,
    ctx: &ModelContext,
    bots: &BotSet,
) -> Result<PilotIntent, RouterError> {
    let reply = bots.ask(BotRole::Pilot, ctx, non_empty(query)?).await?;
    resolve_pilot(&reply, query, tree)
}

/// Turns the pilot digit into a typed intent. Navigation targets come from
/// the query: the deepest mentioned node, earliest mention on ties.
pub fn resolve_pilot(
    reply: &str,
    query: &str,
    tree: &SceneTree,
) -> Result<PilotIntent, RouterError> {
    Ok(match parse_pilot_reply(reply)? {
        PilotCommand::NodeNavigation => {
            let target = select_focus_node(query, tree)
                .ok_or_else(|| RouterError::UnresolvedTarget(query.trim().to_owned()))?;
            PilotIntent::NodeNavigation(target)
        }
        PilotCommand::ScaleChange(Some(d)) => PilotIntent::ScaleChange(d),
        PilotCommand::ScaleChange(None) => {
            let text = fold_text(query);
            let down = ["down", "lower", "deeper", "inside"]
                .iter()
                .any(|w| mentions(&text, w));
            PilotIntent::ScaleChange(if down {
                ScaleDirection::Down
            } else {
                ScaleDirection::Up
            })
        }
        PilotCommand::Reset => PilotIntent::Reset,
        PilotCommand::ReturnBack => PilotIntent::ReturnBack,
    })
}

pub async fn extract_transform(
    query: &str,
    ctx: &ModelContext,
    bots: &BotSet,
) -> Result<Transform, RouterError> {
    let reply = bots.ask(BotRole::Explorer, ctx, non_empty(query)?).await?;
    parse_transform(&reply)
}

/// Asks for both segments at once. A missing concise segment is replaced by
/// the detailed one; only when both fail is the backend reported down.
pub async fn encyclopedia_query(
    query: &str,
    ctx: &ModelContext,
    bots: &BotSet,
) -> Result<EncyclopediaAnswer, RouterError> {
    let q = non_empty(query)?;
    let (concise, detailed) = tokio::join!(
        bots.ask(BotRole::EncyclopediaConcise, ctx, q),
        bots.ask(BotRole::EncyclopediaDetailed, ctx, q),
    );
    combine_segments(concise, detailed)
}

pub(crate) fn combine_segments(
    concise: Result<String, BackendError>,
    detailed: Result<String, BackendError>,
) -> Result<EncyclopediaAnswer, RouterError> {
    let concise = concise.map(|c| c.trim().to_owned()).unwrap_or_default();
    match (concise.is_empty(), detailed) {
        (false, detailed) => Ok(EncyclopediaAnswer {
            concise,
            detailed: detailed.map(|d| d.trim().to_owned()).unwrap_or_default(),
        }),
        (true, Ok(d)) if !d.trim().is_empty() => Ok(EncyclopediaAnswer {
            concise: d.trim().to_owned(),
            detailed: String::new(),
        }),
        (true, Ok(_)) => Err(RouterError::BackendUnavailable(BackendError::Unavailable(
            "empty encyclopedia answer".into(),
        ))),
        (true, Err(e)) => Err(RouterError::BackendUnavailable(e)),
    }
}

pub async fn guardian_reply(
    query: &str,
    ctx: &ModelContext,
    bots: &BotSet,
) -> Result<String, RouterError> {
    Ok(bots.ask(BotRole::Guardian, ctx, query.trim()).await?)
}
