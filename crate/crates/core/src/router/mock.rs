//! Deterministic rule-table bots. They read the model name and keyword list
//! from the `Model:` and `Keywords:` lines of the system prompt, so they see
//! exactly what a remote model would.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Duration;

use async_trait::async_trait;

use crate::narrative::{fold_text, mentions, position};

use super::backend::{BackendError, BotBackend, ChatMessage, ChatRole};
use super::intent::{EncyclopediaAnswer, Intent, Transform};
use super::prompts::BotRole;

const CUTTING_PHRASES: &[&str] = &[
    "interior",
    "inside",
    "internal",
    "cut",
    "cut open",
    "cutting plane",
    "cross section",
    "slice",
];

const VIEW_PHRASES: &[&str] = &[
    "side",
    "rotate",
    "turn",
    "spin",
    "zoom",
    "closer",
    "close up",
    "up close",
    "too far",
    "too close",
    "farther",
    "further away",
    "top",
    "bottom",
    "above",
    "below",
    "underneath",
    "behind",
    "rear",
    "upside down",
    "tilt",
    "roll",
    "view",
    "angle",
    "left",
    "right",
];

const NAV_VERBS: &[&str] = &[
    "show", "show me", "go", "take me", "bring me", "fly", "guide me", "navigate", "move", "return",
];

const RESET_PHRASES: &[&str] = &[
    "start",
    "beginning",
    "reset",
    "start over",
    "initial view",
    "home",
];
const BACK_PHRASES: &[&str] = &["last", "previous", "back", "again", "before", "earlier"];
const LEVEL_PHRASES: &[&str] = &[
    "level",
    "up",
    "down",
    "higher",
    "lower",
    "deeper",
    "bigger picture",
];
const DOWN_PHRASES: &[&str] = &["down", "lower", "deeper", "detail"];

const QUESTION_OPENERS: &[&str] = &[
    "what", "what's", "how", "why", "which", "who", "where", "when", "tell me", "explain",
    "describe", "is", "are", "does", "do", "can", "could",
];

const DOMAIN_TERMS: &[&str] = &[
    "virus",
    "viral",
    "protein",
    "cell",
    "molecule",
    "molecular",
    "dna",
    "rna",
    "gene",
    "genome",
    "infect",
    "infection",
    "bacteria",
    "bacterium",
    "bacteriophage",
    "phage",
    "lipid",
    "membrane",
    "enzyme",
    "atom",
    "structure",
    "immune",
    "antibody",
    "capsid",
    "envelope",
    "biology",
    "host",
    "plasma",
    "blood",
    "model",
];

const LITTLE_PHRASES: &[&str] = &["a little", "a bit", "slightly", "little"];
const ZOOM_IN: &[&str] = &[
    "up close", "closer", "close up", "too far", "zoom in", "bigger", "magnify", "nearer",
];
const ZOOM_OUT: &[&str] = &[
    "too close",
    "farther",
    "further away",
    "zoom out",
    "smaller",
    "further",
    "away",
];
const TO_BACK: &[&str] = &["behind", "rear", "back side", "backside", "other side"];
const TO_TOP: &[&str] = &["top", "above"];
const TO_BOTTOM: &[&str] = &["bottom", "below", "underneath", "beneath"];

fn any(text: &[char], phrases: &[&str]) -> bool {
    phrases.iter().any(|p| mentions(text, p))
}

/// Lowercased, whitespace-collapsed question without trailing punctuation;
/// the key for canned encyclopedia answers.
pub fn normalize_question(q: &str) -> String {
    q.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
        .trim_end_matches(['?', '.', '!'])
        .trim()
        .to_owned()
}

#[derive(Debug, Clone, Default)]
pub struct MockConfig {
    pub delay: Duration,
    /// Question → answer pairs served by the encyclopedia bots.
    pub canned: Vec<(String, EncyclopediaAnswer)>,
}

impl MockConfig {
    pub fn with_delay(mut self, delay: Duration) -> Self {
        self.delay = delay;
        self
    }

    pub fn with_answer(
        mut self,
        question: &str,
        concise: impl Into<String>,
        detailed: impl Into<String>,
    ) -> Self {
        self.canned.push((
            question.to_owned(),
            EncyclopediaAnswer {
                concise: concise.into(),
                detailed: detailed.into(),
            },
        ));
        self
    }
}

#[derive(Debug, Clone)]
pub struct MockBot {
    role: BotRole,
    delay: Duration,
    canned: Arc<HashMap<String, EncyclopediaAnswer>>,
}

struct PromptInfo {
    model: String,
    keywords: Vec<String>,
}

fn prompt_info(system_prompt: &str) -> PromptInfo {
    let field = |name: &str| {
        system_prompt
            .lines()
            .find_map(|l| l.trim().strip_prefix(name).map(str::trim))
            .unwrap_or_default()
            .to_owned()
    };
    let model = field("Model:");
    let keywords = field("Keywords:")
        .split(';')
        .map(str::trim)
        .filter(|k| !k.is_empty())
        .map(str::to_owned)
        .collect();
    PromptInfo { model, keywords }
}

fn earliest_keyword<'a>(text: &[char], keywords: &'a [String]) -> Option<&'a str> {
    keywords
        .iter()
        .filter_map(|k| position(text, k).map(|at| (at, std::cmp::Reverse(k.len()), k.as_str())))
        .min()
        .map(|(_, _, k)| k)
}

impl MockBot {
    pub fn new(role: BotRole, config: &MockConfig) -> Self {
        let canned = config
            .canned
            .iter()
            .map(|(q, a)| (normalize_question(q), a.clone()))
            .collect();
        Self {
            role,
            delay: config.delay,
            canned: Arc::new(canned),
        }
    }

    pub fn role(&self) -> BotRole {
        self.role
    }

    /// The reply this bot gives, without the simulated delay.
    pub fn reply(&self, system_prompt: &str, query: &str) -> String {
        let info = prompt_info(system_prompt);
        let text = fold_text(query);
        match self.role {
            BotRole::Manager => manager(&text, query, &info).label().to_owned(),
            BotRole::Pilot => pilot(&text, &info),
            BotRole::Explorer => explorer(&text).to_string(),
            BotRole::EncyclopediaConcise | BotRole::EncyclopediaDetailed => {
                self.encyclopedia(&text, query, &info)
            }
            BotRole::Guardian => guardian(query, &info),
        }
    }

    fn encyclopedia(&self, text: &[char], query: &str, info: &PromptInfo) -> String {
        let concise = self.role == BotRole::EncyclopediaConcise;
        if let Some(a) = self.canned.get(&normalize_question(query)) {
            return if concise {
                a.concise.clone()
            } else {
                a.detailed.clone()
            };
        }
        let model = &info.model;
        match earliest_keyword(text, &info.keywords) {
            Some(kw) if concise => format!("The {kw} is one of the parts of {model}."),
            Some(kw) => format!(
                "The {kw} is one of the parts of {model}. Ask me to show you the {kw} and I will take you there."
            ),
            None if concise => format!("That is a good question about {model}."),
            None => format!("Ask me about any part of {model} and I will tell you more."),
        }
    }
}

fn manager(text: &[char], raw: &str, info: &PromptInfo) -> Intent {
    let names_node = any(
        text,
        &info.keywords.iter().map(String::as_str).collect::<Vec<_>>(),
    );
    let first_word: String = text
        .iter()
        .skip_while(|c| !c.is_alphanumeric())
        .take_while(|c| c.is_alphanumeric() || **c == '\'')
        .collect();
    let question = raw.trim_end().ends_with('?')
        || QUESTION_OPENERS.contains(&first_word.as_str())
        || any(text, &["tell me", "explain", "describe"]);
    let nav = any(text, NAV_VERBS);
    let pilot_target =
        any(text, RESET_PHRASES) || any(text, BACK_PHRASES) || mentions(text, "level");

    if any(text, CUTTING_PHRASES) {
        Intent::CuttingPlane
    } else if any(text, VIEW_PHRASES) {
        Intent::Explorer
    } else if nav && (!question || names_node) {
        Intent::Pilot
    } else if question && (names_node || any(text, DOMAIN_TERMS)) {
        Intent::Encyclopedia
    } else if !question && (names_node || pilot_target) {
        Intent::Pilot
    } else {
        Intent::Guardian
    }
}

fn pilot(text: &[char], info: &PromptInfo) -> String {
    let names_node = info.keywords.iter().any(|k| mentions(text, k));
    if names_node {
        "1".into()
    } else if any(text, RESET_PHRASES) {
        "3".into()
    } else if any(text, BACK_PHRASES) {
        "4".into()
    } else if any(text, LEVEL_PHRASES) {
        if any(text, DOWN_PHRASES) {
            "2 down".into()
        } else {
            "2 up".into()
        }
    } else {
        "1".into()
    }
}

fn explorer(text: &[char]) -> Transform {
    let little = any(text, LITTLE_PHRASES);
    let mut t = Transform::IDENTITY;
    if any(text, ZOOM_IN) {
        t.zoom_factor = if little { 1.5 } else { 2.0 };
    } else if any(text, ZOOM_OUT) {
        t.zoom_factor = if little { 0.75 } else { 0.5 };
    }
    let quarter = if little { 45.0 } else { 90.0 };
    if any(text, TO_BACK) {
        t.yaw = 180.0;
    } else if mentions(text, "right") {
        t.yaw = quarter;
    } else if mentions(text, "left") {
        t.yaw = -quarter;
    } else if any(text, &["turn", "rotate", "spin"]) && !any(text, TO_TOP) && !any(text, TO_BOTTOM)
    {
        t.yaw = quarter;
    }
    if any(text, TO_TOP) {
        t.pitch = quarter;
    } else if any(text, TO_BOTTOM) {
        t.pitch = -quarter;
    }
    if mentions(text, "upside down") {
        t.roll = 180.0;
    } else if any(text, &["tilt", "roll"]) {
        t.roll = if little { 15.0 } else { 45.0 };
    }
    t
}

fn guardian(query: &str, info: &PromptInfo) -> String {
    let model = &info.model;
    if query.trim().is_empty() {
        format!("Let's get back to {model}: ask me about any of its parts.")
    } else {
        format!("I'm afraid I can't help with that here. Let's get back to {model}: ask me about any of its parts.")
    }
}

#[async_trait]
impl BotBackend for MockBot {
    async fn complete(
        &self,
        system_prompt: &str,
        messages: &[ChatMessage],
    ) -> Result<String, BackendError> {
        if !self.delay.is_zero() {
            tokio::time::sleep(self.delay).await;
        }
        let query = messages
            .iter()
            .rev()
            .find(|m| m.role == ChatRole::User)
            .map_or("", |m| m.content.as_str());
        Ok(self.reply(system_prompt, query))
    }
}
