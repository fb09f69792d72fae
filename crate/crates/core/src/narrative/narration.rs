//! Templated narration, picked at random per utterance.
//!
//! Templates are plain strings with named slots: `{node}`, `{options}`,
//! `{direction}` and `{model}`. A template file maps each task type to a
//! list of alternatives; one is drawn uniformly with a seeded generator.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TEMPLATES: &str = include_str!("../../assets/narration.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskType {
    Introduction,
    Help,
    Transition,
    ExplorerAck,
    PilotAck,
    CuttingAck,
    OptionPrompt,
    DetailPrompt,
    Apology,
    NotFound,
    Boundary,
    NothingBack,
    ExplorationEnd,
}

impl TaskType {
    pub const ALL: [TaskType; 13] = [
        TaskType::Introduction,
        TaskType::Help,
        TaskType::Transition,
        TaskType::ExplorerAck,
        TaskType::PilotAck,
        TaskType::CuttingAck,
        TaskType::OptionPrompt,
        TaskType::DetailPrompt,
        TaskType::Apology,
        TaskType::NotFound,
        TaskType::Boundary,
        TaskType::NothingBack,
        TaskType::ExplorationEnd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskType::Introduction => "introduction",
            TaskType::Help => "help",
            TaskType::Transition => "transition",
            TaskType::ExplorerAck => "explorer-ack",
            TaskType::PilotAck => "pilot-ack",
            TaskType::CuttingAck => "cutting-ack",
            TaskType::OptionPrompt => "option-prompt",
            TaskType::DetailPrompt => "detail-prompt",
            TaskType::Apology => "apology",
            TaskType::NotFound => "not-found",
            TaskType::Boundary => "boundary",
            TaskType::NothingBack => "nothing-back",
            TaskType::ExplorationEnd => "exploration-end",
        }
    }
}

impl fmt::Display for TaskType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskType {
    type Err = NarrationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TaskType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| NarrationError::UnknownTaskType(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NarrationError {
    #[error("unknown narration task type `{0}`")]
    UnknownTaskType(String),
    #[error("no templates for task type `{0}`")]
    NoTemplates(TaskType),
    #[error("malformed template file: {0}")]
    Parse(String),
    #[error("template `{template}`: {reason}")]
    BadTemplate { template: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Node,
    Options,
    Direction,
    Model,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    Text(String),
    Slot(Slot),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    source: String,
    segments: Vec<Segment>,
}

impl Template {
    pub fn parse(source: &str) -> Result<Self, NarrationError> {
        let bad = |reason: &str| NarrationError::BadTemplate {
            template: source.to_owned(),
            reason: reason.to_owned(),
        };
        let mut segments = Vec::new();
        let mut rest = source;
        while let Some(open) = rest.find(['{', '}']) {
            if rest.as_bytes()[open] == b'}' {
                return Err(bad("unmatched `}`"));
            }
            if open > 0 {
                segments.push(Segment::Text(rest[..open].to_owned()));
            }
            let after = &rest[open + 1..];
            let close = after.find('}').ok_or_else(|| bad("unclosed `{`"))?;
            let slot = match &after[..close] {
                "node" => Slot::Node,
                "options" => Slot::Options,
                "direction" => Slot::Direction,
                "model" => Slot::Model,
                other => return Err(bad(&format!("unknown slot `{other}`"))),
            };
            segments.push(Segment::Slot(slot));
            rest = &after[close + 1..];
        }
        if !rest.is_empty() {
            segments.push(Segment::Text(rest.to_owned()));
        }
        Ok(Self {
            source: source.to_owned(),
            segments,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn render(&self, payload: &NarrationPayload) -> String {
        let mut out = String::new();
        for seg in &self.segments {
            match seg {
                Segment::Text(t) => out.push_str(t),
                Segment::Slot(Slot::Node) => {
                    out.push_str(payload.node.as_deref().unwrap_or("this structure"))
                }
                Segment::Slot(Slot::Options) => out.push_str(&join_options(&payload.options)),
                Segment::Slot(Slot::Direction) => {
                    out.push_str(payload.direction.as_deref().unwrap_or("around"))
                }
                Segment::Slot(Slot::Model) => {
                    out.push_str(payload.model.as_deref().unwrap_or("this model"))
                }
            }
        }
        out
    }
}

/// "a", "a or b", "a, b or c".
pub fn join_options(options: &[String]) -> String {
    match options {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} or {}", init.join(", "), last),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NarrationPayload {
    pub node: Option<String>,
    pub options: Vec<String>,
    pub direction: Option<String>,
    pub model: Option<String>,
}

impl NarrationPayload {
    pub fn node(name: impl Into<String>) -> Self {
        Self {
            node: Some(name.into()),
            ..Self::default()
        }
    }

    pub fn options<S: Into<String>>(options: impl IntoIterator<Item = S>) -> Self {
        Self {
            options: options.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn with_model(mut self, model: impl Into<String>) -> Self {
        self.model = Some(model.into());
        self
    }

    pub fn with_direction(mut self, direction: impl Into<String>) -> Self {
        self.direction = Some(direction.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NarrationTemplates {
    templates: HashMap<TaskType, Vec<Template>>,
}

impl Default for NarrationTemplates {
    fn default() -> Self {
        Self::from_json(DEFAULT_TEMPLATES).expect("bundled narration templates are valid")
    }
}

impl NarrationTemplates {
    pub fn from_json(source: &str) -> Result<Self, NarrationError> {
        let raw: HashMap<String, Vec<String>> =
            serde_json::from_str(source).map_err(|e| NarrationError::Parse(e.to_string()))?;
        let mut templates = HashMap::with_capacity(raw.len());
        for (key, list) in raw {
            let task: TaskType = key.parse()?;
            let parsed = list
                .iter()
                .map(|s| Template::parse(s))
                .collect::<Result<Vec<_>, _>>()?;
            templates.insert(task, parsed);
        }
        Ok(Self { templates })
    }

    pub fn templates(&self, task: TaskType) -> &[Template] {
        self.templates.get(&task).map_or(&[], Vec::as_slice)
    }

    /// Draws one template uniformly using `seed` and fills its slots.
    pub fn generate(
        &self,
        task: TaskType,
        payload: &NarrationPayload,
        seed: u64,
    ) -> Result<String, NarrationError> {
        let list = self.templates(task);
        if list.is_empty() {
            return Err(NarrationError::NoTemplates(task));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = rng.random_range(0..list.len());
        Ok(list[pick].render(payload))
    }
}

/// String-keyed entry point for callers that carry the task type as text.
pub fn generate_narration(
    templates: &NarrationTemplates,
    task_type: &str,
    payload: &NarrationPayload,
    seed: u64,
) -> Result<String, NarrationError> {
    templates.generate(task_type.parse()?, payload, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_slots() {
        let t = Template::parse("Go to {node} or {options}?").unwrap();
        let p = NarrationPayload {
            node: Some("head".into()),
            options: vec!["T4".into(), "head".into()],
            ..Default::default()
        };
        assert_eq!(t.render(&p), "Go to head or T4 or head?");
    }

    #[test]
    fn rejects_bad_templates() {
        assert!(Template::parse("{nodes}").is_err());
        assert!(Template::parse("open {node").is_err());
        assert!(Template::parse("close }").is_err());
        assert!(Template::parse("").is_ok());
    }

    #[test]
    fn unknown_task_type() {
        let t = NarrationTemplates::default();
        assert_eq!(
            generate_narration(&t, "weather", &NarrationPayload::default(), 1),
            Err(NarrationError::UnknownTaskType("weather".into()))
        );
        assert!(NarrationTemplates::from_json(r#"{"weather": ["x"]}"#).is_err());
    }

    #[test]
    fn bundled_templates_cover_every_task() {
        let t = NarrationTemplates::default();
        for task in TaskType::ALL {
            assert!(!t.templates(task).is_empty(), "{task}");
        }
    }

    #[test]
    fn option_join() {
        assert_eq!(join_options(&[]), "");
        assert_eq!(join_options(&["a".into()]), "a");
        assert_eq!(
            join_options(&["a".into(), "b".into(), "c".into()]),
            "a, b or c"
        );
    }
}
