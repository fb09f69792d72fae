//! Per-bot system prompts, loaded from editable text files.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scene::SceneTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BotRole {
    Manager,
    Pilot,
    Explorer,
    EncyclopediaConcise,
    EncyclopediaDetailed,
    Guardian,
}

impl BotRole {
    pub const ALL: [BotRole; 6] = [
        BotRole::Manager,
        BotRole::Pilot,
        BotRole::Explorer,
        BotRole::EncyclopediaConcise,
        BotRole::EncyclopediaDetailed,
        BotRole::Guardian,
    ];

    pub fn file_stem(self) -> &'static str {
        match self {
            BotRole::Manager => "manager",
            BotRole::Pilot => "pilot",
            BotRole::Explorer => "explorer",
            BotRole::EncyclopediaConcise => "encyclopedia_concise",
            BotRole::EncyclopediaDetailed => "encyclopedia_detailed",
            BotRole::Guardian => "guardian",
        }
    }

    fn bundled(self) -> &'static str {
        match self {
            BotRole::Manager => include_str!("../../assets/prompts/manager.txt"),
            BotRole::Pilot => include_str!("../../assets/prompts/pilot.txt"),
            BotRole::Explorer => include_str!("../../assets/prompts/explorer.txt"),
            BotRole::EncyclopediaConcise => {
                include_str!("../../assets/prompts/encyclopedia_concise.txt")
            }
            BotRole::EncyclopediaDetailed => {
                include_str!("../../assets/prompts/encyclopedia_detailed.txt")
            }
            BotRole::Guardian => include_str!("../../assets/prompts/guardian.txt"),
        }
    }
}

impl fmt::Display for BotRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_stem())
    }
}

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("reading prompt `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// What the prompts know about the loaded model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelContext {
    pub model_name: String,
    pub description: String,
    pub keywords: Vec<String>,
    pub current_node: String,
}

impl ModelContext {
    pub fn new(tree: &SceneTree, current_node: &str) -> Self {
        let root = tree.root();
        let mut keywords = Vec::new();
        for n in tree.nodes() {
            for k in [&n.name, &n.label] {
                if !keywords.contains(k) {
                    keywords.push(k.clone());
                }
            }
        }
        Self {
            model_name: tree.model_name().to_owned(),
            description: root.description.clone(),
            keywords,
            current_node: tree
                .node(current_node)
                .map_or_else(|| current_node.to_owned(), |n| n.name.clone()),
        }
    }
}

/// One system prompt per bot. Placeholders `{model}`, `{description}`,
/// `{keywords}` and `{current_node}` are filled per query; any other braces
/// are left alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptSet {
    prompts: [String; 6],
}

impl Default for PromptSet {
    fn default() -> Self {
        Self {
            prompts: BotRole::ALL.map(|r| r.bundled().to_owned()),
        }
    }
}

impl PromptSet {
    /// Reads `<stem>.txt` for every role from `dir`; missing files fall back
    /// to the bundled prompt.
    pub fn load_dir(dir: &Path) -> Result<Self, PromptError> {
        let mut set = Self::default();
        for (i, role) in BotRole::ALL.into_iter().enumerate() {
            let path = dir.join(format!("{}.txt", role.file_stem()));
            match std::fs::read_to_string(&path) {
                Ok(text) => set.prompts[i] = text,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(source) => {
                    return Err(PromptError::Io {
                        path: path.display().to_string(),
                        source,
                    })
                }
            }
        }
        Ok(set)
    }

    pub fn raw(&self, role: BotRole) -> &str {
        &self.prompts[role as usize]
    }

    pub fn set(&mut self, role: BotRole, prompt: impl Into<String>) {
        self.prompts[role as usize] = prompt.into();
    }

    pub fn render(&self, role: BotRole, ctx: &ModelContext) -> String {
        self.raw(role)
            .replace("{model}", &ctx.model_name)
            .replace("{description}", &ctx.description)
            .replace("{keywords}", &ctx.keywords.join("; "))
            .replace("{current_node}", &ctx.current_node)
    }
}
