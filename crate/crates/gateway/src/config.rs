//! Gateway configuration, read from a TOML file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use voice_core::router::{BotRole, MockConfig, RemoteConfig};

use crate::GatewayError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Model name to scene-tree JSON file.
    pub models: BTreeMap<String, PathBuf>,
    #[serde(default)]
    pub backend: BackendConfig,
    /// Words per second used to estimate how long narration takes to speak.
    #[serde(default = "default_spoken_rate")]
    pub spoken_rate: f64,
    #[serde(default = "default_tick_hz")]
    pub tick_hz: f64,
    #[serde(default = "default_idle_timeout")]
    pub idle_timeout_secs: u64,
    #[serde(default)]
    pub seed: u64,
    /// Directory with one `<role>.txt` prompt per bot. Bundled prompts fill
    /// in for missing files.
    #[serde(default)]
    pub prompts_dir: Option<PathBuf>,
    /// Narration template JSON; the bundled set when absent.
    #[serde(default)]
    pub narration: Option<PathBuf>,
    #[serde(default)]
    pub mock: MockSection,
}

fn default_spoken_rate() -> f64 {
    voice_core::session::DEFAULT_WORDS_PER_SECOND
}

fn default_tick_hz() -> f64 {
    20.0
}

fn default_idle_timeout() -> u64 {
    1800
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    #[default]
    Mock,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendConfig {
    #[serde(default)]
    pub kind: BackendKind,
    #[serde(default)]
    pub base_url: String,
    /// Default model for every bot.
    #[serde(default)]
    pub model: String,
    /// Per-bot overrides keyed by prompt file stem, e.g. `manager`.
    #[serde(default)]
    pub models: BTreeMap<String, String>,
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    #[serde(default = "default_retries")]
    pub retries: u32,
}

fn default_timeout() -> f64 {
    30.0
}

fn default_retries() -> u32 {
    1
}

impl Default for BackendConfig {
    fn default() -> Self {
        Self {
            kind: BackendKind::Mock,
            base_url: String::new(),
            model: String::new(),
            models: BTreeMap::new(),
            api_key_env: None,
            timeout_secs: default_timeout(),
            retries: default_retries(),
        }
    }
}

impl BackendConfig {
    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }

    pub fn remote_for(&self, role: BotRole) -> RemoteConfig {
        let model = self
            .models
            .get(role.file_stem())
            .cloned()
            .unwrap_or_else(|| self.model.clone());
        let mut remote = RemoteConfig::new(self.base_url.clone(), model);
        remote.api_key_env = self.api_key_env.clone();
        remote.timeout = self.timeout();
        remote.retries = self.retries;
        remote
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockSection {
    #[serde(default)]
    pub delay_ms: u64,
    #[serde(default)]
    pub answers: Vec<CannedAnswer>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CannedAnswer {
    pub question: String,
    pub concise: String,
    #[serde(default)]
    pub detailed: String,
}

impl MockSection {
    pub fn to_mock_config(&self) -> MockConfig {
        self.answers.iter().fold(
            MockConfig::default().with_delay(Duration::from_millis(self.delay_ms)),
            |cfg, a| cfg.with_answer(&a.question, &a.concise, &a.detailed),
        )
    }
}

impl Config {
    pub fn from_toml(source: &str) -> Result<Self, GatewayError> {
        let config: Config =
            toml::from_str(source).map_err(|e| GatewayError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file; relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self, GatewayError> {
        let source = std::fs::read_to_string(path)
            .map_err(|e| GatewayError::Config(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_toml(&source)?;
        if let Some(dir) = path.parent() {
            config.rebase(dir);
        }
        Ok(config)
    }

    pub fn rebase(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        self.models.values_mut().for_each(fix);
        if let Some(p) = &mut self.prompts_dir {
            fix(p);
        }
        if let Some(p) = &mut self.narration {
            fix(p);
        }
    }

    fn validate(&self) -> Result<(), GatewayError> {
        let bad = |m: &str| Err(GatewayError::Config(m.to_owned()));
        if !(self.spoken_rate.is_finite() && self.spoken_rate > 0.0) {
            return bad("spoken_rate must be positive");
        }
        if !(self.tick_hz.is_finite() && self.tick_hz > 0.0) {
            return bad("tick_hz must be positive");
        }
        if !(self.backend.timeout_secs.is_finite() && self.backend.timeout_secs > 0.0) {
            return bad("backend.timeout_secs must be positive");
        }
        if self.backend.kind == BackendKind::Remote && self.backend.base_url.is_empty() {
            return bad("remote backend needs base_url");
        }
        for role in self.backend.models.keys() {
            if !BotRole::ALL.iter().any(|r| r.file_stem() == role) {
                return Err(GatewayError::Config(format!(
                    "unknown bot `{role}` in backend.models"
                )));
            }
        }
        Ok(())
    }

    pub fn idle_timeout(&self) -> Duration {
        Duration::from_secs(self.idle_timeout_secs)
    }
}
