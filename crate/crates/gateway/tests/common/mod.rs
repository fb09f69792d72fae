#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::body::{to_bytes, Body};
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use serde_json::{json, Value};
use tower::ServiceExt;
use voice_core::narrative::NarrationTemplates;
use voice_core::router::{BotSet, MockConfig};
use voice_core::scene::load_scene_tree;
use voice_core::session::SessionOptions;
use voice_gateway::Gateway;

pub const T4_PARAGRAPH: &str = "The T4 bacteriophage is a complex virus that infects bacterial cells. It is composed of multiple protein structures, examples being HOC in the head, or capsid proteins, which protect the genetic material of the virus. Structures like the baseplate, which attaches to the host cell's surface and injects the viral DNA, are located in the tail of the Virus";

pub const HEAD_QUESTION: &str = "What is the head?";
pub const HEAD_CONCISE: &str =
    "The head is the protein shell that stores the phage DNA. Its surface is tiled with capsid protein and studded with HOC.";
pub const HEAD_DETAILED: &str = "The head is an elongated icosahedron about 120 nanometres long. Hundreds of copies of the major capsid protein form its lattice, and the outer capsid protein HOC binds on top of that lattice.";
pub const VIRUS_QUESTION: &str = "What is this virus made of?";

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(format!("{name}.json"))
}

pub fn mock_config(delay_ms: u64) -> MockConfig {
    MockConfig::default()
        .with_delay(Duration::from_millis(delay_ms))
        .with_answer(HEAD_QUESTION, HEAD_CONCISE, HEAD_DETAILED)
        .with_answer(VIRUS_QUESTION, T4_PARAGRAPH, T4_PARAGRAPH)
}

pub fn gateway_with(mock: &MockConfig) -> Gateway {
    let mut models = BTreeMap::new();
    for name in ["t4", "sars-cov-2", "hiv"] {
        let file = std::fs::File::open(fixture_path(name)).unwrap();
        models.insert(name.to_owned(), Arc::new(load_scene_tree(file).unwrap()));
    }
    let options = SessionOptions {
        seed: 7,
        words_per_second: 2.5,
        auto_speech: true,
    };
    Gateway::new(
        models,
        Arc::new(NarrationTemplates::default()),
        BotSet::mock(mock),
        options,
    )
}

pub fn gateway() -> Arc<Gateway> {
    Arc::new(gateway_with(&mock_config(0)))
}

pub struct Schema {
    defs: Value,
}

impl Schema {
    pub fn load() -> Self {
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/gateway.schema.json");
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        Self {
            defs: doc["$defs"].clone(),
        }
    }

    pub fn check(&self, def: &str, instance: &Value) {
        let schema = json!({
            "$schema": "https://json-schema.org/draft/2020-12/schema",
            "$ref": format!("#/$defs/{def}"),
            "$defs": self.defs,
        });
        let validator = jsonschema::validator_for(&schema).unwrap();
        let errors: Vec<String> = validator
            .iter_errors(instance)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{def}: {errors:?}\n{instance:#}");
    }
}

pub async fn call(
    app: &Router,
    method: Method,
    uri: &str,
    body: Option<Value>,
) -> (StatusCode, Value) {
    let request = Request::builder().method(method).uri(uri);
    let request = match body {
        Some(b) => request
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => request.body(Body::empty()),
    }
    .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = to_bytes(response.into_body(), usize::MAX).await.unwrap();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}
