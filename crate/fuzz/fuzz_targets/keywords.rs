#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use voice_core::narrative::{detect_keywords, node_sorting, select_focus_node};
use voice_core::router::normalize_question;
use voice_core::scene::SceneTree;

static TREE: OnceLock<SceneTree> = OnceLock::new();

fuzz_target!(|data: &str| {
    let tree = TREE.get_or_init(|| {
        SceneTree::from_json_str(include_str!("../../crates/core/fixtures/t4.json")).unwrap()
    });
    let hits = detect_keywords(data, tree);
    let sorted = node_sorting(data, tree);
    assert_eq!(sorted.len(), hits.len());
    let _ = select_focus_node(data, tree);
    let _ = normalize_question(data);
});
