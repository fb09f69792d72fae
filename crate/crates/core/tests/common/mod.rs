#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use voice_core::scene::{
    load_scene_tree, BoundingSphereRecord, InstanceRecord, NodeRecord, SceneDocument, SceneTree,
};

pub const T4_PARAGRAPH: &str = "The T4 bacteriophage is a complex virus that infects bacterial cells. It is composed of multiple protein structures, examples being HOC in the head, or capsid proteins, which protect the genetic material of the virus. Structures like the baseplate, which attaches to the host cell's surface and injects the viral DNA, are located in the tail of the Virus";

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> Arc<SceneTree> {
    let file = std::fs::File::open(fixture_path(name)).expect("fixture exists");
    Arc::new(load_scene_tree(file).expect("fixture is valid"))
}

pub fn record(id: &str, parent: Option<&str>, center: [f64; 3], radius: f64) -> NodeRecord {
    NodeRecord {
        id: id.to_owned(),
        name: id.to_owned(),
        label: id.to_owned(),
        parent_id: parent.map(str::to_owned),
        description: format!("About {id}."),
        instance_count: 1,
        instances: vec![InstanceRecord {
            position: center,
            orientation: [1.0, 0.0, 0.0, 0.0],
        }],
        bounding_sphere: BoundingSphereRecord { center, radius },
    }
}

/// A tree where node `i > 0` hangs under `parents[i - 1] % i`. Names are
/// `n0`, `n1`, ... so none is a substring word of another.
pub fn tree_from_parents(parents: &[usize]) -> SceneTree {
    let mut nodes = vec![record("n0", None, [0.0; 3], 10.0)];
    for (k, p) in parents.iter().enumerate() {
        let i = k + 1;
        let parent = format!("n{}", p % i);
        let center = [i as f64, (i * 2) as f64, -(i as f64)];
        nodes.push(record(
            &format!("n{i}"),
            Some(&parent),
            center,
            1.0 + i as f64 / 10.0,
        ));
    }
    SceneTree::from_document(SceneDocument {
        model_name: "random".into(),
        nodes,
    })
    .expect("generated tree is valid")
}
