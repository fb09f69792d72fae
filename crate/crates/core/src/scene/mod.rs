//! Hierarchical scene trees.
//!
//! A scene tree describes the ingredient hierarchy of a 3D model: every node
//! is one ingredient type (or a grouping of types) with a display label, a
//! short description that doubles as narration, instance placements and a
//! bounding sphere used for camera framing. Trees are loaded from a JSON
//! document, validated once, and are immutable afterwards so they can be
//! shared between any number of sessions.

mod document;
mod tree;

pub use document::{BoundingSphereRecord, InstanceRecord, NodeRecord, SceneDocument};
pub use tree::{
    load_scene_tree, BoundingSphere, InstancePlacement, NodeId, SceneNode, SceneTree,
    MAX_DESCRIPTION_WORDS,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("malformed scene document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid scene tree: {0}")]
    Validation(#[from] ValidationError),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("document contains no nodes")]
    Empty,
    #[error("duplicate node id `{0}`")]
    DuplicateId(String),
    #[error("name or label `{key}` is used by both `{first}` and `{second}`")]
    DuplicateName {
        key: String,
        first: String,
        second: String,
    },
    #[error("node `{node}` references missing parent `{parent}`")]
    Orphan { node: String, parent: String },
    #[error("parent links of `{0}` form a cycle")]
    Cycle(String),
    #[error("more than one root: `{0}` and `{1}`")]
    MultipleRoots(String, String),
    #[error("no root node (every node has a parent)")]
    NoRoot,
    #[error("description of `{node}` has {words} words (limit {MAX_DESCRIPTION_WORDS})")]
    DescriptionTooLong { node: String, words: usize },
    #[error("node `{0}` has an empty id, name or label")]
    EmptyField(String),
    #[error("node `{0}` has instances but a non-positive bounding radius")]
    NonPositiveRadius(String),
    #[error("node `{0}` has a non-finite coordinate")]
    NonFinite(String),
    #[error("instance {index} of `{node}` has a non-unit orientation (norm {norm})")]
    NonUnitOrientation {
        node: String,
        index: usize,
        norm: f64,
    },
}
