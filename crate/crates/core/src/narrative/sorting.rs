//! Node ordering from keyword hits.
//!
//! Each node gets the smallest hit index found anywhere in its subtree. A
//! depth-first walk from the root then visits children in ascending order of
//! that value and emits every node that was mentioned, so a whole branch is
//! explored before the next branch whose first mention comes later.

use std::collections::HashMap;

use crate::scene::{NodeId, SceneTree};

use super::keywords::{detect_keywords, KeywordHits};

/// Per-query minimum hit index of every node's subtree. Kept outside the
/// tree so the tree can stay shared and immutable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkingIndexMap {
    values: HashMap<NodeId, usize>,
}

impl WorkingIndexMap {
    /// Sentinel for subtrees without any hit.
    pub const UNTOUCHED: usize = usize::MAX;

    /// `None` when nothing in the node's subtree was mentioned.
    pub fn get(&self, id: &str) -> Option<usize> {
        self.values
            .get(id)
            .copied()
            .filter(|v| *v != Self::UNTOUCHED)
    }

    fn key(&self, id: &NodeId) -> usize {
        self.values.get(id).copied().unwrap_or(Self::UNTOUCHED)
    }
}

/// Pre-order listing of the tree, iteratively, children in document order.
fn preorder(tree: &SceneTree) -> Vec<&NodeId> {
    let mut out = Vec::with_capacity(tree.len());
    let mut stack = vec![tree.root_id()];
    while let Some(id) = stack.pop() {
        out.push(id);
        if let Some(node) = tree.node(id.as_str()) {
            stack.extend(node.child_ids.iter().rev());
        }
    }
    out
}

pub fn update_minimum_index(tree: &SceneTree, hits: &KeywordHits) -> WorkingIndexMap {
    let mut values: HashMap<NodeId, usize> = HashMap::with_capacity(tree.len());
    // Reverse pre-order visits every child before its parent.
    for id in preorder(tree).into_iter().rev() {
        let node = tree.node(id.as_str()).expect("pre-order yields tree nodes");
        let own = hits.get(id.as_str()).unwrap_or(WorkingIndexMap::UNTOUCHED);
        let min = node
            .child_ids
            .iter()
            .map(|c| values[c])
            .fold(own, usize::min);
        values.insert(id.clone(), min);
    }
    WorkingIndexMap { values }
}

/// Orders the mentioned nodes for exploration, using an already computed
/// working map.
pub fn sort_nodes_with(
    tree: &SceneTree,
    hits: &KeywordHits,
    working: &WorkingIndexMap,
) -> Vec<NodeId> {
    let mut result = Vec::with_capacity(hits.len());
    let mut stack = vec![tree.root_id()];
    while let Some(id) = stack.pop() {
        if hits.contains(id.as_str()) {
            result.push(id.clone());
        }
        let Some(node) = tree.node(id.as_str()) else {
            continue;
        };
        let mut children: Vec<&NodeId> = node.child_ids.iter().collect();
        // Stable: untouched siblings keep document order.
        children.sort_by_key(|c| working.key(c));
        stack.extend(children.into_iter().rev());
    }
    result
}

pub fn sort_nodes(tree: &SceneTree, hits: &KeywordHits) -> Vec<NodeId> {
    let working = update_minimum_index(tree, hits);
    sort_nodes_with(tree, hits, &working)
}

/// Keyword detection followed by node sorting.
pub fn node_sorting(text: &str, tree: &SceneTree) -> Vec<NodeId> {
    sort_nodes(tree, &detect_keywords(text, tree))
}

/// The deepest node mentioned in `question`; ties go to the earlier mention.
pub fn select_focus_node(question: &str, tree: &SceneTree) -> Option<NodeId> {
    let hits = detect_keywords(question, tree);
    hits.iter()
        .filter_map(|(id, idx)| tree.depth(id.as_str()).ok().map(|d| (id, idx, d)))
        .max_by(|a, b| a.2.cmp(&b.2).then_with(|| b.1.cmp(&a.1)))
        .map(|(id, _, _)| id.clone())
}
