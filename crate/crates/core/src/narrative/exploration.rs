//! Interactive exploration: offering the sorted answer nodes two at a time.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::scene::NodeId;

use super::NarrativeError;

pub const OPTIONS_PER_ROUND: usize = 2;

/// Walks the sorted node list of one answer, offering the first nodes that
/// were neither visited nor passed over. An option that was offered but not
/// picked stays available; options the user asked to skip do not return.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplorationPlan {
    node_list: Vec<NodeId>,
    visited: Vec<NodeId>,
    skipped: Vec<NodeId>,
    options: Vec<NodeId>,
    active: bool,
}

impl ExplorationPlan {
    /// Starts a plan and computes the first round of options. Nodes in
    /// `visited` (typically the question's own focus node) are skipped.
    pub fn start(node_list: Vec<NodeId>, visited: impl IntoIterator<Item = NodeId>) -> Self {
        let mut plan = Self {
            node_list,
            visited: Vec::new(),
            skipped: Vec::new(),
            options: Vec::new(),
            active: true,
        };
        for v in visited {
            plan.mark_visited(v);
        }
        plan.refresh();
        plan
    }

    fn mark_visited(&mut self, node: NodeId) {
        if !self.visited.contains(&node) {
            self.visited.push(node);
        }
    }

    fn refresh(&mut self) {
        let done: HashSet<&NodeId> = self.visited.iter().chain(&self.skipped).collect();
        self.options = self
            .node_list
            .iter()
            .filter(|n| !done.contains(n))
            .take(OPTIONS_PER_ROUND)
            .cloned()
            .collect();
        if self.options.is_empty() {
            self.active = false;
        }
    }

    pub fn node_list(&self) -> &[NodeId] {
        &self.node_list
    }

    pub fn options(&self) -> &[NodeId] {
        &self.options
    }

    /// Visited nodes in visiting order.
    pub fn visited(&self) -> &[NodeId] {
        &self.visited
    }

    pub fn is_active(&self) -> bool {
        self.active
    }

    /// Passes over the current options and offers the following ones. The
    /// plan ends when none remain.
    pub fn next_options(&mut self) -> &[NodeId] {
        if !self.active {
            self.options.clear();
            return &self.options;
        }
        let passed = std::mem::take(&mut self.options);
        self.skipped.extend(passed);
        self.refresh();
        &self.options
    }

    /// Picks one of the current options (0-based), marks it visited and
    /// offers the next round.
    pub fn select(&mut self, index: usize) -> Result<NodeId, NarrativeError> {
        if !self.active || self.options.is_empty() {
            return Err(NarrativeError::NoPendingOptions);
        }
        let node = self
            .options
            .get(index)
            .cloned()
            .ok_or(NarrativeError::IndexOutOfRange {
                index,
                len: self.options.len(),
            })?;
        self.mark_visited(node.clone());
        self.refresh();
        Ok(node)
    }

    pub fn end(&mut self) {
        self.active = false;
        self.options.clear();
    }
}
