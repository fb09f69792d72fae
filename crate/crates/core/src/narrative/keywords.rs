//! First-occurrence keyword spotting of scene-tree names in free text.

use std::collections::BTreeMap;

use crate::scene::{NodeId, SceneTree};

/// Node → 1-based character offset of its first mention.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeywordHits(BTreeMap<NodeId, usize>);

impl KeywordHits {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, id: &str) -> Option<usize> {
        self.0.get(id).copied()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.0.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, usize)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }

    /// Keeps the smaller index when the node is already present.
    pub fn record(&mut self, id: NodeId, index: usize) {
        self.0
            .entry(id)
            .and_modify(|i| *i = (*i).min(index))
            .or_insert(index);
    }

    /// Hit nodes ordered by first mention, ties by id.
    pub fn by_position(&self) -> Vec<(&NodeId, usize)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(b.0)));
        v
    }
}

impl FromIterator<(NodeId, usize)> for KeywordHits {
    fn from_iter<I: IntoIterator<Item = (NodeId, usize)>>(iter: I) -> Self {
        let mut hits = Self::new();
        for (id, idx) in iter {
            hits.record(id, idx);
        }
        hits
    }
}

/// Lowercases one char at a time so character offsets stay aligned with the
/// original text.
fn fold_char(c: char) -> char {
    let mut lower = c.to_lowercase();
    match (lower.next(), lower.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric()
}

fn matches_at(text: &[char], at: usize, key: &[char]) -> bool {
    if at + key.len() > text.len() {
        return false;
    }
    key.iter().zip(&text[at..]).all(|(k, t)| {
        if k.is_whitespace() {
            t.is_whitespace()
        } else {
            k == t
        }
    })
}

/// Whether the mention ending at `end` stops at a word boundary, allowing a
/// single plural `s`.
fn ends_word(text: &[char], end: usize) -> bool {
    match text.get(end) {
        None => true,
        Some(&'s') => text.get(end + 1).is_none_or(|c| !is_word(*c)),
        Some(c) => !is_word(*c),
    }
}

/// 0-based char position of the first whole-word, plural-tolerant match.
pub(crate) fn first_match(text: &[char], key: &[char]) -> Option<usize> {
    if key.is_empty() || key.len() > text.len() {
        return None;
    }
    let starts_word = key.first().is_some_and(|c| is_word(*c));
    let ends_in_word = key.last().is_some_and(|c| is_word(*c));
    (0..=text.len() - key.len()).find(|&at| {
        (!starts_word || at == 0 || !is_word(text[at - 1]))
            && matches_at(text, at, key)
            && (!ends_in_word || ends_word(text, at + key.len()))
    })
}

pub(crate) fn fold_text(text: &str) -> Vec<char> {
    text.chars().map(fold_char).collect()
}

/// 0-based position of the first whole-word, case-insensitive mention of
/// `phrase` in folded `text`.
pub(crate) fn position(text: &[char], phrase: &str) -> Option<usize> {
    first_match(text, &fold_text(phrase))
}

pub(crate) fn mentions(text: &[char], phrase: &str) -> bool {
    position(text, phrase).is_some()
}

/// Maps every node whose name or label occurs in `text` to the 1-based
/// character offset of its earliest mention.
pub fn detect_keywords(text: &str, tree: &SceneTree) -> KeywordHits {
    let folded = fold_text(text);
    let mut hits = KeywordHits::new();
    if folded.is_empty() {
        return hits;
    }
    for (key, id) in tree.keywords() {
        let key: Vec<char> = key.chars().map(fold_char).collect();
        if let Some(at) = first_match(&folded, &key) {
            hits.record(id.clone(), at + 1);
        }
    }
    hits
}
