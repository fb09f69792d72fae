use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;
use std::io::Read;

use indexmap::IndexMap;
use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use super::document::{BoundingSphereRecord, InstanceRecord, NodeRecord, SceneDocument};
use super::{SceneError, ValidationError};

pub const MAX_DESCRIPTION_WORDS: usize = 25;

const ORIENTATION_TOLERANCE: f64 = 1e-6;

/// Opaque node identifier, unique within one tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstancePlacement {
    pub position: Vector3<f64>,
    pub orientation: UnitQuaternion<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingSphere {
    pub center: Vector3<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneNode {
    pub id: NodeId,
    pub name: String,
    pub label: String,
    pub parent_id: Option<NodeId>,
    /// Children in document order.
    pub child_ids: Vec<NodeId>,
    pub description: String,
    pub instance_count: u64,
    pub instances: Vec<InstancePlacement>,
    pub bounding_sphere: BoundingSphere,
}

impl SceneNode {
    pub fn is_leaf(&self) -> bool {
        self.child_ids.is_empty()
    }
}

/// A validated, immutable scene hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneTree {
    model_name: String,
    root_id: NodeId,
    nodes: IndexMap<NodeId, SceneNode>,
    name_index: HashMap<String, NodeId>,
    label_index: HashMap<String, NodeId>,
}

/// Parses and validates a scene-tree document.
pub fn load_scene_tree<R: Read>(source: R) -> Result<SceneTree, SceneError> {
    let doc: SceneDocument = serde_json::from_reader(source)?;
    Ok(SceneTree::from_document(doc)?)
}

pub(crate) fn fold_key(s: &str) -> String {
    s.trim().to_lowercase()
}

fn finite3(v: &[f64; 3]) -> bool {
    v.iter().all(|c| c.is_finite())
}

impl SceneTree {
    pub fn from_json_str(s: &str) -> Result<Self, SceneError> {
        load_scene_tree(s.as_bytes())
    }

    pub fn from_document(doc: SceneDocument) -> Result<Self, ValidationError> {
        if doc.nodes.is_empty() {
            return Err(ValidationError::Empty);
        }

        let mut nodes: IndexMap<NodeId, SceneNode> = IndexMap::with_capacity(doc.nodes.len());
        for record in doc.nodes {
            let node = validate_record(record)?;
            if nodes.contains_key(&node.id) {
                return Err(ValidationError::DuplicateId(node.id.0));
            }
            nodes.insert(node.id.clone(), node);
        }

        // Names and labels share one key space so that a mention can never
        // resolve to two different nodes.
        let mut keys: HashMap<String, NodeId> = HashMap::new();
        let mut name_index = HashMap::with_capacity(nodes.len());
        let mut label_index = HashMap::with_capacity(nodes.len());
        for node in nodes.values() {
            for text in [&node.name, &node.label] {
                let key = fold_key(text);
                match keys.get(&key) {
                    Some(owner) if *owner != node.id => {
                        return Err(ValidationError::DuplicateName {
                            key,
                            first: owner.0.clone(),
                            second: node.id.0.clone(),
                        });
                    }
                    Some(_) => {}
                    None => {
                        keys.insert(key, node.id.clone());
                    }
                }
            }
            name_index.insert(fold_key(&node.name), node.id.clone());
            label_index.insert(fold_key(&node.label), node.id.clone());
        }

        for node in nodes.values() {
            if let Some(parent) = &node.parent_id {
                if parent == &node.id {
                    return Err(ValidationError::Cycle(node.id.0.clone()));
                }
                if !nodes.contains_key(parent) {
                    return Err(ValidationError::Orphan {
                        node: node.id.0.clone(),
                        parent: parent.0.clone(),
                    });
                }
            }
        }
        check_acyclic(&nodes)?;

        let mut root: Option<NodeId> = None;
        for node in nodes.values() {
            if node.parent_id.is_none() {
                if let Some(first) = &root {
                    return Err(ValidationError::MultipleRoots(
                        first.0.clone(),
                        node.id.0.clone(),
                    ));
                }
                root = Some(node.id.clone());
            }
        }
        let root_id = root.ok_or(ValidationError::NoRoot)?;

        let links: Vec<(NodeId, NodeId)> = nodes
            .values()
            .filter_map(|n| n.parent_id.clone().map(|p| (p, n.id.clone())))
            .collect();
        for (parent, child) in links {
            nodes[&parent].child_ids.push(child);
        }

        Ok(Self {
            model_name: doc.model_name,
            root_id,
            nodes,
            name_index,
            label_index,
        })
    }

    /// Serializes back to the document form; node order is preserved.
    pub fn to_document(&self) -> SceneDocument {
        let nodes = self
            .nodes
            .values()
            .map(|n| NodeRecord {
                id: n.id.0.clone(),
                name: n.name.clone(),
                label: n.label.clone(),
                parent_id: n.parent_id.as_ref().map(|p| p.0.clone()),
                description: n.description.clone(),
                instance_count: n.instance_count,
                instances: n
                    .instances
                    .iter()
                    .map(|i| {
                        let q = i.orientation.quaternion();
                        InstanceRecord {
                            position: [i.position.x, i.position.y, i.position.z],
                            orientation: [q.w, q.i, q.j, q.k],
                        }
                    })
                    .collect(),
                bounding_sphere: BoundingSphereRecord {
                    center: [
                        n.bounding_sphere.center.x,
                        n.bounding_sphere.center.y,
                        n.bounding_sphere.center.z,
                    ],
                    radius: n.bounding_sphere.radius,
                },
            })
            .collect();
        SceneDocument {
            model_name: self.model_name.clone(),
            nodes,
        }
    }

    pub fn model_name(&self) -> &str {
        &self.model_name
    }

    pub fn root_id(&self) -> &NodeId {
        &self.root_id
    }

    pub fn root(&self) -> &SceneNode {
        &self.nodes[&self.root_id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.values().filter(|n| n.is_leaf()).count()
    }

    /// Nodes in document order.
    pub fn nodes(&self) -> impl Iterator<Item = &SceneNode> {
        self.nodes.values()
    }

    pub fn node(&self, id: &str) -> Option<&SceneNode> {
        self.nodes.get(id)
    }

    pub fn get(&self, id: &str) -> Result<&SceneNode, SceneError> {
        self.node(id)
            .ok_or_else(|| SceneError::UnknownNode(id.to_owned()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    /// Position of the node in document order.
    pub fn ordinal(&self, id: &str) -> Option<usize> {
        self.nodes.get_index_of(id)
    }

    /// Case-insensitive lookup on name or label. A single trailing `s` is
    /// stripped and the lookup retried, so "capsid proteins" finds
    /// "capsid protein".
    pub fn find_node(&self, mention: &str) -> Option<&NodeId> {
        let key = fold_key(mention);
        if key.is_empty() {
            return None;
        }
        let lookup = |k: &str| self.name_index.get(k).or_else(|| self.label_index.get(k));
        lookup(&key).or_else(|| {
            key.strip_suffix('s')
                .filter(|k| !k.is_empty())
                .and_then(lookup)
        })
    }

    /// The node itself first, the root last.
    pub fn path_to_root(&self, id: &str) -> Result<Vec<NodeId>, SceneError> {
        let mut node = self.get(id)?;
        let mut path = vec![node.id.clone()];
        while let Some(parent) = &node.parent_id {
            node = &self.nodes[parent];
            path.push(node.id.clone());
        }
        Ok(path)
    }

    pub fn depth(&self, id: &str) -> Result<usize, SceneError> {
        Ok(self.path_to_root(id)?.len() - 1)
    }

    /// Every (folded key, node) pair that keyword detection should match:
    /// the name and, when it differs, the label.
    pub fn keywords(&self) -> impl Iterator<Item = (String, &NodeId)> {
        self.nodes.values().flat_map(|n| {
            let name = fold_key(&n.name);
            let label = fold_key(&n.label);
            let label = (label != name).then_some(label);
            std::iter::once((name, &n.id)).chain(label.map(|l| (l, &n.id)))
        })
    }

    /// Names of all nodes in document order.
    pub fn node_names(&self) -> Vec<&str> {
        self.nodes.values().map(|n| n.name.as_str()).collect()
    }
}

fn validate_record(record: NodeRecord) -> Result<SceneNode, ValidationError> {
    if record.id.trim().is_empty()
        || record.name.trim().is_empty()
        || record.label.trim().is_empty()
    {
        return Err(ValidationError::EmptyField(record.id));
    }
    let words = record.description.split_whitespace().count();
    if words > MAX_DESCRIPTION_WORDS {
        return Err(ValidationError::DescriptionTooLong {
            node: record.id,
            words,
        });
    }
    let sphere = &record.bounding_sphere;
    if !finite3(&sphere.center) || !sphere.radius.is_finite() || sphere.radius < 0.0 {
        return Err(ValidationError::NonFinite(record.id));
    }
    if record.instance_count > 0 && sphere.radius <= 0.0 {
        return Err(ValidationError::NonPositiveRadius(record.id));
    }

    let mut instances = Vec::with_capacity(record.instances.len());
    for (index, inst) in record.instances.iter().enumerate() {
        if !finite3(&inst.position) || !inst.orientation.iter().all(|c| c.is_finite()) {
            return Err(ValidationError::NonFinite(record.id));
        }
        let [w, x, y, z] = inst.orientation;
        let q = Quaternion::new(w, x, y, z);
        let norm = q.norm();
        if (norm - 1.0).abs() > ORIENTATION_TOLERANCE {
            return Err(ValidationError::NonUnitOrientation {
                node: record.id,
                index,
                norm,
            });
        }
        instances.push(InstancePlacement {
            position: Vector3::from(inst.position),
            orientation: UnitQuaternion::new_unchecked(q),
        });
    }

    Ok(SceneNode {
        id: NodeId(record.id),
        name: record.name,
        label: record.label,
        parent_id: record.parent_id.map(NodeId),
        child_ids: Vec::new(),
        description: record.description,
        instance_count: record.instance_count,
        instances,
        bounding_sphere: BoundingSphere {
            center: Vector3::from(sphere.center),
            radius: sphere.radius,
        },
    })
}

/// Walks parent links with three-colour marking; linear in the node count.
fn check_acyclic(nodes: &IndexMap<NodeId, SceneNode>) -> Result<(), ValidationError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Unseen,
        OnPath,
        Done,
    }
    let mut marks = vec![Mark::Unseen; nodes.len()];
    let mut path = Vec::new();
    for start in 0..nodes.len() {
        let mut cursor = Some(start);
        while let Some(i) = cursor {
            match marks[i] {
                Mark::Done => break,
                Mark::OnPath => {
                    return Err(ValidationError::Cycle(nodes[i].id.0.clone()));
                }
                Mark::Unseen => {
                    marks[i] = Mark::OnPath;
                    path.push(i);
                    cursor = nodes[i]
                        .parent_id
                        .as_ref()
                        .and_then(|p| nodes.get_index_of(p));
                }
            }
        }
        for i in path.drain(..) {
            marks[i] = Mark::Done;
        }
    }
    Ok(())
}
