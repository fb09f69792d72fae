mod common;

use std::collections::HashSet;

use nalgebra::Vector3;
use proptest::prelude::*;
use voice_core::narrative::{
    add_to_timeline, build_scene, generate_narration, ExplorationPlan, NarrationPayload,
    NarrationTemplates, NarrativeError, SceneKind, TaskType, Timeline,
};
use voice_core::scene::{InstanceRecord, NodeId, SceneDocument, SceneTree};
use voice_core::visual::{CameraState, CuttingPlaneState, Pose, VisualState};

use common::{fixture, record};

fn start_pose(tree: &SceneTree) -> Pose {
    VisualState::new(std::sync::Arc::new(tree.clone())).pose()
}

#[test]
fn overview_highlights_children_and_parks_plane_on_border() {
    let tree = fixture("t4");
    let head = tree.find_node("head").unwrap().clone();
    let node = tree.node(head.as_str()).unwrap();
    let scene = build_scene(
        SceneKind::Overview,
        Some(head.as_str()),
        &tree,
        start_pose(&tree),
        None,
    )
    .unwrap();
    let first = &scene.animation.keyframes[0];
    let expected: HashSet<&NodeId> = node.child_ids.iter().collect();
    assert_eq!(first.highlight.iter().collect::<HashSet<_>>(), expected);
    assert_eq!(first.plane.offset, node.bounding_sphere.radius);
    assert!(first.plane.enabled);
    assert_eq!(scene.target_node_id.as_ref(), Some(&head));
    assert_eq!(scene.speech, node.description);
}

#[test]
fn speech_only_keeps_target_and_rotates() {
    let tree = fixture("t4");
    let from = start_pose(&tree);
    let scene = build_scene(SceneKind::SpeechOnly, None, &tree, from, Some("Hello.")).unwrap();
    assert!(scene.target_node_id.is_none());
    assert_eq!(scene.speech, "Hello.");
    assert!(scene
        .animation
        .keyframes
        .iter()
        .all(|k| k.camera.target == from.camera.target));
    assert!(scene
        .animation
        .keyframes
        .iter()
        .any(|k| k.camera.yaw != from.camera.yaw));
    assert_eq!(scene.animation.end_pose(), from);
}

#[test]
fn targeted_kinds_need_a_node() {
    let tree = fixture("t4");
    for kind in [
        SceneKind::Focus,
        SceneKind::Overview,
        SceneKind::CuttingPlane,
    ] {
        assert_eq!(
            build_scene(kind, None, &tree, start_pose(&tree), None).unwrap_err(),
            NarrativeError::MissingTarget(kind)
        );
    }
    assert_eq!(
        build_scene(
            SceneKind::Focus,
            Some("ghost"),
            &tree,
            start_pose(&tree),
            None
        )
        .unwrap_err(),
        NarrativeError::UnknownNode("ghost".into())
    );
}

#[test]
fn focus_approaches_nearest_instance() {
    let mut leaf = record("leaf", Some("root"), [0.0, 0.0, 0.0], 4.0);
    leaf.instance_count = 2;
    leaf.instances = vec![
        InstanceRecord {
            position: [0.0, 0.0, 50.0],
            orientation: [1.0, 0.0, 0.0, 0.0],
        },
        InstanceRecord {
            position: [0.0, 0.0, 10.0],
            orientation: [1.0, 0.0, 0.0, 0.0],
        },
    ];
    let tree = SceneTree::from_document(SceneDocument {
        model_name: "toy".into(),
        nodes: vec![record("root", None, [0.0; 3], 100.0), leaf],
    })
    .unwrap();
    let from = Pose {
        camera: CameraState::looking_at(Vector3::zeros(), 0.0),
        plane: CuttingPlaneState::default(),
    };
    let scene = build_scene(SceneKind::Focus, Some("leaf"), &tree, from, None).unwrap();
    assert_eq!(
        scene.animation.keyframes[0].camera.target,
        Vector3::new(0.0, 0.0, 10.0)
    );
    assert_eq!(
        scene.animation.keyframes[0].highlight,
        vec![NodeId::from("leaf")]
    );
}

#[test]
fn focus_on_node_without_instances_fails() {
    let mut bare = record("bare", Some("root"), [0.0; 3], 1.0);
    bare.instance_count = 0;
    bare.instances.clear();
    let tree = SceneTree::from_document(SceneDocument {
        model_name: "toy".into(),
        nodes: vec![record("root", None, [0.0; 3], 10.0), bare],
    })
    .unwrap();
    assert_eq!(
        build_scene(
            SceneKind::Focus,
            Some("bare"),
            &tree,
            start_pose(&tree),
            None
        )
        .unwrap_err(),
        NarrativeError::NoInstances("bare".into())
    );
}

#[test]
fn cutting_plane_scene_ends_at_centre() {
    let tree = fixture("t4");
    let head = tree.find_node("head").unwrap().clone();
    let scene = build_scene(
        SceneKind::CuttingPlane,
        Some(head.as_str()),
        &tree,
        start_pose(&tree),
        None,
    )
    .unwrap();
    let end = scene.animation.end_pose();
    assert!(end.plane.enabled);
    assert_eq!(end.plane.offset, 0.0);
}

#[test]
fn add_to_timeline_picks_kind_by_leafness() {
    let tree = fixture("t4");
    let mut timeline = Timeline::new();
    let from = start_pose(&tree);
    let head = add_to_timeline(
        &mut timeline,
        tree.find_node("head").unwrap().as_str(),
        &tree,
        from,
    )
    .unwrap();
    let hoc = add_to_timeline(
        &mut timeline,
        tree.find_node("HOC").unwrap().as_str(),
        &tree,
        from,
    )
    .unwrap();
    assert_eq!(head.kind, SceneKind::Overview);
    assert_eq!(hoc.kind, SceneKind::Focus);
    assert_eq!(timeline.len(), 2);
    assert_eq!(timeline.queued().next().unwrap(), &head);
}

#[test]
fn narration_is_deterministic_per_seed() {
    let templates = NarrationTemplates::default();
    let payload = NarrationPayload::node("head").with_model("T4");
    for seed in 0..50 {
        for task in TaskType::ALL {
            let a = templates.generate(task, &payload, seed).unwrap();
            let b = generate_narration(&templates, task.as_str(), &payload, seed).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn every_template_is_reachable() {
    let source = r#"{"transition": ["One {node}.", "Two {node}.", "Three {node}."]}"#;
    let templates = NarrationTemplates::from_json(source).unwrap();
    let seen: HashSet<String> = (0..1000)
        .map(|seed| {
            templates
                .generate(TaskType::Transition, &NarrationPayload::node("x"), seed)
                .unwrap()
        })
        .collect();
    assert_eq!(seen.len(), 3);
}

#[test]
fn bundled_templates_cover_every_task() {
    let templates = NarrationTemplates::default();
    for task in TaskType::ALL {
        assert!(!templates.templates(task).is_empty(), "{task:?}");
    }
}

#[test]
fn option_prompt_lists_both_nodes() {
    let templates = NarrationTemplates::default();
    let payload = NarrationPayload::options(["HOC", "capsid protein"]);
    for seed in 0..20 {
        let text = templates
            .generate(TaskType::OptionPrompt, &payload, seed)
            .unwrap();
        assert!(
            text.contains("HOC") && text.contains("capsid protein"),
            "{text}"
        );
    }
}

fn ids(names: &[&str]) -> Vec<NodeId> {
    names.iter().map(|n| NodeId::from(*n)).collect()
}

#[test]
fn worked_exploration_walk() {
    let list = ids(&["T4", "head", "HOC", "capsid protein", "Tail", "baseplate"]);
    let mut plan = ExplorationPlan::start(list.clone(), []);
    assert_eq!(plan.options(), ids(&["T4", "head"]).as_slice());
    assert_eq!(plan.select(1).unwrap(), NodeId::from("head"));
    assert_eq!(plan.options(), ids(&["T4", "HOC"]).as_slice());
    plan.next_options();
    assert_eq!(plan.options(), ids(&["capsid protein", "Tail"]).as_slice());
    assert_eq!(
        plan.select(3).unwrap_err(),
        NarrativeError::IndexOutOfRange { index: 3, len: 2 }
    );

    let mut plan = ExplorationPlan::start(list.clone(), []);
    while plan.is_active() {
        plan.select(0).unwrap();
    }
    assert_eq!(plan.visited(), list.as_slice());
    assert_eq!(
        plan.select(0).unwrap_err(),
        NarrativeError::NoPendingOptions
    );
}

proptest! {
    #[test]
    fn exploration_never_offers_visited_or_skipped(
        n in 0usize..12,
        visited in prop::collection::vec(0usize..12, 0..4),
        picks in prop::collection::vec((any::<bool>(), 0usize..2), 0..20),
    ) {
        let name = |i: usize| NodeId::from(format!("n{i}").as_str());
        let list: Vec<NodeId> = (0..n).map(name).collect();
        let pre: Vec<NodeId> = visited.iter().map(|i| name(*i)).collect();
        let mut plan = ExplorationPlan::start(list.clone(), pre.clone());
        let mut gone: HashSet<NodeId> = pre.iter().cloned().collect();
        for (more, i) in picks {
            if !plan.is_active() {
                break;
            }
            let offered = plan.options().to_vec();
            prop_assert!(!offered.is_empty() && offered.len() <= 2);
            for o in &offered {
                prop_assert!(!gone.contains(o));
            }
            let expected: Vec<NodeId> = list.iter().filter(|x| !gone.contains(*x)).take(2).cloned().collect();
            prop_assert_eq!(&offered, &expected);
            if more {
                plan.next_options();
                gone.extend(offered);
            } else if i < offered.len() {
                gone.insert(plan.select(i).unwrap());
            }
        }
    }
}
