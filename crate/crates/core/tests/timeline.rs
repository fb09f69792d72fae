use nalgebra::Vector3;
use proptest::prelude::*;
use voice_core::narrative::{Advance, Scene, SceneKind, Signal, Timeline};
use voice_core::visual::{AnimationSpec, CameraState, CuttingPlaneState, Pose};

fn scene(i: usize) -> Scene {
    let start = Pose {
        camera: CameraState::looking_at(Vector3::zeros(), 5.0),
        plane: CuttingPlaneState::default(),
    };
    Scene::new(
        SceneKind::SpeechOnly,
        None,
        format!("scene {i}"),
        AnimationSpec::new(start),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Signals arrive in arbitrary order and repeat; a scene completes only
    /// once both kinds reached it, and completions follow enqueue order.
    #[test]
    fn fifo_under_random_interleavings(
        k in 0usize..=10,
        signals in prop::collection::vec(any::<bool>(), 0..80),
    ) {
        let mut t = Timeline::new();
        for i in 0..k {
            t.push(scene(i));
        }
        t.start_next();
        let mut completed = Vec::new();
        let (mut speech, mut anim) = (false, false);
        for s in signals {
            let signal = if s { Signal::SpeechDone } else { Signal::AnimationDone };
            match t.advance(signal) {
                Err(_) => prop_assert!(t.current().is_none()),
                Ok(Advance::Waiting) => {
                    if s { speech = true } else { anim = true }
                    prop_assert!(!(speech && anim));
                }
                Ok(Advance::Completed { finished, next }) => {
                    if s { speech = true } else { anim = true }
                    prop_assert!(speech && anim, "completed before both signals");
                    prop_assert!(finished.speech_done && finished.animation_done);
                    completed.push(finished.speech.clone());
                    prop_assert_eq!(next.map(|n| n.speech.clone()), t.current().map(|c| c.speech.clone()));
                    speech = false;
                    anim = false;
                }
            }
        }
        let expected: Vec<String> = (0..completed.len()).map(|i| format!("scene {i}")).collect();
        prop_assert_eq!(&completed, &expected);
        let remaining = t.current().into_iter().chain(t.queued()).count();
        prop_assert_eq!(completed.len() + remaining, k);
    }
}

#[test]
fn two_pushes_dequeue_in_call_order() {
    let mut t = Timeline::new();
    t.push(scene(0));
    t.push(scene(1));
    assert_eq!(t.len(), 2);
    assert_eq!(t.start_next().unwrap().speech, "scene 0");
    t.advance(Signal::AnimationDone).unwrap();
    match t.advance(Signal::SpeechDone).unwrap() {
        Advance::Completed { next, .. } => assert_eq!(next.unwrap().speech, "scene 1"),
        other => panic!("{other:?}"),
    }
}
