#![no_main]

use libfuzzer_sys::fuzz_target;
use voice_core::scene::load_scene_tree;

fuzz_target!(|data: &[u8]| {
    if let Ok(tree) = load_scene_tree(data) {
        assert!(!tree.is_empty());
        for node in tree.nodes() {
            let path = tree.path_to_root(node.id.as_str()).unwrap();
            assert_eq!(path.last(), Some(tree.root_id()));
        }
    }
});
