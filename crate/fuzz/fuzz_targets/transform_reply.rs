#![no_main]

use libfuzzer_sys::fuzz_target;
use voice_core::router::parse_transform;

fuzz_target!(|data: &str| {
    if let Ok(t) = parse_transform(data) {
        assert!(t.zoom_factor > 0.0);
        assert_eq!(parse_transform(&t.to_string()).unwrap(), t);
    }
});
