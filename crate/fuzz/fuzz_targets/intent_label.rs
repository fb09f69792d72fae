#![no_main]

use libfuzzer_sys::fuzz_target;
use voice_core::router::Intent;

fuzz_target!(|data: &str| {
    if let Ok(intent) = data.parse::<Intent>() {
        assert_eq!(intent.to_string().parse::<Intent>().unwrap(), intent);
    }
});
