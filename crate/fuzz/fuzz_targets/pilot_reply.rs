#![no_main]

use libfuzzer_sys::fuzz_target;
use voice_core::router::parse_pilot_reply;

fuzz_target!(|data: &str| {
    let _ = parse_pilot_reply(data);
});
