#![no_main]

use libfuzzer_sys::fuzz_target;
use voice_gateway::Config;

fuzz_target!(|data: &str| {
    let _ = Config::from_toml(data);
});
