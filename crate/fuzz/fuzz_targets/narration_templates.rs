#![no_main]

use libfuzzer_sys::fuzz_target;
use voice_core::narrative::{NarrationPayload, NarrationTemplates, TaskType, Template};

fuzz_target!(|data: &str| {
    let _ = Template::parse(data);
    if let Ok(templates) = NarrationTemplates::from_json(data) {
        let payload = NarrationPayload::options(["a", "b"]).with_model("m");
        for task in TaskType::ALL {
            let _ = templates.generate(task, &payload, data.len() as u64);
        }
    }
});
