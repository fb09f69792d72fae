use std::path::PathBuf;
use std::sync::Arc;

use voice_gateway::{Config, Gateway, Repl};

fn here(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

async fn shipped_repl(model: &str) -> (Repl, String) {
    let config = Config::load(&here("../../config/gateway.toml")).unwrap();
    let gateway = Arc::new(Gateway::from_config(&config).unwrap());
    Repl::open(gateway, model).unwrap()
}

/// Set `UPDATE_GOLDEN=1` to rewrite the committed transcript.
#[tokio::test]
async fn t4_head_transcript_matches_golden() {
    let script = std::fs::read_to_string(here("tests/golden/t4_head.script")).unwrap();
    let (mut repl, greeting) = shipped_repl("t4").await;
    let transcript = format!("{greeting}\n{}", repl.run_script(script.lines()).await);
    let golden = here("tests/golden/t4_head.txt");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden, &transcript).unwrap();
    }
    let expected = std::fs::read_to_string(&golden).unwrap();
    assert_eq!(transcript, expected);
}

#[tokio::test]
async fn head_question_offers_both_named_parts() {
    let (mut repl, greeting) = shipped_repl("t4").await;
    assert!(greeting.starts_with("session on t4\nnow: SpeechOnly | "));
    let out = repl.execute("What is the head?").await;
    assert!(out.contains("intent: Encyclopedia"), "{out}");
    assert!(
        out.contains("options: [0] capsid protein  [1] HOC"),
        "{out}"
    );
    let picked = repl.execute(":select 0").await;
    assert!(
        picked.starts_with("selected: capsid protein\nscene: "),
        "{picked}"
    );
    assert!(
        picked.contains("scene: Focus capsid protein")
            || picked.contains("scene: Overview capsid protein")
    );
}

#[tokio::test]
async fn commands_and_errors() {
    let (mut repl, _) = shipped_repl("t4").await;
    assert!(repl.execute(":help").await.contains(":select N"));
    assert_eq!(repl.execute(":select x").await, "usage: :select N");
    assert_eq!(repl.execute(":tick -1").await, "usage: :tick SECONDS");
    assert!(repl.execute(":bogus").await.starts_with("unknown command"));
    assert_eq!(
        repl.execute(":select 0").await,
        "error: no exploration options pending"
    );
    assert_eq!(repl.execute("   ").await, "");
    assert!(Repl::is_quit(" :quit "));
    let transcript = repl.run_script([":quit", "help"]).await;
    assert_eq!(transcript, "> :quit\n");
}

#[test]
fn unknown_model_is_refused() {
    let config = Config::load(&here("../../config/gateway.toml")).unwrap();
    let gateway = Arc::new(Gateway::from_config(&config).unwrap());
    assert!(Repl::open(gateway, "nonexistent").is_err());
}
