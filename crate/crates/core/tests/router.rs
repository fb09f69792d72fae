mod common;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use axum::extract::State;
use axum::http::{HeaderMap, StatusCode};
use axum::routing::post;
use axum::{Json, Router};
use serde_json::{json, Value};
use voice_core::narrative::NarrationTemplates;
use voice_core::router::{
    classify_intent, classify_pilot, dispatch, extract_transform, guardian_reply, process_query,
    BackendError, BotBackend, BotHandle, BotRole, BotSet, ChatMessage, Intent, MockConfig,
    ModelContext, PilotIntent, RemoteBackend, RemoteConfig, RouterError, ScaleDirection,
    ScriptedBackend, SelectedReply, Transform,
};
use voice_core::session::{Session, SessionOptions};

use common::fixture;

fn hiv_ctx() -> (Arc<voice_core::scene::SceneTree>, ModelContext) {
    let tree = fixture("hiv");
    let ctx = ModelContext::new(&tree, tree.root_id().as_str());
    (tree, ctx)
}

fn scripted(reply: &str, delay_ms: u64) -> BotHandle {
    BotHandle::new(Arc::new(
        ScriptedBackend::text(reply).with_delay(Duration::from_millis(delay_ms)),
    ))
}

fn failing() -> BotHandle {
    BotHandle::new(Arc::new(ScriptedBackend::failing("poisoned")))
}

#[tokio::test]
async fn routing_rows_classify() {
    let (_, ctx) = hiv_ctx();
    let bots = BotSet::mock(&MockConfig::default());
    let rows = [
        (
            "I want to see the right side of this object.",
            Intent::Explorer,
        ),
        ("It's too far. I want it up close.", Intent::Explorer),
        ("Show me the capsid.", Intent::Pilot),
        ("Go back to the start.", Intent::Pilot),
        ("Go up a level.", Intent::Pilot),
        ("Show me the last thing again.", Intent::Pilot),
        ("What is the matrix protein?", Intent::Encyclopedia),
        ("Please play music for me.", Intent::Guardian),
        ("Please show me the interior objects.", Intent::CuttingPlane),
    ];
    for (q, want) in rows {
        assert_eq!(classify_intent(q, &ctx, &bots).await.unwrap(), want, "{q}");
    }
}

#[tokio::test]
async fn routing_rows_pilot_and_explorer_values() {
    let (tree, ctx) = hiv_ctx();
    let bots = BotSet::mock(&MockConfig::default());
    let capsid = tree.find_node("capsid").unwrap().clone();
    let cases = [
        (
            "Show me the capsid.",
            PilotIntent::NodeNavigation(capsid.clone()),
        ),
        ("Go back to the Capsid", PilotIntent::NodeNavigation(capsid)),
        ("Go back to the start.", PilotIntent::Reset),
        (
            "Go up a level.",
            PilotIntent::ScaleChange(ScaleDirection::Up),
        ),
        ("Show me the last thing again.", PilotIntent::ReturnBack),
    ];
    for (q, want) in cases {
        assert_eq!(
            classify_pilot(q, &tree, &ctx, &bots).await.unwrap(),
            want,
            "{q}"
        );
    }
    let right = extract_transform("I want to see the right side of this object.", &ctx, &bots)
        .await
        .unwrap();
    assert_eq!(
        right,
        Transform {
            zoom_factor: 1.0,
            yaw: 90.0,
            pitch: 0.0,
            roll: 0.0
        }
    );
    let close = extract_transform("It's too far. I want it up close.", &ctx, &bots)
        .await
        .unwrap();
    assert_eq!(
        close,
        Transform {
            zoom_factor: 2.0,
            yaw: 0.0,
            pitch: 0.0,
            roll: 0.0
        }
    );
}

#[tokio::test]
async fn empty_query_is_rejected() {
    let (tree, ctx) = hiv_ctx();
    let bots = BotSet::mock(&MockConfig::default());
    assert_eq!(
        classify_intent("  ", &ctx, &bots).await.unwrap_err(),
        RouterError::EmptyQuery
    );
    assert_eq!(
        classify_pilot("", &tree, &ctx, &bots).await.unwrap_err(),
        RouterError::EmptyQuery
    );
    assert!(matches!(
        dispatch("\n", &ctx, &bots).await,
        Err(RouterError::EmptyQuery)
    ));
}

#[tokio::test]
async fn guardian_stays_on_the_model() {
    let (_, ctx) = hiv_ctx();
    let bots = BotSet::mock(&MockConfig::default());
    let off_topic = [
        "Please play music for me.",
        "What's the weather today?",
        "Tell me a joke",
        "Who won the match yesterday?",
        "Order me a pizza",
        "What time is it?",
        "Sing a song",
        "How do I bake bread?",
        "Book a flight to Paris",
        "What's the capital of France?",
        "Write me a poem",
        "Lend me some money",
        "Set an alarm for 7",
        "What's your favourite colour?",
        "Translate hello into Spanish",
        "How tall is Everest?",
        "Recommend a movie",
        "Call my mother",
        "What's 2 plus 2?",
        "Open my email",
    ];
    for q in off_topic {
        assert_eq!(
            classify_intent(q, &ctx, &bots).await.unwrap(),
            Intent::Guardian,
            "{q}"
        );
        let reply = guardian_reply(q, &ctx, &bots).await.unwrap();
        assert!(reply.contains(&ctx.model_name), "{reply}");
    }
}

#[tokio::test]
async fn non_selected_bots_cannot_affect_the_result() {
    let (_, ctx) = hiv_ctx();
    let clean = BotSet::mock(&MockConfig::default())
        .with_handle(BotRole::Manager, scripted("Explorer", 0))
        .with_handle(BotRole::Explorer, scripted("{1,90,0,0}", 0));
    let mut poisoned = clean.clone();
    for role in [
        BotRole::Pilot,
        BotRole::EncyclopediaConcise,
        BotRole::EncyclopediaDetailed,
        BotRole::Guardian,
    ] {
        poisoned = poisoned.with_handle(role, failing());
    }
    let a = dispatch("turn right", &ctx, &clean).await.unwrap();
    let b = dispatch("turn right", &ctx, &poisoned).await.unwrap();
    match (a, b) {
        (SelectedReply::Explorer(x), SelectedReply::Explorer(y)) => assert_eq!(x, y),
        other => panic!("{other:?}"),
    }
}

#[tokio::test]
async fn dispatch_is_deterministic() {
    let (_, ctx) = hiv_ctx();
    let bots = BotSet::mock(&MockConfig::default());
    for q in [
        "Show me the capsid.",
        "Turn it to the left",
        "What is a virus?",
        "Sing",
    ] {
        let first = format!("{:?}", dispatch(q, &ctx, &bots).await.map(|r| r.intent()));
        for _ in 0..5 {
            assert_eq!(
                format!("{:?}", dispatch(q, &ctx, &bots).await.map(|r| r.intent())),
                first
            );
        }
    }
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn bots_run_concurrently() {
    let (_, ctx) = hiv_ctx();
    let mut bots = BotSet::mock(&MockConfig::default());
    for role in BotRole::ALL {
        let reply = match role {
            BotRole::Manager => "Guardian",
            _ => "Let's get back to hiv.",
        };
        bots = bots.with_handle(role, scripted(reply, 100));
    }
    for _ in 0..20 {
        let start = Instant::now();
        let reply = dispatch("Sing", &ctx, &bots).await.unwrap();
        let took = start.elapsed();
        assert_eq!(reply.intent(), Intent::Guardian);
        assert!(took < Duration::from_millis(200), "{took:?}");
    }
}

struct Counting(AtomicUsize);

#[async_trait::async_trait]
impl BotBackend for Counting {
    async fn complete(&self, _: &str, _: &[ChatMessage]) -> Result<String, BackendError> {
        self.0.fetch_add(1, Ordering::SeqCst);
        Ok("Guardian".into())
    }
}

#[tokio::test]
async fn every_bot_is_asked_once_per_query() {
    let (_, ctx) = hiv_ctx();
    let counters: Vec<Arc<Counting>> = (0..6)
        .map(|_| Arc::new(Counting(AtomicUsize::new(0))))
        .collect();
    let mut bots = BotSet::mock(&MockConfig::default());
    for (role, c) in BotRole::ALL.into_iter().zip(&counters) {
        bots = bots.with_handle(role, BotHandle::new(c.clone() as Arc<dyn BotBackend>));
    }
    dispatch("Sing", &ctx, &bots).await.unwrap();
    tokio::time::sleep(Duration::from_millis(20)).await;
    for c in &counters {
        assert_eq!(c.0.load(Ordering::SeqCst), 1);
    }
}

fn session(name: &str) -> Session {
    Session::new(
        fixture(name),
        Arc::new(NarrationTemplates::default()),
        SessionOptions::default(),
    )
}

#[tokio::test]
async fn backend_failure_degrades_without_touching_the_view() {
    let mut s = session("hiv");
    let before = s.visual().clone();
    let bots = BotSet::mock(&MockConfig::default()).with_handle(BotRole::Manager, failing());
    let result = process_query("Show me the capsid.", &mut s, &bots).await;
    assert!(result.degraded);
    assert!(result.intent.is_none());
    assert!(!result.narration.is_empty());
    assert_eq!(s.visual(), &before);
}

#[tokio::test]
async fn garbage_replies_degrade() {
    let mut s = session("hiv");
    let before = s.visual().clone();
    let bots = BotSet::mock(&MockConfig::default())
        .with_handle(BotRole::Manager, scripted("Explorer", 0))
        .with_handle(BotRole::Explorer, scripted("sideways, I think", 0));
    let result = process_query("turn", &mut s, &bots).await;
    assert!(result.degraded);
    assert_eq!(s.visual(), &before);
}

#[tokio::test]
async fn timeouts_surface_as_backend_errors() {
    let (_, ctx) = hiv_ctx();
    let slow = scripted("Guardian", 500).with_budget(Duration::from_millis(20));
    let bots = BotSet::mock(&MockConfig::default()).with_handle(BotRole::Manager, slow);
    assert_eq!(
        classify_intent("hi", &ctx, &bots).await.unwrap_err(),
        RouterError::BackendUnavailable(BackendError::Timeout(Duration::from_millis(20)))
    );
}

/// Authorization header and body of each request.
type Seen = Arc<Mutex<Vec<(Option<String>, Value)>>>;

#[derive(Clone, Default)]
struct Fake {
    calls: Arc<AtomicUsize>,
    fail_first: usize,
    stall: Option<Duration>,
    seen: Seen,
}

async fn completions(
    State(fake): State<Fake>,
    headers: HeaderMap,
    Json(body): Json<Value>,
) -> (StatusCode, Json<Value>) {
    let n = fake.calls.fetch_add(1, Ordering::SeqCst);
    let auth = headers
        .get("authorization")
        .and_then(|v| v.to_str().ok())
        .map(str::to_owned);
    fake.seen.lock().unwrap().push((auth, body));
    if let Some(d) = fake.stall {
        tokio::time::sleep(d).await;
    }
    if n < fake.fail_first {
        return (
            StatusCode::INTERNAL_SERVER_ERROR,
            Json(json!({"error": "boom"})),
        );
    }
    (
        StatusCode::OK,
        Json(json!({"choices": [{"message": {"role": "assistant", "content": "Pilot"}}]})),
    )
}

async fn serve(fake: Fake) -> String {
    let app = Router::new()
        .route("/v1/chat/completions", post(completions))
        .with_state(fake);
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    format!("http://{addr}/v1")
}

#[tokio::test]
async fn remote_backend_speaks_chat_completions() {
    let fake = Fake::default();
    let url = serve(fake.clone()).await;
    std::env::set_var("VOICE_TEST_KEY_A", "sekrit");
    let mut config = RemoteConfig::new(url, "tiny-model");
    config.api_key_env = Some("VOICE_TEST_KEY_A".into());
    let backend = RemoteBackend::new(config).unwrap();
    let reply = backend
        .complete("You route.", &[ChatMessage::user("go")])
        .await
        .unwrap();
    assert_eq!(reply, "Pilot");
    let seen = fake.seen.lock().unwrap();
    let (auth, body) = &seen[0];
    assert_eq!(auth.as_deref(), Some("Bearer sekrit"));
    assert_eq!(body["model"], "tiny-model");
    assert_eq!(
        body["messages"][0],
        json!({"role": "system", "content": "You route."})
    );
    assert_eq!(
        body["messages"][1],
        json!({"role": "user", "content": "go"})
    );
}

#[tokio::test]
async fn remote_backend_retries_server_errors() {
    let fake = Fake {
        fail_first: 1,
        ..Fake::default()
    };
    let url = serve(fake.clone()).await;
    let mut config = RemoteConfig::new(url, "m");
    config.backoff = Duration::from_millis(5);
    let backend = RemoteBackend::new(config).unwrap();
    assert_eq!(
        backend
            .complete("", &[ChatMessage::user("x")])
            .await
            .unwrap(),
        "Pilot"
    );
    assert_eq!(fake.calls.load(Ordering::SeqCst), 2);

    let fake = Fake {
        fail_first: 10,
        ..Fake::default()
    };
    let url = serve(fake.clone()).await;
    let mut config = RemoteConfig::new(url, "m");
    config.backoff = Duration::from_millis(5);
    let err = RemoteBackend::new(config)
        .unwrap()
        .complete("", &[ChatMessage::user("x")])
        .await
        .unwrap_err();
    assert!(
        matches!(err, BackendError::Status { status: 500, .. }),
        "{err:?}"
    );
    assert_eq!(fake.calls.load(Ordering::SeqCst), 2);
}

#[tokio::test]
async fn remote_backend_times_out() {
    let fake = Fake {
        stall: Some(Duration::from_secs(2)),
        ..Fake::default()
    };
    let url = serve(fake).await;
    let mut config = RemoteConfig::new(url, "m");
    config.timeout = Duration::from_millis(50);
    config.retries = 0;
    let err = RemoteBackend::new(config)
        .unwrap()
        .complete("", &[ChatMessage::user("x")])
        .await
        .unwrap_err();
    assert_eq!(err, BackendError::Timeout(Duration::from_millis(50)));
}

#[test]
fn missing_api_key_is_reported() {
    let mut config = RemoteConfig::new("http://127.0.0.1:9", "m");
    config.api_key_env = Some("VOICE_TEST_KEY_UNSET".into());
    assert_eq!(
        RemoteBackend::new(config).unwrap_err(),
        BackendError::MissingApiKey("VOICE_TEST_KEY_UNSET".into())
    );
}
