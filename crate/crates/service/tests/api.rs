use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use elrepair_core::fixture::{mini_galen, mini_galen_oracle, MINI_GALEN_ORACLE};
use elrepair_core::oracle::{DeclarativeOracle, Oracle};
use elrepair_core::parse::parse_axiom;
use elrepair_core::repair::{run_strategy, Options, StrategySpec};
use elrepair_core::report::ReportDocument;
use elrepair_service::{router, Store};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, String) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn json_call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (s, text) = call(app, method, uri, body).await;
    (s, serde_json::from_str(&text).unwrap_or(Value::Null))
}

fn cli_report(strategy: u8) -> String {
    let p = mini_galen(Options::default());
    let mut o = mini_galen_oracle();
    let r = run_strategy(&p, &StrategySpec::Named(strategy), None, &mut o).unwrap();
    ReportDocument::from_run(&r).to_json()
}

async fn create(app: &Router, body: Value) -> String {
    let (s, v) = json_call(app, "POST", "/sessions", Some(body)).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    v["id"].as_str().unwrap().to_string()
}

/// Answers every question from `oracle` until the session is done.
async fn answer_all(app: &Router, id: &str, oracle: &mut DeclarativeOracle) -> usize {
    let mut asked = 0;
    loop {
        let (s, v) = json_call(app, "GET", &format!("/sessions/{id}"), None).await;
        assert_eq!(s, StatusCode::OK);
        if v["state"]["status"] == "done" {
            return asked;
        }
        assert_eq!(v["state"]["status"], "awaiting_answer", "{v}");
        let (s, p) = json_call(app, "GET", &format!("/sessions/{id}/pending"), None).await;
        assert_eq!(s, StatusCode::OK);
        let axiom = p["axiom"].as_str().unwrap().to_string();
        let verdict = oracle.judge(&parse_axiom(&axiom).unwrap()).unwrap();
        let (s, _) =
            json_call(app, "POST", &format!("/sessions/{id}/answers"), Some(json!({"axiom": axiom, "verdict": verdict})))
                .await;
        assert_eq!(s, StatusCode::OK);
        asked += 1;
    }
}

fn app() -> Router {
    router(Arc::new(Store::in_memory()))
}

#[tokio::test]
async fn answered_session_matches_command_line() {
    let app = app();
    let id = create(&app, json!({"fixture": "mini-galen", "strategy": "C9"})).await;
    let (s, v) = json_call(&app, "POST", &format!("/sessions/{id}/start"), None).await;
    assert_eq!(s, StatusCode::OK);
    // The first questions confirm that the wrong axioms are wrong.
    assert_eq!(v["state"]["axiom"], "PPr SubClassOf IPr");
    let asked = answer_all(&app, &id, &mut mini_galen_oracle()).await;
    let (_, report) = call(&app, "GET", &format!("/sessions/{id}/report"), None).await;
    assert_eq!(report, cli_report(9));
    let doc: ReportDocument = serde_json::from_str(&report).unwrap();
    assert_eq!(doc.queries_distinct, asked);
    let (s, r) = json_call(&app, "GET", &format!("/sessions/{id}/result"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(r["report"]["repair_valid"], true);
    assert!(r["ontology"].as_str().unwrap().contains("PPr SubClassOf NPr"));
}

#[tokio::test]
async fn confirmation_questions_come_first() {
    let app = app();
    let id = create(&app, json!({"fixture": "mini-galen", "strategy": "C9"})).await;
    json_call(&app, "POST", &format!("/sessions/{id}/start"), None).await;
    for w in ["PPr SubClassOf IPr", "IPr SubClassOf GPr", "E SubClassOf PPr"] {
        let (_, p) = json_call(&app, "GET", &format!("/sessions/{id}/pending"), None).await;
        assert_eq!(p["axiom"], w);
        json_call(&app, "POST", &format!("/sessions/{id}/answers"), Some(json!({"axiom": w, "verdict": false}))).await;
    }
    // The next question weakens PPr ⊑ IPr: its sides come from sub(PPr) and sup(IPr).
    let (_, p) = json_call(&app, "GET", &format!("/sessions/{id}/pending"), None).await;
    let q = parse_axiom(p["axiom"].as_str().unwrap()).unwrap();
    assert!(["PPr", "E"].contains(&q.lhs.to_string().as_str()), "{q}");
    assert!(["IPr", "GPr", "NPr"].contains(&q.rhs.to_string().as_str()), "{q}");
    assert!(p["source"].is_array() && p["target"].is_array());
}

#[tokio::test]
async fn auto_run_matches_command_line() {
    let app = app();
    let id = create(&app, json!({"fixture": "mini-galen", "strategy": "C9", "oracle": MINI_GALEN_ORACLE})).await;
    let (_, v) = json_call(&app, "POST", &format!("/sessions/{id}/start"), None).await;
    assert_eq!(v["state"]["status"], "done");
    let (_, report) = call(&app, "GET", &format!("/sessions/{id}/report"), None).await;
    assert_eq!(report, cli_report(9));
}

#[tokio::test]
async fn rejects_bad_requests() {
    let app = app();
    let (s, v) = json_call(
        &app,
        "POST",
        "/sessions",
        Some(json!({"ontology": "A SubClassOf B\n", "wrong": "B SubClassOf A\n", "strategy": "C1"})),
    )
    .await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["code"], "precondition");
    assert_eq!(v["detail"]["kind"], "not_in_tbox");

    let (s, v) = json_call(
        &app,
        "POST",
        "/sessions",
        Some(json!({"ontology": "A SubClassOf (B and\n", "wrong": "", "strategy": "C1"})),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["code"], "parse_error");
    assert!(v["message"].is_string());

    let (s, _) =
        json_call(&app, "POST", "/sessions", Some(json!({"fixture": "mini-galen", "strategy": "C14"}))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);

    let (s, v) = json_call(&app, "GET", "/sessions/nope", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["code"], "not_found");
}

#[tokio::test]
async fn empty_wrong_set_is_done_at_once() {
    let app = app();
    let ontology = "A SubClassOf B\n";
    let id = create(&app, json!({"ontology": ontology, "wrong": "", "strategy": "C5"})).await;
    let (_, v) = json_call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(v["state"]["status"], "done");
    let (_, r) = json_call(&app, "GET", &format!("/sessions/{id}/result"), None).await;
    assert_eq!(r["report"]["final_tbox"], json!(["A SubClassOf B"]));
    let (s, _) = json_call(&app, "GET", &format!("/sessions/{id}/pending"), None).await;
    assert_eq!(s, StatusCode::CONFLICT);
}

#[tokio::test]
async fn state_rules() {
    let app = app();
    let id = create(&app, json!({"fixture": "mini-galen", "strategy": "C1"})).await;
    let (s, _) = json_call(&app, "GET", &format!("/sessions/{id}/pending"), None).await;
    assert_eq!(s, StatusCode::CONFLICT);
    let (s, v) = json_call(&app, "GET", &format!("/sessions/{id}/result"), None).await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::CONFLICT, Some("not_done")));
    json_call(&app, "POST", &format!("/sessions/{id}/start"), None).await;
    let (s, _) = json_call(&app, "POST", &format!("/sessions/{id}/start"), None).await;
    assert_eq!(s, StatusCode::CONFLICT);

    let (s, v) = json_call(
        &app,
        "POST",
        &format!("/sessions/{id}/answers"),
        Some(json!({"axiom": "E SubClassOf PPr", "verdict": false})),
    )
    .await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::CONFLICT, Some("not_pending")));

    let body = json!({"axiom": "PPr SubClassOf IPr", "verdict": false});
    let (s, first) = json_call(&app, "POST", &format!("/sessions/{id}/answers"), Some(body.clone())).await;
    assert_eq!(s, StatusCode::OK);
    let (s, again) = json_call(&app, "POST", &format!("/sessions/{id}/answers"), Some(body)).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(first["state"], again["state"]);
    let (s, v) = json_call(
        &app,
        "POST",
        &format!("/sessions/{id}/answers"),
        Some(json!({"axiom": "PPr SubClassOf IPr", "verdict": true})),
    )
    .await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::CONFLICT, Some("already_answered")));
}

#[tokio::test]
async fn revision_makes_session_stale() {
    let app = app();
    let id = create(&app, json!({"fixture": "mini-galen", "strategy": "C4"})).await;
    json_call(&app, "POST", &format!("/sessions/{id}/start"), None).await;
    answer_all(&app, &id, &mut mini_galen_oracle()).await;
    let (_, v) = json_call(
        &app,
        "POST",
        &format!("/sessions/{id}/revisions"),
        Some(json!({"axiom": "IPr SubClassOf NPr", "verdict": false})),
    )
    .await;
    assert_eq!(v["state"]["status"], "stale");
    let (s, v) = json_call(&app, "GET", &format!("/sessions/{id}/result"), None).await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::CONFLICT, Some("stale")));
    let (s, v) = json_call(&app, "POST", &format!("/sessions/{id}/start"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_ne!(v["state"]["status"], "stale");

    let (s, v) = json_call(
        &app,
        "POST",
        &format!("/sessions/{id}/revisions"),
        Some(json!({"axiom": "C SubClassOf F", "verdict": true})),
    )
    .await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::CONFLICT, Some("not_answered")));
}

#[tokio::test]
async fn contradictory_answer_warns() {
    let app = app();
    let id = create(&app, json!({"fixture": "mini-galen", "strategy": "C9"})).await;
    json_call(&app, "POST", &format!("/sessions/{id}/start"), None).await;
    let mut saw = None;
    for _ in 0..20 {
        let (_, p) = json_call(&app, "GET", &format!("/sessions/{id}/pending"), None).await;
        let axiom = p["axiom"].as_str().unwrap().to_string();
        // PPr ⊑ GPr together with GPr ⊑ NPr in the ontology makes PPr ⊑ NPr follow.
        let verdict = match axiom.as_str() {
            "PPr SubClassOf GPr" => true,
            "PPr SubClassOf NPr" => false,
            _ => mini_galen_oracle().judge(&parse_axiom(&axiom).unwrap()).unwrap(),
        };
        let (_, out) =
            json_call(&app, "POST", &format!("/sessions/{id}/answers"), Some(json!({"axiom": axiom, "verdict": verdict})))
                .await;
        if axiom == "PPr SubClassOf NPr" {
            saw = Some(out);
            break;
        }
    }
    let out = saw.expect("PPr ⊑ NPr is asked");
    let w = &out["warnings"];
    assert!(w.as_array().unwrap().iter().any(|w| w["kind"] == "false_marked_but_derivable"
        && w["axiom"] == "PPr SubClassOf NPr"));
    let (_, listed) = json_call(&app, "GET", &format!("/sessions/{id}/warnings"), None).await;
    assert_eq!(&listed, w);
}

#[tokio::test]
async fn sessions_survive_restart() {
    let dir = tempfile::tempdir().unwrap();
    let id;
    {
        let app = router(Arc::new(Store::open(dir.path()).unwrap()));
        id = create(&app, json!({"fixture": "mini-galen", "strategy": "C10"})).await;
        json_call(&app, "POST", &format!("/sessions/{id}/start"), None).await;
        for _ in 0..4 {
            let (_, p) = json_call(&app, "GET", &format!("/sessions/{id}/pending"), None).await;
            let axiom = p["axiom"].as_str().unwrap().to_string();
            let verdict = mini_galen_oracle().judge(&parse_axiom(&axiom).unwrap()).unwrap();
            json_call(&app, "POST", &format!("/sessions/{id}/answers"), Some(json!({"axiom": axiom, "verdict": verdict})))
                .await;
        }
    }
    // Simulate a crash in the middle of appending an answer.
    let log = dir.path().join(&id).join("answers.log");
    let mut text = std::fs::read_to_string(&log).unwrap();
    text.push_str("{\"kind\":\"answer\",\"axi");
    std::fs::write(&log, text).unwrap();

    let app = router(Arc::new(Store::open(dir.path()).unwrap()));
    let (_, v) = json_call(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(v["answers"], 4);
    assert_eq!(v["state"]["status"], "awaiting_answer");
    answer_all(&app, &id, &mut mini_galen_oracle()).await;
    let (_, report) = call(&app, "GET", &format!("/sessions/{id}/report"), None).await;
    assert_eq!(report, cli_report(10));
}
