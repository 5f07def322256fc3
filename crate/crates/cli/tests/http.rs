//! HTTP routes, driven in-process through the router.

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use qpw_cli::commands::{self, render};
use qpw_cli::server::{router, AppState};
use qpw_core::witness::WitnessOptions;

fn triangle() -> Value {
    json!({
        "n": 3,
        "arrows": [
            {"id": "a", "src": 1, "tgt": 2},
            {"id": "b", "src": 2, "tgt": 3},
            {"id": "c", "src": 3, "tgt": 1}
        ],
        "potential": [{"coef": 1, "cycle": ["a", "b", "c"]}]
    })
}

fn kronecker3() -> Value {
    json!({
        "n": 2,
        "arrows": [
            {"id": "a", "src": 1, "tgt": 2},
            {"id": "b", "src": 1, "tgt": 2},
            {"id": "c", "src": 1, "tgt": 2}
        ]
    })
}

async fn call(app: &axum::Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, String) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(|b| Body::from(b.to_string())).unwrap_or_else(Body::empty))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn app(dir: Option<std::path::PathBuf>) -> axum::Router {
    router(Arc::new(AppState::new(dir)))
}

#[tokio::test]
async fn session_mutate_and_undo() {
    let app = app(None);
    let (status, body) = call(&app, "POST", "/api/session", Some(&triangle().to_string())).await;
    assert_eq!(status, StatusCode::CREATED);
    let created = parse(&body);
    assert_eq!(created["badge"], "Dynkin A_3");
    assert_eq!(created["canUndo"], false);
    let id = created["id"].as_str().unwrap().to_string();

    let (status, body) = call(&app, "POST", &format!("/api/session/{id}/mutate"), Some(r#"{"k": 3}"#)).await;
    assert_eq!(status, StatusCode::OK);
    let mutated = parse(&body);
    assert_eq!(mutated["qp"]["potential"], json!([]));
    assert_eq!(mutated["qp"]["arrows"].as_array().unwrap().len(), 2);
    assert_eq!(mutated["badge"], "Dynkin A_3");
    assert_eq!(mutated["cursor"], 1);

    let (status, body) = call(&app, "POST", &format!("/api/session/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::OK);
    let undone = parse(&body);
    assert_eq!(undone["qp"], created["qp"]);
    assert_eq!(undone["canRedo"], true);

    let (status, body) = call(&app, "POST", &format!("/api/session/{id}/redo"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(parse(&body)["qp"], mutated["qp"]);

    let (status, body) = call(&app, "GET", &format!("/api/session/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(parse(&body)["history"], json!([{"k": 3, "mode": "qp"}]));

    call(&app, "POST", &format!("/api/session/{id}/undo"), None).await;
    let (status, body) = call(&app, "POST", &format!("/api/session/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(parse(&body)["error"]["reason"], "nothing-to-undo");
}

#[tokio::test]
async fn quiver_mode_mutation_drops_the_potential() {
    let app = app(None);
    let (_, body) = call(&app, "POST", "/api/session", Some(&triangle().to_string())).await;
    let id = parse(&body)["id"].as_str().unwrap().to_string();
    let (status, body) =
        call(&app, "POST", &format!("/api/session/{id}/mutate"), Some(r#"{"k": 1, "mode": "quiver"}"#)).await;
    assert_eq!(status, StatusCode::OK);
    let v = parse(&body);
    assert_eq!(v["qp"]["potential"], json!([]));
    assert_eq!(v["history"][0]["mode"], "quiver");
}

#[tokio::test]
async fn error_statuses() {
    let app = app(None);
    let (status, body) = call(&app, "GET", "/api/session/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(parse(&body)["error"]["reason"], "unknown-session");

    let (status, body) = call(&app, "POST", "/api/session", Some("{not json")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(parse(&body)["error"]["reason"], "malformed-input");

    let (_, body) = call(&app, "POST", "/api/session", Some(&triangle().to_string())).await;
    let id = parse(&body)["id"].as_str().unwrap().to_string();
    let (status, body) = call(&app, "POST", &format!("/api/session/{id}/mutate"), Some(r#"{"k": 9}"#)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(parse(&body)["error"]["reason"], "vertex-out-of-range");
    let (status, _) = call(&app, "POST", &format!("/api/session/{id}/mutate"), Some(r#"{"k": "x"}"#)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let two_cycle = json!({
        "n": 3,
        "arrows": [
            {"id": "a", "src": 1, "tgt": 2},
            {"id": "b", "src": 2, "tgt": 1},
            {"id": "c", "src": 2, "tgt": 3}
        ]
    });
    let (status, body) = call(&app, "POST", "/api/session", Some(&two_cycle.to_string())).await;
    assert_eq!(status, StatusCode::CREATED);
    let created = parse(&body);
    assert_eq!(created["twoCycles"], json!([[1, 2]]));
    let id = created["id"].as_str().unwrap().to_string();
    let (status, body) =
        call(&app, "POST", &format!("/api/session/{id}/mutate"), Some(r#"{"k": 1, "mode": "quiver"}"#)).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(parse(&body)["error"]["reason"], "two-cycle");
}

#[tokio::test]
async fn bodies_match_the_cli_serializer() {
    let app = app(None);
    let (status, body) = call(&app, "POST", "/api/classify", Some(&triangle().to_string())).await;
    assert_eq!(status, StatusCode::OK);
    let q = qpw_core::json::quiver_from_value(&triangle()).unwrap();
    assert_eq!(body, render(&commands::classify_doc(&q).unwrap()));

    let request = json!({"qp": kronecker3(), "k": 3});
    let (status, body) = call(&app, "POST", "/api/witness", Some(&request.to_string())).await;
    assert_eq!(status, StatusCode::OK);
    let p = qpw_core::json::qp_from_value(&kronecker3()).unwrap();
    let opts = WitnessOptions { k: 3, ..WitnessOptions::default() };
    assert_eq!(body, render(&commands::witness(&p, &opts, &mut |_| {}).unwrap()));
    assert_eq!(parse(&body)["status"], "witness");

    let (status, body) = call(&app, "POST", "/api/jacobian", Some(&triangle().to_string())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(parse(&body)["dim"], 6);

    let request = json!({
        "qp": kronecker3(),
        "theta": [1, -1],
        "rep": {"field": "F3", "dims": [1, 1], "mats": {"a": [[1]], "b": [[2]], "c": [[0]]}}
    });
    let (status, body) = call(&app, "POST", "/api/stable", Some(&request.to_string())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(parse(&body)["stable"], true);
}

#[tokio::test]
async fn witness_from_a_session() {
    let app = app(None);
    let (_, body) = call(&app, "POST", "/api/session", Some(&kronecker3().to_string())).await;
    let id = parse(&body)["id"].as_str().unwrap().to_string();
    let request = json!({"sessionId": id, "k": 2});
    let (status, body) = call(&app, "POST", "/api/witness", Some(&request.to_string())).await;
    assert_eq!(status, StatusCode::OK);
    let cert = parse(&body);
    assert_eq!(cert["status"], "witness");
    assert_eq!(cert["liftedInstances"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn sessions_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let first = app(Some(dir.path().to_path_buf()));
    let (_, body) = call(&first, "POST", "/api/session", Some(&triangle().to_string())).await;
    let id = parse(&body)["id"].as_str().unwrap().to_string();
    call(&first, "POST", &format!("/api/session/{id}/mutate"), Some(r#"{"k": 2}"#)).await;
    call(&first, "POST", &format!("/api/session/{id}/mutate"), Some(r#"{"k": 1}"#)).await;
    call(&first, "POST", &format!("/api/session/{id}/undo"), None).await;
    let (_, before) = call(&first, "GET", &format!("/api/session/{id}"), None).await;

    std::fs::write(dir.path().join("junk.json"), "{").unwrap();
    let second = app(Some(dir.path().to_path_buf()));
    let (status, after) = call(&second, "GET", &format!("/api/session/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(after, before);
}
