use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use rank3_toolkit::gamefile::parse_game;
use rank3_toolkit::service::{children_view, router, ServiceConfig};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

async fn create(app: &Router, body: Value) -> u64 {
    let (status, v) = call(app, "POST", "/games", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v["id"].as_u64().unwrap()
}

#[tokio::test]
async fn create_and_fetch() {
    let app = router(ServiceConfig::default());
    let id = create(
        &app,
        json!({"edges": [["a", "b"], ["b", "c"]], "player": "M"}),
    )
    .await;
    let (status, v) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["state"]["classification"], "Fam1");
    assert_eq!(v["state"]["sdepth"], 0);
    assert_eq!(v["state"]["best_move"], "b");
    assert_eq!(v["state"]["vertices"], json!(["a", "b", "c"]));
}

#[tokio::test]
async fn bad_requests() {
    let app = router(ServiceConfig::default());
    let (status, v) = call(
        &app,
        "POST",
        "/games",
        Some(json!({"edges": [["a", "b", "c", "d"]]})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(v["error"].is_string());
    let (status, _) = call(&app, "POST", "/games", Some(json!({}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", "/games", Some(json!({"preset": "nope"}))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "GET", "/games/999", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "GET", "/jobs/999", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let id = create(&app, json!({"preset": "v-shape"})).await;
    let (status, _) = call(
        &app,
        "POST",
        &format!("/games/{id}/move"),
        Some(json!({"vertex": "z"})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn finished_games_refuse_moves() {
    let app = router(ServiceConfig::default());
    let id = create(&app, json!({"edges": [["a"]], "player": "M"})).await;
    let (status, v) = call(
        &app,
        "POST",
        &format!("/games/{id}/move"),
        Some(json!({"vertex": "a"})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert!(v["state"]["finished"].is_string());
    let (status, _) = call(&app, "POST", &format!("/games/{id}/engine-move"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn engine_completes_a_v_shape() {
    let app = router(ServiceConfig::default());
    let id = create(&app, json!({"preset": "v-shape", "engine": "M"})).await;
    // Maker moves first and the engine plays Maker
    let (status, _) = call(
        &app,
        "POST",
        &format!("/games/{id}/move"),
        Some(json!({"vertex": "a"})),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);

    let (status, v) = call(&app, "POST", &format!("/games/{id}/engine-move"), None).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["move"], "b");
    assert_eq!(v["nonstrategic"], false);
    let (status, _) = call(
        &app,
        "POST",
        &format!("/games/{id}/move"),
        Some(json!({"vertex": "a"})),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let (_, v) = call(&app, "POST", &format!("/games/{id}/engine-move"), None).await;
    assert_eq!(v["move"], "c");
    assert_eq!(v["session"]["state"]["finished"], "Maker");
    assert_eq!(v["session"]["history"].as_array().unwrap().len(), 3);
}

#[tokio::test]
async fn losing_engine_move_is_flagged() {
    let app = router(ServiceConfig::default());
    let id = create(
        &app,
        json!({"edges": [["w1", "x", "y"], ["w2", "x", "y"]], "player": "M", "engine": "M"}),
    )
    .await;
    let (status, v) = call(&app, "POST", &format!("/games/{id}/engine-move"), None).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    assert_eq!(v["nonstrategic"], true);
}

#[tokio::test]
async fn large_positions_run_as_jobs() {
    let app = router(ServiceConfig {
        sync_vertex_limit: 0,
    });
    let id = create(&app, json!({"preset": "hot-path"})).await;
    let (status, v) = call(&app, "POST", &format!("/games/{id}/engine-move"), None).await;
    assert_eq!(status, StatusCode::ACCEPTED, "{v}");
    let poll = v["poll"].as_str().unwrap().to_string();
    let mut done = Value::Null;
    for _ in 0..200 {
        let (status, v) = call(&app, "GET", &poll, None).await;
        assert_eq!(status, StatusCode::OK);
        if v["status"] != "running" {
            done = v;
            break;
        }
        tokio::time::sleep(std::time::Duration::from_millis(10)).await;
    }
    assert_eq!(done["status"], "done", "{done}");
    assert_eq!(done["result"]["move"], "b");
}

#[tokio::test]
async fn presets_are_listed_and_playable() {
    let app = router(ServiceConfig::default());
    let (status, v) = call(&app, "GET", "/presets", None).await;
    assert_eq!(status, StatusCode::OK);
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"extremal-4"));
    for name in names {
        create(&app, json!({ "preset": name })).await;
    }
    let id = create(
        &app,
        json!({"generator": {"kind": "extremal", "n": 6}, "player": "B"}),
    )
    .await;
    let (_, v) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(v["state"]["edges"].as_array().unwrap().len(), 12);
    assert_eq!(v["state"]["winner"], "Breaker");
}

#[tokio::test]
async fn analysis_matches_the_library() {
    let app = router(ServiceConfig::default());
    let text = include_str!("fixtures/mined/sdep3_M.game");
    let g = parse_game(text).unwrap().game;
    let edges: Vec<Vec<String>> = g
        .hypergraph()
        .edges()
        .iter()
        .map(|e| e.vertices().iter().map(|&v| g.label(v)).collect())
        .collect();
    let id = create(&app, json!({"edges": edges, "player": "M"})).await;
    let (status, v) = call(&app, "GET", &format!("/games/{id}/analysis"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        v["children"],
        serde_json::to_value(children_view(&g)).unwrap()
    );
    assert_eq!(v["session"]["state"]["sdepth"], 3);
    assert!(v["hot_path"].is_null());
}
