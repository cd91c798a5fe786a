//! JSON game service.
//!
//! Sessions live in memory. Every response carries the full normalized
//! position with its classification and solver verdict, so a client never has
//! to compute anything itself. Moves within a session are serialized by a
//! per-session lock; engine moves on large positions run as pollable jobs.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use rank3::hotpath::find_hot_path;
use rank3::solver::{evaluate_children, solve};
use rank3::{EndgameTag, Game, Player};
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;

use crate::gamefile::game_from_labels;
use crate::generators::{gen_extremal, gen_random};

/// Largest generated game the service will create.
pub const MAX_GENERATED_VERTICES: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct VirtualEdgeView {
    pub pair: [String; 2],
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GameView {
    pub to_move: char,
    pub vertices: Vec<String>,
    pub edges: Vec<Vec<String>>,
    pub virtual_edges: Vec<VirtualEdgeView>,
    pub classification: EndgameTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sdepth: Option<u32>,
    pub winner: Player,
    /// Set once an edge is completed or every edge is gone.
    pub finished: Option<Player>,
    pub best_move: Option<String>,
    pub nonstrategic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HotPathView {
    /// The path as vertex sets, ends included.
    pub sequence: Vec<Vec<String>>,
    pub start_generators: Option<[String; 2]>,
    pub end_generators: Option<[String; 2]>,
}

fn edge_labels(g: &Game, e: &rank3::Edge) -> Vec<String> {
    let mut names: Vec<String> = e.vertices().iter().map(|&v| g.label(v)).collect();
    names.sort();
    names
}

/// The position with its classification and solver verdict.
pub fn game_view(g: &Game) -> GameView {
    let r = solve(g);
    let h = g.hypergraph();
    let mut edges: Vec<Vec<String>> = h.edges().iter().map(|e| edge_labels(g, e)).collect();
    edges.sort();
    let virtual_edges = h
        .virtual_edges()
        .iter()
        .map(|ve| VirtualEdgeView {
            pair: ve.pair.map(|v| g.label(v)),
            generators: ve.generators.iter().map(|&v| g.label(v)).collect(),
        })
        .collect();
    GameView {
        to_move: g.to_move().code(),
        vertices: h.vertices().map(|v| g.label(v)).collect(),
        edges,
        virtual_edges,
        classification: r.class,
        sdepth: r.sdepth.value(),
        winner: r.winner,
        finished: g.outcome(),
        best_move: r.best_move.map(|v| g.label(v)),
        nonstrategic: r.nonstrategic,
    }
}

/// Exact shortened depth after each move, keyed by label; `null` when
/// Breaker wins. Empty for decided games.
pub fn children_view(g: &Game) -> BTreeMap<String, Option<u32>> {
    evaluate_children(g)
        .map(|m| {
            m.into_iter()
                .map(|(v, d)| (g.label(v), d.value()))
                .collect()
        })
        .unwrap_or_default()
}

pub fn hot_path_view(g: &Game) -> Option<HotPathView> {
    let w = find_hot_path(g.hypergraph())?;
    Some(HotPathView {
        sequence: w.sequence().iter().map(|e| edge_labels(g, e)).collect(),
        start_generators: w.start_generators.map(|p| p.map(|v| g.label(v))),
        end_generators: w.end_generators.map(|p| p.map(|v| g.label(v))),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HistoryEntry {
    pub player: char,
    pub vertex: String,
    pub engine: bool,
}

struct Session {
    game: Game,
    engine: Option<Player>,
    history: Vec<HistoryEntry>,
}

#[derive(Serialize)]
pub struct SessionView {
    pub id: u64,
    pub engine: Option<char>,
    pub history: Vec<HistoryEntry>,
    pub state: GameView,
}

impl Session {
    fn view(&self, id: u64) -> SessionView {
        SessionView {
            id,
            engine: self.engine.map(Player::code),
            history: self.history.clone(),
            state: game_view(&self.game),
        }
    }

    fn apply(&mut self, label: &str, engine: bool) -> Result<(), ApiError> {
        if let Some(w) = self.game.outcome() {
            return Err(ApiError::conflict(format!("game is over, {w} won")));
        }
        let v = self
            .game
            .find_label(label)
            .ok_or_else(|| ApiError::bad_request(format!("vertex `{label}` is not in play")))?;
        let player = self.game.to_move();
        self.game = self
            .game
            .play(v)
            .map_err(|e| ApiError::bad_request(e.to_string()))?;
        self.history.push(HistoryEntry {
            player: player.code(),
            vertex: label.to_string(),
            engine,
        });
        Ok(())
    }
}

#[derive(Serialize)]
pub struct EngineMoveView {
    #[serde(rename = "move")]
    pub vertex: String,
    pub nonstrategic: bool,
    pub session: SessionView,
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum JobView {
    Running,
    Done { result: EngineMoveView },
    Failed { error: String },
}

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    /// Engine moves on positions with more vertices than this run as jobs.
    pub sync_vertex_limit: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            sync_vertex_limit: 40,
        }
    }
}

#[derive(Default)]
struct AppState {
    config: ServiceConfig,
    sessions: std::sync::Mutex<HashMap<u64, Arc<Mutex<Session>>>>,
    jobs: std::sync::Mutex<HashMap<u64, Arc<std::sync::Mutex<JobView>>>>,
    next_id: AtomicU64,
}

impl AppState {
    fn session(&self, id: u64) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .lock()
            .expect("session map lock")
            .get(&id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("no game {id}")))
    }

    fn fresh_id(&self) -> u64 {
        self.next_id.fetch_add(1, Ordering::Relaxed) + 1
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: String) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message,
        }
    }

    fn not_found(message: String) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            message,
        }
    }

    fn conflict(message: String) -> Self {
        ApiError {
            status: StatusCode::CONFLICT,
            message,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(serde_json::json!({ "error": self.message })),
        )
            .into_response()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub player: char,
    pub edges: Vec<Vec<String>>,
}

pub fn presets() -> Vec<Preset> {
    let p = |name, player, edges: &[&[&str]]| Preset {
        name,
        player,
        edges: edges
            .iter()
            .map(|e| e.iter().map(|s| s.to_string()).collect())
            .collect(),
    };
    vec![
        p("v-shape", 'M', &[&["a", "b"], &["b", "c"]]),
        p(
            "hot-path",
            'M',
            &[&["a", "b"], &["b", "c", "d"], &["d", "e"]],
        ),
        p(
            "two-v-shapes",
            'B',
            &[&["a", "b"], &["b", "c"], &["d", "e"], &["e", "f"]],
        ),
        p(
            "extremal-4",
            'M',
            &[
                &["u1", "u2", "u3"],
                &["u1", "u2", "u4"],
                &["u3", "u4", "u1"],
                &["u3", "u4", "u2"],
            ],
        ),
    ]
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorSpec {
    Extremal { n: usize },
    Random { n: usize, m: usize, seed: u64 },
}

#[derive(Deserialize, Default)]
pub struct CreateGame {
    pub edges: Option<Vec<Vec<String>>>,
    pub preset: Option<String>,
    pub generator: Option<GeneratorSpec>,
    /// `M` or `B`; defaults to the preset's player, else Maker.
    pub player: Option<String>,
    /// Side the engine plays, if any.
    pub engine: Option<String>,
}

#[derive(Deserialize)]
pub struct MoveRequest {
    pub vertex: String,
}

fn player_code(s: &str) -> Result<Player, ApiError> {
    match s {
        "M" | "Maker" => Ok(Player::Maker),
        "B" | "Breaker" => Ok(Player::Breaker),
        other => Err(ApiError::bad_request(format!("unknown player `{other}`"))),
    }
}

fn build_game(req: &CreateGame) -> Result<Game, ApiError> {
    let player = req.player.as_deref().map(player_code).transpose()?;
    let sources = [
        req.edges.is_some(),
        req.preset.is_some(),
        req.generator.is_some(),
    ];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(ApiError::bad_request(
            "give exactly one of `edges`, `preset` or `generator`".into(),
        ));
    }
    let labelled = |edges: &[Vec<String>], p: Player| {
        game_from_labels(edges, p)
            .map(|parsed| parsed.game)
            .map_err(|e| ApiError::bad_request(e.to_string()))
    };
    if let Some(edges) = &req.edges {
        return labelled(edges, player.unwrap_or(Player::Maker));
    }
    if let Some(name) = &req.preset {
        let preset = presets()
            .into_iter()
            .find(|p| p.name == name)
            .ok_or_else(|| ApiError::not_found(format!("no preset `{name}`")))?;
        let p = player.unwrap_or(player_code(&preset.player.to_string())?);
        return labelled(&preset.edges, p);
    }
    let p = player.unwrap_or(Player::Maker);
    let too_big = |n: usize| {
        (n > MAX_GENERATED_VERTICES).then(|| {
            ApiError::bad_request(format!(
                "at most {MAX_GENERATED_VERTICES} vertices can be generated"
            ))
        })
    };
    match req.generator.as_ref().expect("one source is present") {
        GeneratorSpec::Extremal { n } => {
            if let Some(e) = too_big(*n) {
                return Err(e);
            }
            gen_extremal(*n, p).map_err(|e| ApiError::bad_request(e.to_string()))
        }
        GeneratorSpec::Random { n, m, seed } => {
            if let Some(e) = too_big(*n) {
                return Err(e);
            }
            gen_random(*n, *m, *seed, p)
                .map(|r| r.game)
                .map_err(|e| ApiError::bad_request(e.to_string()))
        }
    }
}

async fn create_game(
    State(app): State<Arc<AppState>>,
    Json(req): Json<CreateGame>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let game = build_game(&req)?;
    let engine = req.engine.as_deref().map(player_code).transpose()?;
    let session = Session {
        game,
        engine,
        history: Vec::new(),
    };
    let id = app.fresh_id();
    let view = blocking(move || (session.view(id), session)).await?;
    app.sessions
        .lock()
        .expect("session map lock")
        .insert(id, Arc::new(Mutex::new(view.1)));
    Ok((StatusCode::CREATED, Json(view.0)))
}

async fn get_game(
    State(app): State<Arc<AppState>>,
    Path(id): Path<u64>,
) -> Result<Json<SessionView>, ApiError> {
    let session = app.session(id)?.lock_owned().await;
    Ok(Json(blocking(move || session.view(id)).await?))
}

async fn human_move(
    State(app): State<Arc<AppState>>,
    Path(id): Path<u64>,
    Json(req): Json<MoveRequest>,
) -> Result<Json<SessionView>, ApiError> {
    let mut session = app.session(id)?.lock_owned().await;
    if session.engine == Some(session.game.to_move()) && session.game.outcome().is_none() {
        return Err(ApiError::conflict(format!(
            "it is the engine's turn ({})",
            session.game.to_move()
        )));
    }
    session.apply(&req.vertex, false)?;
    Ok(Json(blocking(move || session.view(id)).await?))
}

fn engine_step(session: &mut Session, id: u64) -> Result<EngineMoveView, ApiError> {
    if let Some(w) = session.game.outcome() {
        return Err(ApiError::conflict(format!("game is over, {w} won")));
    }
    let r = solve(&session.game);
    let v = r
        .best_move
        .expect("an undecided position has a recommended move");
    let label = session.game.label(v);
    session.apply(&label, true)?;
    Ok(EngineMoveView {
        vertex: label,
        nonstrategic: r.nonstrategic,
        session: session.view(id),
    })
}

async fn engine_move(
    State(app): State<Arc<AppState>>,
    Path(id): Path<u64>,
) -> Result<Response, ApiError> {
    let mut session = app.session(id)?.lock_owned().await;
    if session.game.vertex_count() <= app.config.sync_vertex_limit {
        let view = blocking(move || engine_step(&mut session, id)).await??;
        return Ok(Json(view).into_response());
    }
    let job = app.fresh_id();
    let slot = Arc::new(std::sync::Mutex::new(JobView::Running));
    app.jobs
        .lock()
        .expect("job map lock")
        .insert(job, slot.clone());
    tokio::task::spawn_blocking(move || {
        let outcome = match engine_step(&mut session, id) {
            Ok(result) => JobView::Done { result },
            Err(e) => JobView::Failed { error: e.message },
        };
        *slot.lock().expect("job lock") = outcome;
    });
    Ok((
        StatusCode::ACCEPTED,
        Json(serde_json::json!({ "job": job, "poll": format!("/jobs/{job}") })),
    )
        .into_response())
}

async fn get_job(
    State(app): State<Arc<AppState>>,
    Path(job): Path<u64>,
) -> Result<Response, ApiError> {
    let slot = app
        .jobs
        .lock()
        .expect("job map lock")
        .get(&job)
        .cloned()
        .ok_or_else(|| ApiError::not_found(format!("no job {job}")))?;
    let body = serde_json::to_value(&*slot.lock().expect("job lock")).expect("job views serialize");
    Ok(Json(body).into_response())
}

#[derive(Serialize)]
pub struct AnalysisView {
    pub session: SessionView,
    pub children: BTreeMap<String, Option<u32>>,
    pub hot_path: Option<HotPathView>,
}

async fn analysis(
    State(app): State<Arc<AppState>>,
    Path(id): Path<u64>,
) -> Result<Json<AnalysisView>, ApiError> {
    let session = app.session(id)?.lock_owned().await;
    let view = blocking(move || AnalysisView {
        children: children_view(&session.game),
        hot_path: hot_path_view(&session.game),
        session: session.view(id),
    })
    .await?;
    Ok(Json(view))
}

async fn list_presets() -> Json<Vec<Preset>> {
    Json(presets())
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> T + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        message: e.to_string(),
    })
}

pub fn router(config: ServiceConfig) -> Router {
    let state = Arc::new(AppState {
        config,
        ..AppState::default()
    });
    Router::new()
        .route("/games", post(create_game))
        .route("/games/:id", get(get_game))
        .route("/games/:id/move", post(human_move))
        .route("/games/:id/engine-move", post(engine_move))
        .route("/games/:id/analysis", get(analysis))
        .route("/jobs/:id", get(get_job))
        .route("/presets", get(list_presets))
        .with_state(state)
}

pub async fn serve(port: u16, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let mut app = router(ServiceConfig::default());
    if let Some(dir) = static_dir {
        app = app.fallback_service(tower_http::services::ServeDir::new(dir));
    }
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    axum::serve(listener, app).await
}
