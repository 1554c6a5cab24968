//! Local HTTP service for human-vs-engine Hamiltonicity games.
//!
//! Endpoints:
//! - `POST /games` creates a session; the engine premoves when it starts.
//! - `GET /games/{id}` returns the snapshot.
//! - `POST /games/{id}/moves` takes the human's batch and returns the engine reply.
//! - `GET /games/{id}/stream` is a server-sent event stream of deltas, replaying
//!   earlier ones first.
//! - `DELETE /games/{id}` drops the session.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::{Stream, StreamExt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::broadcast;
use tokio_stream::wrappers::BroadcastStream;

use crate::error::Error;
use crate::game::dirac::maker_path_overlay;
use crate::game::engines::{build_breaker, build_maker, hamilton_family, Engine};
use crate::game::{check_batch, potential, Bias, GameState, Goal, HamiltonGoal, Player, Strategy, WinningFamily};
use crate::generators;
use crate::graph::{Graph, GraphJson};
use crate::rotation::Budget;

/// Per-move rotation step budget for the engine's goal checks.
pub const DEFAULT_STEP_BUDGET: usize = 100_000;

/// Hosts up to this order get an explicit Hamiltonicity family, used for
/// potential readings and the family-based engines.
const FAMILY_MAX_N: usize = 8;

#[derive(Clone, Debug)]
pub struct ServiceConfig {
    pub persist: Option<PathBuf>,
    pub step_budget: usize,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            persist: None,
            step_budget: DEFAULT_STEP_BUDGET,
        }
    }
}

/// A family name such as `K6` or `2K5M`, an edge list in the text format,
/// or `{"n": .., "edges": [..]}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GraphSpec {
    Named(String),
    Inline(GraphJson),
}

impl GraphSpec {
    fn resolve(self) -> crate::Result<Graph> {
        match self {
            GraphSpec::Named(s) => match generators::by_name(&s) {
                Some(g) => Ok(g),
                None => Graph::parse(&s),
            },
            GraphSpec::Inline(raw) => Graph::try_from(raw),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct CreateGame {
    pub graph: GraphSpec,
    pub bias: Bias,
    pub human_role: Player,
    #[serde(default)]
    pub engine: Option<Engine>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub first: Option<Player>,
    #[serde(default)]
    pub beta: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct MoveRequest {
    pub elements: Vec<usize>,
}

/// One claim batch as pushed on the stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Delta {
    pub ply: usize,
    pub player: Player,
    pub elements: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maker_path_overlay: Option<Vec<usize>>,
    pub state_hash: String,
    pub over: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub graph: GraphJson,
    pub bias: Bias,
    pub human_role: Player,
    pub engine: Engine,
    pub seed: u64,
    pub first: Player,
    pub created_ms: u64,
    pub updated_ms: u64,
    pub ply: usize,
    pub to_move: Option<Player>,
    pub remaining: usize,
    pub unclaimed: Vec<usize>,
    pub maker: Vec<usize>,
    pub breaker: Vec<usize>,
    pub over: bool,
    pub winner: Option<Player>,
    pub certificate: Option<Vec<usize>>,
    pub state_hash: String,
    pub state: GameState,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MoveReply {
    pub accepted: Vec<usize>,
    pub replies: Vec<Delta>,
    pub session: SessionView,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    reason: String,
}

impl ApiError {
    fn new(status: StatusCode, reason: impl Into<String>) -> Self {
        ApiError {
            status,
            reason: reason.into(),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::IllegalMove(_) => StatusCode::CONFLICT,
            Error::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let kind = match self.status {
            StatusCode::NOT_FOUND => "not_found",
            StatusCode::CONFLICT => "illegal_move",
            StatusCode::BAD_REQUEST => "bad_request",
            _ => "internal",
        };
        (self.status, Json(json!({ "error": kind, "reason": self.reason }))).into_response()
    }
}

type ApiResult<T> = std::result::Result<T, ApiError>;

struct Session {
    id: String,
    graph: Graph,
    human_role: Player,
    engine: Engine,
    seed: u64,
    state: GameState,
    strategy: Box<dyn Strategy>,
    rng: ChaCha8Rng,
    goal: HamiltonGoal,
    family: Option<WinningFamily>,
    deltas: Vec<Delta>,
    tx: broadcast::Sender<Delta>,
    winner: Option<Player>,
    certificate: Option<Vec<usize>>,
    created_ms: u64,
    updated_ms: u64,
    persist: Option<PathBuf>,
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

impl Session {
    fn over(&self) -> bool {
        self.winner.is_some() || self.state.is_over()
    }

    fn view(&self) -> SessionView {
        let over = self.over();
        let winner = self.winner.or_else(|| over.then_some(Player::Breaker));
        SessionView {
            id: self.id.clone(),
            graph: GraphJson::from(&self.graph),
            bias: self.state.bias(),
            human_role: self.human_role,
            engine: self.engine,
            seed: self.seed,
            first: self.state.first(),
            created_ms: self.created_ms,
            updated_ms: self.updated_ms,
            ply: self.deltas.len(),
            to_move: (!over).then(|| self.state.to_move()),
            remaining: if over { 0 } else { self.state.remaining() },
            unclaimed: self.state.unclaimed(),
            maker: self.state.elements_of(Player::Maker),
            breaker: self.state.elements_of(Player::Breaker),
            over,
            winner,
            certificate: self.certificate.clone(),
            state_hash: self.state.state_hash(),
            state: self.state.clone(),
        }
    }

    fn log(&self, event: serde_json::Value) {
        let Some(dir) = &self.persist else { return };
        let path = dir.join(format!("{}.jsonl", self.id));
        let res = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .and_then(|mut f| writeln!(f, "{event}"));
        if let Err(e) = res {
            eprintln!("persist {}: {e}", path.display());
        }
    }

    /// Claims a validated batch, stopping early on a Maker win, and
    /// publishes the delta.
    fn apply(&mut self, who: Player, batch: &[usize]) -> crate::Result<Delta> {
        let mut claimed = Vec::with_capacity(batch.len());
        for &x in batch {
            self.state.claim_as(who, x)?;
            claimed.push(x);
            if who == Player::Maker && self.goal.maker_wins(&self.state) {
                self.winner = Some(Player::Maker);
                self.certificate = self.goal.certificate();
                break;
            }
        }
        if self.winner.is_none() && self.state.is_over() {
            self.winner = Some(Player::Breaker);
        }
        self.state.check_invariants()?;
        self.updated_ms = now_ms();
        let overlay = if self.engine.plays_maker() && self.human_role == Player::Breaker {
            self.strategy.overlay()
        } else {
            None
        };
        let delta = Delta {
            ply: self.deltas.len() + 1,
            player: who,
            elements: claimed,
            potential: self
                .family
                .as_ref()
                .map(|f| potential(f, &self.state, self.state.bias().maker, self.state.bias().breaker)),
            maker_path_overlay: Some(overlay.unwrap_or_else(|| maker_path_overlay(&self.graph, &self.state))),
            state_hash: self.state.state_hash(),
            over: self.over(),
        };
        self.deltas.push(delta.clone());
        self.log(json!({ "event": "delta", "delta": &delta }));
        // no subscribers is fine
        let _ = self.tx.send(delta.clone());
        Ok(delta)
    }

    fn engine_turns(&mut self) -> crate::Result<Vec<Delta>> {
        let me = self.human_role.other();
        let mut out = Vec::new();
        while !self.over() && self.state.to_move() == me {
            let count = self.state.remaining();
            let batch = self.strategy.choose(&self.state, count, &mut self.rng)?;
            if let Err(reason) = check_batch(&self.state, &batch, count) {
                return Err(Error::IllegalMove(format!(
                    "engine produced an illegal batch: {reason}"
                )));
            }
            out.push(self.apply(me, &batch)?);
        }
        Ok(out)
    }

    fn human_move(&mut self, elements: Vec<usize>) -> ApiResult<MoveReply> {
        if self.over() {
            return Err(ApiError::new(StatusCode::CONFLICT, "game over"));
        }
        if self.state.to_move() != self.human_role {
            return Err(ApiError::new(StatusCode::CONFLICT, "not your turn"));
        }
        check_batch(&self.state, &elements, self.state.remaining())
            .map_err(|r| ApiError::new(StatusCode::CONFLICT, r))?;
        self.apply(self.human_role, &elements)?;
        let replies = self
            .engine_turns()
            .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
        Ok(MoveReply {
            accepted: elements,
            replies,
            session: self.view(),
        })
    }
}

pub struct AppState {
    config: ServiceConfig,
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> Arc<Self> {
        Arc::new(AppState {
            config,
            sessions: Mutex::new(HashMap::new()),
        })
    }

    fn get(&self, id: &str) -> ApiResult<Arc<Mutex<Session>>> {
        self.sessions
            .lock()
            .expect("session table")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown session `{id}`")))
    }

    fn create(&self, req: CreateGame) -> ApiResult<SessionView> {
        let bad = |e: Error| ApiError::new(StatusCode::BAD_REQUEST, e.to_string());
        let graph = req.graph.resolve().map_err(bad)?;
        let bias = Bias::new(req.bias.maker, req.bias.breaker).map_err(bad)?;
        let engine_role = req.human_role.other();
        let engine = req.engine.unwrap_or(match engine_role {
            Player::Maker => Engine::Dirac,
            Player::Breaker => Engine::GreedyBlock,
        });
        let seed = req.seed.unwrap_or_else(rand::random);
        let first = req.first.unwrap_or(Player::Maker);
        let family = if engine.needs_family() || graph.n() <= FAMILY_MAX_N {
            match hamilton_family(&graph) {
                Ok(f) => Some(f),
                Err(e) if engine.needs_family() => return Err(bad(e)),
                Err(_) => None,
            }
        } else {
            None
        };
        let strategy = match engine_role {
            Player::Maker => {
                build_maker(engine, &graph, bias, family.as_ref(), seed, req.beta.unwrap_or(1.0))
                    .map_err(bad)?
                    .strategy
            }
            Player::Breaker => build_breaker(engine, &graph, bias, family.as_ref()).map_err(bad)?,
        };
        let id = format!("{:016x}", rand::random::<u64>());
        let budget = Budget {
            restarts: 1,
            max_steps: self.config.step_budget,
        };
        let (tx, _) = broadcast::channel(1024);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(match engine_role {
            Player::Maker => 0,
            Player::Breaker => 1,
        });
        let now = now_ms();
        let mut s = Session {
            id: id.clone(),
            goal: HamiltonGoal::new(graph.clone(), budget, seed),
            state: GameState::new(graph.m(), bias, first),
            graph,
            human_role: req.human_role,
            engine,
            seed,
            strategy,
            rng,
            family,
            deltas: Vec::new(),
            tx,
            winner: None,
            certificate: None,
            created_ms: now,
            updated_ms: now,
            persist: self.config.persist.clone(),
        };
        s.log(json!({
            "event": "create",
            "id": &id,
            "graph": GraphJson::from(&s.graph),
            "bias": bias,
            "human_role": s.human_role,
            "engine": engine,
            "seed": seed,
            "first": first,
        }));
        s.engine_turns()
            .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?;
        let view = s.view();
        self.sessions
            .lock()
            .expect("session table")
            .insert(id, Arc::new(Mutex::new(s)));
        Ok(view)
    }
}

fn payload<T>(p: std::result::Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    p.map(|Json(t)| t)
        .map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.body_text()))
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
}

async fn create_game(
    State(app): State<Arc<AppState>>,
    body: std::result::Result<Json<CreateGame>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<SessionView>)> {
    let req = payload(body)?;
    let view = blocking(move || app.create(req)).await?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_game(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    let s = app.get(&id)?;
    let view = s.lock().expect("session").view();
    Ok(Json(view))
}

async fn post_moves(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: std::result::Result<Json<MoveRequest>, JsonRejection>,
) -> ApiResult<Json<MoveReply>> {
    let req = payload(body)?;
    let s = app.get(&id)?;
    let reply = blocking(move || s.lock().expect("session").human_move(req.elements)).await?;
    Ok(Json(reply))
}

async fn delete_game(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<StatusCode> {
    let s = app
        .sessions
        .lock()
        .expect("session table")
        .remove(&id)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, format!("unknown session `{id}`")))?;
    s.lock().expect("session").log(json!({ "event": "delete" }));
    Ok(StatusCode::NO_CONTENT)
}

async fn stream_game(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<Sse<impl Stream<Item = std::result::Result<Event, std::convert::Infallible>>>> {
    let s = app.get(&id)?;
    let (past, rx, over) = {
        let s = s.lock().expect("session");
        (s.deltas.clone(), s.tx.subscribe(), s.over())
    };
    let live = if over {
        futures::stream::empty().boxed()
    } else {
        BroadcastStream::new(rx).filter_map(|d| async move { d.ok() }).boxed()
    };
    let deltas = futures::stream::iter(past).chain(live);
    // stop after the delta that ends the game
    let events = deltas
        .scan(false, |done, d| {
            let out = if *done { None } else { Some(d) };
            if let Some(d) = &out {
                *done = d.over;
            }
            futures::future::ready(out)
        })
        .map(|d| {
            Ok(Event::default()
                .event("delta")
                .id(d.ply.to_string())
                .json_data(&d)
                .expect("delta json"))
        });
    Ok(Sse::new(events).keep_alive(KeepAlive::default()))
}

pub fn router(app: Arc<AppState>) -> Router {
    Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game).delete(delete_game))
        .route("/games/{id}/moves", post(post_moves))
        .route("/games/{id}/stream", get(stream_game))
        .with_state(app)
}

/// Serves until Ctrl-C.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> crate::Result<()> {
    if let Some(dir) = &config.persist {
        std::fs::create_dir_all(dir)?;
    }
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(AppState::new(config)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
