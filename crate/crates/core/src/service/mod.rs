//! TCP endpoint exposing a [`Table`] through the two-round handshake:
//! `Request → Challenge → Solution → Result`.
//!
//! Each connection runs on its own thread; every table access goes through
//! one mutex, so mutations are serialised. Challenges are single-use and
//! expire after [`EndpointConfig::expiry`]. A lookup in an empty bucket is
//! priced at zero and answered with a `Result` directly.
//!
//! Declared indices are honoured only when the endpoint runs in simulation
//! mode, which [`EndpointConfig::from_env`] reads from `DEPTH_CHARGE_SIMULATION`.

pub mod wire;

use std::io;
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::{self, JoinHandle};
use std::time::Duration;

use thiserror::Error;

use crate::rb::{Backend, ChallengeId, ChallengeStore, Solution, WorkMeter};
use crate::table::{ObjectKey, Operation, Request, Table, TableConfig, TableError};
use wire::{read_frame, read_payload, write_frame, ChallengeMsg, ErrorCode, ErrorMsg, Message, ResultMsg, SolutionMsg, WireError};

/// Environment variable enabling simulation mode (`1` or `true`).
pub const SIMULATION_ENV: &str = "DEPTH_CHARGE_SIMULATION";

pub const DEFAULT_EXPIRY: Duration = Duration::from_secs(300);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointConfig {
    pub bind: String,
    /// Honour declared indices in requests.
    pub simulation: bool,
    pub expiry: Duration,
}

impl EndpointConfig {
    pub fn new(bind: impl Into<String>) -> Self {
        EndpointConfig {
            bind: bind.into(),
            simulation: false,
            expiry: DEFAULT_EXPIRY,
        }
    }

    /// Takes the simulation flag from `DEPTH_CHARGE_SIMULATION`.
    pub fn from_env(bind: impl Into<String>, expiry: Duration) -> Self {
        let simulation = std::env::var(SIMULATION_ENV)
            .map(|v| matches!(v.trim().to_ascii_lowercase().as_str(), "1" | "true" | "yes" | "on"))
            .unwrap_or(false);
        EndpointConfig {
            bind: bind.into(),
            simulation,
            expiry,
        }
    }
}

/// A running endpoint. Dropping it does not stop the listener; call
/// [`Server::shutdown`].
pub struct Server {
    addr: SocketAddr,
    simulation: bool,
    table: Arc<Mutex<Table>>,
    stop: Arc<AtomicBool>,
    accept: Option<JoinHandle<()>>,
}

impl Server {
    pub fn spawn(cfg: TableConfig, backend: Backend, endpoint: EndpointConfig) -> io::Result<Server> {
        let mut cfg = cfg;
        cfg.accept_declared_index = endpoint.simulation;
        let seed = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        let store = ChallengeStore::new(backend, seed).with_expiry(endpoint.expiry);
        let table = Table::with_store(cfg, store).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
        let table = Arc::new(Mutex::new(table));
        let listener = TcpListener::bind(&endpoint.bind)?;
        let addr = listener.local_addr()?;
        let stop = Arc::new(AtomicBool::new(false));
        let accept = {
            let table = Arc::clone(&table);
            let stop = Arc::clone(&stop);
            thread::spawn(move || {
                for stream in listener.incoming() {
                    if stop.load(Ordering::SeqCst) {
                        break;
                    }
                    let Ok(stream) = stream else { continue };
                    let table = Arc::clone(&table);
                    thread::spawn(move || {
                        let _ = serve_connection(stream, &table);
                    });
                }
            })
        };
        Ok(Server {
            addr,
            simulation: endpoint.simulation,
            table,
            stop,
            accept: Some(accept),
        })
    }

    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn simulation(&self) -> bool {
        self.simulation
    }

    /// Shared handle to the served table, for inspection.
    pub fn table(&self) -> Arc<Mutex<Table>> {
        Arc::clone(&self.table)
    }

    /// Stops accepting connections. Open connections finish on their own.
    pub fn shutdown(mut self) {
        self.stop.store(true, Ordering::SeqCst);
        let _ = TcpStream::connect(self.addr);
        if let Some(h) = self.accept.take() {
            let _ = h.join();
        }
    }

    /// Blocks until the listener stops.
    pub fn join(mut self) {
        if let Some(h) = self.accept.take() {
            let _ = h.join();
        }
    }
}

fn error_reply(code: ErrorCode, message: impl ToString) -> Message {
    Message::Error(ErrorMsg {
        code,
        message: message.to_string(),
    })
}

fn serve_connection(mut stream: TcpStream, table: &Mutex<Table>) -> Result<(), WireError> {
    let _ = stream.set_nodelay(true);
    // The request awaiting a solution on this connection.
    let mut pending: Option<(Operation, ObjectKey)> = None;
    loop {
        let payload = match read_payload(&mut stream) {
            Ok(p) => p,
            Err(WireError::FrameTooLarge(n)) => {
                write_frame(&mut stream, &error_reply(ErrorCode::Malformed, WireError::FrameTooLarge(n)))?;
                return Ok(());
            }
            Err(_) => return Ok(()),
        };
        let msg = match wire::decode(&payload) {
            Ok(m) => m,
            Err(e) => {
                write_frame(&mut stream, &error_reply(ErrorCode::Malformed, e))?;
                continue;
            }
        };
        let reply = match msg {
            Message::Request(req) => {
                let mut t = table.lock().expect("table lock");
                match t.quote(&req) {
                    Ok(q) => match q.challenge {
                        Some(ch) => {
                            pending = Some((req.op, req.key));
                            Message::Challenge(ChallengeMsg {
                                challenge_id: ch.id.0,
                                hardness: ch.hardness,
                                nonce_salt: ch.nonce_salt,
                                backend: t.backend(),
                            })
                        }
                        None => {
                            pending = None;
                            match t.settle_free(&req) {
                                Ok(o) => Message::Result(ResultMsg {
                                    status: o.kind.into(),
                                    latency: o.latency,
                                    rb_charged: o.rb_charged,
                                }),
                                Err(_) => Message::Result(ResultMsg::REJECTED),
                            }
                        }
                    },
                    Err(TableError::DuplicateKey(k)) => error_reply(ErrorCode::DuplicateKey, format!("key {k} is already live")),
                    Err(e @ TableError::IndexOutOfRange { .. }) => error_reply(ErrorCode::IndexOutOfRange, e),
                    Err(e) => error_reply(ErrorCode::Malformed, e),
                }
            }
            Message::Solution(s) => {
                let sol = Solution {
                    challenge_id: ChallengeId(s.challenge_id),
                    proofs: s.proofs,
                };
                let mut t = table.lock().expect("table lock");
                let out = match pending.take() {
                    Some((Operation::Insert, key)) => t.insert(&key, &sol),
                    Some((Operation::Query, key)) => t.execute_query(&key, &sol),
                    Some((Operation::Delete, key)) => t.execute_delete(&key, &sol),
                    None => t.settle(&sol),
                };
                match out {
                    Ok(o) => Message::Result(ResultMsg {
                        status: o.kind.into(),
                        latency: o.latency,
                        rb_charged: o.rb_charged,
                    }),
                    Err(_) => Message::Result(ResultMsg::REJECTED),
                }
            }
            _ => error_reply(ErrorCode::UnexpectedMessage, "expected a request or a solution"),
        };
        write_frame(&mut stream, &reply)?;
    }
}

#[derive(Debug, Error)]
pub enum ClientError {
    #[error(transparent)]
    Wire(#[from] WireError),
    #[error("server error {code:?}: {message}")]
    Server { code: ErrorCode, message: String },
    #[error("unexpected reply from server")]
    Unexpected,
    #[error("gave up after {0} connection failures")]
    Exhausted(u32),
}

impl From<io::Error> for ClientError {
    fn from(e: io::Error) -> Self {
        ClientError::Wire(WireError::Io(e))
    }
}

/// First reply to a request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuoteReply {
    Challenge(ChallengeMsg),
    /// Zero-priced lookup, already answered.
    Done(ResultMsg),
}

/// Blocking client for one endpoint. Solves challenges locally and meters
/// the work.
pub struct Client {
    addr: SocketAddr,
    stream: TcpStream,
    meter: WorkMeter,
}

impl Client {
    pub fn connect(addr: impl ToSocketAddrs) -> io::Result<Client> {
        let stream = TcpStream::connect(addr)?;
        let _ = stream.set_nodelay(true);
        Ok(Client {
            addr: stream.peer_addr()?,
            stream,
            meter: WorkMeter::default(),
        })
    }

    pub fn meter(&self) -> WorkMeter {
        self.meter
    }

    fn reconnect(&mut self) -> io::Result<()> {
        self.stream = TcpStream::connect(self.addr)?;
        let _ = self.stream.set_nodelay(true);
        Ok(())
    }

    fn exchange(&mut self, msg: &Message) -> Result<Message, ClientError> {
        write_frame(&mut self.stream, msg)?;
        match read_frame(&mut self.stream)? {
            Message::Error(e) => Err(ClientError::Server {
                code: e.code,
                message: e.message,
            }),
            m => Ok(m),
        }
    }

    pub fn quote(&mut self, req: &Request) -> Result<QuoteReply, ClientError> {
        match self.exchange(&Message::Request(req.clone()))? {
            Message::Challenge(c) => Ok(QuoteReply::Challenge(c)),
            Message::Result(r) => Ok(QuoteReply::Done(r)),
            _ => Err(ClientError::Unexpected),
        }
    }

    pub fn solve(&mut self, ch: &ChallengeMsg) -> SolutionMsg {
        let sol = ch
            .backend
            .solve_parts(ChallengeId(ch.challenge_id), ch.hardness, ch.nonce_salt, &mut self.meter);
        SolutionMsg {
            challenge_id: ch.challenge_id,
            proofs: sol.proofs,
        }
    }

    pub fn settle(&mut self, sol: &SolutionMsg) -> Result<ResultMsg, ClientError> {
        match self.exchange(&Message::Solution(sol.clone()))? {
            Message::Result(r) => Ok(r),
            _ => Err(ClientError::Unexpected),
        }
    }

    /// Quote, solve, settle.
    pub fn request(&mut self, req: &Request) -> Result<ResultMsg, ClientError> {
        match self.quote(req)? {
            QuoteReply::Done(r) => Ok(r),
            QuoteReply::Challenge(ch) => {
                let sol = self.solve(&ch);
                self.settle(&sol)
            }
        }
    }

    /// Like [`Client::request`], but reconnects and starts over with a fresh
    /// quote when the connection drops, up to `attempts` times.
    pub fn request_with_retry(&mut self, req: &Request, attempts: u32) -> Result<(ResultMsg, u32), ClientError> {
        let mut failures = 0;
        loop {
            match self.request(req) {
                Err(ClientError::Wire(e)) if e.is_io() => {
                    failures += 1;
                    if failures >= attempts {
                        return Err(ClientError::Exhausted(failures));
                    }
                    let _ = self.reconnect();
                }
                other => return other.map(|r| (r, failures)),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DriveReport {
    pub results: Vec<ResultMsg>,
    pub meter: WorkMeter,
    pub retries: u32,
}

/// Replays `script` against the endpoint at `addr`, one connection, in order.
pub fn client_drive(script: &[Request], addr: impl ToSocketAddrs) -> Result<DriveReport, ClientError> {
    let mut report = DriveReport {
        results: Vec::with_capacity(script.len()),
        meter: WorkMeter::default(),
        retries: 0,
    };
    if script.is_empty() {
        return Ok(report);
    }
    let mut client = Client::connect(addr)?;
    for req in script {
        let (r, retries) = client.request_with_retry(req, 3)?;
        report.retries += retries;
        report.results.push(r);
    }
    report.meter = client.meter();
    Ok(report)
}
