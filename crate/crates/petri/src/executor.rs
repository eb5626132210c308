//! Parallel execution of a net.
//!
//! One coordinator owns the marking. Expression transitions fire on the
//! coordinator; task transitions consume their tokens at dispatch, run on
//! a worker and produce at completion. A run ends when nothing is enabled
//! and no task is in flight, or right after a Heureka.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use crossbeam_channel::{unbounded, Receiver, RecvTimeoutError, Sender};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::marking::{check_produced, consume, eval_body, produce, search_bindings, Binding, FireError, Marking, Token};
use crate::net::{Body, Net};
use crate::tasks::{TaskFn, TaskRegistry};
use crate::types::Value;

const POLL: Duration = Duration::from_millis(20);

/// Raises a Heureka from outside the run. A handle belongs to one run.
#[derive(Clone, Debug, Default)]
pub struct RunHandle {
    flag: Arc<AtomicBool>,
}

impl RunHandle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Idempotent; has no effect once the run has returned.
    pub fn heureka(&self) {
        self.flag.store(true, Ordering::SeqCst);
    }

    pub fn is_raised(&self) -> bool {
        self.flag.load(Ordering::SeqCst)
    }

    /// The flag task bodies poll for cancellation.
    pub fn cancel_flag(&self) -> Arc<AtomicBool> {
        self.flag.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    /// An expression transition fired.
    Fire,
    /// A task transition took its tokens and started.
    Dispatch,
    /// A task finished and its tokens were produced.
    Complete,
    /// An in-flight task was abandoned after a Heureka. Its tokens were
    /// already listed under the dispatch.
    Cancel,
    /// Tokens were removed after a Heureka.
    Drain,
    /// The completion rule put a token on the output place.
    Completion,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEvent {
    pub seq: u64,
    pub kind: EventKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transition: Option<String>,
    pub consumed: Vec<u64>,
    pub produced: Vec<u64>,
    pub wall_time: f64,
}

/// What an observer sees for every event. For completions and cancels
/// `consumed` holds the tokens taken at dispatch, while the trace event
/// itself lists them only under the dispatch.
pub struct Firing<'a> {
    pub event: &'a TraceEvent,
    pub consumed: &'a [Token],
    pub produced: &'a [Token],
}

#[derive(Default)]
pub struct RunConfig<'a> {
    /// Worker threads for task transitions; at least 1.
    pub workers: usize,
    /// 0 keeps the FIFO order; anything else shuffles the choice among
    /// enabled bindings with a generator seeded by it.
    pub seed: u64,
    /// Receives one JSON object per event and a final summary line.
    pub trace: Option<&'a mut dyn Write>,
    pub observer: Option<&'a mut dyn FnMut(&Firing<'_>)>,
    pub max_firings: Option<u64>,
    pub handle: Option<RunHandle>,
}

impl<'a> RunConfig<'a> {
    pub fn new(workers: usize) -> Self {
        Self {
            workers,
            ..Self::default()
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub final_marking: Marking,
    /// Expression firings plus task dispatches.
    pub firings: u64,
    pub per_transition: BTreeMap<String, u64>,
    pub wall_time: Duration,
    pub cancelled_tasks: u64,
    pub heureka: bool,
    pub workers: usize,
    output: Option<String>,
}

impl RunResult {
    pub fn output(&self) -> Vec<&Value> {
        match &self.output {
            Some(o) => self.final_marking.values(o),
            None => Vec::new(),
        }
    }

    pub fn fired(&self, transition: &str) -> u64 {
        self.per_transition.get(transition).copied().unwrap_or(0)
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("workers must be at least 1")]
    NoWorkers,
    #[error("initial marking: {0}")]
    InvalidMarking(String),
    #[error("transition `{transition}` needs task `{kind}`, which is not registered")]
    UnknownTask { transition: String, kind: String },
    #[error(transparent)]
    Fire(#[from] FireError),
    #[error("task `{transition}` failed: {message}")]
    Task { transition: String, message: String },
    #[error("task `{transition}` panicked: {message}")]
    WorkerPanic { transition: String, message: String },
    #[error("firing limit of {0} reached")]
    FiringLimit(u64),
    #[error("writing trace: {0}")]
    Trace(#[from] std::io::Error),
}

struct Job {
    id: u64,
    body: TaskFn,
    inputs: Vec<Value>,
}

struct Done {
    id: u64,
    result: Result<Vec<Value>, String>,
    panicked: bool,
}

fn worker(jobs: Receiver<Job>, done: Sender<Done>, cancel: Arc<AtomicBool>) {
    for job in jobs.iter() {
        let body = job.body;
        let inputs = job.inputs;
        let outcome = catch_unwind(AssertUnwindSafe(|| body(inputs, &cancel)));
        let msg = match outcome {
            Ok(result) => Done {
                id: job.id,
                result,
                panicked: false,
            },
            Err(p) => Done {
                id: job.id,
                result: Err(p
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| p.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "unknown panic".into())),
                panicked: true,
            },
        };
        if done.send(msg).is_err() {
            break;
        }
    }
}

/// Runs `net` from `initial` until quiescence or a Heureka.
pub fn run(net: &Net, initial: Marking, tasks: &TaskRegistry, cfg: RunConfig<'_>) -> Result<RunResult, RunError> {
    if cfg.workers == 0 {
        return Err(RunError::NoWorkers);
    }
    initial.type_check(net).map_err(RunError::InvalidMarking)?;
    for t in net.transitions() {
        if let Body::Task { task } = &t.body {
            if !tasks.contains(task) {
                return Err(RunError::UnknownTask {
                    transition: t.id.clone(),
                    kind: task.clone(),
                });
            }
        }
    }
    let handle = cfg.handle.clone().unwrap_or_default();
    let (job_tx, job_rx) = unbounded::<Job>();
    let (done_tx, done_rx) = unbounded::<Done>();
    thread::scope(|scope| {
        let has_tasks = net.transitions().iter().any(|t| t.is_task());
        if has_tasks {
            for _ in 0..cfg.workers {
                let (jr, dt, fl) = (job_rx.clone(), done_tx.clone(), handle.cancel_flag());
                scope.spawn(move || worker(jr, dt, fl));
            }
        }
        drop(done_tx);
        let mut co = Coordinator::new(net, initial, tasks, cfg, handle.clone(), job_tx, done_rx);
        let result = co.run();
        if result.is_err() {
            handle.heureka();
        }
        co.shutdown();
        result
    })
}

struct Coordinator<'n, 'c> {
    net: &'n Net,
    tasks: &'n TaskRegistry,
    marking: Marking,
    cfg: RunConfig<'c>,
    handle: RunHandle,
    jobs: Option<Sender<Job>>,
    done: Receiver<Done>,
    in_flight: HashMap<u64, (usize, Vec<Token>)>,
    /// Tasks that gave up after an external Heureka, before the cut-off.
    gave_up: Vec<(u64, usize, Vec<Token>)>,
    next_job: u64,
    rng: Option<ChaCha8Rng>,
    start: Instant,
    seq: u64,
    firings: u64,
    per_transition: BTreeMap<String, u64>,
    cancelled: u64,
    heureka: bool,
}

impl<'n, 'c> Coordinator<'n, 'c> {
    fn new(
        net: &'n Net,
        marking: Marking,
        tasks: &'n TaskRegistry,
        cfg: RunConfig<'c>,
        handle: RunHandle,
        jobs: Sender<Job>,
        done: Receiver<Done>,
    ) -> Self {
        let rng = (cfg.seed != 0).then(|| ChaCha8Rng::seed_from_u64(cfg.seed));
        Self {
            net,
            tasks,
            marking,
            cfg,
            handle,
            jobs: Some(jobs),
            done,
            in_flight: HashMap::new(),
            gave_up: Vec::new(),
            next_job: 0,
            rng,
            start: Instant::now(),
            seq: 0,
            firings: 0,
            per_transition: BTreeMap::new(),
            cancelled: 0,
            heureka: false,
        }
    }

    fn shutdown(&mut self) {
        self.jobs = None;
        while !self.in_flight.is_empty() {
            match self.done.recv() {
                Ok(d) => {
                    self.in_flight.remove(&d.id);
                }
                Err(_) => break,
            }
        }
    }

    fn emit(
        &mut self,
        kind: EventKind,
        transition: Option<usize>,
        consumed: &[Token],
        produced: &[Token],
    ) -> Result<(), RunError> {
        let event = TraceEvent {
            seq: self.seq,
            kind,
            transition: transition.map(|t| self.net.transitions()[t].id.clone()),
            consumed: if matches!(kind, EventKind::Complete | EventKind::Cancel) {
                Vec::new()
            } else {
                consumed.iter().map(|t| t.id).collect()
            },
            produced: produced.iter().map(|t| t.id).collect(),
            wall_time: self.start.elapsed().as_secs_f64(),
        };
        self.seq += 1;
        if let Some(w) = self.cfg.trace.as_mut() {
            serde_json::to_writer(&mut **w, &event).map_err(std::io::Error::from)?;
            w.write_all(b"\n")?;
        }
        if let Some(obs) = self.cfg.observer.as_mut() {
            obs(&Firing {
                event: &event,
                consumed,
                produced,
            });
        }
        Ok(())
    }

    fn count(&mut self, t: usize) -> Result<(), RunError> {
        self.firings += 1;
        *self.per_transition.entry(self.net.transitions()[t].id.clone()).or_default() += 1;
        match self.cfg.max_firings {
            Some(limit) if self.firings > limit => Err(RunError::FiringLimit(limit)),
            _ => Ok(()),
        }
    }

    fn produced_tokens(&self, ids: &[u64], t: usize) -> Vec<Token> {
        let tr = &self.net.transitions()[t];
        tr.out_ports
            .iter()
            .zip(ids)
            .filter_map(|(p, id)| self.marking.tokens(&p.place).iter().find(|tk| tk.id == *id).cloned())
            .collect()
    }

    fn select(&mut self) -> Result<Option<Binding>, RunError> {
        let n = self.net.transitions().len();
        let mut order: Vec<usize> = (0..n).collect();
        if let Some(rng) = self.rng.as_mut() {
            order.shuffle(rng);
        }
        let idle = self.in_flight.len() < self.cfg.workers;
        for t in order {
            if self.net.transitions()[t].is_task() && !idle {
                continue;
            }
            let found = match self.rng.as_mut() {
                Some(rng) => search_bindings(self.net, &self.marking, t, 1, &mut |ids| ids.shuffle(rng))?,
                None => search_bindings(self.net, &self.marking, t, 1, &mut |_| {})?,
            };
            if let Some(b) = found.into_iter().next() {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }

    fn fire_expr(&mut self, b: Binding) -> Result<(), RunError> {
        let t = b.transition;
        self.count(t)?;
        let taken = consume(self.net, &mut self.marking, &b);
        let values: Vec<&Value> = taken.iter().map(|tk| &tk.value).collect();
        let out = eval_body(self.net, t, &values)?;
        check_produced(self.net, t, &out)?;
        let ids = produce(self.net, &mut self.marking, t, out);
        let made = self.produced_tokens(&ids, t);
        self.emit(EventKind::Fire, Some(t), &taken, &made)?;
        if self.net.transitions()[t].heureka {
            self.handle.heureka();
        }
        Ok(())
    }

    fn dispatch(&mut self, b: Binding) -> Result<(), RunError> {
        let t = b.transition;
        self.count(t)?;
        let taken = consume(self.net, &mut self.marking, &b);
        self.emit(EventKind::Dispatch, Some(t), &taken, &[])?;
        let Body::Task { task } = &self.net.transitions()[t].body else {
            unreachable!("dispatch is only called for task transitions")
        };
        let body = self.tasks.get(task).expect("registry checked before the run").clone();
        let id = self.next_job;
        self.next_job += 1;
        let inputs = taken.iter().map(|tk| tk.value.clone()).collect();
        self.in_flight.insert(id, (t, taken));
        let job = Job { id, body, inputs };
        self.jobs
            .as_ref()
            .expect("job channel open while running")
            .send(job)
            .expect("workers outlive the coordinator");
        Ok(())
    }

    fn complete(&mut self, d: Done) -> Result<(), RunError> {
        let Some((t, taken)) = self.in_flight.remove(&d.id) else {
            return Ok(());
        };
        if d.result.is_err() && !d.panicked && self.handle.is_raised() {
            self.gave_up.push((d.id, t, taken));
            return Ok(());
        }
        let tr = &self.net.transitions()[t];
        let out = match d.result {
            Ok(out) => out,
            Err(message) if d.panicked => {
                return Err(RunError::WorkerPanic {
                    transition: tr.id.clone(),
                    message,
                })
            }
            Err(message) => {
                return Err(RunError::Task {
                    transition: tr.id.clone(),
                    message,
                })
            }
        };
        check_produced(self.net, t, &out)?;
        let ids = produce(self.net, &mut self.marking, t, out);
        let made = self.produced_tokens(&ids, t);
        self.emit(EventKind::Complete, Some(t), &taken, &made)
    }

    fn cut_off(&mut self) -> Result<(), RunError> {
        self.heureka = true;
        self.handle.heureka();
        let mut abandoned = std::mem::take(&mut self.gave_up);
        abandoned.extend(self.in_flight.iter().map(|(&id, (t, toks))| (id, *t, toks.clone())));
        abandoned.sort_by_key(|a| a.0);
        self.cancelled = abandoned.len() as u64;
        for (_, t, toks) in &abandoned {
            self.emit(EventKind::Cancel, Some(*t), toks, &[])?;
        }
        self.shutdown();
        let keep = self.net.output().map(str::to_string);
        let drained: Vec<Token> = self
            .marking
            .iter()
            .filter(|(p, _)| Some(*p) != keep.as_deref())
            .flat_map(|(_, toks)| toks.iter().cloned())
            .collect();
        self.marking.drain_except(keep.as_deref());
        self.emit(EventKind::Drain, None, &drained, &[])
    }

    fn finish_quiet(&mut self) -> Result<(), RunError> {
        let (Some(out), Some(program)) = (self.net.output(), self.net.completion()) else {
            return Ok(());
        };
        if self.marking.count(out) > 0 {
            return Ok(());
        }
        let color = self.net.color(out).expect("output place exists").clone();
        let outs = vec![(out.to_string(), color.clone())];
        let value = program
            .run(&[], &outs)
            .map_err(|error| {
                RunError::Fire(FireError::Eval {
                    transition: "<completion>".into(),
                    error,
                })
            })?
            .remove(0);
        if !value.conforms(&color) {
            return Err(RunError::Fire(FireError::Type {
                transition: "<completion>".into(),
                port: out.to_string(),
            }));
        }
        let id = self.marking.add(out, value.clone());
        self.emit(EventKind::Completion, None, &[], &[Token { id, value }])
    }

    fn run(&mut self) -> Result<RunResult, RunError> {
        loop {
            while let Ok(d) = self.done.try_recv() {
                self.complete(d)?;
            }
            if self.handle.is_raised() {
                self.cut_off()?;
                break;
            }
            match self.select()? {
                Some(b) if self.net.transitions()[b.transition].is_task() => self.dispatch(b)?,
                Some(b) => self.fire_expr(b)?,
                None if self.in_flight.is_empty() => {
                    self.finish_quiet()?;
                    break;
                }
                None => match self.done.recv_timeout(POLL) {
                    Ok(d) => self.complete(d)?,
                    Err(RecvTimeoutError::Timeout) => {}
                    Err(RecvTimeoutError::Disconnected) => unreachable!("coordinator keeps workers alive"),
                },
            }
        }
        let wall_time = self.start.elapsed();
        if let Some(w) = self.cfg.trace.as_mut() {
            let summary = serde_json::json!({
                "summary": {
                    "firings": self.firings,
                    "wall_time": wall_time.as_secs_f64(),
                    "workers": self.cfg.workers,
                    "cancelled_tasks": self.cancelled,
                    "heureka": self.heureka,
                }
            });
            writeln!(w, "{summary}")?;
            w.flush()?;
        }
        Ok(RunResult {
            final_marking: self.marking.clone(),
            firings: self.firings,
            per_transition: self.per_transition.clone(),
            wall_time,
            cancelled_tasks: self.cancelled,
            heureka: self.heureka,
            workers: self.cfg.workers,
            output: self.net.output().map(str::to_string),
        })
    }
}
