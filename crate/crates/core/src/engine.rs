//! The adaptive measurement model.
//!
//! A [`Strategy`] looks at the measurement history and picks the next
//! [`Step`]. The simulator plays it against a hidden Pauli error: each
//! measured operator `M` reports the commutation value `<M, E>`, which is the
//! XOR of the two parties' raw results with the known Y-parity offset
//! removed. At `Finish` the correction is derived generically from the
//! weight-bounded candidates that agree with every outcome.
//!
//! [`verify`] runs the strategy against every error of weight at most `t`.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::errorspace::{enumerate_errors_capped, ErrorSet, DEFAULT_CAP};
use crate::pauli::{Dim, PauliVec};
use crate::stabilizer::StabilizerSet;

/// What a strategy does next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Measure an operator that commutes with, and is independent of,
    /// everything measured so far.
    Measure(PauliVec),
    /// Give up the listed registers (0-based) by measuring a maximal local
    /// commuting set on them.
    Discard(Vec<usize>),
    Finish,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Issued by the strategy.
    Chosen,
    /// Produced by expanding a discard.
    Discard,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub op: PauliVec,
    pub outcome: u8,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    Measured(Measurement),
    Discarded(Vec<usize>),
}

/// Everything that has happened so far, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct History {
    events: Vec<Event>,
}

impl History {
    pub fn new() -> History {
        History::default()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn measurements(&self) -> impl Iterator<Item = &Measurement> {
        self.events.iter().filter_map(|e| match e {
            Event::Measured(m) => Some(m),
            Event::Discarded(_) => None,
        })
    }

    /// Outcomes of the measurements the strategy chose itself.
    pub fn chosen_outcomes(&self) -> Vec<u8> {
        self.measurements()
            .filter(|m| m.origin == Origin::Chosen)
            .map(|m| m.outcome)
            .collect()
    }

    pub fn discards(&self) -> impl Iterator<Item = &[usize]> {
        self.events.iter().filter_map(|e| match e {
            Event::Discarded(d) => Some(d.as_slice()),
            Event::Measured(_) => None,
        })
    }

    pub fn has_discarded(&self) -> bool {
        self.discards().next().is_some()
    }

    pub fn len(&self) -> usize {
        self.measurements().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn push_measurement(&mut self, op: PauliVec, outcome: u8, origin: Origin) {
        self.events.push(Event::Measured(Measurement {
            op,
            outcome,
            origin,
        }));
    }

    pub fn push_discard(&mut self, registers: Vec<usize>) {
        self.events.push(Event::Discarded(registers));
    }

    /// Stabilizer generated by every recorded measurement.
    pub fn stabilizer(&self, dim: Dim, n: usize) -> Result<StabilizerSet> {
        let mut s = StabilizerSet::new(dim, n);
        for m in self.measurements() {
            s.push(m.op.clone())?;
        }
        Ok(s)
    }
}

/// Protocol parameters: `n` pairs of dimension `dim`, at most `t` errors,
/// `k_claimed` guaranteed output pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub dim: Dim,
    pub n: usize,
    pub t: usize,
    pub k_claimed: usize,
}

/// An adaptive protocol. `next` must be a pure function of the history.
pub trait Strategy: Send + Sync {
    fn params(&self) -> Params;
    fn next(&self, history: &History) -> Result<Step>;
}

/// One simulated run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub history: History,
    pub final_stabilizer: StabilizerSet,
    pub correction: PauliVec,
    pub k_out: usize,
}

impl Transcript {
    /// Line-delimited record: one object per measurement, then the correction.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for m in self.history.measurements() {
            out.push_str(&format!(
                "{{\"op\": {}, \"outcome\": {}}}\n",
                Value::String(m.op.render()),
                m.outcome
            ));
        }
        out.push_str(&format!(
            "{{\"correction\": {}, \"k_out\": {}}}\n",
            Value::String(self.correction.render()),
            self.k_out
        ));
        out
    }

    fn to_json(&self) -> Value {
        let mut lines: Vec<Value> = self
            .history
            .measurements()
            .map(|m| json!({"op": m.op.render(), "outcome": m.outcome}))
            .collect();
        lines.push(json!({"correction": self.correction.render(), "k_out": self.k_out}));
        Value::Array(lines)
    }

    /// Number of measurements the strategy issued, excluding discard expansion.
    pub fn chosen_count(&self) -> usize {
        self.history
            .measurements()
            .filter(|m| m.origin == Origin::Chosen)
            .count()
    }
}

/// Plays `strategy` against `hidden` and returns the transcript.
pub fn simulate(strategy: &dyn Strategy, hidden: &PauliVec) -> Result<Transcript> {
    simulate_observed(strategy, hidden, |_, _| {})
}

/// Like [`simulate`], calling `observer` after every measurement with the
/// history and the candidate set filtered incrementally so far.
pub fn simulate_observed<F>(
    strategy: &dyn Strategy,
    hidden: &PauliVec,
    observer: F,
) -> Result<Transcript>
where
    F: FnMut(&History, &ErrorSet),
{
    let p = strategy.params();
    let initial = enumerate_errors_capped(p.n, p.t, p.dim, DEFAULT_CAP)?;
    run(strategy, hidden, &initial, observer)
}

fn run<F>(
    strategy: &dyn Strategy,
    hidden: &PauliVec,
    initial: &ErrorSet,
    mut observer: F,
) -> Result<Transcript>
where
    F: FnMut(&History, &ErrorSet),
{
    let p = strategy.params();
    PauliVec::identity(p.dim, p.n).check_compatible(hidden)?;
    if hidden.weight() > p.t {
        return Err(Error::Precondition(format!(
            "hidden error {hidden} has weight {} > t = {}",
            hidden.weight(),
            p.t
        )));
    }

    let mut history = History::new();
    let mut stab = StabilizerSet::new(p.dim, p.n);
    let mut candidates = initial.clone();
    let limit = 2 * p.n;
    let mut steps = 0;

    let mut measure = |op: PauliVec,
                       origin: Origin,
                       history: &mut History,
                       stab: &mut StabilizerSet,
                       candidates: &mut ErrorSet|
     -> Result<()> {
        stab.push(op.clone())?;
        let outcome = op.sp(hidden);
        *candidates = candidates.filter_by_outcome(&op, outcome)?;
        history.push_measurement(op, outcome, origin);
        observer(history, candidates);
        Ok(())
    };

    loop {
        match strategy.next(&history)? {
            Step::Finish => break,
            _ if steps >= limit => return Err(Error::NonTermination { limit }),
            Step::Measure(op) => {
                PauliVec::identity(p.dim, p.n).check_compatible(&op)?;
                measure(op, Origin::Chosen, &mut history, &mut stab, &mut candidates)?;
            }
            Step::Discard(registers) => {
                let expansion = stab.complete_discard(&registers)?;
                history.push_discard(registers);
                for op in expansion {
                    measure(
                        op,
                        Origin::Discard,
                        &mut history,
                        &mut stab,
                        &mut candidates,
                    )?;
                }
            }
        }
        steps += 1;
    }

    let correction = correct_from(initial, &stab, &history, p.t)?;
    Ok(Transcript {
        k_out: stab.logical_count(),
        history,
        final_stabilizer: stab,
        correction,
    })
}

/// Correction for a finished run: the minimal-weight representative of the
/// single coset class occupied by all weight-`t` errors consistent with the
/// history.
pub fn generic_correction(
    s: &StabilizerSet,
    history: &History,
    t: usize,
    dim: Dim,
) -> Result<PauliVec> {
    let initial = enumerate_errors_capped(s.n(), t, dim, DEFAULT_CAP)?;
    correct_from(&initial, s, history, t)
}

fn correct_from(
    initial: &ErrorSet,
    s: &StabilizerSet,
    history: &History,
    t: usize,
) -> Result<PauliVec> {
    let mut survivors = initial.clone();
    for m in history.measurements() {
        survivors = survivors.filter_by_outcome(&m.op, m.outcome)?;
    }
    if survivors.is_empty() {
        return Err(Error::EmptyCandidates { t });
    }
    let classes = survivors.coset_classes(s)?;
    if classes.len() > 1 {
        return Err(Error::UnsoundFinish {
            classes: classes.len(),
        });
    }
    Ok(classes.into_iter().next().unwrap().representative)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub hidden: PauliVec,
    pub transcript: Option<Transcript>,
    pub reason: String,
}

/// Outcome of an exhaustive verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub errors_checked: usize,
    pub k_min: usize,
    pub pass: bool,
    pub counterexamples: Vec<Counterexample>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let counterexamples: Vec<Value> = self
            .counterexamples
            .iter()
            .map(|c| {
                json!({
                    "hidden": c.hidden.render(),
                    "reason": c.reason,
                    "transcript": c.transcript.as_ref().map(Transcript::to_json),
                })
            })
            .collect();
        json!({
            "errors_checked": self.errors_checked,
            "k_min": self.k_min,
            "pass": self.pass,
            "counterexamples": counterexamples,
        })
    }
}

/// The result of one run inside [`verify_runs`].
#[derive(Clone, Debug)]
pub struct Run {
    pub hidden: PauliVec,
    pub result: Result<Transcript>,
    /// Why this run counts as a failure, if it does.
    pub failure: Option<String>,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub cap: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            workers: None,
            cap: DEFAULT_CAP,
        }
    }
}

pub fn verify(strategy: &dyn Strategy) -> Result<Report> {
    verify_with(strategy, &VerifyOptions::default())
}

pub fn verify_with(strategy: &dyn Strategy, options: &VerifyOptions) -> Result<Report> {
    let runs = verify_runs(strategy, options)?;
    Ok(summarize(strategy.params(), &runs))
}

/// Simulates against every error of weight at most `t`, in enumeration order.
pub fn verify_runs(strategy: &dyn Strategy, options: &VerifyOptions) -> Result<Vec<Run>> {
    let p = strategy.params();
    let initial = enumerate_errors_capped(p.n, p.t, p.dim, options.cap)?;
    let job = || -> Vec<Run> {
        initial
            .members()
            .par_iter()
            .map(|hidden| {
                let result = run(strategy, hidden, &initial, |_, _| {});
                let failure = match &result {
                    Err(e) => Some(e.to_string()),
                    Ok(tr) => check_run(p, hidden, tr),
                };
                Run {
                    hidden: hidden.clone(),
                    result,
                    failure,
                }
            })
            .collect()
    };
    match options.workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::WorkerPool(e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

fn check_run(p: Params, hidden: &PauliVec, tr: &Transcript) -> Option<String> {
    if tr.k_out < p.k_claimed {
        return Some(format!(
            "k_out = {} is below the claimed {}",
            tr.k_out, p.k_claimed
        ));
    }
    let mut residual = tr.correction.inverse();
    residual.add_assign(hidden);
    if !tr.final_stabilizer.coset_key(&residual).is_identity() {
        return Some(format!(
            "correction {} leaves residual {} outside the final stabilizer",
            tr.correction, residual
        ));
    }
    None
}

/// Aggregates runs; a run that failed to simulate counts as `k_out = 0`.
pub fn summarize(p: Params, runs: &[Run]) -> Report {
    let k_min = runs
        .iter()
        .map(|r| r.result.as_ref().map_or(0, |t| t.k_out))
        .min()
        .unwrap_or(0);
    let counterexamples: Vec<Counterexample> = runs
        .iter()
        .filter_map(|r| {
            r.failure.as_ref().map(|reason| Counterexample {
                hidden: r.hidden.clone(),
                transcript: r.result.as_ref().ok().cloned(),
                reason: reason.clone(),
            })
        })
        .collect();
    Report {
        errors_checked: runs.len(),
        k_min,
        pass: counterexamples.is_empty() && k_min >= p.k_claimed,
        counterexamples,
    }
}
