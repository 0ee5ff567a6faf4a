//! Greedy protocol synthesis for qubits.
//!
//! Each step measures the element of `N(S) \ S` that separates the most
//! pairs of surviving candidate errors. Because an above-average separator
//! always exists, the survivor count roughly halves per step and the
//! protocol finishes within `ceil(log2 |E|) + 2` measurements.
//!
//! The candidate scan enumerates the whole normalizer, so it is restricted
//! to `n <= 10` and uses packed single-word operators.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::bounds::thm2_k;
use crate::engine::{History, Params, Step, Strategy};
use crate::error::{Error, Result};
use crate::errorspace::{enumerate_errors_capped, ErrorSet, DEFAULT_CAP};
use crate::pauli::{Dim, PauliVec};
use crate::stabilizer::StabilizerSet;

/// Largest register count the exhaustive generator scan accepts.
pub const GREEDY_MAX_N: usize = 10;

/// Gray-code block size handled by one parallel task.
const CHUNK_BITS: usize = 12;

/// How a measurement splits a candidate set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitCount {
    pub commuting: usize,
    pub anticommuting: usize,
    pub separated_pairs: usize,
}

impl SplitCount {
    fn new(commuting: usize, anticommuting: usize) -> SplitCount {
        SplitCount {
            commuting,
            anticommuting,
            separated_pairs: commuting * anticommuting,
        }
    }

    /// The worst-case survivor count after measuring.
    pub fn max_side(&self) -> usize {
        self.commuting.max(self.anticommuting)
    }
}

fn require_qubits(dim: Dim) -> Result<()> {
    if dim != Dim::QUBIT {
        return Err(Error::Precondition(format!(
            "greedy synthesis supports qubits only, got d = {dim}"
        )));
    }
    Ok(())
}

pub fn split_counts(m: &PauliVec, errors: &ErrorSet) -> Result<SplitCount> {
    require_qubits(errors.dim())?;
    PauliVec::identity(errors.dim(), errors.n()).check_compatible(m)?;
    let commuting = errors.members().iter().filter(|e| m.sp(e) == 0).count();
    Ok(SplitCount::new(commuting, errors.len() - commuting))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Candidate {
    x: u64,
    z: u64,
    split: SplitCount,
}

impl Candidate {
    /// True when `self` should be preferred over `other`.
    fn beats(&self, other: &Candidate) -> bool {
        (
            std::cmp::Reverse(self.split.separated_pairs),
            self.split.max_side(),
            self.x,
            self.z,
        ) < (
            std::cmp::Reverse(other.split.separated_pairs),
            other.split.max_side(),
            other.x,
            other.z,
        )
    }
}

fn better(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.beats(&a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

fn words(p: &PauliVec) -> (u64, u64) {
    p.binary_words().expect("qubit operator within one word")
}

/// The element of `N(S) \ S` separating the most pairs of `errors`; ties go
/// to the more balanced split, then to the canonically smaller operator.
pub fn choose_generator(s: &StabilizerSet, errors: &ErrorSet) -> Result<PauliVec> {
    require_qubits(s.dim())?;
    if s.n() > GREEDY_MAX_N {
        return Err(Error::SizeLimit(format!(
            "greedy generator scan supports n <= {GREEDY_MAX_N}, got n = {}",
            s.n()
        )));
    }
    if errors.dim() != s.dim() || errors.n() != s.n() {
        return Err(Error::DimensionMismatch {
            left_d: s.dim().get(),
            left_n: s.n(),
            right_d: errors.dim().get(),
            right_n: errors.n(),
        });
    }

    // N(S) = span(S) + span(complement); elements of span(S) separate
    // nothing, so scanning all of N(S) and requiring a positive separation
    // count visits exactly the useful part of N(S) \ S.
    let mut basis: Vec<(u64, u64)> = s.gens().iter().map(words).collect();
    basis.extend(s.normalizer_complement().iter().map(words));
    let errs: Vec<(u64, u64)> = errors.members().iter().map(words).collect();
    let total = errs.len();

    let low = basis.len().min(CHUNK_BITS);
    let high = basis.len() - low;
    let best = (0u64..1 << high)
        .into_par_iter()
        .map(|chunk| {
            let (mut x, mut z) = (0u64, 0u64);
            for (i, b) in basis[low..].iter().enumerate() {
                if chunk >> i & 1 == 1 {
                    x ^= b.0;
                    z ^= b.1;
                }
            }
            let mut best: Option<Candidate> = None;
            for g in 0u64..1 << low {
                if g > 0 {
                    let flip = basis[g.trailing_zeros() as usize];
                    x ^= flip.0;
                    z ^= flip.1;
                }
                let commuting = errs
                    .iter()
                    .filter(|e| ((x & e.1) ^ (z & e.0)).count_ones() & 1 == 0)
                    .count();
                let split = SplitCount::new(commuting, total - commuting);
                if split.separated_pairs == 0 {
                    continue;
                }
                best = better(best, Some(Candidate { x, z, split }));
            }
            best
        })
        .reduce(|| None, better);

    match best {
        Some(c) => Ok(PauliVec::from_binary_words(s.n(), c.x, c.z)),
        None => Err(Error::NoSeparator),
    }
}

/// The greedy strategy for `n` qubit pairs and at most `t` errors.
pub struct GreedyStrategy {
    params: Params,
    initial: ErrorSet,
    cache: Mutex<HashMap<Vec<u8>, Step>>,
}

pub fn greedy_strategy(n: usize, t: usize) -> Result<GreedyStrategy> {
    greedy_strategy_capped(n, t, DEFAULT_CAP)
}

pub fn greedy_strategy_capped(n: usize, t: usize, cap: u64) -> Result<GreedyStrategy> {
    if n > GREEDY_MAX_N {
        return Err(Error::SizeLimit(format!(
            "greedy synthesis supports n <= {GREEDY_MAX_N}, got n = {n}"
        )));
    }
    let initial = enumerate_errors_capped(n, t, Dim::QUBIT, cap)?;
    Ok(GreedyStrategy {
        params: Params {
            dim: Dim::QUBIT,
            n,
            t,
            k_claimed: thm2_k(n, t).max(0) as usize,
        },
        initial,
        cache: Mutex::new(HashMap::new()),
    })
}

impl GreedyStrategy {
    fn decide(&self, history: &History) -> Result<Step> {
        let s = history.stabilizer(self.params.dim, self.params.n)?;
        let mut survivors = self.initial.clone();
        for m in history.measurements() {
            survivors = survivors.filter_by_outcome(&m.op, m.outcome)?;
        }
        if survivors.coset_classes(&s)?.len() <= 1 {
            return Ok(Step::Finish);
        }
        Ok(Step::Measure(choose_generator(&s, &survivors)?))
    }
}

impl Strategy for GreedyStrategy {
    fn params(&self) -> Params {
        self.params
    }

    fn next(&self, history: &History) -> Result<Step> {
        // The chosen operators are determined by the outcomes, so the outcome
        // string identifies the branch.
        let key: Vec<u8> = history.measurements().map(|m| m.outcome).collect();
        if let Some(step) = self.cache.lock().unwrap().get(&key) {
            return Ok(step.clone());
        }
        let step = self.decide(history)?;
        self.cache.lock().unwrap().insert(key, step.clone());
        Ok(step)
    }
}
