//! Candidate error sets: enumeration by weight, counting, and filtering by
//! measurement outcomes.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::pauli::{Dim, PauliVec};
use crate::stabilizer::StabilizerSet;

/// Default upper bound on the number of enumerated errors.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// How an [`ErrorSet`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Every operator of weight at most `t`.
    WeightBound(usize),
    /// A subset produced by filtering on outcomes.
    Filtered,
    /// Built from an explicit member list.
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorSet {
    dim: Dim,
    n: usize,
    members: Vec<PauliVec>,
    provenance: Provenance,
}

/// One class of the coset partition: members whose pairwise quotients lie
/// in the stabilizer span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetClass {
    pub representative: PauliVec,
    pub members: Vec<PauliVec>,
}

/// `sum_{j=0}^{t} (d^2 - 1)^j * C(n, j)`.
pub fn count_errors(n: usize, t: usize, dim: Dim) -> BigUint {
    let d = dim.get() as u32;
    let local = BigUint::from(d * d - 1);
    let mut total = BigUint::one();
    let mut binom = BigUint::one();
    let mut power = BigUint::one();
    for j in 1..=t.min(n) {
        binom = binom * BigUint::from(n - j + 1) / BigUint::from(j);
        power *= &local;
        total += &binom * &power;
    }
    total
}

/// Every phaseless operator of weight at most `t`, ordered by weight and then
/// canonically. Fails when the count exceeds [`DEFAULT_CAP`].
pub fn enumerate_errors(n: usize, t: usize, dim: Dim) -> Result<ErrorSet> {
    enumerate_errors_capped(n, t, dim, DEFAULT_CAP)
}

pub fn enumerate_errors_capped(n: usize, t: usize, dim: Dim, cap: u64) -> Result<ErrorSet> {
    if t > n {
        return Err(Error::Precondition(format!(
            "weight bound t = {t} exceeds n = {n}"
        )));
    }
    let count = count_errors(n, t, dim);
    if count.to_u64().is_none_or(|c| c > cap) {
        return Err(Error::CapExceeded {
            count: count.to_string(),
            cap,
        });
    }
    let d = dim.get();
    let local: Vec<(u8, u8)> = (0..d)
        .flat_map(|x| (0..d).map(move |z| (x, z)))
        .filter(|&p| p != (0, 0))
        .collect();

    let mut members = Vec::with_capacity(count.to_usize().unwrap_or(0));
    members.push(PauliVec::identity(dim, n));
    for w in 1..=t {
        let start = members.len();
        for sites in (0..n).combinations(w) {
            for ops in std::iter::repeat_n(local.iter(), w).multi_cartesian_product() {
                let mut p = PauliVec::identity(dim, n);
                for (&s, &&(x, z)) in sites.iter().zip(&ops) {
                    p.set(s, x, z);
                }
                members.push(p);
            }
        }
        members[start..].sort_unstable_by(PauliVec::canonical_cmp);
    }
    Ok(ErrorSet {
        dim,
        n,
        members,
        provenance: Provenance::WeightBound(t),
    })
}

impl ErrorSet {
    /// Builds a set from explicit, pairwise-distinct members.
    pub fn from_members(dim: Dim, n: usize, members: Vec<PauliVec>) -> Result<ErrorSet> {
        let probe = PauliVec::identity(dim, n);
        for m in &members {
            probe.check_compatible(m)?;
        }
        let mut sorted: Vec<&PauliVec> = members.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateMember(w[0].render()));
        }
        Ok(ErrorSet {
            dim,
            n,
            members,
            provenance: Provenance::Explicit,
        })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[PauliVec] {
        &self.members
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &PauliVec) -> bool {
        self.members.contains(p)
    }

    /// Members whose commutation value with `m` equals `outcome`, in order.
    pub fn filter_by_outcome(&self, m: &PauliVec, outcome: u8) -> Result<ErrorSet> {
        PauliVec::identity(self.dim, self.n).check_compatible(m)?;
        Ok(ErrorSet {
            dim: self.dim,
            n: self.n,
            members: self
                .members
                .iter()
                .filter(|e| m.sp(e) == outcome)
                .cloned()
                .collect(),
            provenance: Provenance::Filtered,
        })
    }

    /// Partitions the members into cosets of the stabilizer span. Classes are
    /// listed in order of first appearance; each representative has minimal
    /// weight, ties broken canonically.
    pub fn coset_classes(&self, s: &StabilizerSet) -> Result<Vec<CosetClass>> {
        if s.dim() != self.dim || s.n() != self.n {
            return Err(Error::DimensionMismatch {
                left_d: self.dim.get(),
                left_n: self.n,
                right_d: s.dim().get(),
                right_n: s.n(),
            });
        }
        let mut index: HashMap<PauliVec, usize> = HashMap::new();
        let mut classes: Vec<CosetClass> = Vec::new();
        for e in &self.members {
            let key = s.coset_key(e);
            match index.get(&key) {
                Some(&i) => {
                    let class = &mut classes[i];
                    if e.weight_cmp(&class.representative).is_lt() {
                        class.representative = e.clone();
                    }
                    class.members.push(e.clone());
                }
                None => {
                    index.insert(key, classes.len());
                    classes.push(CosetClass {
                        representative: e.clone(),
                        members: vec![e.clone()],
                    });
                }
            }
        }
        Ok(classes)
    }
}
