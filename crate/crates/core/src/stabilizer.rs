//! Stabilizer groups as isotropic row spaces of the symplectic form.

use crate::error::{Error, Result};
use crate::errorspace::ErrorSet;
use crate::linalg::{for_each_combination, RowSpace};
use crate::pauli::{Dim, PauliVec};

/// Largest register count accepted by [`StabilizerSet::min_normalizer_weight`].
pub const NORMALIZER_SCAN_MAX_N: usize = 12;
/// Largest number of operators enumerated by a single normalizer scan.
const NORMALIZER_SCAN_MAX_COUNT: u128 = 1 << 26;
/// Largest local operator space scanned by discard completion (4^9).
const DISCARD_SCAN_MAX_COUNT: u128 = 1 << 18;

/// Commutation values of an error against each generator, in measurement order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    pub values: Vec<u8>,
}

impl Syndrome {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

/// An ordered list of commuting, independent generators together with the
/// reduced form of their span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerSet {
    dim: Dim,
    n: usize,
    gens: Vec<PauliVec>,
    reduced: RowSpace,
}

/// Rank over Z_d of the symplectic matrix whose rows are `gens`.
pub fn rank(gens: &[PauliVec]) -> Result<usize> {
    let Some(first) = gens.first() else {
        return Ok(0);
    };
    let mut rs = RowSpace::new(first.dim(), first.n());
    for g in gens {
        first.check_compatible(g)?;
        rs.insert(g);
    }
    Ok(rs.rank())
}

impl StabilizerSet {
    pub fn new(dim: Dim, n: usize) -> StabilizerSet {
        StabilizerSet {
            dim,
            n,
            gens: Vec::new(),
            reduced: RowSpace::new(dim, n),
        }
    }

    /// Builds a stabilizer from generators, rejecting anticommuting or
    /// dependent lists.
    pub fn from_gens(dim: Dim, n: usize, gens: &[PauliVec]) -> Result<StabilizerSet> {
        let mut s = StabilizerSet::new(dim, n);
        for g in gens {
            s.push(g.clone())?;
        }
        Ok(s)
    }

    pub fn parse_gens(dim: Dim, gens: &[&str]) -> Result<StabilizerSet> {
        let ops = gens
            .iter()
            .map(|g| PauliVec::parse(g, dim))
            .collect::<Result<Vec<_>>>()?;
        let n = ops.first().map(PauliVec::n).unwrap_or(0);
        StabilizerSet::from_gens(dim, n, &ops)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[PauliVec] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    fn check(&self, p: &PauliVec) -> Result<()> {
        if p.dim() != self.dim || p.n() != self.n {
            return Err(Error::DimensionMismatch {
                left_d: self.dim.get(),
                left_n: self.n,
                right_d: p.dim().get(),
                right_n: p.n(),
            });
        }
        Ok(())
    }

    /// Appends a generator. Fails with `IllegalMeasurement` if it anticommutes
    /// with an existing generator and `RedundantMeasurement` if it is already
    /// in the span.
    pub fn push(&mut self, g: PauliVec) -> Result<()> {
        self.check(&g)?;
        if !self.commutes_with_all(&g) {
            return Err(Error::IllegalMeasurement { op: g.render() });
        }
        if !self.reduced.insert(&g) {
            return Err(Error::RedundantMeasurement { op: g.render() });
        }
        self.gens.push(g);
        Ok(())
    }

    /// A new stabilizer with `g` appended.
    pub fn with(&self, g: PauliVec) -> Result<StabilizerSet> {
        let mut s = self.clone();
        s.push(g)?;
        Ok(s)
    }

    fn commutes_with_all(&self, p: &PauliVec) -> bool {
        self.gens.iter().all(|g| g.sp(p) == 0)
    }

    /// Phaseless membership in the span of the generators.
    pub fn is_member(&self, p: &PauliVec) -> Result<bool> {
        self.check(p)?;
        Ok(self.reduced.contains(p))
    }

    /// True iff `p` commutes with every generator.
    pub fn in_normalizer(&self, p: &PauliVec) -> Result<bool> {
        self.check(p)?;
        Ok(self.commutes_with_all(p))
    }

    pub fn syndrome(&self, e: &PauliVec) -> Result<Syndrome> {
        self.check(e)?;
        Ok(Syndrome {
            values: self.gens.iter().map(|g| g.sp(e)).collect(),
        })
    }

    /// Number of logical pairs left: `n - rank`.
    pub fn logical_count(&self) -> usize {
        self.n - self.rank()
    }

    /// Canonical representative of the coset `p + span(S)`.
    pub(crate) fn coset_key(&self, p: &PauliVec) -> PauliVec {
        self.reduced.reduce(p)
    }

    /// Basis of the normalizer `N(S)` as a row space.
    pub fn normalizer_basis(&self) -> Vec<PauliVec> {
        // <g, P> = sum_i g.x_i P.z_i - g.z_i P.x_i is the dot product of P
        // with the vector (-g.z | g.x).
        let mut dual = RowSpace::new(self.dim, self.n);
        for g in &self.gens {
            let mut w = PauliVec::identity(self.dim, self.n);
            for i in 0..self.n {
                w.set(i, self.dim.neg(g.z_at(i)), g.x_at(i));
            }
            dual.insert(&w);
        }
        dual.null_space()
    }

    /// A basis of `N(S)` split into the generators of `S` followed by a
    /// complement, so that every element of `N(S) \ S` has a nonzero
    /// complement part.
    pub(crate) fn normalizer_complement(&self) -> Vec<PauliVec> {
        let mut rs = self.reduced.clone();
        self.normalizer_basis()
            .into_iter()
            .filter(|v| rs.insert(v))
            .collect()
    }

    /// Extends the stabilizer with a maximal set of operators supported on
    /// `registers`.
    ///
    /// Candidates are scanned in a fixed order: each register contributes a
    /// base-d² digit `x + d*z`, with the lowest listed register least
    /// significant. A candidate is kept when it commutes with everything so
    /// far and is independent of it.
    pub fn complete_discard(&self, registers: &[usize]) -> Result<Vec<PauliVec>> {
        let mut sites = registers.to_vec();
        sites.sort_unstable();
        sites.dedup();
        if let Some(&bad) = sites.iter().find(|&&s| s >= self.n) {
            return Err(Error::RegisterOutOfRange {
                index: bad,
                n: self.n,
            });
        }
        let d = self.dim.get() as u128;
        let base = d * d;
        let total = base
            .checked_pow(sites.len() as u32)
            .filter(|&c| c <= DISCARD_SCAN_MAX_COUNT)
            .ok_or_else(|| {
                Error::SizeLimit(format!(
                    "discard completion over {} registers of dimension {} is too large",
                    sites.len(),
                    self.dim
                ))
            })?;

        let mut work = self.clone();
        let mut added = Vec::new();
        for code in 1..total {
            let mut cand = PauliVec::identity(self.dim, self.n);
            let mut rest = code;
            for &s in &sites {
                let digit = (rest % base) as u8;
                rest /= base;
                cand.set(s, digit % self.dim.get(), digit / self.dim.get());
            }
            if work.commutes_with_all(&cand) && !work.reduced.contains(&cand) {
                work.push(cand.clone())?;
                added.push(cand);
            }
        }
        Ok(added)
    }

    /// Whether every pair `E, F` of `errors` has `E^-1 F` outside `N(S) \ S`.
    pub fn code_corrects(&self, errors: &ErrorSet) -> Result<bool> {
        if errors.dim() != self.dim || errors.n() != self.n {
            return Err(Error::DimensionMismatch {
                left_d: self.dim.get(),
                left_n: self.n,
                right_d: errors.dim().get(),
                right_n: errors.n(),
            });
        }
        let members = errors.members();
        for (i, e) in members.iter().enumerate() {
            let inv = e.inverse();
            for f in &members[i + 1..] {
                let mut diff = inv.clone();
                diff.add_assign(f);
                if self.commutes_with_all(&diff) && !self.reduced.contains(&diff) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Minimum weight over `N(S) \ S`, by exhaustive enumeration. Returns
    /// `None` when `N(S) = S`.
    pub fn min_normalizer_weight(&self) -> Result<Option<usize>> {
        if self.n > NORMALIZER_SCAN_MAX_N {
            return Err(Error::SizeLimit(format!(
                "normalizer scan supports n <= {NORMALIZER_SCAN_MAX_N}, got n = {}",
                self.n
            )));
        }
        let complement = self.normalizer_complement();
        let count = (self.dim.get() as u128)
            .checked_pow((complement.len() + self.rank()) as u32)
            .unwrap_or(u128::MAX);
        if count > NORMALIZER_SCAN_MAX_COUNT {
            return Err(Error::SizeLimit(format!(
                "normalizer has {count} elements, scan cap is {NORMALIZER_SCAN_MAX_COUNT}"
            )));
        }
        let mut best: Option<usize> = None;
        let identity = PauliVec::identity(self.dim, self.n);
        for_each_combination(&complement, identity, |l| {
            if l.is_identity() {
                return;
            }
            for_each_combination(&self.gens, l.clone(), |p| {
                let w = p.weight();
                if best.is_none_or(|b| w < b) {
                    best = Some(w);
                }
            });
        });
        Ok(best)
    }
}
