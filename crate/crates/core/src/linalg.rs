//! Exact Gaussian elimination over Z_d on symplectic vectors.

use crate::pauli::{Dim, PauliVec};

/// A row space kept in fully reduced row-echelon form: each row has a pivot
/// coordinate holding 1, and every other row is zero at that coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RowSpace {
    dim: Dim,
    n: usize,
    rows: Vec<PauliVec>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(dim: Dim, n: usize) -> RowSpace {
        RowSpace {
            dim,
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Canonical coset representative of `v` modulo the row space.
    pub fn reduce(&self, v: &PauliVec) -> PauliVec {
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = out.coord(p);
            if c != 0 {
                out.add_scaled_assign(row, self.dim.neg(c));
            }
        }
        out
    }

    pub fn contains(&self, v: &PauliVec) -> bool {
        self.reduce(v).is_identity()
    }

    /// Adds `v` to the space; returns false when it was already a member.
    pub fn insert(&mut self, v: &PauliVec) -> bool {
        debug_assert!(v.dim() == self.dim && v.n() == self.n);
        let mut r = self.reduce(v);
        let Some(pivot) = (0..2 * self.n).find(|&c| r.coord(c) != 0) else {
            return false;
        };
        let lead = r.coord(pivot);
        if lead != 1 {
            r = r.scaled(self.dim.inv(lead));
        }
        for row in &mut self.rows {
            let c = row.coord(pivot);
            if c != 0 {
                row.add_scaled_assign(&r, self.dim.neg(c));
            }
        }
        self.rows.push(r);
        self.pivots.push(pivot);
        true
    }

    /// Basis of the null space `{v : sum_c row_c * v_c = 0 for every row}`
    /// under the plain coordinate dot product.
    pub fn null_space(&self) -> Vec<PauliVec> {
        let total = 2 * self.n;
        let mut is_pivot = vec![false; total];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..total).filter(|&c| !is_pivot[c]) {
            let mut v = PauliVec::identity(self.dim, self.n);
            v.set_coord(free, 1);
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                let c = row.coord(free);
                if c != 0 {
                    v.set_coord(p, self.dim.neg(c));
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Visits `start + sum_i c_i * basis_i` for every coefficient vector
/// `c in Z_d^len`, starting with `start` itself. Each step adds one basis
/// vector per odometer digit touched.
pub(crate) fn for_each_combination<F>(basis: &[PauliVec], start: PauliVec, mut visit: F)
where
    F: FnMut(&PauliVec),
{
    let d = start.dim().get();
    let mut digits = vec![0u8; basis.len()];
    let mut cur = start;
    loop {
        visit(&cur);
        let mut i = 0;
        loop {
            if i == basis.len() {
                return;
            }
            cur.add_assign(&basis[i]);
            digits[i] += 1;
            if digits[i] < d {
                break;
            }
            // d additions of basis[i] return it to zero; carry.
            digits[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> PauliVec {
        PauliVec::parse(s, Dim::QUBIT).unwrap()
    }

    #[test]
    fn combinations_cover_span() {
        let basis = vec![q("XXI"), q("ZZI")];
        let mut seen = Vec::new();
        for_each_combination(&basis, PauliVec::identity(Dim::QUBIT, 3), |p| {
            seen.push(p.render())
        });
        seen.sort();
        assert_eq!(seen, vec!["III", "XXI", "YYI", "ZZI"]);

        let t = PauliVec::parse("X,Z", Dim::QUTRIT).unwrap();
        let mut count = 0;
        for_each_combination(&[t], PauliVec::identity(Dim::QUTRIT, 2), |_| count += 1);
        assert_eq!(count, 3);
    }

    #[test]
    fn null_space_is_orthogonal() {
        let mut rs = RowSpace::new(Dim::QUTRIT, 2);
        rs.insert(&PauliVec::parse("X,Z2", Dim::QUTRIT).unwrap());
        rs.insert(&PauliVec::parse("XZ,I", Dim::QUTRIT).unwrap());
        let ns = rs.null_space();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rs.rows {
                let dot: u32 = (0..4).map(|c| (v.coord(c) * r.coord(c)) as u32).sum();
                assert_eq!(dot % 3, 0);
            }
        }
    }
}
