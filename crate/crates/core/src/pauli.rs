//! Phaseless Pauli operators on `n` registers of prime dimension `d`.
//!
//! An operator is stored in symplectic form as two exponent vectors `x` and
//! `z` over Z_d. Global phases are not represented, so the group law is plain
//! component-wise addition and commutation is the symplectic form
//! `sum_i x_i z'_i - z_i x'_i (mod d)`.
//!
//! Storage is bit-packed: one bit per register for qubits and a two-bit field
//! per register for qutrits, so the qubit inner loops are word-parallel.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Register dimension. Only the primes 2 and 3 are supported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dim(u8);

impl Dim {
    pub const QUBIT: Dim = Dim(2);
    pub const QUTRIT: Dim = Dim(3);

    pub fn new(d: u32) -> Result<Dim> {
        match d {
            2 => Ok(Dim::QUBIT),
            3 => Ok(Dim::QUTRIT),
            _ => Err(Error::UnsupportedDimension(d)),
        }
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    #[inline]
    fn bits(self) -> usize {
        if self.0 == 2 {
            1
        } else {
            2
        }
    }

    #[inline]
    fn per_word(self) -> usize {
        64 / self.bits()
    }

    #[inline]
    fn mask(self) -> u64 {
        (1u64 << self.bits()) - 1
    }

    #[inline]
    pub(crate) fn add(self, a: u8, b: u8) -> u8 {
        (a + b) % self.0
    }

    #[inline]
    pub(crate) fn mul(self, a: u8, b: u8) -> u8 {
        (a * b) % self.0
    }

    #[inline]
    pub(crate) fn neg(self, a: u8) -> u8 {
        (self.0 - a % self.0) % self.0
    }

    /// Multiplicative inverse of a nonzero element of Z_d.
    #[inline]
    pub(crate) fn inv(self, a: u8) -> u8 {
        debug_assert!(!a.is_multiple_of(self.0));
        // Every nonzero element of Z_2 and Z_3 is its own inverse.
        a % self.0
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A phaseless Pauli operator in symplectic representation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliVec {
    dim: Dim,
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliVec {
    fn words(dim: Dim, n: usize) -> usize {
        n.div_ceil(dim.per_word())
    }

    pub fn identity(dim: Dim, n: usize) -> PauliVec {
        let w = Self::words(dim, n);
        PauliVec {
            dim,
            n,
            x: vec![0; w],
            z: vec![0; w],
        }
    }

    /// Builds an operator from explicit exponent vectors.
    pub fn from_exponents(dim: Dim, x: &[u8], z: &[u8]) -> Result<PauliVec> {
        if x.len() != z.len() {
            return Err(Error::Precondition(format!(
                "x has length {} but z has length {}",
                x.len(),
                z.len()
            )));
        }
        let mut p = PauliVec::identity(dim, x.len());
        for (i, (&a, &b)) in x.iter().zip(z).enumerate() {
            for v in [a, b] {
                if v >= dim.get() {
                    return Err(Error::OutOfRange {
                        site: i,
                        value: v,
                        dim: dim.get(),
                    });
                }
            }
            p.set(i, a, b);
        }
        Ok(p)
    }

    /// Operator acting as `X^xe Z^ze` on one register and trivially elsewhere.
    pub fn single(dim: Dim, n: usize, site: usize, xe: u8, ze: u8) -> PauliVec {
        assert!(site < n, "register {site} out of range for n={n}");
        let mut p = PauliVec::identity(dim, n);
        p.set(site, xe % dim.get(), ze % dim.get());
        p
    }

    /// Product of `X^xe Z^ze` over the listed registers.
    pub fn on_sites(dim: Dim, n: usize, sites: &[usize], xe: u8, ze: u8) -> PauliVec {
        let mut p = PauliVec::identity(dim, n);
        for &s in sites {
            assert!(s < n, "register {s} out of range for n={n}");
            p.set(s, xe % dim.get(), ze % dim.get());
        }
        p
    }

    /// Qubit operator from packed words (register `i` is bit `i`).
    pub fn from_binary_words(n: usize, x: u64, z: u64) -> PauliVec {
        assert!(n <= 64);
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        PauliVec {
            dim: Dim::QUBIT,
            n,
            x: if n == 0 { vec![] } else { vec![x & mask] },
            z: if n == 0 { vec![] } else { vec![z & mask] },
        }
    }

    /// Packed qubit words, when the operator fits in a single machine word.
    pub fn binary_words(&self) -> Option<(u64, u64)> {
        if self.dim != Dim::QUBIT || self.n > 64 {
            return None;
        }
        Some((
            self.x.first().copied().unwrap_or(0),
            self.z.first().copied().unwrap_or(0),
        ))
    }

    #[inline]
    pub fn dim(&self) -> Dim {
        self.dim
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn locate(&self, i: usize) -> (usize, usize) {
        let per = self.dim.per_word();
        (i / per, (i % per) * self.dim.bits())
    }

    #[inline]
    pub fn x_at(&self, i: usize) -> u8 {
        let (w, s) = self.locate(i);
        ((self.x[w] >> s) & self.dim.mask()) as u8
    }

    #[inline]
    pub fn z_at(&self, i: usize) -> u8 {
        let (w, s) = self.locate(i);
        ((self.z[w] >> s) & self.dim.mask()) as u8
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, xe: u8, ze: u8) {
        let (w, s) = self.locate(i);
        let m = self.dim.mask() << s;
        self.x[w] = (self.x[w] & !m) | ((xe as u64) << s);
        self.z[w] = (self.z[w] & !m) | ((ze as u64) << s);
    }

    pub fn x_exponents(&self) -> Vec<u8> {
        (0..self.n).map(|i| self.x_at(i)).collect()
    }

    pub fn z_exponents(&self) -> Vec<u8> {
        (0..self.n).map(|i| self.z_at(i)).collect()
    }

    /// Symplectic coordinate `c`: `x_c` for `c < n`, otherwise `z_{c-n}`.
    #[inline]
    pub(crate) fn coord(&self, c: usize) -> u8 {
        if c < self.n {
            self.x_at(c)
        } else {
            self.z_at(c - self.n)
        }
    }

    #[inline]
    pub(crate) fn set_coord(&mut self, c: usize, v: u8) {
        if c < self.n {
            let z = self.z_at(c);
            self.set(c, v, z);
        } else {
            let x = self.x_at(c - self.n);
            self.set(c - self.n, x, v);
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    /// Number of registers acted on nontrivially.
    pub fn weight(&self) -> usize {
        let mut total = 0;
        for (&a, &b) in self.x.iter().zip(&self.z) {
            let w = a | b;
            total += if self.dim.bits() == 1 {
                w.count_ones()
            } else {
                ((w | (w >> 1)) & 0x5555_5555_5555_5555).count_ones()
            } as usize;
        }
        total
    }

    /// Registers where both exponents are nonzero (the `Y` letters for qubits).
    pub fn y_count(&self) -> usize {
        let mut total = 0;
        for (&a, &b) in self.x.iter().zip(&self.z) {
            total += if self.dim.bits() == 1 {
                (a & b).count_ones()
            } else {
                let (a, b) = ((a | (a >> 1)), (b | (b >> 1)));
                (a & b & 0x5555_5555_5555_5555).count_ones()
            } as usize;
        }
        total
    }

    /// Registers acted on nontrivially, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.x_at(i) != 0 || self.z_at(i) != 0)
            .collect()
    }

    pub(crate) fn check_compatible(&self, other: &PauliVec) -> Result<()> {
        if self.dim != other.dim || self.n != other.n {
            return Err(Error::DimensionMismatch {
                left_d: self.dim.get(),
                left_n: self.n,
                right_d: other.dim.get(),
                right_n: other.n,
            });
        }
        Ok(())
    }

    /// The commutation exponent `r(P, Q)` with `PQ = w^r QP`; zero iff they commute.
    pub fn symplectic_product(&self, other: &PauliVec) -> Result<u8> {
        self.check_compatible(other)?;
        Ok(self.sp(other))
    }

    pub fn commutes_with(&self, other: &PauliVec) -> Result<bool> {
        Ok(self.symplectic_product(other)? == 0)
    }

    #[inline]
    pub(crate) fn sp(&self, other: &PauliVec) -> u8 {
        debug_assert!(self.dim == other.dim && self.n == other.n);
        if self.dim.bits() == 1 {
            let mut acc = 0u32;
            for i in 0..self.x.len() {
                acc ^= ((self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i])).count_ones();
            }
            (acc & 1) as u8
        } else {
            let d = self.dim.get() as u32;
            let mut pos = 0u32;
            let mut neg = 0u32;
            for i in 0..self.n {
                pos += (self.x_at(i) * other.z_at(i)) as u32;
                neg += (self.z_at(i) * other.x_at(i)) as u32;
            }
            ((pos + d * (neg + 1) - neg) % d) as u8
        }
    }

    /// Phaseless group law.
    pub fn multiply(&self, other: &PauliVec) -> Result<PauliVec> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    #[inline]
    pub(crate) fn add_assign(&mut self, other: &PauliVec) {
        debug_assert!(self.dim == other.dim && self.n == other.n);
        if self.dim.bits() == 1 {
            for i in 0..self.x.len() {
                self.x[i] ^= other.x[i];
                self.z[i] ^= other.z[i];
            }
        } else {
            for i in 0..self.n {
                let xe = self.dim.add(self.x_at(i), other.x_at(i));
                let ze = self.dim.add(self.z_at(i), other.z_at(i));
                self.set(i, xe, ze);
            }
        }
    }

    /// `self += a * other`.
    pub(crate) fn add_scaled_assign(&mut self, other: &PauliVec, a: u8) {
        match a % self.dim.get() {
            0 => {}
            1 => self.add_assign(other),
            a => {
                for i in 0..self.n {
                    let xe = self.dim.add(self.x_at(i), self.dim.mul(a, other.x_at(i)));
                    let ze = self.dim.add(self.z_at(i), self.dim.mul(a, other.z_at(i)));
                    self.set(i, xe, ze);
                }
            }
        }
    }

    pub fn scaled(&self, a: u8) -> PauliVec {
        let mut out = PauliVec::identity(self.dim, self.n);
        out.add_scaled_assign(self, a);
        out
    }

    /// Phaseless inverse: `(d-1) * P`. Qubit operators are self-inverse.
    pub fn inverse(&self) -> PauliVec {
        if self.dim == Dim::QUBIT {
            self.clone()
        } else {
            self.scaled(self.dim.get() - 1)
        }
    }

    /// Restriction of the operator to the given registers, in the given order.
    pub fn restrict(&self, sites: &[usize]) -> PauliVec {
        let mut out = PauliVec::identity(self.dim, sites.len());
        for (j, &s) in sites.iter().enumerate() {
            out.set(j, self.x_at(s), self.z_at(s));
        }
        out
    }

    /// Parses the canonical text form.
    ///
    /// Qubits use one letter per register from `I`, `X`, `Y`, `Z`. Qutrits use
    /// comma-separated site tokens `I`, `X`, `X2`, `Z`, `Z2`, `XZ`, `XZ2`, `X2Z`,
    /// `X2Z2`.
    pub fn parse(text: &str, dim: Dim) -> Result<PauliVec> {
        if dim == Dim::QUBIT {
            parse_qubit(text)
        } else {
            parse_qudit(text, dim)
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Total order used for deterministic tie-breaking: the x exponents read
    /// as a base-d integer with register 0 least significant, then the z
    /// exponents the same way.
    pub fn canonical_cmp(&self, other: &PauliVec) -> Ordering {
        (self.dim, self.n)
            .cmp(&(other.dim, other.n))
            .then_with(|| self.x.iter().rev().cmp(other.x.iter().rev()))
            .then_with(|| self.z.iter().rev().cmp(other.z.iter().rev()))
    }

    /// Weight first, then [`PauliVec::canonical_cmp`].
    pub fn weight_cmp(&self, other: &PauliVec) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.canonical_cmp(other))
    }
}

impl PartialOrd for PauliVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

fn qubit_letter(x: u8, z: u8) -> char {
    match (x, z) {
        (0, 0) => 'I',
        (1, 0) => 'X',
        (1, 1) => 'Y',
        _ => 'Z',
    }
}

fn qudit_token(x: u8, z: u8) -> String {
    if x == 0 && z == 0 {
        return "I".to_string();
    }
    let mut s = String::new();
    match x {
        0 => {}
        1 => s.push('X'),
        e => s.push_str(&format!("X{e}")),
    }
    match z {
        0 => {}
        1 => s.push('Z'),
        e => s.push_str(&format!("Z{e}")),
    }
    s
}

impl fmt::Display for PauliVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim == Dim::QUBIT {
            for i in 0..self.n {
                write!(f, "{}", qubit_letter(self.x_at(i), self.z_at(i)))?;
            }
        } else {
            for i in 0..self.n {
                if i > 0 {
                    f.write_str(",")?;
                }
                f.write_str(&qudit_token(self.x_at(i), self.z_at(i)))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PauliVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliVec(d={}, {})", self.dim, self)
    }
}

fn parse_qubit(text: &str) -> Result<PauliVec> {
    if text.is_empty() {
        return Err(Error::Syntax {
            position: 0,
            message: "empty operator".into(),
        });
    }
    let chars: Vec<char> = text.chars().collect();
    let mut p = PauliVec::identity(Dim::QUBIT, chars.len());
    for (i, &c) in chars.iter().enumerate() {
        let (x, z) = match c {
            'I' => (0, 0),
            'X' => (1, 0),
            'Y' => (1, 1),
            'Z' => (0, 1),
            ',' | '0'..='9' => {
                return Err(Error::InvalidLetter {
                    letter: c.to_string(),
                    position: i,
                    dim: 2,
                })
            }
            _ => {
                return Err(Error::Syntax {
                    position: i,
                    message: format!("unexpected character {c:?}"),
                })
            }
        };
        p.set(i, x, z);
    }
    Ok(p)
}

fn parse_qudit(text: &str, dim: Dim) -> Result<PauliVec> {
    let mut sites = Vec::new();
    let mut offset = 0;
    for raw in text.split(',') {
        let lead = raw.len() - raw.trim_start().len();
        let token = raw.trim();
        sites.push(parse_token(token, offset + lead, dim)?);
        offset += raw.len() + 1;
    }
    let mut p = PauliVec::identity(dim, sites.len());
    for (i, (x, z)) in sites.into_iter().enumerate() {
        p.set(i, x, z);
    }
    Ok(p)
}

fn parse_token(token: &str, position: usize, dim: Dim) -> Result<(u8, u8)> {
    if token.is_empty() {
        return Err(Error::Syntax {
            position,
            message: "empty site token".into(),
        });
    }
    if token == "I" {
        return Ok((0, 0));
    }
    let bytes = token.as_bytes();
    let mut i = 0;
    let mut exps = [0u8; 2];
    for (slot, letter) in [(0, b'X'), (1, b'Z')] {
        if i < bytes.len() && bytes[i] == letter {
            i += 1;
            let mut e = 1u8;
            if i < bytes.len() && bytes[i].is_ascii_digit() {
                e = bytes[i] - b'0';
                i += 1;
                if e == 0 || e >= dim.get() {
                    return Err(Error::Syntax {
                        position: position + i - 1,
                        message: format!("exponent {e} not allowed for dimension {dim}"),
                    });
                }
            }
            exps[slot] = e;
        }
    }
    if i == 0 || i < bytes.len() {
        let c = token[i..].chars().next().unwrap_or(' ');
        if matches!(c, 'Y' | 'I' | 'X' | 'Z') {
            return Err(Error::InvalidLetter {
                letter: c.to_string(),
                position: position + i,
                dim: dim.get(),
            });
        }
        return Err(Error::Syntax {
            position: position + i,
            message: format!("unexpected character {c:?}"),
        });
    }
    Ok((exps[0], exps[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> PauliVec {
        PauliVec::parse(s, Dim::QUBIT).unwrap()
    }

    fn t(s: &str) -> PauliVec {
        PauliVec::parse(s, Dim::QUTRIT).unwrap()
    }

    #[test]
    fn symplectic_examples() {
        assert_eq!(q("XXXX").symplectic_product(&q("ZZZZ")).unwrap(), 0);
        assert_eq!(q("X").symplectic_product(&q("Z")).unwrap(), 1);
        assert_eq!(t("X,X,X").symplectic_product(&t("Z,Z,Z")).unwrap(), 0);
        assert_eq!(t("X").symplectic_product(&t("Z")).unwrap(), 1);
        assert_eq!(t("Z").symplectic_product(&t("X")).unwrap(), 2);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            q("XX").symplectic_product(&q("XXX")),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(q("X").multiply(&t("X")).is_err());
    }

    #[test]
    fn multiply_examples() {
        let y = q("X").multiply(&q("Z")).unwrap();
        assert_eq!((y.x_at(0), y.z_at(0)), (1, 1));
        assert_eq!(y.render(), "Y");
        assert_eq!(q("XYZ").multiply(&q("III")).unwrap(), q("XYZ"));
        assert!(q("XYZ").multiply(&q("XYZ")).unwrap().is_identity());
        let x2 = t("X").multiply(&t("X")).unwrap();
        assert_eq!((x2.x_at(0), x2.z_at(0)), (2, 0));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(q("IXYZ").weight(), 3);
        assert_eq!(PauliVec::identity(Dim::QUBIT, 7).weight(), 0);
        assert_eq!(q("XZZXI").weight(), 4);
        assert_eq!(t("X2Z,I,Z2,I").weight(), 2);
        assert_eq!(q("YIYYZ").y_count(), 3);
        assert_eq!(t("X2Z,XZ2,Z2,X").y_count(), 2);
    }

    #[test]
    fn parse_and_render() {
        let p = q("XIZY");
        assert_eq!(p.x_exponents(), vec![1, 0, 0, 1]);
        assert_eq!(p.z_exponents(), vec![0, 0, 1, 1]);
        assert_eq!(PauliVec::identity(Dim::QUBIT, 3).render(), "III");
        let r = t("X,Z2,I");
        assert_eq!(r.x_exponents(), vec![1, 0, 0]);
        assert_eq!(r.z_exponents(), vec![0, 2, 0]);
        assert_eq!(r.render(), "X,Z2,I");
        assert_eq!(t(" X2Z2 , XZ").render(), "X2Z2,XZ");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            PauliVec::parse("XQZ", Dim::QUBIT),
            Err(Error::Syntax { position: 1, .. })
        ));
        assert!(matches!(
            PauliVec::parse("X,Z", Dim::QUBIT),
            Err(Error::InvalidLetter { position: 1, .. })
        ));
        assert!(matches!(
            PauliVec::parse("X,Y", Dim::QUTRIT),
            Err(Error::InvalidLetter { position: 2, .. })
        ));
        assert!(matches!(
            PauliVec::parse("X,Z3", Dim::QUTRIT),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            PauliVec::parse("X,,Z", Dim::QUTRIT),
            Err(Error::Syntax { position: 2, .. })
        ));
        assert!(PauliVec::parse("", Dim::QUBIT).is_err());
        assert!(PauliVec::parse("ZX", Dim::QUTRIT).is_err());
    }

    #[test]
    fn single_qubit_commutation_table() {
        let ops = ["I", "X", "Y", "Z"];
        for (i, a) in ops.iter().enumerate() {
            for (j, b) in ops.iter().enumerate() {
                let expect = if i == 0 || j == 0 || i == j { 0 } else { 1 };
                assert_eq!(q(a).symplectic_product(&q(b)).unwrap(), expect, "{a} {b}");
            }
        }
    }

    #[test]
    fn inverse_cancels() {
        let p = t("X2Z,Z,XZ2");
        assert!(p.multiply(&p.inverse()).unwrap().is_identity());
        let b = q("XYZ");
        assert_eq!(b.inverse(), b);
    }

    #[test]
    fn wide_operators_span_words() {
        let n = 70;
        let a = PauliVec::on_sites(Dim::QUBIT, n, &[0, 65, 69], 1, 0);
        let b = PauliVec::on_sites(Dim::QUBIT, n, &[65], 0, 1);
        assert_eq!(a.weight(), 3);
        assert_eq!(a.symplectic_product(&b).unwrap(), 1);
        let c = PauliVec::on_sites(Dim::QUTRIT, 40, &[1, 35], 2, 1);
        assert_eq!(c.weight(), 2);
        assert_eq!(c.x_at(35), 2);
        assert_eq!(c.z_at(35), 1);
    }

    #[test]
    fn canonical_order_is_little_endian() {
        assert_eq!(q("YI").cmp(&q("IY")), Ordering::Less);
        assert_eq!(q("IZ").cmp(&q("XI")), Ordering::Less);
        assert_eq!(t("Z").cmp(&t("XZ")), Ordering::Less);
        assert_eq!(t("XZ").cmp(&t("X2Z")), Ordering::Less);
    }
}
