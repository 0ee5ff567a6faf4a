//! Hand-built protocols: six pairs against one error, the Hamming-search
//! family, nine pairs against two errors, and four qutrit pairs against one
//! error.
//!
//! Each strategy replays its own decisions from the chosen outcomes in the
//! history, so `next` is a pure function of the history.

use crate::engine::{History, Params, Step, Strategy};
use crate::error::{Error, Result};
use crate::pauli::{Dim, PauliVec};

/// A strategy with its registry key.
pub struct NamedProtocol {
    pub name: String,
    pub description: &'static str,
    pub strategy: Box<dyn Strategy>,
}

/// Registry keys accepted by [`lookup`].
pub const NAMES: &[&str] = &[
    "six-pair",
    "hamming-m3",
    "hamming-m4",
    "hamming-m5",
    "nine-pair",
    "qutrit-four",
];

pub fn lookup(name: &str) -> Option<NamedProtocol> {
    let (description, strategy): (&'static str, Box<dyn Strategy>) = match name {
        "six-pair" => (
            "2 pairs from 6 against 1 error, via the four-qubit detection code",
            Box::new(six_pair()),
        ),
        "hamming-m3" | "hamming-m4" | "hamming-m5" => {
            let m = name[name.len() - 1..].parse().unwrap();
            (
                "2^m-m-2 pairs from 2^m-1 against 1 error, via X-parity binary search or Hamming checks",
                Box::new(hamming_family(m).ok()?),
            )
        }
        "nine-pair" => (
            "1 pair from 9 against 2 errors, via the five-qubit and four-qubit codes",
            Box::new(nine_pair()),
        ),
        "qutrit-four" => (
            "1 qutrit pair from 4 against 1 error, via the three-qutrit detection code",
            Box::new(qutrit_four()),
        ),
        _ => return None,
    };
    Some(NamedProtocol {
        name: name.to_string(),
        description,
        strategy,
    })
}

/// Measures a fixed list of generators, then discards the block chosen by
/// `pick_discard` from the outcomes.
struct BlockProtocol {
    params: Params,
    gens: Vec<PauliVec>,
    pick_discard: fn(&[u8]) -> Vec<usize>,
}

impl Strategy for BlockProtocol {
    fn params(&self) -> Params {
        self.params
    }

    fn next(&self, history: &History) -> Result<Step> {
        let outcomes = history.chosen_outcomes();
        if let Some(g) = self.gens.get(outcomes.len()) {
            return Ok(Step::Measure(g.clone()));
        }
        if history.has_discarded() {
            Ok(Step::Finish)
        } else {
            Ok(Step::Discard((self.pick_discard)(&outcomes)))
        }
    }
}

fn parse_all(dim: Dim, ops: &[&str]) -> Vec<PauliVec> {
    ops.iter()
        .map(|s| PauliVec::parse(s, dim).expect("built-in operator text"))
        .collect()
}

fn any_nonzero(outcomes: &[u8]) -> bool {
    outcomes.iter().any(|&o| o != 0)
}

/// Two pairs from six against one error.
///
/// Measures `XXXX` and `ZZZZ` on pairs 1-4. A nonzero syndrome discards pairs
/// 1-4; otherwise pairs 5 and 6 are discarded.
pub fn six_pair() -> impl Strategy {
    BlockProtocol {
        params: Params {
            dim: Dim::QUBIT,
            n: 6,
            t: 1,
            k_claimed: 2,
        },
        gens: parse_all(Dim::QUBIT, &["XXXXII", "ZZZZII"]),
        pick_discard: |o| {
            if any_nonzero(o) {
                vec![0, 1, 2, 3]
            } else {
                vec![4, 5]
            }
        },
    }
}

/// One pair from nine against two errors.
///
/// Measures the five-qubit code on pairs 1-5 and the four-qubit code on pairs
/// 6-9. If the last block fired, or nothing fired, pairs 6-9 are discarded;
/// if only the first block fired, pairs 1-5 are discarded.
pub fn nine_pair() -> impl Strategy {
    BlockProtocol {
        params: Params {
            dim: Dim::QUBIT,
            n: 9,
            t: 2,
            k_claimed: 1,
        },
        gens: parse_all(
            Dim::QUBIT,
            &[
                "XZZXIIIII",
                "IXZZXIIII",
                "XIXZZIIII",
                "ZXIXZIIII",
                "IIIIIXXXX",
                "IIIIIZZZZ",
            ],
        ),
        pick_discard: |o| {
            let first = any_nonzero(&o[..4]);
            let last = any_nonzero(&o[4..]);
            if first && !last {
                vec![0, 1, 2, 3, 4]
            } else {
                vec![5, 6, 7, 8]
            }
        },
    }
}

/// One qutrit pair from four against one error.
///
/// Measures `XXX` and `ZZZ` on pairs 1-3. Any nonzero outcome discards pairs
/// 1-3 and keeps pair 4; otherwise pair 4 is discarded.
pub fn qutrit_four() -> impl Strategy {
    BlockProtocol {
        params: Params {
            dim: Dim::QUTRIT,
            n: 4,
            t: 1,
            k_claimed: 1,
        },
        gens: parse_all(Dim::QUTRIT, &["X,X,X,I", "Z,Z,Z,I"]),
        pick_discard: |o| {
            if any_nonzero(o) {
                vec![0, 1, 2]
            } else {
                vec![3]
            }
        },
    }
}

/// The Hamming-search family on `2^m - 1` pairs, keeping `2^m - m - 2`.
#[derive(Clone, Debug)]
pub struct HammingFamily {
    m: u32,
    n: usize,
}

/// Builds the family member for `m >= 3`.
pub fn hamming_family(m: u32) -> Result<HammingFamily> {
    if !(3..=20).contains(&m) {
        return Err(Error::Precondition(format!(
            "Hamming-search family needs 3 <= m <= 20, got m = {m}"
        )));
    }
    Ok(HammingFamily {
        m,
        n: (1usize << m) - 1,
    })
}

impl HammingFamily {
    pub fn m(&self) -> u32 {
        self.m
    }

    fn x_over(&self, sites: &[usize]) -> PauliVec {
        PauliVec::on_sites(Dim::QUBIT, self.n, sites, 1, 0)
    }

    /// Z parity check for digit `j` (0 = most significant) of the pair number.
    fn z_check(&self, j: u32) -> PauliVec {
        let bit = self.m - 1 - j;
        let sites: Vec<usize> = (0..self.n).filter(|p| (p >> bit) & 1 == 0).collect();
        PauliVec::on_sites(Dim::QUBIT, self.n, &sites, 0, 1)
    }
}

impl Strategy for HammingFamily {
    fn params(&self) -> Params {
        Params {
            dim: Dim::QUBIT,
            n: self.n,
            t: 1,
            k_claimed: self.n - self.m as usize - 1,
        }
    }

    fn next(&self, history: &History) -> Result<Step> {
        let outcomes = history.chosen_outcomes();
        let Some(&first) = outcomes.first() else {
            return Ok(Step::Measure(self.x_over(&(0..self.n).collect::<Vec<_>>())));
        };

        if first == 0 {
            // Hamming checks pin down an X error, or certify there is none.
            let done = outcomes.len() - 1;
            return Ok(if done < self.m as usize {
                Step::Measure(self.z_check(done as u32))
            } else {
                Step::Finish
            });
        }

        // Binary search for the Y or Z error: keep the half that fired.
        let mut candidates: Vec<usize> = (0..self.n).collect();
        for &o in &outcomes[1..] {
            let split = candidates.len().div_ceil(2);
            if o != 0 {
                candidates.truncate(split);
            } else {
                candidates.drain(..split);
            }
        }
        let steps_done = outcomes.len() - 1;
        if steps_done < self.m as usize - 1 {
            let split = candidates.len().div_ceil(2);
            Ok(Step::Measure(self.x_over(&candidates[..split])))
        } else if !history.has_discarded() {
            Ok(Step::Discard(candidates))
        } else {
            Ok(Step::Finish)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::simulate;

    fn q(s: &str) -> PauliVec {
        PauliVec::parse(s, Dim::QUBIT).unwrap()
    }

    fn ops(tr: &crate::engine::Transcript) -> Vec<(String, u8)> {
        tr.history
            .measurements()
            .map(|m| (m.op.render(), m.outcome))
            .collect()
    }

    #[test]
    fn registry() {
        for name in NAMES {
            let p = lookup(name).unwrap();
            assert_eq!(p.name, *name);
        }
        assert!(lookup("no-such").is_none());
        assert_eq!(lookup("hamming-m4").unwrap().strategy.params().n, 15);
    }

    #[test]
    fn hamming_rejects_small_m() {
        assert!(hamming_family(2).is_err());
        assert_eq!(hamming_family(3).unwrap().params().k_claimed, 3);
        assert_eq!(hamming_family(5).unwrap().params().k_claimed, 25);
    }

    #[test]
    fn hamming_z_checks_use_most_significant_digit_first() {
        let h = hamming_family(3).unwrap();
        let checks: Vec<_> = (0..3).map(|j| h.z_check(j).render()).collect();
        assert_eq!(checks, vec!["ZZZZIII", "ZZIIZZI", "ZIZIZIZ"]);
    }

    #[test]
    fn six_pair_branches() {
        let tr = simulate(&six_pair(), &q("IXIIII")).unwrap();
        assert_eq!(tr.k_out, 2);
        assert_eq!(
            &ops(&tr)[..2],
            &[("XXXXII".into(), 0), ("ZZZZII".into(), 1)]
        );

        let tr = simulate(&six_pair(), &q("IIIIII")).unwrap();
        assert_eq!(
            &ops(&tr)[..2],
            &[("XXXXII".into(), 0), ("ZZZZII".into(), 0)]
        );
        assert_eq!(tr.history.discards().next().unwrap(), &[4, 5]);
        assert!(tr.k_out >= 2);

        let tr = simulate(&six_pair(), &q("IIIIZI")).unwrap();
        assert_eq!(tr.history.discards().next().unwrap(), &[4, 5]);
        assert_eq!(tr.k_out, 2);
    }

    #[test]
    fn six_pair_error_branch_correction() {
        let tr = simulate(&six_pair(), &q("YIIIII")).unwrap();
        assert_eq!(tr.history.len(), 4);
        assert_eq!(tr.correction, q("YIIIII"));
    }

    #[test]
    fn nine_pair_branches() {
        let tr = simulate(&nine_pair(), &q("XIIIIIZII")).unwrap();
        assert_eq!(tr.history.discards().next().unwrap(), &[5, 6, 7, 8]);
        assert_eq!(tr.k_out, 1);

        let tr = simulate(&nine_pair(), &q("IYIYIIIII")).unwrap();
        assert_eq!(tr.history.discards().next().unwrap(), &[0, 1, 2, 3, 4]);
        assert_eq!(tr.k_out, 2);

        let tr = simulate(&nine_pair(), &q("IIIIIXXII")).unwrap();
        assert!(tr.history.chosen_outcomes().iter().all(|&o| o == 0));
        assert_eq!(tr.history.discards().next().unwrap(), &[5, 6, 7, 8]);
        assert_eq!(tr.k_out, 1);
    }

    #[test]
    fn qutrit_branches() {
        let t = |s: &str| PauliVec::parse(s, Dim::QUTRIT).unwrap();
        let tr = simulate(&qutrit_four(), &t("I,X,I,I")).unwrap();
        assert_eq!(tr.history.discards().next().unwrap(), &[0, 1, 2]);
        assert_eq!(tr.k_out, 1);

        let tr = simulate(&qutrit_four(), &t("I,I,I,I")).unwrap();
        assert_eq!(tr.history.discards().next().unwrap(), &[3]);
        assert_eq!(tr.k_out, 1);

        let tr = simulate(&qutrit_four(), &t("I,I,I,Z2")).unwrap();
        assert_eq!(tr.history.discards().next().unwrap(), &[3]);
        assert_eq!(tr.k_out, 1);
    }

    #[test]
    fn qutrit_no_error_branch_survivors() {
        let t = |s: &str| PauliVec::parse(s, Dim::QUTRIT).unwrap();
        let mut last = None;
        let tr = crate::engine::simulate_observed(&qutrit_four(), &t("I,I,I,Z"), |_, c| {
            last = Some(c.clone())
        })
        .unwrap();
        let survivors: Vec<_> = last
            .unwrap()
            .members()
            .iter()
            .map(PauliVec::render)
            .collect();
        assert_eq!(survivors, vec!["I,I,I,Z", "I,I,I,XZ", "I,I,I,X2Z"]);
        assert_eq!(tr.correction, t("I,I,I,Z"));
    }
}
