//! Finite inverse semigroups given by multiplication tables.
//!
//! Elements are indices into the label list, in input order. Validation is an
//! exhaustive scan of the axioms; every rejection names a witness tuple that
//! can be re-checked directly against the table.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an element of an [`InverseSemigroup`].
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("the element set is empty")]
    Empty,
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("multiplication table must be {expected}x{expected}")]
    BadShape { expected: usize },
    #[error("table entry at ({row},{col}) is {value}, out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("unknown zero label `{0}`")]
    UnknownZero(String),
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: Elem, b: Elem, c: Elem },
    #[error("element {s} has {} inverse candidates", candidates.len())]
    NoUniqueInverse { s: Elem, candidates: Vec<Elem> },
    #[error("idempotents {e} and {f} do not commute")]
    IdempotentsDoNotCommute { e: Elem, f: Elem },
    #[error("declared zero {zero} does not absorb {s}")]
    ZeroNotAbsorbing { zero: Elem, s: Elem },
    #[error("the semigroup has no zero element")]
    NoZeroElement,
}

/// A validated finite inverse semigroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSemigroup {
    labels: Vec<String>,
    mul: Vec<Elem>,
    star: Vec<Elem>,
    zero: Option<Elem>,
    idempotents: Vec<Elem>,
}

/// JSON form: `{"elements":[...], "mul":[[...]], "zero": optional label}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupDoc {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<String>,
}

/// Outcome of the continuity predicate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContinuityReport {
    pub continuous: bool,
    /// A pair `s != t` with `s ≡ t` when not continuous.
    pub witness: Option<(Elem, Elem)>,
}

impl InverseSemigroup {
    /// Validates a multiplication table and derives the involution.
    pub fn from_table(
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
        zero: Option<&str>,
    ) -> Result<Self, SemigroupError> {
        let n = labels.len();
        if n == 0 {
            return Err(SemigroupError::Empty);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(SemigroupError::DuplicateLabel(l.clone()));
            }
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(SemigroupError::BadShape { expected: n });
        }
        let mut mul = Vec::with_capacity(n * n);
        for (row, r) in table.iter().enumerate() {
            for (col, &value) in r.iter().enumerate() {
                if value >= n {
                    return Err(SemigroupError::OutOfRange { row, col, value });
                }
                mul.push(value);
            }
        }
        let zero = match zero {
            None => None,
            Some(z) => Some(
                labels
                    .iter()
                    .position(|l| l == z)
                    .ok_or_else(|| SemigroupError::UnknownZero(z.to_string()))?,
            ),
        };
        Self::validate(labels, mul, zero)
    }

    pub fn from_doc(doc: &SemigroupDoc) -> Result<Self, SemigroupError> {
        Self::from_table(doc.elements.clone(), doc.mul.clone(), doc.zero.as_deref())
    }

    pub fn to_doc(&self) -> SemigroupDoc {
        let n = self.len();
        SemigroupDoc {
            elements: self.labels.clone(),
            mul: (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect(),
            zero: self.zero.map(|z| self.labels[z].clone()),
        }
    }

    fn validate(labels: Vec<String>, mul: Vec<Elem>, zero: Option<Elem>) -> Result<Self, SemigroupError> {
        let n = labels.len();
        let m = |a: Elem, b: Elem| mul[a * n + b];
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(SemigroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let mut star = Vec::with_capacity(n);
        for s in 0..n {
            let candidates: Vec<Elem> = (0..n)
                .filter(|&t| m(m(s, t), s) == s && m(m(t, s), t) == t)
                .collect();
            if candidates.len() != 1 {
                return Err(SemigroupError::NoUniqueInverse { s, candidates });
            }
            star.push(candidates[0]);
        }
        let idempotents: Vec<Elem> = (0..n).filter(|&e| m(e, e) == e).collect();
        for (i, &e) in idempotents.iter().enumerate() {
            for &f in &idempotents[i + 1..] {
                if m(e, f) != m(f, e) {
                    return Err(SemigroupError::IdempotentsDoNotCommute { e, f });
                }
            }
        }
        if let Some(z) = zero {
            if let Some(s) = (0..n).find(|&s| m(z, s) != z || m(s, z) != z) {
                return Err(SemigroupError::ZeroNotAbsorbing { zero: z, s });
            }
        }
        Ok(Self {
            labels,
            mul,
            star,
            zero,
            idempotents,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, s: Elem) -> &str {
        &self.labels[s]
    }

    pub fn index_of(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.len() + b]
    }

    #[inline]
    pub fn star(&self, s: Elem) -> Elem {
        self.star[s]
    }

    pub fn zero(&self) -> Option<Elem> {
        self.zero
    }

    /// `s*s`, the source idempotent of `s`.
    pub fn source_idem(&self, s: Elem) -> Elem {
        self.mul(self.star(s), s)
    }

    /// `ss*`, the range idempotent of `s`.
    pub fn range_idem(&self, s: Elem) -> Elem {
        self.mul(s, self.star(s))
    }

    pub fn idempotents(&self) -> &[Elem] {
        &self.idempotents
    }

    pub fn is_idempotent(&self, s: Elem) -> bool {
        self.mul(s, s) == s
    }

    /// Natural partial order: `s <= t` iff `s = t (s*s)`.
    pub fn leq(&self, s: Elem, t: Elem) -> bool {
        s == self.mul(t, self.source_idem(s))
    }

    /// The natural order as a dense relation matrix, `order[s][t] == (s <= t)`.
    pub fn natural_order(&self) -> Vec<Vec<bool>> {
        self.elements()
            .map(|s| self.elements().map(|t| self.leq(s, t)).collect())
            .collect()
    }

    /// `s ≡ t` iff `s*s = t*t` and every nonzero idempotent `f <= s*s`
    /// dominates a nonzero idempotent `e <= f` with `se = te`.
    pub fn equiv(&self, s: Elem, t: Elem) -> Result<bool, SemigroupError> {
        let zero = self.zero.ok_or(SemigroupError::NoZeroElement)?;
        let ss = self.source_idem(s);
        if ss != self.source_idem(t) {
            return Ok(false);
        }
        let nonzero = |e: &&Elem| **e != zero;
        Ok(self
            .idempotents
            .iter()
            .filter(nonzero)
            .filter(|&&f| self.leq(f, ss))
            .all(|&f| {
                self.idempotents
                    .iter()
                    .filter(nonzero)
                    .any(|&e| self.leq(e, f) && self.mul(s, e) == self.mul(t, e))
            }))
    }

    /// Decides whether `≡` is trivial, returning a witness pair otherwise.
    pub fn is_continuous(&self) -> Result<ContinuityReport, SemigroupError> {
        for s in self.elements() {
            for t in s + 1..self.len() {
                if self.equiv(s, t)? {
                    return Ok(ContinuityReport {
                        continuous: false,
                        witness: Some((s, t)),
                    });
                }
            }
        }
        Ok(ContinuityReport {
            continuous: true,
            witness: None,
        })
    }

    /// The cyclic group `Z/n` with elements labelled `g0..g{n-1}`.
    pub fn cyclic_group(n: usize) -> Self {
        let labels = (0..n).map(|i| format!("g{i}")).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(labels, table, None).expect("cyclic group table is valid")
    }

    /// Adjoins a new absorbing zero element (appended last).
    pub fn with_adjoined_zero(&self, label: &str) -> Result<Self, SemigroupError> {
        let n = self.len();
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        let table = (0..=n)
            .map(|a| {
                (0..=n)
                    .map(|b| if a == n || b == n { n } else { self.mul(a, b) })
                    .collect()
            })
            .collect();
        Self::from_table(labels, table, Some(label))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_s5(ss: usize) -> Result<InverseSemigroup, SemigroupError> {
        // elements e, 1, σ
        InverseSemigroup::from_table(
            vec!["e".into(), "1".into(), "sigma".into()],
            vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, ss]],
            None,
        )
    }

    #[test]
    fn interval_semigroup_is_valid() {
        let s = table_s5(1).unwrap();
        assert_eq!(s.star(2), 2);
        assert_eq!(s.idempotents(), &[0, 1]);
    }

    #[test]
    fn trivial_group() {
        let s = InverseSemigroup::from_table(vec!["1".into()], vec![vec![0]], None).unwrap();
        assert_eq!(s.star(0), 0);
    }

    #[test]
    fn sigma_squared_sigma_is_a_chain_semilattice() {
        // Exhaustive scan: e < σ < 1 is a valid 3-element chain.
        let s = table_s5(2).unwrap();
        assert_eq!(s.idempotents(), &[0, 1, 2]);
        assert!(s.leq(2, 1) && s.leq(0, 2));
    }

    #[test]
    fn nilpotent_sigma_has_no_inverse() {
        let err = table_s5(0).unwrap_err();
        assert_eq!(err, SemigroupError::NoUniqueInverse { s: 2, candidates: vec![] });
    }

    #[test]
    fn broken_identity_is_not_associative() {
        let err = InverseSemigroup::from_table(
            vec!["e".into(), "1".into(), "sigma".into()],
            vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 0, 1]],
            None,
        )
        .unwrap_err();
        let SemigroupError::NotAssociative { a, b, c } = err else {
            panic!("unexpected {err:?}")
        };
        // re-evaluate the witness against the raw table
        let t = [[0, 0, 0], [0, 1, 2], [0, 0, 1]];
        assert_ne!(t[t[a][b]][c], t[a][t[b][c]]);
    }

    #[test]
    fn noncommuting_idempotents_are_rejected() {
        // left-zero band {a,b}: xy = x
        let err = InverseSemigroup::from_table(
            vec!["a".into(), "b".into()],
            vec![vec![0, 0], vec![1, 1]],
            None,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            SemigroupError::NoUniqueInverse { .. } | SemigroupError::IdempotentsDoNotCommute { .. }
        ));
    }

    #[test]
    fn idempotent_sets() {
        assert_eq!(table_s5(1).unwrap().idempotents(), &[0, 1]);
        assert_eq!(InverseSemigroup::cyclic_group(2).idempotents(), &[0]);
        let sl = InverseSemigroup::from_table(
            vec!["0".into(), "1".into()],
            vec![vec![0, 0], vec![0, 1]],
            Some("0"),
        )
        .unwrap();
        assert_eq!(sl.idempotents(), &[0, 1]);
    }

    #[test]
    fn natural_order_of_interval_semigroup() {
        let s = table_s5(1).unwrap();
        let o = s.natural_order();
        let expected = [[true, true, true], [false, true, false], [false, false, true]];
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(o[a][b], expected[a][b], "({a},{b})");
            }
        }
        let g = InverseSemigroup::cyclic_group(4);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(g.leq(a, b), a == b);
            }
        }
    }

    #[test]
    fn continuity() {
        let sl = InverseSemigroup::from_table(
            vec!["0".into(), "1".into()],
            vec![vec![0, 0], vec![0, 1]],
            Some("0"),
        )
        .unwrap();
        assert!(sl.is_continuous().unwrap().continuous);
        let g0 = InverseSemigroup::cyclic_group(3).with_adjoined_zero("0").unwrap();
        assert!(g0.is_continuous().unwrap().continuous);
        assert_eq!(
            InverseSemigroup::cyclic_group(3).is_continuous(),
            Err(SemigroupError::NoZeroElement)
        );
        // With a zero adjoined, 1 ≡ σ: the only nonzero idempotents below 1 are e and 1,
        // and 1·e = e = σ·e.
        let s5 = table_s5(1).unwrap().with_adjoined_zero("0").unwrap();
        let r = s5.is_continuous().unwrap();
        assert!(!r.continuous);
        assert_eq!(r.witness, Some((1, 2)));
    }
}
