//! Injective piecewise-affine maps between finite unions of rational intervals.

use num_traits::{One, Signed, Zero};

use super::interval::{fmt_q, qi, Interval, IntervalSet, Q};

/// `x -> slope * x + offset` on `dom`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffinePiece {
    pub dom: Interval,
    pub slope: Q,
    pub offset: Q,
}

impl AffinePiece {
    pub fn eval(&self, x: &Q) -> Q {
        &self.slope * x + &self.offset
    }

    pub fn image(&self) -> Interval {
        self.dom.affine_image(&self.slope, &self.offset)
    }

    pub fn reversing(&self) -> bool {
        self.slope.is_negative()
    }

    fn same_map(&self, other: &AffinePiece) -> bool {
        self.slope == other.slope && self.offset == other.offset
    }

    /// Preimage of `j` (a subset of the image) inside `dom`.
    fn pull_back(&self, j: &Interval) -> Interval {
        let inv_slope = Q::one() / &self.slope;
        let inv_offset = -(&self.offset) / &self.slope;
        j.affine_image(&inv_slope, &inv_offset)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffineError {
    ZeroSlope(usize),
    OverlappingDomains(usize, usize),
    NotInjective(usize, usize),
}

impl std::fmt::Display for AffineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AffineError::ZeroSlope(i) => write!(f, "piece {i} has zero slope"),
            AffineError::OverlappingDomains(i, j) => write!(f, "pieces {i} and {j} have overlapping domains"),
            AffineError::NotInjective(i, j) => write!(f, "pieces {i} and {j} have overlapping images"),
        }
    }
}

/// A bijection from a finite union of intervals onto another, affine with
/// rational coefficients on each piece. Pieces are kept sorted and merged.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiecewiseAffine {
    pieces: Vec<AffinePiece>,
}

impl PiecewiseAffine {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(pieces: Vec<AffinePiece>) -> Result<Self, AffineError> {
        for (i, p) in pieces.iter().enumerate() {
            if p.slope.is_zero() {
                return Err(AffineError::ZeroSlope(i));
            }
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if pieces[i].dom.intersect(&pieces[j].dom).is_some() {
                    return Err(AffineError::OverlappingDomains(i, j));
                }
                if pieces[i].image().intersect(&pieces[j].image()).is_some() {
                    return Err(AffineError::NotInjective(i, j));
                }
            }
        }
        Ok(Self::canonical(pieces))
    }

    pub fn identity(on: &IntervalSet) -> Self {
        Self::canonical(
            on.parts()
                .iter()
                .map(|d| AffinePiece {
                    dom: d.clone(),
                    slope: Q::one(),
                    offset: Q::zero(),
                })
                .collect(),
        )
    }

    fn canonical(mut pieces: Vec<AffinePiece>) -> Self {
        pieces.sort_by(|a, b| {
            a.dom
                .lo
                .cmp(&b.dom.lo)
                .then_with(|| b.dom.lo_closed.cmp(&a.dom.lo_closed))
        });
        let mut out: Vec<AffinePiece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if let Some(last) = out.last_mut() {
                let touching = last.dom.hi == p.dom.lo && (last.dom.hi_closed || p.dom.lo_closed);
                if touching && last.same_map(&p) {
                    last.dom.hi = p.dom.hi;
                    last.dom.hi_closed = p.dom.hi_closed;
                    continue;
                }
            }
            out.push(p);
        }
        Self { pieces: out }
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn domain(&self) -> IntervalSet {
        IntervalSet::from_intervals(self.pieces.iter().map(|p| p.dom.clone()))
    }

    pub fn range(&self) -> IntervalSet {
        IntervalSet::from_intervals(self.pieces.iter().map(AffinePiece::image))
    }

    pub fn apply(&self, x: &Q) -> Option<Q> {
        self.pieces.iter().find(|p| p.dom.contains(x)).map(|p| p.eval(x))
    }

    pub fn inverse(&self) -> Self {
        Self::canonical(
            self.pieces
                .iter()
                .map(|p| {
                    let slope = Q::one() / &p.slope;
                    let offset = -(&p.offset) / &p.slope;
                    AffinePiece {
                        dom: p.image(),
                        slope,
                        offset,
                    }
                })
                .collect(),
        )
    }

    /// `self ∘ g`, defined on `g⁻¹(range(g) ∩ dom(self))`.
    pub fn compose(&self, g: &PiecewiseAffine) -> Self {
        let mut out = Vec::new();
        for p in &g.pieces {
            let img = p.image();
            for q in &self.pieces {
                if let Some(j) = img.intersect(&q.dom) {
                    out.push(AffinePiece {
                        dom: p.pull_back(&j),
                        slope: &q.slope * &p.slope,
                        offset: &q.slope * &p.offset + &q.offset,
                    });
                }
            }
        }
        Self::canonical(out)
    }

    pub fn restrict(&self, to: &IntervalSet) -> Self {
        let mut out = Vec::new();
        for p in &self.pieces {
            for d in to.parts() {
                if let Some(dom) = p.dom.intersect(d) {
                    out.push(AffinePiece {
                        dom,
                        slope: p.slope.clone(),
                        offset: p.offset.clone(),
                    });
                }
            }
        }
        Self::canonical(out)
    }

    pub fn is_identity(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| p.slope.is_one() && p.offset.is_zero())
    }

    /// A point where `self` and `other` disagree (different domains, or
    /// different values), if any.
    pub fn disagreement(&self, other: &PiecewiseAffine) -> Option<Q> {
        let (da, db) = (self.domain(), other.domain());
        if let Some(x) = da.difference(&db).union(&db.difference(&da)).sample() {
            return Some(x);
        }
        for p in &self.pieces {
            for q in &other.pieces {
                let Some(i) = p.dom.intersect(&q.dom) else { continue };
                if p.same_map(q) {
                    continue;
                }
                // two distinct affine maps agree at no more than one point
                let candidates = if i.is_degenerate() {
                    vec![i.lo.clone()]
                } else {
                    let quarter = (&i.hi - &i.lo) / qi(4);
                    vec![i.sample(), &i.lo + quarter]
                };
                if let Some(x) = candidates.into_iter().find(|x| p.eval(x) != q.eval(x)) {
                    return Some(x);
                }
            }
        }
        None
    }

    /// Points where the map changes formula, plus all domain endpoints.
    pub fn breakpoints(&self) -> Vec<Q> {
        let mut v: Vec<Q> = self
            .pieces
            .iter()
            .flat_map(|p| [p.dom.lo.clone(), p.dom.hi.clone()])
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

impl std::fmt::Display for PiecewiseAffine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "∅");
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}: {}x+{}", p.dom, fmt_q(&p.slope), fmt_q(&p.offset))?;
        }
        Ok(())
    }
}
