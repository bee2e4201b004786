//! Exact rational intervals with per-endpoint inclusion flags, and finite
//! unions of them kept in a canonical (sorted, maximally merged) form.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// A nonempty interval with rational endpoints. Degenerate intervals are the
/// closed singletons `[a,a]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Q,
    pub lo_closed: bool,
    pub hi: Q,
    pub hi_closed: bool,
}

impl Interval {
    /// Returns `None` when the bounds describe the empty set.
    pub fn new(lo: Q, lo_closed: bool, hi: Q, hi_closed: bool) -> Option<Self> {
        match lo.cmp(&hi) {
            Ordering::Less => Some(Self {
                lo,
                lo_closed,
                hi,
                hi_closed,
            }),
            Ordering::Equal if lo_closed && hi_closed => Some(Self {
                lo,
                lo_closed,
                hi,
                hi_closed,
            }),
            _ => None,
        }
    }

    pub fn closed(lo: Q, hi: Q) -> Option<Self> {
        Self::new(lo, true, hi, true)
    }

    pub fn open(lo: Q, hi: Q) -> Option<Self> {
        Self::new(lo, false, hi, false)
    }

    pub fn point(x: Q) -> Self {
        Self {
            lo: x.clone(),
            lo_closed: true,
            hi: x,
            hi_closed: true,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Q) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, lo_closed, hi, hi_closed)
    }

    /// A representative interior point (the midpoint, or the point itself).
    pub fn sample(&self) -> Q {
        if self.is_degenerate() {
            self.lo.clone()
        } else {
            (&self.lo + &self.hi) / qi(2)
        }
    }

    pub fn closure(&self) -> Interval {
        Interval {
            lo: self.lo.clone(),
            lo_closed: true,
            hi: self.hi.clone(),
            hi_closed: true,
        }
    }

    /// Image under `x -> slope * x + offset` (slope nonzero).
    pub fn affine_image(&self, slope: &Q, offset: &Q) -> Interval {
        let a = slope * &self.lo + offset;
        let b = slope * &self.hi + offset;
        if slope.is_positive() {
            Interval {
                lo: a,
                lo_closed: self.lo_closed,
                hi: b,
                hi_closed: self.hi_closed,
            }
        } else {
            Interval {
                lo: b,
                lo_closed: self.hi_closed,
                hi: a,
                hi_closed: self.lo_closed,
            }
        }
    }

    /// Whether `self` (ending first) and `next` overlap or touch with at least
    /// one of the touching endpoints included.
    fn joins(&self, next: &Interval) -> bool {
        match self.hi.cmp(&next.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.hi_closed || next.lo_closed,
            Ordering::Less => false,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            fmt_q(&self.lo),
            fmt_q(&self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Parses `"[a,b)"`-style interval notation.
pub fn parse_interval(s: &str) -> Option<Interval> {
    let s = s.trim();
    let lo_closed = match s.chars().next()? {
        '[' => true,
        '(' => false,
        _ => return None,
    };
    let hi_closed = match s.chars().last()? {
        ']' => true,
        ')' => false,
        _ => return None,
    };
    let inner = &s[1..s.len() - 1];
    let (a, b) = inner.split_once(',')?;
    Interval::new(parse_q(a)?, lo_closed, parse_q(b)?, hi_closed)
}

/// A finite union of intervals in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_intervals(parts: impl IntoIterator<Item = Interval>) -> Self {
        let mut parts: Vec<Interval> = parts.into_iter().collect();
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            match out.last_mut() {
                Some(last) if last.joins(&p) => match last.hi.cmp(&p.hi) {
                    Ordering::Less => {
                        last.hi = p.hi;
                        last.hi_closed = p.hi_closed;
                    }
                    Ordering::Equal => last.hi_closed |= p.hi_closed,
                    Ordering::Greater => {}
                },
                _ => out.push(p),
            }
        }
        Self { parts: out }
    }

    pub fn single(i: Interval) -> Self {
        Self { parts: vec![i] }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Q) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.parts.iter().chain(&other.parts).cloned())
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        Self::from_intervals(out)
    }

    /// `self \ other`.
    pub fn difference(&self, other: &Self) -> Self {
        let mut current: Vec<Interval> = self.parts.clone();
        for b in &other.parts {
            let mut next = Vec::with_capacity(current.len() + 1);
            for a in current {
                if a.intersect(b).is_none() {
                    next.push(a);
                    continue;
                }
                // left remainder: [a.lo, b.lo) with b.lo's inclusion flipped
                if let Some(l) = Interval::new(a.lo.clone(), a.lo_closed, b.lo.clone(), !b.lo_closed) {
                    if let Some(l) = l.intersect(&a) {
                        next.push(l);
                    }
                }
                if let Some(r) = Interval::new(b.hi.clone(), !b.hi_closed, a.hi.clone(), a.hi_closed) {
                    if let Some(r) = r.intersect(&a) {
                        next.push(r);
                    }
                }
            }
            current = next;
        }
        Self::from_intervals(current)
    }

    pub fn closure(&self) -> Self {
        Self::from_intervals(self.parts.iter().map(Interval::closure))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// All finite endpoints, sorted and deduplicated.
    pub fn endpoints(&self) -> Vec<Q> {
        let mut v: Vec<Q> = self
            .parts
            .iter()
            .flat_map(|p| [p.lo.clone(), p.hi.clone()])
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Some point of the set, if nonempty.
    pub fn sample(&self) -> Option<Q> {
        self.parts.first().map(Interval::sample)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, "∪")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Whether `x` is an integer multiple of `1/d`.
pub fn on_lattice(x: &Q, d: i64) -> bool {
    (x * qi(d)).is_integer()
}

pub fn one() -> Q {
    Q::one()
}
