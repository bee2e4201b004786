//! The non-Hausdorff example `S = {e, 1, σ}` over `[-1, 1]`, its reduced
//! algebra modelled as functions on the doubled space
//! `X′ = [-1,1]×{0} ∪ [0,1]×{1}`, and the expectation
//!
//! ```text
//! E(g)(x, y) = g(x, 0)                          x < 0
//! E(g)(x, y) = p(x) g(x, 0) + (1 − p(x)) g(x, 1)  x ≥ 0
//! ```
//!
//! Grid functions are sampled at `x_k = −1 + 2k/(n−1)` and read as
//! piecewise-linear between samples.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::fellbundle::{FellBundle, FiberElement};
use crate::fixtures;
use crate::germgpd::GermGroupoid;
use crate::invsgp::InverseSemigroup;
use crate::linalg::{C64, ONE, ZERO};
use crate::spaces::{parse_interval, parse_q, q, q_to_f64, Action, Interval, Point, Q};

const TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CartanError {
    #[error("grid size must be odd and at least 3, got {0}")]
    BadGrid(usize),
    #[error("grid function does not match the grid")]
    ShapeMismatch,
    #[error("cannot parse weight {0:?}")]
    Parse(String),
    #[error("weight is undefined at {0}")]
    NotCovered(String),
    #[error("weight leaves [0,1] at {0}")]
    OutOfRange(String),
    #[error("weight must be 1 at 0")]
    NotOneAtZero,
    #[error("fiber element is not over the example's bundle")]
    ForeignElement,
}

/// The example's semigroup, action, sampled bundle and exact germ groupoid.
#[derive(Debug, Clone)]
pub struct IntervalExample {
    pub semigroup: InverseSemigroup,
    pub action: Action,
    pub bundle: FellBundle,
    pub groupoid: GermGroupoid,
}

pub fn build_interval_example(n: usize) -> IntervalExample {
    let action = fixtures::interval_action();
    IntervalExample {
        semigroup: action.semigroup().clone(),
        groupoid: GermGroupoid::build(&action),
        bundle: fixtures::interval_s5(n),
        action,
    }
}

/// Whether `action` is the example's action up to relabelling elements.
pub fn is_interval_action(action: &Action) -> bool {
    let ex = fixtures::interval_action();
    let (a, b) = (action.semigroup(), ex.semigroup());
    a.len() == b.len()
        && a.elements().all(|s| a.elements().all(|t| a.mul(s, t) == b.mul(s, t)))
        && action.space() == ex.space()
        && action.thetas() == ex.thetas()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridModel {
    n: usize,
    xs: Vec<Q>,
    zero: usize,
}

/// Values on `[-1,1]×{0}` (all grid points) and `[0,1]×{1}` (grid points
/// from `0` on).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub lower: Vec<C64>,
    pub upper: Vec<C64>,
}

impl GridModel {
    pub fn new(n: usize) -> Result<Self, CartanError> {
        if n < 3 || n % 2 == 0 {
            return Err(CartanError::BadGrid(n));
        }
        let m = (n - 1) as i64;
        let xs = (0..=m).map(|k| q(2 * k - m, m)).collect();
        Ok(Self { n, xs, zero: n / 2 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn xs(&self) -> &[Q] {
        &self.xs
    }

    /// Index of `x = 0`.
    pub fn zero_index(&self) -> usize {
        self.zero
    }

    pub fn upper_len(&self) -> usize {
        self.n - self.zero
    }

    pub fn zeros(&self) -> GridFunction {
        GridFunction {
            lower: vec![ZERO; self.n],
            upper: vec![ZERO; self.upper_len()],
        }
    }

    pub fn from_fn(&self, f: impl Fn(&Q, usize) -> C64) -> GridFunction {
        GridFunction {
            lower: self.xs.iter().map(|x| f(x, 0)).collect(),
            upper: self.xs[self.zero..].iter().map(|x| f(x, 1)).collect(),
        }
    }

    fn check(&self, g: &GridFunction) -> Result<(), CartanError> {
        if g.lower.len() != self.n || g.upper.len() != self.upper_len() {
            return Err(CartanError::ShapeMismatch);
        }
        Ok(())
    }

    pub fn random(&self, rng: &mut impl Rng) -> GridFunction {
        let mut r = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        GridFunction {
            lower: (0..self.n).map(|_| r()).collect(),
            upper: (0..self.upper_len()).map(|_| r()).collect(),
        }
    }

    /// Hat functions at every sample of both levels.
    pub fn basis(&self) -> Vec<GridFunction> {
        let mut out = Vec::new();
        for i in 0..self.n {
            let mut g = self.zeros();
            g.lower[i] = ONE;
            out.push(g);
        }
        for i in 0..self.upper_len() {
            let mut g = self.zeros();
            g.upper[i] = ONE;
            out.push(g);
        }
        out
    }

    /// Functions that do not depend on the level.
    pub fn is_level_independent(&self, g: &GridFunction) -> bool {
        g.upper.iter().enumerate().all(|(i, v)| *v == g.lower[self.zero + i])
    }

    /// Samples `g` and the midpoints between consecutive samples, as
    /// `(label, value)`.
    fn refined(&self, g: &GridFunction) -> Vec<(String, C64)> {
        let mut out = Vec::new();
        let half = C64::new(0.5, 0.0);
        let level = |vals: &[C64], start: usize, y: u8, out: &mut Vec<(String, C64)>| {
            for (i, v) in vals.iter().enumerate() {
                out.push((format!("({},{y})", crate::spaces::fmt_q(&self.xs[start + i])), *v));
                if i + 1 < vals.len() {
                    let mid = (&self.xs[start + i] + &self.xs[start + i + 1]) / q(2, 1);
                    out.push((format!("({},{y})", crate::spaces::fmt_q(&mid)), (vals[i] + vals[i + 1]) * half));
                }
            }
        };
        level(&g.lower, 0, 0, &mut out);
        level(&g.upper, self.zero, 1, &mut out);
        out
    }
}

impl GridFunction {
    pub fn mul(&self, other: &GridFunction) -> GridFunction {
        GridFunction {
            lower: self.lower.iter().zip(&other.lower).map(|(a, b)| a * b).collect(),
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn conj(&self) -> GridFunction {
        GridFunction {
            lower: self.lower.iter().map(|a| a.conj()).collect(),
            upper: self.upper.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn add(&self, other: &GridFunction) -> GridFunction {
        GridFunction {
            lower: self.lower.iter().zip(&other.lower).map(|(a, b)| a + b).collect(),
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> GridFunction {
        GridFunction {
            lower: self.lower.iter().map(|a| a * c).collect(),
            upper: self.upper.iter().map(|a| a * c).collect(),
        }
    }

    pub fn sup(&self) -> f64 {
        self.lower.iter().chain(&self.upper).map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn max_diff(&self, other: &GridFunction) -> f64 {
        self.lower
            .iter()
            .zip(&other.lower)
            .chain(self.upper.iter().zip(&other.upper))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A weight `p: [0,1] → [0,1]` with `p(0) = 1`, piecewise affine with
/// rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    pieces: Vec<(Interval, Q, Q)>,
}

impl WeightFunction {
    /// Parses `"1-x/2"` or `"1 on [0,0]; 1/2 on (0,1]"`. A piece without a
    /// domain covers `[0,1]`.
    pub fn parse(s: &str) -> Result<Self, CartanError> {
        let err = || CartanError::Parse(s.to_string());
        let mut pieces = Vec::new();
        for part in s.split(';') {
            let (expr, dom) = match part.split_once(" on ") {
                Some((e, d)) => (e, parse_interval(d).ok_or_else(err)?),
                None => (part, parse_interval("[0,1]").expect("literal")),
            };
            let (slope, offset) = parse_affine(expr).ok_or_else(err)?;
            pieces.push((dom, slope, offset));
        }
        let w = Self { pieces };
        w.validate()?;
        Ok(w)
    }

    pub fn constant(c: Q) -> Result<Self, CartanError> {
        let w = Self {
            pieces: vec![(parse_interval("[0,1]").expect("literal"), Q::zero(), c)],
        };
        w.validate()?;
        Ok(w)
    }

    fn validate(&self) -> Result<(), CartanError> {
        let fmt = crate::spaces::fmt_q;
        if self.eval(&Q::zero()).ok_or(CartanError::NotCovered("0".into()))? != Q::one() {
            return Err(CartanError::NotOneAtZero);
        }
        for (dom, slope, offset) in &self.pieces {
            for x in [&dom.lo, &dom.hi] {
                let v = slope * x + offset;
                if v.is_negative() || v > Q::one() {
                    return Err(CartanError::OutOfRange(fmt(x)));
                }
            }
        }
        Ok(())
    }

    /// Exact value at `x`, from the first piece containing it.
    pub fn eval(&self, x: &Q) -> Option<Q> {
        self.pieces
            .iter()
            .find(|(d, _, _)| d.contains(x))
            .map(|(_, a, b)| a * x + b)
    }

    fn eval_f64(&self, x: &Q) -> Result<f64, CartanError> {
        self.eval(x)
            .map(|v| q_to_f64(&v))
            .ok_or_else(|| CartanError::NotCovered(crate::spaces::fmt_q(x)))
    }
}

fn parse_affine(s: &str) -> Option<(Q, Q)> {
    let s: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    if s.is_empty() {
        return None;
    }
    let (mut slope, mut offset) = (Q::zero(), Q::zero());
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    for t in terms {
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let v = match body.split_once('x') {
            Some((coef, rest)) => {
                let c = if coef.is_empty() { Q::one() } else { parse_q(coef)? };
                let d = match rest {
                    "" => Q::one(),
                    r => parse_q(r.strip_prefix('/')?)?,
                };
                if d.is_zero() {
                    return None;
                }
                slope += if neg { -(c / d) } else { c / d };
                continue;
            }
            None => parse_q(body)?,
        };
        offset += if neg { -v } else { v };
    }
    Some((slope, offset))
}

/// `π_s(a)` as a grid function, for `a` in a fiber of the example bundle
/// sampled on the same grid.
pub fn embed_fibers(gm: &GridModel, ex: &IntervalExample, a: &FiberElement) -> Result<GridFunction, CartanError> {
    let b = &ex.bundle;
    if b.npoints() != gm.n || b.coords().iter().zip(&gm.xs).any(|(p, x)| p != &Point::Real(x.clone())) {
        return Err(CartanError::ShapeMismatch);
    }
    let label = ex.semigroup.label(a.s);
    let sign = match label {
        "σ" => -ONE,
        "1" => ONE,
        "e" => ZERO,
        _ => return Err(CartanError::ForeignElement),
    };
    let mut g = gm.zeros();
    for i in 0..gm.n {
        g.lower[i] = b.value(a, i);
    }
    for i in 0..gm.upper_len() {
        g.upper[i] = sign * b.value(a, gm.zero + i);
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub passed: bool,
    pub checks: usize,
    pub failure: Option<String>,
}

/// The embeddings are linear, isometric, multiplicative, `*`-preserving and
/// compatible with the inclusions.
pub fn verify_embeddings(gm: &GridModel, ex: &IntervalExample, samples: usize, seed: u64) -> EmbeddingReport {
    let b = &ex.bundle;
    let sg = &ex.semigroup;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0;
    let emb = |a: &FiberElement| embed_fibers(gm, ex, a).expect("example bundle on the model grid");
    let fail = |what: String, checks| EmbeddingReport {
        passed: false,
        checks,
        failure: Some(what),
    };
    for _ in 0..samples {
        for s in sg.elements() {
            let a = b.random_element(s, &mut rng);
            let a2 = b.random_element(s, &mut rng);
            let ea = emb(&a);
            checks += 3;
            if (ea.sup() - b.norm(&a)).abs() > TOL {
                return fail(format!("π_{} is not isometric", sg.label(s)), checks);
            }
            let c = C64::new(0.3, 0.4);
            let lin = emb(&b.add(&a, &b.scale(&a2, c)).expect("same fiber"));
            if lin.max_diff(&ea.add(&emb(&a2).scale(c))) > TOL {
                return fail(format!("π_{} is not linear", sg.label(s)), checks);
            }
            if emb(&b.star(&a)).max_diff(&ea.conj()) > TOL {
                return fail(format!("π_{} does not preserve adjoints", sg.label(s)), checks);
            }
            for t in sg.elements() {
                let c = b.random_element(t, &mut rng);
                checks += 1;
                if emb(&b.mul(&a, &c)).max_diff(&ea.mul(&emb(&c))) > TOL {
                    return fail(format!("π is not multiplicative on ({}, {})", sg.label(s), sg.label(t)), checks);
                }
                if t != s && sg.leq(s, t) {
                    checks += 1;
                    let up = b.incl(t, &a).expect("s ≤ t");
                    if emb(&up).max_diff(&ea) > TOL {
                        return fail(format!("inclusion {} ≤ {} is not compatible", sg.label(s), sg.label(t)), checks);
                    }
                }
            }
        }
    }
    EmbeddingReport {
        passed: true,
        checks,
        failure: None,
    }
}

/// `E(g)`; a level-independent input is returned unchanged.
pub fn expectation_e(gm: &GridModel, g: &GridFunction, p: &WeightFunction) -> Result<GridFunction, CartanError> {
    gm.check(g)?;
    let mut out = g.clone();
    for i in 0..gm.upper_len() {
        let k = gm.zero + i;
        let (g0, g1) = (g.lower[k], g.upper[i]);
        let v = if g0 == g1 {
            g0
        } else {
            let w = gm.weight_at(p, k)?;
            g0 * w + g1 * (1.0 - w)
        };
        out.lower[k] = v;
        out.upper[i] = v;
    }
    Ok(out)
}

impl GridModel {
    fn weight_at(&self, p: &WeightFunction, k: usize) -> Result<f64, CartanError> {
        p.eval_f64(&self.xs[k])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationSuite {
    pub n: usize,
    pub weight: String,
    /// `0 < p(x) < 1` at every grid point `x > 0`.
    pub interior_condition: bool,
    pub idempotent: bool,
    pub contractive: bool,
    pub positive: bool,
    pub bimodular: bool,
    pub faithful: bool,
    pub image_level_independent: bool,
    pub identity_on_units: bool,
    pub random_samples: usize,
    pub witness: Option<String>,
    pub passed: bool,
}

/// Runs the expectation suite on the grid basis plus `samples` random grid
/// functions. Positivity and faithfulness are read at samples and
/// midpoints.
pub fn verify_conditional_expectation(
    gm: &GridModel,
    p: &WeightFunction,
    weight: &str,
    samples: usize,
    seed: u64,
) -> Result<ExpectationSuite, CartanError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = ExpectationSuite {
        n: gm.n,
        weight: weight.to_string(),
        interior_condition: true,
        idempotent: true,
        contractive: true,
        positive: true,
        bimodular: true,
        faithful: true,
        image_level_independent: true,
        identity_on_units: true,
        random_samples: samples,
        witness: None,
        passed: false,
    };
    for k in gm.zero + 1..gm.n {
        let w = p.eval(&gm.xs[k]).ok_or_else(|| CartanError::NotCovered(crate::spaces::fmt_q(&gm.xs[k])))?;
        if w.is_zero() || w >= Q::one() {
            r.interior_condition = false;
        }
    }
    let mut tests = gm.basis();
    tests.extend((0..samples).map(|_| gm.random(&mut rng)));
    for g in &tests {
        let e = expectation_e(gm, g, p)?;
        if expectation_e(gm, &e, p)? != e {
            r.idempotent = false;
        }
        if e.sup() > g.sup() * (1.0 + TOL) {
            r.contractive = false;
        }
        if !gm.is_level_independent(&e) {
            r.image_level_independent = false;
        }
        let gg = g.conj().mul(g);
        let egg = refined_expectation(gm, &gg, p)?;
        let mut all_zero = true;
        for (at, v) in &egg {
            if v.im.abs() > TOL || v.re < -TOL {
                r.positive = false;
                r.witness.get_or_insert_with(|| format!("E(g*g) negative at {at}"));
            }
            all_zero &= v.norm() <= TOL;
        }
        if all_zero && g.sup() > 0.0 {
            r.faithful = false;
            let level = if g.lower.iter().all(|v| *v == ZERO) { "upper" } else { "lower" };
            let at = gm
                .refined(g)
                .into_iter()
                .find(|(_, v)| *v != ZERO)
                .map(|(at, _)| at)
                .unwrap_or_default();
            r.witness
                .get_or_insert_with(|| format!("E(g*g) = 0 for g ≠ 0 on the {level} level at {at}"));
        }
        let f = gm.from_fn(|x, _| C64::new(q_to_f64(x), 1.0));
        let h = gm.from_fn(|x, _| C64::new(1.0 - q_to_f64(x) / 3.0, -0.5));
        let lhs = expectation_e(gm, &f.mul(g).mul(&h), p)?;
        let rhs = f.mul(&e).mul(&h);
        if lhs.max_diff(&rhs) > TOL {
            r.bimodular = false;
        }
    }
    let f = gm.random(&mut rng);
    let unit = gm.from_fn(|x, _| f.lower[gm.xs.iter().position(|y| y == x).expect("grid point")]);
    if expectation_e(gm, &unit, p)? != unit {
        r.identity_on_units = false;
    }
    r.passed = r.idempotent
        && r.contractive
        && r.positive
        && r.bimodular
        && r.faithful
        && r.image_level_independent
        && r.identity_on_units;
    Ok(r)
}

/// `E(g)` at samples and midpoints of the piecewise-linear reading of `g`.
fn refined_expectation(gm: &GridModel, g: &GridFunction, p: &WeightFunction) -> Result<Vec<(String, C64)>, CartanError> {
    let mut out = Vec::new();
    let half = C64::new(0.5, 0.0);
    let fmt = crate::spaces::fmt_q;
    for k in 0..gm.n {
        let mut pts = vec![(gm.xs[k].clone(), g.lower[k], (k >= gm.zero).then(|| g.upper[k - gm.zero]))];
        if k + 1 < gm.n {
            let mid = (&gm.xs[k] + &gm.xs[k + 1]) / q(2, 1);
            let upper = (k >= gm.zero).then(|| (g.upper[k - gm.zero] + g.upper[k + 1 - gm.zero]) * half);
            pts.push((mid, (g.lower[k] + g.lower[k + 1]) * half, upper));
        }
        for (x, g0, g1) in pts {
            let v = match g1 {
                None => g0,
                Some(g1) => {
                    let w = p.eval_f64(&x)?;
                    g0 * w + g1 * (1.0 - w)
                }
            };
            out.push((format!("x = {}", fmt(&x)), v));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Point;

    fn grid() -> GridModel {
        GridModel::new(101).unwrap()
    }

    #[test]
    fn grid_contains_zero() {
        let gm = grid();
        assert_eq!(gm.xs()[gm.zero_index()], Q::zero());
        assert_eq!(gm.upper_len(), 51);
        assert_eq!(GridModel::new(100).unwrap_err(), CartanError::BadGrid(100));
    }

    #[test]
    fn weights_parse_exactly() {
        let p = WeightFunction::parse("1-x/2").unwrap();
        assert_eq!(p.eval(&q(1, 2)), Some(q(3, 4)));
        let p = WeightFunction::parse("1 on [0,0]; 1/2 on (0,1]").unwrap();
        assert_eq!(p.eval(&Q::zero()), Some(Q::one()));
        assert_eq!(p.eval(&q(1, 3)), Some(q(1, 2)));
        assert_eq!(WeightFunction::parse("1-x").unwrap().eval(&Q::one()), Some(Q::zero()));
        assert_eq!(WeightFunction::parse("2x+1").unwrap_err(), CartanError::OutOfRange("1".into()));
        assert_eq!(WeightFunction::parse("1/2").unwrap_err(), CartanError::NotOneAtZero);
        assert!(matches!(WeightFunction::parse("1-y"), Err(CartanError::Parse(_))));
    }

    #[test]
    fn expectation_averages_levels() {
        let gm = grid();
        let p = WeightFunction::parse("1-x").unwrap();
        let half = gm.xs().iter().position(|x| *x == q(1, 2)).unwrap();
        let mut g = gm.zeros();
        g.lower[half] = C64::new(2.0, 0.0);
        g.upper[half - gm.zero_index()] = C64::new(4.0, 0.0);
        let e = expectation_e(&gm, &g, &p).unwrap();
        assert_eq!(e.lower[half], C64::new(3.0, 0.0));
        assert_eq!(e.upper[half - gm.zero_index()], C64::new(3.0, 0.0));
        let flat = gm.from_fn(|x, _| C64::new(q_to_f64(x), 0.0));
        assert_eq!(expectation_e(&gm, &flat, &p).unwrap(), flat);
        assert_eq!(expectation_e(&gm, &e, &p).unwrap(), e);
        let short = GridFunction {
            lower: vec![],
            upper: vec![],
        };
        assert_eq!(expectation_e(&gm, &short, &p).unwrap_err(), CartanError::ShapeMismatch);
    }

    #[test]
    fn suite_passes_for_a_dense_weight() {
        let gm = grid();
        let p = WeightFunction::parse("1-x/2").unwrap();
        let r = verify_conditional_expectation(&gm, &p, "1-x/2", 100, 0).unwrap();
        assert!(r.passed && r.interior_condition, "{r:?}");
        let p = WeightFunction::parse("1 on [0,0]; 1/2 on (0,1]").unwrap();
        assert!(verify_conditional_expectation(&gm, &p, "", 20, 0).unwrap().passed);
    }

    #[test]
    fn constant_weight_is_not_faithful() {
        let gm = grid();
        let p = WeightFunction::constant(Q::one()).unwrap();
        let r = verify_conditional_expectation(&gm, &p, "1", 10, 0).unwrap();
        assert!(!r.faithful && !r.passed && !r.interior_condition);
        assert!(r.idempotent && r.positive && r.bimodular);
        assert!(r.witness.unwrap().contains("upper level"));
    }

    #[test]
    fn interval_action_is_recognized_up_to_labels() {
        assert!(is_interval_action(&fixtures::interval_action()));
        assert!(!is_interval_action(fixtures::z2_flip().action()));
        let ex = fixtures::interval_action();
        let relabelled = InverseSemigroup::from_table(
            vec!["e".into(), "1".into(), "sigma".into()],
            vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]],
            None,
        )
        .unwrap();
        let again = Action::new(relabelled, ex.space().clone(), ex.thetas().to_vec()).unwrap();
        assert!(is_interval_action(&again));
    }

    #[test]
    fn embeddings_follow_the_level_signs() {
        let gm = GridModel::new(21).unwrap();
        let ex = build_interval_example(21);
        let b = &ex.bundle;
        let ones = |s| FiberElement {
            s,
            values: (0..b.npoints()).map(|x| if b.in_support(s, x) { ONE } else { ZERO }).collect(),
        };
        let one = embed_fibers(&gm, &ex, &ones(1)).unwrap();
        assert!(one.lower.iter().chain(&one.upper).all(|v| *v == ONE));
        let sigma = embed_fibers(&gm, &ex, &ones(2)).unwrap();
        assert!(sigma.lower.iter().all(|v| *v == ONE) && sigma.upper.iter().all(|v| *v == -ONE));
        let e = embed_fibers(&gm, &ex, &ones(0)).unwrap();
        assert!(e.upper.iter().all(|v| *v == ZERO));
        assert!(e.lower[..gm.zero_index()].iter().all(|v| *v == ONE));
        assert!(verify_embeddings(&gm, &ex, 5, 1).passed);
        // E restricted to π_1(A_1) is the identity
        let p = WeightFunction::parse("1-x/2").unwrap();
        let a = b.random_element(1, &mut ChaCha8Rng::seed_from_u64(3));
        let g = embed_fibers(&gm, &ex, &a).unwrap();
        assert_eq!(expectation_e(&gm, &g, &p).unwrap(), g);
    }

    #[test]
    fn example_groupoid_is_not_hausdorff_at_any_resolution() {
        for n in [5, 21, 101] {
            let ex = build_interval_example(n);
            let h = ex.groupoid.hausdorff();
            assert!(!h.hausdorff);
            let w = h.witness.unwrap();
            assert_eq!((w.0 .0.as_str(), w.0 .1.as_str()), ("1", "0"));
            assert_eq!(ex.bundle.coords()[n / 2], Point::Real(Q::zero()));
        }
    }
}
