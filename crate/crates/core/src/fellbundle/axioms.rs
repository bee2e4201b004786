//! Exhaustive axiom scans on basis elements plus seeded random elements.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{FellBundle, FiberElement, TOL};
use crate::invsgp::Elem;
use crate::linalg::{hermitian_eigen, rank, vec_max_diff, CMat, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Closure,
    CStarIdentity,
    Positivity,
    Submultiplicativity,
    Involution,
    Associativity,
    InclusionIsometry,
    InclusionTransitivity,
    InclusionProduct,
    InclusionStar,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    /// Semigroup elements of the offending fiber elements, in argument order.
    pub elements: Vec<Elem>,
    /// Coordinate point where the discrepancy was observed, when local.
    pub point: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub passed: bool,
    pub checks: usize,
    pub violation: Option<AxiomViolation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaturationReport {
    pub saturated: bool,
    /// `(s, t, x)`: products `A_s·A_t` miss the fiber `A_st` at `x`.
    pub witness: Option<(Elem, Elem, usize)>,
}

struct Scan<'a> {
    b: &'a FellBundle,
    checks: usize,
}

type Found = Result<(), AxiomViolation>;

fn violation(axiom: Axiom, elements: Vec<Elem>, point: Option<usize>, detail: String) -> AxiomViolation {
    AxiomViolation {
        axiom,
        elements,
        point,
        detail,
    }
}

impl Scan<'_> {
    fn close(&self, x: f64, y: f64) -> bool {
        (x - y).abs() <= TOL * (1.0 + x.abs().max(y.abs()))
    }

    fn diff_point(&self, a: &FiberElement, b: &FiberElement) -> Option<usize> {
        let scale = 1.0 + self.b.norm(a).max(self.b.norm(b));
        (0..self.b.npoints()).find(|&x| vec_max_diff(self.b.at(a, x), self.b.at(b, x)) > TOL * scale)
    }

    fn same(&mut self, axiom: Axiom, elements: Vec<Elem>, a: &FiberElement, b: &FiberElement) -> Found {
        self.checks += 1;
        if a.s != b.s {
            return Err(violation(axiom, elements, None, format!("fibers differ: {} vs {}", a.s, b.s)));
        }
        match self.diff_point(a, b) {
            Some(x) => Err(violation(axiom, elements, Some(x), "values differ".into())),
            None => Ok(()),
        }
    }

    fn in_fiber(&mut self, a: &FiberElement, elements: Vec<Elem>) -> Found {
        self.checks += 1;
        let b = self.b;
        let off = (0..b.npoints()).find(|&x| !b.in_support(a.s, x) && b.at(a, x).iter().any(|v| v.norm() > b.zero_tol));
        match off {
            Some(x) => Err(violation(
                Axiom::Closure,
                elements,
                Some(x),
                format!("result leaves the fiber over {}", b.semigroup().label(a.s)),
            )),
            None => Ok(()),
        }
    }

    fn cstar(&mut self, a: &FiberElement) -> Found {
        let b = self.b;
        let aa = b.mul(&b.star(a), a);
        let (n, nn) = (b.norm(a), b.norm(&aa));
        self.checks += 1;
        if !self.close(nn, n * n) {
            return Err(violation(
                Axiom::CStarIdentity,
                vec![a.s],
                None,
                format!("‖a*a‖ = {nn:e}, ‖a‖² = {:e}", n * n),
            ));
        }
        for x in 0..b.npoints() {
            self.checks += 1;
            if !self.block_psd(b.at(&aa, x)) {
                return Err(violation(Axiom::Positivity, vec![a.s], Some(x), "a*a not positive".into()));
            }
        }
        Ok(())
    }

    fn block_psd(&self, blk: &[C64]) -> bool {
        let bs = self.b.block;
        let m = CMat::from_row_slice(bs, bs, blk);
        let herm = (0..bs).all(|i| (0..bs).all(|j| (m[(i, j)] - m[(j, i)].conj()).norm() <= TOL));
        if !herm {
            return false;
        }
        if bs == 1 {
            return blk[0].re >= -TOL;
        }
        hermitian_eigen(&m).0.iter().all(|&v| v >= -TOL)
    }

    fn submult(&mut self, a: &FiberElement, c: &FiberElement) -> Found {
        let b = self.b;
        let p = b.mul(a, c);
        self.in_fiber(&p, vec![a.s, c.s])?;
        let (np, na, nc) = (b.norm(&p), b.norm(a), b.norm(c));
        self.checks += 1;
        if np > na * nc * (1.0 + TOL) + TOL {
            return Err(violation(
                Axiom::Submultiplicativity,
                vec![a.s, c.s],
                None,
                format!("‖ab‖ = {np:e} > ‖a‖‖b‖ = {:e}", na * nc),
            ));
        }
        Ok(())
    }

    fn involution(&mut self, a: &FiberElement, c: &FiberElement) -> Found {
        let b = self.b;
        let astar = b.star(a);
        self.in_fiber(&astar, vec![a.s])?;
        self.same(Axiom::Involution, vec![a.s], &b.star(&astar), a)?;
        self.checks += 1;
        if !self.close(b.norm(&astar), b.norm(a)) {
            return Err(violation(Axiom::Involution, vec![a.s], None, "‖a*‖ != ‖a‖".into()));
        }
        let lhs = b.star(&b.mul(a, c));
        let rhs = b.mul(&b.star(c), &astar);
        self.same(Axiom::Involution, vec![a.s, c.s], &lhs, &rhs)
    }

    fn assoc(&mut self, a: &FiberElement, c: &FiberElement, d: &FiberElement) -> Found {
        let b = self.b;
        let lhs = b.mul(&b.mul(a, c), d);
        let rhs = b.mul(a, &b.mul(c, d));
        self.same(Axiom::Associativity, vec![a.s, c.s, d.s], &lhs, &rhs)
    }
}

impl FellBundle {
    /// Checks the Fell bundle axioms on all aligned basis tuples and on
    /// `samples` seeded random elements per fiber.
    pub fn validate_axioms(&self) -> AxiomReport {
        self.validate_axioms_with(0, 4)
    }

    pub fn validate_axioms_with(&self, seed: u64, samples: usize) -> AxiomReport {
        let mut scan = Scan { b: self, checks: 0 };
        let result = self.scan_all(&mut scan, seed, samples);
        AxiomReport {
            passed: result.is_ok(),
            checks: scan.checks,
            violation: result.err(),
        }
    }

    fn scan_all(&self, scan: &mut Scan, seed: u64, samples: usize) -> Found {
        let sg = self.semigroup();
        let n = sg.len();
        let bb = self.block * self.block;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let randoms: Vec<Vec<FiberElement>> = (0..n)
            .map(|s| (0..samples).map(|_| self.random_element(s, &mut rng)).collect())
            .collect();
        let samples_of = |s: Elem| -> Vec<FiberElement> {
            let mut v = self.basis(s);
            v.extend(randoms[s].iter().cloned());
            v
        };

        // C*-identity and positivity
        for s in 0..n {
            for a in samples_of(s) {
                scan.cstar(&a)?;
            }
        }
        // closure and submultiplicativity on aligned basis pairs and random pairs
        for s in 0..n {
            for t in 0..n {
                let st = sg.mul(s, t);
                for x in self.points_of(st).collect::<Vec<_>>() {
                    let tx = self.theta[t][x].expect("dom(st) ⊆ dom(t)");
                    if !self.in_support(s, tx) || !self.in_support(t, x) {
                        continue;
                    }
                    for i in 0..bb {
                        for k in 0..bb {
                            scan.submult(&self.delta(s, tx, i), &self.delta(t, x, k))?;
                        }
                    }
                }
                for (a, c) in randoms[s].iter().zip(&randoms[t]) {
                    scan.submult(a, c)?;
                }
            }
        }
        // involution
        for s in 0..n {
            for t in 0..n {
                for (a, c) in randoms[s].iter().zip(&randoms[t]) {
                    scan.involution(a, c)?;
                }
            }
            for a in self.basis(s) {
                let c = randoms[s].first().cloned().unwrap_or_else(|| self.zero(s));
                scan.involution(&a, &self.star(&c))?;
            }
        }
        // associativity on aligned basis triples
        for r in 0..n {
            for s in 0..n {
                let rs = sg.mul(r, s);
                for t in 0..n {
                    let st = sg.mul(s, t);
                    let rst = sg.mul(rs, t);
                    for x in self.points_of(rst).collect::<Vec<_>>() {
                        let tx = self.theta[t][x].expect("dom(rst) ⊆ dom(t)");
                        let stx = self.theta[st][x].expect("dom(rst) ⊆ dom(st)");
                        if !(self.in_support(r, stx) && self.in_support(s, tx) && self.in_support(t, x)) {
                            continue;
                        }
                        for i in 0..bb {
                            for j in 0..bb {
                                for k in 0..bb {
                                    scan.assoc(&self.delta(r, stx, i), &self.delta(s, tx, j), &self.delta(t, x, k))?;
                                }
                            }
                        }
                    }
                    if let (Some(a), Some(c), Some(d)) = (randoms[r].first(), randoms[s].first(), randoms[t].first()) {
                        scan.assoc(a, c, d)?;
                    }
                }
            }
        }
        // inclusions
        let below: Vec<(Elem, Elem)> = (0..n)
            .flat_map(|s| (0..n).map(move |t| (s, t)))
            .filter(|&(s, t)| sg.leq(s, t))
            .collect();
        for &(s, t) in &below {
            for a in samples_of(s) {
                let ja = self.incl(t, &a).expect("s ≤ t");
                scan.in_fiber(&ja, vec![s, t])?;
                scan.checks += 1;
                if !scan.close(self.norm(&ja), self.norm(&a)) {
                    return Err(violation(
                        Axiom::InclusionIsometry,
                        vec![t, s],
                        None,
                        format!("‖j(a)‖ = {:e}, ‖a‖ = {:e}", self.norm(&ja), self.norm(&a)),
                    ));
                }
                let lhs = self.star(&ja);
                let rhs = self.incl(sg.star(t), &self.star(&a)).expect("s ≤ t implies s* ≤ t*");
                scan.same(Axiom::InclusionStar, vec![t, s], &lhs, &rhs)?;
            }
        }
        for &(r, s) in &below {
            for &(s2, t) in &below {
                if s2 != s {
                    continue;
                }
                for a in randoms[r].iter().take(1) {
                    let lhs = self.incl(t, a).expect("r ≤ t");
                    let rhs = self.incl(t, &self.incl(s, a).expect("r ≤ s")).expect("s ≤ t");
                    scan.same(Axiom::InclusionTransitivity, vec![t, s, r], &lhs, &rhs)?;
                }
            }
        }
        for &(s, t) in &below {
            for &(u, v) in &below {
                if let (Some(a), Some(c)) = (randoms[s].first(), randoms[u].first()) {
                    let lhs = self.mul(&self.incl(t, a).expect("s ≤ t"), &self.incl(v, c).expect("u ≤ v"));
                    let tv = sg.mul(t, v);
                    let rhs = self.incl(tv, &self.mul(a, c)).expect("su ≤ tv");
                    scan.same(Axiom::InclusionProduct, vec![t, s, v, u], &lhs, &rhs)?;
                }
            }
        }
        Ok(())
    }

    /// `ab = ba` for all basis `a ∈ A_e`, `b ∈ A_f` over idempotents; returns
    /// a witness `(e, f, x)` otherwise.
    pub fn semi_abelian_witness(&self) -> Option<(Elem, Elem, usize)> {
        let sg = self.semigroup();
        let idem = sg.idempotents();
        for &e in idem {
            for &f in idem {
                for a in self.basis(e) {
                    for c in self.basis(f) {
                        let (p, q) = (self.mul(&a, &c), self.mul(&c, &a));
                        if let Some(x) = (0..self.npoints()).find(|&x| vec_max_diff(self.at(&p, x), self.at(&q, x)) > TOL) {
                            return Some((e, f, x));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_semi_abelian(&self) -> bool {
        self.semi_abelian_witness().is_none()
    }

    /// Rank check of `span{ab}` against `A_st`, pointwise.
    pub fn saturation(&self) -> SaturationReport {
        let sg = self.semigroup();
        let n = sg.len();
        let bb = self.block * self.block;
        for s in 0..n {
            for t in 0..n {
                let st = sg.mul(s, t);
                for x in self.support(st).collect::<Vec<_>>() {
                    let mut cols: Vec<Vec<C64>> = Vec::new();
                    if let Some(tx) = self.theta[t][x] {
                        if self.in_support(s, tx) && self.in_support(t, x) {
                            for i in 0..bb {
                                for k in 0..bb {
                                    let p = self.mul(&self.delta(s, tx, i), &self.delta(t, x, k));
                                    cols.push(self.at(&p, x).to_vec());
                                }
                            }
                        }
                    }
                    let m = crate::linalg::from_columns(&cols, bb);
                    if cols.is_empty() || rank(&m, 1e-10) < bb {
                        return SaturationReport {
                            saturated: false,
                            witness: Some((s, t, x)),
                        };
                    }
                }
            }
        }
        SaturationReport {
            saturated: true,
            witness: None,
        }
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation().saturated
    }
}
