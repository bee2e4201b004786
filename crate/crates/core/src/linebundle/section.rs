//! Compactly supported sections of `L` and the Gelfand map `a ↦ â`,
//! `â([s,x]) = [a,s,x]`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::LineBundle;
use crate::fellbundle::{FellBundle, FiberElement};
use crate::germgpd::GermRef;
use crate::invsgp::Elem;
use crate::linalg::{rank, CMat, C64, ZERO};

/// A section of `L`: one coefficient per germ against its reference.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub coeffs: Vec<C64>,
}

impl Section {
    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![ZERO; n] }
    }

    pub fn point(n: usize, germ: usize, lambda: C64) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[germ] = lambda;
        s
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.coeffs.len()).filter(|&g| self.coeffs[g] != ZERO)
    }

    pub fn add(&self, other: &Section) -> Section {
        Section {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Section {
        Section {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }
}

impl LineBundle {
    /// `(ξ*η)(γ) = Σ_{γ₁γ₂=γ} ξ(γ₁)η(γ₂)`.
    pub fn convolve(&self, xi: &Section, eta: &Section) -> Section {
        let mut out = Section::zero(self.len());
        for &(p, q, pq) in self.composable() {
            let (a, b) = (xi.coeffs[p], eta.coeffs[q]);
            if a != ZERO && b != ZERO {
                out.coeffs[pq] += a * b * self.mulc(p, q).expect("composable");
            }
        }
        out
    }

    /// `ξ*(γ) = ξ(γ⁻¹)*`.
    pub fn involution(&self, xi: &Section) -> Section {
        let g = self.groupoid();
        Section {
            coeffs: (0..self.len())
                .map(|p| {
                    let ip = g.inverse(p);
                    xi.coeffs[ip].conj() * self.starc(ip)
                })
                .collect(),
        }
    }

    /// `sup_γ ‖ξ(γ)‖`.
    pub fn sup_norm(&self, xi: &Section) -> f64 {
        (0..self.len())
            .map(|p| xi.coeffs[p].norm() * self.ref_norm(p))
            .fold(0.0, f64::max)
    }

    /// `â`, supported on the germs `[s, x]` with `x ∈ dom(a)`.
    pub fn gelfand(&self, b: &FellBundle, a: &FiberElement) -> Section {
        let g = self.groupoid();
        let mut out = Section::zero(self.len());
        for x in b.points_of(a.s) {
            if let Some(p) = g.germ_of(a.s, x) {
                out.coeffs[p] = self.coeff(b, p, a).expect("germ of a's own element");
            }
        }
        out
    }

    /// Germs of the basic open `O_s`.
    pub fn basic_open(&self, b: &FellBundle, s: Elem) -> Vec<usize> {
        let g = self.groupoid();
        let mut out: Vec<usize> = b.points_of(s).filter_map(|x| g.germ_of(s, x)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Checks that `a ↦ â` is a linear isometric bijection `A_s → C₀(L|O_s)`
    /// on every fiber, multiplicative, `*`-preserving and compatible with
    /// the inclusions.
    pub fn verify_gelfand_iso(&self, b: &FellBundle, samples: usize, seed: u64) -> GelfandReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = self.groupoid();
        let sg = b.semigroup();
        let tol = 1e-10;
        let mut checks = 0;
        let report = |check, elements: Vec<String>, germs: Vec<GermRef>, detail: String| GelfandReport {
            passed: false,
            checks: 0,
            failure: Some(GelfandFailure {
                check,
                elements,
                germs,
                detail,
            }),
        };
        let label = |s: Elem| sg.label(s).to_string();
        let diff_at = |x: &Section, y: &Section| {
            (0..self.len()).find(|&p| (x.coeffs[p] - y.coeffs[p]).norm() * self.ref_norm(p) > tol)
        };
        for s in sg.elements() {
            let os = self.basic_open(b, s);
            let basis = b.basis(s);
            // surjectivity onto sections over O_s
            let m = CMat::from_fn(os.len(), basis.len(), |i, j| self.gelfand(b, &basis[j]).coeffs[os[i]]);
            checks += 1;
            if rank(&m, tol) != os.len() || basis.len() != os.len() {
                return report(
                    GelfandCheck::Bijective,
                    vec![label(s)],
                    vec![],
                    format!("rank {} for {} germs", rank(&m, tol), os.len()),
                );
            }
            for _ in 0..samples {
                let a = b.random_element(s, &mut rng);
                let a2 = b.random_element(s, &mut rng);
                let ha = self.gelfand(b, &a);
                checks += 1;
                let (n1, n2) = (b.norm(&a), self.sup_norm(&ha));
                if (n1 - n2).abs() > tol * (1.0 + n1) {
                    return report(GelfandCheck::Isometric, vec![label(s)], vec![], format!("‖a‖ = {n1}, ‖â‖ = {n2}"));
                }
                if ha.support().any(|p| !os.contains(&p)) {
                    return report(GelfandCheck::Bijective, vec![label(s)], vec![], "â leaves O_s".into());
                }
                checks += 1;
                let c = C64::new(0.7, -0.3);
                let lin = self.gelfand(b, &b.add(&a, &b.scale(&a2, c)).expect("same fiber"));
                let expected = ha.add(&self.gelfand(b, &a2).scale(c));
                if let Some(p) = diff_at(&lin, &expected) {
                    return report(GelfandCheck::Linear, vec![label(s)], vec![g.germ_ref(p)], String::new());
                }
                checks += 1;
                if let Some(p) = diff_at(&self.gelfand(b, &b.star(&a)), &self.involution(&ha)) {
                    return report(GelfandCheck::Involutive, vec![label(s)], vec![g.germ_ref(p)], String::new());
                }
                for t in sg.elements() {
                    let c = b.random_element(t, &mut rng);
                    checks += 1;
                    let lhs = self.gelfand(b, &b.mul(&a, &c));
                    let rhs = self.convolve(&ha, &self.gelfand(b, &c));
                    if let Some(p) = diff_at(&lhs, &rhs) {
                        let y = g.germ(p).cell;
                        let germs = match (g.germ_of(t, y), b.theta_at(t, y).and_then(|ty| g.germ_of(s, ty))) {
                            (Some(q2), Some(q1)) => vec![g.germ_ref(q1), g.germ_ref(q2)],
                            _ => vec![g.germ_ref(p)],
                        };
                        return report(
                            GelfandCheck::Multiplicative,
                            vec![label(s), label(t)],
                            germs,
                            format!("mismatch at {}", g.germ_ref(p)),
                        );
                    }
                    if sg.leq(s, t) {
                        checks += 1;
                        let up = b.incl(t, &a).expect("s ≤ t");
                        if let Some(p) = diff_at(&self.gelfand(b, &up), &ha) {
                            return report(
                                GelfandCheck::Inclusion,
                                vec![label(s), label(t)],
                                vec![g.germ_ref(p)],
                                String::new(),
                            );
                        }
                    }
                }
            }
        }
        GelfandReport {
            passed: true,
            checks,
            failure: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GelfandCheck {
    Linear,
    Isometric,
    Bijective,
    Multiplicative,
    Involutive,
    Inclusion,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GelfandFailure {
    pub check: GelfandCheck,
    pub elements: Vec<String>,
    /// For multiplicativity failures, the composable pair `(γ₁, γ₂)`.
    pub germs: Vec<GermRef>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GelfandReport {
    pub passed: bool,
    pub checks: usize,
    pub failure: Option<GelfandFailure>,
}

#[cfg(test)]
mod tests {
    use super::super::RefPolicy;
    use super::*;
    use crate::fixtures;
    use crate::linalg::ONE;

    #[test]
    fn gelfand_is_an_isomorphism_on_fixtures() {
        for b in [
            fixtures::z2_flip(),
            fixtures::semilattice(),
            fixtures::z4_cocycle(),
            fixtures::interval_s5(11),
        ] {
            let l = LineBundle::build(&b, RefPolicy::Gauged(1)).unwrap();
            let r = l.verify_gelfand_iso(&b, 5, 2);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn mutated_product_is_caught_with_a_composable_pair() {
        let b = fixtures::z4_cocycle();
        let l = LineBundle::build(&b, RefPolicy::First).unwrap();
        let w = b.omega(1, 2, 0) * 2.0;
        let bad = b.with_omega_entry(1, 2, 0, w);
        let r = l.verify_gelfand_iso(&bad, 3, 0);
        let f = r.failure.expect("mutation detected");
        assert_eq!(f.check, GelfandCheck::Multiplicative);
        assert_eq!(f.elements, ["g1", "g2"]);
        assert_eq!(f.germs.len(), 2);
        assert_eq!(f.germs[0].0, "g1");
        assert_eq!(f.germs[1].0, "g2");
    }

    #[test]
    fn convolution_of_point_sections() {
        let b = fixtures::z4_cocycle();
        let l = LineBundle::build(&b, RefPolicy::First).unwrap();
        let g = l.groupoid();
        let g1 = g.germ_of(1, 0).unwrap();
        let xi = Section::point(l.len(), g1, ONE);
        let sq = l.convolve(&xi, &xi);
        let g2 = g.germ_of(2, 0).unwrap();
        assert!((sq.coeffs[g2] - C64::new(0.0, 1.0)).norm() < 1e-15);
        let back = l.involution(&l.involution(&xi));
        assert!((0..l.len()).all(|p| (back.coeffs[p] - xi.coeffs[p]).norm() < 1e-15));
    }
}
