//! The states `φ̃_x` on `C_c(A)`, their GNS representations, and the
//! comparison with `π_x ∘ Ψ`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{regular_rep, BundleAlgebraElement, CcAlgebra, ConvError, Section};
use crate::fellbundle::FellBundle;
use crate::invsgp::Elem;
use crate::linalg::{hermitian_eigen, max_abs_diff, op_norm, rank, CMat, C64, ONE, ZERO};
use crate::linebundle::LineBundle;

const TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-9;

/// Whether some idempotent `e ≤ s` has `x ∈ U_e`, i.e. `[s, x]` is a unit.
fn unit_below(b: &FellBundle, s: Elem, x: usize) -> bool {
    let sg = b.semigroup();
    sg.idempotents()
        .iter()
        .any(|&e| sg.leq(e, s) && b.theta_at(e, x).is_some())
}

/// `φ̃_x(Σ a_s δ_s) = Σ a_s(x)` over the `s` with `[s, x]` a unit.
pub fn state_phitilde(b: &FellBundle, cell: usize, el: &BundleAlgebraElement) -> C64 {
    el.terms
        .iter()
        .filter(|(s, _)| unit_below(b, **s, cell))
        .map(|(_, a)| b.value(a, cell))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedIsoFailure {
    pub unit: String,
    pub check: String,
    pub element: Option<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedIsoReport {
    pub passed: bool,
    pub units: usize,
    pub dim_algebra: usize,
    pub norm_samples: usize,
    pub max_coefficient_error: f64,
    pub max_norm_error: f64,
    pub failure: Option<ReducedIsoFailure>,
}

/// GNS data of `φ̃_x`: `⟨u, v⟩ = v† H u` with `H = Q Λ Q†`, realized on
/// `ℂ^r` by `V = Λ^{1/2} Q_r†`.
struct Gns {
    q: CMat,
    sqrt: Vec<f64>,
}

impl Gns {
    fn new(h: &CMat) -> Self {
        let (vals, vecs) = hermitian_eigen(h);
        let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > TOL).collect();
        let q = CMat::from_fn(h.nrows(), keep.len(), |i, j| vecs[(i, keep[j])]);
        Self {
            q,
            sqrt: keep.iter().map(|&i| vals[i].sqrt()).collect(),
        }
    }

    fn rank(&self) -> usize {
        self.sqrt.len()
    }

    /// `V⁺ = Q_r Λ^{-1/2}`.
    fn pinv(&self) -> CMat {
        let mut m = self.q.clone();
        for (j, s) in self.sqrt.iter().enumerate() {
            m.column_mut(j).scale_mut(1.0 / s);
        }
        m
    }

    /// `ρ(u) = V L_u V⁺`.
    fn rho(&self, left: &[(usize, usize, C64)]) -> CMat {
        let pinv = self.pinv();
        let mut lv = CMat::zeros(pinv.nrows(), pinv.ncols());
        for &(k, i, v) in left {
            for j in 0..pinv.ncols() {
                lv[(k, j)] += v * pinv[(i, j)];
            }
        }
        let mut out = self.q.adjoint() * lv;
        for (i, s) in self.sqrt.iter().enumerate() {
            out.row_mut(i).scale_mut(*s);
        }
        out
    }
}

impl ReducedIsoReport {
    fn fail(mut self, unit: String, check: &str, element: Option<String>, detail: String) -> Self {
        self.passed = false;
        self.failure = Some(ReducedIsoFailure {
            unit,
            check: check.into(),
            element,
            detail,
        });
        self
    }
}

/// For every unit `x`, checks that the GNS representation of `φ̃_x` is
/// unitarily equivalent to `π_x ∘ Ψ` with cyclic vectors matched, then
/// compares `‖Ψ(a)‖_r` with `‖a‖_r` on `samples` random elements.
pub fn verify_reduced_iso(
    b: &FellBundle,
    l: &LineBundle,
    samples: usize,
    seed: u64,
) -> Result<ReducedIsoReport, ConvError> {
    let cc = CcAlgebra::new(b)?;
    let g = l.groupoid();
    let n = cc.dim();
    let sg = b.semigroup();
    let basis_label = |i: usize| {
        let (s, x) = cc.basis()[i];
        format!("δ_{} at {}", sg.label(s), b.point_label(x))
    };
    let psi: Vec<Section> = (0..n)
        .map(|i| {
            let mut e = vec![ZERO; n];
            e[i] = ONE;
            cc.psi(l, &e)
        })
        .collect();
    let stars: Vec<Vec<(usize, C64)>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            cc.adjoint(&e).into_iter().enumerate().filter(|(_, v)| *v != ZERO).collect()
        })
        .collect();
    let units = g.unit_cells();
    let mut report = ReducedIsoReport {
        passed: true,
        units: units.len(),
        dim_algebra: n,
        norm_samples: samples,
        max_coefficient_error: 0.0,
        max_norm_error: 0.0,
        failure: None,
    };
    let mut gns = Vec::with_capacity(units.len());
    for &x in &units {
        let ux = g.cell_label(x);
        let phi: Vec<C64> = cc
            .basis()
            .iter()
            .map(|&(s, y)| if y == x && unit_below(b, s, x) { ONE } else { ZERO })
            .collect();
        // H[j][i] = φ̃(β_j* β_i)
        let mut h = CMat::zeros(n, n);
        for j in 0..n {
            for &(k, w) in &stars[j] {
                for &(i, kk, v) in cc.products(k) {
                    h[(j, i)] += w * v * phi[kk];
                }
            }
        }
        let rep = regular_rep(l, x);
        let m = rep.dim();
        let u = rep.cyclic_vector(l).expect("unit cell");
        let mats: Vec<CMat> = psi.iter().map(|p| rep.matrix(l, p)).collect();
        let k = CMat::from_fn(m, n, |r, i| mats[i][(r, u)]);
        let gram_err = max_abs_diff(&(k.adjoint() * &k), &h);
        report.max_coefficient_error = report.max_coefficient_error.max(gram_err);
        if gram_err > TOL {
            return Ok(report.fail(ux, "inner products", None, format!("error {gram_err:e}")));
        }
        let gs = Gns::new(&h);
        if gs.rank() != m || rank(&k, TOL) != m {
            return Ok(report.fail(
                ux,
                "cyclic dimension",
                None,
                format!("GNS space of dimension {} against {m}", gs.rank()),
            ));
        }
        let w = &k * gs.pinv();
        let unitary_err = max_abs_diff(&(w.adjoint() * &w), &CMat::identity(m, m));
        if unitary_err > TOL {
            return Ok(report.fail(ux, "unitary", None, format!("error {unitary_err:e}")));
        }
        // K L_c = π_x(Ψc) K, i.e. ⟨ρ(c)[a], [b]⟩ = ⟨π_x(Ψc) π_x(Ψa)δ_x, π_x(Ψb)δ_x⟩
        for (c, pc) in mats.iter().enumerate() {
            let mut lhs = CMat::zeros(m, n);
            for &(i, kk, v) in cc.products(c) {
                for r in 0..m {
                    lhs[(r, i)] += k[(r, kk)] * v;
                }
            }
            let mut rhs = CMat::zeros(m, n);
            for (r, col) in (0..m).flat_map(|r| (0..m).map(move |col| (r, col))) {
                let p = pc[(r, col)];
                if p != ZERO {
                    for i in 0..n {
                        rhs[(r, i)] += p * k[(col, i)];
                    }
                }
            }
            let err = max_abs_diff(&lhs, &rhs);
            report.max_coefficient_error = report.max_coefficient_error.max(err);
            if err > TOL {
                return Ok(report.fail(ux, "intertwining", Some(basis_label(c)), format!("error {err:e}")));
            }
        }
        gns.push(gs);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..samples {
        let a = cc.random(&mut rng);
        let left = cc.left_mul(&a);
        let na = gns.iter().map(|gs| op_norm(&gs.rho(&left))).fold(0.0, f64::max);
        let npsi = super::reduced_norm(l, &cc.psi(l, &a)).norm;
        let err = (na - npsi).abs();
        report.max_norm_error = report.max_norm_error.max(err);
        if err > NORM_TOL {
            return Ok(report.fail(
                String::new(),
                "reduced norm",
                Some(format!("random element {t}")),
                format!("‖a‖_r = {na}, ‖Ψ(a)‖_r = {npsi}"),
            ));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraStructure {
    pub dim: usize,
    pub center_dim: usize,
}

/// Dimension and center dimension of the image of `C_c(L)` under
/// `⊕_x π_x`.
pub fn reduced_algebra_structure(l: &LineBundle) -> AlgebraStructure {
    let n = l.len();
    let reps: Vec<_> = l.groupoid().unit_cells().into_iter().map(|x| regular_rep(l, x)).collect();
    let mats: Vec<Vec<CMat>> = (0..n)
        .map(|p| reps.iter().map(|r| r.matrix(l, &Section::point(n, p, ONE))).collect())
        .collect();
    let flat = |ms: &[CMat]| -> Vec<C64> { ms.iter().flat_map(|m| m.iter().copied()).collect() };
    let cols: Vec<Vec<C64>> = mats.iter().map(|m| flat(m)).collect();
    let d = cols.first().map_or(0, Vec::len);
    if n == 0 || d == 0 {
        return AlgebraStructure { dim: 0, center_dim: 0 };
    }
    let dim = rank(&crate::linalg::from_columns(&cols, d), TOL);
    // Σ_p c_p [M_p, M_q] = 0 for every q
    let mut sys = CMat::zeros(n * d, n);
    for p in 0..n {
        for q in 0..n {
            let comm: Vec<CMat> = mats[p].iter().zip(&mats[q]).map(|(a, b)| a * b - b * a).collect();
            for (i, v) in flat(&comm).into_iter().enumerate() {
                sys[(q * d + i, p)] = v;
            }
        }
    }
    let nullity = n - rank(&sys, TOL);
    AlgebraStructure {
        dim,
        center_dim: nullity - (n - dim),
    }
}
