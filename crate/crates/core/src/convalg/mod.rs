//! Convolution algebras: the algebraic crossed product `C_c(A) = ⊕_s A_s`
//! of a scalar bundle, the section algebra `C_c(L)`, and the map
//! `Ψ(Σ a_s δ_s) = Σ â_s` between them.

mod reduced;
mod regular;

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::fellbundle::{FellBundle, FiberElement};
use crate::invsgp::Elem;
use crate::linalg::{from_columns, null_space, rank, span_contains, CMat, C64, ZERO};
use crate::linebundle::LineBundle;

pub use crate::linebundle::Section;
pub use reduced::{
    reduced_algebra_structure, state_phitilde, verify_reduced_iso, AlgebraStructure, ReducedIsoFailure, ReducedIsoReport,
};
pub use regular::{
    reduced_norm, regular_rep, state_phi_x, ExpectationReport, ReducedNorm, Representation, UnitExpectation,
};

const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConvError {
    #[error("convolution algebras need scalar fibers")]
    NotScalar,
    #[error("germ groupoid is not Hausdorff")]
    NotHausdorff,
}

/// `Σ a_s δ_s` with finitely many nonzero terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BundleAlgebraElement {
    pub terms: BTreeMap<Elem, FiberElement>,
}

impl BundleAlgebraElement {
    pub fn single(a: FiberElement) -> Self {
        Self {
            terms: [(a.s, a)].into(),
        }
    }
}

/// `C_c(A)` in the basis `{δ_x δ_s}` of point masses, with its product and
/// involution tabulated on basis elements.
#[derive(Debug, Clone)]
pub struct CcAlgebra<'a> {
    b: &'a FellBundle,
    basis: Vec<(Elem, usize)>,
    index: HashMap<(Elem, usize), usize>,
    prod: Vec<Vec<(usize, usize, C64)>>,
    star: Vec<Vec<(usize, C64)>>,
}

impl<'a> CcAlgebra<'a> {
    pub fn new(b: &'a FellBundle) -> Result<Self, ConvError> {
        if b.block() != 1 {
            return Err(ConvError::NotScalar);
        }
        let sg = b.semigroup();
        let basis: Vec<(Elem, usize)> = sg.elements().flat_map(|s| b.support(s).map(move |x| (s, x))).collect();
        let index: HashMap<(Elem, usize), usize> = basis.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let sparse = |a: &FiberElement| -> Vec<(usize, C64)> {
            b.support(a.s)
                .filter(|&x| b.value(a, x) != ZERO)
                .map(|x| (index[&(a.s, x)], b.value(a, x)))
                .collect()
        };
        let deltas: Vec<FiberElement> = basis.iter().map(|&(s, x)| b.delta(s, x, 0)).collect();
        let prod = basis
            .iter()
            .zip(&deltas)
            .map(|(&(_, x), c)| {
                let mut row = Vec::new();
                for (i, (&(t, y), d)) in basis.iter().zip(&deltas).enumerate() {
                    // products of point masses vanish unless the points line up
                    if b.theta_at(t, y) == Some(x) {
                        row.extend(sparse(&b.mul(c, d)).into_iter().map(|(k, v)| (i, k, v)));
                    }
                }
                row
            })
            .collect();
        let star = deltas.iter().map(|c| sparse(&b.star(c))).collect();
        Ok(Self {
            b,
            basis,
            index,
            prod,
            star,
        })
    }

    pub fn bundle(&self) -> &FellBundle {
        self.b
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `(s, x)` of each basis element `δ_x δ_s`.
    pub fn basis(&self) -> &[(Elem, usize)] {
        &self.basis
    }

    pub fn coords(&self, el: &BundleAlgebraElement) -> Vec<C64> {
        let mut v = vec![ZERO; self.dim()];
        for (s, a) in &el.terms {
            for x in self.b.support(*s) {
                v[self.index[&(*s, x)]] += self.b.value(a, x);
            }
        }
        v
    }

    pub fn element(&self, coords: &[C64]) -> BundleAlgebraElement {
        let mut terms: BTreeMap<Elem, FiberElement> = BTreeMap::new();
        for (i, &(s, x)) in self.basis.iter().enumerate() {
            if coords[i] != ZERO {
                let a = terms.entry(s).or_insert_with(|| self.b.zero(s));
                a.values[x] = coords[i];
            }
        }
        BundleAlgebraElement { terms }
    }

    pub fn random(&self, rng: &mut impl Rng) -> Vec<C64> {
        (0..self.dim())
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    /// `β_c · β_i = Σ v β_k`, listed as `(i, k, v)` for each `c`.
    pub fn products(&self, c: usize) -> &[(usize, usize, C64)] {
        &self.prod[c]
    }

    pub fn mul(&self, u: &[C64], v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim()];
        for (c, &uc) in u.iter().enumerate() {
            if uc == ZERO {
                continue;
            }
            for &(i, k, w) in &self.prod[c] {
                out[k] += uc * v[i] * w;
            }
        }
        out
    }

    pub fn adjoint(&self, u: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim()];
        for (c, &uc) in u.iter().enumerate() {
            for &(k, w) in &self.star[c] {
                out[k] += uc.conj() * w;
            }
        }
        out
    }

    /// Left multiplication by `u` as a sparse list `(k, i, v)`.
    pub fn left_mul(&self, u: &[C64]) -> Vec<(usize, usize, C64)> {
        let mut acc: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for (c, &uc) in u.iter().enumerate() {
            if uc == ZERO {
                continue;
            }
            for &(i, k, w) in &self.prod[c] {
                *acc.entry((k, i)).or_insert(ZERO) += uc * w;
            }
        }
        acc.into_iter().map(|((k, i), v)| (k, i, v)).collect()
    }

    /// `Ψ` as a matrix from `C_c(A)` to sections.
    pub fn psi_matrix(&self, l: &LineBundle) -> CMat {
        let cols: Vec<Vec<C64>> = self
            .basis
            .iter()
            .map(|&(s, x)| l.gelfand(self.b, &self.b.delta(s, x, 0)).coeffs)
            .collect();
        from_columns(&cols, l.len())
    }

    pub fn psi(&self, l: &LineBundle, u: &[C64]) -> Section {
        psi_map(self.b, l, &self.element(u))
    }

    /// Generators `aδ_s − j_{t,s}(a)δ_t` of the relation ideal, for
    /// `s < t` and `a` a point mass, tagged with the basis index of `aδ_s`
    /// and with `t`.
    pub fn ideal_generators(&self) -> Vec<(usize, Elem, Vec<C64>)> {
        let sg = self.b.semigroup();
        let mut out = Vec::new();
        for (i, &(s, x)) in self.basis.iter().enumerate() {
            for t in sg.elements().filter(|&t| t != s && sg.leq(s, t)) {
                let up = self.b.incl(t, &self.b.delta(s, x, 0)).expect("s ≤ t");
                let mut v = self.coords(&BundleAlgebraElement::single(up));
                for c in &mut v {
                    *c = -*c;
                }
                v[i] += 1.0;
                out.push((i, t, v));
            }
        }
        out
    }
}

/// `Ψ(Σ a_s δ_s) = Σ â_s`.
pub fn psi_map(b: &FellBundle, l: &LineBundle, el: &BundleAlgebraElement) -> Section {
    el.terms
        .values()
        .fold(Section::zero(l.len()), |acc, a| acc.add(&l.gelfand(b, a)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelReport {
    pub passed: bool,
    pub dim_algebra: usize,
    pub dim_sections: usize,
    pub dim_kernel: usize,
    pub dim_ideal: usize,
    pub surjective: bool,
    pub kernel_in_ideal: bool,
    pub ideal_in_kernel: bool,
    /// Label and point of an ideal generator outside the kernel.
    pub witness: Option<(String, String)>,
}

/// Compares `ker Ψ` with the span of the relation ideal's generators.
pub fn kernel_equals_ideal(b: &FellBundle, l: &LineBundle) -> Result<KernelReport, ConvError> {
    let cc = CcAlgebra::new(b)?;
    let psi = cc.psi_matrix(l);
    let n = cc.dim();
    let ker = null_space(&psi, RANK_TOL);
    let tagged = cc.ideal_generators();
    let gens: Vec<Vec<C64>> = tagged.iter().map(|g| g.2.clone()).collect();
    let ideal = from_columns(&gens, n);
    let dim_ideal = if gens.is_empty() { 0 } else { rank(&ideal, RANK_TOL) };
    let image = &psi * &ideal;
    let mut witness = None;
    let mut ideal_in_kernel = true;
    for (j, col) in image.column_iter().enumerate() {
        if col.iter().any(|v| v.norm() > RANK_TOL) {
            ideal_in_kernel = false;
            let (i, t, _) = tagged[j];
            let (s, x) = cc.basis[i];
            let sg = b.semigroup();
            witness = Some((format!("{} ≤ {}", sg.label(s), sg.label(t)), b.point_label(x)));
            break;
        }
    }
    let kernel_in_ideal = ker.ncols() == 0 || (dim_ideal > 0 && span_contains(&ideal, &ker, RANK_TOL));
    let surjective = n == 0 || rank(&psi, RANK_TOL) == l.len();
    Ok(KernelReport {
        passed: kernel_in_ideal && ideal_in_kernel && ker.ncols() == dim_ideal && surjective,
        dim_algebra: n,
        dim_sections: l.len(),
        dim_kernel: ker.ncols(),
        dim_ideal,
        surjective,
        kernel_in_ideal,
        ideal_in_kernel,
        witness,
    })
}
