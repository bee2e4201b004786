//! Recovering a twisted groupoid from the bundle of sections over a wide
//! family of bissections.
//!
//! With `A_U = C₀(L_U)`, the germ `[U, y]` corresponds to the unique arrow
//! of `U` with source `y`, and `z·ref/‖ref‖` over it to `z·ref(γ)/|ref(γ)|`.

use serde::Serialize;

use super::{LineBundle, LineError, RefPolicy, Twist, TwistElement};
use crate::fellbundle::{compile_groupoid, BundleError};
use crate::fixtures::TwistedGroupoid;
use crate::linalg::{circle, C64, ONE};

const TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundTripReport {
    pub name: String,
    pub arrows: usize,
    pub germs: usize,
    pub semigroup_size: usize,
    pub phi_bijective: bool,
    pub phi_homomorphism: bool,
    pub psi_homomorphism: bool,
    pub equivariant: bool,
    pub diagram_commutes: bool,
    /// Largest deviation of `ψ` from multiplicativity.
    pub max_error: f64,
    pub witness: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RoundTripError {
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Line(#[from] LineError),
}

pub fn round_trip(t: &TwistedGroupoid) -> Result<RoundTripReport, RoundTripError> {
    let gpd = &t.groupoid;
    let compiled = compile_groupoid(gpd, &t.cocycle, &t.bissections)?;
    let b = &compiled.bundle;
    let l = LineBundle::build(b, RefPolicy::First)?;
    let twist = Twist::from_line_bundle(&l);
    let g = l.groupoid();
    let name = |a: usize| gpd.arrow_names()[a].clone();
    let mut r = RoundTripReport {
        name: t.name.clone(),
        arrows: gpd.len(),
        germs: g.len(),
        semigroup_size: b.semigroup().len(),
        phi_bijective: true,
        phi_homomorphism: true,
        psi_homomorphism: true,
        equivariant: true,
        diagram_commutes: true,
        max_error: 0.0,
        witness: None,
        passed: false,
    };
    let fail = |flag: &mut bool, witness: &mut Option<String>, w: String| {
        *flag = false;
        witness.get_or_insert(w);
    };

    let phi: Vec<Option<usize>> = (0..g.len())
        .map(|p| {
            let germ = g.germ(p);
            compiled.arrow_from(gpd, germ.s, germ.cell)
        })
        .collect();
    let mut hit = vec![false; gpd.len()];
    for (p, a) in phi.iter().enumerate() {
        match a {
            Some(a) if !hit[*a] => hit[*a] = true,
            _ => fail(&mut r.phi_bijective, &mut r.witness, format!("germ {}", g.germ_ref(p))),
        }
    }
    if let Some(a) = hit.iter().position(|h| !h) {
        fail(&mut r.phi_bijective, &mut r.witness, format!("arrow {} is not hit", name(a)));
    }
    if !r.phi_bijective {
        return Ok(r);
    }
    let phi: Vec<usize> = phi.into_iter().map(Option::unwrap).collect();

    for p in 0..g.len() {
        let a = phi[p];
        if gpd.source(a) != g.source(p) || gpd.range(a) != g.range(p) || phi[g.inverse(p)] != gpd.inverse(a) {
            fail(&mut r.phi_homomorphism, &mut r.witness, format!("germ {}", g.germ_ref(p)));
        }
    }

    // ψ(γ, z) = (φ(γ), z·phase(ref(γ)))
    let phase: Vec<C64> = (0..g.len())
        .map(|p| {
            let v = b.value(l.reference(p), g.germ(p).cell);
            v / v.norm()
        })
        .collect();
    let psi = |e: &TwistElement| (phi[e.germ], e.z * phase[e.germ]);
    let sigma_mul = |(a, z): (usize, C64), (c, w): (usize, C64)| {
        gpd.compose(a, c).map(|ac| (ac, z * w * t.cocycle.get(a, c)))
    };

    for &(p, q, pq) in l.composable() {
        if gpd.compose(phi[p], phi[q]) != Some(phi[pq]) {
            fail(
                &mut r.phi_homomorphism,
                &mut r.witness,
                format!("{} {}", g.germ_ref(p), g.germ_ref(q)),
            );
            continue;
        }
        let (x, y) = (TwistElement { germ: p, z: ONE }, TwistElement { germ: q, z: ONE });
        let lhs = psi(&twist.mul(&x, &y).expect("composable"));
        let rhs = sigma_mul(psi(&x), psi(&y)).expect("φ is a homomorphism");
        let err = (lhs.1 - rhs.1).norm();
        r.max_error = r.max_error.max(err);
        if lhs.0 != rhs.0 || err > TOL {
            fail(
                &mut r.psi_homomorphism,
                &mut r.witness,
                format!("{} {}", g.germ_ref(p), g.germ_ref(q)),
            );
        }
    }

    let exact = [ONE, C64::new(0.0, 1.0), -ONE, C64::new(0.0, -1.0)];
    let sampled = [circle(0.1), circle(1.0 / 3.0), circle(0.77)];
    for p in 0..g.len() {
        let e = TwistElement { germ: p, z: circle(0.2) };
        for w in exact {
            let lhs = psi(&twist.act(w, &e));
            let rhs = psi(&e);
            if lhs != (rhs.0, w * rhs.1) {
                fail(&mut r.equivariant, &mut r.witness, format!("{} at {w}", g.germ_ref(p)));
            }
        }
        for w in sampled {
            let lhs = psi(&twist.act(w, &e));
            let rhs = psi(&e);
            if lhs.0 != rhs.0 || (lhs.1 - w * rhs.1).norm() > TOL {
                fail(&mut r.equivariant, &mut r.witness, format!("{} at {w}", g.germ_ref(p)));
            }
        }
        if twist.pi(&e) != p || psi(&e).0 != phi[twist.pi(&e)] {
            fail(&mut r.diagram_commutes, &mut r.witness, format!("π at {}", g.germ_ref(p)));
        }
    }
    for cell in g.unit_cells() {
        for z in exact.iter().chain(&sampled) {
            let i = twist.iota(*z, cell).expect("unit cell");
            if psi(&i) != (gpd.unit(cell), *z) {
                fail(&mut r.diagram_commutes, &mut r.witness, format!("ι at {}", g.cell_label(cell)));
            }
        }
    }
    r.passed = r.phi_bijective && r.phi_homomorphism && r.psi_homomorphism && r.equivariant && r.diagram_commutes;
    Ok(r)
}
