//! Named example bundles and seeded random generators used by tests,
//! benchmarks and the command line.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fellbundle::{build_bundle, FellBundle, OmegaSpec, Presentation};
use crate::germgpd::{FiniteGroupoid, GroupoidCocycle};
use crate::invsgp::InverseSemigroup;
use crate::linalg::{circle, C64, ONE};
use crate::spaces::{parse_interval, Action, IntervalSet, PartialHomeo, PiecewiseAffine, Space};

/// `Z/2` acting on `{x, y}` by the swap, untwisted.
pub fn z2_flip_action() -> Action {
    let theta = vec![
        PartialHomeo::Discrete([(0, 0), (1, 1)].into()),
        PartialHomeo::Discrete([(0, 1), (1, 0)].into()),
    ];
    Action::new(InverseSemigroup::cyclic_group(2), Space::discrete(&["x", "y"]), theta).expect("flip action")
}

pub fn z2_flip() -> FellBundle {
    FellBundle::twisted_action(z2_flip_action(), |_, _, _| ONE, 1).expect("flip bundle")
}

/// The semilattice `{0, 1}`.
pub fn semilattice_semigroup() -> InverseSemigroup {
    InverseSemigroup::from_table(vec!["0".into(), "1".into()], vec![vec![0, 0], vec![0, 1]], Some("0"))
        .expect("two-element semilattice")
}

/// `{0,1}` on `{x0, x1}` with `U_0 = {x0}` and `U_1 = {x0, x1}`.
pub fn semilattice() -> FellBundle {
    let theta = vec![
        PartialHomeo::Discrete([(0, 0)].into()),
        PartialHomeo::Discrete([(0, 0), (1, 1)].into()),
    ];
    let action = Action::new(semilattice_semigroup(), Space::discrete(&["x0", "x1"]), theta).expect("semilattice action");
    FellBundle::twisted_action(action, |_, _, _| ONE, 1).expect("semilattice bundle")
}

/// All fibers `{0}` over the semilattice `{0, 1}`.
pub fn zero_bundle() -> FellBundle {
    FellBundle::zero_bundle(semilattice_semigroup())
}

/// `S = {e, 1, σ}` with `e` absorbing, `1` neutral and `σσ = 1`.
pub fn interval_semigroup() -> InverseSemigroup {
    InverseSemigroup::from_table(
        vec!["e".into(), "1".into(), "σ".into()],
        vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]],
        None,
    )
    .expect("three-element semigroup")
}

/// `S = {e, 1, σ}` on `[-1,1]` with `U_e = [-1,0)` and `θ_1 = θ_σ = id`.
pub fn interval_action() -> Action {
    let iv = |s: &str| parse_interval(s).expect("literal interval");
    let space = Space::interval(vec![iv("[-1,1]")]).expect("interval space");
    let ue = IntervalSet::single(iv("[-1,0)"));
    let all = IntervalSet::single(iv("[-1,1]"));
    let theta = vec![
        PartialHomeo::Interval(PiecewiseAffine::identity(&ue)),
        PartialHomeo::Interval(PiecewiseAffine::identity(&all)),
        PartialHomeo::Interval(PiecewiseAffine::identity(&all)),
    ];
    Action::new(interval_semigroup(), space, theta).expect("interval action")
}

/// The untwisted bundle of [`interval_action`], sampled at `samples` points.
pub fn interval_s5(samples: usize) -> FellBundle {
    FellBundle::sampled(interval_action(), |_, _| ONE, samples).expect("interval bundle")
}

/// `c` on `Z/4` with `∂c(1,1) = ∂c(1,2) = i`.
fn z4_gauge() -> [C64; 4] {
    [ONE, circle(1.0 / 8.0), ONE, circle(-1.0 / 8.0)]
}

/// `Z/4` on one point, with the twist table `ω(a,b) = c(a)c(b)/c(a+b)`.
pub fn z4_cocycle_action() -> (Action, Vec<Vec<C64>>) {
    let sg = InverseSemigroup::cyclic_group(4);
    let theta = (0..4).map(|_| PartialHomeo::Discrete([(0, 0)].into())).collect();
    let action = Action::new(sg, Space::discrete(&["p"]), theta).expect("trivial action");
    let c = z4_gauge();
    let omega = (0..4)
        .map(|a| (0..4).map(|b| c[a] * c[b] / c[(a + b) % 4]).collect())
        .collect();
    (action, omega)
}

pub fn z4_cocycle() -> FellBundle {
    let (action, omega) = z4_cocycle_action();
    FellBundle::twisted_action(action, |s, t, _| omega[s][t], 1).expect("z4 bundle")
}

/// `Z/4` as a groupoid with the same cocycle as [`z4_cocycle`].
pub fn z4_groupoid() -> (FiniteGroupoid, GroupoidCocycle) {
    let g = FiniteGroupoid::cyclic(4);
    let c = z4_gauge();
    let sigma = GroupoidCocycle::coboundary(&g, |a| c[a]);
    (g, sigma)
}

/// The flip action with `2×2` matrix fibers: a valid bundle that is not
/// semi-abelian.
pub fn matrix_bundle() -> FellBundle {
    FellBundle::twisted_action(z2_flip_action(), |_, _, _| ONE, 2).expect("matrix bundle")
}

/// Size limits for random twisted actions of Clifford semigroups
/// `Z/k × L` (a cyclic group times a semilattice of invariant sets).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomParams {
    pub max_points: usize,
    pub max_group: usize,
    pub max_elements: usize,
}

impl RandomParams {
    pub fn small() -> Self {
        Self {
            max_points: 5,
            max_group: 3,
            max_elements: 6,
        }
    }

    pub fn acceptance() -> Self {
        Self {
            max_points: 16,
            max_group: 4,
            max_elements: 8,
        }
    }

    pub fn largest() -> Self {
        Self {
            max_points: 32,
            max_group: 4,
            max_elements: 16,
        }
    }
}

/// A random permutation of `0..n` whose order divides `k`, as its cycles.
fn random_cycles(n: usize, k: usize, rng: &mut impl Rng) -> Vec<Vec<usize>> {
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    let divisors: Vec<usize> = (1..=k).filter(|d| k % d == 0).collect();
    let mut cycles = Vec::new();
    let mut rest = &pts[..];
    while !rest.is_empty() {
        let fits: Vec<usize> = divisors.iter().copied().filter(|&d| d <= rest.len()).collect();
        let d = fits[rng.random_range(0..fits.len())];
        cycles.push(rest[..d].to_vec());
        rest = &rest[d..];
    }
    cycles
}

/// A seeded twisted action of `Z/k × L` on a finite set. The twist is the
/// coboundary of a random unimodular function on germs that is `1` on units
/// and satisfies `c(γ⁻¹) = conj c(γ)`.
pub fn random_presentation(seed: u64, p: &RandomParams) -> Presentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=p.max_points.max(1));
    let k = rng.random_range(1..=p.max_group.clamp(1, p.max_elements.max(1)));
    let cycles = random_cycles(n, k, &mut rng);
    let mut perm = vec![0; n];
    for c in &cycles {
        for (i, &x) in c.iter().enumerate() {
            perm[x] = c[(i + 1) % c.len()];
        }
    }
    let power = |g: usize, x: usize| (0..g).fold(x, |y, _| perm[y]);
    // semilattice of invariant subsets, closed under intersection
    let top: BTreeSet<usize> = (0..n).collect();
    let mut lattice: Vec<BTreeSet<usize>> = vec![top];
    let cap = (p.max_elements / k).max(1);
    for _ in 0..4 * cap {
        if lattice.len() >= cap {
            break;
        }
        let cand: BTreeSet<usize> = cycles
            .iter()
            .filter(|_| rng.random_bool(0.5))
            .flatten()
            .copied()
            .collect();
        let mut next = lattice.clone();
        let mut queue = vec![cand];
        while let Some(s) = queue.pop() {
            if next.contains(&s) {
                continue;
            }
            for t in next.clone() {
                queue.push(&s & &t);
            }
            next.push(s);
        }
        if next.len() <= cap {
            lattice = next;
        }
    }
    let m = lattice.len();
    let meet: Vec<Vec<usize>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| {
                    let i = &lattice[a] & &lattice[b];
                    lattice.iter().position(|l| *l == i).expect("closed under meets")
                })
                .collect()
        })
        .collect();
    // element (g, u) has index u*k + g
    let idx = |g: usize, u: usize| u * k + g;
    let size = m * k;
    let labels: Vec<String> = (0..size)
        .map(|i| if k == 1 { format!("e{}", i) } else { format!("g{}e{}", i % k, i / k) })
        .collect();
    let table: Vec<Vec<usize>> = (0..size)
        .map(|a| (0..size).map(|b| idx((a % k + b % k) % k, meet[a / k][b / k])).collect())
        .collect();
    let zero = (k == 1)
        .then(|| lattice.iter().position(BTreeSet::is_empty))
        .flatten()
        .map(|u| labels[idx(0, u)].clone());
    let sg = InverseSemigroup::from_table(labels, table, zero.as_deref()).expect("Clifford semigroup");
    let points: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let point_refs: Vec<&str> = points.iter().map(String::as_str).collect();
    let theta = (0..size)
        .map(|s| PartialHomeo::Discrete(lattice[s / k].iter().map(|&x| (x, power(s % k, x))).collect()))
        .collect();
    let action = Action::new(sg, Space::discrete(&point_refs), theta).expect("Clifford action");
    // germs of the action are (g, x); c(0, x) = 1
    let mut c: BTreeMap<(usize, usize), C64> = BTreeMap::new();
    for g in 0..k {
        for x in 0..n {
            if c.contains_key(&(g, x)) {
                continue;
            }
            let (gi, xi) = ((k - g) % k, power(g, x));
            let v = if g == 0 {
                ONE
            } else if (gi, xi) == (g, x) {
                if rng.random_bool(0.5) { ONE } else { -ONE }
            } else {
                circle(rng.random_range(0.0..1.0))
            };
            c.insert((g, x), v);
            c.insert((gi, xi), v.conj());
        }
    }
    let mut omega: BTreeMap<(usize, usize), BTreeMap<usize, C64>> = BTreeMap::new();
    let sgr = action.semigroup();
    for s in 0..size {
        for t in 0..size {
            let st = sgr.mul(s, t);
            let (g, h) = (s % k, t % k);
            let vals: BTreeMap<usize, C64> = lattice[st / k]
                .iter()
                .map(|&x| (x, c[&(g, power(h, x))] * c[&(h, x)] / c[&((g + h) % k, x)]))
                .filter(|(_, v)| (v - ONE).norm() > 0.0)
                .collect();
            if !vals.is_empty() {
                omega.insert((s, t), vals);
            }
        }
    }
    Presentation::TwistedAction {
        action,
        omega: OmegaSpec::PerPoint(omega),
        samples: 0,
    }
}

pub fn random_bundle(seed: u64, p: &RandomParams) -> FellBundle {
    build_bundle(&random_presentation(seed, p)).expect("random presentations are valid")
}

/// A finite twisted groupoid with a generating family of bissections.
#[derive(Debug, Clone)]
pub struct TwistedGroupoid {
    pub name: String,
    pub groupoid: FiniteGroupoid,
    pub cocycle: GroupoidCocycle,
    pub bissections: Vec<BTreeSet<usize>>,
}

fn singletons(g: &FiniteGroupoid) -> Vec<BTreeSet<usize>> {
    (0..g.len()).map(|a| [a].into()).collect()
}

fn units(g: &FiniteGroupoid) -> BTreeSet<usize> {
    (0..g.objects().len()).map(|o| g.unit(o)).collect()
}

/// Gauge `c` with `c = 1` on units and `c(γ⁻¹) = conj c(γ)`, from a seed.
fn random_gauge(g: &FiniteGroupoid, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = vec![ONE; g.len()];
    for a in 0..g.len() {
        let b = g.inverse(a);
        if g.is_unit(a) || b < a {
            continue;
        }
        c[a] = if a == b {
            if rng.random_bool(0.5) { ONE } else { -ONE }
        } else {
            circle(rng.random_range(0.0..1.0))
        };
        c[b] = c[a].conj();
    }
    c
}

/// Ten round-trip inputs: pair groupoids, cyclic and Klein groups (with a
/// cohomologically nontrivial Klein cocycle and the `Z/4` twist of
/// [`z4_cocycle`]), products and disjoint unions.
pub fn twisted_groupoids() -> Vec<TwistedGroupoid> {
    let mut out = Vec::new();
    let mut add = |name: &str, g: FiniteGroupoid, cocycle: GroupoidCocycle, bissections: Vec<BTreeSet<usize>>| {
        out.push(TwistedGroupoid {
            name: name.into(),
            groupoid: g,
            cocycle,
            bissections,
        });
    };

    let g = FiniteGroupoid::pair(2);
    let mut b = singletons(&g);
    let flip = ["(0,1)", "(1,0)"].iter().map(|n| g.arrow_index(n).expect("pair arrow")).collect();
    b.push(flip);
    b.push(units(&g));
    add("pair-2", g, GroupoidCocycle::trivial(), b);

    let g = FiniteGroupoid::cyclic(2);
    let b = singletons(&g);
    add("z2", g, GroupoidCocycle::trivial(), b);

    let (g, sigma) = z4_groupoid();
    let b = singletons(&g);
    add("z4-twisted", g, sigma, b);

    let g = FiniteGroupoid::group(4, |a, b| a ^ b).expect("Klein four-group");
    let sigma = GroupoidCocycle::from_fn(&g, |a, b| if (a & 1) * ((b >> 1) & 1) == 1 { -ONE } else { ONE });
    let b = singletons(&g);
    add("klein-bicharacter", g, sigma, b);

    let g = FiniteGroupoid::pair(3);
    let c = random_gauge(&g, 3);
    let sigma = GroupoidCocycle::coboundary(&g, |a| c[a]);
    let mut b = singletons(&g);
    b.push(units(&g));
    add("pair-3-coboundary", g, sigma, b);

    let g = FiniteGroupoid::cyclic(3);
    let c = random_gauge(&g, 5);
    let sigma = GroupoidCocycle::coboundary(&g, |a| c[a]);
    let b = singletons(&g);
    add("z3-coboundary", g, sigma, b);

    let g = FiniteGroupoid::cyclic(2)
        .disjoint_union(&FiniteGroupoid::pair(1), "'")
        .expect("disjoint union");
    let b = singletons(&g);
    add("z2-plus-point", g, GroupoidCocycle::trivial(), b);

    let g = FiniteGroupoid::cyclic(2).product(&FiniteGroupoid::pair(2)).expect("product");
    let c = random_gauge(&g, 7);
    let sigma = GroupoidCocycle::coboundary(&g, |a| c[a]);
    let b = singletons(&g);
    add("z2-times-pair-2", g, sigma, b);

    let g = FiniteGroupoid::pair(1)
        .disjoint_union(&FiniteGroupoid::pair(1), "'")
        .and_then(|u| u.disjoint_union(&FiniteGroupoid::pair(1), "''"))
        .expect("three points");
    let mut b = singletons(&g);
    b.push(units(&g));
    add("three-units", g, GroupoidCocycle::trivial(), b);

    let klein = FiniteGroupoid::group(4, |a, b| a ^ b).expect("Klein four-group");
    let g = klein.product(&FiniteGroupoid::pair(2)).expect("product");
    let sigma = {
        // bicharacter on the Klein factor, pulled back along the projection
        let factor = |a: usize| klein.arrow_index(g.arrow_names()[a].split('×').next().expect("product name")).expect("factor");
        GroupoidCocycle::from_fn(&g, |a, b| {
            if (factor(a) & 1) * ((factor(b) >> 1) & 1) == 1 {
                -ONE
            } else {
                ONE
            }
        })
    };
    let b = singletons(&g);
    add("klein-times-pair-2", g, sigma, b);

    out
}
