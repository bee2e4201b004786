//! Finite discrete groupoids given by arrow lists and composition tables,
//! circle-valued 2-cocycles on them, and the wideness test for families of
//! bissections.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{C64, ONE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("unknown name `{0}`")]
    Unknown(String),
    #[error("object `{0}` has no unit arrow (an arrow named like the object)")]
    MissingUnit(String),
    #[error("unit arrow `{0}` is not a loop at its object")]
    UnitNotLoop(String),
    #[error("product {0}·{1} is given but the arrows are not composable")]
    NotComposable(String, String),
    #[error("product {0}·{1} is missing")]
    MissingProduct(String, String),
    #[error("product {0}·{1} has the wrong source or range")]
    BadProduct(String, String),
    #[error("product {0}·{1} is given twice with different values")]
    ConflictingProduct(String, String),
    #[error("composition is not associative at ({0},{1},{2})")]
    NotAssociative(String, String, String),
    #[error("arrow `{0}` has no inverse")]
    NoInverse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDoc {
    pub name: String,
    pub source: String,
    pub range: String,
}

/// `products` lists `[a, b, ab]` for composable `a, b` (source of `a` equal
/// to range of `b`); products with a unit may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidDoc {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    #[serde(default)]
    pub products: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<String>,
    source: Vec<usize>,
    range: Vec<usize>,
    unit: Vec<usize>,
    inverse: Vec<usize>,
    prod: HashMap<(usize, usize), usize>,
}

fn index(names: &[String]) -> Result<HashMap<&str, usize>, GroupoidError> {
    let mut m = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if m.insert(n.as_str(), i).is_some() {
            return Err(GroupoidError::Duplicate(n.clone()));
        }
    }
    Ok(m)
}

impl FiniteGroupoid {
    pub fn from_doc(doc: &GroupoidDoc) -> Result<Self, GroupoidError> {
        let objects = doc.objects.clone();
        let obj = index(&objects)?;
        let arrows: Vec<String> = doc.arrows.iter().map(|a| a.name.clone()).collect();
        let arr = index(&arrows)?;
        let find_obj = |n: &str| obj.get(n).copied().ok_or_else(|| GroupoidError::Unknown(n.to_string()));
        let find_arr = |n: &str| arr.get(n).copied().ok_or_else(|| GroupoidError::Unknown(n.to_string()));
        let source = doc.arrows.iter().map(|a| find_obj(&a.source)).collect::<Result<Vec<_>, _>>()?;
        let range = doc.arrows.iter().map(|a| find_obj(&a.range)).collect::<Result<Vec<_>, _>>()?;
        let mut unit = Vec::with_capacity(objects.len());
        for (o, name) in objects.iter().enumerate() {
            let u = arr.get(name.as_str()).copied().ok_or_else(|| GroupoidError::MissingUnit(name.clone()))?;
            if source[u] != o || range[u] != o {
                return Err(GroupoidError::UnitNotLoop(name.clone()));
            }
            unit.push(u);
        }
        let mut prod = HashMap::new();
        for [a, b, c] in &doc.products {
            let (ia, ib, ic) = (find_arr(a)?, find_arr(b)?, find_arr(c)?);
            if source[ia] != range[ib] {
                return Err(GroupoidError::NotComposable(a.clone(), b.clone()));
            }
            if range[ic] != range[ia] || source[ic] != source[ib] {
                return Err(GroupoidError::BadProduct(a.clone(), b.clone()));
            }
            if prod.insert((ia, ib), ic).is_some_and(|old| old != ic) {
                return Err(GroupoidError::ConflictingProduct(a.clone(), b.clone()));
            }
        }
        for g in 0..arrows.len() {
            for (key, val) in [((unit[range[g]], g), g), ((g, unit[source[g]]), g)] {
                if prod.insert(key, val).is_some_and(|old| old != val) {
                    return Err(GroupoidError::ConflictingProduct(arrows[key.0].clone(), arrows[key.1].clone()));
                }
            }
        }
        let n = arrows.len();
        for a in 0..n {
            for b in 0..n {
                if source[a] == range[b] && !prod.contains_key(&(a, b)) {
                    return Err(GroupoidError::MissingProduct(arrows[a].clone(), arrows[b].clone()));
                }
            }
        }
        for a in 0..n {
            for b in (0..n).filter(|&b| source[a] == range[b]) {
                for c in (0..n).filter(|&c| source[b] == range[c]) {
                    if prod[&(prod[&(a, b)], c)] != prod[&(a, prod[&(b, c)])] {
                        return Err(GroupoidError::NotAssociative(arrows[a].clone(), arrows[b].clone(), arrows[c].clone()));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n).find(|&b| {
                source[b] == range[a]
                    && range[b] == source[a]
                    && prod[&(a, b)] == unit[range[a]]
                    && prod[&(b, a)] == unit[source[a]]
            });
            inverse.push(inv.ok_or_else(|| GroupoidError::NoInverse(arrows[a].clone()))?);
        }
        Ok(Self {
            objects,
            arrows,
            source,
            range,
            unit,
            inverse,
            prod,
        })
    }

    pub fn to_doc(&self) -> GroupoidDoc {
        let mut products: Vec<[String; 3]> = Vec::new();
        for a in 0..self.len() {
            for b in 0..self.len() {
                if let Some(c) = self.compose(a, b) {
                    if self.is_unit(a) || self.is_unit(b) {
                        continue;
                    }
                    products.push([self.arrows[a].clone(), self.arrows[b].clone(), self.arrows[c].clone()]);
                }
            }
        }
        GroupoidDoc {
            objects: self.objects.clone(),
            arrows: (0..self.len())
                .map(|g| ArrowDoc {
                    name: self.arrows[g].clone(),
                    source: self.objects[self.source[g]].clone(),
                    range: self.objects[self.range[g]].clone(),
                })
                .collect(),
            products,
        }
    }

    /// The group with elements `g0..g{n-1}` and product `mul` on one object
    /// `g0` (so `g0` must be the identity of `mul`).
    pub fn group(n: usize, mul: impl Fn(usize, usize) -> usize) -> Result<Self, GroupoidError> {
        let name = |i: usize| format!("g{i}");
        let doc = GroupoidDoc {
            objects: vec![name(0)],
            arrows: (0..n)
                .map(|i| ArrowDoc {
                    name: name(i),
                    source: name(0),
                    range: name(0),
                })
                .collect(),
            products: (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| [name(a), name(b), name(mul(a, b))])
                .collect(),
        };
        Self::from_doc(&doc)
    }

    pub fn cyclic(n: usize) -> Self {
        Self::group(n, |a, b| (a + b) % n).expect("cyclic groups are groups")
    }

    /// The pair groupoid (full equivalence relation) on objects `o0..`;
    /// arrow `(i,j)` goes from `j` to `i` and units are named like objects.
    pub fn pair(n: usize) -> Self {
        let obj = |i: usize| format!("o{i}");
        let arrow = |i: usize, j: usize| if i == j { obj(i) } else { format!("({i},{j})") };
        let mut arrows = Vec::new();
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                arrows.push(ArrowDoc {
                    name: arrow(i, j),
                    source: obj(j),
                    range: obj(i),
                });
                for k in 0..n {
                    products.push([arrow(i, j), arrow(j, k), arrow(i, k)]);
                }
            }
        }
        Self::from_doc(&GroupoidDoc {
            objects: (0..n).map(obj).collect(),
            arrows,
            products,
        })
        .expect("pair groupoids are groupoids")
    }

    /// Disjoint union; names of the second summand get `suffix` appended.
    pub fn disjoint_union(&self, other: &FiniteGroupoid, suffix: &str) -> Result<Self, GroupoidError> {
        let mut doc = self.to_doc();
        let rename = |s: &String| format!("{s}{suffix}");
        let od = other.to_doc();
        doc.objects.extend(od.objects.iter().map(rename));
        doc.arrows.extend(od.arrows.iter().map(|a| ArrowDoc {
            name: rename(&a.name),
            source: rename(&a.source),
            range: rename(&a.range),
        }));
        doc.products.extend(od.products.iter().map(|p| [rename(&p[0]), rename(&p[1]), rename(&p[2])]));
        Self::from_doc(&doc)
    }

    /// Cartesian product; arrow `(a,b)` is named `a×b`, and a pair of units
    /// is named after the product object `x×y`.
    pub fn product(&self, other: &FiniteGroupoid) -> Result<Self, GroupoidError> {
        let pname = |a: &str, b: &str| format!("{a}×{b}");
        let (n, m) = (self.len(), other.len());
        let mut doc = GroupoidDoc {
            objects: Vec::new(),
            arrows: Vec::new(),
            products: Vec::new(),
        };
        for x in &self.objects {
            for y in &other.objects {
                doc.objects.push(pname(x, y));
            }
        }
        for a in 0..n {
            for b in 0..m {
                doc.arrows.push(ArrowDoc {
                    name: pname(&self.arrows[a], &other.arrows[b]),
                    source: pname(&self.objects[self.source[a]], &other.objects[other.source[b]]),
                    range: pname(&self.objects[self.range[a]], &other.objects[other.range[b]]),
                });
            }
        }
        for ((a1, a2), a) in &self.prod {
            for ((b1, b2), b) in &other.prod {
                doc.products.push([
                    pname(&self.arrows[*a1], &other.arrows[*b1]),
                    pname(&self.arrows[*a2], &other.arrows[*b2]),
                    pname(&self.arrows[*a], &other.arrows[*b]),
                ]);
            }
        }
        doc.products.sort();
        Self::from_doc(&doc)
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow_names(&self) -> &[String] {
        &self.arrows
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a == name)
    }

    pub fn source(&self, g: usize) -> usize {
        self.source[g]
    }

    pub fn range(&self, g: usize) -> usize {
        self.range[g]
    }

    pub fn unit(&self, object: usize) -> usize {
        self.unit[object]
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.unit[self.source[g]] == g
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn compose(&self, a: usize, b: usize) -> Option<usize> {
        self.prod.get(&(a, b)).copied()
    }

    /// Composable pairs `(a, b, ab)`, ordered by `a` then `b`.
    pub fn composable(&self) -> Vec<(usize, usize, usize)> {
        let mut v: Vec<_> = self.prod.iter().map(|(&(a, b), &c)| (a, b, c)).collect();
        v.sort_unstable();
        v
    }

    pub fn is_bissection(&self, set: &BTreeSet<usize>) -> bool {
        is_bissection(set, |g| self.source[g], |g| self.range[g])
    }

    /// `UV = {ab : a∈U, b∈V composable}`.
    pub fn set_product(&self, u: &BTreeSet<usize>, v: &BTreeSet<usize>) -> BTreeSet<usize> {
        u.iter()
            .flat_map(|&a| v.iter().filter_map(move |&b| self.compose(a, b)))
            .collect()
    }

    pub fn set_inverse(&self, u: &BTreeSet<usize>) -> BTreeSet<usize> {
        u.iter().map(|&g| self.inverse[g]).collect()
    }
}

/// A normalized `T`-valued 2-cocycle on composable pairs; missing pairs
/// are `1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroupoidCocycle {
    values: HashMap<(usize, usize), C64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("cocycle value at ({0},{1}) is not unimodular")]
    NotUnimodular(String, String),
    #[error("cocycle is not 1 at ({0},{1}), which involves a unit")]
    NotNormalized(String, String),
    #[error("cocycle is given on the non-composable pair ({0},{1})")]
    NotComposable(String, String),
    #[error("cocycle identity fails at ({0},{1},{2})")]
    NotCocycle(String, String, String),
}

impl GroupoidCocycle {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn from_fn(g: &FiniteGroupoid, f: impl Fn(usize, usize) -> C64) -> Self {
        Self {
            values: g.composable().into_iter().map(|(a, b, _)| ((a, b), f(a, b))).collect(),
        }
    }

    /// `(∂c)(a,b) = c(a)c(b)/c(ab)`.
    pub fn coboundary(g: &FiniteGroupoid, c: impl Fn(usize) -> C64) -> Self {
        Self::from_fn(g, |a, b| c(a) * c(b) / c(g.compose(a, b).expect("composable")))
    }

    pub fn set(&mut self, a: usize, b: usize, v: C64) {
        self.values.insert((a, b), v);
    }

    pub fn get(&self, a: usize, b: usize) -> C64 {
        self.values.get(&(a, b)).copied().unwrap_or(ONE)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), C64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn validate(&self, g: &FiniteGroupoid, tol: f64) -> Result<(), CocycleError> {
        let name = |a: usize| g.arrow_names()[a].clone();
        for (&(a, b), v) in &self.values {
            if g.compose(a, b).is_none() {
                return Err(CocycleError::NotComposable(name(a), name(b)));
            }
            if (v.norm() - 1.0).abs() > tol {
                return Err(CocycleError::NotUnimodular(name(a), name(b)));
            }
            if (g.is_unit(a) || g.is_unit(b)) && (v - ONE).norm() > tol {
                return Err(CocycleError::NotNormalized(name(a), name(b)));
            }
        }
        for (a, b, ab) in g.composable() {
            for c in (0..g.len()).filter(|&c| g.range(c) == g.source(b)) {
                let bc = g.compose(b, c).expect("composable");
                let lhs = self.get(a, b) * self.get(ab, c);
                let rhs = self.get(b, c) * self.get(a, bc);
                if (lhs - rhs).norm() > tol {
                    return Err(CocycleError::NotCocycle(name(a), name(b), name(c)));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn is_bissection(set: &BTreeSet<usize>, source: impl Fn(usize) -> usize, range: impl Fn(usize) -> usize) -> bool {
    let srcs: BTreeSet<usize> = set.iter().map(|&g| source(g)).collect();
    let rngs: BTreeSet<usize> = set.iter().map(|&g| range(g)).collect();
    srcs.len() == set.len() && rngs.len() == set.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WideFailure {
    /// Member `member` contains two arrows with the same source or range.
    NotABissection { member: usize, arrows: (usize, usize) },
    /// No member contains `arrow`.
    NotCovered { arrow: usize },
    /// `arrow ∈ U∩V` but no member `W` has `arrow ∈ W ⊆ U∩V`.
    NoInterpolation { u: usize, v: usize, arrow: usize },
}

/// Covering and interpolation for a family of arrow sets. Arrows are visited
/// in `order`, so the first reported witness is the earliest in that order.
pub fn check_wide(
    family: &[BTreeSet<usize>],
    order: &[usize],
    source: impl Fn(usize) -> usize,
    range: impl Fn(usize) -> usize,
) -> Result<(), WideFailure> {
    for (m, set) in family.iter().enumerate() {
        let v: Vec<usize> = set.iter().copied().collect();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if source(v[i]) == source(v[j]) || range(v[i]) == range(v[j]) {
                    return Err(WideFailure::NotABissection {
                        member: m,
                        arrows: (v[i], v[j]),
                    });
                }
            }
        }
    }
    for &g in order {
        if !family.iter().any(|s| s.contains(&g)) {
            return Err(WideFailure::NotCovered { arrow: g });
        }
    }
    for (u, su) in family.iter().enumerate() {
        for (v, sv) in family.iter().enumerate().skip(u + 1) {
            let meet: BTreeSet<usize> = su & sv;
            for &g in order.iter().filter(|g| meet.contains(g)) {
                if !family.iter().any(|w| w.contains(&g) && w.is_subset(&meet)) {
                    return Err(WideFailure::NoInterpolation { u, v, arrow: g });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::circle;

    fn klein() -> FiniteGroupoid {
        FiniteGroupoid::group(4, |a, b| a ^ b).unwrap()
    }

    #[test]
    fn pair_groupoid_tables() {
        let g = FiniteGroupoid::pair(2);
        assert_eq!(g.len(), 4);
        let a = g.arrow_index("(0,1)").unwrap();
        let b = g.arrow_index("(1,0)").unwrap();
        assert_eq!(g.compose(a, b), Some(g.unit(0)));
        assert_eq!(g.inverse(a), b);
        assert_eq!(g.compose(a, a), None);
        assert_eq!(FiniteGroupoid::from_doc(&g.to_doc()).unwrap().composable(), g.composable());
    }

    #[test]
    fn rejects_broken_tables() {
        let mut doc = FiniteGroupoid::cyclic(3).to_doc();
        doc.products.retain(|p| !(p[0] == "g1" && p[1] == "g1"));
        assert_eq!(FiniteGroupoid::from_doc(&doc), Err(GroupoidError::MissingProduct("g1".into(), "g1".into())));
        let mut doc = FiniteGroupoid::cyclic(3).to_doc();
        for p in doc.products.iter_mut() {
            if p[0] == "g1" && p[1] == "g1" {
                p[2] = "g1".into();
            }
        }
        assert!(FiniteGroupoid::from_doc(&doc).is_err());
        let mut doc = FiniteGroupoid::cyclic(2).to_doc();
        doc.objects = vec!["x".into()];
        assert!(matches!(FiniteGroupoid::from_doc(&doc), Err(GroupoidError::Unknown(_))));
    }

    #[test]
    fn products_and_unions() {
        let g = FiniteGroupoid::cyclic(2).product(&FiniteGroupoid::pair(2)).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.objects().len(), 2);
        let u = FiniteGroupoid::cyclic(2).disjoint_union(&FiniteGroupoid::pair(1), "'").unwrap();
        assert_eq!(u.len(), 3);
        assert_eq!(u.objects(), &["g0".to_string(), "o0'".to_string()]);
    }

    #[test]
    fn klein_bicharacter_is_a_cocycle() {
        let g = klein();
        let sigma = GroupoidCocycle::from_fn(&g, |a, b| if (a & 1) * ((b >> 1) & 1) == 1 { -ONE } else { ONE });
        sigma.validate(&g, 1e-12).unwrap();
        let mut bad = sigma.clone();
        bad.set(1, 1, circle(0.25));
        assert!(matches!(bad.validate(&g, 1e-12), Err(CocycleError::NotCocycle(..))));
        let mut bad = sigma;
        bad.set(0, 1, -ONE);
        assert!(matches!(bad.validate(&g, 1e-12), Err(CocycleError::NotNormalized(..))));
    }

    #[test]
    fn coboundaries_are_cocycles() {
        let g = FiniteGroupoid::pair(3);
        let c = GroupoidCocycle::coboundary(&g, |a| if g.is_unit(a) { ONE } else { circle(a as f64 / 7.0) });
        c.validate(&g, 1e-12).unwrap();
    }

    #[test]
    fn singletons_are_wide_and_missing_arrows_are_not() {
        let g = FiniteGroupoid::pair(2);
        let order: Vec<usize> = (0..g.len()).collect();
        let singles: Vec<BTreeSet<usize>> = order.iter().map(|&a| [a].into()).collect();
        assert!(check_wide(&singles, &order, |a| g.source(a), |a| g.range(a)).is_ok());
        let partial = &singles[1..];
        assert_eq!(
            check_wide(partial, &order, |a| g.source(a), |a| g.range(a)),
            Err(WideFailure::NotCovered { arrow: 0 })
        );
        let fat: Vec<BTreeSet<usize>> = vec![[0, 1].into()];
        assert!(matches!(
            check_wide(&fat, &order, |a| g.source(a), |a| g.range(a)),
            Err(WideFailure::NotABissection { .. })
        ));
    }

    #[test]
    fn interpolation_failure() {
        let g = FiniteGroupoid::pair(3);
        let (u0, u1) = (g.unit(0), g.unit(1));
        let a = g.arrow_index("(2,1)").unwrap();
        let order = vec![u0, u1, a];
        let mut family: Vec<BTreeSet<usize>> = vec![[u0, u1].into(), [u0, a].into()];
        assert_eq!(
            check_wide(&family, &order, |a| g.source(a), |a| g.range(a)),
            Err(WideFailure::NoInterpolation { u: 0, v: 1, arrow: u0 })
        );
        family.push([u0].into());
        assert!(check_wide(&family, &order, |a| g.source(a), |a| g.range(a)).is_ok());
    }
}
