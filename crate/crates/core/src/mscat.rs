//! Finite limits and co-limits of finite multisets.
//!
//! Underlying sets follow the usual constructions in finite sets; the
//! denominator of a limit point is the join of its component denominators,
//! and the denominator of a co-limit point is the meet over everything that
//! maps onto it. Pullbacks and pushouts are derived from (co)products and
//! (co)equalizers so there is a single code path for each formula.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::multiset::{enumerate_homs, ArrowClass, FiniteMultiset, MultisetArrow, MultisetError};
use crate::supernat::SupernaturalNumber;

pub const DEFAULT_PRODUCT_BUDGET: u128 = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MsCatError {
    #[error("arrows do not share the required boundary")]
    BoundaryMismatch,
    #[error("BUDGET_EXCEEDED: construction needs {required} points, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("kernel sets {i} and {j} both contain point {point:?}")]
    KernelsOverlap { point: String, i: usize, j: usize },
    #[error("kernel set {index} contains {point:?} outside its zone")]
    KernelOutsideZone { point: String, index: usize },
    #[error("point {point:?} is not covered by any zone")]
    Uncovered { point: String },
    #[error("kernel/zone lists must have equal length")]
    MismatchedPartitionData,
    #[error("extension requires a regular monic arrow")]
    NotRegularMonic,
    #[error("the two arrows must share their domain")]
    DomainMismatch,
    #[error("extension target has a point {0:?} with infinite denominator")]
    TargetNotFinite(String),
    #[error("extension target has no point of denominator 1")]
    TargetNoUnitPoint,
    #[error("INTERNAL: {0}")]
    Internal(String),
    #[error(transparent)]
    Multiset(#[from] MultisetError),
}

/// A product together with its projection arrows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Product {
    pub object: FiniteMultiset,
    pub projections: Vec<MultisetArrow>,
}

/// A coproduct together with its injection arrows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coproduct {
    pub object: FiniteMultiset,
    pub injections: Vec<MultisetArrow>,
}

/// An equalizer of a parallel pair, with its inclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equalizer {
    pub object: FiniteMultiset,
    pub inclusion: MultisetArrow,
    pub parallel: (MultisetArrow, MultisetArrow),
}

/// A coequalizer of a parallel pair, with its quotient arrow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coequalizer {
    pub object: FiniteMultiset,
    pub quotient: MultisetArrow,
    pub parallel: (MultisetArrow, MultisetArrow),
}

/// A span or cospan produced by pullback/pushout style constructions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrowPair {
    pub object: FiniteMultiset,
    pub first: MultisetArrow,
    pub second: MultisetArrow,
}

fn tuple_id(parts: &[&str]) -> String {
    format!("({})", parts.join(","))
}

fn tagged_id(index: usize, id: &str) -> String {
    format!("{index}:{id}")
}

/// Cartesian product with the join of component denominators at each tuple.
/// The empty product is the one-point terminal object of denominator 1.
pub fn product(factors: &[FiniteMultiset]) -> Result<Product, MsCatError> {
    product_with_budget(factors, DEFAULT_PRODUCT_BUDGET)
}

pub fn product_with_budget(
    factors: &[FiniteMultiset],
    budget: u128,
) -> Result<Product, MsCatError> {
    let required: u128 = factors.iter().map(|x| x.len() as u128).product();
    if required > budget {
        return Err(MsCatError::BudgetExceeded { required, budget });
    }
    let ids: Vec<Vec<&str>> = factors.iter().map(|x| x.point_ids().collect()).collect();
    let mut points = Vec::new();
    let mut proj_maps: Vec<BTreeMap<String, String>> = vec![BTreeMap::new(); factors.len()];
    for combo in cartesian_indices(&ids.iter().map(Vec::len).collect::<Vec<_>>()) {
        let parts: Vec<&str> = combo.iter().zip(&ids).map(|(&c, row)| row[c]).collect();
        let id = tuple_id(&parts);
        let denoms: Vec<SupernaturalNumber> = parts
            .iter()
            .zip(factors)
            .map(|(p, x)| x.denominator(p).expect("component id").clone())
            .collect();
        points.push((id.clone(), SupernaturalNumber::join(&denoms)));
        for (i, part) in parts.iter().enumerate() {
            proj_maps[i].insert(id.clone(), part.to_string());
        }
    }
    let object = FiniteMultiset::new(points)?;
    let projections = proj_maps
        .into_iter()
        .zip(factors)
        .map(|(map, x)| MultisetArrow::check(object.clone(), x.clone(), map))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Product {
        object,
        projections,
    })
}

/// Disjoint union with tagged point ids; denominators are unchanged.
/// The empty coproduct is the empty (initial) multiset.
pub fn coproduct(summands: &[FiniteMultiset]) -> Result<Coproduct, MsCatError> {
    let mut points = Vec::new();
    for (i, x) in summands.iter().enumerate() {
        for (id, d) in x.points() {
            points.push((tagged_id(i, id), d.clone()));
        }
    }
    let object = FiniteMultiset::new(points)?;
    let injections = summands
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let map = x
                .point_ids()
                .map(|id| (id.to_string(), tagged_id(i, id)))
                .collect();
            MultisetArrow::check(x.clone(), object.clone(), map)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Coproduct { object, injections })
}

/// The sub-multiset where the parallel pair agrees, with its inclusion;
/// the inclusion is always regular monic.
pub fn equalizer(f: &MultisetArrow, g: &MultisetArrow) -> Result<Equalizer, MsCatError> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(MsCatError::BoundaryMismatch);
    }
    let keep: BTreeSet<String> = f
        .dom()
        .point_ids()
        .filter(|x| f.apply(x).unwrap() == g.apply(x).unwrap())
        .map(str::to_string)
        .collect();
    let object = f.dom().restrict(&keep);
    let map = object
        .point_ids()
        .map(|id| (id.to_string(), id.to_string()))
        .collect();
    let inclusion = MultisetArrow::check(object.clone(), f.dom().clone(), map)?;
    Ok(Equalizer {
        object,
        inclusion,
        parallel: (f.clone(), g.clone()),
    })
}

/// Quotient of the codomain by the equivalence relation generated by
/// `f(x) ~ g(x)`. Each class is named by its least member and carries the
/// meet of its members' denominators; the quotient arrow is regular epic.
pub fn coequalizer(f: &MultisetArrow, g: &MultisetArrow) -> Result<Coequalizer, MsCatError> {
    if f.dom() != g.dom() || f.cod() != g.cod() {
        return Err(MsCatError::BoundaryMismatch);
    }
    let cod = f.cod();
    let ids: Vec<&str> = cod.point_ids().collect();
    let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut uf = UnionFind::new(ids.len());
    for x in f.dom().point_ids() {
        uf.union(index[f.apply(x).unwrap()], index[g.apply(x).unwrap()]);
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..ids.len() {
        classes.entry(uf.find(i)).or_default().push(i);
    }
    let mut rep_of = vec![0usize; ids.len()];
    let mut points = Vec::new();
    for members in classes.values() {
        // least member id is the canonical representative
        let rep = *members
            .iter()
            .min_by_key(|&&i| ids[i])
            .expect("non-empty class");
        let denoms: Vec<SupernaturalNumber> = members
            .iter()
            .map(|&i| cod.denominator(ids[i]).unwrap().clone())
            .collect();
        let meet = SupernaturalNumber::meet(&denoms).expect("non-empty class");
        points.push((ids[rep].to_string(), meet));
        for &i in members {
            rep_of[i] = rep;
        }
    }
    let object = FiniteMultiset::new(points)?;
    let map = ids
        .iter()
        .enumerate()
        .map(|(i, &id)| (id.to_string(), ids[rep_of[i]].to_string()))
        .collect();
    let quotient = MultisetArrow::check(cod.clone(), object.clone(), map)?;
    Ok(Coequalizer {
        object,
        quotient,
        parallel: (f.clone(), g.clone()),
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
        }
    }
}

/// Pullback of `f : A → C`, `g : B → C` as the equalizer inside `A × B`.
pub fn pullback(f: &MultisetArrow, g: &MultisetArrow) -> Result<ArrowPair, MsCatError> {
    if f.cod() != g.cod() {
        return Err(MsCatError::BoundaryMismatch);
    }
    let prod = product(&[f.dom().clone(), g.dom().clone()])?;
    let fa = MultisetArrow::compose(f, &prod.projections[0])?;
    let gb = MultisetArrow::compose(g, &prod.projections[1])?;
    let eq = equalizer(&fa, &gb)?;
    Ok(ArrowPair {
        object: eq.object.clone(),
        first: MultisetArrow::compose(&prod.projections[0], &eq.inclusion)?,
        second: MultisetArrow::compose(&prod.projections[1], &eq.inclusion)?,
    })
}

/// Pushout of `f : C → A`, `g : C → B` as the coequalizer of the two
/// composites into `A + B`.
pub fn pushout(f: &MultisetArrow, g: &MultisetArrow) -> Result<ArrowPair, MsCatError> {
    if f.dom() != g.dom() {
        return Err(MsCatError::BoundaryMismatch);
    }
    let coprod = coproduct(&[f.cod().clone(), g.cod().clone()])?;
    let fa = MultisetArrow::compose(&coprod.injections[0], f)?;
    let gb = MultisetArrow::compose(&coprod.injections[1], g)?;
    let coeq = coequalizer(&fa, &gb)?;
    Ok(ArrowPair {
        object: coeq.object.clone(),
        first: MultisetArrow::compose(&coeq.quotient, &coprod.injections[0])?,
        second: MultisetArrow::compose(&coeq.quotient, &coprod.injections[1])?,
    })
}

/// Kernel pair of `f`: the pullback of `f` along itself, i.e. all pairs with
/// equal image, each carrying the join of its two denominators.
pub fn kernel_pair(f: &MultisetArrow) -> Result<ArrowPair, MsCatError> {
    pullback(f, f)
}

/// Cokernel pair of `m`: the pushout of `m` along itself.
pub fn cokernel_pair(m: &MultisetArrow) -> Result<ArrowPair, MsCatError> {
    pushout(m, m)
}

/// One of the four elementary constructions, packaged with its diagram so a
/// universal-property check can enumerate (co)cones against it.
#[derive(Debug, Clone, Serialize)]
pub enum Construction {
    Product(Product),
    Coproduct(Coproduct),
    Equalizer(Equalizer),
    Coequalizer(Coequalizer),
}

#[derive(Debug, Clone, Serialize)]
pub struct UpReport {
    pub pass: bool,
    pub cones_checked: u64,
    pub witness: Option<String>,
}

/// Checks existence and uniqueness of the mediating arrow for every
/// (co)cone over the construction's diagram whose apex is a probe.
pub fn universal_property_check(c: &Construction, probes: &[FiniteMultiset]) -> UpReport {
    let mut cones_checked = 0;
    let mut witness: Option<String> = None;
    let fail = |w: String, witness: &mut Option<String>| {
        if witness.is_none() {
            *witness = Some(w);
        }
    };
    match c {
        Construction::Product(prod) => {
            let factors: Vec<&FiniteMultiset> = prod.projections.iter().map(|p| p.cod()).collect();
            for probe in probes {
                let legs: Vec<Vec<MultisetArrow>> =
                    factors.iter().map(|x| enumerate_homs(probe, x)).collect();
                let mediators = enumerate_homs(probe, &prod.object);
                for combo in cartesian_indices(&legs.iter().map(Vec::len).collect::<Vec<_>>()) {
                    cones_checked += 1;
                    let cone: Vec<&MultisetArrow> =
                        combo.iter().zip(&legs).map(|(&c, row)| &row[c]).collect();
                    let found = mediators
                        .iter()
                        .filter(|m| {
                            prod.projections.iter().zip(&cone).all(|(p, leg)| {
                                MultisetArrow::compose(p, m).ok().as_ref() == Some(*leg)
                            })
                        })
                        .count();
                    if found != 1 {
                        fail(
                            format!("product cone from {probe} has {found} mediators"),
                            &mut witness,
                        );
                    }
                }
            }
        }
        Construction::Coproduct(cop) => {
            let summands: Vec<&FiniteMultiset> = cop.injections.iter().map(|p| p.dom()).collect();
            for probe in probes {
                let legs: Vec<Vec<MultisetArrow>> =
                    summands.iter().map(|x| enumerate_homs(x, probe)).collect();
                let mediators = enumerate_homs(&cop.object, probe);
                for combo in cartesian_indices(&legs.iter().map(Vec::len).collect::<Vec<_>>()) {
                    cones_checked += 1;
                    let cocone: Vec<&MultisetArrow> =
                        combo.iter().zip(&legs).map(|(&c, row)| &row[c]).collect();
                    let found = mediators
                        .iter()
                        .filter(|m| {
                            cop.injections.iter().zip(&cocone).all(|(inj, leg)| {
                                MultisetArrow::compose(m, inj).ok().as_ref() == Some(*leg)
                            })
                        })
                        .count();
                    if found != 1 {
                        fail(
                            format!("coproduct cocone into {probe} has {found} mediators"),
                            &mut witness,
                        );
                    }
                }
            }
        }
        Construction::Equalizer(eq) => {
            let (f, g) = &eq.parallel;
            for probe in probes {
                for h in enumerate_homs(probe, f.dom()) {
                    let fh = MultisetArrow::compose(f, &h).expect("boundaries fit");
                    let gh = MultisetArrow::compose(g, &h).expect("boundaries fit");
                    if fh != gh {
                        continue;
                    }
                    cones_checked += 1;
                    let found = enumerate_homs(probe, &eq.object)
                        .into_iter()
                        .filter(|m| {
                            MultisetArrow::compose(&eq.inclusion, m).ok().as_ref() == Some(&h)
                        })
                        .count();
                    if found != 1 {
                        fail(
                            format!("equalizing cone from {probe} has {found} mediators"),
                            &mut witness,
                        );
                    }
                }
            }
        }
        Construction::Coequalizer(coeq) => {
            let (f, g) = &coeq.parallel;
            for probe in probes {
                for h in enumerate_homs(f.cod(), probe) {
                    let hf = MultisetArrow::compose(&h, f).expect("boundaries fit");
                    let hg = MultisetArrow::compose(&h, g).expect("boundaries fit");
                    if hf != hg {
                        continue;
                    }
                    cones_checked += 1;
                    let found = enumerate_homs(&coeq.object, probe)
                        .into_iter()
                        .filter(|m| {
                            MultisetArrow::compose(m, &coeq.quotient).ok().as_ref() == Some(&h)
                        })
                        .count();
                    if found != 1 {
                        fail(
                            format!("coequalizing cocone into {probe} has {found} mediators"),
                            &mut witness,
                        );
                    }
                }
            }
        }
    }
    UpReport {
        pass: witness.is_none(),
        cones_checked,
        witness,
    }
}

fn cartesian_indices(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if sizes.contains(&0) {
        return out;
    }
    let mut counters = vec![0usize; sizes.len()];
    loop {
        out.push(counters.clone());
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            counters[i] += 1;
            if counters[i] < sizes[i] {
                break;
            }
            counters[i] = 0;
        }
    }
}

/// Assigns every point an index `i` so that `K_i ⊆ C_i ⊆ Z_i`, where `C_i`
/// is the preimage of `i`. Points inside some kernel take that kernel's
/// index; the rest take the least index whose zone contains them.
pub fn partition_assign(
    points: &[String],
    kernels: &[Vec<String>],
    zones: &[Vec<String>],
) -> Result<BTreeMap<String, usize>, MsCatError> {
    if kernels.len() != zones.len() {
        return Err(MsCatError::MismatchedPartitionData);
    }
    let point_set: BTreeSet<&str> = points.iter().map(String::as_str).collect();
    for group in kernels.iter().chain(zones.iter()) {
        for p in group {
            if !point_set.contains(p.as_str()) {
                return Err(MultisetError::UnknownPoint(p.clone()).into());
            }
        }
    }
    let kernel_sets: Vec<BTreeSet<&str>> = kernels
        .iter()
        .map(|k| k.iter().map(String::as_str).collect())
        .collect();
    let zone_sets: Vec<BTreeSet<&str>> = zones
        .iter()
        .map(|z| z.iter().map(String::as_str).collect())
        .collect();
    for i in 0..kernel_sets.len() {
        for j in (i + 1)..kernel_sets.len() {
            if let Some(p) = kernel_sets[i].intersection(&kernel_sets[j]).next() {
                return Err(MsCatError::KernelsOverlap {
                    point: p.to_string(),
                    i,
                    j,
                });
            }
        }
        if let Some(p) = kernel_sets[i].difference(&zone_sets[i]).next() {
            return Err(MsCatError::KernelOutsideZone {
                point: p.to_string(),
                index: i,
            });
        }
    }
    let mut assignment = BTreeMap::new();
    for p in points {
        let idx = kernel_sets
            .iter()
            .position(|k| k.contains(p.as_str()))
            .or_else(|| zone_sets.iter().position(|z| z.contains(p.as_str())))
            .ok_or_else(|| MsCatError::Uncovered { point: p.clone() })?;
        assignment.insert(p.clone(), idx);
    }
    Ok(assignment)
}

/// Extends `f : B → X` along a regular mono `g : B → A` to an arrow
/// `h : A → X` with `h ∘ g = f`.
///
/// Requires every denominator of `X` to be finite and `X` to contain a
/// point of denominator 1. With `x_0` that point and `x_1, …, x_n` the
/// remaining points of `X` (denominators `d_i`), the kernel sets are
/// `K_i = g[f⁻¹[{x_i}]]` and the zones are `Z_i = {z ∈ A | ζ_A(z) ≥ d_i}`
/// (`Z_0 = A`); the clopen partition between them defines `h`.
pub fn extend_along_regular_mono(
    g: &MultisetArrow,
    f: &MultisetArrow,
) -> Result<MultisetArrow, MsCatError> {
    if !g.classify().regular_monic {
        return Err(MsCatError::NotRegularMonic);
    }
    if g.dom() != f.dom() {
        return Err(MsCatError::DomainMismatch);
    }
    let target = f.cod();
    for (id, d) in target.points() {
        if !d.is_finite() {
            return Err(MsCatError::TargetNotFinite(id.to_string()));
        }
    }
    let unit = target
        .unit_point()
        .ok_or(MsCatError::TargetNoUnitPoint)?
        .to_string();
    let mut targets: Vec<&str> = vec![&unit];
    targets.extend(target.point_ids().filter(|id| *id != unit));

    let ambient = g.cod();
    let ambient_points: Vec<String> = ambient.point_ids().map(str::to_string).collect();
    let mut kernels = Vec::with_capacity(targets.len());
    let mut zones = Vec::with_capacity(targets.len());
    for &x_i in &targets {
        let kernel: Vec<String> = g
            .dom()
            .point_ids()
            .filter(|b| f.apply(b).unwrap() == x_i)
            .map(|b| g.apply(b).unwrap().to_string())
            .collect();
        let d_i = target.denominator(x_i).unwrap();
        let zone: Vec<String> = ambient
            .points()
            .filter(|(_, dz)| d_i.leq(dz))
            .map(|(z, _)| z.to_string())
            .collect();
        kernels.push(kernel);
        zones.push(zone);
    }
    let assignment = partition_assign(&ambient_points, &kernels, &zones)
        .map_err(|e| MsCatError::Internal(format!("partition preconditions failed: {e}")))?;
    let map: BTreeMap<String, String> = assignment
        .into_iter()
        .map(|(a, i)| (a, targets[i].to_string()))
        .collect();
    let h = MultisetArrow::check(ambient.clone(), target.clone(), map)
        .map_err(|e| MsCatError::Internal(format!("extension does not decrease: {e}")))?;
    let back = MultisetArrow::compose(&h, g)?;
    if back != *f {
        return Err(MsCatError::Internal(
            "extension does not restrict to the given arrow".to_string(),
        ));
    }
    Ok(h)
}

/// Facts about the canonical arrow from `X` into the product over all pairs
/// `(G ∈ family, t ∈ Hom(X, G))`, computed without materializing the
/// product: the denominator of the image of `x` is the join of
/// `ζ_G(t(x))` over all pairs, and injectivity asks for a separating pair.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalArrowAnalysis {
    pub monic: bool,
    pub preserves_denominators: bool,
    pub product_points: u128,
    pub hom_counts: Vec<u64>,
    pub witness: Option<CanonicalWitness>,
}

/// A point where denominator preservation fails, with both values.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalWitness {
    pub point: String,
    pub expected: SupernaturalNumber,
    pub achieved: SupernaturalNumber,
}

pub fn canonical_arrow_analysis(
    x: &FiniteMultiset,
    family: &[FiniteMultiset],
) -> CanonicalArrowAnalysis {
    let homs: Vec<Vec<MultisetArrow>> = family.iter().map(|g| enumerate_homs(x, g)).collect();
    let mut product_points: u128 = 1;
    for (g, hs) in family.iter().zip(&homs) {
        for _ in hs {
            product_points = product_points.saturating_mul(g.len() as u128);
        }
    }
    let mut preserves = true;
    let mut witness = None;
    for (px, dx) in x.points() {
        let images: Vec<SupernaturalNumber> = homs
            .iter()
            .zip(family)
            .flat_map(|(hs, g)| {
                hs.iter()
                    .map(|t| g.denominator(t.apply(px).unwrap()).unwrap().clone())
            })
            .collect();
        let achieved = SupernaturalNumber::join(&images);
        if achieved != *dx {
            preserves = false;
            if witness.is_none() {
                witness = Some(CanonicalWitness {
                    point: px.to_string(),
                    expected: dx.clone(),
                    achieved,
                });
            }
        }
    }
    let ids: Vec<&str> = x.point_ids().collect();
    let mut monic = true;
    'pairs: for i in 0..ids.len() {
        for j in (i + 1)..ids.len() {
            let separated = homs
                .iter()
                .flatten()
                .any(|t| t.apply(ids[i]).unwrap() != t.apply(ids[j]).unwrap());
            if !separated {
                monic = false;
                break 'pairs;
            }
        }
    }
    CanonicalArrowAnalysis {
        monic,
        preserves_denominators: preserves,
        product_points,
        hom_counts: homs.iter().map(|h| h.len() as u64).collect(),
        witness,
    }
}

/// The canonical arrow itself, materialized, together with its
/// classification and the symbolic analysis (which must agree with it).
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalArrow {
    pub arrow: MultisetArrow,
    pub class: ArrowClass,
    pub analysis: CanonicalArrowAnalysis,
}

pub fn canonical_arrow_to_family(
    x: &FiniteMultiset,
    family: &[FiniteMultiset],
    budget: u128,
) -> Result<CanonicalArrow, MsCatError> {
    let analysis = canonical_arrow_analysis(x, family);
    if analysis.product_points > budget {
        return Err(MsCatError::BudgetExceeded {
            required: analysis.product_points,
            budget,
        });
    }
    let mut factors = Vec::new();
    let mut legs = Vec::new();
    for g in family {
        for t in enumerate_homs(x, g) {
            factors.push(g.clone());
            legs.push(t);
        }
    }
    let prod = product_with_budget(&factors, budget)?;
    let map: BTreeMap<String, String> = x
        .point_ids()
        .map(|px| {
            let parts: Vec<&str> = legs.iter().map(|t| t.apply(px).unwrap()).collect();
            (px.to_string(), tuple_id(&parts))
        })
        .collect();
    let arrow = MultisetArrow::check(x.clone(), prod.object.clone(), map)?;
    let class = arrow.classify();
    if class.monic != analysis.monic
        || arrow.preserves_denominators() != analysis.preserves_denominators
    {
        return Err(MsCatError::Internal(
            "canonical arrow analysis disagrees with the materialized arrow".to_string(),
        ));
    }
    Ok(CanonicalArrow {
        arrow,
        class,
        analysis,
    })
}

/// Coordinates of the product on which `h` actually depends: coordinate `i`
/// is listed iff some two product points differing only at `i` have
/// different images.
pub fn coordinate_dependency(prod: &Product, h: &MultisetArrow) -> Result<Vec<usize>, MsCatError> {
    if h.dom() != &prod.object {
        return Err(MsCatError::BoundaryMismatch);
    }
    let ids: Vec<&str> = prod.object.point_ids().collect();
    let components: Vec<Vec<&str>> = ids
        .iter()
        .map(|id| {
            prod.projections
                .iter()
                .map(|p| p.apply(id).unwrap())
                .collect()
        })
        .collect();
    let mut deps = BTreeSet::new();
    for a in 0..ids.len() {
        for b in (a + 1)..ids.len() {
            let differing: Vec<usize> = (0..prod.projections.len())
                .filter(|&i| components[a][i] != components[b][i])
                .collect();
            if differing.len() == 1 && h.apply(ids[a]).unwrap() != h.apply(ids[b]).unwrap() {
                deps.insert(differing[0]);
            }
        }
    }
    Ok(deps.into_iter().collect())
}

/// True iff `h` factors through the listed coordinates: points agreeing on
/// them always share their image.
pub fn depends_only_on(
    prod: &Product,
    h: &MultisetArrow,
    coords: &[usize],
) -> Result<bool, MsCatError> {
    if h.dom() != &prod.object {
        return Err(MsCatError::BoundaryMismatch);
    }
    let ids: Vec<&str> = prod.object.point_ids().collect();
    let key = |id: &str| -> Vec<&str> {
        coords
            .iter()
            .map(|&i| prod.projections[i].apply(id).unwrap())
            .collect()
    };
    let mut seen: BTreeMap<Vec<&str>, &str> = BTreeMap::new();
    for id in &ids {
        let image = h.apply(id).unwrap();
        match seen.entry(key(id)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(image);
            }
            std::collections::btree_map::Entry::Occupied(o) => {
                if *o.get() != image {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(n: u64) -> SupernaturalNumber {
        SupernaturalNumber::from_natural(n).unwrap()
    }

    fn ms(denoms: &[(&str, u64)]) -> FiniteMultiset {
        FiniteMultiset::new(denoms.iter().map(|(id, n)| (id.to_string(), nu(*n)))).unwrap()
    }

    fn probe_set(divisor_of: u64) -> Vec<FiniteMultiset> {
        let mut out = vec![FiniteMultiset::empty()];
        let divisors: Vec<u64> = (1..=divisor_of)
            .filter(|d| divisor_of.is_multiple_of(*d))
            .collect();
        for &a in &divisors {
            out.push(ms(&[("p", a)]));
            for &b in &divisors {
                if b >= a {
                    out.push(ms(&[("p", a), ("q", b)]));
                }
            }
        }
        out
    }

    #[test]
    fn product_examples() {
        let two = FiniteMultiset::two();
        let p = product(&[two.clone(), two.clone()]).unwrap();
        assert_eq!(p.object.len(), 4);
        assert!(p.object.points().all(|(_, d)| *d == nu(1)));

        let p = product(&[
            FiniteMultiset::dn(2).unwrap(),
            FiniteMultiset::dn(3).unwrap(),
        ])
        .unwrap();
        assert_eq!(p.object.denominator("(1,1)").unwrap(), &nu(6));
        assert_eq!(p.object.denominator("(0,1)").unwrap(), &nu(3));

        let terminal = product(&[]).unwrap();
        assert_eq!(terminal.object.len(), 1);
        assert!(terminal.object.points().all(|(_, d)| *d == nu(1)));

        assert!(matches!(
            product_with_budget(&[two.clone(), two.clone()], 3),
            Err(MsCatError::BudgetExceeded {
                required: 4,
                budget: 3
            })
        ));
    }

    #[test]
    fn coproduct_examples() {
        let two = FiniteMultiset::two();
        let c = coproduct(&[two.clone(), two.clone()]).unwrap();
        assert_eq!(c.object.len(), 4);
        assert!(c.object.points().all(|(_, d)| *d == nu(1)));

        let d2 = FiniteMultiset::dn(2).unwrap();
        let c = coproduct(std::slice::from_ref(&d2)).unwrap();
        assert!(c.injections[0].classify().iso);

        assert!(coproduct(&[]).unwrap().object.is_empty());
    }

    #[test]
    fn equalizer_examples() {
        let two = FiniteMultiset::two();
        let homs = enumerate_homs(&two, &two);
        // image tuples in order: (0,0), (0,1), (1,0), (1,1)
        let const0 = &homs[0];
        let id = &homs[1];
        let swap = &homs[2];
        let const1 = &homs[3];

        let eq = equalizer(id, id).unwrap();
        assert_eq!(eq.object, two);
        assert!(eq.inclusion.classify().regular_monic);

        assert!(equalizer(const0, const1).unwrap().object.is_empty());
        assert!(equalizer(id, swap).unwrap().object.is_empty());

        let d2 = FiniteMultiset::dn(2).unwrap();
        let other = enumerate_homs(&d2, &two)[0].clone();
        assert_eq!(
            equalizer(id, &other).unwrap_err(),
            MsCatError::BoundaryMismatch
        );
    }

    #[test]
    fn coequalizer_examples() {
        let two = FiniteMultiset::two();
        let homs = enumerate_homs(&two, &two);
        let id = &homs[1];
        let swap = &homs[2];

        let c = coequalizer(id, id).unwrap();
        assert_eq!(c.object, two);
        assert!(c.quotient.classify().iso);

        let c = coequalizer(id, swap).unwrap();
        assert_eq!(c.object.len(), 1);
        assert_eq!(c.object.denominator("0").unwrap(), &nu(1));

        // two point-inclusions into D_6 picking 0 and 1 (the source point
        // needs denominator 6 so that picking 1 decreases denominators)
        let point = ms(&[("*", 6)]);
        let d6 = FiniteMultiset::dn(6).unwrap();
        let pick0 = MultisetArrow::check(
            point.clone(),
            d6.clone(),
            [("*".to_string(), "0".to_string())].into(),
        )
        .unwrap();
        let pick1 = MultisetArrow::check(
            point.clone(),
            d6.clone(),
            [("*".to_string(), "1".to_string())].into(),
        )
        .unwrap();
        let c = coequalizer(&pick0, &pick1).unwrap();
        assert_eq!(c.object.len(), 1);
        assert_eq!(c.object.denominator("0").unwrap(), &nu(1));
        assert!(c.quotient.classify().regular_epic);
    }

    #[test]
    fn pullback_is_kernel_pair_on_same_arrow() {
        let d6 = FiniteMultiset::dn(6).unwrap();
        let two = FiniteMultiset::two();
        let f = enumerate_homs(&d6, &two)[1].clone();
        assert_eq!(pullback(&f, &f).unwrap(), kernel_pair(&f).unwrap());
    }

    #[test]
    fn pushout_of_identity_is_identity_like() {
        let d6 = FiniteMultiset::dn(6).unwrap();
        let id = MultisetArrow::identity(&d6);
        let po = pushout(&id, &id).unwrap();
        assert!(po.first.classify().iso);
        assert_eq!(po.first, po.second);
    }

    #[test]
    fn kernel_pair_examples() {
        let d6 = FiniteMultiset::dn(6).unwrap();
        let id = MultisetArrow::identity(&d6);
        let kp = kernel_pair(&id).unwrap();
        assert_eq!(kp.object.len(), 2);
        assert_eq!(kp.first, kp.second);

        let two = FiniteMultiset::two();
        let point = ms(&[("*", 1)]);
        let collapse = enumerate_homs(&two, &point)[0].clone();
        let kp = kernel_pair(&collapse).unwrap();
        assert_eq!(kp.object.len(), 4);
        assert!(kp.object.points().all(|(_, d)| *d == nu(1)));
    }

    #[test]
    fn cokernel_pair_example() {
        let d2 = FiniteMultiset::dn(2).unwrap();
        let unit = ms(&[("0", 1)]);
        let incl =
            MultisetArrow::check(unit, d2, [("0".to_string(), "0".to_string())].into()).unwrap();
        let ck = cokernel_pair(&incl).unwrap();
        assert_eq!(ck.object.len(), 3);
        let denominators: Vec<u64> = ck
            .object
            .points()
            .map(|(_, d)| d.to_natural().unwrap())
            .collect();
        assert_eq!(denominators.iter().filter(|&&d| d == 2).count(), 2);
        assert_eq!(denominators.iter().filter(|&&d| d == 1).count(), 1);
    }

    #[test]
    fn universal_properties_hold() {
        let probes = probe_set(6);

        let prod = product(&[
            FiniteMultiset::dn(2).unwrap(),
            FiniteMultiset::dn(3).unwrap(),
        ])
        .unwrap();
        let report = universal_property_check(&Construction::Product(prod.clone()), &probes);
        assert!(report.pass, "{:?}", report.witness);

        let cop = coproduct(&[FiniteMultiset::two(), FiniteMultiset::two()]).unwrap();
        let report = universal_property_check(&Construction::Coproduct(cop), &probes);
        assert!(report.pass, "{:?}", report.witness);

        // corrupt the product denominator at (1,1): the cone picking both
        // denominator-compatible legs from the one-point denominator-6 probe
        // loses its mediating arrow
        let mut corrupted = prod;
        let mut points: Vec<(String, SupernaturalNumber)> = corrupted
            .object
            .points()
            .map(|(id, d)| (id.to_string(), d.clone()))
            .collect();
        for (id, d) in &mut points {
            if id == "(1,1)" {
                *d = nu(12);
            }
        }
        let bad_object = FiniteMultiset::new(points).unwrap();
        corrupted.projections = corrupted
            .projections
            .iter()
            .map(|p| {
                MultisetArrow::check(bad_object.clone(), p.cod().clone(), p.map().clone()).unwrap()
            })
            .collect();
        corrupted.object = bad_object;
        let report = universal_property_check(&Construction::Product(corrupted), &probes);
        assert!(!report.pass);
    }

    #[test]
    fn equalizer_coequalizer_universal_properties() {
        let probes = probe_set(6);
        let two = FiniteMultiset::two();
        let homs = enumerate_homs(&two, &two);
        let id = &homs[1];
        let swap = &homs[2];

        let eq = equalizer(id, swap).unwrap();
        let report = universal_property_check(&Construction::Equalizer(eq), &probes);
        assert!(report.pass, "{:?}", report.witness);

        let coeq = coequalizer(id, swap).unwrap();
        let report = universal_property_check(&Construction::Coequalizer(coeq), &probes);
        assert!(report.pass, "{:?}", report.witness);
    }

    #[test]
    fn partition_assignment() {
        let points: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();

        // single zone covering everything, single kernel
        let assignment = partition_assign(
            &points,
            &[vec!["a".to_string()]],
            std::slice::from_ref(&points),
        )
        .unwrap();
        assert!(assignment.values().all(|&i| i == 0));

        // kernels empty, zones a partition
        let assignment = partition_assign(
            &points,
            &[vec![], vec![]],
            &[
                vec!["a".to_string()],
                vec!["b".to_string(), "c".to_string()],
            ],
        )
        .unwrap();
        assert_eq!(assignment["a"], 0);
        assert_eq!(assignment["b"], 1);
        assert_eq!(assignment["c"], 1);

        // overlapping zones: least admissible index wins, constraints hold
        let kernels = vec![vec!["c".to_string()], vec![]];
        let zones = vec![
            vec!["a".to_string(), "c".to_string()],
            vec!["a".to_string(), "b".to_string()],
        ];
        let assignment = partition_assign(&points, &kernels, &zones).unwrap();
        assert_eq!(assignment["c"], 0);
        assert_eq!(assignment["a"], 0);
        assert_eq!(assignment["b"], 1);
        for (p, &i) in &assignment {
            assert!(zones[i].contains(p));
        }

        // precondition violations carry witnesses
        let err = partition_assign(
            &points,
            &[vec!["a".to_string()], vec!["a".to_string()]],
            &[points.clone(), points.clone()],
        )
        .unwrap_err();
        assert!(matches!(err, MsCatError::KernelsOverlap { .. }));

        let err = partition_assign(&points, &[vec!["b".to_string()]], &[vec!["a".to_string()]])
            .unwrap_err();
        assert!(matches!(err, MsCatError::KernelOutsideZone { .. }));

        let err = partition_assign(&points, &[vec![]], &[vec!["a".to_string()]]).unwrap_err();
        assert!(matches!(err, MsCatError::Uncovered { .. }));
    }

    #[test]
    fn extension_examples() {
        let d6 = FiniteMultiset::dn(6).unwrap();
        let unit = ms(&[("0", 1)]);
        let incl = MultisetArrow::check(
            unit.clone(),
            d6.clone(),
            [("0".to_string(), "0".to_string())].into(),
        )
        .unwrap();

        // g = identity forces h = f
        let id = MultisetArrow::identity(&unit);
        assert_eq!(extend_along_regular_mono(&id, &incl).unwrap(), incl);

        // extend the inclusion of the unit point along itself
        let h = extend_along_regular_mono(&incl, &incl).unwrap();
        assert_eq!(MultisetArrow::compose(&h, &incl).unwrap(), incl);
        assert!(["0", "1"].contains(&h.apply("1").unwrap()));

        // a target without a denominator-1 point is rejected
        let source = ms(&[("0", 2)]);
        let no_unit = ms(&[("w", 2)]);
        let f2 = MultisetArrow::check(
            source.clone(),
            no_unit,
            [("0".to_string(), "w".to_string())].into(),
        )
        .unwrap();
        let g2 = MultisetArrow::check(
            source,
            ms(&[("0", 2), ("z", 4)]),
            [("0".to_string(), "0".to_string())].into(),
        )
        .unwrap();
        assert_eq!(
            extend_along_regular_mono(&g2, &f2).unwrap_err(),
            MsCatError::TargetNoUnitPoint
        );

        // non-regular-monic g is rejected
        let squash = enumerate_homs(&d6, &FiniteMultiset::two())[1].clone();
        assert_eq!(
            extend_along_regular_mono(&squash, &squash).unwrap_err(),
            MsCatError::NotRegularMonic
        );
    }

    #[test]
    fn canonical_arrow_examples() {
        let d2 = FiniteMultiset::dn(2).unwrap();
        let two = FiniteMultiset::two();

        let full =
            canonical_arrow_to_family(&d2, &[two.clone(), d2.clone()], DEFAULT_PRODUCT_BUDGET)
                .unwrap();
        assert!(full.class.regular_monic);
        assert!(full.analysis.preserves_denominators);

        let partial =
            canonical_arrow_to_family(&d2, std::slice::from_ref(&two), DEFAULT_PRODUCT_BUDGET)
                .unwrap();
        assert!(partial.class.monic);
        assert!(!partial.analysis.preserves_denominators);
        let witness = partial.analysis.witness.unwrap();
        assert_eq!(witness.point, "1");
        assert_eq!(witness.achieved, nu(1));

        let point = ms(&[("*", 1)]);
        let tiny =
            canonical_arrow_to_family(&point, std::slice::from_ref(&two), DEFAULT_PRODUCT_BUDGET)
                .unwrap();
        assert!(tiny.class.regular_monic);

        let err = canonical_arrow_to_family(&d2, &[two, d2.clone()], 8).unwrap_err();
        assert!(matches!(
            err,
            MsCatError::BudgetExceeded { required: 64, .. }
        ));
    }

    #[test]
    fn coordinate_dependency_on_projections() {
        let d2 = FiniteMultiset::dn(2).unwrap();
        let d3 = FiniteMultiset::dn(3).unwrap();
        let prod = product(&[d2, d3]).unwrap();
        let two = FiniteMultiset::two();

        // an arrow that copies the first coordinate depends only on it
        let first_coord: BTreeMap<String, String> = prod
            .object
            .point_ids()
            .map(|id| {
                let c0 = prod.projections[0].apply(id).unwrap();
                (id.to_string(), c0.to_string())
            })
            .collect();
        let h = MultisetArrow::check(prod.object.clone(), two.clone(), first_coord).unwrap();
        assert_eq!(coordinate_dependency(&prod, &h).unwrap(), vec![0]);
        assert!(depends_only_on(&prod, &h, &[0]).unwrap());
        assert!(!depends_only_on(&prod, &h, &[1]).unwrap());

        // a constant arrow depends on nothing
        let constant: BTreeMap<String, String> = prod
            .object
            .point_ids()
            .map(|id| (id.to_string(), "0".to_string()))
            .collect();
        let h = MultisetArrow::check(prod.object.clone(), two, constant).unwrap();
        assert!(coordinate_dependency(&prod, &h).unwrap().is_empty());
        assert!(depends_only_on(&prod, &h, &[]).unwrap());
    }
}
