//! Quotients of a finite multiset represented internally: a partition plus a
//! class-constant map `μ ≤ ζ` stands for an epic arrow out of the multiset,
//! and the two representations are order-isomorphic. On top of that sit
//! co-relations (jointly epic pairs `q0, q1 : X ⇉ S`), their reflexivity,
//! symmetry and transitivity witnesses, and the construction showing every
//! reflexive co-relation is a cokernel pair.
//!
//! The dual diagrams used for the witness searches are fixed as follows:
//! reflexivity asks for `d : S → X` with `d∘q0 = d∘q1 = 1`; symmetry for
//! `s : S → S` with `s∘q0 = q1` and `s∘q1 = q0`; transitivity builds the
//! pushout `(Q, κ0, κ1)` of the span `(q1, q0)` and asks for `t : S → Q`
//! with `t∘q0 = κ0∘q0` and `t∘q1 = κ1∘q1`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::mscat::{cokernel_pair, pushout, MsCatError};
use crate::multiset::{enumerate_homs, FiniteMultiset, MultisetArrow, MultisetError};
use crate::supernat::SupernaturalNumber;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorelError {
    #[error("classes do not partition the base points (offending point {0:?})")]
    NotPartition(String),
    #[error("mu({point}) does not divide the denominator")]
    MuNotBounded { point: String },
    #[error("mu is not constant on the class of {point:?}")]
    MuNotClassConstant { point: String },
    #[error("mu is missing point {point:?}")]
    MuMissing { point: String },
    #[error("relations live on different base multisets")]
    BaseMismatch,
    #[error("the arrow is not epic")]
    NotEpic,
    #[error("point {point:?} has an infinite denominator and no mu universe was supplied")]
    MissingMuUniverse { point: String },
    #[error("the pair of arrows is not jointly epic")]
    NotJointlyEpic,
    #[error("the two arrows do not form a parallel pair on the base")]
    NotParallel,
    #[error("the co-relation is not reflexive")]
    NotReflexive,
    #[error("INTERNAL: reflexivity witness search and characterization disagree")]
    RoutesDisagree,
    #[error("INTERNAL: {0}")]
    Internal(String),
    #[error(transparent)]
    Multiset(#[from] MultisetError),
    #[error(transparent)]
    MsCat(#[from] MsCatError),
}

/// A partition of the base points plus a class-constant `μ` dividing the
/// denominator at every point. Stands for the quotient whose classes are the
/// partition and whose denominators are the `μ` values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultisetRelation {
    base: FiniteMultiset,
    classes: Vec<Vec<String>>,
    mu: BTreeMap<String, SupernaturalNumber>,
}

impl<'de> serde::Deserialize<'de> for MultisetRelation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            base: FiniteMultiset,
            classes: Vec<Vec<String>>,
            mu: BTreeMap<String, SupernaturalNumber>,
        }
        let raw = Raw::deserialize(d)?;
        MultisetRelation::new(raw.base, raw.classes, raw.mu).map_err(serde::de::Error::custom)
    }
}

impl MultisetRelation {
    pub fn new(
        base: FiniteMultiset,
        classes: Vec<Vec<String>>,
        mu: BTreeMap<String, SupernaturalNumber>,
    ) -> Result<Self, CorelError> {
        let mut classes: Vec<Vec<String>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort();
                c
            })
            .collect();
        classes.sort();
        let mut seen = BTreeSet::new();
        for class in &classes {
            for p in class {
                if !base.contains(p) || !seen.insert(p.clone()) {
                    return Err(CorelError::NotPartition(p.clone()));
                }
            }
        }
        if let Some(missing) = base.point_ids().find(|p| !seen.contains(*p)) {
            return Err(CorelError::NotPartition(missing.to_string()));
        }
        for (p, d) in base.points() {
            let m = mu.get(p).ok_or_else(|| CorelError::MuMissing {
                point: p.to_string(),
            })?;
            if !m.leq(d) {
                return Err(CorelError::MuNotBounded {
                    point: p.to_string(),
                });
            }
        }
        for class in &classes {
            let first = &mu[&class[0]];
            for p in class {
                if &mu[p] != first {
                    return Err(CorelError::MuNotClassConstant { point: p.clone() });
                }
            }
        }
        Ok(MultisetRelation { base, classes, mu })
    }

    pub fn base(&self) -> &FiniteMultiset {
        &self.base
    }

    pub fn classes(&self) -> &[Vec<String>] {
        &self.classes
    }

    pub fn mu(&self, point: &str) -> Option<&SupernaturalNumber> {
        self.mu.get(point)
    }

    pub fn mu_map(&self) -> &BTreeMap<String, SupernaturalNumber> {
        &self.mu
    }

    fn class_of(&self, point: &str) -> Option<&[String]> {
        self.classes
            .iter()
            .find(|c| c.iter().any(|p| p == point))
            .map(Vec::as_slice)
    }
}

/// Fibers of an epic arrow plus the pulled-back codomain denominators.
pub fn relation_of_epi(f: &MultisetArrow) -> Result<MultisetRelation, CorelError> {
    if !f.classify().epic {
        return Err(CorelError::NotEpic);
    }
    let mut fibers: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut mu = BTreeMap::new();
    for x in f.dom().point_ids() {
        let y = f.apply(x)?;
        fibers.entry(y).or_default().push(x.to_string());
        mu.insert(x.to_string(), f.cod().denominator(y)?.clone());
    }
    MultisetRelation::new(f.dom().clone(), fibers.into_values().collect(), mu)
}

/// The quotient arrow of a relation: classes become points (named by their
/// least member) with the class `μ` as denominator.
pub fn epi_of_relation(r: &MultisetRelation) -> Result<MultisetArrow, CorelError> {
    let points: Vec<(String, SupernaturalNumber)> = r
        .classes
        .iter()
        .map(|class| (class[0].clone(), r.mu[&class[0]].clone()))
        .collect();
    let quotient = FiniteMultiset::new(points)?;
    let map: BTreeMap<String, String> = r
        .classes
        .iter()
        .flat_map(|class| class.iter().map(|p| (p.clone(), class[0].clone())))
        .collect();
    Ok(MultisetArrow::check(r.base.clone(), quotient, map)?)
}

/// The quotient order: `r1 ≤ r2` iff the partition of `r1` refines that of
/// `r2` and `μ_1 ≥ μ_2` pointwise.
pub fn relation_leq(r1: &MultisetRelation, r2: &MultisetRelation) -> Result<bool, CorelError> {
    if r1.base != r2.base {
        return Err(CorelError::BaseMismatch);
    }
    let refines = r1.classes.iter().all(|c1| {
        r2.class_of(&c1[0])
            .map(|c2| c1.iter().all(|p| c2.contains(p)))
            .unwrap_or(false)
    });
    let mu_dominates = r1.base.point_ids().all(|p| r2.mu[p].leq(&r1.mu[p]));
    Ok(refines && mu_dominates)
}

/// Per-point pools of admissible `μ` values for points with infinite
/// denominators.
pub type MuUniverse = BTreeMap<String, Vec<SupernaturalNumber>>;

/// All relations on `X`: every partition of the points combined with every
/// class-constant choice of `μ` values. Finite denominators draw `μ` from
/// their divisors; infinite ones require an explicit universe entry.
pub fn enumerate_relations(
    x: &FiniteMultiset,
    mu_universe: Option<&MuUniverse>,
) -> Result<Vec<MultisetRelation>, CorelError> {
    let ids: Vec<&str> = x.point_ids().collect();
    let mut per_point: BTreeMap<&str, Vec<SupernaturalNumber>> = BTreeMap::new();
    for (p, d) in x.points() {
        let candidates = match d.divisors() {
            Some(ds) => ds,
            None => {
                let pool = mu_universe.and_then(|u| u.get(p)).ok_or_else(|| {
                    CorelError::MissingMuUniverse {
                        point: p.to_string(),
                    }
                })?;
                let mut pool: Vec<SupernaturalNumber> =
                    pool.iter().filter(|v| v.leq(d)).cloned().collect();
                pool.sort_by(|a, b| a.canonical_cmp(b));
                pool.dedup();
                pool
            }
        };
        per_point.insert(p, candidates);
    }

    let mut out = Vec::new();
    for partition in set_partitions(ids.len()) {
        let mut classes: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (i, &block) in partition.iter().enumerate() {
            classes.entry(block).or_default().push(ids[i].to_string());
        }
        let classes: Vec<Vec<String>> = classes.into_values().collect();
        let class_candidates: Vec<Vec<SupernaturalNumber>> = classes
            .iter()
            .map(|class| {
                let mut vals: Vec<SupernaturalNumber> = per_point[class[0].as_str()]
                    .iter()
                    .filter(|v| {
                        class.iter().all(|p| {
                            v.leq(x.denominator(p).unwrap()) && per_point[p.as_str()].contains(v)
                        })
                    })
                    .cloned()
                    .collect();
                vals.sort_by(|a, b| a.canonical_cmp(b));
                vals
            })
            .collect();
        for combo in cartesian(&class_candidates) {
            let mut mu = BTreeMap::new();
            for (class, value) in classes.iter().zip(&combo) {
                for p in class {
                    mu.insert(p.clone(), value.clone());
                }
            }
            out.push(MultisetRelation::new(x.clone(), classes.clone(), mu)?);
        }
    }
    Ok(out)
}

/// Restricted-growth strings: all partitions of `{0, …, n-1}` in
/// lexicographic order; entry `i` is the block index of element `i`.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn go(current: &mut Vec<usize>, i: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        if i == current.len() {
            out.push(current.clone());
            return;
        }
        for block in 0..=max_used + 1 {
            current[i] = block;
            go(current, i + 1, max_used.max(block), out);
        }
    }
    go(&mut current, 1, 0, &mut out);
    out
}

fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::new();
        for prefix in &out {
            for item in list {
                let mut row = prefix.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotCsReport {
    pub pass: bool,
    pub relations: u64,
    pub epis_checked: u64,
    pub order_pairs: u64,
    pub witness: Option<String>,
}

/// Verifies, on everything enumerable over `X`, that relations and epic
/// arrows are two views of the same quotients: round-trips are identities
/// (up to a compatible iso on the arrow side) and the two orders agree.
pub fn check_quot_cs_iso(
    x: &FiniteMultiset,
    mu_universe: Option<&MuUniverse>,
) -> Result<QuotCsReport, CorelError> {
    let relations = enumerate_relations(x, mu_universe)?;
    let mut witness: Option<String> = None;
    let mut epis_checked = 0;
    let mut order_pairs = 0;

    let mut quotients = Vec::with_capacity(relations.len());
    for r in &relations {
        let pi = epi_of_relation(r)?;
        if relation_of_epi(&pi)? != *r {
            witness.get_or_insert_with(|| format!("round trip failed on {r:?}"));
        }
        quotients.push(pi);
    }

    // every epic arrow onto an enumerated quotient shape factors as an iso
    // after its own quotient projection; shapes repeat across relations, so
    // deduplicate before enumerating
    let mut targets: Vec<&FiniteMultiset> = Vec::new();
    for pi in &quotients {
        if !targets.contains(&pi.cod()) {
            targets.push(pi.cod());
        }
    }
    for target in targets {
        for f in enumerate_homs(x, target) {
            if !f.classify().epic {
                continue;
            }
            epis_checked += 1;
            let r = relation_of_epi(&f)?;
            let pi = epi_of_relation(&r)?;
            let has_iso = enumerate_homs(pi.cod(), f.cod()).into_iter().any(|eps| {
                eps.classify().iso && MultisetArrow::compose(&eps, &pi).ok().as_ref() == Some(&f)
            });
            if !has_iso {
                witness.get_or_insert_with(|| {
                    format!("no compatible iso recovers the epi with map {:?}", f.map())
                });
            }
        }
    }

    for (r1, pi1) in relations.iter().zip(&quotients) {
        for (r2, pi2) in relations.iter().zip(&quotients) {
            order_pairs += 1;
            let lhs = relation_leq(r1, r2)?;
            let rhs = enumerate_homs(pi1.cod(), pi2.cod())
                .into_iter()
                .any(|h| MultisetArrow::compose(&h, pi1).ok().as_ref() == Some(pi2));
            if lhs != rhs {
                witness.get_or_insert_with(|| {
                    format!("order mismatch: {r1:?} vs {r2:?} (relation={lhs}, arrows={rhs})")
                });
            }
        }
    }

    Ok(QuotCsReport {
        pass: witness.is_none(),
        relations: relations.len() as u64,
        epis_checked,
        order_pairs,
        witness,
    })
}

/// A co-relation on `X`: a jointly epic parallel pair into `S` (equivalently
/// an epic arrow `X + X → S`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoRelation {
    base: FiniteMultiset,
    target: FiniteMultiset,
    q0: MultisetArrow,
    q1: MultisetArrow,
}

impl CoRelation {
    pub fn new(q0: MultisetArrow, q1: MultisetArrow) -> Result<Self, CorelError> {
        if q0.dom() != q1.dom() || q0.cod() != q1.cod() {
            return Err(CorelError::NotParallel);
        }
        let hit: BTreeSet<&str> = q0
            .map()
            .values()
            .chain(q1.map().values())
            .map(String::as_str)
            .collect();
        if !q0.cod().point_ids().all(|s| hit.contains(s)) {
            return Err(CorelError::NotJointlyEpic);
        }
        Ok(CoRelation {
            base: q0.dom().clone(),
            target: q0.cod().clone(),
            q0,
            q1,
        })
    }

    pub fn base(&self) -> &FiniteMultiset {
        &self.base
    }

    pub fn target(&self) -> &FiniteMultiset {
        &self.target
    }

    pub fn legs(&self) -> (&MultisetArrow, &MultisetArrow) {
        (&self.q0, &self.q1)
    }

    /// Witness search route: the first `d : S → X` with `d∘q0 = d∘q1 = 1`.
    pub fn reflexivity_witness(&self) -> Option<MultisetArrow> {
        let id = MultisetArrow::identity(&self.base);
        enumerate_homs(&self.target, &self.base)
            .into_iter()
            .find(|d| {
                MultisetArrow::compose(d, &self.q0).ok().as_ref() == Some(&id)
                    && MultisetArrow::compose(d, &self.q1).ok().as_ref() == Some(&id)
            })
    }

    /// Characterization route on the associated relation: the legs never
    /// identify distinct base points, and they preserve denominators.
    pub fn reflexivity_characterization(&self) -> bool {
        let ids: Vec<&str> = self.base.point_ids().collect();
        let legs = [&self.q0, &self.q1];
        for (i, qi) in legs.iter().enumerate() {
            for (j, qj) in legs.iter().enumerate() {
                for &x in &ids {
                    for &y in &ids {
                        if x != y
                            && (i < j || (i == j && x < y))
                            && qi.apply(x).unwrap() == qj.apply(y).unwrap()
                        {
                            return false;
                        }
                    }
                }
            }
        }
        self.base.points().all(|(x, dx)| {
            legs.iter().all(|q| {
                self.target
                    .denominator(q.apply(x).unwrap())
                    .map(|d| d == dx)
                    .unwrap_or(false)
            })
        })
    }

    /// Runs both reflexivity routes and insists they agree.
    pub fn is_reflexive(&self) -> Result<Option<MultisetArrow>, CorelError> {
        let witness = self.reflexivity_witness();
        if witness.is_some() != self.reflexivity_characterization() {
            return Err(CorelError::RoutesDisagree);
        }
        Ok(witness)
    }

    /// Searches for `s : S → S` with `s∘q0 = q1` and `s∘q1 = q0`.
    pub fn symmetry_witness(&self) -> Option<MultisetArrow> {
        enumerate_homs(&self.target, &self.target)
            .into_iter()
            .find(|s| {
                MultisetArrow::compose(s, &self.q0).ok().as_ref() == Some(&self.q1)
                    && MultisetArrow::compose(s, &self.q1).ok().as_ref() == Some(&self.q0)
            })
    }

    /// Builds the pushout `(Q, κ0, κ1)` of the span `(q1, q0)` and searches
    /// for `t : S → Q` with `t∘q0 = κ0∘q0` and `t∘q1 = κ1∘q1`.
    pub fn transitivity_witness(&self) -> Result<Option<MultisetArrow>, CorelError> {
        let po = pushout(&self.q1, &self.q0)?;
        let (kappa0, kappa1) = (&po.first, &po.second);
        let left = MultisetArrow::compose(kappa0, &self.q0)?;
        let right = MultisetArrow::compose(kappa1, &self.q1)?;
        Ok(enumerate_homs(&self.target, &po.object)
            .into_iter()
            .find(|t| {
                MultisetArrow::compose(t, &self.q0).ok().as_ref() == Some(&left)
                    && MultisetArrow::compose(t, &self.q1).ok().as_ref() == Some(&right)
            }))
    }
}

/// All co-relations on `X` up to co-subobject equivalence, obtained by
/// enumerating relations on `X + X` and taking their quotient pairs.
pub fn corelations_on(
    x: &FiniteMultiset,
    mu_universe: Option<&MuUniverse>,
) -> Result<Vec<CoRelation>, CorelError> {
    let cop = crate::mscat::coproduct(&[x.clone(), x.clone()])?;
    let doubled = cop.object.clone();
    let mut universe: MuUniverse = BTreeMap::new();
    if let Some(u) = mu_universe {
        for inj in &cop.injections {
            for p in x.point_ids() {
                if let Some(pool) = u.get(p) {
                    universe.insert(inj.apply(p).unwrap().to_string(), pool.clone());
                }
            }
        }
    }
    let universe_ref = mu_universe.map(|_| &universe);
    let mut out = Vec::new();
    for r in enumerate_relations(&doubled, universe_ref)? {
        let pi = epi_of_relation(&r)?;
        let q0 = MultisetArrow::compose(&pi, &cop.injections[0])?;
        let q1 = MultisetArrow::compose(&pi, &cop.injections[1])?;
        out.push(CoRelation::new(q0, q1)?);
    }
    Ok(out)
}

/// Result of certifying a reflexive co-relation effective: the fixed-point
/// part `Y`, its inclusion, and the iso matching its cokernel pair to the
/// given pair.
#[derive(Debug, Clone, Serialize)]
pub struct Effectivization {
    pub fixed_part: FiniteMultiset,
    pub inclusion: MultisetArrow,
    pub iso: MultisetArrow,
}

/// For a reflexive co-relation, builds `Y = {x | q0(x) = q1(x)}` with the
/// denominators of `X`, takes the cokernel pair of the inclusion, and finds
/// the iso showing it coincides with `(S, q0, q1)`.
pub fn effectivize(c: &CoRelation) -> Result<Effectivization, CorelError> {
    if c.is_reflexive()?.is_none() {
        return Err(CorelError::NotReflexive);
    }
    let keep: BTreeSet<String> = c
        .base()
        .point_ids()
        .filter(|x| c.q0.apply(x).unwrap() == c.q1.apply(x).unwrap())
        .map(str::to_string)
        .collect();
    let fixed_part = c.base().restrict(&keep);
    let map: BTreeMap<String, String> = fixed_part
        .point_ids()
        .map(|p| (p.to_string(), p.to_string()))
        .collect();
    let inclusion = MultisetArrow::check(fixed_part.clone(), c.base().clone(), map)?;
    let ck = cokernel_pair(&inclusion)?;
    let iso = enumerate_homs(&ck.object, c.target())
        .into_iter()
        .find(|phi| {
            phi.classify().iso
                && MultisetArrow::compose(phi, &ck.first).ok().as_ref() == Some(&c.q0)
                && MultisetArrow::compose(phi, &ck.second).ok().as_ref() == Some(&c.q1)
        })
        .ok_or_else(|| {
            CorelError::Internal(
                "cokernel pair of the fixed part does not match the co-relation".to_string(),
            )
        })?;
    Ok(Effectivization {
        fixed_part,
        inclusion,
        iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mscat::cokernel_pair;

    fn nu(n: u64) -> SupernaturalNumber {
        SupernaturalNumber::from_natural(n).unwrap()
    }

    fn ms(denoms: &[(&str, u64)]) -> FiniteMultiset {
        FiniteMultiset::new(denoms.iter().map(|(id, n)| (id.to_string(), nu(*n)))).unwrap()
    }

    #[test]
    fn relation_json_round_trip_validates() {
        let d6 = FiniteMultiset::dn(6).unwrap();
        let r = MultisetRelation::new(
            d6,
            vec![vec!["0".into()], vec!["1".into()]],
            [("0".into(), nu(1)), ("1".into(), nu(2))].into(),
        )
        .unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: MultisetRelation = serde_json::from_str(&text).unwrap();
        assert_eq!(r, back);

        // mu above the denominator is rejected on input
        let bad = text.replace(r#""exceptions":{"2":1}}}"#, r#""exceptions":{"5":1}}}"#);
        assert!(serde_json::from_str::<MultisetRelation>(&bad).is_err());
    }

    #[test]
    fn relation_of_epi_examples() {
        let d6 = FiniteMultiset::dn(6).unwrap();
        let id = MultisetArrow::identity(&d6);
        let r = relation_of_epi(&id).unwrap();
        assert_eq!(r.classes().len(), 2);
        assert_eq!(r.mu("1").unwrap(), &nu(6));

        let two = FiniteMultiset::two();
        let point = ms(&[("*", 1)]);
        let collapse = enumerate_homs(&two, &point)[0].clone();
        let r = relation_of_epi(&collapse).unwrap();
        assert_eq!(r.classes().len(), 1);
        assert_eq!(r.mu("0").unwrap(), &nu(1));

        let f = enumerate_homs(&d6, &two)[1].clone();
        let r = relation_of_epi(&f).unwrap();
        assert_eq!(r.classes().len(), 2);
        assert_eq!(r.mu("1").unwrap(), &nu(1));

        let not_epic = enumerate_homs(&point, &two)[0].clone();
        assert_eq!(relation_of_epi(&not_epic).unwrap_err(), CorelError::NotEpic);
    }

    #[test]
    fn epi_of_relation_examples() {
        let d6 = FiniteMultiset::dn(6).unwrap();

        // discrete partition with mu = denominators: an iso
        let full = MultisetRelation::new(
            d6.clone(),
            vec![vec!["0".into()], vec!["1".into()]],
            [("0".into(), nu(1)), ("1".into(), nu(6))].into(),
        )
        .unwrap();
        assert!(epi_of_relation(&full).unwrap().classify().iso);

        // one class on the two-point unit multiset collapses it
        let two = FiniteMultiset::two();
        let squash = MultisetRelation::new(
            two,
            vec![vec!["0".into(), "1".into()]],
            [("0".into(), nu(1)), ("1".into(), nu(1))].into(),
        )
        .unwrap();
        let pi = epi_of_relation(&squash).unwrap();
        assert_eq!(pi.cod().len(), 1);

        // discrete partition with a strictly smaller mu: epic, not regular
        let drop = MultisetRelation::new(
            d6,
            vec![vec!["0".into()], vec!["1".into()]],
            [("0".into(), nu(1)), ("1".into(), nu(2))].into(),
        )
        .unwrap();
        let pi = epi_of_relation(&drop).unwrap();
        let class = pi.classify();
        assert!(class.epic && !class.regular_epic);
        assert_eq!(pi.cod().denominator("1").unwrap(), &nu(2));
    }

    #[test]
    fn relation_invariants_rejected() {
        let d6 = FiniteMultiset::dn(6).unwrap();
        // mu above the denominator
        assert_eq!(
            MultisetRelation::new(
                d6.clone(),
                vec![vec!["0".into()], vec!["1".into()]],
                [("0".into(), nu(2)), ("1".into(), nu(6))].into(),
            )
            .unwrap_err(),
            CorelError::MuNotBounded { point: "0".into() }
        );
        // mu not class constant
        assert_eq!(
            MultisetRelation::new(
                d6.clone(),
                vec![vec!["0".into(), "1".into()]],
                [("0".into(), nu(1)), ("1".into(), nu(2))].into(),
            )
            .unwrap_err(),
            CorelError::MuNotClassConstant { point: "1".into() }
        );
        // not a partition
        assert!(matches!(
            MultisetRelation::new(d6, vec![vec!["0".into()]], [("0".into(), nu(1))].into())
                .unwrap_err(),
            CorelError::NotPartition(_)
        ));
    }

    #[test]
    fn relation_order() {
        let d6 = FiniteMultiset::dn(6).unwrap();
        let fine = MultisetRelation::new(
            d6.clone(),
            vec![vec!["0".into()], vec!["1".into()]],
            [("0".into(), nu(1)), ("1".into(), nu(2))].into(),
        )
        .unwrap();
        let coarse = MultisetRelation::new(
            d6.clone(),
            vec![vec!["0".into(), "1".into()]],
            [("0".into(), nu(1)), ("1".into(), nu(1))].into(),
        )
        .unwrap();
        assert!(relation_leq(&fine, &fine).unwrap());
        assert!(relation_leq(&fine, &coarse).unwrap());
        assert!(!relation_leq(&coarse, &fine).unwrap());

        // the identity quotient is the top element
        let top = MultisetRelation::new(
            d6,
            vec![vec!["0".into()], vec!["1".into()]],
            [("0".into(), nu(1)), ("1".into(), nu(6))].into(),
        )
        .unwrap();
        for r in [&fine, &coarse, &top] {
            assert!(relation_leq(&top, r).unwrap());
        }
    }

    #[test]
    fn enumeration_counts() {
        let two = FiniteMultiset::two();
        assert_eq!(enumerate_relations(&two, None).unwrap().len(), 2);

        let single4 = ms(&[("w", 4)]);
        assert_eq!(enumerate_relations(&single4, None).unwrap().len(), 3);

        let d2 = FiniteMultiset::dn(2).unwrap();
        assert_eq!(enumerate_relations(&d2, None).unwrap().len(), 3);

        // an infinite denominator needs a universe
        let inf =
            FiniteMultiset::new([("x".to_string(), SupernaturalNumber::all_infinite())]).unwrap();
        assert!(matches!(
            enumerate_relations(&inf, None).unwrap_err(),
            CorelError::MissingMuUniverse { .. }
        ));
        let universe: MuUniverse = [("x".to_string(), vec![nu(1), nu(2)])].into();
        assert_eq!(enumerate_relations(&inf, Some(&universe)).unwrap().len(), 2);
    }

    #[test]
    fn quot_cs_iso_small() {
        let two = FiniteMultiset::two();
        let report = check_quot_cs_iso(&two, None).unwrap();
        assert!(report.pass, "{:?}", report.witness);

        let d2 = FiniteMultiset::dn(2).unwrap();
        let report = check_quot_cs_iso(&d2, None).unwrap();
        assert!(report.pass, "{:?}", report.witness);
        assert_eq!(report.relations, 3);
    }

    #[test]
    fn broken_order_produces_witness() {
        // dropping the mu comparison from the order breaks agreement with
        // the arrow-side order
        let d6 = FiniteMultiset::dn(6).unwrap();
        let relations = enumerate_relations(&d6, None).unwrap();
        let broken_leq = |r1: &MultisetRelation, r2: &MultisetRelation| {
            r1.classes().iter().all(|c1| {
                r2.class_of(&c1[0])
                    .map(|c2| c1.iter().all(|p| c2.contains(p)))
                    .unwrap_or(false)
            })
        };
        let mut witness = None;
        for r1 in &relations {
            for r2 in &relations {
                let pi1 = epi_of_relation(r1).unwrap();
                let pi2 = epi_of_relation(r2).unwrap();
                let arrow_order = enumerate_homs(pi1.cod(), pi2.cod())
                    .into_iter()
                    .any(|h| MultisetArrow::compose(&h, &pi1).ok().as_ref() == Some(&pi2));
                if broken_leq(r1, r2) != arrow_order {
                    witness = Some((r1.clone(), r2.clone()));
                }
                assert_eq!(relation_leq(r1, r2).unwrap(), arrow_order);
            }
        }
        assert!(witness.is_some());
    }

    #[test]
    fn reflexivity_routes() {
        let d2 = FiniteMultiset::dn(2).unwrap();

        // cokernel pair of a regular mono is reflexive
        let unit = ms(&[("0", 1)]);
        let incl = MultisetArrow::check(
            unit,
            d2.clone(),
            [("0".to_string(), "0".to_string())].into(),
        )
        .unwrap();
        let ck = cokernel_pair(&incl).unwrap();
        let c = CoRelation::new(ck.first, ck.second).unwrap();
        assert!(c.is_reflexive().unwrap().is_some());

        // the identity pair is reflexive with witness d = id
        let id = MultisetArrow::identity(&d2);
        let c = CoRelation::new(id.clone(), id.clone()).unwrap();
        let d = c.is_reflexive().unwrap().unwrap();
        assert_eq!(d, MultisetArrow::identity(&d2));

        // a point collapsing onto a point: q0 = q1, reflexive
        let point = ms(&[("*", 1)]);
        let q = MultisetArrow::identity(&point);
        let c = CoRelation::new(q.clone(), q).unwrap();
        assert!(c.is_reflexive().unwrap().is_some());
    }

    #[test]
    fn symmetry_and_transitivity_of_cokernel_pairs() {
        let d6 = FiniteMultiset::dn(6).unwrap();
        let unit = ms(&[("0", 1)]);
        let incl = MultisetArrow::check(
            unit,
            d6.clone(),
            [("0".to_string(), "0".to_string())].into(),
        )
        .unwrap();
        let ck = cokernel_pair(&incl).unwrap();
        let c = CoRelation::new(ck.first, ck.second).unwrap();
        assert!(c.symmetry_witness().is_some());
        assert!(c.transitivity_witness().unwrap().is_some());

        // q0 = q1 is symmetric via s = id
        let id = MultisetArrow::identity(&d6);
        let c = CoRelation::new(id.clone(), id).unwrap();
        let s = c.symmetry_witness().unwrap();
        assert_eq!(s, MultisetArrow::identity(&d6));
    }

    #[test]
    fn effectivize_round_trip() {
        let d6 = FiniteMultiset::dn(6).unwrap();
        let unit = ms(&[("0", 1)]);
        let incl = MultisetArrow::check(
            unit.clone(),
            d6.clone(),
            [("0".to_string(), "0".to_string())].into(),
        )
        .unwrap();
        let ck = cokernel_pair(&incl).unwrap();
        let c = CoRelation::new(ck.first, ck.second).unwrap();
        let eff = effectivize(&c).unwrap();
        // the fixed part recovers the regular image of the mono
        assert_eq!(eff.fixed_part.len(), 1);
        assert_eq!(eff.fixed_part.denominator("0").unwrap(), &nu(1));

        // the identity pair effectivizes with Y = X
        let id = MultisetArrow::identity(&d6);
        let c = CoRelation::new(id.clone(), id).unwrap();
        let eff = effectivize(&c).unwrap();
        assert_eq!(eff.fixed_part, d6);

        // non-reflexive input is rejected
        let two = FiniteMultiset::two();
        let homs = enumerate_homs(&two, &two);
        let c = CoRelation::new(homs[0].clone(), homs[3].clone()).unwrap();
        assert_eq!(effectivize(&c).unwrap_err(), CorelError::NotReflexive);
    }

    #[test]
    fn corelation_enumeration_is_jointly_epic() {
        let d2 = FiniteMultiset::dn(2).unwrap();
        let all = corelations_on(&d2, None).unwrap();
        assert!(!all.is_empty());
        for c in &all {
            let hit: BTreeSet<&str> = c
                .legs()
                .0
                .map()
                .values()
                .chain(c.legs().1.map().values())
                .map(String::as_str)
                .collect();
            assert!(c.target().point_ids().all(|s| hit.contains(s)));
        }
    }
}
