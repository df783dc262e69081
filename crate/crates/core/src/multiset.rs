//! Finite multisets: finite discrete point sets with a supernatural-number
//! denominator attached to each point, and the functions between them that
//! decrease denominators in the divisibility order.
//!
//! Point identifiers are non-empty strings with their natural total order;
//! every enumeration below is ordered by it, so outputs are reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::supernat::SupernaturalNumber;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MultisetError {
    #[error("point identifiers must be non-empty")]
    EmptyPointId,
    #[error("duplicate point identifier {0:?}")]
    DuplicatePoint(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("map does not assign an image to point {0:?}")]
    IncompleteMap(String),
    #[error(
        "DENOM_VIOLATION({point}): codomain denominator {cod_denom} does not divide {dom_denom}"
    )]
    DenomViolation {
        point: String,
        dom_denom: String,
        cod_denom: String,
    },
    #[error("arrows are not composable/comparable: boundary mismatch")]
    BoundaryMismatch,
    #[error("denominator of target point {y:?} does not divide denominator of {x:?}")]
    ConnectOrder { x: String, y: String },
    #[error("target point {y:?} has an infinite denominator")]
    ConnectInfinite { y: String },
    #[error("codomain has no point of denominator 1")]
    NoUnitPoint,
    #[error("n must be at least 1")]
    ZeroIndex,
}

/// A finite multiset `(X, ζ)`: distinct point ids, each with a denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteMultiset {
    points: Vec<PointEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
struct PointEntry {
    id: String,
    denominator: SupernaturalNumber,
}

impl FiniteMultiset {
    pub fn new(
        points: impl IntoIterator<Item = (String, SupernaturalNumber)>,
    ) -> Result<Self, MultisetError> {
        let mut entries: Vec<PointEntry> = points
            .into_iter()
            .map(|(id, denominator)| PointEntry { id, denominator })
            .collect();
        entries.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in entries.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(MultisetError::DuplicatePoint(pair[0].id.clone()));
            }
        }
        if entries.iter().any(|e| e.id.is_empty()) {
            return Err(MultisetError::EmptyPointId);
        }
        Ok(FiniteMultiset { points: entries })
    }

    pub fn empty() -> Self {
        FiniteMultiset { points: Vec::new() }
    }

    /// The two-point multiset with both denominators 1.
    pub fn two() -> Self {
        Self::dn(1).expect("1 >= 1")
    }

    /// `D_n`: points `0` and `1` with denominators `ν_1` and `ν_n`.
    pub fn dn(n: u64) -> Result<Self, MultisetError> {
        if n == 0 {
            return Err(MultisetError::ZeroIndex);
        }
        FiniteMultiset::new([
            ("0".to_string(), SupernaturalNumber::one()),
            (
                "1".to_string(),
                SupernaturalNumber::from_natural(n).expect("n >= 1"),
            ),
        ])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point ids in their fixed order.
    pub fn point_ids(&self) -> impl Iterator<Item = &str> {
        self.points.iter().map(|e| e.id.as_str())
    }

    pub fn points(&self) -> impl Iterator<Item = (&str, &SupernaturalNumber)> {
        self.points.iter().map(|e| (e.id.as_str(), &e.denominator))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.points
            .binary_search_by(|e| e.id.as_str().cmp(id))
            .is_ok()
    }

    pub fn denominator(&self, id: &str) -> Result<&SupernaturalNumber, MultisetError> {
        self.points
            .binary_search_by(|e| e.id.as_str().cmp(id))
            .map(|i| &self.points[i].denominator)
            .map_err(|_| MultisetError::UnknownPoint(id.to_string()))
    }

    /// First point (in id order) with denominator 1, if any.
    pub fn unit_point(&self) -> Option<&str> {
        let one = SupernaturalNumber::one();
        self.points
            .iter()
            .find(|e| e.denominator == one)
            .map(|e| e.id.as_str())
    }

    /// True iff every denominator is finite.
    pub fn is_finitely_copresentable(&self) -> bool {
        self.points.iter().all(|e| e.denominator.is_finite())
    }

    /// Restriction to a subset of points, keeping denominators.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> FiniteMultiset {
        FiniteMultiset {
            points: self
                .points
                .iter()
                .filter(|e| keep.contains(&e.id))
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for FiniteMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .points
            .iter()
            .map(|e| format!("{}:{}", e.id, e.denominator))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl<'de> Deserialize<'de> for FiniteMultiset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            points: Vec<PointEntry>,
        }
        let raw = Raw::deserialize(d)?;
        FiniteMultiset::new(raw.points.into_iter().map(|e| (e.id, e.denominator)))
            .map_err(serde::de::Error::custom)
    }
}

/// A denominator-decreasing function between finite multisets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultisetArrow {
    dom: FiniteMultiset,
    cod: FiniteMultiset,
    map: BTreeMap<String, String>,
}

impl MultisetArrow {
    /// Validates candidate arrow data: the map must be total on the domain,
    /// land in the codomain, and decrease denominators pointwise.
    pub fn check(
        dom: FiniteMultiset,
        cod: FiniteMultiset,
        map: BTreeMap<String, String>,
    ) -> Result<Self, MultisetError> {
        for key in map.keys() {
            if !dom.contains(key) {
                return Err(MultisetError::UnknownPoint(key.clone()));
            }
        }
        for (x, dx) in dom.points() {
            let y = map
                .get(x)
                .ok_or_else(|| MultisetError::IncompleteMap(x.to_string()))?;
            let dy = cod.denominator(y)?;
            if !dy.leq(dx) {
                return Err(MultisetError::DenomViolation {
                    point: x.to_string(),
                    dom_denom: dx.to_string(),
                    cod_denom: dy.to_string(),
                });
            }
        }
        Ok(MultisetArrow { dom, cod, map })
    }

    pub fn identity(x: &FiniteMultiset) -> Self {
        MultisetArrow {
            dom: x.clone(),
            cod: x.clone(),
            map: x
                .point_ids()
                .map(|id| (id.to_string(), id.to_string()))
                .collect(),
        }
    }

    pub fn dom(&self) -> &FiniteMultiset {
        &self.dom
    }

    pub fn cod(&self) -> &FiniteMultiset {
        &self.cod
    }

    pub fn map(&self) -> &BTreeMap<String, String> {
        &self.map
    }

    pub fn apply(&self, x: &str) -> Result<&str, MultisetError> {
        self.map
            .get(x)
            .map(String::as_str)
            .ok_or_else(|| MultisetError::UnknownPoint(x.to_string()))
    }

    /// `g ∘ f`; requires `cod(f) = dom(g)`. The denominator condition holds
    /// by transitivity, so no re-validation is needed.
    pub fn compose(g: &MultisetArrow, f: &MultisetArrow) -> Result<MultisetArrow, MultisetError> {
        if f.cod != g.dom {
            return Err(MultisetError::BoundaryMismatch);
        }
        let map = f
            .map
            .iter()
            .map(|(x, y)| (x.clone(), g.map[y].clone()))
            .collect();
        Ok(MultisetArrow {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            map,
        })
    }

    pub fn is_injective(&self) -> bool {
        let images: BTreeSet<&String> = self.map.values().collect();
        images.len() == self.map.len()
    }

    pub fn is_surjective(&self) -> bool {
        let images: BTreeSet<&str> = self.map.values().map(String::as_str).collect();
        self.cod.point_ids().all(|y| images.contains(y))
    }

    pub fn preserves_denominators(&self) -> bool {
        self.dom.points().all(|(x, dx)| {
            self.cod
                .denominator(&self.map[x])
                .map(|dy| dy == dx)
                .unwrap_or(false)
        })
    }

    pub fn classify(&self) -> ArrowClass {
        let monic = self.is_injective();
        let epic = self.is_surjective();
        let regular_monic = monic && self.preserves_denominators();
        let regular_epic = epic
            && self.cod.points().all(|(y, dy)| {
                let fiber: Vec<SupernaturalNumber> = self
                    .dom
                    .points()
                    .filter(|(x, _)| self.map[*x] == y)
                    .map(|(_, dx)| dx.clone())
                    .collect();
                SupernaturalNumber::meet(&fiber)
                    .map(|m| m == *dy)
                    .unwrap_or(false)
            });
        let iso = monic && epic && self.preserves_denominators();
        ArrowClass {
            monic,
            epic,
            regular_monic,
            regular_epic,
            iso,
        }
    }
}

/// Classification flags for an arrow.
///
/// * monic ⇔ injective
/// * epic ⇔ surjective
/// * regular monic ⇔ injective and denominator-preserving
/// * regular epic ⇔ surjective with each codomain denominator equal to the
///   meet of the denominators in its fiber
/// * iso ⇔ bijective and denominator-preserving
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowClass {
    pub monic: bool,
    pub epic: bool,
    pub regular_monic: bool,
    pub regular_epic: bool,
    pub iso: bool,
}

impl ArrowClass {
    pub fn flags(&self) -> String {
        let mut out = Vec::new();
        if self.iso {
            out.push("iso");
        }
        if self.monic {
            out.push("monic");
        }
        if self.epic {
            out.push("epic");
        }
        if self.regular_monic {
            out.push("reg-monic");
        }
        if self.regular_epic {
            out.push("reg-epic");
        }
        if out.is_empty() {
            out.push("plain");
        }
        out.join(",")
    }
}

/// All denominator-decreasing functions `X → Y`, in lexicographic order of
/// the tuple of point images (images ordered by codomain point id).
pub fn enumerate_homs(x: &FiniteMultiset, y: &FiniteMultiset) -> Vec<MultisetArrow> {
    let dom_ids: Vec<&str> = x.point_ids().collect();
    let mut candidates: Vec<Vec<&str>> = Vec::with_capacity(dom_ids.len());
    for (_, dx) in x.points() {
        let admissible: Vec<&str> = y
            .points()
            .filter(|(_, dy)| dy.leq(dx))
            .map(|(id, _)| id)
            .collect();
        if admissible.is_empty() {
            return Vec::new();
        }
        candidates.push(admissible);
    }
    let mut out = Vec::new();
    let mut counters = vec![0usize; dom_ids.len()];
    loop {
        let map: BTreeMap<String, String> = dom_ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id.to_string(), candidates[i][counters[i]].to_string()))
            .collect();
        out.push(MultisetArrow {
            dom: x.clone(),
            cod: y.clone(),
            map,
        });
        // odometer increment, last coordinate fastest
        let mut i = dom_ids.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            counters[i] += 1;
            if counters[i] < candidates[i].len() {
                break;
            }
            counters[i] = 0;
        }
    }
}

/// Witness that a family separates: a member with two distinct points of
/// denominator 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CogenWitness {
    pub member: usize,
    pub points: (String, String),
}

/// A family is co-generating iff some member has at least two distinct
/// points of denominator 1; returns the witness when it is.
pub fn is_cogenerating(family: &[FiniteMultiset]) -> Option<CogenWitness> {
    let one = SupernaturalNumber::one();
    for (i, g) in family.iter().enumerate() {
        let units: Vec<&str> = g
            .points()
            .filter(|(_, d)| **d == one)
            .map(|(id, _)| id)
            .collect();
        if units.len() >= 2 {
            return Some(CogenWitness {
                member: i,
                points: (units[0].to_string(), units[1].to_string()),
            });
        }
    }
    None
}

/// Bounded verdict for the regular co-generation condition: for every
/// `n ∈ {1} ∪ {p^k ≤ bound}`, some member must have two distinct points with
/// denominators `ν_n` and `ν_1`. The full condition quantifies over all
/// prime powers, so the verdict always carries its bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RegularCogenVerdict {
    HoldsUpTo(u64),
    Fails { n: u64 },
}

pub fn is_regularly_cogenerating_up_to(
    family: &[FiniteMultiset],
    bound: u64,
) -> RegularCogenVerdict {
    let mut targets = vec![1u64];
    for p in 2..=bound {
        if crate::supernat::is_prime(p) {
            let mut q = p;
            while q <= bound {
                targets.push(q);
                q = match q.checked_mul(p) {
                    Some(next) => next,
                    None => break,
                };
            }
        }
    }
    targets.sort_unstable();
    let one = SupernaturalNumber::one();
    for n in targets {
        let nu = SupernaturalNumber::from_natural(n).expect("n >= 1");
        let found = family.iter().any(|g| {
            g.points()
                .any(|(x, dx)| *dx == nu && g.points().any(|(y, dy)| y != x && *dy == one))
        });
        if !found {
            return RegularCogenVerdict::Fails { n };
        }
    }
    RegularCogenVerdict::HoldsUpTo(bound)
}

/// Builds an arrow `f : X → Y` with `f(x) = y`, given `ζ_Y(y) ≤ ζ_X(x)`,
/// `ζ_Y(y)` finite, and a denominator-1 point in `Y`. Points whose
/// denominator dominates `ζ_Y(y)` go to `y`; the rest go to the first
/// denominator-1 point of `Y`.
pub fn connect_arrow(
    x: &FiniteMultiset,
    x_point: &str,
    y: &FiniteMultiset,
    y_point: &str,
) -> Result<MultisetArrow, MultisetError> {
    let dx = x.denominator(x_point)?;
    let dy = y.denominator(y_point)?;
    if !dy.leq(dx) {
        return Err(MultisetError::ConnectOrder {
            x: x_point.to_string(),
            y: y_point.to_string(),
        });
    }
    if !dy.is_finite() {
        return Err(MultisetError::ConnectInfinite {
            y: y_point.to_string(),
        });
    }
    let unit = y.unit_point().ok_or(MultisetError::NoUnitPoint)?;
    let map = x
        .points()
        .map(|(z, dz)| {
            let image = if dy.leq(dz) { y_point } else { unit };
            (z.to_string(), image.to_string())
        })
        .collect();
    Ok(MultisetArrow {
        dom: x.clone(),
        cod: y.clone(),
        map,
    })
}
