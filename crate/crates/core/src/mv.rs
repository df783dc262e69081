//! Finite MV-algebras presented as products of finite chains.
//!
//! An algebra carries the multiset presenting it: each point `w` with finite
//! denominator `d(w)` contributes the chain `{0, 1/d(w), …, 1}`, and
//! elements are tuples of such fractions. Everything here is deliberately
//! elementary — truncated addition, complement, exhaustive axiom checks, and
//! a pruned but complete search over all operation-preserving maps — so it
//! can serve as an oracle that does not depend on any structure theory.

use serde::Serialize;
use thiserror::Error;

use crate::multiset::FiniteMultiset;

pub const DEFAULT_AXIOM_BUDGET: u64 = 64;
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Full pairwise homomorphism validation is run below this element count;
/// larger algebras get the linear derivation check instead.
pub const FULL_VALIDATION_CAP: u64 = 512;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MvError {
    #[error("presentation point {0:?} has an infinite denominator")]
    InfiniteDenominator(String),
    #[error("algebra is too large to index")]
    TooLarge,
    #[error("algebra has {needed} elements, budget is {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error("homomorphism search exceeded its node budget of {budget}")]
    SearchBudget { budget: u64 },
    #[error("element does not belong to this algebra")]
    ElementMismatch,
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("chain index must be at least 1")]
    ZeroChain,
    #[error("invalid element encoding: {0}")]
    BadElementJson(String),
    #[error("INTERNAL: {0}")]
    Internal(String),
}

/// A fraction `k/n` with `0 ≤ k ≤ n`, kept unreduced against its chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub numerator: u64,
    pub denominator: u64,
}

/// An element of a product of chains: one numerator per presentation point,
/// in point order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MVElement {
    pub numerators: Vec<u64>,
}

/// A finite MV-algebra presented by a multiset with finite denominators.
#[derive(Debug, Clone)]
pub struct FiniteMVAlgebra {
    presentation: FiniteMultiset,
    point_ids: Vec<String>,
    chain_denoms: Vec<u64>,
    strides: Vec<u64>,
    size: u64,
}

impl PartialEq for FiniteMVAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.presentation == other.presentation
    }
}

impl Eq for FiniteMVAlgebra {}

impl FiniteMVAlgebra {
    pub fn new(presentation: FiniteMultiset) -> Result<Self, MvError> {
        let mut point_ids = Vec::new();
        let mut chain_denoms = Vec::new();
        for (id, d) in presentation.points() {
            let n = d
                .to_natural()
                .ok_or_else(|| MvError::InfiniteDenominator(id.to_string()))?;
            point_ids.push(id.to_string());
            chain_denoms.push(n);
        }
        let mut size: u64 = 1;
        for &d in &chain_denoms {
            size = size.checked_mul(d + 1).ok_or(MvError::TooLarge)?;
        }
        // strides for lexicographic indexing, first point most significant
        let mut strides = vec![1u64; chain_denoms.len()];
        for i in (0..chain_denoms.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (chain_denoms[i + 1] + 1);
        }
        Ok(FiniteMVAlgebra {
            presentation,
            point_ids,
            chain_denoms,
            strides,
            size,
        })
    }

    /// The chain with `n + 1` elements `{0, 1/n, …, 1}`.
    pub fn chain(n: u64) -> Result<Self, MvError> {
        if n == 0 {
            return Err(MvError::ZeroChain);
        }
        let ms = FiniteMultiset::new([(
            "0".to_string(),
            crate::supernat::SupernaturalNumber::from_natural(n).expect("n >= 1"),
        )])
        .expect("single point");
        FiniteMVAlgebra::new(ms)
    }

    /// A product of chains with synthetic point names `w0, w1, …`.
    pub fn product_of_chains(ns: &[u64]) -> Result<Self, MvError> {
        if ns.contains(&0) {
            return Err(MvError::ZeroChain);
        }
        let ms = FiniteMultiset::new(ns.iter().enumerate().map(|(i, &n)| {
            (
                format!("w{i}"),
                crate::supernat::SupernaturalNumber::from_natural(n).expect("n >= 1"),
            )
        }))
        .expect("distinct synthetic ids");
        FiniteMVAlgebra::new(ms)
    }

    pub fn presentation(&self) -> &FiniteMultiset {
        &self.presentation
    }

    pub fn point_ids(&self) -> &[String] {
        &self.point_ids
    }

    pub fn chain_denominators(&self) -> &[u64] {
        &self.chain_denoms
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub(crate) fn strides(&self) -> &[u64] {
        &self.strides
    }

    fn check_element(&self, e: &MVElement) -> Result<(), MvError> {
        if e.numerators.len() != self.chain_denoms.len()
            || e.numerators
                .iter()
                .zip(&self.chain_denoms)
                .any(|(&k, &d)| k > d)
        {
            return Err(MvError::ElementMismatch);
        }
        Ok(())
    }

    pub fn zero(&self) -> MVElement {
        MVElement {
            numerators: vec![0; self.chain_denoms.len()],
        }
    }

    pub fn one(&self) -> MVElement {
        MVElement {
            numerators: self.chain_denoms.clone(),
        }
    }

    /// Truncated addition, componentwise.
    pub fn oplus(&self, x: &MVElement, y: &MVElement) -> Result<MVElement, MvError> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(MVElement {
            numerators: x
                .numerators
                .iter()
                .zip(&y.numerators)
                .zip(&self.chain_denoms)
                .map(|((&a, &b), &d)| (a + b).min(d))
                .collect(),
        })
    }

    /// Complement `1 - x`, componentwise.
    pub fn neg(&self, x: &MVElement) -> Result<MVElement, MvError> {
        self.check_element(x)?;
        Ok(MVElement {
            numerators: x
                .numerators
                .iter()
                .zip(&self.chain_denoms)
                .map(|(&a, &d)| d - a)
                .collect(),
        })
    }

    /// The defined order: `x ≤ y` iff `¬(¬x ⊕ y) ⊕ y = y`.
    pub fn leq_el(&self, x: &MVElement, y: &MVElement) -> Result<bool, MvError> {
        let nx = self.neg(x)?;
        let inner = self.neg(&self.oplus(&nx, y)?)?;
        Ok(self.oplus(&inner, y)? == *y)
    }

    pub fn index_of(&self, e: &MVElement) -> Result<u64, MvError> {
        self.check_element(e)?;
        Ok(e.numerators
            .iter()
            .zip(&self.strides)
            .map(|(&k, &s)| k * s)
            .sum())
    }

    pub fn element_at(&self, mut index: u64) -> Result<MVElement, MvError> {
        if index >= self.size {
            return Err(MvError::ElementMismatch);
        }
        let mut numerators = vec![0u64; self.chain_denoms.len()];
        for (i, &s) in self.strides.iter().enumerate() {
            numerators[i] = index / s;
            index %= s;
        }
        Ok(MVElement { numerators })
    }

    /// All elements in lexicographic order of numerator tuples.
    pub fn elements(&self) -> impl Iterator<Item = MVElement> + '_ {
        (0..self.size).map(|i| self.element_at(i).expect("index in range"))
    }

    /// `{"w": [k, d(w)], …}`.
    pub fn element_to_json(&self, e: &MVElement) -> Result<serde_json::Value, MvError> {
        self.check_element(e)?;
        let mut map = serde_json::Map::new();
        for ((id, &k), &d) in self
            .point_ids
            .iter()
            .zip(&e.numerators)
            .zip(&self.chain_denoms)
        {
            map.insert(id.clone(), serde_json::json!([k, d]));
        }
        Ok(serde_json::Value::Object(map))
    }

    pub fn element_from_json(&self, v: &serde_json::Value) -> Result<MVElement, MvError> {
        let obj = v
            .as_object()
            .ok_or_else(|| MvError::BadElementJson("expected an object".to_string()))?;
        let mut numerators = vec![0u64; self.point_ids.len()];
        for (i, (id, &d)) in self.point_ids.iter().zip(&self.chain_denoms).enumerate() {
            let entry = obj
                .get(id)
                .ok_or_else(|| MvError::BadElementJson(format!("missing point {id:?}")))?;
            let pair = entry
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| MvError::BadElementJson(format!("{id:?} must be [k, n]")))?;
            let k = pair[0]
                .as_u64()
                .ok_or_else(|| MvError::BadElementJson("numerator must be a natural".into()))?;
            let n = pair[1]
                .as_u64()
                .ok_or_else(|| MvError::BadElementJson("denominator must be a natural".into()))?;
            if n != d || k > d {
                return Err(MvError::BadElementJson(format!(
                    "component {id:?} does not fit chain of denominator {d}"
                )));
            }
            numerators[i] = k;
        }
        if obj.len() != self.point_ids.len() {
            return Err(MvError::BadElementJson(
                "unexpected extra components".into(),
            ));
        }
        Ok(MVElement { numerators })
    }
}

/// Digit tables used by the exhaustive checks and the hom search.
struct Tables {
    size: usize,
    coords: usize,
    chains: Vec<u16>,
    strides: Vec<usize>,
    digits: Vec<u16>,
    neg: Vec<u32>,
}

impl Tables {
    fn build(a: &FiniteMVAlgebra) -> Result<Tables, MvError> {
        if a.size > u32::MAX as u64 {
            return Err(MvError::TooLarge);
        }
        if a.chain_denoms.iter().any(|&d| d > u16::MAX as u64 / 2) {
            return Err(MvError::TooLarge);
        }
        let size = a.size as usize;
        let coords = a.chain_denoms.len();
        let chains: Vec<u16> = a.chain_denoms.iter().map(|&d| d as u16).collect();
        let strides: Vec<usize> = a.strides.iter().map(|&s| s as usize).collect();
        let mut digits = vec![0u16; size * coords];
        for i in 0..size {
            let e = a.element_at(i as u64).expect("in range");
            for (c, &k) in e.numerators.iter().enumerate() {
                digits[i * coords + c] = k as u16;
            }
        }
        let neg = (0..size)
            .map(|i| {
                let mut idx = 0usize;
                for c in 0..coords {
                    idx += (chains[c] - digits[i * coords + c]) as usize * strides[c];
                }
                idx as u32
            })
            .collect();
        Ok(Tables {
            size,
            coords,
            chains,
            strides,
            digits,
            neg,
        })
    }

    #[inline]
    fn oplus(&self, i: u32, j: u32) -> u32 {
        let di = &self.digits[i as usize * self.coords..][..self.coords];
        let dj = &self.digits[j as usize * self.coords..][..self.coords];
        let mut idx = 0usize;
        for c in 0..self.coords {
            let s = (di[c] + dj[c]).min(self.chains[c]);
            idx += s as usize * self.strides[c];
        }
        idx as u32
    }

    #[inline]
    fn neg(&self, i: u32) -> u32 {
        self.neg[i as usize]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomResult {
    pub name: &'static str,
    pub pass: bool,
    pub witness: Option<Vec<MVElement>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub algebra_size: u64,
    pub pass: bool,
    pub axioms: Vec<AxiomResult>,
}

/// Exhaustively verifies the monoid laws, involution, top absorption, the
/// characteristic axiom, and (as a derived fact) commutativity.
pub fn check_mv_axioms(a: &FiniteMVAlgebra, budget: u64) -> Result<AxiomReport, MvError> {
    if a.size > budget {
        return Err(MvError::Budget {
            needed: a.size,
            budget,
        });
    }
    let t = Tables::build(a)?;
    let oplus = |i: u32, j: u32| t.oplus(i, j);
    run_axiom_checks(a, &t, oplus)
}

/// Same checks with `⊕` replaced by wrap-around addition (addition mod 1);
/// the characteristic axiom then fails and the report carries a witness.
pub fn check_mv_axioms_mutated(a: &FiniteMVAlgebra, budget: u64) -> Result<AxiomReport, MvError> {
    if a.size > budget {
        return Err(MvError::Budget {
            needed: a.size,
            budget,
        });
    }
    let t = Tables::build(a)?;
    let oplus = |i: u32, j: u32| {
        let di = &t.digits[i as usize * t.coords..][..t.coords];
        let dj = &t.digits[j as usize * t.coords..][..t.coords];
        let mut idx = 0usize;
        for c in 0..t.coords {
            let d = t.chains[c];
            let s = if d == 0 { 0 } else { (di[c] + dj[c]) % d };
            idx += s as usize * t.strides[c];
        }
        idx as u32
    };
    run_axiom_checks(a, &t, oplus)
}

fn run_axiom_checks(
    a: &FiniteMVAlgebra,
    t: &Tables,
    oplus: impl Fn(u32, u32) -> u32,
) -> Result<AxiomReport, MvError> {
    let n = t.size as u32;
    let neg = |i: u32| t.neg(i);
    let top = neg(0);
    let wit = |idxs: &[u32]| -> Option<Vec<MVElement>> {
        Some(
            idxs.iter()
                .map(|&i| a.element_at(i as u64).expect("in range"))
                .collect(),
        )
    };

    let mut axioms = Vec::new();

    let mut result = AxiomResult {
        name: "associativity",
        pass: true,
        witness: None,
    };
    'assoc: for i in 0..n {
        for j in 0..n {
            let ij = oplus(i, j);
            for k in 0..n {
                if oplus(ij, k) != oplus(i, oplus(j, k)) {
                    result.pass = false;
                    result.witness = wit(&[i, j, k]);
                    break 'assoc;
                }
            }
        }
    }
    axioms.push(result);

    let mut result = AxiomResult {
        name: "left-identity",
        pass: true,
        witness: None,
    };
    for i in 0..n {
        if oplus(0, i) != i {
            result.pass = false;
            result.witness = wit(&[i]);
            break;
        }
    }
    axioms.push(result);

    let mut result = AxiomResult {
        name: "right-identity",
        pass: true,
        witness: None,
    };
    for i in 0..n {
        if oplus(i, 0) != i {
            result.pass = false;
            result.witness = wit(&[i]);
            break;
        }
    }
    axioms.push(result);

    let mut result = AxiomResult {
        name: "involution",
        pass: true,
        witness: None,
    };
    for i in 0..n {
        if neg(neg(i)) != i {
            result.pass = false;
            result.witness = wit(&[i]);
            break;
        }
    }
    axioms.push(result);

    let mut result = AxiomResult {
        name: "top-absorption",
        pass: true,
        witness: None,
    };
    for i in 0..n {
        if oplus(top, i) != top {
            result.pass = false;
            result.witness = wit(&[i]);
            break;
        }
    }
    axioms.push(result);

    let mut result = AxiomResult {
        name: "characteristic",
        pass: true,
        witness: None,
    };
    'charr: for i in 0..n {
        for j in 0..n {
            let lhs = oplus(neg(oplus(neg(i), j)), j);
            let rhs = oplus(neg(oplus(neg(j), i)), i);
            if lhs != rhs {
                result.pass = false;
                result.witness = wit(&[i, j]);
                break 'charr;
            }
        }
    }
    axioms.push(result);

    let mut result = AxiomResult {
        name: "commutativity",
        pass: true,
        witness: None,
    };
    'comm: for i in 0..n {
        for j in 0..n {
            if oplus(i, j) != oplus(j, i) {
                result.pass = false;
                result.witness = wit(&[i, j]);
                break 'comm;
            }
        }
    }
    axioms.push(result);

    Ok(AxiomReport {
        algebra_size: a.size,
        pass: axioms.iter().all(|r| r.pass),
        axioms,
    })
}

/// A total operation-preserving map, tabulated on element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MVHomomorphism {
    dom: FiniteMVAlgebra,
    cod: FiniteMVAlgebra,
    table: Vec<u64>,
}

impl MVHomomorphism {
    pub fn from_table(
        dom: FiniteMVAlgebra,
        cod: FiniteMVAlgebra,
        table: Vec<u64>,
    ) -> Result<Self, MvError> {
        if table.len() as u64 != dom.size() || table.iter().any(|&v| v >= cod.size()) {
            return Err(MvError::ElementMismatch);
        }
        Ok(MVHomomorphism { dom, cod, table })
    }

    pub fn identity(a: &FiniteMVAlgebra) -> Self {
        MVHomomorphism {
            dom: a.clone(),
            cod: a.clone(),
            table: (0..a.size()).collect(),
        }
    }

    pub fn dom(&self) -> &FiniteMVAlgebra {
        &self.dom
    }

    pub fn cod(&self) -> &FiniteMVAlgebra {
        &self.cod
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn apply(&self, e: &MVElement) -> Result<MVElement, MvError> {
        let i = self.dom.index_of(e)?;
        self.cod.element_at(self.table[i as usize])
    }

    /// `g ∘ f`.
    pub fn compose(g: &MVHomomorphism, f: &MVHomomorphism) -> Result<MVHomomorphism, MvError> {
        if f.cod != g.dom {
            return Err(MvError::AlgebraMismatch);
        }
        Ok(MVHomomorphism {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            table: f.table.iter().map(|&i| g.table[i as usize]).collect(),
        })
    }

    /// Exhaustive validation: zero, every complement, every `⊕` pair.
    pub fn validate_exhaustive(&self) -> Result<(), MvError> {
        let dt = Tables::build(&self.dom)?;
        let ct = Tables::build(&self.cod)?;
        let f = |i: u32| self.table[i as usize] as u32;
        if f(0) != 0 {
            return Err(MvError::Internal("zero is not preserved".to_string()));
        }
        for i in 0..dt.size as u32 {
            if f(dt.neg(i)) != ct.neg(f(i)) {
                return Err(MvError::Internal(format!(
                    "complement not preserved at index {i}"
                )));
            }
        }
        for i in 0..dt.size as u32 {
            for j in i..dt.size as u32 {
                if f(dt.oplus(i, j)) != ct.oplus(f(i), f(j)) {
                    return Err(MvError::Internal(format!(
                        "sum not preserved at indices ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Linear validation: zero, every complement, and every step of the
    /// canonical derivation of each element (adding one unit of its first
    /// nonzero coordinate). Every homomorphism passes; an arbitrary map
    /// passing it agrees with the unique operation-determined extension of
    /// its values on the coordinate units.
    pub fn validate_along_derivations(&self) -> Result<(), MvError> {
        let dt = Tables::build(&self.dom)?;
        let ct = Tables::build(&self.cod)?;
        let f = |i: u32| self.table[i as usize] as u32;
        if f(0) != 0 {
            return Err(MvError::Internal("zero is not preserved".to_string()));
        }
        for i in 0..dt.size as u32 {
            if f(dt.neg(i)) != ct.neg(f(i)) {
                return Err(MvError::Internal(format!(
                    "complement not preserved at index {i}"
                )));
            }
        }
        for i in 0..dt.size {
            let digits = &dt.digits[i * dt.coords..][..dt.coords];
            let Some(c) = digits.iter().position(|&k| k > 0) else {
                continue;
            };
            let parent = (i - dt.strides[c]) as u32;
            let unit = dt.strides[c] as u32;
            if f(i as u32) != ct.oplus(f(parent), f(unit)) {
                return Err(MvError::Internal(format!(
                    "derivation step not preserved at index {i}"
                )));
            }
        }
        Ok(())
    }
}

/// Divisibility criterion for the existence of a chain homomorphism.
pub fn hom_exists_chain(m: u64, n: u64) -> Result<bool, MvError> {
    if m == 0 || n == 0 {
        return Err(MvError::ZeroChain);
    }
    Ok(n.is_multiple_of(m))
}

/// All homomorphisms `dom → cod`, enumerated by a depth-first search over
/// images with closure under `⊕`, `¬`, and `0` propagated after every
/// choice; branches die at the first violated constraint, so the search is
/// exhaustive over total maps without materializing them. The budget bounds
/// the number of image assignments the search may perform.
pub fn enumerate_homs_bruteforce(
    dom: &FiniteMVAlgebra,
    cod: &FiniteMVAlgebra,
    budget: u64,
) -> Result<Vec<MVHomomorphism>, MvError> {
    if dom.size() > budget || cod.size() > budget {
        return Err(MvError::SearchBudget { budget });
    }
    let dt = Tables::build(dom)?;
    let ct = Tables::build(cod)?;
    let mut search = Search {
        dom: &dt,
        cod: &ct,
        assign: vec![UNASSIGNED; dt.size],
        trail: Vec::with_capacity(dt.size),
        nodes: 0,
        budget,
        results: Vec::new(),
    };
    if search.check_or_assign(0, 0)? && search.propagate(0)? {
        search.dfs()?;
    }
    let mut tables = search.results;
    tables.sort();
    Ok(tables
        .into_iter()
        .map(|t| MVHomomorphism {
            dom: dom.clone(),
            cod: cod.clone(),
            table: t.into_iter().map(u64::from).collect(),
        })
        .collect())
}

const UNASSIGNED: u32 = u32::MAX;

struct Search<'t> {
    dom: &'t Tables,
    cod: &'t Tables,
    assign: Vec<u32>,
    trail: Vec<u32>,
    nodes: u64,
    budget: u64,
    results: Vec<Vec<u32>>,
}

impl Search<'_> {
    fn check_or_assign(&mut self, a: u32, v: u32) -> Result<bool, MvError> {
        let cur = self.assign[a as usize];
        if cur != UNASSIGNED {
            return Ok(cur == v);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(MvError::SearchBudget {
                budget: self.budget,
            });
        }
        self.assign[a as usize] = v;
        self.trail.push(a);
        Ok(true)
    }

    /// Walks the `⊕`-powers of a freshly branched element together with
    /// their complements, then verifies all `⊕` constraints among the newly
    /// assigned elements whose targets already have values. Saturation and
    /// complement clashes kill hopeless branches long before the general
    /// sweep would reach them.
    fn branch_closure(&mut self, a: u32, v: u32, mark: usize) -> Result<bool, MvError> {
        let mut b = a;
        let mut fb = v;
        loop {
            if !self.check_or_assign(self.dom.neg(b), self.cod.neg(fb))? {
                return Ok(false);
            }
            let nb = self.dom.oplus(b, a);
            let nfb = self.cod.oplus(fb, v);
            if !self.check_or_assign(nb, nfb)? {
                return Ok(false);
            }
            if nb == b {
                break;
            }
            b = nb;
            fb = nfb;
        }
        for i in mark..self.trail.len() {
            for j in i..self.trail.len() {
                let (u, w) = (self.trail[i], self.trail[j]);
                let target = self.assign[self.dom.oplus(u, w) as usize];
                if target != UNASSIGNED {
                    let expect = self
                        .cod
                        .oplus(self.assign[u as usize], self.assign[w as usize]);
                    if target != expect {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Closes the assignment under `¬` and `⊕` starting from trail position
    /// `from`; every pair of assigned elements ends up checked because each
    /// new element sweeps the whole trail as it is processed.
    fn propagate(&mut self, from: usize) -> Result<bool, MvError> {
        let mut qi = from;
        while qi < self.trail.len() {
            let a = self.trail[qi];
            let v = self.assign[a as usize];
            if !self.check_or_assign(self.dom.neg(a), self.cod.neg(v))? {
                return Ok(false);
            }
            let mut ti = 0;
            while ti < self.trail.len() {
                let c = self.trail[ti];
                let u = self.assign[c as usize];
                if !self.check_or_assign(self.dom.oplus(a, c), self.cod.oplus(v, u))? {
                    return Ok(false);
                }
                ti += 1;
            }
            qi += 1;
        }
        Ok(true)
    }

    fn dfs(&mut self) -> Result<(), MvError> {
        if self.trail.len() == self.dom.size {
            self.results.push(self.assign.clone());
            return Ok(());
        }
        let branch = self
            .assign
            .iter()
            .position(|&v| v == UNASSIGNED)
            .expect("incomplete assignment") as u32;
        for v in 0..self.cod.size as u32 {
            let mark = self.trail.len();
            let ok = self.check_or_assign(branch, v)?
                && self.branch_closure(branch, v, mark)?
                && self.propagate(mark)?;
            if ok {
                self.dfs()?;
            }
            for &t in &self.trail[mark..] {
                self.assign[t as usize] = UNASSIGNED;
            }
            self.trail.truncate(mark);
        }
        Ok(())
    }
}

/// `{"dom": …, "cod": …, "table": [[element, element], …]}`.
pub fn hom_to_json(h: &MVHomomorphism) -> Result<serde_json::Value, MvError> {
    let mut pairs = Vec::new();
    for (i, &v) in h.table().iter().enumerate() {
        let e = h.dom().element_at(i as u64)?;
        let img = h.cod().element_at(v)?;
        pairs.push(serde_json::json!([
            h.dom().element_to_json(&e)?,
            h.cod().element_to_json(&img)?,
        ]));
    }
    Ok(serde_json::json!({
        "dom": h.dom().presentation(),
        "cod": h.cod().presentation(),
        "table": pairs,
    }))
}

/// Reference oracle for tiny instances: literally every total map, filtered
/// by the exhaustive validity check.
pub fn enumerate_homs_naive(
    dom: &FiniteMVAlgebra,
    cod: &FiniteMVAlgebra,
    max_maps: u64,
) -> Result<Vec<Vec<u64>>, MvError> {
    let total = (0..dom.size()).try_fold(1u64, |acc, _| {
        acc.checked_mul(cod.size()).filter(|&t| t <= max_maps)
    });
    if total.is_none() {
        return Err(MvError::Budget {
            needed: u64::MAX,
            budget: max_maps,
        });
    }
    let mut out = Vec::new();
    let mut table = vec![0u64; dom.size() as usize];
    loop {
        let candidate = MVHomomorphism {
            dom: dom.clone(),
            cod: cod.clone(),
            table: table.clone(),
        };
        if candidate.validate_exhaustive().is_ok() {
            out.push(table.clone());
        }
        let mut i = table.len();
        loop {
            if i == 0 {
                out.sort();
                return Ok(out);
            }
            i -= 1;
            table[i] += 1;
            if table[i] < cod.size() {
                break;
            }
            table[i] = 0;
        }
    }
}
