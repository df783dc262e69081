//! Supernatural numbers: prime-indexed exponent vectors with values in
//! `N ∪ {∞}`, ordered pointwise.
//!
//! Positive integers embed via prime factorization (`ν_n`), and the pointwise
//! order restricted to them is exactly divisibility. Only eventually-constant
//! vectors with default exponent `0` or `∞` are representable here; that
//! fragment is closed under finite joins and meets and covers every value the
//! rest of the crate produces.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SupernatError {
    #[error("expected a positive integer, got 0")]
    ZeroNatural,
    #[error("{0} is not a prime number")]
    NotPrime(u64),
    #[error("exception for prime {0} equals the default exponent (non-canonical form)")]
    RedundantException(u64),
    #[error("default exponent must be 0 or \"inf\", got {0}")]
    BadDefault(u32),
    #[error("meet of an empty list is undefined")]
    EmptyMeet,
    #[error("unknown topology identity {0:?}")]
    UnknownIdentity(String),
}

/// An exponent in `N ∪ {∞}`; `Finite(n) < Infinite` for every `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

impl Exponent {
    pub fn is_finite(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    pub fn is_zero(self) -> bool {
        self == Exponent::Finite(0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(k) => write!(f, "{k}"),
            Exponent::Infinite => write!(f, "∞"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(k) => s.serialize_u32(*k),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Nat(u32),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Nat(k) => Ok(Exponent::Finite(k)),
            Raw::Word(w) if w == "inf" => Ok(Exponent::Infinite),
            Raw::Word(w) => Err(D::Error::custom(format!(
                "exponent must be a natural number or \"inf\", got {w:?}"
            ))),
        }
    }
}

/// A supernatural number in canonical form: a default exponent in `{0, ∞}`
/// applied to all primes, plus finitely many exceptions (each differing from
/// the default). Two values are equal iff their canonical forms coincide.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupernaturalNumber {
    default: Exponent,
    exceptions: BTreeMap<u64, Exponent>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl SupernaturalNumber {
    /// `ν_1`: the bottom element, exponent 0 everywhere.
    pub fn one() -> Self {
        SupernaturalNumber {
            default: Exponent::Finite(0),
            exceptions: BTreeMap::new(),
        }
    }

    /// The top element, exponent `∞` everywhere (the value of `ζ_∞`).
    pub fn all_infinite() -> Self {
        SupernaturalNumber {
            default: Exponent::Infinite,
            exceptions: BTreeMap::new(),
        }
    }

    /// Builds a value in canonical form, validating all invariants.
    pub fn new(
        default: Exponent,
        exceptions: impl IntoIterator<Item = (u64, Exponent)>,
    ) -> Result<Self, SupernatError> {
        match default {
            Exponent::Finite(0) | Exponent::Infinite => {}
            Exponent::Finite(k) => return Err(SupernatError::BadDefault(k)),
        }
        let mut map = BTreeMap::new();
        for (p, e) in exceptions {
            if !is_prime(p) {
                return Err(SupernatError::NotPrime(p));
            }
            if e == default {
                return Err(SupernatError::RedundantException(p));
            }
            map.insert(p, e);
        }
        Ok(SupernaturalNumber {
            default,
            exceptions: map,
        })
    }

    /// `ν_n` for a positive integer `n`, via unique prime factorization.
    pub fn from_natural(n: u64) -> Result<Self, SupernatError> {
        if n == 0 {
            return Err(SupernatError::ZeroNatural);
        }
        Ok(SupernaturalNumber {
            default: Exponent::Finite(0),
            exceptions: factorize(n)
                .into_iter()
                .map(|(p, k)| (p, Exponent::Finite(k)))
                .collect(),
        })
    }

    /// Single-prime value `p^e` over default 0; `e = 0` collapses to `ν_1`.
    pub fn from_prime_power(p: u64, e: Exponent) -> Result<Self, SupernatError> {
        if !is_prime(p) {
            return Err(SupernatError::NotPrime(p));
        }
        let mut exceptions = BTreeMap::new();
        if !e.is_zero() {
            exceptions.insert(p, e);
        }
        Ok(SupernaturalNumber {
            default: Exponent::Finite(0),
            exceptions,
        })
    }

    pub fn default_exponent(&self) -> Exponent {
        self.default
    }

    pub fn exceptions(&self) -> impl Iterator<Item = (u64, Exponent)> + '_ {
        self.exceptions.iter().map(|(&p, &e)| (p, e))
    }

    /// Exponent at a prime `p`; rejects non-prime arguments.
    pub fn exponent(&self, p: u64) -> Result<Exponent, SupernatError> {
        if !is_prime(p) {
            return Err(SupernatError::NotPrime(p));
        }
        Ok(self.exp_at(p))
    }

    /// Exponent lookup without the primality check; `p` must be prime.
    pub(crate) fn exp_at(&self, p: u64) -> Exponent {
        self.exceptions.get(&p).copied().unwrap_or(self.default)
    }

    /// Pointwise order. Decidable on the union of exception keys plus the
    /// default comparison.
    pub fn leq(&self, other: &Self) -> bool {
        if self.default > other.default {
            return false;
        }
        self.exceptions
            .keys()
            .chain(other.exceptions.keys())
            .all(|&p| self.exp_at(p) <= other.exp_at(p))
    }

    fn merge(&self, other: &Self, op: impl Fn(Exponent, Exponent) -> Exponent) -> Self {
        let default = op(self.default, other.default);
        let mut exceptions = BTreeMap::new();
        for &p in self.exceptions.keys().chain(other.exceptions.keys()) {
            let e = op(self.exp_at(p), other.exp_at(p));
            if e != default {
                exceptions.insert(p, e);
            }
        }
        SupernaturalNumber {
            default,
            exceptions,
        }
    }

    pub fn join_pair(&self, other: &Self) -> Self {
        self.merge(other, Exponent::max)
    }

    pub fn meet_pair(&self, other: &Self) -> Self {
        self.merge(other, Exponent::min)
    }

    /// Pointwise maximum; the empty join is `ν_1`.
    pub fn join(values: &[Self]) -> Self {
        values
            .iter()
            .fold(SupernaturalNumber::one(), |acc, v| acc.join_pair(v))
    }

    /// Pointwise minimum of a non-empty list.
    pub fn meet(values: &[Self]) -> Result<Self, SupernatError> {
        let (first, rest) = values.split_first().ok_or(SupernatError::EmptyMeet)?;
        Ok(rest.iter().fold(first.clone(), |acc, v| acc.meet_pair(v)))
    }

    /// True iff no exponent is `∞`, i.e. the value is some `ν_n`.
    pub fn is_finite(&self) -> bool {
        self.default == Exponent::Finite(0) && self.exceptions.values().all(|e| e.is_finite())
    }

    /// The `n` with `self = ν_n`, when the value is finite and fits in `u64`.
    pub fn to_natural(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        let mut n: u64 = 1;
        for (&p, &e) in &self.exceptions {
            let Exponent::Finite(k) = e else { return None };
            for _ in 0..k {
                n = n.checked_mul(p)?;
            }
        }
        Some(n)
    }

    /// True iff the value is `ν_{p^k}` for a prime `p` and finite `k ≥ 1` —
    /// exactly the completely join-irreducible elements of the lattice.
    pub fn is_prime_power_atom(&self) -> bool {
        self.default == Exponent::Finite(0)
            && self.exceptions.len() == 1
            && self
                .exceptions
                .values()
                .all(|e| matches!(e, Exponent::Finite(k) if *k >= 1))
    }

    /// The primes carrying a nonzero exponent among the exceptions, with
    /// their exponents (`∞` emitted as a marker). Together with the default
    /// pattern this reconstructs the value; for finite values the join of the
    /// listed prime powers alone does.
    pub fn irreducible_decomposition(&self) -> Vec<(u64, Exponent)> {
        self.exceptions
            .iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(&p, &e)| (p, e))
            .collect()
    }

    /// The same default everywhere, with `∞` kept at exception primes that
    /// carry it and everything else dropped to the finite floor. Joining this
    /// with the bounded prime-power joins reconstructs the value.
    pub fn infinite_part(&self) -> Self {
        let mut exceptions = BTreeMap::new();
        for (&p, &e) in &self.exceptions {
            let masked = if e == Exponent::Infinite {
                Exponent::Infinite
            } else {
                Exponent::Finite(0)
            };
            if masked != self.default {
                exceptions.insert(p, masked);
            }
        }
        SupernaturalNumber {
            default: self.default,
            exceptions,
        }
    }

    /// All divisors, ascending; `None` when the value is not finite.
    pub fn divisors(&self) -> Option<Vec<Self>> {
        let n = self.to_natural()?;
        let mut ds: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        ds.sort_unstable();
        Some(
            ds.into_iter()
                .map(|d| SupernaturalNumber::from_natural(d).expect("d >= 1"))
                .collect(),
        )
    }

    /// Structural total order used for deterministic enumeration; unrelated
    /// to the divisibility order.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.default
            .cmp(&other.default)
            .then_with(|| self.exceptions.cmp(&other.exceptions))
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn factor(p: u64, e: Exponent) -> String {
            match e {
                Exponent::Finite(1) => format!("{p}"),
                other => format!("{p}^{other}"),
            }
        }
        match self.default {
            Exponent::Finite(_) => {
                if self.exceptions.is_empty() {
                    write!(f, "1")
                } else {
                    let parts: Vec<_> = self
                        .exceptions
                        .iter()
                        .map(|(&p, &e)| factor(p, e))
                        .collect();
                    write!(f, "{}", parts.join("·"))
                }
            }
            Exponent::Infinite => {
                if self.exceptions.is_empty() {
                    write!(f, "∞")
                } else {
                    let parts: Vec<_> = self
                        .exceptions
                        .iter()
                        .map(|(&p, &e)| format!("{p}^{e}"))
                        .collect();
                    write!(f, "∞({})", parts.join(","))
                }
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnJson {
    default: Exponent,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    exceptions: BTreeMap<String, Exponent>,
}

impl Serialize for SupernaturalNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SnJson {
            default: self.default,
            exceptions: self
                .exceptions
                .iter()
                .map(|(p, &e)| (p.to_string(), e))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SupernaturalNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = SnJson::deserialize(d)?;
        let mut exceptions = Vec::new();
        for (key, e) in raw.exceptions {
            let p: u64 = key
                .parse()
                .map_err(|_| D::Error::custom(format!("prime key {key:?} is not a number")))?;
            exceptions.push((p, e));
        }
        SupernaturalNumber::new(raw.default, exceptions).map_err(D::Error::custom)
    }
}

/// The six subbasis families for topologies on the supernatural numbers, as
/// parametric membership predicates.
///
/// * `T1`: `ν(p) > k`
/// * `T2`: `ν(p) ≥ k`
/// * `T3`: `ν ≥ ν_n`
/// * `T4`: `ν > ν_n`
/// * `T5`: `not (ν ≤ ν_n)`
/// * `T6`: `not (ν < ν_n)`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum TopologyFamily {
    T1 { p: u64, k: u32 },
    T2 { p: u64, k: u32 },
    T3 { n: u64 },
    T4 { n: u64 },
    T5 { n: u64 },
    T6 { n: u64 },
}

impl TopologyFamily {
    pub fn validate(&self) -> Result<(), SupernatError> {
        match *self {
            TopologyFamily::T1 { p, .. } | TopologyFamily::T2 { p, .. } if !is_prime(p) => {
                Err(SupernatError::NotPrime(p))
            }
            TopologyFamily::T3 { n }
            | TopologyFamily::T4 { n }
            | TopologyFamily::T5 { n }
            | TopologyFamily::T6 { n }
                if n == 0 =>
            {
                Err(SupernatError::ZeroNatural)
            }
            _ => Ok(()),
        }
    }

    pub fn contains(&self, a: &SupernaturalNumber) -> bool {
        match *self {
            TopologyFamily::T1 { p, k } => a.exp_at(p) > Exponent::Finite(k),
            TopologyFamily::T2 { p, k } => a.exp_at(p) >= Exponent::Finite(k),
            TopologyFamily::T3 { n } => {
                let nu = SupernaturalNumber::from_natural(n).expect("n >= 1");
                nu.leq(a)
            }
            TopologyFamily::T4 { n } => {
                let nu = SupernaturalNumber::from_natural(n).expect("n >= 1");
                nu.leq(a) && *a != nu
            }
            TopologyFamily::T5 { n } => {
                let nu = SupernaturalNumber::from_natural(n).expect("n >= 1");
                !a.leq(&nu)
            }
            TopologyFamily::T6 { n } => {
                let nu = SupernaturalNumber::from_natural(n).expect("n >= 1");
                !(a.leq(&nu) && *a != nu)
            }
        }
    }
}

/// Membership test for a subbasis family; validates the parameters first.
pub fn topology_member(
    family: &TopologyFamily,
    a: &SupernaturalNumber,
) -> Result<bool, SupernatError> {
    family.validate()?;
    Ok(family.contains(a))
}

/// Outcome of one catalog identity evaluated extensionally on a universe.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub id: String,
    pub pass: bool,
    pub instances: u64,
    pub counterexample: Option<IdentityCounterexample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCounterexample {
    pub params: String,
    pub value: SupernaturalNumber,
    pub lhs: bool,
    pub rhs: bool,
}

/// The fixed catalog of subbasis identities and counterexample
/// reproductions. Each id evaluates both sides pointwise on a test universe.
pub const TOPOLOGY_IDENTITY_IDS: &[&str] = &[
    "t2_t1_pos_k",
    "t2_t1_k0",
    "t3_t2",
    "t1_eq_t3_pk",
    "t4_t3",
    "t5_t1",
    "t6_t5",
    "t5_t6",
    "t5_complement_pair",
    "t4_not_le_t5",
    "t5_not_le_t4",
    "t1_not_le_t4",
];

const IDENTITY_PRIMES: &[u64] = &[2, 3, 5, 7, 11];
const T4_UNION_BOUND: u64 = 200;
const WITNESS_BOUND: u64 = 50;

struct IdentityRun {
    instances: u64,
    counterexample: Option<IdentityCounterexample>,
}

impl IdentityRun {
    fn new() -> Self {
        IdentityRun {
            instances: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, params: &str, value: &SupernaturalNumber, lhs: bool, rhs: bool) {
        self.instances += 1;
        if lhs != rhs && self.counterexample.is_none() {
            self.counterexample = Some(IdentityCounterexample {
                params: params.to_string(),
                value: value.clone(),
                lhs,
                rhs,
            });
        }
    }
}

/// Evaluates a catalog identity extensionally on `universe`.
pub fn check_topology_identity(
    id: &str,
    universe: &[SupernaturalNumber],
) -> Result<IdentityCheck, SupernatError> {
    let mut run = IdentityRun::new();
    match id {
        // {ν(p) ≥ k} = {ν(p) > k-1} for k ≥ 1
        "t2_t1_pos_k" => {
            for &p in &[2u64, 3, 5] {
                for k in 1u32..=3 {
                    for a in universe {
                        let lhs = TopologyFamily::T2 { p, k }.contains(a);
                        let rhs = TopologyFamily::T1 { p, k: k - 1 }.contains(a);
                        run.check(&format!("p={p},k={k}"), a, lhs, rhs);
                    }
                }
            }
        }
        // {ν(p) ≥ 0} is the whole space
        "t2_t1_k0" => {
            for &p in &[2u64, 3, 5] {
                for a in universe {
                    let lhs = TopologyFamily::T2 { p, k: 0 }.contains(a);
                    run.check(&format!("p={p}"), a, lhs, true);
                }
            }
        }
        // {ν ≥ ν_n} = ∩ {ν(p_i) ≥ k_i} over the factorization of n
        "t3_t2" => {
            for &n in &[1u64, 2, 6, 12, 360] {
                let factors = factorize(n);
                for a in universe {
                    let lhs = TopologyFamily::T3 { n }.contains(a);
                    let rhs = factors
                        .iter()
                        .all(|&(p, k)| TopologyFamily::T2 { p, k }.contains(a));
                    run.check(&format!("n={n}"), a, lhs, rhs);
                }
            }
        }
        // {ν(p) > k} = {ν ≥ ν_{p^{k+1}}}
        "t1_eq_t3_pk" => {
            for &p in &[2u64, 3, 5] {
                for k in 0u32..=2 {
                    let n = p.pow(k + 1);
                    for a in universe {
                        let lhs = TopologyFamily::T1 { p, k }.contains(a);
                        let rhs = TopologyFamily::T3 { n }.contains(a);
                        run.check(&format!("p={p},k={k}"), a, lhs, rhs);
                    }
                }
            }
        }
        // {ν > ν_n} = ∪ {ν ≥ ν_m} over proper multiples m of n, m ≤ 200.
        // The union is infinitary in general; the bound is part of the check.
        "t4_t3" => {
            for &n in &[1u64, 2, 6, 12] {
                let multiples: Vec<u64> = (1..=T4_UNION_BOUND)
                    .filter(|m| m % n == 0 && *m != n)
                    .collect();
                for a in universe {
                    let lhs = TopologyFamily::T4 { n }.contains(a);
                    let rhs = multiples
                        .iter()
                        .any(|&m| TopologyFamily::T3 { n: m }.contains(a));
                    run.check(&format!("n={n}"), a, lhs, rhs);
                }
            }
        }
        // {ν ≰ ν_n} = ∪_p {ν(p) > ν_n(p)}, primes bounded by 11
        "t5_t1" => {
            for &n in &[1u64, 2, 6, 12] {
                let nu = SupernaturalNumber::from_natural(n)?;
                for a in universe {
                    let lhs = TopologyFamily::T5 { n }.contains(a);
                    let rhs = IDENTITY_PRIMES.iter().any(|&p| {
                        let Exponent::Finite(k) = nu.exp_at(p) else {
                            unreachable!("ν_n is finite")
                        };
                        TopologyFamily::T1 { p, k }.contains(a)
                    });
                    run.check(&format!("n={n}"), a, lhs, rhs);
                }
            }
        }
        // {ν ≮ ν_n} = ∩ {ν ≰ ν_m} over proper divisors m of n (finite, exact)
        "t6_t5" => {
            for &n in &[2u64, 6, 12] {
                let divisors: Vec<u64> = (1..n).filter(|m| n % m == 0).collect();
                for a in universe {
                    let lhs = TopologyFamily::T6 { n }.contains(a);
                    let rhs = divisors
                        .iter()
                        .all(|&m| TopologyFamily::T5 { n: m }.contains(a));
                    run.check(&format!("n={n}"), a, lhs, rhs);
                }
            }
        }
        // {ν ≰ ν_n} = ∪_p {ν ≮ ν_{np}}, primes bounded by 11
        "t5_t6" => {
            for &n in &[1u64, 2, 6] {
                for a in universe {
                    let lhs = TopologyFamily::T5 { n }.contains(a);
                    let rhs = IDENTITY_PRIMES
                        .iter()
                        .any(|&p| TopologyFamily::T6 { n: n * p }.contains(a));
                    run.check(&format!("n={n}"), a, lhs, rhs);
                }
            }
        }
        // {ν ≰ ν_2} is the whole space minus {ν_1, ν_2}
        "t5_complement_pair" => {
            let one = SupernaturalNumber::one();
            let two = SupernaturalNumber::from_natural(2)?;
            for a in universe {
                let lhs = TopologyFamily::T5 { n: 2 }.contains(a);
                let rhs = *a != one && *a != two;
                run.check("n=2", a, lhs, rhs);
            }
        }
        // {ν > ν_2} is nonempty yet misses ν_m for every prime m ≠ 2, so it
        // is not co-finite and cannot lie in the topology generated by the
        // co-finite T5 sets.
        "t4_not_le_t5" => {
            let four = SupernaturalNumber::from_natural(4)?;
            let t4 = TopologyFamily::T4 { n: 2 };
            run.check("ν_4 ∈ T4(2)", &four, t4.contains(&four), true);
            for m in (3..=WITNESS_BOUND).filter(|&m| is_prime(m)) {
                let nu = SupernaturalNumber::from_natural(m)?;
                run.check(&format!("ν_{m} ∉ T4(2)"), &nu, t4.contains(&nu), false);
            }
        }
        // T5(2) separates ν_3 from {ν_1, ν_2}, but the only T4 basic set
        // within the bound containing ν_3 is T4(1), which also contains ν_2.
        "t5_not_le_t4" => {
            let two = SupernaturalNumber::from_natural(2)?;
            let three = SupernaturalNumber::from_natural(3)?;
            run.check(
                "ν_3 ∈ T5(2)",
                &three,
                TopologyFamily::T5 { n: 2 }.contains(&three),
                true,
            );
            for n in 1..=WITNESS_BOUND {
                let contains_three = TopologyFamily::T4 { n }.contains(&three);
                run.check(
                    &format!("ν_3 ∈ T4({n}) only for n=1"),
                    &three,
                    contains_three,
                    n == 1,
                );
            }
            run.check(
                "ν_2 ∈ T4(1)",
                &two,
                TopologyFamily::T4 { n: 1 }.contains(&two),
                true,
            );
            run.check(
                "ν_2 ∉ T5(2)",
                &two,
                TopologyFamily::T5 { n: 2 }.contains(&two),
                false,
            );
        }
        // A = {ν(2) > 0} contains ν_2; the only bounded T4 set containing
        // ν_2 is T4(1), which contains ν_3 ∉ A.
        "t1_not_le_t4" => {
            let two = SupernaturalNumber::from_natural(2)?;
            let three = SupernaturalNumber::from_natural(3)?;
            let a_set = TopologyFamily::T1 { p: 2, k: 0 };
            run.check("ν_2 ∈ A", &two, a_set.contains(&two), true);
            for n in 1..=WITNESS_BOUND {
                let contains_two = TopologyFamily::T4 { n }.contains(&two);
                run.check(
                    &format!("ν_2 ∈ T4({n}) only for n=1"),
                    &two,
                    contains_two,
                    n == 1,
                );
            }
            run.check(
                "ν_3 ∈ T4(1)",
                &three,
                TopologyFamily::T4 { n: 1 }.contains(&three),
                true,
            );
            run.check("ν_3 ∉ A", &three, a_set.contains(&three), false);
        }
        other => return Err(SupernatError::UnknownIdentity(other.to_string())),
    }
    Ok(IdentityCheck {
        id: id.to_string(),
        pass: run.counterexample.is_none(),
        instances: run.instances,
        counterexample: run.counterexample,
    })
}

/// The default test universe: all divisors of `2^4·3^3·5^2·7`, the same with
/// each single exponent replaced by `∞`, and the default-`∞` patterns with at
/// most one finite exception.
pub fn standard_universe() -> Vec<SupernaturalNumber> {
    let primes = [2u64, 3, 5, 7];
    let bounds = [4u32, 3, 2, 1];
    let mut out = Vec::new();

    let mut divisor_vectors = Vec::new();
    for a in 0..=bounds[0] {
        for b in 0..=bounds[1] {
            for c in 0..=bounds[2] {
                for d in 0..=bounds[3] {
                    divisor_vectors.push([a, b, c, d]);
                }
            }
        }
    }
    for v in &divisor_vectors {
        let exps = v.map(Exponent::Finite);
        out.push(from_vector(&primes, &exps));
        for inf_at in 0..primes.len() {
            let mut exps = exps;
            exps[inf_at] = Exponent::Infinite;
            out.push(from_vector(&primes, &exps));
        }
    }
    out.push(SupernaturalNumber::all_infinite());
    for &p in &primes {
        for e in 0..=2u32 {
            out.push(
                SupernaturalNumber::new(Exponent::Infinite, [(p, Exponent::Finite(e))])
                    .expect("canonical"),
            );
        }
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    out.dedup();
    out
}

fn from_vector(primes: &[u64], exps: &[Exponent]) -> SupernaturalNumber {
    SupernaturalNumber::new(
        Exponent::Finite(0),
        primes
            .iter()
            .zip(exps)
            .filter(|(_, e)| !e.is_zero())
            .map(|(&p, &e)| (p, e)),
    )
    .expect("canonical")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nu(n: u64) -> SupernaturalNumber {
        SupernaturalNumber::from_natural(n).unwrap()
    }

    #[test]
    fn from_natural_examples() {
        assert_eq!(nu(1), SupernaturalNumber::one());
        assert_eq!(
            nu(12),
            SupernaturalNumber::new(
                Exponent::Finite(0),
                [(2, Exponent::Finite(2)), (3, Exponent::Finite(1))]
            )
            .unwrap()
        );
        assert_eq!(
            nu(7),
            SupernaturalNumber::new(Exponent::Finite(0), [(7, Exponent::Finite(1))]).unwrap()
        );
        assert_eq!(
            SupernaturalNumber::from_natural(0),
            Err(SupernatError::ZeroNatural)
        );
    }

    #[test]
    fn exponent_lookup() {
        assert_eq!(nu(12).exponent(2).unwrap(), Exponent::Finite(2));
        assert_eq!(nu(12).exponent(5).unwrap(), Exponent::Finite(0));
        assert_eq!(
            SupernaturalNumber::all_infinite().exponent(13).unwrap(),
            Exponent::Infinite
        );
        assert_eq!(nu(12).exponent(4), Err(SupernatError::NotPrime(4)));
    }

    #[test]
    fn leq_examples() {
        assert!(nu(2).leq(&nu(6)));
        assert!(!nu(4).leq(&nu(6)));
        for n in [1u64, 7, 360] {
            assert!(nu(n).leq(&SupernaturalNumber::all_infinite()));
        }
    }

    #[test]
    fn join_meet_examples() {
        assert_eq!(SupernaturalNumber::join(&[nu(4), nu(6)]), nu(12));
        assert_eq!(SupernaturalNumber::meet(&[nu(4), nu(6)]).unwrap(), nu(2));
        assert_eq!(SupernaturalNumber::join(&[]), nu(1));
        assert_eq!(SupernaturalNumber::meet(&[]), Err(SupernatError::EmptyMeet));
    }

    #[test]
    fn finiteness() {
        assert!(nu(12).is_finite());
        let two_inf =
            SupernaturalNumber::new(Exponent::Finite(0), [(2, Exponent::Infinite)]).unwrap();
        assert!(!two_inf.is_finite());
        assert!(!SupernaturalNumber::all_infinite().is_finite());
    }

    #[test]
    fn prime_power_atoms() {
        assert!(nu(8).is_prime_power_atom());
        assert!(!nu(6).is_prime_power_atom());
        assert!(!nu(1).is_prime_power_atom());
        let two_inf =
            SupernaturalNumber::new(Exponent::Finite(0), [(2, Exponent::Infinite)]).unwrap();
        assert!(!two_inf.is_prime_power_atom());
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(
            nu(12).irreducible_decomposition(),
            vec![(2, Exponent::Finite(2)), (3, Exponent::Finite(1))]
        );
        assert_eq!(nu(1).irreducible_decomposition(), vec![]);
        let two_inf =
            SupernaturalNumber::new(Exponent::Finite(0), [(2, Exponent::Infinite)]).unwrap();
        assert_eq!(
            two_inf.irreducible_decomposition(),
            vec![(2, Exponent::Infinite)]
        );
    }

    #[test]
    fn canonical_form_rejects_redundant_exception() {
        assert_eq!(
            SupernaturalNumber::new(Exponent::Finite(0), [(2, Exponent::Finite(0))]),
            Err(SupernatError::RedundantException(2))
        );
        assert_eq!(
            SupernaturalNumber::new(Exponent::Infinite, [(3, Exponent::Infinite)]),
            Err(SupernatError::RedundantException(3))
        );
        assert_eq!(
            SupernaturalNumber::new(Exponent::Finite(2), []),
            Err(SupernatError::BadDefault(2))
        );
    }

    #[test]
    fn topology_member_examples() {
        assert!(topology_member(&TopologyFamily::T1 { p: 2, k: 0 }, &nu(2)).unwrap());
        assert!(!topology_member(&TopologyFamily::T4 { n: 2 }, &nu(3)).unwrap());
        assert!(topology_member(&TopologyFamily::T5 { n: 2 }, &nu(3)).unwrap());
        assert_eq!(
            topology_member(&TopologyFamily::T1 { p: 4, k: 0 }, &nu(2)),
            Err(SupernatError::NotPrime(4))
        );
    }

    #[test]
    fn identity_catalog_passes_on_standard_universe() {
        let universe = standard_universe();
        for id in TOPOLOGY_IDENTITY_IDS {
            let report = check_topology_identity(id, &universe).unwrap();
            assert!(report.pass, "{id}: {:?}", report.counterexample);
            assert!(report.instances > 0);
        }
        assert_eq!(
            check_topology_identity("bogus", &universe).unwrap_err(),
            SupernatError::UnknownIdentity("bogus".into())
        );
    }

    #[test]
    fn divisibility_matches_order_small() {
        for m in 1u64..=60 {
            for n in 1u64..=60 {
                assert_eq!(nu(m).leq(&nu(n)), n % m == 0, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn embedding_is_injective_and_matches_lcm_gcd() {
        let mut seen = std::collections::BTreeSet::new();
        for n in 1u64..=10_000 {
            let v = nu(n);
            assert!(seen.insert(format!("{v}")), "collision at {n}");
            assert_eq!(v.to_natural(), Some(n));
        }
        for a in 1u64..=80 {
            for b in 1u64..=80 {
                assert_eq!(nu(a).join_pair(&nu(b)), nu(num_integer::lcm(a, b)));
                assert_eq!(nu(a).meet_pair(&nu(b)), nu(num_integer::gcd(a, b)));
            }
        }
    }

    #[test]
    fn join_irreducibility_brute_force_on_divisors_of_60() {
        // Finite-lattice brute force: d is join-irreducible in the divisor
        // lattice of 60 iff no subset of strictly smaller divisors joins to
        // it. Compared against the prime-power predicate.
        let divisors: Vec<u64> = (1..=60).filter(|d| 60 % d == 0).collect();
        for &d in &divisors {
            let below: Vec<u64> = divisors
                .iter()
                .copied()
                .filter(|&b| d % b == 0 && b != d)
                .collect();
            let mut reducible = false;
            for mask in 0u32..(1 << below.len()) {
                let chosen: Vec<SupernaturalNumber> = below
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &b)| nu(b))
                    .collect();
                if SupernaturalNumber::join(&chosen) == nu(d) {
                    reducible = true;
                    break;
                }
            }
            assert_eq!(!reducible, nu(d).is_prime_power_atom(), "d={d}");
        }
    }

    #[test]
    fn infinite_part_reconstruction() {
        for a in standard_universe() {
            let mut parts: Vec<SupernaturalNumber> = vec![a.infinite_part()];
            for (p, e) in a.exceptions() {
                if let Exponent::Finite(k) = e {
                    if k > 0 {
                        parts.push(SupernaturalNumber::from_prime_power(p, e).unwrap());
                    }
                } else {
                    // finite approximations only; the infinite part covers p
                    let _ = p;
                }
            }
            assert_eq!(SupernaturalNumber::join(&parts), a);
        }
    }

    #[test]
    fn display_strings() {
        assert_eq!(nu(1).to_string(), "1");
        assert_eq!(nu(12).to_string(), "2^2·3");
        let two_inf =
            SupernaturalNumber::new(Exponent::Finite(0), [(2, Exponent::Infinite)]).unwrap();
        assert_eq!(two_inf.to_string(), "2^∞");
        assert_eq!(SupernaturalNumber::all_infinite().to_string(), "∞");
    }

    #[test]
    fn json_round_trip_and_canonical_rejection() {
        let a = SupernaturalNumber::new(
            Exponent::Infinite,
            [(2, Exponent::Finite(3)), (5, Exponent::Finite(0))],
        )
        .unwrap();
        let text = serde_json::to_string(&a).unwrap();
        let back: SupernaturalNumber = serde_json::from_str(&text).unwrap();
        assert_eq!(a, back);

        assert!(serde_json::from_str::<SupernaturalNumber>(
            r#"{"default":0,"exceptions":{"2":0}}"#
        )
        .is_err());
        assert!(serde_json::from_str::<SupernaturalNumber>(
            r#"{"default":0,"exceptions":{"4":1}}"#
        )
        .is_err());
        assert!(serde_json::from_str::<SupernaturalNumber>(r#"{"default":2}"#).is_err());
        let one: SupernaturalNumber = serde_json::from_str(r#"{"default":0}"#).unwrap();
        assert_eq!(one, SupernaturalNumber::one());
    }

    fn arb_sn() -> impl Strategy<Value = SupernaturalNumber> {
        let exponent = prop_oneof![
            (0u32..4).prop_map(Exponent::Finite),
            Just(Exponent::Infinite)
        ];
        let default = prop_oneof![Just(Exponent::Finite(0)), Just(Exponent::Infinite)];
        (
            default,
            proptest::collection::btree_map(
                proptest::sample::select(vec![2u64, 3, 5, 7, 11]),
                exponent,
                0..4,
            ),
        )
            .prop_map(|(default, m)| {
                SupernaturalNumber::new(default, m.into_iter().filter(|(_, e)| *e != default))
                    .unwrap()
            })
    }

    proptest! {
        #[test]
        fn lattice_laws(a in arb_sn(), b in arb_sn(), c in arb_sn()) {
            prop_assert_eq!(a.join_pair(&b), b.join_pair(&a));
            prop_assert_eq!(a.meet_pair(&b), b.meet_pair(&a));
            prop_assert_eq!(
                a.join_pair(&b).join_pair(&c),
                a.join_pair(&b.join_pair(&c))
            );
            prop_assert_eq!(
                a.meet_pair(&b).meet_pair(&c),
                a.meet_pair(&b.meet_pair(&c))
            );
            prop_assert_eq!(a.join_pair(&a.meet_pair(&b)), a.clone());
            prop_assert_eq!(a.meet_pair(&a.join_pair(&b)), a.clone());
            // order laws
            prop_assert!(a.leq(&a));
            prop_assert_eq!(a.leq(&b) && b.leq(&a), a == b);
            prop_assert!(a.meet_pair(&b).leq(&a));
            prop_assert!(a.leq(&a.join_pair(&b)));
            prop_assert_eq!(a.leq(&b), a.join_pair(&b) == b);
        }
    }
}
