//! Named, executable checks over small instances. Each check id verifies one
//! fact about the structures in this crate by exhaustive enumeration at
//! explicit bounds; the acceptance suite and the CLI `check` verb both run
//! this catalog. Re-running a check with identical bounds produces a
//! byte-identical report.

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::corel::{check_quot_cs_iso, corelations_on, CorelError};
use crate::dot::DotError;
use crate::duality::{algebra_of, check_hom_bijection, dual_arrow, DualityError};
use crate::mscat::{
    canonical_arrow_analysis, canonical_arrow_to_family, cokernel_pair, coordinate_dependency,
    coproduct, depends_only_on, equalizer, kernel_pair, partition_assign, product,
    universal_property_check, Construction, MsCatError,
};
use crate::multiset::{
    connect_arrow, enumerate_homs, is_cogenerating, is_regularly_cogenerating_up_to,
    FiniteMultiset, MultisetArrow, MultisetError, RegularCogenVerdict,
};
use crate::mv::{
    check_mv_axioms, check_mv_axioms_mutated, enumerate_homs_bruteforce, hom_exists_chain,
    FiniteMVAlgebra, MVHomomorphism, MvError,
};
use crate::supernat::{
    check_topology_identity, standard_universe, SupernatError, SupernaturalNumber,
    TOPOLOGY_IDENTITY_IDS,
};

pub const ALL_CHECK_IDS: &[&str] = &[
    "L-CHAIN-HOM",
    "L-MV-AXIOMS",
    "L-SUPREMUM",
    "L-IRRED",
    "L-TOPO",
    "L-ARROWS",
    "L-LIMITS",
    "L-COLIMITS",
    "L-COGEN",
    "L-REGCOGEN",
    "L-EXISTS",
    "L-PARTITION",
    "L-DN-INJ",
    "L-DUALITY",
    "L-QUOTCS",
    "L-CHARREFL",
    "L-EFFECTIVE",
    "L-COUNTABLE",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error(transparent)]
    Supernat(#[from] SupernatError),
    #[error(transparent)]
    Multiset(#[from] MultisetError),
    #[error(transparent)]
    MsCat(#[from] MsCatError),
    #[error(transparent)]
    Corel(#[from] CorelError),
    #[error(transparent)]
    Mv(#[from] MvError),
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error(transparent)]
    Dot(#[from] DotError),
}

/// Enumeration bounds shared by the checks; every check reports the bounds
/// it ran with. Each check reads only the fields relevant to it.
#[derive(Debug, Clone, Serialize)]
pub struct CheckBounds {
    /// Chain index bound for homomorphism counting.
    pub chain_bound: u64,
    /// Maximum number of points in generated multisets.
    pub max_points: usize,
    /// Denominators of generated multisets divide this number.
    pub divisor_base: u64,
    /// Node budget for the MV homomorphism search.
    pub search_budget: u64,
    /// Element-count budget for exhaustive axiom checks.
    pub axiom_budget: u64,
    /// Point budget for materialized products.
    pub product_budget: u128,
}

impl CheckBounds {
    /// The bounds each check runs with by default; a few checks pin smaller
    /// families because their instance spaces grow much faster.
    pub fn default_for(id: &str) -> CheckBounds {
        let base = CheckBounds {
            chain_bound: 12,
            max_points: 3,
            divisor_base: 12,
            search_budget: 100_000_000,
            axiom_budget: 400,
            product_budget: 10_000,
        };
        match id {
            "L-CHARREFL" | "L-EFFECTIVE" => CheckBounds {
                max_points: 2,
                divisor_base: 6,
                ..base
            },
            "L-DN-INJ" => CheckBounds {
                max_points: 4,
                ..base
            },
            _ => base,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One check outcome; `fail` always carries a witness, and the bounds used
/// are always reported.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check_id: String,
    pub verdict: Verdict,
    pub instances_tested: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub bounds: CheckBounds,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("check results serialize")
    }
}

struct Run {
    instances: u64,
    witness: Option<serde_json::Value>,
}

impl Run {
    fn new() -> Self {
        Run {
            instances: 0,
            witness: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> serde_json::Value) {
        self.instances += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    fn into_result(self, id: &str, bounds: &CheckBounds) -> CheckResult {
        CheckResult {
            check_id: id.to_string(),
            verdict: if self.witness.is_none() {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            instances_tested: self.instances,
            witness: self.witness,
            bounds: bounds.clone(),
        }
    }
}

/// Runs one catalog check at the given bounds.
pub fn run_check(id: &str, bounds: &CheckBounds) -> Result<CheckResult, VerifyError> {
    let run = match id {
        "L-CHAIN-HOM" => check_chain_hom(bounds)?,
        "L-MV-AXIOMS" => check_mv_axiom_suite(bounds)?,
        "L-SUPREMUM" => check_supremum(bounds)?,
        "L-IRRED" => check_irreducibles(bounds)?,
        "L-TOPO" => check_topology(bounds)?,
        "L-ARROWS" => check_arrow_classification(bounds)?,
        "L-LIMITS" => check_limits(bounds)?,
        "L-COLIMITS" => check_colimits(bounds)?,
        "L-COGEN" => check_cogeneration(bounds)?,
        "L-REGCOGEN" => check_regular_cogeneration(bounds)?,
        "L-EXISTS" => check_connecting_arrows(bounds)?,
        "L-PARTITION" => check_partition(bounds)?,
        "L-DN-INJ" => check_injective_extension(bounds)?,
        "L-DUALITY" => check_duality(bounds)?,
        "L-QUOTCS" => check_quotient_iso(bounds)?,
        "L-CHARREFL" => check_reflexivity_routes(bounds)?,
        "L-EFFECTIVE" => check_effectiveness(bounds)?,
        "L-COUNTABLE" => check_coordinate_dependency(bounds)?,
        other => return Err(VerifyError::UnknownCheck(other.to_string())),
    };
    Ok(run.into_result(id, bounds))
}

/// All multisets with up to `max_points` points and denominators drawn from
/// the given set, one representative per multiset of denominators, in a
/// fixed order. The empty multiset is always included.
pub fn generate_multisets(
    max_points: usize,
    denominators: &[SupernaturalNumber],
) -> Vec<FiniteMultiset> {
    let mut pool: Vec<SupernaturalNumber> = denominators.to_vec();
    pool.sort_by(|a, b| a.canonical_cmp(b));
    pool.dedup();
    let mut out = vec![FiniteMultiset::empty()];
    if pool.is_empty() {
        return out;
    }
    for size in 1..=max_points {
        // non-decreasing index vectors over the pool
        let mut combo = vec![0usize; size];
        'gen: loop {
            out.push(
                FiniteMultiset::new(
                    combo
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| (format!("p{i}"), pool[c].clone())),
                )
                .expect("distinct synthetic ids"),
            );
            let mut i = size;
            loop {
                if i == 0 {
                    break 'gen;
                }
                i -= 1;
                if combo[i] + 1 < pool.len() {
                    let v = combo[i] + 1;
                    for slot in &mut combo[i..] {
                        *slot = v;
                    }
                    continue 'gen;
                }
            }
        }
    }
    out
}

pub fn divisors_of(n: u64) -> Vec<SupernaturalNumber> {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| SupernaturalNumber::from_natural(d).expect("d >= 1"))
        .collect()
}

fn nu(n: u64) -> SupernaturalNumber {
    SupernaturalNumber::from_natural(n).expect("n >= 1")
}

fn check_chain_hom(bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    for m in 1..=bounds.chain_bound {
        for n in 1..=bounds.chain_bound {
            let dom = FiniteMVAlgebra::chain(m)?;
            let cod = FiniteMVAlgebra::chain(n)?;
            let count = enumerate_homs_bruteforce(&dom, &cod, bounds.search_budget)?.len();
            let expected = if hom_exists_chain(m, n)? { 1 } else { 0 };
            run.check(
                count == expected,
                || json!({"m": m, "n": n, "count": count, "expected": expected}),
            );
        }
    }
    Ok(run)
}

fn check_mv_axiom_suite(bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    for n in 1..=bounds.chain_bound {
        let a = FiniteMVAlgebra::chain(n)?;
        let report = check_mv_axioms(&a, bounds.axiom_budget)?;
        run.check(report.pass, || json!({"chain": n, "report": report}));
    }
    // products of up to three chains with indices up to 6
    let mut shapes: Vec<Vec<u64>> = Vec::new();
    for a in 1..=6u64 {
        shapes.push(vec![a]);
        for b in a..=6 {
            shapes.push(vec![a, b]);
            for c in b..=6 {
                shapes.push(vec![a, b, c]);
            }
        }
    }
    for shape in &shapes {
        let a = FiniteMVAlgebra::product_of_chains(shape)?;
        let report = check_mv_axioms(&a, bounds.axiom_budget)?;
        run.check(report.pass, || json!({"chains": shape, "report": report}));
    }
    // the seeded mutation must be caught by the characteristic axiom
    let s6 = FiniteMVAlgebra::chain(6)?;
    let mutated = check_mv_axioms_mutated(&s6, bounds.axiom_budget)?;
    let characteristic = mutated
        .axioms
        .iter()
        .find(|r| r.name == "characteristic")
        .expect("axiom present");
    run.check(
        !characteristic.pass && characteristic.witness.is_some(),
        || json!({"mutation": "wrap-around addition", "report": mutated}),
    );
    Ok(run)
}

fn check_supremum(_bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let primes = [2u64, 3, 5, 7];
    let max_exp = 4u32;
    for a in standard_universe() {
        // all prime powers below the value, exponents bounded
        let mut parts = vec![a.infinite_part()];
        let mut finite_parts = Vec::new();
        for &p in &primes {
            for k in 1..=max_exp {
                let pk = nu(p.pow(k));
                if pk.leq(&a) {
                    parts.push(pk.clone());
                    finite_parts.push(pk);
                }
            }
        }
        let rebuilt = SupernaturalNumber::join(&parts);
        run.check(rebuilt == a, || json!({"value": a, "rebuilt": rebuilt}));
        if a.is_finite() {
            let finite_rebuilt = SupernaturalNumber::join(&finite_parts);
            run.check(
                finite_rebuilt == a,
                || json!({"value": a, "finite_rebuilt": finite_rebuilt}),
            );
        }
    }
    Ok(run)
}

fn check_irreducibles(_bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    // within the divisor lattice of 10^4, join-irreducibility (no join of
    // strictly smaller divisors reaches the element, equivalently the join
    // of all of them does not) coincides with being a prime power
    let base: u64 = 10_000;
    let divisors: Vec<u64> = (1..=base).filter(|d| base.is_multiple_of(*d)).collect();
    for &d in &divisors {
        let below: Vec<SupernaturalNumber> = divisors
            .iter()
            .filter(|&&b| d % b == 0 && b != d)
            .map(|&b| nu(b))
            .collect();
        let irreducible = d != 1 && SupernaturalNumber::join(&below) != nu(d);
        run.check(
            irreducible == nu(d).is_prime_power_atom(),
            || json!({"divisor": d, "bruteforce": irreducible}),
        );
    }
    for m in 1..=200u64 {
        for n in 1..=200u64 {
            run.check(
                nu(m).leq(&nu(n)) == (n % m == 0),
                || json!({"m": m, "n": n}),
            );
        }
    }
    Ok(run)
}

fn check_topology(_bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let universe = standard_universe();
    for id in TOPOLOGY_IDENTITY_IDS {
        let report = check_topology_identity(id, &universe)?;
        run.instances += report.instances;
        run.check(report.pass, || json!({"identity": id, "report": report}));
    }
    Ok(run)
}

/// Arrow image as an index table over the ordered points of dom/cod.
fn arrow_table(f: &MultisetArrow) -> Vec<u8> {
    let cod_ids: Vec<&str> = f.cod().point_ids().collect();
    f.dom()
        .point_ids()
        .map(|x| {
            cod_ids
                .iter()
                .position(|y| *y == f.apply(x).unwrap())
                .expect("image indexed") as u8
        })
        .collect()
}

/// All denominator-decreasing maps as index tables, in the same order as
/// `enumerate_homs`.
fn hom_tables(x: &FiniteMultiset, y: &FiniteMultiset) -> Vec<Vec<u8>> {
    let dom_denoms: Vec<&SupernaturalNumber> = x.points().map(|(_, d)| d).collect();
    let cod_denoms: Vec<&SupernaturalNumber> = y.points().map(|(_, d)| d).collect();
    let mut candidates: Vec<Vec<u8>> = Vec::with_capacity(dom_denoms.len());
    for dx in &dom_denoms {
        let adm: Vec<u8> = cod_denoms
            .iter()
            .enumerate()
            .filter(|(_, dy)| dy.leq(dx))
            .map(|(i, _)| i as u8)
            .collect();
        if adm.is_empty() {
            return Vec::new();
        }
        candidates.push(adm);
    }
    let mut out = Vec::new();
    let mut counters = vec![0usize; candidates.len()];
    loop {
        out.push(
            counters
                .iter()
                .zip(&candidates)
                .map(|(&c, adm)| adm[c])
                .collect(),
        );
        let mut i = counters.len();
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

/// Divisors of the join of all (finite) denominators of a multiset; the
/// probes built over this set can reach any pair of points simultaneously.
fn divisor_closure(x: &FiniteMultiset) -> Vec<SupernaturalNumber> {
    let finite: Vec<SupernaturalNumber> = x
        .points()
        .filter(|(_, d)| d.is_finite())
        .map(|(_, d)| d.clone())
        .collect();
    SupernaturalNumber::join(&finite)
        .divisors()
        .expect("join of finite values is finite")
}

fn check_arrow_classification(bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let family = generate_multisets(bounds.max_points, &divisors_of(bounds.divisor_base));
    // per-object probe hom-tables: probes for left cancellation map into the
    // object, probes for right cancellation receive arrows from it
    let probe_sets: Vec<Vec<FiniteMultiset>> = family
        .iter()
        .map(|o| generate_multisets(2, &divisor_closure(o)))
        .collect();
    let into_tables: Vec<Vec<Vec<Vec<u8>>>> = family
        .iter()
        .zip(&probe_sets)
        .map(|(o, probes)| probes.iter().map(|p| hom_tables(p, o)).collect())
        .collect();
    let from_tables: Vec<Vec<Vec<Vec<u8>>>> = family
        .iter()
        .zip(&probe_sets)
        .map(|(o, probes)| probes.iter().map(|p| hom_tables(o, p)).collect())
        .collect();
    for (xi, x) in family.iter().enumerate() {
        let dom_probe_tables = &into_tables[xi];
        for (yi, y) in family.iter().enumerate() {
            let cod_probe_tables = &from_tables[yi];
            for f in enumerate_homs(x, y) {
                let class = f.classify();
                let table = arrow_table(&f);

                // hierarchy
                run.check(
                    !class.regular_monic || class.monic,
                    || json!({"arrow": f.map(), "flaw": "regular monic but not monic"}),
                );
                run.check(
                    !class.regular_epic || class.epic,
                    || json!({"arrow": f.map(), "flaw": "regular epic but not epic"}),
                );

                // monic ⇔ left cancellation over the probes
                let cancellable_left = dom_probe_tables.iter().all(|gs| {
                    for i in 0..gs.len() {
                        for j in (i + 1)..gs.len() {
                            let fi: Vec<u8> = gs[i].iter().map(|&k| table[k as usize]).collect();
                            let fj: Vec<u8> = gs[j].iter().map(|&k| table[k as usize]).collect();
                            if fi == fj {
                                return false;
                            }
                        }
                    }
                    true
                });
                run.check(
                    class.monic == cancellable_left,
                    || json!({"arrow": f.map(), "monic": class.monic}),
                );

                // epic ⇔ right cancellation over the probes
                let cancellable_right = cod_probe_tables.iter().all(|gs| {
                    for i in 0..gs.len() {
                        for j in (i + 1)..gs.len() {
                            let gi: Vec<u8> = table.iter().map(|&k| gs[i][k as usize]).collect();
                            let gj: Vec<u8> = table.iter().map(|&k| gs[j][k as usize]).collect();
                            if gi == gj {
                                return false;
                            }
                        }
                    }
                    true
                });
                run.check(
                    class.epic == cancellable_right,
                    || json!({"arrow": f.map(), "epic": class.epic}),
                );

                // regular monic ⇔ the arrow is recovered as the equalizer of
                // its cokernel pair
                let ck = cokernel_pair(&f)?;
                let eq = equalizer(&ck.first, &ck.second)?;
                let realizable_mono = enumerate_homs(x, &eq.object).into_iter().any(|phi| {
                    phi.classify().iso
                        && MultisetArrow::compose(&eq.inclusion, &phi).ok().as_ref() == Some(&f)
                });
                run.check(
                    class.regular_monic == realizable_mono,
                    || json!({"arrow": f.map(), "regular_monic": class.regular_monic}),
                );

                // regular epic ⇔ the arrow is the coequalizer of its kernel
                // pair, up to iso
                let kp = kernel_pair(&f)?;
                let coeq = crate::mscat::coequalizer(&kp.first, &kp.second)?;
                let realizable_epi = enumerate_homs(&coeq.object, y).into_iter().any(|psi| {
                    psi.classify().iso
                        && MultisetArrow::compose(&psi, &coeq.quotient).ok().as_ref() == Some(&f)
                });
                run.check(
                    class.regular_epic == realizable_epi,
                    || json!({"arrow": f.map(), "regular_epic": class.regular_epic}),
                );
            }
        }
    }
    Ok(run)
}

fn limit_family() -> Vec<FiniteMultiset> {
    generate_multisets(2, &divisors_of(6))
}

fn probe_family_for(instances: &[&FiniteMultiset]) -> Vec<FiniteMultiset> {
    let finite: Vec<SupernaturalNumber> = instances
        .iter()
        .flat_map(|x| x.points())
        .filter(|(_, d)| d.is_finite())
        .map(|(_, d)| d.clone())
        .collect();
    let denoms = SupernaturalNumber::join(&finite)
        .divisors()
        .expect("join of finite values is finite");
    generate_multisets(2, &denoms)
}

fn check_limits(bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let family = limit_family();

    // terminal object
    let terminal = product(&[])?;
    let probes = generate_multisets(2, &divisors_of(bounds.divisor_base));
    let report = universal_property_check(&Construction::Product(terminal), &probes);
    run.check(
        report.pass,
        || json!({"product": "empty", "report": report.witness}),
    );

    for a in &family {
        for b in &family {
            let prod = product(&[a.clone(), b.clone()])?;
            // denominator formula: each tuple carries the join
            for (id, d) in prod.object.points() {
                let joined = SupernaturalNumber::join(&[
                    a.denominator(prod.projections[0].apply(id)?)?.clone(),
                    b.denominator(prod.projections[1].apply(id)?)?.clone(),
                ]);
                run.check(
                    *d == joined,
                    || json!({"pair": [a, b], "point": id, "formula": "join"}),
                );
            }
            let probes = probe_family_for(&[a, b]);
            let report = universal_property_check(&Construction::Product(prod), &probes);
            run.check(
                report.pass,
                || json!({"pair": [a, b], "report": report.witness}),
            );
        }
    }

    // a sample triple product
    let triple = product(&[
        FiniteMultiset::two(),
        FiniteMultiset::dn(2).unwrap(),
        FiniteMultiset::dn(3).unwrap(),
    ])?;
    let probes = probe_family_for(&[&triple.object]);
    let report = universal_property_check(&Construction::Product(triple), &probes);
    run.check(
        report.pass,
        || json!({"product": "triple", "report": report.witness}),
    );

    // equalizers of every parallel pair over the family
    for x in &family {
        for y in &family {
            let homs = enumerate_homs(x, y);
            for f in &homs {
                for g in &homs {
                    let eq = equalizer(f, g)?;
                    // inclusion must be regular monic with untouched
                    // denominators
                    run.check(
                        eq.inclusion.classify().regular_monic,
                        || json!({"pair": [f.map(), g.map()], "flaw": "inclusion class"}),
                    );
                    let probes = probe_family_for(&[x, y]);
                    let report = universal_property_check(&Construction::Equalizer(eq), &probes);
                    run.check(
                        report.pass,
                        || json!({"pair": [f.map(), g.map()], "report": report.witness}),
                    );
                }
            }
        }
    }
    Ok(run)
}

fn check_colimits(bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let family = limit_family();

    // initial object
    let initial = coproduct(&[])?;
    let probes = generate_multisets(2, &divisors_of(bounds.divisor_base));
    let report = universal_property_check(&Construction::Coproduct(initial), &probes);
    run.check(
        report.pass,
        || json!({"coproduct": "empty", "report": report.witness}),
    );

    for a in &family {
        for b in &family {
            let cop = coproduct(&[a.clone(), b.clone()])?;
            // denominators are untouched by the injections
            for (i, summand) in [a, b].into_iter().enumerate() {
                for (id, d) in summand.points() {
                    let image = cop.injections[i].apply(id)?;
                    run.check(
                        cop.object.denominator(image)? == d,
                        || json!({"pair": [a, b], "point": id, "formula": "injection"}),
                    );
                }
            }
            let probes = probe_family_for(&[a, b]);
            let report = universal_property_check(&Construction::Coproduct(cop), &probes);
            run.check(
                report.pass,
                || json!({"pair": [a, b], "report": report.witness}),
            );
        }
    }

    // coequalizers of every parallel pair over the family
    for x in &family {
        for y in &family {
            let homs = enumerate_homs(x, y);
            for f in &homs {
                for g in &homs {
                    let coeq = crate::mscat::coequalizer(f, g)?;
                    // quotient arrow satisfies the fiber-meet formula
                    run.check(
                        coeq.quotient.classify().regular_epic,
                        || json!({"pair": [f.map(), g.map()], "flaw": "quotient class"}),
                    );
                    for (q, dq) in coeq.object.points() {
                        let fiber: Vec<SupernaturalNumber> = y
                            .points()
                            .filter(|(p, _)| coeq.quotient.apply(p).unwrap() == q)
                            .map(|(_, d)| d.clone())
                            .collect();
                        let met = SupernaturalNumber::meet(&fiber).expect("non-empty fiber");
                        run.check(
                            met == *dq,
                            || json!({"pair": [f.map(), g.map()], "point": q, "formula": "meet"}),
                        );
                    }
                    let probes = probe_family_for(&[x, y]);
                    let report =
                        universal_property_check(&Construction::Coequalizer(coeq), &probes);
                    run.check(
                        report.pass,
                        || json!({"pair": [f.map(), g.map()], "report": report.witness}),
                    );
                }
            }
        }
    }
    Ok(run)
}

fn check_cogeneration(_bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let pool: Vec<FiniteMultiset> = vec![
        FiniteMultiset::two(),
        FiniteMultiset::dn(6).unwrap(),
        FiniteMultiset::new([("u".to_string(), nu(1))]).unwrap(),
        FiniteMultiset::new([("w".to_string(), nu(12))]).unwrap(),
        FiniteMultiset::dn(2).unwrap(),
    ];
    let probes = generate_multisets(2, &divisors_of(6));
    let probe_tables: Vec<Vec<(usize, Vec<Vec<u8>>)>> = probes
        .iter()
        .map(|x| {
            probes
                .iter()
                .enumerate()
                .map(|(j, y)| (j, hom_tables(x, y)))
                .collect()
        })
        .collect();

    for mask in 1u32..(1 << pool.len()) {
        let family: Vec<FiniteMultiset> = pool
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, g)| g.clone())
            .collect();

        // direct separation search: every distinct parallel pair over the
        // probe family is separated by an arrow into some member
        let mut separates = true;
        'outer: for (xi, x) in probes.iter().enumerate() {
            for (yj, homs) in &probe_tables[xi] {
                let target = &probes[*yj];
                for i in 0..homs.len() {
                    for j in (i + 1)..homs.len() {
                        let separated = family.iter().any(|g| {
                            hom_tables(target, g).iter().any(|h| {
                                let hi: Vec<u8> = homs[i].iter().map(|&k| h[k as usize]).collect();
                                let hj: Vec<u8> = homs[j].iter().map(|&k| h[k as usize]).collect();
                                hi != hj
                            })
                        });
                        if !separated {
                            separates = false;
                            let _ = x;
                            break 'outer;
                        }
                    }
                }
            }
        }
        let predicate = is_cogenerating(&family).is_some();
        run.check(
            predicate == separates,
            || json!({"mask": mask, "predicate": predicate, "separates": separates}),
        );
    }
    Ok(run)
}

fn prime_powers_up_to(bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in 2..=bound {
        if crate::supernat::is_prime(p) {
            let mut q = p;
            while q <= bound {
                out.push(q);
                q = match q.checked_mul(p) {
                    Some(next) => next,
                    None => break,
                };
            }
        }
    }
    out.sort_unstable();
    out
}

fn check_regular_cogeneration(bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let b = bounds.divisor_base;

    let mut dn_family = vec![FiniteMultiset::dn(1).unwrap()];
    for q in prime_powers_up_to(b) {
        dn_family.push(FiniteMultiset::dn(q).unwrap());
    }
    run.check(
        is_regularly_cogenerating_up_to(&dn_family, b) == RegularCogenVerdict::HoldsUpTo(b),
        || json!({"family": "D_n up to bound", "bound": b}),
    );
    run.check(
        is_regularly_cogenerating_up_to(&[FiniteMultiset::two()], 2)
            == (RegularCogenVerdict::Fails { n: 2 }),
        || json!({"family": "two-point unit multiset", "bound": 2}),
    );

    // canonical arrows into the full family preserve denominators for every
    // generated multiset; removing a needed member breaks exactly the
    // multisets that require it
    let family = generate_multisets(bounds.max_points, &divisors_of(b));
    let full: Vec<FiniteMultiset> = dn_family.clone();
    let without_d4: Vec<FiniteMultiset> = dn_family
        .iter()
        .filter(|g| g.denominator("1").map(|d| *d != nu(4)).unwrap_or(true))
        .cloned()
        .collect();
    for x in &family {
        let analysis = canonical_arrow_analysis(x, &full);
        run.check(
            analysis.preserves_denominators,
            || json!({"multiset": x, "family": "full", "witness": analysis.witness}),
        );
        if x.len() >= 2 {
            run.check(
                analysis.monic,
                || json!({"multiset": x, "flaw": "not monic"}),
            );
        }

        let reduced = canonical_arrow_analysis(x, &without_d4);
        let needs_four = x
            .points()
            .any(|(_, d)| d.to_natural().map(|n| n % 4 == 0).unwrap_or(false));
        run.check(
            reduced.preserves_denominators == !needs_four,
            || json!({"multiset": x, "family": "without D_4", "needs_four": needs_four}),
        );
        if needs_four {
            run.check(
                reduced.witness.is_some(),
                || json!({"multiset": x, "flaw": "missing witness"}),
            );
        }
    }

    // materialized canonical arrows agree with the analysis on small inputs
    for n in [1u64, 2, 6] {
        let x = FiniteMultiset::new([("w".to_string(), nu(n))]).unwrap();
        let fam = [FiniteMultiset::two(), FiniteMultiset::dn(n).unwrap()];
        let full = canonical_arrow_to_family(&x, &fam, bounds.product_budget)?;
        run.check(
            full.class.regular_monic
                == (full.analysis.monic && full.analysis.preserves_denominators),
            || json!({"n": n, "flaw": "materialized disagrees with analysis"}),
        );
    }
    Ok(run)
}

fn check_connecting_arrows(bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let family = generate_multisets(2, &divisors_of(bounds.divisor_base));
    for x in &family {
        for y in &family {
            for (px, dx) in x.points() {
                for (py, dy) in y.points() {
                    let ok_order = dy.leq(dx);
                    let ok_unit = y.unit_point().is_some();
                    let result = connect_arrow(x, px, y, py);
                    if ok_order && ok_unit {
                        match result {
                            Ok(f) => {
                                run.check(
                                    f.apply(px).unwrap() == py,
                                    || json!({"x": px, "y": py, "flaw": "wrong image"}),
                                );
                            }
                            Err(e) => run
                                .check(false, || json!({"x": px, "y": py, "error": e.to_string()})),
                        }
                    } else {
                        run.check(
                            result.is_err(),
                            || json!({"x": px, "y": py, "flaw": "expected a precondition error"}),
                        );
                    }
                }
            }
        }
    }

    // infinite targets are rejected, infinite sources are fine
    let inf_point =
        FiniteMultiset::new([("x".to_string(), SupernaturalNumber::all_infinite())]).unwrap();
    let d2 = FiniteMultiset::dn(2).unwrap();
    run.check(
        connect_arrow(&inf_point, "x", &d2, "1").is_ok(),
        || json!({"case": "infinite source"}),
    );
    let inf_target = FiniteMultiset::new([
        ("0".to_string(), nu(1)),
        ("1".to_string(), SupernaturalNumber::all_infinite()),
    ])
    .unwrap();
    run.check(
        connect_arrow(&inf_point, "x", &inf_target, "1").is_err(),
        || json!({"case": "infinite target"}),
    );
    Ok(run)
}

fn subsets(points: &[String]) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << points.len()) {
        out.push(
            points
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, p)| p.clone())
                .collect(),
        );
    }
    out
}

fn check_partition(_bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let configs: &[(usize, usize)] = &[(1, 1), (2, 1), (2, 2), (3, 2), (2, 3)];
    for &(size, n) in configs {
        let points: Vec<String> = (0..size).map(|i| format!("p{i}")).collect();
        let all_subsets = subsets(&points);
        let mut choice = vec![0usize; 2 * n];
        loop {
            let kernels: Vec<Vec<String>> =
                (0..n).map(|i| all_subsets[choice[i]].clone()).collect();
            let zones: Vec<Vec<String>> =
                (0..n).map(|i| all_subsets[choice[n + i]].clone()).collect();
            let disjoint = (0..n)
                .all(|i| ((i + 1)..n).all(|j| kernels[i].iter().all(|p| !kernels[j].contains(p))));
            let inside = (0..n).all(|i| kernels[i].iter().all(|p| zones[i].contains(p)));
            let covered = points.iter().all(|p| zones.iter().any(|z| z.contains(p)));
            let result = partition_assign(&points, &kernels, &zones);
            if disjoint && inside && covered {
                match result {
                    Ok(assignment) => {
                        let valid = points.iter().all(|p| {
                            let idx = assignment[p];
                            let kernel_home = kernels.iter().position(|k| k.contains(p));
                            zones[idx].contains(p) && kernel_home.map(|k| k == idx).unwrap_or(true)
                        });
                        run.check(valid, || {
                            json!({"kernels": kernels, "zones": zones, "assignment": assignment})
                        });
                    }
                    Err(e) => run.check(
                        false,
                        || json!({"kernels": kernels, "zones": zones, "error": e.to_string()}),
                    ),
                }
            } else {
                run.check(
                    result.is_err(),
                    || json!({"kernels": kernels, "zones": zones, "flaw": "expected error"}),
                );
            }
            // odometer over subset choices
            let mut i = choice.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < all_subsets.len() {
                    break;
                }
                choice[i] = 0;
            }
            if choice.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    Ok(run)
}

fn check_injective_extension(bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let ambients = generate_multisets(bounds.max_points, &divisors_of(bounds.divisor_base));
    let targets = generate_multisets(3, &divisors_of(bounds.divisor_base));
    let unit = nu(1);
    for ambient in &ambients {
        let point_list: Vec<String> = ambient.point_ids().map(str::to_string).collect();
        for subset in subsets(&point_list) {
            let keep: std::collections::BTreeSet<String> = subset.iter().cloned().collect();
            let sub = ambient.restrict(&keep);
            let g = MultisetArrow::check(
                sub.clone(),
                ambient.clone(),
                sub.point_ids()
                    .map(|p| (p.to_string(), p.to_string()))
                    .collect(),
            )?;
            for target in &targets {
                let hypotheses_ok = target.points().any(|(_, d)| *d == unit);
                let fs = enumerate_homs(&sub, target);
                for f in fs {
                    let result = crate::mscat::extend_along_regular_mono(&g, &f);
                    if hypotheses_ok {
                        match result {
                            Ok(h) => {
                                let restricted =
                                    MultisetArrow::compose(&h, &g).expect("composable");
                                run.check(restricted == f, || {
                                    json!({"ambient": ambient, "target": target, "flaw": "restriction"})
                                });
                            }
                            Err(e) => run.check(false, || {
                                json!({"ambient": ambient, "target": target, "error": e.to_string()})
                            }),
                        }
                    } else {
                        run.check(
                            matches!(result, Err(MsCatError::TargetNoUnitPoint)),
                            || json!({"ambient": ambient, "target": target, "flaw": "expected unit-point error"}),
                        );
                    }
                }
            }
        }
    }
    Ok(run)
}

fn check_duality(bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let family = generate_multisets(bounds.max_points, &divisors_of(bounds.divisor_base));

    for x in &family {
        for y in &family {
            let report = check_hom_bijection(x, y, bounds.search_budget)?;
            run.check(report.bijection, || {
                json!({"x": x, "y": y, "counts": [report.count_ms, report.count_mv], "witness": report.witness})
            });
        }
    }

    // identities dualize to identities
    for x in &family {
        let dual = dual_arrow(&MultisetArrow::identity(x))?;
        run.check(
            dual == MVHomomorphism::identity(&algebra_of(x)?),
            || json!({"x": x, "flaw": "identity not preserved"}),
        );
    }

    // contravariant functoriality over every composable pair, on raw tables
    type HomLeg<'a> = (&'a FiniteMultiset, Vec<Vec<usize>>, Vec<Vec<u64>>);
    for y in &family {
        let incoming: Vec<HomLeg> = family
            .iter()
            .filter_map(|x| {
                let fs = enumerate_homs(x, y);
                if fs.is_empty() {
                    return None;
                }
                let points: Vec<Vec<usize>> =
                    fs.iter().map(crate::duality::arrow_point_table).collect();
                let duals: Result<Vec<Vec<u64>>, _> = points
                    .iter()
                    .map(|p| crate::duality::dual_table_of_point_map(x, y, p).map(|(_, _, t)| t))
                    .collect();
                Some(duals.map(|ds| (x, points, ds)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let outgoing: Vec<HomLeg> = family
            .iter()
            .filter_map(|z| {
                let gs = enumerate_homs(y, z);
                if gs.is_empty() {
                    return None;
                }
                let points: Vec<Vec<usize>> =
                    gs.iter().map(crate::duality::arrow_point_table).collect();
                let duals: Result<Vec<Vec<u64>>, _> = points
                    .iter()
                    .map(|p| crate::duality::dual_table_of_point_map(y, z, p).map(|(_, _, t)| t))
                    .collect();
                Some(duals.map(|ds| (z, points, ds)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (x, f_points, f_duals) in &incoming {
            for (z, g_points, g_duals) in &outgoing {
                for (f_pt, f_dual) in f_points.iter().zip(f_duals) {
                    for (g_pt, g_dual) in g_points.iter().zip(g_duals) {
                        let composite: Vec<usize> = f_pt.iter().map(|&i| g_pt[i]).collect();
                        let (_, _, lhs) =
                            crate::duality::dual_table_of_point_map(x, z, &composite)?;
                        // (g∘f)* must equal f* ∘ g*
                        let agrees = lhs.len() == g_dual.len()
                            && lhs
                                .iter()
                                .zip(g_dual.iter())
                                .all(|(&l, &gi)| l == f_dual[gi as usize]);
                        run.check(agrees, || json!({"x": x, "z": z, "flaw": "functoriality"}));
                    }
                }
            }
        }
    }
    Ok(run)
}

fn check_quotient_iso(bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let family = generate_multisets(bounds.max_points, &divisors_of(bounds.divisor_base));
    for x in &family {
        let report = check_quot_cs_iso(x, None)?;
        run.instances += report.relations + report.epis_checked + report.order_pairs;
        run.check(report.pass, || json!({"x": x, "witness": report.witness}));
    }
    Ok(run)
}

fn check_reflexivity_routes(bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let family = generate_multisets(bounds.max_points, &divisors_of(bounds.divisor_base));
    for x in &family {
        for c in corelations_on(x, None)? {
            let witness = c.reflexivity_witness();
            let characterization = c.reflexivity_characterization();
            run.check(witness.is_some() == characterization, || {
                json!({"x": x, "target": c.target(), "witness": witness.is_some(), "characterization": characterization})
            });
        }
    }
    Ok(run)
}

fn check_effectiveness(bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let family = generate_multisets(bounds.max_points, &divisors_of(bounds.divisor_base));
    for x in &family {
        for c in corelations_on(x, None)? {
            if c.is_reflexive()?.is_none() {
                continue;
            }
            run.check(
                c.reflexivity_characterization(),
                || json!({"x": x, "flaw": "characterization fails on a reflexive pair"}),
            );
            run.check(
                c.symmetry_witness().is_some(),
                || json!({"x": x, "target": c.target(), "flaw": "no symmetry witness"}),
            );
            run.check(
                c.transitivity_witness()?.is_some(),
                || json!({"x": x, "target": c.target(), "flaw": "no transitivity witness"}),
            );
            match crate::corel::effectivize(&c) {
                Ok(_) => run.check(true, || json!({})),
                Err(e) => run.check(
                    false,
                    || json!({"x": x, "target": c.target(), "error": e.to_string()}),
                ),
            }
        }
    }
    Ok(run)
}

fn check_coordinate_dependency(_bounds: &CheckBounds) -> Result<Run, VerifyError> {
    let mut run = Run::new();
    let two = FiniteMultiset::two();
    let d2 = FiniteMultiset::dn(2).unwrap();
    let d3 = FiniteMultiset::dn(3).unwrap();
    let diagrams: Vec<Vec<FiniteMultiset>> = vec![
        vec![two.clone(), d2.clone()],
        vec![d2.clone(), d3.clone()],
        vec![two.clone(), two.clone()],
        vec![two.clone(), d2.clone(), d3.clone()],
    ];
    for factors in &diagrams {
        let prod = product(factors)?;
        for h in enumerate_homs(&prod.object, &two) {
            let deps = coordinate_dependency(&prod, &h)?;
            run.check(
                depends_only_on(&prod, &h, &deps)?,
                || json!({"factors": factors, "deps": deps, "flaw": "not a factorization"}),
            );
            for &skip in &deps {
                let reduced: Vec<usize> = deps.iter().copied().filter(|&i| i != skip).collect();
                run.check(
                    !depends_only_on(&prod, &h, &reduced)?,
                    || json!({"factors": factors, "deps": deps, "flaw": "not minimal"}),
                );
            }
        }
    }
    Ok(run)
}
