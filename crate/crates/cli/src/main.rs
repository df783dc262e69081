//! Command-line surface over the multiset/MV-algebra toolkit: supernatural
//! number arithmetic, hom-set enumeration, (co)limit constructions, the
//! duality, quotient enumeration, the structural-check catalog, and DOT export.
//!
//! All results are printed as JSON on stdout. Exit codes: 0 on success, 1 on
//! a domain error (reported on stderr), 2 on a usage error.

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mvms_core::corel::{enumerate_relations, MuUniverse};
use mvms_core::dot::{render, Diagram};
use mvms_core::duality::{algebra_of, dual_arrow};
use mvms_core::mscat::{
    canonical_arrow_to_family, coequalizer, cokernel_pair, coproduct, equalizer, kernel_pair,
    product_with_budget, pullback, pushout, DEFAULT_PRODUCT_BUDGET,
};
use mvms_core::multiset::{enumerate_homs, FiniteMultiset, MultisetArrow};
use mvms_core::mv::hom_to_json;
use mvms_core::supernat::{topology_member, Exponent, SupernaturalNumber, TopologyFamily};
use mvms_core::verify::{run_check, CheckBounds, ALL_CHECK_IDS};

#[derive(Parser)]
#[command(
    name = "mvms",
    version,
    about = "Finite multisets, finite MV-algebras, and the duality between them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Shared switch: when set, positional inputs are raw JSON literals instead
/// of file paths.
#[derive(Args)]
struct InlineFlag {
    /// Treat input arguments as inline JSON instead of file paths
    #[arg(long)]
    inline: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Supernatural number operations
    Sn {
        #[command(subcommand)]
        op: SnOp,
    },
    /// Enumerate all denominator-decreasing maps X -> Y
    Homs {
        x: String,
        y: String,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Classification flags of an arrow
    Classify {
        f: String,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Product of multisets with projections
    Product {
        xs: Vec<String>,
        #[arg(long)]
        budget: Option<u128>,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Coproduct of multisets with injections
    Coproduct {
        xs: Vec<String>,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Equalizer of a parallel pair of arrows
    Equalizer {
        f: String,
        g: String,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Coequalizer of a parallel pair of arrows
    Coequalizer {
        f: String,
        g: String,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Pullback of two arrows with a common codomain
    Pullback {
        f: String,
        g: String,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Pushout of two arrows with a common domain
    Pushout {
        f: String,
        g: String,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Kernel pair of an arrow
    KernelPair {
        f: String,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Cokernel pair of an arrow
    CokernelPair {
        m: String,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Extend an arrow along a regular mono
    Extend {
        g: String,
        f: String,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Canonical arrow into the product over all maps into a family
    Canonical {
        x: String,
        #[arg(long, num_args = 1.., required = true)]
        family: Vec<String>,
        #[arg(long)]
        budget: Option<u128>,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Dualize a multiset (to its algebra presentation) or an arrow (to the
    /// homomorphism between the dual algebras)
    Dual {
        input: String,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Enumerate all quotients (partition + mu) of a multiset
    Quotients {
        x: String,
        /// Optional mu pools for points with infinite denominators, as JSON
        /// {"point": [<supernatural>, ...]}
        #[arg(long)]
        mu: Option<String>,
        #[command(flatten)]
        inline: InlineFlag,
    },
    /// Run a catalog check (use `check list` to see the ids)
    Check {
        id: String,
        /// Bound overrides as key=value (chain_bound, max_points,
        /// divisor_base, search_budget, axiom_budget, product_budget)
        #[arg(long)]
        bounds: Vec<String>,
    },
    /// Render a diagram of multisets and arrows as DOT
    ExportDot {
        diagram: String,
        #[command(flatten)]
        inline: InlineFlag,
    },
}

#[derive(Subcommand)]
enum SnOp {
    /// Pointwise maximum (lcm on naturals); empty input gives 1
    Join { values: Vec<String> },
    /// Pointwise minimum (gcd on naturals); input must be non-empty
    Meet { values: Vec<String> },
    /// Divisibility-order comparison
    Leq { a: String, b: String },
    /// Prime-power decomposition
    Decompose { a: String },
    /// Membership in one of the six subbasis families
    TopologyMember {
        /// t1..t6
        #[arg(long)]
        family: String,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        n: Option<u64>,
        value: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn load(arg: &str, inline: bool) -> Result<String, String> {
    if inline {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))
    }
}

fn parse_multiset(arg: &str, inline: bool) -> Result<FiniteMultiset, String> {
    let text = load(arg, inline)?;
    serde_json::from_str(&text).map_err(|e| format!("invalid multiset: {e}"))
}

#[derive(serde::Deserialize)]
struct ArrowJson {
    dom: FiniteMultiset,
    cod: FiniteMultiset,
    map: BTreeMap<String, String>,
}

fn parse_arrow(arg: &str, inline: bool) -> Result<MultisetArrow, String> {
    let text = load(arg, inline)?;
    let raw: ArrowJson = serde_json::from_str(&text).map_err(|e| format!("invalid arrow: {e}"))?;
    MultisetArrow::check(raw.dom, raw.cod, raw.map).map_err(|e| e.to_string())
}

fn parse_sn(arg: &str) -> Result<SupernaturalNumber, String> {
    if let Ok(n) = arg.parse::<u64>() {
        return SupernaturalNumber::from_natural(n).map_err(|e| e.to_string());
    }
    serde_json::from_str(arg).map_err(|e| format!("invalid supernatural number: {e}"))
}

fn emit<T: serde::Serialize>(value: &T) -> Result<(), String> {
    let text = serde_json::to_string(value).map_err(|e| e.to_string())?;
    println!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Sn { op } => run_sn(op),
        Command::Homs { x, y, inline } => {
            let x = parse_multiset(&x, inline.inline)?;
            let y = parse_multiset(&y, inline.inline)?;
            emit(&enumerate_homs(&x, &y))
        }
        Command::Classify { f, inline } => {
            let f = parse_arrow(&f, inline.inline)?;
            emit(&serde_json::json!({
                "class": f.classify(),
                "flags": f.classify().flags(),
            }))
        }
        Command::Product { xs, budget, inline } => {
            let factors: Vec<FiniteMultiset> = xs
                .iter()
                .map(|x| parse_multiset(x, inline.inline))
                .collect::<Result<_, _>>()?;
            let prod = product_with_budget(&factors, budget.unwrap_or(DEFAULT_PRODUCT_BUDGET))
                .map_err(|e| e.to_string())?;
            emit(&prod)
        }
        Command::Coproduct { xs, inline } => {
            let summands: Vec<FiniteMultiset> = xs
                .iter()
                .map(|x| parse_multiset(x, inline.inline))
                .collect::<Result<_, _>>()?;
            emit(&coproduct(&summands).map_err(|e| e.to_string())?)
        }
        Command::Equalizer { f, g, inline } => {
            let f = parse_arrow(&f, inline.inline)?;
            let g = parse_arrow(&g, inline.inline)?;
            emit(&equalizer(&f, &g).map_err(|e| e.to_string())?)
        }
        Command::Coequalizer { f, g, inline } => {
            let f = parse_arrow(&f, inline.inline)?;
            let g = parse_arrow(&g, inline.inline)?;
            emit(&coequalizer(&f, &g).map_err(|e| e.to_string())?)
        }
        Command::Pullback { f, g, inline } => {
            let f = parse_arrow(&f, inline.inline)?;
            let g = parse_arrow(&g, inline.inline)?;
            emit(&pullback(&f, &g).map_err(|e| e.to_string())?)
        }
        Command::Pushout { f, g, inline } => {
            let f = parse_arrow(&f, inline.inline)?;
            let g = parse_arrow(&g, inline.inline)?;
            emit(&pushout(&f, &g).map_err(|e| e.to_string())?)
        }
        Command::KernelPair { f, inline } => {
            let f = parse_arrow(&f, inline.inline)?;
            emit(&kernel_pair(&f).map_err(|e| e.to_string())?)
        }
        Command::CokernelPair { m, inline } => {
            let m = parse_arrow(&m, inline.inline)?;
            emit(&cokernel_pair(&m).map_err(|e| e.to_string())?)
        }
        Command::Extend { g, f, inline } => {
            let g = parse_arrow(&g, inline.inline)?;
            let f = parse_arrow(&f, inline.inline)?;
            emit(&mvms_core::mscat::extend_along_regular_mono(&g, &f).map_err(|e| e.to_string())?)
        }
        Command::Canonical {
            x,
            family,
            budget,
            inline,
        } => {
            let x = parse_multiset(&x, inline.inline)?;
            let members: Vec<FiniteMultiset> = family
                .iter()
                .map(|g| parse_multiset(g, inline.inline))
                .collect::<Result<_, _>>()?;
            let arrow =
                canonical_arrow_to_family(&x, &members, budget.unwrap_or(DEFAULT_PRODUCT_BUDGET))
                    .map_err(|e| e.to_string())?;
            emit(&arrow)
        }
        Command::Dual { input, inline } => {
            let text = load(&input, inline.inline)?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| format!("invalid JSON: {e}"))?;
            if value.get("map").is_some() {
                let raw: ArrowJson =
                    serde_json::from_value(value).map_err(|e| format!("invalid arrow: {e}"))?;
                let arrow =
                    MultisetArrow::check(raw.dom, raw.cod, raw.map).map_err(|e| e.to_string())?;
                let hom = dual_arrow(&arrow).map_err(|e| e.to_string())?;
                emit(&hom_to_json(&hom).map_err(|e| e.to_string())?)
            } else {
                let x: FiniteMultiset =
                    serde_json::from_value(value).map_err(|e| format!("invalid multiset: {e}"))?;
                let algebra = algebra_of(&x).map_err(|e| e.to_string())?;
                emit(&serde_json::json!({
                    "presentation": algebra.presentation(),
                    "size": algebra.size(),
                }))
            }
        }
        Command::Quotients { x, mu, inline } => {
            let x = parse_multiset(&x, inline.inline)?;
            let universe: Option<MuUniverse> = match mu {
                Some(text) => Some(
                    serde_json::from_str(&text).map_err(|e| format!("invalid mu universe: {e}"))?,
                ),
                None => None,
            };
            let relations =
                enumerate_relations(&x, universe.as_ref()).map_err(|e| e.to_string())?;
            emit(&relations)
        }
        Command::Check { id, bounds } => {
            if id == "list" {
                return emit(&ALL_CHECK_IDS);
            }
            let mut check_bounds = CheckBounds::default_for(&id);
            for raw in &bounds {
                apply_bound(&mut check_bounds, raw)?;
            }
            let result = run_check(&id, &check_bounds).map_err(|e| e.to_string())?;
            println!("{}", result.to_json_line());
            if result.passed() {
                Ok(())
            } else {
                Err(format!("check {id} failed"))
            }
        }
        Command::ExportDot { diagram, inline } => {
            let text = load(&diagram, inline.inline)?;
            let diagram: Diagram =
                serde_json::from_str(&text).map_err(|e| format!("invalid diagram: {e}"))?;
            let dot = render(&diagram).map_err(|e| e.to_string())?;
            print!("{dot}");
            Ok(())
        }
    }
}

fn apply_bound(bounds: &mut CheckBounds, raw: &str) -> Result<(), String> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| format!("bound {raw:?} is not key=value"))?;
    match key {
        "chain_bound" => bounds.chain_bound = value.parse().map_err(|e| format!("{key}: {e}"))?,
        "max_points" => bounds.max_points = value.parse().map_err(|e| format!("{key}: {e}"))?,
        "divisor_base" => bounds.divisor_base = value.parse().map_err(|e| format!("{key}: {e}"))?,
        "search_budget" => {
            bounds.search_budget = value.parse().map_err(|e| format!("{key}: {e}"))?
        }
        "axiom_budget" => bounds.axiom_budget = value.parse().map_err(|e| format!("{key}: {e}"))?,
        "product_budget" => {
            bounds.product_budget = value.parse().map_err(|e| format!("{key}: {e}"))?
        }
        other => return Err(format!("unknown bound {other:?}")),
    }
    Ok(())
}

fn run_sn(op: SnOp) -> Result<(), String> {
    match op {
        SnOp::Join { values } => {
            let parsed: Vec<SupernaturalNumber> = values
                .iter()
                .map(|v| parse_sn(v))
                .collect::<Result<_, _>>()?;
            emit(&SupernaturalNumber::join(&parsed))
        }
        SnOp::Meet { values } => {
            let parsed: Vec<SupernaturalNumber> = values
                .iter()
                .map(|v| parse_sn(v))
                .collect::<Result<_, _>>()?;
            emit(&SupernaturalNumber::meet(&parsed).map_err(|e| e.to_string())?)
        }
        SnOp::Leq { a, b } => {
            let a = parse_sn(&a)?;
            let b = parse_sn(&b)?;
            emit(&a.leq(&b))
        }
        SnOp::Decompose { a } => {
            let a = parse_sn(&a)?;
            let parts: Vec<serde_json::Value> = a
                .irreducible_decomposition()
                .into_iter()
                .map(|(p, e)| match e {
                    Exponent::Finite(k) => serde_json::json!([p, k]),
                    Exponent::Infinite => serde_json::json!([p, "inf"]),
                })
                .collect();
            emit(&parts)
        }
        SnOp::TopologyMember {
            family,
            p,
            k,
            n,
            value,
        } => {
            let a = parse_sn(&value)?;
            let need_pk = || -> Result<(u64, u32), String> {
                Ok((
                    p.ok_or("family requires --p")?,
                    k.ok_or("family requires --k")?,
                ))
            };
            let need_n =
                || -> Result<u64, String> { n.ok_or_else(|| "family requires --n".to_string()) };
            let family = match family.as_str() {
                "t1" => {
                    let (p, k) = need_pk()?;
                    TopologyFamily::T1 { p, k }
                }
                "t2" => {
                    let (p, k) = need_pk()?;
                    TopologyFamily::T2 { p, k }
                }
                "t3" => TopologyFamily::T3 { n: need_n()? },
                "t4" => TopologyFamily::T4 { n: need_n()? },
                "t5" => TopologyFamily::T5 { n: need_n()? },
                "t6" => TopologyFamily::T6 { n: need_n()? },
                other => return Err(format!("unknown family {other:?} (use t1..t6)")),
            };
            emit(&topology_member(&family, &a).map_err(|e| e.to_string())?)
        }
    }
}
