//! The contravariant correspondence between finite multisets with finite
//! denominators and finite MV-algebras.
//!
//! On objects the correspondence is the identity on presentations: an
//! algebra *is* its presenting multiset. The content lives in the arrow
//! maps: a denominator-decreasing function `f : X → Y` induces
//! `f* : A_Y → A_X` by `(f*(e))(x) = e(f(x))`, rescaled into the chain at
//! `x`, and on every finite instance this is a bijection between the two
//! hom-sets. Hom-sets are compared in the orientation
//! `Hom_MS(X, Y) ≅ Hom_MV(A_Y, A_X)` throughout.

use serde::Serialize;
use thiserror::Error;

use crate::multiset::{enumerate_homs, FiniteMultiset, MultisetArrow, MultisetError};
use crate::mv::{
    enumerate_homs_bruteforce, FiniteMVAlgebra, MVHomomorphism, MvError, FULL_VALIDATION_CAP,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DualityError {
    #[error("multiset has a point {0:?} with infinite denominator")]
    InfiniteDenominator(String),
    #[error("INTERNAL: {0}")]
    Internal(String),
    #[error(transparent)]
    Mv(MvError),
    #[error(transparent)]
    Multiset(#[from] MultisetError),
}

impl From<MvError> for DualityError {
    fn from(e: MvError) -> Self {
        match e {
            MvError::InfiniteDenominator(p) => DualityError::InfiniteDenominator(p),
            other => DualityError::Mv(other),
        }
    }
}

/// The algebra presented by a finite multiset with finite denominators.
pub fn algebra_of(x: &FiniteMultiset) -> Result<FiniteMVAlgebra, DualityError> {
    Ok(FiniteMVAlgebra::new(x.clone())?)
}

/// Point-index image table of an arrow: entry `i` is the codomain position
/// of the image of the `i`-th domain point.
pub(crate) fn arrow_point_table(f: &MultisetArrow) -> Vec<usize> {
    let cod_ids: Vec<&str> = f.cod().point_ids().collect();
    f.dom()
        .point_ids()
        .map(|x| {
            cod_ids
                .iter()
                .position(|y| *y == f.apply(x).unwrap())
                .expect("image is a codomain point")
        })
        .collect()
}

/// The table of the dual homomorphism `A_Y → A_X` of the point function
/// `X → Y` given by positions into `Y`'s point order.
pub(crate) fn dual_table_of_point_map(
    x: &FiniteMultiset,
    y: &FiniteMultiset,
    point_map: &[usize],
) -> Result<(FiniteMVAlgebra, FiniteMVAlgebra, Vec<u64>), DualityError> {
    let dom_algebra = algebra_of(y)?;
    let cod_algebra = algebra_of(x)?;
    let x_denoms = cod_algebra.chain_denominators();
    let y_denoms = dom_algebra.chain_denominators();
    let x_strides = cod_algebra.strides();
    let y_strides = dom_algebra.strides();

    // scale factor from the chain at f(x) into the chain at x
    let mut scales = Vec::with_capacity(point_map.len());
    for (&pos, &dx) in point_map.iter().zip(x_denoms) {
        let dy = y_denoms[pos];
        if dy == 0 || dx % dy != 0 {
            return Err(DualityError::Internal(format!(
                "denominator {dy} does not divide {dx}"
            )));
        }
        scales.push(dx / dy);
    }

    let coords = y_denoms.len();
    let mut digits = vec![0u64; coords];
    let mut table = Vec::with_capacity(dom_algebra.size() as usize);
    for mut rem in 0..dom_algebra.size() {
        for (c, &stride) in y_strides.iter().enumerate() {
            digits[c] = rem / stride;
            rem %= stride;
        }
        let index: u64 = point_map
            .iter()
            .zip(&scales)
            .zip(x_strides)
            .map(|((&pos, &scale), &stride)| digits[pos] * scale * stride)
            .sum();
        table.push(index);
    }
    Ok((dom_algebra, cod_algebra, table))
}

pub(crate) fn dual_arrow_unvalidated(f: &MultisetArrow) -> Result<MVHomomorphism, DualityError> {
    let points = arrow_point_table(f);
    let (dom_algebra, cod_algebra, table) = dual_table_of_point_map(f.dom(), f.cod(), &points)?;
    Ok(MVHomomorphism::from_table(dom_algebra, cod_algebra, table)?)
}

/// The homomorphism dual to an arrow: `f : X → Y` yields
/// `f* : A_Y → A_X` with `(f*(e))(x) = e(f(x))` rescaled from the chain at
/// `f(x)` into the (divisible by it) chain at `x`. The result is validated
/// (exhaustively below [`FULL_VALIDATION_CAP`] elements, along derivations
/// above it); a failure indicates a bug, not bad input.
pub fn dual_arrow(f: &MultisetArrow) -> Result<MVHomomorphism, DualityError> {
    let hom = dual_arrow_unvalidated(f)?;
    let validation = if hom.dom().size() <= FULL_VALIDATION_CAP {
        hom.validate_exhaustive()
    } else {
        hom.validate_along_derivations()
    };
    validation.map_err(|e| DualityError::Internal(format!("dual arrow invalid: {e}")))?;
    Ok(hom)
}

#[derive(Debug, Clone, Serialize)]
pub struct HomBijectionReport {
    pub count_ms: u64,
    pub count_mv: u64,
    pub bijection: bool,
    pub witness: Option<String>,
}

/// Counts `Hom_MS(X, Y)` by direct enumeration and `Hom_MV(A_Y, A_X)` by
/// the brute-force search, then checks that dualizing is a bijection
/// between them: duals are pairwise distinct, each occurs in the searched
/// hom-set, and the counts agree.
pub fn check_hom_bijection(
    x: &FiniteMultiset,
    y: &FiniteMultiset,
    search_budget: u64,
) -> Result<HomBijectionReport, DualityError> {
    let ms_arrows = enumerate_homs(x, y);
    let a_x = algebra_of(x)?;
    let a_y = algebra_of(y)?;
    let mv_homs = enumerate_homs_bruteforce(&a_y, &a_x, search_budget)?;

    let mut witness = None;
    let mut dual_tables: Vec<Vec<u64>> = Vec::with_capacity(ms_arrows.len());
    for g in &ms_arrows {
        // membership in the searched hom-set below certifies each dual, so
        // the per-arrow validation pass is skipped here
        let dual = dual_arrow_unvalidated(g)?;
        let table = dual.table().to_vec();
        if dual_tables.contains(&table) {
            witness
                .get_or_insert_with(|| format!("dualizing is not injective at map {:?}", g.map()));
        }
        if !mv_homs.iter().any(|h| h.table() == table.as_slice()) {
            witness.get_or_insert_with(|| {
                format!(
                    "dual of map {:?} missing from the searched hom-set",
                    g.map()
                )
            });
        }
        dual_tables.push(table);
    }
    if ms_arrows.len() != mv_homs.len() {
        witness.get_or_insert_with(|| {
            format!(
                "hom-set sizes differ: {} arrows vs {} homomorphisms",
                ms_arrows.len(),
                mv_homs.len()
            )
        });
    }
    Ok(HomBijectionReport {
        count_ms: ms_arrows.len() as u64,
        count_mv: mv_homs.len() as u64,
        bijection: witness.is_none(),
        witness,
    })
}
