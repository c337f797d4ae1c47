//! Codes `(λ, b_0 < … < b_{n−1})` for points `Σ λ_i·h(b_i)` of the linear hull,
//! and exact certificates that two codes denote different points.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_arith::{format_scalar, scalar_seq_serde, ArithError, ExactScalar, TowerForm};
use crate::tree_builder::{Branch, Tree, TreeError};
use crate::verifier::{combination_threshold, in_window, CombinationSpec, VerifyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullError {
    #[error("hull code needs as many coefficients as branches ({lambda} vs {branches})")]
    LengthMismatch { lambda: usize, branches: usize },
    #[error("coefficient {0} is zero")]
    ZeroCoefficient(usize),
    #[error("branches {0} and {1} are not strictly increasing")]
    NotIncreasing(usize, usize),
    #[error("difference fits no window with m ≤ {m_max}{}", suggested_scale.as_ref().map(|c| format!("; rescaling by {} fits", format_scalar(c))).unwrap_or_default())]
    WindowUnfit {
        m_max: u64,
        /// Positive factor moving the difference into a window, if one exists.
        suggested_scale: Option<ExactScalar>,
    },
    #[error("no coordinate in ({threshold}, {threshold} + {horizon}] separates the codes")]
    HorizonExhausted { threshold: TowerForm, horizon: u64 },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// Total order on branches: lexicographic on the zero-extended sequences.
pub fn lex_compare(b1: &Branch, b2: &Branch) -> Ordering {
    b1.cmp(b2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullCode {
    lambda: Vec<ExactScalar>,
    branches: Vec<Branch>,
}

impl HullCode {
    pub fn new(lambda: Vec<ExactScalar>, branches: Vec<Branch>) -> Result<Self, HullError> {
        if lambda.len() != branches.len() {
            return Err(HullError::LengthMismatch {
                lambda: lambda.len(),
                branches: branches.len(),
            });
        }
        if let Some(i) = lambda.iter().position(Zero::is_zero) {
            return Err(HullError::ZeroCoefficient(i));
        }
        if let Some(i) = (1..branches.len()).find(|&i| branches[i - 1] >= branches[i]) {
            return Err(HullError::NotIncreasing(i - 1, i));
        }
        Ok(HullCode { lambda, branches })
    }

    /// The empty code, denoting the origin.
    pub fn zero() -> Self {
        HullCode {
            lambda: Vec::new(),
            branches: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn lambda(&self) -> &[ExactScalar] {
        &self.lambda
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn scaled(&self, c: &ExactScalar) -> HullCode {
        assert!(!c.is_zero(), "scaling by zero collapses the code");
        HullCode {
            lambda: self.lambda.iter().map(|l| l * c).collect(),
            branches: self.branches.clone(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct HullCodeRepr {
    #[serde(with = "scalar_seq_serde")]
    lambda: Vec<ExactScalar>,
    stems: Vec<Vec<u64>>,
}

impl Serialize for HullCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HullCodeRepr {
            lambda: self.lambda.clone(),
            stems: self.branches.iter().map(|b| b.stem().to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HullCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = HullCodeRepr::deserialize(d)?;
        HullCode::new(
            repr.lambda,
            repr.stems.into_iter().map(Branch::new).collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// Lazy evaluator of the point a code denotes.
#[derive(Debug, Clone)]
pub struct HullPoint<'t> {
    tree: &'t Tree,
    code: HullCode,
}

pub fn hull_encode(tree: &Tree, code: HullCode) -> HullPoint<'_> {
    HullPoint { tree, code }
}

impl HullPoint<'_> {
    pub fn code(&self) -> &HullCode {
        &self.code
    }

    pub fn coordinate(&self, k: u64) -> Result<TowerForm, TreeError> {
        combination_value(self.tree, &self.code.lambda, &self.code.branches, k)
    }
}

fn combination_value(
    tree: &Tree,
    lambda: &[ExactScalar],
    branches: &[Branch],
    k: u64,
) -> Result<TowerForm, TreeError> {
    let mut sum = TowerForm::zero();
    for (l, b) in lambda.iter().zip(branches) {
        sum = sum + tree.eval_coordinate(b, k)?.scale(l);
    }
    Ok(sum)
}

/// The combination `c1 − c2` with cancelled branches removed, in branch order.
pub fn difference(c1: &HullCode, c2: &HullCode) -> Vec<(Branch, ExactScalar)> {
    let mut merged: BTreeMap<Branch, ExactScalar> = BTreeMap::new();
    for (b, l) in c1.branches.iter().zip(&c1.lambda) {
        *merged.entry(b.clone()).or_insert_with(Zero::zero) += l;
    }
    for (b, l) in c2.branches.iter().zip(&c2.lambda) {
        *merged.entry(b.clone()).or_insert_with(Zero::zero) -= l;
    }
    merged.into_iter().filter(|(_, l)| !l.is_zero()).collect()
}

/// Least `m ≤ m_max` whose window holds every coefficient with `|E| ≤ m`.
pub fn fitting_window(coeffs: &[ExactScalar], m_max: u64) -> Option<u64> {
    (1..=m_max).find(|&m| coeffs.len() as u64 <= m && coeffs.iter().all(|l| in_window(l, m)))
}

/// A positive factor `c` such that `c·coeffs` fits a window with `m ≤ m_max`.
pub fn suggested_scale(coeffs: &[ExactScalar], m_max: u64) -> Option<ExactScalar> {
    let lo = coeffs.iter().map(Signed::abs).min()?;
    let hi = coeffs.iter().map(Signed::abs).max()?;
    let spread = &hi / &lo;
    let m = (1..=m_max).find(|&m| {
        let m_q = BigRational::from_integer(BigInt::from(m));
        coeffs.len() as u64 <= m && spread <= &m_q * &m_q
    })?;
    Some(BigRational::one() / (lo * BigRational::from_integer(BigInt::from(m))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullWitness {
    pub k: u64,
    /// `pr_k` of the scaled difference; its absolute value is at least 1.
    pub value: TowerForm,
    pub m: u64,
    pub threshold: TowerForm,
    /// Factor applied to both codes before the search.
    #[serde(with = "crate::exact_arith::scalar_serde")]
    pub scale: ExactScalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Distinction {
    Identical,
    Witness(HullWitness),
}

/// Searches `(max(l_E, Ξ_m), max(l_E, Ξ_m) + horizon]` for a coordinate where the
/// two points differ by at least 1.
pub fn hull_distinguish(
    tree: &Tree,
    c1: &HullCode,
    c2: &HullCode,
    m_max: u64,
    horizon: u64,
) -> Result<Distinction, HullError> {
    distinguish_scaled(tree, c1, c2, m_max, horizon, BigRational::one())
}

/// Like [`hull_distinguish`], rescaling both codes once when the difference fits no window.
pub fn hull_distinguish_rescaled(
    tree: &Tree,
    c1: &HullCode,
    c2: &HullCode,
    m_max: u64,
    horizon: u64,
) -> Result<Distinction, HullError> {
    match hull_distinguish(tree, c1, c2, m_max, horizon) {
        Err(HullError::WindowUnfit {
            suggested_scale: Some(c),
            ..
        }) => distinguish_scaled(tree, &c1.scaled(&c), &c2.scaled(&c), m_max, horizon, c),
        other => other,
    }
}

fn distinguish_scaled(
    tree: &Tree,
    c1: &HullCode,
    c2: &HullCode,
    m_max: u64,
    horizon: u64,
    scale: ExactScalar,
) -> Result<Distinction, HullError> {
    let diff = difference(c1, c2);
    if diff.is_empty() {
        return Ok(Distinction::Identical);
    }
    let (branches, lambda): (Vec<Branch>, Vec<ExactScalar>) = diff.into_iter().unzip();
    let Some(m) = fitting_window(&lambda, m_max) else {
        return Err(HullError::WindowUnfit {
            m_max,
            suggested_scale: suggested_scale(&lambda, m_max),
        });
    };
    let spec = CombinationSpec {
        m,
        branches,
        lambda,
    };
    let threshold = combination_threshold(tree, &spec)?;
    let start = threshold
        .expand(64)
        .ok()
        .and_then(|q| u64::try_from(q.to_integer()).ok())
        .ok_or(HullError::HorizonExhausted {
            threshold: threshold.clone(),
            horizon,
        })?;
    for k in start + 1..=start.saturating_add(horizon) {
        let value = spec.coordinate(tree, k)?;
        if value.abs_ge(&BigRational::one(), tree.bit_budget())? {
            return Ok(Distinction::Witness(HullWitness {
                k,
                value,
                m,
                threshold,
                scale,
            }));
        }
    }
    Err(HullError::HorizonExhausted { threshold, horizon })
}

impl std::fmt::Display for HullCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, b)) in self.lambda.iter().zip(&self.branches).enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·h({b})", format_scalar(l))?;
        }
        Ok(())
    }
}
