//! Exact rationals and symbolic tower numbers.
//!
//! A [`TowerForm`] stands for `Σ q_a·2^(2^a) + r` with rational `q_a` and `r`.
//! Tower indices are arbitrary-precision, so values such as `2^(2^(2^200))`
//! are representable; their sign is decided by comparing bit-length bounds of
//! the terms and only expanded to a bignum when that is inconclusive and the
//! expansion fits the bit budget.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Exact rational scalar. Always kept in lowest terms with a positive denominator.
pub type ExactScalar = BigRational;

/// Default number of bits a tower may expand to (`2^a ≤ budget`).
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("sign not decidable by dominance and 2^(2^{index_bits}-bit index) exceeds the {budget}-bit budget")]
    BudgetExceeded { index_bits: u64, budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse exact scalar from {0:?}")]
pub struct ParseScalarError(pub String);

pub fn scalar(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> ExactScalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^-e` as an exact scalar.
pub fn pow2_neg(e: u64) -> ExactScalar {
    BigRational::new(BigInt::one(), BigInt::one() << e)
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_scalar(s: &str) -> Result<ExactScalar, ParseScalarError> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| ParseScalarError(s.to_string()))?;
            let q = BigInt::from_str(q.trim()).map_err(|_| ParseScalarError(s.to_string()))?;
            if q.is_zero() {
                return Err(ParseScalarError(s.to_string()));
            }
            BigRational::new(p, q)
        }
        None => BigRational::from_integer(
            BigInt::from_str(t).map_err(|_| ParseScalarError(s.to_string()))?,
        ),
    };
    Ok(parsed)
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_scalar(q: &ExactScalar) -> String {
    q.to_string()
}

/// Serde adapter for a single scalar encoded as a string.
pub mod scalar_serde {
    use super::*;

    pub fn serialize<S: Serializer>(q: &ExactScalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ExactScalar, D::Error> {
        let raw = String::deserialize(d)?;
        parse_scalar(&raw).map_err(D::Error::custom)
    }
}

/// Serde adapter for a list of scalars encoded as strings.
pub mod scalar_seq_serde {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(qs: &[ExactScalar], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(qs.len()))?;
        for q in qs {
            seq.serialize_element(&format_scalar(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<ExactScalar>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_scalar(s).map_err(D::Error::custom))
            .collect()
    }
}

fn bits_of(n: &BigInt) -> i64 {
    n.bits() as i64
}

/// Bounds `lo`, `hi` with `2^lo ≤ |q| < 2^hi`; `q` must be nonzero.
fn scalar_log2_bounds(q: &ExactScalar) -> (i64, i64) {
    let bn = bits_of(q.numer());
    let bd = bits_of(q.denom());
    (bn - 1 - bd, bn - bd + 1)
}

fn ceil_log2(c: usize) -> i64 {
    if c <= 1 {
        0
    } else {
        (usize::BITS - (c - 1).leading_zeros()) as i64
    }
}

/// A symbolic exponent `2^tower + offset` (or just `offset` when there is no tower).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponent {
    pub tower: Option<BigUint>,
    pub offset: i64,
}

impl Exponent {
    fn plain(offset: i64) -> Self {
        Exponent {
            tower: None,
            offset,
        }
    }

    fn shifted(&self, by: i64) -> Self {
        Exponent {
            tower: self.tower.clone(),
            offset: self.offset + by,
        }
    }

    /// Exact value when the tower index is below 120.
    pub fn to_i128(&self) -> Option<i128> {
        let base = match &self.tower {
            None => 0,
            Some(a) => {
                let a = a.to_u32().filter(|&a| a < 120)?;
                1i128 << a
            }
        };
        Some(base + self.offset as i128)
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.tower == other.tower {
            return self.offset.cmp(&other.offset);
        }
        if let (Some(x), Some(y)) = (self.to_i128(), other.to_i128()) {
            return x.cmp(&y);
        }
        // Distinct towers with one index ≥ 120: the gap 2^A − 2^B ≥ 2^119 swamps any i64 offsets.
        match (&self.tower, &other.tower) {
            (None, _) => Ordering::Less,
            (_, None) => Ordering::Greater,
            (Some(a), Some(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `2^(2^a)` as an exact integer. Callers must keep `a` small.
pub fn expand_tower(a: u32) -> BigInt {
    BigInt::one() << (1usize << a)
}

/// Exact symbolic number `Σ_a q_a·2^(2^a) + r` with positive tower indices.
///
/// Derived equality is structural. Two forms can denote the same number
/// (`{1↦1, r:0}` and `{r:4}`), so use [`TowerForm::value_eq`] to compare values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TowerForm {
    terms: BTreeMap<BigUint, ExactScalar>,
    residue: ExactScalar,
}

impl Default for TowerForm {
    fn default() -> Self {
        Self::zero()
    }
}

impl TowerForm {
    pub fn zero() -> Self {
        TowerForm {
            terms: BTreeMap::new(),
            residue: ExactScalar::zero(),
        }
    }

    pub fn from_scalar(q: ExactScalar) -> Self {
        TowerForm {
            terms: BTreeMap::new(),
            residue: q,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_scalar(scalar(n))
    }

    /// `2^(2^a)`. Index zero is folded into the residue (`2^(2^0) = 2`).
    pub fn tower(a: impl Into<BigUint>) -> Self {
        Self::tower_offset(a, ExactScalar::zero())
    }

    /// `2^(2^a) + e`.
    pub fn tower_offset(a: impl Into<BigUint>, e: ExactScalar) -> Self {
        let a = a.into();
        if a.is_zero() {
            return Self::from_scalar(e + scalar(2));
        }
        let mut terms = BTreeMap::new();
        terms.insert(a, ExactScalar::one());
        TowerForm { terms, residue: e }
    }

    /// Builds a form from raw parts, merging repeated indices and dropping zeros.
    pub fn from_parts(
        terms: impl IntoIterator<Item = (BigUint, ExactScalar)>,
        residue: ExactScalar,
    ) -> Self {
        let mut out = Self::from_scalar(residue);
        for (a, q) in terms {
            if a.is_zero() {
                out.residue += q * scalar(2);
            } else {
                *out.terms.entry(a).or_insert_with(ExactScalar::zero) += q;
            }
        }
        out.canonicalize();
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn residue(&self) -> &ExactScalar {
        &self.residue
    }

    pub fn leading(&self) -> Option<(&BigUint, &ExactScalar)> {
        self.terms.iter().next_back()
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_scalar(&self) -> Option<&ExactScalar> {
        self.is_scalar().then_some(&self.residue)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.residue.is_zero()
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.iter().all(|(a, q)| !a.is_zero() && !q.is_zero())
    }

    /// Drops zero coefficients. Idempotent.
    pub fn canonicalize(&mut self) {
        self.terms.retain(|_, q| !q.is_zero());
    }

    pub fn scale(&self, q: &ExactScalar) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        TowerForm {
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * q)).collect(),
            residue: &self.residue * q,
        }
    }

    pub fn add_scalar(&self, q: &ExactScalar) -> Self {
        let mut out = self.clone();
        out.residue += q;
        out
    }

    /// Expands to a rational when every `2^a` is within `bit_budget`.
    pub fn expand(&self, bit_budget: u64) -> Result<ExactScalar, ArithError> {
        let mut total = self.residue.clone();
        for (a, q) in &self.terms {
            let small = a
                .to_u32()
                .filter(|&a| a < 64 && (1u64 << a) <= bit_budget)
                .ok_or(ArithError::BudgetExceeded {
                    index_bits: a.bits(),
                    budget: bit_budget,
                })?;
            total += q * BigRational::from_integer(expand_tower(small));
        }
        Ok(total)
    }

    fn term_bounds(a: &BigUint, q: &ExactScalar) -> (Exponent, Exponent) {
        let (lo, hi) = scalar_log2_bounds(q);
        let tower = Some(a.clone());
        (
            Exponent {
                tower: tower.clone(),
                offset: lo,
            },
            Exponent { tower, offset: hi },
        )
    }

    /// Exponent strictly above the magnitude of everything except the leading term.
    fn rest_bound(&self) -> Option<Exponent> {
        let mut count = 0usize;
        let mut max: Option<Exponent> = None;
        let lead = self.leading().map(|(a, _)| a.clone());
        for (a, q) in &self.terms {
            if Some(a) == lead.as_ref() {
                continue;
            }
            let hi = Self::term_bounds(a, q).1;
            count += 1;
            max = Some(match max {
                Some(m) if m >= hi => m,
                _ => hi,
            });
        }
        if !self.residue.is_zero() {
            let hi = Exponent::plain(scalar_log2_bounds(&self.residue).1);
            count += 1;
            max = Some(match max {
                Some(m) if m >= hi => m,
                _ => hi,
            });
        }
        max.map(|m| m.shifted(ceil_log2(count)))
    }

    /// Sign decided purely from bit-length bounds, or `None` when inconclusive.
    ///
    /// The leading term decides when `|q*|·2^(2^a*) ≥ 2^lo` and the remaining
    /// terms sum to less than `2^rest`, with `lo ≥ rest`.
    pub fn dominance_sign(&self) -> Option<Ordering> {
        let Some((a, q)) = self.leading() else {
            return Some(self.residue.cmp(&ExactScalar::zero()));
        };
        let lead_sign = q.cmp(&ExactScalar::zero());
        match self.rest_bound() {
            None => Some(lead_sign),
            Some(rest) => {
                let (lo, _) = Self::term_bounds(a, q);
                (lo >= rest).then_some(lead_sign)
            }
        }
    }

    /// Exponents `lo`, `hi` with `2^lo ≤ |x| < 2^hi`, when the leading term
    /// dominates by a factor of two (or there are no tower terms).
    pub fn log2_bracket(&self) -> Option<(Exponent, Exponent)> {
        let Some((a, q)) = self.leading() else {
            if self.residue.is_zero() {
                return None;
            }
            let (lo, hi) = scalar_log2_bounds(&self.residue);
            return Some((Exponent::plain(lo), Exponent::plain(hi)));
        };
        let (lo, hi) = Self::term_bounds(a, q);
        match self.rest_bound() {
            None => Some((lo, hi)),
            Some(rest) if lo > rest => Some((lo.shifted(-1), hi.shifted(1))),
            Some(_) => None,
        }
    }

    /// Sign of the value under [`DEFAULT_BIT_BUDGET`].
    pub fn sign(&self) -> Result<Ordering, ArithError> {
        self.sign_within(DEFAULT_BIT_BUDGET)
    }

    pub fn sign_within(&self, bit_budget: u64) -> Result<Ordering, ArithError> {
        if let Some(s) = self.dominance_sign() {
            return Ok(s);
        }
        Ok(self.expand(bit_budget)?.cmp(&ExactScalar::zero()))
    }

    pub fn cmp_within(&self, other: &TowerForm, bit_budget: u64) -> Result<Ordering, ArithError> {
        (self - other).sign_within(bit_budget)
    }

    /// Value equality. A difference that is neither structurally zero nor
    /// decidable within the default budget is reported as unequal.
    pub fn value_eq(&self, other: &TowerForm) -> bool {
        let diff = self - other;
        diff.is_zero() || diff.sign() == Ok(Ordering::Equal)
    }

    pub fn abs(&self, bit_budget: u64) -> Result<TowerForm, ArithError> {
        Ok(match self.sign_within(bit_budget)? {
            Ordering::Less => -self,
            _ => self.clone(),
        })
    }

    /// `|x| ≥ bound` for a nonnegative bound.
    pub fn abs_ge(&self, bound: &ExactScalar, bit_budget: u64) -> Result<bool, ArithError> {
        if bound.is_zero() {
            return Ok(true);
        }
        if self.add_scalar(&-bound).sign_within(bit_budget)? != Ordering::Less {
            return Ok(true);
        }
        Ok(self.add_scalar(bound).sign_within(bit_budget)? != Ordering::Greater)
    }

    /// `|x| ≤ bound` for a nonnegative bound.
    pub fn abs_le(&self, bound: &ExactScalar, bit_budget: u64) -> Result<bool, ArithError> {
        Ok(
            self.add_scalar(&-bound).sign_within(bit_budget)? != Ordering::Greater
                && self.add_scalar(bound).sign_within(bit_budget)? != Ordering::Less,
        )
    }

    /// `self − 2^(2^a)` as a scalar, if that difference is rational and exactly computable.
    pub fn offset_from_tower(&self, a: &BigUint) -> Option<ExactScalar> {
        let diff = self - &TowerForm::tower(a.clone());
        match diff.as_scalar() {
            Some(q) => Some(q.clone()),
            None => {
                let small = diff
                    .terms
                    .keys()
                    .all(|a| a.to_u32().is_some_and(|a| a <= 12));
                if small {
                    diff.expand(u64::MAX).ok()
                } else {
                    None
                }
            }
        }
    }
}

impl Add for &TowerForm {
    type Output = TowerForm;

    fn add(self, rhs: &TowerForm) -> TowerForm {
        let mut out = self.clone();
        for (a, q) in &rhs.terms {
            *out.terms.entry(a.clone()).or_insert_with(ExactScalar::zero) += q;
        }
        out.residue += &rhs.residue;
        out.canonicalize();
        out
    }
}

impl Add for TowerForm {
    type Output = TowerForm;

    fn add(self, rhs: TowerForm) -> TowerForm {
        &self + &rhs
    }
}

impl Neg for &TowerForm {
    type Output = TowerForm;

    fn neg(self) -> TowerForm {
        TowerForm {
            terms: self.terms.iter().map(|(a, q)| (a.clone(), -q)).collect(),
            residue: -&self.residue,
        }
    }
}

impl Neg for TowerForm {
    type Output = TowerForm;

    fn neg(self) -> TowerForm {
        -&self
    }
}

impl Sub for &TowerForm {
    type Output = TowerForm;

    fn sub(self, rhs: &TowerForm) -> TowerForm {
        self + &(-rhs)
    }
}

impl Sub for TowerForm {
    type Output = TowerForm;

    fn sub(self, rhs: TowerForm) -> TowerForm {
        &self - &rhs
    }
}

impl fmt::Display for TowerForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, q) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if q.is_one() {
                write!(f, "2^2^{a}")?;
            } else {
                write!(f, "({q})·2^2^{a}")?;
            }
        }
        if first {
            write!(f, "{}", self.residue)
        } else if self.residue.is_zero() {
            Ok(())
        } else if self.residue.is_negative() {
            write!(f, " - {}", self.residue.abs())
        } else {
            write!(f, " + {}", self.residue)
        }
    }
}

fn index_to_number(a: &BigUint) -> serde_json::Number {
    serde_json::Number::from_str(&a.to_string()).expect("decimal digits form a JSON number")
}

fn number_to_index(n: &serde_json::Number) -> Option<BigUint> {
    BigUint::from_str(&n.to_string()).ok()
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    a: serde_json::Number,
    q: String,
}

#[derive(Serialize, Deserialize)]
struct TowerRepr {
    terms: Vec<TermRepr>,
    r: String,
}

impl Serialize for TowerForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TowerRepr {
            terms: self
                .terms
                .iter()
                .map(|(a, q)| TermRepr {
                    a: index_to_number(a),
                    q: format_scalar(q),
                })
                .collect(),
            r: format_scalar(&self.residue),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TowerForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = TowerRepr::deserialize(d)?;
        let mut terms = BTreeMap::new();
        for t in repr.terms {
            let a = number_to_index(&t.a)
                .filter(|a| !a.is_zero())
                .ok_or_else(|| D::Error::custom(format!("bad tower index {}", t.a)))?;
            let q = parse_scalar(&t.q).map_err(D::Error::custom)?;
            if q.is_zero() || terms.insert(a, q).is_some() {
                return Err(D::Error::custom("tower form is not canonical"));
            }
        }
        Ok(TowerForm {
            terms,
            residue: parse_scalar(&repr.r).map_err(D::Error::custom)?,
        })
    }
}

/// A coordinate value in JSON: a bare scalar string when there are no tower
/// terms, otherwise the full tower-form object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactValue(pub TowerForm);

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.as_scalar() {
            Some(q) => s.serialize_str(&format_scalar(q)),
            None => self.0.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ExactValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Scalar(String),
            Form(TowerForm),
        }
        Ok(ExactValue(match Repr::deserialize(d)? {
            Repr::Scalar(s) => TowerForm::from_scalar(parse_scalar(&s).map_err(D::Error::custom)?),
            Repr::Form(f) => f,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(terms: &[(u64, ExactScalar)], r: ExactScalar) -> TowerForm {
        TowerForm::from_parts(terms.iter().map(|(a, q)| (BigUint::from(*a), q.clone())), r)
    }

    #[test]
    fn add_cancels_towers() {
        let x = form(&[(3, scalar(1))], scalar(0));
        let y = form(&[(3, scalar(-1))], scalar(5));
        let sum = &x + &y;
        assert!(sum.is_scalar());
        assert_eq!(sum.residue(), &scalar(5));
    }

    #[test]
    fn add_disjoint_supports() {
        let sum = &TowerForm::tower(1u32) + &TowerForm::from_scalar(ratio(1, 2));
        assert_eq!(sum, form(&[(1, scalar(1))], ratio(1, 2)));
        assert_eq!(sum.expand(64).unwrap(), ratio(9, 2));
    }

    #[test]
    fn add_merges_same_index() {
        let x = form(&[(2, scalar(3))], scalar(1));
        let y = form(&[(2, scalar(1))], scalar(-1));
        let sum = &x + &y;
        assert_eq!(sum, form(&[(2, scalar(4))], scalar(0)));
        assert_eq!(sum.expand(64).unwrap(), scalar(64));
    }

    #[test]
    fn scale_examples() {
        let any = form(&[(7, scalar(3))], scalar(2));
        assert!(any.scale(&scalar(0)).is_zero());
        let x = form(&[(2, scalar(1))], scalar(2));
        assert_eq!(x.scale(&scalar(-2)), form(&[(2, scalar(-2))], scalar(-4)));
        let y = form(&[(3, scalar(4))], scalar(1));
        assert_eq!(y.scale(&ratio(1, 2)), form(&[(3, scalar(2))], ratio(1, 2)));
    }

    #[test]
    fn sign_needs_expansion_when_residue_is_large() {
        // 2^8 = 256 against −10^6: bit bounds cannot decide, expansion says negative.
        let x = form(&[(3, scalar(1))], scalar(-1_000_000));
        assert_eq!(x.dominance_sign(), None);
        assert_eq!(x.sign().unwrap(), Ordering::Less);
    }

    #[test]
    fn sign_scalar_and_dominant_lead() {
        assert_eq!(
            TowerForm::from_scalar(ratio(-3, 4)).sign().unwrap(),
            Ordering::Less
        );
        let x = form(&[(5, scalar(1)), (1, scalar(-100))], scalar(0));
        assert_eq!(x.dominance_sign(), Some(Ordering::Greater));
        assert_eq!(x.sign().unwrap(), Ordering::Greater);
    }

    #[test]
    fn sign_beyond_budget_is_an_error_only_when_inconclusive() {
        let huge_coeff = BigRational::from_integer(BigInt::one() << 5000u32);
        let x = TowerForm::from_parts([(BigUint::from(12u32), scalar(1))], -huge_coeff);
        // The lead 2^4096 is outweighed by the residue, which only expansion can see.
        assert_eq!(x.dominance_sign(), None);
        assert_eq!(x.sign_within(1 << 12).unwrap(), Ordering::Less);
        assert!(matches!(
            x.sign_within(1 << 11),
            Err(ArithError::BudgetExceeded { .. })
        ));
        let giant = TowerForm::tower_offset(BigUint::one() << 300u32, scalar(-7));
        assert_eq!(giant.sign_within(1 << 10).unwrap(), Ordering::Greater);
    }

    #[test]
    fn huge_indices_order_by_index() {
        let big = BigUint::one() << 400u32;
        let x = TowerForm::tower_offset(big.clone() + 1u32, scalar(-5));
        let y = TowerForm::tower_offset(big, scalar(5)).scale(&scalar(3));
        assert_eq!(x.cmp_within(&y, 1 << 10).unwrap(), Ordering::Greater);
        assert_eq!(y.cmp_within(&x, 1 << 10).unwrap(), Ordering::Less);
    }

    #[test]
    fn abs_ge_examples() {
        let x = form(&[(2, scalar(1))], scalar(2));
        assert!(x.abs_ge(&scalar(18), DEFAULT_BIT_BUDGET).unwrap());
        assert!(!x.abs_ge(&scalar(19), DEFAULT_BIT_BUDGET).unwrap());
        assert!(TowerForm::zero()
            .abs_ge(&scalar(0), DEFAULT_BIT_BUDGET)
            .unwrap());
        assert!((-&x).abs_ge(&scalar(18), DEFAULT_BIT_BUDGET).unwrap());
        assert!(x.abs_le(&scalar(18), DEFAULT_BIT_BUDGET).unwrap());
        assert!(!x.abs_le(&scalar(17), DEFAULT_BIT_BUDGET).unwrap());
    }

    #[test]
    fn index_zero_folds_into_residue() {
        assert_eq!(TowerForm::tower(0u32), TowerForm::from_integer(2));
    }

    #[test]
    fn scalar_text_round_trip() {
        assert_eq!(format_scalar(&ratio(6, -4)), "-3/2");
        assert_eq!(format_scalar(&scalar(5)), "5");
        assert_eq!(parse_scalar("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_scalar(" 7 ").unwrap(), scalar(7));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn json_encoding() {
        let xi2 = TowerForm::tower_offset(3u32, scalar(3));
        let text = serde_json::to_string(&xi2).unwrap();
        assert_eq!(text, r#"{"terms":[{"a":3,"q":"1"}],"r":"3"}"#);
        let back: TowerForm = serde_json::from_str(&text).unwrap();
        assert_eq!(back, xi2);

        let big = TowerForm::tower_offset(BigUint::one() << 100u32, ratio(-1, 2));
        let text = serde_json::to_string(&big).unwrap();
        assert!(text.contains(r#""a":1267650600228229401496703205376"#));
        assert_eq!(serde_json::from_str::<TowerForm>(&text).unwrap(), big);

        let v = ExactValue(TowerForm::from_scalar(ratio(7, 2)));
        assert_eq!(serde_json::to_string(&v).unwrap(), r#""7/2""#);
        assert_eq!(serde_json::from_str::<ExactValue>(r#""7/2""#).unwrap(), v);
        assert!(
            serde_json::from_str::<TowerForm>(r#"{"terms":[{"a":2,"q":"0"}],"r":"0"}"#).is_err()
        );
    }

    #[test]
    fn offset_from_tower_handles_scalars() {
        let a = BigUint::from(1u32);
        assert_eq!(
            TowerForm::from_scalar(ratio(7, 2)).offset_from_tower(&a),
            Some(ratio(-1, 2))
        );
        let big = BigUint::one() << 70u32;
        assert_eq!(
            TowerForm::tower_offset(big.clone(), scalar(3)).offset_from_tower(&big),
            Some(scalar(3))
        );
        assert_eq!(TowerForm::from_integer(3).offset_from_tower(&big), None);
    }
}
