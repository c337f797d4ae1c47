//! The disjoint family of thick sets `T_j = ⋃_{a∈A_j} [2^(2^a) − a, 2^(2^a) + a]`,
//! the thresholds `ξ_m`/`Ξ_m`, markers and the node-to-family bijection.
//!
//! `A_j = {pair(j, k) + 1 : k ≥ 0}` is a row of the Cantor pairing, so
//! `min A_j = j(j+1)/2 + 1` grows only quadratically in `j`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::exact_arith::{scalar, ArithError, ExactScalar, TowerForm, DEFAULT_BIT_BUDGET};

/// Cantor pairing `(x+y)(x+y+1)/2 + y`.
pub fn cantor_pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

pub fn cantor_unpair(z: &BigUint) -> (BigUint, BigUint) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let y = z - t;
    let x = w - &y;
    (x, y)
}

pub fn cantor_pair_u64(x: u64, y: u64) -> Option<u64> {
    let s = (x as u128) + (y as u128);
    let z = s * (s + 1) / 2 + y as u128;
    u64::try_from(z).ok()
}

pub fn cantor_unpair_u64(z: u64) -> (u64, u64) {
    let (x, y) = cantor_unpair(&BigUint::from(z));
    (x.to_u64().unwrap_or(0), y.to_u64().unwrap_or(0))
}

/// Does `2^(2^a) − a` exceed `n`?
pub fn left_end_exceeds(a: &BigUint, n: u64) -> bool {
    match a.to_u32() {
        Some(a) if a <= 6 => {
            let left = (1u128 << (1u32 << a)) - a as u128;
            left > n as u128
        }
        _ => true,
    }
}

/// One member `T_j` of the disjoint family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThickSet {
    family: BigUint,
}

impl ThickSet {
    pub fn new(family: impl Into<BigUint>) -> Self {
        ThickSet {
            family: family.into(),
        }
    }

    pub fn family(&self) -> &BigUint {
        &self.family
    }

    /// The `k`-th element of `A_j` in increasing order.
    pub fn tower_index(&self, k: &BigUint) -> BigUint {
        cantor_pair(&self.family, k) + 1u32
    }

    pub fn contains_index(&self, a: &BigUint) -> bool {
        !a.is_zero() && cantor_unpair(&(a - 1u32)).0 == self.family
    }

    /// Elements of `A_j` in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = BigUint> + '_ {
        let mut k = BigUint::zero();
        std::iter::from_fn(move || {
            let a = self.tower_index(&k);
            k += 1u32;
            Some(a)
        })
    }

    /// Elements of `A_j` whose interval lies entirely beyond `n`, in increasing order.
    pub fn admissible_indices(&self, n: u64) -> impl Iterator<Item = BigUint> + '_ {
        self.indices().skip_while(move |a| !left_end_exceeds(a, n))
    }

    /// `[2^(2^a) − a, 2^(2^a) + a]`.
    pub fn interval(a: &BigUint) -> (TowerForm, TowerForm) {
        let half = BigRational::from_integer(BigInt::from(a.clone()));
        (
            TowerForm::tower_offset(a.clone(), -half.clone()),
            TowerForm::tower_offset(a.clone(), half),
        )
    }

    /// Tower indices that could host `q`, from a bracket on `log2 |q|`.
    fn candidate_indices(q: &TowerForm, bit_budget: u64) -> Result<Vec<BigUint>, ArithError> {
        let (lo, hi) = match q.log2_bracket() {
            Some(b) => b,
            None => {
                let expanded = TowerForm::from_scalar(q.expand(bit_budget)?);
                match expanded.log2_bracket() {
                    Some(b) => b,
                    None => return Ok(Vec::new()),
                }
            }
        };
        // q ∈ I_a implies 2^a − 1 ≤ log2 q ≤ 2^a + 1, i.e. 2^a ∈ [lo − 1, hi + 1].
        match (lo.to_i128(), hi.to_i128()) {
            (Some(lo), Some(hi)) => {
                let mut out = Vec::new();
                for a in 1u32..127 {
                    let p = 1i128 << a;
                    if p > hi + 1 {
                        break;
                    }
                    if p >= lo - 1 {
                        out.push(BigUint::from(a));
                    }
                }
                Ok(out)
            }
            // A lead index ≥ 120 pins the interval to that index.
            _ => Ok(hi.tower.into_iter().collect()),
        }
    }

    pub fn contains(&self, q: &TowerForm) -> Result<bool, ArithError> {
        self.contains_within(q, DEFAULT_BIT_BUDGET)
    }

    pub fn contains_within(&self, q: &TowerForm, bit_budget: u64) -> Result<bool, ArithError> {
        if q.sign_within(bit_budget)? != Ordering::Greater {
            return Ok(false);
        }
        for a in Self::candidate_indices(q, bit_budget)? {
            if !self.contains_index(&a) {
                continue;
            }
            let (left, right) = Self::interval(&a);
            if q.cmp_within(&left, bit_budget)? != Ordering::Less
                && q.cmp_within(&right, bit_budget)? != Ordering::Greater
            {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Index `a*` of the first interval of `A_j` lying beyond `n`.
    pub fn marker_index(&self, n: u64) -> BigUint {
        self.admissible_indices(n).next().expect("A_j is infinite")
    }

    /// `t_{j,n} = 2^(2^a*) − a*`.
    pub fn marker(&self, n: u64) -> TowerForm {
        Self::interval(&self.marker_index(n)).0
    }

    /// `t_{j,n} + 1/2`, a fixed element of the trimmed set.
    pub fn canonical_element(&self, n: u64) -> TowerForm {
        self.marker(n).add_scalar(&crate::exact_arith::ratio(1, 2))
    }

    /// Membership in `T_{j,n} = T_j \ ({t_{j,n}} ∪ [−n, n])`.
    pub fn trimmed_contains(&self, n: u64, q: &TowerForm) -> Result<bool, ArithError> {
        if q.abs_le(
            &BigRational::from_integer(BigInt::from(n)),
            DEFAULT_BIT_BUDGET,
        )? {
            return Ok(false);
        }
        if q.value_eq(&self.marker(n)) {
            return Ok(false);
        }
        self.contains(q)
    }
}

pub fn thick_member(j: &BigUint, q: &TowerForm) -> Result<bool, ArithError> {
    ThickSet::new(j.clone()).contains(q)
}

pub fn marker(j: &BigUint, n: u64) -> TowerForm {
    ThickSet::new(j.clone()).marker(n)
}

pub fn trimmed_member(j: &BigUint, n: u64, q: &TowerForm) -> Result<bool, ArithError> {
    ThickSet::new(j.clone()).trimmed_contains(n, q)
}

pub fn canonical_element(j: &BigUint, n: u64) -> TowerForm {
    ThickSet::new(j.clone()).canonical_element(n)
}

/// `2^(2^x) − x − m(1 + m + m²(2^(2^(x−1)) + x))`; the threshold predicate holds iff this is ≥ 0.
fn predicate_slack(m: u64, x: u64) -> TowerForm {
    let m_q = scalar(m as i64);
    let x_q = scalar(x as i64);
    let lhs = TowerForm::tower(x).add_scalar(&-x_q.clone());
    let inner = TowerForm::tower(x - 1).add_scalar(&x_q);
    let rhs = inner
        .scale(&(&m_q * &m_q * &m_q))
        .add_scalar(&(&m_q * (scalar(1) + &m_q)));
    &lhs - &rhs
}

/// The threshold predicate `2^(2^x) − x ≥ m(1 + m + m²(2^(2^(x−1)) + x))` for integer `x ≥ 1`.
pub fn predicate_holds(m: u64, x: u64) -> bool {
    assert!(x >= 1, "predicate is evaluated over integers x ≥ 1");
    predicate_slack(m, x)
        .sign()
        .expect("slack lead term dominates or is small enough to expand")
        != Ordering::Less
}

/// Number of consecutive integers checked directly past `ξ_m`.
pub const TAIL_WINDOW: u64 = 8;

/// Tail certificate at `x0`: `Y = 2^(2^(x0−1)) ≥ (m³+1)·x0 + m + m² + m³ + 1`.
///
/// It propagates to every `x ≥ x0` (`Y(x+1) = Y(x)² ≥ Y(x) + m³ + 1`), and since
/// `Y ≥ m³ + 1` it gives `Y² − x ≥ m³Y + m³x + m + m² = m(1 + m + m²(Y + x))`.
pub fn tail_certificate_holds(m: u64, x0: u64) -> bool {
    let m3 = scalar(m as i64).pow(3);
    let bound = (&m3 + scalar(1)) * scalar(x0 as i64)
        + scalar(m as i64)
        + scalar(m as i64).pow(2)
        + &m3
        + scalar(1);
    TowerForm::tower(x0 - 1)
        .add_scalar(&-bound)
        .sign()
        .expect("tail certificate decides by dominance")
        != Ordering::Less
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub m: u64,
    pub xi: u64,
    #[serde(rename = "Xi")]
    pub big_xi: TowerForm,
}

impl Thresholds {
    /// `Ξ_m` as a machine integer when it fits.
    pub fn bound_u64(&self) -> Option<u64> {
        self.big_xi
            .expand(128)
            .ok()
            .and_then(|q| q.to_integer().to_u64())
    }

    pub fn bound(&self) -> ExactScalar {
        self.big_xi
            .expand(u64::MAX)
            .expect("Ξ_m expands for every m with a representable ξ_m")
    }
}

fn xi_table() -> &'static Mutex<HashMap<u64, Thresholds>> {
    static TABLE: OnceLock<Mutex<HashMap<u64, Thresholds>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn compute_xi(m: u64) -> Thresholds {
    let mut x = 1u64;
    loop {
        if let Some(bad) = (x..=x + TAIL_WINDOW).find(|&y| !predicate_holds(m, y)) {
            x = bad + 1;
            continue;
        }
        if tail_certificate_holds(m, x + TAIL_WINDOW) {
            break;
        }
        x += 1;
    }
    Thresholds {
        m,
        xi: x,
        big_xi: TowerForm::tower_offset(x, scalar(x as i64)),
    }
}

/// `ξ_m`, the least integer from which the threshold predicate holds for good, and `Ξ_m = 2^(2^ξ_m) + ξ_m`.
pub fn xi(m: u64) -> Thresholds {
    assert!(m >= 1, "thresholds are defined for m ≥ 1");
    if let Some(t) = xi_table().lock().expect("xi table poisoned").get(&m) {
        return t.clone();
    }
    let t = compute_xi(m);
    xi_table()
        .lock()
        .expect("xi table poisoned")
        .insert(m, t.clone());
    t
}

/// Bijection from finite sequences to naturals, ordered by weight `len + Σ entries`.
///
/// Sequences of weight `w ≥ 1` are compositions of `w` (entry `e` is a part of size
/// `e + 1`) and occupy codes `[2^(w−1), 2^w)`. Within a weight, the rank is the
/// composition's `w − 1` separator bits read most-significant first, with `0` for a
/// part boundary. A child always has a larger weight, hence a larger code.
pub fn node_family_index(path: &[u64]) -> BigUint {
    if path.is_empty() {
        return BigUint::zero();
    }
    let mut rank = BigUint::zero();
    let mut weight: u64 = 0;
    for (pos, &e) in path.iter().enumerate() {
        if pos > 0 {
            rank <<= 1u32;
        }
        rank <<= e;
        rank += (BigUint::one() << e) - 1u32;
        weight += e + 1;
    }
    (BigUint::one() << (weight - 1)) + rank
}

/// Inverse of [`node_family_index`].
pub fn path_of_family_index(code: &BigUint) -> Vec<u64> {
    if code.is_zero() {
        return Vec::new();
    }
    let weight = code.bits();
    let rank = code - (BigUint::one() << (weight - 1));
    let mut path = Vec::new();
    let mut part = 0u64;
    for bit in (0..weight - 1).rev() {
        if rank.bit(bit) {
            part += 1;
        } else {
            path.push(part);
            part = 0;
        }
    }
    path.push(part);
    path
}
