//! The tree of points `z_s` and levels `l_s` indexed by finite sequences.
//!
//! A child `s⌢i` is fixed by a deterministic rule. The raw index `i` unpairs into a
//! window length `w ≥ 1`, a selector `v` and a resolution `r ≥ 1`
//! (`i = pair(w − 1, pair(v, r − 1))`). With `l = l_s`:
//!
//! * coordinates below `l` copy the parent exactly;
//! * coordinates `l ≤ n < l + w` take the `v`-th tuple of per-coordinate grids
//!   (multiples of `2^-r` inside the first `r` admissible intervals of `T_s`,
//!   at distance at least 1/4 from the marker `t_{s,n}`);
//! * coordinate `M_i = l + i + 1` holds the marker `t_{s,M_i}`;
//! * every other coordinate holds `t_{s,n} + 1/2`.
//!
//! The level is `max(l + i + 1, M_i + 1, 4)`. Siblings `i < i'` differ by at least
//! 1/4 at coordinate `M_i`, which lies below both levels.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact_arith::{pow2_neg, ratio, ArithError, ExactScalar, TowerForm, DEFAULT_BIT_BUDGET};
use crate::thick_family::{cantor_pair_u64, cantor_unpair_u64, node_family_index, ThickSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("child {index} of node {path:?}: selector {selector} exceeds the grid")]
    SelectorExhausted {
        path: Vec<u64>,
        index: u64,
        selector: u64,
    },
    #[error("no separating coordinate for children {first} and {second} of {path:?}")]
    CertificateNotFound {
        path: Vec<u64>,
        first: u64,
        second: u64,
    },
    #[error("a disjointness certificate needs two distinct children, got {0} twice")]
    SameSibling(u64),
    #[error("child index {0} does not fit the index encoding")]
    IndexOverflow(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Splits a raw child index into `(selector, window length, resolution)`.
pub fn decode_child_index(i: u64) -> (u64, u64, u32) {
    let (w_minus_one, rest) = cantor_unpair_u64(i);
    let (selector, r_minus_one) = cantor_unpair_u64(rest);
    (
        selector,
        w_minus_one + 1,
        u32::try_from(r_minus_one + 1).unwrap_or(u32::MAX),
    )
}

pub fn encode_child_index(selector: u64, window_len: u64, resolution: u32) -> Option<u64> {
    if window_len == 0 || resolution == 0 {
        return None;
    }
    let inner = cantor_pair_u64(selector, u64::from(resolution) - 1)?;
    cantor_pair_u64(window_len - 1, inner)
}

/// Decodes a selector into `w` grid positions by iterated unpairing.
pub fn unpair_tuple(v: u64, w: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(w as usize);
    let mut rest = v;
    for _ in 1..w {
        let (head, tail) = cantor_unpair_u64(rest);
        out.push(head);
        rest = tail;
    }
    out.push(rest);
    out
}

pub fn pair_tuple(positions: &[u64]) -> Option<u64> {
    let (last, init) = positions.split_last()?;
    init.iter()
        .rev()
        .try_fold(*last, |acc, &p| cantor_pair_u64(p, acc))
}

/// Everything about child `i` of a node that depends only on the parent's level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChildGeometry {
    pub index: u64,
    pub selector: u64,
    pub window_len: u64,
    pub resolution: u32,
    pub parent_level: u64,
    /// First coordinate past the window.
    pub window_end: u64,
    pub marker: u64,
    pub level: u64,
}

/// Geometry of child `i`. The sibling marker recurrence
/// `M_i = max(l + w_i, M_{i−1} + 1, l + 1)` with `M_{−1} = l` has the closed form
/// `M_i = l + i + 1`, since `w_i ≤ i + 1` for every index.
pub fn child_geometry(parent_level: u64, i: u64) -> ChildGeometry {
    let (selector, window_len, resolution) = decode_child_index(i);
    let marker = parent_level + i + 1;
    ChildGeometry {
        index: i,
        selector,
        window_len,
        resolution,
        parent_level,
        window_end: parent_level + window_len,
        marker,
        level: (parent_level + i + 1).max(marker + 1).max(4),
    }
}

/// Grid of admissible window values at one coordinate.
///
/// Values are `2^(2^a) − a + g·2^-r` for the first `r` admissible indices `a`,
/// dropping points within 1/4 of the marker. Position 0 is the canonical element
/// `t + 1/2`; the rest follow in increasing order.
#[derive(Debug, Clone)]
pub struct CoordinateGrid {
    coordinate: u64,
    resolution: u32,
    intervals: Vec<BigUint>,
    counts: Vec<BigUint>,
    excluded: BigUint,
}

impl CoordinateGrid {
    pub fn new(family: &ThickSet, n: u64, resolution: u32) -> Self {
        assert!(resolution >= 1, "grid resolution starts at 1");
        let intervals: Vec<BigUint> = family
            .admissible_indices(n)
            .take(resolution as usize)
            .collect();
        let scale = BigUint::one() << resolution;
        // Lattice points t + k·2^-r with k·2^-r < 1/4.
        let excluded = if resolution >= 2 {
            BigUint::one() << (resolution - 2)
        } else {
            BigUint::one()
        };
        let counts = intervals
            .iter()
            .enumerate()
            .map(|(idx, a)| {
                let full = a * &scale * 2u32 + 1u32;
                if idx == 0 {
                    full - &excluded
                } else {
                    full
                }
            })
            .collect();
        CoordinateGrid {
            coordinate: n,
            resolution,
            intervals,
            counts,
            excluded,
        }
    }

    pub fn coordinate(&self) -> u64 {
        self.coordinate
    }

    pub fn len(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn step(&self) -> ExactScalar {
        pow2_neg(u64::from(self.resolution))
    }

    /// Position of the canonical element among the ascending marker-interval points.
    fn canonical_rank(&self) -> BigUint {
        (BigUint::one() << (self.resolution - 1)) - &self.excluded
    }

    fn lattice_value(&self, a: &BigUint, steps: &BigUint) -> TowerForm {
        let a_q = BigRational::from_integer(BigInt::from(a.clone()));
        let offset = BigRational::from_integer(BigInt::from(steps.clone())) * self.step() - a_q;
        TowerForm::tower_offset(a.clone(), offset)
    }

    pub fn value(&self, position: &BigUint) -> Option<TowerForm> {
        let marker_a = &self.intervals[0];
        if position.is_zero() {
            return Some(TowerForm::tower_offset(
                marker_a.clone(),
                ratio(1, 2) - BigRational::from_integer(BigInt::from(marker_a.clone())),
            ));
        }
        let mut q = position - 1u32;
        let first = &self.counts[0] - 1u32;
        if q < first {
            let k = if q < self.canonical_rank() {
                q
            } else {
                q + 1u32
            };
            return Some(self.lattice_value(marker_a, &(k + &self.excluded)));
        }
        q -= first;
        for (a, count) in self.intervals.iter().zip(&self.counts).skip(1) {
            if &q < count {
                return Some(self.lattice_value(a, &q));
            }
            q -= count;
        }
        None
    }

    /// Inverse of [`CoordinateGrid::value`].
    pub fn position_of(&self, value: &TowerForm) -> Option<BigUint> {
        let scale = BigRational::from_integer(BigInt::one() << self.resolution);
        let mut before = BigUint::zero();
        for (idx, (a, count)) in self.intervals.iter().zip(&self.counts).enumerate() {
            let a_q = BigRational::from_integer(BigInt::from(a.clone()));
            if let Some(e) = value.offset_from_tower(a) {
                let u = (e + a_q) * &scale;
                if u.is_integer() && !u.is_negative() {
                    let u = u.to_integer().to_biguint()?;
                    if idx == 0 {
                        if u >= self.excluded && u <= a * (BigUint::one() << self.resolution) * 2u32
                        {
                            let k = u - &self.excluded;
                            let rank = self.canonical_rank();
                            return Some(match k.cmp(&rank) {
                                Ordering::Equal => BigUint::zero(),
                                Ordering::Less => k + 1u32,
                                Ordering::Greater => k,
                            });
                        }
                    } else if &u < count {
                        return Some(&self.counts[0] + before + u);
                    }
                }
            }
            if idx > 0 {
                before += count;
            }
        }
        None
    }
}

/// A node `(z_s, l_s)`. Coordinates below the parent's level are inherited and
/// resolved through [`Tree::coordinate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    path: Vec<u64>,
    level: u64,
    geometry: Option<ChildGeometry>,
    parent_family: Option<ThickSet>,
    window: BTreeMap<u64, TowerForm>,
}

impl TreeNode {
    fn root() -> Self {
        TreeNode {
            path: Vec::new(),
            level: 0,
            geometry: None,
            parent_family: None,
            window: BTreeMap::new(),
        }
    }

    fn build(parent_path: &[u64], parent_level: u64, i: u64) -> Result<Self, TreeError> {
        let family = ThickSet::new(node_family_index(parent_path));
        let geometry = child_geometry(parent_level, i);
        let window =
            window_values(&family, &geometry).ok_or_else(|| TreeError::SelectorExhausted {
                path: parent_path.to_vec(),
                index: i,
                selector: geometry.selector,
            })?;
        let mut path = parent_path.to_vec();
        path.push(i);
        Ok(TreeNode {
            path,
            level: geometry.level,
            geometry: Some(geometry),
            parent_family: Some(family),
            window,
        })
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn is_root(&self) -> bool {
        self.geometry.is_none()
    }

    pub fn geometry(&self) -> Option<&ChildGeometry> {
        self.geometry.as_ref()
    }

    pub fn marker_coord(&self) -> Option<u64> {
        self.geometry.map(|g| g.marker)
    }

    pub fn parent_level(&self) -> u64 {
        self.geometry.map_or(0, |g| g.parent_level)
    }

    /// Index of the thick set the parent draws from.
    pub fn parent_family(&self) -> Option<&BigUint> {
        self.parent_family.as_ref().map(ThickSet::family)
    }

    pub fn window(&self) -> &BTreeMap<u64, TowerForm> {
        &self.window
    }

    /// Value at a coordinate this node sets itself, or `None` if inherited.
    pub fn local_value(&self, n: u64) -> Option<TowerForm> {
        let (Some(g), Some(family)) = (&self.geometry, &self.parent_family) else {
            return Some(TowerForm::zero());
        };
        if n < g.parent_level {
            return None;
        }
        Some(value_outside_window(family, g, n).unwrap_or_else(|| self.window[&n].clone()))
    }
}

/// Value of a child at a coordinate `n ≥ l_s` outside its window, or `None` inside it.
fn value_outside_window(family: &ThickSet, g: &ChildGeometry, n: u64) -> Option<TowerForm> {
    if n < g.window_end {
        None
    } else if n == g.marker {
        Some(family.marker(n))
    } else {
        Some(family.canonical_element(n))
    }
}

fn window_values(family: &ThickSet, g: &ChildGeometry) -> Option<BTreeMap<u64, TowerForm>> {
    let coords = g.parent_level..g.window_end;
    if g.selector == 0 {
        return Some(coords.map(|n| (n, family.canonical_element(n))).collect());
    }
    let positions = unpair_tuple(g.selector, g.window_len);
    coords
        .zip(positions)
        .map(|(n, p)| {
            let grid = CoordinateGrid::new(family, n, g.resolution);
            grid.value(&BigUint::from(p)).map(|v| (n, v))
        })
        .collect()
}

/// A point of the Baire space: a finite stem extended by zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Branch {
    stem: Vec<u64>,
}

impl Branch {
    pub fn new(stem: impl Into<Vec<u64>>) -> Self {
        let mut stem = stem.into();
        while stem.last() == Some(&0) {
            stem.pop();
        }
        Branch { stem }
    }

    pub fn zeros() -> Self {
        Branch::default()
    }

    /// The stem with trailing zeros removed.
    pub fn stem(&self) -> &[u64] {
        &self.stem
    }

    pub fn entry(&self, d: usize) -> u64 {
        self.stem.get(d).copied().unwrap_or(0)
    }

    pub fn prefix(&self, d: usize) -> Vec<u64> {
        (0..d).map(|k| self.entry(k)).collect()
    }
}

impl Ord for Branch {
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.stem.len().max(other.stem.len());
        (0..len)
            .map(|d| self.entry(d).cmp(&other.entry(d)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for Branch {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.stem {
            write!(f, "{e}·")?;
        }
        write!(f, "0^∞")
    }
}

impl FromStr for Branch {
    type Err = std::num::ParseIntError;

    /// Comma-separated stem, e.g. `"0,0,1"`; the empty string is `0^∞`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Branch::zeros());
        }
        let stem = s
            .split(',')
            .map(|e| e.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Branch::new(stem))
    }
}

/// `U(z↾l)`: points within `2^-l` of the stored values on coordinates below `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallPrefix {
    pub values: Vec<TowerForm>,
    pub radius_exponent: u64,
}

impl BallPrefix {
    pub fn radius(&self) -> ExactScalar {
        pow2_neg(self.radius_exponent)
    }

    /// `point` lists coordinates from 0; it must cover every constrained coordinate.
    pub fn contains(&self, point: &[TowerForm], bit_budget: u64) -> Result<bool, ArithError> {
        if point.len() < self.values.len() {
            return Ok(false);
        }
        let radius = self.radius();
        for (x, c) in point.iter().zip(&self.values) {
            if !(x - c).abs_le(&radius, bit_budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Witness that the balls of two siblings are disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub coordinate: u64,
    pub gap: TowerForm,
    /// `2^-l_i + 2^-l_i'`, the gap must exceed it.
    pub tolerance: ExactScalar,
}

/// Memoizing builder for nodes and branch coordinates. Safe to share across threads.
#[derive(Debug)]
pub struct Tree {
    bit_budget: u64,
    nodes: RwLock<HashMap<Vec<u64>, Arc<TreeNode>>>,
    evals: RwLock<HashMap<(Vec<u64>, u64), TowerForm>>,
}

impl Default for Tree {
    fn default() -> Self {
        Self::new()
    }
}

impl Tree {
    pub fn new() -> Self {
        Self::with_bit_budget(DEFAULT_BIT_BUDGET)
    }

    pub fn with_bit_budget(bit_budget: u64) -> Self {
        Tree {
            bit_budget,
            nodes: RwLock::new(HashMap::new()),
            evals: RwLock::new(HashMap::new()),
        }
    }

    pub fn bit_budget(&self) -> u64 {
        self.bit_budget
    }

    pub fn root(&self) -> Arc<TreeNode> {
        self.node(&[]).expect("the root always exists")
    }

    /// Child `i` of `parent`, memoized.
    pub fn child(&self, parent: &TreeNode, i: u64) -> Result<Arc<TreeNode>, TreeError> {
        let mut path = parent.path.clone();
        path.push(i);
        if let Some(n) = self.nodes.read().expect("node cache poisoned").get(&path) {
            return Ok(Arc::clone(n));
        }
        let node = Arc::new(self.build_child(parent, i)?);
        self.nodes
            .write()
            .expect("node cache poisoned")
            .insert(path, Arc::clone(&node));
        Ok(node)
    }

    /// Child `i` of `parent` without touching the cache.
    pub fn build_child(&self, parent: &TreeNode, i: u64) -> Result<TreeNode, TreeError> {
        if parent
            .level
            .checked_add(i)
            .and_then(|x| x.checked_add(2))
            .is_none()
        {
            return Err(TreeError::IndexOverflow(i));
        }
        TreeNode::build(&parent.path, parent.level, i)
    }

    pub fn node(&self, path: &[u64]) -> Result<Arc<TreeNode>, TreeError> {
        if let Some(n) = self.nodes.read().expect("node cache poisoned").get(path) {
            return Ok(Arc::clone(n));
        }
        let mut current = match path.split_last() {
            None => {
                let root = Arc::new(TreeNode::root());
                self.nodes
                    .write()
                    .expect("node cache poisoned")
                    .insert(Vec::new(), Arc::clone(&root));
                return Ok(root);
            }
            Some((_, init)) => self.node(init)?,
        };
        current = self.child(&current, path[path.len() - 1])?;
        Ok(current)
    }

    /// `z_s(n)` for the node's own point.
    pub fn coordinate(&self, node: &TreeNode, n: u64) -> Result<TowerForm, TreeError> {
        if let Some(v) = node.local_value(n) {
            return Ok(v);
        }
        for d in 1..node.path.len() {
            let ancestor = self.node(&node.path[..d])?;
            if ancestor.level > n {
                return Ok(ancestor
                    .local_value(n)
                    .expect("the first ancestor above n sets coordinate n"));
            }
        }
        unreachable!("a child sets every coordinate from its parent's level on")
    }

    /// Coordinates `0..len` of the node's point.
    pub fn point_prefix(&self, node: &TreeNode, len: u64) -> Result<Vec<TowerForm>, TreeError> {
        (0..len).map(|n| self.coordinate(node, n)).collect()
    }

    pub fn ball(&self, node: &TreeNode) -> Result<BallPrefix, TreeError> {
        Ok(BallPrefix {
            values: self.point_prefix(node, node.level)?,
            radius_exponent: node.level,
        })
    }

    /// Levels `l_{b↾0}, …, l_{b↾depth}` along a branch.
    pub fn branch_levels(&self, branch: &Branch, depth: usize) -> Result<Vec<u64>, TreeError> {
        let mut levels = vec![0];
        let mut level = 0;
        for d in 0..depth {
            level = if d < branch.stem.len() {
                self.node(&branch.prefix(d + 1))?.level
            } else {
                child_geometry(level, 0).level
            };
            levels.push(level);
        }
        Ok(levels)
    }

    /// `h(b)(k)`: the value fixed by the first node on the branch whose level exceeds `k`.
    pub fn eval_coordinate(&self, branch: &Branch, k: u64) -> Result<TowerForm, TreeError> {
        let key = (branch.stem.clone(), k);
        if let Some(v) = self.evals.read().expect("eval cache poisoned").get(&key) {
            return Ok(v.clone());
        }
        let value = self.descend(branch, k)?;
        self.evals
            .write()
            .expect("eval cache poisoned")
            .insert(key, value.clone());
        Ok(value)
    }

    fn descend(&self, branch: &Branch, k: u64) -> Result<TowerForm, TreeError> {
        let mut level = 0u64;
        for d in 0..branch.stem.len() {
            let child = self.node(&branch.prefix(d + 1))?;
            if child.level > k {
                return Ok(child
                    .local_value(k)
                    .expect("k lies at or above the parent level"));
            }
            level = child.level;
        }
        // Past the stem every step is child 0: geometry alone gives the levels.
        let mut depth = branch.stem.len();
        loop {
            let g = child_geometry(level, 0);
            if g.level > k {
                let family = ThickSet::new(node_family_index(&branch.prefix(depth)));
                return Ok(value_outside_window(&family, &g, k)
                    .unwrap_or_else(|| family.canonical_element(k)));
            }
            level = g.level;
            depth += 1;
        }
    }

    /// Exact witness that children `i` and `i'` of `parent` have disjoint balls.
    pub fn disjointness_certificate(
        &self,
        parent: &TreeNode,
        i: u64,
        i2: u64,
    ) -> Result<Separation, TreeError> {
        if i == i2 {
            return Err(TreeError::SameSibling(i));
        }
        let first = self.child(parent, i)?;
        let second = self.child(parent, i2)?;
        let coordinate = child_geometry(parent.level, i.min(i2)).marker;
        let a = first
            .local_value(coordinate)
            .expect("marker lies above the parent level");
        let b = second
            .local_value(coordinate)
            .expect("marker lies above the parent level");
        let gap = (&a - &b).abs(self.bit_budget)?;
        let tolerance = pow2_neg(first.level) + pow2_neg(second.level);
        let quarter = ratio(1, 4);
        if coordinate < first.level.min(second.level)
            && gap.abs_ge(&quarter, self.bit_budget)?
            && !gap.abs_le(&tolerance, self.bit_budget)?
        {
            Ok(Separation {
                coordinate,
                gap,
                tolerance,
            })
        } else {
            Err(TreeError::CertificateNotFound {
                path: parent.path.clone(),
                first: i,
                second: i2,
            })
        }
    }

    /// All nodes with depth ≤ `depth` and entries < `fanout`, ordered by depth then path.
    pub fn build(&self, depth: usize, fanout: u64) -> Result<Vec<Arc<TreeNode>>, TreeError> {
        let mut out = vec![self.root()];
        let mut frontier = vec![self.root()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(frontier.len() * fanout as usize);
            for node in &frontier {
                for i in 0..fanout {
                    next.push(self.child(node, i)?);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::scalar;

    fn val(v: &TowerForm) -> ExactScalar {
        v.expand(1 << 12).unwrap()
    }

    /// The sibling marker recurrence exactly as stated, without the closed form.
    fn markers_by_recurrence(parent_level: u64, count: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut prev = parent_level;
        for i in 0..count {
            let (_, w, _) = decode_child_index(i);
            let m = (parent_level + w).max(prev + 1).max(parent_level + 1);
            out.push(m);
            prev = m;
        }
        out
    }

    #[test]
    fn closed_form_markers_match_recurrence() {
        for l in [0u64, 4, 17] {
            let expected = markers_by_recurrence(l, 5000);
            for (i, m) in expected.iter().enumerate() {
                assert_eq!(child_geometry(l, i as u64).marker, *m);
            }
        }
    }

    #[test]
    fn child_index_codec() {
        assert_eq!(decode_child_index(0), (0, 1, 1));
        assert_eq!(decode_child_index(1), (0, 2, 1));
        assert_eq!(decode_child_index(2), (1, 1, 1));
        for i in 0..2000 {
            let (v, w, r) = decode_child_index(i);
            assert_eq!(encode_child_index(v, w, r), Some(i));
        }
        for v in 0..300 {
            for w in 1..5 {
                assert_eq!(pair_tuple(&unpair_tuple(v, w)), Some(v));
            }
        }
    }

    #[test]
    fn root_is_zero() {
        let tree = Tree::new();
        let root = tree.root();
        assert_eq!(root.level(), 0);
        assert!(root.path().is_empty());
        assert!(tree.coordinate(&root, 7).unwrap().is_zero());
        let ball = tree.ball(&root).unwrap();
        assert!(ball.values.is_empty());
        assert_eq!(ball.radius_exponent, 0);
        assert!(ball.contains(&[], DEFAULT_BIT_BUDGET).unwrap());
    }

    #[test]
    fn first_child_of_root() {
        let tree = Tree::new();
        let c = tree.child(&tree.root(), 0).unwrap();
        assert_eq!(c.level(), 4);
        assert_eq!(c.marker_coord(), Some(1));
        let coords: Vec<_> = tree.point_prefix(&c, 5).unwrap().iter().map(val).collect();
        assert_eq!(
            coords,
            vec![
                ratio(7, 2),
                scalar(3),
                ratio(7, 2),
                ratio(507, 2),
                ratio(507, 2)
            ]
        );
        let ball = tree.ball(&c).unwrap();
        assert_eq!(ball.radius_exponent, 4);
        assert_eq!(
            ball.values.iter().map(val).collect::<Vec<_>>(),
            coords[..4].to_vec()
        );
        assert!(ball
            .contains(&tree.point_prefix(&c, 4).unwrap(), DEFAULT_BIT_BUDGET)
            .unwrap());
    }

    #[test]
    fn second_child_of_root() {
        let tree = Tree::new();
        let c = tree.child(&tree.root(), 1).unwrap();
        assert_eq!(c.window().len(), 2);
        assert_eq!(c.marker_coord(), Some(2));
        assert_eq!(c.level(), 4);
        let v1 = val(&tree.coordinate(&c, 1).unwrap());
        assert!((v1.clone() - scalar(3)) >= ratio(1, 4));
        assert_eq!(v1, ratio(7, 2));
        assert_eq!(val(&tree.coordinate(&c, 2).unwrap()), scalar(3));
    }

    #[test]
    fn levels_exceed_parent_plus_index() {
        let tree = Tree::new();
        for path in [vec![], vec![0], vec![3, 1], vec![2, 0, 5]] {
            let s = tree.node(&path).unwrap();
            for i in 0..=8 {
                assert!(tree.child(&s, i).unwrap().level() > s.level() + i);
            }
        }
    }

    #[test]
    fn eval_examples() {
        let tree = Tree::new();
        let b = Branch::zeros();
        assert_eq!(val(&tree.eval_coordinate(&b, 1).unwrap()), scalar(3));
        assert_eq!(val(&tree.eval_coordinate(&b, 0).unwrap()), ratio(7, 2));
    }

    #[test]
    fn values_beyond_level_avoid_the_box() {
        let tree = Tree::new();
        for stem in [vec![], vec![1], vec![0, 2]] {
            let b = Branch::new(stem);
            for k in 0..40u64 {
                let v = tree.eval_coordinate(&b, k).unwrap();
                assert!(!v.abs_le(&scalar(k as i64), DEFAULT_BIT_BUDGET).unwrap());
            }
        }
    }

    #[test]
    fn certificate_examples() {
        let tree = Tree::new();
        let root = tree.root();
        let sep = tree.disjointness_certificate(&root, 0, 1).unwrap();
        assert_eq!(sep.coordinate, 1);
        assert_eq!(sep.gap.as_scalar(), Some(&ratio(1, 2)));
        assert_eq!(
            tree.disjointness_certificate(&root, 0, 0),
            Err(TreeError::SameSibling(0))
        );
    }

    #[test]
    fn grid_positions_round_trip() {
        for fam in [0u64, 1, 5, 1 << 40] {
            let family = ThickSet::new(fam);
            for n in [0u64, 3, 17] {
                for r in 1..=3 {
                    let grid = CoordinateGrid::new(&family, n, r);
                    assert!(grid
                        .value(&BigUint::zero())
                        .unwrap()
                        .value_eq(&family.canonical_element(n)));
                    for p in 0u64..40 {
                        let p = BigUint::from(p);
                        let Some(v) = grid.value(&p) else { break };
                        assert!(family.trimmed_contains(n, &v).unwrap(), "{v}");
                        assert!(!(&v - &family.marker(n))
                            .abs_le(&ratio(1, 8), DEFAULT_BIT_BUDGET)
                            .unwrap());
                        assert_eq!(grid.position_of(&v), Some(p));
                    }
                }
            }
        }
    }

    #[test]
    fn small_grid_is_exhausted() {
        let family = ThickSet::new(0u32);
        let grid = CoordinateGrid::new(&family, 0, 1);
        assert_eq!(grid.len(), BigUint::from(4u32));
        assert!(grid.value(&BigUint::from(4u32)).is_none());
        // Child with window 1, resolution 1 and selector 4 at the root overflows [3, 5].
        let i = encode_child_index(4, 1, 1).unwrap();
        let tree = Tree::new();
        assert!(matches!(
            tree.child(&tree.root(), i),
            Err(TreeError::SelectorExhausted { selector: 4, .. })
        ));
    }

    #[test]
    fn branch_order_and_parsing() {
        let z = Branch::zeros();
        let one: Branch = "1".parse().unwrap();
        assert!(z < one);
        assert_eq!(z.cmp(&Branch::new(vec![0, 0])), Ordering::Equal);
        let a: Branch = "0,2".parse().unwrap();
        let b: Branch = "0,1,0".parse().unwrap();
        assert!(a > b);
        assert_eq!(b.stem(), &[0, 1]);
        assert!("0,x".parse::<Branch>().is_err());
    }
}
