//! Exact checks of the separation inequality, the coordinate bound for finite
//! combinations of branches, and the structural conditions of the tree.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_arith::{
    format_scalar, ratio, scalar, scalar_seq_serde, ArithError, ExactScalar, TowerForm,
};
use crate::thick_family::{node_family_index, path_of_family_index, xi, ThickSet};
use crate::tree_builder::{
    encode_child_index, pair_tuple, Branch, CoordinateGrid, Tree, TreeError, TreeNode,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("coordinate {k} does not exceed the threshold {threshold}")]
    RangeTooLow { k: u64, threshold: TowerForm },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

fn invalid(clause: impl Into<String>) -> VerifyError {
    VerifyError::InvalidInstance(clause.into())
}

/// Whether `1/m ≤ |λ| ≤ m`.
pub fn in_window(lambda: &ExactScalar, m: u64) -> bool {
    let m = BigRational::from_integer(BigInt::from(m));
    let abs = lambda.abs();
    abs <= m && abs * &m >= BigRational::one()
}

/// `n ≤ m` points from pairwise distinct thick sets with coefficients in the `m`-window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma1Instance {
    pub m: u64,
    /// Tree paths naming the thick sets.
    pub paths: Vec<Vec<u64>>,
    #[serde(with = "scalar_seq_serde")]
    pub lambda: Vec<ExactScalar>,
    pub points: Vec<TowerForm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma1Outcome {
    pub holds: bool,
    pub sum: TowerForm,
}

impl Lemma1Instance {
    pub fn validate(&self, bit_budget: u64) -> Result<(), VerifyError> {
        let n = self.paths.len();
        if self.m == 0 {
            return Err(invalid("m must be positive"));
        }
        if n == 0 || n as u64 > self.m {
            return Err(invalid(format!(
                "need 1 ≤ n ≤ m, got n = {n}, m = {}",
                self.m
            )));
        }
        if self.lambda.len() != n || self.points.len() != n {
            return Err(invalid("paths, lambda and points differ in length"));
        }
        if self.paths.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(invalid("paths are not pairwise distinct"));
        }
        if let Some(l) = self.lambda.iter().find(|l| !in_window(l, self.m)) {
            return Err(invalid(format!(
                "coefficient {} outside [-m, m] \\ (-1/m, 1/m)",
                format_scalar(l)
            )));
        }
        for (path, x) in self.paths.iter().zip(&self.points) {
            let family = ThickSet::new(node_family_index(path));
            if !family.contains_within(x, bit_budget)? {
                return Err(invalid(format!(
                    "point {x} is not in the thick set of {path:?}"
                )));
            }
        }
        let bound = xi(self.m).bound();
        let mut outside = false;
        for x in &self.points {
            if !x.abs_le(&bound, bit_budget)? {
                outside = true;
                break;
            }
        }
        if !outside {
            return Err(invalid(format!(
                "all points lie in [-Xi_m, Xi_m] = [-{0}, {0}]",
                format_scalar(&bound)
            )));
        }
        Ok(())
    }
}

/// Checks `|Σ λ_i x_i| ≥ m + 1` exactly.
pub fn lemma1_check(inst: &Lemma1Instance, bit_budget: u64) -> Result<Lemma1Outcome, VerifyError> {
    inst.validate(bit_budget)?;
    let sum = inst
        .lambda
        .iter()
        .zip(&inst.points)
        .fold(TowerForm::zero(), |acc, (l, x)| acc + x.scale(l));
    let holds = sum.abs_ge(&scalar(inst.m as i64 + 1), bit_budget)?;
    Ok(Lemma1Outcome { holds, sum })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub trials: u64,
    pub m_max: u64,
    pub a_max: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: u64,
    pub instance: Lemma1Instance,
    pub sum: Option<TowerForm>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub passes: u64,
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl FuzzReport {
    pub fn ok(&self) -> bool {
        self.failures == 0
    }
}

/// Random valid instances: points at interval endpoints, canonical points and
/// random lattice points, with one point forced above `Ξ_m`. Trial `t` draws
/// from stream `t` of the seeded generator, so the report does not depend on
/// scheduling.
pub fn lemma1_fuzz(config: FuzzConfig, bit_budget: u64) -> Result<FuzzReport, VerifyError> {
    if config.m_max == 0 || config.m_max > 6 {
        return Err(invalid("m-max must lie in 1..=6"));
    }
    if config.a_max > 20 {
        return Err(invalid("a-max must be at most 20"));
    }
    if config.a_max <= xi(config.m_max).xi {
        return Err(invalid(format!(
            "a-max must exceed xi_{} = {}",
            config.m_max,
            xi(config.m_max).xi
        )));
    }
    let outcomes: Vec<(u64, Lemma1Instance, Result<Lemma1Outcome, VerifyError>)> = (0..config
        .trials)
        .into_par_iter()
        .map(|trial| {
            let inst = random_instance(&config, trial);
            let outcome = lemma1_check(&inst, bit_budget);
            (trial, inst, outcome)
        })
        .collect();
    let mut report = FuzzReport {
        config,
        passes: 0,
        failures: 0,
        counterexamples: Vec::new(),
    };
    for (trial, instance, outcome) in outcomes {
        match outcome {
            Ok(o) if o.holds => report.passes += 1,
            Ok(o) => {
                report.failures += 1;
                report.counterexamples.push(Counterexample {
                    trial,
                    instance,
                    sum: Some(o.sum),
                    error: None,
                });
            }
            Err(e) => {
                report.failures += 1;
                report.counterexamples.push(Counterexample {
                    trial,
                    instance,
                    sum: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    Ok(report)
}

fn family_indices_up_to(j: u64, a_max: u64) -> Vec<u64> {
    ThickSet::new(j)
        .indices()
        .take_while(|a| *a <= BigUint::from(a_max))
        .map(|a| u64::try_from(a).expect("small index"))
        .collect()
}

fn random_instance(config: &FuzzConfig, trial: u64) -> Lemma1Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial);
    let m = rng.gen_range(1..=config.m_max);
    let xi_m = xi(m).xi;
    let usable: Vec<(u64, Vec<u64>)> = (0u64..)
        .take_while(|j| j * (j + 1) / 2 < config.a_max)
        .map(|j| (j, family_indices_up_to(j, config.a_max)))
        .collect();
    let forcing: Vec<&(u64, Vec<u64>)> = usable
        .iter()
        .filter(|(_, idx)| idx.iter().any(|&a| a > xi_m))
        .collect();
    let forced = *forcing.choose(&mut rng).expect("a-max exceeds xi_m");
    let n = rng.gen_range(1..=(m as usize).min(usable.len()));
    let others: Vec<&(u64, Vec<u64>)> = usable.iter().filter(|(j, _)| *j != forced.0).collect();
    let mut chosen = vec![forced];
    chosen.extend(others.choose_multiple(&mut rng, n - 1).copied());
    chosen.shuffle(&mut rng);

    let mut paths = Vec::with_capacity(n);
    let mut lambda = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    for (j, indices) in chosen {
        let a = if *j == forced.0 {
            let high: Vec<u64> = indices.iter().copied().filter(|&a| a > xi_m).collect();
            *high
                .choose(&mut rng)
                .expect("forcing family has a high index")
        } else {
            *indices
                .choose(&mut rng)
                .expect("usable family has an index")
        };
        paths.push(path_of_family_index(&BigUint::from(*j)));
        points.push(random_point(&mut rng, a));
        lambda.push(random_coefficient(&mut rng, m));
    }
    Lemma1Instance {
        m,
        paths,
        lambda,
        points,
    }
}

fn random_point(rng: &mut ChaCha8Rng, a: u64) -> TowerForm {
    let a_q = scalar(a as i64);
    let offset = match rng.gen_range(0..4) {
        0 => -a_q,
        1 => a_q,
        2 => ratio(1, 2) - a_q,
        _ => {
            let r = rng.gen_range(1..=4u32);
            let steps = rng.gen_range(0..=2 * a * (1 << r));
            ratio(steps as i64, 1 << r) - a_q
        }
    };
    TowerForm::tower_offset(a, offset)
}

fn random_coefficient(rng: &mut ChaCha8Rng, m: u64) -> ExactScalar {
    let magnitude = match rng.gen_range(0..3) {
        0 => scalar(m as i64),
        1 => ratio(1, m as i64),
        _ => {
            let d = rng.gen_range(1..=6u64);
            let lo = d.div_ceil(m);
            ratio(rng.gen_range(lo..=m * d) as i64, d as i64)
        }
    };
    if rng.gen_bool(0.5) {
        -magnitude
    } else {
        magnitude
    }
}

/// `(r_E, l_E)`: the least depth at which the branches of `E` have distinct
/// prefixes, and the largest level among those prefixes.
pub fn r_and_l(tree: &Tree, branches: &[Branch]) -> Result<(usize, u64), VerifyError> {
    if branches.is_empty() {
        return Err(invalid("E must be nonempty"));
    }
    if branches.iter().collect::<BTreeSet<_>>().len() != branches.len() {
        return Err(invalid("branches are not pairwise distinct"));
    }
    let longest = branches.iter().map(|b| b.stem().len()).max().unwrap_or(0);
    let r = (0..=longest)
        .find(|&r| {
            branches
                .iter()
                .map(|b| b.prefix(r))
                .collect::<BTreeSet<_>>()
                .len()
                == branches.len()
        })
        .expect("distinct branches separate by the longest stem");
    let mut l = 0;
    for b in branches {
        let levels = tree.branch_levels(b, r)?;
        l = l.max(levels[r]);
    }
    Ok((r, l))
}

/// A finite combination `Σ_{s∈E} λ(s)·h(s)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinationSpec {
    pub m: u64,
    pub branches: Vec<Branch>,
    pub lambda: Vec<ExactScalar>,
}

impl CombinationSpec {
    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.m == 0 {
            return Err(invalid("m must be positive"));
        }
        if self.branches.is_empty() || self.branches.len() as u64 > self.m {
            return Err(invalid(format!(
                "need 1 ≤ |E| ≤ m, got |E| = {}, m = {}",
                self.branches.len(),
                self.m
            )));
        }
        if self.lambda.len() != self.branches.len() {
            return Err(invalid("branches and lambda differ in length"));
        }
        if self.branches.iter().collect::<BTreeSet<_>>().len() != self.branches.len() {
            return Err(invalid("branches are not pairwise distinct"));
        }
        if let Some(l) = self.lambda.iter().find(|l| !in_window(l, self.m)) {
            return Err(invalid(format!(
                "coefficient {} outside [-m, m] \\ (-1/m, 1/m)",
                format_scalar(l)
            )));
        }
        Ok(())
    }

    /// `pr_k` of the combination.
    pub fn coordinate(&self, tree: &Tree, k: u64) -> Result<TowerForm, TreeError> {
        let mut sum = TowerForm::zero();
        for (b, l) in self.branches.iter().zip(&self.lambda) {
            sum = sum + tree.eval_coordinate(b, k)?.scale(l);
        }
        Ok(sum)
    }
}

/// `max(l_E, Ξ_m)` as an exact value.
pub fn combination_threshold(
    tree: &Tree,
    spec: &CombinationSpec,
) -> Result<TowerForm, VerifyError> {
    let (_, l) = r_and_l(tree, &spec.branches)?;
    let big_xi = xi(spec.m).big_xi;
    let level = TowerForm::from_integer(l as i64);
    Ok(if level.cmp_within(&big_xi, tree.bit_budget())?.is_gt() {
        level
    } else {
        big_xi
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim2Entry {
    pub k: u64,
    pub value: TowerForm,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim2Report {
    pub r_e: usize,
    pub l_e: u64,
    pub threshold: TowerForm,
    pub entries: Vec<Claim2Entry>,
}

impl Claim2Report {
    pub fn ok(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// Checks `|pr_k(Σ λ(s)·h(s))| ≥ 1` for each `k`; every `k` must exceed `max(l_E, Ξ_m)`.
pub fn claim2_check(
    tree: &Tree,
    spec: &CombinationSpec,
    ks: &[u64],
) -> Result<Claim2Report, VerifyError> {
    spec.validate()?;
    let (r_e, l_e) = r_and_l(tree, &spec.branches)?;
    let threshold = combination_threshold(tree, spec)?;
    for &k in ks {
        if !TowerForm::from_scalar(BigRational::from_integer(BigInt::from(k)))
            .cmp_within(&threshold, tree.bit_budget())?
            .is_gt()
        {
            return Err(VerifyError::RangeTooLow { k, threshold });
        }
    }
    let entries = ks
        .par_iter()
        .map(|&k| {
            let value = spec.coordinate(tree, k)?;
            let pass = value.abs_ge(&BigRational::one(), tree.bit_budget())?;
            Ok(Claim2Entry { k, value, pass })
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    Ok(Claim2Report {
        r_e,
        l_e,
        threshold,
        entries,
    })
}

/// `count` distinct coordinates drawn uniformly from `(above, above + horizon]`, ascending.
pub fn sample_coordinates(above: u64, horizon: u64, count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<u64> = (above + 1..=above + horizon).collect();
    let mut ks: Vec<u64> = pool.choose_multiple(&mut rng, count).copied().collect();
    ks.sort_unstable();
    ks
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    /// Sibling balls are disjoint.
    Separation,
    /// `l_{s⌢i} > l_s + i`.
    LevelGrowth,
    /// Child coordinates at and above `l_s` lie in the trimmed sets or at the marker.
    Containment,
    /// Grid targets on a two-coordinate window are hit exactly by some child.
    Density,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeFailure {
    pub path: Vec<u64>,
    pub condition: Condition,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeReport {
    pub depth: usize,
    pub fanout: u64,
    pub nodes: u64,
    pub certificates: u64,
    pub density_targets: u64,
    /// Largest child index needed to hit a density target.
    pub max_density_index: u64,
    pub failures: Vec<TreeFailure>,
}

impl TreeReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Grid positions per coordinate tried by the density check.
pub const DENSITY_POSITIONS: u64 = 4;

#[derive(Default)]
struct NodeTally {
    certificates: u64,
    density_targets: u64,
    max_density_index: u64,
    failures: Vec<TreeFailure>,
}

/// Checks separation, level growth, containment and the finite density surrogate
/// for every node of depth `< depth` with children `0..fanout`.
pub fn verify_tree(
    tree: &Tree,
    depth: usize,
    fanout: u64,
    max_resolution: u32,
) -> Result<TreeReport, VerifyError> {
    let nodes = tree.build(depth, fanout)?;
    let parents: Vec<_> = nodes.iter().filter(|n| n.path().len() < depth).collect();
    let tallies = parents
        .par_iter()
        .map(|s| check_node(tree, s, fanout, max_resolution))
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let mut report = TreeReport {
        depth,
        fanout,
        nodes: nodes.len() as u64,
        certificates: 0,
        density_targets: 0,
        max_density_index: 0,
        failures: Vec::new(),
    };
    for t in tallies {
        report.certificates += t.certificates;
        report.density_targets += t.density_targets;
        report.max_density_index = report.max_density_index.max(t.max_density_index);
        report.failures.extend(t.failures);
    }
    report.failures.sort();
    Ok(report)
}

fn check_node(
    tree: &Tree,
    s: &TreeNode,
    fanout: u64,
    max_resolution: u32,
) -> Result<NodeTally, VerifyError> {
    let family = ThickSet::new(node_family_index(s.path()));
    let mut tally = NodeTally::default();
    let fail = |condition, detail: String| TreeFailure {
        path: s.path().to_vec(),
        condition,
        detail,
    };
    let mut failures = Vec::new();
    for i in 0..fanout {
        let child = tree.child(s, i)?;
        if child.level() <= s.level() + i {
            failures.push(fail(
                Condition::LevelGrowth,
                format!(
                    "child {i} has level {} ≤ {} + {i}",
                    child.level(),
                    s.level()
                ),
            ));
        }
        let marker = child.marker_coord().expect("children have markers");
        for n in s.level()..child.level() {
            let v = child.local_value(n).expect("set by the child");
            let ok = if n == marker {
                v == family.marker(n)
            } else {
                family.trimmed_contains(n, &v)?
            };
            if !ok {
                failures.push(fail(
                    Condition::Containment,
                    format!("child {i}, coordinate {n}: {v}"),
                ));
            }
        }
        for i2 in i + 1..fanout {
            match tree.disjointness_certificate(s, i, i2) {
                Ok(_) => tally.certificates += 1,
                Err(TreeError::CertificateNotFound { .. }) => failures.push(fail(
                    Condition::Separation,
                    format!("children {i} and {i2}"),
                )),
                Err(e) => return Err(e.into()),
            }
        }
    }
    for r in 1..=max_resolution {
        let grids = [
            CoordinateGrid::new(&family, s.level(), r),
            CoordinateGrid::new(&family, s.level() + 1, r),
        ];
        for p0 in 0..DENSITY_POSITIONS {
            for p1 in 0..DENSITY_POSITIONS {
                let target: Vec<TowerForm> = [p0, p1]
                    .iter()
                    .zip(&grids)
                    .map(|(&p, g)| g.value(&BigUint::from(p)).expect("small positions exist"))
                    .collect();
                tally.density_targets += 1;
                let i = encode_child_index(pair_tuple(&[p0, p1]).expect("small tuple"), 2, r)
                    .expect("small index");
                let child = tree.build_child(s, i)?;
                let hit = target
                    .iter()
                    .enumerate()
                    .all(|(d, t)| child.local_value(s.level() + d as u64).as_ref() == Some(t));
                if hit {
                    tally.max_density_index = tally.max_density_index.max(i);
                } else {
                    failures.push(fail(
                        Condition::Density,
                        format!("resolution {r}, positions ({p0}, {p1}), child {i}"),
                    ));
                }
            }
        }
    }
    tally.failures = failures;
    Ok(tally)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::DEFAULT_BIT_BUDGET;

    fn budget() -> u64 {
        DEFAULT_BIT_BUDGET
    }

    #[test]
    fn lemma1_single_point() {
        let inst = Lemma1Instance {
            m: 1,
            paths: vec![vec![]],
            lambda: vec![scalar(1)],
            points: vec![TowerForm::from_integer(253)],
        };
        let out = lemma1_check(&inst, budget()).unwrap();
        assert!(out.holds);
        assert_eq!(out.sum.expand(64).unwrap(), scalar(253));
    }

    #[test]
    fn lemma1_two_points() {
        // 2^32 − 5 lies in the set of path (0); 253 in the root's set.
        let x = TowerForm::tower_offset(5u32, scalar(-5));
        let inst = Lemma1Instance {
            m: 2,
            paths: vec![vec![0], vec![]],
            lambda: vec![scalar(2), scalar(-2)],
            points: vec![x, TowerForm::from_integer(253)],
        };
        let out = lemma1_check(&inst, budget()).unwrap();
        assert!(out.holds);
        let expected = (BigInt::from(2) * ((BigInt::one() << 32) - 5)) - 506;
        assert_eq!(
            out.sum.expand(64).unwrap(),
            BigRational::from_integer(expected)
        );
    }

    #[test]
    fn lemma1_rejects_points_inside_the_threshold() {
        let inst = Lemma1Instance {
            m: 1,
            paths: vec![vec![]],
            lambda: vec![scalar(1)],
            points: vec![TowerForm::from_integer(4)],
        };
        assert!(matches!(
            lemma1_check(&inst, budget()),
            Err(VerifyError::InvalidInstance(_))
        ));
    }

    #[test]
    fn lemma1_rejects_bad_coefficients_and_members() {
        let base = Lemma1Instance {
            m: 2,
            paths: vec![vec![]],
            lambda: vec![ratio(1, 3)],
            points: vec![TowerForm::from_integer(65531)],
        };
        assert!(lemma1_check(&base, budget()).is_err());
        let not_member = Lemma1Instance {
            lambda: vec![scalar(1)],
            points: vec![TowerForm::from_integer(1000)],
            ..base
        };
        assert!(lemma1_check(&not_member, budget()).is_err());
    }

    #[test]
    fn fuzz_small_run_passes_and_is_deterministic() {
        let cfg = FuzzConfig {
            trials: 300,
            m_max: 3,
            a_max: 12,
            seed: 42,
        };
        let a = lemma1_fuzz(cfg, budget()).unwrap();
        assert!(a.ok(), "{:?}", a.counterexamples.first());
        assert_eq!(a.passes, 300);
        let b = lemma1_fuzz(cfg, budget()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let empty = lemma1_fuzz(FuzzConfig { trials: 0, ..cfg }, budget()).unwrap();
        assert_eq!((empty.passes, empty.failures), (0, 0));
    }

    #[test]
    fn r_and_l_examples() {
        let tree = Tree::new();
        assert_eq!(r_and_l(&tree, &[Branch::zeros()]).unwrap(), (0, 0));
        assert_eq!(
            r_and_l(&tree, &[Branch::zeros(), Branch::new(vec![1])]).unwrap(),
            (1, 4)
        );
        assert_eq!(
            r_and_l(&tree, &[Branch::zeros(), Branch::new(vec![0, 1])])
                .unwrap()
                .0,
            2
        );
    }

    #[test]
    fn claim2_examples() {
        let tree = Tree::new();
        let single = CombinationSpec {
            m: 1,
            branches: vec![Branch::zeros()],
            lambda: vec![scalar(1)],
        };
        let report = claim2_check(&tree, &single, &[19]).unwrap();
        assert!(report.ok());
        assert!(!report.entries[0]
            .value
            .abs_le(&scalar(19), budget())
            .unwrap());
        match claim2_check(&tree, &single, &[10]) {
            Err(VerifyError::RangeTooLow { k: 10, threshold }) => {
                assert_eq!(threshold.expand(64).unwrap(), scalar(18))
            }
            other => panic!("{other:?}"),
        }
        let pair = CombinationSpec {
            m: 2,
            branches: vec![Branch::zeros(), Branch::new(vec![1])],
            lambda: vec![scalar(2), scalar(-2)],
        };
        let ks: Vec<u64> = (260..=300).collect();
        assert!(claim2_check(&tree, &pair, &ks).unwrap().ok());
    }

    #[test]
    fn tree_conditions_hold_on_a_small_tree() {
        let tree = Tree::new();
        let report = verify_tree(&tree, 2, 4, 3).unwrap();
        assert!(report.ok(), "{:?}", report.failures);
        assert_eq!(report.nodes, 21);
        assert_eq!(report.certificates, 5 * 6);
        assert_eq!(report.density_targets, 5 * 3 * 16);
    }

    #[test]
    fn coordinate_samples_are_distinct_and_in_range() {
        let ks = sample_coordinates(259, 500, 50, 1);
        assert_eq!(ks.len(), 50);
        assert!(ks.windows(2).all(|w| w[0] < w[1]));
        assert!(ks.iter().all(|&k| k > 259 && k <= 759));
    }
}
