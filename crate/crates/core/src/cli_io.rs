//! Command-line front end, run configuration and JSON persistence.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage error, 3 I/O failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::exact_arith::{parse_scalar, ExactScalar, ExactValue, TowerForm, DEFAULT_BIT_BUDGET};
use crate::hull_codec::fitting_window;
use crate::hull_codec::{
    hull_distinguish, hull_distinguish_rescaled, hull_encode, Distinction, HullCode, HullError,
};
use crate::thick_family::{canonical_element, marker, thick_member, trimmed_member, xi};
use crate::tree_builder::{Branch, Tree, TreeNode};
use crate::verifier::{claim2_check, lemma1_fuzz, verify_tree, CombinationSpec, FuzzConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable naming a `key = value` configuration file.
pub const CONFIG_ENV: &str = "BORELFORGE_CONFIG";

pub const MAX_DEPTH: usize = 8;
pub const MAX_FANOUT: u64 = 16;
pub const MIN_BIT_BUDGET: u64 = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub depth: usize,
    pub fanout: u64,
    pub seed: u64,
    pub bit_budget: u64,
    pub trials: u64,
    pub m_max: u64,
    pub horizon: u64,
    pub out_path: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            depth: 3,
            fanout: 4,
            seed: 0,
            bit_budget: DEFAULT_BIT_BUDGET,
            trials: 1000,
            m_max: 3,
            horizon: 500,
            out_path: None,
            format: Format::Json,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.depth > MAX_DEPTH {
            return Err(ConfigError(format!(
                "depth {} exceeds {MAX_DEPTH}",
                self.depth
            )));
        }
        if self.fanout > MAX_FANOUT {
            return Err(ConfigError(format!(
                "fanout {} exceeds {MAX_FANOUT}",
                self.fanout
            )));
        }
        if self.bit_budget < MIN_BIT_BUDGET {
            return Err(ConfigError(format!(
                "bit budget {} is below {MIN_BIT_BUDGET}",
                self.bit_budget
            )));
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {}: expected key = value", no + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| ConfigError(format!("line {}: {}", no + 1, e.0)))?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
            value
                .parse()
                .map_err(|_| ConfigError(format!("{key}: cannot parse {value:?}")))
        }
        match key.replace('-', "_").as_str() {
            "depth" => self.depth = num(key, value)?,
            "fanout" => self.fanout = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "bit_budget" => self.bit_budget = num(key, value)?,
            "trials" => self.trials = num(key, value)?,
            "m_max" => self.m_max = num(key, value)?,
            "horizon" => self.horizon = num(key, value)?,
            "out_path" => self.out_path = Some(value.to_string()),
            "format" if value == "json" => self.format = Format::Json,
            "format" => return Err(ConfigError(format!("unsupported format {value:?}"))),
            _ => return Err(ConfigError(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    fn apply_flags(&mut self, flags: &ConfigFlags) {
        macro_rules! take {
            ($($f:ident),*) => {$(if let Some(v) = flags.$f.clone() { self.$f = v; })*};
        }
        take!(depth, fanout, seed, bit_budget, trials, m_max, horizon);
        if let Some(p) = &flags.out {
            self.out_path = Some(p.clone());
        }
    }
}

#[derive(Debug, Args, Default)]
struct ConfigFlags {
    #[arg(long, global = true)]
    depth: Option<usize>,
    #[arg(long, global = true)]
    fanout: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    bit_budget: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[arg(long, global = true)]
    m_max: Option<u64>,
    #[arg(long, global = true)]
    horizon: Option<u64>,
    /// Write the artifact here instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Debug, Parser)]
#[command(
    name = "borelforge",
    version,
    about = "Exact constructions in products of the real line"
)]
struct Cli {
    #[command(flatten)]
    config: ConfigFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Threshold ξ_m and Ξ_m.
    Xi {
        #[arg(long)]
        m: u64,
    },
    /// Thick sets of the family.
    Thick {
        #[command(subcommand)]
        op: ThickOp,
    },
    /// Tree construction.
    Tree {
        #[command(subcommand)]
        op: TreeOp,
    },
    /// Coordinates of limit points.
    Point {
        #[command(subcommand)]
        op: PointOp,
    },
    /// Exact checks.
    Verify {
        #[command(subcommand)]
        op: VerifyOp,
    },
    /// Linear hull codes.
    Hull {
        #[command(subcommand)]
        op: HullOp,
    },
    /// Export the tree, or re-export a previously exported document.
    Export {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum ThickOp {
    Member {
        #[arg(long)]
        family: BigUint,
        #[arg(long)]
        value: String,
        /// Also require the trimmed membership at this coordinate.
        #[arg(long)]
        n: Option<u64>,
    },
    Marker {
        #[arg(long)]
        family: BigUint,
        #[arg(long)]
        n: u64,
    },
    Canonical {
        #[arg(long)]
        family: BigUint,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Debug, Subcommand)]
enum TreeOp {
    /// Build to the configured depth and fanout and print the export document.
    Build,
    /// Print one node.
    Node {
        #[arg(long, default_value = "")]
        path: String,
    },
}

#[derive(Debug, Subcommand)]
enum PointOp {
    Eval {
        #[arg(long, default_value = "")]
        stem: String,
        #[arg(long)]
        coords: String,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyOp {
    Lemma1 {
        #[arg(long, default_value_t = 12)]
        a_max: u64,
    },
    Claim2 {
        /// Branch stems separated by `|`, entries by `,`.
        #[arg(long)]
        stems: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        k_from: u64,
        #[arg(long, default_value_t = 1)]
        k_count: u64,
    },
    Tree {
        #[arg(long, default_value_t = 3)]
        resolution: u32,
    },
}

#[derive(Debug, Subcommand)]
enum HullOp {
    Encode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        coords: String,
    },
    Distinguish {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Rescale both codes once if the difference fits no window.
        #[arg(long)]
        rescale: bool,
    },
}

enum Failure {
    Usage(String),
    Io(String),
}

impl<E: std::fmt::Display> From<E> for Failure
where
    E: std::error::Error,
{
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `a..b` (exclusive) or `a..=b`.
pub fn parse_range(s: &str) -> Option<std::ops::Range<u64>> {
    if let Some((a, b)) = s.split_once("..=") {
        let (a, b): (u64, u64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return Some(a..b.checked_add(1)?);
    }
    let (a, b) = s.split_once("..")?;
    Some(a.trim().parse().ok()?..b.trim().parse().ok()?)
}

fn parse_value(s: &str) -> Result<TowerForm, Failure> {
    if let Ok(v) = serde_json::from_str::<ExactValue>(s) {
        return Ok(v.0);
    }
    Ok(TowerForm::from_scalar(parse_scalar(s)?))
}

fn parse_scalars(s: &str) -> Result<Vec<ExactScalar>, Failure> {
    s.split(',')
        .map(|p| parse_scalar(p).map_err(Failure::from))
        .collect()
}

fn parse_branch(s: &str) -> Result<Branch, Failure> {
    s.parse::<Branch>()
        .map_err(|e| usage(format!("bad stem {s:?}: {e}")))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn to_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("reports serialize")
}

/// One node of an exported tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub path: Vec<u64>,
    pub l: u64,
    #[serde(rename = "M")]
    pub marker: Option<u64>,
    pub window: BTreeMap<u64, ExactValue>,
}

impl NodeRecord {
    pub fn of(node: &TreeNode) -> Self {
        NodeRecord {
            path: node.path().to_vec(),
            l: node.level(),
            marker: node.marker_coord(),
            window: node
                .window()
                .iter()
                .map(|(n, v)| (*n, ExactValue(v.clone())))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeExport {
    pub format: String,
    pub config: RunConfig,
    pub nodes: Vec<NodeRecord>,
}

pub const EXPORT_FORMAT: &str = "1";

/// Export document for the configured depth and fanout, nodes ordered by depth then path.
pub fn export_tree(
    tree: &Tree,
    config: &RunConfig,
) -> Result<TreeExport, crate::tree_builder::TreeError> {
    let mut nodes: Vec<NodeRecord> = tree
        .build(config.depth, config.fanout)?
        .iter()
        .map(|n| NodeRecord::of(n))
        .collect();
    nodes.sort_by(|a, b| (a.path.len(), &a.path).cmp(&(b.path.len(), &b.path)));
    Ok(TreeExport {
        format: EXPORT_FORMAT.to_string(),
        config: config.clone(),
        nodes,
    })
}

/// Entry point. Reads the configuration file named by `BORELFORGE_CONFIG`, if set.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config_file = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    run_with_config_file(args, config_file.as_deref(), out, err)
}

pub fn run_with_config_file<I, S>(
    args: I,
    config_file: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut config = RunConfig::default();
    if let Some(path) = config_file {
        let text = match read_file(path) {
            Ok(t) => t,
            Err(f) => return report_failure(f, err),
        };
        if let Err(e) = config.apply_file(&text) {
            let _ = writeln!(err, "error: {}: {}", path.display(), e.0);
            return EXIT_USAGE;
        }
    }
    config.apply_flags(&cli.config);
    if let Err(e) = config.validate() {
        let _ = writeln!(err, "error: {}", e.0);
        return EXIT_USAGE;
    }
    match execute(&cli.command, &config) {
        Ok((text, ok)) => {
            if let Err(f) = emit(&config, &text, out) {
                return report_failure(f, err);
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(f) => report_failure(f, err),
    }
}

fn report_failure(f: Failure, err: &mut dyn Write) -> i32 {
    match f {
        Failure::Usage(m) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Failure::Io(m) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_IO
        }
    }
}

fn emit(config: &RunConfig, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match &config.out_path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{p}: {e}"))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

/// Runs a command and returns its output text and whether all checks passed.
fn execute(command: &Command, config: &RunConfig) -> Result<(String, bool), Failure> {
    let tree = Tree::with_bit_budget(config.bit_budget);
    let budget = config.bit_budget;
    let single = |v: serde_json::Value| Ok((to_line(&v) + "\n", true));
    match command {
        Command::Xi { m } => {
            if *m == 0 {
                return Err(usage("m must be positive"));
            }
            single(serde_json::to_value(xi(*m)).expect("serializes"))
        }
        Command::Thick { op } => match op {
            ThickOp::Member { family, value, n } => {
                let q = parse_value(value)?;
                let member = match n {
                    Some(n) => trimmed_member(family, *n, &q)?,
                    None => thick_member(family, &q)?,
                };
                single(
                    json!({"family": family.to_string(), "value": ExactValue(q), "n": n, "member": member}),
                )
            }
            ThickOp::Marker { family, n } => single(
                json!({"family": family.to_string(), "n": n, "marker": ExactValue(marker(family, *n))}),
            ),
            ThickOp::Canonical { family, n } => single(json!({
                "family": family.to_string(),
                "n": n,
                "canonical": ExactValue(canonical_element(family, *n)),
            })),
        },
        Command::Tree { op } => match op {
            TreeOp::Build => {
                single(serde_json::to_value(export_tree(&tree, config)?).expect("serializes"))
            }
            TreeOp::Node { path } => {
                let path = parse_branch_path(path)?;
                let node = tree.node(&path)?;
                let ball = tree.ball(&node)?;
                single(json!({
                    "node": NodeRecord::of(&node),
                    "family": node.parent_family().map(|f| f.to_string()),
                    "ball": ball.values.into_iter().map(ExactValue).collect::<Vec<_>>(),
                }))
            }
        },
        Command::Point { op } => {
            match op {
                PointOp::Eval { stem, coords } => {
                    let branch = parse_branch(stem)?;
                    let range = parse_range(coords)
                        .ok_or_else(|| usage(format!("bad range {coords:?}")))?;
                    let values = range
                    .map(|k| Ok(json!({"k": k, "value": ExactValue(tree.eval_coordinate(&branch, k)?)})))
                    .collect::<Result<Vec<_>, Failure>>()?;
                    single(json!({"config": config, "stem": branch.stem(), "coords": values}))
                }
            }
        }
        Command::Verify { op } => match op {
            VerifyOp::Lemma1 { a_max } => {
                let fuzz = FuzzConfig {
                    trials: config.trials,
                    m_max: config.m_max,
                    a_max: *a_max,
                    seed: config.seed,
                };
                let report = lemma1_fuzz(fuzz, budget)?;
                let mut text = String::new();
                writeln!(
                    text,
                    "{}",
                    to_line(&json!({"kind": "header", "config": config, "fuzz": fuzz}))
                )
                .ok();
                for c in &report.counterexamples {
                    writeln!(
                        text,
                        "{}",
                        to_line(&json!({"kind": "counterexample", "case": c}))
                    )
                    .ok();
                }
                writeln!(
                    text,
                    "{}",
                    to_line(&json!({"kind": "summary", "trials": fuzz.trials, "passes": report.passes, "failures": report.failures}))
                )
                .ok();
                Ok((text, report.ok()))
            }
            VerifyOp::Claim2 {
                stems,
                lambda,
                m,
                k_from,
                k_count,
            } => {
                let branches = stems
                    .split('|')
                    .map(parse_branch)
                    .collect::<Result<Vec<_>, _>>()?;
                let lambda = parse_scalars(lambda)?;
                let m = match m {
                    Some(m) => *m,
                    None => fitting_window(&lambda, config.m_max.max(branches.len() as u64))
                        .ok_or_else(|| usage("coefficients fit no window; pass --m"))?,
                };
                let spec = CombinationSpec {
                    m,
                    branches,
                    lambda,
                };
                let ks: Vec<u64> = (*k_from..k_from.saturating_add(*k_count)).collect();
                let report = claim2_check(&tree, &spec, &ks)?;
                let mut text = String::new();
                writeln!(text, "{}", to_line(&json!({"kind": "header", "config": config, "m": m, "r_E": report.r_e, "l_E": report.l_e, "threshold": ExactValue(report.threshold.clone())}))).ok();
                for e in &report.entries {
                    writeln!(text, "{}", to_line(&json!({"kind": "entry", "k": e.k, "value": ExactValue(e.value.clone()), "pass": e.pass}))).ok();
                }
                let failures = report.entries.iter().filter(|e| !e.pass).count();
                writeln!(text, "{}", to_line(&json!({"kind": "summary", "checked": report.entries.len(), "failures": failures}))).ok();
                Ok((text, report.ok()))
            }
            VerifyOp::Tree { resolution } => {
                let report = verify_tree(&tree, config.depth, config.fanout, *resolution)?;
                let mut text = String::new();
                writeln!(
                    text,
                    "{}",
                    to_line(&json!({"kind": "header", "config": config, "resolution": resolution}))
                )
                .ok();
                for f in &report.failures {
                    writeln!(
                        text,
                        "{}",
                        to_line(&json!({"kind": "failure", "failure": f}))
                    )
                    .ok();
                }
                writeln!(
                    text,
                    "{}",
                    to_line(&json!({
                        "kind": "summary",
                        "nodes": report.nodes,
                        "certificates": report.certificates,
                        "density_targets": report.density_targets,
                        "max_density_index": report.max_density_index,
                        "failures": report.failures.len(),
                    }))
                )
                .ok();
                Ok((text, report.ok()))
            }
        },
        Command::Hull { op } => match op {
            HullOp::Encode { code, coords } => {
                let code: HullCode = serde_json::from_str(&read_file(code)?)?;
                let range =
                    parse_range(coords).ok_or_else(|| usage(format!("bad range {coords:?}")))?;
                let point = hull_encode(&tree, code.clone());
                let values = range
                    .map(|k| Ok(json!({"k": k, "value": ExactValue(point.coordinate(k)?)})))
                    .collect::<Result<Vec<_>, Failure>>()?;
                single(json!({"config": config, "code": code, "coords": values}))
            }
            HullOp::Distinguish { a, b, rescale } => {
                let a: HullCode = serde_json::from_str(&read_file(a)?)?;
                let b: HullCode = serde_json::from_str(&read_file(b)?)?;
                let result = if *rescale {
                    hull_distinguish_rescaled(&tree, &a, &b, config.m_max, config.horizon)
                } else {
                    hull_distinguish(&tree, &a, &b, config.m_max, config.horizon)
                };
                match result {
                    Ok(d) => {
                        let d = match d {
                            Distinction::Identical => json!({"result": "identical"}),
                            Distinction::Witness(w) => json!({
                                "result": "witness",
                                "k": w.k,
                                "value": ExactValue(w.value),
                                "m": w.m,
                                "threshold": ExactValue(w.threshold),
                                "scale": crate::exact_arith::format_scalar(&w.scale),
                            }),
                        };
                        single(json!({"config": config, "a": a, "b": b, "distinction": d}))
                    }
                    Err(HullError::HorizonExhausted { threshold, horizon }) => Ok((
                        to_line(
                            &json!({"config": config, "a": a, "b": b, "error": "horizon_exhausted", "threshold": ExactValue(threshold), "horizon": horizon}),
                        ) + "\n",
                        false,
                    )),
                    Err(e) => Err(usage(e.to_string())),
                }
            }
        },
        Command::Export { input } => match input {
            None => single(serde_json::to_value(export_tree(&tree, config)?).expect("serializes")),
            Some(path) => {
                let doc: TreeExport = serde_json::from_str(&read_file(path)?)?;
                if doc.format != EXPORT_FORMAT {
                    return Err(usage(format!("unsupported export format {:?}", doc.format)));
                }
                doc.config.validate().map_err(|e| usage(e.0))?;
                let rebuilt =
                    export_tree(&Tree::with_bit_budget(doc.config.bit_budget), &doc.config)?;
                let text = to_line(&doc) + "\n";
                Ok((text, rebuilt == doc))
            }
        },
    }
}

fn parse_branch_path(s: &str) -> Result<Vec<u64>, Failure> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|e| {
            e.trim()
                .parse::<u64>()
                .map_err(|e| usage(format!("bad path {s:?}: {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with_config_file(
            std::iter::once("borelforge").chain(args.iter().copied()),
            None,
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn xi_output() {
        let (code, out, _) = run_args(&["xi", "--m", "2"]);
        assert_eq!(code, 0);
        assert_eq!(
            out.trim(),
            r#"{"m":2,"xi":3,"Xi":{"terms":[{"a":3,"q":"1"}],"r":"3"}}"#
        );
    }

    #[test]
    fn guardrails_are_usage_errors() {
        assert_eq!(run_args(&["tree", "build", "--depth", "9"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["tree", "build", "--fanout", "17"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["tree", "build", "--bit-budget", "10"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
    }

    #[test]
    fn config_file_and_flags() {
        let mut c = RunConfig::default();
        c.apply_file("# comment\ndepth = 2\nbit-budget=4096\nseed = 9 # trailing\n")
            .unwrap();
        assert_eq!((c.depth, c.bit_budget, c.seed), (2, 4096, 9));
        assert!(c.apply_file("nonsense").is_err());
        assert!(c.apply_file("depth = x").is_err());
        assert!(c.apply_file("colour = blue").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0..4"), Some(0..4));
        assert_eq!(parse_range("2..=4"), Some(2..5));
        assert_eq!(parse_range("4"), None);
    }

    #[test]
    fn export_shape() {
        let (code, out, _) = run_args(&["tree", "build", "--depth", "1", "--fanout", "2"]);
        assert_eq!(code, 0);
        let doc: TreeExport = serde_json::from_str(&out).unwrap();
        assert_eq!(doc.nodes.len(), 3);
        assert_eq!(doc.nodes[1].path, vec![0]);
        assert_eq!(doc.nodes[1].marker, Some(1));
        let w0 = &doc.nodes[1].window[&0].0;
        assert_eq!(w0.expand(64).unwrap(), crate::exact_arith::ratio(7, 2));
        assert_eq!(doc.nodes[0].marker, None);
        let (_, out0, _) = run_args(&["tree", "build", "--depth", "0"]);
        let doc0: TreeExport = serde_json::from_str(&out0).unwrap();
        assert_eq!(doc0.nodes.len(), 1);
    }
}
