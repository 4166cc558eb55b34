//! Experiment configuration: presets, the key=value config file format, and
//! derived quantities (inner-loop length, outer-iteration budgets).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use steffensen::objective::LossKind;
use steffensen::prox::ProxSpec;
use steffensen::stochastic::Algorithm;

/// Which dataset/objective the experiment runs on.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemKind {
    /// Gaussian design, planted solution, squared loss.
    SyntheticRidge { n: usize, d: usize, data_seed: u64 },
    /// Logistic loss on the w6a file (n = 17188, d = 300 when genuine).
    LogisticW6a,
    /// Squared hinge loss on the a6a file (n = 11220, d = 123 when genuine).
    SquaredHingeA6a,
    /// Any LIBSVM file with an explicit loss.
    CustomFile { path: PathBuf, loss: LossKind },
}

impl ProblemKind {
    pub fn loss(&self) -> LossKind {
        match self {
            ProblemKind::SyntheticRidge { .. } => LossKind::SquaredLoss,
            ProblemKind::LogisticW6a => LossKind::LogisticLoss,
            ProblemKind::SquaredHingeA6a => LossKind::SquaredHinge,
            ProblemKind::CustomFile { loss, .. } => *loss,
        }
    }

    /// File name under the data directory, when file-backed.
    pub fn file_name(&self) -> Option<&str> {
        match self {
            ProblemKind::LogisticW6a => Some("w6a"),
            ProblemKind::SquaredHingeA6a => Some("a6a"),
            _ => None,
        }
    }
}

/// Inner-loop length as a function of the sample count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MRule {
    N,
    TwoN,
    Explicit(usize),
}

impl MRule {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            MRule::N => n,
            MRule::TwoN => 2 * n,
            MRule::Explicit(m) => m,
        }
    }
}

/// One algorithm entry of the experiment grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSpec {
    pub algorithm: Algorithm,
    /// Required by the fixed-rate baselines; ignored by SSM/SSBB.
    pub fixed_eta: Option<f64>,
    pub prox: ProxSpec,
}

impl AlgorithmSpec {
    pub fn new(algorithm: Algorithm) -> Self {
        AlgorithmSpec {
            algorithm,
            fixed_eta: None,
            prox: ProxSpec::Zero,
        }
    }

    pub fn with_eta(algorithm: Algorithm, eta: f64) -> Self {
        AlgorithmSpec {
            algorithm,
            fixed_eta: Some(eta),
            prox: ProxSpec::Zero,
        }
    }

    /// Short name used for file names and the summary table; includes the
    /// rate so two fixed-rate entries of one algorithm stay distinct.
    pub fn label(&self) -> String {
        match self.fixed_eta {
            Some(eta) => format!("{}_{:e}", algorithm_name(self.algorithm), eta),
            None => algorithm_name(self.algorithm).to_string(),
        }
    }
}

pub fn algorithm_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Sgd => "sgd",
        Algorithm::SgdBb => "sgd-bb",
        Algorithm::Svrg => "svrg",
        Algorithm::SvrgBb => "svrg-bb",
        Algorithm::Ssm => "ssm",
        Algorithm::Ssbb => "ssbb",
        Algorithm::ProxSsbb => "prox-ssbb",
    }
}

pub fn parse_algorithm(name: &str) -> Result<Algorithm> {
    Ok(match name {
        "sgd" => Algorithm::Sgd,
        "sgd-bb" => Algorithm::SgdBb,
        "svrg" => Algorithm::Svrg,
        "svrg-bb" => Algorithm::SvrgBb,
        "ssm" => Algorithm::Ssm,
        "ssbb" => Algorithm::Ssbb,
        "prox-ssbb" => Algorithm::ProxSsbb,
        other => bail!("unknown algorithm {other:?}"),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    pub lambda: f64,
    pub m_rule: MRule,
    pub b: usize,
    pub algorithms: Vec<AlgorithmSpec>,
    pub repetitions: usize,
    pub base_seed: u64,
    /// Explicit outer-iteration count; when absent, derived from
    /// `pass_budget` and each algorithm's per-outer evaluation cost.
    pub outer_iters: Option<usize>,
    /// Target number of passes through the data (default 30).
    pub pass_budget: f64,
    pub output_dir: PathBuf,
    pub data_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions < 1 {
            bail!("repetitions must be >= 1");
        }
        if self.b < 1 {
            bail!("batch size must be >= 1");
        }
        if !(self.lambda >= 0.0) {
            bail!("lambda must be nonnegative");
        }
        if self.algorithms.is_empty() {
            bail!("no algorithms configured");
        }
        if self.pass_budget <= 0.0 && self.outer_iters.is_none() {
            bail!("either a positive pass budget or an explicit outer_iters is required");
        }
        Ok(())
    }

    /// Outer iterations for one algorithm: explicit override, else enough
    /// whole outer iterations to cover the pass budget (at least one).
    pub fn outer_iters_for(&self, alg: Algorithm, n: usize) -> usize {
        if let Some(k) = self.outer_iters {
            return k;
        }
        let m = self.m_rule.resolve(n);
        let per_outer = alg.evals_per_outer(n, m, self.b) as f64;
        let budget = self.pass_budget * n as f64;
        ((budget / per_outer).ceil() as usize).max(1)
    }

    /// Canonical key=value rendering; also the input to the config hash.
    pub fn canonical_string(&self) -> String {
        let mut s = String::new();
        let problem = match &self.problem {
            ProblemKind::SyntheticRidge { n, d, data_seed } => {
                format!("synthetic-ridge n={n} d={d} data_seed={data_seed}")
            }
            ProblemKind::LogisticW6a => "logistic-w6a".to_string(),
            ProblemKind::SquaredHingeA6a => "squared-hinge-a6a".to_string(),
            ProblemKind::CustomFile { path, loss } => {
                format!("custom {:?} loss={loss:?}", path.display())
            }
        };
        s.push_str(&format!("problem = {problem}\n"));
        s.push_str(&format!("lambda = {:e}\n", self.lambda));
        s.push_str(&format!("m_rule = {:?}\n", self.m_rule));
        s.push_str(&format!("b = {}\n", self.b));
        for a in &self.algorithms {
            s.push_str(&format!(
                "algorithm = {} eta={:?} prox={:?}\n",
                a.label(),
                a.fixed_eta,
                a.prox
            ));
        }
        s.push_str(&format!("repetitions = {}\n", self.repetitions));
        s.push_str(&format!("base_seed = {}\n", self.base_seed));
        s.push_str(&format!("outer_iters = {:?}\n", self.outer_iters));
        s.push_str(&format!("pass_budget = {}\n", self.pass_budget));
        s
    }

    /// FNV-1a hash of the canonical rendering, for the manifest.
    pub fn config_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for byte in self.canonical_string().bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }
}

/// Named presets. Full-size presets mirror the benchmark table; the
/// desk-scale preset is the same family shrunk to run in seconds.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let base = ExperimentConfig {
        problem: ProblemKind::SyntheticRidge {
            n: 5000,
            d: 100,
            data_seed: 20_240_001,
        },
        lambda: 1e-4,
        m_rule: MRule::TwoN,
        b: 4,
        algorithms: vec![AlgorithmSpec::new(Algorithm::Ssbb)],
        repetitions: 10,
        base_seed: 1,
        outer_iters: None,
        pass_budget: 30.0,
        output_dir: PathBuf::from("out"),
        data_dir: None,
    };
    Ok(match name {
        "synthetic-ridge" => base,
        "synthetic-ridge-small" => ExperimentConfig {
            problem: ProblemKind::SyntheticRidge {
                n: 500,
                d: 50,
                data_seed: 20_240_001,
            },
            ..base
        },
        "logistic-w6a" => ExperimentConfig {
            problem: ProblemKind::LogisticW6a,
            lambda: 1e-4,
            m_rule: MRule::N,
            b: 16,
            ..base
        },
        "squared-hinge-a6a" => ExperimentConfig {
            problem: ProblemKind::SquaredHingeA6a,
            lambda: 1e-3,
            m_rule: MRule::N,
            b: 16,
            ..base
        },
        other => bail!(
            "unknown preset {other:?} (expected synthetic-ridge, synthetic-ridge-small, \
             logistic-w6a or squared-hinge-a6a)"
        ),
    })
}

/// Parses the declarative config file: one `key = value` per line, `#`
/// comments and blank lines ignored. Keys: preset, problem, n, d,
/// data_seed, lambda, m, b, algorithms (comma list, `name` or `name:eta`),
/// repetitions, base_seed, outer_iters, pass_budget, output_dir, data_dir,
/// prox_l1, prox_l2.
pub fn parse_config_file(text: &str, base_dir: &Path) -> Result<ExperimentConfig> {
    let mut kv: BTreeMap<String, String> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected key = value", i + 1))?;
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    let mut cfg = match kv.get("preset") {
        Some(p) => preset(p)?,
        None => preset("synthetic-ridge")?,
    };
    if let Some(p) = kv.get("problem") {
        cfg.problem = match p.as_str() {
            "synthetic-ridge" => ProblemKind::SyntheticRidge {
                n: 5000,
                d: 100,
                data_seed: 20_240_001,
            },
            "logistic-w6a" => ProblemKind::LogisticW6a,
            "squared-hinge-a6a" => ProblemKind::SquaredHingeA6a,
            other => {
                // custom:<path>:<loss>
                let mut parts = other.splitn(3, ':');
                match (parts.next(), parts.next(), parts.next()) {
                    (Some("custom"), Some(path), Some(loss)) => ProblemKind::CustomFile {
                        path: base_dir.join(path),
                        loss: parse_loss(loss)?,
                    },
                    _ => bail!("unknown problem {other:?}"),
                }
            }
        };
    }
    if let ProblemKind::SyntheticRidge { n, d, data_seed } = &mut cfg.problem {
        if let Some(v) = kv.get("n") {
            *n = v.parse().context("n")?;
        }
        if let Some(v) = kv.get("d") {
            *d = v.parse().context("d")?;
        }
        if let Some(v) = kv.get("data_seed") {
            *data_seed = v.parse().context("data_seed")?;
        }
    }
    if let Some(v) = kv.get("lambda") {
        cfg.lambda = v.parse().context("lambda")?;
    }
    if let Some(v) = kv.get("m") {
        cfg.m_rule = match v.as_str() {
            "n" => MRule::N,
            "2n" => MRule::TwoN,
            other => MRule::Explicit(other.parse().context("m")?),
        };
    }
    if let Some(v) = kv.get("b") {
        cfg.b = v.parse().context("b")?;
    }
    if let Some(v) = kv.get("algorithms") {
        cfg.algorithms = parse_algorithm_list(v)?;
    }
    if let Some(v) = kv.get("repetitions") {
        cfg.repetitions = v.parse().context("repetitions")?;
    }
    if let Some(v) = kv.get("base_seed") {
        cfg.base_seed = v.parse().context("base_seed")?;
    }
    if let Some(v) = kv.get("outer_iters") {
        cfg.outer_iters = Some(v.parse().context("outer_iters")?);
    }
    if let Some(v) = kv.get("pass_budget") {
        cfg.pass_budget = v.parse().context("pass_budget")?;
    }
    if let Some(v) = kv.get("output_dir") {
        cfg.output_dir = base_dir.join(v);
    }
    if let Some(v) = kv.get("data_dir") {
        cfg.data_dir = Some(base_dir.join(v));
    }
    let l1 = kv.get("prox_l1").map(|v| v.parse()).transpose()?.unwrap_or(0.0);
    let l2 = kv.get("prox_l2").map(|v| v.parse()).transpose()?.unwrap_or(0.0);
    if l1 > 0.0 || l2 > 0.0 {
        let prox = if l2 == 0.0 {
            ProxSpec::L1 { weight: l1 }
        } else if l1 == 0.0 {
            ProxSpec::SquaredL2 { weight: l2 }
        } else {
            ProxSpec::ElasticNet { l1, l2 }
        };
        for a in &mut cfg.algorithms {
            if a.algorithm == Algorithm::ProxSsbb {
                a.prox = prox;
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_loss(name: &str) -> Result<LossKind> {
    Ok(match name {
        "squared" => LossKind::SquaredLoss,
        "logistic" => LossKind::LogisticLoss,
        "squared-hinge" => LossKind::SquaredHinge,
        other => bail!("unknown loss {other:?}"),
    })
}

/// `name` or `name:eta`, comma separated.
pub fn parse_algorithm_list(text: &str) -> Result<Vec<AlgorithmSpec>> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (name, eta) = match item.split_once(':') {
            Some((n, e)) => (n, Some(e.parse::<f64>().context("learning rate")?)),
            None => (item, None),
        };
        let mut spec = AlgorithmSpec::new(parse_algorithm(name)?);
        spec.fixed_eta = eta;
        out.push(spec);
    }
    if out.is_empty() {
        bail!("empty algorithm list");
    }
    Ok(out)
}
