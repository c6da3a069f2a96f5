//! Experiment harness: configs, the per-experiment runners and their reports.

mod experiments;
mod report;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff_core::{is_prime, FieldContext, FieldElement};
use crate::intpoly::{is_special, SpecialKind};
use crate::orbits::{GeneratorSet, WordStream};

pub use experiments::{
    composition_height_check, run_cor45, run_lemma41, run_prop21, run_thm44i, run_thm44ii, run_thm46,
    run_thm61, HeightCheck, LEMMA41_DEGREE_LIMIT, PROP21_DEGREE_LIMIT,
};
pub use report::{fmt_real, ExperimentReport, ReportHeader, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    Thm44i,
    Thm44ii,
    Cor45,
    Thm46,
    Thm61,
    Lemma41,
    Prop21,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 7] = [
        ExperimentId::Thm44i,
        ExperimentId::Thm44ii,
        ExperimentId::Cor45,
        ExperimentId::Thm46,
        ExperimentId::Thm61,
        ExperimentId::Lemma41,
        ExperimentId::Prop21,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentId::Thm44i => "thm44i",
            ExperimentId::Thm44ii => "thm44ii",
            ExperimentId::Cor45 => "cor45",
            ExperimentId::Thm46 => "thm46",
            ExperimentId::Thm61 => "thm61",
            ExperimentId::Lemma41 => "lemma41",
            ExperimentId::Prop21 => "prop21",
        }
    }

    /// The column whose max and 95th percentile summarise the run.
    pub fn ratio_column(self) -> &'static str {
        match self {
            ExperimentId::Lemma41 => "normalized",
            ExperimentId::Thm61 => "left_ratio",
            _ => "ratio",
        }
    }

    pub fn valid_ids() -> String {
        Self::ALL.map(Self::as_str).join(", ")
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown experiment '{s}'; valid ids: {}", Self::valid_ids())))
    }
}

/// How `t` is chosen for a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TRule {
    /// A fixed `t`.
    Absolute(u64),
    /// `t = max(1, floor((ln p)^e))` with `0 < e < 1/2`.
    LogPower(f64),
}

impl TRule {
    pub fn t_for(self, p: u64) -> u64 {
        match self {
            TRule::Absolute(t) => t,
            TRule::LogPower(e) => ((p as f64).ln().powf(e).floor() as u64).max(1),
        }
    }
}

/// Which initial points each prime contributes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PointSpec {
    /// Every element of the field.
    #[default]
    All,
    /// Integers, reduced into the prime subfield.
    List(Vec<i64>),
    /// `count` distinct elements drawn with a ChaCha8 stream keyed by `seed` and `p`.
    Sample { count: usize, seed: u64 },
}

fn default_s() -> u32 {
    1
}
fn default_constant() -> f64 {
    1.0
}
fn default_epsilon() -> f64 {
    0.1
}
fn default_cap() -> usize {
    1 << 20
}

/// Every knob of every experiment; each experiment reads the fields it needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional; must agree with the requested experiment when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    #[serde(default)]
    pub generators: Vec<String>,
    /// Explicit primes.
    #[serde(default)]
    pub primes: Vec<u64>,
    /// Adds every prime up to this bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_max: Option<u64>,
    #[serde(default = "default_s")]
    pub s: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<TRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    /// Sets `h = floor((log_k N)^(1/(l+1)))`, at least 1.
    #[serde(default)]
    pub h_from_n: bool,
    #[serde(default)]
    pub points: PointSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stream: Option<WordStream>,
    /// `C` of the exceptional-prime test and `c` of the `s log(c log p)` comparison.
    #[serde(default = "default_constant")]
    pub constant: f64,
    /// Constant for the witness-count assertion; 0 only reports.
    #[serde(default)]
    pub witness_constant: f64,
    /// Floor for `log log p` in bound denominators.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default)]
    pub include_level0: bool,
    /// Turns special generators into an error instead of a note.
    #[serde(default)]
    pub strict_special: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[serde(default)]
    pub resultant_diagnostic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub(crate) fn require<T: Copy>(&self, v: Option<T>, name: &str) -> Result<T> {
        v.ok_or_else(|| Error::InvalidConfig(format!("missing field '{name}'")))
    }

    pub(crate) fn generator_set(&self) -> Result<GeneratorSet> {
        if self.generators.is_empty() {
            return Err(Error::InvalidConfig("missing field 'generators'".into()));
        }
        GeneratorSet::parse(&self.generators)
    }

    pub(crate) fn n_steps(&self) -> Result<usize> {
        let n = self.require(self.n, "n")?;
        if n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        Ok(n)
    }

    pub(crate) fn t_rule(&self) -> Result<TRule> {
        let rule = self.require(self.t, "t")?;
        match rule {
            TRule::Absolute(0) => Err(Error::InvalidConfig("t must be at least 1".into())),
            TRule::LogPower(e) if !(e > 0.0 && e < 0.5) => Err(Error::InvalidConfig(format!(
                "t exponent must lie in (0, 1/2), got {e}"
            ))),
            r => Ok(r),
        }
    }

    /// Sorted, deduplicated primes from `primes` and `prime_max`.
    pub(crate) fn prime_grid(&self) -> Result<Vec<u64>> {
        let mut grid = self.primes.clone();
        for &p in &grid {
            if !is_prime(p as u128) {
                return Err(Error::CompositeModulus(p as u128));
            }
        }
        if let Some(max) = self.prime_max {
            grid.extend((2..=max).filter(|&p| is_prime(p as u128)));
        }
        grid.sort_unstable();
        grid.dedup();
        Ok(grid)
    }

    /// Log-log denominator with the configured floor.
    pub(crate) fn loglog(&self, p: u64) -> f64 {
        (p as f64).ln().ln().max(self.epsilon)
    }

    pub(crate) fn points_for(&self, ctx: &FieldContext) -> Result<Vec<FieldElement>> {
        let q = ctx.size();
        match &self.points {
            PointSpec::All => Ok(ctx.elements().collect()),
            PointSpec::List(v) => Ok(v.iter().map(|&x| ctx.from_i64(x)).collect()),
            PointSpec::Sample { count, seed } => {
                if *count as u64 >= q {
                    return Ok(ctx.elements().collect());
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ctx.characteristic().rotate_left(32) ^ u64::from(ctx.degree()));
                let mut idx: Vec<u64> = rand::seq::index::sample(&mut rng, q as usize, *count)
                    .into_iter()
                    .map(|i| i as u64)
                    .collect();
                idx.sort_unstable();
                idx.into_iter().map(|i| ctx.element(i)).collect()
            }
        }
    }
}

/// Notes (or, in strict mode, an error) for generators that fail the non-special hypothesis.
pub(crate) fn specialness_notes(gens: &GeneratorSet, strict: bool) -> Result<Vec<String>> {
    let mut notes = vec!["specialness is tested for conjugacy over Q only".to_string()];
    for f in gens.polys() {
        let kind = is_special(f)?.kind;
        if kind != SpecialKind::NonSpecial {
            let msg = format!("generator {f} is {}; the non-special hypothesis fails", kind.as_str());
            if strict {
                return Err(Error::HypothesisViolated(msg));
            }
            notes.push(msg);
        }
    }
    Ok(notes)
}

fn timestamp() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()) {
        return t;
    }
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub(crate) fn new_report(
    id: ExperimentId,
    cfg: &ExperimentConfig,
    columns: &[&str],
    rows: Vec<Vec<Value>>,
    notes: Vec<String>,
) -> ExperimentReport {
    ExperimentReport {
        config: cfg.clone(),
        header: ReportHeader {
            experiment: id.as_str().into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: timestamp(),
            seed: cfg.seed,
            notes,
        },
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
        summary: Vec::new(),
    }
}

/// Max and 95th percentile (nearest rank) of a numeric column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fit {
    pub count: usize,
    pub max: f64,
    pub p95: f64,
}

pub fn fit_constants(report: &ExperimentReport, column: &str) -> Result<Fit> {
    let idx = report
        .column(column)
        .ok_or_else(|| Error::InvalidConfig(format!("report has no column '{column}'")))?;
    let mut vals: Vec<f64> = report.rows.iter().filter_map(|r| r[idx].as_f64()).collect();
    if vals.is_empty() {
        return Err(Error::EmptyReport);
    }
    vals.sort_by(f64::total_cmp);
    let rank = ((0.95 * vals.len() as f64).ceil() as usize).max(1);
    Ok(Fit {
        count: vals.len(),
        max: *vals.last().expect("nonempty"),
        p95: vals[rank - 1],
    })
}

/// Appends the ratio-column fit to the summary when any row has a value.
pub(crate) fn add_fit(report: &mut ExperimentReport, id: ExperimentId) {
    if let Ok(fit) = fit_constants(report, id.ratio_column()) {
        report.summary.push(("fit_rows".into(), fit.count.into()));
        report.summary.push(("max_ratio".into(), fit.max.into()));
        report.summary.push(("p95_ratio".into(), fit.p95.into()));
    }
}

/// Runs the experiment `id` on `cfg`.
pub fn run_experiment(id: ExperimentId, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if let Some(named) = &cfg.experiment {
        if named.parse::<ExperimentId>()? != id {
            return Err(Error::InvalidConfig(format!("config is for '{named}', not '{id}'")));
        }
    }
    match id {
        ExperimentId::Thm44i => run_thm44i(cfg),
        ExperimentId::Thm44ii => run_thm44ii(cfg),
        ExperimentId::Cor45 => run_cor45(cfg),
        ExperimentId::Thm46 => run_thm46(cfg),
        ExperimentId::Thm61 => run_thm61(cfg),
        ExperimentId::Lemma41 => run_lemma41(cfg),
        ExperimentId::Prop21 => run_prop21(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report_with(ratios: &[f64]) -> ExperimentReport {
        let rows = ratios.iter().map(|&r| vec![Value::Real(r)]).collect();
        new_report(ExperimentId::Prop21, &ExperimentConfig::default(), &["ratio"], rows, vec![])
    }

    #[test]
    fn fit_examples() {
        assert_eq!(fit_constants(&report_with(&[0.5]), "ratio").unwrap().max, 0.5);
        let fit = fit_constants(&report_with(&[1.0, 2.0, 3.0]), "ratio").unwrap();
        assert_eq!((fit.max, fit.p95), (3.0, 3.0));
        let hundred: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(fit_constants(&report_with(&hundred), "ratio").unwrap().p95, 95.0);
        assert_eq!(fit_constants(&report_with(&[]), "ratio"), Err(Error::EmptyReport));
    }

    #[test]
    fn ids_and_rules() {
        assert_eq!("thm46".parse::<ExperimentId>().unwrap(), ExperimentId::Thm46);
        let err = "thm99".parse::<ExperimentId>().unwrap_err().to_string();
        assert!(err.contains("thm44i") && err.contains("prop21"));
        assert_eq!(TRule::LogPower(0.4).t_for(3), 1);
        assert_eq!(TRule::LogPower(0.49).t_for(1_000_000_007), 4);
        assert_eq!(TRule::Absolute(7).t_for(11), 7);
    }

    #[test]
    fn config_parsing() {
        let cfg = ExperimentConfig::from_json(
            r#"{"generators": ["X^2 + 1"], "primes": [11, 5], "prime_max": 7, "t": {"log_power": 0.3},
                "n": 6, "points": {"sample": {"count": 3, "seed": 9}}, "stream": {"kind": "periodic", "preperiod": [], "period": [1]}}"#,
        )
        .unwrap();
        assert_eq!(cfg.prime_grid().unwrap(), vec![2, 3, 5, 7, 11]);
        assert_eq!(cfg.t_rule().unwrap(), TRule::LogPower(0.3));
        let ctx = FieldContext::prime(11).unwrap();
        let pts = cfg.points_for(&ctx).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts, cfg.points_for(&ctx).unwrap());
        assert!(ExperimentConfig::from_json(r#"{"bogus": 1}"#).is_err());
        let bad = ExperimentConfig::from_json(r#"{"t": {"log_power": 0.7}}"#).unwrap();
        assert!(matches!(bad.t_rule(), Err(Error::InvalidConfig(_))));
        let composite = ExperimentConfig::from_json(r#"{"primes": [9]}"#).unwrap();
        assert_eq!(composite.prime_grid(), Err(Error::CompositeModulus(9)));
    }
}
