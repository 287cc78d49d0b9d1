//! Batch identity checks: the SO(r) theta-dimension identity, the u-set
//! oracle comparison, symplectic level-rank symmetry and torus-order
//! unitarity.

use std::fmt::{self, Write as _};
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::{Family, GroupType, RootSystem};
use crate::so_oracle;
use crate::verlinde::{self, theta_dim, Evaluator, VerlindeResult};
use crate::DEFAULT_PRECISION;

pub const SO_IDENTITY: &str = "so_identity";
pub const SO_ORACLE: &str = "so_oracle";
pub const SP_SYMMETRY: &str = "sp_symmetry";
pub const UNITARITY: &str = "unitarity";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(n) => write!(f, "{n}"),
            ParamValue::Text(s) => f.write_str(s),
        }
    }
}

/// Named parameters in a fixed order; serialized as a JSON object.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Parameters(Vec<(String, ParamValue)>);

impl Parameters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn int(mut self, name: &str, value: impl Into<i64>) -> Self {
        self.0.push((name.to_string(), ParamValue::Int(value.into())));
        self
    }

    pub fn text(mut self, name: &str, value: impl Into<String>) -> Self {
        self.0.push((name.to_string(), ParamValue::Text(value.into())));
        self
    }

    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &ParamValue)> {
        self.0.iter().map(|(n, v)| (n.as_str(), v))
    }
}

impl Serialize for Parameters {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl fmt::Display for Parameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Value(BigUint),
    /// Only integrality of the computed value is checked.
    Integrality,
    /// The reference value itself could not be computed.
    Unavailable,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Value(v) => write!(f, "{v}"),
            Expected::Integrality => f.write_str("integrality"),
            Expected::Unavailable => f.write_str("unavailable"),
        }
    }
}

impl Serialize for Expected {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn ser_opt_biguint<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => s.collect_str(n),
        None => s.serialize_none(),
    }
}

fn ser_residual<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.collect_str(&format_residual(*r)),
        None => s.serialize_none(),
    }
}

pub fn format_residual(r: f64) -> String {
    format!("{r:.3e}")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteEntry {
    pub check_name: String,
    pub parameters: Parameters,
    pub expected: Expected,
    #[serde(serialize_with = "ser_opt_biguint")]
    pub computed: Option<BigUint>,
    #[serde(serialize_with = "ser_residual")]
    pub residual: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

impl SuiteEntry {
    fn from_outcome(
        check_name: &str,
        parameters: Parameters,
        expected: Expected,
        outcome: Result<(BigUint, f64)>,
        elapsed_ms: u64,
    ) -> Self {
        match outcome {
            Ok((value, residual)) => {
                let pass = match &expected {
                    Expected::Value(e) => *e == value,
                    Expected::Integrality => true,
                    Expected::Unavailable => false,
                };
                SuiteEntry {
                    check_name: check_name.to_string(),
                    parameters,
                    expected,
                    computed: Some(value),
                    residual: Some(residual),
                    pass,
                    error: None,
                    elapsed_ms,
                }
            }
            Err(e) => {
                let (computed, residual) = match &e {
                    Error::Uncertified(r) => (Some(r.value.clone()), Some(r.residual)),
                    _ => (None, None),
                };
                SuiteEntry {
                    check_name: check_name.to_string(),
                    parameters,
                    expected,
                    computed,
                    residual,
                    pass: false,
                    error: Some(e.to_string()),
                    elapsed_ms,
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub entries: Vec<SuiteEntry>,
    pub summary: Summary,
}

impl SuiteReport {
    /// Sorts the entries by check name, then parameters, and recounts.
    pub fn from_entries(mut entries: Vec<SuiteEntry>) -> Self {
        entries.sort_by(|a, b| (&a.check_name, &a.parameters).cmp(&(&b.check_name, &b.parameters)));
        let passed = entries.iter().filter(|e| e.pass).count();
        let summary = Summary {
            total: entries.len(),
            passed,
            failed: entries.len() - passed,
        };
        Self { entries, summary }
    }

    pub fn merge(reports: impl IntoIterator<Item = SuiteReport>) -> Self {
        Self::from_entries(reports.into_iter().flat_map(|r| r.entries).collect())
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// The same report with every `elapsed_ms` zeroed.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            e.elapsed_ms = 0;
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        s.push_str("| check | parameters | expected | computed | residual | pass | ms |\n");
        s.push_str("|---|---|---|---|---|---|---|\n");
        for e in &self.entries {
            let computed = e.computed.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            let residual = e.residual.map(format_residual).unwrap_or_else(|| "-".into());
            let pass = match (&e.error, e.pass) {
                (_, true) => "yes".to_string(),
                (Some(err), false) => format!("no ({err})"),
                (None, false) => "no".to_string(),
            };
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} | {} |",
                e.check_name, e.parameters, e.expected, computed, residual, pass, e.elapsed_ms
            );
        }
        let _ = writeln!(
            s,
            "\n{} checks, {} passed, {} failed",
            self.summary.total, self.summary.passed, self.summary.failed
        );
        s
    }
}

/// Bounds for the full suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub r_max: u32,
    pub genus_max: u32,
    pub sp_max: u32,
    pub sp_genus_max: u32,
    pub types: Vec<Family>,
    pub rank_max: usize,
    pub level_max: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            r_max: 12,
            genus_max: 5,
            sp_max: 4,
            sp_genus_max: 4,
            types: vec![Family::A, Family::B, Family::C, Family::D],
            rank_max: 6,
            level_max: 4,
        }
    }
}

impl SuiteConfig {
    pub fn run(&self) -> Result<SuiteReport> {
        Ok(SuiteReport::merge([
            run_so_identity(self.r_max, self.genus_max)?,
            run_strange_duality_symmetry(self.sp_max, self.sp_max, self.sp_genus_max)?,
            run_unitarity(&self.types, self.rank_max, self.level_max)?,
        ]))
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_millis() as u64)
}

fn value_and_residual(r: Result<VerlindeResult>) -> Result<(BigUint, f64)> {
    r.map(|v| (v.value, v.residual))
}

fn so_params(r: u32, g: u32) -> Parameters {
    Parameters::new().int("r", r).int("g", g)
}

fn oracle_entry(r: u32, g: u32, engine: &Result<VerlindeResult>) -> SuiteEntry {
    let expected = match engine {
        Ok(v) => Expected::Value(v.value.clone()),
        Err(_) => Expected::Unavailable,
    };
    let (outcome, ms) = timed(|| value_and_residual(so_oracle::n_so_oracle(r, g)));
    SuiteEntry::from_outcome(SO_ORACLE, so_params(r, g), expected, outcome, ms)
}

/// `n_so(r, g) = r^g` for `3 ≤ r ≤ r_max`, `1 ≤ g ≤ g_max`, plus an oracle
/// comparison entry for every `r ≥ 5`.
pub fn run_so_identity(r_max: u32, g_max: u32) -> Result<SuiteReport> {
    if r_max < 3 || g_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "so identity needs r_max >= 3 and g_max >= 1, got r_max={r_max}, g_max={g_max}"
        )));
    }
    let configs: Vec<(u32, u32)> = (3..=r_max).flat_map(|r| (1..=g_max).map(move |g| (r, g))).collect();
    let entries = configs
        .par_iter()
        .flat_map_iter(|&(r, g)| {
            let (engine, ms) = timed(|| verlinde::n_so(r, g));
            let mut out = vec![SuiteEntry::from_outcome(
                SO_IDENTITY,
                so_params(r, g),
                Expected::Value(theta_dim(r, g)),
                value_and_residual(engine.clone()),
                ms,
            )];
            if r >= 5 {
                out.push(oracle_entry(r, g, &engine));
            }
            out
        })
        .collect();
    Ok(SuiteReport::from_entries(entries))
}

/// Engine versus u-set oracle for a single SO(r).
pub fn compare_oracle(r: u32, g: u32) -> Result<SuiteReport> {
    so_oracle::so_family(r)?;
    if g == 0 {
        return Err(Error::InvalidGenus(g));
    }
    let engine = verlinde::n_so(r, g);
    Ok(SuiteReport::from_entries(vec![oracle_entry(r, g, &engine)]))
}

/// `n_sp(r, s, g) = n_sp(s, r, g)` for `1 ≤ r ≤ r_max`, `1 ≤ s ≤ s_max`,
/// `1 ≤ g ≤ g_max`.
pub fn run_strange_duality_symmetry(r_max: u32, s_max: u32, g_max: u32) -> Result<SuiteReport> {
    if r_max < 1 || s_max < 1 || g_max < 1 {
        return Err(Error::InvalidArgument(format!(
            "symmetry bounds must be >= 1, got r_max={r_max}, s_max={s_max}, g_max={g_max}"
        )));
    }
    let configs: Vec<(u32, u32, u32)> = (1..=r_max)
        .flat_map(|r| (1..=s_max).flat_map(move |s| (1..=g_max).map(move |g| (r, s, g))))
        .collect();
    let eval = Evaluator::default();
    let entries = configs
        .par_iter()
        .map(|&(r, s, g)| {
            let (outcomes, ms) = timed(|| (eval.n_sp(r, s, g), eval.n_sp(s, r, g)));
            let params = Parameters::new().int("r", r).int("s", s).int("g", g);
            let (lhs, rhs) = outcomes;
            let expected = match &rhs {
                Ok(v) => Expected::Value(v.value.clone()),
                Err(_) => Expected::Unavailable,
            };
            let mut entry = SuiteEntry::from_outcome(SP_SYMMETRY, params, expected, value_and_residual(lhs), ms);
            if let Err(e) = rhs {
                entry.error.get_or_insert_with(|| format!("dual side: {e}"));
            }
            entry
        })
        .collect();
    Ok(SuiteReport::from_entries(entries))
}

/// Closed-form `|T_ℓ|` against the Δ-sum for every type, rank and level in
/// range. Type C has no closed form and only certifies integrality.
pub fn run_unitarity(types: &[Family], rank_max: usize, level_max: u32) -> Result<SuiteReport> {
    let mut configs = Vec::new();
    for &family in types {
        for rank in family.min_rank()..=rank_max {
            for level in 0..=level_max {
                configs.push((family, rank, level));
            }
        }
    }
    let entries = configs
        .par_iter()
        .map(|&(family, rank, level)| {
            let params = Parameters::new()
                .text("type", family.to_string())
                .int("rank", rank as i64)
                .int("level", level);
            let (result, ms) = timed(|| -> Result<(Expected, Result<(BigUint, f64)>)> {
                let rs = RootSystem::build(GroupType::new(family, rank)?);
                let expected = match verlinde::torus_order(&rs, level) {
                    Ok(t) => Expected::Value(t),
                    Err(Error::TorusOrderUnknown(_)) => Expected::Integrality,
                    Err(e) => return Err(e),
                };
                let oracle = verlinde::torus_order_oracle(&rs, level, DEFAULT_PRECISION)
                    .map(|c| (c.value, c.residual));
                Ok((expected, oracle))
            });
            match result {
                Ok((expected, oracle)) => SuiteEntry::from_outcome(UNITARITY, params, expected, oracle, ms),
                Err(e) => SuiteEntry::from_outcome(UNITARITY, params, Expected::Unavailable, Err(e), ms),
            }
        })
        .collect();
    Ok(SuiteReport::from_entries(entries))
}
