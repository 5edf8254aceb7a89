//! Planning, execution and report emission.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::checks::{CheckDef, CheckOutcome, Params, SpectrumRow};
use crate::config::{Config, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::scenarios::{builtin, Registered, ScenarioDef};

/// How far a config may loosen a default tolerance without `--force`.
pub const LOOSEN_LIMIT: f64 = 10.0;
const MIN_MODES: usize = 8;

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub modes: Option<usize>,
    pub buffer: Option<usize>,
    pub force: bool,
}

pub struct Plan {
    pub label: String,
    pub scenario: &'static ScenarioDef,
    pub params: Params,
    pub checks: Vec<(&'static CheckDef, Option<f64>)>,
}

/// Resolves a scenario name against the built-ins and the registry.
pub fn config_for(name: &str, registry: &[Registered]) -> CliResult<Config> {
    if builtin(name).is_some() {
        return Ok(Config::for_scenario(name));
    }
    registry
        .iter()
        .find(|r| r.name == name)
        .map(|r| r.config.clone())
        .ok_or_else(|| CliError::UnknownScenario(name.to_string()))
}

pub fn plan(config: &Config, opts: &RunOptions) -> CliResult<Plan> {
    let scenario = builtin(&config.scenario).ok_or_else(|| CliError::UnknownScenario(config.scenario.clone()))?;
    let d = scenario.defaults;
    let o = &config.params;
    let params = Params {
        n: o.n.unwrap_or(d.n),
        m: o.m.unwrap_or(d.m),
        modes: opts.modes.or(o.modes).unwrap_or(d.modes),
        buffer: opts.buffer.or(o.buffer).unwrap_or(d.buffer),
    };
    if params.n == 0 || params.m == 0 {
        return Err(CliError::Param("n and m must be positive".into()));
    }
    if params.modes < MIN_MODES {
        return Err(CliError::Param(format!("modes must be at least {MIN_MODES}")));
    }
    if 2 * params.buffer >= params.modes {
        return Err(CliError::Param(format!(
            "buffer {} leaves no interior band at {} modes",
            params.buffer, params.modes
        )));
    }

    for (key, &given) in &config.tolerances {
        let def = scenario.check(key).ok_or_else(|| CliError::UnknownCheck {
            scenario: scenario.name.to_string(),
            check: key.clone(),
            index: 0,
        })?;
        let default = def.default_tolerance.ok_or_else(|| CliError::ExactCheck(key.clone()))?;
        if !(given.is_finite() && given > 0.0) {
            return Err(CliError::Param(format!("tolerance for '{key}' must be positive")));
        }
        if given > LOOSEN_LIMIT * default && !opts.force {
            return Err(CliError::LooseTolerance {
                check: key.clone(),
                given,
                default,
            });
        }
    }

    let names: Vec<&str> = match &config.checks {
        Some(list) => list.iter().map(String::as_str).collect(),
        None => scenario.checks.iter().map(|c| c.name).collect(),
    };
    let mut checks = Vec::new();
    for (index, name) in names.iter().enumerate() {
        let def = scenario.check(name).ok_or_else(|| CliError::UnknownCheck {
            scenario: scenario.name.to_string(),
            check: name.to_string(),
            index,
        })?;
        checks.push((def, config.tolerances.get(*name).copied()));
    }
    Ok(Plan {
        label: config.name.clone().unwrap_or_else(|| scenario.name.to_string()),
        scenario,
        params,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub scenario: String,
    pub base_scenario: String,
    pub params: Params,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

pub struct RunOutput {
    pub report: Report,
    pub spectra: Vec<SpectrumRow>,
}

/// Runs the checks in order. A check that errors is recorded as failed.
pub fn execute(plan: &Plan) -> RunOutput {
    let mut outcomes = Vec::new();
    let mut spectra = Vec::new();
    for (def, tol) in &plan.checks {
        let out = def.execute(&plan.params, *tol).unwrap_or_else(|e| CheckOutcome {
            check: def.name.to_string(),
            passed: false,
            measured: None,
            tolerance: tol.or(def.default_tolerance),
            detail: format!("error: {e}"),
            spectra: Vec::new(),
        });
        spectra.extend(out.spectra.iter().cloned());
        outcomes.push(out);
    }
    RunOutput {
        report: Report {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            scenario: plan.label.clone(),
            base_scenario: plan.scenario.name.to_string(),
            params: plan.params,
            passed: outcomes.iter().all(|o| o.passed),
            checks: outcomes,
        },
        spectra,
    }
}

pub fn summary_markdown(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {}\n", r.scenario);
    let p = &r.params;
    let _ = writeln!(
        s,
        "Base scenario `{}`, N = {}, m = {}, modes = {}, buffer = {}.\n",
        r.base_scenario, p.n, p.m, p.modes, p.buffer
    );
    if r.checks.is_empty() {
        let _ = writeln!(s, "No checks requested.");
        return s;
    }
    let _ = writeln!(s, "| check | result | measured | tolerance | detail |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    for c in &r.checks {
        let num = |v: Option<f64>| v.map(|x| format!("{x:.3e}")).unwrap_or_else(|| "exact".into());
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} |",
            c.check,
            if c.passed { "pass" } else { "FAIL" },
            num(c.measured),
            num(c.tolerance),
            c.detail.replace('|', "\\|")
        );
    }
    let failed = r.checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(s, "\n{} of {} checks passed.", r.checks.len() - failed, r.checks.len());
    s
}

pub fn write_outputs(dir: &Path, out: &RunOutput) -> CliResult<()> {
    std::fs::create_dir_all(dir)?;
    let mut json = serde_json::to_string_pretty(&out.report).expect("report serializes");
    json.push('\n');
    std::fs::write(dir.join("report.json"), json)?;
    let mut w = csv::Writer::from_path(dir.join("spectra.csv")).map_err(|e| CliError::Io(e.into()))?;
    if out.spectra.is_empty() {
        w.write_record(["check", "side", "index", "eigenvalue"]).map_err(|e| CliError::Io(e.into()))?;
    }
    for row in &out.spectra {
        w.serialize(row).map_err(|e| CliError::Io(e.into()))?;
    }
    w.flush()?;
    std::fs::write(dir.join("summary.md"), summary_markdown(&out.report))?;
    Ok(())
}
