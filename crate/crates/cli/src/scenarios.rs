//! Built-in scenarios and the user registry.

use std::path::{Path, PathBuf};

use crate::checks::{self, CheckDef, Params};
use crate::config::Config;
use crate::error::{CliError, CliResult};

pub struct ScenarioDef {
    pub name: &'static str,
    pub description: &'static str,
    pub defaults: Params,
    pub checks: &'static [CheckDef],
}

impl ScenarioDef {
    pub fn check(&self, name: &str) -> Option<&CheckDef> {
        self.checks.iter().find(|c| c.name == name)
    }
}

macro_rules! check {
    ($name:literal, $desc:literal, $tol:expr, $f:path) => {
        CheckDef {
            name: $name,
            description: $desc,
            default_tolerance: $tol,
            run: $f,
        }
    };
}

const A2_CHECKS: &[CheckDef] = &[
    check!("bitorsor-axioms", "discretized circle bitorsor valid, mutated table rejected", None, checks::bitorsor_axioms),
    check!("fibre-census", "α-fibre blocks have isotropy-rank size", None, checks::fibre_census),
    check!("weak-equivalence", "both legs of the weak-equivalence pair", None, checks::weak_equivalence),
    check!("induced-sign-cocycle", "induced sign cocycle is a cocycle", None, checks::induced_sign_cocycle),
    check!("composition-round-trip", "φ∘φ⁻¹ is 2-isomorphic to the identity", None, checks::composition_round_trip),
];

const ROTATION_CHECKS: &[CheckDef] = &[
    check!("quotient-spectrum", "invariant spectrum equals the quotient spectrum", Some(1e-9), checks::quotient_spectrum),
    check!("quotient-triple", "invariant triple is unitarily the quotient triple", Some(1e-10), checks::quotient_triple),
    check!("spin-structures", "tangent cocycles agree and spin lifts biject", None, checks::spin_structures),
    check!("orbifold-volume", "∫1 equals 2π/m", Some(1e-10), checks::orbifold_volume),
    check!("divergence", "D is symmetric on invariant spinors", Some(1e-10), checks::divergence),
];

const PILLOWCASE_CHECKS: &[CheckDef] = &[
    check!("chirality", "ω² = 1 and {ω, D} = 0", Some(1e-12), checks::chirality),
    check!("representation-chirality", "[ω, π(f)] = 0 for all generators", Some(1e-12), checks::representation_chirality),
    check!("growth-exponent", "eigenvalue counting exponent near 2", Some(0.15), checks::growth_exponent),
    check!("divergence", "D is symmetric on invariant spinors", Some(1e-10), checks::pillowcase_divergence),
];

const NONEFFECTIVE_CHECKS: &[CheckDef] = &[
    check!("effectiveness", "two elements share a germ", None, checks::effectiveness),
    check!("faithfulness", "convolution representation has a kernel", None, checks::faithfulness),
    check!("orbifold-volume", "∫1 equals π", Some(1e-10), checks::noneffective_volume),
];

const CECH_CHECKS: &[CheckDef] = &[
    check!("cech-bitorsor", "canonical Čech bitorsor is valid", None, checks::cech_bitorsor_valid),
    check!("localized-bitorsor", "localized bitorsor is valid and recovers φ", None, checks::localized_bitorsor),
    check!("cech-orbits", "Čech groupoids keep the orbit count", None, checks::cech_orbits),
];

const TRANSPORT_CHECKS: &[CheckDef] = &[
    check!("section-independence", "section families give cohomologous cocycles", None, checks::section_independence),
    check!("finite-transport", "finite transport round trips and module law", None, checks::finite_transport),
    check!("circle-transport", "Fourier transport round trips and module law", Some(1e-10), checks::circle_transport),
];

const fn params(n: usize, m: usize, modes: usize, buffer: usize) -> Params {
    Params { n, m, modes, buffer }
}

pub static BUILTINS: &[ScenarioDef] = &[
    ScenarioDef {
        name: "a2-example",
        description: "Discretized circle bitorsor between Z2 and Z2N⋉ZN",
        defaults: params(3, 2, 16, 2),
        checks: A2_CHECKS,
    },
    ScenarioDef {
        name: "free-rotation-circle",
        description: "Free Zm rotation of the circle against the quotient circle",
        defaults: params(3, 2, 32, 2),
        checks: ROTATION_CHECKS,
    },
    ScenarioDef {
        name: "pillowcase-torus",
        description: "Z2 negation on the flat torus: even spectral triple",
        defaults: params(3, 2, 24, 2),
        checks: PILLOWCASE_CHECKS,
    },
    ScenarioDef {
        name: "noneffective-circle",
        description: "Z4 acting through Z2 on the circle: not effective, not faithful",
        defaults: params(3, 4, 16, 2),
        checks: NONEFFECTIVE_CHECKS,
    },
    ScenarioDef {
        name: "cech-localization",
        description: "Čech groupoids and localized bitorsors of the a2 example",
        defaults: params(3, 2, 16, 2),
        checks: CECH_CHECKS,
    },
    ScenarioDef {
        name: "cocycle-transport",
        description: "Induced cocycles and transport of invariant data",
        defaults: params(3, 2, 32, 2),
        checks: TRANSPORT_CHECKS,
    },
];

pub fn builtin(name: &str) -> Option<&'static ScenarioDef> {
    BUILTINS.iter().find(|s| s.name == name)
}

/// A scenario defined by a JSON file in a registry directory.
#[derive(Debug, Clone)]
pub struct Registered {
    pub path: PathBuf,
    pub name: String,
    pub description: String,
    pub config: Config,
}

/// Loads every `*.json` file in `dir`, in file-name order.
pub fn load_registry(dir: &Path) -> CliResult<Vec<Registered>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Registry {
            path: dir.to_path_buf(),
            message: e.to_string(),
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut out: Vec<Registered> = Vec::new();
    for path in paths {
        let bad = |message: String| CliError::Registry {
            path: path.clone(),
            message,
        };
        let config = Config::load(&path).map_err(|e| bad(e.to_string()))?;
        let name = config.name.clone().ok_or_else(|| bad("missing field name".into()))?;
        if builtin(&name).is_some() || out.iter().any(|r| r.name == name) {
            return Err(bad(format!("scenario '{name}' is already defined")));
        }
        if builtin(&config.scenario).is_none() {
            return Err(bad(format!("unknown base scenario '{}'", config.scenario)));
        }
        out.push(Registered {
            description: config.description.clone().unwrap_or_else(|| format!("based on {}", config.scenario)),
            path,
            name,
            config,
        });
    }
    Ok(out)
}

/// `(name, description)` for built-ins followed by registered scenarios.
pub fn list_scenarios(registry: &[Registered]) -> Vec<(String, String)> {
    BUILTINS
        .iter()
        .map(|s| (s.name.to_string(), s.description.to_string()))
        .chain(registry.iter().map(|r| (r.name.clone(), r.description.clone())))
        .collect()
}
