//! Experiment configuration: parsing, defaults and validation.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use tfpdo::io::{load_signal, load_symbol};
use tfpdo::{Group, Lattice, Signal, Subgroup, Symbol, Weight};

use crate::error::CliError;

/// Independent random streams derived from the config seed.
pub(crate) const WINDOW_STREAM: u64 = 1;
pub(crate) const SYMBOL_STREAM: u64 = 2;
pub(crate) const PROBE_STREAM: u64 = 3;

pub(crate) fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Identities,
    Frames,
    AlmostDiag,
    Wiener,
    DiscretePeriodic,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Identities => "identities",
            Kind::Frames => "frames",
            Kind::AlmostDiag => "almost-diag",
            Kind::Wiener => "wiener",
            Kind::DiscretePeriodic => "discrete-periodic",
        }
    }

    fn needs_system(self) -> bool {
        matches!(self, Kind::Frames | Kind::AlmostDiag | Kind::Wiener)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    #[serde(default)]
    pub seed: u64,
    pub group: GroupSpec,
    pub lattice: Option<LatticeSpec>,
    pub window: Option<WindowSpec>,
    #[serde(default)]
    pub weight: WeightSpec,
    pub symbol: Option<SymbolSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub moduli: Vec<usize>,
}

/// Either `steps` (position steps then frequency steps) or the two halves.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub steps: Option<Vec<usize>>,
    pub position: Option<Vec<usize>>,
    pub frequency: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    Delta,
    SubgroupIndicator,
    Gaussian,
    Random,
    Csv,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    #[serde(rename = "type")]
    pub kind: WindowKind,
    /// Coordinates of the spike for `delta`.
    pub at: Option<Vec<usize>>,
    /// Subgroup steps for `subgroup-indicator`.
    pub steps: Option<Vec<usize>>,
    pub width: Option<f64>,
    pub path: Option<PathBuf>,
    /// Replace the window by the canonical tight window with bound 1.
    #[serde(default = "yes")]
    pub tight: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    Polynomial,
    Subexponential,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    #[serde(rename = "type")]
    pub kind: WeightKind,
    pub s: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec {
            kind: WeightKind::Polynomial,
            s: Some(0.0),
            a: None,
            b: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolKind {
    Identity,
    Shift,
    Random,
    WellConditioned,
    Csv,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    #[serde(rename = "type")]
    pub kind: SymbolKind,
    /// Phase point `(x, ξ)` as position coordinates followed by frequency
    /// coordinates, for `shift`.
    pub phase: Option<Vec<usize>>,
    /// Rate `c` of the `e^{-c d}` envelope imposed on the spreading function.
    pub decay: Option<f64>,
    /// `‖K_p‖` of the perturbation in `1 + p`, for `well-conditioned`.
    pub strength: Option<f64>,
    pub count: Option<usize>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub identity: f64,
    pub frame: f64,
    pub inverse: f64,
    pub pseudoinverse: f64,
    pub discrete_periodic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-10,
            frame: 1e-10,
            inverse: 1e-10,
            pseudoinverse: 1e-8,
            discrete_periodic: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Directory receiving `report.json` and `envelopes.csv`; defaults to
    /// `<config stem>.out` next to the config file.
    pub dir: Option<PathBuf>,
    /// Export the first symbol as CSV.
    pub symbol_csv: Option<PathBuf>,
    /// Export the window actually used as CSV.
    pub window_csv: Option<PathBuf>,
}

/// A validated experiment with every object constructed.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub name: String,
    pub kind: Kind,
    pub seed: u64,
    pub group: Group,
    pub lattice: Option<Lattice>,
    pub window: Option<Signal>,
    pub tight: bool,
    pub weight_spec: WeightSpec,
    /// Weight on the plane `G x Ĝ` (on `G` itself for `discrete-periodic`).
    pub weight: Weight,
    pub symbols: Vec<Symbol>,
    pub tolerances: Tolerances,
    pub output_dir: PathBuf,
    pub symbol_csv: Option<PathBuf>,
    pub window_csv: Option<PathBuf>,
}

pub fn load(path: &Path) -> Result<Experiment, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let config: ExperimentConfig =
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    config.resolve(&name, base)
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn check_coords(group: &Group, coords: &[usize], what: &str) -> Result<usize, CliError> {
    if coords.len() != group.rank() {
        return Err(bad(format!("{what} needs {} coordinates, got {}", group.rank(), coords.len())));
    }
    if let Some((c, n)) = coords.iter().zip(group.moduli()).find(|(c, n)| *c >= *n) {
        return Err(bad(format!("{what}: coordinate {c} out of range for modulus {n}")));
    }
    Ok(group.index_of(coords))
}

fn positive(value: f64, what: &str) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(bad(format!("{what} must be positive and finite, got {value}")))
    }
}

impl ExperimentConfig {
    pub fn resolve(self, name: &str, base: &Path) -> Result<Experiment, CliError> {
        let group = Group::new(self.group.moduli.clone()).map_err(|e| bad(format!("group: {e}")))?;
        let t = self.tolerances;
        for (what, v) in [
            ("tolerances.identity", t.identity),
            ("tolerances.frame", t.frame),
            ("tolerances.inverse", t.inverse),
            ("tolerances.pseudoinverse", t.pseudoinverse),
            ("tolerances.discrete_periodic", t.discrete_periodic),
        ] {
            positive(v, what)?;
        }
        if self.kind == Kind::DiscretePeriodic && group.rank() != 1 {
            return Err(bad(format!("discrete-periodic needs a single cyclic factor, group has {}", group.rank())));
        }

        let lattice = match (&self.lattice, self.kind.needs_system()) {
            (Some(spec), _) => Some(resolve_lattice(&group, spec)?),
            (None, true) => return Err(bad(format!("kind {} needs a [lattice] section", self.kind.name()))),
            (None, false) => None,
        };
        let (window, tight) = match (&self.window, self.kind.needs_system()) {
            (Some(spec), _) => (Some(resolve_window(&group, spec, self.seed, base)?), spec.tight),
            (None, true) => return Err(bad(format!("kind {} needs a [window] section", self.kind.name()))),
            (None, false) => (None, false),
        };

        let weight_group = if self.kind == Kind::DiscretePeriodic { group.clone() } else { group.phase_space() };
        let weight = resolve_weight(&weight_group, &self.weight)?;

        let default_symbol = SymbolSpec {
            kind: if self.kind == Kind::Wiener { SymbolKind::WellConditioned } else { SymbolKind::Random },
            phase: None,
            decay: None,
            strength: None,
            count: None,
            path: None,
        };
        let symbol_spec = self.symbol.clone().unwrap_or(default_symbol);
        let symbols = resolve_symbols(&group, &symbol_spec, self.seed, base)?;

        let output_dir = match &self.output.dir {
            Some(dir) => base.join(dir),
            None => base.join(format!("{name}.out")),
        };
        Ok(Experiment {
            name: name.to_string(),
            kind: self.kind,
            seed: self.seed,
            group,
            lattice,
            window,
            tight,
            weight_spec: self.weight.clone(),
            weight,
            symbols,
            tolerances: self.tolerances,
            output_dir,
            symbol_csv: self.output.symbol_csv.as_ref().map(|p| base.join(p)),
            window_csv: self.output.window_csv.as_ref().map(|p| base.join(p)),
        })
    }
}

fn resolve_lattice(group: &Group, spec: &LatticeSpec) -> Result<Lattice, CliError> {
    let steps = match (&spec.steps, &spec.position, &spec.frequency) {
        (Some(steps), None, None) => steps.clone(),
        (None, Some(pos), Some(freq)) => {
            if pos.len() != group.rank() || freq.len() != group.rank() {
                return Err(bad(format!("lattice position and frequency need {} steps each", group.rank())));
            }
            pos.iter().chain(freq).copied().collect()
        }
        _ => return Err(bad("lattice needs either `steps` or both `position` and `frequency`")),
    };
    Lattice::new(group.clone(), steps).map_err(|e| bad(format!("lattice: {e}")))
}

fn resolve_window(group: &Group, spec: &WindowSpec, seed: u64, base: &Path) -> Result<Signal, CliError> {
    let window = match spec.kind {
        WindowKind::Delta => {
            let at = match &spec.at {
                Some(coords) => check_coords(group, coords, "window.at")?,
                None => 0,
            };
            Signal::delta(group.clone(), at)
        }
        WindowKind::SubgroupIndicator => {
            let steps = spec.steps.clone().ok_or_else(|| bad("subgroup-indicator window needs `steps`"))?;
            let k = Subgroup::new(group.clone(), steps).map_err(|e| bad(format!("window subgroup: {e}")))?;
            Signal::indicator(&k)
        }
        WindowKind::Gaussian => {
            let width = positive(spec.width.unwrap_or(1.0), "window.width")?;
            Signal::gaussian(group.clone(), width).map_err(|e| bad(e.to_string()))?
        }
        WindowKind::Random => Signal::random(group.clone(), &mut stream(seed, WINDOW_STREAM)),
        WindowKind::Csv => {
            let path = spec.path.as_ref().ok_or_else(|| bad("csv window needs `path`"))?;
            load_signal(group, base.join(path)).map_err(|e| bad(format!("window: {e}")))?
        }
    };
    if window.is_zero() {
        return Err(bad("window is identically zero"));
    }
    Ok(window)
}

fn resolve_weight(group: &Group, spec: &WeightSpec) -> Result<Weight, CliError> {
    let weight = match spec.kind {
        WeightKind::Polynomial => {
            let s = spec.s.ok_or_else(|| bad("polynomial weight needs `s`"))?;
            Weight::polynomial(group.clone(), s)
        }
        WeightKind::Subexponential => {
            let a = spec.a.ok_or_else(|| bad("subexponential weight needs `a`"))?;
            let b = spec.b.ok_or_else(|| bad("subexponential weight needs `b`"))?;
            Weight::subexponential(group.clone(), a, b)
        }
    }
    .map_err(|e| bad(format!("weight: {e}")))?;
    weight.check_admissible().map_err(|e| bad(format!("weight is not admissible: {e}")))?;
    Ok(weight)
}

fn resolve_symbols(group: &Group, spec: &SymbolSpec, seed: u64, base: &Path) -> Result<Vec<Symbol>, CliError> {
    let count = spec.count.unwrap_or(match spec.kind {
        SymbolKind::Random | SymbolKind::WellConditioned => 10,
        _ => 1,
    });
    if count == 0 {
        return Err(bad("symbol.count must be at least 1"));
    }
    let decay = spec.decay.unwrap_or(0.3);
    if !(decay.is_finite() && decay >= 0.0) {
        return Err(bad(format!("symbol.decay must be non-negative, got {decay}")));
    }
    let mut rng = stream(seed, SYMBOL_STREAM);
    let single = |s: Symbol| vec![s; count];
    Ok(match spec.kind {
        SymbolKind::Identity => single(Symbol::identity(group.clone())),
        SymbolKind::Shift => {
            let coords = spec.phase.as_ref().ok_or_else(|| bad("shift symbol needs `phase`"))?;
            let phase = group.phase_space();
            let p = check_coords(&phase, coords, "symbol.phase")?;
            single(Symbol::time_frequency_shift(group.clone(), p))
        }
        SymbolKind::Random => (0..count).map(|_| Symbol::random_decaying(group.clone(), decay, &mut rng)).collect(),
        SymbolKind::WellConditioned => {
            let strength = spec.strength.unwrap_or(0.5);
            if !(strength.is_finite() && (0.0..1.0).contains(&strength)) {
                return Err(bad(format!("symbol.strength must lie in [0, 1), got {strength}")));
            }
            (0..count)
                .map(|_| Symbol::random_well_conditioned(group.clone(), decay, strength, &mut rng))
                .collect()
        }
        SymbolKind::Csv => {
            let path = spec.path.as_ref().ok_or_else(|| bad("csv symbol needs `path`"))?;
            single(load_symbol(group, base.join(path)).map_err(|e| bad(format!("symbol: {e}")))?)
        }
    })
}
