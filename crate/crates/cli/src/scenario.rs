//! Scenario resolution and execution: configuration checking, grid scans
//! over (alpha, mu, tau), and assembly of the emitted tables in a
//! deterministic order regardless of worker scheduling.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uqsl_core::channels::{
    amplitude_damping, channel_speed_bound, evolve_channel, AmplitudeDampingParams,
};
use uqsl_core::entropy::{spectrum_alpha_purity, spectrum_unified_entropy, EntropyParams};
use uqsl_core::linalg::linspace;
use uqsl_core::manybody::{variance_qfi_chain, SpinChainConfig, XxzEvolution};
use uqsl_core::nonhermitian::{
    evolve_nonhermitian, nh_speed_bound, split_hermitian, NonHermitianHamiltonian, PTQubitParams,
};
use uqsl_core::qsl::{normalize_series, prefix_series_from_spectra, KAPPA_FLOOR};
use uqsl_core::random::random_density;
use uqsl_core::{BlochParams, ComplexMatrix, DensityMatrix};

use crate::config::Config;
use crate::kraus::SampledChannel;
use crate::output::{sha256_hex, write_output, Cell, Table};
use crate::CliError;

const EMISSION_NAMES: [&str; 5] = [
    "qsl",
    "delta",
    "delta_normalized",
    "kappa_min",
    "entropy_series",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emission {
    Qsl,
    Delta,
    DeltaNormalized,
    KappaMin,
    EntropySeries,
}

impl Emission {
    fn from_name(name: &str) -> Result<Self, CliError> {
        match name {
            "qsl" => Ok(Self::Qsl),
            "delta" => Ok(Self::Delta),
            "delta_normalized" => Ok(Self::DeltaNormalized),
            "kappa_min" => Ok(Self::KappaMin),
            "entropy_series" => Ok(Self::EntropySeries),
            other => Err(CliError::Config(format!(
                "emit: unknown quantity `{other}` (expected one of {})",
                EMISSION_NAMES.join(", ")
            ))),
        }
    }

    fn file_stem(self) -> &'static str {
        match self {
            Self::Qsl => "qsl",
            Self::Delta => "delta",
            Self::DeltaNormalized => "delta_normalized",
            Self::KappaMin => "kappa_min",
            Self::EntropySeries => "entropy_series",
        }
    }
}

pub enum Scenario {
    AmplitudeDamping {
        gamma: f64,
        bloch: BlochParams,
    },
    PtQubit {
        varpi: f64,
        ratios: Vec<f64>,
        bloch: BlochParams,
    },
    Xxz {
        sizes: Vec<usize>,
        j: f64,
        delta: f64,
        p: f64,
        l_a: usize,
    },
    PhaseDiagram {
        n_states: usize,
        dim: usize,
        seed: u64,
    },
    CustomChannel {
        channel: SampledChannel,
        rho0: DensityMatrix,
        kraus_checksum: String,
    },
    CustomNonHermitian {
        hamiltonian: NonHermitianHamiltonian,
        rho0: DensityMatrix,
    },
}

impl Scenario {
    fn name(&self) -> &'static str {
        match self {
            Self::AmplitudeDamping { .. } => "amplitude_damping",
            Self::PtQubit { .. } => "pt_qubit",
            Self::Xxz { .. } => "xxz",
            Self::PhaseDiagram { .. } => "phase_diagram",
            Self::CustomChannel { .. } => "custom_channel",
            Self::CustomNonHermitian { .. } => "custom_nonhermitian",
        }
    }
}

pub struct ResolvedConfig {
    raw: Config,
    scenario: Scenario,
    out: PathBuf,
    alphas: Vec<f64>,
    mus: Vec<f64>,
    t_max: f64,
    n_points: usize,
    emit: Vec<Emission>,
    strict: bool,
}

fn bloch_from(cfg: &Config, prefix: &str) -> Result<BlochParams, CliError> {
    let r = cfg.require_f64(&format!("{prefix}.bloch.r"))?;
    let theta = cfg.require_f64(&format!("{prefix}.bloch.theta"))?;
    let phi = cfg.require_f64(&format!("{prefix}.bloch.phi"))?;
    BlochParams::new(r, theta, phi).map_err(|e| CliError::Config(format!("{prefix}.bloch: {e}")))
}

fn rho0_from(cfg: &Config, prefix: &str, dim: usize) -> Result<DensityMatrix, CliError> {
    let rho_key = format!("{prefix}.rho0");
    if let Some(entries) = cfg.get_complex_list(&rho_key)? {
        if entries.len() != dim * dim {
            return Err(CliError::Config(format!(
                "{rho_key}: expected {} entries for a {dim}x{dim} state, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let matrix = ComplexMatrix::new(dim, dim, entries)
            .map_err(|e| CliError::Config(format!("{rho_key}: {e}")))?;
        return DensityMatrix::validate(matrix)
            .map_err(|e| CliError::Config(format!("{rho_key}: {e}")));
    }
    if dim == 2 && cfg.get(&format!("{prefix}.bloch.r")).is_some() {
        return Ok(DensityMatrix::from_bloch(&bloch_from(cfg, prefix)?));
    }
    Err(CliError::Config(format!(
        "scenario {prefix}: provide `{rho_key}` (row-major complex entries){}",
        if dim == 2 {
            " or `.bloch.r/theta/phi`"
        } else {
            ""
        }
    )))
}

const TOP_LEVEL_KEYS: [&str; 8] = [
    "scenario", "out", "alpha", "mu", "t_max", "n_points", "emit", "strict",
];
const SCENARIO_PREFIXES: [&str; 6] = [
    "amplitude_damping.",
    "pt_qubit.",
    "xxz.",
    "phase_diagram.",
    "custom_channel.",
    "custom_nonhermitian.",
];

impl ResolvedConfig {
    pub fn resolve(raw: Config) -> Result<Self, CliError> {
        // reject typos early: every key must be a common key or belong to a
        // known scenario namespace (files may carry keys for scenarios other
        // than the selected one, so they stay switchable via overrides)
        for (key, _) in raw.config_keys() {
            let known = TOP_LEVEL_KEYS.contains(&key)
                || SCENARIO_PREFIXES.iter().any(|p| key.starts_with(p));
            if !known {
                return Err(CliError::Config(format!("unknown key `{key}`")));
            }
        }
        let scenario_name = raw.require("scenario")?.to_string();
        let out = PathBuf::from(raw.require("out")?);

        let alphas = raw
            .get_f64_list("alpha")?
            .ok_or_else(|| CliError::Config("missing required key `alpha`".into()))?;
        let mus = raw
            .get_f64_list("mu")?
            .ok_or_else(|| CliError::Config("missing required key `mu`".into()))?;
        if alphas.is_empty() {
            return Err(CliError::Config("alpha: the grid must be nonempty".into()));
        }
        if mus.is_empty() {
            return Err(CliError::Config("mu: the grid must be nonempty".into()));
        }

        let t_max = raw.get_f64("t_max")?.unwrap_or(5.0);
        let n_points = raw.get_usize("n_points")?.unwrap_or(501);
        if n_points < 2 {
            return Err(CliError::Config(format!(
                "n_points: need at least 2, got {n_points}"
            )));
        }
        if !t_max.is_finite() || t_max <= 0.0 {
            return Err(CliError::Config(format!(
                "t_max: must be positive, got {t_max}"
            )));
        }
        let strict = raw.get_bool("strict")?.unwrap_or(false);
        let emit: Vec<Emission> = match raw.get_string_list("emit") {
            Some(names) => names
                .iter()
                .map(|n| Emission::from_name(n))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![Emission::Qsl, Emission::Delta, Emission::DeltaNormalized],
        };

        let dynamic = scenario_name.as_str() != "phase_diagram";
        if dynamic {
            for &a in &alphas {
                if !(a > 0.0 && a < 1.0) {
                    return Err(CliError::Config(format!(
                        "alpha: bound scans need values in (0,1), got {a}"
                    )));
                }
            }
            for &m in &mus {
                if !(0.0..=1.0).contains(&m) {
                    return Err(CliError::Config(format!(
                        "mu: bound scans need values in [0,1], got {m}"
                    )));
                }
            }
        } else {
            for &a in &alphas {
                if !a.is_finite() || a <= 0.0 {
                    return Err(CliError::Config(format!(
                        "alpha: must be positive, got {a}"
                    )));
                }
            }
        }

        let scenario = match scenario_name.as_str() {
            "amplitude_damping" => {
                let gamma = raw.require_f64("amplitude_damping.gamma")?;
                let bloch = bloch_from(&raw, "amplitude_damping")?;
                AmplitudeDampingParams::new(gamma, bloch)
                    .map_err(|e| CliError::Config(format!("amplitude_damping.gamma: {e}")))?;
                Scenario::AmplitudeDamping { gamma, bloch }
            }
            "pt_qubit" => {
                let varpi = raw.require_f64("pt_qubit.varpi")?;
                let ratios = raw
                    .get_f64_list("pt_qubit.eta_over_varpi")?
                    .ok_or_else(|| {
                        CliError::Config("missing required key `pt_qubit.eta_over_varpi`".into())
                    })?;
                let bloch = bloch_from(&raw, "pt_qubit")?;
                for &ratio in &ratios {
                    PTQubitParams::new(varpi, ratio * varpi.abs(), bloch)
                        .map_err(|e| CliError::Config(format!("pt_qubit: {e}")))?;
                }
                Scenario::PtQubit {
                    varpi,
                    ratios,
                    bloch,
                }
            }
            "xxz" => {
                let sizes = raw
                    .get_usize_list("xxz.l")?
                    .ok_or_else(|| CliError::Config("missing required key `xxz.l`".into()))?;
                let j = raw.require_f64("xxz.j")?;
                let delta = raw.require_f64("xxz.delta")?;
                let p = raw.require_f64("xxz.p")?;
                let l_a = raw
                    .get_usize("xxz.l_a")?
                    .ok_or_else(|| CliError::Config("missing required key `xxz.l_a`".into()))?;
                for &l in &sizes {
                    SpinChainConfig::new(l, j, delta, p, l_a)
                        .map_err(|e| CliError::Config(format!("xxz: {e}")))?;
                }
                Scenario::Xxz {
                    sizes,
                    j,
                    delta,
                    p,
                    l_a,
                }
            }
            "phase_diagram" => {
                let n_states = raw.get_usize("phase_diagram.n_states")?.unwrap_or(200);
                let dim = raw.get_usize("phase_diagram.dim")?.unwrap_or(2);
                let seed = raw.get_usize("phase_diagram.seed")?.unwrap_or(7) as u64;
                if n_states == 0 {
                    return Err(CliError::Config(
                        "phase_diagram.n_states: must be positive".into(),
                    ));
                }
                if dim < 2 {
                    return Err(CliError::Config("phase_diagram.dim: need dim >= 2".into()));
                }
                Scenario::PhaseDiagram {
                    n_states,
                    dim,
                    seed,
                }
            }
            "custom_channel" => {
                let dim = raw.get_usize("custom_channel.dim")?.unwrap_or(2);
                let path = raw.require("custom_channel.kraus_file")?;
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!(
                        "custom_channel.kraus_file: cannot read {path}: {e}"
                    ))
                })?;
                let kraus_checksum = sha256_hex(text.as_bytes());
                let channel = SampledChannel::parse(&text, dim)?;
                let rho0 = rho0_from(&raw, "custom_channel", dim)?;
                Scenario::CustomChannel {
                    channel,
                    rho0,
                    kraus_checksum,
                }
            }
            "custom_nonhermitian" => {
                let dim = raw.get_usize("custom_nonhermitian.dim")?.unwrap_or(2);
                let entries = raw
                    .get_complex_list("custom_nonhermitian.h_tilde")?
                    .ok_or_else(|| {
                        CliError::Config(
                            "missing required key `custom_nonhermitian.h_tilde`".into(),
                        )
                    })?;
                if entries.len() != dim * dim {
                    return Err(CliError::Config(format!(
                        "custom_nonhermitian.h_tilde: expected {} entries, got {}",
                        dim * dim,
                        entries.len()
                    )));
                }
                let h_tilde = ComplexMatrix::new(dim, dim, entries)
                    .map_err(|e| CliError::Config(format!("custom_nonhermitian.h_tilde: {e}")))?;
                let hamiltonian = split_hermitian(h_tilde)
                    .map_err(|e| CliError::Config(format!("custom_nonhermitian.h_tilde: {e}")))?;
                let rho0 = rho0_from(&raw, "custom_nonhermitian", dim)?;
                Scenario::CustomNonHermitian { hamiltonian, rho0 }
            }
            other => {
                return Err(CliError::Config(format!(
                    "scenario: unknown scenario `{other}` (run `uqsl list-scenarios`)"
                )));
            }
        };

        Ok(Self {
            raw,
            scenario,
            out,
            alphas,
            mus,
            t_max,
            n_points,
            emit,
            strict,
        })
    }

    pub fn out_dir(&self) -> &Path {
        &self.out
    }

    pub fn render(&self) -> String {
        self.raw.render()
    }

    pub fn scenario_name(&self) -> &'static str {
        self.scenario.name()
    }

    /// Executes the scenario inside a worker pool of the requested width and
    /// writes CSVs plus the run manifest.
    pub fn run(&self, threads: Option<usize>) -> Result<RunSummary, CliError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.unwrap_or(0))
            .build()
            .map_err(|e| CliError::Config(format!("threads: {e}")))?;
        let start = Instant::now();
        let tables = pool.install(|| self.compute_tables())?;

        if self.strict {
            if let Some(variant) = tables.iter().find(|t| t.loose) {
                return Err(CliError::Numeric(format!(
                    "kappa_min dipped below the {KAPPA_FLOOR:.0e} floor in `{}` and strict mode is on",
                    variant.name
                )));
            }
        }

        let mut files = Vec::new();
        for table in &tables {
            let contents = table.table.render();
            let (_, checksum) = write_output(&self.out, &table.name, &contents)?;
            files.push((table.name.clone(), checksum));
        }

        let mut manifest_text = String::from("# uqsl run manifest\n");
        manifest_text.push_str(&self.raw.render());
        manifest_text.push_str(&format!(
            "run.library_version = {}\nrun.scenario = {}\nrun.threads = {}\nrun.wall_time_s = {:.3}\n",
            env!("CARGO_PKG_VERSION"),
            self.scenario.name(),
            threads.unwrap_or(0),
            start.elapsed().as_secs_f64(),
        ));
        if let Scenario::CustomChannel { kraus_checksum, .. } = &self.scenario {
            manifest_text.push_str(&format!(
                "run.input_checksum.kraus_file = {kraus_checksum}\n"
            ));
        }
        for (name, checksum) in &files {
            manifest_text.push_str(&format!("result.checksums.{name} = {checksum}\n"));
        }
        write_output(&self.out, "manifest.txt", &manifest_text)?;

        Ok(RunSummary {
            files,
            loose: tables.iter().any(|t| t.loose),
        })
    }

    fn compute_tables(&self) -> Result<Vec<NamedTable>, CliError> {
        match &self.scenario {
            Scenario::PhaseDiagram {
                n_states,
                dim,
                seed,
            } => self.phase_diagram_tables(*n_states, *dim, *seed),
            _ => {
                let variants = self.build_variants()?;
                let mut tables = Vec::new();
                for variant in &variants {
                    tables.extend(self.variant_tables(variant)?);
                }
                Ok(tables)
            }
        }
    }

    fn build_variants(&self) -> Result<Vec<VariantData>, CliError> {
        let times = linspace(0.0, self.t_max, self.n_points);
        match &self.scenario {
            Scenario::AmplitudeDamping { gamma, bloch } => {
                let params = AmplitudeDampingParams::new(*gamma, *bloch)
                    .map_err(|e| CliError::Numeric(e.to_string()))?;
                let channel = amplitude_damping(&params);
                let rho0 = params.initial_state();
                let samples: Result<Vec<_>, CliError> = times
                    .par_iter()
                    .map(|&t| {
                        let state = evolve_channel(&channel, &rho0, t)?;
                        let weight = channel_speed_bound(&channel, &rho0, t)?;
                        Ok((state.eigenvalues(), weight))
                    })
                    .collect();
                Ok(vec![VariantData::from_samples(
                    String::new(),
                    times,
                    samples?,
                )])
            }
            Scenario::PtQubit {
                varpi,
                ratios,
                bloch,
            } => {
                let mut variants = Vec::new();
                for &ratio in ratios {
                    let params = PTQubitParams::new(*varpi, ratio * varpi.abs(), *bloch)
                        .map_err(|e| CliError::Numeric(e.to_string()))?;
                    let nh = params.hamiltonian();
                    let rho0 = params.initial_state();
                    let bound = nh_speed_bound(&nh);
                    let samples: Result<Vec<_>, CliError> = times
                        .par_iter()
                        .map(|&t| {
                            let state = evolve_nonhermitian(&nh, &rho0, t)?;
                            Ok((state.eigenvalues(), bound))
                        })
                        .collect();
                    variants.push(VariantData::from_samples(
                        format!("_ratio{ratio}"),
                        times.clone(),
                        samples?,
                    ));
                }
                Ok(variants)
            }
            Scenario::Xxz {
                sizes,
                j,
                delta,
                p,
                l_a,
            } => {
                let mut variants = Vec::new();
                for &l in sizes {
                    let cfg = SpinChainConfig::new(l, *j, *delta, *p, *l_a)
                        .map_err(|e| CliError::Numeric(e.to_string()))?;
                    let chain =
                        variance_qfi_chain(&cfg).map_err(|e| CliError::Numeric(e.to_string()))?;
                    let weight = 2.0 * chain.variance.max(0.0).sqrt();
                    let evolution =
                        XxzEvolution::new(cfg).map_err(|e| CliError::Numeric(e.to_string()))?;
                    let samples: Result<Vec<_>, CliError> = times
                        .par_iter()
                        .map(|&t| {
                            let state = evolution
                                .reduced_at(t)
                                .map_err(|e| CliError::Numeric(e.to_string()))?;
                            Ok((state.eigenvalues(), weight))
                        })
                        .collect();
                    variants.push(VariantData::from_samples(
                        format!("_L{l}"),
                        times.clone(),
                        samples?,
                    ));
                }
                Ok(variants)
            }
            Scenario::CustomChannel { channel, rho0, .. } => {
                let times = channel.times().to_vec();
                let samples: Result<Vec<_>, CliError> = times
                    .par_iter()
                    .map(|&t| {
                        let state = evolve_channel(channel, rho0, t)?;
                        let weight = channel_speed_bound(channel, rho0, t)?;
                        Ok((state.eigenvalues(), weight))
                    })
                    .collect();
                Ok(vec![VariantData::from_samples(
                    String::new(),
                    times,
                    samples?,
                )])
            }
            Scenario::CustomNonHermitian { hamiltonian, rho0 } => {
                let bound = nh_speed_bound(hamiltonian);
                let samples: Result<Vec<_>, CliError> = times
                    .par_iter()
                    .map(|&t| {
                        let state = evolve_nonhermitian(hamiltonian, rho0, t)?;
                        Ok((state.eigenvalues(), bound))
                    })
                    .collect();
                Ok(vec![VariantData::from_samples(
                    String::new(),
                    times,
                    samples?,
                )])
            }
            Scenario::PhaseDiagram { .. } => unreachable!("handled by compute_tables"),
        }
    }

    fn variant_tables(&self, variant: &VariantData) -> Result<Vec<NamedTable>, CliError> {
        let pairs: Vec<(f64, f64)> = self
            .alphas
            .iter()
            .flat_map(|&a| self.mus.iter().map(move |&m| (a, m)))
            .collect();
        let series: Result<Vec<_>, CliError> = pairs
            .par_iter()
            .map(|&(alpha, mu)| {
                let params = EntropyParams::for_scan(alpha, mu)
                    .map_err(|e| CliError::Numeric(e.to_string()))?;
                let prefix = prefix_series_from_spectra(
                    &variant.times,
                    &variant.spectra,
                    &variant.weights,
                    &params,
                )
                .map_err(|e| CliError::Numeric(e.to_string()))?;
                let entropies: Vec<f64> = variant
                    .spectra
                    .iter()
                    .map(|s| spectrum_unified_entropy(s, &params))
                    .collect();
                let purities: Vec<f64> = variant
                    .spectra
                    .iter()
                    .map(|s| spectrum_alpha_purity(s, alpha))
                    .collect();
                Ok(((alpha, mu), prefix, entropies, purities))
            })
            .collect();
        let series = series?;
        let loose = series
            .iter()
            .any(|(_, prefix, _, _)| prefix.loose.last().copied().unwrap_or(false));

        let mut tables = Vec::new();
        for emission in &self.emit {
            let name = format!("{}{}.csv", emission.file_stem(), variant.suffix);
            let table = match emission {
                Emission::Qsl => {
                    let mut t = Table::new(vec!["alpha", "mu", "tau", "tau_qsl", "flag_loose"]);
                    for ((alpha, mu), prefix, _, _) in &series {
                        for k in 0..variant.times.len() {
                            t.push(vec![
                                Cell::Number(*alpha),
                                Cell::Number(*mu),
                                Cell::Number(variant.times[k]),
                                Cell::Number(prefix.tau_qsl(k)),
                                Cell::Integer(prefix.loose[k] as u64),
                            ]);
                        }
                    }
                    t
                }
                Emission::Delta => {
                    let mut t = Table::new(vec![
                        "alpha",
                        "mu",
                        "tau",
                        "delta",
                        "flag_loose",
                        "flag_undefined",
                    ]);
                    for ((alpha, mu), prefix, _, _) in &series {
                        for k in 0..variant.times.len() {
                            let delta = prefix.delta(k);
                            t.push(vec![
                                Cell::Number(*alpha),
                                Cell::Number(*mu),
                                Cell::Number(variant.times[k]),
                                delta.map_or(Cell::Empty, Cell::Number),
                                Cell::Integer(prefix.loose[k] as u64),
                                Cell::Integer(delta.is_none() as u64),
                            ]);
                        }
                    }
                    t
                }
                Emission::DeltaNormalized => {
                    let mut t = Table::new(vec![
                        "alpha",
                        "mu",
                        "tau",
                        "delta_normalized",
                        "flag_loose",
                        "flag_undefined",
                    ]);
                    for ((alpha, mu), prefix, _, _) in &series {
                        // normalize over the defined entries of this scan
                        let raw: Vec<f64> = (0..variant.times.len())
                            .map(|k| prefix.delta(k).unwrap_or(f64::NAN))
                            .collect();
                        let normalized =
                            normalize_series(&raw).map_err(|e| CliError::Numeric(e.to_string()))?;
                        for (k, &value) in normalized.iter().enumerate() {
                            t.push(vec![
                                Cell::Number(*alpha),
                                Cell::Number(*mu),
                                Cell::Number(variant.times[k]),
                                if value.is_finite() {
                                    Cell::Number(value)
                                } else {
                                    Cell::Empty
                                },
                                Cell::Integer(prefix.loose[k] as u64),
                                Cell::Integer(!value.is_finite() as u64),
                            ]);
                        }
                    }
                    t
                }
                Emission::KappaMin => {
                    let mut t = Table::new(vec!["tau", "kappa_min"]);
                    for k in 0..variant.times.len() {
                        t.push(vec![
                            Cell::Number(variant.times[k]),
                            Cell::Number(variant.spectra[k][0]),
                        ]);
                    }
                    t
                }
                Emission::EntropySeries => {
                    let mut t = Table::new(vec!["t", "alpha", "mu", "entropy", "alpha_purity"]);
                    for ((alpha, mu), _, entropies, purities) in &series {
                        for k in 0..variant.times.len() {
                            t.push(vec![
                                Cell::Number(variant.times[k]),
                                Cell::Number(*alpha),
                                Cell::Number(*mu),
                                Cell::Number(entropies[k]),
                                Cell::Number(purities[k]),
                            ]);
                        }
                    }
                    t
                }
            };
            tables.push(NamedTable { name, table, loose });
        }
        Ok(tables)
    }

    fn phase_diagram_tables(
        &self,
        n_states: usize,
        dim: usize,
        seed: u64,
    ) -> Result<Vec<NamedTable>, CliError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<Vec<f64>> = (0..n_states)
            .map(|_| random_density(dim, &mut rng).eigenvalues())
            .collect();
        let pairs: Vec<(f64, f64)> = self
            .alphas
            .iter()
            .flat_map(|&a| self.mus.iter().map(move |&m| (a, m)))
            .collect();
        let rows: Vec<(f64, f64, f64, f64, &'static str, u64)> = pairs
            .par_iter()
            .map(|&(alpha, mu)| {
                let values: Vec<f64> = states
                    .iter()
                    .map(|spectrum| spectrum_alpha_purity(spectrum, alpha).powf(mu - 1.0))
                    .collect();
                let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
                let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let expected = if alpha == 1.0 || mu == 1.0 {
                    "eq_1"
                } else if (alpha < 1.0) == (mu < 1.0) {
                    "le_1"
                } else {
                    "ge_1"
                };
                let violations = values
                    .iter()
                    .filter(|&&v| match expected {
                        "le_1" => v > 1.0 + 1e-12,
                        "ge_1" => v < 1.0 - 1e-12,
                        _ => (v - 1.0).abs() > 1e-12,
                    })
                    .count() as u64;
                (alpha, mu, min, max, expected, violations)
            })
            .collect();
        let mut t = Table::new(vec![
            "alpha",
            "mu",
            "value_min",
            "value_max",
            "expected",
            "violations",
        ]);
        for (alpha, mu, min, max, expected, violations) in rows {
            t.push(vec![
                Cell::Number(alpha),
                Cell::Number(mu),
                Cell::Number(min),
                Cell::Number(max),
                Cell::Text(expected.to_string()),
                Cell::Integer(violations),
            ]);
        }
        Ok(vec![NamedTable {
            name: "phase_diagram.csv".into(),
            table: t,
            loose: false,
        }])
    }
}

struct VariantData {
    suffix: String,
    times: Vec<f64>,
    spectra: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl VariantData {
    fn from_samples(suffix: String, times: Vec<f64>, samples: Vec<(Vec<f64>, f64)>) -> Self {
        let (spectra, weights) = samples.into_iter().unzip();
        Self {
            suffix,
            times,
            spectra,
            weights,
        }
    }
}

struct NamedTable {
    name: String,
    table: Table,
    loose: bool,
}

pub struct RunSummary {
    pub files: Vec<(String, String)>,
    pub loose: bool,
}

/// What `list-scenarios` prints.
pub fn scenario_reference() -> String {
    let mut out = String::new();
    out.push_str("Scenarios (key = example):\n\n");
    out.push_str("amplitude_damping  single-qubit decay channel\n");
    out.push_str("  amplitude_damping.gamma = 1.0\n");
    out.push_str("  amplitude_damping.bloch.r = 0.5\n");
    out.push_str("  amplitude_damping.bloch.theta = 0.7853981633974483\n");
    out.push_str("  amplitude_damping.bloch.phi = 0.7853981633974483\n\n");
    out.push_str("pt_qubit  PT-symmetric two-level generator, one variant per ratio\n");
    out.push_str("  pt_qubit.varpi = 1.0\n");
    out.push_str("  pt_qubit.eta_over_varpi = 0.5,1,2\n");
    out.push_str("  pt_qubit.bloch.r/theta/phi as above\n\n");
    out.push_str("xxz  spin chain, reduced dynamics of the leftmost sites, one variant per L\n");
    out.push_str("  xxz.l = 2,4,6\n");
    out.push_str("  xxz.j = 1.0\n");
    out.push_str("  xxz.delta = 0.5\n");
    out.push_str("  xxz.p = 0.5\n");
    out.push_str("  xxz.l_a = 1\n\n");
    out.push_str("phase_diagram  sign regions of [f_alpha]^(mu-1) over random states\n");
    out.push_str("  phase_diagram.n_states = 200\n");
    out.push_str("  phase_diagram.dim = 2\n");
    out.push_str("  phase_diagram.seed = 7\n\n");
    out.push_str("custom_channel  sampled Kraus family from a file\n");
    out.push_str("  custom_channel.dim = 2\n");
    out.push_str("  custom_channel.kraus_file = kraus.csv   # header t,ell,row,col,re,im\n");
    out.push_str("  custom_channel.bloch.* or custom_channel.rho0 = complex entries\n\n");
    out.push_str("custom_nonhermitian  arbitrary generator H + i Gamma\n");
    out.push_str("  custom_nonhermitian.dim = 2\n");
    out.push_str("  custom_nonhermitian.h_tilde = 0+1i,1,1,0-1i   # row-major\n");
    out.push_str("  custom_nonhermitian.bloch.* or .rho0\n\n");
    out.push_str("Common keys: scenario, out, alpha, mu, t_max, n_points, strict,\n");
    out.push_str("  emit = qsl,delta,delta_normalized,kappa_min,entropy_series\n");
    out
}
