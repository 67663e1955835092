//! Experiment configuration, orchestration and result persistence.
//!
//! Results are written as comma-separated values with a one-line header,
//! next to a structured-text sidecar (`<out>.meta`) carrying the config
//! echo, wall time, artifact version and RNG scheme: everything needed to
//! re-run the experiment. Writes go through a temp file and rename. The
//! numeric payload is a pure function of `(config, seed)` regardless of the
//! thread count.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;
use std::time::Instant;

use crate::bandlimited::ScaleMixture;
use crate::error::{Error, Result};
use crate::linstat::{mc_line_variance, riemann_functional};
use crate::rigidity::{build_test_sequence, recovery_experiment, IntervalSet};
use crate::rng::RNG_SCHEME;
use crate::sampler::BetaParam;
use crate::trace_stats::{
    cbe_quadrature_oracle_real, mc_trace_second_moments, power_sum_sq_observable,
};

/// Environment variable controlling the worker thread count.
pub const THREADS_ENV: &str = "SINEBETA_THREADS";

/// Install the global worker pool, honoring [`THREADS_ENV`]. Safe to call
/// repeatedly; the first call wins.
pub fn init_thread_pool() {
    static ONCE: OnceLock<()> = OnceLock::new();
    ONCE.get_or_init(|| {
        if let Ok(value) = std::env::var(THREADS_ENV) {
            if let Ok(threads) = value.parse::<usize>() {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    });
}

/// How the test function of a variance experiment is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum MixtureSpec {
    /// The plain base bump.
    Base,
    /// Successive dilation averages of the base bump.
    DilateChain(Vec<f64>),
    /// Explicit `(weight, scale)` components.
    Components(Vec<(f64, f64)>),
}

impl MixtureSpec {
    pub fn build(&self) -> Result<ScaleMixture> {
        match self {
            MixtureSpec::Base => Ok(ScaleMixture::base()),
            MixtureSpec::DilateChain(dilations) => {
                let mut mix = ScaleMixture::base();
                for &l in dilations {
                    mix = mix.dilate_average(l)?;
                }
                Ok(mix)
            }
            MixtureSpec::Components(components) => ScaleMixture::new(components.clone()),
        }
    }

    /// Parse `"base"`, `"dilate:4,16"` or `"w:L,w:L"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "base" {
            return Ok(MixtureSpec::Base);
        }
        if let Some(rest) = text.strip_prefix("dilate:") {
            let dilations = rest
                .split(',')
                .map(|piece| {
                    piece
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| Error::config(format!("bad dilation `{piece}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(MixtureSpec::DilateChain(dilations));
        }
        let components = text
            .split(',')
            .map(|piece| {
                let (w, l) = piece
                    .split_once(':')
                    .ok_or_else(|| Error::config(format!("component `{piece}` is not w:L")))?;
                let w: f64 = w
                    .trim()
                    .parse()
                    .map_err(|e| Error::config(format!("bad weight `{w}`: {e}")))?;
                let l: f64 = l
                    .trim()
                    .parse()
                    .map_err(|e| Error::config(format!("bad scale `{l}`: {e}")))?;
                Ok((w, l))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MixtureSpec::Components(components))
    }

    fn echo(&self) -> String {
        match self {
            MixtureSpec::Base => "base".into(),
            MixtureSpec::DilateChain(ds) => format!(
                "dilate:{}",
                ds.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
            ),
            MixtureSpec::Components(cs) => cs
                .iter()
                .map(|(w, l)| format!("{w}:{l}"))
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

/// What to run.
#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentKind {
    /// Monte Carlo second moments of power-sum traces for a list of powers.
    Traces { k_list: Vec<usize> },
    /// Monte Carlo variance of the line statistic against the Riemann
    /// functional.
    Variance { mixture: MixtureSpec },
    /// Construct and certify the flattened norm-reduced test functions.
    TestFn { radius: f64, p_max: usize },
    /// The count-recovery experiment.
    Recovery {
        radius: f64,
        set: IntervalSet,
        p_max: usize,
    },
    /// Brute-force quadrature values at dimension <= 3.
    Oracle { k_list: Vec<usize> },
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Traces { .. } => "traces",
            ExperimentKind::Variance { .. } => "variance",
            ExperimentKind::TestFn { .. } => "testfn",
            ExperimentKind::Recovery { .. } => "recovery",
            ExperimentKind::Oracle { .. } => "oracle",
        }
    }
}

/// A fully specified experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub beta: f64,
    pub replicas: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub emit_plot: bool,
}

impl ExperimentConfig {
    /// Field-level validation against the preconditions of the target
    /// operation.
    pub fn validate(&self) -> Result<BetaParam> {
        let beta = BetaParam::new(self.beta)
            .map_err(|_| Error::parameter(format!("beta: must satisfy beta > 0, got {}", self.beta)))?;
        if self.n == 0 {
            return Err(Error::parameter("n: dimension must be >= 1"));
        }
        match &self.kind {
            ExperimentKind::Traces { k_list } => {
                if k_list.is_empty() {
                    return Err(Error::parameter("k: need at least one power"));
                }
                if self.replicas < 100 {
                    return Err(Error::parameter("replicas: need at least 100"));
                }
            }
            ExperimentKind::Variance { mixture } => {
                mixture.build()?;
                if self.replicas < 100 {
                    return Err(Error::parameter("replicas: need at least 100"));
                }
            }
            ExperimentKind::TestFn { radius, p_max } => {
                if !(*radius > 0.0) {
                    return Err(Error::parameter("radius: must be positive"));
                }
                if *p_max > crate::rigidity::P_MAX_CAP {
                    return Err(Error::parameter(format!(
                        "p-max: exceeds cap {}",
                        crate::rigidity::P_MAX_CAP
                    )));
                }
            }
            ExperimentKind::Recovery { radius, set, .. } => {
                if !(*radius > 0.0) || *radius >= self.n as f64 / 2.0 {
                    return Err(Error::parameter(
                        "radius: must satisfy 0 < radius < n/2",
                    ));
                }
                if !set.within(*radius) {
                    return Err(Error::parameter("set: must be contained in [-radius, radius]"));
                }
                if self.replicas < 2 {
                    return Err(Error::parameter("replicas: need at least 2"));
                }
            }
            ExperimentKind::Oracle { k_list } => {
                if self.n > 3 {
                    return Err(Error::parameter("n: the quadrature oracle supports n <= 3"));
                }
                if k_list.is_empty() {
                    return Err(Error::parameter("k: need at least one power"));
                }
            }
        }
        Ok(beta)
    }

    /// `key = value` echo, sufficient to re-run.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "experiment = {}", self.kind.name());
        let _ = writeln!(out, "n = {}", self.n);
        let _ = writeln!(out, "beta = {}", self.beta);
        match &self.kind {
            ExperimentKind::Traces { k_list } | ExperimentKind::Oracle { k_list } => {
                let ks = k_list
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(out, "k = {ks}");
            }
            ExperimentKind::Variance { mixture } => {
                let _ = writeln!(out, "mixture = {}", mixture.echo());
            }
            ExperimentKind::TestFn { radius, p_max } => {
                let _ = writeln!(out, "radius = {radius}");
                let _ = writeln!(out, "p-max = {p_max}");
            }
            ExperimentKind::Recovery {
                radius,
                set,
                p_max,
            } => {
                let _ = writeln!(out, "radius = {radius}");
                let _ = writeln!(out, "set = {}", set.to_flag_string());
                let _ = writeln!(out, "p-max = {p_max}");
            }
        }
        let _ = writeln!(out, "replicas = {}", self.replicas);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "out = {}", self.out.display());
        out
    }
}

/// Outcome of one experiment run.
#[derive(Debug)]
pub struct ExperimentResult {
    /// Numeric payload written to the main CSV (header + rows).
    pub csv: String,
    /// Sidecar text: config echo, version, RNG scheme, wall time.
    pub metadata: String,
    /// Extra files written next to the CSV (`(path, contents)`).
    pub extra_files: Vec<(PathBuf, String)>,
    pub out_path: PathBuf,
    pub wall_seconds: f64,
}

/// Run one experiment and persist its results atomically.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentResult> {
    init_thread_pool();
    let beta = config.validate()?;
    let start = Instant::now();
    let (csv, mut extra_files) = dispatch(config, beta)?;
    let wall_seconds = start.elapsed().as_secs_f64();

    let mut metadata = String::new();
    let _ = writeln!(metadata, "# experiment metadata");
    metadata.push_str(&config.echo());
    let _ = writeln!(metadata, "artifact_version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(metadata, "rng_scheme = {RNG_SCHEME}");
    let _ = writeln!(metadata, "wall_seconds = {wall_seconds:.3}");

    if config.emit_plot {
        extra_files.push((
            config.out.with_extension("gp"),
            plot_script(config),
        ));
    }

    write_atomic(&config.out, &csv)?;
    write_atomic(&sidecar_path(&config.out), &metadata)?;
    for (path, contents) in &extra_files {
        write_atomic(path, contents)?;
    }
    Ok(ExperimentResult {
        csv,
        metadata,
        extra_files,
        out_path: config.out.clone(),
        wall_seconds,
    })
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".meta");
    out.with_file_name(name)
}

fn dispatch(
    config: &ExperimentConfig,
    beta: BetaParam,
) -> Result<(String, Vec<(PathBuf, String)>)> {
    let mut extras = Vec::new();
    let csv = match &config.kind {
        ExperimentKind::Traces { k_list } => {
            let moments =
                mc_trace_second_moments(config.n, beta, k_list, config.replicas, config.seed)?;
            let mut csv = String::from("k,estimate,std_error,replicas,within_lemma_range\n");
            for m in &moments {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    m.k, m.estimate.value, m.estimate.std_error, m.estimate.replicas,
                    m.within_lemma_range
                );
            }
            csv
        }
        ExperimentKind::Variance { mixture } => {
            let mix = mixture.build()?;
            let estimate = mc_line_variance(config.n, beta, &mix, config.replicas, config.seed)?;
            let functional = riemann_functional(&mix, config.n);
            let norm_sq = mix.h_half_norm_sq();
            let mut csv = String::from(
                "n,beta,variance,std_error,riemann_functional,h_half_norm_sq,replicas\n",
            );
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                config.n,
                config.beta,
                estimate.value,
                estimate.std_error,
                functional.value,
                norm_sq,
                estimate.replicas
            );
            csv
        }
        ExperimentKind::TestFn { radius, p_max } => {
            let sequence = build_test_sequence(*radius, *p_max)?;
            let mut csv = String::from(
                "p,h_half_norm,bound,sup_deviation,components,max_scale,reduction_steps\n",
            );
            for (p, (mix, cert)) in sequence
                .mixtures
                .iter()
                .zip(&sequence.certificates)
                .enumerate()
            {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{}",
                    p,
                    cert.h_half_norm,
                    0.5f64.powi(p as i32),
                    cert.sup_deviation,
                    mix.components().len(),
                    mix.max_scale(),
                    cert.reduction_steps.len()
                );
                let stem = config.out.file_stem().unwrap_or_default().to_string_lossy();
                let record_path = config
                    .out
                    .with_file_name(format!("{stem}_p{p}.mixture"));
                extras.push((record_path, mix.to_record()));
            }
            csv
        }
        ExperimentKind::Recovery {
            radius,
            set,
            p_max,
        } => {
            let report = recovery_experiment(
                config.n,
                beta,
                *radius,
                set,
                *p_max,
                config.replicas,
                config.seed,
            )?;
            let mut csv = String::from("replica,p,estimate,true_count,window_n,seed\n");
            for r in &report.records {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    r.replica, r.p, r.estimate, r.true_count, r.window_n, r.seed
                );
            }
            let mut summary = String::from(
                "p,median_abs_error,exact_fraction,fluct_second_moment\n",
            );
            for s in &report.summaries {
                let _ = writeln!(
                    summary,
                    "{},{},{},{}",
                    s.p, s.median_abs_error, s.exact_fraction, s.fluct_second_moment
                );
            }
            let stem = config.out.file_stem().unwrap_or_default().to_string_lossy();
            extras.push((
                config.out.with_file_name(format!("{stem}_summary.csv")),
                summary,
            ));
            csv
        }
        ExperimentKind::Oracle { k_list } => {
            let mut csv = String::from("k,oracle_second_moment,normalization\n");
            let normalization =
                cbe_quadrature_oracle_real(config.n, beta, None, |_| 1.0)?;
            for &k in k_list {
                let value = cbe_quadrature_oracle_real(
                    config.n,
                    beta,
                    None,
                    power_sum_sq_observable(k as i64),
                )?;
                let _ = writeln!(csv, "{k},{value},{normalization}");
            }
            csv
        }
    };
    Ok((csv, extras))
}

fn plot_script(config: &ExperimentConfig) -> String {
    let data = config.out.display();
    match &config.kind {
        ExperimentKind::Traces { .. } => format!(
            "set datafile separator ','\n\
             set key top left\n\
             set xlabel 'k'\n\
             set ylabel 'E |Tr M^k|^2'\n\
             set logscale xy\n\
             plot '{data}' every ::1 using 1:2:3 with yerrorlines title 'estimate', \
             x title 'k'\n"
        ),
        ExperimentKind::Recovery { .. } => {
            let stem = config.out.file_stem().unwrap_or_default().to_string_lossy();
            let summary = config
                .out
                .with_file_name(format!("{stem}_summary.csv"));
            format!(
                "set datafile separator ','\n\
                 set xlabel 'p'\n\
                 set ylabel 'median |estimate - count|'\n\
                 set logscale y 2\n\
                 plot '{}' every ::1 using 1:2 with linespoints title 'median error'\n",
                summary.display()
            )
        }
        _ => format!(
            "set datafile separator ','\n# columns as in the header of '{data}'\n"
        ),
    }
}

/// Atomic write: temp file in the same directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut tmp = path.as_os_str().to_os_string();
    tmp.push(format!(".tmp-{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Parse the `key = value` config-file format: one `[section]` per
/// experiment, keys named after the CLI flags.
pub fn parse_config_file(text: &str) -> Result<Vec<ExperimentConfig>> {
    let mut configs = Vec::new();
    let mut current: Option<(String, Vec<(String, String)>)> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(section) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            if let Some(done) = current.take() {
                configs.push(section_to_config(&done.0, &done.1)?);
            }
            current = Some((section.trim().to_string(), Vec::new()));
        } else if let Some((key, value)) = line.split_once('=') {
            let Some((_, keys)) = current.as_mut() else {
                return Err(Error::config(format!(
                    "line {}: key outside any [section]",
                    lineno + 1
                )));
            };
            keys.push((key.trim().to_string(), value.trim().to_string()));
        } else {
            return Err(Error::config(format!(
                "line {}: expected `key = value` or `[section]`, got `{line}`",
                lineno + 1
            )));
        }
    }
    if let Some(done) = current.take() {
        configs.push(section_to_config(&done.0, &done.1)?);
    }
    if configs.is_empty() {
        return Err(Error::config("config file defines no experiments"));
    }
    Ok(configs)
}

fn section_to_config(section: &str, keys: &[(String, String)]) -> Result<ExperimentConfig> {
    let get = |name: &str| keys.iter().rev().find(|(k, _)| k == name).map(|(_, v)| v.as_str());
    let parse_usize = |name: &str, default: usize| -> Result<usize> {
        get(name)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|e| Error::config(format!("{section}.{name}: {e}")))
            })
            .unwrap_or(Ok(default))
    };
    let parse_f64 = |name: &str, default: f64| -> Result<f64> {
        get(name)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| Error::config(format!("{section}.{name}: {e}")))
            })
            .unwrap_or(Ok(default))
    };
    let k_list = || -> Result<Vec<usize>> {
        get("k")
            .unwrap_or("1")
            .split(',')
            .map(|piece| {
                piece
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| Error::config(format!("{section}.k: {e}")))
            })
            .collect()
    };
    let kind = match section {
        "traces" => ExperimentKind::Traces { k_list: k_list()? },
        "variance" => ExperimentKind::Variance {
            mixture: MixtureSpec::parse(get("mixture").unwrap_or("base"))?,
        },
        "testfn" => ExperimentKind::TestFn {
            radius: parse_f64("radius", 2.0)?,
            p_max: parse_usize("p-max", 4)?,
        },
        "recovery" => ExperimentKind::Recovery {
            radius: parse_f64("radius", 2.0)?,
            set: IntervalSet::parse(get("set").unwrap_or(""))?,
            p_max: parse_usize("p-max", 4)?,
        },
        "oracle" => ExperimentKind::Oracle { k_list: k_list()? },
        other => {
            return Err(Error::config(format!(
                "unknown experiment section [{other}]"
            )))
        }
    };
    Ok(ExperimentConfig {
        kind,
        n: parse_usize("n", 64)?,
        beta: parse_f64("beta", 2.0)?,
        replicas: parse_usize("replicas", 200)?,
        seed: get("seed")
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|e| Error::config(format!("{section}.seed: {e}")))
            })
            .unwrap_or(Ok(1))?,
        out: PathBuf::from(get("out").unwrap_or("result.csv")),
        emit_plot: get("plot").map(|v| v == "true" || v == "1").unwrap_or(false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!(
            "sinebeta-test-{tag}-{}",
            std::process::id()
        ));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn rejects_nonpositive_beta_with_field_message() {
        let config = ExperimentConfig {
            kind: ExperimentKind::Traces { k_list: vec![1] },
            n: 2,
            beta: 0.0,
            replicas: 200,
            seed: 7,
            out: PathBuf::from("unused.csv"),
            emit_plot: false,
        };
        match config.validate() {
            Err(Error::Parameter(msg)) => assert!(msg.contains("beta > 0"), "{msg}"),
            other => panic!("expected parameter error, got {other:?}"),
        }
    }

    #[test]
    fn traces_run_is_reproducible_byte_for_byte() {
        let dir = temp_dir("traces");
        let make = |name: &str| ExperimentConfig {
            kind: ExperimentKind::Traces { k_list: vec![1] },
            n: 2,
            beta: 2.0,
            replicas: 400,
            seed: 7,
            out: dir.join(name),
            emit_plot: false,
        };
        let first = run(&make("a.csv")).unwrap();
        let second = run(&make("b.csv")).unwrap();
        assert_eq!(first.csv, second.csv);
        assert!(std::fs::read_to_string(dir.join("a.csv"))
            .unwrap()
            .starts_with("k,estimate"));
        let meta = std::fs::read_to_string(sidecar_path(&dir.join("a.csv"))).unwrap();
        assert!(meta.contains("rng_scheme"));
        assert!(meta.contains("seed = 7"));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn traces_run_matches_quadrature_oracle() {
        // The spec'd smoke configuration: n=2, beta=2, k=1, 1e5 replicas.
        let dir = temp_dir("traces-oracle");
        let config = ExperimentConfig {
            kind: ExperimentKind::Traces { k_list: vec![1] },
            n: 2,
            beta: 2.0,
            replicas: 100_000,
            seed: 7,
            out: dir.join("t.csv"),
            emit_plot: false,
        };
        let result = run(&config).unwrap();
        let row = result.csv.lines().nth(1).unwrap();
        let mut fields = row.split(',');
        let _k = fields.next().unwrap();
        let estimate: f64 = fields.next().unwrap().parse().unwrap();
        let se: f64 = fields.next().unwrap().parse().unwrap();
        // Oracle value for this cell is 1 (checked against quadrature in
        // the trace-stats tests).
        assert!(
            (estimate - 1.0).abs() <= 3.0 * se,
            "estimate {estimate} vs 1 (se {se})"
        );
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn oracle_run_writes_rows() {
        let dir = temp_dir("oracle");
        let config = ExperimentConfig {
            kind: ExperimentKind::Oracle { k_list: vec![1] },
            n: 2,
            beta: 2.0,
            replicas: 2,
            seed: 1,
            out: dir.join("oracle.csv"),
            emit_plot: false,
        };
        let result = run(&config).unwrap();
        let mut lines = result.csv.lines();
        assert_eq!(lines.next().unwrap(), "k,oracle_second_moment,normalization");
        let row = lines.next().unwrap();
        assert!(row.starts_with("1,"));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn config_file_round_trip() {
        let text = "\
# demo
[traces]
n = 4
beta = 2
k = 1,2
replicas = 250
seed = 3
out = /tmp/t.csv

[recovery]
n = 128
beta = 1
radius = 2
set = 0:1
p-max = 2
replicas = 8
seed = 5
out = /tmp/r.csv
plot = true
";
        let configs = parse_config_file(text).unwrap();
        assert_eq!(configs.len(), 2);
        assert_eq!(configs[0].kind.name(), "traces");
        assert_eq!(configs[0].replicas, 250);
        match &configs[1].kind {
            ExperimentKind::Recovery { radius, set, p_max } => {
                assert_eq!(*radius, 2.0);
                assert_eq!(*p_max, 2);
                assert!(set.contains(0.5));
            }
            other => panic!("wrong kind {other:?}"),
        }
        assert!(configs[1].emit_plot);
        assert!(parse_config_file("[bogus]\nn = 1\n").is_err());
        assert!(parse_config_file("n = 1\n").is_err());
    }

    #[test]
    fn mixture_spec_parsing() {
        assert_eq!(MixtureSpec::parse("base").unwrap(), MixtureSpec::Base);
        assert_eq!(
            MixtureSpec::parse("dilate:4,16").unwrap(),
            MixtureSpec::DilateChain(vec![4.0, 16.0])
        );
        let spec = MixtureSpec::parse("0.5:1,0.5:8").unwrap();
        let mix = spec.build().unwrap();
        assert_eq!(mix.components(), &[(0.5, 1.0), (0.5, 8.0)]);
        assert!(MixtureSpec::parse("nonsense:").is_err());
    }
}
