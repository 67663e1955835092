//! Thin command-line front end over the experiment runner.
//!
//! ```text
//! sinebeta <traces|variance|testfn|recovery|oracle> [flags]
//! sinebeta --config <path>
//!
//! flags:
//!   --n N            dimension (default 64)
//!   --beta B         ensemble parameter (default 2)
//!   --k LIST         comma-separated powers (traces, oracle; default 1)
//!   --replicas R     Monte Carlo replicas (default 200)
//!   --seed S         master seed (default 1)
//!   --p-max P        test-function depth (testfn, recovery; default 4)
//!   --radius R       window radius (testfn, recovery; default 2)
//!   --set A:B,C:D    interval union inside the window (recovery; default empty)
//!   --out PATH       result file (default <experiment>.csv)
//!   --plot           also emit a gnuplot script
//! ```

use std::path::PathBuf;
use std::process::ExitCode;

use sinebeta::experiment::{
    self, parse_config_file, ExperimentConfig, ExperimentKind, MixtureSpec,
};
use sinebeta::rigidity::IntervalSet;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match entry(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn entry(args: &[String]) -> sinebeta::Result<()> {
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" {
        print!("{}", usage());
        return Ok(());
    }
    experiment::init_thread_pool();
    if args[0] == "--config" {
        let path = args
            .get(1)
            .ok_or_else(|| sinebeta::Error::config("--config needs a path"))?;
        let text = std::fs::read_to_string(path)?;
        for config in parse_config_file(&text)? {
            run_and_report(&config)?;
        }
        return Ok(());
    }
    let config = parse_flags(&args[0], &args[1..])?;
    run_and_report(&config)
}

fn run_and_report(config: &ExperimentConfig) -> sinebeta::Result<()> {
    let result = experiment::run(config)?;
    println!(
        "{}: wrote {} ({} rows, {:.2}s)",
        config.kind.name(),
        result.out_path.display(),
        result.csv.lines().count().saturating_sub(1),
        result.wall_seconds
    );
    for (path, _) in &result.extra_files {
        println!("  + {}", path.display());
    }
    Ok(())
}

fn parse_flags(subcommand: &str, flags: &[String]) -> sinebeta::Result<ExperimentConfig> {
    let mut n: usize = 64;
    let mut beta: f64 = 2.0;
    let mut k_list: Vec<usize> = vec![1];
    let mut replicas: usize = 200;
    let mut seed: u64 = 1;
    let mut p_max: usize = 4;
    let mut radius: f64 = 2.0;
    let mut set = IntervalSet::empty();
    let mut mixture = MixtureSpec::Base;
    let mut out: Option<PathBuf> = None;
    let mut emit_plot = false;

    let mut idx = 0;
    let bad = |flag: &str| sinebeta::Error::config(format!("flag {flag} needs a value"));
    while idx < flags.len() {
        let flag = flags[idx].as_str();
        let mut take = || -> sinebeta::Result<&str> {
            idx += 1;
            flags.get(idx).map(|s| s.as_str()).ok_or_else(|| bad(flag))
        };
        match flag {
            "--n" => n = take()?.parse().map_err(|e| sinebeta::Error::config(format!("--n: {e}")))?,
            "--beta" => {
                beta = take()?
                    .parse()
                    .map_err(|e| sinebeta::Error::config(format!("--beta: {e}")))?
            }
            "--k" => {
                k_list = take()?
                    .split(',')
                    .map(|piece| {
                        piece
                            .trim()
                            .parse::<usize>()
                            .map_err(|e| sinebeta::Error::config(format!("--k: {e}")))
                    })
                    .collect::<sinebeta::Result<_>>()?
            }
            "--replicas" => {
                replicas = take()?
                    .parse()
                    .map_err(|e| sinebeta::Error::config(format!("--replicas: {e}")))?
            }
            "--seed" => {
                seed = take()?
                    .parse()
                    .map_err(|e| sinebeta::Error::config(format!("--seed: {e}")))?
            }
            "--p-max" => {
                p_max = take()?
                    .parse()
                    .map_err(|e| sinebeta::Error::config(format!("--p-max: {e}")))?
            }
            "--radius" => {
                radius = take()?
                    .parse()
                    .map_err(|e| sinebeta::Error::config(format!("--radius: {e}")))?
            }
            "--set" => set = IntervalSet::parse(take()?)?,
            "--mixture" => mixture = MixtureSpec::parse(take()?)?,
            "--out" => out = Some(PathBuf::from(take()?)),
            "--plot" => emit_plot = true,
            other => {
                return Err(sinebeta::Error::config(format!(
                    "unknown flag `{other}`\n{}",
                    usage()
                )))
            }
        }
        idx += 1;
    }

    let kind = match subcommand {
        "traces" => ExperimentKind::Traces { k_list },
        "variance" => ExperimentKind::Variance { mixture },
        "testfn" => ExperimentKind::TestFn { radius, p_max },
        "recovery" => ExperimentKind::Recovery {
            radius,
            set,
            p_max,
        },
        "oracle" => ExperimentKind::Oracle { k_list },
        other => {
            return Err(sinebeta::Error::config(format!(
                "unknown subcommand `{other}`\n{}",
                usage()
            )))
        }
    };
    let out = out.unwrap_or_else(|| PathBuf::from(format!("{}.csv", kind.name())));
    Ok(ExperimentConfig {
        kind,
        n,
        beta,
        replicas,
        seed,
        out,
        emit_plot,
    })
}

fn usage() -> String {
    "\
usage: sinebeta <traces|variance|testfn|recovery|oracle> [flags]
       sinebeta --config <path>

flags:
  --n N            dimension (default 64)
  --beta B         ensemble parameter, beta > 0 (default 2)
  --k LIST         comma-separated powers (traces, oracle; default 1)
  --replicas R     Monte Carlo replicas (default 200)
  --seed S         master seed (default 1)
  --p-max P        test-function depth (testfn, recovery; default 4)
  --radius R       window radius (testfn, recovery; default 2)
  --set A:B,C:D    interval union inside the window (recovery)
  --mixture SPEC   base | dilate:L1,L2 | w:L,w:L (variance; default base)
  --out PATH       result file (default <experiment>.csv)
  --plot           also emit a gnuplot script

environment:
  SINEBETA_THREADS   worker thread count (default: all cores)
"
    .to_string()
}
