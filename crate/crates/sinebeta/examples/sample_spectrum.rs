//! Sample a circular beta ensemble spectrum and cross-check its power-sum
//! traces against the five-diagonal matrix oracle.
//!
//! ```bash
//! cargo run --release --example sample_spectrum
//! ```

use sinebeta::cmv::{trace_power_matrix, BandedUnitary};
use sinebeta::rng::replica_rng;
use sinebeta::sampler::{eigenangles, renormalize, sample_verblunsky, BetaParam};
use sinebeta::trace_stats::trace_power;

fn main() -> sinebeta::Result<()> {
    let n = 12;
    let beta = BetaParam::new(2.0)?;
    let mut rng = replica_rng(42, 0);

    let coeffs = sample_verblunsky(n, beta, &mut rng)?;
    println!("recursion coefficients (|alpha_k|):");
    for (k, a) in coeffs.alphas().iter().enumerate() {
        println!("  k={k:2}  |alpha| = {:.6}", a.norm());
    }

    let spectrum = eigenangles(&coeffs)?;
    println!("\neigenangles on [0, 2 pi):");
    for (j, theta) in spectrum.angles().iter().enumerate() {
        println!("  theta_{j:<2} = {theta:.12}");
    }

    let config = renormalize(&spectrum);
    println!("\nrenormalized points in [-{}, {}):", n / 2, n / 2);
    let formatted: Vec<String> = config.points().iter().map(|x| format!("{x:.4}")).collect();
    println!("  {}", formatted.join(", "));

    let matrix = BandedUnitary::from_verblunsky(&coeffs);
    println!("\nunitarity defect of the banded operator: {:.3e}", matrix.unitarity_defect());
    println!("\ntrace cross-check (spectral vs banded matrix powers):");
    for k in 1..=4 {
        let spectral = trace_power(&spectrum, k as i64);
        let banded = trace_power_matrix(&matrix, k)?;
        println!(
            "  k={k}: {:.10}{:+.10}i  vs  {:.10}{:+.10}i  (|diff| {:.2e})",
            spectral.re,
            spectral.im,
            banded.re,
            banded.im,
            (spectral - banded).norm()
        );
    }
    Ok(())
}
