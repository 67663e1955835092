//! The brute-force quadrature oracle at dimensions 1..3: expectations
//! against the angle density proportional to the beta power of the mutual
//! distances, on a tensor grid.
//!
//! ```bash
//! cargo run --release --example quadrature_oracle
//! ```

use num_complex::Complex64;
use sinebeta::sampler::BetaParam;
use sinebeta::trace_stats::{
    cbe_quadrature_oracle, cbe_quadrature_oracle_real, power_sum_sq_observable,
};

fn main() -> sinebeta::Result<()> {
    println!("E|Tr M^k|^2 by tensor-grid quadrature:");
    println!("  {:>2} {:>5} {:>2}  {:>12}", "n", "beta", "k", "value");
    for n in [2usize, 3] {
        for beta_v in [1.0, 2.0, 4.0] {
            let beta = BetaParam::new(beta_v)?;
            for k in [1i64, 2] {
                let value =
                    cbe_quadrature_oracle_real(n, beta, None, power_sum_sq_observable(k))?;
                println!("  {n:>2} {beta_v:>5} {k:>2}  {value:>12.8}");
            }
        }
    }

    // Rotation invariance kills mixed moments: E[Tr M Tr(M^2)*] = 0.
    let beta = BetaParam::new(2.0)?;
    let cross = cbe_quadrature_oracle(2, beta, None, |angles| {
        let t1: Complex64 = angles.iter().map(|&a| Complex64::from_polar(1.0, a)).sum();
        let t2: Complex64 = angles
            .iter()
            .map(|&a| Complex64::from_polar(1.0, 2.0 * a))
            .sum();
        t1 * t2.conj()
    })?;
    println!("\ncross moment E[Tr M conj(Tr M^2)] at n=2, beta=2: |{:.2e}|", cross.norm());
    Ok(())
}
