//! Monte Carlo second moments of power-sum traces across a dyadic ladder of
//! powers: the growth is linear in k, with slope depending on beta only
//! (exactly k at beta = 2).
//!
//! ```bash
//! cargo run --release --example trace_moments
//! ```

use sinebeta::sampler::BetaParam;
use sinebeta::trace_stats::mc_trace_second_moments;

fn main() -> sinebeta::Result<()> {
    let n = 128;
    let ks = [1usize, 2, 4, 8, 16, 32, 64];
    let replicas = 1500;

    for beta_v in [1.0, 2.0, 4.0] {
        let beta = BetaParam::new(beta_v)?;
        let moments = mc_trace_second_moments(n, beta, &ks, replicas, 7)?;
        println!("beta = {beta_v}  (n = {n}, {replicas} replicas)");
        println!("  {:>4}  {:>10}  {:>9}  {:>9}", "k", "E|Tr|^2", "se", "ratio/k");
        for m in &moments {
            println!(
                "  {:>4}  {:>10.4}  {:>9.4}  {:>9.4}",
                m.k,
                m.estimate.value,
                m.estimate.std_error,
                m.estimate.value / m.k as f64
            );
        }
        println!();
    }
    Ok(())
}
