//! Build the certified test-function sequence: band-limited bumps with
//! geometrically shrinking weighted seminorm, flattened to within 2^-p of
//! one on a window. Shows the accepted dilation-average steps and the
//! serialization record.
//!
//! ```bash
//! cargo run --release --example test_functions
//! ```

use sinebeta::rigidity::build_test_sequence;

fn main() -> sinebeta::Result<()> {
    let radius = 2.0;
    let sequence = build_test_sequence(radius, 4)?;

    println!("certified sequence on [-{radius}, {radius}]:");
    println!(
        "  {:>2}  {:>10}  {:>10}  {:>10}  {:>6}  {:>10}",
        "p", "seminorm", "sup|f-1|", "bound", "comps", "max scale"
    );
    for cert in &sequence.certificates {
        let mix = &sequence.mixtures[cert.p];
        println!(
            "  {:>2}  {:>10.6}  {:>10.6}  {:>10.6}  {:>6}  {:>10.3e}",
            cert.p,
            cert.h_half_norm,
            cert.sup_deviation,
            0.5f64.powi(cert.p as i32),
            mix.components().len(),
            mix.max_scale()
        );
    }

    println!("\naccepted reduction steps for p = 4:");
    for step in &sequence.certificates[4].reduction_steps {
        println!(
            "  dilation {:>10.3e}: seminorm^2 {:.5e} -> {:.5e} (factor {:.4})",
            step.dilation,
            step.norm_sq_before,
            step.norm_sq_after,
            step.norm_sq_after / step.norm_sq_before
        );
    }

    println!("\nserialized record of f_2:\n{}", sequence.mixtures[2].to_record());
    Ok(())
}
