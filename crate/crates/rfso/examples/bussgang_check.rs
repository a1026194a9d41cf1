//! Empirical check of the Bussgang decomposition of the clipper.
//!
//! The soft-envelope limiter's closed-form linear gain nu and output power
//! mu follow from Gaussian moments of the clipped envelope. This feeds the
//! limiter complex Gaussian samples and compares the measured correlation
//! and power against the closed forms at several back-off values, printing
//! the deviation in standard errors.
//!
//! Run with: cargo run --release --example bussgang_check

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rfso::impairment::SelImpairment;
use rfso::Result;

fn main() -> Result<()> {
    let trials = 2_000_000u64;
    println!("{trials} complex Gaussian samples per row\n");
    println!(
        "{:>8} {:>13} {:>13} {:>9} {:>13} {:>13} {:>9}",
        "IBO[dB]", "nu", "nu (mc)", "dev[se]", "mu", "mu (mc)", "dev[se]"
    );
    for (row, ibo_db) in [0.0, 3.0, 7.0, 15.0, 30.0].into_iter().enumerate() {
        let hpa = SelImpairment::from_ibo_db(ibo_db)?;
        let mut rng = ChaCha8Rng::seed_from_u64(42 + row as u64);
        let (nu_hat, mu_hat) = hpa.bussgang_empirical(trials, &mut rng);
        // The estimators average one bounded sample function each, so their
        // standard errors scale as 1/sqrt(trials) with O(1) constants.
        let se = 1.0 / (trials as f64).sqrt();
        println!(
            "{:>8} {:>13.8} {:>13.8} {:>9.2} {:>13.8} {:>13.8} {:>9.2}",
            ibo_db,
            hpa.nu(),
            nu_hat,
            (nu_hat - hpa.nu()) / se,
            hpa.mu(),
            mu_hat,
            (mu_hat - hpa.mu()) / se
        );
    }
    println!("\ndeviations should sit well inside +-3 standard errors");
    Ok(())
}
