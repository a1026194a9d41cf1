//! Capacity ceilings imposed by a soft-envelope-limited amplifier.
//!
//! A nonlinear amplifier at the relay caps the end-to-end SNDR at
//! 1 / kappa_d, where kappa_d is the distortion-to-signal ratio of the
//! clipper, no matter how much transmit power either hop spends. This prints
//! the Bussgang decomposition and the resulting ergodic-capacity ceiling for
//! a range of input back-off values.
//!
//! Run with: cargo run --release --example capacity_ceilings

use rfso::impairment::SelImpairment;
use rfso::Result;

fn main() -> Result<()> {
    println!(
        "{:>8} {:>14} {:>14} {:>14} {:>16}",
        "IBO[dB]", "nu", "mu", "d2s", "ceiling[bits]"
    );
    for ibo_db in [0.0, 1.0, 3.0, 5.0, 7.0, 10.0, 15.0, 20.0, 30.0] {
        let hpa = SelImpairment::from_ibo_db(ibo_db)?;
        println!(
            "{:>8} {:>14.10} {:>14.10} {:>14.6e} {:>16.10}",
            ibo_db,
            hpa.nu(),
            hpa.mu(),
            hpa.distortion_to_signal(),
            hpa.capacity_ceiling_bits()
        );
    }
    let ideal = SelImpairment::ideal();
    println!(
        "{:>8} {:>14.10} {:>14.10} {:>14.6e} {:>16}",
        "ideal",
        ideal.nu(),
        ideal.mu(),
        ideal.distortion_to_signal(),
        "unbounded"
    );
    Ok(())
}
