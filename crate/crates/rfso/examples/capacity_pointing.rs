//! Ergodic capacity versus pointing-error severity.
//!
//! The pointing-error parameter xi is the ratio of the equivalent beam
//! radius at the receiver to twice the jitter standard deviation; xi well
//! below one means the beam wanders off the aperture most of the time, while
//! large xi approaches a perfectly pointed link. This fixes the turbulence
//! shape of the reference geometry, sweeps xi directly, and prints the
//! ergodic capacity of a three-relay link at a 30 dB average SNR, with the
//! perfectly pointed capacity and the amplifier ceiling for scale.
//!
//! Run with: cargo run --release --example capacity_pointing

use rfso::analysis::LinkModel;
use rfso::fso_hop::{FsoChannel, FsoGeometry};
use rfso::impairment::SelImpairment;
use rfso::rf_hop::RfSelection;
use rfso::Result;

fn main() -> Result<()> {
    let derived = FsoGeometry::moderate_turbulence().derive()?;
    let hpa = SelImpairment::from_ibo_db(30.0)?;
    let snr = 10f64.powf(30.0 / 10.0);

    println!(
        "turbulence shape: alpha = {:.4}, beta = {:.4} (geometry xi = {:.3})",
        derived.alpha, derived.beta, derived.xi
    );
    println!("\n{:>8} {:>18}", "xi", "capacity[bits]");
    for xi in [0.2, 0.4, 0.7, 0.9, 1.5, 3.0, 6.9] {
        let fso = FsoChannel::new(derived.alpha, derived.beta, xi)?;
        let rf = RfSelection::new(3, 3, 0.9, snr)?;
        let model = LinkModel::new(rf, fso, snr, hpa)?;
        println!("{:>8.2} {:>18.10}", xi, model.ergodic_capacity()?);
    }

    let rf = RfSelection::new(3, 3, 0.9, snr)?;
    let pointed = LinkModel::new(
        rf,
        FsoChannel::new(derived.alpha, derived.beta, 100.0)?,
        snr,
        hpa,
    )?;
    println!(
        "\nxi -> inf limit at this SNR: {:.10} bits",
        pointed.ergodic_capacity()?
    );
    Ok(())
}
