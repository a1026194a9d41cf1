//! Average bit error probability under four modulation formats.
//!
//! The conditional error probability delta / (2 Gamma(tau)) * Gamma(tau,
//! delta * snr) covers coherent and noncoherent BFSK/BPSK through the (tau,
//! delta) pair. This sweeps the reference link in a weak-turbulence
//! configuration with two relays and prints the closed-form average BEP for
//! each preset, then spot-checks the coherent BFSK column against Monte
//! Carlo at one operating point.
//!
//! Run with: cargo run --release --example bep_sweep

use rfso::analysis::{LinkModel, ModulationParams};
use rfso::fso_hop::FsoGeometry;
use rfso::impairment::SelImpairment;
use rfso::mcsim::{run_point, McMetric, McPlan};
use rfso::rf_hop::RfSelection;
use rfso::Result;

fn main() -> Result<()> {
    let fso = FsoGeometry::weak_turbulence().channel()?;
    let hpa = SelImpairment::from_ibo_db(30.0)?;
    let presets = [
        ModulationParams::cbfsk(),
        ModulationParams::cbpsk(),
        ModulationParams::nbfsk(),
        ModulationParams::dbpsk(),
    ];
    let model_at = |snr: f64| -> Result<LinkModel> {
        let rf = RfSelection::new(2, 2, 0.9, snr)?;
        LinkModel::new(rf, fso.clone(), snr, hpa)
    };

    print!("{:>8}", "SNR[dB]");
    for preset in &presets {
        print!(" {:>13}", preset.name());
    }
    println!();
    for snr_db in (0..=60).step_by(5) {
        let model = model_at(10f64.powf(snr_db as f64 / 10.0))?;
        print!("{snr_db:>8}");
        for preset in &presets {
            print!(" {:>13.6e}", model.bep_cf(preset)?);
        }
        println!();
    }

    let snr_db = 30.0;
    let model = model_at(10f64.powf(snr_db / 10.0))?;
    let analytic = model.bep_cf(&ModulationParams::cbfsk())?;
    let plan = McPlan::new(
        400_000,
        7,
        400_000,
        McMetric::Bep {
            modulation: ModulationParams::cbfsk(),
        },
    )?;
    let mc = run_point(&model, &plan)?;
    println!(
        "\ncbfsk at {snr_db} dB: closed form {analytic:.6e}, monte carlo {:.6e} +- {:.2e}",
        mc.value, mc.ci99_halfwidth
    );
    Ok(())
}
