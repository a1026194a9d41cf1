//! Ergodic capacity saturating at the amplifier ceiling.
//!
//! Sweeping the average SNR for several input back-off values shows the two
//! regimes of a nonlinear relay: at low SNR all curves track the ideal
//! amplifier, and at high SNR each curve flattens at log2(1 + 1/d2s), the
//! ceiling set by its own distortion floor. The ideal-amplifier column keeps
//! growing by one bit per 3 dB.
//!
//! Run with: cargo run --release --example capacity_ibo

use rfso::analysis::LinkModel;
use rfso::fso_hop::FsoGeometry;
use rfso::impairment::SelImpairment;
use rfso::rf_hop::RfSelection;
use rfso::Result;

fn main() -> Result<()> {
    let fso = FsoGeometry::moderate_turbulence().channel()?;
    let ibo_dbs = [0.0, 3.0, 5.0, 7.0];
    let hpas: Vec<SelImpairment> = ibo_dbs
        .iter()
        .map(|&db| SelImpairment::from_ibo_db(db))
        .collect::<Result<_>>()?;

    print!("{:>8}", "SNR[dB]");
    for db in ibo_dbs {
        print!(" {:>11}", format!("IBO {db} dB"));
    }
    println!(" {:>11}", "ideal");
    for snr_db in (0..=60).step_by(5) {
        let snr = 10f64.powf(snr_db as f64 / 10.0);
        print!("{snr_db:>8}");
        for &hpa in &hpas {
            let rf = RfSelection::new(5, 5, 0.9, snr)?;
            let model = LinkModel::new(rf, fso.clone(), snr, hpa)?;
            print!(" {:>11.6}", model.ergodic_capacity()?);
        }
        let rf = RfSelection::new(5, 5, 0.9, snr)?;
        let ideal = LinkModel::new(rf, fso.clone(), snr, SelImpairment::ideal())?;
        println!(" {:>11.6}", ideal.ergodic_capacity()?);
    }

    print!("{:>8}", "ceiling");
    for hpa in &hpas {
        print!(" {:>11.6}", hpa.capacity_ceiling_bits());
    }
    println!(" {:>11}", "-");
    Ok(())
}
