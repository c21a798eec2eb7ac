//! Legendre transforms of the branch functions and the spectrum domain.

use mff::partition_spectrum::{legendre, spectrum_domain, spectrum_point, SpectrumFunction};
use mff::ModelParams;

fn main() -> mff::Result<()> {
    let params = ModelParams::new(vec![0.25, 0.75], vec![1.0 / 3.0, 2.0 / 3.0])?;
    let domain = spectrum_domain(&params);
    println!("domain: ({:.5}, {:.5})", domain.lo, domain.hi);
    println!("{:>8} {:>8} {:>8} {:>8} {:>8} {:>8}", "alpha", "theta_a*", "theta_b*", "b*", "B*", "Dim ok");
    for alpha in domain.interior_grid(12) {
        let p = spectrum_point(&params, alpha)?;
        println!(
            "{alpha:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8}",
            legendre(&params, SpectrumFunction::ThetaA, alpha),
            legendre(&params, SpectrumFunction::ThetaB, alpha),
            p.hausdorff_dim,
            p.upper_legendre,
            p.packing_valid
        );
    }
    Ok(())
}
