//! Radial inversion of an S-transform: recover the rotation-invariant Brown
//! law of `U H` from the distribution of `H^2`, and compare the arcsine case
//! against its closed form `F(s) = s^2 / (1 - s^2)`.
//!
//! Run with: cargo run --release --example radial_inversion

use freespec::brown::haagerup_larsen;
use freespec::measures::MeasureR;

fn main() {
    // H^2 arcsine-distributed on [0, 1].
    let mu = MeasureR::arcsine01();
    let nu = haagerup_larsen(&mu).expect("inversion");

    println!("support: [{:.6}, {:.6}]", nu.r_inner(), nu.r_outer());
    println!("atom at zero: {}", nu.atom_at_zero());
    println!();
    println!("{:>10} {:>12} {:>12} {:>10}", "s", "F(s)", "closed", "error");
    let mut sup: f64 = 0.0;
    for i in 0..=10 {
        let s = nu.r_outer() * i as f64 / 10.0;
        let closed = (s * s / (1.0 - s * s)).min(1.0);
        let err = (nu.cdf_at(s) - closed).abs();
        sup = sup.max(err);
        println!("{s:>10.4} {:>12.8} {closed:>12.8} {err:>10.2e}", nu.cdf_at(s));
    }
    println!();
    println!("sup-norm error over 2000 points:");
    let mut worst: f64 = 0.0;
    for i in 0..=2000 {
        let s = nu.r_outer() * i as f64 / 2000.0;
        let closed = (s * s / (1.0 - s * s)).min(1.0);
        worst = worst.max((nu.cdf_at(s) - closed).abs());
    }
    println!("  {worst:.3e}");

    // A two-atom squared-modulus law: radii from the moment formulas.
    let two = MeasureR::two_atoms_half(1.0, 4.0);
    let nu2 = haagerup_larsen(&two).expect("inversion");
    println!();
    println!(
        "two-atom law (1, 4): annulus [{:.6}, {:.6}] = [sqrt(8/5), sqrt(5/2)]",
        nu2.r_inner(),
        nu2.r_outer()
    );
}
