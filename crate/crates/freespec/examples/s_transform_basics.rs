//! S-transforms on the real domain: point masses, two-atom laws and the
//! arcsine law, the closed forms against numeric inversion, and the product
//! rule that drives the product Brown law.
//!
//! Run with: cargo run --release --example s_transform_basics

use freespec::measures::MeasureR;
use freespec::transforms::{psi, s_product, s_transform, STransform};

fn main() {
    // psi and its inverse on the negative real branch.
    let arcsine = MeasureR::arcsine01();
    println!("psi_arcsine(-1) = {:.10} (= 1/sqrt2 - 1)", psi(&arcsine, -1.0).unwrap());

    // Closed forms.
    println!("S_delta_2(w)      = {:.6} for any w", s_transform(&MeasureR::dirac(2.0), -0.3).unwrap());
    println!("S_arcsine(-1/2)   = {:.6}", s_transform(&arcsine, -0.5).unwrap());
    let two = MeasureR::two_atoms_half(1.0, 4.0);
    println!("S_(d1+d4)/2(-1/2) = {:.6}", s_transform(&two, -0.5).unwrap());

    // Closed form vs numeric inversion.
    let closed = STransform::arcsine01();
    let numeric = STransform::numeric_for(&arcsine).unwrap();
    let mut worst: f64 = 0.0;
    for i in 1..=20 {
        let w = -0.9 * i as f64 / 20.0;
        worst = worst.max((closed.evaluate(w).unwrap() - numeric.evaluate(w).unwrap()).abs());
    }
    println!("closed vs numeric over 20 points: worst {worst:.2e}");

    // The product rule: multiplying S-transforms multiplies the laws freely.
    let prod = s_product(&closed, &closed).unwrap();
    println!(
        "S_arcsine^2(-1/2) = {} (free square of the arcsine law)",
        prod.evaluate(-0.5).unwrap()
    );
    println!("method tags: {} / {} / {}", closed.method_tag(), numeric.method_tag(), prod.method_tag());
}
