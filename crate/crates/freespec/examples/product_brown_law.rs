//! Brown measure of a product `A B` of traceless 2x2 elements from the two
//! free copies: annulus radii from the L2-norm formulas, the radial CDF from
//! the product of S-transforms, and the log-potential identity outside the
//! support.
//!
//! Run with: cargo run --release --example product_brown_law

use freespec::brown::brown_product;
use freespec::mat2::Mat2;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    let a = Mat2::antidiag(c(1.0, 0.0), c(1.0, 0.0));
    let b = Mat2::antidiag(c(1.0, 0.0), c(2.0, 0.0));
    let nu = brown_product(&a, &b).expect("traceless factors");

    println!("A = {a}");
    println!("B = {b}");
    println!(
        "annulus: [{:.9}, {:.9}]  (sqrt(8/5) = {:.9}, sqrt(5/2) = {:.9})",
        nu.r_inner(),
        nu.r_outer(),
        (8.0_f64 / 5.0).sqrt(),
        (2.5_f64).sqrt()
    );

    println!();
    println!("radial CDF:");
    for i in 0..=8 {
        let s = nu.r_inner() + (nu.r_outer() - nu.r_inner()) * i as f64 / 8.0;
        println!("  F({s:.4}) = {:.6}", nu.cdf_at(s));
    }

    println!();
    println!("log-potential outside the support equals log|lambda|:");
    for rho in [1.7, 2.5, 4.0] {
        let lp = nu.log_potential(c(rho, 0.0));
        println!("  |lambda| = {rho}: {lp:.10} vs {:.10}", rho.ln());
    }

    // A singular factor collapses the annulus to a disk and creates an atom.
    let nil = Mat2::unit(0, 1);
    let disk = brown_product(&nil, &a).expect("traceless factors");
    println!();
    println!(
        "singular factor: disk of radius {:.6} with atom {} at 0",
        disk.r_outer(),
        disk.atom_at_zero()
    );
}
