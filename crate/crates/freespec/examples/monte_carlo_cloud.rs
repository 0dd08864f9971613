//! The random-matrix oracle end to end: embed a free pair at block size N,
//! pool eigenvalue clouds over seeded trials, build the empirical radial CDF
//! and compare it with the analytic Brown law, and check the log-determinant
//! identity outside the support.
//!
//! Uses a moderate N so it finishes in seconds; push N up for tighter
//! agreement. Run with: cargo run --release --example monte_carlo_cloud

use freespec::brown::brown_product;
use freespec::mat2::Mat2;
use freespec::matrixmodel::{
    empirical_brown, empirical_radial_cdf, log_determinant_potential, ModelConfig,
};
use freespec::moments::WordKind;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    let a = Mat2::antidiag(c(1.0, 0.0), c(1.0, 0.0));
    let b = Mat2::antidiag(c(1.0, 0.0), c(2.0, 0.0));
    let cfg = ModelConfig::new(128, 8, 42);

    let cloud = empirical_brown(&a, &b, WordKind::Product, &cfg).expect("model");
    println!(
        "pooled {} eigenvalues from {} trials at N = {}",
        cloud.samples.len(),
        cfg.trials,
        cfg.n
    );

    let analytic = brown_product(&a, &b).expect("product law");
    let empirical = empirical_radial_cdf(&cloud).expect("radial cdf");
    println!();
    println!(
        "{:>8} {:>12} {:>12}",
        "s", "empirical F", "analytic F"
    );
    let mut sup: f64 = 0.0;
    for i in 0..=8 {
        let s = analytic.r_inner() + (analytic.r_outer() - analytic.r_inner()) * i as f64 / 8.0;
        let (fe, fa) = (empirical.cdf_at(s), analytic.cdf_at(s));
        sup = sup.max((fe - fa).abs());
        println!("{s:>8.4} {fe:>12.6} {fa:>12.6}");
    }
    println!("sup distance at these points: {sup:.4}");

    println!();
    for rho in [2.0, 3.0] {
        let ld = log_determinant_potential(&a, &b, WordKind::Product, c(rho, 0.0), &cfg)
            .expect("log det");
        println!(
            "log Delta(X - {rho}) = {ld:.6} vs log {rho} = {:.6}",
            rho.ln()
        );
    }
}
