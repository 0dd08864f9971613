//! The spectrum of the unipotent product `(1 + alpha E12)(1 + beta F12)`:
//! the implicit region `|lambda - 1|^2 <= |alpha beta| |lambda| / 2`, its
//! boundary sampler, and membership tests.
//!
//! Run with: cargo run --release --example triangular_region

use freespec::spectra::spectrum_example_66;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    let s = spectrum_example_66(c(2.0, 0.0), c(2.0, 0.0));
    println!("descriptor: {}", serde_json::to_string(&s).unwrap());

    let boundary = s.region.boundary_points(361);
    println!("boundary sample of {} points; on the real axis:", boundary.len());
    let mut on_axis: Vec<f64> = boundary
        .iter()
        .filter(|z| z.im.abs() < 1e-9)
        .map(|z| z.re)
        .collect();
    on_axis.sort_by(f64::total_cmp);
    on_axis.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    println!("  {on_axis:?} (2 - sqrt3 = {:.6}, 2 + sqrt3 = {:.6})", 2.0 - 3.0_f64.sqrt(), 2.0 + 3.0_f64.sqrt());

    println!();
    println!("membership (c = 2):");
    for z in [c(1.0, 0.0), c(2.0, 1.0), c(-0.5, 0.0), c(4.0, 0.0)] {
        println!("  {z} in sigma: {}", s.region.contains(z, 0.0));
    }

    // Degenerate case: alpha beta = 0 collapses the region to {1}.
    let point = spectrum_example_66(c(0.0, 0.0), c(5.0, 0.0));
    println!();
    println!("alpha beta = 0: {}", serde_json::to_string(&point.region).unwrap());
}
