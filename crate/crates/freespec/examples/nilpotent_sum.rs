//! Brown measure and spectral radius of `alpha E12 + beta F12`, the sum of
//! the two rank-one nilpotents: a disk of radius `sqrt(|alpha beta|/2)` with
//! an explicit radial law, plus the two compression examples built from the
//! same rank-one component.
//!
//! Run with: cargo run --release --example nilpotent_sum

use freespec::brown::{brown_example_64, brown_example_65, brown_sum_nilpotents};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    for (alpha, beta) in [(c(1.0, 0.0), c(1.0, 0.0)), (c(2.0, 0.0), c(2.0, 0.0))] {
        let nu = brown_sum_nilpotents(alpha, beta);
        println!(
            "alpha = {alpha}, beta = {beta}: disk radius {:.6}, F(r/2) = {:.6}",
            nu.r_outer(),
            nu.cdf_at(nu.r_outer() / 2.0)
        );
    }
    let degenerate = brown_sum_nilpotents(c(1.0, 0.0), c(0.0, 0.0));
    println!(
        "alpha beta = 0: point mass at the origin (atom {})",
        degenerate.atom_at_zero()
    );

    println!();
    let mix = brown_example_64(c(1.0, 0.0), c(1.0, 0.0));
    let comp = &mix.components[0];
    println!("compression E11 (1 + F12):");
    println!(
        "  (1/2) delta_0  +  (1/2) x disk centered at {} of radius {:.6}",
        comp.center,
        comp.radial.r_outer()
    );

    let nu65 = brown_example_65(c(1.0, 0.0), c(0.0, 0.0));
    println!();
    println!(
        "E12 diag(1, 0): disk at the origin of radius {:.6} = 1/(2 sqrt 2)",
        nu65.r_outer()
    );
}
