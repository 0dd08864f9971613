//! Express an element of the second matrix copy as a 2x2 matrix over words
//! in the free generators h, u, v, take exact traces, and check the
//! decomposition is a *-homomorphism.
//!
//! Run with: cargo run --release --example word_decomposition

use freespec::freeprod::{decompose, symbolic_trace, tau_p, v1_conjugations, WordExpr};
use freespec::mat2::Mat2;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    let b = Mat2::new([[c(1.0, 0.0), c(2.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
    let d = decompose(&b);
    println!("decomposition of [[1, 2], [0, 1]] (second copy):");
    for (name, i, j) in [("b11", 0, 0), ("b12", 0, 1), ("b21", 1, 0), ("b22", 1, 1)] {
        println!("  {name} = {}", d.entry(i, j));
    }

    println!();
    println!("exact traces:");
    println!("  tau(h^2)           = {}", tau_p(&WordExpr::h_squared()).unwrap());
    println!(
        "  tau(h^2 (1 - h^2)) = {}",
        tau_p(&WordExpr::h_squared().mul(&WordExpr::one_minus_h2())).unwrap()
    );
    let q = decompose(&Mat2::diag(c(1.0, 0.0), c(0.0, 0.0)));
    println!(
        "  tau of the projection image squared = {}",
        symbolic_trace(&q.mul(&q)).unwrap()
    );

    // Multiplicativity: the product of decompositions collapses to the
    // decomposition of the product after normal form.
    let b1 = Mat2::new([[c(0.5, 0.1), c(1.0, 0.0)], [c(0.0, 0.3), c(-0.2, 0.0)]]);
    let b2 = Mat2::new([[c(1.0, 0.0), c(0.0, -0.4)], [c(0.7, 0.0), c(0.1, 0.2)]]);
    let product = decompose(&b1).mul(&decompose(&b2));
    let direct = decompose(&(b1 * b2));
    let defect = symbolic_trace(&product.sub(&direct).mul(&product.sub(&direct).adjoint()))
        .unwrap()
        .norm();
    println!();
    println!("homomorphism defect tau(|D|^2) on a random pair: {defect:.2e}");

    let (e11_image, _) = v1_conjugations();
    println!();
    println!("conjugated unit E11 (a projection):");
    println!("  (1,1) entry = {}", e11_image.entry(0, 0));
}
