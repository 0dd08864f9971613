//! Exact mixed moments of words in the two free copies, the R-diagonality
//! predicates, and the support classification with its certificates.
//!
//! Run with: cargo run --release --example mixed_moments

use freespec::mat2::Mat2;
use freespec::moments::{
    classify_support, is_r_diagonal_product, is_r_diagonal_sum, moment_sequence, WordKind,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    // The product of the two symmetries is a Haar unitary: all moments 0.
    let sym = Mat2::antidiag(c(1.0, 0.0), c(1.0, 0.0));
    let m = moment_sequence(WordKind::Product, &sym, &sym, 4).unwrap();
    println!("moments of (W3 V3)^k: {:?}", m.iter().map(|z| z.re).collect::<Vec<_>>());

    // R-diagonality.
    let anti = Mat2::antidiag(c(2.0, 0.0), c(3.0, 0.0));
    println!(
        "W3 * [[0,2],[3,0]] R-diagonal: {}",
        is_r_diagonal_product(&sym, &anti).r_diagonal
    );
    println!(
        "1 * B R-diagonal: {}",
        is_r_diagonal_product(&Mat2::identity(), &anti).r_diagonal
    );
    println!(
        "A + B R-diagonal only when it vanishes: {} / {}",
        is_r_diagonal_sum(&Mat2::identity(), &(-Mat2::identity())),
        is_r_diagonal_sum(&Mat2::unit(0, 1), &Mat2::unit(0, 1))
    );

    // Classification of supports.
    println!();
    let w1 = Mat2::diag(c(1.0, 0.0), c(-1.0, 0.0));
    let v1 = Mat2::diag(c(0.0, 1.0), c(0.0, -1.0));
    let cls = classify_support(WordKind::Sum, &w1, &v1);
    println!("diag(1,-1) + diag(i,-i): {:?}", cls.verdict);
    println!("  reason: {}", cls.reason);
    for (name, (re, im)) in &cls.certificates {
        println!("  {name} = {re}{im:+}i");
    }

    let unipotent = Mat2::identity() + Mat2::unit(0, 1);
    let cls = classify_support(WordKind::Product, &unipotent, &unipotent);
    println!();
    println!("(1 + E12)(1 + F12): {:?}", cls.verdict);
    println!("  reason: {}", cls.reason);
}
