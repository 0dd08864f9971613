//! The spectrum of `A B` for traceless factors in the universal free
//! product: the annulus between the inverse-norm product and the norm
//! product, swept out by a two-parameter family of 2x2 representations, and
//! the rasterized equality of the two ellipse families behind that sweep.
//!
//! Run with: cargo run --release --example annulus_spectrum

use freespec::mat2::Mat2;
use freespec::spectra::{
    canonical_traceless, ellipse_families_equal, representation_spectrum_sampler,
    spectrum_product_traceless,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() {
    let a = Mat2::antidiag(c(1.0, 0.0), c(2.0, 0.0));
    let b = Mat2::antidiag(c(1.0, 0.0), c(3.0, 0.0));

    let spectrum = spectrum_product_traceless(&a, &b).expect("traceless");
    println!("sigma(AB) descriptor: {}", serde_json::to_string(&spectrum).unwrap());

    let cloud = representation_spectrum_sampler(&a, &b, 720).expect("sampler");
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for z in &cloud {
        lo = lo.min(z.norm());
        hi = hi.max(z.norm());
    }
    println!("eigenvalue cloud of {} points: moduli in [{lo:.4}, {hi:.4}]", cloud.len());

    // Canonical antidiagonal forms behind the sweep.
    let m = Mat2::new([[c(0.0, 0.0), c(0.0, 2.0)], [c(0.0, 3.0), c(0.0, 0.0)]]);
    let canon = canonical_traceless(&m).expect("traceless");
    println!(
        "canonical form of [[0, 2i], [3i, 0]]: alpha {}, beta {}, phase {}",
        canon.alpha, canon.beta, canon.phase
    );

    println!();
    for (b1, b2) in [(2.0, 3.0), (1.5, 1.5)] {
        let verdict = ellipse_families_equal(b1, b2).expect("raster");
        println!(
            "ellipse families at ({b1}, {b2}): equal = {}, hausdorff = {:.2e}",
            verdict.equal, verdict.hausdorff
        );
    }
}
