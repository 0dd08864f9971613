//! Statistical validation of the random-matrix model against the analytic
//! layer: cloud shapes, radial CDFs, spectra identities and trace-word
//! estimates. These run at the block sizes the tolerances were calibrated
//! for, so this target is the slow part of the suite.

use freespec::brown;
use freespec::freeprod;
use freespec::mat2::Mat2;
use freespec::matrixmodel::{self, ModelConfig};
use freespec::measures::MeasureR;
use freespec::moments::{self, CopyIdx, FreeWord, WordKind};
use ndarray_linalg::c64;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn haar_unitary_product_cloud_sits_on_circle() {
    // A = B = the symmetry: the product is a Haar unitary in the limit, so
    // nearly all eigenvalue moduli concentrate at 1.
    let sym = Mat2::antidiag(c(1.0, 0.0), c(1.0, 0.0));
    let cfg = ModelConfig::new(512, 2, 17);
    let spec = matrixmodel::empirical_brown(&sym, &sym, WordKind::Product, &cfg).unwrap();
    let inside = spec
        .samples
        .iter()
        .filter(|z| (0.9..=1.1).contains(&z.norm()))
        .count();
    let fraction = inside as f64 / spec.samples.len() as f64;
    assert!(fraction >= 0.99, "fraction on the ring {fraction}");
}

#[test]
fn squared_haar_product_still_uniform_on_circle() {
    // Push-forward property under z -> z^2: squaring the model of a Haar
    // unitary leaves the moduli on the unit circle.
    let sym = Mat2::antidiag(c(1.0, 0.0), c(1.0, 0.0));
    let cfg = ModelConfig::new(256, 2, 19);
    let mut rng = cfg.trial_rng(0);
    let (a_n, b_n) = matrixmodel::embed_pair(&sym, &sym, cfg.n, &mut rng);
    let x = a_n.dot(&b_n);
    let squared = x.dot(&x);
    let evals = matrixmodel::eigenvalues_of(&squared);
    let inside = evals
        .iter()
        .filter(|z| (0.85..=1.15).contains(&z.norm()))
        .count();
    assert!(inside as f64 / evals.len() as f64 >= 0.99);
}

#[test]
fn nilpotent_sum_radial_cdf_matches_closed_form() {
    // Empirical radial CDF of the rank-one nilpotent sum vs
    // F(s) = s^2/(1 - s^2): sup distance < 0.03 at N = 1024.
    let nil = Mat2::unit(0, 1);
    let cfg = ModelConfig::new(1024, 2, 23);
    let spec = matrixmodel::empirical_brown(&nil, &nil, WordKind::Sum, &cfg).unwrap();
    let nu = matrixmodel::empirical_radial_cdf(&spec).unwrap();
    let mut sup: f64 = 0.0;
    for i in 0..=1000 {
        let s = std::f64::consts::FRAC_1_SQRT_2 * i as f64 / 1000.0;
        let expected = (s * s / (1.0 - s * s)).min(1.0);
        sup = sup.max((nu.cdf_at(s) - expected).abs());
    }
    assert!(sup < 0.03, "sup distance {sup}");
}

#[test]
fn compression_spectra_insensitive_to_scalar_shift() {
    // sigma(E12 B) = sigma(E12 (lambda + B)): the pooled eigenvalue clouds
    // of the two models stay within Hausdorff distance 0.1.
    let e12 = Mat2::unit(0, 1);
    let b = Mat2::new([[c(1.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
    let shifted = Mat2::identity() + b;
    let cfg = ModelConfig::new(512, 2, 29);
    let cloud1 = matrixmodel::empirical_brown(&e12, &b, WordKind::Product, &cfg)
        .unwrap()
        .samples;
    let cloud2 = matrixmodel::empirical_brown(&e12, &shifted, WordKind::Product, &cfg)
        .unwrap()
        .samples;
    let directed = |from: &[Complex64], to: &[Complex64]| -> f64 {
        from.iter()
            .map(|p| {
                to.iter()
                    .map(|q| (p - q).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    let hausdorff = directed(&cloud1, &cloud2).max(directed(&cloud2, &cloud1));
    assert!(hausdorff <= 0.1, "cloud Hausdorff distance {hausdorff}");
}

#[test]
fn q_model_block_eigenvalues_follow_arcsine() {
    // Kolmogorov-Smirnov distance of the compressed-projection eigenvalues
    // against the arcsine law, N = 1024.
    use ndarray_linalg::{Eigh, UPLO};
    let n = 1024;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let v = matrixmodel::haar_unitary(2 * n, &mut rng);
    let proj = matrixmodel::kron_identity(&Mat2::diag(c(1.0, 0.0), c(0.0, 0.0)), n);
    let vh = v.t().mapv(|x| x.conj());
    let q = v.dot(&proj.dot(&vh));
    let block = q.slice(ndarray::s![0..n, 0..n]).to_owned();
    let (evals, _) = block.eigh(UPLO::Lower).unwrap();
    let mut xs: Vec<f64> = evals.to_vec();
    xs.sort_by(f64::total_cmp);
    let cdf = |t: f64| (2.0 / std::f64::consts::PI) * t.clamp(0.0, 1.0).sqrt().asin();
    let mut ks: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        ks = ks.max((cdf(x) - i as f64 / n as f64).abs());
        ks = ks.max((cdf(x) - (i + 1) as f64 / n as f64).abs());
    }
    assert!(ks < 0.05, "KS distance {ks}");
}

#[test]
fn trace_words_match_monte_carlo() {
    // 20 random words of length <= 6: the model estimate stays within three
    // standard errors of the exact trace.
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut random_mat = |rng: &mut ChaCha8Rng| {
        let mut e = [[c(0.0, 0.0); 2]; 2];
        for row in e.iter_mut() {
            for x in row.iter_mut() {
                *x = c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0);
            }
        }
        Mat2::new(e)
    };
    let cfg = ModelConfig::new(512, 4, 43);
    let mut checked = 0;
    for wi in 0..20 {
        let len = 2 + (wi % 5);
        let letters: Vec<(CopyIdx, Mat2)> = (0..len)
            .map(|i| {
                let copy = if i % 2 == 0 { CopyIdx::First } else { CopyIdx::Second };
                (copy, random_mat(&mut rng))
            })
            .collect();
        let exact = moments::trace_word(&FreeWord::new(letters.clone())).unwrap();
        let (mean, se) = matrixmodel::trace_word_estimate(&letters, &cfg);
        // The finite-N bias scales like 1/N; allow it on top of the trial
        // spread.
        let slack = 3.0 * se.max(1e-3) + 0.02;
        assert!(
            (mean - exact.re).abs() <= slack,
            "word {wi}: model {mean} vs exact {} (se {se})",
            exact.re
        );
        checked += 1;
    }
    assert_eq!(checked, 20);
}

#[test]
fn trace_estimates_tighten_with_trials() {
    // Standard error drops like 1/sqrt(trials).
    let a = Mat2::new([[c(0.4, 0.1), c(1.0, 0.0)], [c(0.3, -0.2), c(-0.4, 0.0)]]);
    let b = Mat2::new([[c(-0.1, 0.0), c(0.2, 0.5)], [c(1.1, 0.0), c(0.6, 0.0)]]);
    let few = ModelConfig::new(128, 8, 47);
    let many = ModelConfig::new(128, 32, 47);
    let (_, se_few) = matrixmodel::trace_pair_estimate(&a, &b, &few);
    let (_, se_many) = matrixmodel::trace_pair_estimate(&a, &b, &many);
    let ratio = se_many / se_few;
    assert!(
        (0.2..=0.9).contains(&ratio),
        "se ratio {ratio} (expected near 0.5)"
    );
}

#[test]
fn log_determinant_multiplicative_at_zero() {
    // For invertible factors, log Delta(AB) = log|det A|^(1/2) + log|det B|^(1/2),
    // exactly realized by the model at lambda = 0.
    let a = Mat2::antidiag(c(1.0, 0.0), c(2.0, 0.0));
    let b = Mat2::diag(c(3.0, 0.0), c(0.5, 0.0));
    let cfg = ModelConfig::new(128, 2, 53);
    let value =
        matrixmodel::log_determinant_potential(&a, &b, WordKind::Product, c(0.0, 0.0), &cfg)
            .unwrap();
    let expected = 0.5 * (a.det().norm().ln() + b.det().norm().ln());
    assert!((value - expected).abs() < 1e-8, "{value} vs {expected}");
}

#[test]
fn unipotent_cloud_fills_example_region() {
    // Eigenvalues of the unipotent product populate the implicit region with
    // c = 1/2 (fraction outside the 0.05-inflated boundary below 2%).
    let a = Mat2::identity() + Mat2::unit(0, 1);
    let region = freespec::spectra::spectrum_example_66(c(1.0, 0.0), c(1.0, 0.0));
    let boundary = region.region.boundary_points(2048);
    let cfg = ModelConfig::new(512, 2, 59);
    let spec = matrixmodel::empirical_brown(&a, &a, WordKind::Product, &cfg).unwrap();
    let outside = spec
        .samples
        .iter()
        .filter(|z| {
            !region.region.contains(**z, 0.0)
                && !boundary.iter().any(|p| (*p - **z).norm() <= 0.05)
        })
        .count();
    let fraction = outside as f64 / spec.samples.len() as f64;
    assert!(fraction < 0.02, "fraction outside {fraction}");
}

#[test]
fn product_third_moment_constant_adjudicated_by_model() {
    // tau((AB)^3) for A = B = diag(2, 0) in the two copies: the closed
    // expansion gives 1 + 3(1+1) + 3*1*1 = 10; the model decides between
    // that and competing constants.
    let d = Mat2::diag(c(2.0, 0.0), c(0.0, 0.0));
    let word: Vec<(CopyIdx, Mat2)> = (0..6)
        .map(|i| {
            let copy = if i % 2 == 0 { CopyIdx::First } else { CopyIdx::Second };
            (copy, d)
        })
        .collect();
    let exact = moments::trace_word(&FreeWord::new(word.clone())).unwrap();
    assert!((exact.re - 10.0).abs() < 1e-12, "exact value {}", exact.re);
    let cfg = ModelConfig::new(512, 4, 61);
    let (mean, se) = matrixmodel::trace_word_estimate(&word, &cfg);
    assert!(
        (mean - 10.0).abs() <= 3.0 * se.max(0.01) + 0.1,
        "model mean {mean}, se {se}"
    );
    // Far from the value 16 that the constant 9 would give.
    assert!((mean - 16.0).abs() > 1.0, "model mean {mean}");
}

#[test]
fn model_realizes_v_free_from_h() {
    // Singular-value second moment of the word h v* sqrt(1-h^2): with the
    // Haar letter between the h-factors, freeness gives
    // tau(s v h^2 v* s) = tau(h^2) tau(1-h^2) = 1/4, distinct from the 1/8
    // of the fused letter h sqrt(1-h^2).
    let e = freespec::freeprod::WordExpr::h()
        .mul(&freespec::freeprod::WordExpr::v_star())
        .mul(&freespec::freeprod::WordExpr::s());
    let exact = freespec::freeprod::tau_p(&e.adjoint().mul(&e)).unwrap();
    assert!((exact.re - 0.25).abs() < 1e-12, "exact {exact}");
    let m = freeprod::SymbolicMat2::new([
        [e, freespec::freeprod::WordExpr::zero()],
        [
            freespec::freeprod::WordExpr::zero(),
            freespec::freeprod::WordExpr::zero(),
        ],
    ]);
    let n = 512;
    let big = freeprod::evaluate_matrix_model(&m, n, 67);
    let block = big.slice(ndarray::s![0..n, 0..n]);
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += block[[i, j]].norm_sqr();
        }
    }
    let second = acc / n as f64;
    assert!((second - 0.25).abs() < 0.02, "second moment {second}");
}

#[test]
fn brown_product_radial_law_against_model() {
    // The full product law (annulus case): empirical radial CDF within 0.05
    // of the analytic one on the bulk of the annulus.
    let a = Mat2::antidiag(c(1.0, 0.0), c(1.0, 0.0));
    let b = Mat2::antidiag(c(1.0, 0.0), c(2.0, 0.0));
    let analytic = brown::brown_product(&a, &b).unwrap();
    let cfg = ModelConfig::new(512, 4, 71);
    let spec = matrixmodel::empirical_brown(&a, &b, WordKind::Product, &cfg).unwrap();
    let empirical = matrixmodel::empirical_radial_cdf(&spec).unwrap();
    let mut sup: f64 = 0.0;
    for i in 0..=400 {
        let s = analytic.r_inner()
            + (analytic.r_outer() - analytic.r_inner()) * i as f64 / 400.0;
        sup = sup.max((empirical.cdf_at(s) - analytic.cdf_at(s)).abs());
    }
    assert!(sup < 0.05, "sup distance {sup}");
}

#[test]
fn decomposition_model_total_trace() {
    // tau estimates from the decomposition model agree with tau(B) for a
    // non-hermitian B.
    let b = Mat2::new([[c(0.7, 0.2), c(0.3, -0.4)], [c(0.0, 1.0), c(-0.2, 0.1)]]);
    let d = freeprod::decompose(&b);
    let n = 256;
    let mut estimates = Vec::new();
    for seed in 0..6 {
        let m = freeprod::evaluate_matrix_model(&d, n, 100 + seed);
        let dim = 2 * n;
        let mut tr = c64::new(0.0, 0.0);
        for i in 0..dim {
            tr += m[[i, i]];
        }
        estimates.push(Complex64::new(tr.re, tr.im) / dim as f64);
    }
    let mean = estimates.iter().sum::<Complex64>() / estimates.len() as f64;
    let spread = estimates
        .iter()
        .map(|v| (v - mean).norm())
        .fold(0.0, f64::max);
    assert!(
        (mean - b.tau()).norm() <= spread.max(0.02),
        "mean {mean} vs tau {}",
        b.tau()
    );
}
