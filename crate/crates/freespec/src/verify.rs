//! The cross-validation suite: every closed-form law in the crate checked
//! against its independent route (quadrature identities, the random-matrix
//! model, exhaustive predicate grids, exact moment identities), each with a
//! pinned tolerance. The CLI `verify` subcommand prints one line per
//! criterion; the acceptance test target asserts each one.

use crate::brown;
use crate::freeprod::{self, SymbolicMat2, WordExpr};
use crate::mat2::Mat2;
use crate::matrixmodel::{self, ModelConfig};
use crate::measures::MeasureR;
use crate::moments::{self, WordKind};
use crate::spectra;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub tolerance: String,
    pub measured: String,
    pub pass: bool,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:2}  {:<38} tol {:<22} measured {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.tolerance,
            self.measured
        )
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 1. The radial inversion of the arcsine law reproduces the closed-form
/// radial CDF `F(s) = s^2/(1-s^2)` on `[0, 1/sqrt 2]` in sup norm.
pub fn criterion_1() -> CriterionReport {
    let start = Instant::now();
    let nu = brown::haagerup_larsen(&MeasureR::arcsine01()).expect("arcsine inversion");
    let mut sup: f64 = 0.0;
    for i in 0..=4000 {
        let s = nu.r_outer() * i as f64 / 4000.0;
        let expected = (s * s / (1.0 - s * s)).min(1.0);
        sup = sup.max((nu.cdf_at(s) - expected).abs());
    }
    let elapsed = start.elapsed();
    let pass = sup < 1e-5 && elapsed.as_secs_f64() < 1.0;
    CriterionReport {
        id: 1,
        name: "radial inversion of arcsine law",
        tolerance: "sup < 1e-5, < 1s".into(),
        measured: format!("sup {:.2e}, {:.2}s", sup, elapsed.as_secs_f64()),
        pass,
    }
}

/// 2. Spectral radius of the rank-one nilpotent sum from the eigenvalue
/// cloud: max modulus in [0.67, 0.74] (target `1/sqrt 2`).
pub fn criterion_2(seed: u64) -> CriterionReport {
    let a = Mat2::unit(0, 1);
    let cfg = ModelConfig::new(512, 16, seed);
    let spec = matrixmodel::empirical_brown(&a, &a, WordKind::Sum, &cfg).expect("model");
    let max_mod = spec.samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pass = (0.67..=0.74).contains(&max_mod);
    CriterionReport {
        id: 2,
        name: "nilpotent-sum spectral radius (model)",
        tolerance: "max modulus in [0.67, 0.74]".into(),
        measured: format!("max modulus {:.4} (target 0.7071)", max_mod),
        pass,
    }
}

/// 3. `int t(1-t) darcsine = 1/8` to 1e-10, and the model second moment of
/// the rank-one radial part at N = 1024 is 0.125 +- 0.01.
pub fn criterion_3(seed: u64) -> CriterionReport {
    let exact = MeasureR::arcsine01().integrate(|t| t * (1.0 - t));
    let quad_ok = (exact - 0.125).abs() <= 1e-10;

    let n = 1024;
    let e = WordExpr::h_s().mul(&WordExpr::u());
    let m = SymbolicMat2::new([
        [e, WordExpr::zero()],
        [WordExpr::zero(), WordExpr::zero()],
    ]);
    let big = freeprod::evaluate_matrix_model(&m, n, seed);
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += big[[i, j]].norm_sqr();
        }
    }
    let second = acc / n as f64;
    let model_ok = (second - 0.125).abs() <= 0.01;
    CriterionReport {
        id: 3,
        name: "rank-one radial second moment 1/8",
        tolerance: "quad 1e-10, model +-0.01".into(),
        measured: format!("quad {:.3e} off, model {:.4}", (exact - 0.125).abs(), second),
        pass: quad_ok && model_ok,
    }
}

/// 4. Annulus coverage: representation-family extremes within 1e-2 of
/// `[1, b1 b2]` and the two ellipse families equal within Hausdorff 1e-2.
pub fn criterion_4() -> CriterionReport {
    let start = Instant::now();
    let mut measured = Vec::new();
    let mut pass = true;
    for (b1, b2) in [(2.0, 3.0), (1.5, 1.5)] {
        let a = Mat2::antidiag(c(1.0, 0.0), c(b1, 0.0));
        let b = Mat2::antidiag(c(1.0, 0.0), c(b2, 0.0));
        let cloud = spectra::representation_spectrum_sampler(&a, &b, 720).expect("sampler");
        let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
        for z in &cloud {
            lo = lo.min(z.norm());
            hi = hi.max(z.norm());
        }
        let extremes_ok = (lo - 1.0).abs() < 1e-2 && (hi - b1 * b2).abs() < 1e-2;
        let verdict = spectra::ellipse_families_equal(b1, b2).expect("raster");
        pass &= extremes_ok && verdict.equal;
        measured.push(format!(
            "({b1},{b2}): [{lo:.4},{hi:.4}] hausdorff {:.1e}",
            verdict.hausdorff
        ));
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 10.0;
    CriterionReport {
        id: 4,
        name: "annulus sweep and ellipse families",
        tolerance: "extremes 1e-2, hausdorff 1e-2, < 10s".into(),
        measured: format!("{} in {elapsed:.1}s", measured.join("; ")),
        pass,
    }
}

/// 5. Product-law radii `(sqrt(8/5), sqrt(5/2))` to 1e-9, and >= 98% of the
/// model eigenvalue moduli inside the annulus widened by 0.05.
pub fn criterion_5(seed: u64) -> CriterionReport {
    let a = Mat2::antidiag(c(1.0, 0.0), c(1.0, 0.0));
    let b = Mat2::antidiag(c(1.0, 0.0), c(2.0, 0.0));
    let nu = brown::brown_product(&a, &b).expect("product law");
    let r_in_exact = (8.0_f64 / 5.0).sqrt();
    let r_out_exact = (5.0_f64 / 2.0).sqrt();
    let radii_ok = (nu.r_inner() - r_in_exact).abs() <= 1e-9
        && (nu.r_outer() - r_out_exact).abs() <= 1e-9;

    let cfg = ModelConfig::new(512, 16, seed);
    let spec = matrixmodel::empirical_brown(&a, &b, WordKind::Product, &cfg).expect("model");
    let inside = spec
        .samples
        .iter()
        .filter(|z| {
            let r = z.norm();
            r >= r_in_exact - 0.05 && r <= r_out_exact + 0.05
        })
        .count();
    let fraction = inside as f64 / spec.samples.len() as f64;
    let pass = radii_ok && fraction >= 0.98;
    CriterionReport {
        id: 5,
        name: "product-law radii and model containment",
        tolerance: "radii 1e-9, containment >= 98%".into(),
        measured: format!(
            "radii off ({:.1e}, {:.1e}), containment {:.2}%",
            (nu.r_inner() - r_in_exact).abs(),
            (nu.r_outer() - r_out_exact).abs(),
            100.0 * fraction
        ),
        pass,
    }
}

/// 6. R-diagonality predicates agree with the trace criteria on the full
/// 8 x 8 grid of matrix classes.
pub fn criterion_6() -> CriterionReport {
    let grid: Vec<Mat2> = vec![
        Mat2::zero(),
        Mat2::identity(),
        Mat2::scalar(c(2.0, 1.0)),
        Mat2::unit(0, 1),
        Mat2::antidiag(c(1.0, 0.0), c(2.0, 0.0)),
        Mat2::diag(c(1.0, 0.0), c(-1.0, 0.0)),
        Mat2::diag(c(1.0, 0.0), c(0.0, 0.0)),
        Mat2::identity() + Mat2::unit(0, 1),
    ];
    let mut checked = 0;
    let mut failures = 0;
    for a in &grid {
        for b in &grid {
            checked += 1;
            let product = moments::is_r_diagonal_product(a, b);
            let expected_product = a.is_traceless() && b.is_traceless();
            if product.r_diagonal != expected_product {
                failures += 1;
            }
            let sum = moments::is_r_diagonal_sum(a, b);
            let expected_sum = a.is_scalar() && b.is_scalar() && (*a + *b).is_zero();
            if sum != expected_sum {
                failures += 1;
            }
        }
    }
    CriterionReport {
        id: 6,
        name: "R-diagonality predicate truth table",
        tolerance: "64 cases, 0 counterexamples".into(),
        measured: format!("{checked} cases, {failures} failures"),
        pass: failures == 0 && checked == 64,
    }
}

/// 7. Exact moment identities for sums of centered elements and products of
/// unit-trace elements, on 50 random instances each.
pub fn criterion_7(seed: u64) -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_mat = |rng: &mut ChaCha8Rng| {
        let mut e = [[c(0.0, 0.0); 2]; 2];
        for row in e.iter_mut() {
            for x in row.iter_mut() {
                *x = c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0);
            }
        }
        Mat2::new(e)
    };
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let a1 = random_mat(&mut rng).centered();
        let b1 = random_mat(&mut rng).centered();
        let m4 = moments::moment_sequence(WordKind::Sum, &a1, &b1, 4).expect("moments")[3];
        let expected = (a1 * a1 * a1 * a1).tau()
            + (b1 * b1 * b1 * b1).tau()
            + 4.0 * (a1 * a1).tau() * (b1 * b1).tau();
        worst = worst.max((m4 - expected).norm());

        let a = Mat2::identity() + a1;
        let b = Mat2::identity() + b1;
        let m2 = moments::moment_sequence(WordKind::Product, &a, &b, 2).expect("moments")[1];
        let expected2 = c(1.0, 0.0) + (a1 * a1).tau() + (b1 * b1).tau();
        worst = worst.max((m2 - expected2).norm());
    }
    CriterionReport {
        id: 7,
        name: "exact fourth/second moment identities",
        tolerance: "<= 1e-12".into(),
        measured: format!("worst deviation {:.2e}", worst),
        pass: worst <= 1e-12,
    }
}

/// 8. Trace preservation of the symbolic decomposition through fourth
/// powers, and the compression-model singular values against the arcsine
/// law (Kolmogorov-Smirnov at N = 1024).
pub fn criterion_8(seed: u64) -> CriterionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51ec);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let mut e = [[c(0.0, 0.0); 2]; 2];
        for row in e.iter_mut() {
            for x in row.iter_mut() {
                *x = c(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0);
            }
        }
        let b = Mat2::new(e);
        let d = freeprod::decompose(&b);
        let mut sym_power = d.clone();
        let mut mat_power = b;
        for _ in 1..=4 {
            let t = freeprod::symbolic_trace(&sym_power).expect("trace");
            worst = worst.max((t - mat_power.tau()).norm());
            sym_power = sym_power.mul(&d);
            mat_power = mat_power * b;
        }
    }
    let trace_ok = worst <= 1e-10;

    // Compression model: the upper-left block of a Haar-conjugated rank-N
    // projection has the arcsine eigenvalue law.
    let n = 1024;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
    let v = matrixmodel::haar_unitary(2 * n, &mut rng);
    let q = {
        let proj = matrixmodel::kron_identity(&Mat2::diag(c(1.0, 0.0), c(0.0, 0.0)), n);
        let vh = v.t().mapv(|x| x.conj());
        v.dot(&proj.dot(&vh))
    };
    let block = q.slice(ndarray::s![0..n, 0..n]).to_owned();
    let (evals, _) = block.eigh(UPLO::Lower).expect("hermitian eigensolve");
    let mut xs: Vec<f64> = evals.to_vec();
    xs.sort_by(f64::total_cmp);
    let cdf = |t: f64| (2.0 / std::f64::consts::PI) * t.clamp(0.0, 1.0).sqrt().asin();
    let mut ks: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        ks = ks.max((f - i as f64 / n as f64).abs());
        ks = ks.max((f - (i + 1) as f64 / n as f64).abs());
    }
    let ks_ok = ks < 0.05;
    CriterionReport {
        id: 8,
        name: "decomposition traces and arcsine block",
        tolerance: "traces 1e-10, KS < 0.05".into(),
        measured: format!("worst trace {:.2e}, KS {:.4}", worst, ks),
        pass: trace_ok && ks_ok,
    }
}

/// 9. Unipotent-product eigenvalue cloud inside the implicit region
/// `|lambda - 1|^2 <= |alpha beta| |lambda| / 2` inflated by 0.05.
pub fn criterion_9(seed: u64) -> CriterionReport {
    let a = Mat2::identity() + Mat2::unit(0, 1);
    let region = spectra::spectrum_example_66(c(1.0, 0.0), c(1.0, 0.0));
    let boundary = region.region.boundary_points(4096);
    let cfg = ModelConfig::new(512, 16, seed);
    let spec = matrixmodel::empirical_brown(&a, &a, WordKind::Product, &cfg).expect("model");
    let inside = spec
        .samples
        .iter()
        .filter(|z| {
            region.region.contains(**z, 0.0)
                || boundary.iter().any(|p| (*p - **z).norm() <= 0.05)
        })
        .count();
    let fraction = inside as f64 / spec.samples.len() as f64;
    CriterionReport {
        id: 9,
        name: "unipotent-product region containment",
        tolerance: ">= 98% within region + 0.05".into(),
        measured: format!("containment {:.2}%", 100.0 * fraction),
        pass: fraction >= 0.98,
    }
}

/// 10. The matrix-model log-determinant matches `log |lambda|` outside the
/// support for three analytic laws and five moduli each.
pub fn criterion_10(seed: u64) -> CriterionReport {
    let sym = Mat2::antidiag(c(1.0, 0.0), c(1.0, 0.0));
    let anti2 = Mat2::antidiag(c(1.0, 0.0), c(2.0, 0.0));
    let nil = Mat2::unit(0, 1);
    let cases: [(&Mat2, &Mat2, WordKind, f64); 3] = [
        (&sym, &anti2, WordKind::Product, (5.0_f64 / 2.0).sqrt()),
        (&nil, &nil, WordKind::Sum, std::f64::consts::FRAC_1_SQRT_2),
        (&sym, &sym, WordKind::Product, 1.0),
    ];
    let cfg = ModelConfig::new(512, 2, seed);
    let mut worst: f64 = 0.0;
    for (case_idx, (a, b, kind, r_out)) in cases.iter().enumerate() {
        for (k, factor) in [1.1, 1.3, 1.7, 2.5, 4.0].iter().enumerate() {
            let rho = r_out * factor;
            let angle = 0.7 * (k as f64 + 1.0) + case_idx as f64;
            let lambda = Complex64::from_polar(rho, angle);
            let value = matrixmodel::log_determinant_potential(a, b, *kind, lambda, &cfg)
                .expect("log det");
            worst = worst.max((value - rho.ln()).abs());
        }
    }
    CriterionReport {
        id: 10,
        name: "log-determinant outside the support",
        tolerance: "< 0.01".into(),
        measured: format!("worst |error| {:.4}", worst),
        pass: worst < 0.01,
    }
}

/// Run all criteria with one seed.
pub fn run_suite(seed: u64) -> Vec<CriterionReport> {
    vec![
        criterion_1(),
        criterion_2(seed),
        criterion_3(seed),
        criterion_4(),
        criterion_5(seed),
        criterion_6(),
        criterion_7(seed),
        criterion_8(seed),
        criterion_9(seed),
        criterion_10(seed),
    ]
}
