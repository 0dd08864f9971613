//! Independent Monte Carlo oracle: the two free copies of the 2x2 algebra
//! are realized by Haar-conjugated block embeddings `U (A (x) I_N) U*`,
//! `V (B (x) I_N) V*` of size `2N`, which become asymptotically free as `N`
//! grows. Eigenvalue clouds, singular values, trace estimates and
//! log-determinants of these models cross-check every analytic law in the
//! crate.
//!
//! Trials are independent: each owns a ChaCha stream derived from
//! `(seed, trial index)`, so results are bit-reproducible regardless of the
//! parallel schedule.

use crate::error::Result;
use crate::mat2::Mat2;
use crate::measures::RadialMeasure;
use crate::moments::WordKind;
use ndarray::Array2;
use ndarray_linalg::{c64, Eig, QRSquare, SVD};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// What a simulation run measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Eigenvalues,
    SingularValues,
    TraceWords,
    LogPotential,
}

#[derive(Debug, Clone, Copy)]
pub struct ModelConfig {
    /// Block size `N`; model matrices are `2N x 2N`.
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub what: Observable,
}

impl ModelConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        ModelConfig {
            n,
            trials,
            seed,
            what: Observable::Eigenvalues,
        }
    }

    /// RNG for one trial: one ChaCha stream per trial index.
    pub fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64 + 1);
        rng
    }
}

/// Pooled eigenvalues (or singular values, stored in the real part) of the
/// model over all trials; `samples.len() = 2N * trials`.
#[derive(Debug, Clone)]
pub struct EmpiricalSpectrum {
    pub samples: Vec<Complex64>,
    pub n: usize,
    pub trials: usize,
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of the diagonal of `R` folded back into `Q`.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> Array2<c64> {
    let mut data = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        data.push(c64::new(re, im) / 2f64.sqrt());
    }
    let g = Array2::from_shape_vec((n, n), data).expect("shape");
    let (q, r) = g.qr_square().expect("QR of a Ginibre sample");
    let mut q = q;
    for j in 0..n {
        let d = r[[j, j]];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64::new(1.0, 0.0) };
        q.column_mut(j).mapv_inplace(|x| x * phase);
    }
    q
}

/// `M (x) I_N` in the block layout used throughout: entry `(i, j)` of the
/// 2x2 matrix becomes the `N x N` block at `(i, j)`.
pub fn kron_identity(m: &Mat2, n: usize) -> Array2<c64> {
    let mut out = Array2::<c64>::zeros((2 * n, 2 * n));
    for i in 0..2 {
        for j in 0..2 {
            let e = m.entry(i, j);
            if e.norm() == 0.0 {
                continue;
            }
            let v = c64::new(e.re, e.im);
            for k in 0..n {
                out[[i * n + k, j * n + k]] = v;
            }
        }
    }
    out
}

fn conjugate(u: &Array2<c64>, m: &Array2<c64>) -> Array2<c64> {
    let uh = u.t().mapv(|x| x.conj());
    u.dot(&m.dot(&uh))
}

/// One sample of the embedded free pair: `(U (A (x) I) U*, V (B (x) I) V*)`
/// with independent Haar `U`, `V` of size `2N`.
pub fn embed_pair(a: &Mat2, b: &Mat2, n: usize, rng: &mut impl Rng) -> (Array2<c64>, Array2<c64>) {
    assert!(n >= 2, "model needs N >= 2");
    let u = haar_unitary(2 * n, rng);
    let v = haar_unitary(2 * n, rng);
    let a_n = conjugate(&u, &kron_identity(a, n));
    let b_n = conjugate(&v, &kron_identity(b, n));
    (a_n, b_n)
}

fn model_matrix(a: &Mat2, b: &Mat2, kind: WordKind, n: usize, rng: &mut impl Rng) -> Array2<c64> {
    let (a_n, b_n) = embed_pair(a, b, n, rng);
    match kind {
        WordKind::Product => a_n.dot(&b_n),
        WordKind::Sum => a_n + b_n,
    }
}

/// Pooled eigenvalue cloud of `X_N = A_N B_N` or `A_N + B_N`.
pub fn empirical_brown(
    a: &Mat2,
    b: &Mat2,
    kind: WordKind,
    cfg: &ModelConfig,
) -> Result<EmpiricalSpectrum> {
    let clouds: Vec<Vec<Complex64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = cfg.trial_rng(trial);
            let x = model_matrix(a, b, kind, cfg.n, &mut rng);
            let (evals, _) = x.eig().expect("dense eigensolve");
            evals
                .iter()
                .map(|z| Complex64::new(z.re, z.im))
                .collect()
        })
        .collect();
    let mut samples = Vec::with_capacity(2 * cfg.n * cfg.trials);
    for cloud in clouds {
        samples.extend(cloud);
    }
    Ok(EmpiricalSpectrum {
        samples,
        n: cfg.n,
        trials: cfg.trials,
    })
}

/// Pooled singular values of the model matrix.
pub fn empirical_singular_values(
    a: &Mat2,
    b: &Mat2,
    kind: WordKind,
    cfg: &ModelConfig,
) -> Result<EmpiricalSpectrum> {
    let pools: Vec<Vec<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = cfg.trial_rng(trial);
            let x = model_matrix(a, b, kind, cfg.n, &mut rng);
            let (_, s, _) = x.svd(false, false).expect("dense SVD");
            s.to_vec()
        })
        .collect();
    let mut samples = Vec::with_capacity(2 * cfg.n * cfg.trials);
    for pool in pools {
        samples.extend(pool.into_iter().map(|s| Complex64::new(s, 0.0)));
    }
    Ok(EmpiricalSpectrum {
        samples,
        n: cfg.n,
        trials: cfg.trials,
    })
}

/// Step-function radial CDF of the pooled moduli; the fraction of moduli
/// below `1e-8` becomes the atom at zero.
pub fn empirical_radial_cdf(spec: &EmpiricalSpectrum) -> Result<RadialMeasure> {
    assert!(!spec.samples.is_empty(), "no samples");
    let mut moduli: Vec<f64> = spec.samples.iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    let total = moduli.len();
    let atom_count = moduli.iter().take_while(|&&m| m < 1e-8).count();
    let atom = atom_count as f64 / total as f64;
    let nonzero = &moduli[atom_count..];
    if nonzero.is_empty() {
        return Ok(RadialMeasure::dirac_zero());
    }
    let r_inner = nonzero[0];
    let r_outer = *nonzero.last().unwrap();
    let stride = (nonzero.len() / 4096).max(1);
    let mut cdf = Vec::with_capacity(nonzero.len() / stride + 2);
    for (i, &m) in nonzero.iter().enumerate() {
        if i % stride == 0 || i + 1 == nonzero.len() {
            cdf.push((m, (atom_count + i + 1) as f64 / total as f64));
        }
    }
    RadialMeasure::new(atom, r_inner, r_outer, cdf)
}

/// Matrix-model log-determinant `(1/2N) sum log sigma_i(X_N - lambda)`,
/// averaged over trials, singular values floored at `1e-14`.
pub fn log_determinant_potential(
    a: &Mat2,
    b: &Mat2,
    kind: WordKind,
    lambda: Complex64,
    cfg: &ModelConfig,
) -> Result<f64> {
    let values: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = cfg.trial_rng(trial);
            let mut x = model_matrix(a, b, kind, cfg.n, &mut rng);
            let shift = c64::new(lambda.re, lambda.im);
            for i in 0..2 * cfg.n {
                x[[i, i]] -= shift;
            }
            let (_, s, _) = x.svd(false, false).expect("dense SVD");
            s.iter().map(|&v| v.max(1e-14).ln()).sum::<f64>() / (2 * cfg.n) as f64
        })
        .collect();
    Ok(values.iter().sum::<f64>() / cfg.trials as f64)
}

/// Mean and standard error of the normalized trace of the word
/// `A_N B_N` (or `A_N + B_N`) raised to nothing: a plain product trace used
/// by consistency checks; the trace of a product is computed entrywise
/// without forming it.
pub fn trace_pair_estimate(
    a: &Mat2,
    b: &Mat2,
    cfg: &ModelConfig,
) -> (f64, f64) {
    let values: Vec<Complex64> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = cfg.trial_rng(trial);
            let (a_n, b_n) = embed_pair(a, b, cfg.n, &mut rng);
            let dim = 2 * cfg.n;
            let mut tr = c64::new(0.0, 0.0);
            for i in 0..dim {
                for j in 0..dim {
                    tr += a_n[[i, j]] * b_n[[j, i]];
                }
            }
            Complex64::new(tr.re, tr.im) / dim as f64
        })
        .collect();
    mean_and_se(&values)
}

/// Monte Carlo estimate of a general word trace: the embedded letters are
/// multiplied left to right.
pub fn trace_word_estimate(
    word: &[(crate::moments::CopyIdx, Mat2)],
    cfg: &ModelConfig,
) -> (f64, f64) {
    use crate::moments::CopyIdx;
    let values: Vec<Complex64> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = cfg.trial_rng(trial);
            let u = haar_unitary(2 * cfg.n, &mut rng);
            let v = haar_unitary(2 * cfg.n, &mut rng);
            let dim = 2 * cfg.n;
            let mut prod: Option<Array2<c64>> = None;
            for (copy, m) in word {
                let embedded = match copy {
                    CopyIdx::First => conjugate(&u, &kron_identity(m, cfg.n)),
                    CopyIdx::Second => conjugate(&v, &kron_identity(m, cfg.n)),
                };
                prod = Some(match prod.take() {
                    Some(p) => p.dot(&embedded),
                    None => embedded,
                });
            }
            let tr = match prod {
                Some(p) => (0..dim).map(|i| p[[i, i]]).sum::<c64>() / dim as f64,
                None => c64::new(1.0, 0.0),
            };
            Complex64::new(tr.re, tr.im)
        })
        .collect();
    mean_and_se(&values)
}

fn mean_and_se(values: &[Complex64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean: Complex64 = values.iter().sum::<Complex64>() / n;
    let var = values
        .iter()
        .map(|v| (v - mean).norm_sqr())
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    (mean.re, (var / n).sqrt())
}

/// Eigenvalues of an arbitrary square complex matrix.
pub fn eigenvalues_of(m: &Array2<c64>) -> Vec<Complex64> {
    let (evals, _) = m.eig().expect("dense eigensolve");
    evals.iter().map(|z| Complex64::new(z.re, z.im)).collect()
}

/// Singular values of an arbitrary complex matrix, descending.
pub fn singular_values_of(m: &Array2<c64>) -> Vec<f64> {
    let (_, s, _) = m.svd(false, false).expect("dense SVD");
    s.to_vec()
}
