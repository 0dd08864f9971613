//! Spectra of products of free 2x2 matrices: spectral-radius formulas for
//! normal and traceless factors, the annulus description of `sigma(AB)`,
//! canonical antidiagonal forms, the two-parameter representation family that
//! sweeps the annulus, the two ellipse-family parametrizations whose equality
//! closes the annulus argument, and the implicit region of the unipotent
//! product example.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Which algebra a spectral statement is computed relative to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ambient {
    /// Universal (full) free product C*-algebra.
    #[serde(rename = "universal-cstar")]
    UniversalCStar,
    /// Reduced free product von Neumann algebra.
    #[serde(rename = "reduced-von-neumann")]
    ReducedVonNeumann,
}

/// Spectrum descriptor.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpectrumRegion {
    /// Closed annulus centered at 0.
    Annulus { r_inner: f64, r_outer: f64 },
    /// Closed disk.
    Disk { center: (f64, f64), radius: f64 },
    Union { parts: Vec<SpectrumRegion> },
    PointSet { points: Vec<(f64, f64)> },
    /// `{lambda : |lambda - 1|^2 <= c |lambda|}`.
    ImplicitCardioid { c: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct Spectrum {
    #[serde(flatten)]
    pub region: SpectrumRegion,
    pub ambient: Ambient,
}

impl SpectrumRegion {
    /// Membership with a nonnegative slack `tol` (inflates the region).
    pub fn contains(&self, lambda: Complex64, tol: f64) -> bool {
        match self {
            SpectrumRegion::Annulus { r_inner, r_outer } => {
                let r = lambda.norm();
                r >= r_inner - tol && r <= r_outer + tol
            }
            SpectrumRegion::Disk { center, radius } => {
                (lambda - Complex64::new(center.0, center.1)).norm() <= radius + tol
            }
            SpectrumRegion::Union { parts } => parts.iter().any(|p| p.contains(lambda, tol)),
            SpectrumRegion::PointSet { points } => points
                .iter()
                .any(|&(re, im)| (lambda - Complex64::new(re, im)).norm() <= tol),
            SpectrumRegion::ImplicitCardioid { c } => {
                // tol inflates in the Euclidean metric: accept if some point
                // within distance tol satisfies the inequality. Cheap
                // sufficient check: relax the defining inequality by the
                // first-order slack of both sides.
                let r = lambda.norm();
                let lhs = (lambda - Complex64::new(1.0, 0.0)).norm_sqr();
                let slack = tol * (2.0 * (r + 1.0) + c);
                lhs <= c * r + slack
            }
        }
    }

    /// Points satisfying the defining boundary equality to 1e-10.
    pub fn boundary_points(&self, n: usize) -> Vec<Complex64> {
        match self {
            SpectrumRegion::Annulus { r_inner, r_outer } => {
                let mut pts = circle_points(*r_outer, n);
                if r_inner > &0.0 && r_inner < r_outer {
                    pts.extend(circle_points(*r_inner, n));
                }
                pts
            }
            SpectrumRegion::Disk { center, radius } => circle_points(*radius, n)
                .into_iter()
                .map(|z| z + Complex64::new(center.0, center.1))
                .collect(),
            SpectrumRegion::Union { parts } => parts
                .iter()
                .flat_map(|p| p.boundary_points(n))
                .collect(),
            SpectrumRegion::PointSet { points } => points
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect(),
            SpectrumRegion::ImplicitCardioid { c } => {
                // Per angle theta solve r^2 - (2 cos theta + c) r + 1 = 0 and
                // emit both roots where the discriminant is nonnegative. For
                // c < 4 the region does not encircle the origin and only the
                // sector cos theta >= (2 - c)/2 meets the boundary, so the
                // angles are drawn from that sector.
                let mut pts = Vec::with_capacity(2 * n);
                let angles: Vec<f64> = if *c >= 4.0 {
                    (0..n)
                        .map(|k| std::f64::consts::TAU * k as f64 / n as f64)
                        .collect()
                } else {
                    let theta_max = ((2.0 - c) / 2.0).clamp(-1.0, 1.0).acos();
                    (0..n)
                        .map(|k| -theta_max + 2.0 * theta_max * k as f64 / (n - 1).max(1) as f64)
                        .collect()
                };
                for theta in angles {
                    let b = 2.0 * theta.cos() + c;
                    let disc = b * b - 4.0;
                    if disc >= 0.0 && b > 0.0 {
                        let root = disc.sqrt();
                        for r in [(b - root) / 2.0, (b + root) / 2.0] {
                            pts.push(Complex64::from_polar(r, theta));
                        }
                    }
                }
                pts
            }
        }
    }
}

fn circle_points(radius: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusMode {
    /// Both factors normal.
    Normal,
    /// Both factors traceless.
    Traceless,
}

#[derive(Debug, Clone, Copy)]
pub struct SpectralRadius {
    pub radius: f64,
    pub mode: RadiusMode,
    pub ambient: Ambient,
}

/// `r(AB) = ||A|| ||B||` for normal factors, and equally for traceless
/// factors; the formula holds relative to both the universal and the reduced
/// algebra, so the ambient is recorded rather than computed.
pub fn spectral_radius_product(
    a: &Mat2,
    b: &Mat2,
    mode: RadiusMode,
    ambient: Ambient,
) -> Result<SpectralRadius> {
    match mode {
        RadiusMode::Normal => {
            if !a.is_normal() || !b.is_normal() {
                return Err(Error::Precondition(
                    "normal mode requires normal factors".into(),
                ));
            }
        }
        RadiusMode::Traceless => {
            if !a.is_traceless() || !b.is_traceless() {
                return Err(Error::Precondition(
                    "traceless mode requires Tr(A) = Tr(B) = 0".into(),
                ));
            }
        }
    }
    Ok(SpectralRadius {
        radius: a.op_norm() * b.op_norm(),
        mode,
        ambient,
    })
}

/// `sigma(AB)` for traceless factors relative to the universal free product:
/// the annulus with radii `(||A^{-1}||^{-1} ||B^{-1}||^{-1}, ||A|| ||B||)`,
/// degenerating to a disk when a factor is singular.
pub fn spectrum_product_traceless(a: &Mat2, b: &Mat2) -> Result<Spectrum> {
    if !a.is_traceless() || !b.is_traceless() {
        return Err(Error::Precondition(
            "product spectrum requires Tr(A) = Tr(B) = 0".into(),
        ));
    }
    let r_outer = a.op_norm() * b.op_norm();
    let (ia, ib) = (a.inv_op_norm(), b.inv_op_norm());
    let r_inner = if ia.is_infinite() || ib.is_infinite() {
        0.0
    } else {
        1.0 / (ia * ib)
    };
    let region = if r_inner == 0.0 {
        SpectrumRegion::Disk {
            center: (0.0, 0.0),
            radius: r_outer,
        }
    } else {
        SpectrumRegion::Annulus { r_inner, r_outer }
    };
    Ok(Spectrum {
        region,
        ambient: Ambient::UniversalCStar,
    })
}

/// Canonical antidiagonal form of a traceless 2x2 matrix: `A` is unitarily
/// equivalent to `phase * [[0, alpha], [beta, 0]]` with
/// `alpha >= beta >= 0` the singular values and `phase` a unit scalar.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalTraceless {
    pub alpha: f64,
    pub beta: f64,
    pub phase: Complex64,
}

impl CanonicalTraceless {
    pub fn matrix(&self) -> Mat2 {
        Mat2::antidiag(
            self.phase * self.alpha,
            self.phase * self.beta,
        )
    }
}

pub fn canonical_traceless(a: &Mat2) -> Result<CanonicalTraceless> {
    if !a.is_traceless() {
        return Err(Error::Precondition(
            "canonical antidiagonal form requires Tr(A) = 0".into(),
        ));
    }
    let (alpha, beta) = a.singular_values();
    if alpha == 0.0 {
        return Ok(CanonicalTraceless {
            alpha: 0.0,
            beta: 0.0,
            phase: Complex64::new(1.0, 0.0),
        });
    }
    if beta <= 1e-14 * alpha {
        // Rank one: the phase is absorbed by a diagonal unitary conjugation.
        return Ok(CanonicalTraceless {
            alpha,
            beta: 0.0,
            phase: Complex64::new(1.0, 0.0),
        });
    }
    // det(phase [[0, alpha], [beta, 0]]) = -phase^2 alpha beta.
    let mut phase_sq = -a.det() / (alpha * beta);
    if phase_sq.im == 0.0 {
        // Normalize -0.0 so the principal square root lands on the upper
        // half-plane branch.
        phase_sq.im = 0.0;
    }
    let phase = phase_sq.sqrt();
    Ok(CanonicalTraceless { alpha, beta, phase })
}

/// Eigenvalue cloud of `pi(AB)` over the two-parameter family of
/// representations that sweeps the annulus; `grid` angles per parameter.
///
/// Both factors are first brought to canonical antidiagonal form. Invertible
/// pair: `pi(AB) = U(phi, psi) A U(phi, psi)^* B` with
/// `U = [[cos psi, e^{i phi} sin psi], [-sin psi, e^{i phi} cos psi]]`.
/// Singular factor: the rotated compression with eigenvalues
/// `{beta cos^2 theta - alpha sin^2 theta, 0}`, swept through all phases.
pub fn representation_spectrum_sampler(a: &Mat2, b: &Mat2, grid: usize) -> Result<Vec<Complex64>> {
    if !a.is_traceless() || !b.is_traceless() {
        return Err(Error::Precondition(
            "representation sampler requires Tr(A) = Tr(B) = 0".into(),
        ));
    }
    let ca = canonical_traceless(a)?;
    let cb = canonical_traceless(b)?;
    // Order so that a singular factor, if any, is on the left.
    let (first, second) = if cb.beta == 0.0 && ca.beta > 0.0 {
        (cb, ca)
    } else {
        (ca, cb)
    };
    let mut cloud = Vec::with_capacity(grid * grid * 2);
    if first.beta == 0.0 {
        // Rotated compression: sigma(pi(AB)) = {a1 (a2 cos^2 - b2 sin^2), 0},
        // with the rotation-invariance sweep filling in all phases.
        for i in 0..grid {
            let theta = std::f64::consts::TAU * i as f64 / grid as f64;
            let real = first.alpha
                * (second.alpha * theta.cos().powi(2) - second.beta * theta.sin().powi(2));
            for j in 0..grid {
                let phi = std::f64::consts::TAU * j as f64 / grid as f64;
                cloud.push(Complex64::from_polar(1.0, phi) * real);
                cloud.push(Complex64::new(0.0, 0.0));
            }
        }
        return Ok(cloud);
    }
    // Invertible case: normalize to [[0,1],[r,0]] with r >= 1 and restore the
    // scalar factor afterwards.
    let ra = first.alpha / first.beta;
    let rb = second.alpha / second.beta;
    let scale = first.phase * second.phase * Complex64::new(first.beta * second.beta, 0.0);
    let a_mat = Mat2::antidiag(Complex64::new(1.0, 0.0), Complex64::new(ra, 0.0));
    let b_mat = Mat2::antidiag(Complex64::new(1.0, 0.0), Complex64::new(rb, 0.0));
    let rows: Vec<Vec<Complex64>> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let psi = std::f64::consts::TAU * i as f64 / grid as f64;
            let (s, c) = psi.sin_cos();
            let mut row = Vec::with_capacity(grid * 2);
            for j in 0..grid {
                let phi = std::f64::consts::TAU * j as f64 / grid as f64;
                let e = Complex64::from_polar(1.0, phi);
                let u = Mat2::new([
                    [Complex64::new(c, 0.0), e * s],
                    [Complex64::new(-s, 0.0), e * c],
                ]);
                let m = u * a_mat * u.adjoint() * b_mat;
                let (l1, l2) = m.eigenvalues();
                row.push(l1 * scale);
                row.push(l2 * scale);
            }
            row
        })
        .collect();
    for row in rows {
        cloud.extend(row);
    }
    Ok(cloud)
}

/// Verdict of the rasterized comparison of the two ellipse families.
#[derive(Debug, Clone, Copy)]
pub struct EllipseVerdict {
    pub equal: bool,
    pub hausdorff: f64,
}

const RASTER: usize = 1024;
const PARAM_SAMPLES: usize = 1024;

/// Compare the two ellipse-family parametrizations of the annulus image:
/// the union over `r in [1, b1 b2]` of ellipses with semi-axes
/// `|r + b1 b2 / r|`, `|r - b1 b2 / r|`, and the union over `alpha in [0,1]`
/// with semi-axes `|alpha(1+b1)(1+b2) - (1+b1 b2)|`,
/// `|alpha(b1-1)(b2+1) + (1-b1 b2)|`. Both are rasterized from their own
/// parametrization and compared by the symmetric Hausdorff distance of the
/// filled pixel sets (threshold 1e-2 at a 1024^2 raster).
pub fn ellipse_families_equal(beta1: f64, beta2: f64) -> Result<EllipseVerdict> {
    if beta1 < 1.0 || beta2 < 1.0 {
        return Err(Error::Precondition("requires beta1, beta2 >= 1".into()));
    }
    let c = beta1 * beta2;
    let half = 1.0 + c + 0.05;
    let px = 2.0 * half / RASTER as f64;

    // Family 1 in the variable v = (r + c/r)^2, so the quadratic form
    // x^2/v + y^2/(v - 4c) decreases along the sweep; listed largest-first
    // so the first sample minimizes the form over the family.
    let v_lo = 4.0 * c;
    let v_hi = (1.0 + c) * (1.0 + c);
    let axes1: Vec<(f64, f64)> = (0..=PARAM_SAMPLES)
        .rev()
        .map(|k| {
            let v = v_lo + (v_hi - v_lo) * k as f64 / PARAM_SAMPLES as f64;
            (v.sqrt(), (v - v_lo).max(0.0).sqrt())
        })
        .collect();
    // Family 2 in alpha; both semi-axes are maximal at alpha = 0, so the
    // first sample again minimizes the form.
    let p = (1.0 + beta1) * (1.0 + beta2);
    let q = (beta1 - 1.0) * (beta2 + 1.0);
    let axes2: Vec<(f64, f64)> = (0..=PARAM_SAMPLES)
        .map(|k| {
            let alpha = k as f64 / PARAM_SAMPLES as f64;
            ((alpha * p - (1.0 + c)).abs(), (alpha * q + (1.0 - c)).abs())
        })
        .collect();

    let mask1 = rasterize_family(&axes1, half);
    let mask2 = rasterize_family(&axes2, half);
    let hausdorff = mask_hausdorff(&mask1, &mask2, px);
    Ok(EllipseVerdict {
        equal: hausdorff < 1e-2,
        hausdorff,
    })
}

/// Pixel-center membership in the union of ellipse curves
/// `x^2/a(s)^2 + y^2/b(s)^2 = 1`: a crossing of 1 by the sampled quadratic
/// form (infinities from degenerate axes included, so the degenerate-segment
/// members are captured by the spike on either side).
///
/// The caller lists the family with the largest ellipse first; since the
/// form is minimized there, a first sample above 1 settles the pixel as
/// outside after one evaluation.
fn rasterize_family(axes: &[(f64, f64)], half: f64) -> Vec<bool> {
    let px = 2.0 * half / RASTER as f64;
    let inv: Vec<(f64, f64)> = axes
        .iter()
        .map(|&(a, b)| {
            (
                if a > 0.0 { 1.0 / (a * a) } else { f64::INFINITY },
                if b > 0.0 { 1.0 / (b * b) } else { f64::INFINITY },
            )
        })
        .collect();
    let eval = |x2: f64, y2: f64, ia: f64, ib: f64| -> f64 {
        let qa = if ia.is_finite() {
            x2 * ia
        } else if x2 == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let qb = if ib.is_finite() {
            y2 * ib
        } else if y2 == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        qa + qb
    };
    (0..RASTER)
        .into_par_iter()
        .flat_map_iter(|row| {
            let y = -half + (row as f64 + 0.5) * px;
            let inv = &inv;
            (0..RASTER).map(move |col| {
                let x = -half + (col as f64 + 0.5) * px;
                let (x2, y2) = (x * x, y * y);
                let first = eval(x2, y2, inv[0].0, inv[0].1);
                if first > 1.0 {
                    return false;
                }
                // Below at the largest ellipse; any later sample at or above
                // 1 completes the crossing.
                inv[1..]
                    .iter()
                    .any(|&(ia, ib)| eval(x2, y2, ia, ib) >= 1.0)
                    || first == 1.0
            })
        })
        .collect()
}

/// Symmetric Hausdorff distance between two filled pixel masks. Zero when
/// they are identical (including both empty).
fn mask_hausdorff(mask1: &[bool], mask2: &[bool], px: f64) -> f64 {
    let directed = |from: &[bool], to: &[bool]| -> f64 {
        let mut worst: f64 = 0.0;
        for idx in 0..from.len() {
            if !from[idx] || to[idx] {
                continue;
            }
            let (r0, c0) = ((idx / RASTER) as i64, (idx % RASTER) as i64);
            // Expanding ring search for the nearest pixel of `to`.
            let mut best = f64::INFINITY;
            'ring: for radius in 1..(RASTER as i64) {
                for dr in -radius..=radius {
                    let r = r0 + dr;
                    if !(0..RASTER as i64).contains(&r) {
                        continue;
                    }
                    let span = radius - dr.abs();
                    for dc in [-span, span] {
                        let c = c0 + dc;
                        if !(0..RASTER as i64).contains(&c) {
                            continue;
                        }
                        if to[(r as usize) * RASTER + c as usize] {
                            let d = ((dr * dr + dc * dc) as f64).sqrt() * px;
                            if d < best {
                                best = d;
                            }
                        }
                    }
                }
                if best.is_finite() && (radius as f64 - 1.0) * px > best {
                    break 'ring;
                }
            }
            if best.is_finite() {
                worst = worst.max(best);
            } else {
                return f64::INFINITY;
            }
        }
        worst
    };
    directed(mask1, mask2).max(directed(mask2, mask1))
}

/// The outermost ellipse of both families: semi-axes
/// `(1 + b1 b2, b1 b2 - 1)`, read off the parametrizations at `r = 1` and
/// `alpha = 0` respectively.
pub fn outermost_ellipse_semi_axes(beta1: f64, beta2: f64) -> ((f64, f64), (f64, f64)) {
    let c = beta1 * beta2;
    let r = 1.0;
    let family1 = ((r + c / r).abs(), (r - c / r).abs());
    let alpha = 0.0;
    let family2 = (
        (alpha * (1.0 + beta1) * (1.0 + beta2) - (1.0 + c)).abs(),
        (alpha * (beta1 - 1.0) * (beta2 + 1.0) + (1.0 - c)).abs(),
    );
    (family1, family2)
}

/// Spectrum of `(1 + alpha E_12)(1 + beta F_12)`: the implicit region
/// `{lambda : |lambda - 1|^2 <= |alpha beta| |lambda| / 2}`, degenerating to
/// the single point 1 when `alpha beta = 0`.
pub fn spectrum_example_66(alpha: Complex64, beta: Complex64) -> Spectrum {
    let c = (alpha * beta).norm() / 2.0;
    let region = if c == 0.0 {
        SpectrumRegion::PointSet {
            points: vec![(1.0, 0.0)],
        }
    } else {
        SpectrumRegion::ImplicitCardioid { c }
    };
    Spectrum {
        region,
        ambient: Ambient::ReducedVonNeumann,
    }
}
