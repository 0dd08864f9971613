//! Brown spectral measures.
//!
//! The radial inversion turns the S-transform of the squared-modulus law
//! `mu_{H^2}` into the radial CDF of the rotation-invariant Brown measure of
//! `UH`: the ball of radius `S(t-1)^{-1/2}` has mass `t` for
//! `t in (mu_{H^2}({0}), 1]`, the outer radius is the L2 norm of `H`, the
//! inner radius the reciprocal L2 norm of its inverse (0 when that integral
//! diverges), and the atom of `mu_{H^2}` at 0 is carried over unchanged.
//!
//! On top of the inversion sit the product law for traceless 2x2 factors and
//! the closed-form laws of the rank-one sum/compression examples.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::measures::{MeasureR, RadialMeasure};
use crate::transforms::{s_product, STransform};
use num_complex::Complex64;

/// Number of tabulation points for radial CDFs.
const RADIAL_GRID: usize = 512;

/// Radial inversion of the S-transform of `mu_{H^2}`.
///
/// Fails on Dirac input: all mass on one circle means the inversion carries
/// no information (the product-law entry point special-cases it instead).
pub fn haagerup_larsen(mu_h2: &MeasureR) -> Result<RadialMeasure> {
    if mu_h2.is_dirac() {
        return Err(Error::DiracInput);
    }
    if mu_h2.support().0 < -1e-12 {
        return Err(Error::Precondition(
            "squared-modulus law must be supported in [0, inf)".into(),
        ));
    }
    let s = STransform::for_measure(mu_h2)?;
    let atom = mu_h2.mass_at_zero();
    let r_outer = mu_h2.moment(1)?.sqrt();
    let inv_moment = mu_h2.moment(-1)?;
    let r_inner = if inv_moment.is_infinite() {
        0.0
    } else {
        inv_moment.powf(-0.5)
    };
    radial_from_s(&s, atom, r_inner, r_outer)
}

/// Tabulate `t -> S(t-1)^{-1/2}` on `(atom, 1]` and read it as a radial CDF.
///
/// The grid clusters quadratically at both ends of the interval, where the
/// radius varies fastest.
fn radial_from_s(
    s: &STransform,
    atom: f64,
    r_inner: f64,
    r_outer: f64,
) -> Result<RadialMeasure> {
    let mut cdf = Vec::with_capacity(RADIAL_GRID + 1);
    cdf.push((r_inner, atom));
    for i in 1..=RADIAL_GRID {
        let u = i as f64 / RADIAL_GRID as f64;
        let ramp = (std::f64::consts::FRAC_PI_2 * u).sin().powi(2);
        let t = (atom + (1.0 - atom) * ramp).min(1.0);
        let value = match s.evaluate(t - 1.0) {
            Ok(v) => v,
            // A numeric evaluator can run out of resolution just above the
            // atom, where the inverse runs off to -inf; the dropped points
            // carry at most their own mass in CDF error and the anchor at
            // (r_inner, atom) closes the table.
            Err(Error::Domain(_)) if i < RADIAL_GRID => continue,
            Err(e) => return Err(e),
        };
        if !(value > 0.0) {
            return Err(Error::Domain(format!(
                "S-transform nonpositive ({value}) at t = {t}"
            )));
        }
        cdf.push((value.powf(-0.5), t));
    }
    // Scrub rounding-induced inversions and pin the endpoints.
    for i in 1..cdf.len() {
        if cdf[i].0 < cdf[i - 1].0 {
            cdf[i].0 = cdf[i - 1].0;
        }
    }
    if let Some(last) = cdf.last_mut() {
        last.0 = last.0.max(r_outer);
        last.1 = 1.0;
    }
    RadialMeasure::new(atom, r_inner, r_outer, cdf)
}

/// Law of `A*A` for a 2x2 matrix: equal atoms at the squared singular
/// values, merged to a Dirac mass when they coincide.
pub fn squared_modulus_law(a: &Mat2) -> MeasureR {
    let (s_max, s_min) = a.singular_values();
    let (hi, lo) = (s_max * s_max, s_min * s_min);
    if (hi - lo).abs() <= 1e-12 * (1.0 + hi) {
        MeasureR::dirac(0.5 * (hi + lo))
    } else {
        MeasureR::two_atoms_half(lo, hi)
    }
}

/// Brown measure of `AB` for traceless nonzero 2x2 factors in the two free
/// copies: rotation invariant, supported on the annulus
/// `[1/(||A^{-1}||_2 ||B^{-1}||_2), ||A||_2 ||B||_2]`, atom at 0 equal to
/// `max(mu_{A*A}({0}), mu_{B*B}({0}))`, radial CDF from the product of the
/// two S-transforms.
///
/// When both squared-modulus laws are Dirac the product is a scaled Haar
/// unitary and the measure is uniform on the outer circle.
pub fn brown_product(a: &Mat2, b: &Mat2) -> Result<RadialMeasure> {
    if !a.is_traceless() || !b.is_traceless() {
        return Err(Error::Precondition(
            "product Brown law requires Tr(A) = Tr(B) = 0".into(),
        ));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::Precondition("factors must be nonzero".into()));
    }
    let mu_a = squared_modulus_law(a);
    let mu_b = squared_modulus_law(b);
    let r_outer = a.l2_norm() * b.l2_norm();
    let (ia, ib) = (a.inv_l2_norm(), b.inv_l2_norm());
    let r_inner = if ia.is_infinite() || ib.is_infinite() {
        0.0
    } else {
        1.0 / (ia * ib)
    };
    if mu_a.is_dirac() && mu_b.is_dirac() {
        return Ok(RadialMeasure::uniform_circle(r_outer));
    }
    let atom = mu_a.mass_at_zero().max(mu_b.mass_at_zero());
    let s = s_product(
        &STransform::for_measure(&mu_a)?,
        &STransform::for_measure(&mu_b)?,
    )?;
    radial_from_s(&s, atom, r_inner, r_outer)
}

/// Brown measure of the sum of the two rank-one nilpotents `alpha E_12 +
/// beta F_12`: the disk of radius `sqrt(|alpha beta| / 2)` with radial CDF
/// `F(s) = (s^2/|alpha beta|) / (1 - s^2/|alpha beta|)`.
///
/// For `alpha beta = 0` the sum is nilpotent of square zero and the measure
/// is the point mass at 0.
pub fn brown_sum_nilpotents(alpha: Complex64, beta: Complex64) -> RadialMeasure {
    let c = (alpha * beta).norm();
    if c == 0.0 {
        return RadialMeasure::dirac_zero();
    }
    let r_outer = (c / 2.0).sqrt();
    let n = RADIAL_GRID;
    let mut cdf = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let s = r_outer * i as f64 / n as f64;
        let q = s * s / c;
        cdf.push((s, q / (1.0 - q)));
    }
    cdf.last_mut().unwrap().1 = 1.0;
    RadialMeasure::new(0.0, 0.0, r_outer, cdf).expect("closed-form table is valid")
}

/// A planar measure that is a finite mixture of point masses and translated
/// rotation-invariant components. Translated components are kept as
/// `(center, radial law)` pairs since they are no longer rotation invariant
/// about the origin.
#[derive(Debug, Clone)]
pub struct BrownMixture {
    pub atoms: Vec<(Complex64, f64)>,
    pub components: Vec<ShiftedComponent>,
}

#[derive(Debug, Clone)]
pub struct ShiftedComponent {
    pub center: Complex64,
    pub weight: f64,
    pub radial: RadialMeasure,
}

impl BrownMixture {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|&(_, m)| m).sum::<f64>()
            + self.components.iter().map(|c| c.weight).sum::<f64>()
    }
}

/// Radial law of `h sqrt(1-h^2)` times a free Haar unitary, where `h^2`
/// follows the arcsine law on `[0, 1]`: the squared-modulus law is the image
/// of the arcsine law under `t -> t(1-t)`, whose inverse-moment integral
/// diverges, so the support is the full disk of radius `sqrt(1/8)`.
fn rank_one_component_radial() -> RadialMeasure {
    let base = MeasureR::arcsine01().pushforward_with(|t| t * (1.0 - t));
    haagerup_larsen(&base).expect("arcsine image law is not Dirac")
}

/// Brown measure of the compression `E_11 (alpha 1 + beta F_12)`: half a
/// point mass at 0 plus half the translated rank-one component,
/// `mu = (1/2) delta_0 + (1/2) (alpha + beta T)` with `T` the rank-one
/// R-diagonal element of outer L2 radius `1/(2 sqrt 2)`.
pub fn brown_example_64(alpha: Complex64, beta: Complex64) -> BrownMixture {
    let radial = if beta.norm() == 0.0 {
        RadialMeasure::dirac_zero()
    } else {
        rank_one_component_radial().dilate(beta.norm())
    };
    BrownMixture {
        atoms: vec![(Complex64::new(0.0, 0.0), 0.5)],
        components: vec![ShiftedComponent {
            center: alpha,
            weight: 0.5,
            radial,
        }],
    }
}

/// Brown measure of `E_12 diag(alpha, beta)` in the two free copies: the
/// rank-one component scaled by `|alpha - beta|`, a disk of radius
/// `|alpha - beta| / (2 sqrt 2)` centered at the origin.
pub fn brown_example_65(alpha: Complex64, beta: Complex64) -> RadialMeasure {
    let scale = (alpha - beta).norm();
    if scale == 0.0 {
        RadialMeasure::dirac_zero()
    } else {
        rank_one_component_radial().dilate(scale)
    }
}
