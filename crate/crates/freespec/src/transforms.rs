//! The multiplicative transform machinery: `psi_mu(z) = int tz/(1-tz) dmu(t)`,
//! its inverse `chi`, and the S-transform `S(w) = chi(w) (1+w) / w`.
//!
//! Everything is evaluated on the real interval `(mu({0}) - 1, 0]`, which is
//! where the radial inversion consumes it; for measures supported in `[0,
//! inf)` the inverse lives on the negative real axis, where `psi` increases
//! from `mu({0}) - 1` to `0`, so a bracketed bisection is exact and branch-cut
//! free. Two-atom laws and the arcsine law on `[0, 1]` get closed forms; the
//! generic path inverts `psi` numerically.

use crate::error::{Error, Result};
use crate::measures::MeasureR;

/// `psi_mu(z) = int tz/(1-tz) dmu(t)`.
pub fn psi(mu: &MeasureR, z: f64) -> Result<f64> {
    if z != 0.0 {
        let pole = 1.0 / z;
        for &(x, _) in mu.atoms() {
            if (x - pole).abs() <= 1e-12 * (1.0 + pole.abs()) {
                return Err(Error::Singularity(format!(
                    "psi has a pole at atom {x} for z = {z}"
                )));
            }
        }
        if let Some((grid, _)) = mu.density() {
            if pole >= grid[0] && pole <= *grid.last().unwrap() {
                return Err(Error::Singularity(format!(
                    "1/z = {pole} lies on the density support"
                )));
            }
        }
    }
    Ok(mu.integrate(|t| {
        let tz = t * z;
        tz / (1.0 - tz)
    }))
}

/// Inverse of `psi` on the negative branch, for `w` in `(mu({0}) - 1, 0]`.
///
/// Monotone bisection; the bracket is grown geometrically on the left until
/// it straddles `w` and then halved (200-iteration cap, far beyond what the
/// stopping width needs).
pub fn chi(mu: &MeasureR, w: f64) -> Result<f64> {
    let atom = mu.mass_at_zero();
    if w == 0.0 {
        return Ok(0.0);
    }
    if !(w > atom - 1.0 && w < 0.0) {
        return Err(Error::Domain(format!(
            "w = {w} outside ({}, 0]",
            atom - 1.0
        )));
    }
    let mut lo = -1.0;
    while psi(mu, lo)? > w {
        lo *= 4.0;
        if lo < -1e18 {
            return Err(Error::Domain(format!(
                "w = {w} too close to the lower domain boundary"
            )));
        }
    }
    let mut hi = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if psi(mu, mid)? >= w {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(1.0).max(lo.abs()) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `S_mu(w)` for a measure supported in `[0, inf)`; numeric inversion unless
/// a closed form applies. `w = 0` returns the limit `1/m_1`.
pub fn s_transform(mu: &MeasureR, w: f64) -> Result<f64> {
    STransform::for_measure(mu)?.evaluate(w)
}

/// An S-transform evaluator on `(domain_lo, 0]`.
#[derive(Debug, Clone)]
pub struct STransform {
    domain_lo: f64,
    kind: SKind,
}

#[derive(Debug, Clone)]
enum SKind {
    /// Dirac mass at `c > 0`: constant `1/c`.
    Dirac { c: f64 },
    /// `pa delta_a + pb delta_b`, `0 <= a < b`.
    TwoAtom { a: f64, b: f64, pa: f64, pb: f64 },
    /// Arcsine law on `[0, 1]`: `S(w) = (w + 2)/(w + 1)`.
    Arcsine01,
    /// Generic measure, inverted by bisection.
    Numeric { mu: MeasureR },
    /// Pointwise product (free multiplicative convolution on the S-level).
    Product { lhs: Box<STransform>, rhs: Box<STransform> },
}

impl STransform {
    /// Dispatch on the measure: Dirac, two-atom and arcsine laws get closed
    /// forms, anything else is numeric.
    pub fn for_measure(mu: &MeasureR) -> Result<Self> {
        if mu.support().0 < -1e-12 {
            return Err(Error::Precondition(
                "S-transform requires support in [0, inf)".into(),
            ));
        }
        if mu.special_law() == Some(crate::measures::SpecialLaw::Arcsine01) {
            return Ok(STransform::arcsine01());
        }
        let atom_zero = mu.mass_at_zero();
        if mu.density().is_none() {
            let atoms = mu.atoms();
            if atoms.len() == 1 {
                let c = atoms[0].0;
                if c <= 0.0 {
                    return Err(Error::Domain(
                        "S-transform of the point mass at 0 has empty domain".into(),
                    ));
                }
                return Ok(STransform {
                    domain_lo: -1.0,
                    kind: SKind::Dirac { c },
                });
            }
            if atoms.len() == 2 {
                let (mut a, mut pa) = atoms[0];
                let (mut b, mut pb) = atoms[1];
                if a > b {
                    std::mem::swap(&mut a, &mut b);
                    std::mem::swap(&mut pa, &mut pb);
                }
                return Ok(STransform {
                    domain_lo: atom_zero - 1.0,
                    kind: SKind::TwoAtom { a, b, pa, pb },
                });
            }
        }
        Ok(STransform {
            domain_lo: atom_zero - 1.0,
            kind: SKind::Numeric { mu: mu.clone() },
        })
    }

    /// Closed form for the arcsine law on `[0, 1]`.
    pub fn arcsine01() -> Self {
        STransform {
            domain_lo: -1.0,
            kind: SKind::Arcsine01,
        }
    }

    /// Force the numeric-inversion path (used to cross-check closed forms).
    pub fn numeric_for(mu: &MeasureR) -> Result<Self> {
        if mu.support().0 < -1e-12 {
            return Err(Error::Precondition(
                "S-transform requires support in [0, inf)".into(),
            ));
        }
        Ok(STransform {
            domain_lo: mu.mass_at_zero() - 1.0,
            kind: SKind::Numeric { mu: mu.clone() },
        })
    }

    /// `(domain_lo, 0]`.
    pub fn domain(&self) -> (f64, f64) {
        (self.domain_lo, 0.0)
    }

    pub fn method_tag(&self) -> &'static str {
        match &self.kind {
            SKind::Dirac { .. } => "closed-form-dirac",
            SKind::TwoAtom { .. } => "closed-form-two-atom",
            SKind::Arcsine01 => "closed-form-arcsine",
            SKind::Numeric { .. } => "numeric-inversion",
            SKind::Product { .. } => "product",
        }
    }

    pub fn evaluate(&self, w: f64) -> Result<f64> {
        if !(w > self.domain_lo && w <= 0.0) {
            return Err(Error::Domain(format!(
                "w = {w} outside ({}, 0]",
                self.domain_lo
            )));
        }
        match &self.kind {
            SKind::Dirac { c } => Ok(1.0 / c),
            SKind::TwoAtom { a, b, pa, pb } => {
                // chi solves ab(1+w) z^2 - [(pa a + pb b) + w(a+b)] z + w = 0;
                // the branch continuous with chi(0) = 0 is the unique
                // nonpositive root, in the cancellation-free form
                // z = 2w / (bracket + sqrt(D)). Then S = z(1+w)/w.
                let bracket = (pa * a + pb * b) + w * (a + b);
                let correction = 4.0 * a * b * (1.0 + w) * (-w);
                let disc = (bracket * bracket + correction).sqrt();
                let denom = if bracket >= 0.0 {
                    bracket + disc
                } else {
                    correction / (disc - bracket)
                };
                Ok(2.0 * (1.0 + w) / denom)
            }
            SKind::Arcsine01 => Ok((w + 2.0) / (w + 1.0)),
            SKind::Numeric { mu } => {
                if w == 0.0 {
                    return Ok(1.0 / mu.moment(1)?);
                }
                let z = chi(mu, w)?;
                Ok(z * (1.0 + w) / w)
            }
            SKind::Product { lhs, rhs } => Ok(lhs.evaluate(w)? * rhs.evaluate(w)?),
        }
    }
}

/// Pointwise product of two S-transforms on the intersection of domains.
pub fn s_product(lhs: &STransform, rhs: &STransform) -> Result<STransform> {
    let domain_lo = lhs.domain_lo.max(rhs.domain_lo);
    if domain_lo >= 0.0 {
        return Err(Error::Domain("empty S-transform domain intersection".into()));
    }
    Ok(STransform {
        domain_lo,
        kind: SKind::Product {
            lhs: Box::new(lhs.clone()),
            rhs: Box::new(rhs.clone()),
        },
    })
}
