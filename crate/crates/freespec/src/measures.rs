//! Probability measures on the real line and rotation-invariant planar
//! measures.
//!
//! [`MeasureR`] holds atoms plus an absolutely continuous part tabulated on a
//! grid. Integration against the table uses the cell-weighted values, so
//! constructors are free to pick grids and effective values whose weighted sum
//! reproduces the measure to machine precision. The arcsine constructors use
//! the substitution `t = sin^2(theta)` (resp. `t = sin(u)`), which turns the
//! endpoint-singular densities into smooth integrands in the angle variable;
//! plain point evaluation of the singular density on any affordable grid loses
//! several digits at the edges.
//!
//! [`RadialMeasure`] describes a rotation-invariant planar measure by an atom
//! at the origin plus a radial CDF table on `[r_inner, r_outer]`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::io::{BufRead, Write};

pub const MASS_TOL: f64 = 1e-9;
pub const DEFAULT_GRID: usize = 4096;

/// Probability measure on the real line: atoms plus a gridded density.
#[derive(Debug, Clone)]
pub struct MeasureR {
    /// `(location, mass)`, distinct locations.
    atoms: Vec<(f64, f64)>,
    density: Option<DensityPart>,
    /// Constructor provenance, used by transform closed-form dispatch.
    special: Option<SpecialLaw>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialLaw {
    /// Arcsine law on `[0, 1]`.
    Arcsine01,
}

/// Absolutely continuous part.
///
/// `values[i]` is the effective density at `grid[i]`: integration is
/// `sum_i f(grid[i]) * values[i] * h_i` with `h_i` the half-cell widths, so
/// the trapezoid mass of the table equals the mass carried by the part.
#[derive(Debug, Clone)]
pub struct DensityPart {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl DensityPart {
    fn cell_widths(grid: &[f64]) -> Vec<f64> {
        let n = grid.len();
        let mut h = vec![0.0; n];
        for i in 0..n {
            let left = if i == 0 { grid[0] } else { grid[i - 1] };
            let right = if i + 1 == n { grid[n - 1] } else { grid[i + 1] };
            h[i] = 0.5 * (right - left);
        }
        h
    }

    fn weights(&self) -> Vec<f64> {
        Self::cell_widths(&self.grid)
            .iter()
            .zip(&self.values)
            .map(|(h, v)| h * v)
            .collect()
    }

    fn mass(&self) -> f64 {
        self.weights().iter().sum()
    }
}

impl MeasureR {
    /// Validating constructor. Total mass must be 1 within `1e-9`, atom
    /// locations distinct, the grid strictly increasing, density nonnegative.
    pub fn new(atoms: Vec<(f64, f64)>, density: Option<DensityPart>) -> Result<Self> {
        for (i, &(x, m)) in atoms.iter().enumerate() {
            if !(m > 0.0 && m <= 1.0 + MASS_TOL) {
                return Err(Error::InvalidMeasure(format!(
                    "atom mass {m} at {x} outside (0, 1]"
                )));
            }
            if atoms[..i].iter().any(|&(y, _)| y == x) {
                return Err(Error::InvalidMeasure(format!("duplicate atom at {x}")));
            }
        }
        if let Some(d) = &density {
            if d.grid.len() < 2 || d.grid.len() != d.values.len() {
                return Err(Error::InvalidMeasure(
                    "density table needs matching grid/values with at least 2 points".into(),
                ));
            }
            if d.grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidMeasure("grid not strictly increasing".into()));
            }
            if d.values.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(Error::InvalidMeasure("density values must be finite and nonnegative".into()));
            }
        }
        let measure = MeasureR {
            atoms,
            density,
            special: None,
        };
        let mass = measure.total_mass();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "total mass {mass} differs from 1 by more than {MASS_TOL}"
            )));
        }
        Ok(measure)
    }

    pub fn dirac(x: f64) -> Self {
        MeasureR {
            atoms: vec![(x, 1.0)],
            density: None,
            special: None,
        }
    }

    pub fn from_atoms(atoms: Vec<(f64, f64)>) -> Result<Self> {
        MeasureR::new(atoms, None)
    }

    /// Equal-weight pair of atoms; collapses to a Dirac mass when `a == b`.
    pub fn two_atoms_half(a: f64, b: f64) -> Self {
        if a == b {
            MeasureR::dirac(a)
        } else {
            MeasureR {
                atoms: vec![(a, 0.5), (b, 0.5)],
                density: None,
                special: None,
            }
        }
    }

    /// Density table with atoms; the table is integrated by the trapezoid
    /// weights implied by the grid.
    pub fn from_density_table(
        grid: Vec<f64>,
        values: Vec<f64>,
        atoms: Vec<(f64, f64)>,
    ) -> Result<Self> {
        MeasureR::new(atoms, Some(DensityPart { grid, values }))
    }

    /// Arcsine law on `[0, 1]`, density `1/(pi sqrt(t(1-t)))`, with the
    /// default grid resolution.
    pub fn arcsine01() -> Self {
        Self::arcsine01_with(DEFAULT_GRID)
    }

    /// Arcsine law on `[0, 1]` with `n` grid points placed at
    /// `t_j = sin^2(theta_j)`; in the angle variable the rule is the uniform
    /// trapezoid rule of a smooth periodic integrand, so moments converge
    /// spectrally.
    pub fn arcsine01_with(n: usize) -> Self {
        assert!(n >= 8, "arcsine grid too small");
        let dtheta = std::f64::consts::FRAC_PI_2 / (n - 1) as f64;
        let mut grid = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for j in 0..n {
            let theta = dtheta * j as f64;
            let s = theta.sin();
            grid.push(s * s);
            let c = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
            weights.push(std::f64::consts::FRAC_2_PI * dtheta * c);
        }
        *grid.last_mut().unwrap() = 1.0;
        let h = DensityPart::cell_widths(&grid);
        let values = weights.iter().zip(&h).map(|(w, hh)| w / hh).collect();
        MeasureR {
            atoms: vec![],
            density: Some(DensityPart { grid, values }),
            special: Some(SpecialLaw::Arcsine01),
        }
    }

    /// Symmetric arcsine law on `[-1, 1]`, density `1/(pi sqrt(1-t^2))`.
    pub fn arcsine_sym() -> Self {
        Self::arcsine_sym_with(DEFAULT_GRID)
    }

    pub fn arcsine_sym_with(n: usize) -> Self {
        assert!(n >= 8, "arcsine grid too small");
        let du = std::f64::consts::PI / (n - 1) as f64;
        let mut grid = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for j in 0..n {
            let u = -std::f64::consts::FRAC_PI_2 + du * j as f64;
            grid.push(u.sin());
            let c = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
            weights.push(du / std::f64::consts::PI * c);
        }
        grid[0] = -1.0;
        *grid.last_mut().unwrap() = 1.0;
        let h = DensityPart::cell_widths(&grid);
        let values = weights.iter().zip(&h).map(|(w, hh)| w / hh).collect();
        MeasureR {
            atoms: vec![],
            density: Some(DensityPart { grid, values }),
            special: None,
        }
    }

    /// Provenance tag for closed-form transform dispatch.
    pub fn special_law(&self) -> Option<SpecialLaw> {
        self.special
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density(&self) -> Option<(&[f64], &[f64])> {
        self.density.as_ref().map(|d| (&d.grid[..], &d.values[..]))
    }

    pub fn total_mass(&self) -> f64 {
        let atom_mass: f64 = self.atoms.iter().map(|&(_, m)| m).sum();
        atom_mass + self.density.as_ref().map_or(0.0, |d| d.mass())
    }

    /// Mass of the atom at 0 (exact-location match up to 1e-12).
    pub fn mass_at_zero(&self) -> f64 {
        // + 0.0 normalizes the -0.0 that an empty float sum produces.
        self.atoms
            .iter()
            .filter(|&&(x, _)| x.abs() <= 1e-12)
            .map(|&(_, m)| m)
            .sum::<f64>()
            + 0.0
    }

    pub fn is_dirac(&self) -> bool {
        self.density.is_none() && self.atoms.len() == 1
    }

    /// Closed support interval (hull of atoms and grid).
    pub fn support(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &(x, _) in &self.atoms {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        if let Some(d) = &self.density {
            lo = lo.min(d.grid[0]);
            hi = hi.max(*d.grid.last().unwrap());
        }
        (lo, hi)
    }

    /// `int f dmu`. Divergent integrands are reported as `+-inf` whenever a
    /// node or atom with positive weight hits an infinite value of `f`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for &(x, m) in &self.atoms {
            let v = f(x);
            if v.is_infinite() {
                return v;
            }
            acc += m * v;
        }
        if let Some(d) = &self.density {
            let h = DensityPart::cell_widths(&d.grid);
            for i in 0..d.grid.len() {
                let w = d.values[i] * h[i];
                if w == 0.0 {
                    continue;
                }
                let v = f(d.grid[i]);
                if v.is_infinite() {
                    return v;
                }
                acc += w * v;
            }
        }
        acc
    }

    /// `int t^k dmu`, `k >= -1`; the divergent `k = -1` integral returns
    /// `+inf` as a distinguished value rather than an error.
    pub fn moment(&self, k: i32) -> Result<f64> {
        if k < -1 {
            return Err(Error::Precondition(format!("moment order {k} < -1")));
        }
        let mass = self.total_mass();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("total mass {mass} is not 1")));
        }
        Ok(self.integrate(|t| t.powi(k)))
    }

    /// Distribution of `t^2`; atom masses at `+-a` merge to `a^2`.
    pub fn pushforward_square(&self) -> MeasureR {
        self.pushforward_with(|t| t * t)
    }

    /// Image measure under `f`, merging coincident image points.
    pub(crate) fn pushforward_with(&self, f: impl Fn(f64) -> f64) -> MeasureR {
        let mut atoms: Vec<(f64, f64)> = Vec::new();
        for &(x, m) in &self.atoms {
            let y = f(x);
            match atoms.iter_mut().find(|(z, _)| *z == y) {
                Some(entry) => entry.1 += m,
                None => atoms.push((y, m)),
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));

        let density = self.density.as_ref().and_then(|d| {
            let h = DensityPart::cell_widths(&d.grid);
            let mut mapped: Vec<(f64, f64)> = d
                .grid
                .iter()
                .zip(d.values.iter().zip(&h))
                .map(|(&x, (&v, &hh))| (f(x), v * hh))
                .collect();
            mapped.sort_by(|a, b| a.0.total_cmp(&b.0));
            let span = (mapped.last().unwrap().0 - mapped[0].0).abs();
            let mut merged: Vec<(f64, f64)> = Vec::with_capacity(mapped.len());
            for (y, w) in mapped {
                match merged.last_mut() {
                    Some(last) if (y - last.0).abs() <= 1e-15 * span.max(1.0) => last.1 += w,
                    _ => merged.push((y, w)),
                }
            }
            if merged.len() < 2 || span == 0.0 {
                // Degenerate image: fold the whole part into an atom.
                let total: f64 = merged.iter().map(|&(_, w)| w).sum();
                if total > 0.0 {
                    atoms.push((merged[0].0, total));
                    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
                }
                return None;
            }
            let grid: Vec<f64> = merged.iter().map(|&(y, _)| y).collect();
            let h_new = DensityPart::cell_widths(&grid);
            let values = merged
                .iter()
                .zip(&h_new)
                .map(|(&(_, w), &hh)| if hh > 0.0 { w / hh } else { 0.0 })
                .collect();
            Some(DensityPart { grid, values })
        });

        MeasureR {
            atoms,
            density,
            special: None,
        }
    }

    /// Serialize as CSV: `# atom,<location>,<mass>` header lines followed by
    /// a `t,density` table.
    pub fn to_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "# schema,1")?;
        for &(x, m) in &self.atoms {
            writeln!(out, "# atom,{:.17e},{:.17e}", x, m)?;
        }
        writeln!(out, "t,density")?;
        if let Some(d) = &self.density {
            for (t, v) in d.grid.iter().zip(&d.values) {
                writeln!(out, "{:.17e},{:.17e}", t, v)?;
            }
        }
        Ok(())
    }

    pub fn from_csv(input: &mut impl BufRead) -> Result<Self> {
        let mut atoms = Vec::new();
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line == "t,density" {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let fields: Vec<&str> = rest.split(',').map(str::trim).collect();
                if fields.first() == Some(&"atom") && fields.len() == 3 {
                    let x = parse_f64(fields[1])?;
                    let m = parse_f64(fields[2])?;
                    atoms.push((x, m));
                }
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(Error::InvalidMeasure(format!("bad CSV row: {line}")));
            }
            grid.push(parse_f64(fields[0])?);
            values.push(parse_f64(fields[1])?);
        }
        let density = if grid.is_empty() {
            None
        } else {
            Some(DensityPart { grid, values })
        };
        MeasureR::new(atoms, density)
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::InvalidMeasure(format!("bad number: {s}")))
}

/// Rotation-invariant planar probability measure: an atom at the origin plus
/// a radial CDF `F(s) = mu(B(0, s))` tabulated on `[r_inner, r_outer]`.
#[derive(Debug, Clone)]
pub struct RadialMeasure {
    atom_at_zero: f64,
    r_inner: f64,
    r_outer: f64,
    /// `(s, F(s))`, s nondecreasing, F nondecreasing, `F(r_outer) = 1`.
    cdf: Vec<(f64, f64)>,
}

impl RadialMeasure {
    pub fn new(atom_at_zero: f64, r_inner: f64, r_outer: f64, cdf: Vec<(f64, f64)>) -> Result<Self> {
        if !(0.0..=1.0 + MASS_TOL).contains(&atom_at_zero) {
            return Err(Error::InvalidMeasure(format!(
                "atom at zero {atom_at_zero} outside [0, 1]"
            )));
        }
        if !(r_inner >= 0.0 && r_outer >= r_inner) {
            return Err(Error::InvalidMeasure(format!(
                "bad radii: inner {r_inner}, outer {r_outer}"
            )));
        }
        if cdf.is_empty() {
            return Err(Error::InvalidMeasure("empty radial CDF table".into()));
        }
        if cdf
            .windows(2)
            .any(|w| w[1].0 < w[0].0 || w[1].1 < w[0].1 - 1e-12)
        {
            return Err(Error::InvalidMeasure("radial CDF table not monotone".into()));
        }
        let last = cdf.last().unwrap().1;
        if (last - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "radial CDF ends at {last}, expected 1"
            )));
        }
        Ok(RadialMeasure {
            atom_at_zero,
            r_inner,
            r_outer,
            cdf,
        })
    }

    /// Uniform measure on the circle of the given radius.
    pub fn uniform_circle(radius: f64) -> Self {
        RadialMeasure {
            atom_at_zero: 0.0,
            r_inner: radius,
            r_outer: radius,
            cdf: vec![(radius, 1.0)],
        }
    }

    /// Point mass at the origin.
    pub fn dirac_zero() -> Self {
        RadialMeasure {
            atom_at_zero: 1.0,
            r_inner: 0.0,
            r_outer: 0.0,
            cdf: vec![(0.0, 1.0)],
        }
    }

    pub fn atom_at_zero(&self) -> f64 {
        self.atom_at_zero
    }

    pub fn r_inner(&self) -> f64 {
        self.r_inner
    }

    pub fn r_outer(&self) -> f64 {
        self.r_outer
    }

    pub fn cdf_table(&self) -> &[(f64, f64)] {
        &self.cdf
    }

    /// `F(s)`: monotone-cubic interpolation of the table (exact at nodes),
    /// `atom_at_zero` left of the table, 1 right of it.
    pub fn cdf_at(&self, s: f64) -> f64 {
        let first = self.cdf[0];
        let last = *self.cdf.last().unwrap();
        if s < first.0 {
            return if s < 0.0 { 0.0 } else { self.atom_at_zero.min(first.1) };
        }
        if s >= last.0 {
            return last.1;
        }
        pchip_eval(&self.cdf, s)
    }

    /// Dilation `s -> c s` of the measure, `c > 0`.
    pub fn dilate(&self, c: f64) -> Self {
        assert!(c > 0.0, "dilation factor must be positive");
        RadialMeasure {
            atom_at_zero: self.atom_at_zero,
            r_inner: self.r_inner * c,
            r_outer: self.r_outer * c,
            cdf: self.cdf.iter().map(|&(s, f)| (s * c, f)).collect(),
        }
    }

    /// Log-potential `int log|z - lambda| dmu(z)`, which for a rotation
    /// invariant measure reduces to `int log max(r, |lambda|) dF(r)`.
    ///
    /// Exactly `log|lambda|` outside the support; `-inf` when `lambda = 0`
    /// carries an atom.
    pub fn log_potential(&self, lambda: Complex64) -> f64 {
        let a = lambda.norm();
        if a >= self.r_outer {
            return a.ln();
        }
        let mut acc = 0.0;
        if self.atom_at_zero > 0.0 {
            if a == 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += self.atom_at_zero * a.ln();
        }
        // Piecewise-linear CDF between table points; vertical jumps are point
        // masses at that radius.
        let mut prev = (self.cdf[0].0, self.atom_at_zero.min(self.cdf[0].1));
        if self.cdf[0].1 > prev.1 {
            acc += (self.cdf[0].1 - prev.1) * log_max(self.cdf[0].0, a);
            prev = self.cdf[0];
        }
        for &(s, f) in &self.cdf[1..] {
            let df = f - prev.1;
            if df > 0.0 {
                if s > prev.0 {
                    acc += df / (s - prev.0) * int_log_max(prev.0, s, a);
                } else {
                    acc += df * log_max(s, a);
                }
            }
            prev = (s, f);
        }
        acc
    }
}

fn log_max(r: f64, a: f64) -> f64 {
    r.max(a).ln()
}

/// `int_{lo}^{hi} log max(r, a) dr` in closed form.
fn int_log_max(lo: f64, hi: f64, a: f64) -> f64 {
    fn int_log(lo: f64, hi: f64) -> f64 {
        // integral of log r; r log r - r extends by 0 to r = 0.
        let at = |r: f64| if r == 0.0 { 0.0 } else { r * r.ln() - r };
        at(hi) - at(lo)
    }
    if a <= lo {
        int_log(lo, hi)
    } else if a >= hi {
        (hi - lo) * a.ln()
    } else {
        (a - lo) * a.ln() + int_log(a, hi)
    }
}

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolation of a table.
fn pchip_eval(table: &[(f64, f64)], x: f64) -> f64 {
    let n = table.len();
    debug_assert!(n >= 1);
    if n == 1 {
        return table[0].1;
    }
    // Locate the cell by binary search.
    let mut lo = 0;
    let mut hi = n - 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if table[mid].0 <= x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (x0, y0) = table[lo];
    let (x1, y1) = table[hi];
    let h = x1 - x0;
    if h <= 0.0 {
        return y1;
    }
    let secant = |i: usize| {
        let dx = table[i + 1].0 - table[i].0;
        if dx > 0.0 {
            (table[i + 1].1 - table[i].1) / dx
        } else {
            0.0
        }
    };
    let d = secant(lo);
    let slope_at = |i: usize| -> f64 {
        if i == 0 {
            secant(0)
        } else if i == n - 1 {
            secant(n - 2)
        } else {
            let d0 = secant(i - 1);
            let d1 = secant(i);
            if d0 * d1 <= 0.0 {
                0.0
            } else {
                let h0 = table[i].0 - table[i - 1].0;
                let h1 = table[i + 1].0 - table[i].0;
                let w0 = 2.0 * h1 + h0;
                let w1 = h1 + 2.0 * h0;
                (w0 + w1) / (w0 / d0 + w1 / d1)
            }
        }
    };
    let mut m0 = slope_at(lo);
    let mut m1 = slope_at(hi);
    // Clamp to preserve monotonicity on this cell.
    if d == 0.0 {
        m0 = 0.0;
        m1 = 0.0;
    } else {
        if (m0 / d) > 3.0 {
            m0 = 3.0 * d;
        }
        if (m1 / d) > 3.0 {
            m1 = 3.0 * d;
        }
    }
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + m0 * h * (t3 - 2.0 * t2 + t)
        + y1 * (-2.0 * t3 + 3.0 * t2)
        + m1 * h * (t3 - t2)
}

/// Free-function form of [`RadialMeasure::log_potential`].
pub fn log_potential(nu: &RadialMeasure, lambda: Complex64) -> f64 {
    nu.log_potential(lambda)
}

impl RadialMeasure {
    /// Serialize as CSV: metadata lines then a `s,F` table.
    pub fn to_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "# schema,1")?;
        writeln!(out, "# atom_at_zero,{:.17e}", self.atom_at_zero)?;
        writeln!(out, "# r_inner,{:.17e}", self.r_inner)?;
        writeln!(out, "# r_outer,{:.17e}", self.r_outer)?;
        writeln!(out, "s,F")?;
        for &(s, f) in &self.cdf {
            writeln!(out, "{:.17e},{:.17e}", s, f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Adaptive Simpson quadrature, used as the independent oracle for
    /// integrals of smooth functions.
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, eps: f64, whole: f64, depth: u32) -> f64 {
        let c = 0.5 * (a + b);
        let rule = |a: f64, b: f64| (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
        let left = rule(a, c);
        let right = rule(c, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
            left + right + (left + right - whole) / 15.0
        } else {
            simpson(f, a, c, eps / 2.0, left, depth - 1) + simpson(f, c, b, eps / 2.0, right, depth - 1)
        }
    }

    fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let whole = (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
        simpson(&f, a, b, 1e-12, whole, 40)
    }

    /// Oracle for arcsine01 moments: integrate in the smooth angle variable.
    fn arcsine01_moment_oracle(f: impl Fn(f64) -> f64) -> f64 {
        quad(
            |theta: f64| std::f64::consts::FRAC_2_PI * f(theta.sin().powi(2)),
            0.0,
            std::f64::consts::FRAC_PI_2,
        )
    }

    fn arcsine_sym_moment_oracle(f: impl Fn(f64) -> f64) -> f64 {
        quad(
            |u: f64| f(u.sin()) / std::f64::consts::PI,
            -std::f64::consts::FRAC_PI_2,
            std::f64::consts::FRAC_PI_2,
        )
    }

    #[test]
    fn arcsine01_low_moments() {
        let mu = MeasureR::arcsine01();
        assert_abs_diff_eq!(mu.total_mass(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mu.moment(1).unwrap(), 0.5, epsilon = 1e-10);
        let m2_oracle = arcsine01_moment_oracle(|t| t * t);
        assert_abs_diff_eq!(m2_oracle, 3.0 / 8.0, epsilon = 1e-10);
        assert_abs_diff_eq!(mu.moment(2).unwrap(), m2_oracle, epsilon = 1e-10);
    }

    #[test]
    fn arcsine01_eighth_constant() {
        // int t(1-t) dmu = 1/8, needed at 1e-10.
        let mu = MeasureR::arcsine01();
        let v = mu.integrate(|t| t * (1.0 - t));
        assert_abs_diff_eq!(v, 0.125, epsilon = 1e-12);
    }

    #[test]
    fn divergent_inverse_moments() {
        assert_abs_diff_eq!(MeasureR::dirac(1.0).moment(-1).unwrap(), 1.0, epsilon = 0.0);
        let inv = MeasureR::arcsine01().moment(-1).unwrap();
        assert!(inv.is_infinite() && inv > 0.0);
        assert!(MeasureR::dirac(0.0).moment(-1).unwrap().is_infinite());
    }

    #[test]
    fn arcsine_sym_moments() {
        let mu = MeasureR::arcsine_sym();
        assert_abs_diff_eq!(mu.moment(1).unwrap(), 0.0, epsilon = 1e-12);
        let m2 = arcsine_sym_moment_oracle(|t| t * t);
        assert_abs_diff_eq!(m2, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(mu.moment(2).unwrap(), m2, epsilon = 1e-10);
    }

    #[test]
    fn pushforward_square_of_symmetric_arcsine_is_arcsine01() {
        let image = MeasureR::arcsine_sym().pushforward_square();
        for k in 1..=3 {
            let oracle = arcsine01_moment_oracle(|t| t.powi(k));
            assert_abs_diff_eq!(image.moment(k).unwrap(), oracle, epsilon = 1e-9);
        }
    }

    #[test]
    fn pushforward_square_atoms() {
        let mu = MeasureR::two_atoms_half(-1.0, 1.0).pushforward_square();
        assert!(mu.is_dirac());
        assert_eq!(mu.atoms(), &[(1.0, 1.0)]);
        let zero = MeasureR::dirac(0.0).pushforward_square();
        assert_eq!(zero.atoms(), &[(0.0, 1.0)]);
    }

    #[test]
    fn pushforward_square_moment_doubling() {
        // moment k of the image equals moment 2k of the source, k <= 4.
        for mu in [
            MeasureR::arcsine_sym(),
            MeasureR::two_atoms_half(0.5, 2.0),
            MeasureR::arcsine01(),
        ] {
            let image = mu.pushforward_square();
            assert_abs_diff_eq!(image.total_mass(), 1.0, epsilon = 1e-9);
            for k in 1..=4 {
                assert_abs_diff_eq!(
                    image.moment(k).unwrap(),
                    mu.moment(2 * k).unwrap(),
                    epsilon = 1e-7
                );
            }
        }
    }

    #[test]
    fn invalid_measures_rejected() {
        assert!(MeasureR::from_atoms(vec![(0.0, 0.5)]).is_err());
        assert!(MeasureR::from_atoms(vec![(0.0, 0.5), (0.0, 0.5)]).is_err());
        assert!(MeasureR::from_density_table(vec![0.0, 1.0], vec![1.0, -1.0], vec![]).is_err());
        assert!(MeasureR::from_density_table(vec![0.0, 0.0], vec![1.0, 1.0], vec![]).is_err());
    }

    #[test]
    fn log_potential_circle() {
        let circle = RadialMeasure::uniform_circle(1.0);
        assert_abs_diff_eq!(
            circle.log_potential(Complex64::new(2.0, 0.0)),
            2.0_f64.ln(),
            epsilon = 1e-14
        );
        // Inside the circle the potential is log max(1, 0) = 0; the oracle is
        // the angular quadrature of log|e^{i t} - 0|.
        let oracle = quad(|_t| 0.0, 0.0, std::f64::consts::TAU) / std::f64::consts::TAU;
        assert_abs_diff_eq!(
            circle.log_potential(Complex64::new(0.0, 0.0)),
            oracle,
            epsilon = 1e-14
        );
    }

    #[test]
    fn log_potential_outside_support_is_log_modulus() {
        // F(s) = s^2/(1-s^2) on [0, 1/sqrt(2)].
        let r_out = std::f64::consts::FRAC_1_SQRT_2;
        let n = 512;
        let cdf: Vec<(f64, f64)> = (0..=n)
            .map(|i| {
                let s = r_out * i as f64 / n as f64;
                (s, (s * s) / (1.0 - s * s))
            })
            .collect();
        let nu = RadialMeasure::new(0.0, 0.0, r_out, cdf).unwrap();
        assert_abs_diff_eq!(nu.log_potential(Complex64::new(1.0, 0.0)), 0.0, epsilon = 1e-14);
        // Harmonicity outside the support: angular mean over 64 points equals
        // log rho.
        for rho in [0.75, 1.3, 4.0] {
            let mean: f64 = (0..64)
                .map(|k| {
                    let th = std::f64::consts::TAU * k as f64 / 64.0;
                    nu.log_potential(Complex64::from_polar(rho, th))
                })
                .sum::<f64>()
                / 64.0;
            assert_abs_diff_eq!(mean, rho.ln(), epsilon = 1e-6);
        }
    }

    #[test]
    fn log_potential_zero_atom_sentinel() {
        let nu = RadialMeasure::new(0.5, 0.0, 1.0, vec![(0.0, 0.5), (1.0, 1.0)]).unwrap();
        assert_eq!(
            nu.log_potential(Complex64::new(0.0, 0.0)),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn radial_cdf_interpolation_is_monotone() {
        let r_out = std::f64::consts::FRAC_1_SQRT_2;
        let n = 64;
        let cdf: Vec<(f64, f64)> = (0..=n)
            .map(|i| {
                let s = r_out * i as f64 / n as f64;
                (s, (s * s) / (1.0 - s * s))
            })
            .collect();
        let nu = RadialMeasure::new(0.0, 0.0, r_out, cdf).unwrap();
        let mut prev = -1.0;
        for i in 0..=1000 {
            let s = r_out * i as f64 / 1000.0;
            let f = nu.cdf_at(s);
            assert!(f >= prev - 1e-12, "CDF not monotone at {s}");
            prev = f;
        }
        assert_abs_diff_eq!(nu.cdf_at(r_out), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(nu.cdf_at(2.0), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn measure_csv_round_trip() {
        let mu = MeasureR::from_density_table(
            vec![0.0, 0.5, 1.0, 1.5],
            vec![0.5, 0.5, 0.5, 0.5],
            vec![(3.0, 0.25)],
        )
        .unwrap();
        let mut buf = Vec::new();
        mu.to_csv(&mut buf).unwrap();
        let back = MeasureR::from_csv(&mut buf.as_slice()).unwrap();
        assert_eq!(back.atoms(), mu.atoms());
        assert_abs_diff_eq!(back.moment(2).unwrap(), mu.moment(2).unwrap(), epsilon = 1e-14);
    }
}
