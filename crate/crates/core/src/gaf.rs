//! Generalized-analytic-function toolkit: `λ`-fields, finite-difference
//! `∂_λ̄`/`∂_λ`, annulus grids with exclusion bands, and residual checkers.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{singular_circles, Coupling};
use crate::spectral::{involutions, Energy, SpectralParam};

/// Default relative finite-difference step, `h = 1e-3 |λ|`.
pub const DEFAULT_H_REL: f64 = 1e-3;

type FieldFn = dyn Fn(SpectralParam) -> Result<Complex64> + Send + Sync;

/// A complex field over `λ`-space at fixed physical parameters.
#[derive(Clone)]
pub struct LambdaField {
    label: Arc<str>,
    eval: Arc<FieldFn>,
}

impl LambdaField {
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(SpectralParam) -> Result<Complex64> + Send + Sync + 'static,
    {
        Self {
            label: Arc::from(label.into()),
            eval: Arc::new(f),
        }
    }

    pub fn zero() -> Self {
        Self::new("0", |_| Ok(Complex64::new(0.0, 0.0)))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, lam: SpectralParam) -> Result<Complex64> {
        (self.eval)(lam)
    }

    pub fn at(&self, lam: Complex64) -> Result<Complex64> {
        self.eval(SpectralParam::new(lam)?)
    }
}

impl fmt::Debug for LambdaField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LambdaField")
            .field("label", &self.label)
            .finish()
    }
}

fn stencil(lam: Complex64, step: f64) -> [Complex64; 4] {
    let i_step = Complex64::new(0.0, step);
    [lam + step, lam - step, lam + i_step, lam - i_step]
}

fn partials(field: &LambdaField, lam: Complex64, step: f64) -> Result<(Complex64, Complex64)> {
    let [xp, xm, yp, ym] = stencil(lam, step);
    let dx = (field.at(xp)? - field.at(xm)?) / (2.0 * step);
    let dy = (field.at(yp)? - field.at(ym)?) / (2.0 * step);
    Ok((dx, dy))
}

/// Central-difference `∂_λ̄ f = ½(∂_Re + i ∂_Im) f` with absolute step `h`.
pub fn dbar_fd(field: &LambdaField, lam: SpectralParam, h: f64) -> Result<Complex64> {
    let (dx, dy) = partials(field, lam.value(), h)?;
    Ok(0.5 * (dx + Complex64::new(0.0, 1.0) * dy))
}

/// Central-difference `∂_λ f = ½(∂_Re - i ∂_Im) f` with absolute step `h`.
pub fn d_fd(field: &LambdaField, lam: SpectralParam, h: f64) -> Result<Complex64> {
    let (dx, dy) = partials(field, lam.value(), h)?;
    Ok(0.5 * (dx - Complex64::new(0.0, 1.0) * dy))
}

/// A closed radial band `|r - center| ≤ half_width` removed from the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub center: f64,
    pub half_width: f64,
}

impl Band {
    fn contains(&self, r: f64) -> bool {
        (r - self.center).abs() <= self.half_width * (1.0 + 1e-12)
    }
}

/// Log-radial, uniform-angle sampling of an annulus in `λ`-space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_radial: usize,
    pub n_angular: usize,
    pub exclusions: Vec<Band>,
}

/// Band half-width around a circle of radius `r`: `max(10 h_rel, 1e-2) r`.
pub fn band_half_width(r: f64, h_rel: f64) -> f64 {
    (10.0 * h_rel).max(1e-2) * r
}

pub fn build_grid(
    r_min: f64,
    r_max: f64,
    n_radial: usize,
    n_angular: usize,
    energy: Energy,
    alpha: Option<Coupling>,
) -> Result<AnnulusGrid> {
    build_grid_with_step(
        r_min,
        r_max,
        n_radial,
        n_angular,
        energy,
        alpha,
        DEFAULT_H_REL,
    )
}

/// As [`build_grid`], with bands sized for finite differences of relative
/// step `h_rel`.
pub fn build_grid_with_step(
    r_min: f64,
    r_max: f64,
    n_radial: usize,
    n_angular: usize,
    energy: Energy,
    alpha: Option<Coupling>,
    h_rel: f64,
) -> Result<AnnulusGrid> {
    if !(r_min > 0.0 && r_min < 1.0 && r_max > 1.0 && r_max.is_finite()) {
        return Err(Error::Config(format!(
            "grid needs 0 < r_min < 1 < r_max, got r_min = {r_min}, r_max = {r_max}"
        )));
    }
    if n_radial < 2 || n_angular < 1 {
        return Err(Error::Config(
            "grid needs n_radial >= 2 and n_angular >= 1".into(),
        ));
    }
    if !(h_rel > 0.0 && h_rel < 0.1) {
        return Err(Error::Config(format!(
            "finite-difference step must lie in (0, 0.1), got {h_rel}"
        )));
    }
    let mut grid = AnnulusGrid {
        r_min,
        r_max,
        n_radial,
        n_angular,
        exclusions: Vec::new(),
    };
    grid.exclude_circle(1.0, h_rel);
    if let Some(alpha) = alpha {
        for r in singular_circles(energy, alpha).radii {
            grid.exclude_circle(r, h_rel);
        }
    }
    if grid.points().is_empty() {
        return Err(Error::Config(
            "exclusion bands cover every grid point".into(),
        ));
    }
    Ok(grid)
}

impl AnnulusGrid {
    /// Adds a band around radius `r` if it touches the sampled annulus and is
    /// not already present.
    pub fn exclude_circle(&mut self, r: f64, h_rel: f64) {
        let band = Band {
            center: r,
            half_width: band_half_width(r, h_rel),
        };
        let touches = band.center + band.half_width >= self.r_min
            && band.center - band.half_width <= self.r_max;
        let known = self
            .exclusions
            .iter()
            .any(|b| (b.center - r).abs() <= 1e-12 * r);
        if touches && !known {
            self.exclusions.push(band);
            self.exclusions
                .sort_by(|a, b| a.center.total_cmp(&b.center));
        }
    }

    pub fn radii(&self) -> Vec<f64> {
        let ratio = (self.r_max / self.r_min).ln();
        (0..self.n_radial)
            .map(|i| self.r_min * (ratio * i as f64 / (self.n_radial - 1) as f64).exp())
            .collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        // Half-step offset keeps samples off the real and imaginary axes.
        (0..self.n_angular)
            .map(|j| std::f64::consts::TAU * (j as f64 + 0.5) / self.n_angular as f64)
            .collect()
    }

    pub fn is_excluded(&self, r: f64) -> bool {
        self.exclusions.iter().any(|b| b.contains(r))
    }

    /// Grid points outside every band, in radial-major order.
    pub fn points(&self) -> Vec<SpectralParam> {
        let angles = self.angles();
        self.radii()
            .into_iter()
            .filter(|r| !self.is_excluded(*r))
            .flat_map(|r| {
                angles.iter().map(move |a| {
                    SpectralParam::from_polar(r, *a).expect("grid radius is positive")
                })
            })
            .collect()
    }

    /// Index of the radial component (interval between bands) containing `r`.
    pub fn component(&self, r: f64) -> Option<usize> {
        if self.is_excluded(r) || !(r > 0.0) {
            return None;
        }
        Some(self.exclusions.iter().filter(|b| b.center < r).count())
    }

    /// Radial interval `(lo, hi)` of component `idx`, clipped to the bands
    /// on either side (the outermost components are open toward 0 and ∞).
    pub fn component_bounds(&self, idx: usize) -> (f64, f64) {
        let lo = if idx == 0 {
            0.0
        } else {
            self.exclusions[idx - 1].center + self.exclusions[idx - 1].half_width
        };
        let hi = self
            .exclusions
            .get(idx)
            .map(|b| b.center - b.half_width)
            .unwrap_or(f64::INFINITY);
        (lo, hi)
    }

    /// True when the four-point stencil of absolute step `step` around `lam`
    /// stays in one component.
    pub fn stencil_ok(&self, lam: SpectralParam, step: f64) -> bool {
        let Some(home) = self.component(lam.modulus()) else {
            return false;
        };
        stencil(lam.value(), step)
            .iter()
            .all(|p| self.component(p.norm()) == Some(home))
    }

    /// Evaluates `f` at every grid point in parallel; output keeps grid order.
    pub fn sweep<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(SpectralParam) -> T + Send + Sync,
    {
        self.points().into_par_iter().map(f).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointResidual {
    pub lambda: Complex64,
    pub abs: f64,
    pub rel: f64,
    pub scale: f64,
}

/// Aggregated residual statistics over a grid sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub rms: f64,
    /// Largest per-point residual relative to that point's own scale.
    pub max_rel: f64,
    /// Largest per-point reference magnitude.
    pub scale: f64,
    pub n_points: usize,
    pub skipped: usize,
    pub h: f64,
    pub per_point: Vec<PointResidual>,
}

/// One grid-point outcome: `(λ, |residual|, reference magnitude)`.
pub type Sample = (SpectralParam, f64, f64);

impl ResidualReport {
    /// Folds per-point outcomes in their given order. Stencil and singular
    /// point errors count as skipped; other errors abort.
    pub fn from_samples(h: f64, samples: Vec<Result<Sample>>) -> Result<Self> {
        let mut per_point = Vec::with_capacity(samples.len());
        let mut skipped = 0;
        for s in samples {
            match s {
                Ok((lam, abs, scale)) => {
                    let rel = if scale > 0.0 { abs / scale } else { abs };
                    per_point.push((
                        PointResidual {
                            lambda: lam.value(),
                            abs,
                            rel,
                            scale,
                        },
                        scale,
                    ));
                }
                Err(
                    Error::Stencil { .. }
                    | Error::SingularPoint { .. }
                    | Error::DivisionByZeroOmega { .. },
                ) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
        let n = per_point.len();
        let max_abs = per_point.iter().map(|(p, _)| p.abs).fold(0.0, f64::max);
        let max_rel = per_point.iter().map(|(p, _)| p.rel).fold(0.0, f64::max);
        let scale = per_point.iter().map(|(_, s)| *s).fold(0.0, f64::max);
        let rms = if n == 0 {
            0.0
        } else {
            (per_point.iter().map(|(p, _)| p.abs * p.abs).sum::<f64>() / n as f64).sqrt()
        };
        Ok(Self {
            max_abs,
            rms,
            max_rel,
            scale,
            n_points: n,
            skipped,
            h,
            per_point: per_point.into_iter().map(|(p, _)| p).collect(),
        })
    }

    /// Combines two reports over the same grid, pointwise maxima kept.
    pub fn merge(&self, other: &ResidualReport) -> ResidualReport {
        let mut per_point = self.per_point.clone();
        per_point.extend(other.per_point.iter().copied());
        let n = self.n_points + other.n_points;
        let sq =
            self.rms.powi(2) * self.n_points as f64 + other.rms.powi(2) * other.n_points as f64;
        ResidualReport {
            max_abs: self.max_abs.max(other.max_abs),
            rms: if n == 0 { 0.0 } else { (sq / n as f64).sqrt() },
            max_rel: self.max_rel.max(other.max_rel),
            scale: self.scale.max(other.scale),
            n_points: n,
            skipped: self.skipped + other.skipped,
            h: self.h,
            per_point,
        }
    }

    /// `max_abs / scale`, or `max_abs` when the scale vanishes.
    pub fn scaled_max(&self) -> f64 {
        if self.scale > 0.0 {
            self.max_abs / self.scale
        } else {
            self.max_abs
        }
    }

    /// `max |r| / (abs_tol + rel_tol · scale)` over points; `≤ 1` means every
    /// point is inside that budget.
    pub fn budget_ratio(&self, abs_tol: f64, rel_tol: f64) -> f64 {
        self.per_point
            .iter()
            .map(|p| p.abs / (abs_tol + rel_tol * p.scale))
            .fold(0.0, f64::max)
    }

    /// Report restricted to points on one side of the unit circle.
    pub fn restricted(&self, domain: crate::spectral::Domain) -> ResidualReport {
        let pts: Vec<PointResidual> = self
            .per_point
            .iter()
            .filter(|p| crate::spectral::Domain::classify(p.lambda.norm()) == domain)
            .copied()
            .collect();
        let n = pts.len();
        ResidualReport {
            max_abs: pts.iter().map(|p| p.abs).fold(0.0, f64::max),
            rms: if n == 0 {
                0.0
            } else {
                (pts.iter().map(|p| p.abs * p.abs).sum::<f64>() / n as f64).sqrt()
            },
            max_rel: pts.iter().map(|p| p.rel).fold(0.0, f64::max),
            scale: self.scale,
            n_points: n,
            skipped: 0,
            h: self.h,
            per_point: pts,
        }
    }
}

/// Observed orders `log2(r_i / r_{i+1})` for residuals at successively
/// halved steps.
pub fn convergence_orders(residuals: &[f64]) -> Vec<f64> {
    residuals.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Residual of `∂̄ψ - B ψ̄` at one point; scale includes `|ψ|/|λ|` so that
/// holomorphic fields with `B ≡ 0` are still measured relative to something.
fn dbar_residual(
    psi: &LambdaField,
    b: &LambdaField,
    grid: &AnnulusGrid,
    lam: SpectralParam,
    h_rel: f64,
    conjugate: bool,
) -> Result<Sample> {
    let step = h_rel * lam.modulus();
    if !grid.stencil_ok(lam, step) {
        return Err(Error::Stencil {
            lambda: lam.value(),
            step,
        });
    }
    let d = dbar_fd(psi, lam, step)?;
    let v = psi.eval(lam)?;
    let bv = b.eval(lam)?;
    // ∂̄ψ = Bψ̄ for the primal equation, ∂̄ψ* = -B̄ψ̄* for the conjugate one.
    let rhs = if conjugate {
        -bv.conj() * v.conj()
    } else {
        bv * v.conj()
    };
    let scale = d.norm().max(rhs.norm()).max(v.norm() / lam.modulus());
    Ok((lam, (d - rhs).norm(), scale))
}

/// Residuals of `∂̄ψ - Bψ̄` and `∂̄ψ* + B̄ψ̄*` over the grid with relative step
/// `h_rel`.
pub fn check_dbar_pair(
    psi: &LambdaField,
    psi_star: &LambdaField,
    b: &LambdaField,
    grid: &AnnulusGrid,
    h_rel: f64,
) -> Result<(ResidualReport, ResidualReport)> {
    let first = grid.sweep(|lam| dbar_residual(psi, b, grid, lam, h_rel, false));
    let second = grid.sweep(|lam| dbar_residual(psi_star, b, grid, lam, h_rel, true));
    Ok((
        ResidualReport::from_samples(h_rel, first)?,
        ResidualReport::from_samples(h_rel, second)?,
    ))
}

/// Residual of the single equation `∂̄ψ = Bψ̄` over the grid.
pub fn check_dbar(
    psi: &LambdaField,
    b: &LambdaField,
    grid: &AnnulusGrid,
    h_rel: f64,
) -> Result<ResidualReport> {
    ResidualReport::from_samples(
        h_rel,
        grid.sweep(|lam| dbar_residual(psi, b, grid, lam, h_rel, false)),
    )
}

/// Residual of the conjugate equation `∂̄ψ* = -B̄ψ̄*` over the grid.
pub fn check_dbar_conjugate(
    psi_star: &LambdaField,
    b: &LambdaField,
    grid: &AnnulusGrid,
    h_rel: f64,
) -> Result<ResidualReport> {
    ResidualReport::from_samples(
        h_rel,
        grid.sweep(|lam| dbar_residual(psi_star, b, grid, lam, h_rel, true)),
    )
}

/// `max(|B(1/λ̄) + λ² B̄(λ)|, |B(-1/λ̄) - λλ̄ B(λ)|)` over the grid.
pub fn check_symmetries_big_b(b: &LambdaField, grid: &AnnulusGrid) -> Result<ResidualReport> {
    let samples = grid.sweep(|lam| -> Result<Sample> {
        let (refl, anti) = involutions(lam);
        let l = lam.value();
        let v = b.eval(lam)?;
        let v_refl = b.eval(refl)?;
        let v_anti = b.eval(anti)?;
        let first = v_refl + l * l * v.conj();
        let second = v_anti - l.norm_sqr() * v;
        let scale = v_refl.norm().max((l * l * v).norm()).max(v_anti.norm());
        Ok((lam, first.norm().max(second.norm()), scale))
    });
    ResidualReport::from_samples(0.0, samples)
}

/// `b(1/λ̄) - b̄(λ)`, `b(-1/λ̄) - b(λ)` and, when `radial`, also
/// `b(λ) - b(|λ|)` and `b - b̄`.
pub fn check_symmetries_b(
    b: &LambdaField,
    grid: &AnnulusGrid,
    radial: bool,
) -> Result<ResidualReport> {
    let samples = grid.sweep(|lam| -> Result<Sample> {
        let (refl, anti) = involutions(lam);
        let v = b.eval(lam)?;
        let v_refl = b.eval(refl)?;
        let v_anti = b.eval(anti)?;
        let mut worst = (v_refl - v.conj()).norm().max((v_anti - v).norm());
        let mut scale = v.norm().max(v_refl.norm()).max(v_anti.norm());
        if radial {
            let on_axis = b.eval(SpectralParam::new(Complex64::new(lam.modulus(), 0.0))?)?;
            worst = worst.max((v - on_axis).norm()).max((v - v.conj()).norm());
            scale = scale.max(on_axis.norm());
        }
        Ok((lam, worst, scale))
    });
    ResidualReport::from_samples(0.0, samples)
}
