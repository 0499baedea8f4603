//! Closed forms for the point potential at the origin: eigenfunctions,
//! scattering amplitude `b`, `∂̄`-data `B`, the `a`-function and the
//! singular circles where the common denominator vanishes.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaf::LambdaField;
use crate::green::{green, QuadratureConfig};
use crate::spectral::{
    conjugate_plane_wave, k_from_lambda, plane_wave, re_im_norm, Energy, PhysicalPoint,
    SpectralParam,
};

/// `|denom| < TOL_SING` is treated as a singular point.
pub const TOL_SING: f64 = 1e-8;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Nonzero coupling constant `α` of the point interaction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Coupling(f64);

impl Coupling {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha != 0.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::Domain(format!(
                "coupling must be finite and nonzero, got {alpha}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Coupling {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Coupling> for f64 {
    fn from(c: Coupling) -> f64 {
        c.0
    }
}

/// Radii where `B` has a contour pole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSet {
    pub radii: Vec<f64>,
    /// `|E|` at which the two circles merge onto `|λ| = 1`: `e^{4π/α}`.
    pub threshold_energy_mag: f64,
}

impl SingularSet {
    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

pub fn singular_circles(energy: Energy, alpha: Coupling) -> SingularSet {
    let s = 4.0 * PI / alpha.value() - energy.ln_abs();
    let radii = if s > 0.0 {
        vec![(-0.5 * s).exp(), (0.5 * s).exp()]
    } else if s == 0.0 {
        vec![1.0]
    } else {
        Vec::new()
    };
    SingularSet {
        radii,
        threshold_energy_mag: (4.0 * PI / alpha.value()).exp(),
    }
}

/// `|ln(λλ̄)| + ln|E| - 4π/α`.
pub fn denom(lam: SpectralParam, energy: Energy, alpha: Coupling) -> f64 {
    lam.abs_ln_modulus_sq() + energy.ln_abs() - 4.0 * PI / alpha.value()
}

/// `1 - (α/2π) ln(|Re k| + |Im k|)`, computed from the `k`-vector itself.
/// Equals `-(α/4π) denom`.
pub fn scattering_denom(lam: SpectralParam, energy: Energy, alpha: Coupling) -> f64 {
    let k = k_from_lambda(energy, lam);
    1.0 - alpha.value() / (2.0 * PI) * re_im_norm(&k).ln()
}

fn checked_denom(lam: SpectralParam, energy: Energy, alpha: Coupling) -> Result<f64> {
    let d = denom(lam, energy, alpha);
    if d.abs() < TOL_SING {
        Err(Error::SingularPoint {
            lambda: lam.value(),
            denom: d,
        })
    } else {
        Ok(d)
    }
}

/// `b_{0,α}(k_E(λ)) = (1/4π²) α / (1 - (α/2π) ln(|Re k| + |Im k|))`.
pub fn b_point(lam: SpectralParam, energy: Energy, alpha: Coupling) -> Result<f64> {
    checked_denom(lam, energy, alpha)?;
    Ok(alpha.value() / (4.0 * PI * PI) / scattering_denom(lam, energy, alpha))
}

/// `B_E(λ) = -(sign(λλ̄-1)/λ̄) / denom`.
pub fn big_b_point(lam: SpectralParam, energy: Energy, alpha: Coupling) -> Result<Complex64> {
    let sign = lam.sign()?;
    let d = checked_denom(lam, energy, alpha)?;
    Ok(-sign / (lam.value().conj() * d))
}

/// `B_E(λ) = (π sign(λλ̄-1)/λ̄) b(k_E(λ))`, the scattering-amplitude route.
pub fn big_b_from_scattering(
    lam: SpectralParam,
    energy: Energy,
    alpha: Coupling,
) -> Result<Complex64> {
    let sign = lam.sign()?;
    let b = b_point(lam, energy, alpha)?;
    Ok(PI * sign / lam.value().conj() * b)
}

/// `a_{0,α} = -(1/π) / denom`.
pub fn a_point(lam: SpectralParam, energy: Energy, alpha: Coupling) -> Result<f64> {
    Ok(-1.0 / (PI * checked_denom(lam, energy, alpha)?))
}

/// `ψ_{0,α} = e^{ikx} - 4π G(z, λ, E) / denom`.
pub fn psi_point(
    z: PhysicalPoint,
    lam: SpectralParam,
    energy: Energy,
    alpha: Coupling,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let d = checked_denom(lam, energy, alpha)?;
    Ok(plane_wave(z, lam, energy) - 4.0 * PI * green(z, lam, energy, cfg)? / d)
}

/// `ψ_{0,α} = e^{ikx}[1 + c g(x, k)]` with `c = α / (1 - (α/2π) ln(|Re k| + |Im k|))`
/// and `g = e^{-ikx} G`.
pub fn psi_point_scattering_form(
    z: PhysicalPoint,
    lam: SpectralParam,
    energy: Energy,
    alpha: Coupling,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    checked_denom(lam, energy, alpha)?;
    let wave = plane_wave(z, lam, energy);
    let coupling = alpha.value() / scattering_denom(lam, energy, alpha);
    let g = green(z, lam, energy, cfg)? / wave;
    Ok(wave * (1.0 + coupling * g))
}

/// `ψ* = (i/λ){exp[+(√|E|/2)(λz̄ + z/λ)] - 4π G(z, -λ, E) / denom}`.
pub fn psi_star_point(
    z: PhysicalPoint,
    lam: SpectralParam,
    energy: Energy,
    alpha: Coupling,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let d = checked_denom(lam, energy, alpha)?;
    let correction = I / lam.value() * (4.0 * PI * green(z, -lam, energy, cfg)? / d);
    Ok(conjugate_plane_wave(z, lam, energy) - correction)
}

/// `a` recovered as `lim_{|x|→0} ψ / (2π ln|x|)` from small-radius samples.
/// The constant term of `ψ` is removed with difference quotients in `ln|x|`.
pub fn a_point_from_limit(
    lam: SpectralParam,
    energy: Energy,
    alpha: Coupling,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let direction = Complex64::from_polar(1.0, 0.3);
    let sample = |r: f64| -> Result<Complex64> {
        let plus = psi_point(PhysicalPoint(direction * r), lam, energy, alpha, cfg)?;
        let minus = psi_point(PhysicalPoint(-direction * r), lam, energy, alpha, cfg)?;
        Ok(0.5 * (plus + minus))
    };
    let mut prev = (0.1f64.ln(), sample(0.1)?);
    let mut last: Option<f64> = None;
    for n in 2..=8 {
        let r = 10f64.powi(-n);
        let cur = (r.ln(), sample(r)?);
        let slope = (cur.1 - prev.1) / (cur.0 - prev.0) / (2.0 * PI);
        if let Some(l) = last {
            if (slope.re - l).abs() < 1e-9 * (1.0 + l.abs())
                && slope.im.abs() < 1e-9 * (1.0 + l.abs())
            {
                return Ok(slope.re);
            }
        }
        last = Some(slope.re);
        prev = cur;
    }
    Err(Error::NonConvergence {
        what: "small-|x| limit of psi",
        achieved: f64::NAN,
        requested: 1e-9,
    })
}

/// Observed pole order of `|B|` at a singular radius along the ray at
/// `angle`, from `ln|B|` against `ln||λ| - r_s|` at offsets `1e-4 r_s`, `1e-5 r_s`.
pub fn pole_order(energy: Energy, alpha: Coupling, radius: f64, angle: f64) -> Result<f64> {
    let at = |delta: f64| -> Result<f64> {
        let lam = SpectralParam::from_polar(radius * (1.0 + delta), angle)?;
        Ok(big_b_point(lam, energy, alpha)?.norm().ln())
    };
    let (d1, d2) = (1e-4, 1e-5);
    let outward = (at(d1)? - at(d2)?) / ((d1 * radius).ln() - (d2 * radius).ln());
    let inward = (at(-d1)? - at(-d2)?) / ((d1 * radius).ln() - (d2 * radius).ln());
    Ok(-0.5 * (outward + inward))
}

/// Point-potential fields over `λ` at fixed `(E, α)`.
#[derive(Debug, Clone, Copy)]
pub struct PointPotential {
    pub energy: Energy,
    pub alpha: Coupling,
}

impl PointPotential {
    pub fn new(energy: Energy, alpha: Coupling) -> Self {
        Self { energy, alpha }
    }

    pub fn big_b_field(&self) -> LambdaField {
        let Self { energy, alpha } = *self;
        LambdaField::new("B_point", move |l| big_b_point(l, energy, alpha))
    }

    pub fn b_field(&self) -> LambdaField {
        let Self { energy, alpha } = *self;
        LambdaField::new("b_point", move |l| {
            b_point(l, energy, alpha).map(|v| Complex64::new(v, 0.0))
        })
    }

    pub fn a_field(&self) -> LambdaField {
        let Self { energy, alpha } = *self;
        LambdaField::new("a_point", move |l| {
            a_point(l, energy, alpha).map(|v| Complex64::new(v, 0.0))
        })
    }

    pub fn psi_field(&self, z: PhysicalPoint, cfg: QuadratureConfig) -> LambdaField {
        let Self { energy, alpha } = *self;
        LambdaField::new("psi_point", move |l| psi_point(z, l, energy, alpha, &cfg))
    }

    pub fn psi_star_field(&self, z: PhysicalPoint, cfg: QuadratureConfig) -> LambdaField {
        let Self { energy, alpha } = *self;
        LambdaField::new("psi_star_point", move |l| {
            psi_star_point(z, l, energy, alpha, &cfg)
        })
    }

    /// `f* = (i sign(λλ̄-1)/λ) a(λ)`, the conjugate partner of `f = a`.
    pub fn a_star_field(&self) -> LambdaField {
        let Self { energy, alpha } = *self;
        LambdaField::new("a_star", move |l| {
            Ok(I * l.sign()? / l.value() * a_point(l, energy, alpha)?)
        })
    }
}
