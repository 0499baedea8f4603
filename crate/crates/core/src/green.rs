//! The Faddeev Green function `G(z, λ, E) = e^{ikx} g(x, k)` at negative
//! energy, evaluated by two independent routes.
//!
//! * [`green_direct`] integrates the Fourier representation of `g` in polar
//!   coordinates. The radial integral `∫_0^∞ e^{iρ x·ω}/(ρ + 2k·ω) dρ` has a
//!   closed form in terms of `E1`, so only the angular integral is numerical.
//!   Its integrand has integrable log singularities where `x·ω = 0` and a jump
//!   where the pole `ρ = -2k·ω` crosses the positive axis; those angles are
//!   used as breakpoints.
//! * [`green_contour_shift`] shifts the Fourier contour by `Im k`. What
//!   remains is the classical resolvent `-K0(√|E||x|)/2π` plus the residues of
//!   the poles crossed on the way, a smooth 1D integral over `|v| < |Re k|`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_with_breakpoints, Tolerance};
use crate::special::{bessel_k0, radial_fourier_pole};
use crate::spectral::{k_from_lambda, plane_wave, Energy, PhysicalPoint, SpectralParam};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureConfig {
    pub fn tight() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_subdivisions: 8000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GreenMethod {
    DirectQuadrature,
    ContourShift,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenEval {
    /// Real part of the computed Green function.
    pub value: f64,
    /// Imaginary part left over by the numerics; zero in exact arithmetic.
    pub imag: f64,
    pub method: GreenMethod,
    pub est_error: f64,
}

impl GreenEval {
    pub fn is_real(&self) -> bool {
        self.imag.abs() <= (10.0 * self.est_error).max(1e-8) * (1.0 + self.value.abs())
    }
}

fn reject_origin(z: PhysicalPoint) -> Result<()> {
    if z.abs() == 0.0 {
        Err(Error::Domain(
            "the Green function is logarithmically singular at z = 0".into(),
        ))
    } else {
        Ok(())
    }
}

/// `-(1/2π) K0(√|E| r)`, the value of `G` on `|λ| = 1`.
pub fn classical_green(r: f64, energy: Energy) -> f64 {
    -bessel_k0(energy.sqrt_abs() * r) / TAU
}

fn wrap_angle(phi: f64) -> f64 {
    phi.rem_euclid(TAU)
}

pub fn green_direct(
    z: PhysicalPoint,
    lam: SpectralParam,
    energy: Energy,
    cfg: &QuadratureConfig,
) -> Result<GreenEval> {
    reject_origin(z)?;
    let k = k_from_lambda(energy, lam);
    let (k1, k2) = (k.k1(), k.k2());
    let (x1, x2) = (z.x1(), z.x2());

    let arg_z = z.z().arg();
    let arg_l = lam.value().arg();
    let mut breaks: Vec<f64> = [
        arg_z + PI / 2.0,
        arg_z - PI / 2.0,
        arg_l + PI / 2.0,
        arg_l - PI / 2.0,
    ]
    .into_iter()
    .map(wrap_angle)
    .collect();
    breaks.push(0.0);
    breaks.push(TAU);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let angular = |phi: f64| {
        let (s, c) = phi.sin_cos();
        let proj = x1 * c + x2 * s;
        let beta = 2.0 * (k1 * c + k2 * s);
        if proj == 0.0 || beta.norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        radial_fourier_pole(proj, beta)
    };

    let wave = plane_wave(z, lam, energy);
    let scale = 4.0 * PI * PI;
    let tol = Tolerance::new(cfg.rel_tol, cfg.abs_tol * scale / wave.norm().max(1e-300));
    let integral = integrate_with_breakpoints(angular, &breaks, tol, cfg.max_subdivisions)?;
    let g = -integral.value / scale;
    let value = wave * g;
    Ok(GreenEval {
        value: value.re,
        imag: value.im,
        method: GreenMethod::DirectQuadrature,
        est_error: wave.norm() * integral.error / scale,
    })
}

pub fn green_contour_shift(
    z: PhysicalPoint,
    lam: SpectralParam,
    energy: Energy,
    cfg: &QuadratureConfig,
) -> Result<GreenEval> {
    reject_origin(z)?;
    let s = energy.sqrt_abs();
    let r = lam.modulus();
    let rotated = z.z() * Complex64::from_polar(1.0, -lam.value().arg());
    let (along, across) = (rotated.re, rotated.im);
    let half_width = 0.5 * s * (r - 1.0 / r).abs();

    let classical = classical_green(z.abs(), energy);
    let mut value = Complex64::new(classical, 0.0);
    let mut est_error = 4.0 * f64::EPSILON * classical.abs();
    if half_width > 0.0 {
        let residues = |v: f64| {
            let mu = (v * v + s * s).sqrt();
            Complex64::new(-along * mu, v * across).exp() / mu
        };
        let tol = Tolerance::new(cfg.rel_tol, cfg.abs_tol * 4.0 * PI);
        let integral = integrate(residues, -half_width, half_width, tol, cfg.max_subdivisions)?;
        value += integral.value / (4.0 * PI);
        est_error += integral.error / (4.0 * PI);
    }
    Ok(GreenEval {
        value: value.re,
        imag: value.im,
        method: GreenMethod::ContourShift,
        est_error,
    })
}

pub fn green_eval(
    method: GreenMethod,
    z: PhysicalPoint,
    lam: SpectralParam,
    energy: Energy,
    cfg: &QuadratureConfig,
) -> Result<GreenEval> {
    match method {
        GreenMethod::DirectQuadrature => green_direct(z, lam, energy, cfg),
        GreenMethod::ContourShift => green_contour_shift(z, lam, energy, cfg),
    }
}

/// `G(z, λ, E)` as a real number, via the contour-shift route.
pub fn green(
    z: PhysicalPoint,
    lam: SpectralParam,
    energy: Energy,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    green_contour_shift(z, lam, energy, cfg).map(|g| g.value)
}

/// Right-hand side of the `∂_λ̄` identity for `G`:
/// `(1/4π)(sign(λλ̄-1)/λ̄) exp[-(√|E|/2)(λ̄ z + z̄/λ̄)]`.
pub fn dbar_green_rhs(z: PhysicalPoint, lam: SpectralParam, energy: Energy) -> Result<Complex64> {
    let sign = lam.sign()?;
    let lb = lam.value().conj();
    let z = z.z();
    Ok(sign / (4.0 * PI * lb) * (-0.5 * energy.sqrt_abs() * (lb * z + z.conj() / lb)).exp())
}

/// Stencil `λ ± h, λ ± ih` with `h = h_rel |λ|`, all on the same side of
/// the unit circle as `λ`.
pub(crate) fn same_side_stencil(lam: SpectralParam, h_rel: f64) -> Result<[SpectralParam; 4]> {
    let step = h_rel * lam.modulus();
    let l = lam.value();
    let pts = [
        l + step,
        l - step,
        l + Complex64::new(0.0, step),
        l - Complex64::new(0.0, step),
    ];
    let mut out = [lam; 4];
    for (slot, p) in out.iter_mut().zip(pts) {
        let sp = SpectralParam::new(p)?;
        if lam.domain() == crate::spectral::Domain::Boundary || sp.domain() != lam.domain() {
            return Err(Error::Stencil { lambda: l, step });
        }
        *slot = sp;
    }
    Ok(out)
}

/// `|∂_λ̄ G (central differences, relative step h_rel) - rhs|`.
pub fn check_dbar_green(
    z: PhysicalPoint,
    lam: SpectralParam,
    energy: Energy,
    h_rel: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let [xp, xm, yp, ym] = same_side_stencil(lam, h_rel)?;
    let step = h_rel * lam.modulus();
    let g = |p| green(z, p, energy, cfg);
    let dx = (g(xp)? - g(xm)?) / (2.0 * step);
    let dy = (g(yp)? - g(ym)?) / (2.0 * step);
    let fd = 0.5 * Complex64::new(dx, dy);
    Ok((fd - dbar_green_rhs(z, lam, energy)?).norm())
}

/// Coefficient of `ln|x|` in `g(x, k)` as `x → 0`, by successive difference
/// quotients over the radii `10^-1, ..., 10^-8`. Values at `±x` are averaged
/// so the `O(|x| ln|x|)` odd part drops out of the quotients.
pub fn green_log_coeff(lam: SpectralParam, energy: Energy, cfg: &QuadratureConfig) -> Result<f64> {
    green_log_coeff_with(GreenMethod::ContourShift, lam, energy, cfg)
}

pub fn green_log_coeff_with(
    method: GreenMethod,
    lam: SpectralParam,
    energy: Energy,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    // Any generic direction works; avoid the symmetry axes of the test grids.
    let direction = Complex64::from_polar(1.0, 0.3);
    let reduced = |r: f64| -> Result<(f64, Complex64)> {
        let mut sum = Complex64::new(0.0, 0.0);
        for x in [PhysicalPoint(direction * r), PhysicalPoint(-direction * r)] {
            let g = green_eval(method, x, lam, energy, cfg)?;
            sum += Complex64::new(g.value, g.imag) / plane_wave(x, lam, energy);
        }
        Ok((r.ln(), 0.5 * sum))
    };
    let mut prev = reduced(1e-1)?;
    let mut slopes: Vec<f64> = Vec::new();
    for n in 2..=8 {
        let cur = reduced(10f64.powi(-n))?;
        let slope = (cur.1 - prev.1) / (cur.0 - prev.0);
        if let Some(last) = slopes.last() {
            if (slope.re - last).abs() < 1e-9 && slope.im.abs() < 1e-9 {
                return Ok(slope.re);
            }
        }
        slopes.push(slope.re);
        prev = cur;
    }
    let spread = slopes
        .windows(2)
        .last()
        .map(|w| (w[1] - w[0]).abs())
        .unwrap_or(f64::INFINITY);
    Err(Error::NonConvergence {
        what: "log-coefficient extrapolation",
        achieved: spread,
        requested: 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn e(v: f64) -> Energy {
        Energy::new(v).unwrap()
    }

    fn lam(r: f64, a: f64) -> SpectralParam {
        SpectralParam::from_polar(r, a).unwrap()
    }

    fn zp(r: f64, a: f64) -> PhysicalPoint {
        PhysicalPoint(Complex64::from_polar(r, a))
    }

    #[test]
    fn origin_is_rejected() {
        let cfg = QuadratureConfig::default();
        let z = PhysicalPoint::new(0.0, 0.0);
        assert!(matches!(
            green_direct(z, lam(2.0, 0.0), e(-1.0), &cfg),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            green_contour_shift(z, lam(2.0, 0.0), e(-1.0), &cfg),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn unit_circle_reduces_to_classical_resolvent() {
        let cfg = QuadratureConfig::tight();
        let want = -0.067_008_120_508_497_137; // -(1/2π) K0(1)
        let d = green_direct(zp(1.0, 0.0), lam(1.0, 0.0), e(-1.0), &cfg).unwrap();
        assert_relative_eq!(d.value, want, max_relative = 1e-9);
        assert!(d.is_real());
        let s = green_contour_shift(zp(2.0, 0.7), lam(1.0, 0.0), e(-1.0), &cfg).unwrap();
        assert_relative_eq!(s.value, -0.018_126_772_835_967_563, max_relative = 1e-14);
    }

    #[test]
    fn rotational_covariance_on_unit_circle() {
        let cfg = QuadratureConfig::tight();
        let a = green_direct(zp(1.3, 0.2), lam(1.0, 0.5), e(-2.0), &cfg).unwrap();
        let b = green_direct(zp(1.3, 1.4), lam(1.0, 1.7), e(-2.0), &cfg).unwrap();
        assert_relative_eq!(a.value, b.value, max_relative = 1e-9);
    }

    #[test]
    fn methods_agree_off_the_circle() {
        let cfg = QuadratureConfig::tight();
        for (z, l, en) in [
            (zp(1.0, 0.0), lam(3.0, 0.0), -1.0),
            (zp(0.8, 2.1), lam(0.4, 1.0), -4.0),
            (zp(2.0, -0.6), lam(1.7, 2.9), -0.5),
        ] {
            let d = green_direct(z, l, e(en), &cfg).unwrap();
            let s = green_contour_shift(z, l, e(en), &cfg).unwrap();
            assert!(
                (d.value - s.value).abs() <= 1e-9 * s.value.abs().max(1e-12),
                "{z:?} {l:?}: {} vs {}",
                d.value,
                s.value
            );
            assert!(d.is_real() && s.is_real());
        }
    }

    #[test]
    fn reflection_symmetry_of_green() {
        let cfg = QuadratureConfig::tight();
        let l = lam(2.5, 0.9);
        let (r, _) = crate::spectral::involutions(l);
        let z = zp(1.1, 0.4);
        for method in [GreenMethod::DirectQuadrature, GreenMethod::ContourShift] {
            let a = green_eval(method, z, l, e(-1.0), &cfg).unwrap();
            let b = green_eval(method, z, r, e(-1.0), &cfg).unwrap();
            assert_relative_eq!(a.value, b.value, max_relative = 1e-9);
        }
    }

    #[test]
    fn dbar_identity_is_second_order() {
        let cfg = QuadratureConfig::tight();
        let (z, l) = (zp(0.9, 0.5), lam(2.0, 0.4));
        let r1 = check_dbar_green(z, l, e(-1.0), 1e-2, &cfg).unwrap();
        let r2 = check_dbar_green(z, l, e(-1.0), 5e-3, &cfg).unwrap();
        let ratio = r1 / r2;
        assert!((3.6..4.4).contains(&ratio), "ratio {ratio}");
        let r = check_dbar_green(
            z,
            l,
            e(-1.0),
            1e-3,
            &QuadratureConfig {
                rel_tol: 1e-8,
                ..cfg
            },
        )
        .unwrap();
        assert!(r < 1e-4);
    }

    #[test]
    fn dbar_rhs_is_real_for_real_arguments() {
        let v = dbar_green_rhs(PhysicalPoint::new(0.7, 0.0), lam(0.6, 0.0), e(-3.0)).unwrap();
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn stencil_straddling_unit_circle_is_rejected() {
        let err = check_dbar_green(
            zp(1.0, 0.0),
            lam(1.005, 0.0),
            e(-1.0),
            1e-2,
            &QuadratureConfig::default(),
        );
        assert!(matches!(err, Err(Error::Stencil { .. })));
    }

    #[test]
    fn log_coefficient_is_universal() {
        let cfg = QuadratureConfig::tight();
        for (l, en) in [
            (lam(1.0, 0.0), -1.0),
            (lam(2.0, 0.0), -1.0),
            (lam(1.0, 0.0), -4.0),
            (lam(0.3, 2.0), -0.5),
        ] {
            let c = green_log_coeff(l, e(en), &cfg).unwrap();
            assert_relative_eq!(c, 1.0 / TAU, max_relative = 1e-7);
        }
        let c = green_log_coeff_with(GreenMethod::DirectQuadrature, lam(2.0, 0.0), e(-1.0), &cfg)
            .unwrap();
        assert_relative_eq!(c, 1.0 / TAU, max_relative = 1e-7);
    }
}
