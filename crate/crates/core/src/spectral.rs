//! The fixed-energy spectral variety `k² = E`, its `λ`-chart and the
//! involutions of `λ`-space.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for classifying `|λ| = 1`.
pub const TOL_BOUNDARY: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A strictly negative energy level.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Energy(f64);

impl Energy {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value < 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::Domain(format!(
                "energy must be finite and negative, got {value}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `√|E|`.
    pub fn sqrt_abs(self) -> f64 {
        (-self.0).sqrt()
    }

    /// `ln|E|`.
    pub fn ln_abs(self) -> f64 {
        (-self.0).ln()
    }
}

impl TryFrom<f64> for Energy {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Energy> for f64 {
    fn from(e: Energy) -> f64 {
        e.0
    }
}

/// Which side of the unit circle a spectral parameter sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Domain {
    /// `0 < |λ| < 1`
    DPlus,
    /// `|λ| > 1`
    DMinus,
    Boundary,
}

impl Domain {
    pub fn classify(modulus: f64) -> Self {
        if (modulus - 1.0).abs() <= TOL_BOUNDARY {
            Domain::Boundary
        } else if modulus < 1.0 {
            Domain::DPlus
        } else {
            Domain::DMinus
        }
    }

    /// `sign(λλ̄ - 1)`; undefined on the circle.
    pub fn sign(self) -> Option<f64> {
        match self {
            Domain::DPlus => Some(-1.0),
            Domain::DMinus => Some(1.0),
            Domain::Boundary => None,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::DPlus => "D+",
            Domain::DMinus => "D-",
            Domain::Boundary => "|lambda|=1",
        })
    }
}

/// A point `λ ∈ ℂ∖0` of the spectral variety together with its domain tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParam {
    lambda: Complex64,
    domain: Domain,
}

impl SpectralParam {
    pub fn new(lambda: Complex64) -> Result<Self> {
        if !(lambda.re.is_finite() && lambda.im.is_finite()) || lambda.norm() == 0.0 {
            return Err(Error::Domain(format!(
                "lambda must be finite and nonzero, got {lambda}"
            )));
        }
        Ok(Self {
            lambda,
            domain: Domain::classify(lambda.norm()),
        })
    }

    pub fn from_polar(radius: f64, angle: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(radius, angle))
    }

    pub fn value(self) -> Complex64 {
        self.lambda
    }

    pub fn domain(self) -> Domain {
        self.domain
    }

    pub fn modulus(self) -> f64 {
        self.lambda.norm()
    }

    /// `sign(λλ̄ - 1)`, or a boundary error on the unit circle.
    pub fn sign(self) -> Result<f64> {
        self.domain.sign().ok_or(Error::Boundary(self.lambda))
    }

    /// `|ln(λλ̄)|`, computed as `2|ln|λ||` to stay off the complex-log branch.
    pub fn abs_ln_modulus_sq(self) -> f64 {
        2.0 * self.lambda.norm().ln().abs()
    }
}

impl std::ops::Neg for SpectralParam {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            lambda: -self.lambda,
            domain: self.domain,
        }
    }
}

/// A point of `Σ_E` stored in isotropic coordinates
/// `p = k1 + i k2`, `q = k1 - i k2`, so that `k² = p q`.
///
/// On the `λ`-chart `p = i√|E| λ` and `q = i√|E| / λ`; keeping these instead
/// of the Cartesian pair avoids the `|λ|²` cancellation in `k1² + k2²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KVector {
    p: Complex64,
    q: Complex64,
}

impl KVector {
    pub fn k1(&self) -> Complex64 {
        0.5 * (self.p + self.q)
    }

    pub fn k2(&self) -> Complex64 {
        (self.p - self.q) / (2.0 * I)
    }

    /// `k·k = k1² + k2²`.
    pub fn square(&self) -> Complex64 {
        self.p * self.q
    }

    /// `k·x` for a real point `x = (x1, x2)`.
    pub fn dot(&self, x: PhysicalPoint) -> Complex64 {
        self.k1() * x.x1() + self.k2() * x.x2()
    }

    pub fn re(&self) -> [f64; 2] {
        [self.k1().re, self.k2().re]
    }

    pub fn im(&self) -> [f64; 2] {
        [self.k1().im, self.k2().im]
    }
}

/// A point of the physical plane, `z = x1 + i x2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalPoint(pub Complex64);

impl PhysicalPoint {
    pub fn new(x1: f64, x2: f64) -> Self {
        Self(Complex64::new(x1, x2))
    }

    pub fn z(self) -> Complex64 {
        self.0
    }

    pub fn x1(self) -> f64 {
        self.0.re
    }

    pub fn x2(self) -> f64 {
        self.0.im
    }

    pub fn abs(self) -> f64 {
        self.0.norm()
    }
}

/// `k_E(λ) = ((λ + 1/λ) i√|E|/2, (λ - 1/λ) √|E|/2)`.
pub fn k_from_lambda(energy: Energy, lam: SpectralParam) -> KVector {
    let s = energy.sqrt_abs();
    let l = lam.value();
    KVector {
        p: I * s * l,
        q: I * s / l,
    }
}

/// `|Re k| + |Im k|` with Euclidean norms of the real and imaginary parts.
pub fn re_im_norm(k: &KVector) -> f64 {
    let [r1, r2] = k.re();
    let [i1, i2] = k.im();
    r1.hypot(r2) + i1.hypot(i2)
}

/// Closed form of `|Re k| + |Im k|` on the chart: `√|E| max(|λ|, 1/|λ|)`.
pub fn re_im_norm_closed(energy: Energy, lam: SpectralParam) -> f64 {
    let r = lam.modulus();
    energy.sqrt_abs() * if r >= 1.0 { r } else { 1.0 / r }
}

/// The two symmetry partners `(1/λ̄, -1/λ̄)`.
pub fn involutions(lam: SpectralParam) -> (SpectralParam, SpectralParam) {
    let reflected = lam.value().conj().inv();
    let a = SpectralParam::new(reflected).expect("1/conj(lambda) is finite and nonzero");
    (a, -a)
}

/// `e^{ikx} = exp[-(√|E|/2)(λ z̄ + z/λ)]`.
pub fn plane_wave(z: PhysicalPoint, lam: SpectralParam, energy: Energy) -> Complex64 {
    let l = lam.value();
    let z = z.z();
    (-0.5 * energy.sqrt_abs() * (l * z.conj() + z / l)).exp()
}

/// The conjugate-equation vacuum solution `(i/λ) exp[+(√|E|/2)(λ z̄ + z/λ)]`.
pub fn conjugate_plane_wave(z: PhysicalPoint, lam: SpectralParam, energy: Energy) -> Complex64 {
    let l = lam.value();
    let z = z.z();
    I / l * (0.5 * energy.sqrt_abs() * (l * z.conj() + z / l)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lam(re: f64, im: f64) -> SpectralParam {
        SpectralParam::new(c(re, im)).unwrap()
    }

    fn e(v: f64) -> Energy {
        Energy::new(v).unwrap()
    }

    #[test]
    fn rejects_off_variety_inputs() {
        assert!(SpectralParam::new(c(0.0, 0.0)).is_err());
        assert!(Energy::new(0.0).is_err());
        assert!(Energy::new(1.5).is_err());
        assert!(Energy::new(f64::NAN).is_err());
    }

    #[test]
    fn k_examples() {
        let k = k_from_lambda(e(-1.0), lam(1.0, 0.0));
        assert!((k.k1() - c(0.0, 1.0)).norm() < 1e-15 && k.k2().norm() < 1e-15);

        let k = k_from_lambda(e(-1.0), lam(0.0, 1.0));
        assert!(k.k1().norm() < 1e-15 && (k.k2() - c(0.0, 1.0)).norm() < 1e-15);

        let k = k_from_lambda(e(-1.0), lam(2.0, 0.0));
        assert!((k.k1() - c(0.0, 1.25)).norm() < 1e-15);
        assert!((k.k2() - c(0.75, 0.0)).norm() < 1e-15);
        assert!((k.square() - c(-1.0, 0.0)).norm() < 1e-15);
        let cartesian = k.k1() * k.k1() + k.k2() * k.k2();
        assert!((cartesian - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn re_im_norm_examples() {
        assert_relative_eq!(
            re_im_norm(&k_from_lambda(e(-1.0), lam(2.0, 0.0))),
            2.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            re_im_norm(&k_from_lambda(e(-1.0), lam(1.0, 0.0))),
            1.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            re_im_norm(&k_from_lambda(e(-4.0), lam(0.5, 0.0))),
            4.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn involution_examples() {
        let (a, b) = involutions(lam(2.0, 0.0));
        assert_eq!((a.value(), b.value()), (c(0.5, 0.0), c(-0.5, 0.0)));
        let (a, b) = involutions(lam(0.0, 1.0));
        assert!((a.value() - c(0.0, 1.0)).norm() < 1e-16);
        assert!((b.value() - c(0.0, -1.0)).norm() < 1e-16);
        let (a, b) = involutions(lam(1.0, 1.0));
        assert!((a.value() - c(0.5, 0.5)).norm() < 1e-16);
        assert!((b.value() - c(-0.5, -0.5)).norm() < 1e-16);
    }

    #[test]
    fn plane_wave_examples() {
        assert_eq!(
            plane_wave(PhysicalPoint::new(0.0, 0.0), lam(0.3, -2.0), e(-7.0)),
            c(1.0, 0.0)
        );
        let v = plane_wave(PhysicalPoint::new(1.0, 0.0), lam(1.0, 0.0), e(-1.0));
        assert_relative_eq!(v.re, (-1.0f64).exp(), max_relative = 1e-15);
        let v = plane_wave(PhysicalPoint::new(0.0, 1.0), lam(2.0, 0.0), e(-1.0));
        assert!((v - c(0.0, 0.75).exp()).norm() < 1e-15);
    }

    #[test]
    fn domain_classification() {
        assert_eq!(lam(0.5, 0.0).domain(), Domain::DPlus);
        assert_eq!(lam(0.0, 2.0).domain(), Domain::DMinus);
        assert_eq!(lam(1.0 + 1e-13, 0.0).domain(), Domain::Boundary);
        assert!(lam(1.0, 0.0).sign().is_err());
        assert_eq!(lam(0.1, 0.1).sign().unwrap(), -1.0);
    }

    proptest! {
        #[test]
        fn plane_wave_agrees_with_exp_ikx(
            lr in 0.05f64..20.0, la in -3.2f64..3.2, x1 in -2.0f64..2.0, x2 in -2.0f64..2.0, ev in -9.0f64..-0.1,
        ) {
            let l = SpectralParam::from_polar(lr, la).unwrap();
            let en = e(ev);
            let x = PhysicalPoint::new(x1, x2);
            let k = k_from_lambda(en, l);
            let direct = (I * k.dot(x)).exp();
            let pw = plane_wave(x, l, en);
            prop_assert!((pw - direct).norm() <= 1e-12 * pw.norm().max(1e-300) * (1.0 + k.dot(x).norm()));
        }

        #[test]
        fn plane_wave_at_minus_lambda_is_reciprocal(
            lr in 0.05f64..20.0, la in -3.2f64..3.2, x1 in -2.0f64..2.0, x2 in -2.0f64..2.0, ev in -9.0f64..-0.1,
        ) {
            let l = SpectralParam::from_polar(lr, la).unwrap();
            let x = PhysicalPoint::new(x1, x2);
            let prod = plane_wave(x, l, e(ev)) * plane_wave(x, -l, e(ev));
            prop_assert!((prod - 1.0).norm() < 1e-12);
        }

        #[test]
        fn reflection_is_an_involution(lr in 1e-3f64..1e3, la in -3.2f64..3.2) {
            let l = SpectralParam::from_polar(lr, la).unwrap();
            let (once, _) = involutions(l);
            let (twice, _) = involutions(once);
            prop_assert!((twice.value() - l.value()).norm() <= 1e-15 * lr.max(1.0) * 2.0);
        }
    }
}
