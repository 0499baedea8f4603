//! Special functions needed by the Green-function evaluators.

use std::f64::consts::PI;

use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponentially scaled modified Bessel function `e^x K0(x)` for `x > 0`.
///
/// Uses the representation `K0(x) = ∫_0^∞ exp(-x cosh t) dt`; after
/// factoring out `e^{-x}` the integrand is doubly-exponentially decaying and
/// the trapezoidal rule converges geometrically in the step size.
pub fn bessel_k0_scaled(x: f64) -> f64 {
    assert!(x > 0.0, "K0 requires a positive argument, got {x}");
    // exp(-745) underflows; the tail beyond this point is below f64 resolution.
    let t_max = 2.0 * (372.5 / x).sqrt().asinh();
    let h = (0.5 / x.sqrt()).min(0.1);
    let n = (t_max / h).ceil() as usize;
    let h = t_max / n as f64;
    let mut sum = 0.5;
    for i in 1..=n {
        let s = (0.5 * i as f64 * h).sinh();
        sum += (-2.0 * x * s * s).exp();
    }
    sum * h
}

/// Modified Bessel function of the second kind, order zero.
pub fn bessel_k0(x: f64) -> f64 {
    (-x).exp() * bessel_k0_scaled(x)
}

/// Scaled exponential integral `e^w E1(w)` on the principal branch
/// (cut along the negative real axis, `arg w ∈ (-π, π]`).
pub fn exp_e1(w: Complex64) -> Complex64 {
    // A signed zero imaginary part would select the lower lip of the cut.
    let w = if w.im == 0.0 {
        Complex64::new(w.re, 0.0)
    } else {
        w
    };
    let r = w.norm();
    if r == 0.0 {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    // The power series loses roughly log10(|w| e^{|w| + Re w}) digits.
    if r + w.re < 6.0 {
        e1_series(w) * w.exp()
    } else {
        exp_e1_continued_fraction(w)
    }
}

fn e1_series(w: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..500 {
        term *= -w / n as f64;
        let contrib = term / n as f64;
        sum += contrib;
        if n as f64 > w.norm() && contrib.norm() <= 1e-17 * sum.norm().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - w.ln() - sum
}

fn exp_e1_continued_fraction(w: Complex64) -> Complex64 {
    // Modified Lentz evaluation of 1/(w+1- 1/(w+3- 4/(w+5- ...))).
    let tiny = 1e-300;
    let mut b = w + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..20_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        d = d.inv();
        c = b + an / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h
}

/// `∫_0^∞ e^{iρc} / (ρ + β) dρ` for real `c ≠ 0` and `β` off the closed
/// negative real axis.
///
/// For `c > 0` the substitution `t = -ic(ρ + β)` turns the integral into
/// `e^w ∫_w^{w - i∞} e^{-t}/t dt` with `w = -icβ`. That ray integral equals the
/// principal `E1(w)` except when `w` sits in the closed second quadrant, where
/// the ray crosses the cut and picks up `2πi`.
pub fn radial_fourier_pole(c: f64, beta: Complex64) -> Complex64 {
    if c < 0.0 {
        return radial_fourier_pole(-c, beta.conj()).conj();
    }
    let w = Complex64::new(0.0, -c) * beta;
    let mut value = exp_e1(w);
    if w.re < 0.0 && w.im >= 0.0 {
        value += Complex64::new(0.0, 2.0 * PI) * w.exp();
    }
    value
}
