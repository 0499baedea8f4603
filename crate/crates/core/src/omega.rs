//! Moutard potentials `ω_{ψ,ψ*}`: closed forms for the creation and
//! annihilation seeds, path integration of `dω = ψψ* dλ - conj(ψψ*) dλ̄`,
//! and gradient and exactness checks.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{conjugate_plane_wave_field, plane_wave_field, vacuum_f, vacuum_f_star};
use crate::gaf::{d_fd, dbar_fd, AnnulusGrid, LambdaField, ResidualReport, Sample};
use crate::green::{green, QuadratureConfig};
use crate::point::{a_point, denom, Coupling, PointPotential, TOL_SING};
use crate::quadrature::gauss_legendre;
use crate::spectral::{Domain, Energy, PhysicalPoint, SpectralParam};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Vertices per full turn used to approximate arcs by polylines.
pub const ARC_VERTICES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OmegaKind {
    FfCreation,
    PsiFCreation,
    FPsiStarCreation,
    FfAnnihilation,
    PsiFAnnihilation,
    FPsiStarAnnihilation,
}

impl OmegaKind {
    pub const ALL: [OmegaKind; 6] = [
        OmegaKind::FfCreation,
        OmegaKind::PsiFCreation,
        OmegaKind::FPsiStarCreation,
        OmegaKind::FfAnnihilation,
        OmegaKind::PsiFAnnihilation,
        OmegaKind::FPsiStarAnnihilation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OmegaKind::FfCreation => "ff_creation",
            OmegaKind::PsiFCreation => "psi_f_creation",
            OmegaKind::FPsiStarCreation => "f_psi_star_creation",
            OmegaKind::FfAnnihilation => "ff_annihilation",
            OmegaKind::PsiFAnnihilation => "psi_f_annihilation",
            OmegaKind::FPsiStarAnnihilation => "f_psi_star_annihilation",
        }
    }

    pub fn is_creation(self) -> bool {
        matches!(
            self,
            OmegaKind::FfCreation | OmegaKind::PsiFCreation | OmegaKind::FPsiStarCreation
        )
    }

    /// Depends on `z` through the Green function.
    pub fn uses_green(self) -> bool {
        !matches!(self, OmegaKind::FfCreation | OmegaKind::FfAnnihilation)
    }
}

impl fmt::Display for OmegaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Real integration constants on `D₊` and `D₋`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct OmegaConstants {
    pub plus: f64,
    pub minus: f64,
}

impl OmegaConstants {
    pub fn uniform(c: f64) -> Self {
        Self { plus: c, minus: c }
    }

    pub fn for_domain(&self, domain: Domain) -> Option<f64> {
        match domain {
            Domain::DPlus => Some(self.plus),
            Domain::DMinus => Some(self.minus),
            Domain::Boundary => None,
        }
    }
}

/// A closed-form potential together with its per-domain constants.
///
/// The constant enters as `-i c` for `FfCreation` and as `+i c` for every
/// other kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaClosedForm {
    pub kind: OmegaKind,
    pub constants: OmegaConstants,
}

impl OmegaClosedForm {
    pub fn new(kind: OmegaKind, constants: OmegaConstants) -> Self {
        Self { kind, constants }
    }

    /// Creation constants: `c_{f,f*} = 4π/α`, the rest zero.
    /// Annihilation constants: all zero.
    pub fn canonical(kind: OmegaKind, alpha: Coupling) -> Self {
        let c = if kind == OmegaKind::FfCreation {
            4.0 * PI / alpha.value()
        } else {
            0.0
        };
        Self::new(kind, OmegaConstants::uniform(c))
    }

    pub fn field(&self, ctx: OmegaContext) -> LambdaField {
        let form = *self;
        LambdaField::new(format!("omega_{}", self.kind), move |l| {
            omega_closed(&form, &ctx, l)
        })
    }
}

/// Physical parameters shared by all potentials of one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaContext {
    pub z: PhysicalPoint,
    pub energy: Energy,
    pub alpha: Coupling,
    pub quadrature: QuadratureConfig,
}

impl OmegaContext {
    /// The `(ψ, ψ*)` pair whose product `ψψ*` is `∂_λ ω` for `kind`.
    pub fn integrand_pair(&self, kind: OmegaKind) -> (LambdaField, LambdaField) {
        let p = PointPotential::new(self.energy, self.alpha);
        match kind {
            OmegaKind::FfCreation => (vacuum_f(), vacuum_f_star()),
            OmegaKind::PsiFCreation => (plane_wave_field(self.z, self.energy), vacuum_f_star()),
            OmegaKind::FPsiStarCreation => {
                (vacuum_f(), conjugate_plane_wave_field(self.z, self.energy))
            }
            OmegaKind::FfAnnihilation => (p.a_field(), p.a_star_field()),
            OmegaKind::PsiFAnnihilation => (p.psi_field(self.z, self.quadrature), p.a_star_field()),
            OmegaKind::FPsiStarAnnihilation => {
                (p.a_field(), p.psi_star_field(self.z, self.quadrature))
            }
        }
    }
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

/// Closed-form `ω` of `form.kind` at `λ`.
pub fn omega_closed(
    form: &OmegaClosedForm,
    ctx: &OmegaContext,
    lam: SpectralParam,
) -> Result<Complex64> {
    let c = match form.constants.for_domain(lam.domain()) {
        Some(c) => c,
        None if form.constants.plus == form.constants.minus => form.constants.plus,
        None => return Err(Error::Boundary(lam.value())),
    };
    let sign = || lam.sign();
    let OmegaContext {
        z,
        energy,
        alpha,
        quadrature,
    } = *ctx;
    let value = match form.kind {
        OmegaKind::FfCreation => I * (lam.abs_ln_modulus_sq() + energy.ln_abs() - c),
        OmegaKind::PsiFCreation => I * (4.0 * PI * green(z, lam, energy, &quadrature)? + c),
        OmegaKind::FPsiStarCreation => {
            I * (4.0 * PI * sign()? * green(z, -lam, energy, &quadrature)? + c)
        }
        OmegaKind::FfAnnihilation => I * (a_point(lam, energy, alpha)? / PI + c),
        OmegaKind::PsiFAnnihilation => {
            let d = checked_denom(lam, energy, alpha)?;
            I * (-4.0 * green(z, lam, energy, &quadrature)? / d + c)
        }
        OmegaKind::FPsiStarAnnihilation => {
            let d = checked_denom(lam, energy, alpha)?;
            I * (-4.0 * sign()? * green(z, -lam, energy, &quadrature)? / d + c)
        }
    };
    Ok(value)
}

/// A polyline in `λ`-space with the value of `ω` at its first vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationPath {
    pub waypoints: Vec<SpectralParam>,
    pub base_value: Complex64,
}

/// Smallest `|λ|` on the segment `[a, b]`.
fn min_modulus(a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a.norm();
    }
    let t = (-(a.conj() * d).re / len2).clamp(0.0, 1.0);
    (a + t * d).norm()
}

impl IntegrationPath {
    pub fn new(waypoints: Vec<SpectralParam>, base_value: Complex64) -> Result<Self> {
        let path = Self {
            waypoints,
            base_value,
        };
        path.validate()?;
        Ok(path)
    }

    /// At least two vertices, purely imaginary base value, and no segment
    /// touching the origin or the unit circle.
    pub fn validate(&self) -> Result<()> {
        if self.waypoints.len() < 2 {
            return Err(Error::Path("a path needs at least two waypoints".into()));
        }
        if !(self.base_value.re.abs() <= 1e-10 * (1.0 + self.base_value.norm())) {
            return Err(Error::Path(format!(
                "base value {} is not purely imaginary",
                self.base_value
            )));
        }
        for w in self.waypoints.windows(2) {
            let (a, b) = (w[0].value(), w[1].value());
            let lo = min_modulus(a, b);
            let hi = a.norm().max(b.norm());
            if lo <= 1e-12 * hi || (lo <= 1.0 && hi >= 1.0) {
                return Err(Error::Path(format!(
                    "segment {a} -> {b} meets the origin or the unit circle"
                )));
            }
        }
        Ok(())
    }

    /// Additionally requires every segment to stay inside one grid component.
    pub fn validate_on(&self, grid: &AnnulusGrid) -> Result<()> {
        self.validate()?;
        for w in self.waypoints.windows(2) {
            let (a, b) = (w[0].value(), w[1].value());
            let lo = min_modulus(a, b);
            let hi = a.norm().max(b.norm());
            let home = grid.component(lo);
            if home.is_none() || grid.component(hi) != home {
                return Err(Error::Path(format!(
                    "segment {a} -> {b} crosses an excluded band"
                )));
            }
            let (c_lo, c_hi) = grid.component_bounds(home.expect("checked above"));
            if lo < c_lo || hi > c_hi {
                return Err(Error::Path(format!(
                    "segment {a} -> {b} crosses an excluded band"
                )));
            }
        }
        Ok(())
    }

    pub fn end(&self) -> SpectralParam {
        *self.waypoints.last().expect("validated path is non-empty")
    }
}

/// Gauss–Legendre panel settings for [`omega_integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PathQuadrature {
    pub order: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_panels: usize,
}

impl Default for PathQuadrature {
    fn default() -> Self {
        Self {
            order: 16,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_panels: 1024,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathIntegral {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

struct Panels {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Panels {
    /// `∫_a^b [g λ' - conj(g λ')] dt` over `n` equal panels, together with
    /// `∫ |g λ'| dt` for the roundoff floor.
    fn segment(
        &self,
        product: &dyn Fn(Complex64) -> Result<Complex64>,
        a: Complex64,
        b: Complex64,
        n: usize,
    ) -> Result<(Complex64, f64)> {
        let d = b - a;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for p in 0..n {
            let t0 = p as f64 / n as f64;
            let half = 0.5 / n as f64;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                let t = t0 + half * (1.0 + x);
                let g = product(a + t * d)? * d;
                sum += w * half * (g - g.conj());
                mass += w * half * g.norm();
            }
        }
        Ok((sum, mass))
    }
}

/// `base_value + ∫_path [ψψ* dλ - conj(ψψ*) dλ̄]` with panel doubling on
/// each segment until successive estimates agree.
pub fn omega_integrate(
    psi: &LambdaField,
    psi_star: &LambdaField,
    path: &IntegrationPath,
    n_panels: usize,
    quad: &PathQuadrature,
) -> Result<PathIntegral> {
    path.validate()?;
    if n_panels == 0 || quad.order == 0 {
        return Err(Error::Config(
            "path quadrature needs at least one panel and node".into(),
        ));
    }
    let (nodes, weights) = gauss_legendre(quad.order);
    let panels = Panels { nodes, weights };
    let product = |l: Complex64| -> Result<Complex64> { Ok(psi.at(l)? * psi_star.at(l)?) };
    let mut value = path.base_value;
    let mut error = 0.0;
    let mut evaluations = 0;
    for w in path.waypoints.windows(2) {
        let (a, b) = (w[0].value(), w[1].value());
        let mut n = n_panels;
        let (mut coarse, _) = panels.segment(&product, a, b, n)?;
        evaluations += n * quad.order;
        loop {
            let (fine, mass) = panels.segment(&product, a, b, 2 * n)?;
            evaluations += 2 * n * quad.order;
            let diff = (fine - coarse).norm();
            let floor = 100.0 * f64::EPSILON * mass;
            if diff <= quad.abs_tol.max(quad.rel_tol * fine.norm()).max(floor) {
                value += fine;
                error += diff.max(floor);
                break;
            }
            n *= 2;
            if n > quad.max_panels {
                return Err(Error::NonConvergence {
                    what: "path quadrature",
                    achieved: diff,
                    requested: quad.abs_tol.max(quad.rel_tol * fine.norm()),
                });
            }
            coarse = fine;
        }
    }
    Ok(PathIntegral {
        value,
        error,
        evaluations,
    })
}

fn arc(radius: f64, from: f64, to: f64) -> Vec<Complex64> {
    let steps = ((ARC_VERTICES as f64 * (to - from).abs() / TAU).ceil() as usize).max(1);
    (0..=steps)
        .map(|j| Complex64::from_polar(radius, from + (to - from) * j as f64 / steps as f64))
        .collect()
}

/// Anchor radius of the component containing `r`: `2` in `D₋` and `1/2` in
/// `D₊` when those lie in the same component, otherwise the geometric middle
/// of the component clipped to the grid.
pub fn anchor_radius(grid: &AnnulusGrid, r: f64) -> Result<f64> {
    let comp = grid
        .component(r)
        .ok_or_else(|| Error::Path(format!("radius {r} lies in an excluded band")))?;
    let preferred = if r > 1.0 { 2.0 } else { 0.5 };
    if grid.component(preferred) == Some(comp) {
        return Ok(preferred);
    }
    let (lo, hi) = grid.component_bounds(comp);
    let lo = lo.max(grid.r_min.min(r));
    let hi = hi.min(grid.r_max.max(r));
    Ok((lo * hi).sqrt())
}

/// Arc at the anchor radius from angle 0 to `arg λ`, then a radial segment.
pub fn path_to(
    grid: &AnnulusGrid,
    target: SpectralParam,
    base_value: Complex64,
) -> Result<IntegrationPath> {
    let r0 = anchor_radius(grid, target.modulus())?;
    let theta = target.value().arg();
    let mut pts = arc(r0, 0.0, theta);
    if (target.modulus() - r0).abs() > 0.0 {
        pts.push(target.value());
    }
    let waypoints = pts
        .into_iter()
        .map(SpectralParam::new)
        .collect::<Result<Vec<_>>>()?;
    let path = IntegrationPath::new(waypoints, base_value)?;
    path.validate_on(grid)?;
    Ok(path)
}

/// Closed polygon at radius `r`, starting and ending on the positive axis.
pub fn loop_at(grid: &AnnulusGrid, r: f64) -> Result<IntegrationPath> {
    let waypoints = arc(r, 0.0, TAU)
        .into_iter()
        .map(SpectralParam::new)
        .collect::<Result<Vec<_>>>()?;
    let path = IntegrationPath::new(waypoints, Complex64::new(0.0, 0.0))?;
    path.validate_on(grid)?;
    Ok(path)
}

/// `∂_λω - ψψ*` and `∂_λ̄ω + conj(ψψ*)` by central differences with
/// relative step `h_rel`.
pub fn check_omega_gradient(
    omega: &LambdaField,
    psi: &LambdaField,
    psi_star: &LambdaField,
    grid: &AnnulusGrid,
    h_rel: f64,
) -> Result<ResidualReport> {
    let samples = grid.sweep(|lam| -> Result<Sample> {
        let step = h_rel * lam.modulus();
        if !grid.stencil_ok(lam, step) {
            return Err(Error::Stencil {
                lambda: lam.value(),
                step,
            });
        }
        let prod = psi.eval(lam)? * psi_star.eval(lam)?;
        let d = d_fd(omega, lam, step)?;
        let dbar = dbar_fd(omega, lam, step)?;
        let residual = (d - prod).norm().max((dbar + prod.conj()).norm());
        let scale = prod.norm().max(omega.eval(lam)?.norm() / lam.modulus());
        Ok((lam, residual, scale))
    });
    ResidualReport::from_samples(h_rel, samples)
}

/// `|Re ω| / (1 + |ω|)` over the grid.
pub fn check_imaginary(omega: &LambdaField, grid: &AnnulusGrid) -> Result<ResidualReport> {
    let samples = grid.sweep(|lam| -> Result<Sample> {
        let v = omega.eval(lam)?;
        Ok((lam, v.re.abs() / (1.0 + v.norm()), 1.0))
    });
    ResidualReport::from_samples(0.0, samples)
}

/// One grid point of the path-versus-closed-form comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathComparison {
    pub lambda: Complex64,
    pub path_value: Complex64,
    pub closed_value: Complex64,
    pub quad_error: f64,
}

impl PathComparison {
    pub fn mismatch(&self) -> f64 {
        (self.path_value - self.closed_value).norm()
    }
}

/// Integrates `ω` from each component anchor (seeded with the closed form
/// there) to every grid point and compares with the closed form.
pub fn compare_path_closed(
    form: &OmegaClosedForm,
    ctx: &OmegaContext,
    grid: &AnnulusGrid,
    n_panels: usize,
    quad: &PathQuadrature,
) -> Result<Vec<std::result::Result<PathComparison, Error>>> {
    let (psi, psi_star) = ctx.integrand_pair(form.kind);
    Ok(grid.sweep(|lam| -> Result<PathComparison> {
        let r0 = anchor_radius(grid, lam.modulus())?;
        let base = omega_closed(form, ctx, SpectralParam::from_polar(r0, 0.0)?)?;
        let path = path_to(grid, lam, base)?;
        let integral = omega_integrate(&psi, &psi_star, &path, n_panels, quad)?;
        Ok(PathComparison {
            lambda: lam.value(),
            path_value: integral.value,
            closed_value: omega_closed(form, ctx, lam)?,
            quad_error: integral.error,
        })
    }))
}

/// Loop integral of `dω` around the middle circle of every grid component.
pub fn loop_residuals(
    kind: OmegaKind,
    ctx: &OmegaContext,
    grid: &AnnulusGrid,
    n_panels: usize,
    quad: &PathQuadrature,
) -> Result<Vec<(f64, PathIntegral)>> {
    let (psi, psi_star) = ctx.integrand_pair(kind);
    let mut out = Vec::new();
    for comp in 0..=grid.exclusions.len() {
        let (lo, hi) = grid.component_bounds(comp);
        let (lo, hi) = (lo.max(grid.r_min), hi.min(grid.r_max));
        if lo >= hi {
            continue;
        }
        let r = (lo * hi).sqrt();
        let path = loop_at(grid, r)?;
        out.push((r, omega_integrate(&psi, &psi_star, &path, n_panels, quad)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaf::{build_grid, build_grid_with_step, convergence_orders};
    use approx::assert_relative_eq;

    fn ctx(e: f64, alpha: f64) -> OmegaContext {
        OmegaContext {
            z: PhysicalPoint::new(0.7, 0.4),
            energy: Energy::new(e).unwrap(),
            alpha: Coupling::new(alpha).unwrap(),
            quadrature: QuadratureConfig::tight(),
        }
    }

    fn lam(r: f64, a: f64) -> SpectralParam {
        SpectralParam::from_polar(r, a).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let c = ctx(-1.0, TAU);
        let ff = OmegaClosedForm::canonical(OmegaKind::FfCreation, c.alpha);
        let v = omega_closed(&ff, &c, lam(2.0, 0.0)).unwrap();
        assert_eq!(v.re, 0.0);
        assert_relative_eq!(v.im, 4f64.ln() - 2.0, max_relative = 1e-15);

        let c = ctx(-1.0, PI);
        let fa = OmegaClosedForm::canonical(OmegaKind::FfAnnihilation, c.alpha);
        let v = omega_closed(&fa, &c, lam(1.0, 0.0)).unwrap();
        assert_eq!(v.re, 0.0);
        assert_relative_eq!(v.im, 1.0 / (4.0 * PI * PI), max_relative = 1e-15);
    }

    #[test]
    fn constants_enter_with_documented_signs() {
        let c = ctx(-1.0, PI);
        for kind in OmegaKind::ALL {
            let zero = omega_closed(
                &OmegaClosedForm::new(kind, OmegaConstants::default()),
                &c,
                lam(2.5, 0.4),
            )
            .unwrap();
            let shifted = omega_closed(
                &OmegaClosedForm::new(
                    kind,
                    OmegaConstants {
                        plus: 0.0,
                        minus: 0.75,
                    },
                ),
                &c,
                lam(2.5, 0.4),
            )
            .unwrap();
            let expected = if kind == OmegaKind::FfCreation {
                -0.75
            } else {
                0.75
            };
            assert_relative_eq!((shifted - zero).im, expected, max_relative = 1e-12);
            let inside = omega_closed(
                &OmegaClosedForm::new(
                    kind,
                    OmegaConstants {
                        plus: 0.0,
                        minus: 0.75,
                    },
                ),
                &c,
                lam(0.4, 0.4),
            )
            .unwrap();
            let inside0 = omega_closed(
                &OmegaClosedForm::new(kind, OmegaConstants::default()),
                &c,
                lam(0.4, 0.4),
            )
            .unwrap();
            assert_eq!(inside, inside0);
        }
    }

    #[test]
    fn all_kinds_are_imaginary() {
        let c = ctx(-1.0, PI);
        let grid = build_grid(0.05, 20.0, 10, 5, c.energy, Some(c.alpha)).unwrap();
        for kind in OmegaKind::ALL {
            let field = OmegaClosedForm::canonical(kind, c.alpha).field(c);
            let rep = check_imaginary(&field, &grid).unwrap();
            assert!(rep.max_abs <= 1e-10, "{kind}: {}", rep.max_abs);
            assert!(rep.n_points > 0);
        }
    }

    #[test]
    fn boundary_and_singular_points_are_errors() {
        let c = ctx(-1.0, PI);
        let fs = OmegaClosedForm::canonical(OmegaKind::FPsiStarCreation, c.alpha);
        assert!(matches!(
            omega_closed(&fs, &c, lam(1.0, 0.2)),
            Err(Error::Boundary(_))
        ));
        let split = OmegaClosedForm::new(
            OmegaKind::FfCreation,
            OmegaConstants {
                plus: 1.0,
                minus: 2.0,
            },
        );
        assert!(matches!(
            omega_closed(&split, &c, lam(1.0, 0.2)),
            Err(Error::Boundary(_))
        ));
        let pa = OmegaClosedForm::canonical(OmegaKind::PsiFAnnihilation, c.alpha);
        assert!(matches!(
            omega_closed(&pa, &c, lam(2f64.exp(), 0.2)),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn vacuum_increment_along_real_axis() {
        let path = IntegrationPath::new(vec![lam(2.0, 0.0), lam(4.0, 0.0)], I * (4f64.ln() - 1.0))
            .unwrap();
        let out = omega_integrate(
            &vacuum_f(),
            &vacuum_f_star(),
            &path,
            1,
            &PathQuadrature::default(),
        )
        .unwrap();
        assert_relative_eq!(
            out.value.im - (4f64.ln() - 1.0),
            4f64.ln(),
            max_relative = 1e-13
        );
        assert_eq!(out.value.re, 0.0);
    }

    #[test]
    fn paths_crossing_the_unit_circle_are_rejected() {
        let bad =
            IntegrationPath::new(vec![lam(0.5, 0.0), lam(2.0, 0.0)], Complex64::new(0.0, 0.0));
        assert!(matches!(bad, Err(Error::Path(_))));
        let through_origin =
            IntegrationPath::new(vec![lam(0.5, 0.0), lam(0.5, PI)], Complex64::new(0.0, 0.0));
        assert!(matches!(through_origin, Err(Error::Path(_))));
        let c = ctx(-1.0, PI);
        let grid = build_grid(0.05, 20.0, 10, 5, c.energy, Some(c.alpha)).unwrap();
        let across_band = IntegrationPath::new(
            vec![lam(3.0, 0.0), lam(12.0, 0.0)],
            Complex64::new(0.0, 0.0),
        )
        .unwrap();
        assert!(matches!(
            across_band.validate_on(&grid),
            Err(Error::Path(_))
        ));
    }

    #[test]
    fn anchors_follow_components() {
        let c = ctx(-1.0, PI);
        let grid = build_grid(0.05, 20.0, 10, 5, c.energy, Some(c.alpha)).unwrap();
        assert_eq!(anchor_radius(&grid, 3.0).unwrap(), 2.0);
        assert_eq!(anchor_radius(&grid, 0.3).unwrap(), 0.5);
        let outer = anchor_radius(&grid, 15.0).unwrap();
        assert!(outer > 2f64.exp() && outer < 20.0);
        let inner = anchor_radius(&grid, 0.07).unwrap();
        assert!(inner > 0.05 && inner < (-2f64).exp());
    }

    #[test]
    fn path_independence() {
        let c = ctx(-2.0, PI);
        let (psi, psi_star) = c.integrand_pair(OmegaKind::PsiFCreation);
        let quad = PathQuadrature::default();
        let a = lam(2.0, 0.0);
        let b = lam(3.0, 1.2);
        let direct = IntegrationPath::new(vec![a, b], Complex64::new(0.0, 0.0)).unwrap();
        let detour = IntegrationPath::new(
            vec![a, lam(4.0, -0.5), lam(5.0, 2.0), b],
            Complex64::new(0.0, 0.0),
        )
        .unwrap();
        let u = omega_integrate(&psi, &psi_star, &direct, 2, &quad).unwrap();
        let v = omega_integrate(&psi, &psi_star, &detour, 2, &quad).unwrap();
        assert!(
            (u.value - v.value).norm() <= 1e-9 + u.error + v.error,
            "{} {}",
            u.value,
            v.value
        );
    }

    #[test]
    fn path_increments_match_closed_forms() {
        let c = ctx(-1.0, PI);
        let grid = build_grid(0.05, 20.0, 6, 3, c.energy, Some(c.alpha)).unwrap();
        for kind in OmegaKind::ALL {
            let form = OmegaClosedForm::canonical(kind, c.alpha);
            for cmp in compare_path_closed(&form, &c, &grid, 1, &PathQuadrature::default()).unwrap()
            {
                let cmp = cmp.unwrap();
                assert!(
                    cmp.mismatch() <= 1e-6f64.max(cmp.quad_error),
                    "{kind} at {}: {}",
                    cmp.lambda,
                    cmp.mismatch()
                );
            }
        }
    }

    #[test]
    fn loops_close() {
        let c = ctx(-1.0, PI);
        let grid = build_grid(0.05, 20.0, 6, 3, c.energy, Some(c.alpha)).unwrap();
        for kind in OmegaKind::ALL {
            let loops = loop_residuals(kind, &c, &grid, 1, &PathQuadrature::default()).unwrap();
            assert_eq!(loops.len(), 4);
            for (r, l) in loops {
                assert!(
                    l.value.norm() <= l.error.max(1e-12),
                    "{kind} r={r}: {} vs {}",
                    l.value.norm(),
                    l.error
                );
            }
        }
    }

    #[test]
    fn gradient_relations_converge() {
        let c = ctx(-1.0, PI);
        for kind in OmegaKind::ALL {
            let form = OmegaClosedForm::canonical(kind, c.alpha);
            let (psi, psi_star) = c.integrand_pair(kind);
            let omega = form.field(c);
            let grid =
                build_grid_with_step(0.05, 20.0, 6, 3, c.energy, Some(c.alpha), 1e-2).unwrap();
            let res: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
                .iter()
                .map(|h| {
                    check_omega_gradient(&omega, &psi, &psi_star, &grid, *h)
                        .unwrap()
                        .max_abs
                })
                .collect();
            let orders = convergence_orders(&res);
            assert!(orders.iter().all(|o| *o >= 1.9), "{kind}: {res:?}");
        }
    }

    #[test]
    fn corrupted_pair_fails_gradient_check() {
        let c = ctx(-1.0, PI);
        let omega = OmegaClosedForm::canonical(OmegaKind::FfCreation, c.alpha).field(c);
        let flipped = LambdaField::new("f_star_flipped", |l| Ok(-I * l.sign()? / l.value()));
        let grid = build_grid(0.05, 20.0, 6, 3, c.energy, Some(c.alpha)).unwrap();
        let rep = check_omega_gradient(&omega, &vacuum_f(), &flipped, &grid, 1e-3).unwrap();
        assert!(rep.max_rel > 1.0);
    }
}
