//! The Moutard-type transform `M_{B,f,f*}` and the creation and
//! annihilation scenario drivers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{conjugate_plane_wave_field, plane_wave_field, vacuum_f, vacuum_f_star};
use crate::gaf::{
    check_dbar, check_dbar_conjugate, check_dbar_pair, AnnulusGrid, LambdaField, ResidualReport,
    Sample, DEFAULT_H_REL,
};
use crate::green::QuadratureConfig;
use crate::omega::{
    anchor_radius, check_omega_gradient, omega_closed, omega_integrate, path_to, OmegaClosedForm,
    OmegaConstants, OmegaContext, OmegaKind, PathQuadrature,
};
use crate::point::{singular_circles, Coupling, PointPotential};
use crate::spectral::{Domain, Energy, PhysicalPoint, SpectralParam};
use crate::tolerances::{
    fd_noise_floor, orders_pass, ANNIHILATION_B_SCALE, CREATION_B_SCALE, GREEN_BUDGET_FACTOR,
    ORDER_MIN, SEED_REL,
};

/// `|ω_{f,f*}| < OMEGA_ZERO_REL · (1 + |f f*|)` is treated as a zero of `ω`.
pub const OMEGA_ZERO_REL: f64 = 1e-10;

/// Seed data `(B, f, f*, ω_{f,f*})` of one transform.
#[derive(Debug, Clone)]
pub struct MoutardSeed {
    pub b: LambdaField,
    pub f: LambdaField,
    pub f_star: LambdaField,
    pub omega_ff: LambdaField,
}

impl MoutardSeed {
    fn omega_checked(&self, lam: SpectralParam) -> Result<(Complex64, Complex64, Complex64)> {
        let f = self.f.eval(lam)?;
        let f_star = self.f_star.eval(lam)?;
        let w = self.omega_ff.eval(lam)?;
        if w.norm() < OMEGA_ZERO_REL * (1.0 + (f * f_star).norm()) {
            return Err(Error::DivisionByZeroOmega {
                lambda: lam.value(),
                omega: w.norm(),
            });
        }
        Ok((f, f_star, w))
    }

    pub fn transform_b(&self) -> LambdaField {
        let seed = self.clone();
        LambdaField::new(format!("moutard({})", self.b.label()), move |l| {
            moutard_b(&seed, l)
        })
    }

    pub fn transform_psi(&self, psi: &LambdaField, omega_psi_fstar: &LambdaField) -> LambdaField {
        let (seed, psi, omega) = (self.clone(), psi.clone(), omega_psi_fstar.clone());
        LambdaField::new(format!("moutard({})", psi.label()), move |l| {
            moutard_psi(&seed, &psi, &omega, l)
        })
    }

    pub fn transform_psi_star(
        &self,
        psi_star: &LambdaField,
        omega_f_psistar: &LambdaField,
    ) -> LambdaField {
        let (seed, psi_star, omega) = (self.clone(), psi_star.clone(), omega_f_psistar.clone());
        LambdaField::new(format!("moutard({})", psi_star.label()), move |l| {
            moutard_psi_star(&seed, &psi_star, &omega, l)
        })
    }
}

/// `B̃ = B + f conj(f*) / ω_{f,f*}`.
pub fn moutard_b(seed: &MoutardSeed, lam: SpectralParam) -> Result<Complex64> {
    let (f, f_star, w) = seed.omega_checked(lam)?;
    Ok(seed.b.eval(lam)? + f * f_star.conj() / w)
}

/// `ψ̃ = ψ - (ω_{ψ,f*} / ω_{f,f*}) f`.
pub fn moutard_psi(
    seed: &MoutardSeed,
    psi: &LambdaField,
    omega_psi_fstar: &LambdaField,
    lam: SpectralParam,
) -> Result<Complex64> {
    let (f, _, w) = seed.omega_checked(lam)?;
    Ok(psi.eval(lam)? - omega_psi_fstar.eval(lam)? / w * f)
}

/// `ψ̃* = ψ* - (ω_{f,ψ*} / ω_{f,f*}) f*`.
pub fn moutard_psi_star(
    seed: &MoutardSeed,
    psi_star: &LambdaField,
    omega_f_psistar: &LambdaField,
    lam: SpectralParam,
) -> Result<Complex64> {
    let (_, f_star, w) = seed.omega_checked(lam)?;
    Ok(psi_star.eval(lam)? - omega_f_psistar.eval(lam)? / w * f_star)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaMode {
    #[default]
    ClosedForm,
    PathIntegrated,
}

/// Per-kind constant overrides; `None` keeps the canonical choice.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstantOverrides {
    pub ff: Option<OmegaConstants>,
    pub psi_f: Option<OmegaConstants>,
    pub f_psi_star: Option<OmegaConstants>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub quadrature: QuadratureConfig,
    pub omega_mode: OmegaMode,
    pub path_quadrature: PathQuadrature,
    pub path_panels: usize,
    pub overrides: ConstantOverrides,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            omega_mode: OmegaMode::ClosedForm,
            path_quadrature: PathQuadrature::default(),
            path_panels: 1,
            overrides: ConstantOverrides::default(),
        }
    }
}

/// `ω` of `form` at every `λ`: the closed form, or a path integral from the
/// component anchor seeded with the closed form there.
pub fn omega_field(
    form: OmegaClosedForm,
    ctx: OmegaContext,
    grid: &AnnulusGrid,
    cfg: &ScenarioConfig,
) -> LambdaField {
    match cfg.omega_mode {
        OmegaMode::ClosedForm => form.field(ctx),
        OmegaMode::PathIntegrated => {
            let grid = grid.clone();
            let (panels, quad) = (cfg.path_panels, cfg.path_quadrature);
            let (psi, psi_star) = ctx.integrand_pair(form.kind);
            LambdaField::new(format!("omega_path_{}", form.kind), move |lam| {
                let r0 = anchor_radius(&grid, lam.modulus())?;
                let base = omega_closed(&form, &ctx, SpectralParam::from_polar(r0, 0.0)?)?;
                let path = path_to(&grid, lam, base)?;
                Ok(omega_integrate(&psi, &psi_star, &path, panels, &quad)?.value)
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Creation,
    Annihilation,
}

/// One named pass/fail comparison against an acceptance threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSummary {
    pub domain: Domain,
    pub residual_b: ResidualReport,
    pub residual_psi: ResidualReport,
    pub residual_psi_star: ResidualReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: Scenario,
    pub energy: Energy,
    pub alpha: Coupling,
    pub z_samples: Vec<PhysicalPoint>,
    pub grid: AnnulusGrid,
    pub h: f64,
    pub quadrature: QuadratureConfig,
    pub omega_mode: OmegaMode,
    pub seed: ResidualReport,
    pub residual_b: ResidualReport,
    pub residual_psi: ResidualReport,
    pub residual_psi_star: ResidualReport,
    /// Transformed `∂̄` residuals at steps `h`, `h/2`, `h/4`.
    pub residual_transformed_dbar: Vec<ResidualReport>,
    pub transformed_dbar_orders: Vec<f64>,
}

impl ScenarioResult {
    pub fn per_domain(&self) -> Vec<DomainSummary> {
        [Domain::DPlus, Domain::DMinus]
            .into_iter()
            .map(|d| DomainSummary {
                domain: d,
                residual_b: self.residual_b.restricted(d),
                residual_psi: self.residual_psi.restricted(d),
                residual_psi_star: self.residual_psi_star.restricted(d),
            })
            .collect()
    }

    pub fn checks(&self) -> Vec<Check> {
        let QuadratureConfig {
            abs_tol, rel_tol, ..
        } = self.quadrature;
        let mut out = match self.scenario {
            Scenario::Creation => vec![Check::at_most(
                "B_tilde_vs_point_rel",
                self.residual_b.max_rel,
                CREATION_B_SCALE,
            )],
            Scenario::Annihilation => {
                vec![Check::at_most(
                    "B_tilde_max_abs",
                    self.residual_b.scaled_max(),
                    ANNIHILATION_B_SCALE,
                )]
            }
        };
        out.push(Check::at_most(
            "psi_tilde_green_budget",
            self.residual_psi.budget_ratio(abs_tol, rel_tol),
            GREEN_BUDGET_FACTOR,
        ));
        out.push(Check::at_most(
            "psi_star_tilde_green_budget",
            self.residual_psi_star.budget_ratio(abs_tol, rel_tol),
            GREEN_BUDGET_FACTOR,
        ));
        let rels: Vec<f64> = self
            .residual_transformed_dbar
            .iter()
            .map(|r| r.max_rel)
            .collect();
        let min_order = self
            .transformed_dbar_orders
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        out.push(Check {
            name: "transformed_dbar_order".into(),
            value: min_order,
            threshold: ORDER_MIN,
            pass: orders_pass(&rels, fd_noise_floor(rel_tol)),
        });
        out.push(Check::at_most(
            "seed_residual_rel",
            self.seed.max_rel,
            SEED_REL,
        ));
        let evaluated = self
            .residual_b
            .n_points
            .min(self.residual_psi.n_points)
            .min(self.residual_psi_star.n_points);
        out.push(Check {
            name: "points_evaluated".into(),
            value: evaluated as f64,
            threshold: 1.0,
            pass: evaluated >= 1,
        });
        out
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.pass)
    }
}

/// Aggregated `∂̄` and `ω`-gradient residuals of a seed; fails with
/// `SeedInvalid` above [`SEED_REL`].
pub fn verify_seed(seed: &MoutardSeed, grid: &AnnulusGrid, h: f64) -> Result<ResidualReport> {
    let checks = [
        ("dbar f = B conj(f)", check_dbar(&seed.f, &seed.b, grid, h)?),
        (
            "dbar f* = -conj(B) conj(f*)",
            check_dbar_conjugate(&seed.f_star, &seed.b, grid, h)?,
        ),
        (
            "omega_ff gradient",
            check_omega_gradient(&seed.omega_ff, &seed.f, &seed.f_star, grid, h)?,
        ),
    ];
    for (name, rep) in &checks {
        if rep.n_points == 0 {
            return Err(Error::SeedInvalid {
                check: format!("{name}: no evaluable points"),
                residual: f64::NAN,
                threshold: SEED_REL,
            });
        }
        if !(rep.max_rel <= SEED_REL) {
            return Err(Error::SeedInvalid {
                check: (*name).into(),
                residual: rep.max_rel,
                threshold: SEED_REL,
            });
        }
    }
    let [a, b, c] = checks.map(|(_, r)| r);
    Ok(a.merge(&b).merge(&c))
}

/// `|actual - expected|` with per-point scale `|scale_field|`.
fn compare(
    actual: &LambdaField,
    expected: &LambdaField,
    scale: &LambdaField,
    grid: &AnnulusGrid,
) -> Result<ResidualReport> {
    ResidualReport::from_samples(
        0.0,
        grid.sweep(|lam| -> Result<Sample> {
            let a = actual.eval(lam)?;
            let e = expected.eval(lam)?;
            Ok((lam, (a - e).norm(), scale.eval(lam)?.norm()))
        }),
    )
}

fn merge_all(reports: Vec<ResidualReport>) -> Option<ResidualReport> {
    reports.into_iter().reduce(|a, b| a.merge(&b))
}

struct Setup {
    seed: MoutardSeed,
    expected_b: LambdaField,
    scale_b: LambdaField,
    /// Per `z`: `(ψ, ω_{ψ,f*}, expected ψ̃, ψ*, ω_{f,ψ*}, expected ψ̃*)`.
    per_z: Vec<[LambdaField; 6]>,
}

fn constants(kind: OmegaKind, alpha: Coupling, overrides: &ConstantOverrides) -> OmegaClosedForm {
    let over = match kind {
        OmegaKind::FfCreation | OmegaKind::FfAnnihilation => overrides.ff,
        OmegaKind::PsiFCreation | OmegaKind::PsiFAnnihilation => overrides.psi_f,
        OmegaKind::FPsiStarCreation | OmegaKind::FPsiStarAnnihilation => overrides.f_psi_star,
    };
    match over {
        Some(c) => OmegaClosedForm::new(kind, c),
        None => OmegaClosedForm::canonical(kind, alpha),
    }
}

fn setup(
    scenario: Scenario,
    energy: Energy,
    alpha: Coupling,
    grid: &AnnulusGrid,
    z_samples: &[PhysicalPoint],
    cfg: &ScenarioConfig,
) -> Setup {
    let point = PointPotential::new(energy, alpha);
    let ctx = |z: PhysicalPoint| OmegaContext {
        z,
        energy,
        alpha,
        quadrature: cfg.quadrature,
    };
    let ctx0 = ctx(z_samples
        .first()
        .copied()
        .unwrap_or(PhysicalPoint::new(1.0, 0.0)));
    let (ff, pf, fps) = match scenario {
        Scenario::Creation => (
            OmegaKind::FfCreation,
            OmegaKind::PsiFCreation,
            OmegaKind::FPsiStarCreation,
        ),
        Scenario::Annihilation => (
            OmegaKind::FfAnnihilation,
            OmegaKind::PsiFAnnihilation,
            OmegaKind::FPsiStarAnnihilation,
        ),
    };
    let omega = |kind: OmegaKind, z: PhysicalPoint| {
        omega_field(constants(kind, alpha, &cfg.overrides), ctx(z), grid, cfg)
    };
    let seed = match scenario {
        Scenario::Creation => MoutardSeed {
            b: LambdaField::zero(),
            f: vacuum_f(),
            f_star: vacuum_f_star(),
            omega_ff: omega(ff, ctx0.z),
        },
        Scenario::Annihilation => MoutardSeed {
            b: point.big_b_field(),
            f: point.a_field(),
            f_star: point.a_star_field(),
            omega_ff: omega(ff, ctx0.z),
        },
    };
    let (expected_b, scale_b) = match scenario {
        Scenario::Creation => (point.big_b_field(), point.big_b_field()),
        Scenario::Annihilation => (LambdaField::zero(), point.big_b_field()),
    };
    let per_z = z_samples
        .iter()
        .map(|&z| {
            let q = cfg.quadrature;
            let (psi, psi_star, psi_t, psi_star_t) = match scenario {
                Scenario::Creation => (
                    plane_wave_field(z, energy),
                    conjugate_plane_wave_field(z, energy),
                    point.psi_field(z, q),
                    point.psi_star_field(z, q),
                ),
                Scenario::Annihilation => (
                    point.psi_field(z, q),
                    point.psi_star_field(z, q),
                    plane_wave_field(z, energy),
                    conjugate_plane_wave_field(z, energy),
                ),
            };
            [
                psi,
                omega(pf, z),
                psi_t,
                psi_star,
                omega(fps, z),
                psi_star_t,
            ]
        })
        .collect();
    Setup {
        seed,
        expected_b,
        scale_b,
        per_z,
    }
}

/// The seed used by the scenario driver: the vacuum seed for creation, the
/// point-potential seed `f = a` for annihilation.
pub fn scenario_seed(
    scenario: Scenario,
    energy: Energy,
    alpha: Coupling,
    grid: &AnnulusGrid,
    cfg: &ScenarioConfig,
) -> MoutardSeed {
    setup(scenario, energy, alpha, grid, &[], cfg).seed
}

/// Grid with bands added around `|λ| = 1` and the singular circles of `(E, α)`.
pub fn scenario_grid(grid: &AnnulusGrid, energy: Energy, alpha: Coupling, h: f64) -> AnnulusGrid {
    let mut g = grid.clone();
    g.exclude_circle(1.0, h);
    for r in singular_circles(energy, alpha).radii {
        g.exclude_circle(r, h);
    }
    g
}

fn run(
    scenario: Scenario,
    energy: Energy,
    alpha: Coupling,
    grid: &AnnulusGrid,
    z_samples: &[PhysicalPoint],
    h: f64,
    cfg: &ScenarioConfig,
) -> Result<ScenarioResult> {
    if z_samples.is_empty() {
        return Err(Error::Config("at least one z sample is required".into()));
    }
    if !(h > 0.0 && h < 0.1) {
        return Err(Error::Config(format!(
            "finite-difference step must lie in (0, 0.1), got {h}"
        )));
    }
    let grid = scenario_grid(grid, energy, alpha, h);
    let s = setup(scenario, energy, alpha, &grid, z_samples, cfg);
    let steps = [h, h / 2.0, h / 4.0];
    let seed = verify_seed(&s.seed, &grid, steps[2].min(DEFAULT_H_REL))?;

    let b_t = s.seed.transform_b();
    let residual_b = compare(&b_t, &s.expected_b, &s.scale_b, &grid)?;
    let mut psi_reports = Vec::new();
    let mut psi_star_reports = Vec::new();
    let mut dbar = vec![Vec::new(); steps.len()];
    for [psi, w_psi, psi_t, psi_star, w_star, psi_star_t] in &s.per_z {
        let psi_m = s.seed.transform_psi(psi, w_psi);
        let star_m = s.seed.transform_psi_star(psi_star, w_star);
        psi_reports.push(compare(&psi_m, psi_t, psi_t, &grid)?);
        psi_star_reports.push(compare(&star_m, psi_star_t, psi_star_t, &grid)?);
        for (slot, step) in dbar.iter_mut().zip(steps) {
            let (a, b) = check_dbar_pair(&psi_m, &star_m, &b_t, &grid, step)?;
            slot.push(a.merge(&b));
        }
    }
    let residual_transformed_dbar: Vec<ResidualReport> = dbar
        .into_iter()
        .map(|v| merge_all(v).expect("z_samples is non-empty"))
        .collect();
    let transformed_dbar_orders = crate::gaf::convergence_orders(
        &residual_transformed_dbar
            .iter()
            .map(|r| r.max_rel)
            .collect::<Vec<_>>(),
    );
    Ok(ScenarioResult {
        scenario,
        energy,
        alpha,
        z_samples: z_samples.to_vec(),
        grid,
        h,
        quadrature: cfg.quadrature,
        omega_mode: cfg.omega_mode,
        seed,
        residual_b,
        residual_psi: merge_all(psi_reports).expect("z_samples is non-empty"),
        residual_psi_star: merge_all(psi_star_reports).expect("z_samples is non-empty"),
        residual_transformed_dbar,
        transformed_dbar_orders,
    })
}

/// Vacuum seed with `c_{f,f*} = 4π/α`; the transformed data are compared
/// with the point-potential closed forms.
pub fn run_creation(
    energy: Energy,
    alpha: Coupling,
    grid: &AnnulusGrid,
    z_samples: &[PhysicalPoint],
    h: f64,
    cfg: &ScenarioConfig,
) -> Result<ScenarioResult> {
    run(Scenario::Creation, energy, alpha, grid, z_samples, h, cfg)
}

/// Point-potential seed `f = a` with zero constants; the transformed data are
/// compared with the vacuum.
pub fn run_annihilation(
    energy: Energy,
    alpha: Coupling,
    grid: &AnnulusGrid,
    z_samples: &[PhysicalPoint],
    h: f64,
    cfg: &ScenarioConfig,
) -> Result<ScenarioResult> {
    run(
        Scenario::Annihilation,
        energy,
        alpha,
        grid,
        z_samples,
        h,
        cfg,
    )
}

/// Annihilation applied to the `B̃` produced by creation: `|B̃̃|` relative to
/// `|B̃|` over the grid.
pub fn round_trip(
    energy: Energy,
    alpha: Coupling,
    grid: &AnnulusGrid,
    h: f64,
) -> Result<ResidualReport> {
    let grid = scenario_grid(grid, energy, alpha, h);
    let cfg = ScenarioConfig::default();
    let created = setup(Scenario::Creation, energy, alpha, &grid, &[], &cfg)
        .seed
        .transform_b();
    let point = PointPotential::new(energy, alpha);
    let ctx = OmegaContext {
        z: PhysicalPoint::new(1.0, 0.0),
        energy,
        alpha,
        quadrature: cfg.quadrature,
    };
    let seed = MoutardSeed {
        b: created.clone(),
        f: point.a_field(),
        f_star: point.a_star_field(),
        omega_ff: OmegaClosedForm::canonical(OmegaKind::FfAnnihilation, alpha).field(ctx),
    };
    compare(&seed.transform_b(), &LambdaField::zero(), &created, &grid)
}
