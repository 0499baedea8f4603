//! The five subcommands. Each returns an [`OutputRecord`]; exit codes are
//! decided by the caller.

use std::f64::consts::PI;

use moutard_core::gaf::{
    check_dbar, check_dbar_pair, check_symmetries_b, check_symmetries_big_b, convergence_orders,
    Sample,
};
use moutard_core::green::{
    check_dbar_green, classical_green, dbar_green_rhs, green_contour_shift, green_direct,
};
use moutard_core::moutard::{scenario_grid, scenario_seed};
use moutard_core::omega::{
    check_imaginary, check_omega_gradient, compare_path_closed, loop_residuals,
};
use moutard_core::point::{a_point, b_point, big_b_from_scattering, big_b_point, pole_order};
use moutard_core::tolerances::{
    fd_noise_floor, orders_pass, BESSEL_REL, GREEN_REAL_REL, OMEGA_IMAG_SCALE, OMEGA_PATH_ABS,
    ORDER_MIN, POINT_B_REL, POLE_ORDER, POLE_ORDER_TOL, SEED_REL, SYMMETRY_SCALE,
};
use moutard_core::{
    run_annihilation, run_creation, singular_circles, verify_seed, Check, Error, OmegaClosedForm,
    OmegaContext, OmegaKind, OmegaMode, PointPotential, ResidualReport, Scenario, ScenarioResult,
    SpectralParam,
};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{ConfigError, RunConfig, Validated};
use crate::output::{OutputRecord, Table};

/// Why a command could not produce a record.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Config(String),
    Numerical(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) => Failure::Config(m),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

pub type CmdResult = Result<OutputRecord, Failure>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckWhich {
    Dbar,
    Symmetry,
    Omega,
    Seed,
}

impl CheckWhich {
    pub fn name(self) -> &'static str {
        match self {
            CheckWhich::Dbar => "dbar",
            CheckWhich::Symmetry => "symmetry",
            CheckWhich::Omega => "omega",
            CheckWhich::Seed => "seed",
        }
    }
}

fn steps(v: &Validated) -> [f64; 3] {
    [v.fd_step, v.fd_step / 2.0, v.fd_step / 4.0]
}

fn min_order(orders: &[f64]) -> f64 {
    orders.iter().copied().fold(f64::INFINITY, f64::min)
}

fn order_check(name: &str, reports: &[ResidualReport], floor: f64) -> (Check, Vec<f64>) {
    let rels: Vec<f64> = reports.iter().map(|r| r.max_rel).collect();
    let orders = convergence_orders(&rels);
    let check = Check {
        name: name.into(),
        value: min_order(&orders),
        threshold: ORDER_MIN,
        pass: orders_pass(&rels, floor) && reports.iter().all(|r| r.n_points > 0),
    };
    (check, orders)
}

fn push_order_rows(table: &mut Table, field: &str, reports: &[ResidualReport], orders: &[f64]) {
    for (i, r) in reports.iter().enumerate() {
        let order = if i == 0 { f64::NAN } else { orders[i - 1] };
        table.push(vec![
            field.into(),
            r.h.into(),
            r.n_points.into(),
            r.skipped.into(),
            r.max_abs.into(),
            r.max_rel.into(),
            r.rms.into(),
            order.into(),
        ]);
    }
}

const ORDER_HEADER: [&str; 8] = [
    "field", "h", "n_points", "skipped", "max_abs", "max_rel", "rms", "order",
];

fn push_points(table: &mut Table, label: &str, h: f64, r: &ResidualReport) {
    for p in &r.per_point {
        table.push(vec![
            label.into(),
            h.into(),
            p.lambda.re.into(),
            p.lambda.im.into(),
            p.abs.into(),
            p.rel.into(),
        ]);
    }
}

const POINT_HEADER: [&str; 6] = ["field", "h", "re_lambda", "im_lambda", "abs", "rel"];

pub fn cmd_green(cfg: &RunConfig, v: &Validated) -> CmdResult {
    let mut radii = v.grid.radii();
    radii.push(1.0);
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let angles = v.grid.angles();
    let mut jobs = Vec::new();
    for z in &v.z_samples {
        for &r in &radii {
            for &a in &angles {
                jobs.push((*z, r, SpectralParam::from_polar(r, a)?));
            }
        }
    }
    let q = v.scenario.quadrature;
    let evals: Vec<_> = jobs
        .par_iter()
        .map(|(z, _, lam)| {
            Ok::<_, Error>((
                green_direct(*z, *lam, v.energy, &q)?,
                green_contour_shift(*z, *lam, v.energy, &q)?,
            ))
        })
        .collect();

    let mut table = Table::new(
        "samples",
        &[
            "re_lambda",
            "im_lambda",
            "abs_z",
            "arg_z",
            "g_direct",
            "g_shift",
            "err_direct",
            "err_shift",
            "agree",
        ],
    );
    let mut bessel = Table::new(
        "bessel",
        &[
            "re_lambda",
            "im_lambda",
            "abs_z",
            "k0_reference",
            "g_direct",
            "g_shift",
            "rel_err_direct",
            "rel_err_shift",
            "pass",
        ],
    );
    let (mut worst_agree, mut worst_imag, mut worst_bessel) = (0.0f64, 0.0f64, 0.0f64);
    let mut disagreements = 0usize;
    for ((z, r, lam), ev) in jobs.iter().zip(evals) {
        let (d, s) = ev?;
        let diff = (d.value - s.value).abs();
        let budget = d.est_error + s.est_error;
        let agree = diff <= budget;
        if !agree {
            disagreements += 1;
        }
        worst_agree = worst_agree.max(if budget > 0.0 {
            diff / budget
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        });
        for g in [&d, &s] {
            worst_imag = worst_imag.max(g.imag.abs() / (1.0 + g.value.abs()));
        }
        let l = lam.value();
        table.push(vec![
            l.re.into(),
            l.im.into(),
            z.abs().into(),
            z.z().arg().into(),
            d.value.into(),
            s.value.into(),
            d.est_error.into(),
            s.est_error.into(),
            agree.into(),
        ]);
        if *r == 1.0 {
            let k0 = classical_green(z.abs(), v.energy);
            let (ed, es) = (
                (d.value - k0).abs() / k0.abs(),
                (s.value - k0).abs() / k0.abs(),
            );
            worst_bessel = worst_bessel.max(ed).max(es);
            bessel.push(vec![
                l.re.into(),
                l.im.into(),
                z.abs().into(),
                k0.into(),
                d.value.into(),
                s.value.into(),
                ed.into(),
                es.into(),
                (ed <= BESSEL_REL && es <= BESSEL_REL).into(),
            ]);
        }
    }
    let summary = vec![
        Check::at_most("green_agreement_ratio", worst_agree, 1.0),
        Check::at_most("green_imag_rel", worst_imag, GREEN_REAL_REL),
        Check::at_most("bessel_rel", worst_bessel, BESSEL_REL),
    ];
    let details = json!({
        "n_rows": jobs.len(),
        "n_lambda": radii.len() * angles.len(),
        "n_z": v.z_samples.len(),
        "disagreements": disagreements,
    });
    Ok(OutputRecord::new(
        "green",
        cfg,
        vec![table, bessel],
        summary,
        details,
    ))
}

pub fn cmd_spectrum(cfg: &RunConfig, v: &Validated) -> CmdResult {
    let alpha = v.require_alpha()?;
    let e = v.energy;
    let set = singular_circles(e, alpha);
    let s = 4.0 * PI / alpha.value() - e.ln_abs();

    let mut radii_table = Table::new(
        "radii",
        &["index", "radius", "ln_radius", "pole_order", "pass"],
    );
    let mut summary = Vec::new();
    for (i, &r) in set.radii.iter().enumerate() {
        let order = pole_order(e, alpha, r, 0.0)?;
        let pass = (order - POLE_ORDER).abs() <= POLE_ORDER_TOL;
        radii_table.push(vec![
            i.into(),
            r.into(),
            r.ln().into(),
            order.into(),
            pass.into(),
        ]);
        summary.push(Check::at_most(
            &format!("pole_order_deviation_{i}"),
            (order - POLE_ORDER).abs(),
            POLE_ORDER_TOL,
        ));
    }

    let checked = scenario_grid(&v.grid, e, alpha, v.fd_step);
    let on_grid: Vec<f64> = checked
        .radii()
        .into_iter()
        .filter(|r| !checked.is_excluded(*r))
        .collect();
    let mut radii = v.grid.radii();
    for &r in &set.radii {
        for d in [1e-1, 1e-2, 1e-3, 1e-4] {
            radii.push(r * (1.0 - d));
            radii.push(r * (1.0 + d));
        }
    }
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let mut profile = Table::new(
        "profile",
        &[
            "radius",
            "angle",
            "re_lambda",
            "im_lambda",
            "b",
            "abs_big_b",
            "a",
            "route_rel",
            "checked",
        ],
    );
    let mut skipped = 0usize;
    let mut worst_routes = 0.0f64;
    for &r in &radii {
        for &ang in &v.grid.angles() {
            let lam = SpectralParam::from_polar(r, ang)?;
            let row = (|| -> Result<_, Error> {
                let big = big_b_point(lam, e, alpha)?;
                let via = big_b_from_scattering(lam, e, alpha)?;
                Ok((
                    b_point(lam, e, alpha)?,
                    big,
                    (big - via).norm() / big.norm(),
                    a_point(lam, e, alpha)?,
                ))
            })();
            match row {
                Ok((b, big, routes, a)) => {
                    let is_checked = on_grid.contains(&r);
                    if is_checked {
                        worst_routes = worst_routes.max(routes);
                    }
                    let l = lam.value();
                    profile.push(vec![
                        r.into(),
                        ang.into(),
                        l.re.into(),
                        l.im.into(),
                        b.into(),
                        big.norm().into(),
                        a.into(),
                        routes.into(),
                        is_checked.into(),
                    ]);
                }
                Err(Error::Boundary(_) | Error::SingularPoint { .. }) => skipped += 1,
                Err(other) => return Err(other.into()),
            }
        }
    }
    summary.push(Check::at_most(
        "big_b_routes_rel",
        worst_routes,
        POINT_B_REL,
    ));
    let details = json!({
        "singular_radii": set.radii,
        "regular": set.is_empty(),
        "threshold_energy_mag": set.threshold_energy_mag,
        "s": s,
        "profile_points_skipped": skipped,
    });
    Ok(OutputRecord::new(
        "spectrum",
        cfg,
        vec![radii_table, profile],
        summary,
        details,
    ))
}

pub fn cmd_check(cfg: &RunConfig, v: &Validated, which: CheckWhich) -> CmdResult {
    match which {
        CheckWhich::Dbar => check_dbar_cmd(cfg, v),
        CheckWhich::Symmetry => check_symmetry_cmd(cfg, v),
        CheckWhich::Omega => check_omega_cmd(cfg, v),
        CheckWhich::Seed => check_seed_cmd(cfg, v),
    }
}

fn check_dbar_cmd(cfg: &RunConfig, v: &Validated) -> CmdResult {
    let alpha = v.require_alpha()?;
    let (e, q) = (v.energy, v.scenario.quadrature);
    let grid = scenario_grid(&v.grid, e, alpha, v.fd_step);
    let point = PointPotential::new(e, alpha);
    let b = point.big_b_field();
    let floor = fd_noise_floor(q.rel_tol);

    let mut orders_table = Table::new("orders", &ORDER_HEADER);
    let mut points = Table::new("points", &POINT_HEADER);
    let mut summary = Vec::new();
    let mut record = |name: String, reports: Vec<ResidualReport>, summary: &mut Vec<Check>| {
        let (check, orders) = order_check(&format!("dbar_order_{name}"), &reports, floor);
        push_order_rows(&mut orders_table, &name, &reports, &orders);
        for r in &reports {
            push_points(&mut points, &name, r.h, r);
        }
        summary.push(check);
    };

    let a_reports = steps(v)
        .iter()
        .map(|h| check_dbar(&point.a_field(), &b, &grid, *h))
        .collect::<Result<Vec<_>, _>>()?;
    record("a".into(), a_reports, &mut summary);
    for (i, z) in v.z_samples.iter().enumerate() {
        let (psi, psi_star) = (point.psi_field(*z, q), point.psi_star_field(*z, q));
        let mut first = Vec::new();
        let mut second = Vec::new();
        let mut green = Vec::new();
        for h in steps(v) {
            let (x, y) = check_dbar_pair(&psi, &psi_star, &b, &grid, h)?;
            first.push(x);
            second.push(y);
            let samples = grid.sweep(|lam| -> Result<Sample, Error> {
                if !grid.stencil_ok(lam, h * lam.modulus()) {
                    return Err(Error::Stencil {
                        lambda: lam.value(),
                        step: h * lam.modulus(),
                    });
                }
                let r = check_dbar_green(*z, lam, e, h, &q)?;
                Ok((lam, r, dbar_green_rhs(*z, lam, e)?.norm()))
            });
            green.push(ResidualReport::from_samples(h, samples)?);
        }
        record(format!("psi_z{i}"), first, &mut summary);
        record(format!("psi_star_z{i}"), second, &mut summary);
        record(format!("green_z{i}"), green, &mut summary);
    }
    let details =
        json!({ "noise_floor_rel": floor, "steps": steps(v), "exclusions": grid.exclusions });
    Ok(OutputRecord::new(
        "check_dbar",
        cfg,
        vec![orders_table, points],
        summary,
        details,
    ))
}

fn check_symmetry_cmd(cfg: &RunConfig, v: &Validated) -> CmdResult {
    let alpha = v.require_alpha()?;
    let e = v.energy;
    let grid = scenario_grid(&v.grid, e, alpha, v.fd_step);
    let point = PointPotential::new(e, alpha);
    let sym_big = check_symmetries_big_b(&point.big_b_field(), &grid)?;
    let sym_b = check_symmetries_b(&point.b_field(), &grid, true)?;
    let routes = ResidualReport::from_samples(
        0.0,
        grid.sweep(|lam| -> Result<Sample, Error> {
            let x = big_b_point(lam, e, alpha)?;
            Ok((
                lam,
                (x - big_b_from_scattering(lam, e, alpha)?).norm(),
                x.norm(),
            ))
        }),
    )?;
    let a_b = ResidualReport::from_samples(
        0.0,
        grid.sweep(|lam| -> Result<Sample, Error> {
            let a = a_point(lam, e, alpha)?;
            Ok((lam, (a - b_point(lam, e, alpha)?).abs(), a.abs()))
        }),
    )?;
    let mut points = Table::new("points", &POINT_HEADER);
    let mut summary = Vec::new();
    for (name, rep, tol) in [
        ("big_b_symmetries", &sym_big, SYMMETRY_SCALE),
        ("b_symmetries", &sym_b, SYMMETRY_SCALE),
        ("big_b_routes", &routes, POINT_B_REL),
        ("a_equals_b", &a_b, POINT_B_REL),
    ] {
        push_points(&mut points, name, 0.0, rep);
        summary.push(Check::at_most(&format!("{name}_rel"), rep.max_rel, tol));
    }
    let details = json!({ "n_points": sym_big.n_points, "exclusions": grid.exclusions });
    Ok(OutputRecord::new(
        "check_symmetry",
        cfg,
        vec![points],
        summary,
        details,
    ))
}

fn check_omega_cmd(cfg: &RunConfig, v: &Validated) -> CmdResult {
    let alpha = v.require_alpha()?;
    let e = v.energy;
    let q = v.scenario.quadrature;
    let grid = scenario_grid(&v.grid, e, alpha, v.fd_step);
    let floor = fd_noise_floor(q.rel_tol);
    let path_mode = v.scenario.omega_mode == OmegaMode::PathIntegrated;

    let mut gradient = Table::new(
        "gradient",
        &[
            "kind", "z_index", "h", "n_points", "max_abs", "max_rel", "order",
        ],
    );
    let mut imag = Table::new("imaginary", &["kind", "z_index", "n_points", "max_re_rel"]);
    let mut path = Table::new(
        "path",
        &[
            "kind",
            "z_index",
            "re_lambda",
            "im_lambda",
            "path_im",
            "closed_im",
            "mismatch",
            "quad_error",
            "pass",
        ],
    );
    let mut loops = Table::new(
        "loops",
        &[
            "kind",
            "z_index",
            "radius",
            "loop_re",
            "loop_im",
            "loop_abs",
            "quad_error",
            "pass",
        ],
    );
    let mut summary = Vec::new();

    for kind in OmegaKind::ALL {
        let zs: Vec<_> = if kind.uses_green() {
            v.z_samples.iter().copied().enumerate().collect()
        } else {
            vec![(0, v.z_samples[0])]
        };
        for (zi, z) in zs {
            let ctx = OmegaContext {
                z,
                energy: e,
                alpha,
                quadrature: q,
            };
            let form = OmegaClosedForm::canonical(kind, alpha);
            let omega = form.field(ctx);
            let (psi, psi_star) = ctx.integrand_pair(kind);
            let label = format!("{kind}_z{zi}");

            let im = check_imaginary(&omega, &grid)?;
            imag.push(vec![
                kind.name().into(),
                zi.into(),
                im.n_points.into(),
                im.max_abs.into(),
            ]);
            summary.push(Check::at_most(
                &format!("imaginary_{label}"),
                im.max_abs,
                OMEGA_IMAG_SCALE,
            ));

            let reports = steps(v)
                .iter()
                .map(|h| check_omega_gradient(&omega, &psi, &psi_star, &grid, *h))
                .collect::<Result<Vec<_>, _>>()?;
            let (check, orders) = order_check(&format!("gradient_order_{label}"), &reports, floor);
            for (i, r) in reports.iter().enumerate() {
                let order = if i == 0 { f64::NAN } else { orders[i - 1] };
                gradient.push(vec![
                    kind.name().into(),
                    zi.into(),
                    r.h.into(),
                    r.n_points.into(),
                    r.max_abs.into(),
                    r.max_rel.into(),
                    order.into(),
                ]);
            }
            summary.push(check);

            if path_mode {
                let mut worst = 0.0f64;
                for cmp in compare_path_closed(
                    &form,
                    &ctx,
                    &grid,
                    v.scenario.path_panels,
                    &v.scenario.path_quadrature,
                )? {
                    let cmp = cmp?;
                    let allowed = OMEGA_PATH_ABS.max(cmp.quad_error);
                    worst = worst.max(cmp.mismatch() / allowed);
                    path.push(vec![
                        kind.name().into(),
                        zi.into(),
                        cmp.lambda.re.into(),
                        cmp.lambda.im.into(),
                        cmp.path_value.im.into(),
                        cmp.closed_value.im.into(),
                        cmp.mismatch().into(),
                        cmp.quad_error.into(),
                        (cmp.mismatch() <= allowed).into(),
                    ]);
                }
                summary.push(Check::at_most(
                    &format!("path_mismatch_ratio_{label}"),
                    worst,
                    1.0,
                ));
                let mut worst_loop = 0.0f64;
                for (r, l) in loop_residuals(
                    kind,
                    &ctx,
                    &grid,
                    v.scenario.path_panels,
                    &v.scenario.path_quadrature,
                )? {
                    let ratio = if l.error > 0.0 {
                        l.value.norm() / l.error
                    } else {
                        f64::INFINITY
                    };
                    worst_loop = worst_loop.max(ratio);
                    loops.push(vec![
                        kind.name().into(),
                        zi.into(),
                        r.into(),
                        l.value.re.into(),
                        l.value.im.into(),
                        l.value.norm().into(),
                        l.error.into(),
                        (ratio <= 1.0).into(),
                    ]);
                }
                summary.push(Check::at_most(
                    &format!("loop_ratio_{label}"),
                    worst_loop,
                    1.0,
                ));
            }
        }
    }
    let mut tables = vec![gradient, imag];
    if path_mode {
        tables.push(path);
        tables.push(loops);
    }
    let details = json!({ "omega_mode": v.scenario.omega_mode, "noise_floor_rel": floor, "path_checks_run": path_mode });
    Ok(OutputRecord::new(
        "check_omega",
        cfg,
        tables,
        summary,
        details,
    ))
}

fn check_seed_cmd(cfg: &RunConfig, v: &Validated) -> CmdResult {
    let alpha = v.require_alpha()?;
    let grid = scenario_grid(&v.grid, v.energy, alpha, v.fd_step);
    let h = (v.fd_step / 4.0).min(moutard_core::gaf::DEFAULT_H_REL);
    let mut table = Table::new(
        "seeds",
        &[
            "scenario", "n_points", "skipped", "max_abs", "max_rel", "pass",
        ],
    );
    let mut summary = Vec::new();
    for (name, scenario) in [
        ("creation", Scenario::Creation),
        ("annihilation", Scenario::Annihilation),
    ] {
        let seed = scenario_seed(scenario, v.energy, alpha, &grid, &v.scenario);
        let (rel, row) = match verify_seed(&seed, &grid, h) {
            Ok(r) => (
                r.max_rel,
                vec![
                    name.into(),
                    r.n_points.into(),
                    r.skipped.into(),
                    r.max_abs.into(),
                    r.max_rel.into(),
                    true.into(),
                ],
            ),
            Err(Error::SeedInvalid { residual, .. }) => (
                residual,
                vec![
                    name.into(),
                    0usize.into(),
                    0usize.into(),
                    f64::NAN.into(),
                    residual.into(),
                    false.into(),
                ],
            ),
            Err(other) => return Err(other.into()),
        };
        table.push(row);
        summary.push(Check::at_most(&format!("seed_{name}_rel"), rel, SEED_REL));
    }
    Ok(OutputRecord::new(
        "check_seed",
        cfg,
        vec![table],
        summary,
        json!({ "h": h }),
    ))
}

fn scenario_record(command: &str, cfg: &RunConfig, r: &ScenarioResult) -> OutputRecord {
    let mut b = Table::new("b", &["re_lambda", "im_lambda", "abs", "rel", "scale"]);
    for p in &r.residual_b.per_point {
        b.push(vec![
            p.lambda.re.into(),
            p.lambda.im.into(),
            p.abs.into(),
            p.rel.into(),
            p.scale.into(),
        ]);
    }
    let mut psi = Table::new(
        "psi",
        &["field", "re_lambda", "im_lambda", "abs", "rel", "scale"],
    );
    for (name, rep) in [("psi", &r.residual_psi), ("psi_star", &r.residual_psi_star)] {
        for p in &rep.per_point {
            psi.push(vec![
                name.into(),
                p.lambda.re.into(),
                p.lambda.im.into(),
                p.abs.into(),
                p.rel.into(),
                p.scale.into(),
            ]);
        }
    }
    let mut dbar = Table::new("dbar", &ORDER_HEADER);
    push_order_rows(
        &mut dbar,
        "transformed",
        &r.residual_transformed_dbar,
        &r.transformed_dbar_orders,
    );
    let mut domains = Table::new(
        "domains",
        &[
            "domain",
            "n_points",
            "b_max_abs",
            "b_max_rel",
            "psi_max_abs",
            "psi_max_rel",
            "psi_star_max_abs",
            "psi_star_max_rel",
        ],
    );
    for d in r.per_domain() {
        domains.push(vec![
            d.domain.to_string().into(),
            d.residual_b.n_points.into(),
            d.residual_b.max_abs.into(),
            d.residual_b.max_rel.into(),
            d.residual_psi.max_abs.into(),
            d.residual_psi.max_rel.into(),
            d.residual_psi_star.max_abs.into(),
            d.residual_psi_star.max_rel.into(),
        ]);
    }
    let details = json!({
        "scenario": r.scenario,
        "exclusions": r.grid.exclusions,
        "steps": r.residual_transformed_dbar.iter().map(|x| x.h).collect::<Vec<_>>(),
        "transformed_dbar_orders": r.transformed_dbar_orders,
        "noise_floor_rel": fd_noise_floor(r.quadrature.rel_tol),
        "seed_max_rel": r.seed.max_rel,
        "b_skipped": r.residual_b.skipped,
    });
    OutputRecord::new(
        command,
        cfg,
        vec![b, psi, dbar, domains],
        r.checks(),
        details,
    )
}

fn seed_failure_record(command: &str, cfg: &RunConfig, residual: f64, check: &str) -> OutputRecord {
    let summary = vec![Check::at_most("seed_residual_rel", residual, SEED_REL)];
    OutputRecord::new(
        command,
        cfg,
        Vec::new(),
        summary,
        json!({ "seed_rejected": check }),
    )
}

pub fn cmd_create(cfg: &RunConfig, v: &Validated) -> CmdResult {
    let alpha = v.require_alpha()?;
    match run_creation(
        v.energy,
        alpha,
        &v.grid,
        &v.z_samples,
        v.fd_step,
        &v.scenario,
    ) {
        Ok(r) => Ok(scenario_record("create", cfg, &r)),
        Err(Error::SeedInvalid {
            check, residual, ..
        }) => Ok(seed_failure_record("create", cfg, residual, &check)),
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_annihilate(cfg: &RunConfig, v: &Validated) -> CmdResult {
    let alpha = v.require_alpha()?;
    match run_annihilation(
        v.energy,
        alpha,
        &v.grid,
        &v.z_samples,
        v.fd_step,
        &v.scenario,
    ) {
        Ok(r) => Ok(scenario_record("annihilate", cfg, &r)),
        Err(Error::SeedInvalid {
            check, residual, ..
        }) => Ok(seed_failure_record("annihilate", cfg, residual, &check)),
        Err(e) => Err(e.into()),
    }
}
