//! One function per scenario. Each builds a [`Table`] and a short list of
//! summary scalars.

use sqed_core::numerics::{integrate_semi_infinite, oscillatory_phase_integral, PhaseSign};
use sqed_core::oracle::{
    rr_kernel_check, transfer_function_check, variance_curve, windowed_xi_check, ModeGrid, VarianceEvaluator,
    VelocityProbe, DEFAULT_FIT_WINDOW,
};
use sqed_core::response::{alpha_abs_sq, alpha_identity_residual};
use sqed_core::rindler::{
    coth_total_integrand, rindler_diffusion_rate, rindler_drag, spectrum_table, xi_eta_closed_form, Kernel,
    RindlerDragForm,
};
use sqed_core::spectral::{planck_occupation, OccupationTable};
use sqed_core::thermal_kinetics::{
    balance_residual, diffusion_rate, drag_force_qed3d, drag_sweep, integrand_table, recover_planck,
    single_direction_force, DragForm,
};
use sqed_core::{Error, Occupation, OscillatorParams, QuadratureSpec, RindlerParams};

use crate::config::{Params, RunConfig, Scenario};
use crate::table::{Cell, Table};
use crate::CliError;

type Res<T> = Result<T, CliError>;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub summary: Vec<(String, String)>,
}

impl Outcome {
    fn new(table: Table) -> Self {
        Outcome { table, summary: Vec::new() }
    }

    fn num(&mut self, key: &str, v: f64) {
        self.summary.push((key.to_string(), format!("{v:e}")));
    }

    fn text(&mut self, key: &str, v: impl ToString) {
        self.summary.push((key.to_string(), v.to_string()));
    }
}

/// Runs the scenario without touching the filesystem (except to read an
/// occupation table).
pub fn compute(cfg: &RunConfig) -> Res<Outcome> {
    let p = cfg.params();
    match cfg.scenario {
        Scenario::PlanckOde => planck_ode(p),
        Scenario::Balance => balance(p),
        Scenario::Drag => drag(p),
        Scenario::Diffusion => diffusion(p),
        Scenario::RindlerSpectrum => rindler_spectrum(p),
        Scenario::RindlerDiffusion => rindler_diffusion_scenario(p),
        Scenario::OracleVariance => oracle(p),
        Scenario::XiCheck => xi_check(p),
    }
}

fn oscillator(p: Params) -> Res<OscillatorParams> {
    match p.scalar_opt("beta")? {
        None => Ok(OscillatorParams::default_dimensionless()),
        Some(b) => Ok(OscillatorParams::from_damping(b, 1.0, 1000.0)?),
    }
}

/// Default tolerances and `--rel-tol`, plus `--cutoff` as a fixed upper
/// limit when it is a single number.
fn quad_spec(p: Params) -> Res<QuadratureSpec> {
    let spec = adaptive_spec(p)?;
    let spec = match p.scalar_opt("cutoff")? {
        Some(c) => spec.with_cutoff(c),
        None => spec,
    };
    spec.validate()?;
    Ok(spec)
}

/// Like [`quad_spec`] but ignores `--cutoff`, for scenarios that scan it.
fn adaptive_spec(p: Params) -> Res<QuadratureSpec> {
    let mut spec = QuadratureSpec::default();
    if let Some(t) = p.scalar_opt("rel-tol")? {
        spec = spec.with_tolerance(t);
    }
    spec.validate()?;
    Ok(spec)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

fn logspace(lo: f64, hi: f64, n: usize) -> Res<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo) {
        return Err(CliError::Usage(format!("log grid needs 0 < omega-min <= omega-max, got [{lo}, {hi}]")));
    }
    Ok(linspace(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect())
}

fn require(p: Params, key: &str) -> Res<Vec<f64>> {
    p.list_opt(key)?.ok_or_else(|| CliError::Usage(format!("--{key} is required")))
}

/// `(label, T, occupation)` for each requested temperature, or the table
/// from `--occupation` with `T = NaN`.
fn occupations(p: Params) -> Res<Vec<(String, f64, Occupation)>> {
    if let Some(path) = p.text("occupation") {
        let table = OccupationTable::from_csv_path(path)?;
        return Ok(vec![(path.to_string(), f64::NAN, Occupation::Tabulated(table))]);
    }
    p.list("T", &[1.0])?
        .into_iter()
        .map(|t| Ok(("planck".to_string(), t, Occupation::planck(t)?)))
        .collect()
}

fn rindler_params(p: Params) -> Res<Vec<RindlerParams>> {
    match (p.list_opt("a")?, p.list_opt("T")?) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --a or --T, not both".into())),
        (Some(a), None) => a.into_iter().map(|a| Ok(RindlerParams::new(a)?)).collect(),
        (None, Some(t)) => t.into_iter().map(|t| Ok(RindlerParams::from_temperature(t)?)).collect(),
        (None, None) => Ok(vec![RindlerParams::new(1.0)?]),
    }
}

fn planck_ode(p: Params) -> Res<Outcome> {
    let spec = QuadratureSpec { rel_tol: p.scalar("rel-tol", 1e-12)?, abs_tol: 1e-300, ..QuadratureSpec::default() };
    let mut table = Table::new(&["T", "omega_ref", "omega", "n_ode", "n_planck", "rel_error"]);
    let mut worst: f64 = 0.0;
    for t in p.list("T", &[1.0])? {
        for w_ref in p.list("omega-ref", &[1.0])? {
            for (w, n) in recover_planck(t, w_ref, &spec)?.iter() {
                let exact = planck_occupation(w, t);
                let err = (n / exact - 1.0).abs();
                worst = worst.max(err);
                table.push(vec![t.into(), w_ref.into(), w.into(), n.into(), exact.into(), err.into()]);
            }
        }
    }
    let mut out = Outcome::new(table);
    out.num("max_rel_error", worst);
    Ok(out)
}

fn balance(p: Params) -> Res<Outcome> {
    let osc = oscillator(p)?;
    let spec = quad_spec(p)?;
    if p.switch("integrand")? {
        let t = p.scalar("T", 1.0)?;
        let v = p.scalar("v", 0.0)?;
        let grid = linspace(p.scalar("omega-min", 0.01)?, p.scalar("omega-max", 20.0)?, p.count("points", 400)?);
        let rows = integrand_table(v, t, &osc, &grid)?;
        let mut table = Table::new(&["omega", "integrand_drag", "integrand_diffusion", "residual"]);
        let mut worst: f64 = 0.0;
        for r in rows {
            worst = worst.max(r.residual.abs());
            table.push(vec![r.omega.into(), r.integrand_drag.into(), r.integrand_diffusion.into(), r.residual.into()]);
        }
        let mut out = Outcome::new(table);
        out.num("max_abs_residual", worst);
        return Ok(out);
    }
    let mut table = Table::new(&[
        "T",
        "pointwise_max",
        "integrated",
        "integrated_relative",
        "identity_max",
        "grid_points",
        "cutoff",
    ]);
    let mut worst: f64 = 0.0;
    for t in p.list("T", &[1.0])? {
        let r = balance_residual(t, &osc, &spec)?;
        worst = worst.max(r.pointwise_max);
        table.push(vec![
            t.into(),
            r.pointwise_max.into(),
            r.integrated.into(),
            r.integrated_relative.into(),
            r.identity_max.into(),
            r.grid_points.into(),
            r.cutoff_used.into(),
        ]);
    }
    let identity = logspace(0.01, 100.0, p.count("identity-points", 10_000)?)?
        .into_iter()
        .map(|w| (alpha_identity_residual(w, &osc) / alpha_abs_sq(w, &osc)).abs())
        .fold(0.0, f64::max);
    let mut out = Outcome::new(table);
    out.num("pointwise_max", worst);
    out.num("identity_max", identity);
    Ok(out)
}

/// Ratio of the per-e-fold growth over the last two cutoff intervals.
fn increment_ratio(rows: &[(f64, f64)]) -> Option<f64> {
    let [.., (c0, f0), (c1, f1), (c2, f2)] = rows else {
        return None;
    };
    Some(((f1 - f0) / (c1 / c0).ln()) / ((f2 - f1) / (c2 / c1).ln()))
}

fn drag(p: Params) -> Res<Outcome> {
    let osc = oscillator(p)?;
    match p.text("form").unwrap_or("exact") {
        "exact" => drag_thermal(p, &osc),
        "qed3d" => {
            let spec = quad_spec(p)?;
            let mut table = Table::new(&["v", "T", "force", "estimated_error", "cutoff"]);
            for t in p.list("T", &[1.0])? {
                for v in require(p, "v")? {
                    let r = drag_force_qed3d(v, t, &osc, &spec)?;
                    table.push(vec![v.into(), t.into(), r.value.into(), r.estimated_error.into(), r.cutoff_used.into()]);
                }
            }
            let mut out = Outcome::new(table);
            first_force(&mut out, 2);
            Ok(out)
        }
        "coth-total" => drag_coth_total(p, &osc),
        "single-direction" => {
            let spec = adaptive_spec(p)?;
            let Some(cutoffs) = p.list_opt("cutoff")? else {
                return Err(Error::CutoffRequired.into());
            };
            let t = p.scalar("T", 1.0)?;
            let occ = Occupation::planck(t)?;
            let mut table = Table::new(&["v", "T", "cutoff", "force"]);
            let mut out_rows = Vec::new();
            for v in require(p, "v")? {
                for &c in &cutoffs {
                    let f = single_direction_force(v, &occ, &osc, c, &spec)?.value;
                    out_rows.push((c, f));
                    table.push(vec![v.into(), t.into(), c.into(), f.into()]);
                }
            }
            let mut out = Outcome::new(table);
            first_force(&mut out, 3);
            if let Some(r) = increment_ratio(&out_rows) {
                out.num("increment_ratio", r);
            }
            Ok(out)
        }
        other => Err(CliError::Usage(format!(
            "--form: expected exact, qed3d, coth-total or single-direction, got '{other}'"
        ))),
    }
}

fn first_force(out: &mut Outcome, col: usize) {
    if let Some(Cell::Num(f)) = out.table.rows.first().map(|r| r[col].clone()) {
        out.num("force", f);
    }
}

fn drag_thermal(p: Params, osc: &OscillatorParams) -> Res<Outcome> {
    let spec = quad_spec(p)?;
    let velocities = require(p, "v")?;
    let mut table = Table::new(&["source", "v", "T", "force_exact", "error_exact", "force_linearized", "cutoff"]);
    let mut dissipative = true;
    let mut oddness: Option<f64> = None;
    let mut gap: Option<(f64, f64)> = None;
    for (label, t, occ) in occupations(p)? {
        let exact = drag_sweep(&velocities, &occ, osc, &spec, DragForm::ExactDifference)
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        let lin = drag_sweep(&velocities, &occ, osc, &spec, DragForm::Linearized)
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        for (i, &v) in velocities.iter().enumerate() {
            let (fe, fl) = (exact[i].value, lin[i].value);
            dissipative &= fe * v <= 0.0;
            if let Some(j) = velocities.iter().position(|&u| u == -v && u != 0.0) {
                let odd = ((fe + exact[j].value) / fe).abs();
                oddness = Some(oddness.map_or(odd, |o| o.max(odd)));
            }
            if v != 0.0 && gap.is_none_or(|(u, _)| v.abs() < u) {
                gap = Some((v.abs(), (fe / fl - 1.0).abs()));
            }
            table.push(vec![
                label.as_str().into(),
                v.into(),
                t.into(),
                fe.into(),
                exact[i].estimated_error.into(),
                fl.into(),
                exact[i].cutoff_used.into(),
            ]);
        }
    }
    let mut out = Outcome::new(table);
    first_force(&mut out, 3);
    out.text("dissipative", dissipative);
    if let Some(o) = oddness {
        out.num("max_oddness", o);
    }
    if let Some((v, g)) = gap {
        out.num("smallest_v", v);
        out.num("linearization_gap", g);
    }
    Ok(out)
}

fn drag_coth_total(p: Params, osc: &OscillatorParams) -> Res<Outcome> {
    let a = p.scalar("a", 1.0)?;
    let r = RindlerParams::new(a)?;
    let spec = adaptive_spec(p)?;
    let mut table = Table::new(&["a", "cutoff", "force"]);
    if p.text("cutoff") == Some("adaptive") {
        // meant to fail: the integrand grows like 1/Ω
        let i = integrate_semi_infinite(|w| coth_total_integrand(w, &r, osc), &spec)?;
        table.push(vec![a.into(), i.cutoff.into(), i.value.into()]);
        let mut out = Outcome::new(table);
        out.num("force", i.value);
        return Ok(out);
    }
    let Some(cutoffs) = p.list_opt("cutoff")? else {
        return Err(Error::CutoffRequired.into());
    };
    let mut rows = Vec::new();
    for c in cutoffs {
        let f = rindler_drag(0.0, &r, osc, &spec.clone().with_cutoff(c), RindlerDragForm::CothTotal)?.value;
        rows.push((c, f));
        table.push(vec![a.into(), c.into(), f.into()]);
    }
    let mut out = Outcome::new(table);
    if let Some(&(_, f)) = rows.last() {
        out.num("force", f);
    }
    if let Some(ratio) = increment_ratio(&rows) {
        out.num("increment_ratio", ratio);
    }
    Ok(out)
}

fn diffusion(p: Params) -> Res<Outcome> {
    let osc = oscillator(p)?;
    let spec = quad_spec(p)?;
    let mut table = Table::new(&["source", "T", "rate", "estimated_error", "cutoff"]);
    for (label, t, occ) in occupations(p)? {
        let r = diffusion_rate(&occ, &osc, &spec)?;
        table.push(vec![label.into(), t.into(), r.value.into(), r.estimated_error.into(), r.cutoff_used.into()]);
    }
    let first = match table.rows.first() {
        Some(row) => row[2].clone(),
        None => Cell::Num(f64::NAN),
    };
    let mut out = Outcome::new(table);
    if let Cell::Num(rate) = first {
        out.num("rate", rate);
    }
    Ok(out)
}

fn rindler_spectrum(p: Params) -> Res<Outcome> {
    let rs = rindler_params(p)?;
    let [r] = rs.as_slice() else {
        return Err(CliError::Usage("rindler-spectrum takes a single --a or --T".into()));
    };
    let omegas = logspace(p.scalar("omega-min", 0.1)?, p.scalar("omega-max", 10.0)?, p.count("points", 100)?)?;
    let mut table = Table::new(&["Omega", "w_gg_dag", "w_g_dag_g", "kms_ratio", "gamma_identity_residual"]);
    let mut gamma: f64 = 0.0;
    let mut kms: f64 = 0.0;
    for row in spectrum_table(r, &omegas)? {
        gamma = gamma.max(row.gamma_identity_residual.abs());
        kms = kms.max((row.kms_ratio / (row.omega / r.unruh_temperature()).exp() - 1.0).abs());
        table.push(vec![
            row.omega.into(),
            row.w_gg_dag.into(),
            row.w_g_dag_g.into(),
            row.kms_ratio.into(),
            row.gamma_identity_residual.into(),
        ]);
    }
    let mut out = Outcome::new(table);
    out.num("a", r.acceleration());
    out.num("T_DU", r.unruh_temperature());
    out.num("max_gamma_identity_residual", gamma);
    out.num("max_kms_deviation", kms);
    Ok(out)
}

fn rindler_diffusion_scenario(p: Params) -> Res<Outcome> {
    let osc = oscillator(p)?;
    let spec = quad_spec(p)?;
    let mut table = Table::new(&["a", "T_DU", "route_a", "route_b", "relative_difference"]);
    let mut worst: f64 = 0.0;
    for r in rindler_params(p)? {
        let d = rindler_diffusion_rate(&r, &osc, &spec)?;
        worst = worst.max(d.relative_difference());
        table.push(vec![
            r.acceleration().into(),
            r.unruh_temperature().into(),
            d.route_a.value.into(),
            d.route_b.value.into(),
            d.relative_difference().into(),
        ]);
    }
    let mut out = Outcome::new(table);
    out.num("max_relative_difference", worst);
    Ok(out)
}

fn mode_grid(p: Params, length: f64, modes: usize) -> Res<ModeGrid> {
    Ok(ModeGrid::new(p.scalar("L", length)?, p.count("N", modes)?)?)
}

fn oracle(p: Params) -> Res<Outcome> {
    let osc = oscillator(p)?;
    match p.text("check").unwrap_or("variance") {
        "variance" => {
            let grid = mode_grid(p, 4000.0, 8000)?;
            let (label, _, occ) = occupations(p)?.into_iter().next().expect("at least one occupation");
            if label == "planck" && p.list("T", &[1.0])?.len() != 1 {
                return Err(CliError::Usage("oracle-variance takes a single --T".into()));
            }
            let (t0, t1, dt) = (p.scalar("t-min", 20.0)?, p.scalar("t-max", 100.0)?, p.scalar("dt", 0.5)?);
            if !(dt > 0.0 && t1 >= t0) {
                return Err(CliError::Usage(format!("need dt > 0 and t-max >= t-min, got dt={dt}, [{t0}, {t1}]")));
            }
            let steps = ((t1 - t0) / dt + 1e-9).floor() as usize;
            let times: Vec<f64> = (0..=steps).map(|k| t0 + dt * k as f64).collect();
            let window = (p.scalar("fit-min", DEFAULT_FIT_WINDOW.0)?, p.scalar("fit-max", DEFAULT_FIT_WINDOW.1)?);
            let ev = VarianceEvaluator::new(grid, &occ, &osc, p.switch("anti-resonant")?)?;
            let curve = variance_curve(&ev, &times, window)?;
            let rate = diffusion_rate(&occ, &osc, &QuadratureSpec::default())?.value;
            let mut table = Table::new(&["t", "variance"]);
            for (&t, &v) in curve.times.iter().zip(&curve.values) {
                table.push(vec![t.into(), v.into()]);
            }
            let rel = (curve.fitted_slope / rate - 1.0).abs();
            table.metadata = vec![
                ("fitted_slope".into(), curve.fitted_slope),
                ("continuum_rate".into(), rate),
                ("relative_error".into(), rel),
                ("diagonal_fraction".into(), curve.diagonal_fraction),
            ];
            let mut out = Outcome::new(table);
            out.num("fitted_slope", curve.fitted_slope);
            out.num("continuum_rate", rate);
            out.num("relative_error", rel);
            out.num("diagonal_fraction", curve.diagonal_fraction);
            Ok(out)
        }
        "rr" => {
            let default = ModeGrid::rr_default();
            let grid = mode_grid(p, default.length(), default.modes())?;
            let probe = VelocityProbe::default();
            let coarse = rr_kernel_check(&grid, &probe, &osc)?;
            let fine = rr_kernel_check(&grid.continuum_refined(), &probe, &osc)?;
            let mut table = Table::new(&["t", "kernel", "target"]);
            for &(t, k, x) in &coarse.samples {
                table.push(vec![t.into(), k.into(), x.into()]);
            }
            let mut out = Outcome::new(table);
            out.num("deviation", coarse.deviation);
            out.num("refined_deviation", fine.deviation);
            out.num("omega_max", coarse.omega_max);
            Ok(out)
        }
        "transfer" => {
            let grid = mode_grid(p, 400.0, 8000)?;
            let mut table =
                Table::new(&["omega", "measured_re", "measured_im", "expected_re", "expected_im", "deviation"]);
            let mut worst: f64 = 0.0;
            for w in p.list("omega", &[1.0, 3.0])? {
                let c = transfer_function_check(&grid, &osc, w)?;
                worst = worst.max(c.deviation);
                table.push(vec![
                    w.into(),
                    c.measured.re.into(),
                    c.measured.im.into(),
                    c.expected.re.into(),
                    c.expected.im.into(),
                    c.deviation.into(),
                ]);
            }
            let mut out = Outcome::new(table);
            out.num("max_deviation", worst);
            Ok(out)
        }
        other => Err(CliError::Usage(format!("--check: expected variance, rr or transfer, got '{other}'"))),
    }
}

fn xi_check(p: Params) -> Res<Outcome> {
    let spec = quad_spec(p)?;
    let a = p.scalar("a", 1.0)?;
    let r = RindlerParams::new(a)?;
    let window = p.scalar("T-window", 8.0 / a)?;
    let mut table = Table::new(&[
        "omega",
        "Omega",
        "a",
        "xi_deviation",
        "eta_deviation",
        "windowed_deviation",
        "windowed_phase_error",
    ]);
    let (mut worst, mut worst_windowed): (f64, f64) = (0.0, 0.0);
    for w in p.list("omega", &[1.0])? {
        for om in p.list("Omega", &[1.0])? {
            let dev = |sign, kernel| -> Res<f64> {
                let num = oscillatory_phase_integral(w, om, a, sign, &spec)?;
                let cf = xi_eta_closed_form(w, om, &r, kernel)?;
                Ok((num - cf).norm() / cf.norm())
            };
            let xi = dev(PhaseSign::Positive, Kernel::Xi)?;
            let eta = dev(PhaseSign::Negative, Kernel::Eta)?;
            worst = worst.max(xi).max(eta);
            let (wd, wp) = if window > 0.0 {
                let c = windowed_xi_check(w, om, &r, window, &spec)?;
                worst_windowed = worst_windowed.max(c.deviation);
                (c.deviation, c.phase_error)
            } else {
                (f64::NAN, f64::NAN)
            };
            table.push(vec![w.into(), om.into(), a.into(), xi.into(), eta.into(), wd.into(), wp.into()]);
        }
    }
    let mut out = Outcome::new(table);
    out.num("max_deviation", worst);
    if window > 0.0 {
        out.num("max_windowed_deviation", worst_windowed);
    }
    Ok(out)
}

/// SI conversion recipe for natural-unit results.
pub fn unit_report() -> String {
    const HBAR: f64 = 1.054_571_817e-34;
    const K_B: f64 = 1.380_649e-23;
    const C: f64 = 299_792_458.0;
    let k_per_rad_s = HBAR / K_B;
    let w0 = 1e15;
    format!(
        "Natural units: hbar = c = k_B = 1, frequencies in units of the resonance omega0.\n\
         Choose omega0 in rad/s, then:\n\
         \x20 frequency     omega_SI = omega * omega0                [rad/s]\n\
         \x20 time          t_SI = t / omega0                        [s]\n\
         \x20 length        L_SI = L * c / omega0                    [m]\n\
         \x20 velocity      v_SI = v * c                             [m/s]\n\
         \x20 temperature   T_SI = T * hbar omega0 / k_B = T * omega0 * {k_per_rad_s:.6e} [K]\n\
         \x20 acceleration  a_SI = a * c omega0 = a * omega0 * {C:.6e} [m/s^2]\n\
         \x20 momentum      P_SI = P * hbar omega0 / c               [kg m/s]\n\
         \x20 force         F_SI = F * hbar omega0^2 / c             [N]\n\
         \x20 diffusion     D_SI = D * (hbar omega0 / c)^2 * omega0  [kg^2 m^2/s^3]\n\
         Example omega0 = {w0:e} rad/s: T = 1 is {:.1} K, a = 1 is {:.3e} m/s^2, T_DU = a/(2 pi).\n",
        k_per_rad_s * w0,
        C * w0,
    )
}
