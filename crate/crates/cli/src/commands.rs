use std::io::Write;
use std::path::Path;

use polycurve::ambient::Curve;
use polycurve::families::{
    check_relation, default_triharmonic_seeds, make_biharmonic_two_freq, make_r_circle, single_frequency_circle,
    solve_biharmonic_three_freq, solve_single_freq_polynomial, solve_triharmonic_two_freq, ClassificationCheck,
};
use polycurve::geometry::SpaceForm;
use polycurve::io::{curve_from_json, curve_to_json, to_precise_json};
use polycurve::lagrangian::{euler_lagrange_residual_generic, LagrangianId};
use polycurve::residuals::{
    conjecture_probe, residual_biharmonic_ode, residual_extrinsic, residual_fourharmonic_ode, residual_geodesic,
    residual_intrinsic, residual_triharmonic_ode, ResidualReport,
};
use polycurve::sampling::{EvalOptions, FieldRoute};
use polycurve::scan::{linspace, scan_single_frequency, scan_two_frequency_biharmonic, ScanRow};
use polycurve::variational::{gradient_flow, perturbed_great_circle, FlowMode, FlowOptions};
use serde::{Deserialize, Serialize};

use crate::args::*;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

pub fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::Verify(a) => verify(a),
        Command::Residual(a) => residual(a),
        Command::Classify(a) => classify(a),
        Command::Solve(a) => solve(a),
        Command::Minimize(a) => minimize(a),
        Command::Sweep(a) => sweep(a),
        Command::Probe(a) => probe(a),
        Command::Curve(a) => curve(a),
        Command::Run(a) => execute(RunConfig::load(&a.config)?.to_command()?),
    }
}

/// Writes `text` to `path`, or to standard output.
fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn csv_text<F>(write: F) -> CliResult<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w)?;
    let bytes = w.into_inner().map_err(|e| CliError::io("<buffer>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

/// Shortest round-trip text; exponent form for very small or large values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn load_curve(path: &Path) -> CliResult<Curve> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(curve_from_json(&text)?)
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn eval_options(samples: Option<usize>, route: Option<Route>) -> EvalOptions {
    EvalOptions {
        samples,
        route: route.map(|r| match r {
            Route::Expanded => FieldRoute::Expanded,
            Route::Grid => FieldRoute::Grid,
        }),
    }
}

fn family_curve(family: Family, r: usize, a: Option<f64>) -> CliResult<(String, Curve)> {
    Ok(match family {
        Family::RCircle => (format!("r-circle r={r}"), make_r_circle(r, 3)?.into()),
        Family::GreatCircle => ("great circle".into(), single_frequency_circle(1.0, 1.0, 3)?.into()),
        Family::BiharmonicTwoFreq => {
            let a = a.ok_or_else(|| CliError::Config("biharmonic-two-freq needs --a".into()))?;
            let fam = make_biharmonic_two_freq(a, 3)?;
            (format!("biharmonic two-frequency a^2={} b^2={}", fam.a_sq, fam.b_sq), fam.curve.into())
        }
    })
}

#[derive(Debug, Serialize)]
struct VerifyCheck {
    name: String,
    max_norm: f64,
    l2_norm: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    subject: String,
    r: usize,
    checks: Vec<VerifyCheck>,
    passed: bool,
}

fn verify(a: VerifyArgs) -> CliResult<()> {
    let (subject, curve) = match (&a.curve, a.family) {
        (Some(p), _) => (p.display().to_string(), load_curve(p)?),
        (None, Some(f)) => family_curve(f, a.r, a.a)?,
        (None, None) => return Err(CliError::Config("verify needs --family or --curve".into())),
    };
    let opts = eval_options(a.samples, None);
    let mut reports: Vec<(String, ResidualReport)> = Vec::new();
    let space = SpaceForm::unit_sphere(curve.dim() - 1);
    if a.r >= 2 {
        reports.push((
            format!("residual_intrinsic r={}", a.r),
            residual_intrinsic(&curve, a.r, &space, &opts)?,
        ));
    }
    let dedicated = match a.r {
        1 => Some(("residual_geodesic", residual_geodesic(&curve, &opts)?, LagrangianId::Geodesic)),
        2 => Some(("residual_biharmonic_ode", residual_biharmonic_ode(&curve, &opts)?, LagrangianId::Biharmonic)),
        3 => Some(("residual_triharmonic_ode", residual_triharmonic_ode(&curve, &opts)?, LagrangianId::Triharmonic)),
        4 => Some((
            "residual_fourharmonic_ode",
            residual_fourharmonic_ode(&curve, &opts)?,
            LagrangianId::FourHarmonic,
        )),
        _ => None,
    };
    if let Some((name, rep, id)) = dedicated {
        reports.push((name.into(), rep));
        reports.push((
            format!("euler_lagrange {id}"),
            euler_lagrange_residual_generic(id, &curve, &opts)?,
        ));
    }
    if reports.is_empty() {
        return Err(CliError::Config(format!("no residual applies to r = {}", a.r)));
    }
    let checks: Vec<VerifyCheck> = reports
        .into_iter()
        .map(|(name, rep)| VerifyCheck {
            name,
            max_norm: rep.max_norm,
            l2_norm: rep.l2_norm,
            tolerance: a.tol,
            passed: rep.max_norm <= a.tol,
        })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport {
        subject,
        r: a.r,
        checks,
        passed,
    };
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => to_precise_json(&report)?,
        Format::Csv => csv_text(|w| {
            w.write_record(["name", "max_norm", "l2_norm", "tolerance", "passed"])?;
            for c in &report.checks {
                w.write_record([
                    c.name.clone(),
                    num(c.max_norm),
                    num(c.l2_norm),
                    num(c.tolerance),
                    c.passed.to_string(),
                ])?;
            }
            Ok(())
        })?,
    };
    emit(a.output.out.as_deref(), &text)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::VerificationFailed(report.subject))
    }
}

fn residual(a: ResidualArgs) -> CliResult<()> {
    let path = a
        .curve
        .as_ref()
        .ok_or_else(|| CliError::Config("residual needs --curve".into()))?;
    let curve = load_curve(path)?;
    let opts = eval_options(a.samples, a.route);
    let report = match a.kind {
        ResidualChoice::Intrinsic => {
            let space = SpaceForm {
                curvature: a.curvature,
                dim: curve.dim() - 1,
            };
            residual_intrinsic(&curve, a.r, &space, &opts)?
        }
        ResidualChoice::Geodesic => residual_geodesic(&curve, &opts)?,
        ResidualChoice::Biharmonic => residual_biharmonic_ode(&curve, &opts)?,
        ResidualChoice::Triharmonic => residual_triharmonic_ode(&curve, &opts)?,
        ResidualChoice::Fourharmonic => residual_fourharmonic_ode(&curve, &opts)?,
        ResidualChoice::Extrinsic => residual_extrinsic(&curve, a.r, &opts)?,
        ResidualChoice::EulerLagrange => {
            let id: LagrangianId = a
                .lagrangian
                .as_deref()
                .ok_or_else(|| CliError::Config("euler-lagrange needs --lagrangian".into()))?
                .parse()?;
            euler_lagrange_residual_generic(id, &curve, &opts)?
        }
    };
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => to_precise_json(&report)?,
        Format::Csv => csv_text(|w| {
            w.write_record(["s", "norm"])?;
            for (s, v) in report.parameters.iter().zip(&report.per_sample) {
                w.write_record([num(*s), num(*v)])?;
            }
            Ok(())
        })?,
    };
    emit(a.output.out.as_deref(), &text)
}

#[derive(Debug, Deserialize)]
struct ClassifyRow {
    #[serde(rename = "K")]
    curvature: f64,
    r: usize,
    k: f64,
    tau: f64,
}

fn classify(a: ClassifyArgs) -> CliResult<()> {
    // Original CSV records are kept so the output appends columns to them.
    let (headers, records, checks): (Vec<String>, Vec<Vec<String>>, Vec<ClassificationCheck>) = match &a.input {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
            let headers = rdr.headers()?.clone();
            let mut records = Vec::new();
            let mut checks = Vec::new();
            for rec in rdr.records() {
                let rec = rec?;
                let row: ClassifyRow = rec.deserialize(Some(&headers))?;
                checks.push(check_relation(row.curvature, row.r, row.k, row.tau));
                records.push(rec.iter().map(str::to_string).collect());
            }
            (headers.iter().map(str::to_string).collect(), records, checks)
        }
        None => {
            let (Some(c), Some(r), Some(k), Some(tau)) = (a.curvature, a.r, a.k, a.tau) else {
                return Err(CliError::Config("classify needs --input or all of --K --r --k --tau".into()));
            };
            let headers = ["K", "r", "k", "tau"].map(String::from).to_vec();
            (
                headers,
                vec![vec![num(c), r.to_string(), num(k), num(tau)]],
                vec![check_relation(c, r, k, tau)],
            )
        }
    };
    if checks.iter().any(|c| c.r < 1) {
        return Err(CliError::Config("r must be >= 1".into()));
    }
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Json => to_precise_json(&checks)?,
        Format::Csv => csv_text(|w| {
            let mut h = headers.clone();
            h.extend(["satisfied", "lhs", "rhs"].map(String::from));
            w.write_record(&h)?;
            for (rec, c) in records.iter().zip(&checks) {
                let mut row = rec.clone();
                row.extend([c.satisfied.to_string(), num(c.lhs), num(c.rhs)]);
                w.write_record(&row)?;
            }
            Ok(())
        })?,
    };
    emit(a.output.out.as_deref(), &text)
}

fn solve(a: SolveArgs) -> CliResult<()> {
    let format = a.output.format.unwrap_or(Format::Json);
    let text = match a.system {
        System::SingleFreq => {
            let roots = solve_single_freq_polynomial(a.r)?;
            match format {
                Format::Json => to_precise_json(&roots)?,
                Format::Csv => csv_text(|w| {
                    w.write_record(["a_squared", "multiplicity", "is_geodesic"])?;
                    for x in &roots {
                        w.write_record([num(x.a_squared), x.multiplicity.to_string(), x.is_geodesic.to_string()])?;
                    }
                    Ok(())
                })?,
            }
        }
        System::TriharmonicTwoFreq => {
            if a.seed_stride == 0 {
                return Err(CliError::Config("seed stride must be positive".into()));
            }
            let seeds: Vec<_> = default_triharmonic_seeds().into_iter().step_by(a.seed_stride).collect();
            let report = solve_triharmonic_two_freq(&seeds);
            match format {
                Format::Json => to_precise_json(&report)?,
                Format::Csv => csv_text(|w| {
                    w.write_record([
                        "a_sq",
                        "b_sq",
                        "alpha1_sq",
                        "alpha3_sq",
                        "lambda",
                        "residual",
                        "is_geodesic",
                        "degenerate",
                    ])?;
                    for s in &report.solutions {
                        let mut row: Vec<String> = ["a_sq", "b_sq", "alpha1_sq", "alpha3_sq", "lambda"]
                            .iter()
                            .map(|k| num(s.get(k)))
                            .collect();
                        row.extend([num(s.residual), s.is_geodesic.to_string(), s.degenerate.to_string()]);
                        w.write_record(&row)?;
                    }
                    Ok(())
                })?,
            }
        }
        System::BiharmonicThreeFreq => {
            let s = solve_biharmonic_three_freq()?;
            match format {
                Format::Json => to_precise_json(&s)?,
                Format::Csv => csv_text(|w| {
                    w.write_record(["a_sq", "b_sq", "c_sq", "residual", "is_geodesic"])?;
                    w.write_record([
                        num(s.get("a_sq")),
                        num(s.get("b_sq")),
                        num(s.get("c_sq")),
                        num(s.residual),
                        s.is_geodesic.to_string(),
                    ])
                })?,
            }
        }
    };
    emit(a.output.out.as_deref(), &text)
}

fn minimize(a: MinimizeArgs) -> CliResult<()> {
    let start = match &a.curve {
        Some(p) => match load_curve(p)? {
            Curve::Discrete(d) => d,
            Curve::Ansatz(c) => c.sample(a.samples)?,
        },
        None => match a.mode {
            Mode::Restricted => {
                if !(a.alpha_sq > 0.0 && a.alpha_sq <= 1.0) {
                    return Err(CliError::Config(format!("alpha_sq must be in (0, 1], got {}", a.alpha_sq)));
                }
                single_frequency_circle(1.0 / a.alpha_sq, a.alpha_sq, 2)?.sample(a.samples)?
            }
            Mode::Full => perturbed_great_circle(a.samples, 3, a.amplitude, a.seed)?,
        },
    };
    let options = FlowOptions {
        mode: match a.mode {
            Mode::Restricted => FlowMode::Restricted,
            Mode::Full => FlowMode::Full,
        },
        max_iters: a.max_iters,
        samples: a.samples,
        allow_r4: a.allow_r4,
        ..FlowOptions::default()
    };
    let trace = gradient_flow(&start, a.r, &options)?;
    let csv = csv_text(|w| {
        w.write_record(["step", "energy"])?;
        for it in &trace.iterations {
            w.write_record([it.step.to_string(), num(it.energy)])?;
        }
        Ok(())
    })?;
    match a.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let json = to_precise_json(&trace)?;
            emit(a.output.out.as_deref(), &json)?;
            // The (step, energy) projection goes next to the JSON file.
            if let Some(p) = &a.output.out {
                emit(Some(&p.with_extension("csv")), &csv)?;
            }
            Ok(())
        }
        Format::Csv => emit(a.output.out.as_deref(), &csv),
    }
}

fn sweep(a: SweepArgs) -> CliResult<()> {
    let opts = EvalOptions::default();
    let rows: Vec<ScanRow> = match a.family {
        SweepFamily::SingleFreq => scan_single_frequency(a.r, &linspace(a.a_min, a.a_max, a.a_count)?, &opts)?,
        SweepFamily::TwoFreq => scan_two_frequency_biharmonic(
            &linspace(a.a_min, a.a_max, a.a_count)?,
            &linspace(a.b_min, a.b_max, a.b_count)?,
            &opts,
        )?,
    };
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Json => to_precise_json(&rows)?,
        Format::Csv => csv_text(|w| {
            w.write_record([
                "a_sq",
                "b_sq",
                "alpha_sq",
                "feasible",
                "max_norm",
                "l2_norm",
                "local_minimum",
            ])?;
            for r in &rows {
                w.write_record([
                    num(r.a_sq),
                    opt_num(r.b_sq),
                    opt_num(r.alpha_sq),
                    r.feasible.to_string(),
                    opt_num(r.max_norm),
                    opt_num(r.l2_norm),
                    r.local_minimum.to_string(),
                ])?;
            }
            Ok(())
        })?,
    };
    emit(a.output.out.as_deref(), &text)
}

fn probe(a: ProbeArgs) -> CliResult<()> {
    let report = conjecture_probe(a.alpha, a.beta, a.s_min, a.s_max, a.points)?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => to_precise_json(&report)?,
        Format::Csv => csv_text(|w| {
            w.write_record(["s", "value", "predicted"])?;
            for ((s, v), p) in report.parameters.iter().zip(&report.values).zip(&report.predicted) {
                w.write_record([num(*s), num(*v), num(*p)])?;
            }
            Ok(())
        })?,
    };
    emit(a.output.out.as_deref(), &text)
}

fn curve(a: CurveArgs) -> CliResult<()> {
    let (_, c) = family_curve(a.family, a.r, a.a)?;
    let c = match a.samples {
        Some(n) => match &c {
            Curve::Ansatz(ansatz) => Curve::Discrete(ansatz.sample(n)?),
            Curve::Discrete(_) => c,
        },
        None => c,
    };
    emit(a.out.as_deref(), &curve_to_json(&c)?)
}

/// Parses `POLYCURVE_THREADS` into a worker count.
pub fn thread_count(value: Option<String>) -> CliResult<Option<usize>> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("POLYCURVE_THREADS must be a positive integer, got `{v}`"))),
        },
    }
}
