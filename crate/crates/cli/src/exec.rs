use std::time::Instant;

use cyclenf_core::cocycle::{calibrate_k, solve_cousin, CocycleRhs, DomainGeometry, CALIBRATION_SEED};
use cyclenf_core::diophantine::{certificate_from_cf, check_certificate, MAX_VALIDATION};
use cyclenf_core::geometry::{
    h1_mapping_torus, h1_of_monodromy, nine_point_t, orbit_density, solve_ninth_point, NinePointConfig,
};
use cyclenf_core::majorant::{check_domination, solve_majorant, VERDICT_LABEL};
use cyclenf_core::normalform::{ComponentChange, NormalFormResult};
use cyclenf_core::series::{Complex, LaurentPolynomial, TruncatedSeries2};
use cyclenf_core::{
    normalize_cycle, normalize_node, two_form_factor, verify_conjugacy, verify_cycle, CycleGluingData, Error,
    NodeGluingData,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::encode::{complex, degree, from_pair, laurent2_to, series_from, series_to};
use crate::job::*;
use crate::report::{Check, ErrorInfo, Report, Status};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_ORDER: usize = 8;
pub const DEFAULT_MAJORANT_ORDER: usize = 12;

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub order: Option<usize>,
    pub tol: Option<f64>,
    pub timing: bool,
}

/// Failure while running a job, already classified.
struct Failure(Status, ErrorInfo);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (status, kind, n, divisor) = match &e {
            Error::Torsion { n, divisor } => (Status::MathFailure, "torsion", Some(*n), Some(*divisor)),
            Error::NotExtendable { .. } => (Status::MathFailure, "not_extendable", None, None),
            Error::BranchError { .. } => (Status::MathFailure, "branch", None, None),
            Error::UnboundedQuotients { index, .. } => {
                (Status::MathFailure, "unbounded_quotients", Some(*index), None)
            }
            Error::Overflow(_) => (Status::MathFailure, "overflow", None, None),
            _ => (Status::InputError, "invalid_input", None, None),
        };
        Failure(
            status,
            ErrorInfo {
                kind: kind.into(),
                message: e.to_string(),
                n,
                divisor,
                line: None,
                column: None,
            },
        )
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure(
        Status::InputError,
        ErrorInfo {
            kind: "invalid_input".into(),
            message: message.into(),
            n: None,
            divisor: None,
            line: None,
            column: None,
        },
    )
}

/// Malformed JSON text, with its location.
pub fn parse_error(command: &str, e: &serde_json::Error) -> Report {
    Report::new(command).fail(
        Status::InputError,
        ErrorInfo {
            kind: "malformed_json".into(),
            message: e.to_string(),
            n: None,
            divisor: None,
            line: Some(e.line()),
            column: Some(e.column()),
        },
    )
}

fn payload<T: DeserializeOwned>(input: &Value) -> Result<T, Failure> {
    serde_json::from_value(input.clone()).map_err(|e| input_error(format!("schema: {e}")))
}

pub fn execute(command: Command, input: &Value, opts: Options) -> Report {
    let start = Instant::now();
    let mut report = Report::new(command.name());
    let outcome = match command {
        Command::Normalize => normalize(input, opts, &mut report),
        Command::Majorant => majorant(input, opts, &mut report),
        Command::Diophantine => diophantine(input, &mut report),
        Command::Ninepoints => ninepoints(input, &mut report),
        Command::Homology => homology(input, &mut report),
        Command::Density => density(input, &mut report),
        Command::Twoform => twoform(input, opts, &mut report),
    };
    let mut report = match outcome {
        Ok(()) => report.settle(),
        Err(Failure(status, info)) => report.fail(status, info),
    };
    if opts.timing {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    report
}

fn resolve_order(opts: Options, inferred: usize) -> usize {
    opts.order.unwrap_or(inferred)
}

fn component_json(c: &ComponentChange) -> Value {
    json!({
        "h_plus": series_to(&c.h_plus),
        "h_minus": series_to(&c.h_minus),
        "h_middle": laurent2_to(&c.h_middle),
        "H_plus": series_to(&c.big_h_plus),
        "H_minus": series_to(&c.big_h_minus),
    })
}

fn result_json(r: &NormalFormResult) -> Value {
    json!({
        "residual": r.residual,
        "scaling": {
            "fiber": complex(r.scaling.fiber),
            "base": r.scaling.base.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
            "branch": r.scaling.branch,
        },
        "diagnostics": {
            "divisors": r.diagnostics.divisors,
            "iterations": r.diagnostics.iterations,
            "defects": r.diagnostics.defects,
            "h_max": r.diagnostics.h_max,
        },
        "components": r.components.iter().map(component_json).collect::<Vec<_>>(),
    })
}

fn normalize(input: &Value, opts: Options, report: &mut Report) -> Result<(), Failure> {
    let tol = opts.tol.unwrap_or(DEFAULT_TOL);
    let geo = DomainGeometry::default();
    let job: NormalizeInput = payload(input)?;
    match job {
        NormalizeInput::Node { t, g } => {
            report.notes.push(t.note().into());
            let order = resolve_order(opts, degree(&g).max(1));
            report.order = Some(order);
            let data = NodeGluingData::new(t.constant()?, series_from(&g, order).map_err(input_error)?)?;
            node_report(&data, &geo, tol, report)
        }
        NormalizeInput::Standard { t, n_components } => {
            report.notes.push(t.note().into());
            let order = resolve_order(opts, DEFAULT_ORDER);
            report.order = Some(order);
            match cyclenf_core::standard_model(t.constant()?, n_components, order)? {
                cyclenf_core::StandardModel::Node(d) => node_report(&d, &geo, tol, report),
                cyclenf_core::StandardModel::Cycle(d) => cycle_report(&d, &geo, tol, report),
            }
        }
        NormalizeInput::Cycle { t_edge, g_edge } => {
            let order = resolve_order(opts, g_edge.iter().map(|g| degree(g)).max().unwrap_or(1).max(1));
            report.order = Some(order);
            let ts = t_edge.iter().map(|t| t.constant()).collect::<cyclenf_core::Result<Vec<_>>>()?;
            let gs = g_edge
                .iter()
                .map(|g| series_from(g, order))
                .collect::<Result<Vec<_>, String>>()
                .map_err(input_error)?;
            let data = CycleGluingData::new(ts, gs)?;
            cycle_report(&data, &geo, tol, report)
        }
    }
}

fn node_report(data: &NodeGluingData, geo: &DomainGeometry, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let res = normalize_node(data, geo)?;
    let check = verify_conjugacy(data, &res)?;
    report.checks.push(Check::at_most("conjugacy_residual", res.residual, tol));
    report.checks.push(Check::at_most("reverified_residual", check, tol));
    let mut result = result_json(&res);
    result["model"] = json!("node");
    report.result = result;
    Ok(())
}

fn cycle_report(data: &CycleGluingData, geo: &DomainGeometry, tol: f64, report: &mut Report) -> Result<(), Failure> {
    let res = normalize_cycle(data, geo)?;
    let check = verify_cycle(data, &res)?;
    let product_in = data.product_t();
    let moved = if product_in == res.product_t { 0.0 } else { (product_in - res.product_t).norm().max(f64::MIN_POSITIVE) };
    report.checks.push(Check::at_most("chain_residual", res.chain.residual, tol));
    report.checks.push(Check::at_most("cycle_residual", res.result.residual, tol));
    report.checks.push(Check::at_most("reverified_residual", check, tol));
    report.checks.push(Check::at_most("product_t_change", moved, 0.0));
    let mut result = result_json(&res.result);
    result["model"] = json!("cycle");
    result["product_t"] = json!(complex(res.product_t));
    result["chain"] = json!({
        "residual": res.chain.residual,
        "iterations": res.chain.iterations,
        "closing_G": series_to(&res.chain.data.g_edge[data.n() - 1]),
        "base": res.chain.scaling.base.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
    });
    report.result = result;
    Ok(())
}

fn majorant(input: &Value, opts: Options, report: &mut Report) -> Result<(), Failure> {
    let job: MajorantInput = payload(input)?;
    report.notes.push(job.angle.note().into());
    let angle = job.angle.angle()?;
    let order = resolve_order(opts, DEFAULT_MAJORANT_ORDER);
    report.order = Some(order);
    let eps = job.eps.unwrap_or(cyclenf_core::cocycle::DEFAULT_EPS);
    let geo = DomainGeometry::new(eps, job.delta.unwrap_or(eps))?;
    let (tp, tm) = (Complex::new(1.0, 0.0) / angle.t(), Complex::new(1.0, 0.0));
    let seed = job.seed.unwrap_or(CALIBRATION_SEED);
    let (k, calibration) = match job.k {
        Some(k) => (k, Value::Null),
        None => {
            let cal = calibrate_k(&geo, tp, tm, job.trials.unwrap_or(20), order, seed)?;
            (cal.k, serde_json::to_value(&cal).expect("serializable"))
        }
    };
    let maj = solve_majorant(k, geo.r, geo.m, angle.theta(), order + 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let instances = job.instances.unwrap_or(10);
    let mut dominated = 0;
    let mut first_violation = Value::Null;
    for i in 0..instances {
        let rhs = random_rhs(&mut rng, order, &geo);
        let g = geo.clone().with_input_sups(&rhs.sups());
        let sol = solve_cousin(&rhs, &g, tp, tm)?;
        let m = solve_majorant(k, g.r, g.m, angle.theta(), order + 1)?;
        let rep = check_domination(&sol, &m, &g);
        if rep.dominated {
            dominated += 1;
        } else if first_violation.is_null() {
            first_violation = json!({"instance": i, "violation": rep.first_violation});
        }
    }
    let fraction = if instances == 0 { 1.0 } else { dominated as f64 / instances as f64 };
    report.checks.push(Check {
        name: "dominated_fraction".into(),
        value: fraction,
        tol: 1.0,
        pass: fraction >= 1.0,
    });
    report.result = json!({
        "K": k,
        "K_label": "empirical-K",
        "calibration": calibration,
        "R": geo.r,
        "M": geo.m,
        "theta": angle.theta(),
        "B": maj.b,
        "A": maj.a,
        "radius": maj.radius,
        "verdict": VERDICT_LABEL,
        "instances": instances,
        "dominated": dominated,
        "first_violation": first_violation,
    });
    Ok(())
}

fn random_rhs(rng: &mut ChaCha8Rng, order: usize, geo: &DomainGeometry) -> CocycleRhs {
    let mut side = |annulus| -> Vec<LaurentPolynomial> {
        (0..order)
            .map(|_| {
                let modes: Vec<(i64, Complex)> = (-(order as i64)..=order as i64)
                    .map(|k| {
                        let c = Complex::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
                        (k, c / cyclenf_core::Annulus::monomial_sup(&annulus, k))
                    })
                    .collect();
                let p = LaurentPolynomial::from_modes(order, annulus, modes).expect("finite");
                let s = p.sup_bound();
                p.scale(Complex::new(1.0 / s, 0.0))
            })
            .collect()
    };
    let plus = side(geo.plus_annulus());
    let minus = side(geo.minus_annulus());
    CocycleRhs::new(plus, minus).expect("matching orders")
}

fn diophantine(input: &Value, report: &mut Report) -> Result<(), Failure> {
    let job: DiophantineInput = payload(input)?;
    report.notes.push(job.angle.note().into());
    if job.n_max > MAX_VALIDATION {
        return Err(input_error(format!("n_max {} exceeds {MAX_VALIDATION}", job.n_max)));
    }
    let angle = job.angle.angle()?;
    let rep = check_certificate(angle.theta(), job.a, job.alpha, job.n_max);
    let cf_cert = match job.depth {
        Some(d) => serde_json::to_value(certificate_from_cf(&angle, d)?).expect("serializable"),
        None => Value::Null,
    };
    report.checks.push(Check {
        name: "certificate_margin".into(),
        value: rep.worst_margin,
        tol: job.a,
        pass: rep.ok,
    });
    report.result = json!({
        "theta": angle.theta(),
        "cf": angle.cf().iter().take(16).collect::<Vec<_>>(),
        "report": rep,
        "cf_certificate": cf_cert,
        "small_divisors": (1..=10u64).map(|n| angle.small_divisor(n)).collect::<Vec<_>>(),
    });
    if !rep.ok {
        return Err(Failure(
            Status::MathFailure,
            ErrorInfo {
                kind: "certificate_violated".into(),
                message: format!("n^alpha dist(n theta, Z) < A at n = {}", rep.worst_n),
                n: Some(rep.worst_n as usize),
                divisor: Some(angle.small_divisor(rep.worst_n)),
                line: None,
                column: None,
            },
        ));
    }
    Ok(())
}

fn ninepoints(input: &Value, report: &mut Report) -> Result<(), Failure> {
    let job: NinePointsInput = payload(input)?;
    match job {
        NinePointsInput::Product {
            n_components,
            params,
            degree_split,
        } => {
            let cfg = NinePointConfig::new(n_components, params.into_iter().map(from_pair).collect(), degree_split)?;
            let r = nine_point_t(&cfg)?;
            if r.torsion_order.is_some() {
                report.notes.push("t is torsion".into());
            }
            report.result = json!({
                "t": complex(r.t),
                "t_inverse": complex(r.t_inverse),
                "modulus": r.modulus,
                "on_unit_circle": r.on_unit_circle,
                "theta": r.theta,
                "torsion_order": r.torsion_order,
                "cf_prefix": r.cf_prefix,
            });
        }
        NinePointsInput::Complete { target, eight } => {
            let target = from_pair(target);
            let eight: Vec<Complex> = eight.into_iter().map(from_pair).collect();
            let ninth = solve_ninth_point(target, &eight)?;
            let mut all = eight.clone();
            all.push(ninth);
            let cfg = NinePointConfig::new(1, all, vec![9])?;
            let r = nine_point_t(&cfg)?;
            let err = (r.t - target).norm() / target.norm();
            report.checks.push(Check::at_most("completion_relative_error", err, 1e-12));
            if !r.on_unit_circle {
                report.notes.push("t is off the unit circle".into());
            }
            report.result = json!({
                "ninth": complex(ninth),
                "t": complex(r.t),
                "on_unit_circle": r.on_unit_circle,
            });
        }
    }
    Ok(())
}

fn homology(input: &Value, report: &mut Report) -> Result<(), Failure> {
    let job: HomologyInput = payload(input)?;
    report.result = match (job.n, job.monodromy) {
        (Some(n), None) => serde_json::to_value(h1_mapping_torus(n)?).expect("serializable"),
        (None, Some(m)) => json!({"monodromy": m, "h1": h1_of_monodromy(m)?}),
        _ => return Err(input_error("give exactly one of n and monodromy")),
    };
    Ok(())
}

fn density(input: &Value, report: &mut Report) -> Result<(), Failure> {
    let job: DensityInput = payload(input)?;
    report.notes.push(job.t.note().into());
    let t = job.t.constant()?;
    let d = orbit_density(t.t(), job.eps, job.max_iter)?;
    if d.k.is_none() {
        report.notes.push("no eps-net within max_iter".into());
    }
    report.result = serde_json::to_value(&d).expect("serializable");
    Ok(())
}

fn twoform(input: &Value, opts: Options, report: &mut Report) -> Result<(), Failure> {
    let job: TwoFormInput = payload(input)?;
    let order = resolve_order(opts, degree(&job.g).max(1));
    report.order = Some(order);
    let data = NodeGluingData::new(job.t.constant()?, series_from(&job.g, order).map_err(input_error)?)?;
    let f = two_form_factor(&data)?;
    let deviation = f.max_abs_diff(&TruncatedSeries2::one(order));
    report.result = json!({
        "factor": series_to(&f),
        "deviation": deviation,
        "preserved": deviation == 0.0,
    });
    Ok(())
}

