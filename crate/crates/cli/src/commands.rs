use serde_json::{json, Value};

use mathieu_core::harness::{
    generate_family, haar_check, input_digest, moment_table, parse_input, read_source, run_bridge_check,
    search_nonzero_moment, series_check, verify_mathieu_window, verify_vanishing, worm_enclosure_report,
    ExperimentReport, HarnessError, Input, RandomFamilySpec, SearchOutcome,
};
use mathieu_core::quadrature::{compare_exact_numeric, numeric_moment_admissible, su2_euler_moment, QuadratureSpec};
use mathieu_core::worm::{critical_values, encloses_origin, trace_worms, CriticalSample, Verdict};
use mathieu_core::SU2Function;

use crate::{Command, Common, QuadArgs, WormCommand};

/// How a successful run ended.
pub enum Status {
    Ok,
    Failed(String),
    Inconclusive(String),
}

impl Status {
    pub fn code(&self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failed(_) => 1,
            Status::Inconclusive(_) => 4,
        }
    }

    pub fn note(&self) -> Option<&str> {
        match self {
            Status::Ok => None,
            Status::Failed(s) | Status::Inconclusive(s) => Some(s),
        }
    }
}

type Outcome = Result<(ExperimentReport, Status), HarnessError>;

fn load(arg: &str) -> Result<(Input, Value), HarnessError> {
    let input = parse_input(&read_source(arg)?)?;
    let doc = input.to_json();
    Ok((input, doc))
}

fn spec_from(q: &QuadArgs) -> QuadratureSpec {
    let mut spec = QuadratureSpec { torus_nodes: q.torus_nodes, cube_order: q.cube_order, ..Default::default() };
    if let Some(e) = q.euler_nodes {
        spec.euler_nodes = e;
    }
    if let Some(t) = q.tol {
        spec.tolerance = t;
    }
    spec
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

fn check(ok: bool, failure: &str) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Failed(failure.to_string())
    }
}

pub fn run(command: Command) -> (Common, Outcome) {
    match command {
        Command::Moment { input, pmax, numeric, quad, common } => {
            let out = moment(&input, pmax, numeric.then(|| spec_from(&quad)), &common);
            (common, out)
        }
        Command::Search { input, pmax, common } => {
            let out = search(&input, pmax, &common);
            (common, out)
        }
        Command::VerifyVanishing { input, pmax, common } => {
            let out = vanishing(&input, pmax, &common);
            (common, out)
        }
        Command::VerifyMathieu { input, weight, window, common } => {
            let out = mathieu(&input, &weight, window, &common);
            (common, out)
        }
        Command::BridgeCheck { input, pmax, quad, common } => {
            let out = bridge(&input, pmax, &spec_from(&quad), &common);
            (common, out)
        }
        Command::HaarCheck { nmax, quad, common } => {
            let out = haar(nmax, &spec_from(&quad), &common);
            (common, out)
        }
        Command::Gen { kind, min_terms, max_terms, exponent_bound, height_bound, zvars, xvars, common } => {
            let spec = RandomFamilySpec {
                kind: kind.into(),
                min_terms,
                max_terms,
                exponent_bound,
                height_bound,
                z_arity: zvars,
                x_arity: xvars,
                seed: common.seed,
            };
            let out = gen(&spec, &common);
            (common, out)
        }
        Command::Worm(WormCommand::Trace { input, samples, csv, polyline, common }) => {
            let out = worm_trace(&input, samples, csv, polyline, &common);
            (common, out)
        }
        Command::Worm(WormCommand::Enclose { input, samples, common }) => {
            let out = worm_enclose(&input, samples, &common);
            (common, out)
        }
        Command::Worm(WormCommand::Series { input, pmax, t, x_order, tol, common }) => {
            let out = worm_series(&input, pmax, &t, x_order, tol, &common);
            (common, out)
        }
    }
}

fn moment(arg: &str, pmax: u32, numeric: Option<QuadratureSpec>, common: &Common) -> Outcome {
    let (input, doc) = load(arg)?;
    let mut report = ExperimentReport::new("moment", input_digest(&[&doc]), common.seed);
    report.parameter("pmax", pmax);
    let table = report.timings.time("exact", || moment_table(&input, pmax));
    for (i, m) in table.moments.iter().enumerate() {
        report.exact_values.insert(format!("moment/{}", i + 1), m);
    }
    report.exact_values.insert_real("nonzeroDensity", &table.nonzero_density);
    let mut results = to_value(&table);
    let mut status = Status::Ok;
    if let Some(spec) = numeric {
        report.parameter("quadrature", &spec);
        let mut rows = Vec::new();
        for (i, exact) in table.moments.iter().enumerate() {
            let p = i as u32 + 1;
            let value = report.timings.time("numeric", || match &input {
                Input::Su2(f) => su2_euler_moment(f, p, &spec),
                Input::Admissible(h) => numeric_moment_admissible(h, p, &spec),
            })?;
            let cmp = compare_exact_numeric(exact, value, spec.tolerance);
            if !cmp.pass {
                status = Status::Inconclusive(format!("quadrature residual {:e} at P = {p}", cmp.residual));
            }
            rows.push(json!({ "p": p, "value": value, "residual": cmp.residual, "pass": cmp.pass }));
        }
        results["numeric"] = Value::Array(rows);
    }
    report.results = results;
    Ok((report, status))
}

fn search(arg: &str, pmax: u32, common: &Common) -> Outcome {
    let (input, doc) = load(arg)?;
    let h = input.to_admissible();
    let mut report = ExperimentReport::new("search", input_digest(&[&doc]), common.seed);
    report.parameter("pmax", pmax);
    let result = report.timings.time("search", || search_nonzero_moment(&h, pmax, common.seed))?;
    if let SearchOutcome::Found { p, value } = &result.outcome {
        report.exact_values.insert(format!("moment/{p}"), value);
    }
    report.results = to_value(&result);
    Ok((report, Status::Ok))
}

fn vanishing(arg: &str, pmax: u32, common: &Common) -> Outcome {
    let (input, doc) = load(arg)?;
    let h = input.to_admissible();
    let mut report = ExperimentReport::new("verify-vanishing", input_digest(&[&doc]), common.seed);
    report.parameter("pmax", pmax);
    let cert = report.timings.time("sweep", || verify_vanishing(&h, pmax))?;
    if let Some(m) = &cert.margin {
        report.exact_values.insert_real("margin", m);
    }
    let status = check(cert.all_zero, "a moment outside the hull is nonzero");
    report.results = to_value(&cert);
    Ok((report, status))
}

fn mathieu(h_arg: &str, g_arg: &str, window: u32, common: &Common) -> Outcome {
    let (h_input, h_doc) = load(h_arg)?;
    let (g_input, g_doc) = load(g_arg)?;
    let (h, g) = (h_input.to_admissible(), g_input.to_admissible());
    let mut report = ExperimentReport::new("verify-mathieu", input_digest(&[&h_doc, &g_doc]), common.seed);
    report.parameter("window", window);
    let cert = report.timings.time("window", || verify_mathieu_window(&h, &g, window))?;
    report.exact_values.insert_real("p0", &cert.p0);
    let status = check(cert.all_zero, "a moment in the window is nonzero");
    report.results = to_value(&cert);
    Ok((report, status))
}

fn bridge(arg: &str, pmax: u32, spec: &QuadratureSpec, common: &Common) -> Outcome {
    let (input, doc) = load(arg)?;
    let f = input.as_su2()?;
    let mut report = ExperimentReport::new("bridge-check", input_digest(&[&doc]), common.seed);
    report.parameter("pmax", pmax).parameter("quadrature", spec);
    let result = report.timings.time("pipelines", || run_bridge_check(f, pmax, spec))?;
    for row in &result.rows {
        report.exact_values.insert(format!("moment/{}", row.p), &row.direct);
    }
    let status = if !result.all_exact_agree {
        Status::Failed("exact pipelines disagree".into())
    } else if !result.all_euler_pass {
        Status::Inconclusive("Euler quadrature outside tolerance".into())
    } else {
        Status::Ok
    };
    report.results = to_value(&result);
    Ok((report, status))
}

fn haar(nmax: u32, spec: &QuadratureSpec, common: &Common) -> Outcome {
    let bbs = Input::Su2(SU2Function::b_star().normal_multiply(&SU2Function::b())).to_json();
    let mut report = ExperimentReport::new("haar-check", input_digest(&[&bbs]), common.seed);
    report.parameter("nmax", nmax).parameter("quadrature", spec);
    let result = report.timings.time("check", || haar_check(nmax, spec))?;
    for row in &result.rows {
        report.exact_values.insert(format!("haar/{}", row.n), &row.exact);
    }
    let status = if !result.all_match {
        Status::Failed("exact Haar values differ from 1/(n+1)".into())
    } else if !result.all_euler_pass {
        Status::Inconclusive("Euler quadrature outside tolerance".into())
    } else {
        Status::Ok
    };
    report.results = to_value(&result);
    Ok((report, status))
}

fn gen(spec: &RandomFamilySpec, common: &Common) -> Outcome {
    let spec_doc = to_value(spec);
    let mut report = ExperimentReport::new("gen", input_digest(&[&spec_doc]), common.seed);
    report.parameter("spec", spec);
    let instance = report.timings.time("generate", || generate_family(spec))?;
    report.results = json!({ "instance": instance.to_json(), "provenance": spec_doc });
    Ok((report, Status::Ok))
}

fn worm_trace(
    arg: &str,
    samples: usize,
    csv: Option<std::path::PathBuf>,
    polyline: Option<std::path::PathBuf>,
    common: &Common,
) -> Outcome {
    let (input, doc) = load(arg)?;
    let tri = input.to_trinomial()?;
    let mut report = ExperimentReport::new("worm-trace", input_digest(&[&doc]), common.seed);
    report.parameter("samples", samples);
    let trace = report.timings.time("trace", || trace_worms(&tri, samples))?;
    let max_residual = (0..samples)
        .map(|i| i as f64 / (samples - 1) as f64)
        .filter_map(|x| match critical_values(&tri, x) {
            CriticalSample::Regular(cv) => Some(cv.max_residual(&tri)),
            CriticalSample::Degenerate { .. } => None,
        })
        .fold(0.0f64, f64::max);
    let write = |path: &std::path::Path, text: String| {
        std::fs::write(path, text)
            .map_err(|e| HarnessError::Io { path: path.display().to_string(), message: e.to_string() })
    };
    if let Some(path) = &csv {
        write(path, trace.to_csv())?;
    }
    if let Some(path) = &polyline {
        write(path, serde_json::to_string_pretty(&trace.polyline_json()).expect("json") + "\n")?;
    }
    let status = if trace.branch_continuous {
        Status::Ok
    } else {
        Status::Inconclusive("trace is not branch-continuous".into())
    };
    report.results = json!({
        "maxCriticalResidual": max_residual,
        "branchContinuous": trace.branch_continuous,
        "maxJump": trace.max_jump,
        "jumpThreshold": trace.jump_threshold,
        "degenerateSamples": trace.degenerate_samples,
        "polyline": trace.polyline_json(),
    });
    Ok((report, status))
}

fn worm_enclose(arg: &str, samples: usize, common: &Common) -> Outcome {
    let (input, doc) = load(arg)?;
    let tri = input.to_trinomial()?;
    let mut report = ExperimentReport::new("worm-enclose", input_digest(&[&doc]), common.seed);
    report.parameter("samples", samples);
    let trace = report.timings.time("trace", || trace_worms(&tri, samples))?;
    let enclosure = report.timings.time("flood-fill", || encloses_origin(&trace))?;
    let summary = worm_enclosure_report(enclosure);
    let status = if summary.verdict == Verdict::Inconclusive {
        Status::Inconclusive(summary.statement.clone())
    } else {
        Status::Ok
    };
    eprintln!("{}", summary.statement);
    report.results = to_value(&summary);
    Ok((report, status))
}

fn worm_series(arg: &str, pmax: u32, ts: &[f64], x_order: usize, tol: f64, common: &Common) -> Outcome {
    let (input, doc) = load(arg)?;
    let tri = input.to_trinomial()?;
    let mut report = ExperimentReport::new("worm-series", input_digest(&[&doc]), common.seed);
    report.parameter("pmax", pmax).parameter("t", ts).parameter("xOrder", x_order).parameter("tol", tol);
    let rows = report.timings.time("evaluate", || series_check(&tri, pmax, ts, x_order))?;
    let coeffs = mathieu_core::worm::truncated_generating_function(&tri.to_admissible(), pmax)?;
    for (i, c) in coeffs.iter().enumerate() {
        report.exact_values.insert(format!("coefficient/{}", i + 1), c);
    }
    let pass = rows.iter().all(|r| r.difference <= tol);
    let status = if pass { Status::Ok } else { Status::Inconclusive("series and residue formula differ".into()) };
    report.results = json!({ "rows": rows, "pass": pass });
    Ok((report, status))
}
