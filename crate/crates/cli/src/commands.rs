use std::io::Write;

use mayer_core::dynamics::{census_csv, enumerate_classes, HyperbolicClass};
use mayer_core::format::{csv_complex, fmt17, ser_complex, ser_f64, ser_opt_complex, ser_opt_f64};
use mayer_core::operator::DiscDomain;
use mayer_core::parallel::map_slice;
use mayer_core::spectral::{
    det_finite, det_finite_checked, find_zero, trace_closed_form, trace_closed_form_dd, trace_kernel_resummed,
    trace_matrix, trace_orbit_sum, trace_orbit_sum_completed, DetKind, TraceMethod, TraceReport,
};
use mayer_core::verify::{run_suite, VerifyOptions};
use mayer_core::{ComplexPoint, Error};
use serde::Serialize;

use crate::{Format, Precision, RunCommand, RunConfig, TraceMethodArg};

/// Kernel-route branches integrated one by one before the resummed remainder.
const KERNEL_TERMS: u64 = 4;

pub enum Failure {
    Core(Error),
    Io(std::io::Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

pub fn run(config: &RunConfig) -> Result<(), Failure> {
    let text = match &config.command {
        RunCommand::Trace { grid, methods, n, max_digit, order, n_cap } => {
            trace(config, grid, methods, *n, *max_digit, *order, *n_cap)?
        }
        RunCommand::DetGrid { grid, order } => det_grid(config.format, grid, *order)?,
        RunCommand::FindZeros { starts, kind, order, tol } => find_zeros(config.format, starts, *kind, *order, *tol)?,
        RunCommand::Census { norm_cap, length_cap } => census(config.format, *norm_cap, *length_cap)?,
        RunCommand::Verify { fast, inject_sign_fault, only } => {
            return verify(
                config,
                VerifyOptions { fast: *fast, inject_sign_fault: *inject_sign_fault },
                only.as_deref(),
            );
        }
    };
    emit(config, &text)
}

fn emit(config: &RunConfig, text: &str) -> Result<(), Failure> {
    match &config.output {
        Some(path) => std::fs::write(path, text).map_err(Failure::Io),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(Failure::Io)
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("tables serialize");
    s.push('\n');
    s
}

fn collect<T>(results: Vec<mayer_core::Result<T>>) -> Result<Vec<T>, Failure> {
    results.into_iter().collect::<mayer_core::Result<Vec<T>>>().map_err(Failure::Core)
}

fn one_trace(
    s: ComplexPoint,
    method: TraceMethodArg,
    n: usize,
    max_digit: Option<u32>,
    order: usize,
    n_cap: u64,
    precision: Precision,
) -> mayer_core::Result<TraceReport> {
    let single = |name: &str| {
        if n == 1 {
            Ok(())
        } else {
            Err(Error::Domain(format!("the {name} route gives tr L_s only (n = 1), got n = {n}")))
        }
    };
    match method {
        TraceMethodArg::Closed => {
            single("closed-form")?;
            match precision {
                Precision::Standard => trace_closed_form(s, n_cap),
                Precision::Oracle => trace_closed_form_dd(s, n_cap),
            }
        }
        TraceMethodArg::Kernel => {
            single("kernel")?;
            trace_kernel_resummed(s, KERNEL_TERMS)
        }
        TraceMethodArg::Matrix => trace_matrix(s, n, order, &DiscDomain::default()),
        TraceMethodArg::Orbit => match max_digit {
            Some(d) => trace_orbit_sum(s, n, d),
            None => trace_orbit_sum_completed(s, n, None),
        },
    }
}

#[derive(Serialize)]
struct TraceDelta {
    #[serde(serialize_with = "ser_complex")]
    s: ComplexPoint,
    a: TraceMethod,
    b: TraceMethod,
    #[serde(serialize_with = "ser_f64")]
    delta: f64,
}

#[derive(Serialize)]
struct TraceTable {
    rows: Vec<TraceReport>,
    deltas: Vec<TraceDelta>,
}

fn trace(
    config: &RunConfig,
    grid: &[ComplexPoint],
    methods: &[TraceMethodArg],
    n: usize,
    max_digit: Option<u32>,
    order: usize,
    n_cap: u64,
) -> Result<String, Failure> {
    let jobs: Vec<(ComplexPoint, TraceMethodArg)> =
        grid.iter().flat_map(|&s| methods.iter().map(move |&m| (s, m))).collect();
    let rows = collect(map_slice(&jobs, |&(s, m)| one_trace(s, m, n, max_digit, order, n_cap, config.precision)))?;
    let mut deltas = Vec::new();
    for chunk in rows.chunks(methods.len()) {
        for i in 0..chunk.len() {
            for j in i + 1..chunk.len() {
                deltas.push(TraceDelta {
                    s: chunk[i].s,
                    a: chunk[i].method,
                    b: chunk[j].method,
                    delta: (chunk[i].value - chunk[j].value).norm(),
                });
            }
        }
    }
    Ok(match config.format {
        Format::Json => to_json(&TraceTable { rows, deltas }),
        Format::Csv => {
            let mut out = String::from("s_re,s_im,n,method,value_re,value_im,tail_bound\n");
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{:?},{},{}\n",
                    csv_complex(r.s),
                    r.n,
                    r.method,
                    csv_complex(r.value),
                    fmt17(r.tail_bound)
                ));
            }
            out.push_str("\ns_re,s_im,method_a,method_b,delta\n");
            for d in &deltas {
                out.push_str(&format!("{},{:?},{:?},{}\n", csv_complex(d.s), d.a, d.b, fmt17(d.delta)));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct GridRow {
    #[serde(serialize_with = "ser_complex")]
    s: ComplexPoint,
    /// `Z(s) = det(1 - L_s²)`.
    #[serde(serialize_with = "ser_complex")]
    z: ComplexPoint,
    #[serde(serialize_with = "ser_complex")]
    det_minus: ComplexPoint,
    #[serde(serialize_with = "ser_complex")]
    det_plus: ComplexPoint,
    order: usize,
    /// `|Z_M(s) - Z_{M/2}(s)|`.
    #[serde(serialize_with = "ser_f64")]
    half_order_delta: f64,
}

fn det_grid(format: Format, grid: &[ComplexPoint], order: usize) -> Result<String, Failure> {
    let rows = collect(map_slice(grid, |&s| {
        let z = det_finite_checked(s, DetKind::MinusSquare, order)?;
        Ok(GridRow {
            s,
            z: z.value,
            det_minus: det_finite(s, DetKind::Minus, order)?.value,
            det_plus: det_finite(s, DetKind::Plus, order)?.value,
            order,
            half_order_delta: z.truncation_indicator.unwrap_or(f64::INFINITY),
        })
    }))?;
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from(
                "s_re,s_im,z_re,z_im,det_minus_re,det_minus_im,det_plus_re,det_plus_im,order,half_order_delta\n",
            );
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    csv_complex(r.s),
                    csv_complex(r.z),
                    csv_complex(r.det_minus),
                    csv_complex(r.det_plus),
                    r.order,
                    fmt17(r.half_order_delta)
                ));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct ZeroRow {
    #[serde(serialize_with = "ser_complex")]
    start: ComplexPoint,
    /// `OK`, or `NONCONV` when the search failed; `message` then says why.
    status: &'static str,
    #[serde(serialize_with = "ser_opt_complex")]
    root: Option<ComplexPoint>,
    #[serde(serialize_with = "ser_opt_f64")]
    residual: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    displacement: Option<f64>,
    iterations: Option<usize>,
    kind: DetKind,
    order: usize,
    message: Option<String>,
}

fn find_zeros(
    format: Format,
    starts: &[ComplexPoint],
    kind: DetKind,
    order: usize,
    tol: f64,
) -> Result<String, Failure> {
    let rows: Vec<ZeroRow> = map_slice(starts, |&start| match find_zero(start, kind, order, tol) {
        Ok(r) => ZeroRow {
            start,
            status: "OK",
            root: Some(r.root),
            residual: Some(r.residual),
            displacement: r.displacement,
            iterations: Some(r.iterations),
            kind,
            order,
            message: None,
        },
        Err(e) => ZeroRow {
            start,
            status: "NONCONV",
            root: None,
            residual: None,
            displacement: None,
            iterations: None,
            kind,
            order,
            message: Some(format!("{}: {e}", e.kind())),
        },
    });
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let opt = |x: Option<f64>| x.map(fmt17).unwrap_or_default();
            let mut out = String::from("start_re,start_im,status,root_re,root_im,residual,displacement,iterations\n");
            for r in &rows {
                let root = r.root.map(csv_complex).unwrap_or_else(|| ",".into());
                let its = r.iterations.map(|i| i.to_string()).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    csv_complex(r.start),
                    r.status,
                    root,
                    opt(r.residual),
                    opt(r.displacement),
                    its
                ));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct CensusRow {
    word: String,
    trace: u128,
    #[serde(serialize_with = "ser_f64")]
    norm: f64,
    length_l: usize,
    primitivity_k: usize,
    #[serde(serialize_with = "ser_f64")]
    geodesic_length: f64,
}

fn census(format: Format, norm_cap: f64, length_cap: usize) -> Result<String, Failure> {
    let mut classes: Vec<HyperbolicClass> = enumerate_classes(norm_cap, length_cap)?;
    classes.sort_by(|a, b| a.norm.total_cmp(&b.norm).then_with(|| a.word.digits().cmp(b.word.digits())));
    Ok(match format {
        Format::Csv => census_csv(&classes),
        Format::Json => to_json(
            &classes
                .iter()
                .map(|c| CensusRow {
                    word: c.word.to_string(),
                    trace: c.trace,
                    norm: c.norm,
                    length_l: c.length_l,
                    primitivity_k: c.primitivity_k,
                    geodesic_length: c.geodesic_length,
                })
                .collect::<Vec<_>>(),
        ),
    })
}

fn verify(config: &RunConfig, opts: VerifyOptions, only: Option<&str>) -> Result<(), Failure> {
    let results = run_suite(opts, only);
    let mut out = std::io::stdout().lock();
    for r in &results {
        writeln!(out, "{}", r.line()).map_err(Failure::Io)?;
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    writeln!(out, "{} checks, {} failed", results.len(), failed).map_err(Failure::Io)?;
    drop(out);
    if let Some(path) = &config.output {
        let text = match config.format {
            Format::Json => to_json(&results),
            Format::Csv => {
                let mut t = String::from("name,passed,measured,tolerance\n");
                for r in &results {
                    t.push_str(&format!("{},{},{},{}\n", r.name, r.passed, fmt17(r.measured), fmt17(r.tolerance)));
                }
                t
            }
        };
        std::fs::write(path, text).map_err(Failure::Io)?;
    }
    if failed == 0 && !results.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
