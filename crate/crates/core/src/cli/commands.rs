use std::fs;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::setup::{OpKind, Series, Setup};
use super::{ClassifyArgs, Format, SeriesArgs, Suite, SweepArgs, VerifyArgs, WeightsArgs, EXIT_FAIL, EXIT_PASS};
use crate::error::{Error, Result};
use crate::homogeneity::{
    expected_kappa, homogeneity_defect, intertwining_defect, kappa_flow_derivative, reducible_lambda_check,
    DefectReport,
};
use crate::inductive::{classify_a_minus1, lemma_identity, normalizer_defect, AminusOneBranch, LemmaVariant};
use crate::mobius::{path_to_mobius, GroupPath};
use crate::numkernel::{c64, interior_norm, ComplexScalar, TruncationWindow};
use crate::repn::LieElement;
use crate::shifts::{weight_sequence, ShiftBranch};

/// Calibrated acceptance levels for the finite-window homogeneity and
/// normalizer defects at the default window (N = 64, padding 16).
pub const CLI_HOMOGENEITY_TOL: f64 = 1e-3;
pub const CLI_NORMALIZER_TOL: f64 = 1e-3;
pub const UNITARITY_TOL: f64 = 1e-7;
pub const KAPPA_TOL: f64 = 1e-6;
pub const ROUTE_GAP_TOL: f64 = 1e-7;
pub const LEMMA_TOL: f64 = 1e-10;

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("output error: {e}"))
}

#[derive(Serialize)]
struct WeightRow {
    n: i64,
    re: f64,
    im: f64,
    abs: f64,
}

pub fn cmd_weights(a: &WeightsArgs, out: &mut dyn Write) -> Result<i32> {
    let setup = Setup::from_args(&a.series)?;
    let branch: ShiftBranch = a.branch.parse()?;
    let mut rows = Vec::new();
    for n in a.n0..=a.n1 {
        let w = weight_sequence(setup.tag, &setup.params, branch, n)?;
        rows.push(WeightRow { n, re: w.re, im: w.im, abs: w.norm() });
    }
    match a.format {
        Format::Csv => {
            let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            wr.write_record(["n", "re", "im", "abs"]).map_err(csv_err)?;
            for r in &rows {
                wr.serialize(r).map_err(csv_err)?;
            }
            wr.flush().map_err(io_err)?;
        }
        Format::Json => {
            for r in &rows {
                writeln!(out, "{}", serde_json::to_string(r).expect("plain row")).map_err(io_err)?;
            }
        }
    }
    Ok(EXIT_PASS)
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}

/// Everything one suite needs about the operator under test.
struct Subject<'a> {
    setup: &'a Setup,
    op: OpKind,
    scale: f64,
    window: TruncationWindow,
    path: GroupPath,
}

impl Subject<'_> {
    fn echo(&self, rep: DefectReport, suite: Suite) -> DefectReport {
        let mut rep = rep.with_window(&self.window);
        for (k, v) in self.setup.echo() {
            rep = rep.with_context(k, v);
        }
        rep.with_context("suite", suite)
            .with_context("op", self.op)
            .with_context("scale", self.scale)
            .with_context("path", self.path.to_string())
    }
}

fn run_suite(suite: Suite, s: &Subject, step: f64, tol: Option<f64>) -> Result<Vec<DefectReport>> {
    let w = &s.window;
    let t = s.setup.operator(s.op, w)?.scale(c64(s.scale, 0.0));
    let model = &s.setup.model;
    let mut reports = match suite {
        Suite::Homogeneity => {
            let r = model.rep_matrix(&s.path, w)?;
            let phi = path_to_mobius(&s.path)?;
            vec![
                homogeneity_defect(&t, &r, &phi, w)?.with_tolerance(CLI_HOMOGENEITY_TOL),
                intertwining_defect(&t, &r, &phi, w)?,
            ]
        }
        Suite::Unitarity => {
            vec![DefectReport::new("unitarity", model.unitarity_defect(&s.path, w)?, UNITARITY_TOL)]
        }
        Suite::Normalizer => {
            let r = model.rep_matrix(&s.path, w)?;
            vec![normalizer_defect(&t, &r, &model.gram(w)?, w)?.with_tolerance(CLI_NORMALIZER_TOL)]
        }
        Suite::Infinitesimal => {
            let mut v = Vec::new();
            for x in [LieElement::L, LieElement::M, LieElement::E, LieElement::F] {
                let k = kappa_flow_derivative(&t, x, model, w, step)?;
                let want = expected_kappa(&t, x).expect("real or complex flow generator");
                let value = interior_norm(&(&k.finite_difference - &want), w)?;
                v.push(DefectReport::new(format!("kappa-{x}"), value, KAPPA_TOL).with_context("step", step));
                v.push(DefectReport::new(format!("route-gap-{x}"), k.route_gap, ROUTE_GAP_TOL).with_context("step", step));
            }
            v
        }
        Suite::ReducibleLambda | Suite::Lemmas => {
            return Err(Error::InvalidArgument(format!("suite {suite:?} does not take an operator")))
        }
    };
    if let Some(tol) = tol {
        reports = reports.into_iter().map(|r| r.with_tolerance(tol)).collect();
    }
    Ok(reports.into_iter().map(|r| s.echo(r, suite)).collect())
}

fn lemma_reports(samples: usize, seed: u64, tol: f64) -> Result<Vec<DefectReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * samples);
    for i in 0..samples {
        let lambda: f64 = rng.gen_range(-1.0..3.0);
        let mu = ComplexScalar::new(rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..2.0));
        let mut m: i64 = rng.gen_range(-10..10);
        if m >= 0 {
            m += 1;
        }
        let n: i64 = rng.gen_range(-64..=64);
        for (name, which) in [("lemma32", LemmaVariant::Lemma32), ("lemma33", LemmaVariant::Lemma33)] {
            let v = lemma_identity(lambda, mu, m, n, which)?;
            let value = (v - (2 * m * m) as f64).norm();
            out.push(
                DefectReport::new(name, value, tol)
                    .with_context("lambda", lambda)
                    .with_context("mu_re", mu.re)
                    .with_context("mu_im", mu.im)
                    .with_context("m", m)
                    .with_context("n", n)
                    .with_context("sample", i)
                    .with_context("seed", seed),
            );
        }
    }
    Ok(out)
}

fn emit_reports(reports: &[DefectReport], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            for r in reports {
                writeln!(out, "{}", serde_json::to_string(r).expect("report serializes")).map_err(io_err)?;
            }
        }
        Format::Csv => {
            let mut wr = csv::WriterBuilder::new().from_writer(out);
            wr.write_record(["name", "value", "tolerance", "pass", "context"]).map_err(csv_err)?;
            for r in reports {
                let ctx = serde_json::to_string(&r.context).expect("context serializes");
                wr.write_record([
                    r.name.clone(),
                    r.value.to_string(),
                    r.tolerance.to_string(),
                    r.pass.to_string(),
                    ctx,
                ])
                .map_err(csv_err)?;
            }
            wr.flush().map_err(io_err)?;
        }
    }
    Ok(())
}

pub fn cmd_verify(suite: Suite, a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let reports = match suite {
        Suite::Lemmas => lemma_reports(a.samples, a.seed, a.tol.unwrap_or(LEMMA_TOL))?,
        Suite::ReducibleLambda => {
            let w = TruncationWindow::bilateral(a.window.n, a.window.pad)?;
            let mut rep = reducible_lambda_check(a.series.lambda, c64(a.series.r, a.series.r_im), &w)?
                .with_context("suite", suite);
            if let Some(tol) = a.tol {
                rep = rep.with_tolerance(tol);
            }
            vec![rep]
        }
        _ => {
            let setup = Setup::from_args(&a.series)?;
            let subject = Subject {
                op: a.op.unwrap_or_else(|| setup.default_op()),
                window: setup.window(a.window.n, a.window.pad)?,
                path: a.path.parse()?,
                scale: a.scale,
                setup: &setup,
            };
            run_suite(suite, &subject, a.step, a.tol)?
        }
    };
    emit_reports(&reports, a.format, out)?;
    Ok(if reports.iter().all(|r| r.pass) { EXIT_PASS } else { EXIT_FAIL })
}

fn read_coefficients(path: &std::path::Path) -> Result<Vec<(i64, ComplexScalar)>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let bad = || Error::InvalidArgument(format!("line {}: expected `n, re[, im]`", line + 1));
        let first = rec.get(0).ok_or_else(bad)?;
        let n = match first.parse::<i64>() {
            Ok(n) => n,
            Err(_) if line == 0 => continue,
            Err(_) => return Err(bad()),
        };
        let re: f64 = rec.get(1).ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let im: f64 = match rec.get(2) {
            Some(s) if !s.is_empty() => s.parse().map_err(|_| bad())?,
            _ => 0.0,
        };
        if rec.len() > 3 {
            return Err(bad());
        }
        out.push((n, c64(re, im)));
    }
    Ok(out)
}

pub fn cmd_classify(a: &ClassifyArgs, out: &mut dyn Write) -> Result<i32> {
    let setup = Setup::from_args(&a.series)?;
    let coeffs = read_coefficients(&a.file)?;
    let fit = classify_a_minus1(&coeffs, &setup.params)?;
    let mut obj = json!({ "fit": fit, "count": coeffs.len(), "file": a.file.display().to_string() });
    for (k, v) in setup.echo() {
        obj[k] = v;
    }
    writeln!(out, "{obj}").map_err(io_err)?;
    Ok(if fit.branch == AminusOneBranch::Neither { EXIT_FAIL } else { EXIT_PASS })
}

/// Parse `a,b,c` or `start:stop:step`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let bad = || Error::InvalidArgument(format!("malformed grid '{s}'"));
    if s.contains(':') {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else { return Err(bad()) };
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12).collect())
    } else {
        s.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect()
    }
}

fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    use clap::ValueEnum;
    s.split(',')
        .map(|p| {
            let suite = Suite::from_str(p.trim(), true).map_err(Error::InvalidArgument)?;
            match suite {
                Suite::Lemmas | Suite::ReducibleLambda => {
                    Err(Error::InvalidArgument(format!("suite '{}' cannot be swept", p.trim())))
                }
                ok => Ok(ok),
            }
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct SweepRow {
    series: String,
    lambda: f64,
    mu_re: f64,
    mu_im: f64,
    #[serde(rename = "N")]
    n: usize,
    padding: usize,
    path: String,
    op: String,
    max_defect: f64,
    worst: String,
    pass: bool,
    error: String,
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let lambdas = parse_grid(&a.lambdas)?;
    let suites = parse_suites(&a.suites)?;
    let path: GroupPath = a.path.parse()?;
    let mut cells: Vec<(f64, ComplexScalar)> = Vec::new();
    match a.series {
        Series::Principal => {
            let ims = parse_grid(&a.mu_ims)?;
            for &l in &lambdas {
                for &im in &ims {
                    cells.push((l, c64((1.0 - l) / 2.0, im)));
                }
            }
        }
        Series::Complementary => {
            for &l in &lambdas {
                match &a.mus {
                    Some(list) => cells.extend(parse_grid(list)?.into_iter().map(|m| (l, c64(m, 0.0)))),
                    None => {
                        let (lo, hi) = (0f64.max(-l), 1f64.min(1.0 - l));
                        cells.push((l, c64((lo + hi) / 2.0, 0.0)));
                    }
                }
            }
        }
        Series::Holo | Series::Antiholo => cells.extend(lambdas.iter().map(|&l| (l, c64(0.0, 0.0)))),
        Series::Reducible => {
            return Err(Error::InvalidArgument("sweeps cover the irreducible series only".into()));
        }
    }

    let rows: Vec<SweepRow> = cells
        .par_iter()
        .map(|&(lambda, mu)| sweep_cell(a, &suites, &path, lambda, mu))
        .collect();

    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    wr.write_record([
        "series", "lambda", "mu_re", "mu_im", "N", "padding", "path", "op", "max_defect", "worst", "pass", "error",
    ])
    .map_err(csv_err)?;
    for r in &rows {
        wr.serialize(r).map_err(csv_err)?;
    }
    wr.flush().map_err(io_err)?;
    Ok(if rows.iter().all(|r| r.pass) { EXIT_PASS } else { EXIT_FAIL })
}

fn sweep_cell(a: &SweepArgs, suites: &[Suite], path: &GroupPath, lambda: f64, mu: ComplexScalar) -> SweepRow {
    let mut row = SweepRow {
        series: format!("{:?}", a.series).to_lowercase(),
        lambda,
        mu_re: mu.re,
        mu_im: mu.im,
        n: a.window.n,
        padding: a.window.pad,
        path: path.to_string(),
        op: String::new(),
        max_defect: 0.0,
        worst: String::new(),
        pass: false,
        error: String::new(),
    };
    let result = (|| -> Result<Vec<DefectReport>> {
        let setup = match a.series {
            Series::Principal | Series::Complementary => Setup::bilateral(lambda, mu)?,
            other => Setup::from_args(&SeriesArgs {
                series: other,
                lambda,
                mu: None,
                mu_im: 0.0,
                r: 0.0,
                r_im: 0.0,
            })?,
        };
        row.series = format!("{:?}", setup.series).to_lowercase();
        let op = a.op.unwrap_or_else(|| setup.default_op());
        row.op = serde_json::to_value(op).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let subject = Subject {
            window: setup.window(a.window.n, a.window.pad)?,
            path: path.clone(),
            scale: 1.0,
            op,
            setup: &setup,
        };
        let mut all = Vec::new();
        for &s in suites {
            all.extend(run_suite(s, &subject, crate::homogeneity::DEFAULT_FD_STEP, None)?);
        }
        Ok(all)
    })();
    match result {
        Ok(reports) => {
            row.pass = reports.iter().all(|r| r.pass);
            if let Some(worst) = reports.iter().max_by(|x, y| x.value.total_cmp(&y.value)) {
                row.max_defect = worst.value;
                row.worst = worst.name.clone();
            }
        }
        Err(e) => row.error = e.to_string(),
    }
    row
}
