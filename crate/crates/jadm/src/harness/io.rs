//! On-disk formats: problem and point files (JSON with [re, im] entry
//! pairs), the per-iteration trace (CSV) and the run report (JSON).

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cost::{Dagger, JadmProblem, JointPoint};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::manifold::{SlPoint, StiefelPoint};
use crate::trace::{IterationTrace, RunStatus};

type MatrixEntries = Vec<Vec<[f64; 2]>>;

fn mat_to_entries(m: &CMat) -> MatrixEntries {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn entries_to_mat(rows: &[Vec<[f64; 2]>]) -> Result<CMat> {
    let data: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    CMat::from_rows(&data)
}

/// Problem file: row-major matrices with one [re, im] pair per entry.
#[derive(Serialize, Deserialize)]
struct ProblemFile {
    n: usize,
    m: usize,
    dagger: Dagger,
    weights: Vec<f64>,
    matrices: Vec<MatrixEntries>,
}

pub fn write_problem(path: &Path, problem: &JadmProblem) -> Result<()> {
    let file = ProblemFile {
        n: problem.n(),
        m: problem.m(),
        dagger: problem.dagger(),
        weights: problem.weights().to_vec(),
        matrices: problem.matrices().iter().map(mat_to_entries).collect(),
    };
    fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

/// Reads a problem, detecting the structured flag from the matrices
/// themselves (Hermitian or complex-symmetric within 1e−10).
pub fn read_problem(path: &Path) -> Result<JadmProblem> {
    let file: ProblemFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    let matrices: Result<Vec<CMat>> = file.matrices.iter().map(|m| entries_to_mat(m)).collect();
    let matrices = matrices?;
    let structured = matrices
        .iter()
        .all(|a| file.dagger.structure_defect(a) <= 1e-10 * (1.0 + a.norm()));
    JadmProblem::new(file.n, file.m, file.dagger, structured, matrices, file.weights)
}

#[derive(Serialize, Deserialize)]
struct PointFile {
    u: MatrixEntries,
    x: MatrixEntries,
}

pub fn write_point(path: &Path, point: &JointPoint) -> Result<()> {
    let file = PointFile {
        u: mat_to_entries(point.u.mat()),
        x: mat_to_entries(point.x.mat()),
    };
    fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

pub fn read_point(path: &Path) -> Result<JointPoint> {
    let file: PointFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    JointPoint::new(
        StiefelPoint::new(entries_to_mat(&file.u)?)?,
        SlPoint::new(entries_to_mat(&file.x)?)?,
    )
}

/// Renders the trace in the fixed CSV schema. Pair indices are written
/// one-based; block-1 rows leave the rotation columns empty.
pub fn trace_csv_string(trace: &[IterationTrace]) -> String {
    let mut out = String::from(
        "iter,block,i,j,kind,f,grad_f1,grad_f2,grad_f,step_size,decrease,norm_U,norm_X,cond_X\n",
    );
    for row in trace {
        let (i, j) = match row.pair {
            Some((i, j)) => ((i + 1).to_string(), (j + 1).to_string()),
            None => (String::new(), String::new()),
        };
        let kind = row.kind.map(|k| k.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.iter,
            row.block,
            i,
            j,
            kind,
            row.cost,
            row.grad_f1,
            row.grad_f2,
            row.grad_f,
            row.step_size,
            row.decrease,
            row.norm_u,
            row.norm_x,
            row.cond_x,
        ));
    }
    out
}

pub fn write_trace_csv(path: &Path, trace: &[IterationTrace]) -> Result<()> {
    fs::write(path, trace_csv_string(trace))?;
    Ok(())
}

/// Full run report.
#[derive(Serialize)]
pub struct RunReport {
    pub config: serde_json::Value,
    pub status: RunStatus,
    pub iterations: usize,
    pub initial_cost: f64,
    pub final_cost: f64,
    pub final_grad_f1: f64,
    pub final_grad_f2: f64,
    pub final_grad: f64,
    pub grad_tol: f64,
    pub wall_time_seconds: f64,
    pub trace: Vec<IterationTrace>,
}

impl RunReport {
    pub fn from_run(run: &crate::trace::SolveRun, config: serde_json::Value) -> Self {
        RunReport {
            config,
            status: run.status,
            iterations: run.iterations(),
            initial_cost: run.initial_cost,
            final_cost: run.final_cost,
            final_grad_f1: run.final_grad_f1,
            final_grad_f2: run.final_grad_f2,
            final_grad: run.final_grad,
            grad_tol: run.grad_tol_used,
            wall_time_seconds: run.wall_time_seconds,
            trace: run.trace.clone(),
        }
    }
}

pub fn write_report(path: &Path, report: &RunReport) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(report)?)?;
    Ok(())
}

/// Parses a `key = value` configuration file (one pair per line, `#`
/// comments allowed). Used for the flags-over-file-over-defaults
/// precedence in the command-line interface.
pub fn parse_config_file(text: &str) -> Result<std::collections::BTreeMap<String, String>> {
    let mut map = std::collections::BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse(format!(
                "config line {}: expected key = value, got {raw:?}",
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}
