//! Algorithm selection, a single solve entry point shared by the CLI and
//! the bench runner, and multi-trial execution across worker threads.

use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::bcd::{run_bcd, BcdConfig};
use crate::cost::{JadmProblem, JointPoint};
use crate::error::{Error, Result};
use crate::jacobi::{
    default_epsilon, glq_epsilon_bound_derived, glq_epsilon_bound_stated, glu_epsilon_bound,
    run_jacobi, Family, RotationParams, StopRule,
};
use crate::linesearch::LineSearchParams;
use crate::trace::{RunStatus, SolveRun};

use super::instance::{generate_instance, random_joint_point, InstanceSpec};

/// The six solver entry points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgoKind {
    BcdGlu,
    BcdGlq,
    JacobiGlu,
    JacobiGlq,
    JacobiClu,
    JacobiClq,
}

impl AlgoKind {
    pub fn family(&self) -> Family {
        match self {
            AlgoKind::BcdGlu | AlgoKind::JacobiGlu => Family::Glu,
            AlgoKind::BcdGlq | AlgoKind::JacobiGlq => Family::Glq,
            AlgoKind::JacobiClu => Family::Clu,
            AlgoKind::JacobiClq => Family::Clq,
        }
    }

    pub fn is_bcd(&self) -> bool {
        matches!(self, AlgoKind::BcdGlu | AlgoKind::BcdGlq)
    }

    pub const ALL: [AlgoKind; 6] = [
        AlgoKind::BcdGlu,
        AlgoKind::BcdGlq,
        AlgoKind::JacobiGlu,
        AlgoKind::JacobiGlq,
        AlgoKind::JacobiClu,
        AlgoKind::JacobiClq,
    ];
}

impl std::fmt::Display for AlgoKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AlgoKind::BcdGlu => "bcd-glu",
            AlgoKind::BcdGlq => "bcd-glq",
            AlgoKind::JacobiGlu => "jacobi-glu",
            AlgoKind::JacobiGlq => "jacobi-glq",
            AlgoKind::JacobiClu => "jacobi-clu",
            AlgoKind::JacobiClq => "jacobi-clq",
        };
        write!(f, "{s}")
    }
}

impl FromStr for AlgoKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bcd-glu" => Ok(AlgoKind::BcdGlu),
            "bcd-glq" => Ok(AlgoKind::BcdGlq),
            "jacobi-glu" => Ok(AlgoKind::JacobiGlu),
            "jacobi-glq" => Ok(AlgoKind::JacobiGlq),
            "jacobi-clu" => Ok(AlgoKind::JacobiClu),
            "jacobi-clq" => Ok(AlgoKind::JacobiClq),
            other => Err(Error::Parse(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Optional overrides over the documented defaults.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct SolverSettings {
    pub max_iters: Option<usize>,
    pub grad_tol: Option<f64>,
    pub norm_cap: Option<f64>,
    pub upsilon: Option<f64>,
    pub epsilon: Option<f64>,
    pub sigma_var: Option<f64>,
    pub epsilon_inner: Option<f64>,
    pub t_init: Option<f64>,
}

impl SolverSettings {
    pub fn stop_rule(&self) -> StopRule {
        StopRule {
            grad_tol: self.grad_tol,
            max_iters: self.max_iters.unwrap_or(5000),
            norm_cap: self.norm_cap.unwrap_or(1e6),
        }
    }

    pub fn rotation_params(&self, family: Family) -> RotationParams {
        RotationParams {
            family,
            epsilon: self.epsilon,
            sigma_var: self.sigma_var.unwrap_or(0.1),
            epsilon_inner: self.epsilon_inner.unwrap_or(0.1),
        }
    }

    pub fn line_search(&self) -> LineSearchParams {
        LineSearchParams {
            t_init: self.t_init.unwrap_or(1.0),
            ..Default::default()
        }
    }
}

/// Runs one algorithm from an initial point; returns the run and a JSON
/// echo of the fully resolved configuration.
pub fn run_algo(
    problem: &JadmProblem,
    init: &JointPoint,
    algo: AlgoKind,
    settings: &SolverSettings,
) -> Result<(SolveRun, serde_json::Value)> {
    let family = algo.family();
    let m = problem.m();
    let rotation = settings.rotation_params(family);
    let stop = settings.stop_rule();
    let epsilon_used = rotation.resolve_epsilon(m)?;
    let mut echo = serde_json::json!({
        "algo": algo.to_string(),
        "n": problem.n(),
        "m": m,
        "L": problem.len(),
        "dagger": problem.dagger().to_string(),
        "max_iters": stop.max_iters,
        "grad_tol": stop.grad_tol,
        "norm_cap": stop.norm_cap,
        "epsilon": epsilon_used,
        "sigma_var": rotation.sigma_var,
        "epsilon_inner": rotation.epsilon_inner,
        "epsilon_bound_glu": glu_epsilon_bound(m),
        "epsilon_bound_glq_derived": glq_epsilon_bound_derived(m),
        "epsilon_bound_glq_stated": glq_epsilon_bound_stated(m),
        "epsilon_default": default_epsilon(family, m),
    });
    let run = if algo.is_bcd() {
        let config = BcdConfig {
            upsilon: settings.upsilon.unwrap_or(0.5),
            family,
            stop,
            line_search: settings.line_search(),
            rotation,
        };
        echo["upsilon"] = serde_json::json!(config.upsilon);
        echo["line_search"] = serde_json::to_value(config.line_search)
            .map_err(Error::Json)?;
        run_bcd(problem, init, &config)?
    } else {
        run_jacobi(problem, &init.u, &init.x, &rotation, &stop)?
    };
    echo["grad_tol_resolved"] = serde_json::json!(run.grad_tol_used);
    Ok((run, echo))
}

/// A bench experiment: one instance family, one algorithm, many seeds.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BenchSpec {
    pub instance: InstanceSpec,
    pub algo: AlgoKind,
    #[serde(default)]
    pub settings: SolverSettings,
}

/// Outcome of one trial.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TrialSummary {
    pub seed: u64,
    pub status: RunStatus,
    pub iterations: usize,
    pub initial_cost: f64,
    pub final_cost: f64,
    pub final_grad: f64,
    pub wall_time_seconds: f64,
}

/// Runs `trials` independent seeds (spec.instance.seed + t) across `jobs`
/// worker threads. Each trial owns its instance, solver and trace; results
/// come back ordered by trial index regardless of scheduling.
pub fn run_trials(spec: &BenchSpec, trials: usize, jobs: usize) -> Result<Vec<TrialSummary>> {
    if trials == 0 {
        return Ok(Vec::new());
    }
    let jobs = jobs.max(1).min(trials);
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<TrialSummary>>>> =
        Mutex::new((0..trials).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let t = next.fetch_add(1, Ordering::Relaxed);
                if t >= trials {
                    break;
                }
                let outcome = run_one_trial(spec, t as u64);
                results.lock().unwrap()[t] = Some(outcome);
            });
        }
    });

    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|slot| slot.expect("every trial index visited"))
        .collect()
}

fn run_one_trial(spec: &BenchSpec, offset: u64) -> Result<TrialSummary> {
    let seed = spec.instance.seed + offset;
    let instance = InstanceSpec {
        seed,
        ..spec.instance
    };
    let (problem, _truth) = generate_instance(&instance)?;
    let init = random_joint_point(instance.n, instance.m, seed)?;
    let (run, _echo) = run_algo(&problem, &init, spec.algo, &spec.settings)?;
    Ok(TrialSummary {
        seed,
        status: run.status,
        iterations: run.iterations(),
        initial_cost: run.initial_cost,
        final_cost: run.final_cost,
        final_grad: run.final_grad,
        wall_time_seconds: run.wall_time_seconds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::Dagger;

    #[test]
    fn algo_parsing_roundtrip() {
        for algo in AlgoKind::ALL {
            assert_eq!(algo.to_string().parse::<AlgoKind>().unwrap(), algo);
        }
        assert!("bcd-lu".parse::<AlgoKind>().is_err());
    }

    #[test]
    fn trials_run_in_parallel_and_stay_ordered() {
        let spec = BenchSpec {
            instance: InstanceSpec {
                n: 4,
                m: 3,
                l: 2,
                dagger: Dagger::Hermitian,
                noise: 0.0,
                seed: 100,
                diag_spread: 0.1,
            },
            algo: AlgoKind::JacobiGlu,
            settings: SolverSettings {
                max_iters: Some(300),
                ..Default::default()
            },
        };
        let serial = run_trials(&spec, 4, 1).unwrap();
        let parallel = run_trials(&spec, 4, 3).unwrap();
        assert_eq!(serial.len(), 4);
        for (a, b) in serial.iter().zip(&parallel) {
            assert_eq!(a.seed, b.seed);
            assert_eq!(a.iterations, b.iterations);
            assert_eq!(a.final_cost.to_bits(), b.final_cost.to_bits());
        }
    }
}
