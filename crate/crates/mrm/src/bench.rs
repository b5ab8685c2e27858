//! Parameter sweeps over synthetic instances.

use std::str::FromStr;
use std::time::Instant;

use mrm_core::advice::AnnealConfig;
use mrm_core::gen::{gen_synthetic, GenParams};
use mrm_core::rational::to_pq;
use mrm_core::Rational;
use rayon::prelude::*;

use crate::results::ResultRow;
use crate::tasks::{advise, solve, AdviceRun, Limits, Objective, RunError};

/// One column of a sweep: a solve objective or an advice mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Solve(Objective),
    AdviceAnneal,
    AdviceExact,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Solve(o) => o.name(),
            Task::AdviceAnneal => "advice:anneal",
            Task::AdviceExact => "advice:exact",
        }
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "advice:anneal" => Ok(Task::AdviceAnneal),
            "advice:exact" => Ok(Task::AdviceExact),
            _ => s
                .parse()
                .map(Task::Solve)
                .map_err(|e| format!("{e}, advice:anneal, advice:exact")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchGrid {
    pub preset: String,
    pub ns: Vec<usize>,
    pub ms: Vec<usize>,
    pub ks: Vec<u32>,
    pub budget_scales: Vec<Rational>,
    pub tasks: Vec<Task>,
    pub seed: u64,
    pub replicates: u64,
    /// Schedule for `advice:anneal`; its seed is replaced per replicate.
    pub anneal: AnnealConfig,
    pub limits: Limits,
    pub timing: bool,
}

struct Point {
    n: usize,
    m: usize,
    k: u32,
    scale: Rational,
}

/// Rows for every grid point, replicate and task. Replicate `r` uses seed
/// `seed + r` for both the instance and annealing; replicates run in
/// parallel.
pub fn run_bench(grid: &BenchGrid) -> Result<Vec<ResultRow>, RunError> {
    let base = GenParams::preset(&grid.preset, grid.seed).ok_or_else(|| {
        RunError::Invalid(format!(
            "unknown preset {:?}; expected one of {}",
            grid.preset,
            GenParams::PRESETS.join(", ")
        ))
    })?;
    let or_base = |v: &[usize], d: usize| if v.is_empty() { vec![d] } else { v.to_vec() };
    let ks = if grid.ks.is_empty() {
        vec![base.k]
    } else {
        grid.ks.clone()
    };
    let mut points = Vec::new();
    for n in or_base(&grid.ns, base.n) {
        for m in or_base(&grid.ms, base.m) {
            for &k in &ks {
                for scale in &grid.budget_scales {
                    points.push(Point {
                        n,
                        m,
                        k,
                        scale: scale.clone(),
                    });
                }
            }
        }
    }
    let mut rows = Vec::new();
    for p in &points {
        let batch: Vec<Result<Vec<ResultRow>, RunError>> = (0..grid.replicates)
            .into_par_iter()
            .map(|r| replicate(grid, &base, p, grid.seed.wrapping_add(r)))
            .collect();
        for b in batch {
            rows.extend(b?);
        }
    }
    Ok(rows)
}

fn replicate(
    grid: &BenchGrid,
    base: &GenParams,
    p: &Point,
    seed: u64,
) -> Result<Vec<ResultRow>, RunError> {
    let params = GenParams {
        n: p.n,
        m: p.m,
        k: p.k,
        rho_range: (base.rho_range.0.min(p.k), base.rho_range.1.min(p.k)),
        budget: &base.budget * &p.scale,
        seed,
        ..base.clone()
    };
    let g = gen_synthetic(&params).map_err(|e| RunError::Invalid(e.to_string()))?;
    let instance = format!(
        "{}-n{}-m{}-k{}-b{}",
        grid.preset,
        p.n,
        p.m,
        p.k,
        to_pq(&p.scale)
    );
    let mut rows = Vec::new();
    for &task in &grid.tasks {
        let start = Instant::now();
        let (solver, value) = match task {
            Task::Solve(o) => (
                o.solver(),
                solve(&g, o, grid.limits)
                    .map_err(|e| e.context(&format!("{instance} {}", task.name())))?
                    .value,
            ),
            Task::AdviceAnneal | Task::AdviceExact => {
                let run = if task == Task::AdviceAnneal {
                    AdviceRun::Anneal(Box::new(AnnealConfig {
                        seed,
                        ..grid.anneal.clone()
                    }))
                } else {
                    AdviceRun::Exact
                };
                let plan = advise(&g, &run, grid.limits)
                    .map_err(|e| e.context(&format!("{instance} {}", task.name())))?;
                (run.mode(), plan.satisfied.to_string())
            }
        };
        let runtime_ms = if grid.timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        };
        rows.push(ResultRow {
            instance: instance.clone(),
            objective: task.name().into(),
            solver: solver.into(),
            value,
            runtime_ms,
            seed: Some(seed),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mrm_core::rational::one;

    fn grid() -> BenchGrid {
        BenchGrid {
            preset: "small".into(),
            ns: vec![3, 4],
            ms: vec![],
            ks: vec![2],
            budget_scales: vec![one()],
            tasks: vec![
                Task::Solve(Objective::Mrm),
                Task::Solve(Objective::MaxsaExact),
                Task::AdviceAnneal,
            ],
            seed: 5,
            replicates: 3,
            anneal: AnnealConfig::default(),
            limits: Limits::default(),
            timing: false,
        }
    }

    #[test]
    fn sweep_shape_and_determinism() {
        let rows = run_bench(&grid()).unwrap();
        assert_eq!(rows.len(), 2 * 3 * 3);
        assert_eq!(rows, run_bench(&grid()).unwrap());
        assert!(rows.iter().all(|r| r.runtime_ms == 0));
        assert_eq!(rows[0].instance, "small-n3-m4-k2-b1/1");
        assert_eq!(rows[0].seed, Some(5));
    }

    #[test]
    fn task_names_parse() {
        for t in ["mrm", "maxsa:heuristic", "advice:anneal", "advice:exact"] {
            assert_eq!(t.parse::<Task>().unwrap().name(), t);
        }
        assert!("advice:ilp".parse::<Task>().is_err());
    }
}
