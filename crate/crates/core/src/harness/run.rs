use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algorithms::{evaluate_swarm, step, Algorithm, Iteration, Leaders, Particle};
use crate::archive::{select_pbest, ArchiveEntry, ParetoArchive};
use crate::bitcore::{random_bits, BitProbability};
use crate::error::{Error, Result};
use crate::metrics::{report, HvReference, MetricReport};
use crate::objectives::{true_front, ObjectiveVector, Problem, ProblemSpec};

use super::config::ExperimentConfig;

/// Problem-level data shared by every run on that problem.
#[derive(Debug, Clone)]
pub struct ProblemContext {
    pub spec: ProblemSpec,
    pub hv_reference: HvReference,
    pub reference_front: Vec<ObjectiveVector>,
}

impl ProblemContext {
    pub fn new(problem: Problem, config: &ExperimentConfig) -> Result<Self> {
        Ok(ProblemContext {
            spec: ProblemSpec::new(problem, config.bits_per_variable)?,
            hv_reference: HvReference::for_problem(problem),
            reference_front: true_front(problem, config.reference_points)?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub problem: Problem,
    pub seed: u64,
    pub metrics: MetricReport,
    /// Final global archive, sorted by `f1`.
    pub front: Vec<ArchiveEntry>,
    pub duration: Duration,
}

/// One independent run. The same `(algorithm, problem, config, seed)`
/// always yields the same front and metrics.
pub fn run_single(
    algorithm: Algorithm,
    problem: Problem,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<RunResult> {
    config.validate()?;
    let context = ProblemContext::new(problem, config)?;
    run_with_context(algorithm, &context, config, seed)
}

pub fn run_with_context(
    algorithm: Algorithm,
    context: &ProblemContext,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<RunResult> {
    let started = Instant::now();
    let params = config.params_for(algorithm)?;
    params.validate()?;
    let spec = &context.spec;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = BitProbability::new(0.5)?;

    let mut swarm: Vec<Particle> = (0..config.swarm_size)
        .map(|_| Particle::new(algorithm, random_bits(spec.position_len(), half, &mut rng)))
        .collect();
    let mut global = match config.archive_capacity {
        Some(cap) => ParetoArchive::bounded(cap)?,
        None => ParetoArchive::new(),
    };
    let objectives = evaluate_swarm(&swarm, spec)?;
    absorb(&mut swarm, &mut global, objectives);

    for t in 0..config.iterations {
        let mut leaders = Vec::with_capacity(swarm.len());
        for particle in &swarm {
            let pbest = select_pbest(&particle.personal, &mut rng)?.position.clone();
            let gbest = global.select_leader(&mut rng)?.position.clone();
            leaders.push(Leaders { pbest, gbest });
        }
        step(
            &params,
            &mut swarm,
            &leaders,
            Iteration::new(t, config.iterations),
            &mut rng,
        )?;
        let objectives = evaluate_swarm(&swarm, spec)?;
        absorb(&mut swarm, &mut global, objectives);
    }

    let front = global.into_entries();
    let objectives: Vec<ObjectiveVector> = front.iter().map(|e| e.objectives).collect();
    let metrics = report(&objectives, &context.hv_reference, &context.reference_front)?;
    Ok(RunResult {
        algorithm,
        problem: spec.problem,
        seed,
        metrics,
        front,
        duration: started.elapsed(),
    })
}

fn absorb(swarm: &mut [Particle], global: &mut ParetoArchive, objectives: Vec<ObjectiveVector>) {
    for (particle, objectives) in swarm.iter_mut().zip(objectives) {
        let entry = ArchiveEntry::new(particle.position.clone(), objectives);
        particle.personal.insert(entry.clone());
        global.insert(entry);
    }
}

/// Every `(algorithm, problem, seed)` cell of `config`, ordered by problem,
/// then algorithm, then seed. The order, and every result, is independent
/// of `config.workers`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunResult>> {
    config.validate()?;
    let contexts = config
        .problems
        .iter()
        .map(|&p| ProblemContext::new(p, config))
        .collect::<Result<Vec<_>>>()?;
    let mut jobs = Vec::new();
    for context in &contexts {
        for &algorithm in &config.algorithms {
            for seed in config.seeds() {
                jobs.push((algorithm, context, seed));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::invalid("workers", e.to_string()))?;
    pool.install(|| {
        jobs.par_iter()
            .map(|&(algorithm, context, seed)| run_with_context(algorithm, context, config, seed))
            .collect()
    })
}

/// Index of the run with the median GD in each `(algorithm, problem)` cell
/// of `results`. With an even count the lower median is chosen; ties go to
/// the smaller seed.
pub fn median_gd_runs(results: &[RunResult]) -> Vec<usize> {
    let mut cells: Vec<(Algorithm, Problem)> = Vec::new();
    for r in results {
        if !cells.contains(&(r.algorithm, r.problem)) {
            cells.push((r.algorithm, r.problem));
        }
    }
    cells
        .into_iter()
        .map(|(a, p)| {
            let mut idx: Vec<usize> = (0..results.len())
                .filter(|&i| results[i].algorithm == a && results[i].problem == p)
                .collect();
            idx.sort_by(|&i, &j| {
                results[i]
                    .metrics
                    .gd
                    .total_cmp(&results[j].metrics.gd)
                    .then(results[i].seed.cmp(&results[j].seed))
            });
            idx[(idx.len() - 1) / 2]
        })
        .collect()
}
