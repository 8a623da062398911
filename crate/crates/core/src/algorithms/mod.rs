//! Swarm state and the six position update rules.
//!
//! Each rule advances every particle of a swarm by one iteration given the
//! personal and global leaders chosen for it by the archive module. The
//! rules differ only in the per-particle state they carry:
//!
//! | algorithm  | state                         |
//! |------------|-------------------------------|
//! | `mbpso`    | real velocity per bit         |
//! | `mvpso`    | real velocity per bit         |
//! | `mbopso`   | velocity bit string           |
//! | `msbpso`   | stickiness per bit            |
//! | `mbnvpso`  | none                          |
//! | `mbonvpso` | none                          |

mod params;
mod update;

pub use params::{Algorithm, AlgorithmParams, NoiseMode, ParamOverrides, ScheduleSpec};
pub use update::{
    step_mbnvpso, step_mbonvpso, step_mbopso, step_mbpso, step_msbpso, step_mvpso, v_shaped,
};

use rand::Rng;

use crate::archive::PersonalArchive;
use crate::bitcore::BitString;
use crate::error::{Error, Result};
use crate::objectives::{ObjectiveVector, ProblemSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum ParticleState {
    Stateless,
    VelocityBits(BitString),
    VelocityReals(Vec<f64>),
    Stickiness(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct Particle {
    pub position: BitString,
    pub state: ParticleState,
    pub personal: PersonalArchive,
}

impl Particle {
    /// A particle at `position` with the zero-initialized state its
    /// algorithm needs. Stickiness starts at 1, as if every bit had just
    /// been set.
    pub fn new(algorithm: Algorithm, position: BitString) -> Self {
        let len = position.len();
        let state = match algorithm {
            Algorithm::Mbpso | Algorithm::Mvpso => ParticleState::VelocityReals(vec![0.0; len]),
            Algorithm::Mbopso => ParticleState::VelocityBits(BitString::zeros(len)),
            Algorithm::Msbpso => ParticleState::Stickiness(vec![1.0; len]),
            Algorithm::Mbnvpso | Algorithm::Mbonvpso => ParticleState::Stateless,
        };
        Particle {
            position,
            state,
            personal: PersonalArchive::new(),
        }
    }
}

/// Guidance for one particle in one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Leaders {
    pub pbest: BitString,
    pub gbest: BitString,
}

/// Position of the current iteration within the run, for schedules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Iteration {
    pub index: usize,
    pub total: usize,
}

impl Iteration {
    pub fn new(index: usize, total: usize) -> Self {
        Iteration { index, total }
    }
}

/// Advances `swarm` by one iteration of `params.algorithm`.
pub fn step<R: Rng + ?Sized>(
    params: &AlgorithmParams,
    swarm: &mut [Particle],
    leaders: &[Leaders],
    iteration: Iteration,
    rng: &mut R,
) -> Result<()> {
    match params.algorithm {
        Algorithm::Mbpso => step_mbpso(params, swarm, leaders, iteration, rng),
        Algorithm::Mvpso => step_mvpso(params, swarm, leaders, iteration, rng),
        Algorithm::Mbopso => step_mbopso(params, swarm, leaders, iteration, rng),
        Algorithm::Msbpso => step_msbpso(params, swarm, leaders, iteration, rng),
        Algorithm::Mbnvpso => step_mbnvpso(params, swarm, leaders, iteration, rng),
        Algorithm::Mbonvpso => step_mbonvpso(params, swarm, leaders, iteration, rng),
    }
}

/// Decodes and evaluates every particle's position.
pub fn evaluate_swarm(swarm: &[Particle], problem: &ProblemSpec) -> Result<Vec<ObjectiveVector>> {
    swarm
        .iter()
        .map(|p| problem.evaluate_position(&p.position))
        .collect()
}

fn check_shapes(swarm: &[Particle], leaders: &[Leaders]) -> Result<()> {
    if swarm.len() != leaders.len() {
        return Err(Error::LengthMismatch {
            expected: swarm.len(),
            actual: leaders.len(),
        });
    }
    for (p, l) in swarm.iter().zip(leaders) {
        let n = p.position.len();
        for other in [l.pbest.len(), l.gbest.len()] {
            if other != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: other,
                });
            }
        }
    }
    Ok(())
}
