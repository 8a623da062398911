use std::f64::consts::PI;

use rand::seq::index;
use rand::Rng;

use super::{
    check_shapes, AlgorithmParams, Iteration, Leaders, NoiseMode, Particle, ParticleState,
};
use crate::bitcore::{clamp_velocity, random_bits, BitProbability, BitString};
use crate::error::{Error, Result};

fn state_error(expected: &str) -> Error {
    Error::invalid("particle state", format!("expected {expected}"))
}

/// Membership mask of a uniformly drawn subset of `size` particles.
fn draw_subset<R: Rng + ?Sized>(swarm_size: usize, size: usize, rng: &mut R) -> Vec<bool> {
    let mut mask = vec![false; swarm_size];
    for i in index::sample(rng, swarm_size, size) {
        mask[i] = true;
    }
    mask
}

fn probability(value: f64, name: &'static str) -> Result<BitProbability> {
    BitProbability::new(value)
        .map_err(|_| Error::invalid(name, format!("{value} is outside [0, 1]")))
}

/// Velocity-free boolean update:
///
/// `x' = b & !x | !b & (a1 & x | !a1 & (!a2 & p | a2 & g))`
///
/// with `P(a1) = alpha(t)`, `P(a2) = alpha2`, `P(b) = beta`. Under
/// [`NoiseMode::ParticleSubset`] `b` is drawn only for a fresh random subset
/// of the swarm and is zero elsewhere.
pub fn step_mbonvpso<R: Rng + ?Sized>(
    params: &AlgorithmParams,
    swarm: &mut [Particle],
    leaders: &[Leaders],
    iteration: Iteration,
    rng: &mut R,
) -> Result<()> {
    check_shapes(swarm, leaders)?;
    let alpha1 = probability(
        params.alpha.value(iteration.index, iteration.total),
        "alpha",
    )?;
    let noisy = match params.noise_mode {
        NoiseMode::ParticleSubset => draw_subset(swarm.len(), params.subset_size(swarm.len()), rng),
        NoiseMode::PerBit => vec![true; swarm.len()],
    };

    for ((particle, lead), noisy) in swarm.iter_mut().zip(leaders).zip(noisy) {
        let x = &particle.position;
        let n = x.len();
        let a1 = random_bits(n, alpha1, rng);
        let a2 = random_bits(n, params.alpha2, rng);
        let social = a2.and(&lead.gbest)?;
        let cognitive = a2.not().and(&lead.pbest)?;
        let guided = a1.and(x)?.or(&a1.not().and(&cognitive.or(&social)?)?)?;
        particle.position = if noisy {
            let b = random_bits(n, params.beta, rng);
            b.and(&x.not())?.or(&b.not().and(&guided)?)?
        } else {
            guided
        };
    }
    Ok(())
}

/// Boolean velocity update with noise followed by `x' = x ^ v'`:
///
/// `v' = b | !b & w & v | r1 & (p ^ x) | r2 & (g ^ x)`, then at most
/// `vmax_bits` velocity bits are kept.
pub fn step_mbopso<R: Rng + ?Sized>(
    params: &AlgorithmParams,
    swarm: &mut [Particle],
    leaders: &[Leaders],
    _iteration: Iteration,
    rng: &mut R,
) -> Result<()> {
    check_shapes(swarm, leaders)?;
    for (particle, lead) in swarm.iter_mut().zip(leaders) {
        let ParticleState::VelocityBits(v) = &particle.state else {
            return Err(state_error("velocity bits"));
        };
        let x = &particle.position;
        let n = x.len();
        let b = random_bits(n, params.beta_noise, rng);
        let w = random_bits(n, params.omega, rng);
        let r1 = random_bits(n, params.rho1, rng);
        let r2 = random_bits(n, params.rho2, rng);

        let inertia = b.not().and(&w)?.and(v)?;
        let cognitive = r1.and(&lead.pbest.xor(x)?)?;
        let social = r2.and(&lead.gbest.xor(x)?)?;
        let velocity = b.or(&inertia)?.or(&cognitive)?.or(&social)?;
        let velocity = clamp_velocity(&velocity, params.vmax_bits.unwrap_or(n), rng);

        particle.position = x.xor(&velocity)?;
        particle.state = ParticleState::VelocityBits(velocity);
    }
    Ok(())
}

/// Real-valued velocity update on bit positions, shared by the sigmoid and
/// V-shaped rules. Returns the clamped velocities.
fn update_real_velocity<R: Rng + ?Sized>(
    params: &AlgorithmParams,
    velocity: &mut [f64],
    x: &BitString,
    lead: &Leaders,
    inertia: f64,
    rng: &mut R,
) {
    let bit = |b: bool| if b { 1.0 } else { 0.0 };
    for (j, v) in velocity.iter_mut().enumerate() {
        let xj = bit(x.get(j));
        let r1: f64 = rng.gen();
        let r2: f64 = rng.gen();
        let updated = inertia * *v
            + params.c1 * r1 * (bit(lead.pbest.get(j)) - xj)
            + params.c2 * r2 * (bit(lead.gbest.get(j)) - xj);
        *v = updated.clamp(-params.vmax_real, params.vmax_real);
    }
}

fn sigmoid(v: f64) -> f64 {
    1.0 / (1.0 + (-v).exp())
}

/// V-shaped transfer `|(2/pi) atan((pi/2) v)|`.
pub fn v_shaped(v: f64) -> f64 {
    (2.0 / PI * (PI / 2.0 * v).atan()).abs()
}

/// Sigmoid binary PSO: each bit is set to 1 with probability `sig(v)`.
pub fn step_mbpso<R: Rng + ?Sized>(
    params: &AlgorithmParams,
    swarm: &mut [Particle],
    leaders: &[Leaders],
    iteration: Iteration,
    rng: &mut R,
) -> Result<()> {
    check_shapes(swarm, leaders)?;
    let inertia = params.inertia.value(iteration.index, iteration.total);
    for (particle, lead) in swarm.iter_mut().zip(leaders) {
        let ParticleState::VelocityReals(velocity) = &mut particle.state else {
            return Err(state_error("real velocities"));
        };
        update_real_velocity(params, velocity, &particle.position, lead, inertia, rng);
        for (j, &v) in velocity.iter().enumerate() {
            let bit = rng.gen::<f64>() < sigmoid(v);
            particle.position.set(j, bit);
        }
    }
    Ok(())
}

/// V-shaped binary PSO: each bit is complemented with probability `T(v)`.
pub fn step_mvpso<R: Rng + ?Sized>(
    params: &AlgorithmParams,
    swarm: &mut [Particle],
    leaders: &[Leaders],
    iteration: Iteration,
    rng: &mut R,
) -> Result<()> {
    check_shapes(swarm, leaders)?;
    let inertia = params.inertia.value(iteration.index, iteration.total);
    for (particle, lead) in swarm.iter_mut().zip(leaders) {
        let ParticleState::VelocityReals(velocity) = &mut particle.state else {
            return Err(state_error("real velocities"));
        };
        update_real_velocity(params, velocity, &particle.position, lead, inertia, rng);
        for (j, &v) in velocity.iter().enumerate() {
            if v_shaped(v) > rng.gen::<f64>() {
                particle.position.flip(j);
            }
        }
    }
    Ok(())
}

/// Sticky binary PSO: bit `j` flips with probability
/// `im (1 - s_j) + ip |p_j - x_j| + ig |g_j - x_j|`. A flipped bit has its
/// stickiness reset to 1; otherwise stickiness decays by
/// `1 / stickiness_steps` down to 0.
pub fn step_msbpso<R: Rng + ?Sized>(
    params: &AlgorithmParams,
    swarm: &mut [Particle],
    leaders: &[Leaders],
    _iteration: Iteration,
    rng: &mut R,
) -> Result<()> {
    check_shapes(swarm, leaders)?;
    let decay = 1.0 / params.stickiness_steps as f64;
    for (particle, lead) in swarm.iter_mut().zip(leaders) {
        let ParticleState::Stickiness(stickiness) = &mut particle.state else {
            return Err(state_error("stickiness"));
        };
        for (j, s) in stickiness.iter_mut().enumerate() {
            let x = particle.position.get(j);
            let mut flip_probability = params.im * (1.0 - *s);
            if lead.pbest.get(j) != x {
                flip_probability += params.ip;
            }
            if lead.gbest.get(j) != x {
                flip_probability += params.ig;
            }
            if rng.gen::<f64>() < flip_probability {
                particle.position.flip(j);
                *s = 1.0;
            } else {
                *s = (*s - decay).max(0.0);
            }
        }
    }
    Ok(())
}

/// Velocity-free binary PSO. Per bit a uniform draw `v` in `(0, 1]` keeps the
/// current bit when `v <= alpha(t)`, copies the personal best when
/// `v <= (1 + alpha) / 2` and the global best otherwise. A fresh random
/// subset of the swarm is instead re-drawn uniformly at random.
pub fn step_mbnvpso<R: Rng + ?Sized>(
    params: &AlgorithmParams,
    swarm: &mut [Particle],
    leaders: &[Leaders],
    iteration: Iteration,
    rng: &mut R,
) -> Result<()> {
    check_shapes(swarm, leaders)?;
    let alpha = params.alpha.value(iteration.index, iteration.total);
    let follow_pbest = (1.0 + alpha) / 2.0;
    let random = draw_subset(swarm.len(), params.subset_size(swarm.len()), rng);
    let half = BitProbability::new(0.5).expect("0.5 is a probability");

    for ((particle, lead), random) in swarm.iter_mut().zip(leaders).zip(random) {
        let n = particle.position.len();
        if random {
            particle.position = random_bits(n, half, rng);
            continue;
        }
        for j in 0..n {
            let v = 1.0 - rng.gen::<f64>();
            if v <= alpha {
                continue;
            }
            let bit = if v <= follow_pbest {
                lead.pbest.get(j)
            } else {
                lead.gbest.get(j)
            };
            particle.position.set(j, bit);
        }
    }
    Ok(())
}
