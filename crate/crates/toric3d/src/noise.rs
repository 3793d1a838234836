//! Channel samplers: independent bit flips, independent phase flips, and
//! erasures with a uniform Pauli induced on each erased qubit.
//!
//! Every sampler draws from a caller-supplied seeded stream so that a
//! trial is reproduced exactly by (master seed, point index, trial index)
//! regardless of how trials are scheduled across workers.

use crate::code::PauliFrame;
use crate::gf2::BitVec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum NoiseError {
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
}

/// Set of erased qubits together with the Pauli error the erasure induced
/// on them. The induced frame is always supported inside `erased`.
#[derive(Clone, Debug)]
pub struct ErasureSample {
    pub erased: Vec<usize>,
    pub induced: PauliFrame,
}

impl ErasureSample {
    pub fn erased_bits(&self, n: usize) -> BitVec {
        BitVec::from_indices(n, self.erased.iter().copied())
    }
}

fn check_p(p: f64) -> Result<(), NoiseError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(NoiseError::BadProbability(p));
    }
    Ok(())
}

/// Independent X on each qubit with probability p.
pub fn sample_bitflip(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<PauliFrame, NoiseError> {
    check_p(p)?;
    let mut frame = PauliFrame::zero(n);
    for q in 0..n {
        if rng.gen::<f64>() < p {
            frame.x.set(q, true);
        }
    }
    Ok(frame)
}

/// Independent Z on each qubit with probability p.
pub fn sample_phaseflip(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<PauliFrame, NoiseError> {
    check_p(p)?;
    let mut frame = PauliFrame::zero(n);
    for q in 0..n {
        if rng.gen::<f64>() < p {
            frame.z.set(q, true);
        }
    }
    Ok(frame)
}

/// Erase each qubit independently with probability p and draw the induced
/// Pauli uniformly from {I, X, Y, Z} on each erased qubit (independent
/// fair coins for the X and Z bits).
pub fn sample_erasure(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<ErasureSample, NoiseError> {
    check_p(p)?;
    let mut erased = Vec::new();
    let mut induced = PauliFrame::zero(n);
    for q in 0..n {
        if rng.gen::<f64>() < p {
            erased.push(q);
            if rng.gen::<bool>() {
                induced.x.set(q, true);
            }
            if rng.gen::<bool>() {
                induced.z.set(q, true);
            }
        }
    }
    Ok(ErasureSample { erased, induced })
}

/// Stream for one trial, derived from the master seed and the trial's
/// position in the sweep. SplitMix64 expansion of the three words gives an
/// independent, platform-stable ChaCha seed per trial.
pub fn trial_rng(master_seed: u64, point_index: u64, trial_index: u64) -> ChaCha8Rng {
    let mut state = master_seed
        .wrapping_mul(0x9e3779b97f4a7c15)
        .wrapping_add(point_index.wrapping_mul(0xbf58476d1ce4e5b9))
        .wrapping_add(trial_index.wrapping_mul(0x94d049bb133111eb));
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_mut(8) {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_zero_gives_zero_frame() {
        let mut rng = trial_rng(1, 0, 0);
        let frame = sample_bitflip(100, 0.0, &mut rng).unwrap();
        assert!(frame.x.is_zero() && frame.z.is_zero());
        let frame = sample_phaseflip(100, 0.0, &mut rng).unwrap();
        assert!(frame.x.is_zero() && frame.z.is_zero());
        let sample = sample_erasure(100, 0.0, &mut rng).unwrap();
        assert!(sample.erased.is_empty());
        assert!(sample.induced.x.is_zero() && sample.induced.z.is_zero());
    }

    #[test]
    fn p_one_flips_everything() {
        let mut rng = trial_rng(2, 0, 0);
        let frame = sample_bitflip(50, 1.0, &mut rng).unwrap();
        assert_eq!(frame.x.count_ones(), 50);
        assert!(frame.z.is_zero());
        let frame = sample_phaseflip(50, 1.0, &mut rng).unwrap();
        assert_eq!(frame.z.count_ones(), 50);
        assert!(frame.x.is_zero());
    }

    #[test]
    fn bitflip_mean_weight_within_five_sigma() {
        let n = 100_000;
        let mut rng = trial_rng(3, 0, 0);
        let frame = sample_bitflip(n, 0.5, &mut rng).unwrap();
        let weight = frame.x.count_ones() as f64;
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((weight - n as f64 / 2.0).abs() < 5.0 * sigma);
    }

    #[test]
    fn erasure_pauli_is_uniform() {
        let mut counts = [0usize; 4];
        for trial in 0..4000 {
            let mut rng = trial_rng(4, 0, trial);
            let sample = sample_erasure(4, 1.0, &mut rng).unwrap();
            assert_eq!(sample.erased.len(), 4);
            for &q in &sample.erased {
                let idx = usize::from(sample.induced.x.get(q))
                    | usize::from(sample.induced.z.get(q)) << 1;
                counts[idx] += 1;
            }
        }
        let total: usize = counts.iter().sum();
        for &c in &counts {
            let frac = c as f64 / total as f64;
            assert!((frac - 0.25).abs() < 0.02, "counts {counts:?}");
        }
    }

    #[test]
    fn erasure_support_containment() {
        let mut rng = trial_rng(5, 1, 7);
        let sample = sample_erasure(500, 0.3, &mut rng).unwrap();
        let erased = sample.erased_bits(500);
        for q in sample.induced.x.ones().chain(sample.induced.z.ones()) {
            assert!(erased.get(q));
        }
    }

    #[test]
    fn identical_seeds_identical_samples() {
        let a = sample_erasure(200, 0.2, &mut trial_rng(9, 3, 11)).unwrap();
        let b = sample_erasure(200, 0.2, &mut trial_rng(9, 3, 11)).unwrap();
        assert_eq!(a.erased, b.erased);
        assert_eq!(a.induced, b.induced);
        let c = sample_erasure(200, 0.2, &mut trial_rng(9, 3, 12)).unwrap();
        assert_ne!(a.erased, c.erased);
    }

    #[test]
    fn rejects_bad_probability() {
        let mut rng = trial_rng(0, 0, 0);
        assert!(sample_bitflip(10, -0.1, &mut rng).is_err());
        assert!(sample_phaseflip(10, 1.5, &mut rng).is_err());
        assert!(sample_erasure(10, f64::NAN, &mut rng).is_err());
    }
}
