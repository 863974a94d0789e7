//! Ideal state-vector execution of quantum device operations. The state
//! is a dense vector of 2^n complex amplitudes with qubit `i` mapped to
//! bit `i` of the basis index. Measurement samples the Born rule from a
//! caller-supplied generator, or collapses onto a forced outcome when a
//! scripted result overrides the backend.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

pub mod gates;

pub use gates::Mat2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { qubit: u8, num_qubits: u8 },
    #[error("two-qubit operation addressed qubit {0} twice")]
    SameQubit(u8),
    #[error("forced outcome {outcome} on qubit {qubit} has probability {probability:e}")]
    ZeroProbabilityForcedOutcome {
        qubit: u8,
        outcome: u8,
        probability: f64,
    },
}

/// Probability below which a forced measurement outcome is treated as
/// impossible rather than post-selected.
const FORCE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct StateVector {
    num_qubits: u8,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// All qubits in |0>.
    pub fn new(num_qubits: u8) -> Self {
        assert!(num_qubits <= 24, "state vector would not fit in memory");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> u8 {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn check_qubit(&self, qubit: u8) -> Result<(), QuantumError> {
        if qubit >= self.num_qubits {
            return Err(QuantumError::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Applies a 2x2 unitary to one qubit's tensor factor.
    pub fn apply_single(&mut self, qubit: u8, u: &Mat2) -> Result<(), QuantumError> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        for base in 0..self.amps.len() {
            if base & bit != 0 {
                continue;
            }
            let a0 = self.amps[base];
            let a1 = self.amps[base | bit];
            self.amps[base] = u.0[0][0] * a0 + u.0[0][1] * a1;
            self.amps[base | bit] = u.0[1][0] * a0 + u.0[1][1] * a1;
        }
        Ok(())
    }

    /// Controlled-phase gate: negates every |..1..1..> amplitude. The
    /// gate is symmetric in its operands.
    pub fn apply_cz(&mut self, a: u8, b: u8) -> Result<(), QuantumError> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(QuantumError::SameQubit(a));
        }
        let mask = (1usize << a) | (1usize << b);
        for (idx, amp) in self.amps.iter_mut().enumerate() {
            if idx & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    /// Probability of reading 1 on `qubit`.
    pub fn prob_one(&self, qubit: u8) -> Result<f64, QuantumError> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Projective Z measurement. The outcome is 1 when the generator's
    /// next uniform draw falls below P(1); the state collapses and is
    /// renormalized.
    pub fn measure<R: Rng + ?Sized>(&mut self, qubit: u8, rng: &mut R) -> Result<u8, QuantumError> {
        let p_one = self.prob_one(qubit)?;
        let outcome = u8::from(rng.gen::<f64>() < p_one);
        self.collapse(
            qubit,
            outcome,
            if outcome == 1 { p_one } else { 1.0 - p_one },
        );
        Ok(outcome)
    }

    /// Collapses onto a forced outcome (post-selection). Fails if the
    /// outcome has no amplitude.
    pub fn measure_forced(&mut self, qubit: u8, outcome: u8) -> Result<u8, QuantumError> {
        let p_one = self.prob_one(qubit)?;
        let probability = if outcome == 1 { p_one } else { 1.0 - p_one };
        if probability < FORCE_EPSILON {
            return Err(QuantumError::ZeroProbabilityForcedOutcome {
                qubit,
                outcome,
                probability,
            });
        }
        self.collapse(qubit, outcome, probability);
        Ok(outcome)
    }

    fn collapse(&mut self, qubit: u8, outcome: u8, probability: f64) {
        let bit = 1usize << qubit;
        let keep_set = outcome == 1;
        let scale = 1.0 / probability.sqrt();
        for (idx, amp) in self.amps.iter_mut().enumerate() {
            if (idx & bit != 0) == keep_set {
                *amp *= scale;
            } else {
                *amp = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// |<self|other>|^2; global phase drops out.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        let inner: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        inner.norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn x180() -> Mat2 {
        Mat2::rotation([1.0, 0.0, 0.0], std::f64::consts::PI)
    }

    fn x90() -> Mat2 {
        Mat2::rotation([1.0, 0.0, 0.0], std::f64::consts::FRAC_PI_2)
    }

    fn y90() -> Mat2 {
        Mat2::rotation([0.0, 1.0, 0.0], std::f64::consts::FRAC_PI_2)
    }

    fn basis(n: u8, idx: usize) -> StateVector {
        let mut s = StateVector::new(n);
        s.amps[0] = Complex64::new(0.0, 0.0);
        s.amps[idx] = Complex64::new(1.0, 0.0);
        s
    }

    #[test]
    fn x_flips_zero_to_one() {
        let mut s = StateVector::new(1);
        s.apply_single(0, &x180()).unwrap();
        assert!((s.prob_one(0).unwrap() - 1.0).abs() < 1e-12);
        assert!((s.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_quarter_turns_make_a_half_turn() {
        let mut s = StateVector::new(1);
        s.apply_single(0, &x90()).unwrap();
        s.apply_single(0, &x90()).unwrap();
        let mut expected = StateVector::new(1);
        expected.apply_single(0, &x180()).unwrap();
        assert!((s.fidelity(&expected) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn four_quarter_turns_are_identity_up_to_phase() {
        let mut s = StateVector::new(1);
        s.apply_single(0, &y90()).unwrap(); // move off the pole first
        let reference = s.clone();
        for _ in 0..4 {
            s.apply_single(0, &x90()).unwrap();
        }
        assert!((s.fidelity(&reference) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn superposition_measurement_statistics() {
        // Y90 on |0> gives P(1) = 1/2; over 10^4 seeded shots the observed
        // frequency must sit within 2% of the binomial mean.
        let shots = 10_000;
        let mut ones = 0u32;
        for seed in 0..shots {
            let mut rng = ChaCha12Rng::seed_from_u64(seed as u64);
            let mut s = StateVector::new(1);
            s.apply_single(0, &y90()).unwrap();
            ones += s.measure(0, &mut rng).unwrap() as u32;
            assert!((s.norm() - 1.0).abs() < 1e-9);
        }
        let freq = ones as f64 / shots as f64;
        assert!((freq - 0.5).abs() < 0.02, "frequency {freq}");
    }

    #[test]
    fn cz_negates_only_the_all_ones_component() {
        let mut s = basis(2, 0b11);
        s.apply_cz(0, 1).unwrap();
        assert!((s.amps[0b11].re + 1.0).abs() < 1e-12);

        let mut s = basis(2, 0b00);
        s.apply_cz(0, 1).unwrap();
        assert!((s.amps[0b00].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cz_is_symmetric() {
        let mut a = StateVector::new(2);
        a.apply_single(0, &y90()).unwrap();
        a.apply_single(1, &x90()).unwrap();
        let mut b = a.clone();
        a.apply_cz(0, 1).unwrap();
        b.apply_cz(1, 0).unwrap();
        assert!((a.fidelity(&b) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hadamard_sandwich_turns_cz_into_cnot() {
        // (I (x) H) CZ (I (x) H) = CNOT with qubit 0 as control, checked on
        // all four basis states. H is built from the rotation set.
        let h = x180().mul(&y90()); // X after Y90 = H up to global phase
        for control in 0..2usize {
            for target in 0..2usize {
                let mut s = basis(2, (target << 1) | control);
                s.apply_single(1, &h).unwrap();
                s.apply_cz(0, 1).unwrap();
                s.apply_single(1, &h).unwrap();
                let expected_target = target ^ control;
                let expected = basis(2, (expected_target << 1) | control);
                assert!(
                    (s.fidelity(&expected) - 1.0).abs() < 1e-9,
                    "control={control} target={target}"
                );
            }
        }
    }

    #[test]
    fn measuring_a_definite_state_is_deterministic() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let mut s = basis(1, 1);
        assert_eq!(s.measure(0, &mut rng).unwrap(), 1);
        assert_eq!(s.measure(0, &mut rng).unwrap(), 1);
    }

    #[test]
    fn forced_measurement_post_selects() {
        let mut s = StateVector::new(1);
        s.apply_single(0, &x90()).unwrap();
        assert_eq!(s.measure_forced(0, 1).unwrap(), 1);
        assert!((s.prob_one(0).unwrap() - 1.0).abs() < 1e-12);
        assert!((s.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn impossible_forced_outcome_is_an_error() {
        let mut s = StateVector::new(1);
        let err = s.measure_forced(0, 1).unwrap_err();
        assert!(matches!(
            err,
            QuantumError::ZeroProbabilityForcedOutcome {
                qubit: 0,
                outcome: 1,
                ..
            }
        ));
    }

    #[test]
    fn qubit_bounds_are_checked() {
        let mut s = StateVector::new(2);
        assert!(matches!(
            s.apply_single(2, &x180()),
            Err(QuantumError::QubitOutOfRange {
                qubit: 2,
                num_qubits: 2
            })
        ));
        assert!(matches!(s.apply_cz(1, 1), Err(QuantumError::SameQubit(1))));
    }

    #[test]
    fn norm_is_preserved_by_random_circuits() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let mut s = StateVector::new(3);
        for i in 0..200 {
            let q = (i % 3) as u8;
            let axis = if i % 2 == 0 {
                [1.0, 0.0, 0.0]
            } else {
                [0.0, 1.0, 0.0]
            };
            let angle = rng.gen::<f64>() * std::f64::consts::TAU;
            s.apply_single(q, &Mat2::rotation(axis, angle)).unwrap();
            if i % 5 == 0 {
                s.apply_cz(q, (q + 1) % 3).unwrap();
            }
            assert!((s.norm() - 1.0).abs() < 1e-9, "norm drifted at step {i}");
        }
    }
}
