use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::rng::RngStream;
use crate::error::{Error, Result};

/// Largest register the dense simulator will allocate.
pub const MAX_QUBITS: usize = 20;

/// Tolerance for basis-state and normalization checks.
pub const STATE_TOL: f64 = 1e-10;

/// Gates needed by the protocol. `Rz(α) = diag(1, e^{iα})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    Rz(usize, f64),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
}

impl Gate {
    pub fn inverse(self) -> Self {
        match self {
            Gate::Rz(q, a) => Gate::Rz(q, -a),
            other => other,
        }
    }

    fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::Rz(q, _) => (q, None),
            Gate::Cnot { control, target } => (control, Some(target)),
            Gate::Cz(a, b) => (a, Some(b)),
        }
    }
}

/// Dense state vector. Qubit `k` is bit `k` of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: n_qubits,
                max: MAX_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps and normalizes raw amplitudes.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::Config(format!(
                "amplitude vector length {len} is not a power of two"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: n_qubits,
                max: MAX_QUBITS,
            });
        }
        let mut state = Self { n_qubits, amps };
        let norm = state.norm_sqr().sqrt();
        if norm < 1e-150 {
            return Err(Error::NormCollapse);
        }
        state.scale(1.0 / norm);
        Ok(state)
    }

    /// Tensor product `self ⊗ other`, with `self` on the low qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let n_qubits = self.n_qubits + other.n_qubits;
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: n_qubits,
                max: MAX_QUBITS,
            });
        }
        let mut amps = Vec::with_capacity(1 << n_qubits);
        for hi in &other.amps {
            for lo in &self.amps {
                amps.push(lo * hi);
            }
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest amplitude difference, ignoring global phase.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> f64 {
        let overlap = self.inner(other);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    fn scale(&mut self, factor: f64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        let (a, b) = gate.qubits();
        self.check_qubit(a)?;
        if let Some(b) = b {
            self.check_qubit(b)?;
            if a == b {
                return Err(Error::DuplicateQubit(a));
            }
        }
        match gate {
            Gate::H(q) => {
                let h = FRAC_1_SQRT_2;
                self.for_pairs(q, |x, y| ((x + y) * h, (x - y) * h));
            }
            Gate::X(q) => self.for_pairs(q, |x, y| (y, x)),
            Gate::Z(q) => self.for_pairs(q, |x, y| (x, -y)),
            Gate::Rz(q, angle) => {
                let phase = Complex64::from_polar(1.0, angle);
                self.for_pairs(q, |x, y| (x, y * phase));
            }
            Gate::Cnot { control, target } => {
                let cmask = 1usize << control;
                let tmask = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & cmask != 0 && i & tmask == 0 {
                        self.amps.swap(i, i | tmask);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let mask = (1usize << a) | (1usize << b);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply(*g))
    }

    fn for_pairs<F>(&mut self, q: usize, f: F)
    where
        F: Fn(Complex64, Complex64) -> (Complex64, Complex64),
    {
        let mask = 1usize << q;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let (x, y) = f(self.amps[i], self.amps[i | mask]);
                self.amps[i] = x;
                self.amps[i | mask] = y;
            }
        }
    }

    /// Probability that qubit `q` reads 1.
    pub fn prob_one(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let mask = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Born-rule measurement of qubit `q` in the computational basis,
    /// collapsing the whole state onto the sampled branch.
    pub fn measure(&mut self, q: usize, rng: &mut RngStream) -> Result<u8> {
        let p1 = self.prob_one(q)?;
        let bit = u8::from(rng.bernoulli(p1));
        self.collapse(q, bit)?;
        Ok(bit)
    }

    /// Projects qubit `q` onto `|bit⟩` and renormalizes.
    pub fn collapse(&mut self, q: usize, bit: u8) -> Result<()> {
        self.check_qubit(q)?;
        let mask = 1usize << q;
        let keep = if bit == 0 { 0 } else { mask };
        let mut weight = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == keep {
                weight += a.norm_sqr();
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        if weight < 1e-300 {
            return Err(Error::NormCollapse);
        }
        self.scale(1.0 / weight.sqrt());
        Ok(())
    }

    /// Pure state of qubit `q`, provided it is unentangled with the rest.
    pub fn qubit_state(&self, q: usize) -> Result<[Complex64; 2]> {
        self.check_qubit(q)?;
        let mask = 1usize << q;
        // pick the configuration of the other qubits carrying the most weight
        let rest = (0..self.amps.len())
            .filter(|i| i & mask == 0)
            .max_by(|&i, &j| {
                let wi = self.amps[i].norm_sqr() + self.amps[i | mask].norm_sqr();
                let wj = self.amps[j].norm_sqr() + self.amps[j | mask].norm_sqr();
                wi.total_cmp(&wj)
            })
            .unwrap_or(0);
        let (a0, a1) = (self.amps[rest], self.amps[rest | mask]);
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if norm < 1e-150 {
            return Err(Error::NormCollapse);
        }
        let local = [a0 / norm, a1 / norm];

        // product check: every other configuration must be proportional to `local`
        let total = self.norm_sqr();
        let mut captured = 0.0;
        for i in (0..self.amps.len()).filter(|i| i & mask == 0) {
            let (x, y) = (self.amps[i], self.amps[i | mask]);
            let proj = local[0].conj() * x + local[1].conj() * y;
            captured += proj.norm_sqr();
        }
        if (total - captured).abs() > STATE_TOL {
            return Err(Error::NotDisentangled(q));
        }
        Ok(local)
    }

    /// Sets a measured qubit back to `|0⟩`.
    pub fn reset_qubit(&mut self, q: usize) -> Result<()> {
        let p1 = self.prob_one(q)?;
        if p1 <= STATE_TOL {
            Ok(())
        } else if p1 >= 1.0 - STATE_TOL {
            self.apply(Gate::X(q))
        } else {
            Err(Error::NotDisentangled(q))
        }
    }
}

/// `|0⟩`, `|1⟩`, `|+⟩`, ... as one-qubit states.
pub fn single_qubit(a0: Complex64, a1: Complex64) -> Result<StateVector> {
    StateVector::from_amplitudes(vec![a0, a1])
}

/// Fidelity `|⟨a|b⟩|²` of two one-qubit pure states.
pub fn qubit_fidelity(a: [Complex64; 2], b: [Complex64; 2]) -> f64 {
    (a[0].conj() * b[0] + a[1].conj() * b[1]).norm_sqr()
}
