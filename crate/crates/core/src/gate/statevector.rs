use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Gate, GateError, GateList};
use crate::counts::Counts;
use crate::exec::Execution;

/// Dense simulation limit.
pub const MAX_QUBITS: usize = 24;

const NORM_TOLERANCE: f64 = 1e-8;

/// Dense amplitude vector; bit `i` of the basis index is qubit `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
    exec: Execution,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self, GateError> {
        if n > MAX_QUBITS {
            return Err(GateError::Capacity { n, max: MAX_QUBITS });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps, exec: Execution::default() })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(amps.len().is_power_of_two(), "amplitude count must be a power of two");
        let n = amps.len().trailing_zeros() as usize;
        Self { n, amps, exec: Execution::default() }
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
    }

    fn single(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        self.exec.for_each_pair(&mut self.amps, 1 << q, |_, x, y| {
            let (a, b) = (*x, *y);
            *x = m[0][0] * a + m[0][1] * b;
            *y = m[1][0] * a + m[1][1] * b;
        });
    }

    fn diagonal(&mut self, phase: impl Fn(usize) -> Option<Complex64> + Sync + Send) {
        self.exec.for_each_mut_large(&mut self.amps, |i, a| {
            if let Some(p) = phase(i) {
                *a *= p;
            }
        });
    }

    /// Multiplies amplitude `i` by `phase(i)`.
    pub(crate) fn apply_diagonal(&mut self, phase: impl Fn(usize) -> Complex64 + Sync + Send) {
        self.exec.for_each_mut_large(&mut self.amps, |i, a| *a *= phase(i));
    }

    fn cx(&mut self, control: usize, target: usize) {
        let cmask = 1 << control;
        self.exec.for_each_pair(&mut self.amps, 1 << target, |i, x, y| {
            if i & cmask != 0 {
                std::mem::swap(x, y);
            }
        });
    }

    pub fn apply(&mut self, gate: &Gate) {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match *gate {
            Gate::H(q) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.single(q, [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]);
            }
            Gate::X(q) => self.exec.for_each_pair(&mut self.amps, 1 << q, |_, x, y| std::mem::swap(x, y)),
            Gate::Sx(q) => self.single(q, [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]]),
            Gate::Rx(q, t) => {
                let (s, co) = (t / 2.0).sin_cos();
                self.single(q, [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]);
            }
            Gate::Rz(q, t) => {
                let lo = Complex64::from_polar(1.0, -t / 2.0);
                let hi = Complex64::from_polar(1.0, t / 2.0);
                self.diagonal(move |i| Some(if i >> q & 1 == 0 { lo } else { hi }));
            }
            Gate::Cp(a, b, t) => {
                let p = Complex64::from_polar(1.0, t);
                let mask = (1 << a) | (1 << b);
                self.diagonal(move |i| (i & mask == mask).then_some(p));
            }
            Gate::Rzz(a, b, t) => {
                let same = Complex64::from_polar(1.0, -t / 2.0);
                let diff = Complex64::from_polar(1.0, t / 2.0);
                self.diagonal(move |i| Some(if (i >> a ^ i >> b) & 1 == 0 { same } else { diff }));
            }
            Gate::Cx(ctrl, tgt) => self.cx(ctrl, tgt),
            Gate::Swap(a, b) => {
                self.cx(a, b);
                self.cx(b, a);
                self.cx(a, b);
            }
        }
        debug_assert!((self.norm_sqr() - 1.0).abs() < 1e-10 || self.n > 16);
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) {
        for g in gates {
            self.apply(g);
        }
    }

    /// Runs `gl` from `|0…0⟩` and checks the final norm.
    pub fn run(gl: &GateList, exec: Execution) -> Result<Self, GateError> {
        gl.validate()?;
        let mut sv = Self::zero(gl.n_qubits)?.with_execution(exec);
        sv.apply_all(&gl.gates);
        sv.check_norm()?;
        Ok(sv)
    }

    pub fn check_norm(&self) -> Result<(), GateError> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(GateError::Normalization(norm));
        }
        Ok(())
    }

    /// Draws `shots` Z-basis outcomes of `measure_order`.
    ///
    /// Sampling is inverse-CDF: the cumulative distribution is accumulated
    /// in basis-index order, and each shot draws `u ∈ [0, 1)` from
    /// `ChaCha8Rng::seed_from_u64(seed)` (`rand` 0.8 `gen::<f64>()`), scales
    /// it by the total probability, and selects the first index whose
    /// cumulative value exceeds it.
    pub fn sample(&self, shots: u64, seed: u64, measure_order: &[usize]) -> Counts {
        let mut cumulative = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hits = std::collections::BTreeMap::<usize, u64>::new();
        for _ in 0..shots {
            let u = rng.gen::<f64>() * acc;
            let idx = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
            *hits.entry(idx).or_insert(0) += 1;
        }
        hits.into_iter()
            .map(|(idx, n)| (render_bits(idx, measure_order), n))
            .collect()
    }
}

/// Renders qubits `measure_order[p]` of basis state `idx` as character `p`.
pub(crate) fn render_bits(idx: usize, measure_order: &[usize]) -> String {
    measure_order.iter().map(|&q| if idx >> q & 1 == 1 { '1' } else { '0' }).collect()
}
