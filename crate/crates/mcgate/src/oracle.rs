//! Dense statevector / full-unitary simulation used as the ground-truth
//! oracle for every decomposition.
//!
//! Conventions (fixed project-wide): qubit 0 is the least-significant bit of
//! a basis-state index. `full_unitary` streams columns; later gates multiply
//! on the left.
//!
//! Resource guards default to laptop-safe limits (full unitaries at 14
//! qubits, statevectors at 24) and can be overridden with the
//! `MCGATE_MAX_ORACLE_QUBITS` environment variable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate, QubitId};
use crate::error::{Error, Result};
use crate::unitary::{C64, UnitaryMatrix2};

const DEFAULT_FULL_GUARD: usize = 14;
const DEFAULT_STATE_GUARD: usize = 24;

fn env_guard() -> Option<usize> {
    std::env::var("MCGATE_MAX_ORACLE_QUBITS")
        .ok()
        .and_then(|v| v.parse().ok())
}

pub fn full_unitary_guard() -> usize {
    env_guard().unwrap_or(DEFAULT_FULL_GUARD)
}

pub fn statevector_guard() -> usize {
    env_guard().unwrap_or(DEFAULT_STATE_GUARD)
}

/// Controls and target(s) of an ideal `C^k U` operator; all wires distinct.
#[derive(Clone, Debug)]
pub struct ControlSpec {
    pub controls: Vec<QubitId>,
    pub targets: Vec<QubitId>,
}

impl ControlSpec {
    pub fn new(controls: &[QubitId], targets: &[QubitId]) -> Self {
        Self {
            controls: controls.to_vec(),
            targets: targets.to_vec(),
        }
    }

    pub fn single(controls: &[QubitId], target: QubitId) -> Self {
        Self::new(controls, &[target])
    }

    pub fn validate(&self, width: usize) -> Result<()> {
        let mut seen = vec![false; width];
        for &q in self.controls.iter().chain(self.targets.iter()) {
            if q >= width {
                return Err(Error::InvalidArgument(format!(
                    "wire {q} out of range for width {width}"
                )));
            }
            if seen[q] {
                return Err(Error::InvalidArgument(format!(
                    "wire {q} used twice in control spec"
                )));
            }
            seen[q] = true;
        }
        if self.targets.is_empty() {
            return Err(Error::InvalidArgument("at least one target required".into()));
        }
        Ok(())
    }

    fn control_mask(&self) -> usize {
        self.controls.iter().fold(0, |m, &q| m | (1 << q))
    }
}

/// A normalized 2^n-amplitude state.
#[derive(Clone, Debug)]
pub struct StateVector {
    width: usize,
    pub amps: Vec<C64>,
}

impl StateVector {
    pub fn basis(width: usize, index: usize) -> Result<Self> {
        if width > statevector_guard() {
            return Err(Error::GuardExceeded(format!(
                "statevector width {width} exceeds guard {}",
                statevector_guard()
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << width];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { width, amps })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply_u1q(&mut self, m: &UnitaryMatrix2, target: QubitId) {
        let bit = 1usize << target;
        let (m00, m01, m10, m11) = (m.data[0], m.data[1], m.data[2], m.data[3]);
        let dim = self.amps.len();
        let mut base = 0usize;
        while base < dim {
            for low in base..base + bit {
                let a0 = self.amps[low];
                let a1 = self.amps[low | bit];
                self.amps[low] = m00 * a0 + m01 * a1;
                self.amps[low | bit] = m10 * a0 + m11 * a1;
            }
            base += bit << 1;
        }
    }

    pub fn apply_cx(&mut self, control: QubitId, target: QubitId) {
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for j in 0..self.amps.len() {
            if (j & cbit) != 0 && (j & tbit) == 0 {
                self.amps.swap(j, j | tbit);
            }
        }
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.width() != self.width {
            return Err(Error::InvalidArgument(
                "circuit width does not match state width".into(),
            ));
        }
        for g in circuit.gates() {
            match g {
                Gate::Cx { control, target } => self.apply_cx(*control, *target),
                Gate::U1q { target, matrix, .. } => self.apply_u1q(matrix, *target),
            }
        }
        Ok(())
    }

    /// Applies the ideal `C^k U` (identity unless all control bits are 1;
    /// `u` on every target otherwise).
    pub fn apply_ideal_mcu(&mut self, u: &UnitaryMatrix2, spec: &ControlSpec) {
        let cmask = spec.control_mask();
        for &target in &spec.targets {
            let tbit = 1usize << target;
            for j in 0..self.amps.len() {
                if (j & cmask) == cmask && (j & tbit) == 0 {
                    let a0 = self.amps[j];
                    let a1 = self.amps[j | tbit];
                    self.amps[j] = u.data[0] * a0 + u.data[1] * a1;
                    self.amps[j | tbit] = u.data[2] * a0 + u.data[3] * a1;
                }
            }
        }
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Dense column-major matrix of size `2^width`.
#[derive(Clone, Debug)]
pub struct DenseMatrix {
    pub dim: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[col * self.dim + row]
    }

    pub fn set(&mut self, row: usize, col: usize, v: C64) {
        self.data[col * self.dim + row] = v;
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Column-by-column full unitary of a circuit (guarded).
pub fn full_unitary(circuit: &Circuit) -> Result<DenseMatrix> {
    let width = circuit.width();
    if width > full_unitary_guard() {
        return Err(Error::GuardExceeded(format!(
            "full unitary width {width} exceeds guard {}",
            full_unitary_guard()
        )));
    }
    let dim = 1usize << width;
    let mut m = DenseMatrix::zero(dim);
    for col in 0..dim {
        let mut state = StateVector::basis(width, col)?;
        state.apply_circuit(circuit)?;
        for row in 0..dim {
            m.set(row, col, state.amps[row]);
        }
    }
    Ok(m)
}

/// Dense matrix of the ideal `C^k U` operator (guarded like `full_unitary`).
pub fn ideal_mcu_matrix(u: &UnitaryMatrix2, spec: &ControlSpec, width: usize) -> Result<DenseMatrix> {
    spec.validate(width)?;
    if width > full_unitary_guard() {
        return Err(Error::GuardExceeded(format!(
            "ideal operator width {width} exceeds guard {}",
            full_unitary_guard()
        )));
    }
    let dim = 1usize << width;
    let mut m = DenseMatrix::zero(dim);
    for col in 0..dim {
        let mut state = StateVector::basis(width, col)?;
        state.apply_ideal_mcu(u, spec);
        for row in 0..dim {
            m.set(row, col, state.amps[row]);
        }
    }
    Ok(m)
}

/// Distance-measurement modes.
#[derive(Clone, Copy, Debug)]
pub enum DistanceMode {
    /// Max-entry difference of full unitaries (width <= full guard).
    Full,
    /// Max over sampled basis inputs of the max-entry amplitude difference.
    /// Always includes the all-controls-active columns.
    SampledColumns { count: usize, seed: u64 },
    /// Operator-norm deviation of the effective target block for the control
    /// patterns {all active, each single control inactive, all inactive};
    /// leakage outside the target subspace counts toward the deviation.
    ControlPatterns,
}

/// Distance between a circuit and the ideal `C^k U` it claims to implement.
pub fn distance(
    circuit: &Circuit,
    u: &UnitaryMatrix2,
    spec: &ControlSpec,
    mode: DistanceMode,
) -> Result<f64> {
    spec.validate(circuit.width())?;
    match mode {
        DistanceMode::Full => {
            let measured = full_unitary(circuit)?;
            let ideal = ideal_mcu_matrix(u, spec, circuit.width())?;
            Ok(measured.max_abs_diff(&ideal))
        }
        DistanceMode::SampledColumns { count, seed } => {
            sampled_distance(circuit, u, spec, count, seed)
        }
        DistanceMode::ControlPatterns => Ok(pattern_errors(circuit, u, spec)?
            .into_iter()
            .map(|(_, e)| e)
            .fold(0.0, f64::max)),
    }
}

fn sampled_distance(
    circuit: &Circuit,
    u: &UnitaryMatrix2,
    spec: &ControlSpec,
    count: usize,
    seed: u64,
) -> Result<f64> {
    let width = circuit.width();
    if width > statevector_guard() {
        return Err(Error::GuardExceeded(format!(
            "sampled oracle width {width} exceeds guard {}",
            statevector_guard()
        )));
    }
    let dim = 1usize << width;
    let cmask = spec.control_mask();
    // Lemma 3/4 worst cases are control-pattern structured, so the
    // all-active pattern is always probed (both target settings).
    let mut columns = vec![cmask, dim - 1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while columns.len() < count.max(2) && columns.len() < dim {
        let col = rng.gen_range(0..dim);
        if !columns.contains(&col) {
            columns.push(col);
        }
    }
    let mut worst: f64 = 0.0;
    for col in columns {
        let mut measured = StateVector::basis(width, col)?;
        measured.apply_circuit(circuit)?;
        let mut ideal = StateVector::basis(width, col)?;
        ideal.apply_ideal_mcu(u, spec);
        worst = worst.max(measured.max_abs_diff(&ideal));
    }
    Ok(worst)
}

/// Per-control-pattern deviations of the effective target block against the
/// ideal `C^k U` semantics (`u` when every control is active, identity
/// otherwise). Single-target circuits only.
///
/// The deviation is the largest singular value of `E - expected`, where `E`
/// is the measured 2x2 conditional block, maximized with any leakage out of
/// the target subspace. This is the spectral reading of the paper's error
/// metric (entrywise in the diagonal basis).
pub fn pattern_errors(
    circuit: &Circuit,
    u: &UnitaryMatrix2,
    spec: &ControlSpec,
) -> Result<Vec<(String, f64)>> {
    spec.validate(circuit.width())?;
    if spec.targets.len() != 1 {
        return Err(Error::InvalidArgument(
            "pattern mode supports a single target".into(),
        ));
    }
    let width = circuit.width();
    if width > statevector_guard() {
        return Err(Error::GuardExceeded(format!(
            "pattern oracle width {width} exceeds guard {}",
            statevector_guard()
        )));
    }
    let target = spec.targets[0];
    let tbit = 1usize << target;
    let cmask = spec.control_mask();

    let mut patterns: Vec<(String, usize)> = vec![("all-active".into(), cmask)];
    for &q in &spec.controls {
        patterns.push((format!("inactive q{q}"), cmask & !(1 << q)));
    }
    patterns.push(("all-inactive".into(), 0));

    let mut out = Vec::with_capacity(patterns.len());
    for (name, bits) in patterns {
        let all_active = bits == cmask;
        let expected = if all_active {
            *u
        } else {
            UnitaryMatrix2::identity()
        };
        let mut block = [C64::new(0.0, 0.0); 4];
        let mut leakage: f64 = 0.0;
        for tval in 0..2 {
            let input = bits | (tval * tbit);
            let mut state = StateVector::basis(width, input)?;
            state.apply_circuit(circuit)?;
            block[tval] = state.amps[bits]; // row: target 0
            block[2 + tval] = state.amps[bits | tbit]; // row: target 1
            for (j, amp) in state.amps.iter().enumerate() {
                if j != bits && j != (bits | tbit) {
                    leakage = leakage.max(amp.norm());
                }
            }
        }
        let measured = UnitaryMatrix2::new(block[0], block[1], block[2], block[3]);
        out.push((name, measured.spectral_diff(&expected).max(leakage)));
    }
    Ok(out)
}
