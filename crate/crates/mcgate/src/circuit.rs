//! The elementary-gate intermediate representation: ordered gate lists over
//! indexed qubits, with composition, adjoints, counting, and JSON
//! serialization (`mcgate-circuit/1`).

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::unitary::{C64, UnitaryMatrix2};

/// Qubit index; qubit 0 is the least-significant bit of a basis-state index.
pub type QubitId = usize;

/// An elementary gate: a one-qubit unitary or a CNOT.
///
/// Labels are advisory (used for readable QASM output); the matrix is
/// authoritative.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Cx {
        control: QubitId,
        target: QubitId,
    },
    U1q {
        target: QubitId,
        matrix: UnitaryMatrix2,
        label: Option<String>,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<QubitId> {
        match self {
            Gate::Cx { control, target } => vec![*control, *target],
            Gate::U1q { target, .. } => vec![*target],
        }
    }
}

/// An ordered sequence of elementary gates on `width` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    pub name: Option<String>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        assert!(width > 0, "circuit width must be positive");
        Self {
            width,
            gates: Vec::new(),
            name: None,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a CNOT. Panics on out-of-range or coincident wires: those are
    /// programming errors, not recoverable conditions.
    pub fn cx(&mut self, control: QubitId, target: QubitId) -> &mut Self {
        assert!(control < self.width && target < self.width, "qubit out of range");
        assert_ne!(control, target, "CNOT control and target must differ");
        self.gates.push(Gate::Cx { control, target });
        self
    }

    /// Appends an unlabeled one-qubit gate.
    pub fn u1q(&mut self, matrix: UnitaryMatrix2, target: QubitId) -> &mut Self {
        self.push_u1q(matrix, target, None)
    }

    /// Appends a labeled one-qubit gate (label is advisory).
    pub fn u1q_labeled(
        &mut self,
        matrix: UnitaryMatrix2,
        target: QubitId,
        label: impl Into<String>,
    ) -> &mut Self {
        self.push_u1q(matrix, target, Some(label.into()))
    }

    fn push_u1q(&mut self, matrix: UnitaryMatrix2, target: QubitId, label: Option<String>) -> &mut Self {
        assert!(target < self.width, "qubit out of range");
        debug_assert!(
            matrix.unitarity_residual() < 1e-8,
            "one-qubit gate must be unitary"
        );
        self.gates.push(Gate::U1q {
            target,
            matrix,
            label,
        });
        self
    }

    // Labeled-gate shorthands used all over the synthesis modules.
    pub fn h(&mut self, q: QubitId) -> &mut Self {
        self.u1q_labeled(UnitaryMatrix2::h(), q, "h")
    }
    pub fn x(&mut self, q: QubitId) -> &mut Self {
        self.u1q_labeled(UnitaryMatrix2::x(), q, "x")
    }
    pub fn t(&mut self, q: QubitId) -> &mut Self {
        self.u1q_labeled(UnitaryMatrix2::t(), q, "t")
    }
    pub fn tdg(&mut self, q: QubitId) -> &mut Self {
        self.u1q_labeled(UnitaryMatrix2::t_dagger(), q, "tdg")
    }
    pub fn rx(&mut self, theta: f64, q: QubitId) -> &mut Self {
        self.u1q_labeled(UnitaryMatrix2::rx(theta), q, format!("rx({theta})"))
    }
    pub fn ry(&mut self, theta: f64, q: QubitId) -> &mut Self {
        self.u1q_labeled(UnitaryMatrix2::ry(theta), q, format!("ry({theta})"))
    }
    pub fn rz(&mut self, theta: f64, q: QubitId) -> &mut Self {
        self.u1q_labeled(UnitaryMatrix2::rz(theta), q, format!("rz({theta})"))
    }
    /// Phase gate `diag(1, e^{i alpha})`; QASM spells it `u1`.
    pub fn p(&mut self, alpha: f64, q: QubitId) -> &mut Self {
        self.u1q_labeled(UnitaryMatrix2::phase(alpha), q, format!("u1({alpha})"))
    }

    /// Appends all gates of `other` (same width) in order.
    pub fn extend(&mut self, other: &Circuit) -> &mut Self {
        assert_eq!(self.width, other.width, "width mismatch in compose");
        self.gates.extend(other.gates.iter().cloned());
        self
    }

    /// Concatenation: `other` runs after `self`.
    pub fn compose(&self, other: &Circuit) -> Circuit {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    /// Reverses gate order and conjugate-transposes every one-qubit matrix.
    pub fn adjoint(&self) -> Circuit {
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| match g {
                Gate::Cx { control, target } => Gate::Cx {
                    control: *control,
                    target: *target,
                },
                Gate::U1q {
                    target,
                    matrix,
                    label,
                } => Gate::U1q {
                    target: *target,
                    matrix: matrix.adjoint(),
                    label: label.as_deref().and_then(adjoint_label),
                },
            })
            .collect();
        Circuit {
            width: self.width,
            gates,
            name: self.name.clone(),
        }
    }

    /// Relabels wires by `perm` (gate on qubit `q` moves to `perm[q]`).
    pub fn map_qubits(&self, perm: &[usize]) -> Result<Circuit> {
        if perm.len() != self.width {
            return Err(Error::InvalidArgument(
                "permutation length must equal circuit width".into(),
            ));
        }
        let mut seen = vec![false; self.width];
        for &p in perm {
            if p >= self.width || seen[p] {
                return Err(Error::InvalidArgument(
                    "qubit map must be a bijection on [0, width)".into(),
                ));
            }
            seen[p] = true;
        }
        let gates = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::Cx { control, target } => Gate::Cx {
                    control: perm[*control],
                    target: perm[*target],
                },
                Gate::U1q {
                    target,
                    matrix,
                    label,
                } => Gate::U1q {
                    target: perm[*target],
                    matrix: *matrix,
                    label: label.clone(),
                },
            })
            .collect();
        Ok(Circuit {
            width: self.width,
            gates,
            name: self.name.clone(),
        })
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cx { .. }))
            .count()
    }

    pub fn one_qubit_count(&self) -> usize {
        self.len() - self.cnot_count()
    }

    /// Longest chain under qubit-overlap ordering.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.width];
        let mut depth = 0;
        for g in &self.gates {
            let qs = g.qubits();
            let l = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for q in qs {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    /// Versioned JSON serialization (`"format": "mcgate-circuit/1"`).
    pub fn to_json(&self) -> String {
        let gates: Vec<Value> = self
            .gates
            .iter()
            .map(|g| match g {
                Gate::Cx { control, target } => json!({
                    "kind": "cx",
                    "control": control,
                    "target": target,
                }),
                Gate::U1q {
                    target,
                    matrix,
                    label,
                } => {
                    let m = matrix;
                    let row = |i: usize| {
                        json!([
                            [m.get(i, 0).re, m.get(i, 0).im],
                            [m.get(i, 1).re, m.get(i, 1).im]
                        ])
                    };
                    let mut obj = json!({
                        "kind": "u1q",
                        "target": target,
                        "matrix": [row(0), row(1)],
                    });
                    if let Some(l) = label {
                        obj["label"] = json!(l);
                    }
                    obj
                }
            })
            .collect();
        let mut root = json!({
            "format": "mcgate-circuit/1",
            "width": self.width,
            "gates": gates,
        });
        if let Some(name) = &self.name {
            root["name"] = json!(name);
        }
        serde_json::to_string_pretty(&root).expect("circuit JSON is always serializable")
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let root: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
        let format = root["format"].as_str().unwrap_or("");
        if format != "mcgate-circuit/1" {
            return Err(Error::Parse(format!(
                "unsupported circuit format tag {format:?}"
            )));
        }
        let width = root["width"]
            .as_u64()
            .ok_or_else(|| Error::Parse("missing width".into()))? as usize;
        if width == 0 {
            return Err(Error::Parse("width must be positive".into()));
        }
        let mut circuit = Circuit::new(width);
        circuit.name = root["name"].as_str().map(str::to_owned);
        let gates = root["gates"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing gates array".into()))?;
        for g in gates {
            match g["kind"].as_str() {
                Some("cx") => {
                    let control = g["control"]
                        .as_u64()
                        .ok_or_else(|| Error::Parse("cx missing control".into()))?
                        as usize;
                    let target = g["target"]
                        .as_u64()
                        .ok_or_else(|| Error::Parse("cx missing target".into()))?
                        as usize;
                    if control >= width || target >= width || control == target {
                        return Err(Error::Parse("cx wires out of range".into()));
                    }
                    circuit.cx(control, target);
                }
                Some("u1q") => {
                    let target = g["target"]
                        .as_u64()
                        .ok_or_else(|| Error::Parse("u1q missing target".into()))?
                        as usize;
                    if target >= width {
                        return Err(Error::Parse("u1q wire out of range".into()));
                    }
                    let m = g["matrix"]
                        .as_array()
                        .ok_or_else(|| Error::Parse("u1q missing matrix".into()))?;
                    let entry = |r: usize, c: usize| -> Result<C64> {
                        let cell = m
                            .get(r)
                            .and_then(|row| row.as_array())
                            .and_then(|row| row.get(c))
                            .and_then(|v| v.as_array())
                            .ok_or_else(|| Error::Parse("malformed matrix".into()))?;
                        let re = cell
                            .first()
                            .and_then(|v| v.as_f64())
                            .ok_or_else(|| Error::Parse("malformed matrix entry".into()))?;
                        let im = cell
                            .get(1)
                            .and_then(|v| v.as_f64())
                            .ok_or_else(|| Error::Parse("malformed matrix entry".into()))?;
                        Ok(C64::new(re, im))
                    };
                    let matrix = UnitaryMatrix2::new(
                        entry(0, 0)?,
                        entry(0, 1)?,
                        entry(1, 0)?,
                        entry(1, 1)?,
                    );
                    let label = g["label"].as_str().map(str::to_owned);
                    circuit.push_u1q(matrix, target, label);
                }
                other => {
                    return Err(Error::Parse(format!("unknown gate kind {other:?}")));
                }
            }
        }
        Ok(circuit)
    }
}

/// Adjoint of an advisory gate label, or `None` when no faithful spelling
/// exists (the matrix stays authoritative either way).
fn adjoint_label(label: &str) -> Option<String> {
    match label {
        "x" | "y" | "z" | "h" => Some(label.to_owned()),
        "t" => Some("tdg".to_owned()),
        "tdg" => Some("t".to_owned()),
        "s" => Some("sdg".to_owned()),
        "sdg" => Some("s".to_owned()),
        _ => {
            for prefix in ["rx", "ry", "rz", "u1"] {
                if let Some(rest) = label.strip_prefix(prefix) {
                    if let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                        if let Ok(v) = inner.parse::<f64>() {
                            let neg = if v == 0.0 { 0.0 } else { -v };
                            return Some(format!("{prefix}({neg})"));
                        }
                    }
                }
            }
            None
        }
    }
}

/// A synthesis result: the circuit plus its cost and verification summary.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub circuit: Circuit,
    pub cnot_count: usize,
    /// The applicable theorem bound, when one exists for this instance.
    pub bound: Option<usize>,
    /// Measured oracle error, when verification was run.
    pub oracle_error: Option<f64>,
    pub bound_satisfied: bool,
    /// One of "exact", "approx-thm1", "approx-thm3".
    pub strategy: String,
    /// The triangle layout behind the circuit, retained for the
    /// approximate stages (exact linear-depth path only).
    pub layout: Option<crate::mcu::TriangleLayout>,
}

impl DecompositionReport {
    pub fn new(circuit: Circuit, strategy: &str, bound: Option<usize>) -> Self {
        let cnot_count = circuit.cnot_count();
        Self {
            circuit,
            cnot_count,
            bound,
            oracle_error: None,
            bound_satisfied: bound.is_none_or(|b| cnot_count <= b),
            strategy: strategy.to_owned(),
            layout: None,
        }
    }

    pub fn summary_json(&self) -> String {
        let mut root = json!({
            "strategy": self.strategy,
            "n": self.circuit.width(),
            "cnot_count": self.cnot_count,
            "bound_satisfied": self.bound_satisfied,
        });
        if let Some(b) = self.bound {
            root["bound"] = json!(b);
        }
        if let Some(e) = self.oracle_error {
            root["oracle_error"] = json!(e);
        }
        serde_json::to_string(&root).expect("report JSON is always serializable")
    }
}

/// Deterministic random circuit used by serialization and oracle tests.
#[cfg(test)]
pub(crate) fn random_circuit(width: usize, gates: usize, seed: u64) -> Circuit {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(width);
    for _ in 0..gates {
        if width >= 2 && rng.gen::<bool>() {
            let a = rng.gen_range(0..width);
            let mut b = rng.gen_range(0..width);
            while b == a {
                b = rng.gen_range(0..width);
            }
            c.cx(a, b);
        } else {
            let q = rng.gen_range(0..width);
            c.u1q(crate::unitary::random_unitary(&mut rng), q);
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_of_cx_is_cx() {
        let mut c = Circuit::new(2);
        c.cx(0, 1);
        assert_eq!(c.adjoint(), c);
    }

    #[test]
    fn adjoint_reverses_and_daggers() {
        let mut c = Circuit::new(1);
        c.h(0).t(0);
        let adj = c.adjoint();
        match &adj.gates()[0] {
            Gate::U1q { matrix, label, .. } => {
                assert!(matrix.max_abs_diff(&UnitaryMatrix2::t_dagger()) < 1e-12);
                assert_eq!(label.as_deref(), Some("tdg"));
            }
            _ => panic!("expected one-qubit gate"),
        }
        match &adj.gates()[1] {
            Gate::U1q { matrix, .. } => {
                assert!(matrix.max_abs_diff(&UnitaryMatrix2::h()) < 1e-12);
            }
            _ => panic!("expected one-qubit gate"),
        }
    }

    #[test]
    fn adjoint_is_involutive_and_preserves_counts() {
        for seed in 0..10 {
            let c = random_circuit(4, 40, seed);
            assert_eq!(c.adjoint().adjoint(), c);
            assert_eq!(c.adjoint().cnot_count(), c.cnot_count());
        }
    }

    #[test]
    fn counting_and_depth() {
        let mut c = Circuit::new(3);
        assert_eq!(c.cnot_count(), 0);
        assert_eq!(c.depth(), 0);
        c.h(0).cx(0, 1).cx(1, 2).h(0);
        assert_eq!(c.cnot_count(), 2);
        assert_eq!(c.depth(), 3); // h(0) -> cx(0,1) -> cx(1,2); second h fits at level 3
    }

    #[test]
    fn map_qubits_validates_bijection() {
        let mut c = Circuit::new(3);
        c.cx(0, 1);
        assert!(c.map_qubits(&[0, 0, 1]).is_err());
        assert!(c.map_qubits(&[0, 1]).is_err());
        let mapped = c.map_qubits(&[2, 0, 1]).unwrap();
        assert_eq!(
            mapped.gates()[0],
            Gate::Cx {
                control: 2,
                target: 0
            }
        );
        assert_eq!(mapped.depth(), c.depth());
        assert_eq!(mapped.cnot_count(), c.cnot_count());
    }

    #[test]
    fn json_round_trip_is_gate_exact() {
        for seed in 0..20 {
            let c = random_circuit(5, 60, 100 + seed);
            let round = Circuit::from_json(&c.to_json()).unwrap();
            assert_eq!(round, c);
        }
    }

    #[test]
    fn json_rejects_malformed_inputs() {
        assert!(Circuit::from_json("not json").is_err());
        assert!(Circuit::from_json("{\"format\":\"other\",\"width\":1,\"gates\":[]}").is_err());
        assert!(Circuit::from_json(
            "{\"format\":\"mcgate-circuit/1\",\"width\":1,\"gates\":[{\"kind\":\"cx\",\"control\":0,\"target\":5}]}"
        )
        .is_err());
    }

    #[test]
    fn report_bound_flag() {
        let mut c = Circuit::new(2);
        c.cx(0, 1);
        let r = DecompositionReport::new(c.clone(), "exact", Some(2));
        assert!(r.bound_satisfied);
        let r = DecompositionReport::new(c, "exact", Some(0));
        assert!(!r.bound_satisfied);
    }
}
