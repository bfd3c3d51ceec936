//! Multi-controlled U(2) synthesis: the exact linear-depth triangle layout,
//! the extra-control extension, and the two approximate strategies.
//!
//! The exact layout places `(n-1)^2 + (n-2)^2` two-wire controlled
//! operations on `n = k + 1` qubits: powers of `U` on the target wire and
//! `Rx(+/- pi/2^m)` gates on control wires, arranged in two "triangles".
//! Every controlled sub-gate costs 2 CNOTs, giving `4n^2 - 12n + 10` total.
//!
//! The approximate strategies keep the layout of a small base-control set
//! (`nb` controls chosen from the error budget), attach the remaining
//! controls only to the central column (the gates controlled by `b1`), and
//! delete the central root gate `U^(1/2^(nb-1))` outright. The induced
//! operator error is the spectral error of that deleted root. Strategy
//! "approx-thm1" lowers each multi-controlled central Rx separately;
//! "approx-thm3" groups the central Rx gates of each triangle into a single
//! multi-target multi-controlled SU(2) block.

use std::f64::consts::PI;

use crate::circuit::{Circuit, DecompositionReport, QubitId};
use crate::cost;
use crate::error::{Error, Result};
use crate::mcsu2;
use crate::unitary::{root_pow2, ApproxPlan, UnitaryMatrix2};

/// One controlled operation of the triangle layout, in layout-local wire
/// coordinates: wire `0` is `b1`, wires `1..n-1` are the remaining base
/// controls, wire `n-1` is the gate target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangleGate {
    /// Layout wire acting as control.
    pub control: usize,
    /// Layout wire acted on.
    pub target: usize,
    /// Sign of the rotation angle / root exponent.
    pub sign: i8,
    /// The operator parameter is `2^denom_log2`.
    pub denom_log2: u32,
    /// True for powers of U on the main target wire; false for Rx gates.
    pub on_target: bool,
    /// The single central root gate `U^(1/2^(n-2))`.
    pub is_root: bool,
    /// Which triangle (1 or 2) the gate belongs to.
    pub triangle: u8,
}

impl TriangleGate {
    /// Central-column gates are the ones controlled by `b1` (wire 0); they
    /// are the gates that receive extra controls in the extension.
    pub fn is_central(&self) -> bool {
        self.control == 0
    }

    /// The 2x2 operator of this gate given the top-level unitary `u`.
    pub fn matrix(&self, u: &UnitaryMatrix2) -> Result<UnitaryMatrix2> {
        if self.on_target {
            let r = root_pow2(u, self.denom_log2)?;
            Ok(if self.sign < 0 { r.adjoint() } else { r })
        } else {
            let angle = f64::from(self.sign) * PI / f64::from(1u32 << self.denom_log2);
            Ok(UnitaryMatrix2::rx(angle))
        }
    }
}

/// The full ordered gate list of the exact layout on `wires` layout wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleLayout {
    pub wires: usize,
    pub gates: Vec<TriangleGate>,
}

impl TriangleLayout {
    /// Builds the layout for `n >= 3` wires (`n - 1` controls + target).
    ///
    /// Pass structure (frozen against the golden fixture): triangle 1 is a
    /// descending-control left sweep followed by an ascending-control right
    /// sweep over all `n` wires; triangle 2 repeats both sweeps over the
    /// first `n - 1` wires with Rx gates only. Signs are positive on left
    /// sweeps and negative on right sweeps, except that the central column
    /// of triangle 2 is negative.
    pub fn build(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "triangle layout needs at least 3 wires, got {n}"
            )));
        }
        let mut gates = Vec::new();
        let mut push = |c: usize, t: usize, sign: i8, on_target: bool, triangle: u8| {
            let mut e = (t - c) as u32;
            if c == 0 {
                e -= 1;
            }
            gates.push(TriangleGate {
                control: c,
                target: t,
                sign,
                denom_log2: e,
                on_target,
                is_root: triangle == 1 && c == 0 && t == n - 1,
                triangle,
            });
        };
        // triangle 1, left sweep
        for c in (0..=n - 2).rev() {
            for t in c + 1..n {
                push(c, t, 1, t == n - 1, 1);
            }
        }
        // triangle 1, right sweep
        for c in 1..=n - 2 {
            for t in (c + 1..n).rev() {
                push(c, t, -1, t == n - 1, 1);
            }
        }
        // triangle 2, left sweep (Rx only; central column negated)
        for c in (0..=n - 3).rev() {
            for t in c + 1..n - 1 {
                push(c, t, if c == 0 { -1 } else { 1 }, false, 2);
            }
        }
        // triangle 2, right sweep
        for c in 1..=n - 3 {
            for t in (c + 1..n - 1).rev() {
                push(c, t, -1, false, 2);
            }
        }
        Ok(Self { wires: n, gates })
    }

    /// The gates controlled by `b1`, including the root.
    pub fn central_column(&self) -> Vec<&TriangleGate> {
        self.gates.iter().filter(|g| g.is_central()).collect()
    }

    /// Controlled-operator count of the given triangle.
    pub fn triangle_size(&self, triangle: u8) -> usize {
        self.gates.iter().filter(|g| g.triangle == triangle).count()
    }
}

/// Maps a layout wire to a concrete circuit wire: layout wires `0..n-1` are
/// `controls[0..k]` (so `controls[0]` is `b1`), layout wire `n-1` is the
/// target.
fn wire_map(controls: &[QubitId], target: QubitId) -> impl Fn(usize) -> QubitId + '_ {
    let k = controls.len();
    move |w| if w == k { target } else { controls[w] }
}

fn validate_wires(controls: &[QubitId], target: QubitId, width: usize) -> Result<()> {
    let mut seen = vec![false; width];
    for &q in controls.iter().chain(std::iter::once(&target)) {
        if q >= width {
            return Err(Error::InvalidArgument(format!(
                "wire {q} out of range for width {width}"
            )));
        }
        if seen[q] {
            return Err(Error::InvalidArgument(format!("wire {q} used twice")));
        }
        seen[q] = true;
    }
    Ok(())
}

/// Exact multi-controlled U: `k = 1` uses the 2-CNOT ABC construction;
/// `k >= 2` emits the triangle layout with every controlled sub-gate
/// lowered to 2 CNOTs. `4n^2 - 12n + 10` CNOTs for `n = k + 1 >= 3`.
pub fn mcu_exact(
    u: &UnitaryMatrix2,
    controls: &[QubitId],
    target: QubitId,
    width: usize,
) -> Result<DecompositionReport> {
    u.checked_unitary()?;
    validate_wires(controls, target, width)?;
    let k = controls.len();
    if k == 0 {
        return Err(Error::InvalidArgument("at least one control required".into()));
    }
    if k == 1 {
        let circuit = mcsu2::controlled_u_abc(width, u, controls[0], target)?;
        return Ok(DecompositionReport::new(circuit, "exact", Some(2)));
    }
    let n = k + 1;
    let layout = TriangleLayout::build(n)?;
    let wire = wire_map(controls, target);
    let mut circuit = Circuit::new(width);
    for g in &layout.gates {
        let m = g.matrix(u)?;
        circuit.extend(&mcsu2::controlled_u_abc(width, &m, wire(g.control), wire(g.target))?);
    }
    let mut report = DecompositionReport::new(circuit, "exact", Some(cost::exact_count(n)?));
    report.layout = Some(layout);
    Ok(report)
}

/// Exact control extension: builds the base layout on
/// `base_controls` and gives every central-column gate the extra controls,
/// lowering each extended gate exactly through a recursive `mcu_exact`.
/// With `extra_controls` empty this coincides with `mcu_exact`.
pub fn extend_controls(
    u: &UnitaryMatrix2,
    base_controls: &[QubitId],
    extra_controls: &[QubitId],
    target: QubitId,
    width: usize,
) -> Result<Circuit> {
    u.checked_unitary()?;
    let all: Vec<QubitId> = base_controls
        .iter()
        .chain(extra_controls.iter())
        .copied()
        .collect();
    validate_wires(&all, target, width)?;
    if base_controls.len() < 2 {
        return Err(Error::InvalidArgument(
            "control extension needs at least 2 base controls".into(),
        ));
    }
    let n = base_controls.len() + 1;
    let layout = TriangleLayout::build(n)?;
    let wire = wire_map(base_controls, target);
    // extended control set for central gates: b1 plus the extras
    let mut ext: Vec<QubitId> = vec![base_controls[0]];
    ext.extend_from_slice(extra_controls);
    let mut circuit = Circuit::new(width);
    for g in &layout.gates {
        let m = g.matrix(u)?;
        if g.is_central() && !extra_controls.is_empty() {
            if ext.len() == 1 {
                circuit.extend(&mcsu2::controlled_u_abc(width, &m, ext[0], wire(g.target))?);
            } else {
                circuit.extend(&mcu_exact(&m, &ext, wire(g.target), width)?.circuit);
            }
        } else {
            circuit.extend(&mcsu2::controlled_u_abc(width, &m, wire(g.control), wire(g.target))?);
        }
    }
    Ok(circuit)
}

/// How the approximate strategies lower the extended central column.
enum CentralLowering {
    /// Each central Rx separately through a real-main-diagonal SU(2) call.
    PerGate,
    /// One multi-target SU(2) block per triangle.
    PerTriangle,
}

fn mcu_approx_impl(
    u: &UnitaryMatrix2,
    controls: &[QubitId],
    target: QubitId,
    width: usize,
    epsilon: f64,
    lowering: CentralLowering,
    strategy: &str,
) -> Result<DecompositionReport> {
    u.checked_unitary()?;
    validate_wires(controls, target, width)?;
    if !(epsilon > 0.0 && epsilon < 2.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 2), got {epsilon}"
        )));
    }
    let k = controls.len();
    if k == 0 {
        return Err(Error::InvalidArgument("at least one control required".into()));
    }
    let plan = ApproxPlan::for_gate(u, epsilon)?;
    let nb = plan.n_base as usize;
    if k <= nb {
        // Budget admits the exact construction outright.
        return mcu_exact(u, controls, target, width);
    }
    let n = k + 1;
    let base = &controls[..nb];
    let extras = &controls[nb..];
    let layout = TriangleLayout::build(nb + 1)?;
    let wire = wire_map(base, target);
    let mut ext: Vec<QubitId> = vec![base[0]];
    ext.extend_from_slice(extras);

    let mut circuit = Circuit::new(width);
    let mut triangle_done = [false; 3];
    for g in &layout.gates {
        if g.is_root {
            continue; // the approximation: the root becomes identity
        }
        if !g.is_central() {
            let m = g.matrix(u)?;
            circuit.extend(&mcsu2::controlled_u_abc(width, &m, wire(g.control), wire(g.target))?);
            continue;
        }
        match lowering {
            CentralLowering::PerGate => {
                let m = g.matrix(u)?;
                circuit.extend(&mcsu2::mcsu2_real_main(&m, &ext, wire(g.target), width)?);
            }
            CentralLowering::PerTriangle => {
                let tri = g.triangle as usize;
                if triangle_done[tri] {
                    continue;
                }
                triangle_done[tri] = true;
                // The central Rx gates of a triangle are contiguous in the
                // layout order, so emitting the whole block here preserves
                // the circuit's action.
                let gates: Vec<(UnitaryMatrix2, QubitId)> = layout
                    .gates
                    .iter()
                    .filter(|h| h.triangle == g.triangle && h.is_central() && !h.is_root)
                    .map(|h| Ok((h.matrix(u)?, wire(h.target))))
                    .collect::<Result<_>>()?;
                let req = mcsu2::Su2Request::new(gates, &ext, width);
                circuit.extend(&mcsu2::mcsu2_multi_target(&req)?);
            }
        }
    }

    let bound = match lowering {
        CentralLowering::PerGate => Some(cost::thm1_bound(n, nb)?),
        CentralLowering::PerTriangle if n >= nb + 8 => Some(cost::thm3_bound(n, nb)?),
        CentralLowering::PerTriangle => None,
    };
    let mut report = DecompositionReport::new(circuit, strategy, bound);
    report.oracle_error = Some(plan.predicted_error);
    report.layout = Some(layout);
    Ok(report)
}

/// Theorem-1 strategy: per-gate lowering of the extended central column.
/// CNOT count at most `-28(nb-1)^2 + 2(nb-1)(16n-40)` once past the exact
/// regime; operator error at most `epsilon`.
pub fn mcu_approx(
    u: &UnitaryMatrix2,
    controls: &[QubitId],
    target: QubitId,
    width: usize,
    epsilon: f64,
) -> Result<DecompositionReport> {
    mcu_approx_impl(
        u,
        controls,
        target,
        width,
        epsilon,
        CentralLowering::PerGate,
        "approx-thm1",
    )
}

/// Theorem-3 strategy: one multi-target SU(2) block per triangle.
/// CNOT count at most `4(nb-1)^2 + 32n - 112` for `n >= nb + 8`; operator
/// error at most `epsilon`.
pub fn mcu_approx_opt(
    u: &UnitaryMatrix2,
    controls: &[QubitId],
    target: QubitId,
    width: usize,
    epsilon: f64,
) -> Result<DecompositionReport> {
    mcu_approx_impl(
        u,
        controls,
        target,
        width,
        epsilon,
        CentralLowering::PerTriangle,
        "approx-thm3",
    )
}

/// Picks the cheapest strategy by cost-model prediction, then constructs.
/// Without an error budget the choice is always exact.
pub fn mcu_auto(
    u: &UnitaryMatrix2,
    controls: &[QubitId],
    target: QubitId,
    width: usize,
    epsilon: Option<f64>,
) -> Result<DecompositionReport> {
    let Some(eps) = epsilon else {
        return mcu_exact(u, controls, target, width);
    };
    let k = controls.len();
    let n = k + 1;
    let plan = ApproxPlan::for_gate(u, eps)?;
    let nb = plan.n_base as usize;
    if k <= nb || n < 3 {
        return mcu_exact(u, controls, target, width);
    }
    let mut best = ("exact", cost::exact_count(n)?);
    let thm1 = cost::thm1_bound(n, nb)?;
    if thm1 < best.1 {
        best = ("approx-thm1", thm1);
    }
    if n >= nb + 8 {
        let thm3 = cost::thm3_bound(n, nb)?;
        if thm3 < best.1 {
            best = ("approx-thm3", thm3);
        }
    }
    match best.0 {
        "exact" => mcu_exact(u, controls, target, width),
        "approx-thm1" => mcu_approx(u, controls, target, width, eps),
        _ => mcu_approx_opt(u, controls, target, width, eps),
    }
}
