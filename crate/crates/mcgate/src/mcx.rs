//! Multi-controlled-X machinery: the 6-CNOT Toffoli, 3-CNOT relative-phase
//! Toffoli, multi-target Toffoli (shared controls), dirty-ancilla MCX
//! chains, and the multi-target MCX, with an auto-dispatcher.
//!
//! The dirty-ancilla chain follows the standard construction with two
//! identical action/reset ladders whose relative phases cancel; ancillas are
//! returned to their input state for every input, not just |0>.

use crate::circuit::{Circuit, QubitId};
use crate::error::{Error, Result};

/// A multi-controlled-X request. All wire sets are pairwise disjoint; the
/// chain constructions need at least `k - 2` dirty ancillas.
#[derive(Clone, Debug)]
pub struct McxRequest {
    pub controls: Vec<QubitId>,
    pub targets: Vec<QubitId>,
    pub dirty_ancillas: Vec<QubitId>,
    pub width: usize,
}

impl McxRequest {
    pub fn new(
        controls: &[QubitId],
        targets: &[QubitId],
        dirty_ancillas: &[QubitId],
        width: usize,
    ) -> Self {
        Self {
            controls: controls.to_vec(),
            targets: targets.to_vec(),
            dirty_ancillas: dirty_ancillas.to_vec(),
            width,
        }
    }

    fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.width];
        for &q in self
            .controls
            .iter()
            .chain(self.targets.iter())
            .chain(self.dirty_ancillas.iter())
        {
            if q >= self.width {
                return Err(Error::InvalidArgument(format!(
                    "wire {q} out of range for width {}",
                    self.width
                )));
            }
            if seen[q] {
                return Err(Error::InvalidArgument(format!("wire {q} used twice")));
            }
            seen[q] = true;
        }
        if self.targets.is_empty() {
            return Err(Error::InvalidArgument("at least one target required".into()));
        }
        Ok(())
    }
}

/// Structural gate-class counts of a chain synthesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McxStats {
    /// Toffoli-class units (full + relative-phase + shared-target units).
    pub toffoli_class: usize,
    /// Relative-phase Toffolis inside the ancilla ladders.
    pub rp_toffolis: usize,
}

/// The textbook 6-CNOT Toffoli over {H, T, Tdg, CX}.
pub fn toffoli(width: usize, c1: QubitId, c2: QubitId, t: QubitId) -> Circuit {
    let mut c = Circuit::new(width);
    append_toffoli(&mut c, c1, c2, t);
    c
}

pub(crate) fn append_toffoli(c: &mut Circuit, a: QubitId, b: QubitId, t: QubitId) {
    c.h(t)
        .cx(b, t)
        .tdg(t)
        .cx(a, t)
        .t(t)
        .cx(b, t)
        .tdg(t)
        .cx(a, t)
        .t(b)
        .t(t)
        .h(t)
        .cx(a, b)
        .t(a)
        .tdg(b)
        .cx(a, b);
}

/// A 3-CNOT relative-phase Toffoli (equal to C^2 X up to basis-dependent
/// phases); usable only where a paired ladder cancels the phases.
pub fn rp_toffoli(width: usize, c1: QubitId, c2: QubitId, t: QubitId) -> Circuit {
    let mut c = Circuit::new(width);
    append_rp_toffoli(&mut c, c1, c2, t);
    c
}

pub(crate) fn append_rp_toffoli(c: &mut Circuit, c1: QubitId, c2: QubitId, t: QubitId) {
    c.h(t)
        .t(t)
        .cx(c2, t)
        .tdg(t)
        .cx(c1, t)
        .t(t)
        .cx(c2, t)
        .tdg(t)
        .h(t);
}

/// Half of a relative-phase Toffoli ladder step (2 CNOTs); paired with
/// `append_reset_gadget` (its adjoint) so ladder phases cancel.
fn append_action_gadget(c: &mut Circuit, q0: QubitId, q1: QubitId, q2: QubitId) {
    c.h(q2).t(q2).cx(q0, q2).tdg(q2).cx(q1, q2);
}

fn append_reset_gadget(c: &mut Circuit, q0: QubitId, q1: QubitId, q2: QubitId) {
    c.cx(q1, q2).t(q2).cx(q0, q2).tdg(q2).h(q2);
}

/// Multi-target Toffoli: `prod_i C^2 X(c1, c2 -> t_i)` with `2 nt + 4` CNOTs.
/// Extra targets receive CX pairs (control `t_1`) on either side of the
/// Toffoli acting on `t_1`.
pub fn multi_target_toffoli(
    width: usize,
    c1: QubitId,
    c2: QubitId,
    targets: &[QubitId],
) -> Result<Circuit> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument("at least one target required".into()));
    }
    let mut c = Circuit::new(width);
    append_multi_target_toffoli(&mut c, c1, c2, targets);
    Ok(c)
}

pub(crate) fn append_multi_target_toffoli(
    c: &mut Circuit,
    c1: QubitId,
    c2: QubitId,
    targets: &[QubitId],
) {
    for &t in &targets[1..] {
        c.cx(targets[0], t);
    }
    append_toffoli(c, c1, c2, targets[0]);
    for &t in &targets[1..] {
        c.cx(targets[0], t);
    }
}

/// Dirty-ancilla MCX for a single target (`k >= 3` controls, `k - 2` dirty
/// ancillas). Exact, with ancillas restored for every input.
pub fn mcx_dirty(req: &McxRequest) -> Result<(Circuit, McxStats)> {
    if req.targets.len() != 1 {
        return Err(Error::InvalidArgument(
            "mcx_dirty takes a single target; use mcx_multi_target".into(),
        ));
    }
    mcx_multi_target(req)
}

/// Multi-target dirty-ancilla MCX: `prod_i C^k X(controls -> t_i)`.
///
/// The shared-target Toffolis are placed together with the gate that targets
/// `t_1` in both ladder passes; the ancilla ladder itself uses
/// relative-phase units whose phases cancel between the two passes.
pub fn mcx_multi_target(req: &McxRequest) -> Result<(Circuit, McxStats)> {
    req.validate()?;
    let k = req.controls.len();
    if k < 3 {
        return Err(Error::Infeasible(format!(
            "dirty-ancilla chain needs k >= 3 controls, got {k}"
        )));
    }
    if req.dirty_ancillas.len() < k - 2 {
        return Err(Error::Infeasible(format!(
            "k = {k} controls need {} dirty ancillas, got {}",
            k - 2,
            req.dirty_ancillas.len()
        )));
    }
    // Deterministic ancilla choice: lowest-index dirty qubits first.
    let mut anc = req.dirty_ancillas.clone();
    anc.sort_unstable();
    anc.truncate(k - 2);
    let ctrl = &req.controls;
    let nt = req.targets.len();

    let mut c = Circuit::new(req.width);
    for _pass in 0..2 {
        append_multi_target_toffoli(&mut c, ctrl[k - 1], anc[k - 3], &req.targets);
        for i in (0..k - 3).rev() {
            append_action_gadget(&mut c, ctrl[i + 2], anc[i], anc[i + 1]);
        }
        append_rp_toffoli(&mut c, ctrl[0], ctrl[1], anc[0]);
        for i in 0..k - 3 {
            append_reset_gadget(&mut c, ctrl[i + 2], anc[i], anc[i + 1]);
        }
    }
    let stats = McxStats {
        // Per pass: the target block counts nt units, each ladder
        // action/reset pair one unit, plus the rp-Toffoli at the bottom.
        toffoli_class: 2 * (2 * k + nt - 5),
        rp_toffolis: 2 + 4 * (k - 3),
    };
    Ok((c, stats))
}

/// Dispatcher: picks the cheapest machinery for `C^k X` on one or more
/// targets given the free (dirty) qubits. Below the linear regime this is
/// the multi-target Toffoli rather than the chain construction.
pub fn mcx_auto(
    width: usize,
    controls: &[QubitId],
    targets: &[QubitId],
    free_qubits: &[QubitId],
) -> Result<Circuit> {
    match controls.len() {
        0 => {
            let mut c = Circuit::new(width);
            for &t in targets {
                c.x(t);
            }
            Ok(c)
        }
        1 => {
            let mut c = Circuit::new(width);
            for &t in targets {
                c.cx(controls[0], t);
            }
            Ok(c)
        }
        2 => multi_target_toffoli(width, controls[0], controls[1], targets),
        _ => {
            let req = McxRequest::new(controls, targets, free_qubits, width);
            Ok(mcx_multi_target(&req)?.0)
        }
    }
}
