//! OpenQASM 2.0 emission and an independent re-import parser.
//!
//! Emission prefers recognized gate names (validated against the gate's
//! matrix before use — labels are advisory); everything else becomes a
//! generic `u3` computed by ZYZ factorization, with the dropped global phase
//! recorded in a trailing comment.

use std::f64::consts::PI;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::unitary::{zyz_angles, UnitaryMatrix2, C64};

pub const QASM_HEADER: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";";

/// Parses a recognized gate label ("h", "tdg", "rx(0.5)", ...) into its
/// matrix, or `None` when the name is unknown.
fn label_matrix(label: &str) -> Option<UnitaryMatrix2> {
    match label {
        "id" => return Some(UnitaryMatrix2::identity()),
        "x" => return Some(UnitaryMatrix2::x()),
        "y" => return Some(UnitaryMatrix2::y()),
        "z" => return Some(UnitaryMatrix2::z()),
        "h" => return Some(UnitaryMatrix2::h()),
        "t" => return Some(UnitaryMatrix2::t()),
        "tdg" => return Some(UnitaryMatrix2::t_dagger()),
        "s" => return Some(UnitaryMatrix2::s()),
        "sdg" => return Some(UnitaryMatrix2::s_dagger()),
        _ => {}
    }
    let (name, args) = split_call(label)?;
    let angles: Vec<f64> = args
        .iter()
        .map(|a| parse_angle(a))
        .collect::<Result<_>>()
        .ok()?;
    match (name, angles.as_slice()) {
        ("rx", [t]) => Some(UnitaryMatrix2::rx(*t)),
        ("ry", [t]) => Some(UnitaryMatrix2::ry(*t)),
        ("rz", [t]) => Some(UnitaryMatrix2::rz(*t)),
        ("u1", [t]) | ("p", [t]) => Some(UnitaryMatrix2::phase(*t)),
        ("u2", [p, l]) => Some(UnitaryMatrix2::u3(PI / 2.0, *p, *l)),
        ("u3", [t, p, l]) | ("u", [t, p, l]) => Some(UnitaryMatrix2::u3(*t, *p, *l)),
        _ => None,
    }
}

/// Parses a user-facing gate specification: either a recognized gate label
/// (angle arguments accept "pi" expressions, e.g. "rx(pi/2)") or a JSON
/// 2x2 matrix `[[[re,im],[re,im]],[[re,im],[re,im]]]`.
pub fn gate_from_spec(spec: &str) -> Result<UnitaryMatrix2> {
    let s = spec.trim();
    if s.starts_with('[') {
        let v: serde_json::Value = serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("invalid matrix JSON: {e}")))?;
        let rows = v
            .as_array()
            .filter(|r| r.len() == 2)
            .ok_or_else(|| Error::Parse("matrix must have 2 rows".into()))?;
        let mut data = [C64::new(0.0, 0.0); 4];
        for (i, row) in rows.iter().enumerate() {
            let cols = row
                .as_array()
                .filter(|c| c.len() == 2)
                .ok_or_else(|| Error::Parse("matrix rows must have 2 entries".into()))?;
            for (j, entry) in cols.iter().enumerate() {
                let pair = entry
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::Parse("matrix entries must be [re, im] pairs".into()))?;
                let re = pair[0]
                    .as_f64()
                    .ok_or_else(|| Error::Parse("matrix entry parts must be numbers".into()))?;
                let im = pair[1]
                    .as_f64()
                    .ok_or_else(|| Error::Parse("matrix entry parts must be numbers".into()))?;
                data[i * 2 + j] = C64::new(re, im);
            }
        }
        let m = UnitaryMatrix2 { data };
        m.checked_unitary()?;
        return Ok(m);
    }
    label_matrix(s).ok_or_else(|| Error::Parse(format!("unrecognized gate spec '{s}'")))
}

fn split_call(text: &str) -> Option<(&str, Vec<&str>)> {
    let open = text.find('(')?;
    let close = text.rfind(')')?;
    if close != text.len() - 1 {
        return None;
    }
    let args = text[open + 1..close].split(',').map(str::trim).collect();
    Some((&text[..open], args))
}

/// Parses an angle expression: a float, "pi", simple products/quotients like
/// "pi/2", "-3*pi/4", "0.5*pi".
pub fn parse_angle(expr: &str) -> Result<f64> {
    let expr = expr.trim();
    let (sign, body) = match expr.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, expr),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("empty angle expression {expr:?}")));
    }
    let mut value = 1.0f64;
    for (i, quotient_part) in body.split('/').enumerate() {
        let mut part_value = 1.0f64;
        for factor in quotient_part.split('*') {
            let factor = factor.trim();
            let v = if factor.eq_ignore_ascii_case("pi") {
                PI
            } else {
                factor
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad angle token {factor:?}")))?
            };
            part_value *= v;
        }
        if i == 0 {
            value = part_value;
        } else {
            value /= part_value;
        }
    }
    Ok(sign * value)
}

/// Emits OpenQASM 2.0 with a single register `q[width]`.
pub fn to_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str(QASM_HEADER);
    out.push('\n');
    out.push_str(&format!("qreg q[{}];\n", circuit.width()));
    for g in circuit.gates() {
        match g {
            Gate::Cx { control, target } => {
                out.push_str(&format!("cx q[{control}],q[{target}];\n"));
            }
            Gate::U1q {
                target,
                matrix,
                label,
            } => {
                // Use the advisory label only when the matrix confirms it.
                let verified = label
                    .as_deref()
                    .filter(|l| {
                        label_matrix(l)
                            .map(|m| m.max_abs_diff(matrix) < 1e-12)
                            .unwrap_or(false)
                    });
                if let Some(l) = verified {
                    out.push_str(&format!("{l} q[{target}];\n"));
                } else {
                    let (alpha, beta, gamma, delta) =
                        zyz_angles(matrix).expect("circuit gates are unitary");
                    let dropped = alpha - (beta + delta) / 2.0;
                    out.push_str(&format!(
                        "u3({gamma},{beta},{delta}) q[{target}]; // global phase dropped: {dropped}\n"
                    ));
                }
            }
        }
    }
    out
}

/// Independent OpenQASM 2.0 subset parser (single quantum register,
/// qelib1-style gate names). Used for round-trip verification.
pub fn parse_qasm(text: &str) -> Result<Circuit> {
    let mut register: Option<(String, usize)> = None;
    let mut circuit: Option<Circuit> = None;
    let mut saw_header = false;

    // Strip line comments, then split statements on ';'.
    let stripped: String = text
        .lines()
        .map(|line| line.split("//").next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    for raw in stripped.split(';') {
        let stmt = raw.trim();
        if stmt.is_empty() {
            continue;
        }
        if let Some(version) = stmt.strip_prefix("OPENQASM") {
            if version.trim() != "2.0" {
                return Err(Error::Parse(format!(
                    "unsupported OpenQASM version {:?}",
                    version.trim()
                )));
            }
            saw_header = true;
            continue;
        }
        if stmt.starts_with("include") {
            continue;
        }
        if let Some(decl) = stmt.strip_prefix("qreg") {
            let decl = decl.trim();
            let open = decl
                .find('[')
                .ok_or_else(|| Error::Parse("malformed qreg".into()))?;
            let close = decl
                .find(']')
                .ok_or_else(|| Error::Parse("malformed qreg".into()))?;
            let name = decl[..open].trim().to_owned();
            let size: usize = decl[open + 1..close]
                .trim()
                .parse()
                .map_err(|_| Error::Parse("bad qreg size".into()))?;
            if register.is_some() {
                return Err(Error::Parse("only one quantum register supported".into()));
            }
            circuit = Some(Circuit::new(size));
            register = Some((name, size));
            continue;
        }
        // Gate application: name[(params)] operand[, operand].
        let (reg_name, width) = register
            .as_ref()
            .ok_or_else(|| Error::Parse("gate before qreg declaration".into()))?;
        let circuit = circuit.as_mut().expect("register implies circuit");
        let first_space = stmt
            .find(|c: char| c.is_whitespace())
            .ok_or_else(|| Error::Parse(format!("malformed statement {stmt:?}")))?;
        // A parenthesized parameter list may itself contain spaces; split at
        // the first whitespace after any closing parenthesis.
        let head_end = match stmt.find('(') {
            Some(open) if open < first_space => {
                let close = stmt
                    .find(')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced parens in {stmt:?}")))?;
                close + 1
            }
            _ => first_space,
        };
        let head = stmt[..head_end].trim();
        let operands: Vec<usize> = stmt[head_end..]
            .split(',')
            .map(|op| parse_operand(op.trim(), reg_name, *width))
            .collect::<Result<_>>()?;
        if head == "cx" || head == "CX" {
            if operands.len() != 2 {
                return Err(Error::Parse("cx needs two operands".into()));
            }
            circuit.cx(operands[0], operands[1]);
            continue;
        }
        if head == "barrier" {
            continue;
        }
        let matrix = label_matrix(head)
            .ok_or_else(|| Error::Parse(format!("unknown gate {head:?}")))?;
        if operands.len() != 1 {
            return Err(Error::Parse(format!("{head:?} needs one operand")));
        }
        circuit.u1q_labeled(matrix, operands[0], head);
    }
    if !saw_header {
        return Err(Error::Parse("missing OPENQASM 2.0 header".into()));
    }
    circuit.ok_or_else(|| Error::Parse("no quantum register declared".into()))
}

fn parse_operand(op: &str, reg_name: &str, width: usize) -> Result<usize> {
    let open = op
        .find('[')
        .ok_or_else(|| Error::Parse(format!("malformed operand {op:?}")))?;
    let close = op
        .find(']')
        .ok_or_else(|| Error::Parse(format!("malformed operand {op:?}")))?;
    if op[..open].trim() != reg_name {
        return Err(Error::Parse(format!("unknown register in {op:?}")));
    }
    let idx: usize = op[open + 1..close]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad index in {op:?}")))?;
    if idx >= width {
        return Err(Error::Parse(format!("index out of range in {op:?}")));
    }
    Ok(idx)
}
