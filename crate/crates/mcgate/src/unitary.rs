//! Exact 2x2 complex-matrix machinery: named gates, eigendecomposition,
//! principal `2^j`-th roots, the spectral error metric and its inverse
//! (minimal base-control count), ZYZ/ABC factorizations, and the
//! interleave solver used by the multi-controlled SU(2) scheme.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Unitarity residual above which construction-time checks reject a matrix.
pub const CONSTRUCTION_TOL: f64 = 1e-8;
/// Residual allowed by post-hoc verification of exact paths.
pub const VERIFY_TOL: f64 = 1e-10;

/// A 2x2 complex matrix, stored row-major: `[m00, m01, m10, m11]`.
///
/// The type itself does not enforce unitarity; operations that require it
/// check the residual against [`CONSTRUCTION_TOL`] and reject otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryMatrix2 {
    pub data: [C64; 4],
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl UnitaryMatrix2 {
    pub fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Self {
            data: [m00, m01, m10, m11],
        }
    }

    pub fn identity() -> Self {
        Self::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))
    }

    pub fn x() -> Self {
        Self::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
    }

    pub fn y() -> Self {
        Self::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
    }

    pub fn z() -> Self {
        Self::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
    }

    pub fn h() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0))
    }

    pub fn t() -> Self {
        Self::phase(PI / 4.0)
    }

    pub fn t_dagger() -> Self {
        Self::phase(-PI / 4.0)
    }

    pub fn s() -> Self {
        Self::phase(PI / 2.0)
    }

    pub fn s_dagger() -> Self {
        Self::phase(-PI / 2.0)
    }

    /// The phase gate `P(alpha) = diag(1, e^{i alpha})`.
    pub fn phase(alpha: f64) -> Self {
        Self::new(
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            C64::from_polar(1.0, alpha),
        )
    }

    pub fn rx(theta: f64) -> Self {
        let (s, co) = (theta / 2.0).sin_cos();
        Self::new(c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0))
    }

    pub fn ry(theta: f64) -> Self {
        let (s, co) = (theta / 2.0).sin_cos();
        Self::new(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
    }

    pub fn rz(theta: f64) -> Self {
        Self::new(
            C64::from_polar(1.0, -theta / 2.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            C64::from_polar(1.0, theta / 2.0),
        )
    }

    /// The generic three-angle gate `u(theta, phi, lambda)` (OpenQASM `u3`):
    /// `[[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]]`.
    pub fn u3(theta: f64, phi: f64, lambda: f64) -> Self {
        let (s, co) = (theta / 2.0).sin_cos();
        Self::new(
            c(co, 0.0),
            -C64::from_polar(s, lambda),
            C64::from_polar(s, phi),
            C64::from_polar(co, phi + lambda),
        )
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[2 * row + col]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let a = &self.data;
        let b = &rhs.data;
        Self::new(
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        )
    }

    pub fn adjoint(&self) -> Self {
        let a = &self.data;
        Self::new(a[0].conj(), a[2].conj(), a[1].conj(), a[3].conj())
    }

    pub fn scale(&self, factor: C64) -> Self {
        let a = &self.data;
        Self::new(a[0] * factor, a[1] * factor, a[2] * factor, a[3] * factor)
    }

    pub fn det(&self) -> C64 {
        self.data[0] * self.data[3] - self.data[1] * self.data[2]
    }

    pub fn trace(&self) -> C64 {
        self.data[0] + self.data[3]
    }

    /// Largest entrywise deviation of `U U^dagger` from the identity.
    pub fn unitarity_residual(&self) -> f64 {
        self.mul(&self.adjoint()).max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    /// Rejects the matrix unless it is unitary within [`CONSTRUCTION_TOL`].
    pub fn checked_unitary(&self) -> Result<()> {
        let r = self.unitarity_residual();
        if r > CONSTRUCTION_TOL {
            Err(Error::NonUnitary(r))
        } else {
            Ok(())
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest singular value of `self - other` (the spectral distance).
    pub fn spectral_diff(&self, other: &Self) -> f64 {
        let d = Self::new(
            self.data[0] - other.data[0],
            self.data[1] - other.data[1],
            self.data[2] - other.data[2],
            self.data[3] - other.data[3],
        );
        d.operator_norm()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        // Largest eigenvalue of the 2x2 Hermitian matrix M^dagger M.
        let m = self.adjoint().mul(self);
        let p = m.data[0].re;
        let r = m.data[3].re;
        let q = m.data[1].norm_sqr();
        let mid = (p + r) / 2.0;
        let rad = ((p - r) / 2.0).powi(2) + q;
        (mid + rad.sqrt()).max(0.0).sqrt()
    }

    /// Entrywise distance minimized over a global phase.
    pub fn max_abs_diff_up_to_phase(&self, other: &Self) -> f64 {
        // Align on the largest entry of `other`.
        let (idx, _) = other
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap();
        if other.data[idx].norm() < 1e-12 || self.data[idx].norm() < 1e-12 {
            return self.max_abs_diff(other);
        }
        let phase = (other.data[idx] / self.data[idx]).arg();
        self.scale(C64::from_polar(1.0, phase)).max_abs_diff(other)
    }
}

/// Eigendecomposition of a 2x2 unitary: `basis * diag(e^{i theta1}, e^{i theta2}) * basis^dagger`.
#[derive(Clone, Copy, Debug)]
pub struct EigenSystem {
    /// Eigenphases in `(-pi, pi]`; the branch at the cut is fixed to `+pi`.
    pub theta1: f64,
    pub theta2: f64,
    /// Columns are the orthonormal eigenvectors.
    pub basis: UnitaryMatrix2,
}

impl EigenSystem {
    pub fn reconstruct(&self) -> UnitaryMatrix2 {
        self.diag_power(1.0)
    }

    /// `basis * diag(e^{i theta1 p}, e^{i theta2 p}) * basis^dagger`.
    pub fn diag_power(&self, p: f64) -> UnitaryMatrix2 {
        let d = UnitaryMatrix2::new(
            C64::from_polar(1.0, self.theta1 * p),
            c(0.0, 0.0),
            c(0.0, 0.0),
            C64::from_polar(1.0, self.theta2 * p),
        );
        self.basis.mul(&d).mul(&self.basis.adjoint())
    }

    /// Largest-magnitude eigenphase.
    pub fn max_abs_phase(&self) -> f64 {
        self.theta1.abs().max(self.theta2.abs())
    }
}

/// Maps an angle to `(-pi, pi]`, sending the branch cut to `+pi`.
fn principal_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    // `arg` may return exactly -pi for values like -1 - 0.0i; the principal
    // branch is fixed at +pi so roots are deterministic.
    if t <= -PI + 1e-13 {
        t = PI;
    }
    t
}

/// Closed-form eigendecomposition of a 2x2 unitary.
///
/// Degenerate spectra return the identity basis. Eigenphases land in
/// `(-pi, pi]` with the branch cut mapped to `+pi`.
pub fn eigen_decompose(u: &UnitaryMatrix2) -> Result<EigenSystem> {
    u.checked_unitary()?;
    let tr = u.trace();
    let det = u.det();
    let disc = tr * tr - det.scale(4.0);
    let sq = disc.sqrt();
    let lam1 = (tr + sq).scale(0.5);
    let lam2 = (tr - sq).scale(0.5);

    if (lam1 - lam2).norm() < 1e-12 {
        // u = lam * I (a normal matrix with a degenerate spectrum is scalar).
        let theta = principal_phase(lam1.arg());
        return Ok(EigenSystem {
            theta1: theta,
            theta2: theta,
            basis: UnitaryMatrix2::identity(),
        });
    }

    // Eigenvector for lam1: columns of (u - lam2 I) span its eigenspace.
    let cand_a = (u.data[0] - lam2, u.data[2]);
    let cand_b = (u.data[1], u.data[3] - lam2);
    let (vx, vy) = if cand_a.0.norm_sqr() + cand_a.1.norm_sqr()
        >= cand_b.0.norm_sqr() + cand_b.1.norm_sqr()
    {
        cand_a
    } else {
        cand_b
    };
    let norm = (vx.norm_sqr() + vy.norm_sqr()).sqrt();
    let (vx, vy) = (vx / norm, vy / norm);
    // A unitary is normal, so the orthogonal complement is the lam2 eigenspace.
    let basis = UnitaryMatrix2::new(vx, -vy.conj(), vy, vx.conj());
    Ok(EigenSystem {
        theta1: principal_phase(lam1.arg()),
        theta2: principal_phase(lam2.arg()),
        basis,
    })
}

/// Principal `2^j`-th root: each eigenphase (taken in `(-pi, pi]`) divided by `2^j`.
pub fn root_pow2(u: &UnitaryMatrix2, j: u32) -> Result<UnitaryMatrix2> {
    let es = eigen_decompose(u)?;
    Ok(es.diag_power(1.0 / f64::powi(2.0, j as i32)))
}

/// `max_i |e^{i theta_i / N} - 1|`, i.e. `sqrt(2 (1 - cos(theta*/N)))` with
/// `theta*` the largest-magnitude eigenphase of `u`.
pub fn spectral_error(u: &UnitaryMatrix2, big_n: u64) -> Result<f64> {
    if big_n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let es = eigen_decompose(u)?;
    let err = |theta: f64| (C64::from_polar(1.0, theta / big_n as f64) - c(1.0, 0.0)).norm();
    Ok(err(es.theta1).max(err(es.theta2)))
}

/// Spectral error for a bare worst-case eigenphase magnitude.
pub fn spectral_error_for_theta(theta_abs: f64, big_n: u64) -> f64 {
    (2.0 * (1.0 - (theta_abs / big_n as f64).cos())).max(0.0).sqrt()
}

/// Minimal `n_base` with `spectral_error <= epsilon` for any unitary whose
/// largest eigenphase magnitude is `theta_abs`:
/// `ceil(log2(theta_abs / arccos(1 - eps^2/2)) + 1)`, clamped to at least 1.
pub fn min_base_controls(theta_abs: f64, epsilon: f64) -> Result<u32> {
    if !(epsilon > 0.0 && epsilon <= 2.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be in (0, 2], got {epsilon}"
        )));
    }
    if !(theta_abs > 0.0 && theta_abs <= PI) {
        return Err(Error::InvalidArgument(format!(
            "theta must be in (0, pi], got {theta_abs}"
        )));
    }
    let denom = (1.0 - epsilon * epsilon / 2.0).acos();
    let mut nb = if denom <= 0.0 {
        1
    } else {
        ((theta_abs / denom).log2() + 1.0).ceil().max(1.0) as u32
    };
    // Defensive: the formula is exact in real arithmetic; guard against
    // floating-point rounding right at a threshold.
    while spectral_error_for_theta(theta_abs, 1u64 << (nb - 1)) > epsilon {
        nb += 1;
    }
    Ok(nb)
}

/// The plan governing the approximate constructions: `N = 2^(n_base - 1)`
/// halvings bring the worst-case eigenvalue within `epsilon` of 1.
#[derive(Clone, Copy, Debug)]
pub struct ApproxPlan {
    /// Largest-magnitude eigenphase of the gate being approximated.
    pub theta: f64,
    pub epsilon: f64,
    pub n_base: u32,
    /// `2^(n_base - 1)`.
    pub big_n: u64,
    pub predicted_error: f64,
}

impl ApproxPlan {
    pub fn for_gate(u: &UnitaryMatrix2, epsilon: f64) -> Result<Self> {
        let es = eigen_decompose(u)?;
        Self::for_theta(es.max_abs_phase(), epsilon)
    }

    pub fn for_theta(theta_abs: f64, epsilon: f64) -> Result<Self> {
        if theta_abs < 1e-15 {
            // The gate is (a phase times) the identity; one base control
            // already carries zero error.
            return Ok(Self {
                theta: 0.0,
                epsilon,
                n_base: 1,
                big_n: 1,
                predicted_error: 0.0,
            });
        }
        let n_base = min_base_controls(theta_abs, epsilon)?;
        let big_n = 1u64 << (n_base - 1);
        Ok(Self {
            theta: theta_abs,
            epsilon,
            n_base,
            big_n,
            predicted_error: spectral_error_for_theta(theta_abs, big_n),
        })
    }
}

/// The ABC factorization behind the 2-CNOT controlled-U construction:
/// `U = e^{i alpha} A X B X C` with `A B C = I`.
#[derive(Clone, Copy, Debug)]
pub struct AbcFactorization {
    pub global_phase_alpha: f64,
    pub a_gate: UnitaryMatrix2,
    pub b_gate: UnitaryMatrix2,
    pub c_gate: UnitaryMatrix2,
}

/// ZYZ Euler angles: `u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)`.
pub fn zyz_angles(u: &UnitaryMatrix2) -> Result<(f64, f64, f64, f64)> {
    u.checked_unitary()?;
    let alpha = u.det().arg() / 2.0;
    let v = u.scale(C64::from_polar(1.0, -alpha)); // special-unitary now
    let n00 = v.data[0].norm();
    let n10 = v.data[2].norm();
    let gamma = 2.0 * n10.atan2(n00);
    let (beta, delta) = if n10 < 1e-12 {
        (-2.0 * v.data[0].arg(), 0.0)
    } else if n00 < 1e-12 {
        (2.0 * v.data[2].arg(), 0.0)
    } else {
        let bpd = -2.0 * v.data[0].arg();
        let bmd = 2.0 * v.data[2].arg();
        ((bpd + bmd) / 2.0, (bpd - bmd) / 2.0)
    };
    Ok((alpha, beta, gamma, delta))
}

/// ABC factorization via ZYZ: `A = Rz(beta) Ry(gamma/2)`,
/// `B = Ry(-gamma/2) Rz(-(delta+beta)/2)`, `C = Rz((delta-beta)/2)`.
pub fn abc_factorize(u: &UnitaryMatrix2) -> Result<AbcFactorization> {
    let (alpha, beta, gamma, delta) = zyz_angles(u)?;
    Ok(AbcFactorization {
        global_phase_alpha: alpha,
        a_gate: UnitaryMatrix2::rz(beta).mul(&UnitaryMatrix2::ry(gamma / 2.0)),
        b_gate: UnitaryMatrix2::ry(-gamma / 2.0).mul(&UnitaryMatrix2::rz(-(delta + beta) / 2.0)),
        c_gate: UnitaryMatrix2::rz((delta - beta) / 2.0),
    })
}

/// Solves `X A^dagger X A = m` for special-unitary `A`, where `m` is
/// special-unitary with real off-diagonal entries: `m = [[a, -c], [c, conj(a)]]`.
///
/// The degenerate input `m = -I` is rejected; callers synthesize their
/// degenerate case differently.
pub fn solve_interleave(m: &UnitaryMatrix2) -> Result<UnitaryMatrix2> {
    m.checked_unitary()?;
    let a = m.data[0];
    let cc = m.data[2];
    let structure_residual = (m.data[3] - a.conj())
        .norm()
        .max((m.data[1] + cc).norm())
        .max(cc.im.abs())
        .max((m.det() - c(1.0, 0.0)).norm());
    if structure_residual > CONSTRUCTION_TOL {
        return Err(Error::InvalidArgument(format!(
            "matrix is not special-unitary with real off-diagonals (residual {structure_residual:.3e})"
        )));
    }
    let p = ((1.0 + a.re) / 2.0).max(0.0).sqrt();
    if p <= 1e-8 {
        return Err(Error::InvalidArgument(
            "degenerate input m = -I has no interleave solution here".into(),
        ));
    }
    let alpha = c(p, a.im / (2.0 * p));
    let beta = cc.re / (2.0 * p);
    let a_gate = UnitaryMatrix2::new(alpha, c(-beta, 0.0), c(beta, 0.0), alpha.conj());
    // The closed form is never trusted blindly: check the defining product.
    let product = UnitaryMatrix2::x()
        .mul(&a_gate.adjoint())
        .mul(&UnitaryMatrix2::x())
        .mul(&a_gate);
    let residual = product.max_abs_diff(m);
    if residual > VERIFY_TOL {
        return Err(Error::InvalidArgument(format!(
            "interleave solution failed its defining equation (residual {residual:.3e})"
        )));
    }
    Ok(a_gate)
}

/// Diagonal-structure predicates used to route SU(2) gates to the cheapest
/// multi-controlled construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub special_unitary: bool,
    pub real_main_diagonal: bool,
    pub real_secondary_diagonal: bool,
}

pub fn classify(u: &UnitaryMatrix2, tol: f64) -> Classification {
    let special_unitary = (u.det() - c(1.0, 0.0)).norm() <= 1e-10_f64.max(tol);
    let real_main_diagonal = u.data[0].im.abs() <= tol && u.data[3].im.abs() <= tol;
    let real_secondary_diagonal = u.data[1].im.abs() <= tol && u.data[2].im.abs() <= tol;
    Classification {
        special_unitary,
        real_main_diagonal,
        real_secondary_diagonal,
    }
}

/// Deterministic pseudo-random unitary used by tests and the sampled oracle.
pub fn random_unitary(rng: &mut impl rand::Rng) -> UnitaryMatrix2 {
    // Haar-ish: random SU(2) from three angles, times a random phase.
    let alpha: f64 = rng.gen_range(-PI..PI);
    let (beta, gamma, delta) = (
        rng.gen_range(-PI..PI),
        rng.gen_range(0.0..PI),
        rng.gen_range(-PI..PI),
    );
    UnitaryMatrix2::rz(beta)
        .mul(&UnitaryMatrix2::ry(gamma))
        .mul(&UnitaryMatrix2::rz(delta))
        .scale(C64::from_polar(1.0, alpha))
}

/// Deterministic pseudo-random special unitary with real off-diagonals.
pub fn random_real_secondary_su2(rng: &mut impl rand::Rng) -> UnitaryMatrix2 {
    // exp(i phi (ny sigma_y + nz sigma_z)) keeps the off-diagonals real.
    let phi: f64 = rng.gen_range(-PI..PI);
    let ny: f64 = rng.gen_range(-1.0..1.0);
    let nz: f64 = (1.0 - ny * ny).sqrt() * if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let (s, co) = phi.sin_cos();
    UnitaryMatrix2::new(
        c(co, s * nz),
        c(-s * ny, 0.0),
        c(s * ny, 0.0),
        c(co, -s * nz),
    )
}
