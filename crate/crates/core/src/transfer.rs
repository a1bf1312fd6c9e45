//! Transfer matrices for the angular eigenvalue problem, their monodromy
//! product T(λ), the scalar secular function G(λ) = tr T(λ) − 2, and a full
//! 2N×2N determinant oracle for cross-checking.
//!
//! The eigenfunction coefficients c_j = (c_{j,1}, c_{j,2}) on sector j are
//! propagated by A_j(λ): c_j ↦ c_{j−1} for j = 2..N and closed up by the
//! wrap matrix B(λ): c_1 ↦ c_N. λ̃ = λ + 1/2 is an eigenvalue of the
//! spin-orbit operator exactly when T(λ) = A_2 ⋯ A_N B fixes a nonzero
//! vector, i.e. when G(λ) = 0; the multiplicity is two exactly when
//! T(λ) = I.

use crate::graph::StarGraph;
use crate::linalg::{CMat, Mat2, C64};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TransferError {
    #[error("edge transfer index {j} out of range 2..={n}")]
    IndexOutOfRange { j: usize, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TransferKind {
    /// A_j for j in 2..=N
    Edge(usize),
    /// the wrap matrix B
    Wrap,
}

#[derive(Clone, Copy, Debug)]
pub struct TransferMatrix {
    pub entries: Mat2,
    pub kind: TransferKind,
}

/// e^{iφ} with the phase wrapped into (−π, π] first; keeps precision when a
/// λ sweep wanders far from the fundamental window.
#[inline]
pub(crate) fn cis_wrapped(phase: f64) -> C64 {
    let tau = 2.0 * std::f64::consts::PI;
    let wrapped = phase - tau * (phase / tau).round();
    C64::new(wrapped.cos(), wrapped.sin())
}

/// A_j(λ) = (1/p_j)·[[m_j, τ_j e^{−iω_{j−1}(2λ+1)}], [τ_j e^{iω_{j−1}(2λ+1)}, m_j]],
/// mapping c_j to c_{j−1}. Defined for j ∈ 2..=N.
pub fn edge_transfer(g: &StarGraph, j: usize, lambda: f64) -> Result<TransferMatrix, TransferError> {
    let n = g.n_edges();
    if j < 2 || j > n {
        return Err(TransferError::IndexOutOfRange { j, n });
    }
    let e = g.edge(j);
    let tau = g.tau(j);
    let ph = g.omega(j - 1) * (2.0 * lambda + 1.0);
    let z = cis_wrapped(ph);
    let inv_p = 1.0 / e.p;
    Ok(TransferMatrix {
        entries: Mat2::new(
            C64::new(e.m * inv_p, 0.0),
            tau * inv_p * z.conj(),
            tau * inv_p * z,
            C64::new(e.m * inv_p, 0.0),
        ),
        kind: TransferKind::Edge(j),
    })
}

/// B(λ) closing the circle, mapping c_1 to c_N:
/// (1/p_1)·[[m_1 e^{−2πiλ}, τ_1 e^{i(ω_1(2λ+1)−2πλ)}],
///          [τ_1 e^{−i(ω_1(2λ+1)−2πλ)}, m_1 e^{2πiλ}]].
pub fn wrap_transfer(g: &StarGraph, lambda: f64) -> TransferMatrix {
    let e = g.edge(1);
    let tau = g.tau(1);
    let two_pi_lambda = 2.0 * std::f64::consts::PI * lambda;
    let za = cis_wrapped(-two_pi_lambda);
    let zb = cis_wrapped(g.omega(1) * (2.0 * lambda + 1.0) - two_pi_lambda);
    let inv_p = 1.0 / e.p;
    TransferMatrix {
        entries: Mat2::new(e.m * inv_p * za, tau * inv_p * zb, tau * inv_p * zb.conj(), e.m * inv_p * za.conj()),
        kind: TransferKind::Wrap,
    }
}

/// Monodromy data at a real spectral parameter λ.
#[derive(Clone, Copy, Debug)]
pub struct Monodromy {
    /// T(λ) = A_2 ⋯ A_N · B
    pub t: Mat2,
    pub lambda: f64,
    /// G(λ) = Re tr T − 2; zero exactly at eigenvalues λ̃ = λ + 1/2.
    pub secular: f64,
    /// ‖T − I‖_F; zero exactly at multiplicity-two eigenvalues.
    pub identity_defect: f64,
    /// |Im tr T|; vanishes for real λ by the conjugation structure.
    pub im_trace: f64,
}

/// Assemble T(λ) and its secular data.
pub fn monodromy(g: &StarGraph, lambda: f64) -> Monodromy {
    let mut t = Mat2::identity();
    for j in 2..=g.n_edges() {
        t = t.mul(&edge_transfer(g, j, lambda).expect("index in range").entries);
    }
    t = t.mul(&wrap_transfer(g, lambda).entries);
    let tr = t.trace();
    Monodromy {
        t,
        lambda,
        secular: tr.re - 2.0,
        identity_defect: t.identity_defect(),
        im_trace: tr.im.abs(),
    }
}

/// Secular value alone; the hot path for λ scans.
pub fn secular(g: &StarGraph, lambda: f64) -> f64 {
    monodromy(g, lambda).secular
}

/// Determinant of the full 2N×2N linear system in the coefficients
/// (c_{1,1}, c_{1,2}, …, c_{N,1}, c_{N,2}), computed by LU with partial
/// pivoting. Vanishes exactly where G(λ) does; kept as an independent
/// oracle for the monodromy route.
pub fn secular_det_oracle(g: &StarGraph, lambda: f64) -> C64 {
    let n = g.n_edges();
    let dim = 2 * n;
    let mut m = CMat::zeros(dim);
    let one = C64::new(1.0, 0.0);
    // rows 2(j−2), 2(j−2)+1 for j = 2..N: c_{j−1} − A_j c_j = 0
    for j in 2..=n {
        let a = edge_transfer(g, j, lambda).expect("index in range").entries;
        let r = 2 * (j - 2);
        let c_prev = 2 * (j - 2); // c_{j−1} block
        let c_cur = 2 * (j - 1); // c_j block
        m.set(r, c_prev, one);
        m.set(r, c_cur, -a.a);
        m.set(r, c_cur + 1, -a.b);
        m.set(r + 1, c_prev + 1, one);
        m.set(r + 1, c_cur, -a.c);
        m.set(r + 1, c_cur + 1, -a.d);
    }
    // last two rows: c_N − B c_1 = 0
    let b = wrap_transfer(g, lambda).entries;
    let r = 2 * (n - 1);
    m.set(r, 2 * (n - 1), one);
    m.set(r, 0, -b.a);
    m.set(r, 1, -b.b);
    m.set(r + 1, 2 * (n - 1) + 1, one);
    m.set(r + 1, 0, -b.c);
    m.set(r + 1, 1, -b.d);
    m.det_lu()
}
