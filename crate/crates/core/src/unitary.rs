//! The 2N×2N unitary vertex matrix of the momentum picture, its eigenphases,
//! and the arc-based spectral condition for symmetric graphs.
//!
//! Eigenphases are found by scanning θ ↦ |det(U − e^{iθ}I)| over the circle
//! and refining local minima; the multiplicity of a refined phase is the
//! number of singular values of U − e^{iθ}I below threshold (a rank test,
//! robust to clustered phases).

use crate::graph::StarGraph;
use crate::linalg::{svd_one_sided_jacobi, CMat, C64};
use crate::roots::golden_min;
use crate::solver::{EigenRecord, Spectrum};
use crate::transfer::monodromy;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum UnitaryError {
    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("phase resolution failure: found {found} eigenphases with multiplicity out of {expected}")]
    PhaseResolution { found: usize, expected: usize },
    #[error("graph is not symmetric (sector spacing defect {defect:e}); the arc condition requires equal sectors")]
    NotSymmetric { defect: f64 },
    #[error("degenerate constants: m_{index} = 0 (epsilon = 4)")]
    DegenerateConstants { index: usize },
    #[error("confinement constants: p_{index} = 0 (epsilon = -4)")]
    ConfinementConstants { index: usize },
}

/// The vertex unitary with its defect, kept for diagnostics and dumps.
#[derive(Clone, Debug)]
pub struct VertexUnitary {
    pub u: CMat,
    pub n_edges: usize,
    pub unitarity_defect: f64,
}

/// One eigenphase e^{iθ} of the vertex unitary.
#[derive(Clone, Copy, Debug)]
pub struct EigenphaseRecord {
    /// θ ∈ [0, 2π)
    pub theta: f64,
    pub z: C64,
    pub multiplicity: usize,
    /// strictly inside the arc 0 < θ < 2π/N (with exclusion bands)
    pub on_arc: bool,
}

/// one-based index wrapped into 1..=2N (−k ↦ 2N−k, 0 ↦ 2N), then zero-based
fn wrap_index(i: i64, two_n: i64) -> usize {
    (i - 1).rem_euclid(two_n) as usize
}

/// Build 𝒰_N: for each edge j (with ω_0 = −ω_1), row 2j−2 carries
/// e^{iω_{j−1}}τ_j/m_j at column 2j−3 and p_j/m_j at column 2j; row 2j−1
/// carries p_j/m_j at column 2j−3 and −e^{−iω_{j−1}}τ_j/m_j at column 2j.
pub fn build_vertex_unitary(g: &StarGraph) -> VertexUnitary {
    let n = g.n_edges();
    let two_n = (2 * n) as i64;
    let mut u = CMat::zeros(2 * n);
    for j in 1..=n {
        let e = g.edge(j);
        let tau = g.tau(j);
        let w = g.omega(j - 1);
        let phase = C64::new(w.cos(), w.sin());
        let r_even = wrap_index(2 * j as i64 - 2, two_n);
        let r_odd = wrap_index(2 * j as i64 - 1, two_n);
        let c_in = wrap_index(2 * j as i64 - 3, two_n);
        let c_out = wrap_index(2 * j as i64, two_n);
        u.set(r_even, c_in, phase * (tau / e.m));
        u.set(r_even, c_out, C64::new(e.p / e.m, 0.0));
        u.set(r_odd, c_in, C64::new(e.p / e.m, 0.0));
        u.set(r_odd, c_out, phase.conj() * (-tau / e.m));
    }
    let unitarity_defect = u.unitarity_defect();
    VertexUnitary { u, n_edges: n, unitarity_defect }
}

/// The 4×4 vertex matrix of the two-edge picture with electrostatic
/// strengths η kept general; unitary exactly when η_l = η_r = 0. Returns the
/// matrix and its unitarity defect.
pub fn electrostatic_vertex_n2(
    eta_l: f64,
    eta_r: f64,
    tau_l: f64,
    tau_r: f64,
    omega: f64,
) -> Result<(CMat, f64), UnitaryError> {
    let consts = |eta: f64, tau: f64, index: usize| -> Result<(f64, f64), UnitaryError> {
        let eps = eta * eta - tau * tau;
        let p = 1.0 + 0.25 * eps;
        let m = 1.0 - 0.25 * eps;
        if m.abs() <= 1e-12 {
            return Err(UnitaryError::DegenerateConstants { index });
        }
        if p.abs() <= 1e-12 {
            return Err(UnitaryError::ConfinementConstants { index });
        }
        Ok((p, m))
    };
    let (pl, ml) = consts(eta_l, tau_l, 1)?;
    let (pr, mr) = consts(eta_r, tau_r, 2)?;
    let ei = C64::new(omega.cos(), omega.sin());
    let mut u = CMat::zeros(4);
    u.set(0, 1, -ei * ((eta_r - tau_r) / mr));
    u.set(0, 2, C64::new(pr / mr, 0.0));
    u.set(1, 0, -ei * ((eta_l + tau_l) / ml));
    u.set(1, 3, C64::new(pl / ml, 0.0));
    u.set(2, 0, C64::new(pl / ml, 0.0));
    u.set(2, 3, -ei.conj() * ((eta_l - tau_l) / ml));
    u.set(3, 1, C64::new(pr / mr, 0.0));
    u.set(3, 2, -ei.conj() * ((eta_r + tau_r) / mr));
    let defect = u.unitarity_defect();
    Ok((u, defect))
}

const RANK_SV_TOL: f64 = 1e-7;
const PHASE_MERGE_TOL: f64 = 1e-9;
const ARC_BAND: f64 = 1e-9;

/// All eigenphases of a vertex unitary, with multiplicities summing to 2N.
///
/// Distinct phases closer than the rank threshold (1e−7) are reported as one
/// phase of higher multiplicity; phases separated by more than that but
/// hiding inside one scan cell after the densification retries produce a
/// PhaseResolution error rather than a silent miscount.
pub fn eigenphases(vu: &VertexUnitary) -> Result<Vec<EigenphaseRecord>, UnitaryError> {
    if vu.unitarity_defect >= 1e-8 {
        return Err(UnitaryError::NotUnitary { defect: vu.unitarity_defect });
    }
    let dim = 2 * vu.n_edges;
    let mut scan = 8192usize * vu.n_edges;
    for _attempt in 0..3 {
        let recs = scan_eigenphases(vu, scan)?;
        let total: usize = recs.iter().map(|r| r.multiplicity).sum();
        if total == dim {
            return Ok(recs);
        }
        scan *= 4;
    }
    let recs = scan_eigenphases(vu, scan)?;
    let total: usize = recs.iter().map(|r| r.multiplicity).sum();
    if total == dim {
        Ok(recs)
    } else {
        Err(UnitaryError::PhaseResolution { found: total, expected: dim })
    }
}

fn scan_eigenphases(vu: &VertexUnitary, scan: usize) -> Result<Vec<EigenphaseRecord>, UnitaryError> {
    let tau = 2.0 * std::f64::consts::PI;
    let det_at = |theta: f64| -> f64 {
        let z = C64::new(theta.cos(), theta.sin());
        vu.u.sub_scaled_identity(z).det_lu().norm()
    };
    let vals: Vec<f64> = (0..scan).map(|i| det_at(tau * i as f64 / scan as f64)).collect();
    let mut thetas: Vec<f64> = Vec::new();
    for i in 0..scan {
        let prev = vals[(i + scan - 1) % scan];
        let next = vals[(i + 1) % scan];
        if vals[i] < prev && vals[i] <= next {
            let center = tau * i as f64 / scan as f64;
            let half = tau / scan as f64;
            let (t, _) = golden_min(det_at, center - half, center + half, 1e-14, 200);
            thetas.push(t.rem_euclid(tau));
        }
    }
    thetas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // merge refined phases within tolerance (circular)
    let mut merged: Vec<f64> = Vec::new();
    for t in thetas {
        if merged.last().is_some_and(|&l| (t - l).abs() < PHASE_MERGE_TOL) {
            continue;
        }
        merged.push(t);
    }
    if merged.len() >= 2 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        if (first + tau - last).abs() < PHASE_MERGE_TOL {
            merged.pop();
        }
    }
    let n = vu.n_edges as f64;
    let mut out = Vec::with_capacity(merged.len());
    for t in merged {
        let z = C64::new(t.cos(), t.sin());
        let svd = svd_one_sided_jacobi(&vu.u.sub_scaled_identity(z), 1e-12);
        let mult = svd.sigma.iter().filter(|&&s| s < RANK_SV_TOL).count();
        if mult == 0 {
            continue; // spurious shallow minimum
        }
        let on_arc = t > ARC_BAND && t < tau / n - ARC_BAND;
        out.push(EigenphaseRecord { theta: t, z, multiplicity: mult, on_arc });
    }
    Ok(out)
}

/// Spectral window via the arc condition, valid for symmetric graphs only:
/// λ is an eigenvalue of the spin-orbit operator minus 1/2 exactly when
/// e^{−2πiλ/N} is an eigenphase, with matching multiplicity. Emits every
/// λ̃ = −Nθ/(2π) − Nk + 1/2 inside the window.
pub fn spectrum_via_arc(
    g: &StarGraph,
    window_lo: f64,
    window_hi: f64,
) -> Result<Spectrum, UnitaryError> {
    let defect = g.spacing_defect();
    if defect >= 1e-12 {
        return Err(UnitaryError::NotSymmetric { defect });
    }
    let vu = build_vertex_unitary(g);
    let phases = eigenphases(&vu)?;
    let n = g.n_edges() as f64;
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut records: Vec<EigenRecord> = Vec::new();
    for ph in &phases {
        let base = -n * ph.theta / two_pi; // k = 0 branch
        // enumerate k with λ̃ = base − N·k + 1/2 inside the padded window
        let lo_l = window_lo - 0.5 - 1e-9;
        let hi_l = window_hi - 0.5 + 1e-9;
        let k_min = ((base - hi_l) / n).floor() as i64 - 1;
        let k_max = ((base - lo_l) / n).ceil() as i64 + 1;
        for k in k_min..=k_max {
            let lambda = base - n * k as f64;
            if lambda < lo_l || lambda > hi_l {
                continue;
            }
            let lt = lambda + 0.5;
            let boundary =
                (lt - window_lo).abs() <= 1e-9 || (lt - window_hi).abs() <= 1e-9;
            if !boundary && (lt <= window_lo || lt >= window_hi) {
                continue;
            }
            let svd = svd_one_sided_jacobi(&vu.u.sub_scaled_identity(ph.z), 1e-12);
            let mut sig = svd.sigma.clone();
            sig.sort_by(|a, b| a.partial_cmp(b).unwrap());
            records.push(EigenRecord {
                lambda_tilde: lt,
                lambda,
                multiplicity: ph.multiplicity as u8,
                residual: sig[0],
                identity_defect: if ph.multiplicity >= 2 { sig[1] } else { sig.get(1).copied().unwrap_or(f64::INFINITY) },
                boundary,
                parabolic_suspect: false,
            });
        }
    }
    records.sort_by(|a, b| a.lambda_tilde.partial_cmp(&b.lambda_tilde).unwrap());
    let total = records.iter().filter(|r| !r.boundary).map(|r| r.multiplicity as usize).sum();
    Ok(Spectrum { records, window: (window_lo, window_hi), total_with_multiplicity: total })
}

/// Deficiency indices via the arc count (symmetric graphs): half the number
/// of eigenphases strictly on the arc, with multiplicity.
pub fn deficiency_via_arc(g: &StarGraph) -> Result<(usize, usize), UnitaryError> {
    let vu = build_vertex_unitary(g);
    let defect = g.spacing_defect();
    if defect >= 1e-12 {
        return Err(UnitaryError::NotSymmetric { defect });
    }
    let phases = eigenphases(&vu)?;
    let count: usize = phases.iter().filter(|p| p.on_arc).map(|p| p.multiplicity).sum();
    Ok((count / 2, count / 2))
}

/// Sanity hook used by tests: residual of the arc mapping against the
/// monodromy secular function at a mapped eigenvalue.
pub fn arc_monodromy_residual(g: &StarGraph, lambda: f64) -> f64 {
    monodromy(g, lambda).secular.abs()
}
