//! Angular eigenfunctions, the radial defect elements built from K_ν, and
//! the von Neumann extension data (unitary parameter, distinguished
//! extension, regularity exponent).
//!
//! An angular eigenfunction at λ is piecewise φ_j(θ) = (c_{j,1} e^{iλθ},
//! c_{j,2} e^{−iλθ}) on sector j; the coefficients are propagated from c_1
//! by inverting the unimodular edge transfers and checked against the wrap
//! condition. The unitary 𝒮 = σ·e_rad acts on coefficients by swapping the
//! two components sectorwise and sending λ to −λ−1 (λ̃ to −λ̃).

use crate::bessel::{bessel_k, BesselError};
use crate::graph::StarGraph;
use crate::linalg::{svd_one_sided_jacobi, CMat, C64};
use crate::solver::{find_eigenvalues, SolverOptions};
use crate::transfer::{edge_transfer, monodromy, wrap_transfer};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExtensionError {
    #[error("lambda = {lambda} is not an eigenvalue: |G| = {residual:e} exceeds tolerance")]
    NotAnEigenvalue { lambda: f64, residual: f64 },
    #[error("matching conditions violated: residual {residual:e} at lambda = {lambda}")]
    MatchingResidual { lambda: f64, residual: f64 },
    #[error("no zero mode: ||T(-1/2) - I|| = {defect:e}")]
    NoZeroMode { defect: f64 },
    #[error("extension parameter is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("extension parameter is {got}x{got}, deficiency index is {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("defect element domain: need 0 <= lambda_tilde < 1/2 and r > 0")]
    Domain,
    #[error(transparent)]
    Bessel(#[from] BesselError),
    #[error("eigenvalue search failed: {0}")]
    Solver(String),
}

const EIGEN_GATE: f64 = 1e-7;
const MATCH_TOL: f64 = 1e-8;

/// Piecewise-exponential eigenfunction of the spin-orbit operator,
/// normalized in L²(𝕊¹).
#[derive(Clone, Debug)]
pub struct AngularEigenfunction {
    /// shifted parameter λ = λ̃ − 1/2
    pub lambda: f64,
    /// per-sector coefficient pairs (c_{j,1}, c_{j,2}), j = 1..N
    pub coefficients: Vec<[C64; 2]>,
    /// L² norm after normalization (1 up to roundoff)
    pub norm: f64,
    /// sector endpoints ω_0..ω_N, copied from the graph
    omegas_full: Vec<f64>,
}

impl AngularEigenfunction {
    pub fn lambda_tilde(&self) -> f64 {
        self.lambda + 0.5
    }

    pub fn n_sectors(&self) -> usize {
        self.coefficients.len()
    }

    fn sector_width(&self, j: usize) -> f64 {
        self.omegas_full[j + 1] - self.omegas_full[j]
    }

    /// Exact L² inner product against another eigenfunction with the same λ:
    /// the exponentials cancel sectorwise, leaving
    /// Σ_j |𝕀_j| (c_{j,1} c̄'_{j,1} + c_{j,2} c̄'_{j,2}).
    pub fn inner(&self, other: &AngularEigenfunction) -> C64 {
        debug_assert!((self.lambda - other.lambda).abs() < 1e-9);
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..self.n_sectors() {
            let w = self.sector_width(j);
            acc += w
                * (self.coefficients[j][0] * other.coefficients[j][0].conj()
                    + self.coefficients[j][1] * other.coefficients[j][1].conj());
        }
        acc
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).re
    }

    /// Point evaluation; θ is reduced into [ω_0, ω_N).
    pub fn eval(&self, theta: f64) -> [C64; 2] {
        let lo = self.omegas_full[0];
        let hi = *self.omegas_full.last().unwrap();
        let span = hi - lo;
        let th = lo + (theta - lo).rem_euclid(span);
        let mut j = self.n_sectors() - 1;
        for s in 0..self.n_sectors() {
            if th < self.omegas_full[s + 1] {
                j = s;
                break;
            }
        }
        let up = C64::new(0.0, self.lambda * th).exp();
        [self.coefficients[j][0] * up, self.coefficients[j][1] * up.conj()]
    }

    /// Max norm of the N matching conditions (edge recursions plus wrap),
    /// scaled by the largest coefficient.
    pub fn matching_residual(&self, g: &StarGraph) -> f64 {
        let n = g.n_edges();
        let scale = self
            .coefficients
            .iter()
            .flat_map(|c| c.iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
            .max(1e-300);
        let mut worst = 0.0f64;
        for j in 2..=n {
            let a = edge_transfer(g, j, self.lambda).expect("index in range").entries;
            let rhs = a.apply(self.coefficients[j - 1]);
            let lhs = self.coefficients[j - 2];
            let r = ((lhs[0] - rhs[0]).norm_sqr() + (lhs[1] - rhs[1]).norm_sqr()).sqrt();
            worst = worst.max(r);
        }
        let b = wrap_transfer(g, self.lambda).entries;
        let rhs = b.apply(self.coefficients[0]);
        let lhs = self.coefficients[n - 1];
        let r = ((lhs[0] - rhs[0]).norm_sqr() + (lhs[1] - rhs[1]).norm_sqr()).sqrt();
        worst = worst.max(r);
        worst / scale
    }
}

/// Basis of ker(T(λ) − I): the standard pair when T = I to tolerance, else
/// the single SVD null direction.
pub fn kernel_basis(g: &StarGraph, lambda: f64) -> Result<Vec<[C64; 2]>, ExtensionError> {
    let m = monodromy(g, lambda);
    if m.secular.abs() > EIGEN_GATE {
        return Err(ExtensionError::NotAnEigenvalue { lambda, residual: m.secular.abs() });
    }
    if m.identity_defect < 1e-8 {
        return Ok(vec![
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ]);
    }
    let mut tm = CMat::zeros(2);
    tm.set(0, 0, m.t.a - C64::new(1.0, 0.0));
    tm.set(0, 1, m.t.b);
    tm.set(1, 0, m.t.c);
    tm.set(1, 1, m.t.d - C64::new(1.0, 0.0));
    let svd = svd_one_sided_jacobi(&tm, 1e-14);
    Ok(vec![[svd.v.get(0, 1), svd.v.get(1, 1)]])
}

/// Reconstruct the full eigenfunction from its first-sector coefficients by
/// stepwise inversion of the edge transfers, then verify the wrap condition
/// and normalize.
pub fn angular_eigenfunction(
    g: &StarGraph,
    lambda: f64,
    c1: [C64; 2],
) -> Result<AngularEigenfunction, ExtensionError> {
    let n = g.n_edges();
    let mut coeffs = Vec::with_capacity(n);
    coeffs.push(c1);
    for j in 2..=n {
        let a = edge_transfer(g, j, lambda).expect("index in range").entries;
        let prev = coeffs[j - 2];
        coeffs.push(a.inverse_unimodular().apply(prev));
    }
    let omegas_full: Vec<f64> = (0..=n).map(|j| g.omega(j)).collect();
    let mut phi =
        AngularEigenfunction { lambda, coefficients: coeffs, norm: 1.0, omegas_full };
    let residual = phi.matching_residual(g);
    if residual > MATCH_TOL {
        return Err(ExtensionError::MatchingResidual { lambda, residual });
    }
    let nrm = phi.norm_sq().sqrt();
    for c in &mut phi.coefficients {
        c[0] /= nrm;
        c[1] /= nrm;
    }
    phi.norm = phi.norm_sq().sqrt();
    Ok(phi)
}

/// Orthonormal eigenfunction basis at λ (length 1 or 2), Gram–Schmidt
/// applied when the eigenvalue is double.
pub fn eigenfunction_basis(
    g: &StarGraph,
    lambda: f64,
) -> Result<Vec<AngularEigenfunction>, ExtensionError> {
    let kb = kernel_basis(g, lambda)?;
    let mut out: Vec<AngularEigenfunction> = Vec::with_capacity(kb.len());
    for c1 in kb {
        let mut phi = angular_eigenfunction(g, lambda, c1)?;
        for prev in &out {
            let proj = phi.inner(prev);
            for j in 0..phi.coefficients.len() {
                phi.coefficients[j][0] -= proj * prev.coefficients[j][0];
                phi.coefficients[j][1] -= proj * prev.coefficients[j][1];
            }
        }
        let nrm = phi.norm_sq().sqrt();
        for c in &mut phi.coefficients {
            c[0] /= nrm;
            c[1] /= nrm;
        }
        phi.norm = phi.norm_sq().sqrt();
        out.push(phi);
    }
    Ok(out)
}

/// The unitary 𝒮 = σ·e_rad on eigenfunctions: components swap sectorwise
/// and the parameter moves to −λ−1 (λ̃ ↦ −λ̃). Verifies the image satisfies
/// the matching conditions at the new parameter; 𝒮² = id at coefficient
/// level.
pub fn s_map(
    g: &StarGraph,
    phi: &AngularEigenfunction,
) -> Result<AngularEigenfunction, ExtensionError> {
    let lambda_new = -phi.lambda - 1.0;
    let coefficients: Vec<[C64; 2]> =
        phi.coefficients.iter().map(|c| [c[1], c[0]]).collect();
    let out = AngularEigenfunction {
        lambda: lambda_new,
        coefficients,
        norm: phi.norm,
        omegas_full: phi.omegas_full.clone(),
    };
    let residual = out.matching_residual(g);
    if residual > MATCH_TOL {
        return Err(ExtensionError::MatchingResidual { lambda: lambda_new, residual });
    }
    Ok(out)
}

/// Orthonormal basis {φ_0^1, φ_0^2} of the zero mode (λ̃ = 0) with
/// 𝒮φ_0^1 = φ_0^2 and 𝒮φ_0^2 = φ_0^1, built by diagonalizing the 2×2
/// action of 𝒮 on ker(T(−1/2) − I) and combining the ±1 eigenvectors as
/// (φ_+1 ± φ_−1)/√2.
pub fn zero_mode_basis(
    g: &StarGraph,
) -> Result<(AngularEigenfunction, AngularEigenfunction), ExtensionError> {
    let m = monodromy(g, -0.5);
    if m.identity_defect >= 1e-8 {
        return Err(ExtensionError::NoZeroMode { defect: m.identity_defect });
    }
    let basis = eigenfunction_basis(g, -0.5)?;
    debug_assert_eq!(basis.len(), 2);
    // matrix of S in the orthonormal basis: S[k][l] = <S phi_l, phi_k>
    let s_images: Vec<AngularEigenfunction> =
        basis.iter().map(|p| s_map(g, p)).collect::<Result<_, _>>()?;
    let s00 = s_images[0].inner(&basis[0]);
    let s10 = s_images[0].inner(&basis[1]);
    let s01 = s_images[1].inner(&basis[0]);
    let s11 = s_images[1].inner(&basis[1]);
    // S is Hermitian with eigenvalues ±1; eigenvector for +1 of
    // [[s00, s01], [s10, s11]]
    let combine = |w: [C64; 2]| -> AngularEigenfunction {
        let mut coeffs = Vec::with_capacity(basis[0].coefficients.len());
        for j in 0..basis[0].coefficients.len() {
            coeffs.push([
                w[0] * basis[0].coefficients[j][0] + w[1] * basis[1].coefficients[j][0],
                w[0] * basis[0].coefficients[j][1] + w[1] * basis[1].coefficients[j][1],
            ]);
        }
        let mut phi = AngularEigenfunction {
            lambda: -0.5,
            coefficients: coeffs,
            norm: 1.0,
            omegas_full: basis[0].omegas_full.clone(),
        };
        let nrm = phi.norm_sq().sqrt();
        for c in &mut phi.coefficients {
            c[0] /= nrm;
            c[1] /= nrm;
        }
        phi.norm = 1.0;
        phi
    };
    // eigenvectors of the Hermitian 2×2 [[s00, s01],[s10, s11]] for ±1
    let eigvec = |mu: f64| -> [C64; 2] {
        let a = s00 - C64::new(mu, 0.0);
        let d = s11 - C64::new(mu, 0.0);
        // rows of (S - mu I) span the orthogonal complement; null vector from
        // the larger row for stability
        let r0 = (a.norm_sqr() + s01.norm_sqr()).sqrt();
        let r1 = (s10.norm_sqr() + d.norm_sqr()).sqrt();
        let v = if r0 >= r1 { [-s01, a] } else { [-d, s10] };
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n < 1e-14 {
            // S - mu I vanished: the basis vectors are already eigenvectors
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
        } else {
            [v[0] / n, v[1] / n]
        }
    };
    let v_plus = eigvec(1.0);
    let v_minus = eigvec(-1.0);
    let phi_plus = combine(v_plus);
    let phi_minus = combine(v_minus);
    let inv_sqrt2 = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    // φ_0^1 = (φ_+1 + φ_−1)/√2, φ_0^2 = (φ_+1 − φ_−1)/√2
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    for j in 0..phi_plus.coefficients.len() {
        c1.push([
            inv_sqrt2 * (phi_plus.coefficients[j][0] + phi_minus.coefficients[j][0]),
            inv_sqrt2 * (phi_plus.coefficients[j][1] + phi_minus.coefficients[j][1]),
        ]);
        c2.push([
            inv_sqrt2 * (phi_plus.coefficients[j][0] - phi_minus.coefficients[j][0]),
            inv_sqrt2 * (phi_plus.coefficients[j][1] - phi_minus.coefficients[j][1]),
        ]);
    }
    let mk = |coeffs: Vec<[C64; 2]>| AngularEigenfunction {
        lambda: -0.5,
        coefficients: coeffs,
        norm: 1.0,
        omegas_full: phi_plus.omegas_full.clone(),
    };
    let phi1 = mk(c1);
    let phi2 = mk(c2);
    let r1 = phi1.matching_residual(g);
    let r2 = phi2.matching_residual(g);
    if r1 > MATCH_TOL || r2 > MATCH_TOL {
        return Err(ExtensionError::MatchingResidual { lambda: -0.5, residual: r1.max(r2) });
    }
    Ok((phi1, phi2))
}

/// Sign of the defect equation (𝒅* ± i)f = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefectSign {
    Plus,
    Minus,
}

/// Radial defect element of the half-line operator at λ̃ ∈ [0, 1/2):
/// f = (√r K_{λ̃−1/2}(r), ∓i √r K_{λ̃+1/2}(r)) with − for [`DefectSign::Plus`].
#[derive(Clone, Copy, Debug)]
pub struct DefectElement {
    pub lambda_tilde: f64,
    pub sign: DefectSign,
}

impl DefectElement {
    pub fn new(lambda_tilde: f64, sign: DefectSign) -> Result<Self, ExtensionError> {
        if !(0.0..0.5).contains(&lambda_tilde) {
            return Err(ExtensionError::Domain);
        }
        Ok(DefectElement { lambda_tilde, sign })
    }

    /// Component values at radius r > 0; order symmetry K_ν = K_{−ν} covers
    /// the negative order λ̃ − 1/2.
    pub fn eval(&self, r: f64) -> Result<[C64; 2], ExtensionError> {
        if r <= 0.0 {
            return Err(ExtensionError::Domain);
        }
        let sq = r.sqrt();
        let f1 = sq * bessel_k(self.lambda_tilde - 0.5, r)?;
        let k2 = sq * bessel_k(self.lambda_tilde + 0.5, r)?;
        let f2 = match self.sign {
            DefectSign::Plus => C64::new(0.0, -k2),
            DefectSign::Minus => C64::new(0.0, k2),
        };
        Ok([C64::new(f1, 0.0), f2])
    }

    /// Max residual of the first-order defect system over an r grid, using
    /// central finite differences with step h ∝ r.
    pub fn ode_residual(&self, r_grid: &[f64]) -> Result<f64, ExtensionError> {
        let lt = self.lambda_tilde;
        let s = match self.sign {
            DefectSign::Plus => 1.0,
            DefectSign::Minus => -1.0,
        };
        let mut worst = 0.0f64;
        for &r in r_grid {
            let h = (1e-4 * r).max(1e-6);
            let fm = self.eval(r - h)?;
            let f0 = self.eval(r)?;
            let fp = self.eval(r + h)?;
            let d1 = (fp[0] - fm[0]) / (2.0 * h);
            let d2 = (fp[1] - fm[1]) / (2.0 * h);
            let i = C64::new(0.0, 1.0);
            // (d* ± i) f = 0 componentwise:
            //   ±i f1 − f2' − (λ̃/r) f2 = 0
            //   f1' − (λ̃/r) f1 ± i f2 = 0
            let r1 = s * i * f0[0] - d2 - lt / r * f0[1];
            let r2 = d1 - lt / r * f0[0] + s * i * f0[1];
            worst = worst.max(r1.norm()).max(r2.norm());
        }
        Ok(worst)
    }
}

/// Convenience matching the flat call shape: evaluate the defect element.
pub fn defect_element(
    lambda_tilde: f64,
    sign: DefectSign,
    r: f64,
) -> Result<[C64; 2], ExtensionError> {
    DefectElement::new(lambda_tilde, sign)?.eval(r)
}

/// Two-dimensional defect spinor K_{λ̃−1/2}(r)φ(θ) ± K_{λ̃+1/2}(r)(𝒮φ)(θ)
/// for the j-th basis eigenfunction at λ̃ ∈ [0, 1/2). Zero modes use the
/// 𝒮-paired basis {φ_0^1, 𝒮φ_0^1 = φ_0^2}.
pub struct DefectSpinor {
    pub lambda_tilde: f64,
    pub sign: DefectSign,
    phi: AngularEigenfunction,
    s_phi: AngularEigenfunction,
}

impl DefectSpinor {
    /// `basis_index` is 1-based, bounded by the eigenvalue multiplicity.
    pub fn new(
        g: &StarGraph,
        lambda_tilde: f64,
        basis_index: usize,
        sign: DefectSign,
    ) -> Result<Self, ExtensionError> {
        if !(0.0..0.5).contains(&lambda_tilde) {
            return Err(ExtensionError::Domain);
        }
        let zero_mode = lambda_tilde.abs() < 1e-9;
        let (phi, s_phi) = if zero_mode {
            let (p1, p2) = zero_mode_basis(g)?;
            match basis_index {
                1 => (p1, p2),
                2 => (p2, p1),
                _ => return Err(ExtensionError::Domain),
            }
        } else {
            let lambda = lambda_tilde - 0.5;
            let basis = eigenfunction_basis(g, lambda)?;
            if basis_index == 0 || basis_index > basis.len() {
                return Err(ExtensionError::Domain);
            }
            let phi = basis[basis_index - 1].clone();
            let s_phi = s_map(g, &phi)?;
            (phi, s_phi)
        };
        Ok(DefectSpinor { lambda_tilde, sign, phi, s_phi })
    }

    pub fn eval(&self, r: f64, theta: f64) -> Result<[C64; 2], ExtensionError> {
        if r <= 0.0 {
            return Err(ExtensionError::Domain);
        }
        let k_minus = bessel_k(self.lambda_tilde - 0.5, r)?;
        let k_plus = bessel_k(self.lambda_tilde + 0.5, r)?;
        let s = match self.sign {
            DefectSign::Plus => 1.0,
            DefectSign::Minus => -1.0,
        };
        let a = self.phi.eval(theta);
        let b = self.s_phi.eval(theta);
        Ok([k_minus * a[0] + s * k_plus * b[0], k_minus * a[1] + s * k_plus * b[1]])
    }
}

/// Flat evaluation of the defect spinor.
pub fn defect_spinor_2d(
    g: &StarGraph,
    lambda_tilde: f64,
    basis_index: usize,
    sign: DefectSign,
    r: f64,
    theta: f64,
) -> Result<[C64; 2], ExtensionError> {
    DefectSpinor::new(g, lambda_tilde, basis_index, sign)?.eval(r, theta)
}

/// Von Neumann extension data for one choice of unitary parameter.
#[derive(Clone, Debug)]
pub struct ExtensionDescriptor {
    /// deficiency index n = n₊ = n₋
    pub n: usize,
    pub u_matrix: CMat,
    /// U = I_n selects the distinguished extension
    pub is_distinguished: bool,
    /// sup of admissible Sobolev exponents, 1/2 + min(σ∩(0,∞)); None when a
    /// zero mode obstructs any H^{1/2} extension
    pub regularity_sup: Option<f64>,
    /// λ̃ = 0 is in the spectrum
    pub zero_mode: bool,
}

/// Build the descriptor for a given n×n unitary `u`, where n must equal the
/// graph's deficiency index.
pub fn extension_descriptor(
    g: &StarGraph,
    u: &CMat,
    opts: &SolverOptions,
) -> Result<ExtensionDescriptor, ExtensionError> {
    let report = crate::solver::deficiency_indices(g, opts)
        .map_err(|e| ExtensionError::Solver(e.to_string()))?;
    let n = report.n_plus;
    if u.dim() != n {
        return Err(ExtensionError::DimensionMismatch { got: u.dim(), expected: n });
    }
    let defect = u.unitarity_defect();
    if defect >= 1e-10 {
        return Err(ExtensionError::NotUnitary { defect });
    }
    let is_distinguished = u.frobenius_distance_to_identity() < 1e-12;
    let zero_mode = monodromy(g, -0.5).identity_defect < opts.mult_threshold;
    let regularity_sup = if zero_mode {
        None
    } else {
        Some(0.5 + min_positive_eigenvalue(g, opts)?)
    };
    Ok(ExtensionDescriptor { n, u_matrix: u.clone(), is_distinguished, regularity_sup, zero_mode })
}

/// Smallest positive eigenvalue of the spin-orbit operator, searching
/// adaptively widening windows.
pub fn min_positive_eigenvalue(
    g: &StarGraph,
    opts: &SolverOptions,
) -> Result<f64, ExtensionError> {
    for hi in [2.0, 4.0, 8.0, 16.0] {
        let s = find_eigenvalues(g, 1e-12, hi, opts)
            .map_err(|e| ExtensionError::Solver(e.to_string()))?;
        let first = s.interior().next().map(|r| r.lambda_tilde);
        if let Some(lt) = first {
            return Ok(lt);
        }
    }
    Err(ExtensionError::Solver("no positive eigenvalue below 16".into()))
}
