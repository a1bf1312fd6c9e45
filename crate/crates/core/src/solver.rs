//! Eigenvalue search for the spin-orbit operator: scan the secular function
//! G over a λ grid, refine sign-change brackets and touch-type minima, and
//! classify each root's multiplicity with the monodromy rank test
//! (multiplicity two ⇔ T(λ) = I).

use crate::graph::{GraphError, StarGraph};
use crate::roots::{golden_min, refine_sign_change};
use crate::transfer::monodromy;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("empty window: need lo < hi, got [{lo}, {hi}]")]
    EmptyWindow { lo: f64, hi: f64 },
    #[error("solver diverged: root candidate at lambda={lambda} stuck at residual {residual:e}")]
    Diverged { lambda: f64, residual: f64 },
    #[error("trace of the monodromy is not real (|Im| = {im:e} at lambda = {lambda}); configuration violates the conjugation structure")]
    NonRealTrace { lambda: f64, im: f64 },
    #[error("odd eigenvalue count {count} in (-1/2, 1/2); a root was missed or spurious")]
    OddCount { count: usize },
    #[error("eigenvalue count {count} in (-1/2, 1/2) exceeds the 2N bound {bound}")]
    BoundExceeded { count: usize, bound: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Numerical knobs for the eigenvalue search.
#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// scan points per unit of λ (the secular function has at most N+1
    /// frequencies, so the default resolves every oscillation for N ≤ 64)
    pub grid_per_unit: usize,
    /// accepted roots must reach |G| below this
    pub residual_tol: f64,
    /// multiplicity is two when ‖T−I‖_F falls below this
    pub mult_threshold: f64,
    /// bracket refinement stops at this interval width
    pub refine_tol: f64,
    /// roots closer than this to a window endpoint are flagged as boundary
    pub boundary_tol: f64,
    /// |G| local minima below this gate are investigated as touch roots
    pub touch_gate: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            grid_per_unit: 8192,
            residual_tol: 1e-9,
            mult_threshold: 1e-8,
            refine_tol: 1e-12,
            boundary_tol: 1e-9,
            touch_gate: 1e-3,
        }
    }
}

/// One eigenvalue of the spin-orbit operator.
#[derive(Clone, Copy, Debug)]
pub struct EigenRecord {
    /// eigenvalue λ̃ of the operator
    pub lambda_tilde: f64,
    /// shifted parameter λ = λ̃ − 1/2 (the secular variable)
    pub lambda: f64,
    /// 1 or 2
    pub multiplicity: u8,
    /// |G(λ)| at the refined root
    pub residual: f64,
    /// ‖T(λ) − I‖_F at the refined root
    pub identity_defect: f64,
    /// within boundary tolerance of a window endpoint; excluded from
    /// deficiency counts
    pub boundary: bool,
    /// touch-type zero whose rank test came back simple; kept after a
    /// densified local re-scan confirmed the root
    pub parabolic_suspect: bool,
}

/// Ordered eigenvalues in a λ̃ window.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub records: Vec<EigenRecord>,
    /// (lo, hi) in λ̃
    pub window: (f64, f64),
    /// Σ multiplicities over non-boundary records
    pub total_with_multiplicity: usize,
}

impl Spectrum {
    pub fn interior(&self) -> impl Iterator<Item = &EigenRecord> {
        self.records.iter().filter(|r| !r.boundary)
    }
}

struct Candidate {
    lambda: f64,
    from_touch: bool,
}

/// All eigenvalues λ̃ of the spin-orbit operator in (window_lo, window_hi),
/// with multiplicities from the monodromy rank test. Roots within
/// `boundary_tol` of the endpoints are reported with the boundary flag set
/// and do not count toward `total_with_multiplicity`.
pub fn find_eigenvalues(
    g: &StarGraph,
    window_lo: f64,
    window_hi: f64,
    opts: &SolverOptions,
) -> Result<Spectrum, SolverError> {
    if window_lo.is_nan() || window_hi.is_nan() || window_lo >= window_hi {
        return Err(SolverError::EmptyWindow { lo: window_lo, hi: window_hi });
    }
    // work in λ = λ̃ − 1/2, padded past the endpoints by a few grid cells so
    // touch roots sitting exactly on a window edge stay interior to the scan
    let pad = 1e-6 + 3.0 / opts.grid_per_unit as f64;
    let lo = window_lo - 0.5 - pad;
    let hi = window_hi - 0.5 + pad;

    // trace reality check, scaled: the conjugation structure makes tr T
    // exactly real, but roundoff in the entries grows with their magnitude
    let mut worst_im = (0.0f64, 0.0f64);
    let mut eval = |l: f64| {
        let m = monodromy(g, l);
        let scaled = m.im_trace / (1.0 + m.t.frobenius());
        if scaled > worst_im.1 {
            worst_im = (l, scaled);
        }
        m.secular
    };

    let n_pts = (((hi - lo) * opts.grid_per_unit as f64).ceil() as usize).max(64) + 1;
    let step = (hi - lo) / (n_pts - 1) as f64;
    let xs: Vec<f64> = (0..n_pts).map(|i| lo + step * i as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| eval(x)).collect();
    if worst_im.1 > 1e-10 {
        return Err(SolverError::NonRealTrace { lambda: worst_im.0, im: worst_im.1 });
    }

    let mut candidates: Vec<Candidate> = Vec::new();
    let mut bracketed = vec![false; n_pts];
    for i in 0..n_pts - 1 {
        if fs[i] == 0.0 {
            candidates.push(Candidate { lambda: xs[i], from_touch: false });
            bracketed[i] = true;
        } else if fs[i] * fs[i + 1] < 0.0 {
            let root = refine_sign_change(
                |l| monodromy(g, l).secular,
                xs[i],
                xs[i + 1],
                fs[i],
                fs[i + 1],
                opts.refine_tol,
                256,
            );
            candidates.push(Candidate { lambda: root, from_touch: false });
            bracketed[i] = true;
            bracketed[i + 1] = true;
        }
    }
    if fs[n_pts - 1] == 0.0 {
        candidates.push(Candidate { lambda: xs[n_pts - 1], from_touch: false });
    }
    // touch-type zeros: |G| local minima below the gate, away from brackets
    for i in 1..n_pts - 1 {
        if bracketed[i] || bracketed[i - 1] || bracketed[i + 1] {
            continue;
        }
        let (am, a, b) = (fs[i].abs(), fs[i - 1].abs(), fs[i + 1].abs());
        if am <= a && am <= b && am < opts.touch_gate {
            let (x0, _) = golden_min(
                |l| monodromy(g, l).secular.abs(),
                xs[i - 1],
                xs[i + 1],
                1e-14,
                200,
            );
            candidates.push(Candidate { lambda: x0, from_touch: true });
        }
    }

    // classify every candidate; polish double roots on the identity defect,
    // which is linear (not quadratic) near a T = I point
    let mut records: Vec<EigenRecord> = Vec::new();
    for c in candidates {
        let polish_window = (10.0 * step).max(1e-5);
        let (ld, defect) = golden_min(
            |l| monodromy(g, l).identity_defect,
            c.lambda - polish_window,
            c.lambda + polish_window,
            1e-15,
            300,
        );
        let (lambda, multiplicity, parabolic_suspect) = if defect < opts.mult_threshold {
            (ld, 2u8, false)
        } else if c.from_touch {
            // rank test says simple: either a pair of close simple roots or
            // a tangent crossing; re-scan densely around the candidate
            let (a, b) = (c.lambda - 2.0 * step, c.lambda + 2.0 * step);
            let fine = 4096;
            let h = (b - a) / fine as f64;
            let mut prev = monodromy(g, a).secular;
            let mut found: Vec<f64> = Vec::new();
            for k in 1..=fine {
                let x = a + h * k as f64;
                let fx = monodromy(g, x).secular;
                if prev * fx < 0.0 {
                    found.push(refine_sign_change(
                        |l| monodromy(g, l).secular,
                        x - h,
                        x,
                        prev,
                        fx,
                        opts.refine_tol,
                        256,
                    ));
                }
                prev = fx;
            }
            match found.len() {
                0 => {
                    // genuine tangent minimum of |G|
                    let (x0, g0) =
                        golden_min(|l| monodromy(g, l).secular.abs(), a, b, 1e-15, 300);
                    if g0 > opts.residual_tol {
                        continue; // near-miss, not a root
                    }
                    (x0, 1u8, true)
                }
                _ => {
                    for r in found {
                        let m = monodromy(g, r);
                        records.push(EigenRecord {
                            lambda_tilde: r + 0.5,
                            lambda: r,
                            multiplicity: 1,
                            residual: m.secular.abs(),
                            identity_defect: m.identity_defect,
                            boundary: false,
                            parabolic_suspect: false,
                        });
                    }
                    continue;
                }
            }
        } else {
            (c.lambda, 1u8, false)
        };
        let m = monodromy(g, lambda);
        records.push(EigenRecord {
            lambda_tilde: lambda + 0.5,
            lambda,
            multiplicity,
            residual: m.secular.abs(),
            identity_defect: m.identity_defect,
            boundary: false,
            parabolic_suspect,
        });
    }

    // sort, dedup within 1e-9 (keep the larger multiplicity / smaller residual)
    records.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).unwrap());
    let mut merged: Vec<EigenRecord> = Vec::new();
    for r in records {
        match merged.last_mut() {
            Some(last) if (r.lambda - last.lambda).abs() < 1e-9 => {
                if r.multiplicity > last.multiplicity
                    || (r.multiplicity == last.multiplicity && r.residual < last.residual)
                {
                    *last = r;
                }
            }
            _ => merged.push(r),
        }
    }

    // residual gate and window classification
    let mut out: Vec<EigenRecord> = Vec::new();
    for mut r in merged {
        if r.residual > opts.residual_tol {
            return Err(SolverError::Diverged { lambda: r.lambda, residual: r.residual });
        }
        let lt = r.lambda_tilde;
        let near_lo = (lt - window_lo).abs() <= opts.boundary_tol;
        let near_hi = (lt - window_hi).abs() <= opts.boundary_tol;
        if near_lo || near_hi {
            r.boundary = true;
            out.push(r);
        } else if lt > window_lo && lt < window_hi {
            out.push(r);
        }
        // roots in the pad strictly outside the window are dropped
    }
    let total = out.iter().filter(|r| !r.boundary).map(|r| r.multiplicity as usize).sum();
    Ok(Spectrum { records: out, window: (window_lo, window_hi), total_with_multiplicity: total })
}

/// Deficiency indices plus the witnessing spectrum in (−1/2, 1/2).
#[derive(Clone, Debug)]
pub struct DeficiencyReport {
    pub n_plus: usize,
    pub n_minus: usize,
    /// λ̃ values flagged at the window boundary (excluded from the count)
    pub boundary: Vec<f64>,
    pub spectrum: Spectrum,
}

/// Deficiency indices of the planar Dirac operator: half the number of
/// spin-orbit eigenvalues in the open interval (−1/2, 1/2), counted with
/// multiplicity. The count must be even (spectral symmetry) and at most 2N.
pub fn deficiency_indices(
    g: &StarGraph,
    opts: &SolverOptions,
) -> Result<DeficiencyReport, SolverError> {
    let spectrum = find_eigenvalues(g, -0.5, 0.5, opts)?;
    let count = spectrum.total_with_multiplicity;
    if count % 2 != 0 {
        return Err(SolverError::OddCount { count });
    }
    if count > 2 * g.n_edges() {
        return Err(SolverError::BoundExceeded { count, bound: 2 * g.n_edges() });
    }
    let boundary = spectrum
        .records
        .iter()
        .filter(|r| r.boundary)
        .map(|r| r.lambda_tilde)
        .collect();
    Ok(DeficiencyReport { n_plus: count / 2, n_minus: count / 2, boundary, spectrum })
}

/// One sweep evaluation; `n` is None when that value failed (confinement or
/// a solver error) with the message preserved.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub value: f64,
    pub n: Option<usize>,
    pub error: Option<String>,
    /// (λ̃, multiplicity) pairs in (−1/2, 1/2)
    pub eigenvalues: Vec<(f64, u8)>,
}

#[derive(Clone, Debug)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    /// (value_before, value_after, n_before, n_after) brackets where the
    /// index changed between consecutive successful rows
    pub transitions: Vec<(f64, f64, usize, usize)>,
}

/// Sweep a tied group of strengths: every τ_j with 1-based index in
/// `tied_indices` is set to each value in turn, other parameters fixed.
/// Per-value failures are recorded, not propagated.
pub fn sweep(
    template: &StarGraph,
    tied_indices: &[usize],
    values: &[f64],
    opts: &SolverOptions,
) -> SweepTable {
    let mut rows = Vec::with_capacity(values.len());
    for &v in values {
        let mut taus = template.taus().to_vec();
        for &j in tied_indices {
            taus[j - 1] = v;
        }
        let row = match template.with_taus(taus).map_err(SolverError::from).and_then(|g| {
            deficiency_indices(&g, opts)
        }) {
            Ok(rep) => SweepRow {
                value: v,
                n: Some(rep.n_plus),
                error: None,
                eigenvalues: rep
                    .spectrum
                    .interior()
                    .map(|r| (r.lambda_tilde, r.multiplicity))
                    .collect(),
            },
            Err(e) => SweepRow { value: v, n: None, error: Some(e.to_string()), eigenvalues: vec![] },
        };
        rows.push(row);
    }
    let mut transitions = Vec::new();
    let mut prev: Option<(f64, usize)> = None;
    for row in &rows {
        if let Some(n) = row.n {
            if let Some((pv, pn)) = prev {
                if pn != n {
                    transitions.push((pv, row.value, pn, n));
                }
            }
            prev = Some((row.value, n));
        }
    }
    SweepTable { rows, transitions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{broken_line_graph, StarGraph};
    use std::f64::consts::PI;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn free_graph_empty_window() {
        let g = StarGraph::new(vec![1.0, 2.0], vec![0.0; 3]).unwrap();
        let s = find_eigenvalues(&g, -0.5, 0.5, &opts()).unwrap();
        assert_eq!(s.total_with_multiplicity, 0);
        // the boundary eigenvalues at ±1/2 are flagged, not counted
        assert!(s.records.iter().all(|r| r.boundary));
        assert_eq!(s.records.len(), 2);
        assert!(s.records.iter().all(|r| r.multiplicity == 2));
    }

    #[test]
    fn free_graph_wide_window_touch_roots() {
        let g = StarGraph::new(vec![1.0, 2.0], vec![0.0; 3]).unwrap();
        let s = find_eigenvalues(&g, -2.0, 2.0, &opts()).unwrap();
        let lts: Vec<f64> = s.interior().map(|r| r.lambda_tilde).collect();
        assert_eq!(lts.len(), 4, "expected ±1/2, ±3/2, got {lts:?}");
        for (r, want) in s.interior().zip([-1.5, -0.5, 0.5, 1.5]) {
            assert!((r.lambda_tilde - want).abs() < 1e-10);
            assert_eq!(r.multiplicity, 2);
            assert!(r.identity_defect < 1e-8);
        }
    }

    #[test]
    fn equal_strength_wedge_counts() {
        // one simple eigenvalue in each half window away from omega = pi/2
        let g = broken_line_graph(1.0, 1.0, PI / 4.0).unwrap();
        let rep = deficiency_indices(&g, &opts()).unwrap();
        assert_eq!((rep.n_plus, rep.n_minus), (1, 1));
        let neg: Vec<_> =
            rep.spectrum.interior().filter(|r| r.lambda_tilde < 0.0).collect();
        let pos: Vec<_> =
            rep.spectrum.interior().filter(|r| r.lambda_tilde > 0.0).collect();
        assert_eq!(neg.len(), 1);
        assert_eq!(pos.len(), 1);
        assert_eq!(neg[0].multiplicity, 1);
    }

    #[test]
    fn straight_line_equal_strengths_self_adjoint() {
        let g = broken_line_graph(1.0, 1.0, PI / 2.0).unwrap();
        let rep = deficiency_indices(&g, &opts()).unwrap();
        assert_eq!((rep.n_plus, rep.n_minus), (0, 0));
    }

    #[test]
    fn zero_mode_double_at_origin() {
        let g = broken_line_graph(1.0, -4.0, 0.9).unwrap();
        let s = find_eigenvalues(&g, -0.2, 0.2, &opts()).unwrap();
        let recs: Vec<_> = s.interior().collect();
        assert_eq!(recs.len(), 1);
        assert!(recs[0].lambda_tilde.abs() < 1e-10);
        assert_eq!(recs[0].multiplicity, 2);
        assert!(recs[0].identity_defect < 1e-8);
    }

    #[test]
    fn near_zero_mode_is_clean() {
        // product −4 ± 0.1 must not produce an eigenvalue near 0
        for tr in [-3.9, -4.1] {
            let g = broken_line_graph(1.0, tr, 0.9).unwrap();
            let s = find_eigenvalues(&g, -0.5, 0.5, &opts()).unwrap();
            assert!(
                s.interior().all(|r| r.lambda_tilde.abs() > 1e-3),
                "tau_r={tr}: {:?}",
                s.records
            );
        }
    }

    #[test]
    fn symmetric_three_deficiency() {
        let g = StarGraph::symmetric(3, vec![4.0; 3]).unwrap();
        let rep = deficiency_indices(&g, &opts()).unwrap();
        assert_eq!((rep.n_plus, rep.n_minus), (1, 1));

        let g = StarGraph::symmetric(3, vec![1.0; 3]).unwrap();
        let rep = deficiency_indices(&g, &opts()).unwrap();
        assert_eq!((rep.n_plus, rep.n_minus), (0, 0));
    }

    #[test]
    fn six_edge_alternating_deficiency() {
        let g = StarGraph::symmetric(6, vec![1.0, -1.0, 1.0, 1.0, -1.0, 1.0]).unwrap();
        let rep = deficiency_indices(&g, &opts()).unwrap();
        assert_eq!((rep.n_plus, rep.n_minus), (2, 2));
        for r in rep.spectrum.interior() {
            assert_eq!(r.multiplicity, 2);
        }
    }

    #[test]
    fn window_validation() {
        let g = StarGraph::symmetric(2, vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            find_eigenvalues(&g, 0.5, -0.5, &opts()),
            Err(SolverError::EmptyWindow { .. })
        ));
    }

    #[test]
    fn spectrum_sorted_and_distinct() {
        let g = StarGraph::new(vec![0.7, 1.9, 3.1], vec![1.3, -0.6, 2.7, 0.4]).unwrap();
        let s = find_eigenvalues(&g, -2.0, 2.0, &opts()).unwrap();
        for w in s.records.windows(2) {
            assert!(w[1].lambda_tilde - w[0].lambda_tilde > 1e-9);
        }
        for r in &s.records {
            assert!(r.residual < 1e-9);
        }
    }

    #[test]
    fn doubled_grid_is_stable() {
        let g = StarGraph::new(vec![0.7, 1.9, 3.1], vec![1.3, -0.6, 2.7, 0.4]).unwrap();
        let s1 = find_eigenvalues(&g, -1.5, 1.5, &opts()).unwrap();
        let mut o2 = opts();
        o2.grid_per_unit *= 2;
        let s2 = find_eigenvalues(&g, -1.5, 1.5, &o2).unwrap();
        assert_eq!(s1.records.len(), s2.records.len());
        for (a, b) in s1.records.iter().zip(s2.records.iter()) {
            assert!((a.lambda_tilde - b.lambda_tilde).abs() < 1e-10);
            assert_eq!(a.multiplicity, b.multiplicity);
        }
    }

    #[test]
    fn sweep_reports_transitions_and_errors() {
        let template = StarGraph::symmetric(3, vec![1.0; 3]).unwrap();
        // tie all three strengths; cross the 2*sqrt(3) threshold; include the
        // confinement value 2.0 which must fail for that row only
        let values = [1.0, 2.0, 3.0, 4.0];
        let table = sweep(&template, &[1, 2, 3], &values, &opts());
        assert_eq!(table.rows.len(), 4);
        assert_eq!(table.rows[0].n, Some(0));
        assert!(table.rows[1].n.is_none() && table.rows[1].error.is_some());
        assert_eq!(table.rows[2].n, Some(0));
        assert_eq!(table.rows[3].n, Some(1));
        assert_eq!(table.transitions.len(), 1);
        let t = table.transitions[0];
        assert_eq!((t.2, t.3), (0, 1));
        assert!((t.0, t.1) == (3.0, 4.0));
    }

    #[test]
    fn boundary_eigenvalue_at_threshold_strength() {
        // symmetric 3-graph at tau = 2*sqrt(3): eigenvalue exactly at λ̃ = ±1/2
        let g = StarGraph::symmetric(3, vec![2.0 * 3.0f64.sqrt(); 3]).unwrap();
        let rep = deficiency_indices(&g, &opts()).unwrap();
        assert_eq!((rep.n_plus, rep.n_minus), (0, 0));
        assert_eq!(rep.boundary.len(), 2);
    }
}
