//! Star-graph configuration: angles, coupling strengths, derived per-edge
//! constants, and validation.
//!
//! Conventions are fixed once here and used by every other module: edges are
//! enumerated counter-clockwise with clockwise normals, the angles satisfy
//! 0 < ω_1 < ω_2 < … < ω_{N−1} < 2π − ω_1, and the bookkeeping angles are
//! ω_0 = −ω_1 and ω_N = 2π − ω_1. Sector j spans (ω_{j−1}, ω_j).

use serde::Deserialize;
use thiserror::Error;

/// Absolute tolerance for detecting the excluded confinement case |τ| = 2.
pub const CONFINEMENT_TOL: f64 = 1e-12;

/// Spacing tolerance below which a graph counts as symmetric (equal sectors).
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("confinement: |tau_{index}| = 2 is excluded")]
    Confinement { index: usize },
    #[error("angle ordering violated: omega values must be strictly increasing")]
    AngleOrdering,
    #[error("angle range violated: need 0 < omega_1 and omega_{{N-1}} < 2*pi - omega_1")]
    AngleRange,
    #[error("need N >= 2 edges, got {0}")]
    EdgeCount(usize),
    #[error("expected {expected} omega values for N = {n}, got {got}")]
    OmegaCount { n: usize, expected: usize, got: usize },
    #[error("expected {expected} tau values, got {got}")]
    TauCount { expected: usize, got: usize },
    #[error("non-finite parameter")]
    NonFinite,
}

/// Per-edge derived constants for a Lorentz-scalar coupling of strength τ
/// (electrostatic strength fixed to zero): ε = −τ², p = 1 − τ²/4,
/// m = 1 + τ²/4. Away from confinement, m² − τ² = p² exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeConstants {
    pub epsilon: f64,
    pub p: f64,
    pub m: f64,
}

/// Edge constants for strength `tau`; rejects the confinement case |τ| = 2.
pub fn derive_edge_constants(tau: f64) -> Result<EdgeConstants, GraphError> {
    if !tau.is_finite() {
        return Err(GraphError::NonFinite);
    }
    if (tau.abs() - 2.0).abs() <= CONFINEMENT_TOL {
        return Err(GraphError::Confinement { index: 0 });
    }
    let epsilon = -tau * tau;
    Ok(EdgeConstants { epsilon, p: 1.0 + 0.25 * epsilon, m: 1.0 - 0.25 * epsilon })
}

/// Validated star-graph with N ≥ 2 edges. Immutable after construction.
#[derive(Clone, Debug)]
pub struct StarGraph {
    n_edges: usize,
    omegas: Vec<f64>,
    taus: Vec<f64>,
    edges: Vec<EdgeConstants>,
    symmetric: bool,
}

impl StarGraph {
    /// Build and validate a general graph from angles ω_1..ω_{N−1} and
    /// strengths τ_1..τ_N.
    pub fn new(omegas: Vec<f64>, taus: Vec<f64>) -> Result<StarGraph, GraphError> {
        let n = taus.len();
        if n < 2 {
            return Err(GraphError::EdgeCount(n));
        }
        if omegas.len() != n - 1 {
            return Err(GraphError::OmegaCount { n, expected: n - 1, got: omegas.len() });
        }
        if omegas.iter().chain(taus.iter()).any(|v| !v.is_finite()) {
            return Err(GraphError::NonFinite);
        }
        if omegas[0] <= 0.0 || omegas[n - 2] >= 2.0 * std::f64::consts::PI - omegas[0] {
            return Err(GraphError::AngleRange);
        }
        if omegas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GraphError::AngleOrdering);
        }
        let mut edges = Vec::with_capacity(n);
        for (i, &tau) in taus.iter().enumerate() {
            edges.push(
                derive_edge_constants(tau).map_err(|_| GraphError::Confinement { index: i + 1 })?,
            );
        }
        let mut g = StarGraph { n_edges: n, omegas, taus, edges, symmetric: false };
        g.symmetric = g.spacing_defect() < SYMMETRY_TOL;
        Ok(g)
    }

    /// Graph with N equal sectors: ω_j = (2j−1)π/N.
    pub fn symmetric(n_edges: usize, taus: Vec<f64>) -> Result<StarGraph, GraphError> {
        if n_edges < 2 {
            return Err(GraphError::EdgeCount(n_edges));
        }
        if taus.len() != n_edges {
            return Err(GraphError::TauCount { expected: n_edges, got: taus.len() });
        }
        let omegas = (1..n_edges)
            .map(|j| (2 * j - 1) as f64 * std::f64::consts::PI / n_edges as f64)
            .collect();
        StarGraph::new(omegas, taus)
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    /// ω_j for j ∈ 0..=N with the conventions ω_0 = −ω_1 and ω_N = 2π − ω_1.
    pub fn omega(&self, j: usize) -> f64 {
        if j == 0 {
            -self.omegas[0]
        } else if j == self.n_edges {
            2.0 * std::f64::consts::PI - self.omegas[0]
        } else {
            self.omegas[j - 1]
        }
    }

    /// Interior angles ω_1..ω_{N−1}.
    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    /// Strength τ_j, 1-based.
    pub fn tau(&self, j: usize) -> f64 {
        self.taus[j - 1]
    }

    /// Edge constants for edge j, 1-based.
    pub fn edge(&self, j: usize) -> EdgeConstants {
        self.edges[j - 1]
    }

    /// Width of sector j = |𝕀_j| = ω_j − ω_{j−1}, 1-based.
    pub fn sector_width(&self, j: usize) -> f64 {
        self.omega(j) - self.omega(j - 1)
    }

    /// Max deviation of sector widths from 2π/N.
    pub fn spacing_defect(&self) -> f64 {
        let target = 2.0 * std::f64::consts::PI / self.n_edges as f64;
        (1..=self.n_edges)
            .map(|j| (self.sector_width(j) - target).abs())
            .fold(0.0, f64::max)
    }

    /// True when all sectors have equal opening angle 2π/N.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Same graph with edge strengths replaced (angles kept). Used by sweeps.
    pub fn with_taus(&self, taus: Vec<f64>) -> Result<StarGraph, GraphError> {
        StarGraph::new(self.omegas.clone(), taus)
    }
}

/// Translate broken-line parameters (τ_l, τ_r) to star-graph strengths
/// (τ_1, τ_2) = (−τ_r, −τ_l).
///
/// The broken-line picture orients the normals outward from the wedge, the
/// star-graph picture orients both clockwise; flipping a normal flips the
/// sign of the strength on that edge. The map above is the one under which
/// the two 4×4 vertex matrices agree entrywise and the two secular
/// equations have identical root sets. Applying the map twice returns the
/// original pair.
pub fn convention_map_broken_line(tau_l: f64, tau_r: f64) -> (f64, f64) {
    (-tau_r, -tau_l)
}

/// Convenience: validated two-edge graph for broken-line parameters.
pub fn broken_line_graph(tau_l: f64, tau_r: f64, omega: f64) -> Result<StarGraph, GraphError> {
    let (t1, t2) = convention_map_broken_line(tau_l, tau_r);
    StarGraph::new(vec![omega], vec![t1, t2])
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed config JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown mode {0:?} (expected \"general\" or \"symmetric\")")]
    Mode(String),
    #[error("mode \"general\" requires an \"omega\" array")]
    MissingOmega,
    #[error("cannot parse angle {0:?}: expected radians or a pi fraction like \"pi/3\"")]
    Angle(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OmegaValue {
    Radians(f64),
    PiFraction(String),
}

#[derive(Deserialize)]
struct RawConfig {
    mode: String,
    n: usize,
    #[serde(default)]
    omega: Option<Vec<OmegaValue>>,
    tau: Vec<f64>,
}

/// Parse "pi", "2pi/3", "pi/3", "0.5pi" to radians.
fn parse_pi_fraction(s: &str) -> Option<f64> {
    let t = s.trim();
    let pos = t.find("pi")?;
    let (coef, rest) = t.split_at(pos);
    let rest = &rest[2..];
    let c: f64 = if coef.is_empty() { 1.0 } else { coef.trim().parse().ok()? };
    let d: f64 = if rest.is_empty() {
        1.0
    } else {
        let r = rest.trim();
        let r = r.strip_prefix('/')?;
        r.trim().parse().ok()?
    };
    if d == 0.0 {
        return None;
    }
    Some(c * std::f64::consts::PI / d)
}

/// Build a validated graph from the JSON configuration document
/// `{"mode":"general"|"symmetric","n":N,"omega":[..],"tau":[..]}`.
/// Angles are radians; string entries such as "pi/3" are accepted.
pub fn graph_from_json(text: &str) -> Result<StarGraph, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text)?;
    let omegas = match &raw.omega {
        None => None,
        Some(vs) => {
            let mut out = Vec::with_capacity(vs.len());
            for v in vs {
                match v {
                    OmegaValue::Radians(x) => out.push(*x),
                    OmegaValue::PiFraction(s) => {
                        out.push(parse_pi_fraction(s).ok_or_else(|| ConfigError::Angle(s.clone()))?)
                    }
                }
            }
            Some(out)
        }
    };
    match raw.mode.as_str() {
        "symmetric" => Ok(StarGraph::symmetric(raw.n, raw.tau)?),
        "general" => {
            let omegas = omegas.ok_or(ConfigError::MissingOmega)?;
            if raw.n != raw.tau.len() {
                return Err(ConfigError::Graph(GraphError::TauCount {
                    expected: raw.n,
                    got: raw.tau.len(),
                }));
            }
            Ok(StarGraph::new(omegas, raw.tau)?)
        }
        other => Err(ConfigError::Mode(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn edge_constants_free_edge() {
        let e = derive_edge_constants(0.0).unwrap();
        assert_eq!((e.epsilon, e.p, e.m), (0.0, 1.0, 1.0));
    }

    #[test]
    fn edge_constants_unit_strength() {
        let e = derive_edge_constants(1.0).unwrap();
        assert_eq!((e.epsilon, e.p, e.m), (-1.0, 0.75, 1.25));
    }

    #[test]
    fn edge_constants_confinement() {
        assert!(matches!(derive_edge_constants(2.0), Err(GraphError::Confinement { .. })));
        assert!(matches!(derive_edge_constants(-2.0), Err(GraphError::Confinement { .. })));
        assert!(matches!(derive_edge_constants(2.0 + 5e-13), Err(GraphError::Confinement { .. })));
    }

    #[test]
    fn exact_unimodularity_identity() {
        // (m² − τ²)/p² = 1 for a wide strength range; the ratio is computed
        // in f64, so a narrow band around ±2 (where p itself loses relative
        // accuracy to rounding in 1 − τ²/4) is excluded from the sweep
        for i in 0..2000 {
            let tau = -10.0 + 0.01 * i as f64;
            if (tau.abs() - 2.0).abs() < 0.02 {
                continue;
            }
            let e = derive_edge_constants(tau).unwrap();
            assert!(((e.m * e.m - tau * tau) / (e.p * e.p) - 1.0).abs() < 1e-12, "tau={tau}");
        }
    }

    #[test]
    fn validate_two_edge() {
        let g = StarGraph::new(vec![PI / 3.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(g.n_edges(), 2);
        assert!((g.omega(0) + PI / 3.0).abs() < 1e-15);
        assert!((g.omega(2) - (2.0 * PI - PI / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn validate_symmetric_three() {
        let g = StarGraph::new(vec![PI / 3.0, PI], vec![1.0, 1.0, 1.0]).unwrap();
        assert!(g.is_symmetric());
    }

    #[test]
    fn validate_ordering_violation() {
        assert_eq!(
            StarGraph::new(vec![PI, PI / 3.0], vec![1.0, 1.0, 1.0]).unwrap_err(),
            GraphError::AngleOrdering
        );
    }

    #[test]
    fn validate_range_violation() {
        assert_eq!(
            StarGraph::new(vec![-0.1], vec![1.0, 1.0]).unwrap_err(),
            GraphError::AngleRange
        );
        // omega_{N-1} >= 2 pi - omega_1
        assert_eq!(
            StarGraph::new(vec![0.5, 2.0 * PI - 0.4], vec![1.0, 1.0, 1.0]).unwrap_err(),
            GraphError::AngleRange
        );
    }

    #[test]
    fn symmetric_constructor_angles() {
        let g = StarGraph::symmetric(3, vec![1.0, 1.0, 1.0]).unwrap();
        assert!((g.omegas()[0] - PI / 3.0).abs() < 1e-15);
        assert!((g.omegas()[1] - PI).abs() < 1e-15);

        let g2 = StarGraph::symmetric(2, vec![1.0, -1.0]).unwrap();
        assert!((g2.omegas()[0] - PI / 2.0).abs() < 1e-15);

        let g6 = StarGraph::symmetric(6, vec![1.0, -1.0, 1.0, 1.0, -1.0, 1.0]).unwrap();
        for (j, &w) in g6.omegas().iter().enumerate() {
            assert!((w - (2 * (j + 1) - 1) as f64 * PI / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_validates_across_sizes() {
        for n in 2..=64 {
            let g = StarGraph::symmetric(n, vec![0.5; n]).unwrap();
            assert!(g.is_symmetric(), "N={n}");
        }
    }

    #[test]
    fn convention_map_examples() {
        // map preserves the product tau_l*tau_r and matches the vertex
        // matrices entrywise; it is an involution.
        assert_eq!(convention_map_broken_line(0.0, 0.0), (0.0, 0.0));
        let (t1, t2) = convention_map_broken_line(1.0, 1.0);
        assert_eq!(t1 * t2, 1.0);
        let (t1, t2) = convention_map_broken_line(3.0, -3.0);
        assert_eq!(t1 * t2, -9.0);
        let (a, b) = convention_map_broken_line(1.3, -0.4);
        let (c, d) = convention_map_broken_line(a, b);
        assert_eq!((c, d), (1.3, -0.4));
    }

    #[test]
    fn config_general() {
        let g = graph_from_json(
            r#"{"mode":"general","n":3,"omega":["pi/3","pi"],"tau":[1,1,1]}"#,
        )
        .unwrap();
        assert_eq!(g.n_edges(), 3);
        assert!(g.is_symmetric());
    }

    #[test]
    fn config_symmetric() {
        let g = graph_from_json(r#"{"mode":"symmetric","n":6,"tau":[1,-1,1,1,-1,1]}"#).unwrap();
        assert_eq!(g.n_edges(), 6);
    }

    #[test]
    fn config_rejects_garbage() {
        assert!(graph_from_json("{not json").is_err());
        assert!(graph_from_json(r#"{"mode":"o","n":2,"tau":[1,1]}"#).is_err());
        assert!(graph_from_json(r#"{"mode":"general","n":2,"tau":[1,1]}"#).is_err());
        assert!(
            graph_from_json(r#"{"mode":"general","n":2,"omega":["pie/3"],"tau":[1,1]}"#).is_err()
        );
    }

    #[test]
    fn pi_fraction_grammar() {
        assert!((parse_pi_fraction("pi").unwrap() - PI).abs() < 1e-15);
        assert!((parse_pi_fraction("pi/3").unwrap() - PI / 3.0).abs() < 1e-15);
        assert!((parse_pi_fraction("2pi/3").unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((parse_pi_fraction("0.5pi").unwrap() - 0.5 * PI).abs() < 1e-15);
        assert!(parse_pi_fraction("pi/0").is_none());
        assert!(parse_pi_fraction("tau/3").is_none());
    }
}
