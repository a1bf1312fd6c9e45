//! Shared helpers for the integration suites: a deterministic stream of
//! random star-graph configurations.
#![allow(dead_code)] // each test binary uses its own subset

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use starshell::StarGraph;

/// Strength away from the confinement values, |τ| ≤ 5. A small band around
/// ±2 is excluded: the excluded set {±2} has measure zero but the derived
/// constant p loses relative accuracy in f64 as τ approaches it.
pub fn random_tau(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let t: f64 = rng.gen_range(-5.0..5.0);
        if (t.abs() - 2.0).abs() > 0.05 {
            return t;
        }
    }
}

/// Deterministic batch of mixed configurations, N ∈ {2..=n_max}, alternating
/// symmetric and general sector layouts.
pub fn random_configs(seed: u64, count: usize, n_max: usize) -> Vec<StarGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(2..=n_max);
        let taus: Vec<f64> = (0..n).map(|_| random_tau(&mut rng)).collect();
        let g = if out.len() % 2 == 0 {
            StarGraph::symmetric(n, taus)
        } else {
            // sector widths bounded away from zero, normalized to 2π
            let raw: Vec<f64> = (0..n).map(|_| 0.2 + rng.gen_range(0.0..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let widths: Vec<f64> =
                raw.iter().map(|w| w / total * 2.0 * std::f64::consts::PI).collect();
            let mut omegas = Vec::with_capacity(n - 1);
            let mut acc = 0.5 * widths[0];
            omegas.push(acc);
            for w in widths.iter().take(n - 1).skip(1) {
                acc += w;
                omegas.push(acc);
            }
            StarGraph::new(omegas, taus)
        };
        out.push(g.expect("generated configuration must validate"));
    }
    out
}
