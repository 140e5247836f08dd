//! Sparse Bernoulli graph sampling by per-distance geometric skips.
//!
//! For each distance `d` the candidate left endpoints are cut into chunks
//! aligned to absolute coordinates, each chunk driven by its own counter-based
//! stream keyed by `(seed, d, chunk)`. A chunk's draws never depend on the
//! domain being sampled, so two domains sampled with the same seed agree on
//! every pair they share. Chunk lengths grow like `1/p_d`, which keeps the
//! number of streams opened at `O(|V|)` and the total work at
//! `O(#edges + |V|)`.

use rand::Rng;
use serde::Serialize;

use super::{dyson_coupling, DistanceLaw, EdgeProbFn};
use crate::error::{invalid, Result};
use crate::graph::{Graph, Interval};
use crate::rng::{mix2, mix3, rng_from_key, Seed};

const MIN_CHUNK: f64 = 1024.0;
const MAX_CHUNK: f64 = (1u64 << 40) as f64;
const SITE_TAG: u64 = 0x5349_5445;
const SITE_BLOCK: i64 = 1024;

fn chunk_len(p: f64) -> i64 {
    let target = if p > 0.0 { (1.0 / p).ceil() } else { MAX_CHUNK };
    let t = target.clamp(MIN_CHUNK, MAX_CHUNK) as u64;
    t.next_power_of_two() as i64
}

/// Calls `emit(i, i + d, u)` for every sampled pair inside `domain`, where
/// `u` is uniform on `[0, p_d)` given the pair is present.
pub(crate) fn for_each_pair(
    domain: Interval,
    law: DistanceLaw,
    seed: Seed,
    mut emit: impl FnMut(i64, i64, u64, f64),
) {
    if domain.len() < 2 || law.is_zero() {
        return;
    }
    let key = seed.key();
    for d in 1..domain.len() {
        let p = law.prob(d);
        if p <= 0.0 {
            continue;
        }
        let log_not = law.log_not(d);
        let (left_lo, left_hi) = (domain.lo(), domain.hi() - d as i64);
        let len = chunk_len(p);
        let mut k = left_lo.div_euclid(len);
        loop {
            let start = k * len;
            if start >= left_hi {
                break;
            }
            let end = (start + len).min(left_hi);
            let mut rng = rng_from_key(key, mix3(seed.stream, d, k as u64));
            let mut pos = start - 1;
            loop {
                let u: f64 = rng.random();
                let skip = if log_not == f64::NEG_INFINITY {
                    0.0
                } else {
                    ((1.0 - u).ln() / log_not).floor()
                };
                if skip >= (end - pos - 1) as f64 {
                    break;
                }
                pos += 1 + skip as i64;
                let label = rng.random::<f64>() * p;
                if pos >= left_lo {
                    emit(pos, pos + d as i64, d, label);
                }
            }
            k += 1;
        }
    }
}

/// Bernoulli graph on `v`: each pair present independently with `f(i, j)`.
pub fn sample_bernoulli(v: Interval, f: &EdgeProbFn, seed: Seed) -> Graph {
    let (law, dom) = f.resolve(v);
    let mut edges = Vec::new();
    for_each_pair(dom, law, seed, |i, j, _, _| edges.push((i, j)));
    Graph::from_trusted(v, edges)
}

/// A Dyson sample at `beta_max` where every present edge carries the
/// inverse temperature at which it appears. Thresholding at any
/// `β ≤ beta_max` yields an exact Dyson sample at `β`, and the family is
/// monotone in `β` (one uniform per pair).
#[derive(Debug, Clone)]
pub struct CoupledSample {
    vertices: Interval,
    alpha: f64,
    beta_max: f64,
    edges: Vec<(i64, i64)>,
    thresholds: Vec<f64>,
}

pub fn sample_coupled(v: Interval, alpha: f64, beta_max: f64, seed: Seed) -> Result<CoupledSample> {
    let f = EdgeProbFn::dyson(beta_max, alpha)?;
    let (law, dom) = f.resolve(v);
    let mut edges = Vec::new();
    let mut thresholds = Vec::new();
    for_each_pair(dom, law, seed, |i, j, d, u| {
        edges.push((i, j));
        // u < 1 − exp(−β J)  ⇔  β > −ln(1 − u) / J
        thresholds.push(-(-u).ln_1p() / dyson_coupling(d, alpha));
    });
    Ok(CoupledSample {
        vertices: v,
        alpha,
        beta_max,
        edges,
        thresholds,
    })
}

impl CoupledSample {
    pub fn vertices(&self) -> Interval {
        self.vertices
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta_max(&self) -> f64 {
        self.beta_max
    }

    pub fn edges(&self) -> &[(i64, i64)] {
        &self.edges
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn graph_at(&self, beta: f64) -> Graph {
        let edges = self
            .edges
            .iter()
            .zip(&self.thresholds)
            .filter(|(_, &t)| t < beta)
            .map(|(&e, _)| e)
            .collect();
        Graph::from_trusted(self.vertices, edges)
    }

    /// Edges with thresholds, in increasing threshold order.
    pub fn by_threshold(&self) -> Vec<(f64, (i64, i64))> {
        let mut v: Vec<(f64, (i64, i64))> = self
            .thresholds
            .iter()
            .copied()
            .zip(self.edges.iter().copied())
            .collect();
        v.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        v
    }
}

/// Output of the site-bond sampler: the graph and which vertices survived.
#[derive(Debug, Clone, Serialize)]
pub struct SiteBondSample {
    #[serde(skip)]
    pub graph: Graph,
    pub retained: Vec<bool>,
}

impl SiteBondSample {
    pub fn retained_count(&self) -> usize {
        self.retained.iter().filter(|&&r| r).count()
    }
}

/// Site-bond model: vertices kept with probability `lambda`, then each pair
/// of kept vertices joined with `f(i, j)`. The bond randomness is the same
/// stream [`sample_bernoulli`] uses, so `lambda = 1` reproduces it exactly.
pub fn sample_site_bond(
    v: Interval,
    lambda: f64,
    f: &EdgeProbFn,
    seed: Seed,
) -> Result<SiteBondSample> {
    if !(0.0..=1.0).contains(&lambda) {
        return invalid(format!(
            "site retention in [0, 1] violated (lambda = {lambda})"
        ));
    }
    let retained = site_mask(v, lambda, seed);
    let (law, dom) = f.resolve(v);
    let mut edges = Vec::new();
    if lambda > 0.0 {
        for_each_pair(dom, law, seed, |i, j, _, _| {
            if retained[v.index(i)] && retained[v.index(j)] {
                edges.push((i, j));
            }
        });
    }
    Ok(SiteBondSample {
        graph: Graph::from_trusted(v, edges),
        retained,
    })
}

fn site_mask(v: Interval, lambda: f64, seed: Seed) -> Vec<bool> {
    let key = seed.key();
    let site_stream = mix2(seed.stream, SITE_TAG);
    let mut mask = Vec::with_capacity(v.len() as usize);
    let mut x = v.lo();
    while x < v.hi() {
        let block = x.div_euclid(SITE_BLOCK);
        let mut rng = rng_from_key(key, mix2(site_stream, block as u64));
        let start = block * SITE_BLOCK;
        let end = (start + SITE_BLOCK).min(v.hi());
        for y in start..end {
            let keep = rng.random::<f64>() < lambda;
            if y >= x {
                mask.push(keep);
            }
        }
        x = end;
    }
    mask
}

/// `G ∪ H` with `H` a Dyson Bernoulli graph at strength `delta` on `g`'s vertices.
pub fn sprinkle(g: &Graph, delta: f64, alpha: f64, seed: Seed) -> Result<Graph> {
    if !(delta >= 0.0) {
        return invalid(format!("delta >= 0 violated (delta = {delta})"));
    }
    let h = sample_bernoulli(g.vertices(), &EdgeProbFn::dyson(delta, alpha)?, seed);
    g.union(&h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn constant_extremes() {
        let s = Seed::new(1, 2);
        let g = sample_bernoulli(iv(0, 50), &EdgeProbFn::constant(0.0).unwrap(), s);
        assert_eq!(g.edge_count(), 0);
        let g = sample_bernoulli(iv(0, 4), &EdgeProbFn::constant(1.0).unwrap(), s);
        assert_eq!(g.edge_count(), 6);
        let g = sample_bernoulli(iv(-3, 40), &EdgeProbFn::constant(1.0).unwrap(), s);
        assert_eq!(g.edge_count(), 43 * 42 / 2);
    }

    #[test]
    fn seeded_determinism() {
        let f = EdgeProbFn::dyson(1.0, 1.5).unwrap();
        let a = sample_bernoulli(iv(0, 3000), &f, Seed::new(9, 1));
        let b = sample_bernoulli(iv(0, 3000), &f, Seed::new(9, 1));
        assert_eq!(a.edges(), b.edges());
        let c = sample_bernoulli(iv(0, 3000), &f, Seed::new(9, 2));
        assert_ne!(a, c);
    }

    #[test]
    fn nested_domains_agree_on_overlap() {
        let f = EdgeProbFn::dyson(1.3, 1.5).unwrap();
        let s = Seed::new(4, 4);
        let big = sample_bernoulli(iv(-5000, 5000), &f, s);
        let small = sample_bernoulli(iv(-1200, 2500), &f, s);
        assert_eq!(big.induced_subgraph(iv(-1200, 2500)).unwrap(), small);
    }

    #[test]
    fn restriction_never_leaves_interval() {
        let r = iv(100, 300);
        let f = EdgeProbFn::constant(0.2).unwrap().restricted(r);
        let g = sample_bernoulli(iv(0, 400), &f, Seed::new(3, 3));
        assert!(g.edge_count() > 0);
        assert!(g
            .edges()
            .iter()
            .all(|&(a, b)| r.contains(a) && r.contains(b)));
        assert_eq!(g.vertices(), iv(0, 400));
    }

    #[test]
    fn coupled_thresholds_are_monotone_and_bounded() {
        let c = sample_coupled(iv(0, 2000), 1.5, 2.0, Seed::new(5, 0)).unwrap();
        assert!(c.thresholds().iter().all(|&t| (0.0..2.0).contains(&t)));
        let lo = c.graph_at(0.7);
        let hi = c.graph_at(1.4);
        let hi_set: HashSet<_> = hi.edges().iter().collect();
        assert!(lo.edges().iter().all(|e| hi_set.contains(e)));
        assert_eq!(c.graph_at(2.0).edge_count(), c.edges().len());
    }

    #[test]
    fn site_bond_extremes() {
        let f = EdgeProbFn::dyson(1.0, 1.5).unwrap();
        let s = Seed::new(8, 8);
        let sb = sample_site_bond(iv(0, 500), 0.0, &f, s).unwrap();
        assert_eq!(sb.graph.edge_count(), 0);
        assert_eq!(sb.retained_count(), 0);
        let sb = sample_site_bond(iv(0, 500), 1.0, &f, s).unwrap();
        assert_eq!(sb.graph, sample_bernoulli(iv(0, 500), &f, s));
        assert!(sample_site_bond(iv(0, 5), 1.5, &f, s).is_err());
    }

    #[test]
    fn site_bond_removed_vertices_are_isolated() {
        let f = EdgeProbFn::constant(0.5).unwrap();
        let sb = sample_site_bond(iv(-30, 70), 0.6, &f, Seed::new(2, 5)).unwrap();
        let v = sb.graph.vertices();
        for &(a, b) in sb.graph.edges() {
            assert!(sb.retained[(a - v.lo()) as usize]);
            assert!(sb.retained[(b - v.lo()) as usize]);
        }
    }

    #[test]
    fn sprinkle_zero_is_identity() {
        let f = EdgeProbFn::dyson(0.8, 1.5).unwrap();
        let g = sample_bernoulli(iv(0, 800), &f, Seed::new(1, 1));
        assert_eq!(sprinkle(&g, 0.0, 1.5, Seed::new(1, 2)).unwrap(), g);
    }

    #[test]
    fn sprinkle_on_empty_equals_bernoulli() {
        let s = Seed::new(6, 6);
        let empty = Graph::empty(iv(0, 700));
        let g = sprinkle(&empty, 0.9, 1.5, s).unwrap();
        let b = sample_bernoulli(iv(0, 700), &EdgeProbFn::dyson(0.9, 1.5).unwrap(), s);
        assert_eq!(g, b);
    }
}
