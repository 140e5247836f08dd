//! Fortuin–Kasteleyn random-cluster measures: weights, exact enumeration and
//! a single-bond heat-bath chain.

use std::collections::HashSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::EdgeProbFn;
use crate::dominance::DiscreteGraphLaw;
use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, Interval};
use crate::rng::Seed;
use crate::union_find::UnionFind;

/// Largest pair universe enumerated exactly (2^20 states).
pub const ENUMERATION_PAIR_LIMIT: usize = 20;
const MCMC_PAIR_LIMIT: u64 = 1 << 24;

/// `q^{ω(g)} ∏_{e∈g} f(e) ∏_{e∉g} (1 − f(e))` over all pairs of `g`'s vertices.
pub fn fk_weight(g: &Graph, f: &EdgeProbFn, q: f64) -> f64 {
    let present: HashSet<(i64, i64)> = g.edges().iter().copied().collect();
    let mut w = q.powi(g.clusters().count() as i32);
    for (i, j) in g.vertices().pairs() {
        let p = f.prob_unchecked(i, j);
        w *= if present.contains(&(i, j)) {
            p
        } else {
            1.0 - p
        };
    }
    w
}

/// Natural log of [`fk_weight`]; `-inf` when the configuration is impossible.
pub fn fk_log_weight(g: &Graph, f: &EdgeProbFn, q: f64) -> f64 {
    let present: HashSet<(i64, i64)> = g.edges().iter().copied().collect();
    let mut lw = g.clusters().count() as f64 * q.ln();
    for (i, j) in g.vertices().pairs() {
        let p = f.prob_unchecked(i, j);
        lw += if present.contains(&(i, j)) {
            p.ln()
        } else {
            (-p).ln_1p()
        };
    }
    lw
}

/// The FK measure on `v` as an explicit table over all subgraphs.
pub fn fk_exact_distribution(v: Interval, f: &EdgeProbFn, q: f64) -> Result<DiscreteGraphLaw> {
    if !(q > 0.0) {
        return invalid(format!("q > 0 violated (q = {q})"));
    }
    let pairs: Vec<(i64, i64)> = v.pairs().collect();
    if pairs.len() > ENUMERATION_PAIR_LIMIT {
        return Err(Error::EnumerationLimit {
            pairs: pairs.len(),
            limit: ENUMERATION_PAIR_LIMIT,
        });
    }
    let probs: Vec<f64> = pairs.iter().map(|&(i, j)| f.prob_unchecked(i, j)).collect();
    let weights = enumerate_weights(v, &pairs, &probs, q, |_| true);
    DiscreteGraphLaw::from_weights(pairs, weights)
}

/// Unnormalized FK weights of every state whose index passes `keep`.
/// Bit `k` of a state index is the indicator of `pairs[k]`.
pub(crate) fn enumerate_weights(
    v: Interval,
    pairs: &[(i64, i64)],
    probs: &[f64],
    q: f64,
    keep: impl Fn(usize) -> bool,
) -> Vec<f64> {
    let n = v.len() as usize;
    let m = pairs.len();
    let local: Vec<(usize, usize)> = pairs
        .iter()
        .map(|&(i, j)| ((i - v.lo()) as usize, (j - v.lo()) as usize))
        .collect();
    let q_pow: Vec<f64> = (0..=n).map(|k| q.powi(k as i32)).collect();
    (0..1usize << m)
        .map(|state| {
            if !keep(state) {
                return 0.0;
            }
            let mut uf = UnionFind::new(n);
            let mut omega = n;
            let mut w = 1.0;
            for (k, &(a, b)) in local.iter().enumerate() {
                if state >> k & 1 == 1 {
                    w *= probs[k];
                    if uf.union(a, b).is_some() {
                        omega -= 1;
                    }
                } else {
                    w *= 1.0 - probs[k];
                }
            }
            w * q_pow[omega]
        })
        .collect()
}

/// Heat-bath probability of opening an edge with marginal `p`, given whether
/// its endpoints are already connected without it.
pub fn heat_bath_open_prob(p: f64, q: f64, connected_without: bool) -> f64 {
    if connected_without {
        p
    } else if p >= 1.0 {
        1.0
    } else {
        p / (p + q * (1.0 - p))
    }
}

/// Single-bond heat-bath Markov chain for the FK measure on an interval.
///
/// One sweep visits every pair once in lexicographic order. Connectivity in
/// `G ∖ e` is decided by a bidirectional breadth-first search that stops as
/// soon as either endpoint's component is exhausted, and is only computed
/// when the uniform falls between the two heat-bath thresholds.
pub struct FkChain {
    domain: Interval,
    q: f64,
    probs: Vec<f64>,
    open: Vec<bool>,
    adj: Vec<Vec<u32>>,
    marks: Vec<u32>,
    stamp: u32,
    queue_a: Vec<u32>,
    queue_b: Vec<u32>,
    rng: ChaCha8Rng,
}

impl FkChain {
    /// Starts from the empty graph.
    pub fn new(v: Interval, f: &EdgeProbFn, q: f64, seed: Seed) -> Result<Self> {
        if !(q >= 1.0) {
            return invalid(format!("q >= 1 violated (q = {q})"));
        }
        if v.pair_count() > MCMC_PAIR_LIMIT {
            return Err(Error::InfeasibleScale(format!(
                "{} pairs exceed the heat-bath limit {MCMC_PAIR_LIMIT}",
                v.pair_count()
            )));
        }
        let probs: Vec<f64> = v.pairs().map(|(i, j)| f.prob_unchecked(i, j)).collect();
        let n = v.len() as usize;
        Ok(Self {
            domain: v,
            q,
            open: vec![false; probs.len()],
            probs,
            adj: vec![Vec::new(); n],
            marks: vec![0; n],
            stamp: 0,
            queue_a: Vec::new(),
            queue_b: Vec::new(),
            rng: seed.rng(),
        })
    }

    pub fn sweep(&mut self) {
        let n = self.domain.len() as usize;
        let mut idx = 0;
        for a in 0..n {
            for b in a + 1..n {
                let p = self.probs[idx];
                let u: f64 = self.rng.random();
                let low = heat_bath_open_prob(p, self.q, false);
                let want = if u < low {
                    true
                } else if u >= p {
                    false
                } else {
                    if self.open[idx] {
                        self.set(idx, a, b, false);
                    }
                    self.connected(a, b)
                };
                if want != self.open[idx] {
                    self.set(idx, a, b, want);
                }
                idx += 1;
            }
        }
    }

    pub fn run(&mut self, sweeps: usize) {
        for _ in 0..sweeps {
            self.sweep();
        }
    }

    pub fn graph(&self) -> Graph {
        let lo = self.domain.lo();
        let n = self.domain.len() as i64;
        let mut edges = Vec::new();
        let mut idx = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.open[idx] {
                    edges.push((lo + a, lo + b));
                }
                idx += 1;
            }
        }
        Graph::from_trusted(self.domain, edges)
    }

    /// Current state as a bit mask over lexicographically ordered pairs.
    pub fn state_bits(&self) -> u64 {
        assert!(self.open.len() <= 64);
        self.open
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &o)| acc | (o as u64) << k)
    }

    fn set(&mut self, idx: usize, a: usize, b: usize, open: bool) {
        self.open[idx] = open;
        if open {
            self.adj[a].push(b as u32);
            self.adj[b].push(a as u32);
        } else {
            remove_one(&mut self.adj[a], b as u32);
            remove_one(&mut self.adj[b], a as u32);
        }
    }

    fn connected(&mut self, a: usize, b: usize) -> bool {
        if self.adj[a].is_empty() || self.adj[b].is_empty() {
            return false;
        }
        if self.stamp >= u32::MAX - 2 {
            self.marks.iter_mut().for_each(|m| *m = 0);
            self.stamp = 0;
        }
        self.stamp += 2;
        let (sa, sb) = (self.stamp - 1, self.stamp);
        self.marks[a] = sa;
        self.marks[b] = sb;
        self.queue_a.clear();
        self.queue_b.clear();
        self.queue_a.push(a as u32);
        self.queue_b.push(b as u32);
        let (mut ha, mut hb) = (0, 0);
        loop {
            if ha == self.queue_a.len() || hb == self.queue_b.len() {
                return false;
            }
            let x = self.queue_a[ha] as usize;
            ha += 1;
            for &y in &self.adj[x] {
                let m = self.marks[y as usize];
                if m == sb {
                    return true;
                }
                if m != sa {
                    self.marks[y as usize] = sa;
                    self.queue_a.push(y);
                }
            }
            let x = self.queue_b[hb] as usize;
            hb += 1;
            for &y in &self.adj[x] {
                let m = self.marks[y as usize];
                if m == sa {
                    return true;
                }
                if m != sb {
                    self.marks[y as usize] = sb;
                    self.queue_b.push(y);
                }
            }
        }
    }
}

fn remove_one(list: &mut Vec<u32>, x: u32) {
    if let Some(pos) = list.iter().position(|&y| y == x) {
        list.swap_remove(pos);
    }
}

/// State of the heat-bath chain after `sweeps` sweeps from the empty graph.
pub fn fk_sample_mcmc(
    v: Interval,
    f: &EdgeProbFn,
    q: f64,
    sweeps: usize,
    seed: Seed,
) -> Result<Graph> {
    if sweeps == 0 {
        return invalid("sweeps >= 1 violated");
    }
    let mut chain = FkChain::new(v, f, q, seed)?;
    chain.run(sweeps);
    Ok(chain.graph())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn weight_two_vertices() {
        let f = EdgeProbFn::constant(0.5).unwrap();
        let open = Graph::new(iv(0, 2), [(0, 1)]).unwrap();
        let closed = Graph::empty(iv(0, 2));
        assert_eq!(fk_weight(&open, &f, 2.0), 1.0);
        assert_eq!(fk_weight(&closed, &f, 2.0), 2.0);
        assert!((fk_log_weight(&closed, &f, 2.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn weight_q1_is_bernoulli_probability() {
        let f = EdgeProbFn::dyson(0.7, 1.5).unwrap();
        let g = Graph::new(iv(0, 4), [(0, 1), (1, 3)]).unwrap();
        let mut expect = 1.0;
        for (i, j) in iv(0, 4).pairs() {
            let p = f.prob(i, j).unwrap();
            expect *= if g.edges().contains(&(i, j)) {
                p
            } else {
                1.0 - p
            };
        }
        assert!((fk_weight(&g, &f, 1.0) - expect).abs() < 1e-15);
    }

    #[test]
    fn weight_empty_closed_form() {
        let n = 5;
        let p: f64 = 0.3;
        let q: f64 = 2.5;
        let f = EdgeProbFn::constant(p).unwrap();
        let w = fk_weight(&Graph::empty(iv(0, n)), &f, q);
        let expect = (1.0 - p).powi((n * (n - 1) / 2) as i32) * q.powi(n as i32);
        assert!((w / expect - 1.0).abs() < 1e-13);
    }

    #[test]
    fn weight_contradiction_is_zero() {
        let f = EdgeProbFn::constant(1.0).unwrap();
        assert_eq!(fk_weight(&Graph::empty(iv(0, 3)), &f, 2.0), 0.0);
        assert_eq!(
            fk_log_weight(&Graph::empty(iv(0, 3)), &f, 2.0),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn exact_two_vertices() {
        let law =
            fk_exact_distribution(iv(0, 2), &EdgeProbFn::constant(0.5).unwrap(), 2.0).unwrap();
        assert!((law.marginal(0) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exact_q1_is_product() {
        let f = EdgeProbFn::dyson(0.9, 1.5).unwrap();
        let law = fk_exact_distribution(iv(0, 4), &f, 1.0).unwrap();
        assert!((law.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (k, &(i, j)) in law.pairs().iter().enumerate() {
            assert!((law.marginal(k) - f.prob(i, j).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_three_vertices_connected() {
        // Connected configurations: the three 2-edge paths (weight 1/8 * 2 each)
        // and the triangle (1/8 * 2); disconnected: empty (1/8 * 8) and the
        // three single edges (1/8 * 4 each). Z = (6 + 2 + 8 + 12) / 8 = 28 / 8.
        let law =
            fk_exact_distribution(iv(0, 3), &EdgeProbFn::constant(0.5).unwrap(), 2.0).unwrap();
        let connected: f64 = [0b011usize, 0b101, 0b110, 0b111]
            .iter()
            .map(|&s| law.probs()[s])
            .sum();
        assert!((connected - 8.0 / 28.0).abs() < 1e-14);
    }

    #[test]
    fn exact_limit() {
        let f = EdgeProbFn::constant(0.5).unwrap();
        assert!(matches!(
            fk_exact_distribution(iv(0, 7), &f, 2.0),
            Err(Error::EnumerationLimit { pairs: 21, .. })
        ));
    }

    #[test]
    fn heat_bath_matches_weight_ratios() {
        // On a 3-vertex instance, P(open | rest) / P(closed | rest) must equal
        // the ratio of FK weights for every configuration of the other pairs.
        let f = EdgeProbFn::Dyson {
            beta: 0.8,
            alpha: 1.5,
        };
        let q = 2.7;
        let v = iv(0, 3);
        let pairs: Vec<_> = v.pairs().collect();
        for target in 0..3 {
            for rest in 0..8usize {
                if rest >> target & 1 == 1 {
                    continue;
                }
                let edges = |s: usize| -> Graph {
                    Graph::new(v, (0..3).filter(|k| s >> k & 1 == 1).map(|k| pairs[k])).unwrap()
                };
                let g_closed = edges(rest);
                let g_open = edges(rest | 1 << target);
                let (a, b) = pairs[target];
                let conn = g_closed.clusters().same_cluster(a, b);
                let p = f.prob(a, b).unwrap();
                let h = heat_bath_open_prob(p, q, conn);
                let ratio = fk_weight(&g_open, &f, q) / fk_weight(&g_closed, &f, q);
                assert!((h / (1.0 - h) - ratio).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mcmc_q1_one_sweep_extremes() {
        let s = Seed::new(3, 1);
        let g = fk_sample_mcmc(iv(0, 6), &EdgeProbFn::constant(1.0).unwrap(), 3.0, 1, s).unwrap();
        assert_eq!(g.edge_count(), 15);
        let g = fk_sample_mcmc(iv(0, 6), &EdgeProbFn::constant(0.0).unwrap(), 3.0, 1, s).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(fk_sample_mcmc(iv(0, 6), &EdgeProbFn::constant(0.5).unwrap(), 0.5, 1, s).is_err());
        assert!(fk_sample_mcmc(iv(0, 6), &EdgeProbFn::constant(0.5).unwrap(), 1.0, 0, s).is_err());
    }

    #[test]
    fn mcmc_q1_single_sweep_is_bernoulli() {
        // After one sweep at q = 1 each pair is open with its own marginal.
        let f = EdgeProbFn::constant(0.3).unwrap();
        let v = iv(0, 4);
        let reps = 20_000;
        let mut counts = [0usize; 6];
        for r in 0..reps {
            let mut c = FkChain::new(v, &f, 1.0, Seed::new(11, r)).unwrap();
            c.sweep();
            let bits = c.state_bits();
            for (k, slot) in counts.iter_mut().enumerate() {
                *slot += (bits >> k & 1) as usize;
            }
        }
        let sigma = (reps as f64 * 0.3 * 0.7).sqrt();
        for c in counts {
            assert!((c as f64 - 0.3 * reps as f64).abs() < 4.0 * sigma);
        }
    }

    #[test]
    fn chain_connectivity_tracks_union_find() {
        let f = EdgeProbFn::dyson(1.2, 1.5).unwrap();
        let v = iv(0, 40);
        let mut chain = FkChain::new(v, &f, 2.0, Seed::new(1, 9)).unwrap();
        chain.run(5);
        let g = chain.graph();
        let part = g.clusters();
        for a in 0..40usize {
            for b in a + 1..40 {
                assert_eq!(chain.connected(a, b), part.same_cluster(a as i64, b as i64));
            }
        }
    }
}
