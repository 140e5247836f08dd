//! Block renormalization: block partitions, good intervals, coarse graphs on
//! vertex sets, effective coarse couplings, the scale schedule, and a Monte
//! Carlo check of the induction step.

mod induction;
mod schedule;

pub use induction::{
    calibrate_padding, induction_step_experiment, InductionChecks, InductionReport,
    PaddingCalibration,
};
pub use schedule::{build_schedule, correction_product, CorrectionProduct, RenormSchedule};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{ClusterPartition, Graph, Interval};
use crate::models::{dyson_coupling, one_minus_exp_neg};

/// Partition of a domain into the blocks `[kN, (k+1)N) ∩ domain`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockPartition {
    block_length: u64,
    domain: Interval,
    blocks: Vec<Interval>,
    first_index: i64,
}

impl BlockPartition {
    pub fn new(domain: Interval, block_length: u64) -> Result<Self> {
        if block_length == 0 {
            return invalid("block length N >= 1 violated");
        }
        let n = block_length as i64;
        let first_index = domain.lo().div_euclid(n);
        let mut blocks = Vec::new();
        let mut k = first_index;
        while k * n < domain.hi() {
            let b = Interval::new(k * n, (k + 1) * n)?.intersect(&domain);
            if !b.is_empty() {
                blocks.push(b);
            }
            k += 1;
        }
        Ok(Self {
            block_length,
            domain,
            blocks,
            first_index,
        })
    }

    pub fn block_length(&self) -> u64 {
        self.block_length
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn blocks(&self) -> &[Interval] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Absolute index `k` of the `pos`-th block.
    pub fn block_index(&self, pos: usize) -> i64 {
        self.blocks[pos].lo().div_euclid(self.block_length as i64)
    }

    /// Position of the block holding `x`.
    pub fn block_of(&self, x: i64) -> Option<usize> {
        if !self.domain.contains(x) {
            return None;
        }
        Some((x.div_euclid(self.block_length as i64) - self.first_index) as usize)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return invalid(format!("0 < gamma < 1 violated (gamma = {gamma})"));
    }
    Ok(())
}

/// `|Ĉ_I(G)| ≥ |I|^γ`.
pub fn is_good(g: &Graph, i: Interval, gamma: f64) -> Result<bool> {
    is_good_in(&g.clusters(), i, gamma)
}

/// [`is_good`] on a precomputed cluster partition.
pub fn is_good_in(p: &ClusterPartition, i: Interval, gamma: f64) -> Result<bool> {
    check_gamma(gamma)?;
    if i.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let size = p.largest_induced_size(i)?;
    Ok(size as f64 >= (i.len() as f64).powf(gamma))
}

/// Positions of good blocks; block `k` is judged in its own graph.
pub fn good_blocks(
    per_block: &[Graph],
    partition: &BlockPartition,
    gamma: f64,
) -> Result<Vec<usize>> {
    if per_block.len() != partition.len() {
        return Err(Error::LengthMismatch {
            expected: partition.len(),
            got: per_block.len(),
        });
    }
    let mut out = Vec::new();
    for (k, (g, &b)) in per_block.iter().zip(partition.blocks()).enumerate() {
        if is_good(g, b, gamma)? {
            out.push(k);
        }
    }
    Ok(out)
}

/// Per-block graphs `G ∪ H[I_k]`: each block sees `G` plus only the sprinkle
/// edges inside it.
pub fn block_sprinkled_graphs(
    g: &Graph,
    h: &Graph,
    partition: &BlockPartition,
) -> Result<Vec<Graph>> {
    partition
        .blocks()
        .iter()
        .map(|&b| g.union(&h.induced_subgraph(b)?))
        .collect()
}

/// Good blocks of `G ∪ H[I_k]` with their `Ĉ_{I_k}` sets, as
/// `(position, set)`. Agrees with [`good_blocks`] on
/// [`block_sprinkled_graphs`] without copying `G` per block.
pub fn good_block_sets(
    g: &Graph,
    h: &Graph,
    partition: &BlockPartition,
    gamma: f64,
) -> Result<Vec<(usize, Vec<i64>)>> {
    check_gamma(gamma)?;
    let maxima = block_maxima(&g.clusters(), h, partition)?;
    Ok(maxima
        .into_iter()
        .enumerate()
        .filter(|(k, set)| set.len() as f64 >= (partition.blocks()[*k].len() as f64).powf(gamma))
        .collect())
}

/// For each block, `Ĉ_{I_k}(G ∪ H[I_k])` computed from the clusters of `G`
/// alone: in-block sprinkle edges merge `G`-clusters locally.
pub(crate) fn block_maxima(
    g_part: &ClusterPartition,
    h: &Graph,
    partition: &BlockPartition,
) -> Result<Vec<Vec<i64>>> {
    let mut per_block: Vec<Vec<(i64, i64)>> = vec![Vec::new(); partition.len()];
    for &(a, b) in h.edges() {
        if let (Some(ka), Some(kb)) = (partition.block_of(a), partition.block_of(b)) {
            if ka == kb {
                per_block[ka].push((a, b));
            }
        }
    }
    partition
        .blocks()
        .iter()
        .zip(per_block)
        .map(|(&blk, edges)| induced_max_with_edges(g_part, blk, &edges))
        .collect()
}

fn induced_max_with_edges(
    g_part: &ClusterPartition,
    blk: Interval,
    edges: &[(i64, i64)],
) -> Result<Vec<i64>> {
    use std::collections::HashMap;
    g_part.domain().ensure_contains(&blk)?;
    let mut local: HashMap<usize, usize> = HashMap::new();
    let mut ids = Vec::with_capacity(blk.len() as usize);
    for x in blk.iter() {
        let n = local.len();
        ids.push(*local.entry(g_part.label(x)).or_insert(n));
    }
    let mut uf = crate::union_find::UnionFind::new(local.len());
    for &(a, b) in edges {
        uf.union(ids[blk.index(a)], ids[blk.index(b)]);
    }
    let roots: Vec<usize> = ids.iter().map(|&l| uf.find(l)).collect();
    let mut counts = vec![0usize; local.len()];
    for &r in &roots {
        counts[r] += 1;
    }
    // First vertex scanned in each root is its minimum, so a strict `>` scan
    // in vertex order keeps the smallest-minimum maximum.
    let mut best: Option<(usize, usize)> = None;
    for &r in &roots {
        if best.is_none_or(|(_, c)| counts[r] > c) {
            best = Some((r, counts[r]));
        }
    }
    Ok(match best {
        None => Vec::new(),
        Some((r, _)) => blk
            .iter()
            .zip(&roots)
            .filter(|(_, &x)| x == r)
            .map(|(v, _)| v)
            .collect(),
    })
}

/// Disjoint vertex sets `S_j` with diameter bounds `D_ij ≥ diam(S_i ∪ S_j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoarseGraphSpec {
    sets: Vec<Vec<i64>>,
    diameter_bounds: Vec<Vec<u64>>,
}

impl CoarseGraphSpec {
    /// Uses the exact diameters.
    pub fn new(sets: Vec<Vec<i64>>) -> Result<Self> {
        check_disjoint(&sets)?;
        let u = sets.len();
        let mut d = vec![vec![0; u]; u];
        for i in 0..u {
            for j in 0..u {
                d[i][j] = union_diameter(&sets[i], &sets[j]);
            }
        }
        Ok(Self {
            sets,
            diameter_bounds: d,
        })
    }

    /// `S_k` lies inside block `blocks[k]` of length `n`; uses
    /// `D_ij = (|b_i − b_j| + 1)·N`.
    pub fn for_blocks(sets: Vec<Vec<i64>>, blocks: &[i64], n: u64) -> Result<Self> {
        if blocks.len() != sets.len() {
            return Err(Error::LengthMismatch {
                expected: sets.len(),
                got: blocks.len(),
            });
        }
        let u = sets.len();
        let mut d = vec![vec![0; u]; u];
        for i in 0..u {
            for j in 0..u {
                d[i][j] = (blocks[i].abs_diff(blocks[j]) + 1) * n;
            }
        }
        Self::with_diameter_bounds(sets, d)
    }

    pub fn with_diameter_bounds(sets: Vec<Vec<i64>>, bounds: Vec<Vec<u64>>) -> Result<Self> {
        check_disjoint(&sets)?;
        let u = sets.len();
        if bounds.len() != u || bounds.iter().any(|r| r.len() != u) {
            return Err(Error::LengthMismatch {
                expected: u,
                got: bounds.len(),
            });
        }
        for i in 0..u {
            for j in 0..u {
                let diam = union_diameter(&sets[i], &sets[j]);
                if bounds[i][j] < diam {
                    return invalid(format!(
                        "D_ij >= diam(S_i ∪ S_j) violated for ({i}, {j}): {} < {diam}",
                        bounds[i][j]
                    ));
                }
            }
        }
        Ok(Self {
            sets,
            diameter_bounds: bounds,
        })
    }

    pub fn sets(&self) -> &[Vec<i64>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn size_product(&self, i: usize, j: usize) -> u64 {
        self.sets[i].len() as u64 * self.sets[j].len() as u64
    }

    pub fn diameter_bound(&self, i: usize, j: usize) -> u64 {
        self.diameter_bounds[i][j]
    }
}

fn check_disjoint(sets: &[Vec<i64>]) -> Result<()> {
    let mut all: Vec<i64> = sets.iter().flatten().copied().collect();
    all.sort_unstable();
    match all.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(Error::OverlappingSets(w[0])),
        None => Ok(()),
    }
}

fn union_diameter(a: &[i64], b: &[i64]) -> u64 {
    let it = || a.iter().chain(b.iter());
    match (it().min(), it().max()) {
        (Some(lo), Some(hi)) => hi.abs_diff(*lo),
        _ => 0,
    }
}

/// `𝓗(𝒮)`: graph on `[0, |U|)` with `ij` present iff `h` has an edge
/// between `S_i` and `S_j`.
pub fn coarse_graph(h: &Graph, spec: &CoarseGraphSpec) -> Result<Graph> {
    let dom = h.vertices();
    let mut owner = vec![u32::MAX; dom.len() as usize];
    for (k, s) in spec.sets.iter().enumerate() {
        for &x in s {
            if !dom.contains(x) {
                return Err(Error::VertexOutOfDomain {
                    vertex: x,
                    lo: dom.lo(),
                    hi: dom.hi(),
                });
            }
            owner[dom.index(x)] = k as u32;
        }
    }
    let mut edges: Vec<(i64, i64)> = h
        .edges()
        .iter()
        .filter_map(|&(a, b)| {
            let (oa, ob) = (owner[dom.index(a)], owner[dom.index(b)]);
            (oa != u32::MAX && ob != u32::MAX && oa != ob)
                .then(|| (oa.min(ob) as i64, oa.max(ob) as i64))
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(Graph::from_trusted(
        Interval::with_len(spec.len() as u64),
        edges,
    ))
}

/// `1 − exp(−δ |S_i||S_j| D_ij^{−α})`.
pub fn coarse_edge_prob_lb(delta: f64, s_i: u64, s_j: u64, d_ij: u64, alpha: f64) -> Result<f64> {
    if d_ij == 0 {
        return invalid("D_ij >= 1 violated");
    }
    if s_i == 0 || s_j == 0 {
        return invalid("|S_i|, |S_j| >= 1 violated");
    }
    Ok(one_minus_exp_neg(
        delta * (s_i as f64) * (s_j as f64) * dyson_coupling(d_ij, alpha),
    ))
}

/// `1 − exp(−δ Σ_{x∈S_i, y∈S_j} |x − y|^{−α})`, the exact coarse edge
/// probability under a Dyson sprinkle of strength `δ`.
pub fn coarse_edge_prob_exact(delta: f64, alpha: f64, s_i: &[i64], s_j: &[i64]) -> f64 {
    let total: f64 = s_i
        .iter()
        .flat_map(|&x| {
            s_j.iter()
                .map(move |&y| dyson_coupling(x.abs_diff(y), alpha))
        })
        .sum();
    one_minus_exp_neg(delta * total)
}

/// `δ·2^{−α}·N^{2γ−α}`.
pub fn effective_beta(delta: f64, n_block: u64, gamma: f64, alpha: f64) -> Result<f64> {
    if 2.0 * gamma <= alpha {
        return Err(Error::SubcriticalExponent {
            two_gamma: 2.0 * gamma,
            alpha,
        });
    }
    Ok(delta * 2f64.powf(-alpha) * (n_block as f64).powf(2.0 * gamma - alpha))
}

/// `1 − ε/(1 − d)`, the Markov lower bound on `P(K ≥ c^γ)`, and whether it
/// is at least `1 − ε(1 + 2d)`.
pub fn markov_bound(eps_prev: f64, d_n: f64) -> Result<(f64, bool)> {
    if !(0.0..0.5).contains(&d_n) {
        return invalid(format!("0 <= d_n < 1/2 violated (d_n = {d_n})"));
    }
    if !(eps_prev > 0.0 && eps_prev < 1.0) {
        return invalid(format!("0 < eps_prev < 1 violated (eps_prev = {eps_prev})"));
    }
    let b = markov_lower(eps_prev, d_n);
    Ok((b, b >= 1.0 - eps_prev * (1.0 + 2.0 * d_n)))
}

pub(crate) fn markov_lower(eps_prev: f64, d_n: f64) -> f64 {
    1.0 - eps_prev / (1.0 - d_n)
}

/// `2k(1 − q)^{k−1}`, twice the isolated-vertex probability of `G(k, q)`.
/// Not clamped; values above 1 are vacuous.
pub fn er_disconnect_bound(k: usize, q: f64) -> f64 {
    2.0 * k as f64 * (1.0 - q).powi(k.saturating_sub(1) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{sample_bernoulli, EdgeProbFn};
    use crate::rng::Seed;
    use proptest::prelude::*;

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn path(v: Interval) -> Graph {
        Graph::new(v, v.iter().zip(v.iter().skip(1))).unwrap()
    }

    #[test]
    fn blocks_cover_domain() {
        let p = BlockPartition::new(iv(-7, 23), 10).unwrap();
        assert_eq!(p.blocks(), &[iv(-7, 0), iv(0, 10), iv(10, 20), iv(20, 23)]);
        assert_eq!(p.block_index(0), -1);
        assert_eq!(p.block_of(-1), Some(0));
        assert_eq!(p.block_of(20), Some(3));
        assert_eq!(p.block_of(23), None);
        assert!(BlockPartition::new(iv(0, 5), 0).is_err());
    }

    #[test]
    fn goodness_examples() {
        assert!(!is_good(&Graph::empty(iv(0, 100)), iv(0, 100), 0.5).unwrap());
        assert!(is_good(&path(iv(0, 100)), iv(0, 100), 0.99).unwrap());
        let g = Graph::new(iv(0, 6), [(0, 5), (2, 5)]).unwrap();
        assert!(is_good(&g, iv(0, 3), 0.5).unwrap());
        assert_eq!(is_good(&g, iv(2, 2), 0.5), Err(Error::EmptyDomain));
        assert!(is_good(&g, iv(0, 3), 1.0).is_err());
    }

    #[test]
    fn good_blocks_fixture() {
        let n = 20u64;
        let gamma = 0.6;
        let thr = (n as f64).powf(gamma).ceil() as i64;
        let part = BlockPartition::new(iv(0, 4 * n as i64), n).unwrap();
        let sizes = [1, thr, n as i64, thr - 1];
        let graphs: Vec<Graph> = part
            .blocks()
            .iter()
            .zip(sizes)
            .map(|(b, s)| {
                path(iv(b.lo(), b.lo() + s))
                    .union(&Graph::empty(*b))
                    .unwrap_or_else(|_| {
                        let mut e: Vec<(i64, i64)> = Vec::new();
                        for x in b.lo()..b.lo() + s - 1 {
                            e.push((x, x + 1));
                        }
                        Graph::new(*b, e).unwrap()
                    })
            })
            .collect();
        assert_eq!(good_blocks(&graphs, &part, gamma).unwrap(), vec![1, 2]);

        let empty: Vec<Graph> = part.blocks().iter().map(|&b| Graph::empty(b)).collect();
        assert!(good_blocks(&empty, &part, gamma).unwrap().is_empty());
        let full: Vec<Graph> = part.blocks().iter().map(|&b| path(b)).collect();
        assert_eq!(good_blocks(&full, &part, gamma).unwrap(), vec![0, 1, 2, 3]);
        assert!(good_blocks(&full[..2], &part, gamma).is_err());
    }

    #[test]
    fn block_maxima_match_per_block_graphs() {
        let dom = iv(0, 600);
        let part = BlockPartition::new(dom, 100).unwrap();
        let g = sample_bernoulli(dom, &EdgeProbFn::dyson(0.6, 1.5).unwrap(), Seed::new(1, 1));
        let h = sample_bernoulli(dom, &EdgeProbFn::dyson(0.4, 1.5).unwrap(), Seed::new(1, 2));
        let fast = block_maxima(&g.clusters(), &h, &part).unwrap();
        let slow = block_sprinkled_graphs(&g, &h, &part).unwrap();
        for (k, (f, s)) in fast.iter().zip(&slow).enumerate() {
            let b = part.blocks()[k];
            assert_eq!(f, &s.clusters().largest_induced(b).unwrap());
        }
    }

    #[test]
    fn good_block_sets_agree_with_per_block_graphs() {
        let dom = iv(0, 800);
        let part = BlockPartition::new(dom, 100).unwrap();
        let g = sample_bernoulli(dom, &EdgeProbFn::dyson(0.35, 1.5).unwrap(), Seed::new(6, 1));
        let h = sample_bernoulli(dom, &EdgeProbFn::dyson(0.2, 1.5).unwrap(), Seed::new(6, 2));
        let fast: Vec<usize> = good_block_sets(&g, &h, &part, 0.7)
            .unwrap()
            .into_iter()
            .map(|x| x.0)
            .collect();
        let slow =
            good_blocks(&block_sprinkled_graphs(&g, &h, &part).unwrap(), &part, 0.7).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn coarse_graph_examples() {
        let h = Graph::empty(iv(0, 10));
        let spec = CoarseGraphSpec::new(vec![vec![0, 1], vec![5]]).unwrap();
        assert_eq!(coarse_graph(&h, &spec).unwrap().edge_count(), 0);
        let h = Graph::new(iv(0, 10), [(1, 5)]).unwrap();
        assert_eq!(coarse_graph(&h, &spec).unwrap().edges(), &[(0, 1)]);
        assert_eq!(
            CoarseGraphSpec::new(vec![vec![0, 1], vec![1]]),
            Err(Error::OverlappingSets(1))
        );
    }

    #[test]
    fn diameter_bounds() {
        let spec = CoarseGraphSpec::for_blocks(vec![vec![3, 7], vec![25]], &[0, 2], 10).unwrap();
        assert_eq!(spec.diameter_bound(0, 1), 30);
        assert_eq!(spec.size_product(0, 1), 2);
        assert!(CoarseGraphSpec::with_diameter_bounds(
            vec![vec![3, 7], vec![25]],
            vec![vec![4, 21], vec![21, 0]]
        )
        .is_err());
    }

    #[test]
    fn coarse_lb_examples() {
        assert_eq!(coarse_edge_prob_lb(0.0, 3, 4, 5, 1.5).unwrap(), 0.0);
        let p = coarse_edge_prob_lb(1.0, 2, 2, 2, 1.5).unwrap();
        assert!((p - (1.0 - (-4.0 * 2f64.powf(-1.5)).exp())).abs() < 1e-15);
        assert!((p - 0.75688).abs() < 1e-5);
        assert!(coarse_edge_prob_lb(1.0, 2, 2, 0, 1.5).is_err());
        // Singletons at distance D: bound is exact.
        let exact = coarse_edge_prob_exact(0.7, 1.5, &[3], &[10]);
        let lb = coarse_edge_prob_lb(0.7, 1, 1, 7, 1.5).unwrap();
        assert!((exact - lb).abs() < 1e-15);
    }

    #[test]
    fn effective_beta_examples() {
        assert_eq!(effective_beta(0.0, 100, 0.8, 1.5).unwrap(), 0.0);
        let b = effective_beta(0.1, 1_000_000, 0.8, 1.5).unwrap();
        assert!((b - 0.1 * 2f64.powf(-1.5) * 10f64.powf(0.6)).abs() < 1e-12);
        assert!((b - 0.14076).abs() < 1e-5);
        let r = effective_beta(0.1, 100_000_000, 0.8, 1.5).unwrap()
            / effective_beta(0.1, 10_000, 0.8, 1.5).unwrap();
        assert!((r / 10f64.powf(4.0 * (1.6 - 1.5)) - 1.0).abs() < 1e-9);
        assert!(matches!(
            effective_beta(0.1, 100, 0.7, 1.5),
            Err(Error::SubcriticalExponent { .. })
        ));
    }

    #[test]
    fn effective_beta_gives_block_coupling() {
        // For good blocks i, j at block distance r ≥ 1, |Ĉ| ≥ N^γ and
        // D = (r + 1)N ≤ 2rN give p̃ ≥ 1 − exp(−β′ r^{−α}).
        let (delta, gamma, alpha, n) = (0.3, 0.8, 1.5, 4096u64);
        let beta_p = effective_beta(delta, n, gamma, alpha).unwrap();
        let s = (n as f64).powf(gamma).ceil() as u64;
        for r in 1..50u64 {
            let lb = coarse_edge_prob_lb(delta, s, s, (r + 1) * n, alpha).unwrap();
            let xxp = one_minus_exp_neg(beta_p * dyson_coupling(r, alpha));
            assert!(lb >= xxp * (1.0 - 1e-12), "r = {r}");
        }
    }

    #[test]
    fn markov_examples() {
        let (b, ok) = markov_bound(0.01, 0.25).unwrap();
        assert!((b - (1.0 - 0.01 / 0.75)).abs() < 1e-15);
        assert!((b - 0.986667).abs() < 1e-6);
        assert!(ok);
        let (b, _) = markov_bound(0.3, 0.0).unwrap();
        assert!((b - 0.7).abs() < 1e-15);
        let (b, ok) = markov_bound(0.2, 0.4).unwrap();
        assert!((b - 2.0 / 3.0).abs() < 1e-12);
        assert!(ok && b >= 0.64);
        assert!(markov_bound(0.2, 0.5).is_err());
    }

    #[test]
    fn er_bound_examples() {
        assert_eq!(er_disconnect_bound(10, 1.0), 0.0);
        assert!((er_disconnect_bound(4, 0.9) - 0.008).abs() < 1e-15);
        assert_eq!(er_disconnect_bound(2, 0.5), 2.0);
    }

    fn brute_coarse(h: &Graph, sets: &[Vec<i64>]) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let hit = h.edges().iter().any(|&(a, b)| {
                    (sets[i].contains(&a) && sets[j].contains(&b))
                        || (sets[i].contains(&b) && sets[j].contains(&a))
                });
                if hit {
                    out.push((i as i64, j as i64));
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn coarse_graph_matches_brute_force(seed in any::<u64>(), k in 1usize..7) {
            let dom = iv(0, 60);
            let h = sample_bernoulli(dom, &EdgeProbFn::constant(0.05).unwrap(), Seed::new(seed, 0));
            let sets: Vec<Vec<i64>> = (0..k).map(|j| ((j * 10) as i64..(j * 10 + 5) as i64).collect()).collect();
            let spec = CoarseGraphSpec::new(sets.clone()).unwrap();
            prop_assert_eq!(coarse_graph(&h, &spec).unwrap().sorted_edges(), brute_coarse(&h, &sets));
        }

        #[test]
        fn goodness_is_increasing(seed in any::<u64>(), gamma in 0.3f64..0.95) {
            let dom = iv(0, 200);
            let i = iv(50, 150);
            let g = sample_bernoulli(dom, &EdgeProbFn::dyson(0.5, 1.5).unwrap(), Seed::new(seed, 1));
            let extra = sample_bernoulli(dom, &EdgeProbFn::dyson(0.5, 1.5).unwrap(), Seed::new(seed, 2));
            let bigger = g.union(&extra).unwrap();
            if is_good(&g, i, gamma).unwrap() {
                prop_assert!(is_good(&bigger, i, gamma).unwrap());
            }
        }

        #[test]
        fn block_pairs_fit_in_block_span(i in 0i64..40, j in 0i64..40, n in 1u64..64, a in 0u64..64, b in 0u64..64) {
            prop_assume!(i != j);
            let (x, y) = (i * n as i64 + (a % n) as i64, j * n as i64 + (b % n) as i64);
            prop_assert!(x.abs_diff(y) <= (i.abs_diff(j) + 1) * n);
        }
    }
}
