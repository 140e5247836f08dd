//! Finite-size percolation proxies, cluster density, cluster-size success
//! rates, and critical-point estimates on one- and two-sided domains.

mod stats;

pub use stats::{binomial_stderr, mean_stderr, wilson_interval, Z95};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{ClusterPartition, Graph, Interval};
use crate::models::{sample_bernoulli, sample_coupled, EdgeProbFn, FkChain, ModelParams};
use crate::rng::Seed;
use crate::union_find::UnionFind;

/// Largest domain sampled by heat-bath MCMC in this module.
pub const MAX_FK_VERTICES: u64 = 2048;
/// Heat-bath sweeps per FK sample.
pub const FK_SWEEPS: usize = 200;
/// Level at which the proxy probability is crossed.
pub const CROSSING_LEVEL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    OneSided,
    TwoSided,
}

impl Side {
    /// `[0, M)` or `[−M, M)`.
    pub fn domain(self, m: u64) -> Interval {
        let m = m as i64;
        match self {
            Side::OneSided => Interval::new(0, m).unwrap(),
            Side::TwoSided => Interval::new(-m, m).unwrap(),
        }
    }

    /// Where the proxy is evaluated: the whole of `[0, M)`, or the
    /// length-`M` window `[−⌊M/2⌋, M − ⌊M/2⌋)` around the origin.
    pub fn window(self, m: u64) -> Interval {
        match self {
            Side::OneSided => self.domain(m),
            Side::TwoSided => centred(m),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Side::OneSided => "one",
            Side::TwoSided => "two",
        }
    }
}

fn centred(m: u64) -> Interval {
    let h = (m / 2) as i64;
    Interval::new(-h, m as i64 - h).unwrap()
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "one_sided" => Ok(Side::OneSided),
            "two" | "two_sided" => Ok(Side::TwoSided),
            _ => invalid(format!("side must be one or two, got {s:?}")),
        }
    }
}

/// Finite-size stand-in for the existence of an infinite cluster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Proxy {
    /// Some cluster meets both the first and the last tenth of the window.
    Span,
    /// `|Ĉ| ≥ c·|V|`.
    Giant(f64),
}

impl Proxy {
    pub fn id(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Proxy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proxy::Span => f.write_str("span"),
            Proxy::Giant(c) => write!(f, "giant:{c}"),
        }
    }
}

impl FromStr for Proxy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "span" {
            return Ok(Proxy::Span);
        }
        if s == "giant" {
            return Ok(Proxy::Giant(0.5));
        }
        if let Some(c) = s
            .strip_prefix("giant:")
            .or_else(|| s.strip_prefix("giant(").and_then(|r| r.strip_suffix(')')))
        {
            if let Ok(c) = c.parse::<f64>() {
                if c > 0.0 && c <= 1.0 {
                    return Ok(Proxy::Giant(c));
                }
            }
        }
        Err(Error::UnknownProxy(s.to_string()))
    }
}

fn end_zone(window: Interval) -> i64 {
    (window.len() / 10).max(1) as i64
}

/// Evaluates `kind` on the whole vertex set of `g`.
pub fn percolation_proxy(g: &Graph, kind: &Proxy) -> Result<bool> {
    proxy_in_window(&g.clusters(), g.vertices(), kind)
}

/// Evaluates `kind` on `window` using clusters of the full graph.
pub fn proxy_in_window(p: &ClusterPartition, window: Interval, kind: &Proxy) -> Result<bool> {
    if window.len() < 10 {
        return invalid(format!("|V| >= 10 violated (|V| = {})", window.len()));
    }
    p.domain().ensure_contains(&window)?;
    match *kind {
        Proxy::Span => {
            let w = end_zone(window);
            let mut left = vec![false; p.count()];
            for x in window.lo()..window.lo() + w {
                left[p.label(x)] = true;
            }
            Ok((window.hi() - w..window.hi()).any(|x| left[p.label(x)]))
        }
        Proxy::Giant(c) => Ok(p.largest_induced_size(window)? as f64 >= c * window.len() as f64),
    }
}

/// Density of the largest cluster with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub replicas: usize,
    pub vertices: u64,
}

fn sample_model(v: Interval, f: &EdgeProbFn, q: f64, seed: Seed) -> Result<Graph> {
    if q == 1.0 {
        return Ok(sample_bernoulli(v, f, seed));
    }
    if v.len() > MAX_FK_VERTICES {
        return Err(Error::InfeasibleScale(format!(
            "q > 1 needs |V| <= {MAX_FK_VERTICES}, got {}",
            v.len()
        )));
    }
    let mut chain = FkChain::new(v, f, q, seed)?;
    chain.run(FK_SWEEPS);
    Ok(chain.graph())
}

/// Mean of `|Ĉ(G)|/|V|` over the side's domain.
pub fn estimate_theta(
    params: &ModelParams,
    side: Side,
    m: u64,
    replicas: usize,
    seed: Seed,
) -> Result<ThetaEstimate> {
    params.validate()?;
    estimate_theta_with(&params.edge_fn(), params.q, side.domain(m), replicas, seed)
}

/// [`estimate_theta`] for an arbitrary edge function on `v`.
pub fn estimate_theta_with(
    f: &EdgeProbFn,
    q: f64,
    v: Interval,
    replicas: usize,
    seed: Seed,
) -> Result<ThetaEstimate> {
    if v.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if replicas == 0 {
        return invalid("replicas >= 1 violated");
    }
    let fracs: Vec<f64> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let g = sample_model(v, f, q, seed.replica(r))?;
            Ok(g.clusters().largest_size() as f64 / v.len() as f64)
        })
        .collect::<Result<_>>()?;
    let (mean, stderr) = mean_stderr(&fracs);
    Ok(ThetaEstimate {
        mean,
        stderr,
        replicas,
        vertices: v.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaRow {
    pub n: u64,
    pub threshold: f64,
    pub successes: usize,
    pub replicas: usize,
    pub rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
    pub gamma: f64,
    pub rows: Vec<LemmaRow>,
}

/// Frequency of `|Ĉ_I(G)| ≥ N^γ` for `G ~ ν_β` on `I = [0, N)`.
pub fn lemma2_experiment(
    params: &ModelParams,
    gamma: f64,
    n_list: &[u64],
    replicas: usize,
    seed: Seed,
) -> Result<LemmaReport> {
    params.validate()?;
    if !(params.alpha / 2.0 < gamma && gamma < 1.0) {
        return invalid(format!(
            "alpha/2 < gamma < 1 violated (alpha = {}, gamma = {gamma})",
            params.alpha
        ));
    }
    Ok(LemmaReport {
        alpha: params.alpha,
        beta: params.beta,
        q: params.q,
        gamma,
        rows: lemma_rows(&params.edge_fn(), params.q, gamma, n_list, replicas, seed)?,
    })
}

/// Success rows of [`lemma2_experiment`] for any edge function.
pub fn lemma_rows(
    f: &EdgeProbFn,
    q: f64,
    gamma: f64,
    n_list: &[u64],
    replicas: usize,
    seed: Seed,
) -> Result<Vec<LemmaRow>> {
    if replicas == 0 || n_list.is_empty() || n_list.contains(&0) {
        return invalid("replicas >= 1 and nonempty sizes >= 1 violated");
    }
    n_list
        .iter()
        .map(|&n| {
            let v = Interval::with_len(n);
            let threshold = (n as f64).powf(gamma);
            let s = seed.child(n);
            let successes = (0..replicas)
                .into_par_iter()
                .map(|r| {
                    let g = sample_model(v, f, q, s.replica(r))?;
                    Ok(g.clusters().largest_size() as f64 >= threshold)
                })
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .filter(|&b| b)
                .count();
            let (wilson_lo, wilson_hi) = wilson_interval(successes, replicas, Z95);
            Ok(LemmaRow {
                n,
                threshold,
                successes,
                replicas,
                rate: successes as f64 / replicas as f64,
                wilson_lo,
                wilson_hi,
            })
        })
        .collect()
}

/// Proxy rate at one `(M, β)` grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProxyRow {
    pub side: Side,
    pub alpha: f64,
    pub q: f64,
    pub m: u64,
    pub beta: f64,
    pub proxy_rate: f64,
    pub stderr: f64,
    pub seed: u64,
    pub stream: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossing {
    pub m: u64,
    pub beta: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaCEstimate {
    pub side: Side,
    pub alpha: f64,
    pub q: f64,
    pub sizes: Vec<u64>,
    pub estimate: f64,
    pub ci: (f64, f64),
    pub proxy: String,
    pub replicas: usize,
    pub crossings: Vec<Crossing>,
    pub rows: Vec<ProxyRow>,
    /// Set for `α ≥ 2`, where equality of the two thresholds is only conjectured.
    pub exploratory: bool,
}

/// Crossing of `level` by linear interpolation between the first grid point
/// reaching it and its predecessor; clamps to the grid ends.
fn cross_at(grid: &[f64], rates: &[f64], level: f64) -> f64 {
    match rates.iter().position(|&r| r >= level) {
        None => *grid.last().unwrap(),
        Some(0) => grid[0],
        Some(g) => {
            let (b0, b1, r0, r1) = (grid[g - 1], grid[g], rates[g - 1], rates[g]);
            b0 + (level - r0) / (r1 - r0) * (b1 - b0)
        }
    }
}

/// Where `rates` crosses 1/2 along `grid`, with the band of `β` whose rate
/// lies within `z/(2√R)` of 1/2.
pub fn locate_crossing(grid: &[f64], rates: &[f64], replicas: usize) -> Result<(f64, f64, f64)> {
    if grid.len() < 2 || grid.len() != rates.len() {
        return invalid("grid of >= 2 points with one rate each violated");
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return invalid("beta grid strictly increasing violated");
    }
    let (first, last) = (rates[0], *rates.last().unwrap());
    if !(first < CROSSING_LEVEL && last >= CROSSING_LEVEL) {
        return Err(Error::GridTooNarrow {
            beta_first: grid[0],
            first,
            beta_last: *grid.last().unwrap(),
            last,
        });
    }
    let h = Z95 * 0.5 / (replicas.max(1) as f64).sqrt();
    let beta = cross_at(grid, rates, CROSSING_LEVEL);
    let lo = cross_at(grid, rates, CROSSING_LEVEL - h).min(beta);
    let hi = cross_at(grid, rates, CROSSING_LEVEL + h).max(beta);
    Ok((beta, lo, hi))
}

/// Smallest `β ≤ beta_max` at which the proxy holds in one coupled replica,
/// or `+∞` if it never does.
fn replica_threshold(
    side: Side,
    alpha: f64,
    m: u64,
    beta_max: f64,
    proxy: &Proxy,
    seed: Seed,
) -> Result<f64> {
    // The one-sided model is sampled on the two-sided window itself, so both
    // sides share every pair they have in common.
    let (dom, window) = match side {
        Side::TwoSided => (side.domain(m), side.window(m)),
        Side::OneSided => (centred(m), centred(m)),
    };
    let cs = sample_coupled(dom, alpha, beta_max, seed)?;
    let n = dom.len() as usize;
    let w = end_zone(window);
    let mut left = vec![false; n];
    let mut right = vec![false; n];
    let mut count = vec![0u32; n];
    for x in window.iter() {
        let i = dom.index(x);
        left[i] = x < window.lo() + w;
        right[i] = x >= window.hi() - w;
        count[i] = 1;
    }
    let need = match *proxy {
        Proxy::Span => 0.0,
        Proxy::Giant(c) => c * window.len() as f64,
    };
    let holds = |l: bool, r: bool, c: u32| match proxy {
        Proxy::Span => l && r,
        Proxy::Giant(_) => c as f64 >= need,
    };
    if count
        .iter()
        .zip(&left)
        .zip(&right)
        .any(|((&c, &l), &r)| holds(l, r, c))
    {
        return Ok(0.0);
    }
    let mut uf = UnionFind::new(n);
    for (beta, (a, b)) in cs.by_threshold() {
        let (ra, rb) = (uf.find(dom.index(a)), uf.find(dom.index(b)));
        if ra == rb {
            continue;
        }
        let root = uf.union(ra, rb).unwrap();
        let l = left[ra] || left[rb];
        let r = right[ra] || right[rb];
        let c = count[ra] + count[rb];
        left[root] = l;
        right[root] = r;
        count[root] = c;
        if holds(l, r, c) {
            return Ok(beta);
        }
    }
    Ok(f64::INFINITY)
}

/// Per-replica critical `β` for a `q = 1` coupled family at size `m`.
/// Replica `r` uses the same randomness for both sides.
pub fn replica_thresholds(
    side: Side,
    alpha: f64,
    m: u64,
    beta_max: f64,
    replicas: usize,
    proxy: &Proxy,
    seed: Seed,
) -> Result<Vec<f64>> {
    let s = seed.child(m);
    (0..replicas)
        .into_par_iter()
        .map(|r| replica_threshold(side, alpha, m, beta_max, proxy, s.replica(r)))
        .collect()
}

/// Crossing of the proxy probability through 1/2 on each size, and the
/// largest-size crossing as the estimate.
#[allow(clippy::too_many_arguments)]
pub fn estimate_beta_c(
    side: Side,
    alpha: f64,
    q: f64,
    m_list: &[u64],
    beta_grid: &[f64],
    replicas: usize,
    proxy: &Proxy,
    seed: Seed,
) -> Result<BetaCEstimate> {
    ModelParams::new(alpha, 0.0, q, 0.0)?;
    if m_list.len() < 3 {
        return invalid(format!("at least 3 sizes violated (got {})", m_list.len()));
    }
    if m_list.iter().any(|&m| m < 10) {
        return invalid("sizes >= 10 violated");
    }
    if replicas == 0 {
        return invalid("replicas >= 1 violated");
    }
    if beta_grid.len() < 2 || beta_grid.windows(2).any(|w| !(w[0] < w[1])) || beta_grid[0] < 0.0 {
        return invalid("beta grid nonnegative and strictly increasing violated");
    }
    let beta_max = *beta_grid.last().unwrap();
    let mut rows = Vec::new();
    let mut crossings = Vec::new();
    for &m in m_list {
        let rates: Vec<f64> = if q == 1.0 {
            let th = replica_thresholds(side, alpha, m, beta_max, replicas, proxy, seed)?;
            beta_grid
                .iter()
                .map(|&b| {
                    th.iter().filter(|&&t| t < b || t == 0.0).count() as f64 / replicas as f64
                })
                .collect()
        } else {
            fk_rates(side, alpha, q, m, beta_grid, replicas, proxy, seed)?
        };
        for (&beta, &rate) in beta_grid.iter().zip(&rates) {
            rows.push(ProxyRow {
                side,
                alpha,
                q,
                m,
                beta,
                proxy_rate: rate,
                stderr: binomial_stderr(rate, replicas),
                seed: seed.master,
                stream: seed.child(m).stream,
            });
        }
        let (beta, lo, hi) = locate_crossing(beta_grid, &rates, replicas)?;
        crossings.push(Crossing { m, beta, lo, hi });
    }
    let k = crossings.len();
    let last_two = &crossings[k - 2..];
    let estimate = crossings[k - 1].beta;
    let lo = last_two.iter().map(|c| c.lo).fold(estimate, f64::min);
    let hi = last_two.iter().map(|c| c.hi).fold(estimate, f64::max);
    Ok(BetaCEstimate {
        side,
        alpha,
        q,
        sizes: m_list.to_vec(),
        estimate,
        ci: (lo, hi),
        proxy: proxy.id(),
        replicas,
        crossings,
        rows,
        exploratory: alpha >= 2.0,
    })
}

#[allow(clippy::too_many_arguments)]
fn fk_rates(
    side: Side,
    alpha: f64,
    q: f64,
    m: u64,
    grid: &[f64],
    replicas: usize,
    proxy: &Proxy,
    seed: Seed,
) -> Result<Vec<f64>> {
    let dom = side.domain(m);
    if dom.len() > MAX_FK_VERTICES {
        return Err(Error::InfeasibleScale(format!(
            "q > 1 needs |V| <= {MAX_FK_VERTICES}, got {}",
            dom.len()
        )));
    }
    let window = side.window(m);
    grid.iter()
        .enumerate()
        .map(|(gi, &beta)| {
            let f = EdgeProbFn::dyson(beta, alpha)?;
            let s = seed.child(m).child(gi as u64);
            let hits = (0..replicas)
                .into_par_iter()
                .map(|r| {
                    let g = sample_model(dom, &f, q, s.replica(r))?;
                    proxy_in_window(&g.clusters(), window, proxy)
                })
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .filter(|&b| b)
                .count();
            Ok(hits as f64 / replicas as f64)
        })
        .collect()
}
