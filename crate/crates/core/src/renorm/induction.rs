use rayon::prelude::*;
use serde::Serialize;

use super::{block_maxima, coarse_edge_prob_lb, coarse_graph, er_disconnect_bound, markov_lower};
use super::{BlockPartition, CoarseGraphSpec, RenormSchedule};
use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, Interval};
use crate::models::{sample_bernoulli, EdgeProbFn, FkChain, ModelParams};
use crate::rng::Seed;

/// Largest `M_n` the experiment accepts.
pub const MAX_INTERVAL: u64 = 1_000_000;
/// Largest padded domain for `q > 1`.
pub const MAX_FK_DOMAIN: u64 = 2048;
/// Heat-bath sweeps per FK sample.
pub const FK_SWEEPS: usize = 200;

const SLACK_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InductionChecks {
    /// `|Ĉ_I| ≥ |Ĉ(H̃)|·M_{n−1}^γ` in every sample, and every sample with
    /// `K ≥ c_n^γ` and `H̃` connected has `I` good.
    pub chain_holds: bool,
    /// `P̂(K ≥ c_n^γ) ≥ 1 − ε̂/(1 − d_n)` up to sampling error, with `ε̂` the
    /// observed child failure rate.
    pub markov_consistent: bool,
    /// Observed disconnection of `H̃` given `K ≥ c_n^γ` is at most the mean
    /// clamped `2K(1 − q̃)^{K−1}` up to sampling error.
    pub er_consistent: bool,
    /// Child good rate exceeds `1 − ε_{n−1}`.
    pub hypothesis_met: bool,
    /// Interval good rate exceeds `1 − ε_{n−1}(1 + 3d_n)` up to sampling
    /// error; `None` when the hypothesis fails.
    pub implication_met: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InductionReport {
    pub n: usize,
    pub replicas: usize,
    pub m_prev: u64,
    pub m_n: u64,
    pub c_n: u64,
    pub gamma: f64,
    pub d_n: f64,
    pub eps_prev: f64,
    pub padding: u64,
    pub child_good_rate: f64,
    /// `k_histogram[k]` counts samples with exactly `k` good children.
    pub k_histogram: Vec<usize>,
    pub k_threshold: f64,
    pub p_k_at_least: f64,
    pub markov_bound_schedule: f64,
    pub markov_bound_empirical: f64,
    /// Lower bound on each coarse edge probability.
    pub coarse_edge_lb: f64,
    pub samples_k_at_least: usize,
    pub coarse_connected_rate: Option<f64>,
    pub er_bound_mean: Option<f64>,
    pub interval_good_rate: f64,
    pub implication_rhs: f64,
    pub chain_violations: usize,
    pub checks: InductionChecks,
}

struct Sample {
    good_children: usize,
    coarse_connected: bool,
    i_good: bool,
    chain_ok: bool,
}

fn sample_g(params: &ModelParams, dom: Interval, seed: Seed) -> Result<Graph> {
    let f = params.edge_fn();
    if params.q == 1.0 {
        Ok(sample_bernoulli(dom, &f, seed))
    } else {
        let mut chain = FkChain::new(dom, &f, params.q, seed)?;
        chain.run(FK_SWEEPS);
        Ok(chain.graph())
    }
}

fn check_fk_scale(params: &ModelParams, dom: Interval) -> Result<()> {
    if params.q > 1.0 && dom.len() > MAX_FK_DOMAIN {
        return Err(Error::InfeasibleScale(format!(
            "q > 1 needs |I ± L| <= {MAX_FK_DOMAIN}, got {}",
            dom.len()
        )));
    }
    Ok(())
}

fn as_count(x: f64, what: &str) -> Result<u64> {
    if !(x.is_finite() && x <= MAX_INTERVAL as f64) {
        return Err(Error::InfeasibleScale(format!(
            "{what} = {x} exceeds {MAX_INTERVAL}"
        )));
    }
    Ok(x as u64)
}

fn sigma(p: f64, n: usize) -> f64 {
    let n = n.max(1) as f64;
    (p * (1.0 - p)).max(1.0 / n).sqrt() / n.sqrt()
}

/// Monte Carlo check of the ingredients of the step from level `n − 1` to
/// level `n` on `I = [0, M_n)`, children `J_j = [j M_{n−1}, (j+1) M_{n−1})`.
///
/// `G` is drawn on `I ± L` and the sprinkle `H ~ η_δ` on `I`. A child is good
/// when `|Ĉ_{J_j}(G ∪ H[J_j])| > M_{n−1}^γ`; the coarse graph joins good
/// children through sprinkle edges between them.
pub fn induction_step_experiment(
    params: &ModelParams,
    schedule: &RenormSchedule,
    n: usize,
    replicas: usize,
    seed: Seed,
) -> Result<InductionReport> {
    params.validate()?;
    if n < 2 || n > schedule.n_max {
        return invalid(format!("2 <= n <= n_max violated (n = {n})"));
    }
    if replicas == 0 {
        return invalid("replicas >= 1 violated");
    }
    let m_prev = as_count(schedule.m[n - 2], "M_{n-1}")?;
    let m_n = as_count(schedule.m[n - 1], "M_n")?;
    let c_n = schedule.c[n - 1] as u64;
    if m_prev * c_n != m_n {
        return Err(Error::InfeasibleScale(format!(
            "M_n = {m_n} is not M_(n-1) * c_n = {m_prev} * {c_n}"
        )));
    }
    let gamma = schedule.gamma;
    let (d_n, eps_prev) = (schedule.d[n - 1], schedule.eps[n - 2]);
    let interval = Interval::with_len(m_n);
    let dom = interval.pad(schedule.l);
    check_fk_scale(params, dom)?;
    let children = BlockPartition::new(interval, m_prev)?;
    let child_thr = (m_prev as f64).powf(gamma);
    let top_thr = (m_n as f64).powf(gamma);
    let k_thr = (c_n as f64).powf(gamma);
    let h_fn = EdgeProbFn::dyson(params.delta, params.alpha)?;
    let min_set = child_thr.floor() as u64 + 1;
    let q_lb = if params.delta > 0.0 {
        coarse_edge_prob_lb(params.delta, min_set, min_set, m_n, params.alpha)?
    } else {
        0.0
    };

    let samples: Vec<Sample> = (0..replicas)
        .into_par_iter()
        .map(|r| -> Result<Sample> {
            let rs = seed.replica(r);
            let g = sample_g(params, dom, rs.child(1))?;
            let h = sample_bernoulli(interval, &h_fn, rs.child(2));
            let maxima = block_maxima(&g.clusters(), &h, &children)?;
            let (mut sets, mut idx) = (Vec::new(), Vec::new());
            for (j, set) in maxima.into_iter().enumerate() {
                if set.len() as f64 > child_thr {
                    idx.push(children.block_index(j));
                    sets.push(set);
                }
            }
            let k = sets.len();
            let spec = CoarseGraphSpec::for_blocks(sets, &idx, m_prev)?;
            let coarse = coarse_graph(&h, &spec)?.clusters();
            let coarse_largest = if k == 0 { 0 } else { coarse.largest_size() };
            let c_i = g.union(&h)?.clusters().largest_induced_size(interval)?;
            let i_good = c_i as f64 > top_thr;
            let coarse_connected = k >= 1 && coarse.count() == 1;
            let chain_ok = c_i as f64 >= coarse_largest as f64 * child_thr
                && !(k as f64 >= k_thr && coarse_connected && !i_good);
            Ok(Sample {
                good_children: k,
                coarse_connected,
                i_good,
                chain_ok,
            })
        })
        .collect::<Result<_>>()?;

    let rf = replicas as f64;
    let mut k_histogram = vec![0usize; c_n as usize + 1];
    for s in &samples {
        k_histogram[s.good_children] += 1;
    }
    let total_good: usize = samples.iter().map(|s| s.good_children).sum();
    let child_good_rate = total_good as f64 / (rf * c_n as f64);
    let enough: Vec<&Sample> = samples
        .iter()
        .filter(|s| s.good_children as f64 >= k_thr)
        .collect();
    let p_k_at_least = enough.len() as f64 / rf;
    let (coarse_connected_rate, er_bound_mean) = if enough.is_empty() {
        (None, None)
    } else {
        let ne = enough.len() as f64;
        let conn = enough.iter().filter(|s| s.coarse_connected).count() as f64 / ne;
        let er = enough
            .iter()
            .map(|s| er_disconnect_bound(s.good_children, q_lb).min(1.0))
            .sum::<f64>()
            / ne;
        (Some(conn), Some(er))
    };
    let interval_good_rate = samples.iter().filter(|s| s.i_good).count() as f64 / rf;
    let chain_violations = samples.iter().filter(|s| !s.chain_ok).count();
    let implication_rhs = 1.0 - eps_prev * (1.0 + 3.0 * d_n);
    let markov_bound_schedule = markov_lower(eps_prev, d_n);
    let markov_bound_empirical = markov_lower(1.0 - child_good_rate, d_n);

    let markov_consistent =
        p_k_at_least + SLACK_SIGMAS * sigma(p_k_at_least, replicas) >= markov_bound_empirical;
    let er_consistent = match (coarse_connected_rate, er_bound_mean) {
        (Some(conn), Some(er)) => 1.0 - conn <= er + SLACK_SIGMAS * sigma(1.0 - conn, enough.len()),
        _ => true,
    };
    let hypothesis_met = child_good_rate > 1.0 - eps_prev;
    let implication_met = hypothesis_met.then(|| {
        interval_good_rate + SLACK_SIGMAS * sigma(interval_good_rate, replicas) > implication_rhs
    });

    Ok(InductionReport {
        n,
        replicas,
        m_prev,
        m_n,
        c_n,
        gamma,
        d_n,
        eps_prev,
        padding: schedule.l,
        child_good_rate,
        k_histogram,
        k_threshold: k_thr,
        p_k_at_least,
        markov_bound_schedule,
        markov_bound_empirical,
        coarse_edge_lb: q_lb,
        samples_k_at_least: enough.len(),
        coarse_connected_rate,
        er_bound_mean,
        interval_good_rate,
        implication_rhs,
        chain_violations,
        checks: InductionChecks {
            chain_holds: chain_violations == 0,
            markov_consistent,
            er_consistent,
            hypothesis_met,
            implication_met,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaddingCalibration {
    pub l: u64,
    pub rate: f64,
    /// Every `(L, rate)` tried, in order.
    pub trail: Vec<(u64, f64)>,
}

/// Smallest `L` in `0, 1, 2, 4, …, max_l` for which `I = [0, M_1)` is good
/// (`|Ĉ_I(G ∪ H[I])| > M_1^γ`, `G` on `I ± L`) with rate above `1 − ε_1`.
pub fn calibrate_padding(
    params: &ModelParams,
    m1: u64,
    gamma: f64,
    eps1: f64,
    replicas: usize,
    max_l: u64,
    seed: Seed,
) -> Result<PaddingCalibration> {
    params.validate()?;
    if m1 < 1 || replicas == 0 {
        return invalid("M1 >= 1 and replicas >= 1 violated");
    }
    if !(eps1 > 0.0 && eps1 < 1.0) {
        return invalid(format!("0 < epsilon_1 < 1 violated (epsilon_1 = {eps1})"));
    }
    let interval = Interval::with_len(m1);
    let thr = (m1 as f64).powf(gamma);
    let h_fn = EdgeProbFn::dyson(params.delta, params.alpha)?;
    let mut trail = Vec::new();
    let mut l = 0u64;
    loop {
        let dom = interval.pad(l);
        check_fk_scale(params, dom)?;
        let good = (0..replicas)
            .into_par_iter()
            .map(|r| -> Result<bool> {
                let rs = seed.replica(r);
                let g = sample_g(params, dom, rs.child(1))?;
                let h = sample_bernoulli(interval, &h_fn, rs.child(2));
                let size = g.union(&h)?.clusters().largest_induced_size(interval)?;
                Ok(size as f64 > thr)
            })
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .filter(|&b| b)
            .count();
        let rate = good as f64 / replicas as f64;
        trail.push((l, rate));
        if rate > 1.0 - eps1 {
            return Ok(PaddingCalibration { l, rate, trail });
        }
        if l >= max_l {
            return Err(Error::InfeasibleScale(format!(
                "no padding up to {max_l} reaches rate > {}",
                1.0 - eps1
            )));
        }
        l = if l == 0 { 1 } else { (2 * l).min(max_l) };
    }
}
