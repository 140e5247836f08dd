//! Stochastic domination: monotone couplings, the sprinkling identity, and an
//! exact dominance decision for enumerable laws.
//!
//! `lo ≺ hi` holds iff some coupling puts all its mass on pairs `(H, G)` with
//! `H ⊆ G`. At enumerable scale this is a transportation problem: source →
//! each `hi` configuration (capacity its mass), `G → H` whenever `H ⊆ G`
//! (unbounded), each `lo` configuration → sink (capacity its mass).
//! Dominance holds iff the maximum flow carries all of `lo`'s mass. When it
//! does not, the `lo` configurations cut off from the source generate an
//! increasing event with `lo(U) > hi(U)`.

mod condition;
mod flow;
mod law;

pub use condition::Condition;
pub use law::DiscreteGraphLaw;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Interval};
use crate::models::{dyson_coupling, fk_exact_distribution, one_minus_exp_neg, EdgeProbFn};
use crate::rng::Seed;
use flow::FlowNetwork;

/// Largest pair universe accepted by [`check_dominance_exact`].
pub const DOMINANCE_PAIR_LIMIT: usize = 10;
/// Slack on the flow value when deciding dominance.
pub const FEASIBILITY_SLACK: f64 = 1e-9;

/// Two Bernoulli graphs driven by one uniform per pair, so `lo ⊆ hi` always.
pub fn monotone_coupling(
    f_lo: &EdgeProbFn,
    f_hi: &EdgeProbFn,
    v: Interval,
    seed: Seed,
) -> Result<(Graph, Graph)> {
    let mut rng = seed.rng();
    let (mut lo, mut hi) = (Vec::new(), Vec::new());
    for (i, j) in v.pairs() {
        let (pl, ph) = (f_lo.prob_unchecked(i, j), f_hi.prob_unchecked(i, j));
        if pl > ph {
            return Err(Error::NotOrdered {
                i,
                j,
                lo: pl,
                hi: ph,
            });
        }
        let u: f64 = rng.random();
        if u < pl {
            lo.push((i, j));
        }
        if u < ph {
            hi.push((i, j));
        }
    }
    Ok((Graph::from_trusted(v, lo), Graph::from_trusted(v, hi)))
}

/// At `q = 1`: the edge probability of `G ∪ H` with `G ~ η_β`, `H ~ η_δ`,
/// the target probability at `β + 2δ`, and whether the first is at most the second.
pub fn sprinkle_edge_identity(
    beta: f64,
    delta: f64,
    alpha: f64,
    i: i64,
    j: i64,
) -> Result<(f64, f64, bool)> {
    if i == j {
        return Err(Error::SelfLoop(i));
    }
    let jij = dyson_coupling(i.abs_diff(j), alpha);
    let combined = one_minus_exp_neg((beta + delta) * jij);
    let target = one_minus_exp_neg((beta + 2.0 * delta) * jij);
    Ok((combined, target, combined <= target))
}

/// Exact law of `G[V]` under the FK measure on `W` conditioned on an event
/// about the pairs of `W` outside `V⁽²⁾`.
pub fn conditioned_fk_law(
    w: Interval,
    v: Interval,
    f: &EdgeProbFn,
    q: f64,
    condition: &Condition,
) -> Result<DiscreteGraphLaw> {
    w.ensure_contains(&v)?;
    let pairs: Vec<(i64, i64)> = w.pairs().collect();
    if pairs.len() > crate::models::ENUMERATION_PAIR_LIMIT {
        return Err(Error::EnumerationLimit {
            pairs: pairs.len(),
            limit: crate::models::ENUMERATION_PAIR_LIMIT,
        });
    }
    let inside_idx: Vec<usize> = (0..pairs.len())
        .filter(|&k| v.contains(pairs[k].0) && v.contains(pairs[k].1))
        .collect();
    let outside_idx: Vec<usize> = (0..pairs.len())
        .filter(|k| !inside_idx.contains(k))
        .collect();
    let outside_pairs: Vec<(i64, i64)> = outside_idx.iter().map(|&k| pairs[k]).collect();

    let mut truth = Vec::with_capacity(1 << outside_idx.len());
    for o in 0..1usize << outside_idx.len() {
        let open: Vec<bool> = (0..outside_idx.len()).map(|k| o >> k & 1 == 1).collect();
        truth.push(condition.holds(&outside_pairs, &open)?);
    }
    let outside_bits = |state: usize| {
        outside_idx
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, &b)| acc | (state >> b & 1) << k)
    };
    let inside_bits = |state: usize| {
        inside_idx
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, &b)| acc | (state >> b & 1) << k)
    };

    let probs: Vec<f64> = pairs.iter().map(|&(i, j)| f.prob_unchecked(i, j)).collect();
    let weights =
        crate::models::fk_weights_filtered(w, &pairs, &probs, q, |s| truth[outside_bits(s)]);
    let mut projected = vec![0.0; 1 << inside_idx.len()];
    for (s, wt) in weights.into_iter().enumerate() {
        projected[inside_bits(s)] += wt;
    }
    let inside_pairs = inside_idx.iter().map(|&k| pairs[k]).collect();
    DiscreteGraphLaw::from_weights(inside_pairs, projected)
}

/// Probability mass moved from a `lo` configuration to a `hi` superset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingMass {
    pub lo_state: usize,
    pub hi_state: usize,
    pub mass: f64,
}

/// An increasing event given by its minimal configurations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Upset {
    pub generators: Vec<usize>,
    pub lo_mass: f64,
    pub hi_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceCertificate {
    pub dominated: bool,
    pub max_flow: f64,
    /// Witness coupling; empty when dominance fails.
    pub coupling: Vec<CouplingMass>,
    /// Violated increasing event; present when dominance fails.
    pub violation: Option<Upset>,
}

/// Decides `lo ≺ hi` by maximum flow.
pub fn check_dominance_exact(
    lo: &DiscreteGraphLaw,
    hi: &DiscreteGraphLaw,
) -> Result<DominanceCertificate> {
    lo.same_universe(hi)?;
    let m = lo.pairs().len();
    if m > DOMINANCE_PAIR_LIMIT {
        return Err(Error::EnumerationLimit {
            pairs: m,
            limit: DOMINANCE_PAIR_LIMIT,
        });
    }
    let states = 1usize << m;
    let (src, sink) = (0, 1);
    let hi_node = |g: usize| 2 + g;
    let lo_node = |h: usize| 2 + states + h;
    let mut net = FlowNetwork::new(2 + 2 * states);
    let mut middle = Vec::new();
    for g in 0..states {
        if hi.probs()[g] > 0.0 {
            net.add_edge(src, hi_node(g), hi.probs()[g]);
        }
    }
    for h in 0..states {
        if lo.probs()[h] > 0.0 {
            net.add_edge(lo_node(h), sink, lo.probs()[h]);
        }
    }
    for g in (0..states).filter(|&g| hi.probs()[g] > 0.0) {
        let mut sub = g;
        loop {
            if lo.probs()[sub] > 0.0 {
                middle.push((sub, g, net.add_edge(hi_node(g), lo_node(sub), 2.0)));
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & g;
        }
    }
    let max_flow = net.max_flow(src, sink);
    let lo_total: f64 = lo.probs().iter().sum();
    if max_flow >= lo_total - FEASIBILITY_SLACK {
        let coupling = middle
            .into_iter()
            .filter_map(|(h, g, e)| {
                let mass = net.flow_on(e);
                (mass > 0.0).then_some(CouplingMass {
                    lo_state: h,
                    hi_state: g,
                    mass,
                })
            })
            .collect();
        return Ok(DominanceCertificate {
            dominated: true,
            max_flow,
            coupling,
            violation: None,
        });
    }
    let reach = net.reachable(src, 1e-12);
    let cut: Vec<usize> = (0..states)
        .filter(|&h| lo.probs()[h] > 0.0 && !reach[lo_node(h)])
        .collect();
    let generators: Vec<usize> = cut
        .iter()
        .copied()
        .filter(|&h| !cut.iter().any(|&o| o != h && o & h == o))
        .collect();
    let violation = Upset {
        lo_mass: lo.upset_mass(&generators),
        hi_mass: hi.upset_mass(&generators),
        generators,
    };
    Ok(DominanceCertificate {
        dominated: false,
        max_flow,
        coupling: Vec::new(),
        violation: Some(violation),
    })
}

/// The two sides of the sprinkling relation on `v` at enumerable scale:
/// the law of `G ∪ H` with `G ~ FK_q(β)`, `H ~ η_δ` independent, and the
/// FK law at `β + 2δ`.
pub fn sprinkle_laws(
    v: Interval,
    beta: f64,
    delta: f64,
    alpha: f64,
    q: f64,
) -> Result<(DiscreteGraphLaw, DiscreteGraphLaw)> {
    let base = fk_exact_distribution(v, &EdgeProbFn::dyson(beta, alpha)?, q)?;
    let sprinkled = fk_exact_distribution(v, &EdgeProbFn::dyson(delta, alpha)?, 1.0)?;
    let combined = base.union_independent(&sprinkled)?;
    let target = fk_exact_distribution(v, &EdgeProbFn::dyson(beta + 2.0 * delta, alpha)?, q)?;
    Ok((combined, target))
}
