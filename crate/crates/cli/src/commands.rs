use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;

use dyson_core::dominance::{check_dominance_exact, conditioned_fk_law, sprinkle_laws, Condition};
use dyson_core::estimators::{estimate_beta_c, lemma2_experiment, Proxy, Side};
use dyson_core::models::{fk_sample_mcmc, sample_bernoulli, sample_site_bond};
use dyson_core::renorm::{
    build_schedule, coarse_edge_prob_lb, coarse_graph, good_block_sets, induction_step_experiment,
    BlockPartition, CoarseGraphSpec, RenormSchedule,
};
use dyson_core::{EdgeProbFn, Graph, Interval, ModelParams, Seed};

use crate::config::{parse_grid, parse_kv, parse_list, Opts};
use crate::output::{Cell, Table};

/// What a subcommand produces.
pub enum Artifact {
    Graph(Graph),
    Table { table: Table, streams: Vec<u64> },
}

fn table(t: Table, streams: Vec<u64>) -> Artifact {
    Artifact::Table { table: t, streams }
}

fn need<T: Clone>(v: &Option<T>, key: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| anyhow!("missing required option --{key}"))
}

impl Opts {
    pub fn seed_value(&self) -> Seed {
        Seed::new(self.seed.unwrap_or(0), self.stream.unwrap_or(0))
    }

    fn params(&self) -> Result<ModelParams> {
        Ok(ModelParams::new(
            self.alpha.unwrap_or(1.5),
            self.beta.unwrap_or(1.0),
            self.q.unwrap_or(1.0),
            self.delta.unwrap_or(0.0),
        )?)
    }

    fn side_value(&self) -> Result<Side> {
        Ok(self.side.as_deref().unwrap_or("one").parse()?)
    }

    fn sizes_value(&self) -> Result<Vec<u64>> {
        match (&self.sizes, self.size) {
            (Some(s), _) => parse_list(s, "sizes"),
            (None, Some(n)) => Ok(vec![n]),
            (None, None) => bail!("missing required option --sizes (or --size)"),
        }
    }

    fn replicas_value(&self) -> usize {
        self.replicas.unwrap_or(100)
    }
}

pub fn sample(o: &Opts) -> Result<Artifact> {
    let p = o.params()?;
    let v = o.side_value()?.domain(need(&o.size, "size")?);
    let seed = o.seed_value();
    let f = p.edge_fn();
    let g = match o.model.as_deref().unwrap_or("bernoulli") {
        "bernoulli" => sample_bernoulli(v, &f, seed),
        "fk" => fk_sample_mcmc(v, &f, p.q, o.sweeps.unwrap_or(100), seed)?,
        "site-bond" => sample_site_bond(v, need(&o.lambda, "lambda")?, &f, seed)?.graph,
        m => bail!("model must be bernoulli, fk or site-bond, got {m:?}"),
    };
    Ok(Artifact::Graph(g))
}

pub fn clusters(o: &Opts) -> Result<Artifact> {
    let path = need(&o.graph, "graph")?;
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {path}"))?;
    let g = Graph::from_text(&text)?;
    let p = g.clusters();
    let mut t = Table::new(&["lo", "hi", "edges", "clusters", "largest", "largest_min"]);
    let largest_min = if g.vertices().is_empty() {
        Cell::Null
    } else {
        Cell::from(p.largest_cluster()?[0])
    };
    t.push(vec![
        g.vertices().lo().into(),
        g.vertices().hi().into(),
        g.edge_count().into(),
        p.count().into(),
        p.largest_size().into(),
        largest_min,
    ]);
    Ok(table(t, vec![o.seed_value().stream]))
}

pub fn lemma2(o: &Opts) -> Result<Artifact> {
    let p = o.params()?;
    let gamma = o.gamma.unwrap_or(0.8);
    let sizes = o.sizes_value()?;
    let seed = o.seed_value();
    let r = lemma2_experiment(&p, gamma, &sizes, o.replicas_value(), seed)?;
    let mut t = Table::new(&[
        "alpha",
        "beta",
        "q",
        "gamma",
        "n",
        "threshold",
        "successes",
        "replicas",
        "rate",
        "wilson_lo",
        "wilson_hi",
    ]);
    let mut streams = Vec::new();
    for row in &r.rows {
        t.push(vec![
            r.alpha.into(),
            r.beta.into(),
            r.q.into(),
            r.gamma.into(),
            row.n.into(),
            row.threshold.into(),
            row.successes.into(),
            row.replicas.into(),
            row.rate.into(),
            row.wilson_lo.into(),
            row.wilson_hi.into(),
        ]);
        streams.push(seed.child(row.n).stream);
    }
    Ok(table(t, streams))
}

pub fn betac(o: &Opts) -> Result<Artifact> {
    let side = o.side_value()?;
    let grid = parse_grid(&need(&o.grid, "grid")?)?;
    let proxies: Vec<Proxy> = parse_list(o.proxy.as_deref().unwrap_or("span,giant"), "proxy")?;
    let sizes = o.sizes_value()?;
    let mut t = Table::new(&[
        "side",
        "alpha",
        "q",
        "m",
        "beta",
        "proxy",
        "proxy_rate",
        "stderr",
    ]);
    let mut streams = Vec::new();
    for proxy in &proxies {
        let e = estimate_beta_c(
            side,
            o.alpha.unwrap_or(1.5),
            o.q.unwrap_or(1.0),
            &sizes,
            &grid,
            o.replicas_value(),
            proxy,
            o.seed_value(),
        )?;
        for c in &e.crossings {
            eprintln!(
                "{} M = {}: crossing {:.5} [{:.5}, {:.5}]",
                e.proxy, c.m, c.beta, c.lo, c.hi
            );
        }
        eprintln!(
            "{} estimate {:.5} [{:.5}, {:.5}]{}",
            e.proxy,
            e.estimate,
            e.ci.0,
            e.ci.1,
            if e.exploratory {
                " (exploratory: conjecture only)"
            } else {
                ""
            }
        );
        for r in &e.rows {
            t.push(vec![
                r.side.id().into(),
                r.alpha.into(),
                r.q.into(),
                r.m.into(),
                r.beta.into(),
                e.proxy.clone().into(),
                r.proxy_rate.into(),
                r.stderr.into(),
            ]);
            streams.push(r.stream);
        }
    }
    Ok(table(t, streams))
}

pub fn coarse(o: &Opts) -> Result<Artifact> {
    let p = o.params()?;
    let m = need(&o.size, "size")?;
    let n = need(&o.block, "block")?;
    let gamma = o.gamma.unwrap_or(0.8);
    let seed = o.seed_value();
    let v = Interval::with_len(m);
    let g = sample_bernoulli(v, &p.edge_fn(), seed.child(1));
    let h = sample_bernoulli(v, &EdgeProbFn::dyson(p.delta, p.alpha)?, seed.child(2));
    let part = BlockPartition::new(v, n)?;
    let good = good_block_sets(&g, &h, &part, gamma)?;
    let idx: Vec<i64> = good.iter().map(|(k, _)| part.block_index(*k)).collect();
    let sets: Vec<Vec<i64>> = good.into_iter().map(|(_, s)| s).collect();
    let spec = CoarseGraphSpec::for_blocks(sets, &idx, n)?;
    let cg = coarse_graph(&h, &spec)?;
    eprintln!(
        "{} of {} blocks good; coarse graph has {} edges, {} clusters",
        spec.len(),
        part.len(),
        cg.edge_count(),
        if spec.is_empty() {
            0
        } else {
            cg.clusters().count()
        }
    );
    let mut t = Table::new(&[
        "i", "j", "block_i", "block_j", "size_i", "size_j", "d_ij", "p_lb",
    ]);
    for &(i, j) in cg.edges() {
        let (i, j) = (i as usize, j as usize);
        let d = spec.diameter_bound(i, j);
        let (si, sj) = (spec.sets()[i].len() as u64, spec.sets()[j].len() as u64);
        t.push(vec![
            i.into(),
            j.into(),
            idx[i].into(),
            idx[j].into(),
            si.into(),
            sj.into(),
            d.into(),
            coarse_edge_prob_lb(p.delta, si, sj, d, p.alpha)?.into(),
        ]);
    }
    Ok(table(t, vec![seed.stream]))
}

pub fn schedule(o: &Opts) -> Result<Artifact> {
    let s = build_schedule(
        need(&o.gamma_prime, "gamma-prime")?,
        need(&o.gamma, "gamma")?,
        o.alpha.unwrap_or(1.5),
        need(&o.epsilon, "epsilon")?,
        need(&o.c0, "c0")?,
        o.m1.unwrap_or(1),
        o.padding.unwrap_or(0),
        o.n_max.unwrap_or(6),
    )?;
    let mut t = Table::new(&["n", "c_n", "m_n", "d_n", "eps_n"]);
    for n in 1..=s.n_max {
        let (c, m, d, e) = s.level(n).expect("level in range");
        t.push(vec![n.into(), c.into(), m.into(), d.into(), e.into()]);
    }
    Ok(table(t, vec![o.seed_value().stream]))
}

pub fn induction(o: &Opts) -> Result<Artifact> {
    let p = o.params()?;
    let levels: Vec<u64> = parse_list(o.levels.as_deref().unwrap_or("16,16"), "levels")?;
    let s = RenormSchedule::from_levels(
        o.gamma.unwrap_or(0.8),
        p.alpha,
        o.epsilon1.unwrap_or(0.05),
        o.m1.unwrap_or(64),
        o.padding.unwrap_or(0),
        &levels,
    )?;
    let seed = o.seed_value();
    let r = induction_step_experiment(&p, &s, o.level.unwrap_or(2), o.replicas_value(), seed)?;
    let hist: Vec<String> = r.k_histogram.iter().map(|c| c.to_string()).collect();
    let mut t = Table::new(&[
        "n",
        "m_prev",
        "m_n",
        "c_n",
        "gamma",
        "d_n",
        "eps_prev",
        "padding",
        "replicas",
        "child_good_rate",
        "k_histogram",
        "k_threshold",
        "p_k_at_least",
        "markov_bound_schedule",
        "markov_bound_empirical",
        "coarse_edge_lb",
        "samples_k_at_least",
        "coarse_connected_rate",
        "er_bound_mean",
        "interval_good_rate",
        "implication_rhs",
        "chain_violations",
        "chain_holds",
        "markov_consistent",
        "er_consistent",
        "hypothesis_met",
        "implication_met",
    ]);
    t.push(vec![
        r.n.into(),
        r.m_prev.into(),
        r.m_n.into(),
        r.c_n.into(),
        r.gamma.into(),
        r.d_n.into(),
        r.eps_prev.into(),
        r.padding.into(),
        r.replicas.into(),
        r.child_good_rate.into(),
        hist.join(";").into(),
        r.k_threshold.into(),
        r.p_k_at_least.into(),
        r.markov_bound_schedule.into(),
        r.markov_bound_empirical.into(),
        r.coarse_edge_lb.into(),
        r.samples_k_at_least.into(),
        r.coarse_connected_rate.into(),
        r.er_bound_mean.into(),
        r.interval_good_rate.into(),
        r.implication_rhs.into(),
        r.chain_violations.into(),
        r.checks.chain_holds.into(),
        r.checks.markov_consistent.into(),
        r.checks.er_consistent.into(),
        r.checks.hypothesis_met.into(),
        r.checks.implication_met.into(),
    ]);
    Ok(table(t, vec![seed.stream]))
}

/// One line of a dominance corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusCase {
    pub kind: String,
    pub w: Interval,
    pub v: Interval,
    pub q: f64,
    pub beta: f64,
    pub delta: f64,
    pub alpha: f64,
    pub condition: Condition,
}

fn parse_interval(s: &str) -> Result<Interval> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("interval must be lo:hi, got {s:?}"))?;
    Ok(Interval::new(a.trim().parse()?, b.trim().parse()?)?)
}

/// Each non-comment line holds whitespace-separated `key=value` tokens:
/// `kind` (`conditioned` or `sprinkle`), `w`, `v` as `lo:hi`, `q`, `beta`,
/// `delta`, `alpha`, `condition`.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusCase>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let kv = parse_kv(&line.split_whitespace().collect::<Vec<_>>().join("\n"))
            .with_context(|| format!("corpus line {}", n + 1))?;
        let get = |k: &str| kv.get(k).map(String::as_str);
        let num = |k: &str, d: f64| -> Result<f64> {
            get(k).map_or(Ok(d), |s| {
                s.parse()
                    .map_err(|e| anyhow!("corpus line {}: {k}: {e}", n + 1))
            })
        };
        let kind = get("kind").unwrap_or("conditioned").to_string();
        let w =
            parse_interval(get("w").ok_or_else(|| anyhow!("corpus line {}: missing w", n + 1))?)?;
        let v = match get("v") {
            Some(s) => parse_interval(s)?,
            None => w,
        };
        out.push(CorpusCase {
            kind,
            w,
            v,
            q: num("q", 1.0)?,
            beta: num("beta", 1.0)?,
            delta: num("delta", 0.0)?,
            alpha: num("alpha", 1.5)?,
            condition: get("condition").unwrap_or("trivial").parse()?,
        });
    }
    Ok(out)
}

/// Decides the case's dominance relation; returns `(dominated, max_flow)`.
pub fn run_case(c: &CorpusCase) -> Result<(bool, f64)> {
    let (lo, hi) = match c.kind.as_str() {
        "conditioned" => {
            let f = EdgeProbFn::dyson(c.beta, c.alpha)?;
            let free = dyson_core::models::fk_exact_distribution(c.v, &f, c.q)?;
            let cond = conditioned_fk_law(c.w, c.v, &f, c.q, &c.condition)?;
            (free, cond)
        }
        "sprinkle" => sprinkle_laws(c.w, c.beta, c.delta, c.alpha, c.q)?,
        k => bail!("kind must be conditioned or sprinkle, got {k:?}"),
    };
    let cert = check_dominance_exact(&lo, &hi)?;
    Ok((cert.dominated, cert.max_flow))
}

pub fn dominate(o: &Opts) -> Result<Artifact> {
    let path = need(&o.corpus, "corpus")?;
    let text =
        std::fs::read_to_string(Path::new(&path)).with_context(|| format!("reading {path}"))?;
    let cases = parse_corpus(&text)?;
    let results: Vec<(bool, f64)> = cases.par_iter().map(run_case).collect::<Result<_>>()?;
    let mut t = Table::new(&[
        "case",
        "kind",
        "w_lo",
        "w_hi",
        "v_lo",
        "v_hi",
        "q",
        "beta",
        "delta",
        "alpha",
        "condition",
        "dominated",
        "max_flow",
    ]);
    for (k, (c, (dom, flow))) in cases.iter().zip(results).enumerate() {
        t.push(vec![
            k.into(),
            c.kind.clone().into(),
            c.w.lo().into(),
            c.w.hi().into(),
            c.v.lo().into(),
            c.v.hi().into(),
            c.q.into(),
            c.beta.into(),
            c.delta.into(),
            c.alpha.into(),
            c.condition.to_string().into(),
            dom.into(),
            flow.into(),
        ]);
    }
    Ok(table(t, vec![o.seed_value().stream]))
}
