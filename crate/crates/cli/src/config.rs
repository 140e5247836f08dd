//! Flat `key = value` configuration merged under command-line flags.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use sha2::{Digest, Sha256};

/// Keys that do not change results and are left out of the config hash.
const UNHASHED: &[&str] = &["out", "format", "threads"];

macro_rules! options {
    ($($field:ident: $ty:ty = $key:literal, $help:literal;)*) => {
        /// Options shared by every subcommand. Each may also be given as
        /// `key = value` in the `--config` file; flags win.
        #[derive(Args, Debug, Default, Clone)]
        pub struct Opts {
            $(
                #[arg(long = $key, global = true, help = $help)]
                pub $field: Option<$ty>,
            )*
        }

        impl Opts {
            fn fill(&mut self, key: &str, value: &str) -> Result<()> {
                match key {
                    $(
                        $key => {
                            if self.$field.is_none() {
                                self.$field = Some(value.parse::<$ty>().map_err(|e| {
                                    anyhow!("config key `{key}`: cannot parse {value:?}: {e}")
                                })?);
                            }
                        }
                    )*
                    _ => bail!("unknown config key `{key}`"),
                }
                Ok(())
            }

            /// Every set option as `(key, value)`, in declaration order.
            pub fn entries(&self) -> Vec<(&'static str, String)> {
                let mut out = Vec::new();
                $(
                    if let Some(v) = &self.$field {
                        out.push(($key, v.to_string()));
                    }
                )*
                out
            }
        }
    };
}

options! {
    seed: u64 = "seed", "Master seed";
    stream: u64 = "stream", "Base stream id";
    alpha: f64 = "alpha", "Interaction exponent";
    beta: f64 = "beta", "Inverse temperature";
    q: f64 = "q", "Cluster weight";
    delta: f64 = "delta", "Sprinkling strength";
    side: String = "side", "one or two";
    size: u64 = "size", "System size M or N";
    sizes: String = "sizes", "Comma-separated sizes";
    replicas: usize = "replicas", "Replicas per point";
    gamma: f64 = "gamma", "Goodness exponent";
    gamma_prime: f64 = "gamma-prime", "Lower schedule exponent";
    epsilon: f64 = "epsilon", "Target error";
    epsilon1: f64 = "epsilon1", "Base-level error";
    c0: u64 = "c0", "Minimum scale factor";
    m1: u64 = "m1", "Base interval length";
    padding: u64 = "padding", "Boundary padding L";
    n_max: usize = "n-max", "Schedule depth";
    level: usize = "level", "Induction level n";
    levels: String = "levels", "Comma-separated scale factors c_1, c_2, ...";
    block: u64 = "block", "Block length N";
    lambda: f64 = "lambda", "Site retention probability";
    model: String = "model", "bernoulli, fk or site-bond";
    sweeps: usize = "sweeps", "Heat-bath sweeps";
    grid: String = "grid", "Beta grid: lo:hi:step or comma list";
    proxy: String = "proxy", "span or giant:c";
    graph: String = "graph", "Input graph file";
    corpus: String = "corpus", "Dominance corpus file";
    out: String = "out", "Output path (default stdout)";
    format: String = "format", "csv or jsonl";
    threads: usize = "threads", "Worker threads";
}

/// Parses `key = value` lines; `#` starts a comment. `_` in keys reads as `-`.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected `key = value`", n + 1))?;
        let key = k.trim().replace('_', "-");
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            bail!("line {}: duplicate key `{key}`", n + 1);
        }
    }
    Ok(map)
}

impl Opts {
    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        for (k, v) in parse_kv(&text)? {
            self.fill(&k, &v)?;
        }
        Ok(())
    }

    /// First 16 hex digits of SHA-256 over the sorted result-relevant options
    /// and the subcommand name.
    pub fn config_hash(&self, command: &str) -> String {
        let mut entries: Vec<(&str, String)> = self
            .entries()
            .into_iter()
            .filter(|(k, _)| !UNHASHED.contains(k))
            .collect();
        entries.sort();
        let mut h = Sha256::new();
        h.update(format!("command={command}\n"));
        for (k, v) in entries {
            h.update(format!("{k}={v}\n"));
        }
        h.finalize()[..8]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|e| anyhow!("{what}: cannot parse {t:?}: {e}"))
        })
        .collect()
}

/// `lo:hi:step` (inclusive of `hi` up to rounding) or a comma list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let v: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| anyhow!("grid: {e}"))?;
        let (lo, hi, step) = (v[0], v[1], v[2]);
        if step.is_nan() || step <= 0.0 || hi.is_nan() || hi < lo {
            bail!("grid: need step > 0 and hi >= lo");
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|k| lo + k as f64 * step).collect());
    }
    parse_list(s, "grid")
}
