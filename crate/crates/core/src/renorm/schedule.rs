use serde::Serialize;

use crate::error::{invalid, Result};

/// Smallest direct-summation depth for the correction product.
const MIN_DEPTH: u64 = 10_000;

/// Scale and error sequences of the renormalization, indexed from `n = 1`.
///
/// `c`, `m`, `d`, `eps` hold `c_n`, `M_n`, `d_n`, `ε_n` at position `n − 1`.
/// `M_n` quickly exceeds every integer type and is kept as `f64`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenormSchedule {
    pub gamma_prime: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub epsilon_1: f64,
    pub c0: u64,
    pub m1: u64,
    pub l: u64,
    pub n_max: usize,
    pub c: Vec<f64>,
    pub m: Vec<f64>,
    pub d: Vec<f64>,
    pub eps: Vec<f64>,
    pub product: CorrectionProduct,
}

/// `∏_{k≥1} (1 + 3 d_k)` split into a summed head and an estimated tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrectionProduct {
    /// Terms `k ≤ depth` are summed directly in log space.
    pub depth: u64,
    pub log_head: f64,
    pub log_tail: f64,
    /// Rigorous upper bound on the tail of the log series.
    pub log_tail_bound: f64,
    pub value: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn build_schedule(
    gamma_prime: f64,
    gamma: f64,
    alpha: f64,
    epsilon: f64,
    c0: u64,
    m1: u64,
    l: u64,
    n_max: usize,
) -> Result<RenormSchedule> {
    if !(alpha / 2.0 < gamma_prime) {
        return invalid(format!(
            "alpha/2 < gamma' violated (alpha = {alpha}, gamma' = {gamma_prime})"
        ));
    }
    if !(gamma_prime < gamma) {
        return invalid(format!(
            "gamma' < gamma violated (gamma' = {gamma_prime}, gamma = {gamma})"
        ));
    }
    if !(gamma < 1.0) {
        return invalid(format!("gamma < 1 violated (gamma = {gamma})"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return invalid(format!("0 < epsilon < 1 violated (epsilon = {epsilon})"));
    }
    if c0 < 1 || m1 < 1 || n_max < 1 {
        return invalid("c0, M1, n_max >= 1 violated");
    }

    let product = correction_product(gamma, c0, default_depth(gamma, c0))?;
    let epsilon_1 = epsilon / product.value;

    let c: Vec<f64> = (1..=n_max as u64)
        .map(|n| scale_factor(n, gamma, c0))
        .collect();
    let d: Vec<f64> = c.iter().map(|&cn| decay(cn, gamma)).collect();
    let mut m = vec![m1 as f64];
    let mut eps = vec![epsilon_1];
    for n in 1..n_max {
        m.push(m[n - 1] * c[n]);
        eps.push((1.0 + 3.0 * d[n]) * eps[n - 1]);
    }
    Ok(RenormSchedule {
        gamma_prime,
        gamma,
        alpha,
        epsilon,
        epsilon_1,
        c0,
        m1,
        l,
        n_max,
        c,
        m,
        d,
        eps,
        product,
    })
}

impl RenormSchedule {
    /// A desk-scale schedule with explicit integer `c_n` for `n = 1..`.
    /// `ε_1` is taken as given; `d_n` and `ε_n` follow the usual recursions.
    pub fn from_levels(
        gamma: f64,
        alpha: f64,
        epsilon_1: f64,
        m1: u64,
        l: u64,
        c: &[u64],
    ) -> Result<Self> {
        if !(alpha / 2.0 < gamma && gamma < 1.0) {
            return invalid(format!(
                "alpha/2 < gamma < 1 violated (alpha = {alpha}, gamma = {gamma})"
            ));
        }
        if !(epsilon_1 > 0.0 && epsilon_1 < 1.0) {
            return invalid(format!(
                "0 < epsilon_1 < 1 violated (epsilon_1 = {epsilon_1})"
            ));
        }
        if c.is_empty() || c.iter().any(|&x| x < 2) || m1 < 1 {
            return invalid("c_n >= 2 and M1 >= 1 violated");
        }
        let c: Vec<f64> = c.iter().map(|&x| x as f64).collect();
        let d: Vec<f64> = c.iter().map(|&cn| decay(cn, gamma)).collect();
        let mut m = vec![m1 as f64];
        let mut eps = vec![epsilon_1];
        for n in 1..c.len() {
            m.push(m[n - 1] * c[n]);
            eps.push((1.0 + 3.0 * d[n]) * eps[n - 1]);
        }
        let log_head: f64 = d.iter().map(|&x| (3.0 * x).ln_1p()).sum();
        Ok(Self {
            gamma_prime: gamma,
            gamma,
            alpha,
            epsilon: *eps.last().unwrap(),
            epsilon_1,
            c0: c[0] as u64,
            m1,
            l,
            n_max: c.len(),
            product: CorrectionProduct {
                depth: c.len() as u64,
                log_head,
                log_tail: 0.0,
                log_tail_bound: 0.0,
                value: log_head.exp(),
            },
            c,
            m,
            d,
            eps,
        })
    }

    /// Values at level `n` (1-based): `(c_n, M_n, d_n, ε_n)`.
    pub fn level(&self, n: usize) -> Option<(f64, f64, f64, f64)> {
        let k = n.checked_sub(1)?;
        Some((*self.c.get(k)?, self.m[k], self.d[k], self.eps[k]))
    }
}

/// `c_n = max{n^{2/(1−γ)}, c_0}`, rounded up to an integer. Values within
/// `1e−9` relative of an integer are snapped to it first, since the
/// exponent itself carries rounding error.
fn scale_factor(n: u64, gamma: f64, c0: u64) -> f64 {
    let x = (n as f64).powf(2.0 / (1.0 - gamma));
    let r = x.round();
    let x = if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r
    } else {
        x.ceil()
    };
    x.max(c0 as f64)
}

/// `d = c^{γ−1}`, taken as `1/r` when `r = c^{1−γ}` is an integer up to
/// `1e−9` relative.
fn decay(c: f64, gamma: f64) -> f64 {
    let x = c.powf(1.0 - gamma);
    let r = x.round();
    if r >= 1.0 && (x - r).abs() <= 1e-9 * r {
        1.0 / r
    } else {
        c.powf(gamma - 1.0)
    }
}

/// Index past which `c_k = k^{2/(1−γ)}`, so `d_k ≤ k^{−2}`.
fn power_regime_start(gamma: f64, c0: u64) -> u64 {
    ((c0 as f64).powf((1.0 - gamma) / 2.0).ceil() as u64).max(1)
}

fn default_depth(gamma: f64, c0: u64) -> u64 {
    MIN_DEPTH.max(4 * power_regime_start(gamma, c0))
}

/// `∏_{k≥1}(1 + 3d_k)`: direct log-sum up to `depth`, then an
/// Euler–Maclaurin tail for `ln(1 + 3x^{−2})`.
pub fn correction_product(gamma: f64, c0: u64, depth: u64) -> Result<CorrectionProduct> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return invalid(format!("0 < gamma < 1 violated (gamma = {gamma})"));
    }
    if depth < 2 * power_regime_start(gamma, c0) || depth < 16 {
        return invalid(format!("truncation depth {depth} too small"));
    }
    let mut log_head = 0.0;
    let mut comp = 0.0;
    for k in 1..=depth {
        let dk = decay(scale_factor(k, gamma, c0), gamma);
        // Kahan summation.
        let y = (3.0 * dk).ln_1p() - comp;
        let t = log_head + y;
        comp = (t - log_head) - y;
        log_head = t;
    }
    let log_tail = em_tail(depth as f64);
    let log_tail_bound = 3.0 / depth as f64;
    Ok(CorrectionProduct {
        depth,
        log_head,
        log_tail,
        log_tail_bound,
        value: (log_head + log_tail).exp(),
    })
}

/// `Σ_{k>K} ln(1 + a/k²)` for `a = 3`.
fn em_tail(k: f64) -> f64 {
    let a: f64 = 3.0;
    let sa = a.sqrt();
    let integral = 2.0 * sa * (sa / k).atan() - k * (a / (k * k)).ln_1p();
    let f = (a / (k * k)).ln_1p();
    let f1 = -2.0 * a / (k * k * k + a * k);
    let f3 = -24.0 * a / k.powi(5);
    integral - f / 2.0 - f1 / 12.0 + f3 / 720.0
}
