use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Subset;
use crate::numeric::{binomial, h, random_prime_u64};
use crate::rng::RandomSource;

/// Slack for rounding real-valued sizes that land just above an integer.
const ROUND_EPS: f64 = 1e-9;

/// Derived parameters of one representation-technique iteration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReprParams {
    pub n: usize,
    pub m_size: usize,
    pub mu: f64,
    pub gamma: f64,
    pub s: usize,
    pub s1: usize,
    pub s2: usize,
    pub sigma: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub pi: f64,
    pub lambda: f64,
    /// `⌈λn⌉`, clamped to `[0, n - |M|]`.
    pub l_size: usize,
    /// `n - |M| - |L|`.
    pub r_size: usize,
    pub p: u64,
    pub t_l: u64,
    /// Set when `⌈2^{π|M|}⌉ < 3` and the prime interval was raised to start at 3.
    pub clamped: bool,
}

impl ReprParams {
    /// `(λ + h(σ/2)μ)/2`: the fraction of `n` enumerated directly on the `L` side.
    pub fn lambda1(&self) -> f64 {
        (self.lambda + h(self.sigma / 2.0) * self.mu) / 2.0
    }

    /// `|L₁| = ⌊λ₁n⌋`, clamped to `[0, |L|]`.
    pub fn left_split(&self) -> usize {
        split_size(self.lambda1(), self.n, self.l_size)
    }

    /// The `R` side uses the same rule with `ρ = |R|/n` in place of `λ`.
    pub fn right_split(&self) -> usize {
        let rho = self.r_size as f64 / self.n as f64;
        let rho1 = (rho + h(self.sigma / 2.0) * self.mu) / 2.0;
        split_size(rho1, self.n, self.r_size)
    }

    /// `W_L = 2^|L|·C(|M|, s₁)`.
    pub fn left_space(&self) -> f64 {
        (self.l_size as f64).exp2() * binomial(self.m_size as u64, self.s1 as u64) as f64
    }

    /// `W_R = 2^|R|·C(|M|, s₂)`.
    pub fn right_space(&self) -> f64 {
        (self.r_size as f64).exp2() * binomial(self.m_size as u64, self.s2 as u64) as f64
    }

    /// `2^{π|M|}`, the nominal modulus.
    pub fn nominal_modulus(&self) -> f64 {
        (self.pi * self.m_size as f64).exp2()
    }
}

fn split_size(fraction: f64, n: usize, cap: usize) -> usize {
    ((fraction * n as f64 + ROUND_EPS).floor().max(0.0) as usize).min(cap)
}

/// The modulus and residue shared by every `s₁` of one `(target, s)` attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Modulus {
    pub p: u64,
    pub t_l: u64,
    pub clamped: bool,
}

pub(crate) fn check_shape(n: usize, m: Subset, gamma: f64) -> Result<usize> {
    let k = m.len();
    if !m.fits(n) {
        return Err(Error::Contract(format!("M = {m} reaches past n = {n}")));
    }
    if k == 0 || 2 * k > n {
        return Err(Error::Contract(format!("|M| = {k} must lie in [1, n/2] for n = {n}")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Contract(format!("gamma = {gamma} outside [0, 1]")));
    }
    Ok(k)
}

pub(crate) fn draw_modulus(m_size: usize, gamma: f64, s: usize, rng: &mut RandomSource) -> Result<Modulus> {
    let pi = gamma - 1.0 + s as f64 / m_size as f64;
    let nominal = (pi * m_size as f64).exp2();
    let lo = (nominal - ROUND_EPS).ceil();
    let clamped = lo < 3.0;
    let p = random_prime_u64(if clamped { 3 } else { lo as u64 }, rng)?;
    let t_l = rng.below(p);
    Ok(Modulus { p, t_l, clamped })
}

pub(crate) fn fill_params(n: usize, m_size: usize, gamma: f64, s: usize, s1: usize, modulus: Modulus) -> ReprParams {
    let mu = m_size as f64 / n as f64;
    let sigma = s as f64 / m_size as f64;
    let sigma1 = s1 as f64 / m_size as f64;
    let s2 = s - s1;
    let lambda = (1.0 - mu) / 2.0 + (h(sigma / 2.0) - h(sigma1)) * mu;
    let rest = n - m_size;
    let l_size = ((lambda * n as f64 - ROUND_EPS).ceil().max(0.0) as usize).min(rest);
    ReprParams {
        n,
        m_size,
        mu,
        gamma,
        s,
        s1,
        s2,
        sigma,
        sigma1,
        sigma2: s2 as f64 / m_size as f64,
        pi: gamma - 1.0 + sigma,
        lambda,
        l_size,
        r_size: rest - l_size,
        p: modulus.p,
        t_l: modulus.t_l,
        clamped: modulus.clamped,
    }
}

/// Draws `p` and `t_L` and evaluates every derived quantity for one iteration.
pub fn derive_params(
    n: usize,
    m: Subset,
    gamma: f64,
    s: usize,
    s1: usize,
    rng: &mut RandomSource,
) -> Result<ReprParams> {
    let k = check_shape(n, m, gamma)?;
    if s < k.div_ceil(2) || s > k {
        return Err(Error::Contract(format!("s = {s} outside [{}, {k}]", k.div_ceil(2))));
    }
    if s1 > s - s1 {
        return Err(Error::Contract(format!("s1 = {s1} exceeds s2 = {}", s - s1)));
    }
    let modulus = draw_modulus(k, gamma, s, rng)?;
    Ok(fill_params(n, k, gamma, s, s1, modulus))
}
