//! PRNG-backed random distributions on [0,1].
//!
//! All draws derive from a Mersenne Twister (MT19937-64) uniform engine.
//! Beta variates are produced by inverse-CDF: closed forms where they exist
//! (alpha = beta = 0.5, and one shape parameter equal to 1), a Newton
//! inversion of the binomial-sum CDF for integer shapes, and the statrs
//! quantile for anything else. Normal variates use the Box-Muller cosine
//! branch and consume two uniforms per draw.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand_mt::Mt64;
use statrs::distribution::ContinuousCDF;

use super::maps::{cospi2, sinpi2};
use crate::{Error, Result};

/// Distribution family with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DistFamily {
    Beta { alpha: f64, beta: f64 },
    Normal { mu: f64, sigma: f64 },
    Uniform { lo: f64, hi: f64 },
}

/// A distribution spec: family plus the out-of-range policy. With `clamp`
/// set, draws outside [0,1] are clamped; otherwise they are redrawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistributionSpec {
    pub family: DistFamily,
    pub clamp: bool,
}

impl DistributionSpec {
    pub fn beta(alpha: f64, beta: f64) -> Self {
        DistributionSpec { family: DistFamily::Beta { alpha, beta }, clamp: true }
    }

    pub fn normal(mu: f64, sigma: f64) -> Self {
        DistributionSpec { family: DistFamily::Normal { mu, sigma }, clamp: true }
    }

    pub fn uniform(lo: f64, hi: f64) -> Self {
        DistributionSpec { family: DistFamily::Uniform { lo, hi }, clamp: true }
    }

    pub fn validate(&self) -> Result<()> {
        match self.family {
            DistFamily::Beta { alpha, beta } => {
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha must be positive, got {alpha}"
                    )));
                }
                if !(beta > 0.0 && beta.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "beta must be positive, got {beta}"
                    )));
                }
                Ok(())
            }
            DistFamily::Normal { sigma, .. } => {
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "sigma must be positive, got {sigma}"
                    )));
                }
                Ok(())
            }
            DistFamily::Uniform { lo, hi } => {
                if !(lo < hi) {
                    return Err(Error::InvalidParameter(format!(
                        "uniform bounds must satisfy lo < hi, got ({lo}, {hi})"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Stateful sampler: the MT engine plus any precomputed inversion data.
#[derive(Clone, Debug)]
pub(crate) struct DistSampler {
    spec: DistributionSpec,
    rng: Mt64,
    kernel: BetaKernel,
}

#[derive(Clone, Debug)]
enum BetaKernel {
    None,
    Arcsine,
    Uniform01,
    /// beta = 1: F^-1(u) = u^(1/alpha)
    PowAlpha(f64),
    /// alpha = 1: F^-1(u) = 1 - (1-u)^(1/beta)
    PowBeta(f64),
    IntegerNewton(Arc<IntegerBetaInv>),
    General { alpha: f64, beta: f64 },
}

/// Quantile tables are expensive to build and identical for every source
/// with the same integer shapes, so they are cached process-wide.
fn cached_integer_inv(a: u32, b: u32) -> Arc<IntegerBetaInv> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<IntegerBetaInv>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("beta cache poisoned");
    guard.entry((a, b)).or_insert_with(|| Arc::new(IntegerBetaInv::new(a, b))).clone()
}

impl DistSampler {
    pub fn new(spec: DistributionSpec, seed: u64) -> Result<Self> {
        spec.validate()?;
        let kernel = match spec.family {
            DistFamily::Beta { alpha, beta } => {
                if alpha == 0.5 && beta == 0.5 {
                    BetaKernel::Arcsine
                } else if alpha == 1.0 && beta == 1.0 {
                    BetaKernel::Uniform01
                } else if beta == 1.0 {
                    BetaKernel::PowAlpha(1.0 / alpha)
                } else if alpha == 1.0 {
                    BetaKernel::PowBeta(1.0 / beta)
                } else if is_small_int(alpha) && is_small_int(beta) {
                    BetaKernel::IntegerNewton(cached_integer_inv(alpha as u32, beta as u32))
                } else {
                    BetaKernel::General { alpha, beta }
                }
            }
            _ => BetaKernel::None,
        };
        Ok(DistSampler { spec, rng: Mt64::new(seed), kernel })
    }

    /// Uniform draw in [0,1) with 53 random bits, the MT19937-64 real2 rule.
    #[inline]
    fn uniform01(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    pub fn draw(&mut self) -> f64 {
        loop {
            let raw = match self.spec.family {
                DistFamily::Uniform { lo, hi } => {
                    let u = self.uniform01();
                    lo + u * (hi - lo)
                }
                DistFamily::Normal { mu, sigma } => {
                    let u1 = self.uniform01();
                    let u2 = self.uniform01();
                    let r = (-2.0 * (1.0 - u1).ln()).sqrt();
                    // cos(2 pi u2) through the shared half-turn kernel
                    mu + sigma * r * cospi2(2.0 * u2)
                }
                DistFamily::Beta { .. } => {
                    let u = self.uniform01();
                    match &self.kernel {
                        BetaKernel::Arcsine => {
                            // F^-1(u) = sin^2(pi u / 2)
                            let s = sinpi2(0.5 * u);
                            s * s
                        }
                        BetaKernel::Uniform01 => u,
                        BetaKernel::PowAlpha(inv) => u.powf(*inv),
                        BetaKernel::PowBeta(inv) => 1.0 - (1.0 - u).powf(*inv),
                        BetaKernel::IntegerNewton(inv) => inv.quantile(u),
                        BetaKernel::General { alpha, beta } => {
                            statrs::distribution::Beta::new(*alpha, *beta)
                                .expect("validated parameters")
                                .inverse_cdf(u)
                        }
                        BetaKernel::None => unreachable!(),
                    }
                }
            };
            return match finish_draw(raw, self.spec.clamp) {
                Some(v) => v,
                None => continue,
            };
        }
    }
}

/// Out-of-range policy: clamp to [0,1], or signal a redraw when clamping is
/// disabled.
#[inline]
pub(crate) fn finish_draw(raw: f64, clamp: bool) -> Option<f64> {
    if (0.0..=1.0).contains(&raw) {
        Some(raw)
    } else if clamp {
        Some(raw.clamp(0.0, 1.0))
    } else {
        None
    }
}

fn is_small_int(v: f64) -> bool {
    v.fract() == 0.0 && v >= 2.0 && v <= 30.0
}

/// Inverse CDF of Beta(a, b) for small integer shapes. The CDF is the
/// binomial tail I_z(a,b) = P(Bin(a+b-1, z) >= a); the quantile is found by
/// Newton iteration seeded from a 257-entry table built at construction.
#[derive(Clone, Debug)]
pub(crate) struct IntegerBetaInv {
    a: u32,
    b: u32,
    /// 1 / B(a,b), the pdf normalization.
    inv_beta_fn: f64,
    table: Vec<f64>,
}

impl IntegerBetaInv {
    pub fn new(a: u32, b: u32) -> Self {
        // B(a,b) = (a-1)!(b-1)!/(a+b-1)! computed as a product to stay in range
        let mut ln_b = 0.0f64;
        for k in 1..a {
            ln_b += (k as f64).ln();
        }
        for k in 1..b {
            ln_b += (k as f64).ln();
        }
        for k in 1..(a + b) {
            ln_b -= (k as f64).ln();
        }
        let mut inv = IntegerBetaInv { a, b, inv_beta_fn: (-ln_b).exp(), table: Vec::new() };
        let mut table = Vec::with_capacity(TABLE_CELLS + 1);
        for i in 0..=TABLE_CELLS as u32 {
            let u = i as f64 / TABLE_CELLS as f64;
            table.push(inv.solve(u, 1e-14));
        }
        inv.table = table;
        inv
    }

    /// Regularized incomplete beta I_z(a,b) via the binomial sum.
    pub fn cdf(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        if z >= 1.0 {
            return 1.0;
        }
        let n = self.a + self.b - 1;
        // term at j = a, then upward recurrence in j
        let mut term = binom(n, self.a) * z.powi(self.a as i32) * (1.0 - z).powi((n - self.a) as i32);
        let mut sum = term;
        let ratio = z / (1.0 - z);
        for j in self.a..n {
            term *= (n - j) as f64 / (j + 1) as f64 * ratio;
            sum += term;
        }
        sum.clamp(0.0, 1.0)
    }

    fn pdf(&self, z: f64) -> f64 {
        z.powi(self.a as i32 - 1) * (1.0 - z).powi(self.b as i32 - 1) * self.inv_beta_fn
    }

    fn solve(&self, u: f64, tol: f64) -> f64 {
        self.solve_in(0.0, 1.0, u, u, tol)
    }

    /// Newton iteration safeguarded by a shrinking bracket; falls back to
    /// bisection whenever a step leaves the bracket or the pdf vanishes.
    fn solve_in(&self, mut lo: f64, mut hi: f64, z0: f64, u: f64, tol: f64) -> f64 {
        let mut z = z0.clamp(lo, hi);
        for _ in 0..200 {
            let f = self.cdf(z) - u;
            if f > 0.0 {
                hi = z;
            } else {
                lo = z;
            }
            let d = self.pdf(z);
            let mut next = if d > 0.0 { z - f / d } else { 0.5 * (lo + hi) };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - z).abs() <= tol {
                return next;
            }
            z = next;
        }
        z
    }

    pub fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return 1.0;
        }
        let idx = ((u * 256.0) as usize).min(255);
        let (zl, zh) = (self.table[idx], self.table[idx + 1]);
        // the outermost table cells span the steep quantile tails where
        // a warm bracket does not help; use the full safeguarded solve
        if idx == 0 || idx == 255 {
            return self.solve(u, 1e-14);
        }
        let fl = idx as f64 / 256.0;
        let z0 = zl + (zh - zl) * (u - fl) * 256.0;
        self.solve_in(zl, zh, z0, u, 1e-14)
    }
}

fn binom(n: u32, k: u32) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_alpha_zero_names_field() {
        let err = DistributionSpec::beta(0.0, 1.0).validate().unwrap_err();
        assert!(err.to_string().contains("alpha must be positive"));
    }

    #[test]
    fn clamp_pulls_overshoot_to_one() {
        assert_eq!(finish_draw(1.07, true), Some(1.0));
        assert_eq!(finish_draw(-0.2, true), Some(0.0));
        assert_eq!(finish_draw(1.07, false), None);
    }

    #[test]
    fn arcsine_quantile_midpoint() {
        let mut s = DistSampler::new(DistributionSpec::beta(0.5, 0.5), 1).unwrap();
        // F^-1(0.5) = sin^2(pi/4) = 0.5; check the closed form through draws
        // by verifying the sampler stays in range and is deterministic.
        let a: Vec<f64> = (0..100).map(|_| s.draw()).collect();
        let mut s2 = DistSampler::new(DistributionSpec::beta(0.5, 0.5), 1).unwrap();
        let b: Vec<f64> = (0..100).map(|_| s2.draw()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn integer_beta_matches_statrs() {
        use statrs::distribution::{Beta, ContinuousCDF};
        let inv = IntegerBetaInv::new(13, 13);
        let reference = Beta::new(13.0, 13.0).unwrap();
        for &u in &[1e-6, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0 - 1e-6] {
            let z = inv.quantile(u);
            assert!((reference.cdf(z) - u).abs() < 1e-9, "u={u} z={z}");
        }
    }

    #[test]
    fn integer_beta_fast_and_exact_cdf() {
        let inv = IntegerBetaInv::new(13, 13);
        // binomial-sum CDF against statrs at a few points
        use statrs::distribution::{Beta, ContinuousCDF};
        let reference = Beta::new(13.0, 13.0).unwrap();
        for &z in &[0.05, 0.3, 0.5, 0.62, 0.95] {
            assert!((inv.cdf(z) - reference.cdf(z)).abs() < 1e-12);
        }
    }

    #[test]
    fn beta_1_5_closed_form() {
        let mut s = DistSampler::new(DistributionSpec::beta(1.0, 5.0), 7).unwrap();
        for _ in 0..1000 {
            let v = s.draw();
            assert!((0.0..=1.0).contains(&v));
        }
    }
}
