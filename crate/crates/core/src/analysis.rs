//! Characterization of sequence sources: empirical densities, Lyapunov
//! exponents, the lag-autocorrelation profile and its area under the curve,
//! and a two-sample Kolmogorov-Smirnov distance for distribution-level
//! equivalence checks.

use rayon::prelude::*;

use crate::sources::{MapSpec, SequenceSource, SourceSpec, ValueSource};
use crate::{Error, Result};

/// Neumaier compensated accumulator. Densities and Lyapunov sums are reduced
/// with it in a fixed order so results do not depend on thread count.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.c += (self.sum - t) + v;
        } else {
            self.c += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Histogram approximation of a source's long-run value distribution,
/// normalized so that the densities integrate to one.
#[derive(Clone, Debug)]
pub struct DensityHistogram {
    /// bins + 1 edges partitioning [0,1].
    pub bin_edges: Vec<f64>,
    /// Normalized density per bin.
    pub density: Vec<f64>,
    /// Total number of accumulated samples.
    pub samples: u64,
}

impl DensityHistogram {
    pub fn bins(&self) -> usize {
        self.density.len()
    }

    /// Density of the bin containing `x`.
    pub fn density_at(&self, x: f64) -> f64 {
        let bins = self.bins();
        let idx = ((x * bins as f64) as usize).min(bins - 1);
        self.density[idx]
    }

    /// Integral of the density over [0,1]; one up to rounding.
    pub fn total_mass(&self) -> f64 {
        let mut acc = KahanSum::default();
        for (i, d) in self.density.iter().enumerate() {
            acc.add(d * (self.bin_edges[i + 1] - self.bin_edges[i]));
        }
        acc.value()
    }
}

/// Empirical density over `n_inits` seeded streams of length `iters` each,
/// on `bins` equal bins over [0,1]. Seeds derive from `base_seed`; the
/// reduction order is fixed, so the result is independent of thread count.
pub fn invariant_density(
    spec: &SourceSpec,
    n_inits: u64,
    iters: u64,
    bins: usize,
    base_seed: u64,
) -> Result<DensityHistogram> {
    if n_inits < 1 || iters < 1 || bins < 2 {
        return Err(Error::InvalidParameter(
            "need n_inits >= 1, iters >= 1, bins >= 2".into(),
        ));
    }
    let counts: Vec<u64> = (0..n_inits)
        .into_par_iter()
        .map(|i| {
            let mut src = SequenceSource::new(spec, stream_seed(base_seed, i))
                .expect("validated spec");
            let mut local = vec![0u64; bins];
            for _ in 0..iters {
                let v = src.next_value();
                let idx = ((v * bins as f64) as usize).min(bins - 1);
                local[idx] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let samples = n_inits * iters;
    let width = 1.0 / bins as f64;
    let density: Vec<f64> =
        counts.iter().map(|&c| c as f64 / (samples as f64 * width)).collect();
    let bin_edges: Vec<f64> = (0..=bins).map(|i| i as f64 * width).collect();
    Ok(DensityHistogram { bin_edges, density, samples })
}

/// Lyapunov exponent estimate in nats per iteration.
#[derive(Clone, Copy, Debug)]
pub struct LyapunovEstimate {
    pub lambda: f64,
    pub inits: u64,
    pub iters: u64,
}

/// Average of ln |f'(z_k)| along `n_inits` raw (un-rescaled) orbits of
/// `iters` steps each, skipping flagged non-differentiable points. Orbits are
/// seeded and burned in exactly like sources.
pub fn lyapunov_exponent(
    spec: &SourceSpec,
    n_inits: u64,
    iters: u64,
    base_seed: u64,
) -> Result<LyapunovEstimate> {
    let map = *spec.as_map()?;
    let per_orbit: Vec<f64> = (0..n_inits)
        .into_par_iter()
        .map(|i| orbit_log_derivative_mean(&map, stream_seed(base_seed, i), iters))
        .collect();
    let mut acc = KahanSum::default();
    for v in &per_orbit {
        acc.add(*v);
    }
    Ok(LyapunovEstimate { lambda: acc.value() / n_inits as f64, inits: n_inits, iters })
}

fn orbit_log_derivative_mean(map: &MapSpec, seed: u64, iters: u64) -> f64 {
    let mut src = SequenceSource::new(
        &SourceSpec { id: "orbit".into(), kind: crate::sources::SourceKind::Map(*map) },
        seed,
    )
    .expect("validated map");
    let mut z = src.map_state().expect("map source");
    let mut acc = KahanSum::default();
    let mut kept = 0u64;
    for _ in 0..iters {
        let d = map.derivative(z);
        if !d.flagged && d.value != 0.0 {
            acc.add(d.value.abs().ln());
            kept += 1;
        }
        src.next_value();
        z = src.map_state().expect("map source");
    }
    if kept == 0 {
        0.0
    } else {
        acc.value() / kept as f64
    }
}

/// Autocorrelation estimates r(lag) for lags 1..=lmax.
///
/// The estimator compares the section starting at the second observation
/// with the section starting at observation `lag`, both centred on the mean
/// of observations 2..=T, and divides by the full centred sum of squares; at
/// lag 1 the two sections coincide, so r(1) = 1 identically.
#[derive(Clone, Debug)]
pub struct AutocorrReport {
    pub lags: Vec<usize>,
    pub r: Vec<f64>,
    pub t_len: usize,
}

pub fn autocorrelation(values: &[f64], lmax: usize) -> Result<AutocorrReport> {
    let t_len = values.len();
    if lmax < 1 || t_len <= lmax {
        return Err(Error::SequenceTooShort { len: t_len, lmax });
    }
    let mut mean_acc = KahanSum::default();
    for v in values {
        mean_acc.add(*v);
    }
    let mean = mean_acc.value() / t_len as f64;
    let num = |lag: usize| -> f64 {
        let mut acc = KahanSum::default();
        for t in 0..=(t_len - lag) {
            acc.add((values[t] - mean) * (values[t + lag - 1] - mean));
        }
        acc.value()
    };
    let denom = num(1);
    if denom == 0.0 {
        return Err(Error::ConstantSequence);
    }
    let lags: Vec<usize> = (1..=lmax).collect();
    let r: Vec<f64> = lags.iter().map(|&lag| num(lag) / denom).collect();
    Ok(AutocorrReport { lags, r, t_len })
}

/// Trapezoidal area under r(lag) for lags 1..=10, plus its value normalized
/// by a PRNG reference AUC computed under the identical protocol.
pub fn autocorr_auc(report: &AutocorrReport, prng_reference_auc: f64) -> Result<(f64, f64)> {
    if report.lags.first() != Some(&1) || report.lags.len() < 10 {
        return Err(Error::MissingLags(10));
    }
    let raw = trapezoid(&report.r[..10]);
    Ok((raw, raw / prng_reference_auc))
}

fn trapezoid(r: &[f64]) -> f64 {
    let mut acc = 0.0;
    for w in r.windows(2) {
        acc += 0.5 * (w[0] + w[1]);
    }
    acc
}

/// The averaged autocorrelation protocol: r(lag) estimated on `n_seeds`
/// streams of length `t_len` each and averaged per lag.
pub fn averaged_autocorrelation(
    spec: &SourceSpec,
    n_seeds: u64,
    t_len: usize,
    lmax: usize,
    base_seed: u64,
) -> Result<AutocorrReport> {
    let partial: Vec<Vec<f64>> = (0..n_seeds)
        .into_par_iter()
        .map(|i| {
            let mut src = SequenceSource::new(spec, stream_seed(base_seed, i))
                .expect("validated spec");
            let vals: Vec<f64> = (0..t_len).map(|_| src.next_value()).collect();
            autocorrelation(&vals, lmax).expect("t_len > lmax").r
        })
        .collect();
    let mut r = Vec::with_capacity(lmax);
    for lag_idx in 0..lmax {
        let mut acc = KahanSum::default();
        for p in &partial {
            acc.add(p[lag_idx]);
        }
        r.push(acc.value() / n_seeds as f64);
    }
    Ok(AutocorrReport { lags: (1..=lmax).collect(), r, t_len })
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.total_cmp(q));
    ys.sort_by(|p, q| p.total_cmp(q));
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let x = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// Critical value of the two-sample KS statistic at significance `alpha`.
pub fn ks_critical(n: usize, m: usize, alpha: f64) -> f64 {
    let c = (-0.5 * (alpha / 2.0).ln()).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Per-stream seed for the analysis protocols.
fn stream_seed(base: u64, index: u64) -> u64 {
    let mut s = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    crate::sources::splitmix64(&mut s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r1_is_exactly_one() {
        let vals: Vec<f64> = (0..400).map(|i| ((i * 37 + 11) % 100) as f64 / 100.0).collect();
        let rep = autocorrelation(&vals, 10).unwrap();
        assert_eq!(rep.r[0], 1.0);
    }

    #[test]
    fn alternating_sequence_matches_double_loop_oracle() {
        let vals: Vec<f64> = (0..400).map(|i| (i % 2) as f64).collect();
        let rep = autocorrelation(&vals, 5).unwrap();
        // independent brute-force evaluation of the same estimator
        let t_len = vals.len();
        let mean = vals.iter().sum::<f64>() / t_len as f64;
        for (idx, &lag) in rep.lags.iter().enumerate() {
            let mut num = 0.0;
            for t in 0..=(t_len - lag) {
                num += (vals[t] - mean) * (vals[t + lag - 1] - mean);
            }
            let mut den = 0.0;
            for t in 0..t_len {
                den += (vals[t] - mean) * (vals[t] - mean);
            }
            assert!((rep.r[idx] - num / den).abs() < 1e-12);
        }
        // period-2 sequence: r(2) is near -1 under this estimator
        assert!(rep.r[1] < -0.99);
    }

    #[test]
    fn too_short_sequence_is_an_error() {
        let vals = [0.1, 0.2, 0.3];
        assert!(autocorrelation(&vals, 3).is_err());
    }

    #[test]
    fn constant_sequence_is_an_error() {
        let vals = [0.5; 50];
        assert!(matches!(autocorrelation(&vals, 3), Err(Error::ConstantSequence)));
    }

    #[test]
    fn unit_autocorr_auc_is_nine() {
        let rep = AutocorrReport { lags: (1..=10).collect(), r: vec![1.0; 10], t_len: 400 };
        let (raw, norm) = autocorr_auc(&rep, 1.0).unwrap();
        assert_eq!(raw, 9.0);
        assert_eq!(norm, 9.0);
    }

    #[test]
    fn missing_lags_error() {
        let rep = AutocorrReport { lags: (1..=5).collect(), r: vec![1.0; 5], t_len: 400 };
        assert!(autocorr_auc(&rep, 1.0).is_err());
    }

    #[test]
    fn lyapunov_rejects_distributions() {
        let spec = SourceSpec::by_id("uniform_0_1").unwrap();
        let err = lyapunov_exponent(&spec, 10, 10, 0).unwrap_err();
        assert_eq!(err.to_string(), "Lyapunov defined for maps only");
    }

    #[test]
    fn uniform_density_is_flat() {
        let spec = SourceSpec::by_id("uniform_0_1").unwrap();
        let h = invariant_density(&spec, 100, 4000, 20, 99).unwrap();
        for d in &h.density {
            assert!((d - 1.0).abs() < 0.05, "{d}");
        }
        assert!((h.total_mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ks_of_identical_samples_is_zero() {
        let a = [0.1, 0.4, 0.9];
        assert_eq!(ks_statistic(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn ks_of_disjoint_samples_is_one() {
        let a = [0.1, 0.2];
        let b = [0.8, 0.9];
        assert_eq!(ks_statistic(&a, &b).unwrap(), 1.0);
    }
}
