//! The six chaotic map recurrences, their analytic derivatives and the affine
//! rescaling of raw orbits onto the [0,1] sample space.

use crate::{Error, Result};

/// One-dimensional chaotic recurrence with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Recurrence {
    /// z' = r z (1 - z) on [0,1].
    Logistic { r: f64 },
    /// z' = cos(a arccos z) on [-1,1].
    Chebyshev { a: f64 },
    /// z' = sum_{i=0..=terms} a^i cos(b^i pi z).
    Weierstrass { a: f64, b: f64, terms: u32 },
    /// z' = r min(z, 1-z) on [0,1].
    Tent { r: f64 },
    /// z' = r z (1 - z^2).
    Cubic { r: f64 },
    /// z' = r z / (1 + z^6).
    Bellows { r: f64 },
}

/// Map spec: recurrence plus the affine pair mapping the raw orbit range onto
/// the [0,1] sample space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MapSpec {
    pub recurrence: Recurrence,
    /// (lo, hi) of the raw state space; emitted values are (z - lo)/(hi - lo).
    pub rescale: (f64, f64),
}

// Raw orbit ranges for the maps whose range is not analytic. Estimated once
// from 10^6 warm-up iterations over 100 seeds and frozen; emitted values are
// clamped to [0,1], so rare excursions beyond these bounds stay in range.
pub(crate) const WEIERSTRASS_RAW_RANGE: (f64, f64) = (-44.02447836077967, 52.09293502201915);
pub(crate) const CUBIC_RAW_RANGE: (f64, f64) = (-1.0084300884183936, 1.0084328966774632);
pub(crate) const BELLOWS_RAW_RANGE: (f64, f64) = (0.08811706515290852, 1.2744514239942388);

impl MapSpec {
    /// Logistic map at the chaotic setting r = 4; identity rescale.
    pub fn logistic() -> Self {
        MapSpec { recurrence: Recurrence::Logistic { r: 4.0 }, rescale: (0.0, 1.0) }
    }

    /// Chebyshev map at a = 6; analytic range (-1, 1).
    pub fn chebyshev() -> Self {
        MapSpec { recurrence: Recurrence::Chebyshev { a: 6.0 }, rescale: (-1.0, 1.0) }
    }

    /// Weierstrass map at a = 0.999, b = 101, N = 100.
    pub fn weierstrass() -> Self {
        MapSpec {
            recurrence: Recurrence::Weierstrass { a: 0.999, b: 101.0, terms: 100 },
            rescale: WEIERSTRASS_RAW_RANGE,
        }
    }

    /// Tent map at the chaotic setting r = 2; identity rescale.
    pub fn tent() -> Self {
        MapSpec { recurrence: Recurrence::Tent { r: 2.0 }, rescale: (0.0, 1.0) }
    }

    /// Cubic map at r = 2.62.
    pub fn cubic() -> Self {
        MapSpec { recurrence: Recurrence::Cubic { r: 2.62 }, rescale: CUBIC_RAW_RANGE }
    }

    /// Bellows map at r = 2.
    pub fn bellows() -> Self {
        MapSpec { recurrence: Recurrence::Bellows { r: 2.0 }, rescale: BELLOWS_RAW_RANGE }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.rescale;
        if !(lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "rescale.lo must be below rescale.hi, got ({lo}, {hi})"
            )));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
            }
        };
        match self.recurrence {
            Recurrence::Logistic { r } | Recurrence::Tent { r } | Recurrence::Cubic { r } => {
                positive("r", r)
            }
            Recurrence::Bellows { r } => positive("r", r),
            Recurrence::Chebyshev { a } => positive("a", a),
            Recurrence::Weierstrass { a, b, terms } => {
                positive("a", a)?;
                positive("b", b)?;
                if terms == 0 {
                    return Err(Error::InvalidParameter("N must be at least 1".into()));
                }
                Ok(())
            }
        }
    }

    /// One un-rescaled step of the recurrence.
    pub fn step(&self, z: f64) -> f64 {
        match self.recurrence {
            Recurrence::Logistic { r } => r * z * (1.0 - z),
            Recurrence::Chebyshev { a } => (a * z.acos()).cos(),
            Recurrence::Weierstrass { a, b, terms } => weierstrass_step(a, b, terms, z),
            Recurrence::Tent { r } => r * z.min(1.0 - z),
            Recurrence::Cubic { r } => r * z * (1.0 - z * z),
            Recurrence::Bellows { r } => {
                let z2 = z * z;
                r * z / (1.0 + z2 * z2 * z2)
            }
        }
    }

    /// Analytic derivative of the recurrence at `z`. `flagged` marks
    /// non-differentiable points (the Tent kink at z = 0.5, where the
    /// left-derivative is returned); callers skip flagged points.
    pub fn derivative(&self, z: f64) -> Derivative {
        match self.recurrence {
            Recurrence::Logistic { r } => Derivative::ok(r * (1.0 - 2.0 * z)),
            Recurrence::Chebyshev { a } => {
                let theta = z.clamp(-1.0, 1.0).acos();
                let s = theta.sin();
                if s == 0.0 {
                    // limit of a sin(a theta)/sin(theta) at theta = 0 or pi
                    let at_pi = -a * a * cospi2(fold2(a));
                    Derivative::ok(if z > 0.0 { a * a } else { at_pi })
                } else {
                    Derivative::ok(a * (a * theta).sin() / s)
                }
            }
            Recurrence::Weierstrass { a, b, terms } => {
                Derivative::ok(weierstrass_derivative(a, b, terms, z))
            }
            Recurrence::Tent { r } => {
                if z == 0.5 {
                    Derivative { value: r, flagged: true }
                } else if z < 0.5 {
                    Derivative::ok(r)
                } else {
                    Derivative::ok(-r)
                }
            }
            Recurrence::Cubic { r } => Derivative::ok(r * (1.0 - 3.0 * z * z)),
            Recurrence::Bellows { r } => {
                let z2 = z * z;
                let z6 = z2 * z2 * z2;
                let d = 1.0 + z6;
                Derivative::ok(r * (1.0 - 5.0 * z6) / (d * d))
            }
        }
    }

    /// Affine map from the raw state space onto [0,1], clamped.
    pub fn rescale_value(&self, z: f64) -> f64 {
        let (lo, hi) = self.rescale;
        ((z - lo) / (hi - lo)).clamp(0.0, 1.0)
    }
}

/// Derivative value plus the non-differentiable-point flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derivative {
    pub value: f64,
    pub flagged: bool,
}

impl Derivative {
    fn ok(value: f64) -> Self {
        Derivative { value, flagged: false }
    }
}

// The Weierstrass sum is evaluated with the phase carried in half-turns:
// cos(b^i pi z) = cos(pi t_i) with t_0 = z mod 2 and t_{i+1} = (b t_i) mod 2.
// In exact arithmetic this is an identity; in double precision the per-step
// rounding of b*t injects noise into the low phase bits, which is the same
// argument-reduction degradation any double-precision evaluation of the sum
// suffers once b^i exceeds 2^53. The fold itself is exact: x*0.5 and the
// final subtraction commit no rounding, so the result always lies in [0, 2).
#[inline]
fn fold2(x: f64) -> f64 {
    x - 2.0 * (x * 0.5).floor()
}

const MAX_TERMS: usize = 128;

#[inline]
fn weierstrass_phases(b: f64, terms: u32, z: f64, phases: &mut [f64; MAX_TERMS]) -> usize {
    let count = (terms as usize + 1).min(MAX_TERMS);
    let mut t = fold2(z);
    phases[0] = t;
    for p in &mut phases[1..count] {
        // in-loop phases are non-negative, so truncation is the floor
        let x = b * t;
        t = x - 2.0 * ((x * 0.5) as i64 as f64);
        *p = t;
    }
    count
}

fn geometric_weights(ratio: f64, count: usize, out: &mut [f64; MAX_TERMS]) {
    let mut w = 1.0;
    for v in &mut out[..count] {
        *v = w;
        w *= ratio;
    }
}

fn weierstrass_step(a: f64, b: f64, terms: u32, z: f64) -> f64 {
    let mut phases = [0.0; MAX_TERMS];
    let mut weights = [0.0; MAX_TERMS];
    let count = weierstrass_phases(b, terms, z, &mut phases);
    geometric_weights(a, count, &mut weights);
    let mut acc = 0.0;
    for (p, w) in phases[..count].iter().zip(&weights[..count]) {
        acc += w * cospi2(*p);
    }
    acc
}

fn weierstrass_derivative(a: f64, b: f64, terms: u32, z: f64) -> f64 {
    let mut phases = [0.0; MAX_TERMS];
    let mut weights = [0.0; MAX_TERMS];
    let count = weierstrass_phases(b, terms, z, &mut phases);
    geometric_weights(a * b, count, &mut weights);
    let mut acc = 0.0;
    for (p, w) in phases[..count].iter().zip(&weights[..count]) {
        acc += w * sinpi2(*p);
    }
    -std::f64::consts::PI * acc
}

// sin(pi w)/w on w in [0, 0.5] as a polynomial in w^2; max abs error ~6e-16.
// Both kernels below reduce to this one half-wave through reflections
// expressed with abs/copysign, so the hot loop carries no branches.
const SINPI_COEF: [f64; 9] = [
    3.1415926535897944,
    -5.167712780049993,
    2.550164039878812,
    -0.5992645293631254,
    0.08214588723764402,
    -0.007370436045989354,
    0.0004663256929761039,
    -2.196689275919079e-5,
    8.332028006093832e-7,
];

#[inline]
fn sinpi_half(w: f64) -> f64 {
    let x = w * w;
    let c = &SINPI_COEF;
    let acc = c[8];
    let acc = acc * x + c[7];
    let acc = acc * x + c[6];
    let acc = acc * x + c[5];
    let acc = acc * x + c[4];
    let acc = acc * x + c[3];
    let acc = acc * x + c[2];
    let acc = acc * x + c[1];
    let acc = acc * x + c[0];
    acc * w
}

/// cos(pi t) for t in [0, 2): cos(pi t) = sign(d) sin(pi |d|), d = |t-1| - 1/2.
#[inline]
pub(crate) fn cospi2(t: f64) -> f64 {
    let d = (t - 1.0).abs() - 0.5;
    sinpi_half(d.abs()).copysign(d)
}

/// sin(pi t) for t in [0, 2): sin(pi t) = -sign(e) sin(pi w) with e = t - 1
/// and w = 1/2 - ||e| - 1/2| the fold of |e| onto the rising half-wave.
#[inline]
pub(crate) fn sinpi2(t: f64) -> f64 {
    let e = t - 1.0;
    let w = 0.5 - (e.abs() - 0.5).abs();
    -sinpi_half(w).copysign(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logistic_step_peak() {
        assert_eq!(MapSpec::logistic().step(0.5), 1.0);
    }

    #[test]
    fn tent_step_rising_branch() {
        assert_eq!(MapSpec::tent().step(0.25), 0.5);
    }

    #[test]
    fn chebyshev_step_at_one() {
        assert_eq!(MapSpec::chebyshev().step(1.0), 1.0);
    }

    #[test]
    fn bellows_step_at_one() {
        assert_eq!(MapSpec::bellows().step(1.0), 1.0);
    }

    #[test]
    fn logistic_derivative_values() {
        let m = MapSpec::logistic();
        assert_eq!(m.derivative(0.5).value, 0.0);
        assert_eq!(m.derivative(0.25).value, 2.0);
    }

    #[test]
    fn tent_derivative_and_kink() {
        let m = MapSpec::tent();
        let d = m.derivative(0.25);
        assert_eq!((d.value, d.flagged), (2.0, false));
        let kink = m.derivative(0.5);
        assert!(kink.flagged);
        assert_eq!(kink.value, 2.0);
        assert_eq!(m.derivative(0.75).value, -2.0);
    }

    #[test]
    fn chebyshev_rescale_maps_minus_one_to_zero() {
        assert_eq!(MapSpec::chebyshev().rescale_value(-1.0), 0.0);
    }

    #[test]
    fn cospi_sinpi_match_std() {
        for k in 0..=2000 {
            let t = k as f64 * (2.0 / 2000.0);
            let t = t.min(1.9999999999);
            let want_c = (std::f64::consts::PI * t).cos();
            let want_s = (std::f64::consts::PI * t).sin();
            assert!((cospi2(t) - want_c).abs() < 5e-15, "cos at t={t}");
            assert!((sinpi2(t) - want_s).abs() < 5e-15, "sin at t={t}");
        }
    }

    #[test]
    fn weierstrass_step_is_finite_and_bounded() {
        let m = MapSpec::weierstrass();
        let mut z = 0.37;
        for _ in 0..10_000 {
            z = m.step(z);
            assert!(z.is_finite());
            assert!(z.abs() < 100.0);
        }
    }

    #[test]
    fn cubic_orbit_stays_bounded() {
        let m = MapSpec::cubic();
        let mut z = 0.4;
        for _ in 0..100_000 {
            z = m.step(z);
            assert!(z.abs() < 1.01);
        }
    }

    #[test]
    fn rescale_validation() {
        let bad = MapSpec { recurrence: Recurrence::Logistic { r: 4.0 }, rescale: (1.0, 0.0) };
        assert!(bad.validate().is_err());
    }
}
