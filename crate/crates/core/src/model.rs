//! Model definition: parameters, initial data, reaction terms and the
//! a-priori bounds every solution obeys.

use crate::error::{Error, Result};

/// Below this value of `u + m v` both ratio-dependent interaction terms are
/// taken as zero.
pub const DELTA_RATIO: f64 = 1e-12;

/// The nine constants of the coupled model.
///
/// `lambda`, `m`, `d`, `h0` and `g0` must be strictly positive. The coupling
/// constants `b`, `c` and the capacities `mu`, `rho` may also be zero, which
/// switches off predation/conversion or freezes a front.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Prey intrinsic growth rate.
    pub lambda: f64,
    /// Capture rate.
    pub b: f64,
    /// Half-saturation constant of the ratio-dependent response.
    pub m: f64,
    /// Predator dispersal rate (prey diffusivity is 1).
    pub d: f64,
    /// Conversion rate.
    pub c: f64,
    /// Prey front capacity in `h' = -mu u_x(t, h)`.
    pub mu: f64,
    /// Predator front capacity in `g' = -rho v_x(t, g)`.
    pub rho: f64,
    /// Initial prey radius.
    pub h0: f64,
    /// Initial predator radius.
    pub g0: f64,
}

impl ModelParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: f64,
        b: f64,
        m: f64,
        d: f64,
        c: f64,
        mu: f64,
        rho: f64,
        h0: f64,
        g0: f64,
    ) -> Result<Self> {
        let p = Self {
            lambda,
            b,
            m,
            d,
            c,
            mu,
            rho,
            h0,
            g0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda", self.lambda),
            ("m", self.m),
            ("d", self.d),
            ("h0", self.h0),
            ("g0", self.g0),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive")));
            }
        }
        let nonneg = [("b", self.b), ("c", self.c), ("mu", self.mu), ("rho", self.rho)];
        for (name, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be nonnegative"
                )));
            }
        }
        if self.h0 < self.g0 {
            return Err(Error::InvalidParameter(format!(
                "h0 = {} must not be smaller than g0 = {}",
                self.h0, self.g0
            )));
        }
        Ok(())
    }

    /// `m lambda - b`; positive when the prey survives predation pressure.
    pub fn prey_margin(&self) -> f64 {
        self.m * self.lambda - self.b
    }

    /// Worst-case prey growth rate `lambda - b/m` (may be negative).
    pub fn prey_floor_growth(&self) -> f64 {
        self.lambda - self.b / self.m
    }
}

/// An initial density sampled uniformly on `[0, radius]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    radius: f64,
    values: Vec<f64>,
}

impl Profile {
    /// Wraps samples taken at `x_i = i * radius / (n - 1)`.
    pub fn from_samples(radius: f64, values: Vec<f64>) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidInitialData(format!(
                "radius must be positive, got {radius}"
            )));
        }
        if values.len() < 3 {
            return Err(Error::InvalidInitialData(
                "a profile needs at least three samples".into(),
            ));
        }
        let n = values.len();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInitialData("non-finite sample".into()));
        }
        if values[n - 1] != 0.0 {
            return Err(Error::InvalidInitialData(format!(
                "profile must vanish at the front, got {}",
                values[n - 1]
            )));
        }
        if let Some(i) = values[..n - 1].iter().position(|&v| v <= 0.0) {
            return Err(Error::InvalidInitialData(format!(
                "profile must be positive before the front (sample {i} is {})",
                values[i]
            )));
        }
        Ok(Self { radius, values })
    }

    /// `amplitude * cos(pi x / (2 radius))`: positive, zero at the front and
    /// flat at the origin.
    pub fn cosine(radius: f64, amplitude: f64, samples: usize) -> Result<Self> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(Error::InvalidInitialData(format!(
                "amplitude must be positive, got {amplitude}"
            )));
        }
        let n = samples.max(3);
        let values = (0..n)
            .map(|i| {
                if i == n - 1 {
                    0.0
                } else {
                    let x = i as f64 / (n - 1) as f64;
                    amplitude * (std::f64::consts::FRAC_PI_2 * x).cos()
                }
            })
            .collect();
        Self::from_samples(radius, values)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        self.radius / (self.values.len() - 1) as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest forward-difference slope, i.e. the discrete `min u0'`.
    pub fn min_slope(&self) -> f64 {
        let dx = self.spacing();
        self.values
            .windows(2)
            .map(|w| (w[1] - w[0]) / dx)
            .fold(f64::INFINITY, f64::min)
    }

    /// Piecewise-linear evaluation; zero beyond the radius.
    pub fn eval(&self, x: f64) -> f64 {
        if x >= self.radius {
            return 0.0;
        }
        let s = (x.max(0.0) / self.spacing()).min((self.values.len() - 1) as f64);
        let i = (s.floor() as usize).min(self.values.len() - 2);
        let w = s - i as f64;
        self.values[i] * (1.0 - w) + self.values[i + 1] * w
    }
}

/// Initial prey and predator densities.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub u0: Profile,
    pub v0: Profile,
}

impl InitialData {
    pub fn new(u0: Profile, v0: Profile) -> Self {
        Self { u0, v0 }
    }

    /// Cosine profiles with the given amplitudes on `[0, h0]` and `[0, g0]`.
    pub fn cosine(p: &ModelParams, u_amplitude: f64, v_amplitude: f64) -> Result<Self> {
        Ok(Self {
            u0: Profile::cosine(p.h0, u_amplitude, 257)?,
            v0: Profile::cosine(p.g0, v_amplitude, 257)?,
        })
    }

    pub fn check_against(&self, p: &ModelParams) -> Result<()> {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        if !close(self.u0.radius, p.h0) {
            return Err(Error::InvalidInitialData(format!(
                "u0 is defined on [0, {}] but h0 = {}",
                self.u0.radius, p.h0
            )));
        }
        if !close(self.v0.radius, p.g0) {
            return Err(Error::InvalidInitialData(format!(
                "v0 is defined on [0, {}] but g0 = {}",
                self.v0.radius, p.g0
            )));
        }
        Ok(())
    }
}

/// Local reaction rates `(u(lambda - u - b v/(u + m v)), v(1 - v + c u/(u + m v)))`.
pub fn reaction_terms(u: f64, v: f64, p: &ModelParams) -> (f64, f64) {
    let denom = u + p.m * v;
    let (pred, conv) = if denom <= DELTA_RATIO {
        (0.0, 0.0)
    } else {
        (p.b * v / denom, p.c * u / denom)
    };
    (u * (p.lambda - u - pred), v * (1.0 - v + conv))
}

/// A closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }
}

/// Logistic brackets around the prey and predator rates that hold for every
/// nonnegative state.
///
/// The prey floor is `max{0, lambda - b/m} u - u^2` when `m lambda >= b`. For
/// `m lambda < b` predation can push the rate below `-u^2`, so the floor
/// falls back to `(lambda - b/m) u - u^2`, which holds because
/// `b v / (u + m v) <= b / m`.
pub fn sandwich_rates(u: f64, v: f64, p: &ModelParams) -> (Bracket, Bracket) {
    let prey = Bracket {
        lo: p.prey_floor_growth() * u - u * u,
        hi: p.lambda * u - u * u,
    };
    let predator = Bracket {
        lo: v - v * v,
        hi: (1.0 + p.c) * v - v * v,
    };
    (prey, predator)
}

/// Sup-norm bounds on the densities (`m1`, `m2`) and on the front speeds
/// (`m3`, `m4`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriBounds {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

/// Front-speed bound for a logistic-type species with carrying capacity
/// `growth`, diffusivity `diffusivity` and density bound `density_bound`.
pub fn front_speed_bound(
    capacity: f64,
    density_bound: f64,
    growth: f64,
    diffusivity: f64,
    profile: &Profile,
) -> f64 {
    let interior = density_bound * (growth / (2.0 * diffusivity)).sqrt();
    2.0 * capacity * interior.max(-profile.min_slope())
}

pub fn apriori_bounds(p: &ModelParams, init: &InitialData) -> AprioriBounds {
    let m1 = p.lambda.max(init.u0.max());
    let m2 = (1.0 + p.c).max(init.v0.max());
    AprioriBounds {
        m1,
        m2,
        m3: front_speed_bound(p.mu, m1, p.lambda, 1.0, &init.u0),
        m4: front_speed_bound(p.rho, m2, 1.0 + p.c, p.d, &init.v0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(lambda: f64, b: f64, m: f64, c: f64) -> ModelParams {
        ModelParams::new(lambda, b, m, 1.0, c, 1.0, 1.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn origin_has_zero_rates() {
        assert_eq!(reaction_terms(0.0, 0.0, &params(1.5, 1.0, 1.0, 1.0)), (0.0, 0.0));
    }

    #[test]
    fn prey_at_capacity_without_predator() {
        let (fu, fv) = reaction_terms(1.5, 0.0, &params(1.5, 1.0, 1.0, 1.0));
        assert_eq!(fu, 0.0);
        assert_eq!(fv, 0.0);
    }

    #[test]
    fn coexistence_point_is_stationary() {
        let p = params(1.5, 1.0, 1.0, 1.0);
        // positive root of the equilibrium quadratic, worked by hand
        let u = (1.5 + 4.25f64.sqrt()) / 4.0;
        let v = u * (1.5 - u) / (1.0 - (1.5 - u));
        let (fu, fv) = reaction_terms(u, v, &p);
        assert!(fu.abs() < 1e-12 && fv.abs() < 1e-12, "{fu} {fv}");
    }

    #[test]
    fn sandwich_values_by_hand() {
        let (prey, pred) = sandwich_rates(1.0, 1.0, &params(2.0, 1.0, 1.0, 1.0));
        assert_eq!((prey.lo, prey.hi), (0.0, 1.0));
        assert_eq!((pred.lo, pred.hi), (0.0, 1.0));
        let (prey, _) = sandwich_rates(0.0, 3.0, &params(2.0, 1.0, 1.0, 1.0));
        assert_eq!((prey.lo, prey.hi), (0.0, 0.0));
    }

    #[test]
    fn bounds_examples() {
        let p = ModelParams::new(2.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        // u0 = 1 - x on [0, 1]: slope -1 everywhere
        let u0 = Profile::from_samples(1.0, vec![1.0, 0.5, 0.0]).unwrap();
        let v0 = Profile::from_samples(1.0, vec![3.0, 1.5, 0.0]).unwrap();
        let b = apriori_bounds(&p, &InitialData::new(u0, v0));
        assert_eq!(b.m1, 2.0);
        assert_eq!(b.m2, 3.0);
        // M4 = 2 * 1 * max(3 * sqrt(2/2), 3) = 6
        assert!((b.m4 - 6.0).abs() < 1e-12);

        let steep = Profile::from_samples(1.0, vec![2.0, 1.0, 0.0]).unwrap();
        let b = apriori_bounds(
            &p,
            &InitialData::new(steep, Profile::cosine(1.0, 1.0, 9).unwrap()),
        );
        assert!((b.m3 - 4.0).abs() < 1e-12, "{}", b.m3);
    }

    #[test]
    fn param_validation() {
        let err = ModelParams::new(-1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("lambda must be positive"));
        assert!(ModelParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn profile_validation() {
        assert!(Profile::from_samples(1.0, vec![1.0, 0.5, 0.1]).is_err());
        assert!(Profile::from_samples(1.0, vec![1.0, 0.0, 0.0]).is_err());
        let p = Profile::cosine(2.0, 3.0, 65).unwrap();
        assert_eq!(p.eval(2.0), 0.0);
        assert!((p.eval(0.0) - 3.0).abs() < 1e-15);
        assert!((p.eval(1.0) - 3.0 * (std::f64::consts::PI / 4.0).cos()).abs() < 1e-3);
    }

    proptest::proptest! {
        #[test]
        fn rates_inside_sandwich(
            u in 0.0f64..3.0, v in 0.0f64..3.0,
            lambda in 0.1f64..3.0, b in 0.0f64..3.0, m in 0.1f64..3.0, c in 0.0f64..3.0,
        ) {
            let p = params(lambda, b, m, c);
            let (fu, fv) = reaction_terms(u, v, &p);
            let (bu, bv) = sandwich_rates(u, v, &p);
            proptest::prop_assert!(bu.contains(fu, 1e-12));
            proptest::prop_assert!(bv.contains(fv, 1e-12));
        }

        #[test]
        fn rates_are_linearly_bounded(
            u in 0.0f64..1e-6, v in 0.0f64..1e-6,
            b in 0.0f64..3.0, c in 0.0f64..3.0,
        ) {
            let p = params(1.5, b, 1.0, c);
            let (fu, fv) = reaction_terms(u, v, &p);
            proptest::prop_assert!(fu.abs() <= (p.lambda + p.b) * u + 1e-300);
            proptest::prop_assert!(fv.abs() <= (1.0 + p.c) * v + 1e-300);
        }

        #[test]
        fn m1_monotone_in_initial_max(a1 in 0.1f64..5.0, a2 in 0.1f64..5.0) {
            let p = params(1.5, 1.0, 1.0, 1.0);
            let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
            let v0 = Profile::cosine(p.g0, 1.0, 17).unwrap();
            let b_lo = apriori_bounds(&p, &InitialData::new(Profile::cosine(p.h0, lo, 17).unwrap(), v0.clone()));
            let b_hi = apriori_bounds(&p, &InitialData::new(Profile::cosine(p.h0, hi, 17).unwrap(), v0));
            proptest::prop_assert!(b_hi.m1 >= b_lo.m1);
        }
    }
}
