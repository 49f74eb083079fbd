//! Angle arithmetic, covering-space lifts of circle-valued paths, and the
//! closed-form exponential length of scalar exponentials `t ↦ exp(iαt)`.
//!
//! All angles are plain radians stored as unwrapped reals; wrapping into
//! `(-π, π]` happens only at comparison boundaries.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Full turn, `2π`.
pub const TAU: f64 = 2.0 * PI;

/// Arc gaps at or beyond this threshold make a lift ambiguous (the step is
/// too close to antipodal to pick a sign).
pub const MAX_LIFT_GAP: f64 = PI - 1e-6;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AngleError {
    #[error("non-finite angle value {0}")]
    NonFinite(f64),
    #[error("arc gap {gap} at step {index} is too large to lift unambiguously")]
    GapTooLarge { index: usize, gap: f64 },
    #[error("base value {base} does not agree with the first point {first} modulo 2π")]
    BaseMismatch { base: f64, first: f64 },
    #[error("grid and values must be nonempty and of equal length")]
    EmptyOrMismatched,
    #[error("grid is not strictly increasing within [0, 1]")]
    BadGrid,
}

/// Wraps `a` into the representative interval `(-π, π]`.
///
/// Panics on non-finite input; every other angle routine funnels through
/// here, so the check is centralized.
pub fn wrap(a: f64) -> f64 {
    assert!(a.is_finite(), "wrap: non-finite angle {a}");
    let mut r = a.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    // rem_euclid can return exactly 2π for tiny negative inputs.
    if r <= -PI {
        r += TAU;
    }
    r
}

/// Arc distance on the circle: `|wrap(a - b)|`, in `[0, π]`.
pub fn arc_distance(a: f64, b: f64) -> f64 {
    wrap(a - b).abs()
}

/// Chordal distance `|e^{ia} - e^{ib}| = 2|sin((a-b)/2)|`, in `[0, 2]`.
pub fn chord_distance(a: f64, b: f64) -> f64 {
    2.0 * ((a - b) / 2.0).sin().abs()
}

/// Chord length subtended by an arc of `theta` radians.
pub fn chord_from_arc(theta: f64) -> f64 {
    2.0 * (theta / 2.0).sin().abs()
}

/// Arc length recovered from a chord of length `c ≤ 2`.
pub fn arc_from_chord(c: f64) -> f64 {
    2.0 * (c / 2.0).clamp(-1.0, 1.0).asin()
}

/// The factor `|θ| / |1 - e^{iθ}|` by which an arc exceeds its chord, for
/// steps whose chord is at most `max_chord`. Used to convert chordal sums
/// into sound arc-length bounds.
pub fn arc_over_chord_factor(max_chord: f64) -> f64 {
    let c = max_chord.clamp(0.0, 2.0 - 1e-12);
    if c < 1e-9 {
        return 1.0 + c * c / 24.0;
    }
    arc_from_chord(c) / c
}

/// A point on the unit circle, stored as an unwrapped angle in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(f64);

impl Angle {
    pub fn new(radians: f64) -> Self {
        assert!(radians.is_finite(), "Angle: non-finite value {radians}");
        Angle(radians)
    }

    /// The stored (unwrapped) value.
    pub fn value(self) -> f64 {
        self.0
    }

    /// The representative in `(-π, π]`.
    pub fn wrapped(self) -> f64 {
        wrap(self.0)
    }

    /// The point `e^{iθ}` this angle represents.
    pub fn unit(self) -> Complex64 {
        Complex64::new(self.0.cos(), self.0.sin())
    }

    pub fn arc_to(self, other: Angle) -> f64 {
        arc_distance(self.0, other.0)
    }

    pub fn chord_to(self, other: Angle) -> f64 {
        chord_distance(self.0, other.0)
    }
}

impl From<f64> for Angle {
    fn from(v: f64) -> Self {
        Angle::new(v)
    }
}

/// The continuous real-valued lift of a circle-valued function sampled on a
/// grid: `e^{i·values[i]}` reproduces the input and consecutive increments
/// stay below π, which pins the lift uniquely given its base value.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleLift {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl AngleLift {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self, AngleError> {
        if grid.is_empty() || grid.len() != values.len() {
            return Err(AngleError::EmptyOrMismatched);
        }
        if !grid.windows(2).all(|w| w[0] < w[1])
            || grid[0] < 0.0
            || *grid.last().unwrap() > 1.0
        {
            return Err(AngleError::BadGrid);
        }
        for (i, w) in values.windows(2).enumerate() {
            let gap = (w[1] - w[0]).abs();
            if gap >= PI {
                return Err(AngleError::GapTooLarge { index: i + 1, gap });
            }
        }
        Ok(AngleLift { grid, values })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn base(&self) -> f64 {
        self.values[0]
    }

    pub fn end(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

/// Lifts a sampled circle-valued path to a continuous real-valued path with
/// `values[0] = base`, accumulating wrapped increments.
///
/// The grid is taken uniform on `[0, 1]`; use [`lift_circle_path_on_grid`]
/// to lift against explicit sample points.
pub fn lift_circle_path(points: &[Angle], base: f64) -> Result<AngleLift, AngleError> {
    let n = points.len();
    let grid = if n == 1 {
        vec![0.0]
    } else {
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    };
    lift_circle_path_on_grid(&grid, points, base)
}

pub fn lift_circle_path_on_grid(
    grid: &[f64],
    points: &[Angle],
    base: f64,
) -> Result<AngleLift, AngleError> {
    if points.is_empty() || grid.len() != points.len() {
        return Err(AngleError::EmptyOrMismatched);
    }
    if !base.is_finite() {
        return Err(AngleError::NonFinite(base));
    }
    if arc_distance(base, points[0].value()) > 1e-9 {
        return Err(AngleError::BaseMismatch {
            base,
            first: points[0].value(),
        });
    }
    let mut values = Vec::with_capacity(points.len());
    values.push(base);
    for i in 1..points.len() {
        let step = wrap(points[i].value() - points[i - 1].value());
        if step.abs() >= MAX_LIFT_GAP {
            return Err(AngleError::GapTooLarge {
                index: i,
                gap: step.abs(),
            });
        }
        values.push(values[i - 1] + step);
    }
    AngleLift::new(grid.to_vec(), values)
}

/// Exponential length of the scalar exponential `u(t) = exp(iαt)` in
/// `C[0,1]`: the minimum over integers `k` of `max(|2kπ|, |α - 2kπ|)`.
///
/// The max over `t ∈ [0,1]` of the affine function `|αt - 2kπ|` is attained
/// at an endpoint, and minimizers satisfy `|k| ≤ ⌈|α|/2π⌉ + 1`: outside that
/// window the `|2kπ|` term alone already dominates the `k = 0` candidate.
pub fn cel_scalar_exponential(alpha: f64) -> f64 {
    assert!(alpha.is_finite(), "cel_scalar_exponential: non-finite α");
    let k_max = (alpha.abs() / TAU).ceil() as i64 + 1;
    let mut best = f64::INFINITY;
    for k in -k_max..=k_max {
        let shift = TAU * k as f64;
        let cand = shift.abs().max((alpha - shift).abs());
        if cand < best {
            best = cand;
        }
    }
    best
}

/// The winding integer `k₀` realizing [`cel_scalar_exponential`].
pub fn optimal_winding(alpha: f64) -> i64 {
    let k_max = (alpha.abs() / TAU).ceil() as i64 + 1;
    let mut best = f64::INFINITY;
    let mut best_k = 0;
    for k in -k_max..=k_max {
        let shift = TAU * k as f64;
        let cand = shift.abs().max((alpha - shift).abs());
        if cand < best {
            best = cand;
            best_k = k;
        }
    }
    best_k
}

/// The length-minimizing homotopy `v_s(t) = exp(is(αt - 2k₀π))` from the
/// constant 1 to `exp(iαt)`, sampled on the given grids.
#[derive(Debug, Clone)]
pub struct ScalarHomotopy {
    alpha: f64,
    winding: i64,
    s_grid: Vec<f64>,
    t_grid: Vec<f64>,
}

impl ScalarHomotopy {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    pub fn s_grid(&self) -> &[f64] {
        &self.s_grid
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    /// The lift angle `s(αt - 2k₀π)` at grid node `(i, j)`.
    pub fn angle(&self, i: usize, j: usize) -> f64 {
        self.s_grid[i] * (self.alpha * self.t_grid[j] - TAU * self.winding as f64)
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        let a = self.angle(i, j);
        Complex64::new(a.cos(), a.sin())
    }

    /// Discrete chord-sum length: `Σ_i max_t |v_{s_{i+1}}(t) - v_{s_i}(t)|`.
    pub fn chord_length(&self) -> f64 {
        let mut total = 0.0;
        for w in self.s_grid.windows(2) {
            let ds = w[1] - w[0];
            let mut worst: f64 = 0.0;
            for &t in &self.t_grid {
                let theta = ds * (self.alpha * t - TAU * self.winding as f64);
                worst = worst.max(chord_from_arc(theta));
            }
            total += worst;
        }
        total
    }
}

pub fn optimal_scalar_homotopy(alpha: f64, s_grid: &[f64], t_grid: &[f64]) -> ScalarHomotopy {
    assert!(!s_grid.is_empty() && !t_grid.is_empty(), "grids must be nonempty");
    ScalarHomotopy {
        alpha,
        winding: optimal_winding(alpha),
        s_grid: s_grid.to_vec(),
        t_grid: t_grid.to_vec(),
    }
}

/// Uniform grid of `n ≥ 2` points spanning `[0, 1]`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    assert!(n >= 2, "uniform_grid needs at least two points");
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}
