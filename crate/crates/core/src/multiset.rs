//! Unordered k-tuples with the min-over-permutations max metric, the sorting
//! isometry on real multisets, and the Weyl-type spectral matching bound for
//! pairs of unitaries.

use crate::angles::{arc_distance, chord_distance, Angle};
use crate::unitary::{operator_norm, spectrum, UnitaryError, UnitaryMatrix};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MultisetError {
    #[error("multiset sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("multisets must be nonempty")]
    Empty,
}

/// Element metric used by [`bottleneck_distance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    /// `|e^{ia} - e^{ib}|`, the modulus metric on the embedded circle.
    Chordal,
    /// `|wrap(a - b)|`, geodesic distance on the circle in radians.
    Arc,
    /// `|a - b|` on the real line.
    Absolute,
}

impl MetricKind {
    #[inline]
    fn dist(self, a: f64, b: f64) -> f64 {
        match self {
            MetricKind::Chordal => chord_distance(a, b),
            MetricKind::Arc => arc_distance(a, b),
            MetricKind::Absolute => (a - b).abs(),
        }
    }
}

/// A multiset of reals; order of `values` is immaterial.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMultiset {
    values: Vec<f64>,
}

impl RealMultiset {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(values.iter().all(|v| v.is_finite()), "non-finite multiset element");
        RealMultiset { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Canonical (nondecreasing) arrangement.
    pub fn canonical(&self) -> Vec<f64> {
        sort_lift_theta(self)
    }
}

/// A multiset of circle points, stored as unwrapped angles.
#[derive(Debug, Clone)]
pub struct CircleMultiset {
    values: Vec<Angle>,
}

impl CircleMultiset {
    pub fn new(values: Vec<Angle>) -> Self {
        CircleMultiset { values }
    }

    pub fn from_radians(values: &[f64]) -> Self {
        CircleMultiset {
            values: values.iter().map(|&v| Angle::new(v)).collect(),
        }
    }

    pub fn angles(&self) -> &[Angle] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn radians(&self) -> Vec<f64> {
        self.values.iter().map(|a| a.value()).collect()
    }

    /// Wrapped representatives sorted ascending in `(-π, π]`.
    pub fn wrapped_sorted(&self) -> Vec<f64> {
        let mut w: Vec<f64> = self.values.iter().map(|a| a.wrapped()).collect();
        w.sort_by(f64::total_cmp);
        w
    }

    pub fn bottleneck_to(&self, other: &CircleMultiset, metric: MetricKind) -> Result<f64, MultisetError> {
        bottleneck_distance(&self.radians(), &other.radians(), metric)
    }
}

/// The sorting isometry θ: the nondecreasing arrangement of a real multiset.
///
/// For any two multisets of equal size, `max_i |θ(a)_i - θ(b)_i|` equals
/// their bottleneck distance in the absolute metric. Sorting is stable, so
/// ties keep input order.
pub fn sort_lift_theta(a: &RealMultiset) -> Vec<f64> {
    let mut v = a.values.clone();
    v.sort_by(f64::total_cmp);
    v
}

/// Bottleneck distance `min_σ max_i d(a_i, b_{σ(i)})` between equal-size
/// multisets.
///
/// Exhaustive search (with branch-and-bound pruning) for k ≤ 8; larger
/// inputs run a threshold search over the k² candidate distances with a
/// bipartite perfect-matching feasibility test per candidate.
pub fn bottleneck_distance(a: &[f64], b: &[f64], metric: MetricKind) -> Result<f64, MultisetError> {
    if a.len() != b.len() {
        return Err(MultisetError::SizeMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(MultisetError::Empty);
    }
    let k = a.len();
    let mut d = vec![0.0f64; k * k];
    for i in 0..k {
        for j in 0..k {
            d[i * k + j] = metric.dist(a[i], b[j]);
        }
    }
    if k <= 8 {
        Ok(bottleneck_exhaustive(&d, k))
    } else {
        Ok(bottleneck_threshold_search(&d, k))
    }
}

fn bottleneck_exhaustive(d: &[f64], k: usize) -> f64 {
    fn recurse(d: &[f64], k: usize, row: usize, used: &mut [bool], cur: f64, best: &mut f64) {
        if cur >= *best {
            return;
        }
        if row == k {
            *best = cur;
            return;
        }
        for j in 0..k {
            if !used[j] {
                used[j] = true;
                recurse(d, k, row + 1, used, cur.max(d[row * k + j]), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    let mut used = vec![false; k];
    recurse(d, k, 0, &mut used, 0.0, &mut best);
    best
}

fn bottleneck_threshold_search(d: &[f64], k: usize) -> f64 {
    let mut candidates: Vec<f64> = d.to_vec();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    // Smallest candidate admitting a perfect matching among edges ≤ threshold.
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if has_perfect_matching(d, k, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Kuhn's augmenting-path matching restricted to edges with `d ≤ threshold`.
fn has_perfect_matching(d: &[f64], k: usize, threshold: f64) -> bool {
    let mut match_of_b: Vec<Option<usize>> = vec![None; k];
    let mut visited = vec![false; k];

    fn try_augment(
        d: &[f64],
        k: usize,
        threshold: f64,
        i: usize,
        visited: &mut [bool],
        match_of_b: &mut [Option<usize>],
    ) -> bool {
        for j in 0..k {
            if !visited[j] && d[i * k + j] <= threshold {
                visited[j] = true;
                let free = match match_of_b[j] {
                    None => true,
                    Some(prev) => try_augment(d, k, threshold, prev, visited, match_of_b),
                };
                if free {
                    match_of_b[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }

    for i in 0..k {
        visited.iter_mut().for_each(|v| *v = false);
        if !try_augment(d, k, threshold, i, &mut visited, &mut match_of_b) {
            return false;
        }
    }
    true
}

/// The two sides of the spectral matching inequality for a pair of unitaries:
/// bottleneck distance between spectra (chordal) on the left, operator norm
/// of the difference on the right. The left never exceeds the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeylGap {
    pub spectral: f64,
    pub operator: f64,
}

pub fn weyl_gap(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<WeylGap, UnitaryError> {
    if u.dim() != v.dim() {
        return Err(UnitaryError::DimensionMismatch(u.dim(), v.dim()));
    }
    let su = spectrum(u)?;
    let sv = spectrum(v)?;
    let spectral = bottleneck_distance(&su.radians(), &sv.radians(), MetricKind::Chordal)
        .expect("spectra of equal-dimension unitaries have equal size");
    let operator = operator_norm(&(u.matrix() - v.matrix()));
    Ok(WeylGap { spectral, operator })
}
