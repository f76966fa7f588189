use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box domain.
///
/// The Euclidean diameter is computed once at construction; it scales the
/// adaptive threshold floor and is read on every acceptance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoxBounds", into = "BoxBounds")]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
    diameter: f64,
}

#[derive(Serialize, Deserialize)]
struct BoxBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl TryFrom<BoxBounds> for SearchSpace {
    type Error = Error;

    fn try_from(b: BoxBounds) -> Result<Self> {
        SearchSpace::new(b.lower, b.upper)
    }
}

impl From<SearchSpace> for BoxBounds {
    fn from(s: SearchSpace) -> Self {
        BoxBounds {
            lower: s.lower,
            upper: s.upper,
        }
    }
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidSpace("dimension must be positive".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::InvalidSpace(format!(
                "{} lower bounds but {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        for (j, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidSpace(format!("axis {j} has non-finite bounds")));
            }
            if lo >= hi {
                return Err(Error::InvalidSpace(format!(
                    "axis {j} is empty: lower {lo} >= upper {hi}"
                )));
            }
        }
        let diameter = lower
            .iter()
            .zip(&upper)
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt();
        Ok(Self {
            lower,
            upper,
            diameter,
        })
    }

    /// `[lo, hi]^dim`.
    pub fn hypercube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// `‖upper − lower‖₂`.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Radius of the smallest enclosing ball, i.e. half the diameter for a box.
    pub fn radius(&self) -> f64 {
        0.5 * self.diameter
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.check(x).is_ok()
    }

    /// Membership test reporting the offending axis.
    pub fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        for (axis, ((v, lo), hi)) in x.iter().zip(&self.lower).zip(&self.upper).enumerate() {
            if !(lo <= v && v <= hi) {
                return Err(Error::OutOfDomain { axis });
            }
        }
        Ok(())
    }

    /// Draws a point uniformly from the box.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        self.sample_into(rng, &mut x);
        x
    }

    /// Draws a point uniformly from the box into `out`, one uniform per axis
    /// in axis order.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim());
        for ((o, lo), hi) in out.iter_mut().zip(&self.lower).zip(&self.upper) {
            let u: f64 = rng.random();
            *o = (lo + (hi - lo) * u).min(*hi);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};

    #[test]
    fn rejects_degenerate_boxes() {
        assert!(SearchSpace::new(vec![0.0], vec![0.0]).is_err());
        assert!(SearchSpace::new(vec![1.0], vec![0.0]).is_err());
        assert!(SearchSpace::new(vec![], vec![]).is_err());
        assert!(SearchSpace::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(SearchSpace::new(vec![f64::NEG_INFINITY], vec![0.0]).is_err());
    }

    #[test]
    fn diameter_is_norm_of_widths() {
        let s = SearchSpace::new(vec![0.0, -1.0], vec![3.0, 3.0]).unwrap();
        assert_eq!(s.diameter(), 5.0);
        assert_eq!(s.radius(), 2.5);
    }

    #[test]
    fn samples_stay_in_unit_interval() {
        let s = SearchSpace::hypercube(1, 0.0, 1.0).unwrap();
        let mut rng = stream(3, Stream::Candidates);
        for _ in 0..10_000 {
            let x = s.sample(&mut rng);
            assert!((0.0..=1.0).contains(&x[0]));
        }
    }

    #[test]
    fn same_seed_same_points() {
        let s = SearchSpace::hypercube(3, -2.0, 5.0).unwrap();
        let mut a = stream(11, Stream::Candidates);
        let mut b = stream(11, Stream::Candidates);
        let (a1, a2) = (s.sample(&mut a), s.sample(&mut a));
        let (b1, b2) = (s.sample(&mut b), s.sample(&mut b));
        assert_ne!(a1, a2);
        assert_eq!(a1, b1);
        assert_eq!(a2, b2);
    }

    #[test]
    fn per_axis_mean_is_one_half() {
        // Standard error sqrt(1/12)/sqrt(1e5) ~ 9.1e-4, so 0.01 is > 10 sigma.
        let s = SearchSpace::hypercube(2, 0.0, 1.0).unwrap();
        let mut rng = stream(5, Stream::Candidates);
        let n = 100_000;
        let mut sum = [0.0; 2];
        for _ in 0..n {
            let x = s.sample(&mut rng);
            sum[0] += x[0];
            sum[1] += x[1];
        }
        for s in sum {
            let mean = s / n as f64;
            assert!((0.49..=0.51).contains(&mean), "mean {mean}");
        }
    }

    #[test]
    fn check_reports_axis() {
        let s = SearchSpace::hypercube(3, 0.0, 1.0).unwrap();
        assert!(matches!(
            s.check(&[0.5, 1.5, 0.5]),
            Err(Error::OutOfDomain { axis: 1 })
        ));
        assert!(matches!(
            s.check(&[0.5]),
            Err(Error::DimensionMismatch { expected: 3, got: 1 })
        ));
        assert!(s.contains(&[0.0, 1.0, 0.5]));
    }
}
