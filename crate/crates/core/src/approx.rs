//! `(1 + eps)`-approximate minimum cycle weight under vertex updates, for
//! graphs whose positive cycles all weigh within `[c, C]`.
//!
//! One threshold detector runs per power `(1 + eps)^k` covering `[c, C]`,
//! plus one at `0` (negative cycles) and one at `c` (zero-weight cycles).

use crate::error::{Error, Result};
use crate::graph::{EdgeBatch, VertexId};
use crate::threshold::ThresholdDetector;
use crate::weight::{ExtWeight, Weight};

#[derive(Debug, Clone)]
pub struct ApproxMinCycle {
    eps: f64,
    c: Weight,
    cap: Weight,
    k_min: i32,
    thresholds: Vec<Weight>,
    detectors: Vec<ThresholdDetector>,
    negative: ThresholdDetector,
    below_c: ThresholdDetector,
}

impl ApproxMinCycle {
    /// `cap` is the upper bound `C` on positive cycle weights.
    pub fn new(n: usize, eps: f64, c: Weight, cap: Weight) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "eps must lie in (0, 1], got {eps}"
            )));
        }
        if !(c > 0.0 && c <= cap && cap.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "cycle bounds must satisfy 0 < c <= C, got c={c}, C={cap}"
            )));
        }
        let base = 1.0 + eps;
        let mut k_min = (c.ln() / base.ln()).ceil() as i32;
        while base.powi(k_min - 1) >= c {
            k_min -= 1;
        }
        // Thresholds are multiplied out one step at a time, so consecutive
        // values differ by exactly one factor in floating point.
        let mut thresholds = vec![base.powi(k_min)];
        let k_max_floor = (cap.ln() / base.ln()).ceil() as i32;
        while k_min + (thresholds.len() as i32) <= k_max_floor
            || *thresholds.last().expect("nonempty") <= cap
        {
            let next = thresholds.last().expect("nonempty") * base;
            thresholds.push(next);
        }
        let detectors = thresholds
            .iter()
            .map(|&t| ThresholdDetector::new(n, t))
            .collect::<Result<_>>()?;
        Ok(ApproxMinCycle {
            eps,
            c,
            cap,
            k_min,
            thresholds,
            detectors,
            negative: ThresholdDetector::new(n, 0.0)?,
            below_c: ThresholdDetector::new(n, c)?,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn bounds(&self) -> (Weight, Weight) {
        (self.c, self.cap)
    }

    /// Inclusive range of exponents `k` with a detector at `(1 + eps)^k`.
    pub fn k_range(&self) -> (i32, i32) {
        (self.k_min, self.k_min + self.thresholds.len() as i32 - 1)
    }

    pub fn thresholds(&self) -> &[Weight] {
        &self.thresholds
    }

    /// Answers of the power-threshold detectors in increasing threshold order.
    pub fn detector_answers(&self) -> Vec<bool> {
        self.detectors
            .iter()
            .map(ThresholdDetector::cycle_below_threshold)
            .collect()
    }

    pub fn detectors(&self) -> impl Iterator<Item = &ThresholdDetector> {
        std::iter::once(&self.negative)
            .chain(std::iter::once(&self.below_c))
            .chain(self.detectors.iter())
    }

    pub fn vertex_update(
        &mut self,
        v: VertexId,
        new_in: &EdgeBatch,
        new_out: &EdgeBatch,
    ) -> Result<()> {
        self.negative.vertex_update(v, new_in, new_out)?;
        self.below_c.vertex_update(v, new_in, new_out)?;
        for d in &mut self.detectors {
            d.vertex_update(v, new_in, new_out)?;
        }
        Ok(())
    }

    pub fn estimate(&self) -> ExtWeight {
        if self.negative.cycle_below_threshold() {
            return ExtWeight::NegInf;
        }
        if self.below_c.cycle_below_threshold() {
            return ExtWeight::ZERO;
        }
        self.detectors
            .iter()
            .zip(&self.thresholds)
            .find(|(d, _)| d.cycle_below_threshold())
            .map_or(ExtWeight::PosInf, |(_, &t)| ExtWeight::Finite(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn batch(edges: &[(usize, usize, f64)]) -> EdgeBatch {
        edges.iter().map(|&(u, v, w)| Edge::new(u, v, w)).collect()
    }

    #[test]
    fn detector_ranges() {
        let a = ApproxMinCycle::new(10, 0.5, 1.0, 100.0).unwrap();
        // 1.5^11 < 100 <= 1.5^12
        assert_eq!(a.k_range(), (0, 12));
        assert_eq!(a.detectors().count(), 15);
        assert_eq!(a.estimate(), ExtWeight::PosInf);

        let b = ApproxMinCycle::new(10, 0.1, 2.0, 2048.0).unwrap();
        let expect_lo = (2f64.ln() / 1.1f64.ln()).ceil() as i32;
        let expect_hi = (2048f64.ln() / 1.1f64.ln()).ceil() as i32;
        assert_eq!(b.k_range(), (expect_lo, expect_hi));
    }

    #[test]
    fn degenerate_bounds_keep_a_detector_above_c() {
        let a = ApproxMinCycle::new(10, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(a.k_range(), (0, 1));
        let mut a = a;
        a.vertex_update(0, &batch(&[(1, 0, 0.0)]), &batch(&[(0, 1, 1.0)]))
            .unwrap();
        assert_eq!(a.estimate(), ExtWeight::Finite(2.0));
    }

    #[test]
    fn invalid_configs() {
        assert!(ApproxMinCycle::new(3, 0.0, 1.0, 2.0).is_err());
        assert!(ApproxMinCycle::new(3, 1.5, 1.0, 2.0).is_err());
        assert!(ApproxMinCycle::new(3, 0.5, 0.0, 2.0).is_err());
        assert!(ApproxMinCycle::new(3, 0.5, 3.0, 2.0).is_err());
    }

    #[test]
    fn single_cycle_estimate() {
        let mut a = ApproxMinCycle::new(10, 0.5, 1.0, 100.0).unwrap();
        a.vertex_update(0, &batch(&[(1, 0, 6.0)]), &batch(&[(0, 1, 4.0)]))
            .unwrap();
        let est = a.estimate().finite().unwrap();
        assert!((10.0..=15.0).contains(&est), "{est}");
        a.vertex_update(0, &EdgeBatch::new(), &EdgeBatch::new())
            .unwrap();
        assert_eq!(a.estimate(), ExtWeight::PosInf);
    }

    #[test]
    fn zero_and_negative_cycles() {
        let mut a = ApproxMinCycle::new(4, 0.5, 1.0, 100.0).unwrap();
        a.vertex_update(0, &batch(&[(1, 0, 0.0)]), &batch(&[(0, 1, 0.0)]))
            .unwrap();
        assert_eq!(a.estimate(), ExtWeight::ZERO);
        a.vertex_update(2, &batch(&[(3, 2, -1.0)]), &batch(&[(2, 3, 0.0)]))
            .unwrap();
        assert_eq!(a.estimate(), ExtWeight::NegInf);
    }
}
