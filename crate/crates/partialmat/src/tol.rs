//! The uniform tolerance rule used by every numeric comparison in the crate.

/// Absolute/relative tolerance pair.
///
/// A quantity `q` passes a "`q >= 0`" test when
/// `q >= -(absolute + relative * scale)` where `scale` is clamped below by 1
/// and is taken as the largest absolute value among the quantities being
/// compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
}

pub const DEFAULT_TOL_ABS: f64 = 1e-12;
pub const DEFAULT_TOL_REL: f64 = 1e-9;

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            absolute: DEFAULT_TOL_ABS,
            relative: DEFAULT_TOL_REL,
        }
    }
}

impl Tolerance {
    pub fn new(absolute: f64, relative: f64) -> Self {
        Tolerance { absolute, relative }
    }

    /// The allowed slack at a given scale: `absolute + relative * max(1, scale)`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.absolute + self.relative * scale.max(1.0)
    }

    /// Does `q` pass a `>= 0` test at the given scale?
    pub fn passes_nonneg(&self, q: f64, scale: f64) -> bool {
        q >= -self.bound(scale)
    }

    /// Are `a` and `b` equal up to the tolerance at their own scale?
    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.bound(a.abs().max(b.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_clamps_scale_below_by_one() {
        let tol = Tolerance::default();
        assert_eq!(tol.bound(0.0), 1e-12 + 1e-9);
        assert_eq!(tol.bound(100.0), 1e-12 + 1e-9 * 100.0);
    }

    #[test]
    fn nonneg_allows_small_negative() {
        let tol = Tolerance::default();
        assert!(tol.passes_nonneg(-1e-10, 1.0));
        assert!(!tol.passes_nonneg(-1e-6, 1.0));
        assert!(tol.passes_nonneg(0.5, 1e9));
    }
}
