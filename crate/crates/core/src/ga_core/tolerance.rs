/// Relative/absolute threshold pair used for every "numerically zero" test.
///
/// A quantity `x` is numerically zero relative to a scale `s` iff
/// `|x| <= max(abs_eps, rel_eps * s)`. The scale is always taken from the
/// magnitudes of the operands that produced `x`, so cancellation is judged
/// against what was cancelled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel_eps: f64,
    pub abs_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel_eps: 1e-10,
            abs_eps: 1e-13,
        }
    }
}

impl Tolerance {
    pub fn new(rel_eps: f64, abs_eps: f64) -> Self {
        Tolerance { rel_eps, abs_eps }
    }

    /// The absolute threshold for a quantity with the given scale.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs_eps.max(self.rel_eps * scale)
    }

    pub fn is_zero(&self, x: f64, scale: f64) -> bool {
        x.abs() <= self.threshold(scale)
    }
}
