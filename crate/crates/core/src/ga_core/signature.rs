use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GaError;

/// Default cap on `n = p + q + r`; dense storage and the regular
/// representation solve scale as `2^n` and `(2^n)^3`.
pub const DEFAULT_DIM_CAP: usize = 12;

/// Metric signature `(p, q, r)`: `p` generators squaring to +1, `q` to -1,
/// `r` to 0 (degenerate). Generator `i` (0-indexed) squares to +1 when
/// `i < p`, to -1 when `p <= i < p + q`, to 0 otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Signature {
    p: u8,
    q: u8,
    r: u8,
}

impl Signature {
    pub fn new(p: usize, q: usize, r: usize) -> Result<Self, GaError> {
        Self::with_cap(p, q, r, DEFAULT_DIM_CAP)
    }

    /// Like [`Signature::new`] with an explicit dimension cap.
    pub fn with_cap(p: usize, q: usize, r: usize, cap: usize) -> Result<Self, GaError> {
        let n = p + q + r;
        if n == 0 {
            return Err(GaError::EmptyAlgebra);
        }
        if n > cap || n > u8::MAX as usize {
            return Err(GaError::DimensionTooLarge { n, cap });
        }
        Ok(Signature {
            p: p as u8,
            q: q as u8,
            r: r as u8,
        })
    }

    pub fn euclidean(n: usize) -> Result<Self, GaError> {
        Self::new(n, 0, 0)
    }

    pub fn p(&self) -> usize {
        self.p as usize
    }

    pub fn q(&self) -> usize {
        self.q as usize
    }

    pub fn r(&self) -> usize {
        self.r as usize
    }

    pub fn dim(&self) -> usize {
        self.p as usize + self.q as usize + self.r as usize
    }

    pub fn blade_count(&self) -> usize {
        1 << self.dim()
    }

    pub fn is_degenerate(&self) -> bool {
        self.r > 0
    }

    /// Square of generator `i` (0-indexed): +1, -1 or 0.
    pub fn metric(&self, i: usize) -> f64 {
        debug_assert!(i < self.dim());
        if i < self.p as usize {
            1.0
        } else if i < (self.p + self.q) as usize {
            -1.0
        } else {
            0.0
        }
    }

    /// Human-readable algebra name, e.g. `R_{4,0,1}`.
    pub fn algebra_name(&self) -> String {
        format!("R_{{{},{},{}}}", self.p, self.q, self.r)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.p, self.q, self.r)
    }
}

impl FromStr for Signature {
    type Err = GaError;

    /// Parses the `p,q,r` form used on the command line; `r` may be omitted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 2 && parts.len() != 3 {
            return Err(GaError::Parse {
                message: format!("expected signature `p,q,r`, got `{s}`"),
                position: 0,
            });
        }
        let mut nums = [0usize; 3];
        for (i, part) in parts.iter().enumerate() {
            nums[i] = part.parse().map_err(|_| GaError::Parse {
                message: format!("invalid signature component `{part}`"),
                position: 0,
            })?;
        }
        Signature::new(nums[0], nums[1], nums[2])
    }
}
