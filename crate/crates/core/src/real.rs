//! Points of `[0, 1]`: exact rationals, or irrationals known through an
//! enclosure oracle that can be refined on demand.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, in_unit, Rat};

/// Default precision of freshly generated approximate points.
pub const DEFAULT_BITS: u32 = 64;
/// Refinement stops here and digit extraction reports an error.
pub const DEFAULT_MAX_BITS: u32 = 4096;

/// Source of arbitrarily tight rational enclosures of a fixed real number.
pub trait RealOracle: Send + Sync + fmt::Debug {
    /// Returns `(lo, hi)` with `lo <= value <= hi` and `hi - lo <= 2^-bits`.
    fn enclose(&self, bits: u32) -> (Rat, Rat);
}

/// `frac((a + b*sqrt(m)) / c)` for integers with `b >= 0`, `c > 0` and `m` not a
/// perfect square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFrac {
    a: BigInt,
    b: BigInt,
    m: BigInt,
    c: BigInt,
    int_part: BigInt,
}

impl QuadraticFrac {
    pub fn new(a: BigInt, b: BigInt, m: BigInt, c: BigInt) -> Result<Self> {
        if b.is_negative() || !c.is_positive() || m.is_negative() {
            return Err(Error::InvalidParameter(
                "quadratic surd needs b >= 0, c > 0, m >= 0".into(),
            ));
        }
        if b.is_zero() || m.sqrt().pow(2) == m {
            return Err(Error::RationalConstant);
        }
        let mut q = QuadraticFrac {
            a,
            b,
            m,
            c,
            int_part: BigInt::zero(),
        };
        // The value is irrational, so the width-1/c enclosure at zero bits
        // pins down its integer part.
        let (num, _) = q.scaled_floor(0);
        q.int_part = num_integer::Integer::div_floor(&num, &q.c);
        Ok(q)
    }

    /// `(a*2^bits + s, c)` where `s = floor(b*sqrt(m)*2^bits)`.
    fn scaled_floor(&self, bits: u32) -> (BigInt, BigInt) {
        let shift = BigInt::one() << bits;
        let radicand = &self.b * &self.b * &self.m * &shift * &shift;
        (&self.a * &shift + radicand.sqrt(), self.c.clone())
    }
}

impl RealOracle for QuadraticFrac {
    fn enclose(&self, bits: u32) -> (Rat, Rat) {
        let (num, c) = self.scaled_floor(bits);
        let denom = c << bits;
        let base = Rat::from_integer(self.int_part.clone());
        let lo = Rat::new(num.clone(), denom.clone()) - &base;
        let hi = Rat::new(num + 1u32, denom) - base;
        (lo, hi)
    }
}

/// `frac(mult * x)` for an arbitrary oracle `x`, with the integer part fixed
/// in advance.
#[derive(Debug)]
pub(crate) struct ScaledFrac {
    pub(crate) base: Arc<dyn RealOracle>,
    pub(crate) mult: BigInt,
    pub(crate) int_part: BigInt,
    pub(crate) extra_bits: u32,
}

impl RealOracle for ScaledFrac {
    fn enclose(&self, bits: u32) -> (Rat, Rat) {
        let (lo, hi) = self.base.enclose(bits + self.extra_bits);
        let m = Rat::from_integer(self.mult.clone());
        let k = Rat::from_integer(self.int_part.clone());
        (lo * &m - &k, hi * m - k)
    }
}

/// `scale * base + offset`, evaluated at `bits` precision of `base`.
#[derive(Clone, Debug)]
pub struct ApproxReal {
    base: Arc<dyn RealOracle>,
    scale: Rat,
    offset: Rat,
    bits: u32,
    max_bits: u32,
}

impl ApproxReal {
    pub fn new(base: Arc<dyn RealOracle>, bits: u32) -> Self {
        ApproxReal {
            base,
            scale: Rat::one(),
            offset: Rat::zero(),
            bits,
            max_bits: DEFAULT_MAX_BITS.max(bits),
        }
    }

    pub fn with_max_bits(mut self, max_bits: u32) -> Self {
        self.max_bits = max_bits.max(self.bits);
        self
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn max_bits(&self) -> u32 {
        self.max_bits
    }

    /// Enclosure `[lo, hi]` at the current precision.
    pub fn enclosure(&self) -> (Rat, Rat) {
        let (lo, hi) = self.base.enclose(self.bits);
        let a = &self.scale * lo + &self.offset;
        let b = &self.scale * hi + &self.offset;
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn midpoint(&self) -> Rat {
        let (lo, hi) = self.enclosure();
        (lo + hi) / Rat::from_integer(2.into())
    }

    /// Half-width of the current enclosure.
    pub fn radius(&self) -> Rat {
        let (lo, hi) = self.enclosure();
        (hi - lo) / Rat::from_integer(2.into())
    }

    /// Same point at a higher precision; `None` once `max_bits` is reached.
    pub fn refined(&self) -> Option<Self> {
        if self.bits >= self.max_bits {
            return None;
        }
        let mut next = self.clone();
        next.bits = (self.bits.saturating_mul(2)).min(self.max_bits);
        Some(next)
    }

    /// Same point with the precision raised until the radius is at most `radius`.
    pub fn with_radius(&self, radius: &Rat) -> Result<Self> {
        let mut x = self.clone();
        while &x.radius() > radius {
            x = x
                .refined()
                .ok_or(Error::PrecisionExhausted { bits: x.bits })?;
        }
        Ok(x)
    }

    /// `x -> (x - left) / width` or, when `reverse`, `1 - (x - left) / width`.
    pub(crate) fn affine_image(&self, left: &Rat, width: &Rat, reverse: bool) -> Self {
        let mut scale = &self.scale / width;
        let mut offset = (&self.offset - left) / width;
        if reverse {
            scale = -scale;
            offset = Rat::one() - offset;
        }
        ApproxReal {
            base: Arc::clone(&self.base),
            scale,
            offset,
            bits: self.bits,
            max_bits: self.max_bits,
        }
    }
}

/// A point of `[0, 1]`.
#[derive(Clone, Debug)]
pub enum UnitReal {
    Exact(Rat),
    Approx(ApproxReal),
}

impl UnitReal {
    pub fn exact(x: Rat) -> Result<Self> {
        if !in_unit(&x) {
            return Err(Error::OutOfUnitInterval(fmt_rat(&x)));
        }
        Ok(UnitReal::Exact(x))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, UnitReal::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            UnitReal::Exact(x) => Some(x),
            UnitReal::Approx(_) => None,
        }
    }

    /// Enclosure of the point; degenerate for exact points.
    pub fn enclosure(&self) -> (Rat, Rat) {
        match self {
            UnitReal::Exact(x) => (x.clone(), x.clone()),
            UnitReal::Approx(a) => a.enclosure(),
        }
    }

    /// Center of the enclosure (the value itself when exact).
    pub fn value(&self) -> Rat {
        match self {
            UnitReal::Exact(x) => x.clone(),
            UnitReal::Approx(a) => a.midpoint(),
        }
    }

    pub fn radius(&self) -> Rat {
        match self {
            UnitReal::Exact(_) => Rat::zero(),
            UnitReal::Approx(a) => a.radius(),
        }
    }

    /// Midpoint clamped to `[0, 1]` and the radius, with the radius at most
    /// `radius`.
    pub fn certified_point(&self, radius: &Rat) -> Result<(Rat, Rat)> {
        match self {
            UnitReal::Exact(x) => Ok((x.clone(), Rat::zero())),
            UnitReal::Approx(a) => {
                let a = a.with_radius(radius)?;
                let mid = a.midpoint();
                let clamped = if mid.is_negative() {
                    Rat::zero()
                } else if mid > Rat::one() {
                    Rat::one()
                } else {
                    mid
                };
                Ok((clamped, a.radius()))
            }
        }
    }
}

impl From<ApproxReal> for UnitReal {
    fn from(a: ApproxReal) -> Self {
        UnitReal::Approx(a)
    }
}

impl fmt::Display for UnitReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitReal::Exact(x) => f.write_str(&fmt_rat(x)),
            UnitReal::Approx(a) => {
                let mid = a.midpoint();
                let rad = a.radius();
                write!(
                    f,
                    "{} ± {:e}",
                    crate::rat::to_decimal(&mid, 20),
                    crate::rat::to_f64(&rad)
                )
            }
        }
    }
}
