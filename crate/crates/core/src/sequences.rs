//! Equidistributed sequences in `[0, 1]`, indexed from 1.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, in_unit, parse_rat, Rat};
use crate::real::{ApproxReal, QuadraticFrac, RealOracle, ScaledFrac, UnitReal};
use crate::real::{DEFAULT_BITS, DEFAULT_MAX_BITS};

/// Rotation constant for Kronecker sequences `(j * beta) mod 1`.
#[derive(Clone, Debug)]
pub enum Beta {
    /// `sqrt(m)`, `m` not a perfect square.
    Sqrt(u64),
    /// `(1 + sqrt 5) / 2`.
    Golden,
    /// `(a + b * sqrt(m)) / c`.
    Quadratic { a: i64, b: i64, m: u64, c: i64 },
    /// Always rejected; present so that parsing `p/q` can report it.
    Rational(Rat),
    /// User constant with its own enclosure oracle.
    Custom(Arc<dyn RealOracle>),
}

impl Beta {
    /// `sqrtM`, `sqrt:M`, `golden`, or `p/q` (which is then rejected by the
    /// generators).
    pub fn parse(s: &str) -> Result<Self> {
        if s == "golden" || s == "phi" {
            return Ok(Beta::Golden);
        }
        if let Some(m) = s.strip_prefix("sqrt") {
            let m = m.trim_start_matches([':', '(']).trim_end_matches(')');
            let m = m
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad radicand in {s:?}")))?;
            return Ok(Beta::Sqrt(m));
        }
        parse_rat(s)
            .map(Beta::Rational)
            .map_err(|_| Error::Parse(format!("unknown constant {s:?}")))
    }

    fn multiple_frac(&self, j: u64) -> Result<Arc<dyn RealOracle>> {
        let jb = BigInt::from(j);
        let q = |a: BigInt, b: BigInt, m: BigInt, c: BigInt| -> Result<Arc<dyn RealOracle>> {
            Ok(Arc::new(QuadraticFrac::new(a, b, m, c)?))
        };
        match self {
            Beta::Rational(_) => Err(Error::RationalConstant),
            Beta::Sqrt(m) => q(BigInt::zero(), jb, BigInt::from(*m), BigInt::from(1)),
            Beta::Golden => q(jb.clone(), jb, BigInt::from(5), BigInt::from(2)),
            Beta::Quadratic { a, b, m, c } => {
                if *b < 0 {
                    return Err(Error::InvalidParameter(
                        "quadratic constant needs b >= 0".into(),
                    ));
                }
                q(jb.clone() * a, jb * b, BigInt::from(*m), BigInt::from(*c))
            }
            Beta::Custom(base) => {
                let extra_bits = u32::try_from(jb.bits()).unwrap_or(u32::MAX) + 1;
                let mut bits = DEFAULT_BITS;
                loop {
                    let (lo, hi) = base.enclose(bits);
                    let m = Rat::from_integer(jb.clone());
                    let a = (lo * &m).floor().to_integer();
                    let b = (hi * &m).floor().to_integer();
                    if a == b {
                        return Ok(Arc::new(ScaledFrac {
                            base: Arc::clone(base),
                            mult: jb,
                            int_part: a,
                            extra_bits,
                        }));
                    }
                    if bits >= DEFAULT_MAX_BITS {
                        return Err(Error::PrecisionExhausted { bits });
                    }
                    bits *= 2;
                }
            }
        }
    }

    fn check(&self) -> Result<()> {
        self.multiple_frac(1).map(|_| ())
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Sqrt(m) => write!(f, "sqrt{m}"),
            Beta::Golden => f.write_str("golden"),
            Beta::Quadratic { a, b, m, c } => write!(f, "({a}+{b}sqrt{m})/{c}"),
            Beta::Rational(r) => f.write_str(&fmt_rat(r)),
            Beta::Custom(_) => f.write_str("custom"),
        }
    }
}

/// `(j * beta) mod 1` with enclosure radius at most `radius`.
pub fn kronecker(beta: &Beta, j: u64, radius: &Rat) -> Result<UnitReal> {
    if j == 0 {
        return Err(Error::InvalidParameter(
            "sequence indices start at 1".into(),
        ));
    }
    let oracle = beta.multiple_frac(j)?;
    Ok(ApproxReal::new(oracle, DEFAULT_BITS)
        .with_radius(radius)?
        .into())
}

/// The `j`-th term of `1/2, 1/3, 2/3, 1/4, 2/4, 3/4, 1/5, ...` (denominators
/// in order, numerators `1..q-1`, unreduced positions kept).
pub fn farey_enum(j: u64) -> Rat {
    assert!(j >= 1, "sequence indices start at 1");
    // Terms with denominator <= q: q(q-1)/2. Find the least q with q(q-1)/2 >= j.
    let j = BigInt::from(j);
    let t: BigInt = &j * 8u32 + 1u32;
    let mut q: BigInt = (t.sqrt() + 1u32) / 2u32;
    while &q * (&q - 1u32) / 2u32 < j {
        q += 1u32;
    }
    while q > BigInt::from(2) && (&q - 1u32) * (&q - 2u32) / 2u32 >= j {
        q -= 1u32;
    }
    let before = (&q - 1u32) * (&q - 2u32) / 2u32;
    Rat::new(j - before, q)
}

/// Radical inverse of `j` in `base`.
pub fn van_der_corput(base: u64, j: u64) -> Result<Rat> {
    if base < 2 {
        return Err(Error::InvalidParameter(format!(
            "van der Corput base must be at least 2, got {base}"
        )));
    }
    let b = BigInt::from(base);
    let mut num = BigInt::zero();
    let mut den = BigInt::from(1);
    let mut rest = BigInt::from(j);
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&b);
        num = num * &b + r;
        den *= &b;
        rest = q;
    }
    Ok(Rat::new(num, den))
}

#[derive(Clone, Debug)]
pub enum Generator {
    VanDerCorput(u64),
    Farey,
    Kronecker(Beta),
    List { name: String, points: Arc<[Rat]> },
}

/// A deterministic sequence `(a_1, a_2, ...)` in `[0, 1]`, possibly shifted.
#[derive(Clone, Debug)]
pub struct PointSeq {
    generator: Generator,
    offset: u64,
}

impl PointSeq {
    pub fn van_der_corput(base: u64) -> Result<Self> {
        van_der_corput(base, 1)?;
        Ok(Self::from_generator(Generator::VanDerCorput(base)))
    }

    pub fn farey() -> Self {
        Self::from_generator(Generator::Farey)
    }

    /// Rejects rational constants.
    pub fn kronecker(beta: Beta) -> Result<Self> {
        beta.check()?;
        Ok(Self::from_generator(Generator::Kronecker(beta)))
    }

    pub fn from_list(name: &str, points: Vec<Rat>) -> Result<Self> {
        if let Some(bad) = points.iter().find(|p| !in_unit(p)) {
            return Err(Error::OutOfUnitInterval(fmt_rat(bad)));
        }
        Ok(Self::from_generator(Generator::List {
            name: name.to_string(),
            points: points.into(),
        }))
    }

    /// Reads `p/q` fractions, one per line; blank lines and `#` comments are
    /// skipped.
    pub fn load_list(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut points = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let x = parse_rat(line)
                .map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), i + 1)))?;
            points.push(x);
        }
        Self::from_list(&path.display().to_string(), points)
    }

    fn from_generator(generator: Generator) -> Self {
        PointSeq {
            generator,
            offset: 0,
        }
    }

    /// `vdc:B`, `farey`, `kronecker:CONST` or `list:PATH`, optionally followed
    /// by `@k` for the shifted sequence `(a_k, a_{k+1}, ...)`.
    pub fn parse_id(id: &str) -> Result<Self> {
        let (body, shift) = match id.rsplit_once('@') {
            Some((b, k)) => (
                b,
                k.parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad shift in {id:?}")))?,
            ),
            None => (id, 1),
        };
        let seq = if body == "farey" {
            Self::farey()
        } else if let Some(b) = body.strip_prefix("vdc:") {
            let b = b
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad base in {id:?}")))?;
            Self::van_der_corput(b)?
        } else if body == "vdc" {
            Self::van_der_corput(2)?
        } else if let Some(c) = body.strip_prefix("kronecker:") {
            Self::kronecker(Beta::parse(c)?)?
        } else if let Some(p) = body.strip_prefix("list:") {
            Self::load_list(Path::new(p))?
        } else {
            return Err(Error::Parse(format!("unknown sequence {id:?}")));
        };
        seq.shift(shift)
    }

    pub fn id(&self) -> String {
        let body = match &self.generator {
            Generator::VanDerCorput(b) => format!("vdc:{b}"),
            Generator::Farey => "farey".into(),
            Generator::Kronecker(beta) => format!("kronecker:{beta}"),
            Generator::List { name, .. } => format!("list:{name}"),
        };
        if self.offset == 0 {
            body
        } else {
            format!("{body}@{}", self.offset + 1)
        }
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    /// `(a_k, a_{k+1}, ...)`.
    pub fn shift(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("shift index starts at 1".into()));
        }
        let mut s = self.clone();
        s.offset += k - 1;
        Ok(s)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.generator, Generator::Kronecker(_))
    }

    /// Number of elements, for finite lists.
    pub fn len(&self) -> Option<u64> {
        match &self.generator {
            Generator::List { points, .. } => {
                Some((points.len() as u64).saturating_sub(self.offset))
            }
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Element `j >= 1`.
    pub fn element(&self, j: u64) -> Result<UnitReal> {
        match &self.generator {
            Generator::Kronecker(beta) => {
                let index = self.index(j)?;
                let oracle = beta.multiple_frac(index)?;
                Ok(ApproxReal::new(oracle, DEFAULT_BITS).into())
            }
            _ => Ok(UnitReal::Exact(self.exact_element(j)?)),
        }
    }

    /// Element `j >= 1` of an exact sequence.
    pub fn exact_element(&self, j: u64) -> Result<Rat> {
        let index = self.index(j)?;
        match &self.generator {
            Generator::VanDerCorput(b) => van_der_corput(*b, index),
            Generator::Farey => Ok(farey_enum(index)),
            Generator::Kronecker(_) => Err(Error::ApproximateInExactMode),
            Generator::List { points, .. } => usize::try_from(index - 1)
                .ok()
                .and_then(|i| points.get(i))
                .cloned()
                .ok_or(Error::SequenceExhausted(j)),
        }
    }

    /// The first `n` elements of an exact sequence.
    pub fn exact_prefix(&self, n: u64) -> Result<Vec<Rat>> {
        (1..=n).map(|j| self.exact_element(j)).collect()
    }

    fn index(&self, j: u64) -> Result<u64> {
        if j == 0 {
            return Err(Error::InvalidParameter(
                "sequence indices start at 1".into(),
            ));
        }
        j.checked_add(self.offset)
            .ok_or(Error::InvalidParameter("index overflow".into()))
    }
}
