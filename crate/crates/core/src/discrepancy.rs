//! Exact extreme discrepancy
//! `D = sup_I | #{j : a_j in I} / n - |I| |` over all intervals `I` of `[0, 1]`,
//! degenerate closed intervals `[x, x]` included.
//!
//! After sorting, the supremum splits into an excess part (closed intervals
//! spanning sample points) and a deficit part (open intervals between sample
//! points or the ends 0 and 1). Both are maxima of a sum of two running maxima
//! over the order statistics, so one linear scan suffices.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, in_unit, max_rat, min_rat, Rat};
use crate::real::UnitReal;
use crate::sequences::PointSeq;

/// Largest point set accepted by [`brute_force_discrepancy`] by default.
pub const BRUTE_FORCE_CAP: usize = 500;

/// Common denominators up to this size take the 128-bit integer path.
const FAST_DEN_LIMIT: u64 = 1 << 62;

/// A finite multiset of exact points of `[0, 1]`, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    entries: Vec<(Rat, u64)>,
    n: u64,
}

impl PointSet {
    pub fn new(points: impl IntoIterator<Item = Rat>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for p in points {
            if !in_unit(&p) {
                return Err(Error::OutOfUnitInterval(fmt_rat(&p)));
            }
            *counts.entry(p).or_insert(0u64) += 1;
        }
        let n = counts.values().sum();
        if n == 0 {
            return Err(Error::EmptyPointSet);
        }
        Ok(PointSet {
            entries: counts.into_iter().collect(),
            n,
        })
    }

    /// Exact points only.
    pub fn from_unit_reals(points: &[UnitReal]) -> Result<Self> {
        let exact = points
            .iter()
            .map(|p| p.as_exact().cloned().ok_or(Error::ApproximateInExactMode))
            .collect::<Result<Vec<_>>>()?;
        Self::new(exact)
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Distinct points in increasing order with multiplicities.
    pub fn entries(&self) -> &[(Rat, u64)] {
        &self.entries
    }
}

/// Exact extreme discrepancy in `O(n)` after sorting.
pub fn extreme_discrepancy(ps: &PointSet) -> Rat {
    discrepancy_of(ps.entries.iter().map(|(x, c)| (x, *c)), ps.n, None)
}

/// Discrepancy of sorted distinct `entries` with total count `n > 0`.
/// `common_den`, when given, must be a multiple of every denominator.
pub(crate) fn discrepancy_of<'a, I>(entries: I, n: u64, common_den: Option<&BigInt>) -> Rat
where
    I: Iterator<Item = (&'a Rat, u64)> + Clone,
{
    debug_assert!(n > 0);
    let den = match common_den {
        Some(q) => q.clone(),
        None => entries
            .clone()
            .fold(BigInt::one(), |acc, (x, _)| acc.lcm(x.denom())),
    };
    match den
        .to_u64()
        .filter(|&q| q <= FAST_DEN_LIMIT && n <= FAST_DEN_LIMIT)
    {
        Some(q) => scan_scaled(entries, n, q),
        None => scan_rational(entries, n),
    }
}

/// Visits `(point, multiplicity)` from 0 to 1, with 0 and 1 present as
/// boundary entries even when they are not sample points.
fn with_boundaries<'a, I, T>(
    entries: I,
    mut key: impl FnMut(&'a Rat) -> T,
    zero: T,
    one: T,
) -> Vec<(T, u64)>
where
    I: Iterator<Item = (&'a Rat, u64)>,
{
    let mut out = Vec::new();
    let mut starts_at_zero = false;
    let mut ends_at_one = false;
    for (x, c) in entries {
        if out.is_empty() {
            starts_at_zero = x.is_zero();
        }
        ends_at_one = x.is_one();
        out.push((key(x), c));
    }
    if !starts_at_zero {
        out.insert(0, (zero, 0));
    }
    if !ends_at_one {
        out.push((one, 0));
    }
    out
}

/// Integer scan with every point written as `k / q`.
fn scan_scaled<'a, I>(entries: I, n: u64, q: u64) -> Rat
where
    I: Iterator<Item = (&'a Rat, u64)>,
{
    let q128 = i128::from(q);
    let n128 = i128::from(n);
    let pts = with_boundaries(
        entries,
        |x| {
            let num = x.numer().to_i128().expect("numerator fits");
            let den = x.denom().to_i128().expect("denominator fits");
            num * (q128 / den)
        },
        0i128,
        q128,
    );
    let mut best = 0i128;
    let mut excess_left = i128::MIN;
    let mut deficit_left: Option<i128> = None;
    let mut before = 0i128;
    for (k, c) in pts {
        let c = i128::from(c);
        excess_left = excess_left.max(n128 * k - q128 * before);
        let upto = before + c;
        best = best.max(q128 * upto - n128 * k + excess_left);
        if let Some(d) = deficit_left {
            best = best.max(n128 * k - q128 * before + d);
        }
        let here = q128 * upto - n128 * k;
        deficit_left = Some(deficit_left.map_or(here, |d| d.max(here)));
        before = upto;
    }
    Rat::new(BigInt::from(best), BigInt::from(n128 * q128))
}

/// Same scan over rationals, scaled by `n`.
fn scan_rational<'a, I>(entries: I, n: u64) -> Rat
where
    I: Iterator<Item = (&'a Rat, u64)>,
{
    let nr = Rat::from_integer(BigInt::from(n));
    let pts = with_boundaries(entries, |x| x * &nr, Rat::zero(), nr.clone());
    let mut best = Rat::zero();
    let mut excess_left: Option<Rat> = None;
    let mut deficit_left: Option<Rat> = None;
    let mut before = Rat::zero();
    for (nk, c) in pts {
        let upto = &before + Rat::from_integer(BigInt::from(c));
        let cand = &nk - &before;
        excess_left = Some(match excess_left {
            Some(e) => max_rat(&e, &cand).clone(),
            None => cand,
        });
        let ex = &upto - &nk + excess_left.as_ref().expect("set above");
        best = max_rat(&best, &ex).clone();
        if let Some(d) = &deficit_left {
            let de = &nk - &before + d;
            best = max_rat(&best, &de).clone();
        }
        let here = &upto - &nk;
        deficit_left = Some(match deficit_left {
            Some(d) => max_rat(&d, &here).clone(),
            None => here,
        });
        before = upto;
    }
    best / nr
}

/// Independent `O(n^2)` oracle: every interval with endpoints in
/// `{0, 1} ∪ points` under all four endpoint conventions.
pub fn brute_force_discrepancy(ps: &PointSet, cap: usize) -> Result<Rat> {
    if ps.n as usize > cap {
        return Err(Error::CapExceeded {
            what: "brute-force discrepancy point count",
            cap: cap as u64,
        });
    }
    let mut ends: Vec<Rat> = ps.entries.iter().map(|(x, _)| x.clone()).collect();
    ends.push(Rat::zero());
    ends.push(Rat::one());
    ends.sort();
    ends.dedup();
    let mut sorted: Vec<&Rat> = Vec::with_capacity(ps.n as usize);
    for (x, c) in &ps.entries {
        for _ in 0..*c {
            sorted.push(x);
        }
    }
    let below: Vec<u64> = ends
        .iter()
        .map(|e| sorted.partition_point(|p| *p < e) as u64)
        .collect();
    let upto: Vec<u64> = ends
        .iter()
        .map(|e| sorted.partition_point(|p| *p <= e) as u64)
        .collect();
    // Work with n * deviation so that each interval costs integer counting
    // plus one rational comparison per extreme count.
    let n = Rat::from_integer(BigInt::from(ps.n));
    let scaled: Vec<Rat> = ends.iter().map(|e| e * &n).collect();
    let mut best = Rat::zero();
    for a in 0..ends.len() {
        for b in a..ends.len() {
            let (mut cmin, mut cmax) = (u64::MAX, 0);
            for (lc, rc) in [(true, true), (true, false), (false, true), (false, false)] {
                if a == b && !(lc && rc) {
                    continue;
                }
                let hi = if rc { upto[b] } else { below[b] };
                let lo = if lc { below[a] } else { upto[a] };
                cmin = cmin.min(hi - lo);
                cmax = cmax.max(hi - lo);
            }
            let len = &scaled[b] - &scaled[a];
            let over = Rat::from_integer(BigInt::from(cmax)) - &len;
            let under = &len - Rat::from_integer(BigInt::from(cmin));
            for dev in [over, under] {
                if dev > best {
                    best = dev;
                }
            }
        }
    }
    Ok(best / n)
}

/// Growable multiset of exact points that tracks a common denominator so that
/// repeated discrepancy evaluations stay on the integer path.
#[derive(Clone, Debug, Default)]
pub struct IncrementalPoints {
    counts: BTreeMap<Rat, u64>,
    n: u64,
    common_den: BigInt,
}

impl IncrementalPoints {
    pub fn new() -> Self {
        IncrementalPoints {
            counts: BTreeMap::new(),
            n: 0,
            common_den: BigInt::one(),
        }
    }

    pub fn insert(&mut self, x: Rat) {
        if !self.common_den.is_multiple_of(x.denom()) {
            self.common_den = self.common_den.lcm(x.denom());
        }
        *self.counts.entry(x).or_insert(0) += 1;
        self.n += 1;
    }

    /// Removes one copy of `x`; returns whether it was present.
    pub fn remove(&mut self, x: &Rat) -> bool {
        match self.counts.get_mut(x) {
            Some(c) => {
                *c -= 1;
                if *c == 0 {
                    self.counts.remove(x);
                }
                self.n -= 1;
                true
            }
            None => false,
        }
    }

    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `None` when empty.
    pub fn discrepancy(&self) -> Option<Rat> {
        (self.n > 0).then(|| {
            discrepancy_of(
                self.counts.iter().map(|(x, c)| (x, *c)),
                self.n,
                Some(&self.common_den),
            )
        })
    }
}

/// `(n, D_n)` for `n = 1, 1 + stride, 1 + 2 stride, ... <= n_max`
/// (`ceil(n_max / stride)` rows).
pub fn prefix_discrepancies(seq: &PointSeq, n_max: u64, stride: u64) -> Result<Vec<(u64, Rat)>> {
    if n_max == 0 || stride == 0 {
        return Err(Error::InvalidParameter(
            "n_max and stride must be positive".into(),
        ));
    }
    if !seq.is_exact() {
        return Err(Error::ApproximateInExactMode);
    }
    let mut pts = IncrementalPoints::new();
    let mut rows = Vec::with_capacity(n_max.div_ceil(stride) as usize);
    let mut next = 1;
    for n in 1..=n_max {
        pts.insert(seq.exact_element(n)?);
        if n == next {
            rows.push((n, pts.discrepancy().expect("non-empty")));
            next += stride;
        }
    }
    Ok(rows)
}

/// Certified enclosure `[lo, hi]` of the discrepancy of possibly approximate
/// points: moving every point by at most `delta` moves the discrepancy by at
/// most `2 delta`, and no `n` points have discrepancy below `1/n`.
pub fn certified_discrepancy(points: &[UnitReal], radius: &Rat) -> Result<(Rat, Rat)> {
    let mut mids = Vec::with_capacity(points.len());
    let mut delta = Rat::zero();
    for p in points {
        let (m, r) = p.certified_point(radius)?;
        mids.push(m);
        delta = max_rat(&delta, &r).clone();
    }
    let d = extreme_discrepancy(&PointSet::new(mids)?);
    let slack = &delta * Rat::from_integer(2.into());
    let lo = &d - &slack;
    let hi = &d + &slack;
    let floor = Rat::new(BigInt::one(), BigInt::from(points.len()));
    Ok((
        max_rat(&lo, &floor).clone(),
        min_rat(&hi, &Rat::one()).clone(),
    ))
}
