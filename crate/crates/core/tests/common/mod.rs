//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use glsnormal::gls::Orientation;
use glsnormal::{Branch, GlsSpec, Interval, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub fn r(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Discrepancy by direct counting: every interval with endpoints in
/// `{0, 1} ∪ points` and every closure combination, O(n^3).
pub fn naive_discrepancy(points: &[Rat]) -> Rat {
    let n = Rat::from_integer(BigInt::from(points.len()));
    let mut ends: Vec<Rat> = points.to_vec();
    ends.push(Rat::zero());
    ends.push(Rat::one());
    ends.sort();
    ends.dedup();
    let mut best = Rat::zero();
    for (i, a) in ends.iter().enumerate() {
        for b in &ends[i..] {
            for (lc, rc) in [(true, true), (true, false), (false, true), (false, false)] {
                if a == b && !(lc && rc) {
                    continue;
                }
                let inside = points
                    .iter()
                    .filter(|x| {
                        (if lc { *x >= a } else { *x > a }) && (if rc { *x <= b } else { *x < b })
                    })
                    .count();
                let dev = (Rat::from_integer(BigInt::from(inside)) / &n - (b - a)).abs();
                if dev > best {
                    best = dev;
                }
            }
        }
    }
    best
}

/// Rational in `[0, 1]` with denominator at most `max_den`.
pub fn random_unit_rat<R: Rng>(rng: &mut R, max_den: i64) -> Rat {
    let q = rng.gen_range(1..=max_den);
    r(rng.gen_range(0..=q), q)
}

/// Random partition of `[0, 1]` into `k` positive-length branches with random
/// orientations and shuffled digit labels.
pub fn random_table<R: Rng>(rng: &mut R, k: usize) -> GlsSpec {
    let mut cuts: Vec<Rat> = Vec::new();
    while cuts.len() < k - 1 {
        let q = rng.gen_range(2..=40);
        let c = r(rng.gen_range(1..q), q);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.push(Rat::zero());
    cuts.push(Rat::one());
    cuts.sort();
    let mut labels: Vec<u64> = (1..=k as u64).collect();
    for i in (1..labels.len()).rev() {
        labels.swap(i, rng.gen_range(0..=i));
    }
    let branches = cuts
        .windows(2)
        .zip(labels)
        .map(|(w, d)| {
            let o = if rng.gen_bool(0.5) {
                Orientation::Increasing
            } else {
                Orientation::Decreasing
            };
            Branch::new(d, w[0].clone(), w[1].clone(), o).unwrap()
        })
        .collect();
    GlsSpec::from_branches(branches).unwrap()
}

/// Random rational subinterval of `[0, 1]` with random endpoint closure.
pub fn random_interval<R: Rng>(rng: &mut R) -> Interval {
    loop {
        let a = random_unit_rat(rng, 60);
        let b = random_unit_rat(rng, 60);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let lc = rng.gen_bool(0.5);
        let rc = rng.gen_bool(0.5);
        if let Some(i) = Interval::new(a, b, lc, rc) {
            return i;
        }
    }
}

/// All reduced fractions in `[0, 1]` with denominator at most `max_den`.
pub fn farey_set(max_den: i64) -> Vec<Rat> {
    let mut out = vec![Rat::zero()];
    for q in 1..=max_den {
        for p in 1..=q {
            if num_integer::gcd(p, q) == 1 {
                out.push(r(p, q));
            }
        }
    }
    out
}
