//! Block frequencies of digit sequences against the product measure of a GLS.
//!
//! Occurrences are counted at start positions `0 ..= n - r` (windows that
//! would run past the prefix are dropped) and divided by `n`.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gls::{Block, Digit, GlsSpec};
use crate::rat::{fmt_rat, Rat};

/// Prefixes shorter than this are counted on one thread.
const PARALLEL_MIN: usize = 1 << 16;
const CHUNK: usize = 1 << 15;
/// Largest number of blocks a report may enumerate.
pub const MAX_REPORT_BLOCKS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockStats {
    #[serde(serialize_with = "as_display")]
    pub block: Block,
    pub occurrences: u64,
    pub n: u64,
    #[serde(serialize_with = "as_fraction")]
    pub empirical: Rat,
    #[serde(serialize_with = "as_fraction")]
    pub expected: Rat,
    #[serde(serialize_with = "as_fraction")]
    pub deviation: Rat,
}

fn as_display<S: Serializer>(b: &Block, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(b)
}

fn as_fraction<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalityReport {
    pub n: u64,
    pub max_r: usize,
    /// Digits the blocks are drawn from.
    pub alphabet: Vec<Digit>,
    /// Total length of the branches in `alphabet`.
    #[serde(serialize_with = "as_fraction")]
    pub covered_mass: Rat,
    /// Sorted by deviation, largest first.
    pub blocks: Vec<BlockStats>,
}

impl NormalityReport {
    pub fn max_deviation(&self) -> Rat {
        self.blocks
            .first()
            .map(|b| b.deviation.clone())
            .unwrap_or_else(Rat::zero)
    }
}

/// Overlapping occurrences of `block` in `digits`, and `n = digits.len()`.
pub fn count_block(digits: &[Digit], block: &Block) -> Result<(u64, u64)> {
    let r = block.len();
    let n = digits.len();
    if n < r {
        return Err(Error::BlockTooLong { r, n });
    }
    let b = block.digits();
    let count = |starts: std::ops::Range<usize>| -> u64 {
        starts.filter(|&j| &digits[j..j + r] == b).count() as u64
    };
    let starts = n - r + 1;
    let occ = if starts < PARALLEL_MIN {
        count(0..starts)
    } else {
        (0..starts)
            .into_par_iter()
            .step_by(CHUNK)
            .map(|s| count(s..(s + CHUNK).min(starts)))
            .sum()
    };
    Ok((occ, n as u64))
}

/// `|I_{b_1}| ... |I_{b_r}|`, the length of the cylinder of `block`.
pub fn expected_measure(spec: &GlsSpec, block: &Block) -> Result<Rat> {
    block
        .digits()
        .iter()
        .try_fold(Rat::one(), |acc, &d| Ok(acc * spec.width_of(d)?))
}

/// First position holding a digit outside the spec's digit set.
pub fn check_digits(spec: &GlsSpec, digits: &[Digit]) -> Result<()> {
    match spec.digit_count() {
        Some(_) => {
            let allowed: std::collections::HashSet<Digit> =
                spec.digits_by_mass(usize::MAX).into_iter().collect();
            match digits.iter().position(|d| !allowed.contains(d)) {
                Some(position) => Err(Error::DigitAt {
                    position: position as u64,
                    digit: digits[position],
                }),
                None => Ok(()),
            }
        }
        None => match digits.iter().position(|&d| d == 0) {
            Some(position) => Err(Error::DigitAt {
                position: position as u64,
                digit: 0,
            }),
            None => Ok(()),
        },
    }
}

/// Frequencies of all blocks of length `1 ..= max_r` over the `digit_cap`
/// most probable digits (all digits of a finite spec when `None`).
pub fn normality_report(
    digits: &[Digit],
    spec: &GlsSpec,
    max_r: usize,
    digit_cap: Option<usize>,
) -> Result<NormalityReport> {
    if max_r == 0 {
        return Err(Error::InvalidParameter("max_r must be at least 1".into()));
    }
    let n = digits.len();
    if max_r > n {
        return Err(Error::BlockTooLong { r: max_r, n });
    }
    let cap = match (digit_cap, spec.digit_count()) {
        (Some(c), Some(k)) => c.min(k),
        (Some(c), None) => c,
        (None, Some(k)) => k,
        (None, None) => {
            return Err(Error::InvalidParameter(
                "an infinite digit set needs a digit cap".into(),
            ))
        }
    };
    if cap == 0 {
        return Err(Error::InvalidParameter(
            "digit cap must be at least 1".into(),
        ));
    }
    let mut total: usize = 0;
    let mut per_len = 1usize;
    for _ in 0..max_r {
        per_len = per_len.saturating_mul(cap);
        total = total.saturating_add(per_len);
    }
    if total > MAX_REPORT_BLOCKS {
        return Err(Error::CapExceeded {
            what: "blocks in a normality report",
            cap: MAX_REPORT_BLOCKS as u64,
        });
    }
    let alphabet = spec.digits_by_mass(cap);
    let widths = alphabet
        .iter()
        .map(|&d| spec.width_of(d))
        .collect::<Result<Vec<_>>>()?;
    let covered_mass = widths.iter().fold(Rat::zero(), |a, w| a + w);
    let index: std::collections::HashMap<Digit, usize> =
        alphabet.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    // Digits outside the alphabet become a sentinel that breaks every window.
    let coded: Vec<usize> = digits
        .iter()
        .map(|d| index.get(d).copied().unwrap_or(usize::MAX))
        .collect();

    let n_rat = Rat::from_integer((n as u64).into());
    let mut blocks = Vec::with_capacity(total);
    for r in 1..=max_r {
        let counts = window_counts(&coded, cap, r);
        for (code, occ) in counts.into_iter().enumerate() {
            let mut ds = vec![0; r];
            let mut expected = Rat::one();
            let mut c = code;
            for slot in ds.iter_mut().rev() {
                *slot = alphabet[c % cap];
                expected *= &widths[c % cap];
                c /= cap;
            }
            let empirical = Rat::from_integer(occ.into()) / &n_rat;
            let deviation = (&empirical - &expected).abs();
            blocks.push(BlockStats {
                block: Block::new(ds)?,
                occurrences: occ,
                n: n as u64,
                empirical,
                expected,
                deviation,
            });
        }
    }
    blocks.sort_by(|a, b| {
        b.deviation
            .cmp(&a.deviation)
            .then(a.block.len().cmp(&b.block.len()))
            .then(a.block.cmp(&b.block))
    });
    Ok(NormalityReport {
        n: n as u64,
        max_r,
        alphabet,
        covered_mass,
        blocks,
    })
}

/// Occurrence counts of every length-`r` word over `0..k`, indexed base `k`
/// with the first letter most significant.
fn window_counts(coded: &[usize], k: usize, r: usize) -> Vec<u64> {
    let size = k.pow(r as u32);
    let starts = coded.len() + 1 - r;
    let count = |range: std::ops::Range<usize>| -> Vec<u64> {
        let mut out = vec![0u64; size];
        'start: for j in range {
            let mut code = 0;
            for &c in &coded[j..j + r] {
                if c == usize::MAX {
                    continue 'start;
                }
                code = code * k + c;
            }
            out[code] += 1;
        }
        out
    };
    if starts < PARALLEL_MIN {
        return count(0..starts);
    }
    (0..starts)
        .into_par_iter()
        .step_by(CHUNK)
        .map(|s| count(s..(s + CHUNK).min(starts)))
        .reduce(
            || vec![0u64; size],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn block(d: &[Digit]) -> Block {
        Block::new(d.to_vec()).unwrap()
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_block(&[1, 2, 1, 2], &block(&[1, 2])).unwrap(), (2, 4));
        assert_eq!(count_block(&[1, 1, 1, 1], &block(&[1, 1])).unwrap(), (3, 4));
        assert_eq!(count_block(&[1, 2, 1, 2], &block(&[2, 2])).unwrap(), (0, 4));
        assert!(matches!(
            count_block(&[1], &block(&[1, 1])),
            Err(Error::BlockTooLong { r: 2, n: 1 })
        ));
    }

    #[test]
    fn parallel_count_matches_serial() {
        let digits: Vec<Digit> = (0..200_000u64).map(|i| 1 + (i * i + i / 7) % 3).collect();
        let b = block(&[2, 1]);
        let serial = digits.windows(2).filter(|w| w == &[2, 1]).count() as u64;
        assert_eq!(count_block(&digits, &b).unwrap().0, serial);
    }

    #[test]
    fn expected_examples() {
        let bin = GlsSpec::b_adic(2).unwrap();
        let lu = GlsSpec::lueroth_classic();
        assert_eq!(expected_measure(&bin, &block(&[1])).unwrap(), rat(1, 2));
        assert_eq!(expected_measure(&lu, &block(&[2, 2])).unwrap(), rat(1, 36));
        assert_eq!(
            expected_measure(&lu, &block(&[1, 2, 3])).unwrap(),
            rat(1, 144)
        );
        assert!(expected_measure(&bin, &block(&[3])).is_err());
    }

    #[test]
    fn report_on_alternating_digits() {
        let bin = GlsSpec::b_adic(2).unwrap();
        let digits: Vec<Digit> = (0..10).map(|i| 1 + i % 2).collect();
        let rep = normality_report(&digits, &bin, 1, None).unwrap();
        assert_eq!(rep.blocks.len(), 2);
        for b in &rep.blocks {
            assert_eq!(b.empirical, rat(1, 2));
            assert!(b.deviation.is_zero());
        }
        assert_eq!(rep.covered_mass, rat(1, 1));
    }

    #[test]
    fn report_has_every_block_sorted() {
        let bin = GlsSpec::b_adic(2).unwrap();
        let digits: Vec<Digit> = (0..50u64).map(|i| 1 + (i * 7 % 5) % 2).collect();
        let rep = normality_report(&digits, &bin, 3, None).unwrap();
        assert_eq!(rep.blocks.len(), 14);
        assert!(rep
            .blocks
            .windows(2)
            .all(|w| w[0].deviation >= w[1].deviation));
        for r in 1..=3 {
            let sum: u64 = rep
                .blocks
                .iter()
                .filter(|b| b.block.len() == r)
                .map(|b| b.occurrences)
                .sum();
            assert_eq!(sum, 50 - r as u64 + 1);
        }
        for b in &rep.blocks {
            assert_eq!(count_block(&digits, &b.block).unwrap().0, b.occurrences);
        }
    }

    #[test]
    fn lueroth_digit_cap_mass() {
        let lu = GlsSpec::lueroth_classic();
        let rep = normality_report(&[1, 2, 3, 7], &lu, 1, Some(3)).unwrap();
        assert_eq!(rep.covered_mass, rat(3, 4));
        assert_eq!(rep.alphabet, vec![1, 2, 3]);
        assert!(normality_report(&[1, 2], &lu, 1, None).is_err());
    }

    #[test]
    fn report_errors() {
        let bin = GlsSpec::b_adic(2).unwrap();
        assert!(matches!(
            normality_report(&[1, 2], &bin, 3, None),
            Err(Error::BlockTooLong { .. })
        ));
        assert!(normality_report(&[1, 2], &bin, 0, None).is_err());
    }

    #[test]
    fn digit_check_names_position() {
        let bin = GlsSpec::b_adic(2).unwrap();
        assert!(check_digits(&bin, &[1, 2, 2]).is_ok());
        assert!(matches!(
            check_digits(&bin, &[1, 2, 3]),
            Err(Error::DigitAt {
                position: 2,
                digit: 3
            })
        ));
        let lu = GlsSpec::lueroth_classic();
        assert!(check_digits(&lu, &[1, 99]).is_ok());
    }
}
