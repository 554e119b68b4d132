mod common;

use common::{farey_set, r, random_interval, random_table, random_unit_rat};
use glsnormal::{Block, GlsSpec, Rat, UnitReal};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_specs() -> Vec<GlsSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    vec![
        GlsSpec::b_adic(2).unwrap(),
        GlsSpec::b_adic(3).unwrap(),
        GlsSpec::lueroth_classic(),
        GlsSpec::lueroth_alternating(),
        random_table(&mut rng, 3),
        random_table(&mut rng, 4),
    ]
}

fn blocks(alphabet: u64, max_len: usize) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![vec![]];
    let mut all = Vec::new();
    for _ in 0..max_len {
        out = out
            .into_iter()
            .flat_map(|b| {
                (1..=alphabet).map(move |d| {
                    let mut c = b.clone();
                    c.push(d);
                    c
                })
            })
            .collect();
        all.extend(out.iter().cloned());
    }
    all
}

#[test]
fn cylinder_length_is_product_of_widths() {
    for spec in small_specs() {
        let k = spec.digit_count().unwrap_or(5) as u64;
        for b in blocks(k.min(5), 3) {
            let block = Block::new(b.clone()).unwrap();
            let product = b
                .iter()
                .fold(Rat::one(), |acc, &d| acc * spec.width_of(d).unwrap());
            assert_eq!(
                spec.cylinder(&block).unwrap().length(),
                product,
                "{} {block}",
                spec.name()
            );
        }
    }
}

#[test]
fn membership_matches_expansion_prefix() {
    let xs = farey_set(60);
    for spec in small_specs() {
        let k = spec.digit_count().unwrap_or(4) as u64;
        for b in blocks(k.min(4), 3) {
            let block = Block::new(b.clone()).unwrap();
            let cyl = spec.cylinder(&block).unwrap();
            for x in &xs {
                let e = spec.expand_rat(x, b.len()).unwrap();
                let prefix = !e.terminated && e.digits == b;
                assert_eq!(cyl.contains(x), prefix, "{} {block} {x}", spec.name());
            }
        }
    }
}

#[test]
fn preimage_preserves_measure_and_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in small_specs().into_iter().filter(GlsSpec::is_finite) {
        for _ in 0..40 {
            let target = random_interval(&mut rng);
            let pre = spec.preimage(&target).unwrap();
            let total = pre.iter().fold(Rat::zero(), |a, (_, i)| a + i.length());
            assert_eq!(total, target.length());
            for _ in 0..30 {
                let x = random_unit_rat(&mut rng, 97);
                let tx = spec.step(&UnitReal::exact(x.clone()).unwrap()).unwrap();
                let inside = pre.iter().any(|(_, i)| i.contains(&x));
                assert_eq!(inside, target.contains(tx.as_exact().unwrap()), "{x}");
            }
        }
    }
}

proptest! {
    #[test]
    fn step_then_expand_is_shifted_expansion(p in 0i64..1000, q in 1i64..1000, len in 1usize..12) {
        let x = r(p.min(q), q);
        for spec in [GlsSpec::b_adic(3).unwrap(), GlsSpec::lueroth_classic(), GlsSpec::lueroth_alternating()] {
            let e = spec.expand_rat(&x, len).unwrap();
            if let Ok(tx) = spec.step(&UnitReal::exact(x.clone()).unwrap()) {
                let rest = spec.expand(&tx, len - 1).unwrap();
                prop_assert_eq!(&e.digits[1..], &rest.digits[..]);
                prop_assert_eq!(e.terminated, rest.terminated);
            } else {
                prop_assert!(e.digits.is_empty() && e.terminated);
            }
        }
    }

    #[test]
    fn branch_inverse_round_trips(seed in any::<u64>(), p in 0i64..=200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_table(&mut rng, 5);
        let y = r(p, 200);
        for b in spec.branches().unwrap() {
            let x = b.inverse(&y);
            prop_assert_eq!(b.apply(&x), y.clone());
        }
    }

    #[test]
    fn random_tables_validate(seed in any::<u64>(), k in 2usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_table(&mut rng, k);
        let report = spec.validate().unwrap();
        prop_assert_eq!(report.branch_count, Some(k));
        let text = spec.to_table_text().unwrap();
        let back = GlsSpec::parse_table(&text).unwrap();
        prop_assert_eq!(back.branches(), spec.branches());
    }
}
