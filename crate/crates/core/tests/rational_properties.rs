use glsnormal::rational::{classify, survey_family, ExpansionClass};
use glsnormal::{GlsSpec, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn r(p: u64, q: u64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Smallest `p` with `period` equal to itself rotated by `p`.
fn minimal_period(period: &[u64]) -> usize {
    (1..=period.len())
        .find(|&p| {
            period.len().is_multiple_of(p)
                && (0..period.len()).all(|i| period[i] == period[(i + p) % period.len()])
        })
        .unwrap()
}

fn check_replay(spec: &GlsSpec, x: &Rat, class: &ExpansionClass) {
    let len = match class {
        ExpansionClass::Finite { digits } => digits.len() + 3,
        ExpansionClass::EventuallyPeriodic { preperiod, period } => {
            preperiod.len() + 3 * period.len()
        }
    };
    let e = spec.expand_rat(x, len).unwrap();
    assert_eq!(e.digits, class.replay_for(spec, len).unwrap(), "{x}");
    assert_eq!(
        e.terminated,
        class.is_finite() && !spec.covers_zero(),
        "{x}"
    );
}

proptest! {
    #[test]
    fn classification_replays(q in 1u64..400, p in 0u64..400) {
        let x = r(p % (q + 1), q);
        for spec in [GlsSpec::lueroth_classic(), GlsSpec::lueroth_alternating(), GlsSpec::b_adic(2).unwrap(), GlsSpec::b_adic(6).unwrap()] {
            let class = classify(&spec, &x).unwrap();
            check_replay(&spec, &x, &class);
            if let ExpansionClass::EventuallyPeriodic { period, .. } = &class {
                prop_assert_eq!(minimal_period(period), period.len());
            }
        }
    }

    #[test]
    fn lueroth_orbits_keep_the_denominator(q in 2u64..2000, p in 1u64..2000) {
        let x = r(p % q, q);
        let spec = GlsSpec::lueroth_classic();
        let mut cur = x.clone();
        for _ in 0..50 {
            let Ok(b) = spec.branch_at(&cur) else { break };
            cur = b.apply(&cur);
            prop_assert!(BigInt::from(q).is_multiple_of(cur.denom()));
        }
    }
}

#[test]
fn dyadic_fractions_are_finite_in_binary_and_lueroth() {
    for spec in [GlsSpec::lueroth_classic(), GlsSpec::b_adic(2).unwrap()] {
        let s = survey_family(&spec, 2, 8, true).unwrap();
        assert_eq!(s.summary.periodic, 0);
        assert_eq!(
            s.summary.fractions,
            (1..=8).map(|k| (1u64 << k) - 1).sum::<u64>()
        );
    }
}

#[test]
fn ternary_in_binary_is_periodic() {
    let s = survey_family(&GlsSpec::b_adic(2).unwrap(), 3, 2, false).unwrap();
    assert_eq!(s.summary.finite, 0);
    assert_eq!(
        s.summary.exceptions,
        vec!["1/3", "2/3", "1/9", "2/9", "4/9", "5/9", "7/9", "8/9"]
    );
}
