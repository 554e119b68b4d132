use glsnormal::constructor::{horizon, verify_schedule, DEFAULT_N_CAP};
use glsnormal::rational::classify;
use glsnormal::{
    choose_cutoffs, extreme_discrepancy, z_digits, CutoffSchedule, CutoffSearch, Error, GlsSpec,
    PointSeq, PointSet, Rat, UnitReal,
};
use num_bigint::BigInt;
use proptest::prelude::*;

/// `T^i a_j` if the orbit of `a_j` survives `i` steps.
fn iterate(spec: &GlsSpec, x: &Rat, i: usize) -> Option<Rat> {
    let mut cur = UnitReal::exact(x.clone()).unwrap();
    for _ in 0..i {
        cur = spec.step(&cur).ok()?;
    }
    Some(cur.as_exact().unwrap().clone())
}

/// Batch discrepancy, recomputed from scratch for every `n`; independent of
/// the incremental multiset and the skip certification used by the search.
fn oracle(points: Vec<Rat>) -> Rat {
    extreme_discrepancy(&PointSet::new(points).unwrap())
}

/// Replays the window condition for every `n` separately.
fn replay(spec: &GlsSpec, seq: &PointSeq, s: &CutoffSchedule) {
    let c = s.cutoffs();
    let a = seq
        .exact_prefix(*s.verified_to().iter().max().unwrap())
        .unwrap();
    for level in 1..c.len() {
        let theta = Rat::new(BigInt::from(1), BigInt::from(level));
        for i in 0..level {
            for n in c[level]..=s.verified_to()[level] {
                let row: Vec<Rat> = (c[i] + 1..=n)
                    .filter_map(|j| iterate(spec, &a[j as usize - 1], i))
                    .collect();
                assert!(!row.is_empty());
                assert!(oracle(row) < theta, "level {level} row {i} n {n}");
            }
        }
        // minimality: the previous candidate fails somewhere in its own window
        let prev = c[level] - 1;
        if prev > c[level - 1] {
            let end = (4 * prev).max(prev);
            let fails = (0..level).any(|i| {
                (prev..=end).any(|n| {
                    let row: Vec<Rat> = (c[i] + 1..=n)
                        .filter_map(|j| iterate(spec, &seq.exact_element(j).unwrap(), i))
                        .collect();
                    row.is_empty() || oracle(row) >= theta
                })
            });
            assert!(fails, "cutoff {level} is not minimal");
        }
    }
}

#[test]
fn binary_schedule_replays_and_is_minimal() {
    let spec = GlsSpec::b_adic(2).unwrap();
    let seq = PointSeq::van_der_corput(2).unwrap();
    let s = choose_cutoffs(&spec, &seq, 4, horizon(4), DEFAULT_N_CAP).unwrap();
    assert_eq!(s.cutoffs(), &[0, 2, 8, 28, 88]);
    replay(&spec, &seq, &s);
    verify_schedule(&spec, &seq, &s).unwrap();
}

#[test]
fn lueroth_schedule_replays_and_is_minimal() {
    let spec = GlsSpec::lueroth_classic();
    let seq = PointSeq::van_der_corput(2).unwrap();
    let s = choose_cutoffs(&spec, &seq, 4, horizon(4), DEFAULT_N_CAP).unwrap();
    replay(&spec, &seq, &s);
}

#[test]
fn incremental_levels_match_one_shot() {
    let spec = GlsSpec::b_adic(3).unwrap();
    let seq = PointSeq::farey();
    let one = choose_cutoffs(&spec, &seq, 4, horizon(2), DEFAULT_N_CAP).unwrap();
    let mut search = CutoffSearch::new(&spec, &seq, horizon(2), DEFAULT_N_CAP).unwrap();
    for _ in 0..4 {
        search.next_level().unwrap();
    }
    assert_eq!(search.schedule(), one);
    replay(&spec, &seq, &one);
}

#[test]
fn kronecker_schedule_verifies() {
    let spec = GlsSpec::b_adic(2).unwrap();
    let seq = PointSeq::parse_id("kronecker:sqrt2").unwrap();
    let s = choose_cutoffs(&spec, &seq, 4, horizon(2), DEFAULT_N_CAP).unwrap();
    verify_schedule(&spec, &seq, &s).unwrap();
}

#[test]
fn tampered_schedule_is_rejected() {
    let spec = GlsSpec::b_adic(2).unwrap();
    let seq = PointSeq::van_der_corput(2).unwrap();
    let bad = CutoffSchedule::new(vec![0, 2, 5], horizon(4), vec![0, 8, 20]).unwrap();
    assert!(matches!(
        verify_schedule(&spec, &seq, &bad),
        Err(Error::ScheduleRejected { level: 2, .. })
    ));
}

#[test]
fn digits_agree_with_cells() {
    for spec in [GlsSpec::b_adic(2).unwrap(), GlsSpec::lueroth_classic()] {
        let seq = PointSeq::van_der_corput(2).unwrap();
        let s = choose_cutoffs(&spec, &seq, 5, horizon(4), DEFAULT_N_CAP).unwrap();
        let count = 300;
        let z = z_digits(&spec, &seq, &s, count).unwrap();
        for (m, d) in z.digits.iter().enumerate() {
            let (i, j) = s
                .position_to_cell_skipping(&z.skipped_columns, m as u64)
                .unwrap();
            let a = seq.exact_element(j).unwrap();
            let e = spec.expand_rat(&a, s.l_of(j).unwrap()).unwrap();
            assert!(!e.terminated);
            assert_eq!(e.digits[i], *d, "m = {m}");
        }
        for &j in &z.skipped_columns {
            let a = seq.exact_element(j).unwrap();
            let class = classify(&spec, &a).unwrap();
            assert!(class.is_finite());
            assert!(spec.expand_rat(&a, s.l_of(j).unwrap()).unwrap().terminated);
        }
    }
}

#[test]
fn extension_reaches_requested_digits() {
    let spec = GlsSpec::lueroth_classic();
    let seq = PointSeq::van_der_corput(2).unwrap();
    let mut search = CutoffSearch::new(&spec, &seq, horizon(4), DEFAULT_N_CAP).unwrap();
    let s = search.extend_to_digits(2_000).unwrap();
    let z = z_digits(&spec, &seq, &s, 2_000).unwrap();
    assert_eq!(z.digits.len(), 2_000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prefix_property(n in 0usize..107) {
        let spec = GlsSpec::b_adic(2).unwrap();
        let seq = PointSeq::van_der_corput(3).unwrap();
        let s = CutoffSchedule::from_cutoffs(vec![0, 3, 10, 40]).unwrap();
        let long = z_digits(&spec, &seq, &s, n + 1).unwrap();
        let short = z_digits(&spec, &seq, &s, n).unwrap();
        prop_assert_eq!(&long.digits[..n], &short.digits[..]);
    }

    #[test]
    fn schedule_text_round_trips(steps in prop::collection::vec(1u64..1000, 1..12), h in 1u64..9) {
        let mut c = vec![0];
        for s in steps {
            c.push(c.last().unwrap() + s);
        }
        let v: Vec<u64> = c.iter().map(|x| x * h).collect();
        let s = CutoffSchedule::new(c, horizon(h), v).unwrap();
        let (back, header) = CutoffSchedule::parse_text(&s.to_text("lueroth-classic", "farey@2")).unwrap();
        prop_assert_eq!(back, s);
        prop_assert_eq!(header.seq, "farey@2");
    }
}
