//! Exact classification of rational expansions as finite (the orbit reaches 0)
//! or eventually periodic (the orbit revisits a state).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gls::{Digit, GlsSpec};
use crate::rat::{fmt_rat, in_unit, Rat};

/// Orbit steps before a table spec is reported undecided.
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;
/// Largest number of fractions a survey may list.
pub const DEFAULT_SURVEY_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExpansionClass {
    /// The orbit reaches 0 after `digits.len()` steps.
    Finite { digits: Vec<Digit> },
    /// `preperiod` followed by `period` repeated forever; `period` is minimal.
    EventuallyPeriodic {
        preperiod: Vec<Digit>,
        period: Vec<Digit>,
    },
}

impl ExpansionClass {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExpansionClass::Finite { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExpansionClass::Finite { .. } => "finite",
            ExpansionClass::EventuallyPeriodic { .. } => "eventually-periodic",
        }
    }

    /// The first `len` digits implied by the classification (fewer for a
    /// finite expansion shorter than `len`).
    pub fn replay(&self, len: usize) -> Vec<Digit> {
        match self {
            ExpansionClass::Finite { digits } => digits.iter().take(len).copied().collect(),
            ExpansionClass::EventuallyPeriodic { preperiod, period } => preperiod
                .iter()
                .chain(period.iter().cycle())
                .take(len)
                .copied()
                .collect(),
        }
    }
}

impl ExpansionClass {
    /// Like [`Self::replay`], but continues a finite expansion with the digit
    /// of 0 when `spec` covers 0 (as b-adic specs do), matching
    /// [`GlsSpec::expand`].
    pub fn replay_for(&self, spec: &GlsSpec, len: usize) -> Result<Vec<Digit>> {
        let mut digits = self.replay(len);
        if self.is_finite() && spec.covers_zero() && digits.len() < len {
            let zero = spec.branch_at(&Rat::zero())?.digit;
            digits.resize(len, zero);
        }
        Ok(digits)
    }
}

/// Classifies `x` by exact iteration, with [`DEFAULT_MAX_STEPS`].
pub fn classify(spec: &GlsSpec, x: &Rat) -> Result<ExpansionClass> {
    classify_with_limit(spec, x, DEFAULT_MAX_STEPS)
}

/// Gives up with [`Error::Undecided`] after `max_steps` steps. The builtin
/// families never hit the limit in practice: their orbits keep the
/// denominator of `x`, so the state space is finite.
pub fn classify_with_limit(spec: &GlsSpec, x: &Rat, max_steps: u64) -> Result<ExpansionClass> {
    if !in_unit(x) {
        return Err(Error::OutOfUnitInterval(fmt_rat(x)));
    }
    let mut seen: HashMap<Rat, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut cur = x.clone();
    loop {
        if cur.is_zero() {
            return Ok(ExpansionClass::Finite { digits });
        }
        if let Some(&start) = seen.get(&cur) {
            let period = digits.split_off(start);
            return Ok(ExpansionClass::EventuallyPeriodic {
                preperiod: digits,
                period,
            });
        }
        if digits.len() as u64 >= max_steps {
            return Err(Error::Undecided(max_steps));
        }
        let b = spec.branch_at(&cur)?;
        let next = b.apply(&cur);
        seen.insert(cur, digits.len());
        digits.push(b.digit);
        cur = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyRow {
    pub k: u32,
    pub numerator: BigInt,
    pub denominator: BigInt,
    pub class: ExpansionClass,
}

impl SurveyRow {
    /// `fraction,class,length_or_preperiod,period`; periods render as
    /// dash-separated digits.
    pub fn csv_line(&self) -> String {
        let (len, period) = match &self.class {
            ExpansionClass::Finite { digits } => (digits.len(), String::new()),
            ExpansionClass::EventuallyPeriodic { preperiod, period } => (
                preperiod.len(),
                period
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("-"),
            ),
        };
        format!(
            "{}/{},{},{},{}",
            self.numerator,
            self.denominator,
            self.class.name(),
            len,
            period
        )
    }
}

pub const SURVEY_CSV_HEADER: &str = "fraction,class,length_or_preperiod,period";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveySummary {
    pub spec: String,
    pub base: u64,
    pub k_max: u32,
    pub fractions: u64,
    pub finite: u64,
    pub periodic: u64,
    pub max_finite_length: usize,
    /// Eventually periodic fractions, as `a/p^k`.
    pub exceptions: Vec<String>,
    /// Every fraction up to `k_max` was classified; this is a finite check,
    /// not a proof for larger `k`.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survey {
    pub rows: Vec<SurveyRow>,
    pub summary: SurveySummary,
}

impl Survey {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SURVEY_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.csv_line());
            out.push('\n');
        }
        out
    }
}

/// Classifies `a / p^k` for `1 <= a < p^k`, `1 <= k <= k_max`, ordered by
/// `(k, a)`. With `include_all_numerators` every numerator is listed (values
/// seen at a smaller `k` reuse their classification); otherwise only `a` not
/// divisible by `p`, i.e. fractions new at level `k`.
pub fn survey_family(
    spec: &GlsSpec,
    p: u64,
    k_max: u32,
    include_all_numerators: bool,
) -> Result<Survey> {
    survey_family_with_cap(spec, p, k_max, include_all_numerators, DEFAULT_SURVEY_CAP)
}

pub fn survey_family_with_cap(
    spec: &GlsSpec,
    p: u64,
    k_max: u32,
    include_all_numerators: bool,
    cap: u64,
) -> Result<Survey> {
    if p < 2 {
        return Err(Error::InvalidParameter("base must be at least 2".into()));
    }
    if k_max < 1 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let pb = BigInt::from(p);
    let listed: BigInt = (1..=k_max)
        .map(|k| {
            let q: BigInt = Pow::pow(&pb, k);
            if include_all_numerators {
                q - 1
            } else {
                // a in [1, p^k) with p not dividing a
                &q - 1 - (&q / &pb - 1)
            }
        })
        .sum();
    if listed > BigInt::from(cap) {
        return Err(Error::CapExceeded {
            what: "fractions in a survey",
            cap,
        });
    }

    // Distinct values are exactly the a / p^k with p not dividing a.
    let mut fresh: Vec<(u32, BigInt, BigInt)> = Vec::new();
    for k in 1..=k_max {
        let q: BigInt = Pow::pow(&pb, k);
        let mut a = BigInt::one();
        while a < q {
            if !a.is_multiple_of(&pb) {
                fresh.push((k, a.clone(), q.clone()));
            }
            a += 1;
        }
    }
    let classes: Vec<ExpansionClass> = fresh
        .par_iter()
        .map(|(_, a, q)| classify(spec, &Rat::new(a.clone(), q.clone())))
        .collect::<Result<_>>()?;

    let rows: Vec<SurveyRow> = if include_all_numerators {
        let by_value: HashMap<Rat, &ExpansionClass> = fresh
            .iter()
            .zip(&classes)
            .map(|((_, a, q), c)| (Rat::new(a.clone(), q.clone()), c))
            .collect();
        let mut rows = Vec::new();
        for k in 1..=k_max {
            let q: BigInt = Pow::pow(&pb, k);
            let mut a = BigInt::one();
            while a < q {
                let class = by_value[&Rat::new(a.clone(), q.clone())].clone();
                rows.push(SurveyRow {
                    k,
                    numerator: a.clone(),
                    denominator: q.clone(),
                    class,
                });
                a += 1;
            }
        }
        rows
    } else {
        fresh
            .into_iter()
            .zip(classes)
            .map(|((k, a, q), class)| SurveyRow {
                k,
                numerator: a,
                denominator: q,
                class,
            })
            .collect()
    };

    let finite = rows.iter().filter(|r| r.class.is_finite()).count() as u64;
    let max_finite_length = rows
        .iter()
        .filter_map(|r| match &r.class {
            ExpansionClass::Finite { digits } => Some(digits.len()),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let exceptions = rows
        .iter()
        .filter(|r| !r.class.is_finite())
        .map(|r| format!("{}/{}", r.numerator, r.denominator))
        .collect();
    let summary = SurveySummary {
        spec: spec.name().to_string(),
        base: p,
        k_max,
        fractions: rows.len() as u64,
        finite,
        periodic: rows.len() as u64 - finite,
        max_finite_length,
        exceptions,
        complete: true,
    };
    Ok(Survey { rows, summary })
}
