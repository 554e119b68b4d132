//! Generalized Lüroth Series: digit-labelled partitions of `[0, 1]` whose
//! branches map affinely onto `[0, 1]`.
//!
//! Every branch is the half-open interval `[left, right)`; the branch ending
//! at 1 also contains 1. The Lüroth families cover `(0, 1]` only, so 0 is a
//! terminal point at which expansions stop.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, in_unit, parse_rat, rat, Rat};
use crate::real::UnitReal;

/// Digits are positive integers; the b-adic digit `k + 1` stands for the
/// conventional digit `k`.
pub type Digit = u64;

/// Number of partial sums checked by the telescoping certificate of the
/// infinite families.
pub const TELESCOPING_TERMS: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Increasing,
    Decreasing,
}

impl Orientation {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "increasing" | "inc" | "+" => Some(Orientation::Increasing),
            "decreasing" | "dec" | "-" => Some(Orientation::Decreasing),
            _ => None,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Increasing => "increasing",
            Orientation::Decreasing => "decreasing",
        })
    }
}

/// One digit's interval `[left, right)` together with the orientation of its
/// affine map onto `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub digit: Digit,
    pub left: Rat,
    pub right: Rat,
    pub orientation: Orientation,
}

impl Branch {
    pub fn new(digit: Digit, left: Rat, right: Rat, orientation: Orientation) -> Result<Self> {
        let b = Branch {
            digit,
            left,
            right,
            orientation,
        };
        match b.shape_issue() {
            Some(issue) => Err(Error::InvalidSpec(vec![issue])),
            None => Ok(b),
        }
    }

    fn shape_issue(&self) -> Option<SpecIssue> {
        if self.digit == 0 {
            Some(SpecIssue::DigitZero)
        } else if !in_unit(&self.left) || !in_unit(&self.right) {
            Some(SpecIssue::OutOfRange(self.digit))
        } else if self.left == self.right {
            Some(SpecIssue::ZeroLength(self.digit))
        } else if self.left > self.right {
            Some(SpecIssue::Reversed(self.digit))
        } else {
            None
        }
    }

    pub fn width(&self) -> Rat {
        &self.right - &self.left
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.left <= x && (x < &self.right || (x == &self.right && self.right.is_one()))
    }

    /// The branch map `T_d`.
    pub fn apply(&self, x: &Rat) -> Rat {
        let t = (x - &self.left) / self.width();
        match self.orientation {
            Orientation::Increasing => t,
            Orientation::Decreasing => Rat::one() - t,
        }
    }

    /// The point of the branch that `T_d` maps to `y`.
    pub fn inverse(&self, y: &Rat) -> Rat {
        match self.orientation {
            Orientation::Increasing => &self.left + self.width() * y,
            Orientation::Decreasing => &self.right - self.width() * y,
        }
    }

    /// `{x in I_d : T_d(x) in target}`, or `None` if empty.
    pub fn pull_back(&self, target: &Interval) -> Option<Interval> {
        let w = self.width();
        let (left, left_closed, right, mut right_closed) = match self.orientation {
            Orientation::Increasing => (
                &self.left + &w * &target.left,
                target.left_closed,
                &self.left + &w * &target.right,
                target.right_closed,
            ),
            Orientation::Decreasing => (
                &self.right - &w * &target.right,
                target.right_closed,
                &self.right - &w * &target.left,
                target.left_closed,
            ),
        };
        if right == self.right && !self.right.is_one() {
            right_closed = false;
        }
        Interval::new(left, right, left_closed, right_closed)
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}, {}{} {}",
            self.digit,
            fmt_rat(&self.left),
            fmt_rat(&self.right),
            if self.right.is_one() { "]" } else { ")" },
            self.orientation
        )
    }
}

/// A sub-interval of `[0, 1]` with explicit endpoint membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub left: Rat,
    pub right: Rat,
    pub left_closed: bool,
    pub right_closed: bool,
}

impl Interval {
    /// Returns `None` for empty intervals.
    pub fn new(left: Rat, right: Rat, left_closed: bool, right_closed: bool) -> Option<Self> {
        if left > right || (left == right && !(left_closed && right_closed)) {
            return None;
        }
        Some(Interval {
            left,
            right,
            left_closed,
            right_closed,
        })
    }

    pub fn closed(left: Rat, right: Rat) -> Option<Self> {
        Self::new(left, right, true, true)
    }

    pub fn unit() -> Self {
        Interval {
            left: Rat::zero(),
            right: Rat::one(),
            left_closed: true,
            right_closed: true,
        }
    }

    pub fn length(&self) -> Rat {
        &self.right - &self.left
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let above = if self.left_closed {
            &self.left <= x
        } else {
            &self.left < x
        };
        let below = if self.right_closed {
            x <= &self.right
        } else {
            x < &self.right
        };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.left_closed { '[' } else { '(' },
            fmt_rat(&self.left),
            fmt_rat(&self.right),
            if self.right_closed { ']' } else { ')' }
        )
    }
}

/// A finite non-empty digit block `(b_1, ..., b_r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(Vec<Digit>);

impl Block {
    pub fn new(digits: Vec<Digit>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::InvalidParameter("empty block".into()));
        }
        if digits.contains(&0) {
            return Err(Error::InvalidDigit(0));
        }
        Ok(Block(digits))
    }

    pub fn digits(&self) -> &[Digit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("-"))
    }
}

/// Problems found while validating a branch table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecIssue {
    Empty,
    DigitZero,
    DuplicateDigit(Digit),
    OutOfRange(Digit),
    ZeroLength(Digit),
    Reversed(Digit),
    Overlap { first: Digit, second: Digit },
    Gap { from: Rat, to: Rat },
    LengthSum(Rat),
    Malformed { line: usize, reason: String },
}

impl fmt::Display for SpecIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecIssue::Empty => f.write_str("no branches"),
            SpecIssue::DigitZero => f.write_str("digit 0 is not allowed (digits start at 1)"),
            SpecIssue::DuplicateDigit(d) => write!(f, "digit {d} appears more than once"),
            SpecIssue::OutOfRange(d) => write!(f, "branch {d} leaves [0, 1]"),
            SpecIssue::ZeroLength(d) => write!(f, "branch {d} has zero length"),
            SpecIssue::Reversed(d) => write!(f, "branch {d} has left > right"),
            SpecIssue::Overlap { first, second } => {
                write!(f, "overlap: branches {first} and {second} intersect")
            }
            SpecIssue::Gap { from, to } => {
                write!(
                    f,
                    "gap: [{}, {}) is not covered",
                    fmt_rat(from),
                    fmt_rat(to)
                )
            }
            SpecIssue::LengthSum(s) => write!(f, "branch lengths sum to {}, not 1", fmt_rat(s)),
            SpecIssue::Malformed { line, reason } => write!(f, "line {line}: {reason}"),
        }
    }
}

/// Builtin families with infinitely many digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Branch `n` is `[1/(n+1), 1/n)`, increasing: `T(x) = n(n+1)x - n`.
    LuerothClassic,
    /// Same intervals, all decreasing.
    LuerothAlternating,
}

impl Family {
    fn orientation(self) -> Orientation {
        match self {
            Family::LuerothClassic => Orientation::Increasing,
            Family::LuerothAlternating => Orientation::Decreasing,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Family::LuerothClassic => "lueroth-classic",
            Family::LuerothAlternating => "lueroth-alternating",
        }
    }

    fn branch(self, d: Digit) -> Result<Branch> {
        if d == 0 {
            return Err(Error::InvalidDigit(0));
        }
        let d = BigInt::from(d);
        Ok(Branch {
            digit: d.to_u64().unwrap_or_default(),
            left: Rat::new(BigInt::one(), &d + 1u32),
            right: Rat::new(BigInt::one(), d),
            orientation: self.orientation(),
        })
    }

    /// Digit of `x` in `(0, 1]`: `n = floor(1/x)`, moved down by one when
    /// `x = 1/n` sits on a left endpoint.
    fn digit_at(self, x: &Rat) -> Result<Digit> {
        if !x.is_positive() {
            return Err(Error::Terminal(x.clone()));
        }
        let inv = x.recip();
        let n = inv.floor().to_integer();
        let d = if inv.is_integer() && n > BigInt::one() {
            n - 1u32
        } else {
            n
        };
        d.to_u64().ok_or(Error::CapExceeded {
            what: "digit size",
            cap: u64::MAX,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    /// Sorted by left endpoint.
    Table(Vec<Branch>),
    Family(Family),
}

/// A validated Generalized Lüroth Series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlsSpec {
    kind: Kind,
    name: String,
}

/// Result of [`GlsSpec::expand`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub digits: Vec<Digit>,
    /// The orbit reached a terminal point before the requested length.
    pub terminated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LengthCertificate {
    /// Exact sum over a finite table.
    Exact(Rat),
    /// Partial sums `1 - 1/(N+1)` verified exactly for `N <= checked_terms`.
    Telescoping { checked_terms: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub name: String,
    pub branch_count: Option<usize>,
    pub length_sum: LengthCertificate,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "spec: {}", self.name)?;
        match self.branch_count {
            Some(n) => writeln!(f, "branches: {n}")?,
            None => writeln!(f, "branches: infinite")?,
        }
        writeln!(f, "disjoint: ok")?;
        writeln!(f, "coverage: ok")?;
        writeln!(f, "affine maps: ok")?;
        match &self.length_sum {
            LengthCertificate::Exact(s) => writeln!(f, "length sum: {} (exact)", fmt_rat(s)),
            LengthCertificate::Telescoping { checked_terms } => writeln!(
                f,
                "length sum: 1 (symbolic: sum 1/(n(n+1)) telescopes to 1 - 1/(N+1); \
                 checked exactly for N <= {checked_terms})"
            ),
        }
    }
}

/// Builtin constructor by family name: `b-adic` (with base), `lueroth-classic`,
/// `lueroth-alternating`. `custom` needs an explicit table, see
/// [`GlsSpec::from_branches`].
pub fn builtin_spec(name: &str, param: Option<u64>) -> Result<GlsSpec> {
    match (name, param) {
        ("b-adic", Some(b)) => GlsSpec::b_adic(b),
        ("b-adic", None) => Err(Error::InvalidParameter("b-adic needs a base".into())),
        ("lueroth-classic", None) => Ok(GlsSpec::lueroth_classic()),
        ("lueroth-alternating", None) => Ok(GlsSpec::lueroth_alternating()),
        ("lueroth-classic" | "lueroth-alternating", Some(_)) => Err(Error::InvalidParameter(
            format!("{name} takes no parameter"),
        )),
        ("custom", _) => Err(Error::InvalidParameter(
            "custom specs need an explicit branch table".into(),
        )),
        _ => Err(Error::UnknownFamily(name.to_string())),
    }
}

impl GlsSpec {
    pub fn b_adic(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidParameter(format!(
                "b-adic base must be at least 2, got {base}"
            )));
        }
        let b =
            i64::try_from(base).map_err(|_| Error::InvalidParameter("base too large".into()))?;
        let branches = (0..b)
            .map(|k| Branch {
                digit: (k + 1) as Digit,
                left: rat(k, b),
                right: rat(k + 1, b),
                orientation: Orientation::Increasing,
            })
            .collect();
        Ok(GlsSpec {
            kind: Kind::Table(branches),
            name: format!("b-adic:{base}"),
        })
    }

    pub fn lueroth_classic() -> Self {
        GlsSpec {
            kind: Kind::Family(Family::LuerothClassic),
            name: Family::LuerothClassic.name().into(),
        }
    }

    pub fn lueroth_alternating() -> Self {
        GlsSpec {
            kind: Kind::Family(Family::LuerothAlternating),
            name: Family::LuerothAlternating.name().into(),
        }
    }

    /// Validates and wraps a custom branch table.
    pub fn from_branches(branches: Vec<Branch>) -> Result<Self> {
        Self::from_branches_named(branches, "custom")
    }

    fn from_branches_named(mut branches: Vec<Branch>, name: &str) -> Result<Self> {
        branches.sort_by(|a, b| a.left.cmp(&b.left).then(a.right.cmp(&b.right)));
        validate_table(&branches)?;
        Ok(GlsSpec {
            kind: Kind::Table(branches),
            name: name.to_string(),
        })
    }

    /// Parses the text table format: one `digit left right orientation` per
    /// line, endpoints as `p/q`; `#` starts a comment.
    pub fn parse_table(text: &str) -> Result<Self> {
        Self::from_branches_named(parse_branches(text)?, "custom")
    }

    pub fn load_table(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let branches = parse_branches(&text)?;
        Self::from_branches_named(branches, &format!("custom:{}", path.display()))
    }

    /// `b-adic:B`, `lueroth-classic`, `lueroth-alternating` or `custom:PATH`.
    pub fn parse_id(id: &str) -> Result<Self> {
        if let Some(path) = id.strip_prefix("custom:") {
            return Self::load_table(Path::new(path));
        }
        let (name, param) = match id.split_once(':') {
            Some((n, p)) => {
                let p = p
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad parameter in {id:?}")))?;
                (n, Some(p))
            }
            None => (id, None),
        };
        builtin_spec(name, param)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, Kind::Table(_))
    }

    /// The branch table of a finite spec, sorted by left endpoint.
    pub fn branches(&self) -> Option<&[Branch]> {
        match &self.kind {
            Kind::Table(b) => Some(b),
            Kind::Family(_) => None,
        }
    }

    pub fn digit_count(&self) -> Option<usize> {
        self.branches().map(<[Branch]>::len)
    }

    /// Whether 0 lies in some branch; otherwise 0 is terminal.
    pub fn covers_zero(&self) -> bool {
        self.is_finite()
    }

    pub fn branch_of(&self, digit: Digit) -> Result<Branch> {
        match &self.kind {
            Kind::Table(bs) => bs
                .iter()
                .find(|b| b.digit == digit)
                .cloned()
                .ok_or(Error::InvalidDigit(digit)),
            Kind::Family(f) => f.branch(digit),
        }
    }

    pub fn width_of(&self, digit: Digit) -> Result<Rat> {
        Ok(self.branch_of(digit)?.width())
    }

    /// The `k` digits with the longest intervals, ties broken by digit value.
    pub fn digits_by_mass(&self, k: usize) -> Vec<Digit> {
        match &self.kind {
            Kind::Table(bs) => {
                let mut v: Vec<&Branch> = bs.iter().collect();
                v.sort_by(|a, b| b.width().cmp(&a.width()).then(a.digit.cmp(&b.digit)));
                v.into_iter().take(k).map(|b| b.digit).collect()
            }
            Kind::Family(_) => (1..=k as Digit).collect(),
        }
    }

    /// Branch containing an exact point, or [`Error::Terminal`].
    pub fn branch_at(&self, x: &Rat) -> Result<Branch> {
        if !in_unit(x) {
            return Err(Error::OutOfUnitInterval(fmt_rat(x)));
        }
        match &self.kind {
            Kind::Table(bs) => {
                let i = bs.partition_point(|b| &b.left <= x);
                i.checked_sub(1)
                    .map(|i| &bs[i])
                    .filter(|b| b.contains(x))
                    .cloned()
                    .ok_or_else(|| Error::Terminal(x.clone()))
            }
            Kind::Family(f) => f.branch(f.digit_at(x)?),
        }
    }

    /// Branch containing the whole closed range `[lo, hi]`, if any.
    fn branch_for_range(&self, lo: &Rat, hi: &Rat) -> Option<Branch> {
        if lo.is_negative() || hi > &Rat::one() {
            return None;
        }
        self.branch_at(lo).ok().filter(|b| b.contains(hi))
    }

    /// Resolves the branch of `x`, refining approximate points as needed.
    /// Returns the point at the precision that resolved it.
    pub fn resolve(&self, x: &UnitReal) -> Result<(Branch, UnitReal)> {
        match x {
            UnitReal::Exact(r) => Ok((self.branch_at(r)?, x.clone())),
            UnitReal::Approx(a) => {
                let mut cur = a.clone();
                loop {
                    let (lo, hi) = cur.enclosure();
                    if let Some(b) = self.branch_for_range(&lo, &hi) {
                        return Ok((b, UnitReal::Approx(cur)));
                    }
                    cur = cur
                        .refined()
                        .ok_or(Error::PrecisionExhausted { bits: cur.bits() })?;
                }
            }
        }
    }

    /// The digit `d` with `x` in `I_d`.
    pub fn digit_of(&self, x: &UnitReal) -> Result<Digit> {
        Ok(self.resolve(x)?.0.digit)
    }

    /// `T(x)`; exact in, exact out.
    pub fn step(&self, x: &UnitReal) -> Result<UnitReal> {
        Ok(self.step_resolved(x)?.1)
    }

    /// Digit of `x` and `T(x)` together.
    pub fn step_resolved(&self, x: &UnitReal) -> Result<(Digit, UnitReal)> {
        let (b, x) = self.resolve(x)?;
        let next = match &x {
            UnitReal::Exact(r) => UnitReal::Exact(b.apply(r)),
            UnitReal::Approx(a) => UnitReal::Approx(a.affine_image(
                &b.left,
                &b.width(),
                b.orientation == Orientation::Decreasing,
            )),
        };
        Ok((b.digit, next))
    }

    /// The first `len` digits of `x`; shorter, with `terminated` set, when the
    /// orbit reaches a terminal point first.
    pub fn expand(&self, x: &UnitReal, len: usize) -> Result<Expansion> {
        let mut digits = Vec::with_capacity(len);
        let mut cur = x.clone();
        while digits.len() < len {
            match self.step_resolved(&cur) {
                Ok((d, next)) => {
                    digits.push(d);
                    cur = next;
                }
                Err(Error::Terminal(_)) => {
                    return Ok(Expansion {
                        digits,
                        terminated: true,
                    })
                }
                Err(e) => return Err(e),
            }
        }
        Ok(Expansion {
            digits,
            terminated: false,
        })
    }

    pub fn expand_rat(&self, x: &Rat, len: usize) -> Result<Expansion> {
        self.expand(&UnitReal::exact(x.clone())?, len)
    }

    /// The set of points whose expansion starts with `block`.
    pub fn cylinder(&self, block: &Block) -> Result<Interval> {
        let mut acc = Interval::unit();
        for &d in block.digits().iter().rev() {
            let b = self.branch_of(d)?;
            acc = b
                .pull_back(&acc)
                .expect("pull-back of a positive-length interval is non-empty");
        }
        Ok(acc)
    }

    /// Preimage `T^{-1}(target)` as one interval per branch it meets.
    /// Only defined for finite tables.
    pub fn preimage(&self, target: &Interval) -> Result<Vec<(Digit, Interval)>> {
        let bs = self.branches().ok_or_else(|| {
            Error::InvalidParameter("preimage requires a finite branch table".into())
        })?;
        Ok(bs
            .iter()
            .filter_map(|b| b.pull_back(target).map(|i| (b.digit, i)))
            .collect())
    }

    /// Checks disjointness, coverage, the exact length sum and the affine form
    /// of every branch.
    pub fn validate(&self) -> Result<ValidationReport> {
        match &self.kind {
            Kind::Table(bs) => {
                let sum = validate_table(bs)?;
                Ok(ValidationReport {
                    name: self.name.clone(),
                    branch_count: Some(bs.len()),
                    length_sum: LengthCertificate::Exact(sum),
                })
            }
            Kind::Family(f) => {
                check_family(*f, TELESCOPING_TERMS)?;
                Ok(ValidationReport {
                    name: self.name.clone(),
                    branch_count: None,
                    length_sum: LengthCertificate::Telescoping {
                        checked_terms: TELESCOPING_TERMS,
                    },
                })
            }
        }
    }

    /// Renders a finite table in the text format accepted by [`Self::parse_table`].
    pub fn to_table_text(&self) -> Option<String> {
        self.branches().map(|bs| {
            bs.iter()
                .map(|b| {
                    format!(
                        "{} {} {} {}\n",
                        b.digit,
                        fmt_rat(&b.left),
                        fmt_rat(&b.right),
                        b.orientation
                    )
                })
                .collect()
        })
    }
}

fn affine_ok(b: &Branch) -> bool {
    let (at_left, at_right) = match b.orientation {
        Orientation::Increasing => (Rat::zero(), Rat::one()),
        Orientation::Decreasing => (Rat::one(), Rat::zero()),
    };
    b.apply(&b.left) == at_left && b.apply(&b.right) == at_right
}

/// Validates a table sorted by left endpoint and returns its length sum.
fn validate_table(bs: &[Branch]) -> Result<Rat> {
    let mut issues = Vec::new();
    if bs.is_empty() {
        return Err(Error::InvalidSpec(vec![SpecIssue::Empty]));
    }
    let mut seen = std::collections::BTreeSet::new();
    for b in bs {
        if let Some(issue) = b.shape_issue() {
            issues.push(issue);
        }
        if !seen.insert(b.digit) {
            issues.push(SpecIssue::DuplicateDigit(b.digit));
        }
    }
    if !issues.is_empty() {
        return Err(Error::InvalidSpec(issues));
    }
    if !bs[0].left.is_zero() {
        issues.push(SpecIssue::Gap {
            from: Rat::zero(),
            to: bs[0].left.clone(),
        });
    }
    for pair in bs.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.left < a.right {
            issues.push(SpecIssue::Overlap {
                first: a.digit,
                second: b.digit,
            });
        } else if b.left > a.right {
            issues.push(SpecIssue::Gap {
                from: a.right.clone(),
                to: b.left.clone(),
            });
        }
    }
    let last = &bs[bs.len() - 1];
    if !last.right.is_one() {
        issues.push(SpecIssue::Gap {
            from: last.right.clone(),
            to: Rat::one(),
        });
    }
    let sum: Rat = bs.iter().map(Branch::width).sum();
    if !sum.is_one() {
        issues.push(SpecIssue::LengthSum(sum.clone()));
    }
    debug_assert!(bs.iter().all(affine_ok));
    if issues.is_empty() {
        Ok(sum)
    } else {
        Err(Error::InvalidSpec(issues))
    }
}

/// Telescoping certificate: adjacent branches, right end 1, and partial sums
/// `sum_{n<=N} 1/(n(n+1)) = 1 - 1/(N+1)` for every `N <= terms`.
fn check_family(f: Family, terms: u64) -> Result<()> {
    let mut partial = Rat::zero();
    let mut prev: Option<Branch> = None;
    for n in 1..=terms {
        let b = f.branch(n)?;
        if n == 1 && !b.right.is_one() {
            return Err(Error::InvalidSpec(vec![SpecIssue::Gap {
                from: b.right.clone(),
                to: Rat::one(),
            }]));
        }
        if let Some(p) = &prev {
            if p.left != b.right {
                return Err(Error::InvalidSpec(vec![SpecIssue::Gap {
                    from: b.right.clone(),
                    to: p.left.clone(),
                }]));
            }
        }
        if !affine_ok(&b) {
            return Err(Error::InvalidSpec(vec![SpecIssue::Malformed {
                line: n as usize,
                reason: "branch map does not send the branch onto [0, 1]".into(),
            }]));
        }
        partial += b.width();
        let closed_form = Rat::one() - Rat::new(BigInt::one(), BigInt::from(n + 1));
        if partial != closed_form {
            return Err(Error::InvalidSpec(vec![SpecIssue::LengthSum(partial)]));
        }
        prev = Some(b);
    }
    Ok(())
}

fn parse_branches(text: &str) -> Result<Vec<Branch>> {
    let mut branches = Vec::new();
    let mut issues = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |reason: String| SpecIssue::Malformed {
            line: i + 1,
            reason,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            issues.push(malformed(format!(
                "expected `digit left right orientation`, got {line:?}"
            )));
            continue;
        }
        let digit = match fields[0].parse::<Digit>() {
            Ok(d) => d,
            Err(_) => {
                issues.push(malformed(format!("bad digit {:?}", fields[0])));
                continue;
            }
        };
        let (left, right) = match (parse_rat(fields[1]), parse_rat(fields[2])) {
            (Ok(l), Ok(r)) => (l, r),
            _ => {
                issues.push(malformed("endpoints must be fractions p/q".into()));
                continue;
            }
        };
        let Some(orientation) = Orientation::parse(fields[3]) else {
            issues.push(malformed(format!("bad orientation {:?}", fields[3])));
            continue;
        };
        branches.push(Branch {
            digit,
            left,
            right,
            orientation,
        });
    }
    if !issues.is_empty() {
        return Err(Error::InvalidSpec(issues));
    }
    Ok(branches)
}
