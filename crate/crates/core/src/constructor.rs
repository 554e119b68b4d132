//! Cutoff schedules `0 = c_0 < c_1 < ...` and the digit stream of the normal
//! number `z`, which concatenates the first `l(j)` digits of each `a_j`, where
//! `c_{l(j)-1} < j <= c_{l(j)}`.
//!
//! A cutoff `c_{k}` is accepted once, for every row `i < k` and every `n` in
//! the window `[c_k, ceil(h * c_k)]`, the discrepancy of
//! `{T^i a_j : c_i < j <= n}` is below `1/k`. Between two evaluations the
//! discrepancy moves by at most `1/(m+1)` per added point (`m` points so
//! far), so a single exact evaluation certifies a whole stretch of `n` either
//! way and the window is settled without evaluating every `n`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::discrepancy::IncrementalPoints;
use crate::error::{Error, Result};
use crate::gls::{Digit, GlsSpec};
use crate::rat::{ceil_int, fmt_rat, max_rat, min_rat, parse_rat, to_u64, Rat};
use crate::real::UnitReal;
use crate::sequences::PointSeq;

pub const DEFAULT_HORIZON: u64 = 4;
/// Largest window end, measured in columns past the previous cutoff.
pub const DEFAULT_N_CAP: u64 = 10_000_000;

const INITIAL_BITS: u32 = 64;
const MAX_BITS: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutoffSchedule {
    cutoffs: Vec<u64>,
    horizon_factor: Rat,
    verified_to: Vec<u64>,
}

impl CutoffSchedule {
    /// `verified_to[k]` is the last `n` checked for level `k` (0 if unchecked).
    pub fn new(cutoffs: Vec<u64>, horizon_factor: Rat, verified_to: Vec<u64>) -> Result<Self> {
        if cutoffs.first() != Some(&0) {
            return Err(Error::InvalidParameter(
                "schedules start with c_0 = 0".into(),
            ));
        }
        if cutoffs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "cutoffs must be strictly increasing".into(),
            ));
        }
        if verified_to.len() != cutoffs.len() {
            return Err(Error::InvalidParameter(
                "one verified_to entry per cutoff".into(),
            ));
        }
        if horizon_factor < Rat::one() {
            return Err(Error::InvalidParameter(
                "horizon factor must be >= 1".into(),
            ));
        }
        Ok(CutoffSchedule {
            cutoffs,
            horizon_factor,
            verified_to,
        })
    }

    /// Unverified schedule, e.g. for bookkeeping tests.
    pub fn from_cutoffs(cutoffs: Vec<u64>) -> Result<Self> {
        let n = cutoffs.len();
        Self::new(cutoffs, Rat::one(), vec![0; n])
    }

    pub fn cutoffs(&self) -> &[u64] {
        &self.cutoffs
    }

    pub fn horizon_factor(&self) -> &Rat {
        &self.horizon_factor
    }

    pub fn verified_to(&self) -> &[u64] {
        &self.verified_to
    }

    /// Number of levels `L` (cutoffs are `c_0 ..= c_L`).
    pub fn levels(&self) -> usize {
        self.cutoffs.len() - 1
    }

    /// Last column covered, `c_L`.
    pub fn columns(&self) -> u64 {
        *self.cutoffs.last().expect("c_0 always present")
    }

    /// Digits emitted when no column is skipped.
    pub fn digit_capacity(&self) -> u64 {
        self.cutoffs
            .windows(2)
            .enumerate()
            .map(|(k, w)| (k as u64 + 1) * (w[1] - w[0]))
            .sum()
    }

    /// Level `l` with `c_{l-1} < j <= c_l`.
    pub fn l_of(&self, j: u64) -> Result<usize> {
        if j == 0 {
            return Err(Error::InvalidParameter("columns start at 1".into()));
        }
        if j > self.columns() {
            return Err(Error::ScheduleExhausted(j));
        }
        Ok(self.cutoffs.partition_point(|&c| c < j))
    }

    /// Row `i` and column `j` of digit position `m`, with no skipped columns.
    pub fn position_to_cell(&self, m: u64) -> Result<(usize, u64)> {
        self.position_to_cell_skipping(&[], m)
    }

    /// Row and column of digit position `m` when the sorted columns in
    /// `skipped` contribute no digits.
    pub fn position_to_cell_skipping(&self, skipped: &[u64], m: u64) -> Result<(usize, u64)> {
        let live = |lo: u64, hi: u64| -> u64 {
            // columns in (lo, hi] that are not skipped
            let s = skipped.partition_point(|&c| c <= hi) - skipped.partition_point(|&c| c <= lo);
            hi - lo - s as u64
        };
        let mut rest = m;
        for (k, w) in self.cutoffs.windows(2).enumerate() {
            let level = k as u64 + 1;
            let block = level * live(w[0], w[1]);
            if rest < block {
                let nth = rest / level;
                let row = (rest % level) as usize;
                // smallest column c in (w[0], w[1]] with live(w[0], c) = nth + 1
                let (mut lo, mut hi) = (w[0] + 1, w[1]);
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    if live(w[0], mid) > nth {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                return Ok((row, lo));
            }
            rest -= block;
        }
        Err(Error::PositionOutOfRange(m))
    }

    /// Text form: a header line with the horizon factor and generator ids,
    /// then one `level cutoff verified_to` triple per line.
    pub fn to_text(&self, spec_id: &str, seq_id: &str) -> String {
        let mut out = format!(
            "horizon_factor={} spec={} seq={}\n",
            fmt_rat(&self.horizon_factor),
            spec_id,
            seq_id
        );
        for (k, (c, v)) in self.cutoffs.iter().zip(&self.verified_to).enumerate() {
            out.push_str(&format!("{k} {c} {v}\n"));
        }
        out
    }

    /// Parses [`Self::to_text`] output; returns the schedule and the header's
    /// `(spec, seq)` ids.
    pub fn parse_text(text: &str) -> Result<(Self, ScheduleHeader)> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty schedule file".into()))?;
        let mut horizon = None;
        let mut spec = String::new();
        let mut seq = String::new();
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("horizon_factor", v)) => horizon = Some(parse_rat(v)?),
                Some(("spec", v)) => spec = v.to_string(),
                Some(("seq", v)) => seq = v.to_string(),
                _ => return Err(Error::Parse(format!("bad schedule header field {field:?}"))),
            }
        }
        let horizon =
            horizon.ok_or_else(|| Error::Parse("schedule header lacks horizon_factor".into()))?;
        let mut cutoffs = Vec::new();
        let mut verified = Vec::new();
        for (k, line) in lines.enumerate() {
            let nums: Vec<u64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("bad schedule line {line:?}")))?;
            match nums.as_slice() {
                [l, c, v] if *l == k as u64 => {
                    cutoffs.push(*c);
                    verified.push(*v);
                }
                _ => return Err(Error::Parse(format!("bad schedule line {line:?}"))),
            }
        }
        Ok((
            Self::new(cutoffs, horizon, verified)?,
            ScheduleHeader { spec, seq },
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleHeader {
    pub spec: String,
    pub seq: String,
}

impl fmt::Display for CutoffSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.cutoffs.iter().map(ToString::to_string).collect();
        write!(f, "({})", cs.join(", "))
    }
}

pub fn l_of(schedule: &CutoffSchedule, j: u64) -> Result<usize> {
    schedule.l_of(j)
}

pub fn position_to_cell(schedule: &CutoffSchedule, m: u64) -> Result<(usize, u64)> {
    schedule.position_to_cell(m)
}

/// Orbit `a_j, T a_j, T^2 a_j, ...` of one column, as certified points.
#[derive(Debug)]
struct ColumnOrbit {
    state: UnitReal,
    alive: bool,
    points: Vec<(Rat, Rat)>,
}

/// Lazily computed orbits of `a_1, a_2, ...`.
struct Columns<'a> {
    spec: &'a GlsSpec,
    seq: &'a PointSeq,
    radius: Rat,
    orbits: Vec<ColumnOrbit>,
}

impl<'a> Columns<'a> {
    fn new(spec: &'a GlsSpec, seq: &'a PointSeq, bits: u32) -> Self {
        Columns {
            spec,
            seq,
            radius: Rat::new(BigInt::one(), BigInt::one() << bits),
            orbits: Vec::new(),
        }
    }

    /// `T^i a_j`, or `None` when the orbit of `a_j` ends before step `i`.
    fn point(&mut self, j: u64, i: usize) -> Result<Option<&(Rat, Rat)>> {
        let idx = (j - 1) as usize;
        while self.orbits.len() <= idx {
            let jj = self.orbits.len() as u64 + 1;
            let a = self.seq.element(jj)?;
            let p = a.certified_point(&self.radius)?;
            self.orbits.push(ColumnOrbit {
                state: a,
                alive: true,
                points: vec![p],
            });
        }
        let orbit = &mut self.orbits[idx];
        while orbit.points.len() <= i && orbit.alive {
            match self.spec.step(&orbit.state) {
                Ok(next) => {
                    orbit.points.push(next.certified_point(&self.radius)?);
                    orbit.state = next;
                }
                Err(Error::Terminal(_)) => orbit.alive = false,
                Err(e) => return Err(e),
            }
        }
        Ok(orbit.points.get(i))
    }
}

/// Outcome of certifying one row at one `n`.
enum Verdict {
    Good,
    Bad,
}

struct NeedPrecision;

/// The multiset `{T^i a_j : start < j <= filled}` with the certification state
/// for the current threshold.
struct Row {
    i: usize,
    start: u64,
    filled: u64,
    pts: IncrementalPoints,
    delta: Rat,
    frontier: u64,
    bad: Vec<(u64, u64)>,
    closest_bad: Option<Rat>,
}

impl Row {
    fn new(i: usize, start: u64) -> Self {
        Row {
            i,
            start,
            filled: start,
            pts: IncrementalPoints::new(),
            delta: Rat::zero(),
            frontier: start,
            bad: Vec::new(),
            closest_bad: None,
        }
    }

    fn reset(&mut self, frontier: u64) {
        self.frontier = frontier;
        self.bad.clear();
        self.closest_bad = None;
    }

    fn seek(&mut self, n: u64, cols: &mut Columns<'_>) -> Result<()> {
        while self.filled < n {
            self.filled += 1;
            if let Some((x, r)) = cols.point(self.filled, self.i)? {
                if r > &self.delta {
                    self.delta = r.clone();
                }
                self.pts.insert(x.clone());
            }
        }
        while self.filled > n {
            if let Some((x, _)) = cols.point(self.filled, self.i)? {
                let x = x.clone();
                self.pts.remove(&x);
            }
            self.filled -= 1;
        }
        Ok(())
    }

    /// Certifies every `n <= to` against `theta` and returns the largest bad
    /// `n` in `[from, to]`.
    fn certify(
        &mut self,
        from: u64,
        to: u64,
        theta: &Rat,
        cols: &mut Columns<'_>,
    ) -> Result<std::result::Result<Option<u64>, NeedPrecision>> {
        while self.frontier < to {
            let n = self.frontier + 1;
            self.seek(n, cols)?;
            let m = self.pts.len();
            let Some(d) = self.pts.discrepancy() else {
                self.bad.push((n, n));
                self.frontier = n;
                continue;
            };
            let slack = &self.delta * Rat::from_integer(2.into());
            let hi = min_rat(&(&d + &slack), &Rat::one()).clone();
            // A single point is a closed interval of length 0, so D >= 1/m
            // holds exactly; this settles ties at thresholds of the form 1/m.
            let floor = Rat::new(BigInt::one(), BigInt::from(m));
            let lo = max_rat(&(&d - &slack), &floor).clone();
            let next = Rat::from_integer(BigInt::from(m + 1));
            let (verdict, k) = if &hi < theta {
                let k = ceil_int(&((theta - &hi) * &next)) - 1u32;
                (Verdict::Good, k)
            } else if &lo >= theta {
                let k = ((&lo - theta) * &next).floor().to_integer();
                (Verdict::Bad, k)
            } else {
                return Ok(Err(NeedPrecision));
            };
            let k = to_u64(&k).unwrap_or(u64::MAX / 2);
            let last = n.saturating_add(k);
            if let Verdict::Bad = verdict {
                self.bad.push((n, last));
                if self.closest_bad.as_ref().is_none_or(|b| &lo < b) {
                    self.closest_bad = Some(lo);
                }
            }
            self.frontier = last;
        }
        let worst = self
            .bad
            .iter()
            .rev()
            .filter(|(a, b)| *a <= to && *b >= from)
            .map(|(_, b)| (*b).min(to))
            .max();
        Ok(Ok(worst))
    }
}

/// Incremental minimal-cutoff search; each [`Self::next_level`] call fixes one
/// more cutoff.
pub struct CutoffSearch<'a> {
    spec: &'a GlsSpec,
    seq: &'a PointSeq,
    horizon: Rat,
    n_cap: u64,
    bits: u32,
    columns: Columns<'a>,
    rows: Vec<Row>,
    cutoffs: Vec<u64>,
    verified_to: Vec<u64>,
}

impl<'a> CutoffSearch<'a> {
    pub fn new(spec: &'a GlsSpec, seq: &'a PointSeq, horizon: Rat, n_cap: u64) -> Result<Self> {
        if horizon < Rat::one() {
            return Err(Error::InvalidParameter(
                "horizon factor must be >= 1".into(),
            ));
        }
        Ok(CutoffSearch {
            spec,
            seq,
            horizon,
            n_cap,
            bits: INITIAL_BITS,
            columns: Columns::new(spec, seq, INITIAL_BITS),
            rows: Vec::new(),
            cutoffs: vec![0],
            verified_to: vec![0],
        })
    }

    pub fn schedule(&self) -> CutoffSchedule {
        CutoffSchedule {
            cutoffs: self.cutoffs.clone(),
            horizon_factor: self.horizon.clone(),
            verified_to: self.verified_to.clone(),
        }
    }

    pub fn levels(&self) -> usize {
        self.cutoffs.len() - 1
    }

    /// Chooses the next cutoff `c_{l+1}`.
    pub fn next_level(&mut self) -> Result<u64> {
        loop {
            match self.try_level()? {
                Ok(c) => return Ok(c),
                Err(NeedPrecision) => {
                    if self.bits >= MAX_BITS {
                        return Err(Error::PrecisionExhausted { bits: self.bits });
                    }
                    self.bits *= 2;
                    self.columns = Columns::new(self.spec, self.seq, self.bits);
                    let starts: Vec<(usize, u64)> =
                        self.rows.iter().map(|r| (r.i, r.start)).collect();
                    self.rows = starts.into_iter().map(|(i, s)| Row::new(i, s)).collect();
                }
            }
        }
    }

    fn try_level(&mut self) -> Result<std::result::Result<u64, NeedPrecision>> {
        let level = self.levels();
        let prev = self.cutoffs[level];
        let theta = Rat::new(BigInt::one(), BigInt::from(level + 1));
        if self.rows.len() == level {
            self.rows.push(Row::new(level, prev));
        }
        for row in &mut self.rows {
            row.reset(prev);
        }
        let mut cand = prev + 1;
        loop {
            let end = to_u64(&ceil_int(
                &(&self.horizon * Rat::from_integer(BigInt::from(cand))),
            ))
            .unwrap_or(u64::MAX);
            if end - prev > self.n_cap {
                let best = self
                    .rows
                    .iter()
                    .filter_map(|r| r.closest_bad.clone())
                    .min()
                    .unwrap_or_else(Rat::one);
                return Err(Error::CutoffSearchExhausted {
                    level: level + 1,
                    cap: self.n_cap,
                    best,
                });
            }
            let mut worst: Option<u64> = None;
            for row in &mut self.rows {
                match row.certify(cand, end, &theta, &mut self.columns)? {
                    Ok(Some(b)) => worst = Some(worst.map_or(b, |w| w.max(b))),
                    Ok(None) => {}
                    Err(need) => return Ok(Err(need)),
                }
            }
            match worst {
                None => {
                    self.cutoffs.push(cand);
                    self.verified_to.push(end);
                    return Ok(Ok(cand));
                }
                Some(b) => cand = b + 1,
            }
        }
    }

    pub fn run(&mut self, levels: usize) -> Result<CutoffSchedule> {
        while self.levels() < levels {
            self.next_level()?;
        }
        Ok(self.schedule())
    }

    /// Digits the current schedule emits after skipping columns whose
    /// expansion ends early.
    pub fn emittable_digits(&mut self) -> Result<u64> {
        let schedule = self.schedule();
        let mut total = 0;
        for j in 1..=schedule.columns() {
            let l = schedule.l_of(j)?;
            if self.columns.point(j, l)?.is_some() {
                total += l as u64;
            }
        }
        Ok(total)
    }

    /// Adds levels until at least `count` digits can be emitted.
    pub fn extend_to_digits(&mut self, count: u64) -> Result<CutoffSchedule> {
        while self.emittable_digits()? < count {
            self.next_level()?;
        }
        Ok(self.schedule())
    }
}

/// Minimal window-verified schedule with `levels` levels.
pub fn choose_cutoffs(
    spec: &GlsSpec,
    seq: &PointSeq,
    levels: usize,
    horizon_factor: Rat,
    n_cap: u64,
) -> Result<CutoffSchedule> {
    if levels == 0 {
        return Err(Error::InvalidParameter(
            "at least one level is required".into(),
        ));
    }
    CutoffSearch::new(spec, seq, horizon_factor, n_cap)?.run(levels)
}

/// Replays the threshold condition of every level over
/// `[c_k, max(verified_to_k, ceil(h c_k))]`.
pub fn verify_schedule(spec: &GlsSpec, seq: &PointSeq, schedule: &CutoffSchedule) -> Result<()> {
    let mut bits = INITIAL_BITS;
    'precision: loop {
        let mut cols = Columns::new(spec, seq, bits);
        let c = schedule.cutoffs();
        for level in 1..=schedule.levels() {
            let theta = Rat::new(BigInt::one(), BigInt::from(level));
            let window =
                ceil_int(&(schedule.horizon_factor() * Rat::from_integer(c[level].into())));
            let end = to_u64(&window)
                .unwrap_or(u64::MAX)
                .max(schedule.verified_to()[level])
                .max(c[level]);
            for i in 0..level {
                let mut row = Row::new(i, c[i]);
                row.reset(c[level] - 1);
                match row.certify(c[level], end, &theta, &mut cols)? {
                    Ok(None) => {}
                    Ok(Some(n)) => {
                        let first = row
                            .bad
                            .iter()
                            .find(|(a, b)| *b >= c[level] && *a <= end)
                            .map(|(a, _)| (*a).max(c[level]))
                            .unwrap_or(n);
                        return Err(Error::ScheduleRejected {
                            level,
                            row: i,
                            n: first,
                        });
                    }
                    Err(NeedPrecision) => {
                        if bits >= MAX_BITS {
                            return Err(Error::PrecisionExhausted { bits });
                        }
                        bits *= 2;
                        continue 'precision;
                    }
                }
            }
        }
        return Ok(());
    }
}

/// Lazy digit sequence of `z`: column by column, the first `l(j)` digits of
/// `a_j`. Columns whose expansion ends before `l(j)` digits are skipped.
pub struct DigitStream<'a> {
    spec: &'a GlsSpec,
    seq: &'a PointSeq,
    schedule: &'a CutoffSchedule,
    column: u64,
    buffer: Vec<Digit>,
    next_in_buffer: usize,
    emitted: u64,
    skipped: Vec<u64>,
}

impl<'a> DigitStream<'a> {
    pub fn new(spec: &'a GlsSpec, seq: &'a PointSeq, schedule: &'a CutoffSchedule) -> Self {
        DigitStream {
            spec,
            seq,
            schedule,
            column: 0,
            buffer: Vec::new(),
            next_in_buffer: 0,
            emitted: 0,
            skipped: Vec::new(),
        }
    }

    pub fn next_digit(&mut self) -> Result<Digit> {
        while self.next_in_buffer == self.buffer.len() {
            let j = self.column + 1;
            let l = self.schedule.l_of(j)?;
            let a = self.seq.element(j)?;
            let e = self.spec.expand(&a, l)?;
            self.column = j;
            if e.terminated {
                self.skipped.push(j);
                continue;
            }
            self.buffer = e.digits;
            self.next_in_buffer = 0;
        }
        let d = self.buffer[self.next_in_buffer];
        self.next_in_buffer += 1;
        self.emitted += 1;
        Ok(d)
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Columns consumed without emitting digits, in increasing order.
    pub fn skipped(&self) -> &[u64] {
        &self.skipped
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZDigits {
    pub digits: Vec<Digit>,
    pub skipped_columns: Vec<u64>,
}

/// The first `count` digits of `z`.
pub fn z_digits(
    spec: &GlsSpec,
    seq: &PointSeq,
    schedule: &CutoffSchedule,
    count: usize,
) -> Result<ZDigits> {
    let mut stream = DigitStream::new(spec, seq, schedule);
    let digits = (0..count)
        .map(|_| stream.next_digit())
        .collect::<Result<Vec<_>>>()?;
    Ok(ZDigits {
        digits,
        skipped_columns: stream.skipped,
    })
}

/// Horizon factor from an integer.
pub fn horizon(h: u64) -> Rat {
    Rat::from_integer(BigInt::from(h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sched(c: &[u64]) -> CutoffSchedule {
        CutoffSchedule::from_cutoffs(c.to_vec()).unwrap()
    }

    #[test]
    fn schedule_validation() {
        assert!(CutoffSchedule::from_cutoffs(vec![1, 2]).is_err());
        assert!(CutoffSchedule::from_cutoffs(vec![0, 2, 2]).is_err());
        assert!(CutoffSchedule::from_cutoffs(vec![]).is_err());
        assert!(CutoffSchedule::new(vec![0, 1], Rat::new(1.into(), 2.into()), vec![0, 0]).is_err());
    }

    #[test]
    fn l_of_examples() {
        let s = sched(&[0, 2, 5]);
        assert_eq!(s.l_of(1).unwrap(), 1);
        assert_eq!(s.l_of(2).unwrap(), 1);
        for j in 3..=5 {
            assert_eq!(s.l_of(j).unwrap(), 2);
        }
        assert!(matches!(s.l_of(6), Err(Error::ScheduleExhausted(6))));
        assert!(s.l_of(0).is_err());
    }

    #[test]
    fn position_examples() {
        let s = sched(&[0, 2, 5]);
        assert_eq!(s.position_to_cell(0).unwrap(), (0, 1));
        assert_eq!(s.position_to_cell(1).unwrap(), (0, 2));
        assert_eq!(s.position_to_cell(2).unwrap(), (0, 3));
        assert_eq!(s.position_to_cell(3).unwrap(), (1, 3));
        assert_eq!(s.position_to_cell(7).unwrap(), (1, 5));
        assert_eq!(s.digit_capacity(), 8);
        assert!(matches!(
            s.position_to_cell(8),
            Err(Error::PositionOutOfRange(8))
        ));
    }

    #[test]
    fn position_with_skips() {
        let s = sched(&[0, 2, 5]);
        // column 3 skipped: positions 2,3 belong to column 4
        assert_eq!(s.position_to_cell_skipping(&[3], 2).unwrap(), (0, 4));
        assert_eq!(s.position_to_cell_skipping(&[3], 5).unwrap(), (1, 5));
        assert!(s.position_to_cell_skipping(&[3], 6).is_err());
        assert_eq!(s.position_to_cell_skipping(&[1], 0).unwrap(), (0, 2));
    }

    #[test]
    fn schedule_text_round_trip() {
        let s = CutoffSchedule::new(vec![0, 2, 8], horizon(4), vec![0, 8, 32]).unwrap();
        let text = s.to_text("b-adic:2", "vdc:2");
        assert_eq!(
            text,
            "horizon_factor=4 spec=b-adic:2 seq=vdc:2\n0 0 0\n1 2 8\n2 8 32\n"
        );
        let (back, header) = CutoffSchedule::parse_text(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(header.spec, "b-adic:2");
        assert!(CutoffSchedule::parse_text("horizon_factor=4\n1 0 0\n").is_err());
        assert!(CutoffSchedule::parse_text("").is_err());
    }

    #[test]
    fn z_digits_example() {
        let spec = GlsSpec::b_adic(2).unwrap();
        let seq = PointSeq::van_der_corput(2).unwrap();
        let s = sched(&[0, 2, 5]);
        let z = z_digits(&spec, &seq, &s, 8).unwrap();
        assert_eq!(z.digits, vec![2, 1, 2, 2, 1, 1, 2, 1]);
        assert!(z.skipped_columns.is_empty());
        assert!(z_digits(&spec, &seq, &s, 0).unwrap().digits.is_empty());
        assert!(matches!(
            z_digits(&spec, &seq, &s, 9),
            Err(Error::ScheduleExhausted(6))
        ));
    }

    #[test]
    fn first_cutoff_needs_two_points() {
        // A single point has discrepancy exactly 1 (the interval [a_1, a_1]),
        // so the threshold 1 is first met with two points.
        let spec = GlsSpec::b_adic(2).unwrap();
        let seq = PointSeq::van_der_corput(2).unwrap();
        let s = choose_cutoffs(&spec, &seq, 1, horizon(4), DEFAULT_N_CAP).unwrap();
        assert_eq!(s.cutoffs(), &[0, 2]);
        assert_eq!(s.verified_to(), &[0, 8]);
    }

    #[test]
    fn horizon_one_checks_only_the_cutoff() {
        let spec = GlsSpec::b_adic(2).unwrap();
        let seq = PointSeq::van_der_corput(2).unwrap();
        let s = choose_cutoffs(&spec, &seq, 3, horizon(1), DEFAULT_N_CAP).unwrap();
        assert_eq!(&s.verified_to()[1..], &s.cutoffs()[1..]);
    }

    #[test]
    fn cap_is_reported() {
        let spec = GlsSpec::b_adic(2).unwrap();
        let seq = PointSeq::van_der_corput(2).unwrap();
        let err = choose_cutoffs(&spec, &seq, 6, horizon(4), 50).unwrap_err();
        assert!(
            matches!(err, Error::CutoffSearchExhausted { cap: 50, .. }),
            "{err}"
        );
        assert!(choose_cutoffs(&spec, &seq, 0, horizon(4), 50).is_err());
    }
}
