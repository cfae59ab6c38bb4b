//! Wave predicates and wave search inside integer sets.
//!
//! A strict wave for `pi` in `S_k` is `x_1 < ... < x_{k+1}` whose consecutive
//! differences satisfy `d_i > d_j` exactly when `pi(i) > pi(j)`; the "exactly"
//! forces the differences to be pairwise distinct. A weak wave only needs
//! `pi(i) > pi(j) => d_i >= d_j`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::perm::{normalize, Permutation};

/// Default cap on the universe size of an [`IntSet`].
pub const DEFAULT_UNIVERSE_LIMIT: u64 = 1 << 20;

// Sets at least this large split the search over the first point.
const PARALLEL_THRESHOLD: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WaveError {
    #[error("points are not strictly increasing")]
    NotIncreasing,
    #[error("need at least two points")]
    TooShort,
    #[error("element {0} is outside 1..=universe")]
    OutOfUniverse(u64),
    #[error("duplicate element {0}")]
    Duplicate(u64),
    #[error("universe {universe} exceeds the limit {limit}")]
    UniverseTooLarge { universe: u64, limit: u64 },
    #[error("points {points:?} are not a {mode} wave for {pattern}")]
    NotAWave {
        points: Vec<u64>,
        pattern: Permutation,
        mode: Mode,
    },
    #[error("cannot parse integer list {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Mode {
    #[default]
    Strict,
    Weak,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Weak => "weak",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Mode::Strict),
            "weak" => Ok(Mode::Weak),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

/// A set of positive integers inside a universe `[n]`, kept both sorted and
/// as a bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntSet {
    elements: Vec<u64>,
    universe: u64,
    bits: Vec<u64>,
}

impl IntSet {
    /// Builds a set from elements in any order; duplicates are rejected.
    pub fn new(elements: Vec<u64>, universe: u64) -> Result<Self, WaveError> {
        Self::with_limit(elements, universe, DEFAULT_UNIVERSE_LIMIT)
    }

    pub fn with_limit(mut elements: Vec<u64>, universe: u64, limit: u64) -> Result<Self, WaveError> {
        if universe > limit {
            return Err(WaveError::UniverseTooLarge { universe, limit });
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(WaveError::Duplicate(w[0]));
        }
        if let Some(&bad) = elements.iter().find(|&&x| x == 0 || x > universe) {
            return Err(WaveError::OutOfUniverse(bad));
        }
        let mut bits = vec![0u64; (universe / 64 + 1) as usize];
        for &x in &elements {
            bits[(x / 64) as usize] |= 1 << (x % 64);
        }
        Ok(IntSet {
            elements,
            universe,
            bits,
        })
    }

    /// `[n] = {1, ..., n}`.
    pub fn interval(n: u64) -> Result<Self, WaveError> {
        Self::new((1..=n).collect(), n)
    }

    /// Parses `1,2,4,8`; the universe defaults to the largest element.
    pub fn parse(text: &str, universe: Option<u64>) -> Result<Self, WaveError> {
        let elements = parse_points(text)?;
        let n = universe.unwrap_or_else(|| elements.iter().copied().max().unwrap_or(0));
        Self::new(elements, n)
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        x >= 1 && x <= self.universe && self.bits[(x / 64) as usize] & (1 << (x % 64)) != 0
    }

    /// `{n + 1 - s : s in S}`.
    pub fn reflect(&self) -> IntSet {
        let n = self.universe;
        IntSet::new(self.elements.iter().map(|&s| n + 1 - s).collect(), n)
            .expect("reflection stays inside the universe")
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.elements))
    }
}

/// A certified wave: `points` is a `mode` wave for `pattern`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveWitness {
    pattern: Permutation,
    points: Vec<u64>,
    mode: Mode,
}

impl WaveWitness {
    pub fn new(pattern: Permutation, points: Vec<u64>, mode: Mode) -> Result<Self, WaveError> {
        if !is_wave(&points, &pattern, mode) {
            return Err(WaveError::NotAWave {
                points,
                pattern,
                mode,
            });
        }
        Ok(WaveWitness {
            pattern,
            points,
            mode,
        })
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }
}

impl fmt::Display for WaveWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.points))
    }
}

pub(crate) fn join(xs: &[u64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Parses a comma-separated list of positive integers.
pub fn parse_points(text: &str) -> Result<Vec<u64>, WaveError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| WaveError::Parse(text.to_string()))
}

/// Consecutive differences of a strictly increasing sequence.
pub fn differences(points: &[u64]) -> Result<Vec<u64>, WaveError> {
    if points.len() < 2 {
        return Err(WaveError::TooShort);
    }
    points
        .windows(2)
        .map(|w| {
            if w[1] > w[0] {
                Ok(w[1] - w[0])
            } else {
                Err(WaveError::NotIncreasing)
            }
        })
        .collect()
}

pub fn is_pi_wave(points: &[u64], pi: &Permutation) -> bool {
    if points.len() != pi.len() + 1 {
        return false;
    }
    match differences(points) {
        Ok(d) => normalize(&d).is_ok_and(|shape| &shape == pi),
        Err(_) => false,
    }
}

pub fn is_weak_pi_wave(points: &[u64], pi: &Permutation) -> bool {
    if points.len() != pi.len() + 1 {
        return false;
    }
    let Ok(d) = differences(points) else {
        return false;
    };
    let v = pi.values();
    (0..d.len()).all(|i| (0..d.len()).all(|j| v[i] <= v[j] || d[i] >= d[j]))
}

pub fn is_wave(points: &[u64], pi: &Permutation, mode: Mode) -> bool {
    match mode {
        Mode::Strict => is_pi_wave(points, pi),
        Mode::Weak => is_weak_pi_wave(points, pi),
    }
}

/// Whether `partial` (t+1 points) relates its t differences the way the
/// first t values of `pi` relate, i.e. could still grow into a full wave.
pub fn prefix_feasible(partial: &[u64], pi: &Permutation, mode: Mode) -> bool {
    if partial.len() > pi.len() + 1 {
        return false;
    }
    if partial.len() < 2 {
        return true;
    }
    let Ok(d) = differences(partial) else {
        return false;
    };
    let v = pi.values();
    for i in 0..d.len() {
        for j in 0..d.len() {
            let ok = match mode {
                Mode::Strict => (v[i] > v[j]) == (d[i] > d[j]),
                Mode::Weak => v[i] <= v[j] || d[i] >= d[j],
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Whether the search prunes partial sequences by prefix feasibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pruning {
    #[default]
    On,
    Off,
}

/// Lexicographically least wave in `set`, or `None` if the set is wave-free.
pub fn find_wave(set: &IntSet, pi: &Permutation, mode: Mode) -> Option<WaveWitness> {
    find_wave_with(set, pi, mode, Pruning::On)
}

pub fn find_wave_with(
    set: &IntSet,
    pi: &Permutation,
    mode: Mode,
    pruning: Pruning,
) -> Option<WaveWitness> {
    let points = match pruning {
        Pruning::On => find_wave_in(set.elements(), pi, mode),
        Pruning::Off => set
            .elements()
            .iter()
            .copied()
            .combinations(pi.len() + 1)
            .find(|c| is_wave(c, pi, mode)),
    }?;
    Some(WaveWitness::new(pi.clone(), points, mode).expect("search returns verified waves"))
}

/// Same as [`find_wave`] on a sorted slice of distinct integers.
pub fn find_wave_in(elems: &[u64], pi: &Permutation, mode: Mode) -> Option<Vec<u64>> {
    let from = |start: usize| wave_from(elems, pi, mode, start);
    if elems.len() >= PARALLEL_THRESHOLD {
        (0..elems.len()).into_par_iter().find_map_first(from)
    } else {
        (0..elems.len()).find_map(from)
    }
}

fn wave_from(elems: &[u64], pi: &Permutation, mode: Mode, start: usize) -> Option<Vec<u64>> {
    let mut pts = vec![elems[start]];
    let mut diffs = Vec::with_capacity(pi.len());
    extend(elems, pi.values(), mode, Direction::Forward, &mut pts, &mut diffs).then_some(pts)
}

/// Whether `prefix ∪ {last}` holds a wave whose final point is `last`.
/// `prefix` must be sorted with every element below `last`.
pub(crate) fn has_wave_ending_at(prefix: &[u64], last: u64, reversed: &[usize], mode: Mode) -> bool {
    let mut pts = vec![last];
    let mut diffs = Vec::with_capacity(reversed.len());
    extend(prefix, reversed, mode, Direction::Backward, &mut pts, &mut diffs)
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Backward,
}

/// Inclusive range for the next difference given those already chosen.
/// `order[t]` is the pattern value the t-th chosen difference must play.
fn next_gap_range(order: &[usize], diffs: &[u64], mode: Mode) -> Option<(u64, u64)> {
    let t = diffs.len();
    let target = order[t];
    let (mut lo, mut hi) = (1u64, u64::MAX);
    for (&d, &v) in diffs.iter().zip(order) {
        match (v < target, mode) {
            (true, Mode::Strict) => lo = lo.max(d + 1),
            (true, Mode::Weak) => lo = lo.max(d),
            (false, Mode::Strict) => hi = hi.min(d - 1),
            (false, Mode::Weak) => hi = hi.min(d),
        }
    }
    (lo <= hi).then_some((lo, hi))
}

fn extend(
    elems: &[u64],
    order: &[usize],
    mode: Mode,
    dir: Direction,
    pts: &mut Vec<u64>,
    diffs: &mut Vec<u64>,
) -> bool {
    if diffs.len() == order.len() {
        return true;
    }
    let Some((lo, hi)) = next_gap_range(order, diffs, mode) else {
        return false;
    };
    let last = *pts.last().unwrap();
    match dir {
        Direction::Forward => {
            let Some(first) = last.checked_add(lo) else {
                return false;
            };
            let upto = last.saturating_add(hi);
            let start = elems.partition_point(|&x| x < first);
            for &x in elems[start..].iter().take_while(|&&x| x <= upto) {
                pts.push(x);
                diffs.push(x - last);
                if extend(elems, order, mode, dir, pts, diffs) {
                    return true;
                }
                pts.pop();
                diffs.pop();
            }
        }
        Direction::Backward => {
            if last < lo {
                return false;
            }
            let upto = last - lo;
            let first = last.saturating_sub(hi);
            let start = elems.partition_point(|&x| x < first);
            for &x in elems[start..].iter().take_while(|&&x| x <= upto) {
                pts.push(x);
                diffs.push(last - x);
                if extend(elems, order, mode, dir, pts, diffs) {
                    return true;
                }
                pts.pop();
                diffs.pop();
            }
        }
    }
    false
}
