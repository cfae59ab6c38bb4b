use std::fmt;

use thiserror::Error;

use crate::perm::Permutation;
use crate::waves::{find_wave_in, join, IntSet, Mode, WaveWitness};

use super::profile_pick;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("profile pick needs a1 < a2 < a3, got {0:?}")]
    NotIncreasing([u64; 3]),
    #[error("pattern {pattern} needs at least {min} letters")]
    PatternTooShort { pattern: Permutation, min: usize },
    #[error("values 1 and 2 are adjacent in {0}")]
    OneTwoAdjacent(Permutation),
    #[error("binning step: set has {got} elements, needs at least {min}")]
    TooFewElements { got: usize, min: usize },
    #[error("inner wave step: no {inner}-wave in any residue class of the {thinned} thinned points")]
    NoInnerWave { inner: Permutation, thinned: usize },
    #[error("extracted sequence {points:?} is not a {pattern}-wave")]
    Verification { pattern: Permutation, points: Vec<u64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Drops value 1, bins successor gaps, inserts one point.
    Main,
    /// Drops values 1 and 2, bins 3-step gaps, inserts three points.
    Strong,
}

/// Every intermediate object of one extraction run.
///
/// When `reflected` is set the run happened on `{n + 1 - s}` with the
/// reversed pattern, and every field except `wave` is in those coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionTrace {
    pub variant: Variant,
    pub reflected: bool,
    /// `bins[j - 1] = T_j`: points whose relevant forward gap lies in
    /// `[2^(j-1), 2^j)`.
    pub bins: Vec<Vec<u64>>,
    /// The chosen `s` (largest bin, least index on ties).
    pub bin_index: usize,
    /// Every second (main) or third (strong) point of `T_s`, divided by
    /// `2^(s-1)` and floored.
    pub thinned: Vec<u64>,
    /// Residue class `j` in `1..=6`; 6 stands for `0 mod 6`.
    pub residue_class: usize,
    pub class_members: Vec<u64>,
    pub inner_wave: Vec<u64>,
    /// Inner wave mapped back to points of the set.
    pub lifted: Vec<u64>,
    /// `u` for the main variant, `u1, u2, v` for the strong one.
    pub inserted: Vec<u64>,
    pub wave: WaveWitness,
}

impl fmt::Display for ExtractionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gap = match self.variant {
            Variant::Main => "successor",
            Variant::Strong => "3-step",
        };
        writeln!(f, "variant {:?}", self.variant)?;
        if self.reflected {
            writeln!(f, "run on reflected set with reversed pattern")?;
        }
        writeln!(f, "bins by {gap} gap:")?;
        for (j, bin) in self.bins.iter().enumerate() {
            write!(f, "  T_{} [{}, {}) size {}", j + 1, 1u64 << j, 1u64 << (j + 1), bin.len())?;
            if bin.is_empty() {
                writeln!(f)?;
            } else {
                writeln!(f, ": {}", join(bin))?;
            }
        }
        writeln!(f, "chosen s = {}", self.bin_index)?;
        writeln!(f, "thinned: {}", join(&self.thinned))?;
        writeln!(f, "residue class j = {}: {}", self.residue_class, join(&self.class_members))?;
        writeln!(f, "inner wave: {}", join(&self.inner_wave))?;
        writeln!(f, "lifted: {}", join(&self.lifted))?;
        writeln!(f, "inserted: {}", join(&self.inserted))?;
        write!(f, "wave: {}", self.wave)
    }
}

/// Finds a `pi`-wave in `set` by dropping value 1 from `pi`, locating a
/// well-spaced wave of the shorter pattern, and inserting one point after
/// the position of 1.
///
/// Ties break to the least bin, the least residue class and the
/// lexicographically least inner wave, so traces are reproducible. Any set
/// is accepted; failure reports the step that ran out of material.
pub fn extract_wave_main(
    set: &IntSet,
    pi: &Permutation,
) -> Result<(WaveWitness, ExtractionTrace), ExtractError> {
    if pi.len() < 2 {
        return Err(ExtractError::PatternTooShort { pattern: pi.clone(), min: 2 });
    }
    let inner = pi.remove_values(&[1]).expect("k >= 2");
    let x = set.elements();
    let stage = locate(x, set.universe(), &inner, 1, 2)?;
    let l = pi.position_of(1);
    let u = x[stage.indices[l - 1] + 1];
    let mut points = stage.lifted();
    points.insert(l, u);
    finish(stage, Variant::Main, false, pi, points, vec![u])
}

/// Finds a `pi`-wave in `set` by dropping values 1 and 2 (which must not be
/// adjacent in `pi`), then inserting two points around the position of 1
/// and one before the position of 2.
///
/// When 2 precedes 1 the run uses the reversed pattern on the reflected set
/// and maps the wave back.
pub fn extract_wave_strong(
    set: &IntSet,
    pi: &Permutation,
) -> Result<(WaveWitness, ExtractionTrace), ExtractError> {
    if pi.len() < 3 {
        return Err(ExtractError::PatternTooShort { pattern: pi.clone(), min: 3 });
    }
    if pi.one_two_adjacent() {
        return Err(ExtractError::OneTwoAdjacent(pi.clone()));
    }
    if pi.position_of(1) < pi.position_of(2) {
        return strong_forward(set.elements(), set.universe(), pi, pi, false);
    }
    let n = set.universe();
    let mirrored = set.reflect();
    strong_forward(mirrored.elements(), n, &pi.reverse(), pi, true)
}

fn strong_forward(
    x: &[u64],
    n: u64,
    pi: &Permutation,
    original: &Permutation,
    reflected: bool,
) -> Result<(WaveWitness, ExtractionTrace), ExtractError> {
    let inner = pi.remove_values(&[1, 2]).expect("k >= 3");
    let stage = locate(x, n, &inner, 3, 3)?;
    let (l, r) = (pi.position_of(1), pi.position_of(2));
    let a = stage.indices[l - 1];
    let c = profile_pick(x[a], x[a + 1], x[a + 2]).expect("set elements increase");
    let (u1, u2) = (x[a + c - 1], x[a + c]);
    let v = x[stage.indices[r - 2] + 3];

    let z = stage.lifted();
    let mut points = z[..l - 1].to_vec();
    points.extend([u1, u2]);
    points.extend_from_slice(&z[l..r - 1]);
    points.push(v);
    points.extend_from_slice(&z[r - 1..]);
    if reflected {
        points = points.iter().rev().map(|&p| n + 1 - p).collect();
    }
    finish(stage, Variant::Strong, reflected, original, points, vec![u1, u2, v])
}

/// Shared front half: bin, thin, split by residue, find the inner wave.
struct Stage {
    bins: Vec<Vec<u64>>,
    bin_index: usize,
    thinned: Vec<u64>,
    residue_class: usize,
    class_members: Vec<u64>,
    inner_wave: Vec<u64>,
    /// Positions in the sorted set of the lifted inner-wave points.
    indices: Vec<usize>,
    points: Vec<u64>,
}

impl Stage {
    fn lifted(&self) -> Vec<u64> {
        self.indices.iter().map(|&i| self.points[i]).collect()
    }
}

/// Bins on `step`-gaps, then keeps every `stride`-th member of the chosen bin.
fn locate(
    x: &[u64],
    n: u64,
    inner: &Permutation,
    step: usize,
    stride: usize,
) -> Result<Stage, ExtractError> {
    let min = step + 1;
    if x.len() < min {
        return Err(ExtractError::TooFewElements { got: x.len(), min });
    }
    let classes = 1 + n.ilog2() as usize;
    let mut bin_positions: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for i in 0..x.len() - step {
        let gap = x[i + step] - x[i];
        bin_positions[gap.ilog2() as usize].push(i);
    }
    let s = (0..classes)
        .max_by_key(|&j| (bin_positions[j].len(), std::cmp::Reverse(j)))
        .expect("at least one bin")
        + 1;

    // Every `stride`-th member of T_s, starting from the second such.
    let chosen = &bin_positions[s - 1];
    let thinned_pos: Vec<usize> = (2..=chosen.len() / stride)
        .map(|j| chosen[stride * j - 1])
        .collect();
    let scale = |i: usize| x[i] >> (s - 1);
    let thinned: Vec<u64> = thinned_pos.iter().map(|&i| scale(i)).collect();

    let found = (1..=6).find_map(|j| {
        let members: Vec<usize> = thinned_pos.iter().copied().filter(|&i| scale(i) % 6 == j as u64 % 6).collect();
        let values: Vec<u64> = members.iter().map(|&i| scale(i)).collect();
        find_wave_in(&values, inner, Mode::Strict).map(|w| (j, members, values, w))
    });
    let Some((residue_class, members, class_members, inner_wave)) = found else {
        return Err(ExtractError::NoInnerWave {
            inner: inner.clone(),
            thinned: thinned.len(),
        });
    };
    // Scaled values are distinct because thinned points sit at least
    // 2^(s-1) apart.
    let indices = inner_wave
        .iter()
        .map(|y| members[class_members.binary_search(y).expect("wave drawn from the class")])
        .collect();
    Ok(Stage {
        bins: bin_positions.iter().map(|b| b.iter().map(|&i| x[i]).collect()).collect(),
        bin_index: s,
        thinned,
        residue_class,
        class_members,
        inner_wave,
        indices,
        points: x.to_vec(),
    })
}

fn finish(
    stage: Stage,
    variant: Variant,
    reflected: bool,
    pi: &Permutation,
    points: Vec<u64>,
    inserted: Vec<u64>,
) -> Result<(WaveWitness, ExtractionTrace), ExtractError> {
    let lifted = stage.lifted();
    let wave = WaveWitness::new(pi.clone(), points.clone(), Mode::Strict).map_err(|_| {
        ExtractError::Verification {
            pattern: pi.clone(),
            points,
        }
    })?;
    let trace = ExtractionTrace {
        variant,
        reflected,
        bins: stage.bins,
        bin_index: stage.bin_index,
        thinned: stage.thinned,
        residue_class: stage.residue_class,
        class_members: stage.class_members,
        inner_wave: stage.inner_wave,
        lifted,
        inserted,
        wave: wave.clone(),
    };
    Ok((wave, trace))
}
