//! Executable lower-bound colorings and upper-bound wave extraction.
//!
//! Every construction checks its own output before returning it: a coloring
//! that holds a monochromatic wave, or an extracted sequence that is not a
//! wave, comes back as an error rather than a value.

mod colorings;
mod extract;

pub use colorings::{compose, decompose, ezconst_coloring, product_coloring};
pub use extract::{extract_wave_main, extract_wave_strong, ExtractError, ExtractionTrace, Variant};

use thiserror::Error;

use crate::perm::Permutation;
use crate::solvers::Coloring;
use crate::waves::Mode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("pattern {0} does not begin with its largest value")]
    NotLeadingMax(Permutation),
    #[error("pattern {0} is too short for this construction")]
    PatternTooShort(Permutation),
    #[error("{input} coloring has a monochromatic {mode} {pattern}-wave {witness} in color {color}")]
    Precondition {
        input: &'static str,
        pattern: Permutation,
        mode: Mode,
        color: u32,
        witness: String,
    },
    #[error("{input} coloring uses color {color} outside the palette 1..={palette}")]
    PaletteOverflow {
        input: &'static str,
        color: u32,
        palette: u32,
    },
    #[error("block length {0} is not a positive multiple of 5")]
    NotMultipleOfFive(usize),
    #[error("constructed coloring has a monochromatic {pattern}-wave {witness} in color {color}")]
    Verification {
        pattern: Permutation,
        color: u32,
        witness: String,
    },
}

/// Least `i` in `{1, 2}` with `a[i+1] - a[i] <= (a3 - a1) / 2`.
///
/// One of the two gaps is always at most half the span, so the answer exists
/// for every increasing triple.
pub fn profile_pick(a1: u64, a2: u64, a3: u64) -> Result<usize, ExtractError> {
    if !(a1 < a2 && a2 < a3) {
        return Err(ExtractError::NotIncreasing([a1, a2, a3]));
    }
    // Compare doubled gaps to stay in integers.
    if 2 * (a2 - a1) <= a3 - a1 {
        Ok(1)
    } else {
        Ok(2)
    }
}

/// True when no color class of `coloring` holds a `pi`-wave.
pub fn verify_coloring_wave_free(coloring: &Coloring, pi: &Permutation, mode: Mode) -> bool {
    coloring.monochromatic_wave(pi, mode).is_none()
}

fn require_wave_free(
    input: &'static str,
    coloring: &Coloring,
    pi: &Permutation,
    mode: Mode,
) -> Result<(), ConstructionError> {
    match coloring.monochromatic_wave(pi, mode) {
        None => Ok(()),
        Some((color, w)) => Err(ConstructionError::Precondition {
            input,
            pattern: pi.clone(),
            mode,
            color,
            witness: w.to_string(),
        }),
    }
}

fn check_output(coloring: &Coloring, pi: &Permutation, mode: Mode) -> Result<(), ConstructionError> {
    match coloring.monochromatic_wave(pi, mode) {
        None => Ok(()),
        Some((color, w)) => Err(ConstructionError::Verification {
            pattern: pi.clone(),
            color,
            witness: w.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_pick_examples() {
        assert_eq!(profile_pick(1, 2, 10), Ok(1));
        assert_eq!(profile_pick(1, 9, 10), Ok(2));
        assert_eq!(profile_pick(1, 5, 9), Ok(1));
        assert_eq!(profile_pick(3, 3, 9), Err(ExtractError::NotIncreasing([3, 3, 9])));
    }

    #[test]
    fn profile_pick_gap_is_at_most_half() {
        for a1 in 1..8u64 {
            for a2 in a1 + 1..12 {
                for a3 in a2 + 1..16 {
                    let i = profile_pick(a1, a2, a3).unwrap();
                    let a = [a1, a2, a3];
                    assert!(2 * (a[i] - a[i - 1]) <= a3 - a1);
                }
            }
        }
    }

    #[test]
    fn verify_examples() {
        let pi: Permutation = "21".parse().unwrap();
        let c = Coloring::parse("1,1,1,2,2,2,1", None).unwrap();
        assert!(verify_coloring_wave_free(&c, &pi, Mode::Strict));
        assert!(!verify_coloring_wave_free(&Coloring::constant(4), &pi, Mode::Strict));
        let distinct = Coloring::new(vec![1, 2, 3, 4, 5], 5).unwrap();
        for s in ["1", "21", "132"] {
            for mode in [Mode::Strict, Mode::Weak] {
                assert!(verify_coloring_wave_free(&distinct, &s.parse().unwrap(), mode));
            }
        }
    }
}
