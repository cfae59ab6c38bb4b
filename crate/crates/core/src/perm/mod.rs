//! Permutations in one-line notation and the structural operations the wave
//! problems are phrased in: normalization, reversal, value deletion, peaks,
//! layers and direct differences.

mod classify;

pub use classify::{classify, Classification, Classifier, DEFAULT_CLASSIFY_CAP};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("empty sequence")]
    Empty,
    #[error("duplicate element at positions {first} and {second}")]
    Duplicate { first: usize, second: usize },
    #[error("values are not a bijection onto 1..={k}")]
    NotBijection { k: usize },
    #[error("value {value} is not in the permutation")]
    MissingValue { value: usize },
    #[error("cannot delete every value of the permutation")]
    FullDeletion,
    #[error("cannot parse permutation from {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("permutation length {k} exceeds the classification cap {cap}")]
    TooLong { k: usize, cap: usize },
}

/// A permutation of `{1, ..., k}` in one-line notation.
///
/// Positions and values are both 1-based in the public API, so `value_at(1)`
/// is the first entry of the one-line form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<usize>,
}

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self, PermError> {
        let k = values.len();
        if k == 0 {
            return Err(PermError::Empty);
        }
        let mut seen = vec![false; k + 1];
        for &v in &values {
            if v == 0 || v > k || seen[v] {
                return Err(PermError::NotBijection { k });
            }
            seen[v] = true;
        }
        Ok(Permutation { values })
    }

    /// The identity permutation `1, 2, ..., k`.
    pub fn identity(k: usize) -> Result<Self, PermError> {
        Self::new((1..=k).collect())
    }

    /// The descending permutation `k, k-1, ..., 1`.
    pub fn descending(k: usize) -> Result<Self, PermError> {
        Self::new((1..=k).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    // Never true; kept for the clippy convention.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `pi(i)` for a 1-based position `i`.
    pub fn value_at(&self, position: usize) -> usize {
        self.values[position - 1]
    }

    /// `pi^{-1}(v)`: the 1-based position holding value `v`.
    pub fn position_of(&self, value: usize) -> usize {
        self.values
            .iter()
            .position(|&v| v == value)
            .map(|p| p + 1)
            .expect("value outside 1..=k")
    }

    pub fn reverse(&self) -> Permutation {
        let mut values = self.values.clone();
        values.reverse();
        Permutation { values }
    }

    /// Deletes the positions holding `vals` and normalizes what remains.
    pub fn remove_values(&self, vals: &[usize]) -> Result<Permutation, PermError> {
        let k = self.len();
        let mut drop = vec![false; k + 1];
        for &v in vals {
            if v == 0 || v > k {
                return Err(PermError::MissingValue { value: v });
            }
            drop[v] = true;
        }
        let rest: Vec<usize> = self.values.iter().copied().filter(|&v| !drop[v]).collect();
        if rest.is_empty() {
            return Err(PermError::FullDeletion);
        }
        normalize(&rest)
    }

    /// Whether values 1 and 2 sit in adjacent positions. Always true for k = 2.
    pub fn one_two_adjacent(&self) -> bool {
        if self.len() < 2 {
            return false;
        }
        self.position_of(1).abs_diff(self.position_of(2)) == 1
    }

    /// Interior positions `i` with `pi(i) > pi(i-1)` and `pi(i) > pi(i+1)`.
    pub fn peaks(&self) -> Vec<usize> {
        self.values
            .windows(3)
            .enumerate()
            .filter(|(_, w)| w[1] > w[0] && w[1] > w[2])
            .map(|(i, _)| i + 2)
            .collect()
    }

    /// Splits into maximal ascending runs and returns them if their value
    /// blocks descend from left to right, `None` if the permutation is not
    /// layered.
    pub fn layers(&self) -> Option<Vec<Layer>> {
        let mut runs = Vec::new();
        let mut start = 0;
        for i in 1..=self.len() {
            if i == self.len() || self.values[i] < self.values[i - 1] {
                runs.push(Layer {
                    start: start + 1,
                    end: i,
                });
                start = i;
            }
        }
        // Every entry of a run must exceed everything after it.
        for pair in runs.windows(2) {
            let min_here = self.values[pair[0].start - 1];
            let max_after = self.values[pair[0].end..].iter().max().copied().unwrap_or(0);
            if min_here < max_after {
                return None;
            }
        }
        Some(runs)
    }

    /// `self ⊖ right`: this block shifted above all of `right`, followed by
    /// `right` unchanged.
    pub fn direct_difference(&self, right: &Permutation) -> Permutation {
        let shift = right.len();
        let values = self
            .values
            .iter()
            .map(|&v| v + shift)
            .chain(right.values.iter().copied())
            .collect();
        Permutation { values }
    }

    /// All ways of writing `self` as `left ⊖ right` with both parts nonempty.
    pub fn direct_difference_splits(&self) -> Vec<(Permutation, Permutation)> {
        let k = self.len();
        (1..k)
            .filter(|&cut| {
                let min_left = self.values[..cut].iter().min().unwrap();
                let max_right = self.values[cut..].iter().max().unwrap();
                min_left > max_right
            })
            .map(|cut| {
                let right_len = k - cut;
                let left = self.values[..cut].iter().map(|&v| v - right_len).collect();
                let right = self.values[cut..].to_vec();
                (Permutation { values: left }, Permutation { values: right })
            })
            .collect()
    }

    /// Compact digit form (`4312`) when every value is a single digit.
    pub fn compact(&self) -> Option<String> {
        if self.len() > 9 {
            return None;
        }
        Some(self.values.iter().map(|v| v.to_string()).collect())
    }
}

/// A maximal ascending run, as 1-based inclusive positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layer {
    pub start: usize,
    pub end: usize,
}

impl Layer {
    pub fn size(&self) -> usize {
        self.end + 1 - self.start
    }
}

/// The permutation recording the relative order of a sequence of distinct
/// items.
pub fn normalize<T: Ord>(seq: &[T]) -> Result<Permutation, PermError> {
    if seq.is_empty() {
        return Err(PermError::Empty);
    }
    let mut order: Vec<usize> = (0..seq.len()).collect();
    order.sort_by(|&a, &b| seq[a].cmp(&seq[b]));
    let mut values = vec![0; seq.len()];
    for (rank, pair) in order.windows(2).enumerate() {
        if seq[pair[0]] == seq[pair[1]] {
            let (first, second) = (pair[0].min(pair[1]) + 1, pair[0].max(pair[1]) + 1);
            return Err(PermError::Duplicate { first, second });
        }
        values[pair[0]] = rank + 1;
    }
    values[*order.last().unwrap()] = seq.len();
    Ok(Permutation { values })
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts `4,3,1,2` and, for k <= 9, the compact digit form `4312`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let parse_err = |reason: &str| PermError::Parse {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        if text.is_empty() {
            return Err(PermError::Empty);
        }
        let values: Vec<usize> = if text.contains(',') {
            text.split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| parse_err(&e.to_string()))?
        } else if text.len() > 1 {
            if text.len() > 9 {
                return Err(parse_err("compact digit form is limited to k <= 9"));
            }
            text.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| parse_err("expected digits"))?
        } else {
            vec![text.parse::<usize>().map_err(|e| parse_err(&e.to_string()))?]
        };
        Permutation::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&[5, 9, 2]).unwrap(), p("231"));
        assert_eq!(normalize(&[10, 20, 30]).unwrap(), p("123"));
        assert_eq!(normalize(&[4, 3, 2]).unwrap(), p("321"));
    }

    #[test]
    fn normalize_errors() {
        assert_eq!(normalize::<i64>(&[]), Err(PermError::Empty));
        assert_eq!(
            normalize(&[3, 1, 3]),
            Err(PermError::Duplicate { first: 1, second: 3 })
        );
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(p("21").reverse(), p("12"));
        assert_eq!(p("1423").reverse(), p("3241"));
        assert_eq!(p("4312").reverse().reverse(), p("4312"));
    }

    #[test]
    fn remove_values_examples() {
        assert_eq!(p("4312").remove_values(&[1]).unwrap(), p("321"));
        assert_eq!(p("1423").remove_values(&[1, 2]).unwrap(), p("21"));
        assert_eq!(p("21").remove_values(&[1]).unwrap(), p("1"));
        assert_eq!(p("21").remove_values(&[1, 2]), Err(PermError::FullDeletion));
        assert_eq!(
            p("21").remove_values(&[3]),
            Err(PermError::MissingValue { value: 3 })
        );
    }

    #[test]
    fn peaks_examples() {
        assert!(p("4312").peaks().is_empty());
        assert_eq!(p("1423").peaks(), vec![2]);
        assert!(p("21").peaks().is_empty());
        assert_eq!(p("789623451").peaks(), vec![3, 8]);
    }

    #[test]
    fn layers_examples() {
        let layers = p("789623451").layers().unwrap();
        let sizes: Vec<usize> = layers.iter().map(Layer::size).collect();
        assert_eq!(sizes, vec![3, 1, 4, 1]);
        assert_eq!(layers[2], Layer { start: 5, end: 8 });

        let sizes: Vec<usize> = p("321").layers().unwrap().iter().map(Layer::size).collect();
        assert_eq!(sizes, vec![1, 1, 1]);
        assert_eq!(p("2314").layers(), None);
        assert_eq!(p("1").layers().unwrap().len(), 1);
    }

    #[test]
    fn direct_difference_examples() {
        assert_eq!(p("12").direct_difference(&p("21")), p("3421"));
        assert_eq!(p("1").direct_difference(&p("1")), p("21"));
        assert_eq!(p("123").direct_difference(&p("1")), p("2341"));
    }

    #[test]
    fn splits_recover_parts() {
        let splits = p("789623451").direct_difference_splits();
        assert_eq!(splits.len(), 3);
        assert_eq!(splits[0], (p("123"), p("623451")));
        assert!(p("1423").direct_difference_splits().is_empty());
    }

    #[test]
    fn parsing() {
        assert_eq!(p("4,3,1,2"), p("4312"));
        assert_eq!(p(" 10,9,8,7,6,5,4,3,2,1 ").len(), 10);
        assert_eq!(p("1"), Permutation::identity(1).unwrap());
        assert!("1,1".parse::<Permutation>().is_err());
        assert!("1,3".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
        assert!("12a".parse::<Permutation>().is_err());
        assert_eq!(p("3,1,2").to_string(), "3,1,2");
    }
}
