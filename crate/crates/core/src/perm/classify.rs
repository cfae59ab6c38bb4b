//! Exponent bounds for the polylogarithmic growth of `g(pi, n)`.
//!
//! The upper exponent follows the two extraction recursions (drop value 1 at
//! a cost of one log factor; drop values 1 and 2 at the same cost when they
//! are not adjacent). The lower exponent combines the peak-free and layered
//! closed forms with the constructive recursions: prepending or appending the
//! maximum adds one, a direct difference adds the exponents of its parts, and
//! a contiguous factor never has a larger exponent than the whole.
//!
//! The same interval bounds `P(pi, r)` as `r (log r)^e`.

use std::collections::HashMap;
use std::fmt;

use super::{Layer, PermError, Permutation};

/// Default cap on `k` for [`classify`]; the recursion visits every
/// normalized sub-pattern reachable by the rules.
pub const DEFAULT_CLASSIFY_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub pattern: Permutation,
    pub peaks: Vec<usize>,
    pub layers: Option<Vec<Layer>>,
    /// Non-final layers of size at least 2; only meaningful when layered.
    pub nonfinal_big_layers: usize,
    pub exponent_lb: Option<u32>,
    pub exponent_ub: u32,
}

impl Classification {
    pub fn is_layered(&self) -> bool {
        self.layers.is_some()
    }

    /// True when both bounds are known and agree.
    pub fn is_tight(&self) -> bool {
        self.exponent_lb == Some(self.exponent_ub)
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pattern {}", self.pattern)?;
        let peaks: Vec<String> = self.peaks.iter().map(|p| p.to_string()).collect();
        if peaks.is_empty() {
            writeln!(f, "peaks none")?;
        } else {
            writeln!(f, "peaks {}", peaks.join(","))?;
        }
        match &self.layers {
            Some(layers) => {
                let blocks: Vec<String> = layers
                    .iter()
                    .map(|l| {
                        self.pattern.values()[l.start - 1..l.end]
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                let sizes: Vec<String> = layers.iter().map(|l| l.size().to_string()).collect();
                writeln!(f, "layers {}", blocks.join(" | "))?;
                writeln!(f, "layer sizes {}", sizes.join(","))?;
                writeln!(f, "nonfinal layers of size >= 2: {}", self.nonfinal_big_layers)?;
            }
            None => writeln!(f, "layers not layered")?,
        }
        let lb = self
            .exponent_lb
            .map_or_else(|| "?".to_string(), |e| e.to_string());
        write!(f, "exponent {}..{}", lb, self.exponent_ub)
    }
}

/// Memoized classifier; reuse one across many patterns to share the
/// sub-pattern tables.
#[derive(Debug)]
pub struct Classifier {
    cap: usize,
    upper: HashMap<Vec<usize>, u32>,
    lower: HashMap<Vec<usize>, Option<u32>>,
}

impl Default for Classifier {
    fn default() -> Self {
        Self::with_cap(DEFAULT_CLASSIFY_CAP)
    }
}

impl Classifier {
    pub fn with_cap(cap: usize) -> Self {
        Classifier {
            cap,
            upper: HashMap::new(),
            lower: HashMap::new(),
        }
    }

    pub fn classify(&mut self, pi: &Permutation) -> Result<Classification, PermError> {
        if pi.len() > self.cap {
            return Err(PermError::TooLong {
                k: pi.len(),
                cap: self.cap,
            });
        }
        let layers = pi.layers();
        let nonfinal_big_layers = layers.as_deref().map_or(0, nonfinal_big);
        Ok(Classification {
            pattern: pi.clone(),
            peaks: pi.peaks(),
            layers,
            nonfinal_big_layers,
            exponent_lb: self.lower_exponent(pi),
            exponent_ub: self.upper_exponent(pi),
        })
    }

    pub fn upper_exponent(&mut self, pi: &Permutation) -> u32 {
        if let Some(&e) = self.upper.get(pi.values()) {
            return e;
        }
        let e = if pi.len() == 1 {
            0
        } else {
            let drop_one = pi.remove_values(&[1]).expect("k >= 2");
            let mut best = 1 + self.upper_exponent(&drop_one);
            if !pi.one_two_adjacent() {
                let drop_two = pi.remove_values(&[1, 2]).expect("k >= 3");
                best = best.min(1 + self.upper_exponent(&drop_two));
            }
            best
        };
        self.upper.insert(pi.values().to_vec(), e);
        e
    }

    pub fn lower_exponent(&mut self, pi: &Permutation) -> Option<u32> {
        if let Some(&e) = self.lower.get(pi.values()) {
            return e;
        }
        let k = pi.len();
        let e = if pi.peaks().is_empty() {
            Some(k as u32 - 1)
        } else if let Some(layers) = pi.layers() {
            Some((k - nonfinal_big(&layers) - 1) as u32)
        } else {
            let mut best: Option<u32> = None;
            let mut offer = |cand: Option<u32>| {
                if let Some(c) = cand {
                    best = Some(best.map_or(c, |b| b.max(c)));
                }
            };
            if pi.value_at(1) == k || pi.value_at(k) == k {
                let rest = pi.remove_values(&[k]).expect("k >= 2");
                offer(self.lower_exponent(&rest).map(|e| e + 1));
            }
            for (left, right) in pi.direct_difference_splits() {
                let l = self.lower_exponent(&left);
                let r = self.lower_exponent(&right);
                offer(l.zip(r).map(|(a, b)| a + b));
            }
            // A wave for pi contains a wave for each contiguous factor, so a
            // factor-free set is pi-free.
            let values = pi.values();
            for factor in [&values[1..], &values[..k - 1]] {
                let sub = super::normalize(factor).expect("distinct");
                offer(self.lower_exponent(&sub));
            }
            best
        };
        self.lower.insert(pi.values().to_vec(), e);
        e
    }
}

fn nonfinal_big(layers: &[Layer]) -> usize {
    layers[..layers.len() - 1]
        .iter()
        .filter(|l| l.size() >= 2)
        .count()
}

/// One-shot classification with the default cap.
pub fn classify(pi: &Permutation) -> Result<Classification, PermError> {
    Classifier::default().classify(pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn interval(s: &str) -> (Option<u32>, u32) {
        let c = classify(&p(s)).unwrap();
        (c.exponent_lb, c.exponent_ub)
    }

    #[test]
    fn fixtures() {
        assert_eq!(interval("4312"), (Some(3), 3));
        assert_eq!(interval("1423"), (Some(2), 2));
        assert_eq!(interval("789623451"), (Some(6), 6));
        assert_eq!(interval("1"), (Some(0), 0));
        assert_eq!(interval("21"), (Some(1), 1));
        // 132 and 231 are the smallest patterns with a peak.
        assert_eq!(interval("132").1, 1);
        assert_eq!(interval("231"), (Some(1), 1));
    }

    #[test]
    fn layered_fields() {
        let c = classify(&p("789623451")).unwrap();
        assert!(c.is_layered());
        assert_eq!(c.nonfinal_big_layers, 2);
        assert_eq!(c.peaks, vec![3, 8]);
        assert!(c.to_string().ends_with("exponent 6..6"));
    }

    #[test]
    fn cap_is_enforced() {
        let long = Permutation::descending(13).unwrap();
        assert_eq!(
            classify(&long),
            Err(PermError::TooLong { k: 13, cap: 12 })
        );
        assert!(Classifier::with_cap(13).classify(&long).is_ok());
    }

    #[test]
    fn exhaustive_interval_consistency() {
        let mut classifier = Classifier::default();
        for k in 1..=7 {
            for values in (1..=k).permutations(k) {
                let pi = Permutation::new(values).unwrap();
                let c = classifier.classify(&pi).unwrap();
                if let Some(lb) = c.exponent_lb {
                    assert!(lb <= c.exponent_ub, "{pi}: {lb} > {}", c.exponent_ub);
                }
                assert!(c.exponent_ub < k as u32);
                if c.peaks.is_empty() {
                    assert_eq!(c.exponent_lb, Some(k as u32 - 1), "{pi}");
                    assert_eq!(c.exponent_ub, k as u32 - 1, "{pi}");
                } else {
                    assert!(c.exponent_ub <= k as u32 - 2, "{pi}");
                }
                if c.is_layered() {
                    let e = (k - c.nonfinal_big_layers - 1) as u32;
                    assert_eq!((c.exponent_lb, c.exponent_ub), (Some(e), e), "{pi}");
                }
            }
        }
    }
}
