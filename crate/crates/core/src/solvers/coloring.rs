use std::fmt;

use thiserror::Error;

use crate::perm::Permutation;
use crate::waves::{find_wave_in, has_wave_ending_at, join, parse_points, IntSet, Mode, WaveWitness};

use super::{BudgetExceeded, NodeCounter, SearchLimits, SolverError, Status};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("color {color} at point {point} is outside 1..={palette}")]
    ColorOutOfRange { point: usize, color: u32, palette: u32 },
    #[error("palette must have at least one color")]
    EmptyPalette,
    #[error("cannot parse coloring from {0:?}")]
    Parse(String),
}

/// A total map `[M] -> [r]`, stored as the list of colors of `1..=M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    palette: u32,
    assignment: Vec<u32>,
}

impl Coloring {
    pub fn new(assignment: Vec<u32>, palette: u32) -> Result<Self, ColoringError> {
        if palette == 0 {
            return Err(ColoringError::EmptyPalette);
        }
        if let Some((i, &c)) = assignment
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c > palette)
        {
            return Err(ColoringError::ColorOutOfRange {
                point: i + 1,
                color: c,
                palette,
            });
        }
        Ok(Coloring {
            palette,
            assignment,
        })
    }

    /// Every point gets color 1.
    pub fn constant(domain: usize) -> Coloring {
        Coloring {
            palette: 1,
            assignment: vec![1; domain],
        }
    }

    /// Parses `1,1,2,...`; whitespace also separates. The palette defaults
    /// to the largest color used.
    pub fn parse(text: &str, palette: Option<u32>) -> Result<Self, ColoringError> {
        let normalized = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect::<Vec<_>>()
            .join(",");
        let colors = parse_points(&normalized)
            .map_err(|_| ColoringError::Parse(text.trim().to_string()))?;
        let colors: Vec<u32> = colors
            .into_iter()
            .map(u32::try_from)
            .collect::<Result<_, _>>()
            .map_err(|_| ColoringError::Parse(text.trim().to_string()))?;
        let r = palette.unwrap_or_else(|| colors.iter().copied().max().unwrap_or(1));
        Coloring::new(colors, r)
    }

    pub fn domain_size(&self) -> usize {
        self.assignment.len()
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// Color of the 1-based point `x`.
    pub fn color(&self, x: usize) -> u32 {
        self.assignment[x - 1]
    }

    /// Points of color `c`, as a subset of `[M]`.
    pub fn class(&self, c: u32) -> IntSet {
        let pts = (1..=self.assignment.len() as u64)
            .filter(|&x| self.assignment[x as usize - 1] == c)
            .collect();
        IntSet::new(pts, self.assignment.len() as u64).expect("points lie in the domain")
    }

    /// The first color class (by color) holding a wave, with its least wave.
    pub fn monochromatic_wave(&self, pi: &Permutation, mode: Mode) -> Option<(u32, WaveWitness)> {
        let mut classes = vec![Vec::new(); self.palette as usize + 1];
        for (i, &c) in self.assignment.iter().enumerate() {
            classes[c as usize].push(i as u64 + 1);
        }
        classes.iter().enumerate().skip(1).find_map(|(c, pts)| {
            find_wave_in(pts, pi, mode).map(|w| {
                let witness = WaveWitness::new(pi.clone(), w, mode).expect("verified by search");
                (c as u32, witness)
            })
        })
    }

    /// Restriction to the first `len` points.
    pub fn truncate(&self, len: usize) -> Coloring {
        Coloring {
            palette: self.palette,
            assignment: self.assignment[..len.min(self.assignment.len())].to_vec(),
        }
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let colors: Vec<u64> = self.assignment.iter().map(|&c| c as u64).collect();
        f.write_str(&join(&colors))
    }
}

/// Least `M` such that every `r`-coloring of `[M]` has a monochromatic wave.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringResult {
    pub pattern: Permutation,
    pub r: u32,
    /// `P(pi, r)` when exact; otherwise a lower bound.
    pub value: u64,
    /// Wave-free coloring of `[value - 1]`.
    pub extremal: Coloring,
    pub mode: Mode,
    pub status: Status,
    pub nodes: u64,
}

pub fn exact_p(pi: &Permutation, r: u32, mode: Mode) -> Result<ColoringResult, SolverError> {
    exact_p_with(pi, r, mode, SearchLimits::default())
}

/// Backtracking over colorings of `1, 2, 3, ...` in order.
///
/// Symmetry breaking: point 1 gets color 1, and color `c + 1` may appear only
/// after color `c` has. The search walks every wave-free coloring of every
/// prefix, so the deepest level reached is `P - 1`, and the first coloring to
/// reach it is the lexicographically least one among the canonical forms.
pub fn exact_p_with(
    pi: &Permutation,
    r: u32,
    mode: Mode,
    limits: SearchLimits,
) -> Result<ColoringResult, SolverError> {
    if r == 0 {
        return Err(SolverError::EmptyPalette);
    }
    let mut search = ColoringSearch {
        palette: r,
        mode,
        reversed: pi.reverse().values().to_vec(),
        counter: NodeCounter::new(limits),
        classes: vec![Vec::new(); r as usize + 1],
        assignment: Vec::new(),
        best: Vec::new(),
    };
    let status = match search.dfs(0) {
        Ok(()) => Status::Exact,
        Err(BudgetExceeded) => Status::Incomplete,
    };
    let extremal = Coloring::new(search.best, r).expect("colors stay in the palette");
    Ok(ColoringResult {
        pattern: pi.clone(),
        r,
        value: extremal.domain_size() as u64 + 1,
        extremal,
        mode,
        status,
        nodes: search.counter.nodes,
    })
}

struct ColoringSearch {
    palette: u32,
    mode: Mode,
    reversed: Vec<usize>,
    counter: NodeCounter,
    classes: Vec<Vec<u64>>,
    assignment: Vec<u32>,
    best: Vec<u32>,
}

impl ColoringSearch {
    fn dfs(&mut self, used: u32) -> Result<(), BudgetExceeded> {
        if self.assignment.len() > self.best.len() {
            self.best = self.assignment.clone();
        }
        let x = self.assignment.len() as u64 + 1;
        for c in 1..=(used + 1).min(self.palette) {
            self.counter.tick()?;
            let class = &self.classes[c as usize];
            if has_wave_ending_at(class, x, &self.reversed, self.mode) {
                continue;
            }
            self.classes[c as usize].push(x);
            self.assignment.push(c);
            self.dfs(used.max(c))?;
            self.assignment.pop();
            self.classes[c as usize].pop();
        }
        Ok(())
    }
}
