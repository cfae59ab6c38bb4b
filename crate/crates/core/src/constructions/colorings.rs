use crate::perm::Permutation;
use crate::solvers::Coloring;
use crate::waves::Mode;

use super::{check_output, require_wave_free, ConstructionError};

/// Three-block coloring of `[2p + q]` with palette `2r`, where `p = |c0|`
/// and `q = |c0p|`.
///
/// Block L repeats `c0`, block M repeats `c0` shifted up by `r`, block R
/// repeats `c0p`. Requires `pi` to start with its maximum `k`; `c0` must
/// avoid `pi`-waves and `c0p` must avoid waves of `pi` with `k` removed. The
/// palette `r` is the larger of the two input palettes.
pub fn ezconst_coloring(
    pi: &Permutation,
    c0: &Coloring,
    c0p: &Coloring,
    mode: Mode,
) -> Result<Coloring, ConstructionError> {
    let k = pi.len();
    if k < 2 {
        return Err(ConstructionError::PatternTooShort(pi.clone()));
    }
    if pi.value_at(1) != k {
        return Err(ConstructionError::NotLeadingMax(pi.clone()));
    }
    let rest = pi.remove_values(&[k]).expect("k >= 2 leaves a value");
    require_wave_free("first", c0, pi, mode)?;
    require_wave_free("second", c0p, &rest, mode)?;

    let r = c0.palette().max(c0p.palette());
    let assignment: Vec<u32> = c0
        .assignment()
        .iter()
        .copied()
        .chain(c0.assignment().iter().map(|&c| c + r))
        .chain(c0p.assignment().iter().copied())
        .collect();
    let out = Coloring::new(assignment, 2 * r).expect("colors stay below 2r");
    check_output(&out, pi, mode)?;
    Ok(out)
}

/// Splits `x` in `[m_L * m_R]` as `x = m_R (a-1) + (m_R/5)(b-1) + c` with
/// `b` in `1..=5` and `c` in `1..=m_R/5`. `m_r` must be a positive multiple of 5.
pub fn decompose(x: u64, m_r: u64) -> (u64, u64, u64) {
    let step = m_r / 5;
    let y = x - 1;
    (y / m_r + 1, y % m_r / step + 1, y % step + 1)
}

/// Inverse of [`decompose`].
pub fn compose(a: u64, b: u64, c: u64, m_r: u64) -> u64 {
    m_r * (a - 1) + m_r / 5 * (b - 1) + c
}

/// Product coloring of `[m_L * m_R]` with palette `5 m^2`.
///
/// Point `x = (a, b, c)` (see [`decompose`]) gets the triple
/// `(cl(a), cr(c), b)`, flattened to `((cl(a)-1) m + cr(c)-1) 5 + b`. Both
/// inputs must use colors in `1..=m` and avoid weak waves of their own
/// pattern; the output is checked to avoid weak `pi_l ⊖ pi_r`-waves.
pub fn product_coloring(
    pi_l: &Permutation,
    pi_r: &Permutation,
    m: u32,
    cl: &Coloring,
    cr: &Coloring,
) -> Result<Coloring, ConstructionError> {
    let m_r = cr.domain_size();
    if m_r == 0 || !m_r.is_multiple_of(5) {
        return Err(ConstructionError::NotMultipleOfFive(m_r));
    }
    for (input, coloring) in [("left", cl), ("right", cr)] {
        if let Some(&color) = coloring.assignment().iter().find(|&&c| c > m) {
            return Err(ConstructionError::PaletteOverflow {
                input,
                color,
                palette: m,
            });
        }
    }
    require_wave_free("left", cl, pi_l, Mode::Weak)?;
    require_wave_free("right", cr, pi_r, Mode::Weak)?;

    let total = (cl.domain_size() * m_r) as u64;
    let assignment = (1..=total)
        .map(|x| {
            let (a, b, c) = decompose(x, m_r as u64);
            let left = cl.color(a as usize) - 1;
            let right = cr.color(c as usize) - 1;
            (left * m + right) * 5 + b as u32
        })
        .collect();
    let out = Coloring::new(assignment, 5 * m * m).expect("flattened triples fit 5 m^2");
    check_output(&out, &pi_l.direct_difference(pi_r), Mode::Weak)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::exact_p;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn ezconst_small_example() {
        let out = ezconst_coloring(&p("21"), &Coloring::constant(3), &Coloring::constant(1), Mode::Strict).unwrap();
        assert_eq!(out.assignment(), &[1, 1, 1, 2, 2, 2, 1]);
        assert_eq!(out.palette(), 2);
    }

    #[test]
    fn ezconst_rejects_bad_input() {
        let one = Coloring::constant(1);
        assert_eq!(
            ezconst_coloring(&p("12"), &one, &one, Mode::Strict),
            Err(ConstructionError::NotLeadingMax(p("12")))
        );
        assert!(matches!(
            ezconst_coloring(&p("21"), &Coloring::constant(4), &one, Mode::Strict),
            Err(ConstructionError::Precondition { input: "first", .. })
        ));
        assert!(matches!(
            ezconst_coloring(&p("21"), &one, &Coloring::constant(2), Mode::Strict),
            Err(ConstructionError::Precondition { input: "second", .. })
        ));
        assert_eq!(
            ezconst_coloring(&p("1"), &one, &one, Mode::Strict),
            Err(ConstructionError::PatternTooShort(p("1")))
        );
    }

    #[test]
    fn ezconst_size_law_from_extremal_colorings() {
        for (s, mode) in [("21", Mode::Strict), ("21", Mode::Weak), ("312", Mode::Strict), ("321", Mode::Weak)] {
            let pi = p(s);
            let rest = pi.remove_values(&[pi.len()]).unwrap();
            for r in 1..=2 {
                let c0 = exact_p(&pi, r, mode).unwrap().extremal;
                let c0p = exact_p(&rest, r, mode).unwrap().extremal;
                let out = ezconst_coloring(&pi, &c0, &c0p, mode).unwrap();
                assert_eq!(out.domain_size(), 2 * c0.domain_size() + c0p.domain_size());
                assert_eq!(out.palette(), 2 * r);
            }
        }
    }

    #[test]
    fn decomposition_round_trips() {
        assert_eq!(decompose(17, 10), (2, 4, 1));
        assert_eq!(decompose(1, 10), (1, 1, 1));
        for m_r in [5u64, 10, 15] {
            let mut seen = std::collections::HashSet::new();
            for x in 1..=4 * m_r {
                let (a, b, c) = decompose(x, m_r);
                assert!((1..=5).contains(&b) && (1..=m_r / 5).contains(&c));
                assert_eq!(compose(a, b, c, m_r), x);
                assert!(seen.insert((a, b, c)));
            }
        }
    }

    #[test]
    fn product_rejects_bad_block() {
        let c = Coloring::new(vec![1, 2, 1, 2, 1, 2, 1], 2).unwrap();
        assert_eq!(
            product_coloring(&p("21"), &p("21"), 2, &c, &c),
            Err(ConstructionError::NotMultipleOfFive(7))
        );
        let five = Coloring::new(vec![1, 2, 3, 1, 2], 3).unwrap();
        assert!(matches!(
            product_coloring(&p("21"), &p("21"), 2, &five, &five),
            Err(ConstructionError::PaletteOverflow { color: 3, .. })
        ));
    }

    #[test]
    fn product_of_weak_extremal_colorings() {
        let pi = p("21");
        let m = 2;
        let cl = exact_p(&pi, m, Mode::Weak).unwrap().extremal;
        let cr = cl.truncate(cl.domain_size() / 5 * 5);
        let out = product_coloring(&pi, &pi, m, &cl, &cr).unwrap();
        assert_eq!(out.domain_size(), cl.domain_size() * cr.domain_size());
        assert_eq!(out.palette(), 20);
        assert!(out.monochromatic_wave(&p("4321"), Mode::Weak).is_none());
    }
}
