//! Domino tilings of an open `m x n` rectangle: the closed product formula
//! and an exact transfer-matrix count used to check it.
//!
//! These counts concern rectangles with free boundaries, not the periodic
//! lattices of the simulation.

use std::f64::consts::PI;

use num_bigint::BigUint;

use crate::error::CountError;

/// Largest short side accepted by [`count_tilings_dp`].
pub const DP_WIDTH_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingCount {
    pub m: usize,
    pub n: usize,
    pub count: BigUint,
}

/// Sum with Neumaier's compensation.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            carry += (sum - s) + t;
        } else {
            carry += (t - s) + sum;
        }
        sum = s;
    }
    sum + carry
}

/// `ln Z(m, n)` from the product over `2cos(pi j/(m+1)) + 2i cos(pi k/(n+1))`,
/// or `-inf` when the area is odd.
pub fn ln_tilings_product(m: usize, n: usize) -> f64 {
    if m * n % 2 == 1 {
        return f64::NEG_INFINITY;
    }
    let a: Vec<f64> = (1..=m)
        .map(|j| 2.0 * (PI * j as f64 / (m + 1) as f64).cos())
        .collect();
    let b: Vec<f64> = (1..=n)
        .map(|k| 2.0 * (PI * k as f64 / (n + 1) as f64).cos())
        .collect();
    let terms = a
        .iter()
        .flat_map(|&x| b.iter().map(move |&y| (x * x + y * y).ln()));
    0.25 * compensated_sum(terms)
}

/// Number of tilings from the product formula, as a real.
pub fn count_tilings_product(m: usize, n: usize) -> f64 {
    ln_tilings_product(m, n).exp()
}

/// `ln Z(m, n) / (m n)`; tends to Catalan's constant over pi.
pub fn catalan_density(m: usize, n: usize) -> f64 {
    ln_tilings_product(m, n) / (m * n) as f64
}

/// Catalan's constant divided by pi.
pub const CATALAN_OVER_PI: f64 = 0.915_965_594_177_219 / PI;

/// Exact count by a broken-profile sweep: cells are visited column by
/// column, and bit `r` of the state says whether row `r` of the current
/// column is already covered by a domino reaching in from the left (or from
/// the cell above within the column).
pub fn count_tilings_dp(m: usize, n: usize) -> Result<TilingCount, CountError> {
    let (h, w) = (m.min(n), m.max(n));
    if h > DP_WIDTH_LIMIT {
        return Err(CountError::TooLarge {
            m,
            n,
            limit: DP_WIDTH_LIMIT,
        });
    }
    let zero = BigUint::ZERO;
    if h == 0 {
        return Ok(TilingCount {
            m,
            n,
            count: BigUint::from(1u32),
        });
    }
    let states = 1usize << h;
    let mut cur = vec![zero.clone(); states];
    cur[0] = BigUint::from(1u32);
    let mut next = vec![zero.clone(); states];
    for c in 0..w {
        for r in 0..h {
            next.iter_mut().for_each(|x| *x = BigUint::ZERO);
            for s in 0..states {
                if cur[s] == zero {
                    continue;
                }
                let bit = 1 << r;
                if s & bit != 0 {
                    next[s & !bit] += &cur[s];
                    continue;
                }
                if c + 1 < w {
                    next[s | bit] += &cur[s];
                }
                if r + 1 < h && s & (bit << 1) == 0 {
                    next[s | (bit << 1)] += &cur[s];
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
    }
    Ok(TilingCount {
        m,
        n,
        count: cur[0].clone(),
    })
}
