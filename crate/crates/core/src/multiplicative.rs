//! Dimension bounds for the multiplicative liminf set and the planar cover of
//! the hyperbolic region `{x in [0,1]^2 : x_1 x_2 <= gamma}`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use thiserror::Error;

use crate::dimension_bounds::theoretical_dimension;
use crate::numerics::{dir_pow, Enclosure, NumericsError, Rational};

/// Largest `K` for which `gamma = 2^-K` covers are built; corners stay exact in `f64`.
pub const MAX_GAMMA_EXPONENT: u32 = 48;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiplicativeError {
    #[error("s = {0} is outside (1, 2]")]
    ExponentOutOfRange(Rational),
    #[error("gamma = 2^-{0} is below the supported 2^-{MAX_GAMMA_EXPONENT}")]
    GammaTooSmall(u32),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Lower and upper bounds on the dimension of the multiplicative set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultBounds {
    pub lower: Enclosure,
    pub upper: Enclosure,
    /// The lower bound was clamped at `d - 1` because `tau * alpha > 1`.
    pub clamped: bool,
}

/// `d - 1 + (1 - tau alpha)/(tau + 1)` and `d - 1 + 1/(tau + 1)`.
pub fn mult_bounds(tau: &Rational, alpha: &Enclosure, d: u32) -> MultBounds {
    let prec = alpha.prec();
    let base = Enclosure::from_int(d.saturating_sub(1), prec);
    let line = theoretical_dimension(tau, alpha, 1);
    let upper = &base + &Enclosure::from_ratio(&(tau + Rational::one()).recip(), prec);
    let lower = (&base + &line.value).min(&upper);
    MultBounds {
        lower,
        upper,
        clamped: line.clamped,
    }
}

/// Exponent of `q_j` in the cost of the cover: `d - s - tau (s - d + 1)`.
pub fn mult_cost_exponent(d: u32, tau: &Rational, s: &Rational) -> Rational {
    let d = int(d);
    &d - s - tau * (s - &d + Rational::one())
}

/// Axis-aligned closed square `[x, x + side] x [y, y + side]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Square {
    pub x: f64,
    pub y: f64,
    pub side: f64,
}

impl Square {
    pub fn contains(&self, px: f64, py: f64) -> bool {
        px >= self.x && px <= self.x + self.side && py >= self.y && py <= self.y + self.side
    }
}

/// A row of `count` equal squares of side `2^-side_exp` starting at `(x0, y0)`
/// along `x` (or along `y` when `vertical`).
#[derive(Clone, Debug, PartialEq)]
struct Row {
    x0: f64,
    y0: f64,
    side_exp: u32,
    count: u64,
    vertical: bool,
}

impl Row {
    fn side(&self) -> f64 {
        (-(self.side_exp as f64)).exp2()
    }

    fn square(&self, i: u64) -> Square {
        let side = self.side();
        let step = i as f64 * side;
        if self.vertical {
            Square { x: self.x0, y: self.y0 + step, side }
        } else {
            Square { x: self.x0 + step, y: self.y0, side }
        }
    }
}

/// Dyadic-column cover of `{x in [0,1]^2 : x_1 x_2 <= 2^-K}`.
///
/// Column `k` spans `x in [2^-(k+1), 2^-k]`, where the region lies below
/// `y = 2^(k+1-K)`, and is covered by squares of that side. Columns run while
/// `2^-(k+1) >= 2^-ceil(K/2)`; the mirrored rows handle small `x`, and one
/// corner square of side `2^-ceil(K/2)` covers the rest.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareCover {
    pub gamma_exp: u32,
    rows: Vec<Row>,
}

impl SquareCover {
    pub fn gamma(&self) -> f64 {
        (-(self.gamma_exp as f64)).exp2()
    }

    pub fn len(&self) -> u64 {
        self.rows.iter().map(|r| r.count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn squares(&self) -> impl Iterator<Item = Square> + '_ {
        self.rows.iter().flat_map(|r| (0..r.count).map(move |i| r.square(i)))
    }

    /// Whether some square of the cover contains `(x, y)`, by direct lookup
    /// of the candidate square in each row.
    pub fn covers(&self, x: f64, y: f64) -> bool {
        self.rows.iter().any(|r| {
            let side = r.side();
            let along = if r.vertical { y - r.y0 } else { x - r.x0 };
            if along < 0.0 {
                return false;
            }
            let i = ((along / side).floor() as u64).min(r.count.saturating_sub(1));
            [i.saturating_sub(1), i]
                .iter()
                .any(|&j| r.square(j).contains(x, y))
        })
    }

    /// `sum side^s` over all squares.
    pub fn s_cost(&self, s: &Rational, prec: u32) -> Result<Enclosure, NumericsError> {
        let two = BigUint::from(2u32);
        let mut total = Enclosure::from_int(0, prec);
        for r in &self.rows {
            let each = dir_pow(&two, &-(int(r.side_exp) * s), prec)?;
            total = &total + &each.scale(&int(r.count));
        }
        Ok(total)
    }
}

pub fn hyperbolic_cover(gamma_exp: u32, s: &Rational, prec: u32) -> Result<(SquareCover, Enclosure), MultiplicativeError> {
    if !s.is_positive() || s <= &Rational::one() || s > &int(2) {
        return Err(MultiplicativeError::ExponentOutOfRange(s.clone()));
    }
    if gamma_exp > MAX_GAMMA_EXPONENT {
        return Err(MultiplicativeError::GammaTooSmall(gamma_exp));
    }
    let k_max = gamma_exp.div_ceil(2);
    let mut rows = Vec::new();
    for k in 0..k_max {
        // side 2^(k+1-K) over a column of width 2^-(k+1)
        let side_exp = gamma_exp - k - 1;
        let count = 1u64 << (side_exp.saturating_sub(k + 1));
        let start = (-((k + 1) as f64)).exp2();
        for vertical in [false, true] {
            let (x0, y0) = if vertical { (0.0, start) } else { (start, 0.0) };
            rows.push(Row { x0, y0, side_exp, count, vertical });
        }
    }
    rows.push(Row { x0: 0.0, y0: 0.0, side_exp: k_max, count: 1, vertical: false });
    let cover = SquareCover { gamma_exp, rows };
    let cost = cover.s_cost(s, prec)?;
    Ok((cover, cost))
}
