//! Exact integer linear solves: sparse unit-triangular back-substitution and
//! a general elimination by unimodular row operations. Both run in checked
//! `i128` first and redo the work with big integers on overflow.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) trait ExactInt: Clone + PartialEq + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    /// Floor division with remainder; `None` on overflow.
    fn div_rem(&self, o: &Self) -> Option<(Self, Self)>;
    fn cmp_abs(&self, o: &Self) -> Ordering;
    fn to_i64(&self) -> Option<i64>;
}

impl ExactInt for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_rem(&self, o: &Self) -> Option<(Self, Self)> {
        if *self == i128::MIN || *o == i128::MIN {
            return None;
        }
        Some(Integer::div_mod_floor(self, o))
    }
    fn cmp_abs(&self, o: &Self) -> Ordering {
        self.unsigned_abs().cmp(&o.unsigned_abs())
    }
    fn to_i64(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
}

impl ExactInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_rem(&self, o: &Self) -> Option<(Self, Self)> {
        Some(Integer::div_mod_floor(self, o))
    }
    fn cmp_abs(&self, o: &Self) -> Ordering {
        self.abs().cmp(&o.abs())
    }
    fn to_i64(&self) -> Option<i64> {
        ToPrimitive::to_i64(self)
    }
}

enum Failure {
    Overflow,
    Fatal(Error),
}

fn narrow<R: ExactInt>(values: Vec<R>, col: usize) -> Result<Vec<i64>> {
    values
        .iter()
        .enumerate()
        .map(|(row, v)| v.to_i64().ok_or(Error::CoefficientOverflow { row, col }))
        .collect()
}

/// Solves `sum_{j in above[i]} c_j + c_i = rhs_i` for all `i`, where every
/// `j` in `above[i]` comes after `i` in `order`. `order` lists the unknowns;
/// they are resolved from last to first.
pub fn solve_unit_triangular(order: &[usize], above: &[Vec<usize>], rhs: &[i64], col: usize) -> Result<Vec<i64>> {
    fn run<R: ExactInt>(order: &[usize], above: &[Vec<usize>], rhs: &[i64]) -> Option<Vec<R>> {
        let mut c = vec![R::zero(); rhs.len()];
        for &i in order.iter().rev() {
            let mut v = R::from_i64(rhs[i]);
            for &j in &above[i] {
                v = v.sub(&c[j])?;
            }
            c[i] = v;
        }
        Some(c)
    }
    match run::<i128>(order, above, rhs) {
        Some(c) => narrow(c, col),
        None => narrow(run::<BigInt>(order, above, rhs).expect("big integers do not overflow"), col),
    }
}

/// Checks that every `j` in `above[i]` is placed after `i` by `order`.
pub fn is_unit_triangular(order: &[usize], above: &[Vec<usize>]) -> bool {
    let mut position = vec![usize::MAX; above.len()];
    for (p, &i) in order.iter().enumerate() {
        position[i] = p;
    }
    order.len() == above.len()
        && position.iter().all(|&p| p != usize::MAX)
        && above
            .iter()
            .enumerate()
            .all(|(i, js)| js.iter().all(|&j| j != i && position[j] > position[i]))
}

/// Solves `A X = B` over the integers for square `A` (rows of `A`, columns
/// of `B`). Fails if `A` is singular or some solution is not integral.
pub fn solve_integer(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    match eliminate::<i128>(a, b) {
        Ok(x) => x.into_iter().enumerate().map(|(k, col)| narrow(col, k)).collect(),
        Err(Failure::Fatal(e)) => Err(e),
        Err(Failure::Overflow) => match eliminate::<BigInt>(a, b) {
            Ok(x) => x.into_iter().enumerate().map(|(k, col)| narrow(col, k)).collect(),
            Err(Failure::Fatal(e)) => Err(e),
            Err(Failure::Overflow) => unreachable!("big integers do not overflow"),
        },
    }
}

fn eliminate<R: ExactInt>(a: &[Vec<i64>], b: &[Vec<i64>]) -> std::result::Result<Vec<Vec<R>>, Failure> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) || b.iter().any(|c| c.len() != n) {
        return Err(Failure::Fatal(Error::Usage("system is not square".into())));
    }
    let k = b.len();
    // augmented rows: n coefficients followed by k right-hand sides
    let mut m: Vec<Vec<R>> = (0..n)
        .map(|i| {
            a[i].iter()
                .map(|&v| R::from_i64(v))
                .chain(b.iter().map(|col| R::from_i64(col[i])))
                .collect()
        })
        .collect();
    let ov = || Failure::Overflow;

    for col in 0..n {
        loop {
            let pivot = (col..n)
                .filter(|&r| !m[r][col].is_zero())
                .min_by(|&x, &y| m[x][col].cmp_abs(&m[y][col]));
            let Some(p) = pivot else {
                return Err(Failure::Fatal(Error::Verification(format!(
                    "evaluation matrix is singular at column {col}"
                ))));
            };
            m.swap(col, p);
            let mut done = true;
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let (q, rem) = m[r][col].div_rem(&m[col][col]).ok_or_else(ov)?;
                for c in col..n + k {
                    let t = q.mul(&m[col][c]).ok_or_else(ov)?;
                    m[r][c] = m[r][c].sub(&t).ok_or_else(ov)?;
                }
                if !rem.is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
    }

    let mut x = vec![vec![R::zero(); n]; k];
    for (j, xj) in x.iter_mut().enumerate() {
        for i in (0..n).rev() {
            let mut v = m[i][n + j].clone();
            for c in i + 1..n {
                let t = m[i][c].mul(&xj[c]).ok_or_else(ov)?;
                v = v.sub(&t).ok_or_else(ov)?;
            }
            let (q, rem) = v.div_rem(&m[i][i]).ok_or_else(ov)?;
            if !rem.is_zero() {
                return Err(Failure::Fatal(Error::Verification(format!(
                    "solution column {j} is not integral at row {i}"
                ))));
            }
            xj[i] = q;
        }
    }
    Ok(x)
}

/// Is `|v|` a power of two (`1, 2, 4, ...`)?
pub fn is_signed_power_of_two(v: i64) -> bool {
    v != 0 && v.unsigned_abs().is_power_of_two()
}
