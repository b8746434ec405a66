//! Linear algebra over the two-element field on single machine words.
//!
//! Every vector space handled here has dimension at most 64, so a vector is
//! one `u64` mask plus its width. Subspaces are kept in fully reduced
//! row-echelon form, which makes the basis unique: two handles describe the
//! same subspace exactly when they compare equal.

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

pub const MAX_WIDTH: usize = 64;

#[inline]
fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

#[inline]
fn parity(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// Iterator over the indices of the set bits of a word, lowest first.
#[derive(Clone, Copy)]
pub struct Bits(u64);

impl Iterator for Bits {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

pub fn bits(mask: u64) -> Bits {
    Bits(mask)
}

/// A vector of `F_2^width`. Addition is exclusive-or.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    width: u8,
    mask: u64,
}

impl BitVector {
    pub fn new(width: usize, mask: u64) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::WidthTooLarge(width));
        }
        if mask & !low_mask(width) != 0 {
            return Err(Error::Domain(format!(
                "mask {mask:#x} has bits above width {width}"
            )));
        }
        Ok(Self {
            width: width as u8,
            mask,
        })
    }

    /// Builds a vector, silently discarding bits above `width`.
    pub fn truncated(width: usize, mask: u64) -> Self {
        assert!(width <= MAX_WIDTH);
        Self {
            width: width as u8,
            mask: mask & low_mask(width),
        }
    }

    pub fn zero(width: usize) -> Self {
        Self::truncated(width, 0)
    }

    pub fn unit(width: usize, index: usize) -> Self {
        assert!(index < width, "unit index {index} out of range for width {width}");
        Self::truncated(width, 1 << index)
    }

    pub fn from_indices(width: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zero(width);
        for i in indices {
            v += Self::unit(width, i);
        }
        v
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width as usize
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.mask == 0
    }

    #[inline]
    pub fn bit(&self, index: usize) -> bool {
        index < 64 && (self.mask >> index) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn support(&self) -> Bits {
        bits(self.mask)
    }

    /// Standard dot product `sum_i u_i v_i`.
    pub fn dot(&self, other: &Self) -> bool {
        parity(self.mask & other.mask)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_width(other)?;
        Ok(*self + *other)
    }

    pub(crate) fn same_width(&self, other: &Self) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width(),
                found: other.width(),
            });
        }
        Ok(())
    }
}

impl Add for BitVector {
    type Output = BitVector;

    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.width, rhs.width);
        Self {
            width: self.width,
            mask: self.mask ^ rhs.mask,
        }
    }
}

impl AddAssign for BitVector {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

/// Prints the 1-based support, e.g. `{1,3}`; the zero vector prints as `0`.
impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        f.write_str("{")?;
        for (k, i) in self.support().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self, self.width)
    }
}

/// An alternating bilinear form, stored as one row of pairing partners per
/// coordinate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymplecticForm {
    width: usize,
    rows: Vec<u64>,
    radical_dim: usize,
}

impl SymplecticForm {
    pub fn new(rows: Vec<u64>) -> Result<Self> {
        let width = rows.len();
        if width > MAX_WIDTH {
            return Err(Error::WidthTooLarge(width));
        }
        for (i, &row) in rows.iter().enumerate() {
            if row & !low_mask(width) != 0 {
                return Err(Error::InvalidForm(format!("row {i} has bits above the width")));
            }
            if (row >> i) & 1 == 1 {
                return Err(Error::InvalidForm(format!("nonzero diagonal at {i}")));
            }
            for j in bits(row) {
                if (rows[j] >> i) & 1 == 0 {
                    return Err(Error::InvalidForm(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        let radical_dim = null_space(width, &rows).dim();
        Ok(Self {
            width,
            rows,
            radical_dim,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical_dim == 0
    }

    /// The functional `x -> <x, v>` as a dot-product mask.
    pub fn functional(&self, v: &BitVector) -> u64 {
        v.support().fold(0, |acc, i| acc ^ self.rows[i])
    }

    pub fn pair(&self, u: &BitVector, v: &BitVector) -> bool {
        parity(self.functional(v) & u.mask())
    }

    pub fn is_isotropic(&self, l: &SubspaceHandle) -> bool {
        let basis = l.basis();
        basis
            .iter()
            .enumerate()
            .all(|(i, u)| basis[i + 1..].iter().all(|v| !self.pair(u, v)))
    }
}

/// A subspace of `F_2^width` in fully reduced row-echelon form.
///
/// The pivot of a row is its lowest set bit; rows are sorted by pivot and
/// every pivot column is zero in all other rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SubspaceHandle {
    width: usize,
    rows: Vec<u64>,
}

impl SubspaceHandle {
    pub fn zero(width: usize) -> Self {
        assert!(width <= MAX_WIDTH);
        Self {
            width,
            rows: Vec::new(),
        }
    }

    pub fn whole(width: usize) -> Self {
        assert!(width <= MAX_WIDTH);
        Self {
            width,
            rows: (0..width).map(|i| 1u64 << i).collect(),
        }
    }

    /// Span of `vectors` inside `F_2^width`.
    pub fn span(width: usize, vectors: &[BitVector]) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::WidthTooLarge(width));
        }
        for v in vectors {
            if v.width() != width {
                return Err(Error::WidthMismatch {
                    expected: width,
                    found: v.width(),
                });
            }
        }
        Ok(Self::from_masks(width, vectors.iter().map(|v| v.mask())))
    }

    pub(crate) fn from_masks(width: usize, masks: impl IntoIterator<Item = u64>) -> Self {
        let mut s = Self::zero(width);
        for m in masks {
            s.insert_mask(m);
        }
        s
    }

    fn reduce_mask(&self, mut m: u64) -> u64 {
        for &r in &self.rows {
            let p = r.trailing_zeros();
            if (m >> p) & 1 == 1 {
                m ^= r;
            }
        }
        m
    }

    /// Adds `m` to the spanning set; returns whether the dimension grew.
    pub(crate) fn insert_mask(&mut self, m: u64) -> bool {
        let r = self.reduce_mask(m);
        if r == 0 {
            return false;
        }
        let p = r.trailing_zeros();
        for row in &mut self.rows {
            if (*row >> p) & 1 == 1 {
                *row ^= r;
            }
        }
        let at = self.rows.partition_point(|x| x.trailing_zeros() < p);
        self.rows.insert(at, r);
        true
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn basis(&self) -> Vec<BitVector> {
        self.rows
            .iter()
            .map(|&r| BitVector::truncated(self.width, r))
            .collect()
    }

    /// Pivot positions, strictly increasing.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.trailing_zeros() as usize).collect()
    }

    pub fn contains(&self, v: &BitVector) -> Result<bool> {
        if v.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: v.width(),
            });
        }
        Ok(self.contains_mask(v.mask()))
    }

    #[inline]
    pub fn contains_mask(&self, m: u64) -> bool {
        self.reduce_mask(m) == 0
    }

    pub fn with(&self, v: &BitVector) -> Result<Self> {
        let mut s = self.clone();
        if v.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: v.width(),
            });
        }
        s.insert_mask(v.mask());
        Ok(s)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let mut s = self.clone();
        for &r in &other.rows {
            s.insert_mask(r);
        }
        Ok(s)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.width == other.width && self.rows.iter().all(|&r| other.contains_mask(r))
    }

    /// `{x : x . l = 0 for all l}` for the standard dot product.
    pub fn annihilator(&self) -> Self {
        null_space(self.width, &self.rows)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let both = self.annihilator().sum(&other.annihilator())?;
        Ok(both.annihilator())
    }

    /// `{x : <x, l> = 0 for all l in self}`. Requires a nondegenerate form.
    pub fn perp(&self, form: &SymplecticForm) -> Result<Self> {
        if form.width() != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: form.width(),
            });
        }
        if !form.is_nondegenerate() {
            return Err(Error::DegenerateForm {
                radical_dim: form.radical_dim,
            });
        }
        let functionals: Vec<u64> = self.basis().iter().map(|b| form.functional(b)).collect();
        Ok(null_space(self.width, &functionals))
    }

    /// All `2^dim` elements, in Gray-code order starting at zero.
    pub fn elements(&self) -> impl Iterator<Item = BitVector> + '_ {
        let dim = self.rows.len();
        assert!(dim < 32, "refusing to enumerate a subspace of dimension {dim}");
        let mut cur = 0u64;
        (0u64..1 << dim).map(move |i| {
            if i > 0 {
                cur ^= self.rows[i.trailing_zeros() as usize];
            }
            BitVector::truncated(self.width, cur)
        })
    }

    pub fn element_masks(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self.elements().map(|v| v.mask()).collect();
        out.sort_unstable();
        out
    }

    fn check_width(&self, other: &Self) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        Ok(())
    }
}

impl fmt::Display for SubspaceHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (k, b) in self.basis().iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(">")
    }
}

/// Null space of the dot-product functionals given by `functionals`.
pub(crate) fn null_space(width: usize, functionals: &[u64]) -> SubspaceHandle {
    let rowspace = SubspaceHandle::from_masks(width, functionals.iter().copied());
    let pivot_cols: u64 = rowspace.rows.iter().fold(0, |acc, r| acc | (r & r.wrapping_neg()));
    let free = low_mask(width) & !pivot_cols;
    let mut out = SubspaceHandle::zero(width);
    for c in bits(free) {
        let mut x = 1u64 << c;
        for &r in &rowspace.rows {
            if (r >> c) & 1 == 1 {
                x |= r & r.wrapping_neg();
            }
        }
        out.insert_mask(x);
    }
    out
}

pub fn span(vectors: &[BitVector]) -> Result<SubspaceHandle> {
    let width = vectors.first().map_or(0, BitVector::width);
    SubspaceHandle::span(width, vectors)
}

pub fn contains(l: &SubspaceHandle, v: &BitVector) -> Result<bool> {
    l.contains(v)
}

pub fn perp(l: &SubspaceHandle, form: &SymplecticForm) -> Result<SubspaceHandle> {
    l.perp(form)
}

pub fn radical(form: &SymplecticForm) -> SubspaceHandle {
    null_space(form.width(), form.rows())
}

/// Quotient of `F_2^width` by the line spanned by `killed`.
///
/// Coset representatives are normalized by clearing the bit at `pivot`, the
/// highest set bit of `killed`; the quotient is given coordinates by deleting
/// that position, so it has width `width - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QuotientMap {
    width: usize,
    killed: u64,
    pivot: usize,
}

impl QuotientMap {
    pub fn new(killed: BitVector) -> Result<Self> {
        if killed.is_zero() {
            return Err(Error::Domain("cannot quotient by the zero vector".into()));
        }
        Ok(Self {
            width: killed.width(),
            killed: killed.mask(),
            pivot: 63 - killed.mask().leading_zeros() as usize,
        })
    }

    pub fn ambient_width(&self) -> usize {
        self.width
    }

    pub fn quotient_width(&self) -> usize {
        self.width - 1
    }

    pub fn killed(&self) -> BitVector {
        BitVector::truncated(self.width, self.killed)
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    /// The representative of `v + F killed` whose pivot bit is clear.
    pub fn canonical(&self, v: &BitVector) -> Result<BitVector> {
        self.check(v.width(), self.width)?;
        Ok(BitVector::truncated(self.width, self.canonical_mask(v.mask())))
    }

    #[inline]
    fn canonical_mask(&self, m: u64) -> u64 {
        if (m >> self.pivot) & 1 == 1 {
            m ^ self.killed
        } else {
            m
        }
    }

    #[inline]
    pub(crate) fn project_mask(&self, m: u64) -> u64 {
        let c = self.canonical_mask(m);
        let low = c & low_mask(self.pivot);
        let high = c.checked_shr(self.pivot as u32 + 1).unwrap_or(0) << self.pivot;
        low | high
    }

    #[inline]
    pub(crate) fn lift_mask(&self, m: u64) -> u64 {
        let low = m & low_mask(self.pivot);
        let high = (m >> self.pivot) << (self.pivot + 1);
        low | high
    }

    pub fn project(&self, v: &BitVector) -> Result<BitVector> {
        self.check(v.width(), self.width)?;
        Ok(BitVector::truncated(self.width - 1, self.project_mask(v.mask())))
    }

    /// Section of `project`: the canonical representative of a coset.
    pub fn lift(&self, w: &BitVector) -> Result<BitVector> {
        self.check(w.width(), self.width - 1)?;
        Ok(BitVector::truncated(self.width, self.lift_mask(w.mask())))
    }

    pub fn project_subspace(&self, l: &SubspaceHandle) -> Result<SubspaceHandle> {
        self.check(l.width(), self.width)?;
        Ok(SubspaceHandle::from_masks(
            self.width - 1,
            l.rows().iter().map(|&r| self.project_mask(r)),
        ))
    }

    /// Full preimage of a subspace of the quotient.
    pub fn preimage(&self, l: &SubspaceHandle) -> Result<SubspaceHandle> {
        self.check(l.width(), self.width - 1)?;
        let mut s = SubspaceHandle::from_masks(self.width, l.rows().iter().map(|&r| self.lift_mask(r)));
        s.insert_mask(self.killed);
        Ok(s)
    }

    fn check(&self, found: usize, expected: usize) -> Result<()> {
        if found != expected {
            return Err(Error::WidthMismatch { expected, found });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cycle_form(n: usize) -> SymplecticForm {
        let rows = (0..n)
            .map(|i| (1u64 << ((i + 1) % n)) | (1u64 << ((i + n - 1) % n)))
            .collect();
        SymplecticForm::new(rows).unwrap()
    }

    fn path_form(n: usize) -> SymplecticForm {
        let rows = (0..n)
            .map(|i| {
                let mut r = 0;
                if i + 1 < n {
                    r |= 1 << (i + 1);
                }
                if i > 0 {
                    r |= 1 << (i - 1);
                }
                r
            })
            .collect();
        SymplecticForm::new(rows).unwrap()
    }

    fn v(width: usize, idx: &[usize]) -> BitVector {
        BitVector::from_indices(width, idx.iter().map(|i| i - 1))
    }

    #[test]
    fn span_of_nothing_is_zero() {
        let s = SubspaceHandle::span(4, &[]).unwrap();
        assert_eq!(s.dim(), 0);
        assert!(s.contains(&BitVector::zero(4)).unwrap());
    }

    #[test]
    fn span_is_idempotent() {
        let x = v(4, &[1, 3]);
        assert_eq!(span(&[x, x]).unwrap().dim(), 1);
    }

    #[test]
    fn span_width_mismatch() {
        let err = span(&[BitVector::zero(3), BitVector::zero(4)]).unwrap_err();
        assert!(matches!(err, Error::WidthMismatch { .. }));
    }

    // N = 5 quotient: coordinates beta_1..beta_4, beta_5 = all ones.
    #[test]
    fn span_elements_n5() {
        let b123 = v(4, &[1, 2, 3]);
        let b2 = v(4, &[2]);
        let s = span(&[b123, b2]).unwrap();
        let mut got = s.element_masks();
        got.sort();
        let mut want = vec![0, b123.mask(), b2.mask(), v(4, &[1, 3]).mask()];
        want.sort();
        assert_eq!(got, want);
        assert!(s.contains(&v(4, &[1, 3])).unwrap());
        assert!(!span(&[v(4, &[1])]).unwrap().contains(&v(4, &[2])).unwrap());
    }

    #[test]
    fn perp_in_dimension_two() {
        // N = 3 quotient: the form on beta_1, beta_2 pairs them.
        let form = path_form(2);
        let l = span(&[v(2, &[1])]).unwrap();
        assert_eq!(l.perp(&form).unwrap(), l);
        assert_eq!(SubspaceHandle::zero(2).perp(&form).unwrap(), SubspaceHandle::whole(2));
    }

    #[test]
    fn perp_rejects_degenerate_form() {
        let form = cycle_form(5);
        let err = SubspaceHandle::zero(5).perp(&form).unwrap_err();
        assert!(matches!(err, Error::DegenerateForm { radical_dim: 1 }));
    }

    #[test]
    fn radicals() {
        assert_eq!(radical(&cycle_form(5)), span(&[BitVector::truncated(5, 0b11111)]).unwrap());
        assert_eq!(radical(&path_form(4)).dim(), 0);
        // path on three vertices
        assert_eq!(radical(&path_form(3)), span(&[v(3, &[1, 3])]).unwrap());
    }

    #[test]
    fn form_validation() {
        assert!(SymplecticForm::new(vec![0b01]).is_err());
        assert!(SymplecticForm::new(vec![0b10, 0b00]).is_err());
    }

    #[test]
    fn quotient_projection() {
        let q = QuotientMap::new(BitVector::truncated(5, 0b11111)).unwrap();
        assert_eq!(q.pivot(), 4);
        assert!(q.project(&q.killed()).unwrap().is_zero());
        // pi(e_5) is e_1 + ... + e_4 with pivot 5 cleared
        assert_eq!(q.canonical(&v(5, &[5])).unwrap(), v(5, &[1, 2, 3, 4]));
        assert_eq!(q.project(&v(5, &[5])).unwrap(), v(4, &[1, 2, 3, 4]));
    }

    #[test]
    fn quotient_by_inner_vector() {
        // killed = beta_1 + beta_3 in width 4: pivot is 2 (0-based)
        let q = QuotientMap::new(v(4, &[1, 3])).unwrap();
        assert_eq!(q.pivot(), 2);
        assert!(q.project(&v(4, &[1, 3])).unwrap().is_zero());
        assert_eq!(q.project(&v(4, &[3])).unwrap(), v(3, &[1]));
        assert_eq!(q.project(&v(4, &[4])).unwrap(), v(3, &[3]));
        let pre = q.preimage(&SubspaceHandle::zero(3)).unwrap();
        assert_eq!(pre, span(&[v(4, &[1, 3])]).unwrap());
    }

    #[test]
    fn intersection() {
        let a = span(&[v(4, &[1]), v(4, &[2])]).unwrap();
        let b = span(&[v(4, &[1, 2]), v(4, &[3])]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), span(&[v(4, &[1, 2])]).unwrap());
    }

    fn arb_subspace(width: usize) -> impl Strategy<Value = SubspaceHandle> {
        proptest::collection::vec(0u64..(1 << width), 0..width + 2)
            .prop_map(move |ms| SubspaceHandle::from_masks(width, ms))
    }

    proptest! {
        #[test]
        fn closure_and_cardinality(l in arb_subspace(10)) {
            let elems = l.element_masks();
            prop_assert_eq!(elems.len(), 1usize << l.dim());
            let members: std::collections::HashSet<u64> = elems.iter().copied().collect();
            prop_assert_eq!(members.len(), elems.len());
            for &a in &elems {
                for &b in &elems {
                    prop_assert!(l.contains_mask(a ^ b));
                }
            }
            let count = (0u64..1 << 10).filter(|&m| l.contains_mask(m)).count();
            prop_assert_eq!(count, 1usize << l.dim());
        }

        #[test]
        fn echelon_shape(l in arb_subspace(12)) {
            let piv = l.pivots();
            prop_assert!(piv.windows(2).all(|w| w[0] < w[1]));
            for (i, &p) in piv.iter().enumerate() {
                for (j, &r) in l.rows().iter().enumerate() {
                    prop_assert_eq!((r >> p) & 1 == 1, i == j);
                }
            }
        }

        #[test]
        fn perp_is_an_involution(l in arb_subspace(8)) {
            let form = path_form(8);
            let p = l.perp(&form).unwrap();
            prop_assert_eq!(p.dim() + l.dim(), 8);
            prop_assert_eq!(p.perp(&form).unwrap(), l);
        }

        #[test]
        fn projection_is_linear(k in 1u64..(1 << 12), a in 0u64..(1 << 12), b in 0u64..(1 << 12)) {
            let q = QuotientMap::new(BitVector::truncated(12, k)).unwrap();
            let pa = q.project(&BitVector::truncated(12, a)).unwrap();
            let pb = q.project(&BitVector::truncated(12, b)).unwrap();
            prop_assert_eq!(q.project(&BitVector::truncated(12, a ^ b)).unwrap(), pa + pb);
            prop_assert_eq!(q.project(&q.lift(&pa).unwrap()).unwrap(), pa);
            prop_assert!(!q.lift(&pa).unwrap().bit(q.pivot()));
        }
    }

    #[test]
    fn projection_linear_exhaustive_width_8() {
        for k in [0b1u64, 0b1010_0101, 0b1000_0000] {
            let q = QuotientMap::new(BitVector::truncated(8, k)).unwrap();
            for a in 0u64..256 {
                for b in 0u64..256 {
                    assert_eq!(q.project_mask(a ^ b), q.project_mask(a) ^ q.project_mask(b));
                }
                assert_eq!(q.project_mask(q.lift_mask(q.project_mask(a))), q.project_mask(a));
            }
        }
    }
}
