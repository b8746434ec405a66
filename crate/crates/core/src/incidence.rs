//! The four ambient setups and the interval combinatorics on their graphs.
//!
//! Vertices are stored 0-based; everything user-facing (display, JSON) is
//! 1-based, so vertex `i` prints as `i + 1`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::{bits, BitVector, QuotientMap, SymplecticForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    /// Path graph on `N - 1` vertices, `N` odd.
    PathOdd,
    /// Path graph on `N - 1` vertices, `N` even; the form is degenerate.
    PathEven,
    /// Cycle on `N` vertices with the unit vectors as basis, `N` odd.
    Cycle,
    /// The cycle case taken modulo the all-ones vector.
    CycleQuotient,
}

impl Case {
    pub fn tag(self) -> &'static str {
        match self {
            Case::PathOdd => "a",
            Case::Cycle => "b",
            Case::CycleQuotient => "c",
            Case::PathEven => "even",
        }
    }

    pub fn is_cyclic(self) -> bool {
        matches!(self, Case::Cycle | Case::CycleQuotient)
    }

    pub fn is_path(self) -> bool {
        !self.is_cyclic()
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "path" | "path-odd" => Ok(Case::PathOdd),
            "b" | "cycle" => Ok(Case::Cycle),
            "c" | "quotient" | "cycle-quotient" => Ok(Case::CycleQuotient),
            "even" | "path-even" => Ok(Case::PathEven),
            other => Err(Error::Usage(format!("unknown case `{other}` (expected a, b, c or even)"))),
        }
    }
}

/// A subset of `S` inducing a path graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    size: u32,
    start: u32,
    mask: u64,
}

impl Interval {
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    /// First vertex along the path (for arcs of a cycle, the vertex whose
    /// predecessor is outside the arc).
    pub fn start(&self) -> usize {
        self.start as usize
    }

    pub fn is_odd(&self) -> bool {
        self.size % 2 == 1
    }

    pub fn contains(&self, s: usize) -> bool {
        (self.mask >> s) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.mask & !other.mask == 0
    }

    /// 1-based members in increasing order.
    pub fn members(&self) -> Vec<usize> {
        bits(self.mask).map(|i| i + 1).collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in bits(self.mask).enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The connected components of the subgraph induced on a subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSplit {
    pub parts: Vec<Interval>,
}

/// A permutation of `S`, as the image of each 0-based vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn apply(&self, s: usize) -> usize {
        self.0[s]
    }

    pub fn apply_mask(&self, mask: u64) -> u64 {
        bits(mask).fold(0, |acc, i| acc | (1u64 << self.0[i]))
    }

    pub fn compose(&self, inner: &Permutation) -> Permutation {
        Permutation(inner.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// A case-tagged ambient space with its vertex vectors and graph.
#[derive(Clone, Debug)]
pub struct Setup {
    case: Case,
    n: usize,
    size: usize,
    adjacency: Vec<u64>,
    edges: Vec<(usize, usize)>,
    vectors: Vec<BitVector>,
    form: SymplecticForm,
    quotient: Option<QuotientMap>,
    intervals: Vec<Interval>,
    even_part: Vec<u64>,
    by_mask: HashMap<u64, usize>,
}

pub const MAX_N: usize = 63;

impl Setup {
    pub fn build(case: Case, n: usize) -> Result<Self> {
        let valid = match case {
            Case::PathOdd | Case::Cycle | Case::CycleQuotient => n >= 3 && n % 2 == 1,
            Case::PathEven => n >= 4 && n.is_multiple_of(2),
        };
        if !valid || n > MAX_N {
            let want = match case {
                Case::PathEven => "an even N >= 4",
                _ => "an odd N >= 3",
            };
            return Err(Error::Usage(format!(
                "case {case} needs {want} (at most {MAX_N}), got N = {n}"
            )));
        }
        let size = if case.is_cyclic() { n } else { n - 1 };
        let canonical: Vec<u64> = (0..size)
            .map(|i| {
                let mut r = 0u64;
                if case.is_cyclic() {
                    r |= 1 << ((i + 1) % size);
                    r |= 1 << ((i + size - 1) % size);
                } else {
                    if i + 1 < size {
                        r |= 1 << (i + 1);
                    }
                    if i > 0 {
                        r |= 1 << (i - 1);
                    }
                }
                r
            })
            .collect();

        let (form, vectors, quotient) = match case {
            Case::CycleQuotient => {
                let all = BitVector::truncated(size, (1u64 << size) - 1);
                let q = QuotientMap::new(all)?;
                let width = size - 1;
                let rows = canonical[..width]
                    .iter()
                    .map(|r| r & ((1u64 << width) - 1))
                    .collect();
                let vectors = (0..size)
                    .map(|i| q.project(&BitVector::unit(size, i)))
                    .collect::<Result<Vec<_>>>()?;
                (SymplecticForm::new(rows)?, vectors, Some(q))
            }
            _ => {
                let vectors = (0..size).map(|i| BitVector::unit(size, i)).collect();
                (SymplecticForm::new(canonical.clone())?, vectors, None)
            }
        };

        // The graph is read off the form.
        let mut edges = Vec::new();
        let mut adjacency = vec![0u64; size];
        for i in 0..size {
            for j in i + 1..size {
                if form.pair(&vectors[i], &vectors[j]) {
                    edges.push((i, j));
                    adjacency[i] |= 1 << j;
                    adjacency[j] |= 1 << i;
                }
            }
        }
        if adjacency != canonical {
            return Err(Error::Verification(format!(
                "graph derived from the form is not the expected {} graph",
                if case.is_cyclic() { "cycle" } else { "path" }
            )));
        }

        let mut setup = Setup {
            case,
            n,
            size,
            adjacency,
            edges,
            vectors,
            form,
            quotient,
            intervals: Vec::new(),
            even_part: Vec::new(),
            by_mask: HashMap::new(),
        };
        setup.intervals = setup.generate_intervals();
        setup.by_mask = setup
            .intervals
            .iter()
            .enumerate()
            .map(|(k, i)| (i.mask, k))
            .collect();
        setup.even_part = setup
            .intervals
            .iter()
            .map(|i| if i.is_odd() { setup.compute_even_part(i) } else { 0 })
            .collect();
        Ok(setup)
    }

    fn generate_intervals(&self) -> Vec<Interval> {
        let s = self.size;
        let mut out = Vec::new();
        if self.case.is_cyclic() {
            for start in 0..s {
                for len in 1..s {
                    let mask = (0..len).fold(0u64, |m, k| m | 1 << ((start + k) % s));
                    out.push(Interval {
                        size: len as u32,
                        start: start as u32,
                        mask,
                    });
                }
            }
        } else {
            for start in 0..s {
                for len in 1..=s - start {
                    let mask = (0..len).fold(0u64, |m, k| m | 1 << (start + k));
                    out.push(Interval {
                        size: len as u32,
                        start: start as u32,
                        mask,
                    });
                }
            }
        }
        out.sort();
        out
    }

    fn compute_even_part(&self, interval: &Interval) -> u64 {
        let mut ev = 0;
        for s in bits(interval.mask) {
            let parts = self.component_masks(interval.mask & !(1 << s));
            if parts.len() == 2 && parts.iter().all(|p| p.count_ones() % 2 == 1) {
                ev |= 1 << s;
            }
        }
        ev
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `|S|`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn full_mask(&self) -> u64 {
        if self.size == 64 {
            u64::MAX
        } else {
            (1u64 << self.size) - 1
        }
    }

    /// Dimension of the ambient vector space.
    pub fn width(&self) -> usize {
        self.form.width()
    }

    pub fn form(&self) -> &SymplecticForm {
        &self.form
    }

    pub fn quotient(&self) -> Option<&QuotientMap> {
        self.quotient.as_ref()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adjacency
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        a < self.size && b < self.size && (self.adjacency[a] >> b) & 1 == 1
    }

    /// `e_s`.
    pub fn vector(&self, s: usize) -> BitVector {
        self.vectors[s]
    }

    /// `e_I = sum_{s in I} e_s`.
    pub fn vector_of(&self, mask: u64) -> BitVector {
        bits(mask).fold(BitVector::zero(self.width()), |acc, s| acc + self.vectors[s])
    }

    /// For the non-quotient cases: the subset whose indicator is `v`.
    pub fn subset_of_vector(&self, v: &BitVector) -> Result<u64> {
        if self.case == Case::CycleQuotient {
            return Err(Error::Domain(
                "vectors of the quotient do not determine a unique subset".into(),
            ));
        }
        if v.width() != self.width() {
            return Err(Error::WidthMismatch {
                expected: self.width(),
                found: v.width(),
            });
        }
        Ok(v.mask())
    }

    /// All of `I`, sorted by (size, start).
    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn odd_intervals(&self) -> impl Iterator<Item = &Interval> + '_ {
        self.intervals.iter().filter(|i| i.is_odd())
    }

    pub fn even_intervals(&self) -> impl Iterator<Item = &Interval> + '_ {
        self.intervals.iter().filter(|i| !i.is_odd())
    }

    /// `(I^0, I^1)`.
    pub fn interval_classes(&self) -> (Vec<Interval>, Vec<Interval>) {
        self.intervals.iter().partition(|i| !i.is_odd())
    }

    pub fn interval(&self, mask: u64) -> Option<Interval> {
        self.by_mask.get(&mask).map(|&k| self.intervals[k])
    }

    pub fn interval_from_members(&self, members: &[usize]) -> Result<Interval> {
        let mut mask = 0u64;
        for &m in members {
            if m == 0 || m > self.size {
                return Err(Error::Usage(format!("vertex {m} is not in 1..={}", self.size)));
            }
            mask |= 1 << (m - 1);
        }
        self.interval(mask).ok_or_else(|| {
            Error::Domain(format!("{members:?} does not induce a path"))
        })
    }

    /// Connected components of the induced subgraph, as vertex masks.
    pub fn component_masks(&self, mask: u64) -> Vec<u64> {
        let mut rest = mask;
        let mut out = Vec::new();
        while rest != 0 {
            let mut comp = rest & rest.wrapping_neg();
            loop {
                let grown = bits(comp).fold(comp, |acc, i| acc | (self.adjacency[i] & mask));
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            rest &= !comp;
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self, mask: u64) -> usize {
        self.component_masks(mask).len()
    }

    /// `c(X)`. In the cycle cases `X = S` is rejected.
    pub fn components(&self, mask: u64) -> Result<ComponentSplit> {
        if mask & !self.full_mask() != 0 {
            return Err(Error::Domain(format!("{mask:#x} is not a subset of S")));
        }
        if self.case.is_cyclic() && mask == self.full_mask() {
            return Err(Error::Domain("c(I) is undefined for I = S in the cycle cases".into()));
        }
        let mut parts = self
            .component_masks(mask)
            .into_iter()
            .map(|m| {
                self.interval(m)
                    .ok_or_else(|| Error::Verification(format!("component {m:#x} is not an interval")))
            })
            .collect::<Result<Vec<_>>>()?;
        parts.sort();
        Ok(ComponentSplit { parts })
    }

    /// Exact test for "induces a graph of type A_m, m >= 1".
    pub fn is_type_a(&self, mask: u64) -> bool {
        if mask == 0 || self.component_count(mask) != 1 {
            return false;
        }
        let mut degree_sum = 0u32;
        for i in bits(mask) {
            let d = (self.adjacency[i] & mask).count_ones();
            if d > 2 {
                return false;
            }
            degree_sum += d;
        }
        degree_sum / 2 + 1 == mask.count_ones()
    }

    /// `I < I'`: proper containment with disconnected difference.
    pub fn rel_prec(&self, a: &Interval, b: &Interval) -> bool {
        a.mask != b.mask && a.is_subset_of(b) && self.component_count(b.mask & !a.mask) >= 2
    }

    /// Disjoint with disconnected union.
    pub fn rel_spade(&self, a: &Interval, b: &Interval) -> bool {
        a.mask & b.mask == 0 && self.component_count(a.mask | b.mask) >= 2
    }

    /// `(I^ev, I^odd)` as vertex masks.
    pub fn even_odd_split(&self, interval: &Interval) -> Result<(u64, u64)> {
        if !interval.is_odd() {
            return Err(Error::Domain(format!("{interval} has even size")));
        }
        let ev = match self.by_mask.get(&interval.mask) {
            Some(&k) => self.even_part[k],
            None => self.compute_even_part(interval),
        };
        Ok((ev, interval.mask & !ev))
    }

    pub(crate) fn even_part_mask(&self, interval: &Interval) -> u64 {
        self.by_mask
            .get(&interval.mask)
            .map_or_else(|| self.compute_even_part(interval), |&k| self.even_part[k])
    }

    /// `(c(I)^{0+}, c(I)^{0-})` for the path cases: the even-size components
    /// `{s_k, ..., s_l}` with `k` even, resp. `k` odd (1-based positions).
    pub fn pos_parity_split(&self, mask: u64) -> Result<(Vec<Interval>, Vec<Interval>)> {
        if self.case.is_cyclic() {
            return Err(Error::Domain("c(I)^{0+-} is only defined for path graphs".into()));
        }
        let split = self.components(mask)?;
        let (plus, minus) = split
            .parts
            .into_iter()
            .filter(|p| !p.is_odd())
            .partition(|p| (p.start() + 1) % 2 == 0);
        Ok((plus, minus))
    }

    /// The dihedral group of the cycle: `r^k` followed by `r^k f` for
    /// `k = 0..N`, with `r: i -> i + 1` and `f: i -> N + 1 - i`.
    pub fn dihedral_group(&self) -> Result<Vec<Permutation>> {
        if !self.case.is_cyclic() {
            return Err(Error::Domain("the dihedral action is defined for the cycle cases".into()));
        }
        let s = self.size;
        let mut out = Vec::with_capacity(2 * s);
        for k in 0..s {
            out.push(Permutation((0..s).map(|i| (i + k) % s).collect()));
        }
        for k in 0..s {
            out.push(Permutation((0..s).map(|i| (s - 1 - i + k) % s).collect()));
        }
        Ok(out)
    }

    /// The graph involution exchanging the endpoints of the edge `{a, b}`.
    pub fn edge_reflection(&self, a: usize, b: usize) -> Result<Permutation> {
        if !self.case.is_cyclic() {
            return Err(Error::Domain("edge reflections are defined for the cycle cases".into()));
        }
        if !self.is_edge(a, b) {
            return Err(Error::Domain(format!("{{{}, {}}} is not an edge", a + 1, b + 1)));
        }
        let s = self.size;
        Ok(Permutation((0..s).map(|i| (a + b + s - i) % s).collect()))
    }

    /// Action of a vertex permutation on the ambient space.
    pub fn act_on_vector(&self, perm: &Permutation, v: &BitVector) -> Result<BitVector> {
        match &self.quotient {
            Some(q) => {
                let lifted = q.lift(v)?;
                let moved = BitVector::truncated(self.size, perm.apply_mask(lifted.mask()));
                q.project(&moved)
            }
            None => {
                if v.width() != self.width() {
                    return Err(Error::WidthMismatch {
                        expected: self.width(),
                        found: v.width(),
                    });
                }
                Ok(BitVector::truncated(self.width(), perm.apply_mask(v.mask())))
            }
        }
    }

    pub fn act_on_interval(&self, perm: &Permutation, interval: &Interval) -> Result<Interval> {
        let m = perm.apply_mask(interval.mask);
        self.interval(m)
            .ok_or_else(|| Error::Verification(format!("image of {interval} is not an interval")))
    }
}

pub fn build_setup(case: Case, n: usize) -> Result<Setup> {
    Setup::build(case, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(members: &[usize]) -> u64 {
        members.iter().fold(0, |m, &i| m | 1 << (i - 1))
    }

    fn iv(setup: &Setup, members: &[usize]) -> Interval {
        setup.interval_from_members(members).unwrap()
    }

    #[test]
    fn smallest_quotient() {
        let s = Setup::build(Case::CycleQuotient, 3).unwrap();
        assert_eq!(s.width(), 2);
        assert_eq!(s.edges().len(), 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s.form().pair(&s.vector(i), &s.vector(j)), i != j);
            }
        }
    }

    #[test]
    fn setup_shapes() {
        let b = Setup::build(Case::Cycle, 5).unwrap();
        assert_eq!((b.width(), b.edges().len()), (5, 5));
        assert_eq!(
            crate::f2::radical(b.form()),
            crate::f2::span(&[b.vector_of(b.full_mask())]).unwrap()
        );
        let a = Setup::build(Case::PathOdd, 5).unwrap();
        assert_eq!((a.size(), a.edges().len()), (4, 3));
        let c = Setup::build(Case::CycleQuotient, 7).unwrap();
        assert!(c.form().is_nondegenerate());
        assert_eq!(c.width(), 6);
    }

    #[test]
    fn invalid_parameters() {
        for (case, n) in [
            (Case::PathOdd, 4),
            (Case::Cycle, 1),
            (Case::PathEven, 5),
            (Case::PathEven, 2),
            (Case::CycleQuotient, 65),
        ] {
            assert!(matches!(Setup::build(case, n), Err(Error::Usage(_))), "{case} {n}");
        }
    }

    #[test]
    fn interval_counts() {
        for case in [Case::Cycle, Case::CycleQuotient] {
            let s = Setup::build(case, 5).unwrap();
            let (even, odd) = s.interval_classes();
            assert_eq!((even.len(), odd.len()), (10, 10));
            assert!(s.interval(s.full_mask()).is_none());
            assert!(!s.is_type_a(s.full_mask()));
        }
        let a = Setup::build(Case::PathOdd, 5).unwrap();
        let odd: Vec<Vec<usize>> = a.odd_intervals().map(|i| i.members()).collect();
        assert_eq!(
            odd,
            vec![vec![1], vec![2], vec![3], vec![4], vec![1, 2, 3], vec![2, 3, 4]]
        );
    }

    #[test]
    fn intervals_are_exactly_the_type_a_subsets() {
        for (case, n) in [(Case::PathOdd, 9), (Case::PathEven, 8), (Case::Cycle, 9), (Case::CycleQuotient, 7)] {
            let s = Setup::build(case, n).unwrap();
            let brute: Vec<u64> = (1..=s.full_mask()).filter(|&m| s.is_type_a(m)).collect();
            let mut listed: Vec<u64> = s.intervals().iter().map(|i| i.mask()).collect();
            listed.sort();
            assert_eq!(listed, brute, "{case} {n}");
        }
    }

    #[test]
    fn components_examples() {
        let s = Setup::build(Case::Cycle, 5).unwrap();
        assert!(s.components(0).unwrap().parts.is_empty());
        let parts = s.components(mask(&[1, 2, 4])).unwrap().parts;
        assert_eq!(parts, vec![iv(&s, &[4]), iv(&s, &[1, 2])]);
        assert!(matches!(s.components(s.full_mask()), Err(Error::Domain(_))));
        let s7 = Setup::build(Case::Cycle, 7).unwrap();
        let parts = s7.components(mask(&[7, 1, 2])).unwrap().parts;
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].members(), vec![1, 2, 7]);
        assert_eq!(parts[0].start(), 6);
    }

    #[test]
    fn relations_examples() {
        let s = Setup::build(Case::Cycle, 5).unwrap();
        assert!(s.rel_prec(&iv(&s, &[2]), &iv(&s, &[1, 2, 3])));
        assert!(!s.rel_prec(&iv(&s, &[1]), &iv(&s, &[1, 2, 3])));
        assert!(s.rel_spade(&iv(&s, &[1]), &iv(&s, &[3])));
        assert!(!s.rel_spade(&iv(&s, &[1]), &iv(&s, &[2])));
    }

    #[test]
    fn even_parts() {
        let s = Setup::build(Case::Cycle, 7).unwrap();
        assert_eq!(s.even_odd_split(&iv(&s, &[3])).unwrap().0, 0);
        assert_eq!(s.even_odd_split(&iv(&s, &[1, 2, 3])).unwrap().0, mask(&[2]));
        // arc 6,7,1,2,3: second and fourth vertices along the path are 7 and 2
        assert_eq!(s.even_odd_split(&iv(&s, &[6, 7, 1, 2, 3])).unwrap().0, mask(&[7, 2]));
        for i in s.odd_intervals() {
            let (ev, _) = s.even_odd_split(i).unwrap();
            assert_eq!(ev.count_ones() as usize, (i.size() - 1) / 2);
        }
        assert!(s.even_odd_split(&iv(&s, &[1, 2])).is_err());
    }

    #[test]
    fn position_parity() {
        let s = Setup::build(Case::PathOdd, 5).unwrap();
        let (plus, minus) = s.pos_parity_split(mask(&[2, 3])).unwrap();
        assert_eq!((plus.len(), minus.len()), (1, 0));
        let (plus, minus) = s.pos_parity_split(mask(&[1, 2])).unwrap();
        assert_eq!((plus.len(), minus.len()), (0, 1));
        let (plus, minus) = s.pos_parity_split(mask(&[1, 2, 3])).unwrap();
        assert!(plus.is_empty() && minus.is_empty());
        let c = Setup::build(Case::Cycle, 5).unwrap();
        assert!(c.pos_parity_split(1).is_err());
    }

    #[test]
    fn spade_dichotomy_on_cycles() {
        for n in [3, 5, 7, 9] {
            let s = Setup::build(Case::Cycle, n).unwrap();
            let odd: Vec<Interval> = s.odd_intervals().copied().collect();
            for a in &odd {
                for b in &odd {
                    if a.mask() & b.mask() == 0 && (a.mask() | b.mask()) != s.full_mask() {
                        let connected = s.component_count(a.mask() | b.mask()) == 1;
                        assert!(s.rel_spade(a, b) != connected);
                    }
                }
            }
        }
    }

    #[test]
    fn prec_is_a_strict_order() {
        for (case, n) in [(Case::Cycle, 9), (Case::PathOdd, 9), (Case::PathEven, 8)] {
            let s = Setup::build(case, n).unwrap();
            let odd: Vec<Interval> = s.odd_intervals().copied().collect();
            for a in &odd {
                assert!(!s.rel_prec(a, a));
                for b in &odd {
                    if !s.rel_prec(a, b) {
                        continue;
                    }
                    for c in &odd {
                        if s.rel_prec(b, c) {
                            assert!(s.rel_prec(a, c), "{a} {b} {c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn indicator_vectors_accumulate() {
        for (case, n) in [(Case::Cycle, 9), (Case::CycleQuotient, 9), (Case::PathOdd, 9)] {
            let s = Setup::build(case, n).unwrap();
            for m in 0..=s.full_mask() {
                let mut acc = BitVector::zero(s.width());
                for i in 0..s.size() {
                    if (m >> i) & 1 == 1 {
                        acc += s.vector(i);
                    }
                }
                assert_eq!(s.vector_of(m), acc);
            }
        }
    }

    #[test]
    fn dihedral_action_preserves_relations() {
        for n in [3, 5, 7] {
            let s = Setup::build(Case::Cycle, n).unwrap();
            let group = s.dihedral_group().unwrap();
            assert_eq!(group.len(), 2 * n);
            let distinct: std::collections::HashSet<_> = group.iter().collect();
            assert_eq!(distinct.len(), 2 * n);
            let all = s.intervals().to_vec();
            for g in &group {
                for &(a, b) in s.edges() {
                    assert!(s.is_edge(g.apply(a), g.apply(b)));
                }
                for a in &all {
                    let ga = s.act_on_interval(g, a).unwrap();
                    assert_eq!(ga.is_odd(), a.is_odd());
                    for b in &all {
                        let gb = s.act_on_interval(g, b).unwrap();
                        if a.is_odd() && b.is_odd() {
                            assert_eq!(s.rel_prec(a, b), s.rel_prec(&ga, &gb));
                            assert_eq!(s.rel_spade(a, b), s.rel_spade(&ga, &gb));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn edge_reflection_swaps_endpoints() {
        let s = Setup::build(Case::CycleQuotient, 5).unwrap();
        let iota = s.edge_reflection(3, 4).unwrap();
        assert_eq!(iota.0, vec![2, 1, 0, 4, 3]);
        assert!(iota.compose(&iota).is_identity());
        let iota = s.edge_reflection(4, 0).unwrap();
        assert_eq!((iota.apply(4), iota.apply(0)), (0, 4));
        assert!(s.edge_reflection(0, 2).is_err());
    }

    #[test]
    fn quotient_action_is_well_defined() {
        let s = Setup::build(Case::CycleQuotient, 5).unwrap();
        for g in s.dihedral_group().unwrap() {
            for i in 0..5 {
                assert_eq!(s.act_on_vector(&g, &s.vector(i)).unwrap(), s.vector(g.apply(i)));
            }
        }
    }
}
