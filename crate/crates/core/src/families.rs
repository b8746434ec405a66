//! Families of odd intervals: the axioms (P0), (P1), the map `eps`, the
//! enumeration of all admissible families, and the perfectness verifier.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::f2::{bits, BitVector, SubspaceHandle};
use crate::incidence::{Case, Interval, Permutation, Setup};

/// A duplicate-free set of odd intervals, kept sorted by (size, start).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Family {
    intervals: Vec<Interval>,
}

impl Family {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut intervals: Vec<Interval>) -> Result<Self> {
        intervals.sort();
        if let Some(w) = intervals.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateInterval(w[0].to_string()));
        }
        if let Some(i) = intervals.iter().find(|i| !i.is_odd()) {
            return Err(Error::Domain(format!("{i} has even size")));
        }
        Ok(Self { intervals })
    }

    /// Builds a family from 1-based member lists.
    pub fn from_members(setup: &Setup, lists: &[Vec<usize>]) -> Result<Self> {
        let intervals = lists
            .iter()
            .map(|m| setup.interval_from_members(m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(intervals)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, interval: &Interval) -> bool {
        self.intervals.binary_search(interval).is_ok()
    }

    /// `g_s(B)`: the number of members containing `s`.
    pub fn multiplicity(&self, s: usize) -> usize {
        self.intervals.iter().filter(|i| i.contains(s)).count()
    }

    pub fn multiplicities(&self, size: usize) -> Vec<usize> {
        let mut g = vec![0; size];
        for i in &self.intervals {
            for s in bits(i.mask()) {
                g[s] += 1;
            }
        }
        g
    }

    pub fn support(&self) -> u64 {
        self.intervals.iter().fold(0, |m, i| m | i.mask())
    }

    pub fn without(&self, interval: &Interval) -> Family {
        Family {
            intervals: self.intervals.iter().filter(|i| *i != interval).copied().collect(),
        }
    }

    pub fn member_lists(&self) -> Vec<Vec<usize>> {
        self.intervals.iter().map(Interval::members).collect()
    }

    pub fn permuted(&self, setup: &Setup, perm: &Permutation) -> Result<Family> {
        let intervals = self
            .intervals
            .iter()
            .map(|i| setup.act_on_interval(perm, i))
            .collect::<Result<Vec<_>>>()?;
        Family::new(intervals)
    }

    /// `L_B`, the span of the `e_I`.
    pub fn span(&self, setup: &Setup) -> SubspaceHandle {
        SubspaceHandle::from_masks(
            setup.width(),
            self.intervals.iter().map(|i| setup.vector_of(i.mask()).mask()),
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.member_lists().serialize(serializer)
    }
}

pub fn g_multiplicity(b: &Family, s: usize) -> usize {
    b.multiplicity(s)
}

pub fn supp(b: &Family) -> u64 {
    b.support()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomFailure {
    #[error("(P0) fails for {first} and {second}")]
    P0 { first: Interval, second: Interval },
    #[error("(P1) fails for {interval}")]
    P1 { interval: Interval },
}

fn p0_related(setup: &Setup, a: &Interval, b: &Interval) -> bool {
    a == b || setup.rel_spade(a, b) || setup.rel_prec(a, b) || setup.rel_prec(b, a)
}

pub fn check_p0(setup: &Setup, b: &Family) -> std::result::Result<(), AxiomFailure> {
    let members = b.intervals();
    for (k, x) in members.iter().enumerate() {
        for y in &members[k + 1..] {
            if !p0_related(setup, x, y) {
                return Err(AxiomFailure::P0 {
                    first: *x,
                    second: *y,
                });
            }
        }
    }
    Ok(())
}

/// Is there a pairwise disjoint subcollection of `candidates` whose union
/// covers `target` (equals it, when `exact`)?
pub(crate) fn disjoint_cover(target: u64, candidates: &[u64], exact: bool) -> bool {
    let usable: Vec<u64> = candidates
        .iter()
        .copied()
        .filter(|&c| !exact || c & !target == 0)
        .collect();
    fn go(target: u64, used: u64, usable: &[u64]) -> bool {
        let missing = target & !used;
        if missing == 0 {
            return true;
        }
        let low = missing & missing.wrapping_neg();
        usable
            .iter()
            .filter(|&&c| c & low != 0 && c & used == 0)
            .any(|&c| go(target, used | c, usable))
    }
    go(target, 0, &usable)
}

pub fn check_p1(setup: &Setup, b: &Family) -> std::result::Result<(), AxiomFailure> {
    let p0 = check_p0(setup, b).is_ok();
    for x in b.intervals() {
        let ev = setup.even_part_mask(x);
        let below: Vec<&Interval> = b.intervals().iter().filter(|j| setup.rel_prec(j, x)).collect();
        let covered = if p0 {
            // Under (P0) the maximal elements below `x` are pairwise disjoint,
            // and their union is the union of everything below `x`.
            let union = below.iter().fold(0, |m, j| m | j.mask());
            ev & !union == 0
        } else {
            let masks: Vec<u64> = below.iter().map(|j| j.mask()).collect();
            disjoint_cover(ev, &masks, false)
        };
        if !covered {
            return Err(AxiomFailure::P1 { interval: *x });
        }
    }
    Ok(())
}

pub fn is_admissible(setup: &Setup, b: &Family) -> bool {
    check_p0(setup, b).is_ok() && check_p1(setup, b).is_ok()
}

/// Parity of the triangular number `g(g+1)/2`.
#[inline]
pub fn triangular_parity(g: usize) -> bool {
    matches!(g % 4, 1 | 2)
}

#[inline]
fn triangular_parity_signed(f: i64) -> bool {
    (f * (f + 1) / 2).rem_euclid(2) == 1
}

/// `eps(B) = sum_s g_s(B)(g_s(B)+1)/2 e_s`.
pub fn epsilon(setup: &Setup, b: &Family) -> BitVector {
    let g = b.multiplicities(setup.size());
    let coeffs = g
        .iter()
        .enumerate()
        .filter(|(_, &gs)| triangular_parity(gs))
        .fold(0u64, |m, (s, _)| m | 1 << s);
    setup.vector_of(coeffs)
}

/// Splits `B` into layers by repeatedly removing the maximal members.
pub fn layers(b: &Family) -> Vec<Vec<Interval>> {
    let mut rest: Vec<Interval> = b.intervals().to_vec();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let (top, below): (Vec<Interval>, Vec<Interval>) = rest.iter().partition(|i| {
            !rest
                .iter()
                .any(|j| j.mask() != i.mask() && i.is_subset_of(j))
        });
        out.push(top);
        rest = below;
    }
    out
}

/// `v_1(B) + v_3(B) + v_5(B) + ...` where `v_k` sums `e_I` over layer `k`.
pub fn epsilon_layered(setup: &Setup, b: &Family) -> BitVector {
    layers(b)
        .iter()
        .step_by(2)
        .flatten()
        .fold(BitVector::zero(setup.width()), |acc, i| acc + setup.vector_of(i.mask()))
}

/// `B_L`: the odd intervals whose vector lies in `L`.
pub fn family_of_subspace(setup: &Setup, l: &SubspaceHandle) -> Family {
    let intervals = setup
        .odd_intervals()
        .filter(|i| l.contains_mask(setup.vector_of(i.mask()).mask()))
        .copied()
        .collect();
    Family { intervals }
}

/// `B_L^t`: intervals of either parity avoiding `t` whose vector lies in `L`.
pub fn anchored_basis(setup: &Setup, l: &SubspaceHandle, t: usize) -> Result<Vec<Interval>> {
    if t >= setup.size() {
        return Err(Error::Usage(format!("anchor {} is not a vertex", t + 1)));
    }
    Ok(setup
        .intervals()
        .iter()
        .filter(|i| !i.contains(t) && l.contains_mask(setup.vector_of(i.mask()).mask()))
        .copied()
        .collect())
}

/// The anchored formula: built from `B^t` with signed multiplicities
/// `f_s = #odd members containing s - #even members containing s - [#even odd]`.
pub fn epsilon_anchored(setup: &Setup, b: &Family, t: usize) -> Result<BitVector> {
    if setup.case() != Case::CycleQuotient {
        return Err(Error::Domain("the anchored formula is defined for the quotient case".into()));
    }
    let l = b.span(setup);
    let bt = anchored_basis(setup, &l, t)?;
    let even_count = bt.iter().filter(|i| !i.is_odd()).count() as i64;
    let mut coeffs = 0u64;
    for s in (0..setup.size()).filter(|&s| s != t) {
        let mut f = -(even_count % 2);
        for i in bt.iter().filter(|i| i.contains(s)) {
            f += if i.is_odd() { 1 } else { -1 };
        }
        if triangular_parity_signed(f) {
            coeffs |= 1 << s;
        }
    }
    Ok(setup.vector_of(coeffs))
}

#[derive(Clone, Debug)]
pub struct PhiRecord {
    pub family: Family,
    pub eps: BitVector,
    pub subspace: SubspaceHandle,
}

/// All admissible families of a setup with their `eps` images and spans,
/// sorted by `eps` mask.
#[derive(Clone, Debug)]
pub struct PhiTable {
    case: Case,
    n: usize,
    records: Vec<PhiRecord>,
    by_eps: HashMap<u64, usize>,
    by_family: HashMap<Family, usize>,
}

#[derive(Serialize, Deserialize)]
struct PhiLine {
    #[serde(rename = "B")]
    b: Vec<Vec<usize>>,
    eps: u64,
    dim: usize,
}

impl PhiTable {
    pub fn from_families(setup: &Setup, families: Vec<Family>) -> Self {
        let mut records: Vec<PhiRecord> = families
            .into_iter()
            .map(|family| PhiRecord {
                eps: epsilon(setup, &family),
                subspace: family.span(setup),
                family,
            })
            .collect();
        records.sort_by(|a, b| (a.eps, &a.family).cmp(&(b.eps, &b.family)));
        let mut by_eps = HashMap::new();
        let mut by_family = HashMap::new();
        for (k, r) in records.iter().enumerate() {
            by_eps.entry(r.eps.mask()).or_insert(k);
            by_family.insert(r.family.clone(), k);
        }
        Self {
            case: setup.case(),
            n: setup.n(),
            records,
            by_eps,
            by_family,
        }
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn records(&self) -> &[PhiRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn by_eps(&self, v: &BitVector) -> Option<&PhiRecord> {
        self.by_eps.get(&v.mask()).map(|&k| &self.records[k])
    }

    pub fn index_of_eps(&self, v: &BitVector) -> Option<usize> {
        self.by_eps.get(&v.mask()).copied()
    }

    pub fn index_of(&self, b: &Family) -> Option<usize> {
        self.by_family.get(b).copied()
    }

    pub fn families(&self) -> impl Iterator<Item = &Family> + '_ {
        self.records.iter().map(|r| &r.family)
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let line = PhiLine {
                b: r.family.member_lists(),
                eps: r.eps.mask(),
                dim: r.subspace.dim(),
            };
            out.push_str(&serde_json::to_string(&line).expect("plain data serializes"));
            out.push('\n');
        }
        out
    }

    /// Parses the output of [`PhiTable::to_json_lines`], recomputing every
    /// derived column and rejecting lines that disagree with it.
    pub fn from_json_lines(setup: &Setup, text: &str) -> Result<Self> {
        let mut families = Vec::new();
        let mut stated = Vec::new();
        for (k, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let parsed: PhiLine = serde_json::from_str(line)
                .map_err(|e| Error::Usage(format!("line {}: {e}", k + 1)))?;
            families.push(Family::from_members(setup, &parsed.b)?);
            stated.push((parsed.eps, parsed.dim));
        }
        let table = Self::from_families(setup, families);
        let mut recomputed: Vec<(u64, usize)> = table
            .records
            .iter()
            .map(|r| (r.eps.mask(), r.subspace.dim()))
            .collect();
        recomputed.sort_unstable();
        stated.sort_unstable();
        if recomputed != stated {
            return Err(Error::Verification("stored eps/dim columns do not match the families".into()));
        }
        Ok(table)
    }
}

/// Every family satisfying (P0) and (P1).
pub fn enumerate_phi(setup: &Setup) -> PhiTable {
    PhiTable::from_families(setup, enumerate_families(setup, setup.case().is_cyclic()))
}

/// Backtracking over the odd intervals in (size, start) order. A member's
/// (P1) condition only involves strictly smaller members, so it is settled
/// the moment the member is added; `size_bound` additionally caps `|B|` at
/// `(|S| - 1) / 2`.
pub fn enumerate_families(setup: &Setup, size_bound: bool) -> Vec<Family> {
    let odd: Vec<Interval> = setup.odd_intervals().copied().collect();
    let count = odd.len();
    let words = count.div_ceil(64).max(1);
    let mut compat = vec![vec![0u64; words]; count];
    let mut below = vec![Vec::new(); count];
    for i in 0..count {
        for j in 0..count {
            if p0_related(setup, &odd[i], &odd[j]) {
                compat[i][j / 64] |= 1 << (j % 64);
            }
            if setup.rel_prec(&odd[j], &odd[i]) {
                below[i].push(j);
            }
        }
    }
    let even: Vec<u64> = odd.iter().map(|i| setup.even_part_mask(i)).collect();
    let cap = if size_bound { (setup.size() - 1) / 2 } else { usize::MAX };

    struct Search<'a> {
        odd: &'a [Interval],
        compat: &'a [Vec<u64>],
        below: &'a [Vec<usize>],
        even: &'a [u64],
        cap: usize,
        out: Vec<Family>,
    }

    impl Search<'_> {
        fn go(&mut self, from: usize, chosen: &mut Vec<usize>, in_family: &mut [bool], allowed: &[u64]) {
            self.out.push(Family {
                intervals: chosen.iter().map(|&k| self.odd[k]).collect(),
            });
            if chosen.len() >= self.cap {
                return;
            }
            for j in from..self.odd.len() {
                if (allowed[j / 64] >> (j % 64)) & 1 == 0 {
                    continue;
                }
                let union = self.below[j]
                    .iter()
                    .filter(|&&k| in_family[k])
                    .fold(0u64, |m, &k| m | self.odd[k].mask());
                if self.even[j] & !union != 0 {
                    continue;
                }
                let next: Vec<u64> = allowed
                    .iter()
                    .zip(&self.compat[j])
                    .map(|(a, c)| a & c)
                    .collect();
                chosen.push(j);
                in_family[j] = true;
                self.go(j + 1, chosen, in_family, &next);
                in_family[j] = false;
                chosen.pop();
            }
        }
    }

    let mut search = Search {
        odd: &odd,
        compat: &compat,
        below: &below,
        even: &even,
        cap,
        out: Vec::new(),
    };
    let all = vec![u64::MAX; words];
    search.go(0, &mut Vec::new(), &mut vec![false; count], &all);
    search.out
}

/// Builds the collection of subspaces by induction on `N`: zero together
/// with the pullbacks `p_s^{-1}(L')` of the collection for `N - 2` through
/// `beta_s^perp -> beta_s^perp / F beta_s`.
pub fn recursive_family(setup: &Setup) -> Result<Vec<SubspaceHandle>> {
    if setup.case() != Case::CycleQuotient {
        return Err(Error::Domain("the recursive construction is defined for the quotient case".into()));
    }
    let mut out = recursive_family_at(setup.n())?;
    out.sort();
    Ok(out)
}

fn recursive_family_at(n: usize) -> Result<Vec<SubspaceHandle>> {
    let setup = Setup::build(Case::CycleQuotient, n)?;
    let width = setup.width();
    let mut found: HashSet<SubspaceHandle> = HashSet::new();
    found.insert(SubspaceHandle::zero(width));
    if n == 3 {
        for s in 0..n {
            found.insert(SubspaceHandle::from_masks(width, [setup.vector(s).mask()]));
        }
        return Ok(found.into_iter().collect());
    }
    let smaller = recursive_family_at(n - 2)?;
    for s in 0..n {
        // Circular basis of beta_s^perp / F beta_s, in cyclic order: the
        // vertices s+2, ..., s-2 followed by the merged vertex {s-1, s, s+1}.
        let images: Vec<u64> = (2..n - 1).map(|k| setup.vector((s + k) % n).mask()).collect();
        let beta = setup.vector(s).mask();
        for l in &smaller {
            let lifted = l.rows().iter().map(|&r| bits(r).fold(0u64, |acc, j| acc ^ images[j]));
            let mut pre = SubspaceHandle::from_masks(width, lifted);
            pre.insert_mask(beta);
            found.insert(pre);
        }
    }
    Ok(found.into_iter().collect())
}

/// Independent generator working with systems of disjoint endpoint pairs on
/// the cycle: a pair `{a, b}` stands for the even arc between them, and each
/// arc's interior must split exactly into arcs of other pairs. A pair maps
/// to the odd interval of edge indices along its arc.
pub fn enumerate_phi_linegraph(setup: &Setup) -> Result<Vec<Family>> {
    if setup.case() != Case::CycleQuotient {
        return Err(Error::Domain("the pair-system model is defined for the quotient case".into()));
    }
    let n = setup.size();
    struct Pair {
        ends: u64,
        arc: u64,
        edges: u64,
    }
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let d = b - a;
            let (from, len) = if (d + 1) % 2 == 0 { (a, d + 1) } else { (b, n - d + 1) };
            let arc = (0..len).fold(0u64, |m, k| m | 1 << ((from + k) % n));
            // edge {i, i+1} carries index i
            let edges = (0..len - 1).fold(0u64, |m, k| m | 1 << ((from + k) % n));
            pairs.push(Pair {
                ends: (1 << a) | (1 << b),
                arc,
                edges,
            });
        }
    }

    fn valid(system: &[usize], pairs: &[Pair]) -> bool {
        system.iter().all(|&i| {
            let interior = pairs[i].arc & !pairs[i].ends;
            let inner: Vec<u64> = system
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| pairs[j].arc)
                .collect();
            disjoint_cover(interior, &inner, true)
        })
    }

    fn go(from: usize, used: u64, system: &mut Vec<usize>, pairs: &[Pair], out: &mut Vec<Vec<usize>>) {
        if valid(system, pairs) {
            out.push(system.clone());
        }
        for k in from..pairs.len() {
            if pairs[k].ends & used == 0 {
                system.push(k);
                go(k + 1, used | pairs[k].ends, system, pairs, out);
                system.pop();
            }
        }
    }

    let mut systems = Vec::new();
    go(0, 0, &mut Vec::new(), &pairs, &mut systems);
    let mut out = systems
        .into_iter()
        .map(|sys| {
            let intervals = sys
                .iter()
                .map(|&k| {
                    setup.interval(pairs[k].edges).ok_or_else(|| {
                        Error::Verification("arc edges do not form an interval".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Family::new(intervals)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// The closed-form description of `V_0` (all of the space in the quotient
/// case).
pub fn v0_membership(setup: &Setup, v: &BitVector) -> Result<bool> {
    if v.width() != setup.width() {
        return Err(Error::WidthMismatch {
            expected: setup.width(),
            found: v.width(),
        });
    }
    match setup.case() {
        Case::CycleQuotient => Ok(true),
        Case::PathOdd | Case::PathEven => {
            let (plus, minus) = setup.pos_parity_split(setup.subset_of_vector(v)?)?;
            Ok(plus.len() == minus.len())
        }
        Case::Cycle => {
            let subset = setup.subset_of_vector(v)?;
            if subset == 0 {
                return Ok(true);
            }
            if subset == setup.full_mask() {
                return Ok(false);
            }
            let even = setup
                .components(subset)?
                .parts
                .iter()
                .filter(|p| !p.is_odd())
                .count();
            Ok(even % 2 == 0)
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PerfectnessReport {
    pub case: String,
    pub n: usize,
    pub families: usize,
    pub v0_size: usize,
    pub basis: Vec<String>,
    pub containment: Vec<String>,
    pub bijection: Vec<String>,
    pub monotonicity: Vec<String>,
}

impl PerfectnessReport {
    pub fn passed(&self) -> bool {
        self.basis.is_empty()
            && self.containment.is_empty()
            && self.bijection.is_empty()
            && self.monotonicity.is_empty()
    }

    pub fn violation_count(&self) -> usize {
        self.basis.len() + self.containment.len() + self.bijection.len() + self.monotonicity.len()
    }
}

/// Checks properties (i)-(iv) over the whole table.
pub fn verify_perfect(setup: &Setup, table: &PhiTable) -> PerfectnessReport {
    let mut report = PerfectnessReport {
        case: setup.case().tag().to_string(),
        n: setup.n(),
        families: table.len(),
        ..Default::default()
    };
    let records = table.records();

    for r in records {
        if r.subspace.dim() != r.family.len() {
            report
                .basis
                .push(format!("{}: the e_I are dependent", r.family));
        }
        let recovered = family_of_subspace(setup, &r.subspace);
        if recovered != r.family {
            report
                .basis
                .push(format!("{}: B_L is {}", r.family, recovered));
        }
        if !r.subspace.contains_mask(r.eps.mask()) {
            report
                .containment
                .push(format!("{}: eps = {} is not in L_B", r.family, r.eps));
        }
    }

    let image: BTreeSet<u64> = records.iter().map(|r| r.eps.mask()).collect();
    if image.len() != records.len() {
        report.bijection.push(format!(
            "eps takes {} values on {} families",
            image.len(),
            records.len()
        ));
    }
    let union: BTreeSet<u64> = records
        .iter()
        .flat_map(|r| r.subspace.elements().map(|v| v.mask()))
        .collect();
    report.v0_size = union.len();
    if union != image {
        let missing = union.difference(&image).count();
        let extra = image.difference(&union).count();
        report.bijection.push(format!(
            "image of eps differs from the union of the L_B ({missing} missing, {extra} outside)"
        ));
    }

    let g: Vec<Vec<usize>> = records
        .iter()
        .map(|r| r.family.multiplicities(setup.size()))
        .collect();
    for (k, r) in records.iter().enumerate() {
        for (j, other) in records.iter().enumerate() {
            if r.subspace.contains_mask(other.eps.mask())
                && g[j].iter().zip(&g[k]).any(|(a, b)| a > b)
            {
                report.monotonicity.push(format!(
                    "eps({}) lies in L of {} but g is not dominated",
                    other.family, r.family
                ));
            }
        }
    }
    report
}
