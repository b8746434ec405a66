//! The cycle space before the quotient: the `V_0 / V_1` split, the lifted
//! subspaces `M_B`, the enlarged collection with its map, the even-`N` path
//! involution, and the edge markers `[eps]`, `z_eps` on the quotient.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{null_space, BitVector, QuotientMap, SubspaceHandle};
use crate::families::{enumerate_phi, family_of_subspace, is_admissible, Family, PhiTable};
use crate::incidence::{Case, Setup};
use crate::order::{PartialOrder, StepRelation};

fn require(setup: &Setup, case: Case) -> Result<()> {
    if setup.case() != case {
        return Err(Error::Domain(format!(
            "expected a case {} setup, got case {}",
            case.tag(),
            setup.case().tag()
        )));
    }
    Ok(())
}

/// `pi: V -> V / F e_S` for the cycle setup.
pub fn cycle_projection(setup: &Setup) -> Result<QuotientMap> {
    require(setup, Case::Cycle)?;
    QuotientMap::new(BitVector::truncated(setup.size(), setup.full_mask()))
}

#[derive(Clone, Debug)]
pub struct AffineSplit {
    v0: Vec<u64>,
    v1: Vec<u64>,
}

/// Sorts every subset of `S` into `V_0` or `V_1` by the component predicate.
pub fn affine_split(setup: &Setup) -> Result<AffineSplit> {
    require(setup, Case::Cycle)?;
    if setup.size() > 24 {
        return Err(Error::Usage("the split is tabulated only for N <= 23".into()));
    }
    let mut v0 = Vec::new();
    let mut v1 = Vec::new();
    for mask in 0..=setup.full_mask() {
        if crate::families::v0_membership(setup, &setup.vector_of(mask))? {
            v0.push(mask);
        } else {
            v1.push(mask);
        }
    }
    Ok(AffineSplit { v0, v1 })
}

impl AffineSplit {
    pub fn v0(&self) -> &[u64] {
        &self.v0
    }

    pub fn v1(&self) -> &[u64] {
        &self.v1
    }

    pub fn in_v0(&self, mask: u64) -> bool {
        self.v0.binary_search(&mask).is_ok()
    }

    pub fn violations(&self, setup: &Setup) -> Vec<String> {
        let mut out = Vec::new();
        let half = 1usize << (setup.size() - 1);
        if self.v0.len() != half || self.v1.len() != half {
            out.push(format!("|V0| = {}, |V1| = {}, expected {half} each", self.v0.len(), self.v1.len()));
        }
        if self.v0.iter().any(|&m| self.v1.binary_search(&m).is_ok()) {
            out.push("V0 and V1 overlap".into());
        }
        if self.v0.len() + self.v1.len() != 1usize << setup.size() {
            out.push("V0 and V1 do not cover V".into());
        }
        let mut shifted: Vec<u64> = self.v0.iter().map(|m| m ^ setup.full_mask()).collect();
        shifted.sort_unstable();
        if shifted != self.v1 {
            out.push("x -> x + e_S does not carry V0 onto V1".into());
        }
        if !self.in_v0(0) {
            out.push("0 is not in V0".into());
        }
        if self.in_v0(setup.full_mask()) {
            out.push("e_S lies in V0".into());
        }
        out
    }
}

/// Is `pi` restricted to `V_0` a bijection onto the quotient?
pub fn pi0_check(setup: &Setup, split: &AffineSplit) -> Result<bool> {
    let pi = cycle_projection(setup)?;
    let image: HashSet<u64> = split.v0.iter().map(|&m| pi.project_mask(m)).collect();
    Ok(image.len() == split.v0.len() && image.len() == 1usize << pi.quotient_width())
}

/// `M_B`, the span of the `e_I` inside the unreduced space.
pub fn lift_m(setup: &Setup, b: &Family) -> Result<SubspaceHandle> {
    require(setup, Case::Cycle)?;
    if !is_admissible(setup, b) {
        return Err(Error::Domain(format!("{b} does not satisfy (P0) and (P1)")));
    }
    Ok(b.span(setup))
}

/// Checks the lifting laws for every family of the table: `M_B` inside
/// `V_0`, `e_S` outside `M_B`, `pi: M_B -> L_B` an isomorphism with
/// `pi^{-1}(L_B) = M_B + F e_S`, `eps(B)` in `M_B`, and `V_0` the union of
/// the `M_B`.
pub fn lift_violations(setup: &Setup, table: &PhiTable, split: &AffineSplit) -> Result<Vec<String>> {
    let pi = cycle_projection(setup)?;
    let quotient = Setup::build(Case::CycleQuotient, setup.n())?;
    let e_s = setup.full_mask();
    let mut out = Vec::new();
    let mut union = BTreeSet::new();
    for r in table.records() {
        let m = &r.subspace;
        let masks = m.element_masks();
        if let Some(x) = masks.iter().find(|&&x| !split.in_v0(x)) {
            out.push(format!("{}: {} in M_B lies outside V0", r.family, setup.vector_of(*x)));
        }
        if m.contains_mask(e_s) {
            out.push(format!("{}: e_S lies in M_B", r.family));
        }
        let image = pi.project_subspace(m)?;
        let l = r.family.span(&quotient);
        if image != l || image.dim() != m.dim() {
            out.push(format!("{}: pi(M_B) is not L_B", r.family));
        }
        let mut with_e_s = m.clone();
        with_e_s.insert_mask(e_s);
        if pi.preimage(&l)? != with_e_s {
            out.push(format!("{}: pi^-1(L_B) is not M_B + F e_S", r.family));
        }
        if !m.contains_mask(r.eps.mask()) {
            out.push(format!("{}: eps(B) is not in M_B", r.family));
        }
        union.extend(masks);
    }
    if !union.iter().copied().eq(split.v0.iter().copied()) {
        out.push("the union of the M_B is not V0".into());
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct TildeRecord {
    /// Index of `B` in the table.
    pub base: usize,
    /// `M_B + F e_S` rather than `M_B`.
    pub extended: bool,
    pub subspace: SubspaceHandle,
    pub eps: BitVector,
}

/// `M_B` and `M_B + F e_S` for all `B`, sorted by image mask.
#[derive(Clone, Debug)]
pub struct TildeFamily {
    records: Vec<TildeRecord>,
}

pub fn tilde_family(setup: &Setup, table: &PhiTable) -> Result<TildeFamily> {
    require(setup, Case::Cycle)?;
    let e_s = BitVector::truncated(setup.size(), setup.full_mask());
    let mut records = Vec::with_capacity(2 * table.len());
    for (k, r) in table.records().iter().enumerate() {
        records.push(TildeRecord {
            base: k,
            extended: false,
            subspace: r.subspace.clone(),
            eps: r.eps,
        });
        records.push(TildeRecord {
            base: k,
            extended: true,
            subspace: r.subspace.with(&e_s)?,
            eps: r.eps + e_s,
        });
    }
    records.sort_by_key(|r| (r.eps.mask(), r.extended, r.base));
    Ok(TildeFamily { records })
}

impl TildeFamily {
    pub fn records(&self) -> &[TildeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Is the map onto all of `V` and injective?
    pub fn is_bijective(&self, width: usize) -> bool {
        let images: HashSet<u64> = self.records.iter().map(|r| r.eps.mask()).collect();
        images.len() == self.records.len() && images.len() == 1usize << width
    }

    pub fn containment_violations(&self) -> usize {
        self.records
            .iter()
            .filter(|r| !r.subspace.contains_mask(r.eps.mask()))
            .count()
    }

    /// `X' <= X` from the three clauses: both plain, both extended, or
    /// `X'` plain below an extended `X`, each with `B' <= B`.
    pub fn step(&self, phi_order: &PartialOrder) -> StepRelation {
        let r = &self.records;
        StepRelation::from_fn(r.len(), |i, j| {
            let allowed = !(r[i].extended && !r[j].extended);
            allowed && phi_order.leq(r[i].base, r[j].base)
        })
    }
}

/// The pairing `B <-> B'` with `eps(B') = eps(B) + e_{S^odd}` on the
/// even-`N` path, together with the decomposition check of `V_0`.
#[derive(Clone, Debug, Serialize)]
pub struct EvenInvolution {
    /// Table indices `(i, j)` with `i < j`.
    pub pairs: Vec<(usize, usize)>,
    pub unmatched: Vec<usize>,
    /// For each choice of `S'` (dropping the last, resp. first vertex):
    /// does `V_0 = V'_0 + {0, e_{S^odd}}` hold as a disjoint union?
    pub decompositions: Vec<bool>,
}

impl EvenInvolution {
    pub fn passed(&self) -> bool {
        self.unmatched.is_empty() && self.decompositions.iter().all(|&d| d)
    }
}

pub fn even_n_involution(setup: &Setup, table: &PhiTable) -> Result<EvenInvolution> {
    if setup.case() != Case::PathEven {
        return Err(Error::Domain("the involution is defined for the even-N path".into()));
    }
    let whole = setup
        .interval(setup.full_mask())
        .ok_or_else(|| Error::Verification("S is not an interval".into()))?;
    let (_, odd) = setup.even_odd_split(&whole)?;
    let shift = setup.vector_of(odd);

    let mut pairs = Vec::new();
    let mut unmatched = Vec::new();
    for (i, r) in table.records().iter().enumerate() {
        match table.index_of_eps(&(r.eps + shift)) {
            Some(j) if j != i => {
                if i < j {
                    pairs.push((i, j));
                }
            }
            _ => unmatched.push(i),
        }
    }

    let v0: BTreeSet<u64> = table.records().iter().map(|r| r.eps.mask()).collect();
    let sub = Setup::build(Case::PathOdd, setup.n() - 1)?;
    let sub_v0: Vec<u64> = enumerate_phi(&sub).records().iter().map(|r| r.eps.mask()).collect();
    let mut decompositions = Vec::new();
    for offset in [0u32, 1] {
        let embedded: BTreeSet<u64> = sub_v0.iter().map(|m| m << offset).collect();
        let translated: BTreeSet<u64> = embedded.iter().map(|m| m ^ odd).collect();
        let disjoint = embedded.is_disjoint(&translated);
        let union: BTreeSet<u64> = embedded.union(&translated).copied().collect();
        decompositions.push(disjoint && union == v0);
    }
    Ok(EvenInvolution {
        pairs,
        unmatched,
        decompositions,
    })
}

/// Validates an edge of the cycle and returns its vertex mask.
pub fn edge_mask(setup: &Setup, a: usize, b: usize) -> Result<u64> {
    if a >= setup.size() || b >= setup.size() || !setup.is_edge(a, b) {
        return Err(Error::Domain(format!("{{{}, {}}} is not an edge", a + 1, b + 1)));
    }
    Ok((1 << a) | (1 << b))
}

/// The default edge `{N-1, N}`, 0-based.
pub fn default_edge(setup: &Setup) -> (usize, usize) {
    (setup.size() - 2, setup.size() - 1)
}

/// `[eps]` and `z_eps` for an edge of the quotient cycle.
#[derive(Clone, Debug)]
pub struct EdgeMarker {
    edge: (usize, usize),
    edge_mask: u64,
    bracket: BitVector,
    z_mask: u64,
}

pub fn edge_marker(setup: &Setup, a: usize, b: usize) -> Result<EdgeMarker> {
    require(setup, Case::CycleQuotient)?;
    let edge_mask = edge_mask(setup, a, b)?;
    let rest = setup
        .interval(setup.full_mask() & !edge_mask)
        .ok_or_else(|| Error::Verification("S - eps is not an interval".into()))?;
    let (_, odd) = setup.even_odd_split(&rest)?;
    let width = setup.width();
    let marker = EdgeMarker {
        edge: (a.min(b), a.max(b)),
        edge_mask,
        bracket: setup.vector_of(odd),
        z_mask: edge_mask & ((1u64 << width) - 1),
    };

    for s in 0..setup.size() {
        if marker.z(&setup.vector(s)) != (edge_mask >> s & 1 == 1) {
            return Err(Error::Verification(format!("z_eps misreads vertex {}", s + 1)));
        }
    }
    if marker.z(&marker.bracket) {
        return Err(Error::Verification("z_eps([eps]) = 1".into()));
    }
    let kernel = null_space(width, &[marker.z_mask]);
    let radical = kernel.intersect(&kernel.perp(setup.form())?)?;
    if radical != SubspaceHandle::from_masks(width, [marker.bracket.mask()]) {
        return Err(Error::Verification(
            "the radical of the form on ker z_eps is not spanned by [eps]".into(),
        ));
    }
    Ok(marker)
}

impl EdgeMarker {
    /// 0-based endpoints, smaller first.
    pub fn edge(&self) -> (usize, usize) {
        self.edge
    }

    pub fn edge_mask(&self) -> u64 {
        self.edge_mask
    }

    pub fn bracket(&self) -> BitVector {
        self.bracket
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn z(&self, v: &BitVector) -> bool {
        (v.mask() & self.z_mask).count_ones() % 2 == 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BracketReport {
    pub in_span: bool,
    pub avoids_edge: bool,
    pub full_size: bool,
}

impl BracketReport {
    /// `[eps] in L_B` iff `supp(B)` misses the edge and `|B| = (|S|-1)/2`.
    pub fn consistent(&self) -> bool {
        self.in_span == (self.avoids_edge && self.full_size)
    }
}

pub fn bracket_membership(setup: &Setup, marker: &EdgeMarker, b: &Family) -> BracketReport {
    BracketReport {
        in_span: b.span(setup).contains_mask(marker.bracket.mask()),
        avoids_edge: b.support() & marker.edge_mask == 0,
        full_size: b.len() == (setup.size() - 1) / 2,
    }
}

/// Laws for the complement of the support in the cycle cases: some gap
/// has even size, `|B| <= (|S|-1)/2` with equality exactly when the gaps
/// are singletons plus one pair, and each `I` contains `(|I|+1)/2` members.
pub fn support_gap_violations(setup: &Setup, table: &PhiTable) -> Result<Vec<String>> {
    if !setup.case().is_cyclic() {
        return Err(Error::Domain("gap laws are stated for the cycle cases".into()));
    }
    let bound = (setup.size() - 1) / 2;
    let mut out = Vec::new();
    for b in table.families().filter(|b| !b.is_empty()) {
        let support = b.support();
        if support == setup.full_mask() {
            out.push(format!("{b}: support is all of S"));
            continue;
        }
        let gaps: Vec<usize> = setup
            .component_masks(setup.full_mask() & !support)
            .iter()
            .map(|m| m.count_ones() as usize)
            .collect();
        if gaps.iter().all(|g| g % 2 == 1) {
            out.push(format!("{b}: every gap component has odd size"));
        }
        if b.len() > bound {
            out.push(format!("{b}: {} members exceed {bound}", b.len()));
        }
        let pairs = gaps.iter().filter(|&&g| g == 2).count();
        let singles = gaps.iter().filter(|&&g| g == 1).count();
        let tight = pairs == 1 && singles + 1 == gaps.len();
        if (b.len() == bound) != tight {
            out.push(format!("{b}: size {} but gap sizes {gaps:?}", b.len()));
        }
        for i in b.intervals() {
            let inside = b.intervals().iter().filter(|j| j.is_subset_of(i)).count();
            if inside != i.size().div_ceil(2) {
                out.push(format!("{b}: {i} contains {inside} members"));
            }
        }
    }
    Ok(out)
}

/// `B_L` for `L = pi(M)`: recovers the family from its lifted span.
pub fn family_of_lift(quotient: &Setup, m: &SubspaceHandle) -> Result<Family> {
    let pi = QuotientMap::new(BitVector::truncated(quotient.size(), quotient.full_mask()))?;
    Ok(family_of_subspace(quotient, &pi.project_subspace(m)?))
}
