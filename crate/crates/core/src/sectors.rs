//! Sector decompositions over the quotient by `[eps]`: the lifts of each
//! quotient vector into a fixed endpoint sector, their level labels, the
//! induced orders and the collections of images of spans.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::affine::EdgeMarker;
use crate::error::{Error, Result};
use crate::f2::{bits, BitVector, QuotientMap, SubspaceHandle};
use crate::incidence::{Case, Setup};
use crate::omega::{OmegaTable, Sign};
use crate::order::{close, PartialOrder, StepRelation};

/// Orders the edge as `(u, w)` with `w = u + 1 mod N`.
fn oriented(setup: &Setup, edge: (usize, usize)) -> (usize, usize) {
    let n = setup.size();
    if (edge.0 + 1) % n == edge.1 {
        edge
    } else {
        (edge.1, edge.0)
    }
}

fn edge_bits(edge: (usize, usize)) -> u64 {
    (1 << edge.0) | (1 << edge.1)
}

/// Default `(J, tau)` for an edge: `J` is the path left after removing the
/// edge and the vertex before it, and `tau` is the endpoint with no
/// neighbour in `J`. All 0-based.
pub fn default_context(setup: &Setup, edge: (usize, usize)) -> Result<(u64, usize)> {
    check_cycle(setup, edge)?;
    let n = setup.size();
    let (u, _) = oriented(setup, edge);
    let before = (u + n - 1) % n;
    Ok((setup.full_mask() & !edge_bits(edge) & !(1 << before), u))
}

/// The mirror choice: drop the vertex after the edge, prefer the other
/// endpoint.
pub fn alternate_context(setup: &Setup, edge: (usize, usize)) -> Result<(u64, usize)> {
    check_cycle(setup, edge)?;
    let n = setup.size();
    let (_, w) = oriented(setup, edge);
    let after = (w + 1) % n;
    Ok((setup.full_mask() & !edge_bits(edge) & !(1 << after), w))
}

fn check_cycle(setup: &Setup, edge: (usize, usize)) -> Result<()> {
    if setup.case() != Case::CycleQuotient {
        return Err(Error::Domain("sectors live in the quotient case".into()));
    }
    if !setup.is_edge(edge.0, edge.1) {
        return Err(Error::Usage(format!("{{{}, {}}} is not an edge", edge.0 + 1, edge.1 + 1)));
    }
    Ok(())
}

/// `J` must avoid the edge, have `N - 3` vertices and be an interval.
pub fn validate_j(setup: &Setup, edge: (usize, usize), j: u64) -> Result<()> {
    check_cycle(setup, edge)?;
    let n = setup.size();
    if j & !setup.full_mask() != 0 {
        return Err(Error::Usage("J has vertices outside S".into()));
    }
    if j & edge_bits(edge) != 0 {
        return Err(Error::Usage("J meets the edge".into()));
    }
    if j.count_ones() as usize != n - 3 {
        return Err(Error::Usage(format!("J has {} vertices, expected {}", j.count_ones(), n - 3)));
    }
    if n > 3 && setup.interval(j).is_none() {
        return Err(Error::Usage("J does not induce a path".into()));
    }
    Ok(())
}

/// The data fixing one sector table: edge, preferred endpoint, sign and
/// `J`, with the quotient map by `[eps]`.
#[derive(Clone, Debug)]
pub struct SectorContext {
    marker: EdgeMarker,
    tau: usize,
    sign: Sign,
    j_mask: u64,
    quotient: QuotientMap,
}

impl SectorContext {
    pub fn new(setup: &Setup, marker: &EdgeMarker, sign: Sign, tau: usize, j_mask: u64) -> Result<Self> {
        let edge = marker.edge();
        validate_j(setup, edge, j_mask)?;
        if tau != edge.0 && tau != edge.1 {
            return Err(Error::Usage(format!("tau = {} is not an endpoint of the edge", tau + 1)));
        }
        Ok(SectorContext {
            marker: marker.clone(),
            tau,
            sign,
            j_mask,
            quotient: QuotientMap::new(marker.bracket())?,
        })
    }

    pub fn marker(&self) -> &EdgeMarker {
        &self.marker
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn j_mask(&self) -> u64 {
        self.j_mask
    }

    pub fn quotient(&self) -> &QuotientMap {
        &self.quotient
    }

    /// The sign of a quotient vector; `z_eps` kills `[eps]`, so it descends.
    pub fn sign_of(&self, y: u64) -> Sign {
        let lifted = BitVector::truncated(self.quotient.ambient_width(), self.quotient.lift_mask(y));
        if self.marker.z(&lifted) {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// The quotient vectors of the given sign, sorted.
    pub fn part(&self, sign: Sign) -> Vec<u64> {
        (0..1u64 << self.quotient.quotient_width())
            .filter(|&y| self.sign_of(y) == sign)
            .collect()
    }
}

/// Indices of the records whose support lies in `J`.
pub fn omega_j(omega: &OmegaTable, j_mask: u64) -> Vec<usize> {
    omega
        .records()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.family.support() & !j_mask == 0)
        .map(|(k, _)| k)
        .collect()
}

/// The images of `omega_J`, and the images of the records avoiding the edge
/// that are not already among them. Both sorted.
pub fn j_split(omega: &OmegaTable, j_mask: u64) -> (Vec<u64>, Vec<u64>) {
    let edge = omega.marker().edge_mask();
    let mut zero = Vec::new();
    let mut one = Vec::new();
    for r in omega.records() {
        let support = r.family.support();
        if support & !j_mask == 0 {
            zero.push(r.eps_prime.mask());
        } else if support & edge == 0 {
            one.push(r.eps_prime.mask());
        }
    }
    zero.sort_unstable();
    one.sort_unstable();
    (zero, one)
}

fn in_tilde(ctx: &SectorContext, r: &crate::omega::OmegaRecord) -> bool {
    let sectored = r.sign == ctx.sign && r.sector == Some(ctx.tau);
    let from_j = ctx.sign == Sign::Plus && r.family.support() & !ctx.j_mask == 0;
    sectored || from_j
}

#[derive(Clone, Debug)]
pub struct SectorEntry {
    /// The quotient vector.
    pub y: BitVector,
    /// Its unique preimage in the sector set.
    pub lift: BitVector,
    /// Index of the omega record with image `lift`.
    pub record: usize,
    /// Whether the record comes from `omega_J` rather than the sector.
    pub from_j: bool,
    pub nu: usize,
    /// Image of the record's span in the quotient.
    pub image: SubspaceHandle,
    /// The image restricted to the sign part, sorted.
    pub members: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct SectorTable {
    context: SectorContext,
    entries: Vec<SectorEntry>,
    by_y: HashMap<u64, usize>,
}

pub fn build_sector_table(setup: &Setup, omega: &OmegaTable, ctx: &SectorContext) -> Result<SectorTable> {
    if omega.marker().edge() != ctx.marker.edge() {
        return Err(Error::Usage("omega table and context use different edges".into()));
    }
    let q = &ctx.quotient;
    let mut entries = Vec::new();
    for (k, r) in omega.records().iter().enumerate() {
        if !in_tilde(ctx, r) {
            continue;
        }
        let from_j = r.sector != Some(ctx.tau) || r.sign != ctx.sign;
        let sign = if ctx.marker.z(&r.eps_prime) { Sign::Minus } else { Sign::Plus };
        if sign != ctx.sign {
            return Err(Error::Verification(format!(
                "'eps({}) has sign {} in the {} sector set",
                r.family,
                sign.symbol(),
                ctx.sign.symbol()
            )));
        }
        let image = q.project_subspace(&r.span)?;
        let members: Vec<u64> = image
            .element_masks()
            .into_iter()
            .filter(|&m| ctx.sign_of(m) == ctx.sign)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        entries.push(SectorEntry {
            y: q.project(&r.eps_prime)?,
            lift: r.eps_prime,
            record: k,
            from_j,
            nu: if from_j { 0 } else { r.n },
            image,
            members,
        });
    }
    entries.sort_by_key(|e| e.y.mask());

    let mut by_y = HashMap::with_capacity(entries.len());
    for (i, e) in entries.iter().enumerate() {
        if let Some(prev) = by_y.insert(e.y.mask(), i) {
            return Err(Error::Verification(format!(
                "the quotient map is not injective on the sector set: {} and {} both map to {}",
                entries[prev].lift, e.lift, e.y
            )));
        }
    }
    let expected = 1usize << (setup.size() - 3);
    if entries.len() != expected {
        return Err(Error::Verification(format!(
            "the sector set has {} elements, the sign part of the quotient has {expected}",
            entries.len()
        )));
    }
    Ok(SectorTable {
        context: ctx.clone(),
        entries,
        by_y,
    })
}

impl SectorTable {
    pub fn context(&self) -> &SectorContext {
        &self.context
    }

    /// Sorted by quotient vector.
    pub fn entries(&self) -> &[SectorEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of(&self, y: u64) -> Option<usize> {
        self.by_y.get(&y).copied()
    }

    pub fn to_json(&self, order: &PartialOrder) -> serde_json::Value {
        let ctx = &self.context;
        let (a, b) = ctx.marker.edge();
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "y": e.y.mask(),
                    "lift": e.lift.mask(),
                    "nu": e.nu,
                    "fromJ": e.from_j,
                    "members": e.members,
                })
            })
            .collect();
        let covers: Vec<[u64; 2]> = order
            .covers()
            .iter()
            .map(|&(i, j)| [self.entries[i].y.mask(), self.entries[j].y.mask()])
            .collect();
        serde_json::json!({
            "edge": [a + 1, b + 1],
            "sign": ctx.sign.symbol(),
            "tau": ctx.tau + 1,
            "J": bits(ctx.j_mask).map(|s| s + 1).collect::<Vec<_>>(),
            "entries": entries,
            "covers": covers,
        })
    }

    /// One row per quotient vector, `sign,tau,y,members` with members
    /// `;`-separated. No header.
    pub fn collection_csv_rows(&self) -> String {
        let mut out = String::new();
        let (sign, tau) = (self.context.sign.symbol(), self.context.tau + 1);
        for e in &self.entries {
            let members: Vec<String> = e.members.iter().map(u64::to_string).collect();
            out.push_str(&format!("{sign},{tau},{},{}\n", e.y.mask(), members.join(";")));
        }
        out
    }
}

/// `y' -> y` whenever `y'` lies in the restricted image attached to `y`.
pub fn sector_step(table: &SectorTable) -> StepRelation {
    let e = &table.entries;
    StepRelation::from_fn(e.len(), |i, j| e[j].members.binary_search(&e[i].y.mask()).is_ok())
}

pub fn leq_tau(table: &SectorTable) -> Result<PartialOrder> {
    close(&sector_step(table))
}

/// The restricted images, in entry order. They must be pairwise distinct.
pub fn f_collection(table: &SectorTable) -> Result<Vec<Vec<u64>>> {
    let mut seen = HashMap::new();
    for (i, e) in table.entries.iter().enumerate() {
        if let Some(prev) = seen.insert(&e.members, i) {
            return Err(Error::Verification(format!(
                "{} and {} have the same restricted image",
                table.entries[prev].y, e.y
            )));
        }
    }
    Ok(table.entries.iter().map(|e| e.members.clone()).collect())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SectorLawReport {
    pub tables: usize,
    pub part_sizes: Vec<String>,
    pub bijectivity: Vec<String>,
    pub interchange: Vec<String>,
    pub j_closure: Vec<String>,
    pub combined_monotonicity: Vec<String>,
    pub nu_monotonicity: Vec<String>,
    pub zero_minimum: Vec<String>,
    pub collections: Vec<String>,
    pub dim_preserved: Vec<String>,
    pub iota: Vec<String>,
}

impl SectorLawReport {
    pub fn passed(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn violations(&self) -> impl Iterator<Item = &String> + '_ {
        self.part_sizes
            .iter()
            .chain(&self.bijectivity)
            .chain(&self.interchange)
            .chain(&self.j_closure)
            .chain(&self.combined_monotonicity)
            .chain(&self.nu_monotonicity)
            .chain(&self.zero_minimum)
            .chain(&self.collections)
            .chain(&self.dim_preserved)
            .chain(&self.iota)
    }
}

/// Image masks of the records with the given sign, sector and level.
fn level_set(omega: &OmegaTable, sign: Sign, tau: usize, n: usize) -> BTreeSet<u64> {
    omega
        .records()
        .iter()
        .filter(|r| r.sign == sign && r.sector == Some(tau) && r.n == n)
        .map(|r| r.eps_prime.mask())
        .collect()
}

fn shifted(set: &BTreeSet<u64>, by: u64) -> BTreeSet<u64> {
    set.iter().map(|m| m ^ by).collect()
}

/// Runs every sector law for both signs and both endpoints with the given
/// `J`. `preceq` must be the order on `omega`.
pub fn check_sector_laws(
    setup: &Setup,
    omega: &OmegaTable,
    preceq: &PartialOrder,
    j_mask: u64,
) -> Result<SectorLawReport> {
    let marker = omega.marker();
    let (a, b) = marker.edge();
    let bracket = marker.bracket().mask();
    let recs = omega.records();
    let mut rep = SectorLawReport::default();

    let probe = SectorContext::new(setup, marker, Sign::Plus, a, j_mask)?;
    let expected = 1usize << (setup.size() - 3);
    for sign in [Sign::Plus, Sign::Minus] {
        let size = probe.part(sign).len();
        if size != expected {
            rep.part_sizes
                .push(format!("the {} part of the quotient has {size} elements", sign.symbol()));
        }
    }

    let max_n = recs.iter().map(|r| r.n).max().unwrap_or(0);
    for sign in [Sign::Plus, Sign::Minus] {
        for n in 0..=max_n {
            let first = level_set(omega, sign, a, n);
            let second = level_set(omega, sign, b, n);
            if shifted(&first, bracket) != second {
                rep.interchange.push(format!(
                    "adding [eps] does not swap the {} sectors at n = {n}",
                    sign.symbol()
                ));
            }
        }
    }
    let (zero, one) = j_split(omega, j_mask);
    let zero_set: BTreeSet<u64> = zero.iter().copied().collect();
    if shifted(&zero_set, bracket) != one.iter().copied().collect() {
        rep.interchange
            .push("adding [eps] does not swap the images of omega_J and their partners".into());
    }

    let in_j = |k: usize| recs[k].family.support() & !j_mask == 0;
    for (i, k) in preceq.pairs() {
        if in_j(k) && !in_j(i) {
            rep.j_closure.push(format!(
                "{} lies below {} but leaves J",
                recs[i].family, recs[k].family
            ));
        }
    }

    let mut collections = HashMap::new();
    for sign in [Sign::Plus, Sign::Minus] {
        for tau in [a, b] {
            let ctx = SectorContext::new(setup, marker, sign, tau, j_mask)?;
            let label = format!("({}, tau = {})", sign.symbol(), tau + 1);

            for (i, k) in preceq.pairs() {
                let (lo, hi) = (&recs[i], &recs[k]);
                if lo.sign != sign || !in_tilde(&ctx, hi) {
                    continue;
                }
                let hi_n = hi.n;
                if !((in_tilde(&ctx, lo) && lo.n == hi_n) || lo.n < hi_n) {
                    rep.combined_monotonicity.push(format!(
                        "{label}: {} (n = {}) below {} (n = {hi_n})",
                        lo.family, lo.n, hi.family
                    ));
                }
            }

            let table = match build_sector_table(setup, omega, &ctx) {
                Ok(t) => t,
                Err(e) => {
                    rep.bijectivity.push(format!("{label}: {e}"));
                    continue;
                }
            };
            rep.tables += 1;
            let order = match leq_tau(&table) {
                Ok(o) => o,
                Err(e) => {
                    rep.nu_monotonicity.push(format!("{label}: {e}"));
                    continue;
                }
            };
            let e = table.entries();
            for (i, j) in order.pairs() {
                if e[i].nu > e[j].nu {
                    rep.nu_monotonicity
                        .push(format!("{label}: {} <= {} but nu drops", e[i].y, e[j].y));
                }
            }
            if sign == Sign::Plus {
                match table.index_of(0) {
                    Some(z) if (0..table.len()).all(|j| order.leq(z, j)) => {}
                    _ => rep.zero_minimum.push(format!("{label}: 0 is not the minimum")),
                }
            }
            for entry in e {
                let dim = recs[entry.record].span.dim();
                if entry.image.dim() != dim {
                    rep.dim_preserved
                        .push(format!("{label}: the image of <B> at {} loses dimension", entry.y));
                }
                let full = 1usize << entry.image.dim();
                let want = if sign == Sign::Plus { full } else { full / 2 };
                if entry.members.len() != want {
                    rep.collections.push(format!(
                        "{label}: restricted image at {} has {} of {full} elements",
                        entry.y,
                        entry.members.len()
                    ));
                }
            }
            match f_collection(&table) {
                Ok(f) => {
                    collections.insert((sign, tau), f);
                }
                Err(err) => rep.collections.push(format!("{label}: {err}")),
            }
        }
    }

    let iota = setup.edge_reflection(a, b)?;
    let q = probe.quotient();
    let moved_bracket = setup.act_on_vector(&iota, &marker.bracket())?;
    if moved_bracket != marker.bracket() {
        rep.iota.push("the edge reflection moves [eps]".into());
    } else if let (Some(fa), Some(fb)) = (
        collections.get(&(Sign::Minus, a)),
        collections.get(&(Sign::Minus, b)),
    ) {
        let act = |y: u64| -> Result<u64> {
            let v = BitVector::truncated(q.ambient_width(), q.lift_mask(y));
            Ok(q.project(&setup.act_on_vector(&iota, &v)?)?.mask())
        };
        let mut image = BTreeSet::new();
        for set in fa {
            let mut moved = set.iter().map(|&y| act(y)).collect::<Result<Vec<_>>>()?;
            moved.sort_unstable();
            image.insert(moved);
        }
        if image != fb.iter().cloned().collect::<BTreeSet<_>>() {
            rep.iota
                .push("the edge reflection does not exchange the - collections".into());
        }
    }
    Ok(rep)
}

/// How the collections change between two choices of `J`.
#[derive(Clone, Debug, Serialize)]
pub struct JDependence {
    pub first_j: Vec<usize>,
    pub second_j: Vec<usize>,
    /// Per endpoint (1-based): do the `+` collections differ?
    pub plus_differs: Vec<(usize, bool)>,
    /// Per endpoint: do the `-` collections agree?
    pub minus_agree: Vec<(usize, bool)>,
}

pub fn j_dependence(setup: &Setup, omega: &OmegaTable, first: u64, second: u64) -> Result<JDependence> {
    let marker = omega.marker();
    let (a, b) = marker.edge();
    let collection = |sign: Sign, tau: usize, j: u64| -> Result<BTreeSet<Vec<u64>>> {
        let ctx = SectorContext::new(setup, marker, sign, tau, j)?;
        Ok(f_collection(&build_sector_table(setup, omega, &ctx)?)?
            .into_iter()
            .collect())
    };
    let mut plus_differs = Vec::new();
    let mut minus_agree = Vec::new();
    for tau in [a, b] {
        plus_differs.push((tau + 1, collection(Sign::Plus, tau, first)? != collection(Sign::Plus, tau, second)?));
        minus_agree.push((tau + 1, collection(Sign::Minus, tau, first)? == collection(Sign::Minus, tau, second)?));
    }
    Ok(JDependence {
        first_j: bits(first).map(|s| s + 1).collect(),
        second_j: bits(second).map(|s| s + 1).collect(),
        plus_differs,
        minus_agree,
    })
}
