//! The edge-marked collection: families with the anchor interval removed
//! when an odd number of members contain the marked edge, its map to the
//! quotient space, the sign split, the edge reflection, and the order.

use std::collections::{HashMap, HashSet};

use serde::{Serialize, Serializer};

use crate::affine::EdgeMarker;
use crate::error::{Error, Result};
use crate::f2::{BitVector, SubspaceHandle};
use crate::families::{Family, PhiTable};
use crate::incidence::{Case, Interval, Permutation, Setup};
use crate::order::{close, PartialOrder, StepRelation};

/// `n_B`: the number of members containing both endpoints of the edge.
pub fn n_count(b: &Family, edge_mask: u64) -> usize {
    b.intervals()
        .iter()
        .filter(|i| i.mask() & edge_mask == edge_mask)
        .count()
}

/// `I_B`: the unique member meeting the edge in exactly one vertex.
pub fn anchor_interval(b: &Family, edge_mask: u64) -> Result<Interval> {
    if b.support() & edge_mask == 0 {
        return Err(Error::Domain(format!("{b} does not meet the edge")));
    }
    let mut hits = b
        .intervals()
        .iter()
        .filter(|i| (i.mask() & edge_mask).count_ones() == 1);
    match (hits.next(), hits.next()) {
        (Some(i), None) => Ok(*i),
        (None, _) => Err(Error::Verification(format!("no member of {b} meets the edge once"))),
        (Some(_), Some(_)) => Err(Error::Verification(format!(
            "several members of {b} meet the edge once"
        ))),
    }
}

/// `B^!`: drops `I_B` when `n_B` is odd, otherwise returns `B`.
pub fn shriek(b: &Family, edge_mask: u64) -> Result<Family> {
    if n_count(b, edge_mask) % 2 == 1 {
        Ok(b.without(&anchor_interval(b, edge_mask)?))
    } else {
        Ok(b.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::Usage(format!("unknown sign {other:?}"))),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.symbol())
    }
}

#[derive(Clone, Debug)]
pub struct OmegaRecord {
    pub family: Family,
    /// `B~`, the family with `B = B~^!`.
    pub lifted: Family,
    /// `'eps(B) = eps(B~)`.
    pub eps_prime: BitVector,
    /// `<B>`, spanned by the members of `B` itself.
    pub span: SubspaceHandle,
    pub sign: Sign,
    /// The endpoint of the edge lying in `I_{B~}`, 0-based.
    pub sector: Option<usize>,
    pub n: usize,
}

#[derive(Serialize)]
struct OmegaLine<'a> {
    #[serde(rename = "B")]
    b: &'a Family,
    lifted: &'a Family,
    #[serde(rename = "epsPrime")]
    eps_prime: u64,
    n: usize,
    sign: Sign,
    sector: Option<usize>,
}

/// The records are kept in the order of the underlying table, so record
/// `k` comes from table record `k`; both are sorted by image mask.
#[derive(Clone, Debug)]
pub struct OmegaTable {
    marker: EdgeMarker,
    records: Vec<OmegaRecord>,
    by_family: HashMap<Family, usize>,
}

pub fn enumerate_omega(setup: &Setup, marker: &EdgeMarker, table: &PhiTable) -> Result<OmegaTable> {
    if setup.case() != Case::CycleQuotient {
        return Err(Error::Domain("the edge-marked collection lives in the quotient case".into()));
    }
    let edge = marker.edge_mask();
    let mut records = Vec::with_capacity(table.len());
    let mut by_family = HashMap::with_capacity(table.len());
    for (k, r) in table.records().iter().enumerate() {
        let family = shriek(&r.family, edge)?;
        let sector = if r.family.support() & edge != 0 {
            let anchor = anchor_interval(&r.family, edge)?;
            Some((anchor.mask() & edge).trailing_zeros() as usize)
        } else {
            None
        };
        if by_family.insert(family.clone(), k).is_some() {
            return Err(Error::Verification(format!("B -> B^! is not injective at {family}")));
        }
        records.push(OmegaRecord {
            span: family.span(setup),
            n: n_count(&r.family, edge),
            sign: if marker.z(&r.eps) { Sign::Minus } else { Sign::Plus },
            sector,
            eps_prime: r.eps,
            lifted: r.family.clone(),
            family,
        });
    }
    Ok(OmegaTable {
        marker: marker.clone(),
        records,
        by_family,
    })
}

impl OmegaTable {
    pub fn marker(&self) -> &EdgeMarker {
        &self.marker
    }

    pub fn records(&self) -> &[OmegaRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn index_of(&self, b: &Family) -> Option<usize> {
        self.by_family.get(b).copied()
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let line = OmegaLine {
                b: &r.family,
                lifted: &r.lifted,
                eps_prime: r.eps_prime.mask(),
                n: r.n,
                sign: r.sign,
                sector: r.sector.map(|t| t + 1),
            };
            out.push_str(&serde_json::to_string(&line).expect("plain data serializes"));
            out.push('\n');
        }
        out
    }
}

/// The graph involution exchanging the endpoints of the edge, applied to
/// a family.
pub fn iota_apply(setup: &Setup, edge: (usize, usize), b: &Family) -> Result<Family> {
    let iota = setup.edge_reflection(edge.0, edge.1)?;
    b.permuted(setup, &iota)
}

pub fn iota_permutation(setup: &Setup, edge: (usize, usize)) -> Result<Permutation> {
    setup.edge_reflection(edge.0, edge.1)
}

/// `B' -> B` whenever `'eps(B')` lies in `<B>`.
pub fn preceq_step(omega: &OmegaTable) -> StepRelation {
    let r = &omega.records;
    StepRelation::from_fn(r.len(), |i, j| r[j].span.contains_mask(r[i].eps_prime.mask()))
}

pub fn preceq_relation(omega: &OmegaTable) -> Result<PartialOrder> {
    close(&preceq_step(omega))
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OmegaLawReport {
    pub records: usize,
    pub cardinality: Vec<String>,
    pub reflexivity: Vec<String>,
    pub n_preserved: Vec<String>,
    pub sign_laws: Vec<String>,
    pub sign_characterization: Vec<String>,
    pub downward_plus: Vec<String>,
    pub sector_monotonicity: Vec<String>,
    pub lifted_order: Vec<String>,
    pub iota: Vec<String>,
}

impl OmegaLawReport {
    pub fn passed(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn violations(&self) -> impl Iterator<Item = &String> + '_ {
        self.cardinality
            .iter()
            .chain(&self.reflexivity)
            .chain(&self.n_preserved)
            .chain(&self.sign_laws)
            .chain(&self.sign_characterization)
            .chain(&self.downward_plus)
            .chain(&self.sector_monotonicity)
            .chain(&self.lifted_order)
            .chain(&self.iota)
    }
}

/// Exhaustive check of the laws of the edge-marked collection against the
/// order `preceq` on it and the order `phi_order` on the underlying table.
pub fn check_omega_laws(
    setup: &Setup,
    table: &PhiTable,
    omega: &OmegaTable,
    preceq: &PartialOrder,
    phi_order: &PartialOrder,
) -> Result<OmegaLawReport> {
    let edge = omega.marker.edge_mask();
    let recs = &omega.records;
    let mut rep = OmegaLawReport {
        records: recs.len(),
        ..Default::default()
    };

    let step = preceq_step(omega);
    for i in step.irreflexive_nodes() {
        rep.reflexivity.push(format!("'eps({}) is not in <B>", recs[i].family));
    }
    if recs.len() != 1usize << setup.width() {
        rep.cardinality
            .push(format!("{} records instead of {}", recs.len(), 1usize << setup.width()));
    }

    for r in recs {
        let name = &r.family;
        if n_count(&r.family, edge) != r.n {
            rep.n_preserved.push(format!("{name}: n changes under removal"));
        }
        let meets = (r.lifted.support() & edge).count_ones();
        let expected = match r.n {
            0 if meets == 0 => Some(Sign::Plus),
            0 if meets == 1 => Some(Sign::Minus),
            0 => None,
            n if n % 2 == 1 => Some(Sign::Plus),
            _ => Some(Sign::Minus),
        };
        match expected {
            Some(sign) if sign == r.sign => {}
            Some(sign) => rep.sign_laws.push(format!(
                "{name}: n = {}, sign {} where {} is required",
                r.n,
                r.sign.symbol(),
                sign.symbol()
            )),
            None => rep
                .sign_laws
                .push(format!("{name}: n = 0 but the support contains the edge")),
        }
        let plus_shape = r
            .family
            .intervals()
            .iter()
            .all(|i| (i.mask() & edge).count_ones() != 1);
        if plus_shape != (r.sign == Sign::Plus) {
            rep.sign_characterization
                .push(format!("{name}: sign {} disagrees with member shapes", r.sign.symbol()));
        }
    }

    for (i, j) in preceq.pairs() {
        let (lo, hi) = (&recs[i], &recs[j]);
        if hi.sign == Sign::Plus && lo.sign != Sign::Plus {
            rep.downward_plus
                .push(format!("{} below {} leaves the + part", lo.family, hi.family));
        }
        if let Some(tau) = hi.sector {
            let applies = lo.sign == hi.sign && (hi.sign == Sign::Minus || hi.n > 0);
            let ok = (lo.n == hi.n && lo.sector == Some(tau)) || lo.n < hi.n;
            if applies && !ok {
                rep.sector_monotonicity.push(format!(
                    "{} (n = {}) below {} (n = {}) in sector {}",
                    lo.family,
                    lo.n,
                    hi.family,
                    hi.n,
                    tau + 1
                ));
            }
        }
        if !phi_order.leq(i, j) {
            rep.lifted_order.push(format!(
                "{} below {} but {} is not below {}",
                lo.family, hi.family, lo.lifted, hi.lifted
            ));
        }
    }

    let (a, b) = omega.marker.edge();
    let iota = iota_permutation(setup, (a, b))?;
    let swap = |t: usize| iota.apply(t);
    let mut image_phi = HashSet::new();
    for r in recs {
        let lifted_image = r.lifted.permuted(setup, &iota)?;
        match table.index_of(&lifted_image) {
            Some(k2) => {
                image_phi.insert(k2);
            }
            None => rep.iota.push(format!("iota({}) leaves the table", r.lifted)),
        }
        let image = r.family.permuted(setup, &iota)?;
        let Some(m) = omega.index_of(&image) else {
            rep.iota.push(format!("iota({}) leaves the edge-marked collection", r.family));
            continue;
        };
        if image.permuted(setup, &iota)? != r.family {
            rep.iota.push(format!("iota is not an involution at {}", r.family));
        }
        let other = &recs[m];
        if other.sign != r.sign || other.n != r.n || other.sector != r.sector.map(swap) {
            rep.iota.push(format!("iota does not respect sign, n or sector at {}", r.family));
        }
        if setup.act_on_vector(&iota, &r.eps_prime)? != other.eps_prime {
            rep.iota.push(format!("iota does not commute with 'eps at {}", r.family));
        }
    }
    if image_phi.len() != table.len() {
        rep.iota.push("iota does not permute the table".into());
    }
    Ok(rep)
}
