//! Named verification checks and the command suites that run them.
//!
//! A [`Session`] holds one setup and its table and computes the derived
//! objects (orders, edge-marked collection, coefficient matrix) on demand.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::affine::{self, edge_marker, EdgeMarker};
use crate::duality::{self, CMatrix};
use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::families::{self, PhiTable};
use crate::incidence::{Case, Setup};
use crate::omega::{self, OmegaLawReport, OmegaTable};
use crate::order::{close, phi_step, PartialOrder};
use crate::sectors::{self, SectorLawReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Enumerate,
    Verify,
    Order,
    Fourier,
    Omega,
    Sectors,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Enumerate,
        Command::Verify,
        Command::Order,
        Command::Fourier,
        Command::Omega,
        Command::Sectors,
    ];
}

const ANY: &[Case] = &[Case::PathOdd, Case::PathEven, Case::Cycle, Case::CycleQuotient];
const CYCLIC: &[Case] = &[Case::Cycle, Case::CycleQuotient];
const QUOTIENT: &[Case] = &[Case::CycleQuotient];
const CYCLE: &[Case] = &[Case::Cycle];
const EVEN: &[Case] = &[Case::PathEven];

#[derive(Clone, Copy, Debug)]
pub struct CheckSpec {
    pub id: &'static str,
    pub commands: &'static [Command],
    pub cases: &'static [Case],
    /// Reported but never fails the run.
    pub informational: bool,
    pub summary: &'static str,
}

const fn spec(
    id: &'static str,
    commands: &'static [Command],
    cases: &'static [Case],
    summary: &'static str,
) -> CheckSpec {
    CheckSpec {
        id,
        commands,
        cases,
        informational: false,
        summary,
    }
}

const fn info(
    id: &'static str,
    commands: &'static [Command],
    cases: &'static [Case],
    summary: &'static str,
) -> CheckSpec {
    CheckSpec {
        id,
        commands,
        cases,
        informational: true,
        summary,
    }
}

use Command::*;

pub const CHECKS: &[CheckSpec] = &[
    spec("families.cardinality", &[Enumerate, Verify], ANY, "table size equals |V_0|, 2^(N-1) in the quotient case"),
    spec("families.v0_closed_form", &[Verify], ANY, "eps image matches the closed-form V_0 pointwise"),
    spec("families.epsilon_layered", &[Verify], ANY, "eps equals the layered formula"),
    spec("families.epsilon_anchored", &[Verify], QUOTIENT, "eps equals the anchored formula for every t"),
    spec("families.recursive", &[Verify], QUOTIENT, "recursive construction gives the same subspaces"),
    spec("families.linegraph", &[Verify], QUOTIENT, "pair-system model gives the same families"),
    spec("families.size_bound", &[Verify], CYCLIC, "the size cap does not change the enumeration"),
    spec("families.support_gaps", &[Verify], CYCLIC, "gap parity, size bound and equality shape"),
    spec("perfect.basis", &[Verify], ANY, "e_I independent and B recovered from L_B"),
    spec("perfect.containment", &[Verify], ANY, "eps(B) lies in L_B"),
    spec("perfect.bijection", &[Verify], ANY, "eps is a bijection onto the union of the L_B"),
    spec("perfect.monotonicity", &[Verify], ANY, "multiplicities dominate along containment"),
    spec("affine.split", &[Verify], CYCLE, "V_0 and V_1 are swapped by adding e_S"),
    spec("affine.pi0", &[Verify], CYCLE, "projection restricts to a bijection on V_0"),
    spec("affine.lift", &[Verify], CYCLE, "V_0 is the union of the lifted subspaces"),
    spec("affine.tilde", &[Verify, Order], CYCLE, "extended family is bijective, contains its images and is ordered"),
    spec("affine.even_involution", &[Verify], EVEN, "even-N pairing and decomposition"),
    spec("affine.bracket", &[Verify, Omega], QUOTIENT, "[eps] in L_B iff the support misses the edge and |B| is maximal"),
    spec("order.partial", &[Verify, Order], ANY, "containment order is a partial order"),
    spec("order.monotonicity", &[Verify, Order], ANY, "multiplicities are monotone along the order"),
    spec("omega.cardinality", &[Omega], QUOTIENT, "removal is injective with 2^(N-1) results"),
    spec("omega.order", &[Omega, Order], QUOTIENT, "the edge-marked order is a partial order"),
    spec("omega.reflexivity", &[Omega], QUOTIENT, "'eps(B) lies in <B>"),
    spec("omega.n_preserved", &[Omega], QUOTIENT, "n is unchanged by removal"),
    spec("omega.sign_laws", &[Omega], QUOTIENT, "sign from n and the edge meeting count"),
    spec("omega.sign_characterization", &[Omega], QUOTIENT, "sign + iff no member meets the edge once"),
    spec("omega.downward_plus", &[Omega], QUOTIENT, "the + part is downward closed"),
    spec("omega.sector_monotonicity", &[Omega], QUOTIENT, "n and sector monotone within a sign"),
    spec("omega.lifted_order", &[Omega], QUOTIENT, "the order lifts to the containment order"),
    spec("omega.iota", &[Omega], QUOTIENT, "the edge reflection acts compatibly"),
    spec("sectors.part_sizes", &[Sectors], QUOTIENT, "both sign parts of the quotient have 2^(N-3) elements"),
    spec("sectors.bijectivity", &[Sectors], QUOTIENT, "the quotient map is bijective on each sector set"),
    spec("sectors.interchange", &[Sectors], QUOTIENT, "adding [eps] swaps the sectors and the J parts"),
    spec("sectors.j_closure", &[Sectors], QUOTIENT, "omega_J is downward closed"),
    spec("sectors.combined_monotonicity", &[Sectors], QUOTIENT, "monotonicity on the extended sector sets"),
    spec("sectors.nu_monotonicity", &[Sectors, Order], QUOTIENT, "sector orders are partial orders with monotone nu"),
    spec("sectors.zero_minimum", &[Sectors], QUOTIENT, "0 is the minimum of the + orders"),
    spec("sectors.collections", &[Sectors], QUOTIENT, "restricted images are distinct with the expected shape"),
    spec("sectors.dim_preserved", &[Sectors], QUOTIENT, "the quotient map is injective on each span"),
    spec("sectors.iota", &[Sectors], QUOTIENT, "the edge reflection exchanges the - collections"),
    info("sectors.j_dependence", &[Sectors], QUOTIENT, "how the collections change with the other choice of J"),
    spec("fourier.identity", &[Fourier], QUOTIENT, "the defining identity holds at every point"),
    spec("fourier.triangularity", &[Fourier], QUOTIENT, "zero pattern by dimension and +-2^k diagonal"),
    spec("fourier.column_sum", &[Fourier], QUOTIENT, "the column at 0 sums to 1"),
    spec("fourier.orbit_constancy", &[Fourier], QUOTIENT, "coefficients are constant on dihedral orbits"),
    spec("fourier.lagrangian", &[Fourier], QUOTIENT, "Lagrangian columns are unit vectors"),
    info("fourier.conjecture", &[Fourier], QUOTIENT, "entries outside {0, +-2^k}"),
    info("fourier.printed_table", &[Fourier], QUOTIENT, "comparison with the printed N = 7 column"),
];

pub fn all_check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

pub fn lookup(id: &str) -> Option<&'static CheckSpec> {
    CHECKS.iter().find(|c| c.id == id)
}

/// Checks a command runs for a case, in registry order.
pub fn suite(command: Command, case: Case) -> Vec<&'static CheckSpec> {
    CHECKS
        .iter()
        .filter(|c| c.commands.contains(&command) && c.cases.contains(&case))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub passed: bool,
    pub informational: bool,
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

/// Optional knobs for the derived objects.
#[derive(Clone, Debug, Default)]
pub struct SessionOptions {
    /// 0-based edge; defaults to `{N-1, N}`.
    pub edge: Option<(usize, usize)>,
    /// 0-based preferred endpoint.
    pub tau: Option<usize>,
    pub j_mask: Option<u64>,
    /// Columns of the coefficient matrix; all of them when `None`.
    pub fourier_columns: Option<Vec<u64>>,
    pub compare_paper: bool,
}

pub struct Session {
    setup: Setup,
    table: PhiTable,
    options: SessionOptions,
    phi_order: Option<PartialOrder>,
    marker: Option<EdgeMarker>,
    omega: Option<OmegaTable>,
    preceq: Option<PartialOrder>,
    omega_report: Option<OmegaLawReport>,
    sector_report: Option<SectorLawReport>,
    cmatrix: Option<CMatrix>,
}

fn require_flag<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::Verification(format!("{what} was not computed")))
}

impl Session {
    pub fn new(setup: Setup, table: PhiTable, options: SessionOptions) -> Result<Self> {
        if table.case() != setup.case() || table.n() != setup.n() {
            return Err(Error::Usage("table does not belong to the setup".into()));
        }
        Ok(Session {
            setup,
            table,
            options,
            phi_order: None,
            marker: None,
            omega: None,
            preceq: None,
            omega_report: None,
            sector_report: None,
            cmatrix: None,
        })
    }

    pub fn setup(&self) -> &Setup {
        &self.setup
    }

    pub fn table(&self) -> &PhiTable {
        &self.table
    }

    pub fn options(&self) -> &SessionOptions {
        &self.options
    }

    pub fn edge(&self) -> (usize, usize) {
        self.options.edge.unwrap_or_else(|| affine::default_edge(&self.setup))
    }

    /// `(J, tau)` after applying the overrides.
    pub fn sector_choice(&self) -> Result<(u64, usize)> {
        let (j, tau) = sectors::default_context(&self.setup, self.edge())?;
        Ok((self.options.j_mask.unwrap_or(j), self.options.tau.unwrap_or(tau)))
    }

    pub fn phi_order(&mut self) -> Result<&PartialOrder> {
        if self.phi_order.is_none() {
            self.phi_order = Some(close(&phi_step(&self.table))?);
        }
        require_flag(self.phi_order.as_ref(), "the order")
    }

    pub fn marker(&mut self) -> Result<&EdgeMarker> {
        if self.marker.is_none() {
            let (a, b) = self.edge();
            self.marker = Some(edge_marker(&self.setup, a, b)?);
        }
        require_flag(self.marker.as_ref(), "the edge marker")
    }

    pub fn omega(&mut self) -> Result<&OmegaTable> {
        if self.omega.is_none() {
            let marker = self.marker()?.clone();
            self.omega = Some(omega::enumerate_omega(&self.setup, &marker, &self.table)?);
        }
        require_flag(self.omega.as_ref(), "the edge-marked collection")
    }

    pub fn preceq(&mut self) -> Result<&PartialOrder> {
        if self.preceq.is_none() {
            let po = omega::preceq_relation(self.omega()?)?;
            self.preceq = Some(po);
        }
        require_flag(self.preceq.as_ref(), "the edge-marked order")
    }

    pub fn omega_report(&mut self) -> Result<&OmegaLawReport> {
        if self.omega_report.is_none() {
            self.phi_order()?;
            self.preceq()?;
            let rep = omega::check_omega_laws(
                &self.setup,
                &self.table,
                require_flag(self.omega.as_ref(), "omega")?,
                require_flag(self.preceq.as_ref(), "preceq")?,
                require_flag(self.phi_order.as_ref(), "order")?,
            )?;
            self.omega_report = Some(rep);
        }
        require_flag(self.omega_report.as_ref(), "the omega report")
    }

    pub fn sector_report(&mut self) -> Result<&SectorLawReport> {
        if self.sector_report.is_none() {
            let (j, _) = self.sector_choice()?;
            self.preceq()?;
            let rep = sectors::check_sector_laws(
                &self.setup,
                require_flag(self.omega.as_ref(), "omega")?,
                require_flag(self.preceq.as_ref(), "preceq")?,
                j,
            )?;
            self.sector_report = Some(rep);
        }
        require_flag(self.sector_report.as_ref(), "the sector report")
    }

    pub fn cmatrix(&mut self) -> Result<&CMatrix> {
        if self.cmatrix.is_none() {
            let cm = match &self.options.fourier_columns {
                None => duality::c_matrix(&self.setup, &self.table)?,
                Some(cols) => {
                    let width = self.setup.width();
                    let xs: Vec<BitVector> = cols.iter().map(|&m| BitVector::truncated(width, m)).collect();
                    duality::c_matrix_columns(&self.setup, &self.table, &xs)?
                }
            };
            self.cmatrix = Some(cm);
        }
        require_flag(self.cmatrix.as_ref(), "the coefficient matrix")
    }

    /// Runs one check. Errors raised while computing are reported as
    /// violations of that check.
    pub fn run(&mut self, spec: &'static CheckSpec) -> CheckOutcome {
        let (violations, detail) = match self.evaluate(spec.id) {
            Ok(v) => v,
            Err(e) => (vec![e.to_string()], None),
        };
        CheckOutcome {
            id: spec.id,
            passed: violations.is_empty(),
            informational: spec.informational,
            violations,
            detail,
        }
    }

    pub fn run_suite(&mut self, command: Command) -> Vec<CheckOutcome> {
        suite(command, self.setup.case())
            .into_iter()
            .map(|c| self.run(c))
            .collect()
    }

    fn evaluate(&mut self, id: &str) -> Result<(Vec<String>, Option<serde_json::Value>)> {
        let setup = &self.setup;
        let table = &self.table;
        let none = |v: Vec<String>| Ok((v, None));
        match id {
            "families.cardinality" => {
                let mut v = Vec::new();
                let v0 = closed_form_v0(setup)?;
                if table.len() != v0.len() {
                    v.push(format!("{} families but |V_0| = {}", table.len(), v0.len()));
                }
                if setup.case() == Case::CycleQuotient && table.len() != 1usize << (setup.n() - 1) {
                    v.push(format!("{} families instead of 2^(N-1)", table.len()));
                }
                Ok((v, Some(serde_json::json!({ "families": table.len(), "v0": v0.len() }))))
            }
            "families.v0_closed_form" => {
                let image: BTreeSet<u64> = table.records().iter().map(|r| r.eps.mask()).collect();
                let v0 = closed_form_v0(setup)?;
                let mut v: Vec<String> = image
                    .difference(&v0)
                    .map(|m| format!("eps image {} fails the closed form", BitVector::truncated(setup.width(), *m)))
                    .collect();
                v.extend(
                    v0.difference(&image)
                        .map(|m| format!("{} satisfies the closed form but is not an image", BitVector::truncated(setup.width(), *m))),
                );
                none(v)
            }
            "families.epsilon_layered" => none(
                table
                    .records()
                    .iter()
                    .filter(|r| families::epsilon_layered(setup, &r.family) != r.eps)
                    .map(|r| format!("{}: layered formula disagrees", r.family))
                    .collect(),
            ),
            "families.epsilon_anchored" => {
                let mut v = Vec::new();
                for r in table.records() {
                    for t in 0..setup.size() {
                        if families::epsilon_anchored(setup, &r.family, t)? != r.eps {
                            v.push(format!("{}: anchored formula at t = {} disagrees", r.family, t + 1));
                        }
                    }
                }
                none(v)
            }
            "families.recursive" => {
                let recursive: BTreeSet<Vec<u64>> = families::recursive_family(setup)?
                    .iter()
                    .map(|l| l.rows().to_vec())
                    .collect();
                let axioms: BTreeSet<Vec<u64>> = table.records().iter().map(|r| r.subspace.rows().to_vec()).collect();
                none(if recursive == axioms {
                    vec![]
                } else {
                    vec![format!(
                        "recursive construction gives {} subspaces, {} shared with the table of {}",
                        recursive.len(),
                        recursive.intersection(&axioms).count(),
                        axioms.len()
                    )]
                })
            }
            "families.linegraph" => {
                let lg = families::enumerate_phi_linegraph(setup)?;
                let mut ax: Vec<_> = table.families().cloned().collect();
                ax.sort();
                none(if lg == ax {
                    vec![]
                } else {
                    vec![format!("pair-system model gives {} families, axioms give {}", lg.len(), ax.len())]
                })
            }
            "families.size_bound" => {
                let capped = families::enumerate_families(setup, true);
                let full = families::enumerate_families(setup, false);
                none(if capped == full {
                    vec![]
                } else {
                    vec![format!("capped enumeration has {} families, full has {}", capped.len(), full.len())]
                })
            }
            "families.support_gaps" => none(affine::support_gap_violations(setup, table)?),
            "perfect.basis" | "perfect.containment" | "perfect.bijection" | "perfect.monotonicity" => {
                let rep = families::verify_perfect(setup, table);
                let v = match id {
                    "perfect.basis" => rep.basis,
                    "perfect.containment" => rep.containment,
                    "perfect.bijection" => rep.bijection,
                    _ => rep.monotonicity,
                };
                none(v)
            }
            "affine.split" => {
                let split = affine::affine_split(setup)?;
                none(split.violations(setup))
            }
            "affine.pi0" => {
                let split = affine::affine_split(setup)?;
                none(if affine::pi0_check(setup, &split)? {
                    vec![]
                } else {
                    vec!["projection is not a bijection from V_0".into()]
                })
            }
            "affine.lift" => {
                let split = affine::affine_split(setup)?;
                none(affine::lift_violations(setup, table, &split)?)
            }
            "affine.tilde" => {
                let tilde = affine::tilde_family(setup, table)?;
                let mut v = Vec::new();
                if !tilde.is_bijective(setup.size()) {
                    v.push("extended images are not a bijection onto V".into());
                }
                let bad = tilde.containment_violations();
                if bad > 0 {
                    v.push(format!("{bad} extended records miss their image"));
                }
                let step = tilde.step(self.phi_order()?);
                if let Err(e) = close(&step) {
                    v.push(e.to_string());
                }
                none(v)
            }
            "affine.even_involution" => {
                let inv = affine::even_n_involution(setup, table)?;
                let mut v = Vec::new();
                if !inv.unmatched.is_empty() {
                    v.push(format!("{} families have no partner", inv.unmatched.len()));
                }
                let failed = inv.decompositions.iter().filter(|ok| !**ok).count();
                if failed > 0 {
                    v.push(format!("{failed} decomposition checks failed"));
                }
                none(v)
            }
            "affine.bracket" => {
                let marker = self.marker()?.clone();
                let setup = &self.setup;
                none(
                    self.table
                        .families()
                        .filter(|b| !affine::bracket_membership(setup, &marker, b).consistent())
                        .map(|b| format!("{b}: [eps] membership disagrees with the criterion"))
                        .collect(),
                )
            }
            "order.partial" => {
                let po = self.phi_order()?;
                let mut v = Vec::new();
                if !po.is_reflexive() || !po.is_antisymmetric() || !po.is_transitive() {
                    v.push("containment order is not a partial order".into());
                }
                Ok((v, Some(serde_json::json!({ "covers": po.covers().len() }))))
            }
            "order.monotonicity" => {
                let size = self.setup.size();
                self.phi_order()?;
                let po = require_flag(self.phi_order.as_ref(), "order")?;
                none(
                    crate::order::monotonicity_violations(&self.table, po, size)
                        .into_iter()
                        .map(|(i, j)| {
                            format!(
                                "{} <= {} but multiplicities are not dominated",
                                self.table.records()[i].family,
                                self.table.records()[j].family
                            )
                        })
                        .collect(),
                )
            }
            "omega.order" => {
                let po = self.preceq()?;
                none(if po.is_reflexive() && po.is_antisymmetric() && po.is_transitive() {
                    vec![]
                } else {
                    vec!["the edge-marked order is not a partial order".into()]
                })
            }
            "omega.cardinality" => none(self.omega_report()?.cardinality.clone()),
            "omega.reflexivity" => none(self.omega_report()?.reflexivity.clone()),
            "omega.n_preserved" => none(self.omega_report()?.n_preserved.clone()),
            "omega.sign_laws" => none(self.omega_report()?.sign_laws.clone()),
            "omega.sign_characterization" => none(self.omega_report()?.sign_characterization.clone()),
            "omega.downward_plus" => none(self.omega_report()?.downward_plus.clone()),
            "omega.sector_monotonicity" => none(self.omega_report()?.sector_monotonicity.clone()),
            "omega.lifted_order" => none(self.omega_report()?.lifted_order.clone()),
            "omega.iota" => none(self.omega_report()?.iota.clone()),
            "sectors.part_sizes" => none(self.sector_report()?.part_sizes.clone()),
            "sectors.bijectivity" => {
                let rep = self.sector_report()?;
                let mut v = rep.bijectivity.clone();
                if rep.tables != 4 && v.is_empty() {
                    v.push(format!("{} of 4 sector tables were built", rep.tables));
                }
                none(v)
            }
            "sectors.interchange" => none(self.sector_report()?.interchange.clone()),
            "sectors.j_closure" => none(self.sector_report()?.j_closure.clone()),
            "sectors.combined_monotonicity" => none(self.sector_report()?.combined_monotonicity.clone()),
            "sectors.nu_monotonicity" => none(self.sector_report()?.nu_monotonicity.clone()),
            "sectors.zero_minimum" => none(self.sector_report()?.zero_minimum.clone()),
            "sectors.collections" => none(self.sector_report()?.collections.clone()),
            "sectors.dim_preserved" => none(self.sector_report()?.dim_preserved.clone()),
            "sectors.iota" => none(self.sector_report()?.iota.clone()),
            "sectors.j_dependence" => {
                if self.setup.n() <= 3 {
                    return Ok((vec![], Some(serde_json::json!("J is empty for N = 3"))));
                }
                let edge = self.edge();
                let (j, _) = self.sector_choice()?;
                let (alt, _) = sectors::alternate_context(&self.setup, edge)?;
                let other = if alt == j { sectors::default_context(&self.setup, edge)?.0 } else { alt };
                let setup = self.setup.clone();
                let dep = sectors::j_dependence(&setup, self.omega()?, j, other)?;
                Ok((vec![], Some(serde_json::to_value(dep).expect("plain data serializes"))))
            }
            "fourier.identity" => {
                self.cmatrix()?;
                let cm = require_flag(self.cmatrix.as_ref(), "c")?;
                none(duality::identity_violations(&self.setup, &self.table, cm)?)
            }
            "fourier.triangularity" => {
                let rep = duality::triangularity_check(self.cmatrix()?);
                let mut v: Vec<String> = rep
                    .zero_pattern
                    .iter()
                    .map(|(y, x, c)| format!("c({y}, {x}) = {c} breaks the zero pattern"))
                    .collect();
                v.extend(rep.diagonal.iter().map(|(x, c)| format!("diagonal at {x} is {c}")));
                none(v)
            }
            "fourier.column_sum" => match duality::column_sum(self.cmatrix()?, 0) {
                Some(1) => Ok((vec![], Some(serde_json::json!({ "sum": 1 })))),
                Some(s) => none(vec![format!("the column at 0 sums to {s}")]),
                None => none(vec!["the column at 0 was not computed".into()]),
            },
            "fourier.orbit_constancy" => {
                self.cmatrix()?;
                let cm = require_flag(self.cmatrix.as_ref(), "c")?;
                none(duality::orbit_constancy_violations(&self.setup, cm)?)
            }
            "fourier.lagrangian" => none(duality::lagrangian_violations(self.cmatrix()?)),
            "fourier.conjecture" => {
                let found = duality::conjecture_scan(self.cmatrix()?);
                let detail = serde_json::json!({
                    "entries": found.len(),
                    "first": found.iter().take(20).map(|(y, x, c)| [*y as i64, *x as i64, *c]).collect::<Vec<_>>(),
                });
                none_with_detail(
                    found.iter().map(|(y, x, c)| format!("c({y}, {x}) = {c}")).collect(),
                    detail,
                )
            }
            "fourier.printed_table" => {
                if !self.options.compare_paper || self.setup.n() != 7 {
                    return Ok((vec![], Some(serde_json::json!("skipped: needs N = 7 and --compare-paper"))));
                }
                let orbits = duality::dihedral_orbits(&self.setup)?;
                self.cmatrix()?;
                let cm = require_flag(self.cmatrix.as_ref(), "c")?;
                let cmp = duality::paper_table_compare(&self.setup, cm, &orbits)?;
                let v = cmp
                    .mismatches()
                    .map(|r| format!("{}: computed {}, printed {}", r.label, r.computed, r.printed))
                    .collect();
                none_with_detail(v, serde_json::to_value(&cmp).expect("plain data serializes"))
            }
            other => Err(Error::Usage(format!("unknown check {other}"))),
        }
    }
}

fn none_with_detail(v: Vec<String>, detail: serde_json::Value) -> Result<(Vec<String>, Option<serde_json::Value>)> {
    Ok((v, Some(detail)))
}

/// All vectors satisfying the closed-form description of `V_0`.
fn closed_form_v0(setup: &Setup) -> Result<BTreeSet<u64>> {
    let width = setup.width();
    if width > 24 {
        return Err(Error::Usage("the closed form is tabulated only for width <= 24".into()));
    }
    let mut out = BTreeSet::new();
    for m in 0..1u64 << width {
        if families::v0_membership(setup, &BitVector::truncated(width, m))? {
            out.insert(m);
        }
    }
    Ok(out)
}
