//! Integer coefficients expressing the indicator of `perp(L_x)` in the basis
//! of indicators of the `L_y`, their structural checks, and the dihedral
//! orbit analysis.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{is_signed_power_of_two, is_unit_triangular, solve_integer, solve_unit_triangular};
use crate::f2::BitVector;
use crate::families::PhiTable;
use crate::incidence::{Case, Setup};

#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    pub representative: u64,
    pub label: String,
    pub size: usize,
    pub members: Vec<u64>,
}

/// Orbits of the dihedral group on the quotient space, ordered by
/// representative (the least mask of each orbit).
#[derive(Clone, Debug, Serialize)]
pub struct OrbitTable {
    pub n: usize,
    pub orbits: Vec<Orbit>,
    #[serde(skip)]
    index: HashMap<u64, usize>,
}

impl OrbitTable {
    pub fn orbit_of(&self, mask: u64) -> Option<&Orbit> {
        self.index.get(&mask).map(|&k| &self.orbits[k])
    }

    pub fn orbit_index(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// Orbit sizes in ascending order.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.orbits.iter().map(|o| o.size).collect();
        s.sort_unstable();
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

pub fn dihedral_orbits(setup: &Setup) -> Result<OrbitTable> {
    require_quotient(setup)?;
    let group = setup.dihedral_group()?;
    let width = setup.width();
    let mut index = HashMap::new();
    let mut orbits = Vec::new();
    for mask in 0..1u64 << width {
        if index.contains_key(&mask) {
            continue;
        }
        let v = BitVector::truncated(width, mask);
        let mut members = group
            .iter()
            .map(|g| setup.act_on_vector(g, &v).map(|w| w.mask()))
            .collect::<Result<Vec<_>>>()?;
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            index.insert(m, orbits.len());
        }
        orbits.push(Orbit {
            representative: mask,
            label: v.to_string(),
            size: members.len(),
            members,
        });
    }
    Ok(OrbitTable {
        n: setup.n(),
        orbits,
        index,
    })
}

fn require_quotient(setup: &Setup) -> Result<()> {
    if setup.case() != Case::CycleQuotient {
        return Err(Error::Domain("the coefficient matrix is defined for the quotient case".into()));
    }
    Ok(())
}

/// `c_{y,x}` for a set of columns `x`. Rows and columns are indexed by
/// positions in `order`, which lists `V` sorted by `(dim L_y, mask)`.
#[derive(Clone, Debug)]
pub struct CMatrix {
    width: usize,
    order: Vec<u64>,
    dims: Vec<usize>,
    position: HashMap<u64, usize>,
    columns: BTreeMap<usize, Vec<i64>>,
}

impl CMatrix {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn order(&self) -> &[u64] {
        &self.order
    }

    pub fn dim_at(&self, position: usize) -> usize {
        self.dims[position]
    }

    pub fn position(&self, mask: u64) -> Option<usize> {
        self.position.get(&mask).copied()
    }

    /// Computed columns as `(x position, values by y position)`.
    pub fn columns(&self) -> impl Iterator<Item = (usize, &[i64])> + '_ {
        self.columns.iter().map(|(&x, c)| (x, c.as_slice()))
    }

    pub fn column(&self, x_mask: u64) -> Option<&[i64]> {
        let x = self.position(x_mask)?;
        self.columns.get(&x).map(Vec::as_slice)
    }

    pub fn entry(&self, y_mask: u64, x_mask: u64) -> Option<i64> {
        let y = self.position(y_mask)?;
        self.column(x_mask).map(|c| c[y])
    }

    pub fn is_complete(&self) -> bool {
        self.columns.len() == self.order.len()
    }

    /// Nonzero entries as `y,x,value` lines, columns in order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,x,value\n");
        for (&x, col) in &self.columns {
            for (y, &v) in col.iter().enumerate() {
                if v != 0 {
                    let _ = writeln!(out, "{},{},{v}", self.order[y], self.order[x]);
                }
            }
        }
        out
    }
}

struct System {
    /// Table index of each output position.
    record_at: Vec<usize>,
    above: Vec<Vec<usize>>,
    solve_order: Vec<usize>,
    triangular: bool,
}

fn build_system(setup: &Setup, table: &PhiTable) -> Result<System> {
    require_quotient(setup)?;
    let count = 1usize << setup.width();
    let records = table.records();
    if records.len() != count || (0..count).any(|k| records[k].eps.mask() != k as u64) {
        return Err(Error::Verification(
            "eps is not a bijection onto the quotient space".into(),
        ));
    }
    let mut above = vec![Vec::new(); count];
    for (y, r) in records.iter().enumerate() {
        if !r.subspace.contains_mask(r.eps.mask()) {
            return Err(Error::Verification(format!("eps({}) is not in L_B", r.family)));
        }
        for w in r.subspace.element_masks() {
            if w as usize != y {
                above[w as usize].push(y);
            }
        }
    }
    let weight: Vec<usize> = records
        .iter()
        .map(|r| r.family.intervals().iter().map(|i| i.size()).sum())
        .collect();
    let mut solve_order: Vec<usize> = (0..count).collect();
    solve_order.sort_by_key(|&k| (weight[k], k));
    let triangular = is_unit_triangular(&solve_order, &above);
    let mut record_at: Vec<usize> = (0..count).collect();
    record_at.sort_by_key(|&k| (records[k].subspace.dim(), k));
    Ok(System {
        record_at,
        above,
        solve_order,
        triangular,
    })
}

/// Every column.
pub fn c_matrix(setup: &Setup, table: &PhiTable) -> Result<CMatrix> {
    let all: Vec<BitVector> = table.records().iter().map(|r| r.eps).collect();
    c_matrix_columns(setup, table, &all)
}

/// The columns for the listed `x` only.
pub fn c_matrix_columns(setup: &Setup, table: &PhiTable, xs: &[BitVector]) -> Result<CMatrix> {
    let system = build_system(setup, table)?;
    let records = table.records();
    let count = records.len();
    let mut position = HashMap::with_capacity(count);
    for (p, &k) in system.record_at.iter().enumerate() {
        position.insert(records[k].eps.mask(), p);
    }

    let mut rhs_columns = Vec::with_capacity(xs.len());
    for x in xs {
        let k = table
            .index_of_eps(x)
            .ok_or_else(|| Error::Usage(format!("{x} is not in the quotient space")))?;
        let perp = records[k].subspace.perp(setup.form())?;
        let mut rhs = vec![0i64; count];
        for w in perp.element_masks() {
            rhs[w as usize] = 1;
        }
        rhs_columns.push((k, rhs));
    }

    let solved: Vec<(usize, Vec<i64>)> = if system.triangular {
        rhs_columns
            .iter()
            .map(|(k, rhs)| {
                solve_unit_triangular(&system.solve_order, &system.above, rhs, *k).map(|c| (*k, c))
            })
            .collect::<Result<_>>()?
    } else {
        if count > 256 {
            return Err(Error::Verification(
                "the evaluation matrix is not unit triangular in multiplicity order".into(),
            ));
        }
        let mut a = vec![vec![0i64; count]; count];
        for (v, ys) in system.above.iter().enumerate() {
            a[v][v] = 1;
            for &y in ys {
                a[v][y] = 1;
            }
        }
        let rhs: Vec<Vec<i64>> = rhs_columns.iter().map(|(_, r)| r.clone()).collect();
        let sol = solve_integer(&a, &rhs)?;
        rhs_columns.iter().map(|(k, _)| *k).zip(sol).collect()
    };

    let mut columns = BTreeMap::new();
    for (k, by_record) in solved {
        let col: Vec<i64> = system.record_at.iter().map(|&r| by_record[r]).collect();
        columns.insert(position[&records[k].eps.mask()], col);
    }
    Ok(CMatrix {
        width: setup.width(),
        order: system.record_at.iter().map(|&k| records[k].eps.mask()).collect(),
        dims: system.record_at.iter().map(|&k| records[k].subspace.dim()).collect(),
        position,
        columns,
    })
}

/// Substitutes every computed column back into
/// `sum_y c_{y,x} [v in L_y] = [v in perp(L_x)]` at every point `v`.
pub fn identity_violations(setup: &Setup, table: &PhiTable, cm: &CMatrix) -> Result<Vec<String>> {
    let records = table.records();
    let count = records.len();
    let mut out = Vec::new();
    for (x, col) in cm.columns() {
        let xk = table
            .index_of_eps(&BitVector::truncated(cm.width, cm.order[x]))
            .ok_or_else(|| Error::Verification("column outside the table".into()))?;
        let mut acc = vec![0i128; count];
        for (y, &c) in col.iter().enumerate().filter(|(_, &c)| c != 0) {
            let yk = cm.order[y] as usize;
            for w in records[yk].subspace.element_masks() {
                acc[w as usize] += c as i128;
            }
        }
        let perp = records[xk].subspace.perp(setup.form())?;
        for (v, &a) in acc.iter().enumerate() {
            let want = i128::from(perp.contains_mask(v as u64));
            if a != want {
                out.push(format!(
                    "column {}: value {a} at {} where {want} is required",
                    BitVector::truncated(cm.width, cm.order[x]),
                    BitVector::truncated(cm.width, v as u64)
                ));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TriangularityReport {
    /// `(y, x, c)` nonzero with `y != x` and `dim L_y <= dim L_x`.
    pub zero_pattern: Vec<(u64, u64, i64)>,
    /// `(x, c_{x,x})` where the diagonal is not `+-2^k`.
    pub diagonal: Vec<(u64, i64)>,
}

impl TriangularityReport {
    pub fn passed(&self) -> bool {
        self.zero_pattern.is_empty() && self.diagonal.is_empty()
    }
}

pub fn triangularity_check(cm: &CMatrix) -> TriangularityReport {
    let mut report = TriangularityReport::default();
    for (x, col) in cm.columns() {
        for (y, &c) in col.iter().enumerate() {
            if y == x {
                if !is_signed_power_of_two(c) {
                    report.diagonal.push((cm.order[x], c));
                }
            } else if c != 0 && cm.dims[x] >= cm.dims[y] {
                report.zero_pattern.push((cm.order[y], cm.order[x], c));
            }
        }
    }
    report
}

/// Entries outside `{0} u {+-2^k}`.
pub fn conjecture_scan(cm: &CMatrix) -> Vec<(u64, u64, i64)> {
    cm.columns()
        .flat_map(|(x, col)| {
            col.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0 && !is_signed_power_of_two(c))
                .map(move |(y, &c)| (cm.order[y], cm.order[x], c))
        })
        .collect()
}

pub fn column_sum(cm: &CMatrix, x_mask: u64) -> Option<i128> {
    cm.column(x_mask).map(|c| c.iter().map(|&v| v as i128).sum())
}

/// Pairs `(y, x)` whose coefficient differs from that of `(g y, g x)` for
/// some dihedral `g` with both columns computed.
pub fn orbit_constancy_violations(setup: &Setup, cm: &CMatrix) -> Result<Vec<String>> {
    let group = setup.dihedral_group()?;
    let width = setup.width();
    let mut out = Vec::new();
    for g in &group {
        let image: Vec<u64> = (0..1u64 << width)
            .map(|m| setup.act_on_vector(g, &BitVector::truncated(width, m)).map(|v| v.mask()))
            .collect::<Result<_>>()?;
        for (x, col) in cm.columns() {
            let gx = image[cm.order[x] as usize];
            let Some(gcol) = cm.column(gx) else { continue };
            for (y, &c) in col.iter().enumerate() {
                let gy = cm.position[&image[cm.order[y] as usize]];
                if gcol[gy] != c {
                    out.push(format!(
                        "c at ({}, {}) is {c} but {} at the image pair",
                        BitVector::truncated(width, cm.order[y]),
                        BitVector::truncated(width, cm.order[x]),
                        gcol[gy]
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Columns `x` with `L_x` Lagrangian must be unit vectors at `x`.
pub fn lagrangian_violations(cm: &CMatrix) -> Vec<String> {
    let half = cm.width / 2;
    cm.columns()
        .filter(|(x, _)| cm.dims[*x] == half)
        .filter(|(x, col)| col.iter().enumerate().any(|(y, &c)| c != i64::from(y == *x)))
        .map(|(x, _)| format!("column {} is not a unit vector", BitVector::truncated(cm.width, cm.order[x])))
        .collect()
}

/// Representatives and values of `y -> c_{y,0}` printed for `N = 7`, with
/// `i_1 i_2 ... i_m` standing for `beta_{i_1} + ... + beta_{i_m}`.
pub const PRINTED_N7: [(&str, i64); 9] = [
    ("1245", 1),
    ("12345", 0),
    ("1235", 1),
    ("135", -1),
    ("123", -1),
    ("14", 0),
    ("13", 1),
    ("1", -2),
    ("", 8),
];

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub label: String,
    pub vector: u64,
    pub orbit_size: usize,
    pub computed: i64,
    pub printed: i64,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrintedComparison {
    pub rows: Vec<ComparisonRow>,
    /// Is `y -> c_{y,0}` constant on every orbit?
    pub orbit_constant: bool,
    /// Do the nine representatives hit every orbit exactly once?
    pub representatives_complete: bool,
    /// `sum_y c_{y,0}` over the computed column; the identity at `v = 0`
    /// forces this to be 1.
    pub column_sum: i128,
    /// The same sum with the printed values weighted by orbit size.
    pub printed_weighted_sum: i128,
}

impl PrintedComparison {
    pub fn mismatches(&self) -> impl Iterator<Item = &ComparisonRow> + '_ {
        self.rows.iter().filter(|r| !r.matches)
    }
}

pub fn paper_table_compare(setup: &Setup, cm: &CMatrix, orbits: &OrbitTable) -> Result<PrintedComparison> {
    require_quotient(setup)?;
    if setup.n() != 7 {
        return Err(Error::Usage("the printed table is for N = 7".into()));
    }
    let zero = cm
        .column(0)
        .ok_or_else(|| Error::Usage("the column of the zero vector was not computed".into()))?;
    let value = |mask: u64| zero[cm.position[&mask]];

    let mut rows = Vec::new();
    let mut seen = Vec::new();
    for (label, printed) in PRINTED_N7 {
        let mask = label
            .chars()
            .map(|c| c.to_digit(10).expect("digit") as usize - 1)
            .fold(0u64, |m, i| m | 1 << i);
        let vector = setup.vector_of(mask).mask();
        let orbit = orbits
            .orbit_index(vector)
            .ok_or_else(|| Error::Verification(format!("no orbit for {label}")))?;
        seen.push(orbit);
        let computed = value(vector);
        rows.push(ComparisonRow {
            label: format!("{{{}}}", if label.is_empty() { "\u{2205}" } else { label }),
            vector,
            orbit_size: orbits.orbits[orbit].size,
            computed,
            printed,
            matches: computed == printed,
        });
    }
    let orbit_constant = orbits
        .orbits
        .iter()
        .all(|o| o.members.iter().all(|&m| value(m) == value(o.representative)));
    seen.sort_unstable();
    seen.dedup();
    let representatives_complete = seen.len() == rows.len() && seen.len() == orbits.orbits.len();
    let column_sum = zero.iter().map(|&v| v as i128).sum();
    let printed_weighted_sum = rows
        .iter()
        .map(|r| r.printed as i128 * r.orbit_size as i128)
        .sum();
    Ok(PrintedComparison {
        rows,
        orbit_constant,
        representatives_complete,
        column_sum,
        printed_weighted_sum,
    })
}
