//! Reachability closure of one-step relations, antisymmetry checks, Hasse
//! covers, and DOT/CSV export.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::families::PhiTable;

/// Square boolean matrix stored as packed bit rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self {
            n,
            words,
            data: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn or_row_into(&mut self, src: usize, dst: usize) {
        let w = self.words;
        for k in 0..w {
            let v = self.data[src * w + k];
            self.data[dst * w + k] |= v;
        }
    }

    /// Column indices set in row `i`.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i)
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| crate::f2::bits(bits).map(move |b| w * 64 + b))
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// One-step moves `i -> j` meaning "node `i` is below node `j` in one step".
#[derive(Clone, Debug)]
pub struct StepRelation {
    step: BitMatrix,
}

impl StepRelation {
    pub fn new(step: BitMatrix) -> Self {
        Self { step }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> bool) -> Self {
        Self::new(BitMatrix::from_fn(n, f))
    }

    pub fn len(&self) -> usize {
        self.step.len()
    }

    pub fn is_empty(&self) -> bool {
        self.step.is_empty()
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.step
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.step.get(i, j)
    }

    /// Nodes that do not step to themselves.
    pub fn irreflexive_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.step.get(i, i)).collect()
    }

    pub fn is_reflexive(&self) -> bool {
        self.irreflexive_nodes().is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct PartialOrder {
    leq: BitMatrix,
    covers: Vec<(usize, usize)>,
}

/// Reflexive-transitive closure (Warshall over bit rows), followed by the
/// antisymmetry check and cover extraction.
pub fn close(step: &StepRelation) -> Result<PartialOrder> {
    let n = step.len();
    let mut leq = step.step.clone();
    for i in 0..n {
        leq.set(i, i, true);
    }
    for k in 0..n {
        for i in 0..n {
            if i != k && leq.get(i, k) {
                leq.or_row_into(k, i);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if leq.get(i, j) && leq.get(j, i) {
                return Err(Error::Verification(format!(
                    "relation is not antisymmetric: nodes {i} and {j} lie below each other"
                )));
            }
        }
    }
    let covers = covers_of(&leq);
    Ok(PartialOrder { leq, covers })
}

fn covers_of(leq: &BitMatrix) -> Vec<(usize, usize)> {
    let n = leq.len();
    let mut strict = leq.clone();
    for i in 0..n {
        strict.set(i, i, false);
    }
    let mut two_step = BitMatrix::new(n);
    for i in 0..n {
        let mids: Vec<usize> = strict.row_ones(i).collect();
        for k in mids {
            let w = strict.words;
            for x in 0..w {
                two_step.data[i * w + x] |= strict.data[k * w + x];
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in strict.row_ones(i) {
            if !two_step.get(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

impl PartialOrder {
    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq.get(i, j)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.leq
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Pairs `(i, j)` with `i <= j`, including the diagonal.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |i| self.leq.row_ones(i).map(move |j| (i, j)))
    }

    pub fn below(&self, j: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.leq(i, j)).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| (0..self.len()).all(|i| i == j || !self.leq(i, j)))
            .collect()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|i| self.leq(i, i))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs().all(|(i, j)| i == j || !self.leq(j, i))
    }

    pub fn is_transitive(&self) -> bool {
        self.pairs()
            .all(|(i, k)| self.leq.row_ones(k).all(|j| self.leq(i, j)))
    }

    pub fn to_dot(&self, labels: &[String]) -> String {
        let mut out = String::from("digraph order {\n  rankdir=BT;\n");
        for (i, label) in labels.iter().enumerate().take(self.len()) {
            let escaped = label.replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(out, "  n{i} [label=\"{escaped}\"];");
        }
        for &(i, j) in &self.covers {
            let _ = writeln!(out, "  n{i} -> n{j};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_csv(&self, labels: &[String]) -> String {
        let mut out = String::from("from,to\n");
        for &(i, j) in &self.covers {
            let _ = writeln!(out, "\"{}\",\"{}\"", labels[i], labels[j]);
        }
        out
    }
}

/// `B' -> B` whenever `eps(B')` lies in `L_B`.
pub fn phi_step(table: &PhiTable) -> StepRelation {
    let records = table.records();
    StepRelation::from_fn(records.len(), |i, j| {
        records[j].subspace.contains_mask(records[i].eps.mask())
    })
}

/// Pairs `B' <= B` for which some `g_s(B')` exceeds `g_s(B)`.
pub fn monotonicity_violations(table: &PhiTable, po: &PartialOrder, size: usize) -> Vec<(usize, usize)> {
    let g: Vec<Vec<usize>> = table
        .records()
        .iter()
        .map(|r| r.family.multiplicities(size))
        .collect();
    po.pairs()
        .filter(|&(i, j)| g[i].iter().zip(&g[j]).any(|(a, b)| a > b))
        .collect()
}
