//! Coxeter diagrams, their Gram matrices, trace fields and ambient forms.

mod parse;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::mqfield::{cos_pi_over, minimal_field_of, Embedding, FieldElement, FieldTower};
use crate::qspace::{diagonalize, row_rank, Matrix, QuadraticForm};

pub use parse::parse_diagram_named;

/// Edge label of a Coxeter diagram. Label 2 is the absence of an edge.
#[derive(Clone, PartialEq, Eq)]
pub enum Label {
    /// Dihedral angle `π/m`.
    Finite(u64),
    /// Parallel hyperplanes.
    Infinite,
    /// Ultraparallel hyperplanes at distance `arccosh(w)`.
    Weight(FieldElement),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => write!(f, "inf"),
            Label::Weight(w) => write!(f, "w {w}"),
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A connected Coxeter diagram on vertices `0..vertices` (printed 1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterDiagram {
    pub name: String,
    pub n: usize,
    pub vertices: usize,
    /// Keys `(i, j)` with `i < j`.
    pub edges: BTreeMap<(usize, usize), Label>,
}

/// Parses a diagram file; see [`parse_diagram_named`] for the format.
pub fn parse_diagram(text: &str) -> Result<CoxeterDiagram> {
    parse_diagram_named(text, "diagram")
}

impl CoxeterDiagram {
    pub fn label(&self, i: usize, j: usize) -> Option<&Label> {
        self.edges.get(&(i.min(j), i.max(j)))
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        (0..self.vertices)
            .filter(|&u| u != v && self.label(u, v).is_some())
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for u in self.neighbours(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// The same diagram with vertex `v` renamed `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> CoxeterDiagram {
        assert_eq!(perm.len(), self.vertices, "permutation length");
        let edges = self
            .edges
            .iter()
            .map(|(&(i, j), l)| {
                let (a, b) = (perm[i], perm[j]);
                ((a.min(b), a.max(b)), l.clone())
            })
            .collect();
        CoxeterDiagram {
            name: self.name.clone(),
            n: self.n,
            vertices: self.vertices,
            edges,
        }
    }

    /// Serializes back to the file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("dim {}\nvertices {}\n", self.n, self.vertices);
        for (&(i, j), l) in &self.edges {
            s.push_str(&format!("edge {} {} {l}\n", i + 1, j + 1));
        }
        s
    }
}

/// Exact Gram matrix `G` with unit diagonal over the compositum of its entries.
#[derive(Clone, Debug)]
pub struct GramData {
    pub n: usize,
    pub tower: FieldTower,
    pub matrix: Matrix,
}

/// Off-diagonal Gram entry for a label.
pub fn gram_entry(label: Option<&Label>) -> FieldElement {
    match label {
        None => FieldElement::zero(&FieldTower::rational()),
        Some(Label::Finite(m)) => -cos_pi_over(*m).expect("parser admits supported labels only"),
        Some(Label::Infinite) => FieldElement::from_int(&FieldTower::rational(), -1),
        Some(Label::Weight(w)) => -w,
    }
}

/// Builds `G` and checks its signature is `(n, 1)` with corank `r − n − 1`.
pub fn gram_matrix(d: &CoxeterDiagram) -> Result<GramData> {
    let r = d.vertices;
    let tower = d
        .edges
        .values()
        .map(|l| gram_entry(Some(l)).tower().clone())
        .fold(FieldTower::rational(), |acc, t| acc.join(&t));
    let rows = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let x = if i == j {
                        FieldElement::one(&tower)
                    } else {
                        gram_entry(d.label(i, j))
                    };
                    x.coerce(&tower).expect("entries lie in their compositum")
                })
                .collect()
        })
        .collect();
    let matrix = Matrix::new(&tower, rows)?;
    let (pos, neg, zero) = signature_at_identity(&matrix)?;
    if (pos, neg) != (d.n, 1) {
        return Err(Error::NotHyperbolic {
            n: d.n,
            pos,
            neg,
            zero,
        });
    }
    Ok(GramData {
        n: d.n,
        tower,
        matrix,
    })
}

fn signature_at_identity(m: &Matrix) -> Result<(usize, usize, usize)> {
    let (diag, _) = crate::qspace::congruence_diagonal(m)?;
    let id = Embedding::identity(m.tower().rank());
    let mut counts = (0, 0, 0);
    for c in &diag {
        match c.sign_at(&id) {
            1 => counts.0 += 1,
            -1 => counts.1 += 1,
            _ => counts.2 += 1,
        }
    }
    Ok(counts)
}

impl GramData {
    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        self.matrix.get(i, j)
    }

    fn neighbours(&self, v: usize) -> Vec<usize> {
        (0..self.size())
            .filter(|&u| u != v && !self.entry(u, v).is_zero())
            .collect()
    }

    /// Every simple cycle of length ≥ 3 in the graph of nonzero entries, once per
    /// cycle, starting at its smallest vertex.
    pub fn simple_cycles(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let adj: Vec<Vec<usize>> = (0..self.size()).map(|v| self.neighbours(v)).collect();
        for start in 0..self.size() {
            let mut path = vec![start];
            let mut on_path = vec![false; self.size()];
            on_path[start] = true;
            cycles_from(start, &adj, &mut path, &mut on_path, &mut out);
        }
        out
    }

    /// `a_{i₁i₂} a_{i₂i₃} ⋯ a_{i_k i₁}`.
    pub fn cyclic_product(&self, cycle: &[usize]) -> FieldElement {
        let k = cycle.len();
        (0..k).fold(FieldElement::one(&self.tower), |acc, t| {
            &acc * self.entry(cycle[t], cycle[(t + 1) % k])
        })
    }

    /// The squares `a_ij²` over the edges, followed by the cyclic products of simple cycles.
    pub fn trace_generators(&self) -> Vec<FieldElement> {
        let mut gens = Vec::new();
        for i in 0..self.size() {
            for j in i + 1..self.size() {
                if !self.entry(i, j).is_zero() {
                    gens.push(self.entry(i, j).square());
                }
            }
        }
        gens.extend(self.simple_cycles().iter().map(|c| self.cyclic_product(c)));
        gens
    }
}

fn cycles_from(
    start: usize,
    adj: &[Vec<usize>],
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().expect("path starts at `start`");
    for &u in &adj[last] {
        if u == start && path.len() >= 3 && path[1] < last {
            out.push(path.clone());
        } else if u > start && !on_path[u] {
            path.push(u);
            on_path[u] = true;
            cycles_from(start, adj, path, on_path, out);
            on_path[u] = false;
            path.pop();
        }
    }
}

/// The field generated by the squares of the entries and all cyclic products.
pub fn trace_field(g: &GramData) -> FieldTower {
    minimal_field_of(&g.trace_generators())
}

/// The ambient form together with the choices made to extract it.
#[derive(Clone, Debug)]
pub struct AmbientForm {
    pub form: QuadraticForm,
    pub base: usize,
    /// Indices `m_j` of the full-rank principal minor.
    pub minor: Vec<usize>,
    /// Path products `c_j` from the base vertex to `m_j`.
    pub path_products: Vec<FieldElement>,
}

/// The ambient form with base vertex 0 and the minor from [`low_height_chain`].
pub fn ambient_form(g: &GramData, trace: &FieldTower) -> Result<AmbientForm> {
    let order = low_height_chain(g).unwrap_or_else(|| (0..g.size()).collect());
    ambient_form_with(g, trace, 0, &order)
}

/// Diagrams up to this many vertices get the exhaustive minor search.
const CHAIN_SEARCH_LIMIT: usize = 12;

/// Height of a nonzero element: bit size of its norm.
fn height(x: &FieldElement) -> u64 {
    let q = x.norm();
    q.numer().bits() + q.denom().bits()
}

/// An ordering `m₁, …, m_{n+1}` whose nested principal minors `G[m₁..m_k]` are all
/// nonzero, minimizing the largest norm height among them (ties: total height, then
/// lexicographic order).
///
/// Diagonalizing along such a chain produces entries `D_k / D_{k−1}` with small norms,
/// which keeps the later factorizations cheap. `None` for diagrams too large to search.
pub fn low_height_chain(g: &GramData) -> Option<Vec<usize>> {
    let r = g.size();
    let size = g.n + 1;
    if r > CHAIN_SEARCH_LIMIT {
        return None;
    }
    // heights of nonzero principal minors with at most n + 1 indices
    let mut minor_height: Vec<Option<u64>> = vec![None; 1 << r];
    for mask in 1usize..(1 << r) {
        if mask.count_ones() as usize > size {
            continue;
        }
        let idx: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
        let det = g.matrix.principal(&idx).determinant();
        if !det.is_zero() {
            minor_height[mask] = Some(height(&det));
        }
    }
    // best[mask] = (max height, total height, chain) over chains ending at mask
    let mut best: Vec<Option<(u64, u64, Vec<usize>)>> = vec![None; 1 << r];
    best[0] = Some((0, 0, Vec::new()));
    let mut masks: Vec<usize> = (0usize..(1 << r)).filter(|m| m.count_ones() as usize <= size).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let Some((mx, total, chain)) = best[mask].clone() else { continue };
        if chain.len() == size {
            continue;
        }
        for v in (0..r).filter(|v| mask >> v & 1 == 0) {
            let next = mask | 1 << v;
            let Some(h) = minor_height[next] else { continue };
            let mut c = chain.clone();
            c.push(v);
            let cand = (mx.max(h), total + h, c);
            if best[next].as_ref().map_or(true, |b| cand < *b) {
                best[next] = Some(cand);
            }
        }
    }
    best.into_iter()
        .flatten()
        .filter(|(_, _, c)| c.len() == size)
        .min()
        .map(|(_, _, c)| c)
}

/// The ambient form for a chosen base vertex; the minor is chosen greedily along `order`.
///
/// With `v_j = c_j e_{m_j}`, the Gram matrix `A_{jk} = c_j c_k a_{m_j m_k}` has entries in
/// the trace field, and its diagonalization is returned.
pub fn ambient_form_with(
    g: &GramData,
    trace: &FieldTower,
    base: usize,
    order: &[usize],
) -> Result<AmbientForm> {
    let size = g.n + 1;
    let mut minor: Vec<usize> = Vec::with_capacity(size);
    let mut rows: Vec<Vec<FieldElement>> = Vec::with_capacity(size);
    for &v in order {
        rows.push(g.matrix.rows()[v].clone());
        if row_rank(&rows) == rows.len() {
            minor.push(v);
            if minor.len() == size {
                break;
            }
        } else {
            rows.pop();
        }
    }
    if minor.len() < size {
        return Err(Error::NoFullRankMinor);
    }
    let paths = path_products(g, base);
    let cs: Vec<FieldElement> = minor
        .iter()
        .map(|&m| paths[m].clone().ok_or(Error::Disconnected))
        .collect::<Result<_>>()?;
    let mut a = Vec::with_capacity(size);
    for j in 0..size {
        let mut row = Vec::with_capacity(size);
        for k in 0..size {
            let x = &(&cs[j] * &cs[k]) * g.entry(minor[j], minor[k]);
            row.push(x.coerce(trace)?);
        }
        a.push(row);
    }
    let a = Matrix::new(trace, a)?;
    let (form, _) = diagonalize(&a)?;
    let id = Embedding::identity(trace.rank());
    if form.signature(&id) != (g.n, 1) {
        let (pos, neg) = form.signature(&id);
        return Err(Error::NotHyperbolic {
            n: g.n,
            pos,
            neg,
            zero: 0,
        });
    }
    Ok(AmbientForm {
        form,
        base,
        minor,
        path_products: cs,
    })
}

/// Products of entries along BFS paths from `base`; `None` for unreachable vertices.
pub fn path_products(g: &GramData, base: usize) -> Vec<Option<FieldElement>> {
    let mut out: Vec<Option<FieldElement>> = vec![None; g.size()];
    out[base] = Some(FieldElement::one(&g.tower));
    let mut queue = VecDeque::from([base]);
    while let Some(v) = queue.pop_front() {
        let cv = out[v].clone().expect("queued vertices are reached");
        for u in g.neighbours(v) {
            if out[u].is_none() {
                out[u] = Some(&cv * g.entry(v, u));
                queue.push_back(u);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
