use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;

use crate::arith::{squarefree_mul, squarefree_part};
use crate::error::{Error, Result};

/// A real multiquadratic field `Q(√d₁,…,√d_r)`.
///
/// Elements are expressed in the basis `α_I = ∏_{j∈I} √d_j`, `I ⊆ {0,…,r-1}`, stored as
/// bitmasks. The radicands are squarefree, greater than one and independent modulo squares.
#[derive(Clone)]
pub struct FieldTower(Arc<TowerData>);

struct TowerData {
    radicands: Vec<u64>,
    /// `∏_{j∈I} d_j` for every mask `I`.
    products: Vec<BigInt>,
    /// squarefree part `m_I` of each product.
    sqfree: Vec<u64>,
    /// `s_I` with `products[I] = m_I · s_I²`.
    cofactor: Vec<BigInt>,
    index_of: HashMap<u64, usize>,
}

impl FieldTower {
    /// Builds the canonical tower for a list of raw radicands.
    pub fn new(raw: &[i64]) -> Result<Self> {
        let mut gens = Vec::with_capacity(raw.len());
        for &d in raw {
            if d <= 0 {
                return Err(Error::NotTotallyReal(d));
            }
            gens.push(squarefree_part(d as u64));
        }
        Ok(Self::from_group_generators(gens))
    }

    pub fn rational() -> Self {
        Self::from_basis(Vec::new())
    }

    /// The canonical tower whose square-class group is generated by `gens`
    /// (squarefree positive integers).
    pub fn from_group_generators(gens: impl IntoIterator<Item = u64>) -> Self {
        let group = generate_group(gens);
        Self::from_basis(canonical_basis(&group))
    }

    /// Tower on an explicit independent basis, kept in the given order.
    pub(crate) fn from_basis(radicands: Vec<u64>) -> Self {
        let r = radicands.len();
        let n = 1usize << r;
        let mut products = Vec::with_capacity(n);
        let mut sqfree = Vec::with_capacity(n);
        let mut cofactor = Vec::with_capacity(n);
        let mut index_of = HashMap::with_capacity(n);
        for mask in 0..n {
            let mut prod = BigInt::from(1u32);
            let mut m = 1u64;
            for (j, &d) in radicands.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    prod *= d;
                    m = squarefree_mul(m, d);
                }
            }
            let s2: BigInt = &prod / m;
            let s = s2.sqrt();
            debug_assert_eq!(&s * &s, s2);
            let prev = index_of.insert(m, mask);
            assert!(prev.is_none(), "radicands {radicands:?} are not independent");
            products.push(prod);
            sqfree.push(m);
            cofactor.push(s);
        }
        FieldTower(Arc::new(TowerData {
            radicands,
            products,
            sqfree,
            cofactor,
            index_of,
        }))
    }

    pub fn radicands(&self) -> &[u64] {
        &self.0.radicands
    }

    /// Number of radicands `r`.
    pub fn rank(&self) -> usize {
        self.0.radicands.len()
    }

    pub fn degree(&self) -> usize {
        1 << self.rank()
    }

    pub fn is_rational(&self) -> bool {
        self.rank() == 0
    }

    /// `∏_{j∈I} d_j`.
    pub fn product(&self, mask: usize) -> &BigInt {
        &self.0.products[mask]
    }

    pub fn squarefree_of(&self, mask: usize) -> u64 {
        self.0.sqfree[mask]
    }

    pub fn cofactor(&self, mask: usize) -> &BigInt {
        &self.0.cofactor[mask]
    }

    /// Mask `I` with `√m = α_I / s_I`, when `√m` lies in the tower.
    pub fn locate_sqrt(&self, m: u64) -> Option<usize> {
        self.0.index_of.get(&m).copied()
    }

    /// All squarefree `m` with `√m` in the field, indexed by mask.
    pub fn group(&self) -> &[u64] {
        &self.0.sqfree
    }

    pub fn contains_tower(&self, other: &FieldTower) -> bool {
        other
            .radicands()
            .iter()
            .all(|d| self.0.index_of.contains_key(d))
    }

    /// The compositum of two towers.
    pub fn join(&self, other: &FieldTower) -> FieldTower {
        if self.contains_tower(other) {
            return self.clone();
        }
        if other.contains_tower(self) {
            return other.clone();
        }
        FieldTower::from_group_generators(
            self.radicands().iter().chain(other.radicands()).copied(),
        )
    }

    /// Lattice meet of two towers.
    pub fn intersect(&self, other: &FieldTower) -> FieldTower {
        let common: Vec<u64> = self
            .group()
            .iter()
            .copied()
            .filter(|m| other.0.index_of.contains_key(m))
            .collect();
        FieldTower::from_group_generators(common)
    }

    /// The `2^r − 1` subfields `F` with `[K:F] = 2`, in a fixed order
    /// (by the character `χ` defining `F = ker χ`).
    pub fn subfields_index2(&self) -> Vec<FieldTower> {
        let r = self.rank();
        (1usize..(1 << r))
            .map(|chi| {
                let kernel = (0..self.degree())
                    .filter(|mask| (mask & chi).count_ones() % 2 == 0)
                    .map(|mask| self.squarefree_of(mask));
                FieldTower::from_group_generators(kernel)
            })
            .collect()
    }

    /// The smallest squarefree `m` with `√m ∈ self` but `√m ∉ sub`.
    pub fn smallest_generator_over(&self, sub: &FieldTower) -> Option<u64> {
        self.group()
            .iter()
            .copied()
            .filter(|m| sub.locate_sqrt(*m).is_none())
            .min()
    }

    pub fn embeddings(&self) -> Vec<super::Embedding> {
        let r = self.rank();
        (0..self.degree())
            .map(|flip| super::Embedding {
                signs: (0..r)
                    .map(|j| if flip >> j & 1 == 1 { -1 } else { 1 })
                    .collect(),
            })
            .collect()
    }
}

/// All elements of the subgroup of `Q^×/Q^×²` generated by `gens`, as squarefree integers.
pub(crate) fn generate_group(gens: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut group = vec![1u64];
    for g in gens {
        let g = squarefree_part(g);
        if group.contains(&g) {
            continue;
        }
        let ext: Vec<u64> = group.iter().map(|&h| squarefree_mul(h, g)).collect();
        group.extend(ext);
    }
    group
}

/// Greedy minimal basis: scan group elements ascending, keep each one not yet spanned.
pub(crate) fn canonical_basis(group: &[u64]) -> Vec<u64> {
    let mut sorted: Vec<u64> = group.iter().copied().filter(|&m| m > 1).collect();
    sorted.sort_unstable();
    let mut span = vec![1u64];
    let mut basis = Vec::new();
    for m in sorted {
        if span.contains(&m) {
            continue;
        }
        let ext: Vec<u64> = span.iter().map(|&h| squarefree_mul(h, m)).collect();
        span.extend(ext);
        basis.push(m);
    }
    basis
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.radicands == other.0.radicands
    }
}

impl Eq for FieldTower {}

impl Hash for FieldTower {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.radicands.hash(state);
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "Q");
        }
        write!(f, "Q(")?;
        for (i, d) in self.radicands().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "√{d}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
