use crate::error::{Error, Result};
use crate::mqfield::{FieldElement, FieldTower};

/// A dense square matrix over a [`FieldTower`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    tower: FieldTower,
    rows: Vec<Vec<FieldElement>>,
}

impl Matrix {
    /// Builds a matrix, coercing every entry into `tower`.
    pub fn new(tower: &FieldTower, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = rows.len();
        let mut out = Vec::with_capacity(n);
        for row in rows {
            if row.len() != n {
                return Err(Error::RankMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            out.push(row.iter().map(|x| x.coerce(tower)).collect::<Result<Vec<_>>>()?);
        }
        Ok(Self {
            tower: tower.clone(),
            rows: out,
        })
    }

    pub fn identity(tower: &FieldTower, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| FieldElement::from_int(tower, (i == j) as i64))
                    .collect()
            })
            .collect();
        Self {
            tower: tower.clone(),
            rows,
        }
    }

    pub fn diagonal(tower: &FieldTower, diag: &[FieldElement]) -> Self {
        let mut m = Self::identity(tower, diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.rows[i][i] = d.clone();
        }
        m
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.rows[i][j] = x;
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (i + 1..n).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    pub fn transpose(&self) -> Self {
        let n = self.size();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect())
            .collect();
        Self {
            tower: self.tower.clone(),
            rows,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Self {
        let n = self.size();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(FieldElement::zero(&self.tower), |acc, k| {
                            &acc + &(&self.rows[i][k] * &other.rows[k][j])
                        })
                    })
                    .collect()
            })
            .collect();
        Self {
            tower: self.tower.clone(),
            rows,
        }
    }

    /// Principal submatrix on the given indices.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let rows = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.rows[i][j].clone()).collect())
            .collect();
        Self {
            tower: self.tower.clone(),
            rows,
        }
    }

    /// Determinant by plain Gaussian elimination over the field.
    pub fn determinant(&self) -> FieldElement {
        let n = self.size();
        let mut a = self.rows.clone();
        let mut det = FieldElement::one(&self.tower);
        for k in 0..n {
            let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return FieldElement::zero(&self.tower);
            };
            if piv != k {
                a.swap(piv, k);
                det = -det;
            }
            det = &det * &a[k][k];
            let inv = a[k][k].inverse().expect("nonzero pivot");
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let factor = &a[i][k] * &inv;
                for j in k..n {
                    let t = &factor * &a[k][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        det
    }

    /// Rank of the row space.
    pub fn rank(&self) -> usize {
        row_rank(&self.rows)
    }
}

/// Row rank of a list of equal-length vectors.
pub fn row_rank(rows: &[Vec<FieldElement>]) -> usize {
    let mut a: Vec<Vec<FieldElement>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(piv, rank);
        let inv = a[rank][col].inverse().expect("nonzero pivot");
        for i in rank + 1..a.len() {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = &a[i][col] * &inv;
            for j in col..ncols {
                let t = &factor * &a[rank][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
        rank += 1;
    }
    rank
}

/// Symmetric Gaussian elimination: returns `D` (zeros allowed) and `T` with `Tᵀ G T = diag(D)`.
pub fn congruence_diagonal(g: &Matrix) -> Result<(Vec<FieldElement>, Matrix)> {
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = g.size();
    let tower = g.tower().clone();
    let mut a = g.rows.clone();
    // columns of t are the new basis vectors
    let mut t = Matrix::identity(&tower, n).rows;
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                swap_basis(&mut a, &mut t, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // e_k ← e_k + e_j gives B(e_k,e_k) = 2 B(e_k,e_j) ≠ 0
                add_basis(&mut a, &mut t, k, j, &FieldElement::one(&tower));
            } else {
                diag.push(FieldElement::zero(&tower));
                continue;
            }
        }
        let inv = a[k][k].inverse().expect("nonzero pivot");
        for j in k + 1..n {
            if a[k][j].is_zero() {
                continue;
            }
            let factor = -(&a[k][j] * &inv);
            add_basis(&mut a, &mut t, j, k, &factor);
        }
        diag.push(a[k][k].clone());
    }
    Ok((
        diag,
        Matrix {
            tower,
            rows: t,
        },
    ))
}

fn swap_basis(a: &mut [Vec<FieldElement>], t: &mut [Vec<FieldElement>], i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    for row in t.iter_mut() {
        row.swap(i, j);
    }
}

/// Basis change `e_i ← e_i + c·e_j`.
fn add_basis(
    a: &mut [Vec<FieldElement>],
    t: &mut [Vec<FieldElement>],
    i: usize,
    j: usize,
    c: &FieldElement,
) {
    let n = a.len();
    for r in 0..n {
        let add = c * &a[r][j];
        a[r][i] = &a[r][i] + &add;
    }
    for col in 0..n {
        let add = c * &a[j][col];
        a[i][col] = &a[i][col] + &add;
    }
    for row in t.iter_mut() {
        let add = c * &row[j];
        row[i] = &row[i] + &add;
    }
}
