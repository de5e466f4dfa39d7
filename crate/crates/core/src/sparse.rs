//! Symmetric sparse matrices (CSR, both triangles stored) and an envelope
//! Cholesky factorization under reverse Cuthill–McKee ordering.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::collections::VecDeque;

/// Symmetric sparse matrix. Only the upper triangle is accumulated and then
/// mirrored, so `a[i][j] == a[j][i]` bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetric {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseSymmetric {
    /// Builds from `(i, j, value)` contributions; `(i, j)` and `(j, i)` refer
    /// to the same coefficient and duplicates are summed in input order.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut upper: Vec<(usize, usize, f64)> =
            triplets.into_iter().map(|(i, j, v)| if i <= j { (i, j, v) } else { (j, i, v) }).collect();
        // stable sort keeps the summation order deterministic
        upper.sort_by_key(|&(i, j, _)| (i, j));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(upper.len());
        for (i, j, v) in upper {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        let mut counts = vec![0usize; n];
        for &(i, j, _) in &merged {
            counts[i] += 1;
            if i != j {
                counts[j] += 1;
            }
        }
        let mut row_ptr = vec![0usize; n + 1];
        for i in 0..n {
            row_ptr[i + 1] = row_ptr[i] + counts[i];
        }
        let nnz = row_ptr[n];
        let mut cols = vec![0usize; nnz];
        let mut vals = vec![0.0; nnz];
        let mut fill = row_ptr.clone();
        // `merged` is sorted by (i, j), so both halves come out column-sorted
        let mut lower: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in &merged {
            if i != j {
                lower[j].push((i, v));
            }
        }
        let mut upper_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in &merged {
            upper_rows[i].push((j, v));
        }
        for r in 0..n {
            for &(c, v) in lower[r].iter().chain(upper_rows[r].iter()) {
                cols[fill[r]] = c;
                vals[fill[r]] = v;
                fill[r] += 1;
            }
        }
        SparseSymmetric { n, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[span.clone()].binary_search(&j) {
            Ok(k) => self.vals[span.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v).sum()).collect()
    }

    pub fn total_sum(&self) -> f64 {
        self.vals.iter().sum()
    }

    /// `self + factor · other` over the union of both patterns.
    pub fn add_scaled(&self, other: &SparseSymmetric, factor: f64) -> SparseSymmetric {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.n {
            triplets.extend(self.row(i).filter(|&(j, _)| j >= i).map(|(j, v)| (i, j, v)));
            triplets.extend(other.row(i).filter(|&(j, _)| j >= i).map(|(j, v)| (i, j, factor * v)));
        }
        SparseSymmetric::from_triplets(self.n, triplets)
    }

    pub fn scaled(&self, factor: f64) -> SparseSymmetric {
        SparseSymmetric { vals: self.vals.iter().map(|v| v * factor).collect(), ..self.clone() }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d[(i, j)] = v;
            }
        }
        d
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }
}

/// Reverse Cuthill–McKee permutation: `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &SparseSymmetric) -> Vec<usize> {
    let n = a.dim();
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).filter(|&(j, _)| j != i).count()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| degree[i]).expect("unvisited node exists");
        let start = pseudo_peripheral(a, seed, &degree);
        let mut queue = VecDeque::new();
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = a.row(v).map(|(j, _)| j).filter(|&j| !visited[j]).collect();
            nbrs.sort_by_key(|&j| (degree[j], j));
            for j in nbrs {
                visited[j] = true;
                queue.push_back(j);
            }
        }
    }
    order.reverse();
    order
}

fn bfs_levels(a: &SparseSymmetric, start: usize) -> Vec<Vec<usize>> {
    let n = a.dim();
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut levels = vec![vec![start]];
    loop {
        let mut next = Vec::new();
        for &v in levels.last().expect("non-empty") {
            for (j, _) in a.row(v) {
                if !seen[j] {
                    seen[j] = true;
                    next.push(j);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    levels
}

fn pseudo_peripheral(a: &SparseSymmetric, seed: usize, degree: &[usize]) -> usize {
    let mut current = seed;
    let mut depth = bfs_levels(a, current).len();
    for _ in 0..8 {
        let levels = bfs_levels(a, current);
        let last = levels.last().expect("non-empty");
        let candidate = *last.iter().min_by_key(|&&v| (degree[v], v)).expect("non-empty level");
        let cand_depth = bfs_levels(a, candidate).len();
        if cand_depth <= depth {
            break;
        }
        depth = cand_depth;
        current = candidate;
    }
    current
}

/// Envelope (skyline) Cholesky factor `P A Pᵀ = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    offsets: Vec<usize>,
    data: Vec<f64>,
}

impl EnvelopeCholesky {
    pub fn factor(a: &SparseSymmetric) -> Result<Self> {
        let n = a.dim();
        let perm = reverse_cuthill_mckee(a);
        let mut inverse = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let first: Vec<usize> = (0..n)
            .map(|r| a.row(perm[r]).map(|(j, _)| inverse[j]).filter(|&c| c <= r).min().unwrap_or(r))
            .collect();
        let mut offsets = vec![0usize; n + 1];
        for r in 0..n {
            offsets[r + 1] = offsets[r] + (r - first[r] + 1);
        }
        let mut data = vec![0.0; offsets[n]];
        for r in 0..n {
            for (j, v) in a.row(perm[r]) {
                let c = inverse[j];
                if c <= r {
                    data[offsets[r] + c - first[r]] = v;
                }
            }
        }
        for r in 0..n {
            let fr = first[r];
            let (done, rest) = data.split_at_mut(offsets[r]);
            let row = &mut rest[..r - fr + 1];
            for c in fr..r {
                let fc = first[c];
                let lo = fr.max(fc);
                let crow = &done[offsets[c]..offsets[c + 1]];
                let dot: f64 = row[lo - fr..c - fr].iter().zip(&crow[lo - fc..c - fc]).map(|(x, y)| x * y).sum();
                row[c - fr] = (row[c - fr] - dot) / crow[c - fc];
            }
            let sq: f64 = row[..r - fr].iter().map(|x| x * x).sum();
            let pivot = row[r - fr] - sq;
            if !(pivot > 0.0) {
                return Err(Error::NotPositiveDefinite { pivot: perm[r], value: pivot });
            }
            row[r - fr] = pivot.sqrt();
        }
        Ok(EnvelopeCholesky { perm, first, offsets, data })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for r in 0..n {
            let fr = self.first[r];
            let row = &self.data[self.offsets[r]..self.offsets[r + 1]];
            let dot: f64 = row[..r - fr].iter().zip(&y[fr..r]).map(|(l, v)| l * v).sum();
            y[r] = (y[r] - dot) / row[r - fr];
        }
        for r in (0..n).rev() {
            let fr = self.first[r];
            let row = &self.data[self.offsets[r]..self.offsets[r + 1]];
            y[r] /= row[r - fr];
            let yr = y[r];
            for (l, v) in row[..r - fr].iter().zip(&mut y[fr..r]) {
                *v -= l * yr;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> SparseSymmetric {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        SparseSymmetric::from_triplets(n, t)
    }

    #[test]
    fn triplets_merge_and_mirror() {
        let a = SparseSymmetric::from_triplets(3, vec![(0, 1, 1.0), (1, 0, 2.0), (2, 2, 5.0), (0, 0, 1.0)]);
        assert_eq!(a.get(0, 1), 3.0);
        assert_eq!(a.get(1, 0), 3.0);
        assert_eq!(a.get(2, 2), 5.0);
        assert_eq!(a.get(1, 2), 0.0);
        assert!(a.is_symmetric());
        assert_eq!(a.nnz(), 4);
        let cols: Vec<usize> = a.row(1).map(|(j, _)| j).collect();
        assert_eq!(cols, vec![0]);
    }

    #[test]
    fn cholesky_solves_grid_laplacian() {
        // 2-D five-point Laplacian plus identity on a 12×9 grid
        let (nx, ny) = (12, 9);
        let id = |i: usize, j: usize| i * ny + j;
        let mut t = Vec::new();
        for i in 0..nx {
            for j in 0..ny {
                t.push((id(i, j), id(i, j), 5.0));
                if i + 1 < nx {
                    t.push((id(i, j), id(i + 1, j), -1.0));
                }
                if j + 1 < ny {
                    t.push((id(i, j), id(i, j + 1), -1.0));
                }
            }
        }
        let a = SparseSymmetric::from_triplets(nx * ny, t);
        let chol = EnvelopeCholesky::factor(&a).unwrap();
        let x_true: Vec<f64> = (0..nx * ny).map(|k| (k as f64 * 0.37).sin()).collect();
        let b = a.apply(&x_true);
        let x = chol.solve(&b);
        let err = x.iter().zip(&x_true).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
        assert!(chol.envelope_size() < (nx * ny) * (nx * ny) / 4);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = laplacian_1d(5).add_scaled(&SparseSymmetric::from_triplets(5, (0..5).map(|i| (i, i, 1.0))), -3.0);
        assert!(matches!(EnvelopeCholesky::factor(&a), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn rcm_is_a_permutation() {
        let a = laplacian_1d(17);
        let mut p = reverse_cuthill_mckee(&a);
        p.sort();
        assert_eq!(p, (0..17).collect::<Vec<_>>());
    }
}
