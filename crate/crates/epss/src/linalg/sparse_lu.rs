//! Sparse LU factorization: reverse Cuthill-McKee preordering followed by a
//! left-looking factorization with per-column sparse triangular solves and
//! partial pivoting.

use crate::error::{Error, Result};
use crate::linalg::sparse::SparseMatrix;

/// Reverse Cuthill-McKee ordering on the pattern of A + A^T.
/// Returns perm with perm[new] = old.
pub fn rcm_order(a: &SparseMatrix) -> Vec<usize> {
    let n = a.rows();
    assert!(a.is_square());
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j, _) in a.iter() {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(|l| l.len()).collect();

    // breadth-first walk from root, neighbors by increasing degree;
    // returns the final level for the pseudo-peripheral probe
    let bfs = |root: usize, visited: &mut Vec<bool>, out: &mut Vec<usize>| -> Vec<usize> {
        visited[root] = true;
        out.push(root);
        let mut current = vec![root];
        let mut last_level = vec![root];
        loop {
            let mut next_level = Vec::new();
            for &u in &current {
                let mut nbrs: Vec<usize> =
                    adj[u].iter().copied().filter(|&v| !visited[v]).collect();
                nbrs.sort_by_key(|&v| (degree[v], v));
                for v in nbrs {
                    if !visited[v] {
                        visited[v] = true;
                        out.push(v);
                        next_level.push(v);
                    }
                }
            }
            if next_level.is_empty() {
                break;
            }
            last_level.clone_from(&next_level);
            current = next_level;
        }
        last_level
    };

    let mut visited = vec![false; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut seeds: Vec<usize> = (0..n).collect();
    seeds.sort_by_key(|&v| (degree[v], v));
    for &seed in &seeds {
        if visited[seed] {
            continue;
        }
        // probe pass to find a far low-degree root for this component
        let mut scratch = visited.clone();
        let mut probe = Vec::new();
        let last_level = bfs(seed, &mut scratch, &mut probe);
        let root = last_level.iter().copied().min_by_key(|&v| (degree[v], v)).unwrap();
        bfs(root, &mut visited, &mut order);
    }
    order.reverse();
    order
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pivoting {
    /// Largest magnitude candidate in each column.
    Partial,
    /// Diagonal of the permuted matrix, no row exchanges. Fails on a zero or
    /// tiny diagonal; used as a definiteness probe on symmetric input.
    Diagonal,
}

/// Factors P A(q, q) = L U with q a fill-reducing symmetric preorder and P
/// the row permutation accumulated by pivoting.
#[derive(Debug, Clone)]
pub struct SparseLu {
    n: usize,
    /// symmetric preorder, perm[new] = old
    perm: Vec<usize>,
    /// pivot position -> preordered row index
    rowof: Vec<usize>,
    // L strictly below its unit diagonal, by column, rows as pivot positions
    l_ptr: Vec<usize>,
    l_rows: Vec<usize>,
    l_vals: Vec<f64>,
    // U strictly above the diagonal, by column, rows as pivot positions
    u_ptr: Vec<usize>,
    u_rows: Vec<usize>,
    u_vals: Vec<f64>,
    u_diag: Vec<f64>,
}

impl SparseLu {
    pub fn factor(a: &SparseMatrix) -> Result<Self> {
        Self::factor_with(a, Pivoting::Partial)
    }

    pub fn factor_with(a: &SparseMatrix, pivoting: Pivoting) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::dim("sparse lu: matrix must be square".to_string()));
        }
        let n = a.rows();
        let perm = rcm_order(a);
        let threshold = 1e-14 * a.max_abs();

        // permuted matrix in column buckets with preordered row indices
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, j, v) in a.iter() {
            cols[inv[j]].push((inv[i], v));
        }

        // l_cols entries keep preordered row indices until the final remap
        let mut l_cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut u_ptr = vec![0usize; n + 1];
        let mut u_rows: Vec<usize> = Vec::new();
        let mut u_vals: Vec<f64> = Vec::new();
        let mut u_diag = vec![0.0f64; n];

        let mut pinv = vec![usize::MAX; n]; // preordered row -> pivot position
        let mut rowof = vec![usize::MAX; n];
        let mut x = vec![0.0f64; n];
        let mut stamp = vec![0u32; n];
        let mut topo: Vec<usize> = Vec::with_capacity(n);
        let mut dfs_stack: Vec<(usize, usize)> = Vec::new();

        for k in 0..n {
            let mark = (k + 1) as u32;
            topo.clear();
            // reach of the column pattern through already-finished columns,
            // collected in post-order
            for seed_idx in 0..cols[k].len() {
                let seed = cols[k][seed_idx].0;
                if stamp[seed] == mark {
                    continue;
                }
                stamp[seed] = mark;
                dfs_stack.push((seed, 0));
                loop {
                    let Some(&(node, pos)) = dfs_stack.last() else { break };
                    let col = pinv[node];
                    let children: &[(usize, f64)] =
                        if col == usize::MAX { &[] } else { &l_cols[col] };
                    if pos < children.len() {
                        dfs_stack.last_mut().unwrap().1 = pos + 1;
                        let child = children[pos].0;
                        if stamp[child] != mark {
                            stamp[child] = mark;
                            dfs_stack.push((child, 0));
                        }
                    } else {
                        topo.push(node);
                        dfs_stack.pop();
                    }
                }
            }

            // numeric solve against the unit lower factor, topological order
            for &(r, v) in &cols[k] {
                x[r] += v;
            }
            for idx in (0..topo.len()).rev() {
                let node = topo[idx];
                let col = pinv[node];
                if col == usize::MAX {
                    continue;
                }
                let xj = x[node];
                if xj != 0.0 {
                    for &(row, lv) in &l_cols[col] {
                        x[row] -= lv * xj;
                    }
                }
            }

            let pivot_row = match pivoting {
                Pivoting::Partial => {
                    let mut best_row = usize::MAX;
                    let mut best = -1.0f64;
                    for &node in &topo {
                        if pinv[node] == usize::MAX {
                            let mag = x[node].abs();
                            if mag > best || (mag == best && node < best_row) {
                                best = mag;
                                best_row = node;
                            }
                        }
                    }
                    if best_row == usize::MAX || best <= threshold {
                        return Err(Error::Singular { pivot: k });
                    }
                    best_row
                }
                Pivoting::Diagonal => {
                    // the permuted diagonal of column k sits at preordered row k
                    if stamp[k] != mark || x[k].abs() <= threshold {
                        return Err(Error::Singular { pivot: k });
                    }
                    k
                }
            };

            let pivot = x[pivot_row];
            u_diag[k] = pivot;
            for &node in &topo {
                if node == pivot_row {
                    continue;
                }
                let v = x[node];
                if v != 0.0 {
                    match pinv[node] {
                        usize::MAX => l_cols[k].push((node, v / pivot)),
                        assigned => {
                            u_rows.push(assigned);
                            u_vals.push(v);
                        }
                    }
                }
            }
            u_ptr[k + 1] = u_rows.len();
            pinv[pivot_row] = k;
            rowof[k] = pivot_row;
            for &node in &topo {
                x[node] = 0.0;
            }
        }

        // remap L rows from preordered indices to pivot positions and flatten
        let mut l_ptr = vec![0usize; n + 1];
        for (j, col) in l_cols.iter().enumerate() {
            l_ptr[j + 1] = l_ptr[j] + col.len();
        }
        let mut l_rows = Vec::with_capacity(l_ptr[n]);
        let mut l_vals = Vec::with_capacity(l_ptr[n]);
        for col in &l_cols {
            for &(row, v) in col {
                l_rows.push(pinv[row]);
                l_vals.push(v);
            }
        }

        Ok(SparseLu { n, perm, rowof, l_ptr, l_rows, l_vals, u_ptr, u_rows, u_vals, u_diag })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Diagonal of U; with diagonal pivoting on a symmetric matrix these are
    /// the LDL^T pivots.
    pub fn pivots(&self) -> &[f64] {
        &self.u_diag
    }

    pub fn nnz_factors(&self) -> usize {
        self.l_vals.len() + self.u_vals.len() + self.n
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(rhs.len(), self.n, "solve: rhs length mismatch");
        let n = self.n;
        // apply the symmetric preorder, then the pivot row permutation
        let mut b = vec![0.0f64; n];
        for p in 0..n {
            b[p] = rhs[self.perm[self.rowof[p]]];
        }
        // forward with unit lower L, column oriented
        for j in 0..n {
            let xj = b[j];
            if xj != 0.0 {
                for idx in self.l_ptr[j]..self.l_ptr[j + 1] {
                    b[self.l_rows[idx]] -= self.l_vals[idx] * xj;
                }
            }
        }
        // backward with U, column oriented
        for k in (0..n).rev() {
            let xk = b[k] / self.u_diag[k];
            b[k] = xk;
            if xk != 0.0 {
                for idx in self.u_ptr[k]..self.u_ptr[k + 1] {
                    b[self.u_rows[idx]] -= self.u_vals[idx] * xk;
                }
            }
        }
        // solution is indexed by preordered column; undo the preorder
        let mut out = vec![0.0f64; n];
        for (new, &old) in self.perm.iter().enumerate() {
            out[old] = b[new];
        }
        out
    }
}

/// Definiteness probe for a symmetric matrix: a no-exchange factorization
/// succeeds with all pivots positive exactly when the matrix is positive
/// definite at the pivot threshold.
pub fn symmetric_pd_probe(s: &SparseMatrix) -> bool {
    match SparseLu::factor_with(s, Pivoting::Diagonal) {
        Ok(f) => f.pivots().iter().all(|&p| p > 0.0),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::DenseLu;

    fn laplacian_1d(n: usize) -> SparseMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
                t.push((i + 1, i, -1.0));
            }
        }
        SparseMatrix::from_triplets(n, n, &t).unwrap()
    }

    #[test]
    fn rcm_is_a_permutation() {
        let a = laplacian_1d(17);
        let mut p = rcm_order(&a);
        p.sort_unstable();
        assert_eq!(p, (0..17).collect::<Vec<_>>());
    }

    #[test]
    fn solve_matches_dense_lu() {
        let n = 25;
        let mut t = Vec::new();
        let mut seed = 41u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as f64) / (u32::MAX as f64) - 0.5
        };
        for i in 0..n {
            t.push((i, i, 6.0 + next()));
            for _ in 0..3 {
                let j = ((next().abs() * 1e4) as usize) % n;
                t.push((i, j, next()));
            }
        }
        let a = SparseMatrix::from_triplets(n, n, &t).unwrap();
        let f = SparseLu::factor(&a).unwrap();
        let fd = DenseLu::factor(&a.to_dense()).unwrap();
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let xs = f.solve(&rhs);
        let xd = fd.solve(&rhs);
        for (u, v) in xs.iter().zip(&xd) {
            assert!((u - v).abs() < 1e-10, "sparse {u} vs dense {v}");
        }
        // residual check as well
        let r = a.spmv(&xs).unwrap();
        for (ri, bi) in r.iter().zip(&rhs) {
            assert!((ri - bi).abs() < 1e-10);
        }
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let a = SparseMatrix::from_triplets(
            2,
            2,
            &[(0, 1, 1.0), (1, 0, 1.0)],
        )
        .unwrap();
        let f = SparseLu::factor(&a).unwrap();
        let x = f.solve(&[3.0, 5.0]);
        assert!((x[0] - 5.0).abs() < 1e-15);
        assert!((x[1] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = SparseMatrix::from_triplets(3, 3, &[(0, 0, 1.0), (1, 1, 1.0)]).unwrap();
        assert!(matches!(SparseLu::factor(&a), Err(Error::Singular { .. })));
    }

    #[test]
    fn pd_probe_distinguishes() {
        let spd = laplacian_1d(10);
        assert!(symmetric_pd_probe(&spd));
        // make it indefinite
        let mut t: Vec<(usize, usize, f64)> = spd.iter().collect();
        t.push((5, 5, -10.0));
        let indef = SparseMatrix::from_triplets(10, 10, &t).unwrap();
        assert!(!symmetric_pd_probe(&indef));
        // singular PSD (zero row/col)
        let mut t2: Vec<(usize, usize, f64)> = Vec::new();
        t2.push((0, 0, 1.0));
        let psd = SparseMatrix::from_triplets(2, 2, &t2).unwrap();
        assert!(!symmetric_pd_probe(&psd));
    }

    #[test]
    fn factor_is_deterministic() {
        let a = laplacian_1d(30);
        let f1 = SparseLu::factor(&a).unwrap();
        let f2 = SparseLu::factor(&a).unwrap();
        let x1 = f1.solve(&vec![1.0; 30]);
        let x2 = f2.solve(&vec![1.0; 30]);
        assert_eq!(x1, x2);
    }
}
