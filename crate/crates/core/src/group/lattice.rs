//! Integer lattices in ℤⁿ kept in row echelon form.

/// A sublattice of ℤⁿ spanned by its echelon rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    dim: usize,
    /// Echelon rows: each row has a positive pivot strictly right of the
    /// previous row's pivot.
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn new(dim: usize, gens: &[Vec<i64>]) -> Self {
        let mut work: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| g.iter().map(|&x| x as i128).collect())
            .collect();
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..dim {
            // Euclid on column `col` among rows[top..].
            loop {
                let mut best: Option<usize> = None;
                for r in top..work.len() {
                    if work[r][col] != 0
                        && best.is_none_or(|b| work[r][col].abs() < work[b][col].abs())
                    {
                        best = Some(r);
                    }
                }
                let Some(b) = best else { break };
                work.swap(top, b);
                let mut done = true;
                for r in top + 1..work.len() {
                    if work[r][col] != 0 {
                        let q = work[r][col].div_euclid(work[top][col]);
                        let pivot_row = work[top].clone();
                        for (x, p) in work[r].iter_mut().zip(&pivot_row) {
                            *x -= q * p;
                        }
                        if work[r][col] != 0 {
                            done = false;
                        }
                    }
                }
                if done {
                    if work[top][col] < 0 {
                        for x in work[top].iter_mut() {
                            *x = -*x;
                        }
                    }
                    rows.push(work[top].iter().map(|&x| x as i64).collect());
                    pivots.push(col);
                    top += 1;
                    break;
                }
            }
        }
        Lattice { dim, rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Product of pivots when of full rank, i.e. the index in ℤⁿ.
    pub fn index(&self) -> Option<u64> {
        if self.rank() < self.dim {
            return None;
        }
        Some(self.rows.iter().zip(&self.pivots).map(|(r, &c)| r[c] as u64).product())
    }

    pub fn is_full(&self) -> bool {
        self.index() == Some(1)
    }

    /// Canonical representative of `v + L`: pivot coordinates reduced into
    /// `[0, pivot)`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut out = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = out[c].div_euclid(row[c]);
            if q != 0 {
                for (x, r) in out.iter_mut().zip(row) {
                    *x -= q * r;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Intersection with another lattice of the same dimension.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        // Kernel of [A; -B] stacked: solve a·A = b·B via echelon form on the
        // augmented rows (A | A) and (B | 0); rows with zero left half give
        // elements of A ∩ B in the right half.
        let n = self.dim;
        let mut aug: Vec<Vec<i64>> = Vec::new();
        for r in &self.rows {
            let mut row = r.clone();
            row.extend(r.iter().copied());
            aug.push(row);
        }
        for r in &other.rows {
            let mut row = r.clone();
            row.extend(std::iter::repeat_n(0, n));
            aug.push(row);
        }
        let ech = Lattice::new(2 * n, &aug);
        let gens: Vec<Vec<i64>> = ech
            .rows
            .iter()
            .filter(|r| r[..n].iter().all(|&x| x == 0))
            .map(|r| r[n..].to_vec())
            .collect();
        Lattice::new(n, &gens)
    }
}
