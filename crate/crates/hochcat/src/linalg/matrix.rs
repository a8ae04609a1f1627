use super::{Field, Scalar};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// A sparse matrix over one field. No zero entries are stored; the entry
/// map is ordered so all iteration is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut m = Matrix::zero(field, rows, cols);
        for (r, c, v) in triplets {
            if v.field() != field {
                return Err(Error::FieldMismatch(format!(
                    "entry ({r},{c}) has field {} in a {} matrix",
                    v.field(),
                    field
                )));
            }
            if r >= rows || c >= cols {
                return Err(Error::ShapeMismatch(format!(
                    "entry ({r},{c}) outside {rows}x{cols}"
                )));
            }
            let cur = m.get(r, c);
            m.set(r, c, &cur + &v);
        }
        Ok(m)
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        let cur = self.get(r, c);
        self.set(r, c, &cur + v);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.field, self.cols, self.rows);
        for ((r, c), v) in &self.entries {
            t.set(*c, *r, v.clone());
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut m = Matrix::zero(self.field, self.rows, self.cols);
        for ((r, c), v) in &self.entries {
            m.set(*r, *c, v * s);
        }
        m
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "add {}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = self.clone();
        for ((r, c), v) in &other.entries {
            m.add_to(*r, *c, v);
        }
        Ok(m)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(&-&self.field.one()))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "mul {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        // Row-index other's entries once.
        let mut by_row: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for ((r, c), v) in &other.entries {
            by_row.entry(*r).or_default().push((*c, v));
        }
        let mut m = Matrix::zero(self.field, self.rows, other.cols);
        for ((r, k), a) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (c, b) in row {
                    m.add_to(*r, *c, &(a * b));
                }
            }
        }
        Ok(m)
    }

    /// Matrix-vector product; `v` is a dense column.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "apply {}x{} to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![self.field.zero(); self.rows];
        for ((r, c), a) in &self.entries {
            if !v[*c].is_zero() {
                out[*r] = &out[*r] + &(a * &v[*c]);
            }
        }
        Ok(out)
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!(
                "{} vs {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    /// Stack `self` above `other` (same column count).
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch("vstack column mismatch".into()));
        }
        let mut m = Matrix::zero(self.field, self.rows + other.rows, self.cols);
        for ((r, c), v) in &self.entries {
            m.set(*r, *c, v.clone());
        }
        for ((r, c), v) in &other.entries {
            m.set(r + self.rows, *c, v.clone());
        }
        Ok(m)
    }

    /// Place `self` left of `other` (same row count).
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("hstack row mismatch".into()));
        }
        let mut m = Matrix::zero(self.field, self.rows, self.cols + other.cols);
        for ((r, c), v) in &self.entries {
            m.set(*r, *c, v.clone());
        }
        for ((r, c), v) in &other.entries {
            m.set(*r, c + self.cols, v.clone());
        }
        Ok(m)
    }

    /// Dense row-echelon elimination with deterministic pivoting: sweep
    /// columns left to right, pick the nonzero entry with the smallest row
    /// index. Returns (row-reduced dense rows, pivot (row,col) list).
    fn echelon(&self) -> (Vec<Vec<Scalar>>, Vec<(usize, usize)>) {
        let zero = self.field.zero();
        let mut rows: Vec<Vec<Scalar>> = vec![vec![zero.clone(); self.cols]; self.rows];
        for ((r, c), v) in &self.entries {
            rows[*r][*c] = v.clone();
        }
        let mut pivots = Vec::new();
        let mut next_row = 0usize;
        for col in 0..self.cols {
            let pivot_row = (next_row..self.rows).find(|&r| !rows[r][col].is_zero());
            let Some(pr) = pivot_row else { continue };
            rows.swap(next_row, pr);
            let inv = rows[next_row][col].inv();
            for c in col..self.cols {
                rows[next_row][c] = &rows[next_row][c] * &inv;
            }
            for r in 0..self.rows {
                if r != next_row && !rows[r][col].is_zero() {
                    let factor = rows[r][col].clone();
                    for c in col..self.cols {
                        let delta = &factor * &rows[next_row][c];
                        rows[r][c] = &rows[r][c] - &delta;
                    }
                }
            }
            pivots.push((next_row, col));
            next_row += 1;
            if next_row == self.rows {
                break;
            }
        }
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Rank and a basis of the kernel (as dense column vectors). The basis
    /// is the standard one read off the reduced echelon form, with free
    /// columns in increasing order; `rank + basis.len() == cols`.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<Scalar>>) {
        let (rows, pivots) = self.echelon();
        let rank = pivots.len();
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (pr, pc) in &pivots {
                // Row pr reads: x_{pc} + sum over later columns = 0.
                v[*pc] = -&rows[*pr][free];
            }
            basis.push(v);
        }
        (rank, basis)
    }

    /// The pivot columns of the echelon form; the corresponding columns of
    /// `self` form a basis of the column space.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.echelon().1.into_iter().map(|(_, c)| c).collect()
    }

    /// Solve `self * x = b` exactly. `None` means `b` is certified outside
    /// the image (rank comparison of `[A]` vs `[A|b]`).
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "solve {}x{} with rhs of length {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        for v in b {
            if v.field() != self.field {
                return Err(Error::FieldMismatch("rhs entries".into()));
            }
        }
        let mut aug = Matrix::zero(self.field, self.rows, self.cols + 1);
        for ((r, c), v) in &self.entries {
            aug.set(*r, *c, v.clone());
        }
        for (r, v) in b.iter().enumerate() {
            aug.set(r, self.cols, v.clone());
        }
        let (rows, pivots) = aug.echelon();
        if pivots.iter().any(|&(_, c)| c == self.cols) {
            return Ok(None); // inconsistent: pivot in the augmented column
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (pr, pc) in &pivots {
            x[*pc] = rows[*pr][self.cols].clone();
        }
        Ok(Some(x))
    }

    /// Solve `self * X = B` column by column; `None` if any column fails.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Option<Matrix>> {
        self.check_field(b)?;
        if b.rows != self.rows {
            return Err(Error::ShapeMismatch("solve_matrix row mismatch".into()));
        }
        let mut x = Matrix::zero(self.field, self.cols, b.cols);
        for c in 0..b.cols {
            let col: Vec<Scalar> = (0..b.rows).map(|r| b.get(r, c)).collect();
            match self.solve(&col)? {
                None => return Ok(None),
                Some(sol) => {
                    for (r, v) in sol.into_iter().enumerate() {
                        x.set(r, c, v);
                    }
                }
            }
        }
        Ok(Some(x))
    }

    /// Is this square matrix invertible?
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        self.solve_matrix(&Matrix::identity(self.field, self.rows))
            .ok()
            .flatten()
    }

    /// Columns of `m` restricted to the given set, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zero(self.field, self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                let v = self.get(r, c);
                if !v.is_zero() {
                    m.set(r, j, v);
                }
            }
        }
        m
    }

    pub fn from_columns(field: Field, rows: usize, cols: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zero(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} over {}]", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// The pullback of a cospan `f : U -> W <- V : g` of linear maps, realized
/// as the kernel of `(f, -g) : U + V -> W`. `basis` columns live in
/// `U + V` coordinates; `p1`/`p2` are the projections to `U` and `V`.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub dim: usize,
    pub basis: Matrix,
    pub p1: Matrix,
    pub p2: Matrix,
}

/// Pullback of linear maps with equal codomains.
pub fn pullback_linear(f: &Matrix, g: &Matrix) -> Result<Pullback> {
    if f.field != g.field {
        return Err(Error::FieldMismatch("pullback legs".into()));
    }
    if f.rows != g.rows {
        return Err(Error::ShapeMismatch(
            "pullback legs must share a codomain".into(),
        ));
    }
    let stacked = f.hstack(&g.scale(&-&f.field.one()))?;
    let (_, kernel) = stacked.rank_kernel();
    let dim = kernel.len();
    let basis = Matrix::from_columns(f.field, f.cols + g.cols, &kernel);
    let mut p1 = Matrix::zero(f.field, f.cols, dim);
    let mut p2 = Matrix::zero(f.field, g.cols, dim);
    for (j, col) in kernel.iter().enumerate() {
        for r in 0..f.cols {
            if !col[r].is_zero() {
                p1.set(r, j, col[r].clone());
            }
        }
        for r in 0..g.cols {
            if !col[f.cols + r].is_zero() {
                p2.set(r, j, col[f.cols + r].clone());
            }
        }
    }
    Ok(Pullback { dim, basis, p1, p2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Field::Q.from_i64(n)
    }

    #[test]
    fn identity_rank_kernel() {
        let m = Matrix::identity(Field::Q, 2);
        let (rank, kernel) = m.rank_kernel();
        assert_eq!(rank, 2);
        assert!(kernel.is_empty());
    }

    #[test]
    fn row_vector_kernel() {
        // [1 1] over Q -> rank 1, kernel spanned by (1,-1) up to scale.
        let m = Matrix::from_triplets(Field::Q, 1, 2, vec![(0, 0, q(1)), (0, 1, q(1))]).unwrap();
        let (rank, kernel) = m.rank_kernel();
        assert_eq!(rank, 1);
        assert_eq!(kernel.len(), 1);
        let v = &kernel[0];
        assert_eq!(&v[0] + &v[1], q(0));
        assert!(!v[0].is_zero());
    }

    #[test]
    fn solve_cases() {
        let id = Matrix::identity(Field::Q, 3);
        let b = vec![q(3), q(-1), q(2)];
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);

        let m = Matrix::from_triplets(Field::Q, 1, 2, vec![(0, 0, q(1)), (0, 1, q(1))]).unwrap();
        let sol = m.solve(&[q(0)]).unwrap().unwrap();
        assert_eq!(&sol[0] + &sol[1], q(0));

        let zero = Matrix::zero(Field::Q, 2, 2);
        assert!(zero.solve(&[q(1), q(0)]).unwrap().is_none());
    }

    #[test]
    fn pullback_over_zero_is_sum() {
        let f = Matrix::zero(Field::Q, 1, 2); // V -> 0-ish (rank 0 into k)
        let g = Matrix::zero(Field::Q, 1, 3);
        let pb = pullback_linear(&f, &g).unwrap();
        assert_eq!(pb.dim, 5);
    }

    #[test]
    fn pullback_diagonal() {
        let id = Matrix::identity(Field::Q, 2);
        let pb = pullback_linear(&id, &id).unwrap();
        assert_eq!(pb.dim, 2);
        // p1 = p2 on the pullback (diagonal).
        assert_eq!(pb.p1, pb.p2);
    }

    #[test]
    fn mixed_field_rejected() {
        let err = Matrix::from_triplets(Field::Q, 1, 1, vec![(0, 0, Field::Fp(5).one())]);
        assert!(matches!(err, Err(Error::FieldMismatch(_))));
    }
}
