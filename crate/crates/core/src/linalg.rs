//! Dense exact linear algebra over tower elements.
//!
//! Elimination is fraction-free (Bareiss): each update divides by the
//! previous pivot, which keeps entries as small minors instead of letting
//! rational-function coefficients compound.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactfield::{FieldError, TowerElem};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<TowerElem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = TowerElem;
    fn index(&self, (r, c): (usize, usize)) -> &TowerElem {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut TowerElem {
        &mut self.data[r * self.cols + c]
    }
}

/// Result of a linear solve: one particular solution plus a kernel basis.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Vec<TowerElem>,
    pub kernel: Vec<Vec<TowerElem>>,
}

/// Row-echelon form produced by elimination.
struct Echelon {
    m: Matrix,
    pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![TowerElem::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = TowerElem::one();
        }
        m
    }

    pub fn diag(entries: &[TowerElem]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<TowerElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| TowerElem::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[TowerElem] {
        &self.data
    }

    pub fn row(&self, r: usize) -> Vec<TowerElem> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<TowerElem> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn map(&self, f: impl Fn(&TowerElem) -> TowerElem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<E>(&self, f: impl Fn(&TowerElem) -> Result<TowerElem, E>) -> Result<Matrix, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, E>>()?,
        })
    }

    pub fn scale(&self, k: &TowerElem) -> Matrix {
        self.map(|x| x * k)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut m = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = TowerElem::zero();
                for k in 0..self.cols {
                    let a = &self[(r, k)];
                    let b = &other[(k, c)];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc + a * b;
                }
                m[(r, c)] = acc;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[TowerElem]) -> Vec<TowerElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = TowerElem::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = &self[(r, k)];
                    if a.is_zero() || x.is_zero() {
                        continue;
                    }
                    acc = acc + a * x;
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Fraction-free forward elimination. Pivots are the first nonzero entry
    /// in column order.
    fn echelon(&self) -> Result<Echelon, FieldError> {
        let mut m = self.clone();
        let mut prev = TowerElem::one();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let piv = m[(r, c)].clone();
            for i in r + 1..m.rows {
                let lead = m[(i, c)].clone();
                if lead.is_zero() {
                    if !prev.is_one() {
                        for j in c + 1..m.cols {
                            if !m[(i, j)].is_zero() {
                                m[(i, j)] = (&piv * &m[(i, j)]).checked_div(&prev)?;
                            }
                        }
                    }
                    continue;
                }
                for j in c + 1..m.cols {
                    let a = &piv * &m[(i, j)];
                    let b = &lead * &m[(r, j)];
                    let v = &a - &b;
                    m[(i, j)] = if prev.is_one() { v } else { v.checked_div(&prev)? };
                }
                m[(i, c)] = TowerElem::zero();
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        Ok(Echelon { m, pivots })
    }

    pub fn rank(&self) -> Result<usize, FieldError> {
        Ok(self.echelon()?.pivots.len())
    }

    /// Determinant by Bareiss elimination.
    pub fn det(&self) -> Result<TowerElem, FieldError> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(TowerElem::one());
        }
        let mut m = self.clone();
        let mut prev = TowerElem::one();
        let mut negate = false;
        for k in 0..n - 1 {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Ok(TowerElem::zero());
            };
            if p != k {
                m.swap_rows(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&m[(k, k)] * &m[(i, j)]) - &(&m[(i, k)] * &m[(k, j)]);
                    m[(i, j)] = if prev.is_one() { v } else { v.checked_div(&prev)? };
                }
                m[(i, k)] = TowerElem::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if negate { -d } else { d })
    }

    pub fn inverse(&self) -> Result<Matrix, FieldError> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = TowerElem::one();
        }
        let e = aug.echelon()?;
        if e.pivots.len() < n || e.pivots[n - 1] >= n {
            return Err(FieldError::DivisionByZero);
        }
        let u = e.m;
        let mut inv = Matrix::zeros(n, n);
        for col in 0..n {
            for r in (0..n).rev() {
                let mut acc = u[(r, n + col)].clone();
                for j in r + 1..n {
                    if !u[(r, j)].is_zero() {
                        acc = acc - &u[(r, j)] * &inv[(j, col)];
                    }
                }
                inv[(r, col)] = acc.checked_div(&u[(r, r)])?;
            }
        }
        Ok(inv)
    }
}

/// Solve for the pivot variables of an echelon system given the free ones.
fn back_substitute(
    u: &Matrix,
    pivots: &[usize],
    n: usize,
    rhs: impl Fn(usize) -> TowerElem,
    free: &[(usize, TowerElem)],
) -> Result<Vec<TowerElem>, FieldError> {
    let mut x = vec![TowerElem::zero(); n];
    for (j, v) in free {
        x[*j] = v.clone();
    }
    for (k, &p) in pivots.iter().enumerate().rev() {
        let mut acc = rhs(k);
        for j in p + 1..n {
            if !u[(k, j)].is_zero() && !x[j].is_zero() {
                acc = acc - &u[(k, j)] * &x[j];
            }
        }
        x[p] = acc.checked_div(&u[(k, p)])?;
    }
    Ok(x)
}

/// Basis of the right kernel; empty iff the matrix is injective.
pub fn kernel_basis(m: &Matrix) -> Result<Vec<Vec<TowerElem>>, FieldError> {
    let e = m.echelon()?;
    let n = m.cols;
    let free: Vec<usize> = (0..n).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| back_substitute(&e.m, &e.pivots, n, |_| TowerElem::zero(), &[(f, TowerElem::one())]))
        .collect()
}

/// Kernel basis by Gauss-Jordan elimination on sparse rows, choosing each
/// pivot to limit fill-in and entry size. Suited to sparse systems whose
/// entries are bulky rational functions. The basis may differ from
/// `kernel_basis` but spans the same space.
pub fn kernel_basis_sparse(m: &Matrix) -> Result<Vec<Vec<TowerElem>>, FieldError> {
    let n = m.cols;
    let mut active: Vec<BTreeMap<usize, TowerElem>> = (0..m.rows)
        .map(|r| (0..n).filter(|&c| !m[(r, c)].is_zero()).map(|c| (c, m[(r, c)].clone())).collect())
        .collect();
    let mut done: Vec<(usize, BTreeMap<usize, TowerElem>)> = Vec::new();
    loop {
        active.retain(|r| !r.is_empty());
        if active.is_empty() {
            break;
        }
        let mut col_count = vec![0usize; n];
        for r in &active {
            for &c in r.keys() {
                col_count[c] += 1;
            }
        }
        let (pi, pc) = active
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(&c, v)| (i, c, v, r.len())))
            .min_by_key(|&(_, c, v, len)| ((len - 1) * (col_count[c] - 1), v.size(), c))
            .map(|(i, c, _, _)| (i, c))
            .expect("nonempty rows");
        let mut prow = active.swap_remove(pi);
        let inv = prow[&pc].inv()?;
        for v in prow.values_mut() {
            *v = &*v * &inv;
        }
        let eliminate = |row: &mut BTreeMap<usize, TowerElem>| {
            if let Some(f) = row.remove(&pc) {
                for (&c, v) in &prow {
                    if c == pc {
                        continue;
                    }
                    let nv = &row.get(&c).cloned().unwrap_or_else(TowerElem::zero) - &(&f * v);
                    if nv.is_zero() {
                        row.remove(&c);
                    } else {
                        row.insert(c, nv);
                    }
                }
            }
        };
        for r in active.iter_mut() {
            eliminate(r);
        }
        for (_, r) in done.iter_mut() {
            eliminate(r);
        }
        done.push((pc, prow));
    }
    let pivot_cols: Vec<usize> = done.iter().map(|(c, _)| *c).collect();
    Ok((0..n)
        .filter(|c| !pivot_cols.contains(c))
        .map(|f| {
            let mut x = vec![TowerElem::zero(); n];
            x[f] = TowerElem::one();
            for (pc, r) in &done {
                if let Some(v) = r.get(&f) {
                    x[*pc] = -v;
                }
            }
            x
        })
        .collect())
}

/// One particular solution of `a x = b` plus the kernel of `a`, or `None`
/// when the system is inconsistent.
pub fn solve_linear(a: &Matrix, b: &[TowerElem]) -> Result<Option<Solution>, FieldError> {
    assert_eq!(a.rows, b.len());
    let n = a.cols;
    let mut aug = Matrix::zeros(a.rows, n + 1);
    for r in 0..a.rows {
        for c in 0..n {
            aug[(r, c)] = a[(r, c)].clone();
        }
        aug[(r, n)] = b[r].clone();
    }
    let e = aug.echelon()?;
    if e.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let u = &e.m;
    let particular = back_substitute(u, &e.pivots, n, |k| u[(k, n)].clone(), &[])?;
    let kernel = kernel_basis(a)?;
    Ok(Some(Solution { particular, kernel }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_ints(rows)
    }

    #[test]
    fn kernel_examples() {
        let d = mat(&[&[0, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let k = kernel_basis(&d).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![TowerElem::one(), TowerElem::zero(), TowerElem::zero(), TowerElem::zero()]);
        assert!(kernel_basis(&Matrix::identity(4)).unwrap().is_empty());
    }

    #[test]
    fn vertex_of_symbolic_quadric() {
        // matrix of x0^2 + x2^2 + t^2 x3^2
        let t = TowerElem::param("t");
        let m = Matrix::diag(&[TowerElem::one(), TowerElem::zero(), TowerElem::one(), &t * &t]);
        let k = kernel_basis(&m).unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![TowerElem::zero(), TowerElem::one(), TowerElem::zero(), TowerElem::zero()]);
    }

    #[test]
    fn solve_examples() {
        let b: Vec<TowerElem> = (1..=3).map(TowerElem::from_int).collect();
        let s = solve_linear(&Matrix::identity(3), &b).unwrap().unwrap();
        assert_eq!(s.particular, b);
        assert!(s.kernel.is_empty());
        let a = mat(&[&[1, 1], &[1, 1]]);
        let inconsistent = solve_linear(&a, &[TowerElem::one(), TowerElem::from_int(2)]).unwrap();
        assert!(inconsistent.is_none());
    }

    #[test]
    fn determinant_with_pivoting() {
        let a = mat(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 4]]);
        assert_eq!(a.det().unwrap(), TowerElem::from_int(-7));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
    }

    #[test]
    fn symbolic_determinant() {
        let t = TowerElem::param("t");
        let one = TowerElem::one();
        let m = Matrix::from_rows(vec![vec![t.clone(), one.clone()], vec![one.clone(), t.clone()]]);
        assert_eq!(m.det().unwrap(), &(&t * &t) - &one);
    }

    fn int_matrix(n: usize, m: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec(-3i64..=3, n * m).prop_map(move |v| {
            Matrix::from_rows(v.chunks(m).map(|r| r.iter().map(|&x| TowerElem::from_int(x)).collect()).collect())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn rank_nullity(a in int_matrix(3, 5)) {
            let k = kernel_basis(&a).unwrap();
            prop_assert_eq!(a.rank().unwrap() + k.len(), 5);
            for v in &k {
                prop_assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn sparse_kernel_agrees(a in int_matrix(4, 6)) {
            let k = kernel_basis_sparse(&a).unwrap();
            prop_assert_eq!(k.len(), kernel_basis(&a).unwrap().len());
            for v in &k {
                prop_assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
            }
            let rows = Matrix::from_rows(k.clone());
            if !k.is_empty() {
                prop_assert_eq!(rows.rank().unwrap(), k.len());
            }
        }

        #[test]
        fn particular_solutions_solve(a in int_matrix(4, 3), b in proptest::collection::vec(-4i64..=4, 4)) {
            let b: Vec<TowerElem> = b.into_iter().map(TowerElem::from_int).collect();
            if let Some(s) = solve_linear(&a, &b).unwrap() {
                prop_assert_eq!(a.mul_vec(&s.particular), b);
                for v in &s.kernel {
                    prop_assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
                }
            }
        }

        #[test]
        fn det_is_multiplicative(a in int_matrix(3, 3), b in int_matrix(3, 3)) {
            prop_assert_eq!(a.mul(&b).det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }
    }
}
