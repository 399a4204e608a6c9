//! Dense matrices over F_q and exact Gaussian elimination.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldEmbedding};
use crate::poly::{self, Poly};

pub type Vector = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct FqMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FqMatrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        write!(f, "{}", self.to_text())
    }
}

impl FqMatrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> FqMatrix {
        FqMatrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> FqMatrix {
        let mut m = FqMatrix::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: &Field, cols: usize, rows: &[Vector]) -> FqMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend_from_slice(r);
        }
        FqMatrix { field: field.clone(), rows: rows.len(), cols, data }
    }

    /// Builds from integer entries reduced into the prime subfield.
    pub fn from_ints(field: &Field, rows: &[Vec<i64>]) -> FqMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let conv: Vec<Vector> = rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect();
        FqMatrix::from_rows(field, cols, &conv)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let f = &self.field;
        let mut out = FqMatrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    if b != 0 {
                        *o = f.mul_add(a, b, *o);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.add(a, b)).collect();
        FqMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.field.sub(a, b)).collect();
        FqMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u32) -> FqMatrix {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        FqMatrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u32]) -> Vector {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(
                    0,
                    |acc, (&a, &b)| {
                        if a == 0 || b == 0 {
                            acc
                        } else {
                            f.mul_add(a, b, acc)
                        }
                    },
                )
            })
            .collect()
    }

    /// `v · self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[u32]) -> Vector {
        assert_eq!(v.len(), self.rows);
        let f = &self.field;
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(i)) {
                if b != 0 {
                    *o = f.mul_add(a, b, *o);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> u32 {
        assert!(self.is_square());
        (0..self.rows).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FqMatrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form, rank and pivot columns.
    pub fn rref(&self) -> (FqMatrix, usize, Vec<usize>) {
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        let rank = pivots.len();
        (r, rank, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..cols {
            if lead == rows {
                break;
            }
            let Some(pr) = (lead..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != lead {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, lead * cols + j);
                }
            }
            let inv = f.inv(self.data[lead * cols + c]).unwrap();
            for j in c..cols {
                let x = self.data[lead * cols + j];
                self.data[lead * cols + j] = f.mul(x, inv);
            }
            let (before, rest) = self.data.split_at_mut(lead * cols);
            let (prow, after) = rest.split_at_mut(cols);
            for other in before.chunks_mut(cols).chain(after.chunks_mut(cols)) {
                let factor = other[c];
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..cols {
                    if prow[j] != 0 {
                        other[j] = f.mul_add(neg, prow[j], other[j]);
                    }
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Rows form a basis of the right null space {v : self · v = 0}.
    pub fn kernel_basis(&self) -> FqMatrix {
        let (r, _, pivots) = self.rref();
        let f = &self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        FqMatrix::from_rows(f, self.cols, &basis)
    }

    /// Basis of the row space, in reduced echelon form.
    pub fn row_space(&self) -> FqMatrix {
        let (r, rank, _) = self.rref();
        FqMatrix { field: self.field.clone(), rows: rank, cols: self.cols, data: r.data[..rank * self.cols].to_vec() }
    }

    /// Some `x` with `self · x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {} but matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = FqMatrix::zero(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            aug.data[i * (self.cols + 1)..i * (self.cols + 1) + self.cols].copy_from_slice(self.row(i));
            aug.data[i * (self.cols + 1) + self.cols] = b[i];
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols);
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<FqMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = FqMatrix::zero(&self.field, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FqMatrix::zero(&self.field, n, n);
        for i in 0..n {
            inv.data[i * n..(i + 1) * n].copy_from_slice(&aug.data[i * 2 * n + n..(i + 1) * 2 * n]);
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Characteristic polynomial det(xI - A) via similarity reduction to
    /// upper Hessenberg form.
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square());
        let f = self.field.clone();
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(i) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
                continue;
            };
            if i != j + 1 {
                for c in 0..n {
                    h.data.swap(i * n + c, (j + 1) * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + j + 1);
                }
            }
            let t_inv = f.inv(h.get(j + 1, j)).unwrap();
            for k in j + 2..n {
                let u = f.mul(h.get(k, j), t_inv);
                if u == 0 {
                    continue;
                }
                let nu = f.neg(u);
                for c in 0..n {
                    let v = h.get(j + 1, c);
                    if v != 0 {
                        h.data[k * n + c] = f.mul_add(nu, v, h.data[k * n + c]);
                    }
                }
                for r in 0..n {
                    let v = h.get(r, k);
                    if v != 0 {
                        h.data[r * n + j + 1] = f.mul_add(u, v, h.data[r * n + j + 1]);
                    }
                }
            }
        }
        // 1-based recurrence on the Hessenberg matrix
        let e = |a: usize, b: usize| h.get(a - 1, b - 1);
        let mut ps: Vec<Poly> = vec![vec![1]];
        for m in 1..=n {
            let mut pm = poly::mul(&f, &[f.neg(e(m, m)), 1], &ps[m - 1]);
            let mut t = 1u32;
            for i in 1..m {
                t = f.mul(t, e(m - i + 1, m - i));
                if t == 0 {
                    break;
                }
                let c = f.mul(t, e(m - i, m));
                if c != 0 {
                    pm = poly::sub(&f, &pm, &poly::scale(&f, &ps[m - i - 1], c));
                }
            }
            ps.push(pm);
        }
        ps.pop().unwrap()
    }

    /// Evaluates a polynomial at this square matrix.
    pub fn eval_poly(&self, p: &[u32]) -> FqMatrix {
        let n = self.rows;
        let mut acc = FqMatrix::zero(&self.field, n, n);
        for &c in p.iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                acc.data[i * n + i] = self.field.add(acc.data[i * n + i], c);
            }
        }
        acc
    }

    /// Entrywise image under a field embedding.
    pub fn embed(&self, emb: &FieldEmbedding) -> Result<FqMatrix> {
        if emb.small() != &self.field {
            return Err(Error::FieldMismatch("embedding source differs from matrix field".into()));
        }
        Ok(FqMatrix {
            field: emb.big().clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| emb.map(x)).collect(),
        })
    }

    /// Rows of space-separated scalar tokens.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let toks: Vec<String> = self.row(i).iter().map(|&x| self.field.format_elem(x)).collect();
            s.push_str(&toks.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(field: &Field, text: &str) -> Result<FqMatrix> {
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let row = line.split_whitespace().map(|t| field.parse_elem(t)).collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(FqMatrix::from_rows(field, cols, &rows))
    }
}

/// Incrementally maintained echelon basis of a subspace of F_q^n.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Field,
    dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: &Field, dim: usize) -> EchelonBasis {
        EchelonBasis { field: field.clone(), dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[u32]) -> Vector {
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c == 0 {
                continue;
            }
            let nc = f.neg(c);
            for (x, &r) in v.iter_mut().zip(row) {
                if r != 0 {
                    *x = f.mul_add(nc, r, *x);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` if it is independent; returns the normalized new row.
    pub fn insert(&mut self, v: &[u32]) -> Option<Vector> {
        let mut r = self.reduce(v);
        let p = r.iter().position(|&x| x != 0)?;
        let inv = self.field.inv(r[p]).unwrap();
        for x in r.iter_mut() {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push(r.clone());
        self.pivots.push(p);
        Some(r)
    }

    pub fn to_matrix(&self) -> FqMatrix {
        FqMatrix::from_rows(&self.field, self.dim, &self.rows).row_space()
    }

    /// Basis rows in insertion order.
    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Coefficients of `v` against the stored rows, if `v` lies in the span.
    pub fn coords(&self, v: &[u32]) -> Option<Vector> {
        let f = &self.field;
        let mut v = v.to_vec();
        let mut c = vec![0; self.rows.len()];
        for (i, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let a = v[p];
            if a == 0 {
                continue;
            }
            c[i] = a;
            let na = f.neg(a);
            for (x, &r) in v.iter_mut().zip(row) {
                if r != 0 {
                    *x = f.mul_add(na, r, *x);
                }
            }
        }
        v.iter().all(|&x| x == 0).then_some(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn all_vectors(q: u32, n: usize) -> Vec<Vector> {
        let total = q.pow(n as u32);
        (0..total)
            .map(|mut c| {
                (0..n)
                    .map(|_| {
                        let d = c % q;
                        c /= q;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn rref_examples() {
        let (r, rank, piv) = FqMatrix::identity(&f(2), 3).rref();
        assert_eq!(r, FqMatrix::identity(&f(2), 3));
        assert_eq!((rank, piv), (3, vec![0, 1, 2]));
        let z = FqMatrix::zero(&f(3), 2, 4);
        assert_eq!(z.rref().1, 0);
        assert_eq!(z.rref().0, z);
        // rank of [[1,1,0],[1,1,1]] over F_2: the row space has 4 elements
        let m = FqMatrix::from_ints(&f(2), &[vec![1, 1, 0], vec![1, 1, 1]]);
        let span: std::collections::BTreeSet<Vector> = all_vectors(2, 2).iter().map(|c| m.vec_mul(c)).collect();
        assert_eq!(span.len(), 4);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(FqMatrix::identity(&f(3), 4).kernel_basis().rows(), 0);
        assert_eq!(FqMatrix::zero(&f(2), 2, 3).kernel_basis().rows(), 3);
        let m = FqMatrix::from_ints(&f(5), &[vec![1, 2]]);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 1);
        let solutions: Vec<Vector> = all_vectors(5, 2).into_iter().filter(|v| m.mul_vec(v) == vec![0]).collect();
        assert_eq!(solutions.len(), 5);
        let kv = k.row(0).to_vec();
        for s in &solutions {
            assert!((0..5).any(|c| kv.iter().map(|&x| x * c % 5).collect::<Vec<_>>() == *s));
        }
    }

    #[test]
    fn solve_examples() {
        let id = FqMatrix::identity(&f(7), 3);
        assert_eq!(id.solve(&[1, 5, 6]).unwrap(), Some(vec![1, 5, 6]));
        let z = FqMatrix::zero(&f(3), 2, 2);
        assert_eq!(z.solve(&[1, 0]).unwrap(), None);
        assert!(z.solve(&[1]).is_err());
        let m = FqMatrix::from_ints(&f(3), &[vec![1, 2], vec![2, 2]]);
        let b = vec![1, 0];
        let brute: Vec<Vector> = all_vectors(3, 2).into_iter().filter(|x| m.mul_vec(x) == b).collect();
        assert_eq!(brute.len(), 1);
        assert_eq!(m.solve(&b).unwrap(), Some(brute[0].clone()));
    }

    #[test]
    fn charpoly_small() {
        // companion matrix of x^2 + x + 1 over F_2
        let c = FqMatrix::from_ints(&f(2), &[vec![0, 1], vec![1, 1]]);
        assert_eq!(c.charpoly(), vec![1, 1, 1]);
        // (x - 1)^3 = x^3 - 1 over F_3
        assert_eq!(FqMatrix::identity(&f(3), 3).charpoly(), vec![2, 0, 0, 1]);
    }

    fn arb_matrix(p: u32, max: usize) -> impl Strategy<Value = (usize, usize, Vec<u32>)> {
        (1..=max, 1..=max).prop_flat_map(move |(r, c)| (Just(r), Just(c), proptest::collection::vec(0..p, r * c)))
    }

    proptest! {
        #[test]
        fn rank_nullity((r, c, data) in arb_matrix(3, 6)) {
            let rows: Vec<Vector> = data.chunks(c).map(|x| x.to_vec()).collect();
            let m = FqMatrix::from_rows(&f(3), c, &rows);
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.rows(), c);
            for v in k.row_vecs() {
                prop_assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
            }
            prop_assert_eq!(k.rank(), k.rows());
            let _ = r;
        }

        #[test]
        fn rref_idempotent((_r, c, data) in arb_matrix(5, 5)) {
            let rows: Vec<Vector> = data.chunks(c).map(|x| x.to_vec()).collect();
            let m = FqMatrix::from_rows(&f(5), c, &rows);
            let (once, _, _) = m.rref();
            let (twice, _, _) = once.rref();
            prop_assert_eq!(once.clone(), twice);
            prop_assert_eq!(once.row_space(), m.row_space());
        }

        #[test]
        fn cayley_hamilton(n in 1usize..7, data in proptest::collection::vec(0u32..4, 36)) {
            let fld = Field::new(2, 2).unwrap();
            let rows: Vec<Vector> = (0..n).map(|i| data[i * 6..i * 6 + n].to_vec()).collect();
            let m = FqMatrix::from_rows(&fld, n, &rows);
            let cp = m.charpoly();
            prop_assert_eq!(cp.len(), n + 1);
            prop_assert!(m.eval_poly(&cp).is_zero());
        }

        #[test]
        fn inverse_roundtrip(n in 1usize..6, data in proptest::collection::vec(0u32..3, 25)) {
            let rows: Vec<Vector> = (0..n).map(|i| data[i * 5..i * 5 + n].to_vec()).collect();
            let m = FqMatrix::from_rows(&f(3), n, &rows);
            match m.inverse() {
                Some(inv) => prop_assert_eq!(m.mul(&inv), FqMatrix::identity(&f(3), n)),
                None => prop_assert!(m.rank() < n),
            }
        }
    }

    #[test]
    fn text_roundtrip() {
        let fld = Field::new(2, 2).unwrap();
        let m = FqMatrix::from_rows(&fld, 2, &[vec![1, 2], vec![3, 0]]);
        assert_eq!(m.to_text(), "1,0 0,1\n1,1 0,0\n");
        assert_eq!(FqMatrix::from_text(&fld, &m.to_text()).unwrap(), m);
    }

    #[test]
    fn echelon_basis() {
        let mut e = EchelonBasis::new(&f(2), 3);
        assert!(e.insert(&[1, 1, 0]).is_some());
        assert!(e.insert(&[0, 1, 1]).is_some());
        assert!(e.insert(&[1, 0, 1]).is_none());
        assert!(e.contains(&[1, 0, 1]));
        assert_eq!(e.to_matrix().rows(), 2);
    }
}
