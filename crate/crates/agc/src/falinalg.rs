//! Dense linear algebra over GF(q): elimination, rank, nullspace,
//! determinant, outer products, and the q-analog enumeration of subspaces
//! and their normalized ordered bases.
//!
//! Everything is exact. Subspaces are represented canonically by their
//! reduced-row-echelon bases, which makes every enumeration deterministic.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Dense row-major matrix over GF(q).
#[derive(Debug, Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
    spec: Arc<FieldSpec>,
}

/// Outcome of Gauss-Jordan elimination.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(spec: Arc<FieldSpec>, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
            spec,
        }
    }

    pub fn identity(spec: Arc<FieldSpec>, n: usize) -> Matrix {
        let mut m = Matrix::zeros(spec, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_rows(spec: Arc<FieldSpec>, rows: Vec<Vec<FieldElement>>) -> Result<Matrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged row lengths".into()));
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
            spec,
        })
    }

    /// Convenience constructor from canonical indices.
    pub fn from_indices(spec: Arc<FieldSpec>, rows: &[&[u64]]) -> Result<Matrix> {
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            out.push(
                r.iter()
                    .map(|&v| spec.element(v))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Matrix::from_rows(spec, out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.spec.compatible(&other.spec) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "add {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (o, &b) in out.data.iter_mut().zip(&other.data) {
            *o = self.spec.add(*o, b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(self.spec.neg(FieldElement::ONE)))
    }

    pub fn scale(&self, c: FieldElement) -> Matrix {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o = self.spec.mul(*o, c);
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.spec;
        let mut out = Matrix::zeros(self.spec.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.spec.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Reduced row-echelon form; row space is preserved.
    pub fn rref(&self) -> Rref {
        let f = self.spec.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if src != pivot_row {
                for c in 0..m.cols {
                    let (a, b) = (m.get(src, c), m.get(pivot_row, c));
                    m.set(src, c, b);
                    m.set(pivot_row, c, a);
                }
            }
            let inv = f.inv(m.get(pivot_row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                m.set(pivot_row, c, f.mul(m.get(pivot_row, c), inv));
            }
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(pivot_row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        Rref {
            matrix: m,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{ v : M v = 0 }`; every returned vector is re-checked by
    /// multiplication. Basis size is cols - rank.
    pub fn nullspace(&self) -> Vec<Vec<FieldElement>> {
        let f = &self.spec;
        let Rref {
            matrix: r,
            rank,
            pivots,
        } = self.rref();
        let mut basis = Vec::with_capacity(self.cols - rank);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        for &fc in &free {
            let mut v = vec![FieldElement::ZERO; self.cols];
            v[fc] = FieldElement::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, fc));
            }
            debug_assert!(self.apply(&v).iter().all(|e| e.is_zero()));
            assert!(
                self.apply(&v).iter().all(|e| e.is_zero()),
                "nullspace vector failed verification"
            );
            basis.push(v);
        }
        basis
    }

    /// M v for a column vector v of length cols.
    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        let f = &self.spec;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(FieldElement::ZERO, |acc, (&a, &b)| {
                        f.add(acc, f.mul(a, b))
                    })
            })
            .collect()
    }

    /// Determinant by elimination. The 0x0 determinant is 1.
    pub fn det(&self) -> Result<FieldElement> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let f = self.spec.clone();
        let n = self.rows;
        let mut m = self.clone();
        let mut det = FieldElement::ONE;
        for col in 0..n {
            let Some(src) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(FieldElement::ZERO);
            };
            if src != col {
                for c in 0..n {
                    let (a, b) = (m.get(src, c), m.get(col, c));
                    m.set(src, c, b);
                    m.set(col, c, a);
                }
                det = f.neg(det);
            }
            let pivot = m.get(col, col);
            det = f.mul(det, pivot);
            let inv = f.inv(pivot).expect("pivot is nonzero");
            for r in col + 1..n {
                let factor = f.mul(m.get(r, col), inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = f.sub(m.get(r, c), f.mul(factor, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.spec.clone(), n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, FieldElement::ONE);
        }
        let r = aug.rref();
        if r.rank < n || r.pivots.iter().take(n).copied().ne(0..n) {
            return Err(Error::NotInvertible);
        }
        let mut out = Matrix::zeros(self.spec.clone(), n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.matrix.get(i, n + j));
            }
        }
        Ok(out)
    }
}

/// x^T y for a length-l vector x and a length-lp vector y; rank <= 1.
pub fn outer(spec: &Arc<FieldSpec>, x: &[FieldElement], y: &[FieldElement]) -> Matrix {
    let mut m = Matrix::zeros(spec.clone(), x.len(), y.len());
    for (i, &xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            m.set(i, j, spec.mul(xi, yj));
        }
    }
    m
}

/// Ordered basis of an r-dimensional subspace of GF(q)^ambient,
/// stored as the rows of an r x ambient matrix of full row rank.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    vectors: Matrix,
}

impl SubspaceBasis {
    pub fn new(vectors: Matrix) -> Result<SubspaceBasis> {
        let r = vectors.rows();
        if vectors.rank() != r {
            return Err(Error::RankMismatch(format!(
                "basis rows are dependent: rank < {r}"
            )));
        }
        Ok(SubspaceBasis { vectors })
    }

    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn vector(&self, i: usize) -> &[FieldElement] {
        self.vectors.row(i)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.vectors
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        self.vectors.spec()
    }

    /// All q^r vectors of the subspace, in coefficient-counter order.
    pub fn span(&self) -> Vec<Vec<FieldElement>> {
        let f = self.spec().clone();
        let q = f.q();
        let r = self.dim();
        let n = self.ambient_dim();
        let total = (q as u128).pow(r as u32) as u64;
        let mut out = Vec::with_capacity(total as usize);
        for mut c in 0..total {
            let mut v = vec![FieldElement::ZERO; n];
            for i in 0..r {
                let coeff = f.element(c % q).expect("digit < q");
                c /= q;
                if coeff.is_zero() {
                    continue;
                }
                for (slot, &b) in v.iter_mut().zip(self.vector(i)) {
                    *slot = f.add(*slot, f.mul(coeff, b));
                }
            }
            out.push(v);
        }
        out
    }

    /// Every ordered basis of this subspace with each vector normalized so
    /// that its leading (first nonzero) coordinate is 1. Any two distinct
    /// results differ by a linearly independent pair at some position.
    pub fn normalized_ordered_bases(&self) -> Vec<SubspaceBasis> {
        let f = self.spec().clone();
        let r = self.dim();
        let normalized: Vec<Vec<FieldElement>> = self
            .span()
            .into_iter()
            .filter(|v| {
                v.iter()
                    .find(|e| !e.is_zero())
                    .is_some_and(|lead| *lead == FieldElement::ONE)
            })
            .collect();
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = Vec::with_capacity(r);
        collect_tuples(&f, &normalized, r, &mut chosen, &mut out);
        out
    }
}

fn collect_tuples(
    f: &Arc<FieldSpec>,
    pool: &[Vec<FieldElement>],
    r: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<SubspaceBasis>,
) {
    if chosen.len() == r {
        let rows: Vec<Vec<FieldElement>> = chosen.iter().map(|&i| pool[i].clone()).collect();
        let m = Matrix::from_rows(f.clone(), rows).expect("rectangular");
        out.push(SubspaceBasis::new(m).expect("independent by pruning"));
        return;
    }
    for i in 0..pool.len() {
        chosen.push(i);
        let rows: Vec<Vec<FieldElement>> = chosen.iter().map(|&j| pool[j].clone()).collect();
        let m = Matrix::from_rows(f.clone(), rows).expect("rectangular");
        if m.rank() == chosen.len() {
            collect_tuples(f, pool, r, chosen, out);
        }
        chosen.pop();
    }
}

/// One canonical (RREF-rows) basis per r-dimensional subspace of
/// GF(q)^ambient. The count equals the Gaussian binomial [ambient, r]_q.
pub fn enumerate_subspaces(
    spec: &Arc<FieldSpec>,
    ambient: usize,
    r: usize,
) -> Result<Vec<SubspaceBasis>> {
    if r > ambient {
        return Err(Error::DimensionMismatch(format!(
            "subspace dimension {r} exceeds ambient {ambient}"
        )));
    }
    if r == 0 {
        return Ok(vec![SubspaceBasis {
            vectors: Matrix::zeros(spec.clone(), 0, ambient),
        }]);
    }
    let q = spec.q();
    let mut out = Vec::new();
    for pivots in subsets(ambient, r) {
        // The RREF shape for this pivot set: row i has a 1 at pivots[i],
        // zeros at the other pivot columns, and free entries only to the
        // right of its pivot.
        let mut free_slots = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for c in p + 1..ambient {
                if !pivots.contains(&c) {
                    free_slots.push((i, c));
                }
            }
        }
        let combos = (q as u128).pow(free_slots.len() as u32);
        for mut v in 0..combos {
            let mut m = Matrix::zeros(spec.clone(), r, ambient);
            for (i, &p) in pivots.iter().enumerate() {
                m.set(i, p, FieldElement::ONE);
            }
            for &(i, c) in &free_slots {
                let digit = (v % q as u128) as u64;
                v /= q as u128;
                m.set(i, c, spec.element(digit)?);
            }
            out.push(SubspaceBasis { vectors: m });
        }
    }
    Ok(out)
}

/// Extends a basis to an invertible ambient x ambient matrix whose first
/// rows are the basis vectors, completing greedily with standard vectors.
pub fn complete_basis(basis: &SubspaceBasis) -> Matrix {
    let spec = basis.spec().clone();
    let n = basis.ambient_dim();
    let mut rows: Vec<Vec<FieldElement>> = (0..basis.dim())
        .map(|i| basis.vector(i).to_vec())
        .collect();
    for j in 0..n {
        if rows.len() == n {
            break;
        }
        let mut candidate = vec![FieldElement::ZERO; n];
        candidate[j] = FieldElement::ONE;
        let mut trial = rows.clone();
        trial.push(candidate.clone());
        let m = Matrix::from_rows(spec.clone(), trial).expect("rectangular");
        if m.rank() == rows.len() + 1 {
            rows.push(candidate);
        }
    }
    assert_eq!(rows.len(), n, "basis completion must reach full rank");
    Matrix::from_rows(spec, rows).expect("rectangular")
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Gaussian binomial [n, r]_q by the product formula; every division exact.
pub fn gaussian_binomial(q: u128, n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let mut out = 1u128;
    for i in 0..r {
        // (q^(n-i) - 1) / (q^(i+1) - 1) applied as a running product:
        // multiply numerator factors and divide exactly at each step.
        let num = q.checked_pow((n - i) as u32).expect("overflow") - 1;
        let den = q.checked_pow((i + 1) as u32).expect("overflow") - 1;
        out = out.checked_mul(num).expect("overflow");
        assert_eq!(out % den, 0, "Gaussian binomial division must be exact");
        out /= den;
    }
    out
}

/// Number of ordered bases of an r-space with leading coefficients
/// normalized to 1: prod_i (q^r - q^i) / (q - 1)^r, computed exactly.
pub fn normalized_basis_count(q: u128, r: usize) -> u128 {
    let mut out = 1u128;
    for i in 0..r {
        // q^r - q^i = q^i (q^(r-i) - 1) and (q^(r-i) - 1)/(q - 1) is the
        // geometric sum 1 + q + ... + q^(r-i-1).
        let mut geom = 0u128;
        for j in 0..r - i {
            geom += q.pow(j as u32);
        }
        out = out
            .checked_mul(q.pow(i as u32))
            .and_then(|v| v.checked_mul(geom))
            .expect("overflow");
    }
    out
}
