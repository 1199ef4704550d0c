//! The affine Grassmann code C^A(l, m): parameters, the minor basis of the
//! evaluated function space, point indexing, generator matrix, encoding,
//! and a membership oracle.
//!
//! Coordinates are labeled by the l x lp matrices over GF(q). A point's
//! index is its base-q digit expansion in row-major entry order with the
//! (0,0) entry least significant, so translations act by digit-wise field
//! addition on indices.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::falinalg::Matrix;
use crate::gf::{FieldElement, FieldSpec};

/// Generator matrices larger than this many entries must be streamed
/// column-by-column instead (`minor_evaluations_at`).
pub const GENERATOR_BUDGET: u128 = 1 << 24;

/// Ceiling for exhaustive scans that enumerate all q^k codewords.
pub const BRUTE_FORCE_BUDGET: u128 = 1_000_000;

/// Row set I and column set J (0-based, |I| = |J|) naming the minor X_{I,J}.
/// The empty minor is the constant function 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorIndex {
    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

/// A length-n coordinate vector indexed by point index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub coords: Vec<FieldElement>,
}

impl Word {
    pub fn zero(n: usize) -> Word {
        Word {
            coords: vec![FieldElement::ZERO; n],
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).count()
    }

    /// Support as sorted point indices.
    pub fn support(&self) -> Vec<u64> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i as u64)
            .collect()
    }

    /// One character per coordinate: `0-9` then `a-z` (fields up to q = 36).
    pub fn to_digit_string(&self) -> Result<String> {
        self.coords
            .iter()
            .map(|c| digit_char(c.index()))
            .collect::<Result<String>>()
    }

    pub fn from_digit_string(spec: &FieldSpec, s: &str) -> Result<Word> {
        let coords = s
            .chars()
            .map(|ch| {
                let v = digit_value(ch)?;
                spec.element(v)
                    .map_err(|_| Error::Parse(format!("digit '{ch}' >= q = {}", spec.q())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { coords })
    }
}

pub(crate) fn digit_char(v: usize) -> Result<char> {
    match v {
        0..=9 => Ok((b'0' + v as u8) as char),
        10..=35 => Ok((b'a' + (v - 10) as u8) as char),
        _ => Err(Error::Unsupported(format!(
            "digit-string serialization needs q <= 36, element index {v}"
        ))),
    }
}

pub(crate) fn digit_value(ch: char) -> Result<u64> {
    match ch {
        '0'..='9' => Ok(ch as u64 - '0' as u64),
        'a'..='z' => Ok(ch as u64 - 'a' as u64 + 10),
        _ => Err(Error::Parse(format!("invalid word digit '{ch}'"))),
    }
}

/// Parameters of C^A(l, m) over GF(q), plus the ordered minor basis.
#[derive(Debug)]
pub struct CodeParams {
    spec: Arc<FieldSpec>,
    l: usize,
    lp: usize,
    m: usize,
    delta: usize,
    n: u64,
    k: usize,
    d: u64,
    d_dual: u64,
    minors: Vec<MinorIndex>,
    generator: OnceLock<Matrix>,
}

impl CodeParams {
    /// Derives every parameter from (q, l, lp). The dimension is computed
    /// both as binomial(m, l) and as the number of enumerated minors, and
    /// the two must agree.
    pub fn new(spec: Arc<FieldSpec>, l: usize, lp: usize) -> Result<CodeParams> {
        if l < 1 || l > lp {
            return Err(Error::BadShape { l, lp });
        }
        if spec.q() < 3 {
            return Err(Error::FieldTooSmall(spec.q()));
        }
        let m = l + lp;
        let delta = l * lp;
        let q = spec.q() as u128;
        let n = q.checked_pow(delta as u32).ok_or(Error::TooLarge {
            what: "code length q^delta",
            size: u128::MAX,
            limit: u64::MAX as u128,
        })?;
        if n > u64::MAX as u128 {
            return Err(Error::TooLarge {
                what: "code length q^delta",
                size: n,
                limit: u64::MAX as u128,
            });
        }
        let k = binomial(m, l);
        let minors = enumerate_minors(l, lp);
        assert_eq!(
            minors.len() as u128,
            k,
            "minor count must equal binomial(m, l)"
        );
        // d = q^(delta - l^2) * prod_{i<l} (q^l - q^i); always <= n.
        let mut d = q.pow((delta - l * l) as u32);
        for i in 0..l {
            d *= q.pow(l as u32) - q.pow(i as u32);
        }
        Ok(CodeParams {
            spec,
            l,
            lp,
            m,
            delta,
            n: n as u64,
            k: k as usize,
            d: d as u64,
            d_dual: 3,
            minors,
            generator: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn q(&self) -> u64 {
        self.spec.q()
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn lp(&self) -> usize {
        self.lp
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Minimum distance, closed form.
    pub fn d(&self) -> u64 {
        self.d
    }

    /// Dual minimum distance (3 for every q >= 3).
    pub fn d_dual(&self) -> u64 {
        self.d_dual
    }

    /// Minor basis in enumeration order: ascending size, then lexicographic
    /// on (I, J); position 0 is the empty minor.
    pub fn minors(&self) -> &[MinorIndex] {
        &self.minors
    }

    /// Point with every entry zero, i.e. the point of index 0.
    pub fn zero_point(&self) -> Matrix {
        Matrix::zeros(self.spec.clone(), self.l, self.lp)
    }

    fn check_point_shape(&self, p: &Matrix) -> Result<()> {
        if !p.spec().compatible(&self.spec) {
            return Err(Error::FieldMismatch);
        }
        if p.rows() != self.l || p.cols() != self.lp {
            return Err(Error::DimensionMismatch(format!(
                "point must be {}x{}, got {}x{}",
                self.l,
                self.lp,
                p.rows(),
                p.cols()
            )));
        }
        Ok(())
    }

    /// Index of a coordinate point: base-q digits are the canonical entry
    /// indices in row-major order, entry (0,0) least significant.
    pub fn point_index(&self, p: &Matrix) -> Result<u64> {
        self.check_point_shape(p)?;
        let q = self.q();
        let mut index = 0u64;
        for e in p.entries().iter().rev() {
            index = index * q + e.index() as u64;
        }
        Ok(index)
    }

    pub fn point_from_index(&self, index: u64) -> Result<Matrix> {
        if index >= self.n {
            return Err(Error::IndexOutOfRange {
                index,
                limit: self.n,
            });
        }
        let q = self.q();
        let mut m = self.zero_point();
        let mut rest = index;
        for j in 0..self.delta {
            let digit = rest % q;
            rest /= q;
            m.set(j / self.lp, j % self.lp, self.spec.element(digit)?);
        }
        Ok(m)
    }

    /// Index of the sum of two points, by digit-wise field addition; this is
    /// the translation action on coordinates.
    pub fn translate_index(&self, a: u64, b: u64) -> u64 {
        let q = self.q();
        let f = &self.spec;
        let mut out = 0u64;
        let mut pow = 1u64;
        let (mut x, mut y) = (a, b);
        for _ in 0..self.delta {
            let da = f.element(x % q).expect("digit < q");
            let db = f.element(y % q).expect("digit < q");
            out += f.add(da, db).index() as u64 * pow;
            x /= q;
            y /= q;
            if x == 0 && y == 0 {
                break;
            }
            pow *= q;
        }
        out
    }

    fn check_minor(&self, idx: &MinorIndex) -> Result<()> {
        let ok = idx.rows.len() == idx.cols.len()
            && idx.rows.windows(2).all(|w| w[0] < w[1])
            && idx.cols.windows(2).all(|w| w[0] < w[1])
            && idx.rows.iter().all(|&r| r < self.l)
            && idx.cols.iter().all(|&c| c < self.lp);
        if ok {
            Ok(())
        } else {
            Err(Error::BadIndex(format!("{idx:?} invalid for {}x{}", self.l, self.lp)))
        }
    }

    /// Determinant of the |I| x |I| submatrix of P on rows I, columns J;
    /// the empty minor evaluates to 1 everywhere.
    pub fn evaluate_minor(&self, idx: &MinorIndex, p: &Matrix) -> Result<FieldElement> {
        self.check_minor(idx)?;
        self.check_point_shape(p)?;
        let size = idx.size();
        let mut sub = Matrix::zeros(self.spec.clone(), size, size);
        for (a, &r) in idx.rows.iter().enumerate() {
            for (b, &c) in idx.cols.iter().enumerate() {
                sub.set(a, b, p.get(r, c));
            }
        }
        sub.det()
    }

    /// All k minors evaluated at one point: the point's generator-matrix
    /// column, available without materializing the whole matrix.
    pub fn minor_evaluations_at(&self, p: &Matrix) -> Result<Vec<FieldElement>> {
        self.minors
            .iter()
            .map(|idx| self.evaluate_minor(idx, p))
            .collect()
    }

    /// k x n generator matrix; rows follow minor order, columns follow point
    /// order. Fails with `TooLarge` beyond the in-memory budget.
    pub fn generator_matrix(&self) -> Result<&Matrix> {
        let size = self.k as u128 * self.n as u128;
        if size > GENERATOR_BUDGET {
            return Err(Error::TooLarge {
                what: "generator matrix entries",
                size,
                limit: GENERATOR_BUDGET,
            });
        }
        Ok(self.generator.get_or_init(|| {
            let mut g = Matrix::zeros(self.spec.clone(), self.k, self.n as usize);
            for j in 0..self.n {
                let p = self.point_from_index(j).expect("j < n");
                let col = self.minor_evaluations_at(&p).expect("valid minors");
                for (i, v) in col.into_iter().enumerate() {
                    g.set(i, j as usize, v);
                }
            }
            g
        }))
    }

    /// Evaluation codeword of f = sum message_i * minor_i.
    pub fn encode(&self, message: &[FieldElement]) -> Result<Word> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: message.len(),
            });
        }
        let f = &self.spec;
        if let Ok(g) = self.generator_matrix() {
            let mut coords = vec![FieldElement::ZERO; self.n as usize];
            for (i, &mi) in message.iter().enumerate() {
                if mi.is_zero() {
                    continue;
                }
                for (slot, &gij) in coords.iter_mut().zip(g.row(i)) {
                    *slot = f.add(*slot, f.mul(mi, gij));
                }
            }
            return Ok(Word { coords });
        }
        // Streamed evaluation for lengths beyond the matrix budget.
        let mut coords = Vec::with_capacity(self.n as usize);
        for j in 0..self.n {
            let p = self.point_from_index(j)?;
            let col = self.minor_evaluations_at(&p)?;
            let v = message
                .iter()
                .zip(&col)
                .fold(FieldElement::ZERO, |acc, (&m, &c)| f.add(acc, f.mul(m, c)));
            coords.push(v);
        }
        Ok(Word { coords })
    }

    /// Membership test: w lies in the row space of the generator matrix.
    pub fn is_codeword(&self, w: &Word) -> Result<bool> {
        if w.len() != self.n as usize {
            return Err(Error::LengthMismatch {
                expected: self.n as usize,
                got: w.len(),
            });
        }
        let g = self.generator_matrix()?;
        let mut rows: Vec<Vec<FieldElement>> = (0..self.k).map(|i| g.row(i).to_vec()).collect();
        rows.push(w.coords.clone());
        let stacked = Matrix::from_rows(self.spec.clone(), rows)?;
        Ok(stacked.rank() == self.k)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut out = 1u128;
    for i in 0..k.min(n - k) {
        out = out.checked_mul((n - i) as u128).expect("overflow");
        out /= (i + 1) as u128;
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
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
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// All (I, J) with I in [l], J in [lp], |I| = |J|, ordered by ascending size
/// and then lexicographically on (I, J). Recursive subset generation emits
/// subsets in lexicographic order already.
fn enumerate_minors(l: usize, lp: usize) -> Vec<MinorIndex> {
    let mut out = Vec::new();
    for t in 0..=l {
        for rows in subsets(l, t) {
            for cols in subsets(lp, t) {
                out.push(MinorIndex {
                    rows: rows.clone(),
                    cols,
                });
            }
        }
    }
    out
}
