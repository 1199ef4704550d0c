//! Synthesis of the orthogonal parity-check family anchored at the zero
//! matrix, and its transport to any coordinate by the affine automorphisms
//! P -> B P A^-1 + u.
//!
//! For each rank r in 1..=l the construction runs over
//!   - column spaces V_r in GF(q)^l, one canonical (RREF) basis B each,
//!   - row spaces W_r in GF(q)^lp with every normalized ordered basis B',
//!   - coefficient tuples from the consecutive-power pair family,
//! and for every combination solves for the unique parity check supported
//! on { sum a_i x_i^T y_i } union {0}. The checks pairwise intersect only in
//! the anchor, and their number matches the closed-form count exactly.

use std::collections::HashMap;

use crate::agcode::{CodeParams, Word};
use crate::error::{Error, Result};
use crate::falinalg::{
    enumerate_subspaces, gaussian_binomial, normalized_basis_count, outer, Matrix, SubspaceBasis,
};
use crate::gf::{FieldElement, FieldSpec};

/// An r-tuple of two-element subsets of GF(q)*, each stored with the
/// smaller canonical index first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTuple {
    pairs: Vec<(FieldElement, FieldElement)>,
}

impl CoefficientTuple {
    pub fn new(pairs: Vec<(FieldElement, FieldElement)>) -> Result<CoefficientTuple> {
        for &(a, b) in &pairs {
            if a.is_zero() || b.is_zero() || a == b {
                return Err(Error::RankMismatch(format!(
                    "coefficient pair ({a}, {b}) must hold two distinct nonzero elements"
                )));
            }
        }
        let pairs = pairs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        Ok(CoefficientTuple { pairs })
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(FieldElement, FieldElement)] {
        &self.pairs
    }
}

/// Disjoint pairs {alpha^(2i-1), alpha^(2i)} for i = 1..=floor((q-1)/2).
/// For odd q they partition GF(q)*; for even q one element stays unused.
pub fn delta_pairs(spec: &FieldSpec) -> Vec<(FieldElement, FieldElement)> {
    let count = (spec.q() - 1) / 2;
    let mut out = Vec::with_capacity(count as usize);
    for i in 1..=count {
        let a = spec.pow(spec.alpha(), 2 * i - 1);
        let b = spec.pow(spec.alpha(), 2 * i);
        out.push(if a <= b { (a, b) } else { (b, a) });
    }
    out
}

/// All r-tuples over the pair family: floor((q-1)/2)^r tuples, any two of
/// which are slot-wise disjoint somewhere because the pairs themselves are
/// pairwise disjoint.
pub fn gqr_tuples(spec: &FieldSpec, r: usize) -> Vec<CoefficientTuple> {
    let delta = delta_pairs(spec);
    let mut out = Vec::new();
    let total = (delta.len() as u128).pow(r as u32);
    for mut v in 0..total {
        let mut pairs = Vec::with_capacity(r);
        for _ in 0..r {
            pairs.push(delta[(v % delta.len() as u128) as usize]);
            v /= delta.len() as u128;
        }
        out.push(CoefficientTuple { pairs });
    }
    out
}

/// The 2^r rank-r matrices sum a_i x_i^T y_i with a_i drawn from the tuple,
/// together with the bases and tuple that produced them.
#[derive(Debug, Clone)]
pub struct MSet {
    col_basis: SubspaceBasis,
    row_basis: SubspaceBasis,
    tuple: CoefficientTuple,
    members: Vec<Matrix>,
}

impl MSet {
    pub fn members(&self) -> &[Matrix] {
        &self.members
    }

    pub fn rank(&self) -> usize {
        self.tuple.rank()
    }

    pub fn col_basis(&self) -> &SubspaceBasis {
        &self.col_basis
    }

    pub fn row_basis(&self) -> &SubspaceBasis {
        &self.row_basis
    }

    pub fn tuple(&self) -> &CoefficientTuple {
        &self.tuple
    }
}

/// Builds M(B, B'; tuple). Every member has column space spanned by the
/// first basis and row space spanned by the second.
pub fn mset(
    col_basis: &SubspaceBasis,
    row_basis: &SubspaceBasis,
    tuple: &CoefficientTuple,
) -> Result<MSet> {
    let r = tuple.rank();
    if col_basis.dim() != r || row_basis.dim() != r {
        return Err(Error::RankMismatch(format!(
            "bases of dimension {} and {} cannot carry an r = {r} tuple",
            col_basis.dim(),
            row_basis.dim()
        )));
    }
    if !col_basis.spec().compatible(row_basis.spec()) {
        return Err(Error::FieldMismatch);
    }
    let spec = col_basis.spec().clone();
    let mut members = Vec::with_capacity(1 << r);
    for choice in 0u32..1 << r {
        let mut m = Matrix::zeros(spec.clone(), col_basis.ambient_dim(), row_basis.ambient_dim());
        for i in 0..r {
            let (lo, hi) = tuple.pairs()[i];
            let a = if choice >> i & 1 == 0 { lo } else { hi };
            let term = outer(&spec, col_basis.vector(i), row_basis.vector(i)).scale(a);
            m = m.add(&term)?;
        }
        if m.rank() != r {
            return Err(Error::RankMismatch(format!(
                "member has rank {} instead of {r}",
                m.rank()
            )));
        }
        members.push(m);
    }
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if members[i].entries() == members[j].entries() {
                return Err(Error::RankMismatch("duplicate members".into()));
            }
        }
    }
    Ok(MSet {
        col_basis: col_basis.clone(),
        row_basis: row_basis.clone(),
        tuple: tuple.clone(),
        members,
    })
}

/// A dual-code vector stored sparsely: (point index, nonzero coefficient)
/// pairs in ascending index order. `anchor` lies in the support with
/// coefficient 1; `rank` is the rank of the supporting matrices relative to
/// the anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseParityCheck {
    anchor: u64,
    entries: Vec<(u64, FieldElement)>,
    rank: usize,
}

impl SparseParityCheck {
    pub fn anchor(&self) -> u64 {
        self.anchor
    }

    pub fn entries(&self) -> &[(u64, FieldElement)] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Support size.
    pub fn weight(&self) -> usize {
        self.entries.len()
    }

    pub fn coefficient_at(&self, index: u64) -> Option<FieldElement> {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .ok()
            .map(|pos| self.entries[pos].1)
    }

    /// Inner product with a full-length word.
    pub fn dot(&self, spec: &FieldSpec, word: &Word) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for &(idx, coef) in &self.entries {
            acc = spec.add(acc, spec.mul(coef, word.coords[idx as usize]));
        }
        acc
    }

    pub(crate) fn from_parts(
        anchor: u64,
        mut entries: Vec<(u64, FieldElement)>,
        rank: usize,
    ) -> SparseParityCheck {
        entries.sort_by_key(|&(i, _)| i);
        SparseParityCheck {
            anchor,
            entries,
            rank,
        }
    }
}

/// Restricts the code to D = members union {0}, solves the one-dimensional
/// dual of the restriction, normalizes the coefficient at the zero matrix
/// to 1, and lifts the result to a sparse check of the full code.
///
/// The evaluation matrix must have rank exactly 2^r and the anchor
/// coefficient must be nonzero before normalization; violations signal an
/// internal error, not an expected input.
pub fn local_check(params: &CodeParams, set: &MSet) -> Result<SparseParityCheck> {
    let spec = params.spec().clone();
    let r = set.rank();

    let mut indexed: Vec<(u64, &Matrix)> = Vec::with_capacity(set.members().len() + 1);
    let zero = params.zero_point();
    indexed.push((0, &zero));
    for m in set.members() {
        let idx = params.point_index(m)?;
        debug_assert_ne!(idx, 0, "members have rank >= 1");
        indexed.push((idx, m));
    }
    indexed.sort_by_key(|&(i, _)| i);

    // k x (2^r + 1) evaluation matrix: rows are minors, columns the points
    // of D in ascending index order.
    let cols: Vec<Vec<FieldElement>> = indexed
        .iter()
        .map(|&(_, p)| params.minor_evaluations_at(p))
        .collect::<Result<_>>()?;
    let mut eval = Matrix::zeros(spec.clone(), params.k(), indexed.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            eval.set(i, j, v);
        }
    }

    let expected_rank = 1 << r;
    let got = eval.rank();
    if got != expected_rank {
        return Err(Error::DegenerateRestriction {
            got,
            expected: expected_rank,
        });
    }
    let nullspace = eval.nullspace();
    debug_assert_eq!(nullspace.len(), 1);
    let v = &nullspace[0];

    let anchor_pos = indexed.iter().position(|&(i, _)| i == 0).expect("0 in D");
    let at_anchor = v[anchor_pos];
    if at_anchor.is_zero() {
        return Err(Error::AnchorMissing);
    }
    let scale = spec.inv(at_anchor)?;
    let entries: Vec<(u64, FieldElement)> = indexed
        .iter()
        .zip(v)
        .filter(|(_, &c)| !c.is_zero())
        .map(|(&(idx, _), &c)| (idx, spec.mul(c, scale)))
        .collect();
    Ok(SparseParityCheck::from_parts(0, entries, r))
}

/// J parity checks orthogonal on one coordinate: all carry coefficient 1 at
/// the anchor and any two supports intersect exactly in the anchor.
#[derive(Debug, Clone)]
pub struct OrthogonalCheckSet {
    anchor: u64,
    checks: Vec<SparseParityCheck>,
}

impl OrthogonalCheckSet {
    pub fn anchor(&self) -> u64 {
        self.anchor
    }

    pub fn checks(&self) -> &[SparseParityCheck] {
        &self.checks
    }

    /// J, the number of checks.
    pub fn j(&self) -> usize {
        self.checks.len()
    }

    pub(crate) fn from_parts(
        anchor: u64,
        checks: Vec<SparseParityCheck>,
    ) -> OrthogonalCheckSet {
        OrthogonalCheckSet { anchor, checks }
    }

    /// Re-verifies the orthogonality contract: coefficient 1 at the anchor
    /// in every check, and no non-anchor point shared by two supports.
    pub fn verify_orthogonal(&self) -> Result<()> {
        let mut seen: HashMap<u64, usize> = HashMap::new();
        for (ci, check) in self.checks.iter().enumerate() {
            if check.anchor() != self.anchor {
                return Err(Error::RankMismatch(format!(
                    "check {ci} is anchored at {} instead of {}",
                    check.anchor(),
                    self.anchor
                )));
            }
            match check.coefficient_at(self.anchor) {
                Some(c) if c == FieldElement::ONE => {}
                _ => return Err(Error::AnchorMissing),
            }
            for &(idx, coef) in check.entries() {
                if coef.is_zero() {
                    return Err(Error::Parse(format!("zero coefficient stored at {idx}")));
                }
                if idx == self.anchor {
                    continue;
                }
                if seen.insert(idx, ci).is_some() {
                    return Err(Error::OverlapDetected(idx));
                }
            }
        }
        Ok(())
    }

    /// All non-anchor support indices across the set, unsorted.
    pub fn covered_indices(&self) -> Vec<u64> {
        self.checks
            .iter()
            .flat_map(|c| c.entries().iter().map(|&(i, _)| i))
            .filter(|&i| i != self.anchor)
            .collect()
    }
}

/// Per-rank term of the closed-form check count: all divisions are exact
/// because the term factors as pairs^r * [l, r]_q * [lp, r]_q * (number of
/// normalized ordered bases of an r-space).
pub fn eq3_summand(params: &CodeParams, r: usize) -> u128 {
    let q = params.q() as u128;
    let pairs = (q - 1) / 2;
    pairs.pow(r as u32)
        * gaussian_binomial(q, params.l(), r)
        * gaussian_binomial(q, params.lp(), r)
        * normalized_basis_count(q, r)
}

/// Closed-form size of the orthogonal check family (summed over r = 1..=l).
pub fn eq3_count(params: &CodeParams) -> u128 {
    (1..=params.l()).map(|r| eq3_summand(params, r)).sum()
}

/// Constructs the full orthogonal family anchored at the zero matrix and
/// verifies support disjointness and the closed-form count.
pub fn build_orthogonal_set(params: &CodeParams) -> Result<OrthogonalCheckSet> {
    let spec = params.spec();
    let mut checks = Vec::new();
    for r in 1..=params.l() {
        let tuples = gqr_tuples(spec, r);
        let col_spaces = enumerate_subspaces(spec, params.l(), r)?;
        let row_spaces = enumerate_subspaces(spec, params.lp(), r)?;
        for col_space in &col_spaces {
            for row_space in &row_spaces {
                for row_basis in row_space.normalized_ordered_bases() {
                    for tuple in &tuples {
                        let family = mset(col_space, &row_basis, tuple)?;
                        checks.push(local_check(params, &family)?);
                    }
                }
            }
        }
    }
    let expected = eq3_count(params);
    if checks.len() as u128 != expected {
        return Err(Error::RankMismatch(format!(
            "constructed {} checks, closed form gives {expected}",
            checks.len()
        )));
    }
    checks.sort_by_key(|c| {
        let min_support = c
            .entries()
            .iter()
            .map(|&(i, _)| i)
            .find(|&i| i != 0)
            .unwrap_or(u64::MAX);
        (c.rank(), min_support)
    });
    let set = OrthogonalCheckSet { anchor: 0, checks };
    set.verify_orthogonal()?;
    Ok(set)
}

/// Coordinate permutation induced by P -> B P A^-1 + u.
#[derive(Debug, Clone)]
pub struct AffineAutomorphism {
    u: Matrix,
    a: Matrix,
    b: Matrix,
    a_inv: Matrix,
}

impl AffineAutomorphism {
    pub fn new(u: Matrix, a: Matrix, b: Matrix) -> Result<AffineAutomorphism> {
        if !u.spec().compatible(a.spec()) || !u.spec().compatible(b.spec()) {
            return Err(Error::FieldMismatch);
        }
        if a.rows() != u.cols() || a.cols() != u.cols() {
            return Err(Error::DimensionMismatch(format!(
                "A must be {0}x{0}",
                u.cols()
            )));
        }
        if b.rows() != u.rows() || b.cols() != u.rows() {
            return Err(Error::DimensionMismatch(format!(
                "B must be {0}x{0}",
                u.rows()
            )));
        }
        let a_inv = a.inverse()?;
        b.inverse()?;
        Ok(AffineAutomorphism { u, a, b, a_inv })
    }

    pub fn identity(params: &CodeParams) -> AffineAutomorphism {
        let spec = params.spec().clone();
        AffineAutomorphism {
            u: params.zero_point(),
            a: Matrix::identity(spec.clone(), params.lp()),
            b: Matrix::identity(spec.clone(), params.l()),
            a_inv: Matrix::identity(spec, params.lp()),
        }
    }

    pub fn translation(params: &CodeParams, u: Matrix) -> Result<AffineAutomorphism> {
        let spec = params.spec().clone();
        AffineAutomorphism::new(
            u,
            Matrix::identity(spec.clone(), params.lp()),
            Matrix::identity(spec, params.l()),
        )
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    /// B P A^-1 + u.
    pub fn map_point(&self, p: &Matrix) -> Result<Matrix> {
        self.b.mul(p)?.mul(&self.a_inv)?.add(&self.u)
    }
}

/// Moves the value at coordinate P to coordinate B P A^-1 + u. Codewords map
/// to codewords.
pub fn apply_to_word(params: &CodeParams, word: &Word, aut: &AffineAutomorphism) -> Result<Word> {
    if word.len() != params.n() as usize {
        return Err(Error::LengthMismatch {
            expected: params.n() as usize,
            got: word.len(),
        });
    }
    let mut out = Word::zero(word.len());
    for i in 0..params.n() {
        let p = params.point_from_index(i)?;
        let image = params.point_index(&aut.map_point(&p)?)?;
        out.coords[image as usize] = word.coords[i as usize];
    }
    Ok(out)
}

/// Same permutation applied to a sparse check; dual membership is preserved.
pub fn apply_to_check(
    params: &CodeParams,
    check: &SparseParityCheck,
    aut: &AffineAutomorphism,
) -> Result<SparseParityCheck> {
    let mut entries = Vec::with_capacity(check.weight());
    for &(idx, coef) in check.entries() {
        let p = params.point_from_index(idx)?;
        entries.push((params.point_index(&aut.map_point(&p)?)?, coef));
    }
    let anchor_point = params.point_from_index(check.anchor())?;
    let anchor = params.point_index(&aut.map_point(&anchor_point)?)?;
    Ok(SparseParityCheck::from_parts(anchor, entries, check.rank()))
}

/// Translates a check set rigidly so that its anchor lands on P: supports
/// shift by u = P - anchor, coefficients are unchanged, orthogonality is
/// preserved.
pub fn transport_to(
    params: &CodeParams,
    set: &OrthogonalCheckSet,
    target: &Matrix,
) -> Result<OrthogonalCheckSet> {
    let anchor_point = params.point_from_index(set.anchor())?;
    let shift = target.sub(&anchor_point)?;
    let shift_idx = params.point_index(&shift)?;
    let checks = set
        .checks()
        .iter()
        .map(|c| {
            let entries = c
                .entries()
                .iter()
                .map(|&(idx, coef)| (params.translate_index(idx, shift_idx), coef))
                .collect();
            SparseParityCheck::from_parts(
                params.translate_index(c.anchor(), shift_idx),
                entries,
                c.rank(),
            )
        })
        .collect();
    let out = OrthogonalCheckSet {
        anchor: params.point_index(target)?,
        checks,
    };
    debug_assert!(out.verify_orthogonal().is_ok());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use crate::rng::Xorshift64Star;

    fn params(p: u64, e: u32, l: usize, lp: usize) -> CodeParams {
        CodeParams::new(FieldSpec::new(p, e).unwrap(), l, lp).unwrap()
    }

    fn idx_pairs(spec: &FieldSpec) -> Vec<(usize, usize)> {
        delta_pairs(spec)
            .iter()
            .map(|&(a, b)| (a.index(), b.index()))
            .collect()
    }

    #[test]
    fn delta_pair_examples() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(idx_pairs(&f3), vec![(1, 2)]);

        let f5 = FieldSpec::new(5, 1).unwrap();
        assert_eq!(idx_pairs(&f5), vec![(2, 4), (1, 3)]);

        // q = 4: one pair {alpha, alpha^2}; alpha^3 = 1 stays unused.
        let f4 = FieldSpec::new(2, 2).unwrap();
        assert_eq!(idx_pairs(&f4), vec![(2, 3)]);
    }

    #[test]
    fn delta_pairs_partition_units_for_odd_q() {
        for (p, e) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
            let f = FieldSpec::new(p, e).unwrap();
            let mut seen: Vec<usize> = delta_pairs(&f)
                .iter()
                .flat_map(|&(a, b)| [a.index(), b.index()])
                .collect();
            seen.sort_unstable();
            let expected: Vec<usize> = (1..f.q() as usize).collect();
            assert_eq!(seen, expected, "q = {}", f.q());
        }
    }

    #[test]
    fn gqr_tuple_counts() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let tuples = gqr_tuples(&f3, 2);
        assert_eq!(tuples.len(), 1);
        assert_eq!(
            tuples[0].pairs(),
            &[
                (f3.element(1).unwrap(), f3.element(2).unwrap()),
                (f3.element(1).unwrap(), f3.element(2).unwrap())
            ]
        );

        let f5 = FieldSpec::new(5, 1).unwrap();
        assert_eq!(gqr_tuples(&f5, 1).len(), 2);
        assert_eq!(gqr_tuples(&f5, 2).len(), 4);
    }

    #[test]
    fn gqr_tuples_are_slotwise_disjoint_somewhere() {
        let f5 = FieldSpec::new(5, 1).unwrap();
        let tuples = gqr_tuples(&f5, 2);
        for i in 0..tuples.len() {
            for j in i + 1..tuples.len() {
                let disjoint_slot = (0..2).any(|s| {
                    let (a1, a2) = tuples[i].pairs()[s];
                    let (b1, b2) = tuples[j].pairs()[s];
                    a1 != b1 && a1 != b2 && a2 != b1 && a2 != b2
                });
                assert!(disjoint_slot);
            }
        }
    }

    #[test]
    fn coefficient_tuple_rejects_degenerate_pairs() {
        let f = FieldSpec::new(3, 1).unwrap();
        let one = f.one();
        let two = f.element(2).unwrap();
        assert!(CoefficientTuple::new(vec![(one, two)]).is_ok());
        assert!(matches!(
            CoefficientTuple::new(vec![(one, one)]),
            Err(Error::RankMismatch(_))
        ));
        assert!(matches!(
            CoefficientTuple::new(vec![(f.zero(), one)]),
            Err(Error::RankMismatch(_))
        ));
    }

    fn standard_basis(spec: &std::sync::Arc<FieldSpec>, ambient: usize, r: usize) -> SubspaceBasis {
        let mut m = Matrix::zeros(spec.clone(), r, ambient);
        for i in 0..r {
            m.set(i, i, FieldElement::ONE);
        }
        SubspaceBasis::new(m).unwrap()
    }

    #[test]
    fn mset_rank_one_example() {
        let p = params(3, 1, 2, 2);
        let spec = p.spec();
        let b = standard_basis(spec, 2, 1);
        let bp = standard_basis(spec, 2, 1);
        let tuple =
            CoefficientTuple::new(vec![(spec.one(), spec.element(2).unwrap())]).unwrap();
        let fam = mset(&b, &bp, &tuple).unwrap();
        let indices: Vec<u64> = fam
            .members()
            .iter()
            .map(|m| p.point_index(m).unwrap())
            .collect();
        // E_{1,1} and 2 E_{1,1}.
        assert_eq!(indices, vec![1, 2]);
    }

    #[test]
    fn mset_rank_two_diagonals() {
        let p = params(3, 1, 2, 2);
        let spec = p.spec();
        let b = standard_basis(spec, 2, 2);
        let bp = standard_basis(spec, 2, 2);
        let tuple = gqr_tuples(spec, 2).remove(0);
        let fam = mset(&b, &bp, &tuple).unwrap();
        assert_eq!(fam.members().len(), 4);
        for m in fam.members() {
            assert_eq!(m.rank(), 2);
            assert!(m.get(0, 1).is_zero() && m.get(1, 0).is_zero());
            assert!(!m.get(0, 0).is_zero() && !m.get(1, 1).is_zero());
        }
    }

    #[test]
    fn mset_rejects_rank_disagreement() {
        let p = params(3, 1, 2, 2);
        let spec = p.spec();
        let b = standard_basis(spec, 2, 1);
        let bp = standard_basis(spec, 2, 2);
        let tuple = gqr_tuples(spec, 2).remove(0);
        assert!(matches!(mset(&b, &bp, &tuple), Err(Error::RankMismatch(_))));
    }

    #[test]
    fn local_check_rank_one_gf3() {
        let p = params(3, 1, 2, 2);
        let spec = p.spec();
        let b = standard_basis(spec, 2, 1);
        let tuple = gqr_tuples(spec, 1).remove(0);
        let fam = mset(&b, &b, &tuple).unwrap();
        let check = local_check(&p, &fam).unwrap();
        // D = {0, E, 2E} at indices 0, 1, 2 with coefficients (1, 1, 1).
        let entries: Vec<(u64, usize)> = check
            .entries()
            .iter()
            .map(|&(i, c)| (i, c.index()))
            .collect();
        assert_eq!(entries, vec![(0, 1), (1, 1), (2, 1)]);
    }

    #[test]
    fn local_check_rank_one_gf5() {
        let p = params(5, 1, 1, 2);
        let spec = p.spec();
        let b = standard_basis(spec, 1, 1);
        let bp = standard_basis(spec, 2, 1);
        let tuple =
            CoefficientTuple::new(vec![(spec.element(2).unwrap(), spec.element(4).unwrap())])
                .unwrap();
        let fam = mset(&b, &bp, &tuple).unwrap();
        let check = local_check(&p, &fam).unwrap();
        // D = {0, 2E, 4E} at indices 0, 2, 4; solving gives (1, 3, 1).
        let entries: Vec<(u64, usize)> = check
            .entries()
            .iter()
            .map(|&(i, c)| (i, c.index()))
            .collect();
        assert_eq!(entries, vec![(0, 1), (2, 3), (4, 1)]);
    }

    #[test]
    fn local_checks_annihilate_generator_rows() {
        let p = params(3, 1, 2, 2);
        let set = build_orthogonal_set(&p).unwrap();
        let g = p.generator_matrix().unwrap();
        for check in set.checks() {
            for i in 0..p.k() {
                let row = Word {
                    coords: g.row(i).to_vec(),
                };
                assert!(check.dot(p.spec(), &row).is_zero());
            }
        }
    }

    #[test]
    fn eq3_examples() {
        assert_eq!(eq3_count(&params(3, 1, 1, 2)), 4);
        assert_eq!(eq3_count(&params(3, 1, 2, 2)), 28);
        assert_eq!(eq3_summand(&params(3, 1, 2, 2), 1), 16);
        assert_eq!(eq3_summand(&params(3, 1, 2, 2), 2), 12);
        assert_eq!(eq3_count(&params(7, 1, 2, 2)), 696);
        assert_eq!(eq3_summand(&params(7, 1, 2, 2), 1), 192);
        assert_eq!(eq3_summand(&params(7, 1, 2, 2), 2), 504);
    }

    /// Direct evaluation of the closed form with a single exact division,
    /// as an independent route against the factored implementation.
    fn eq3_by_direct_division(params: &CodeParams) -> u128 {
        let q = params.q() as u128;
        let mut total = 0u128;
        for r in 1..=params.l() {
            let mut num = ((q - 1) / 2).pow(r as u32);
            for i in 0..r {
                num *= q.pow(params.l() as u32) - q.pow(i as u32);
                num *= q.pow(params.lp() as u32) - q.pow(i as u32);
            }
            let mut den = (q - 1).pow(r as u32);
            for i in 0..r {
                den *= q.pow(r as u32) - q.pow(i as u32);
            }
            assert_eq!(num % den, 0, "closed form must divide exactly");
            total += num / den;
        }
        total
    }

    #[test]
    fn eq3_factored_matches_direct_division() {
        for (p, e, l, lp) in [
            (3u64, 1u32, 1usize, 1usize),
            (3, 1, 1, 2),
            (3, 1, 2, 2),
            (2, 2, 2, 2),
            (5, 1, 1, 2),
            (5, 1, 2, 2),
            (7, 1, 2, 2),
            (3, 2, 2, 3),
        ] {
            let pr = params(p, e, l, lp);
            assert_eq!(eq3_count(&pr), eq3_by_direct_division(&pr));
        }
    }

    #[test]
    fn build_counts_match_closed_form() {
        let p = params(3, 1, 1, 2);
        let set = build_orthogonal_set(&p).unwrap();
        assert_eq!(set.j(), 4);

        let p = params(3, 1, 2, 2);
        let set = build_orthogonal_set(&p).unwrap();
        assert_eq!(set.j(), 28);
        let r1 = set.checks().iter().filter(|c| c.rank() == 1).count();
        let r2 = set.checks().iter().filter(|c| c.rank() == 2).count();
        assert_eq!((r1, r2), (16, 12));

        let p = params(5, 1, 2, 2);
        let set = build_orthogonal_set(&p).unwrap();
        assert_eq!(set.j(), 192);
        let r1 = set.checks().iter().filter(|c| c.rank() == 1).count();
        assert_eq!((r1, set.j() - r1), (72, 120));
    }

    #[test]
    fn support_is_contained_in_d_with_anchor() {
        // The statement guarantees 0 in Supp(w) subset of D; record sizes and
        // check containment only. At desk scale every support is full.
        let p = params(3, 1, 2, 2);
        let set = build_orthogonal_set(&p).unwrap();
        for check in set.checks() {
            assert!(check.coefficient_at(0).is_some());
            assert!(check.weight() <= (1 << check.rank()) + 1);
            for &(idx, _) in check.entries() {
                if idx == 0 {
                    continue;
                }
                let m = p.point_from_index(idx).unwrap();
                assert_eq!(m.rank(), check.rank());
            }
        }
    }

    #[test]
    fn pairwise_supports_meet_only_at_anchor() {
        let p = params(3, 1, 2, 2);
        let set = build_orthogonal_set(&p).unwrap();
        set.verify_orthogonal().unwrap();
        // Explicit pairwise scan over all C(28, 2) pairs.
        for i in 0..set.j() {
            for j in i + 1..set.j() {
                let a: Vec<u64> = set.checks()[i].entries().iter().map(|&(x, _)| x).collect();
                let b: Vec<u64> = set.checks()[j].entries().iter().map(|&(x, _)| x).collect();
                let shared: Vec<u64> = a.iter().filter(|x| b.contains(x)).copied().collect();
                assert_eq!(shared, vec![0]);
            }
        }
    }

    #[test]
    fn coverage_of_low_rank_matrices_is_exact_for_odd_q() {
        let p = params(3, 1, 2, 2);
        let set = build_orthogonal_set(&p).unwrap();
        let mut covered = set.covered_indices();
        covered.sort_unstable();
        let before = covered.len();
        covered.dedup();
        assert_eq!(covered.len(), before, "a point was covered twice");
        // 16 * 2 + 12 * 4 = 80 = 3^4 - 1: every nonzero matrix since l = lp = 2.
        assert_eq!(covered.len(), 80);
        let all_nonzero: Vec<u64> = (1..p.n()).collect();
        assert_eq!(covered, all_nonzero);
    }

    #[test]
    fn msets_with_distinct_normalized_row_bases_are_disjoint() {
        // Fixed (V, W, tuple), both ranks at q = 3.
        let p = params(3, 1, 2, 2);
        let spec = p.spec();
        for r in 1..=2usize {
            let tuple = gqr_tuples(spec, r).remove(0);
            let col = standard_basis(spec, 2, r);
            for w in enumerate_subspaces(spec, 2, r).unwrap() {
                let bases = w.normalized_ordered_bases();
                let fams: Vec<Vec<u64>> = bases
                    .iter()
                    .map(|bp| {
                        mset(&col, bp, &tuple)
                            .unwrap()
                            .members()
                            .iter()
                            .map(|m| p.point_index(m).unwrap())
                            .collect()
                    })
                    .collect();
                for i in 0..fams.len() {
                    for j in i + 1..fams.len() {
                        assert!(
                            fams[i].iter().all(|x| !fams[j].contains(x)),
                            "msets for bases {i} and {j} overlap at r = {r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn msets_with_family_tuples_are_disjoint_and_shared_pairs_collide() {
        let p = params(5, 1, 2, 2);
        let spec = p.spec();
        let b = standard_basis(spec, 2, 2);
        let tuples = gqr_tuples(spec, 2);
        let fams: Vec<Vec<u64>> = tuples
            .iter()
            .map(|t| {
                mset(&b, &b, t)
                    .unwrap()
                    .members()
                    .iter()
                    .map(|m| p.point_index(m).unwrap())
                    .collect()
            })
            .collect();
        for i in 0..fams.len() {
            for j in i + 1..fams.len() {
                assert!(fams[i].iter().all(|x| !fams[j].contains(x)));
            }
        }
        // Tuples sharing an element in every slot do intersect.
        let one = spec.one();
        let two = spec.element(2).unwrap();
        let three = spec.element(3).unwrap();
        let ta = CoefficientTuple::new(vec![(one, two), (one, two)]).unwrap();
        let tb = CoefficientTuple::new(vec![(one, three), (one, three)]).unwrap();
        let fa: Vec<u64> = mset(&b, &b, &ta)
            .unwrap()
            .members()
            .iter()
            .map(|m| p.point_index(m).unwrap())
            .collect();
        let fb: Vec<u64> = mset(&b, &b, &tb)
            .unwrap()
            .members()
            .iter()
            .map(|m| p.point_index(m).unwrap())
            .collect();
        assert!(fa.iter().any(|x| fb.contains(x)));
    }

    #[test]
    fn identity_automorphism_fixes_everything() {
        let p = params(3, 1, 2, 2);
        let aut = AffineAutomorphism::identity(&p);
        let set = build_orthogonal_set(&p).unwrap();
        for check in set.checks() {
            assert_eq!(&apply_to_check(&p, check, &aut).unwrap(), check);
        }
        let mut msg = vec![FieldElement::ZERO; p.k()];
        msg[2] = FieldElement::ONE;
        let w = p.encode(&msg).unwrap();
        assert_eq!(apply_to_word(&p, &w, &aut).unwrap(), w);
    }

    #[test]
    fn translation_moves_the_rank_one_check() {
        let p = params(3, 1, 2, 2);
        let spec = p.spec();
        let b = standard_basis(spec, 2, 1);
        let tuple = gqr_tuples(spec, 1).remove(0);
        let check = local_check(&p, &mset(&b, &b, &tuple).unwrap()).unwrap();

        let mut e11 = p.zero_point();
        e11.set(0, 0, FieldElement::ONE);
        let aut = AffineAutomorphism::translation(&p, e11).unwrap();
        let moved = apply_to_check(&p, &check, &aut).unwrap();
        // {0, E, 2E} + E = {E, 2E, 0}: same support, anchor now at E.
        let entries: Vec<(u64, usize)> = moved
            .entries()
            .iter()
            .map(|&(i, c)| (i, c.index()))
            .collect();
        assert_eq!(entries, vec![(0, 1), (1, 1), (2, 1)]);
        assert_eq!(moved.anchor(), 1);
    }

    fn random_invertible(
        spec: &std::sync::Arc<FieldSpec>,
        rng: &mut Xorshift64Star,
        n: usize,
    ) -> Matrix {
        loop {
            let mut m = Matrix::zeros(spec.clone(), n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, spec.element(rng.gen_range(spec.q())).unwrap());
                }
            }
            if m.rank() == n {
                return m;
            }
        }
    }

    fn random_point(p: &CodeParams, rng: &mut Xorshift64Star) -> Matrix {
        p.point_from_index(rng.gen_range(p.n())).unwrap()
    }

    #[test]
    fn automorphisms_preserve_membership() {
        let p = params(3, 1, 1, 2);
        let g = p.generator_matrix().unwrap().clone();
        let mut rng = Xorshift64Star::new(99);
        for _ in 0..10 {
            let aut = AffineAutomorphism::new(
                random_point(&p, &mut rng),
                random_invertible(p.spec(), &mut rng, p.lp()),
                random_invertible(p.spec(), &mut rng, p.l()),
            )
            .unwrap();
            for i in 0..p.k() {
                let row = Word {
                    coords: g.row(i).to_vec(),
                };
                let mapped = apply_to_word(&p, &row, &aut).unwrap();
                assert!(p.is_codeword(&mapped).unwrap());
            }
        }
    }

    #[test]
    fn automorphisms_preserve_dual_membership() {
        let p = params(3, 1, 2, 2);
        let set = build_orthogonal_set(&p).unwrap();
        let g = p.generator_matrix().unwrap().clone();
        let mut rng = Xorshift64Star::new(5);
        let aut = AffineAutomorphism::new(
            random_point(&p, &mut rng),
            random_invertible(p.spec(), &mut rng, p.lp()),
            random_invertible(p.spec(), &mut rng, p.l()),
        )
        .unwrap();
        for check in set.checks().iter().take(6) {
            let moved = apply_to_check(&p, check, &aut).unwrap();
            for i in 0..p.k() {
                let row = Word {
                    coords: g.row(i).to_vec(),
                };
                assert!(moved.dot(p.spec(), &row).is_zero());
            }
        }
    }

    #[test]
    fn transport_examples() {
        let p = params(3, 1, 1, 2);
        let set = build_orthogonal_set(&p).unwrap();

        let same = transport_to(&p, &set, &p.zero_point()).unwrap();
        assert_eq!(same.anchor(), 0);
        assert_eq!(same.checks(), set.checks());

        let mut e11 = p.zero_point();
        e11.set(0, 0, FieldElement::ONE);
        let moved = transport_to(&p, &set, &e11).unwrap();
        assert_eq!(moved.anchor(), 1);
        assert!(moved.checks().iter().all(|c| c.anchor() == 1));
        moved.verify_orthogonal().unwrap();
    }

    #[test]
    fn transport_preserves_orthogonality_at_random_targets() {
        let p = params(3, 1, 2, 2);
        let set = build_orthogonal_set(&p).unwrap();
        let mut rng = Xorshift64Star::new(2024);
        for _ in 0..10 {
            let target = random_point(&p, &mut rng);
            let moved = transport_to(&p, &set, &target).unwrap();
            moved.verify_orthogonal().unwrap();
            assert_eq!(moved.anchor(), p.point_index(&target).unwrap());
        }
    }

    #[test]
    fn transported_diagonal_check_equals_direct_solve() {
        // Automorphism transport of the standard-basis check must coincide
        // with the nullspace solve for arbitrary bases.
        let p = params(3, 1, 2, 2);
        let spec = p.spec();
        let mut rng = Xorshift64Star::new(31);
        for r in 1..=2usize {
            let tuple = gqr_tuples(spec, r).remove(0);
            let diag = local_check(
                &p,
                &mset(
                    &standard_basis(spec, 2, r),
                    &standard_basis(spec, 2, r),
                    &tuple,
                )
                .unwrap(),
            )
            .unwrap();
            for _ in 0..5 {
                // Random independent rows as the two ordered bases.
                let v = SubspaceBasis::new(random_invertible(spec, &mut rng, 2))
                    .unwrap();
                let w = SubspaceBasis::new(random_invertible(spec, &mut rng, 2))
                    .unwrap();
                let v = SubspaceBasis::new(take_rows(v.matrix(), r)).unwrap();
                let w = SubspaceBasis::new(take_rows(w.matrix(), r)).unwrap();
                let direct = local_check(&p, &mset(&v, &w, &tuple).unwrap()).unwrap();

                // B x_i^T = e_i^T and y_i A^-1 = e_i' send the general family
                // onto the diagonal one.
                let l_full = crate::falinalg::complete_basis(&v);
                let a_full = crate::falinalg::complete_basis(&w);
                let aut = AffineAutomorphism::new(
                    p.zero_point(),
                    a_full,
                    l_full.transpose().inverse().unwrap(),
                )
                .unwrap();
                assert_eq!(apply_to_check(&p, &direct, &aut).unwrap(), diag);
            }
        }
    }

    fn take_rows(m: &Matrix, r: usize) -> Matrix {
        let rows: Vec<Vec<FieldElement>> = (0..r).map(|i| m.row(i).to_vec()).collect();
        Matrix::from_rows(m.spec().clone(), rows).unwrap()
    }
}
