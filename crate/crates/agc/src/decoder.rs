//! q-ary majority-logic decoding from an orthogonal check set.
//!
//! The error symbol at a coordinate P is estimated as the plurality value of
//! the J syndromes of the checks transported to P. With J checks orthogonal
//! on every coordinate this corrects any pattern of up to floor(J/2) errors:
//! each non-anchor coordinate appears in at most one support, so at most
//! weight(e) - [e_P != 0] syndromes are contaminated and the true value
//! collects at least J - weight(e) votes. Ties prefer 0 (the only tie
//! reachable at weight exactly J/2 with e_P = 0), then the smallest index.
//!
//! Decoding is a single pass: no iteration, one membership test at the end.

use crate::agcode::{CodeParams, Word};
use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::paritygen::OrthogonalCheckSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    /// The corrected estimate passed the membership test.
    Corrected,
    /// The estimate failed membership; the error weight exceeded the radius.
    NotACodeword,
}

#[derive(Debug, Clone)]
pub struct DecodeResult {
    /// received - error_vector.
    pub estimate: Word,
    pub error_vector: Word,
    pub status: DecodeStatus,
    /// Per-coordinate syndrome tallies (vote counts indexed by field
    /// element), kept only when requested.
    pub votes_log: Option<Vec<Vec<u32>>>,
}

/// Index of the plurality value with the 0-then-smallest-index tie break:
/// only a strictly larger count replaces the running winner, so index 0
/// (scanned first) wins any tie it participates in. `votes[v]` counts
/// syndromes equal to the element of index v.
fn plurality(votes: &[u32]) -> usize {
    let mut best = 0usize;
    for (v, &count) in votes.iter().enumerate() {
        if count > votes[best] {
            best = v;
        }
    }
    best
}

fn vote_table(
    params: &CodeParams,
    received: &Word,
    set0: &OrthogonalCheckSet,
    point: u64,
) -> Vec<u32> {
    let spec = params.spec();
    let mut votes = vec![0u32; params.q() as usize];
    for check in set0.checks() {
        let mut syndrome = FieldElement::ZERO;
        for &(idx, coef) in check.entries() {
            let moved = params.translate_index(idx, point);
            syndrome = spec.add(
                syndrome,
                spec.mul(coef, received.coords[moved as usize]),
            );
        }
        votes[syndrome.index()] += 1;
    }
    votes
}

/// Estimated error value at one coordinate: the plurality of the J
/// syndromes of the checks translated from the zero-matrix anchor to P.
pub fn estimate_error_at(
    params: &CodeParams,
    received: &Word,
    set0: &OrthogonalCheckSet,
    point: u64,
) -> Result<FieldElement> {
    if set0.anchor() != 0 {
        return Err(Error::WrongAnchor(set0.anchor()));
    }
    if received.len() != params.n() as usize {
        return Err(Error::LengthMismatch {
            expected: params.n() as usize,
            got: received.len(),
        });
    }
    let winner = plurality(&vote_table(params, received, set0, point));
    params.spec().element(winner as u64)
}

/// Single-pass majority decoding of every coordinate, followed by one
/// membership test. About n * J * 2^l field operations.
pub fn majority_decode(
    params: &CodeParams,
    received: &Word,
    set0: &OrthogonalCheckSet,
) -> Result<DecodeResult> {
    decode_inner(params, received, set0, false)
}

/// As `majority_decode`, additionally returning the per-coordinate vote
/// tallies.
pub fn majority_decode_with_votes(
    params: &CodeParams,
    received: &Word,
    set0: &OrthogonalCheckSet,
) -> Result<DecodeResult> {
    decode_inner(params, received, set0, true)
}

fn decode_inner(
    params: &CodeParams,
    received: &Word,
    set0: &OrthogonalCheckSet,
    record_votes: bool,
) -> Result<DecodeResult> {
    if set0.anchor() != 0 {
        return Err(Error::WrongAnchor(set0.anchor()));
    }
    if received.len() != params.n() as usize {
        return Err(Error::LengthMismatch {
            expected: params.n() as usize,
            got: received.len(),
        });
    }
    let spec = params.spec();
    let n = params.n();
    let mut error_vector = Word::zero(n as usize);
    let mut votes_log = record_votes.then(|| Vec::with_capacity(n as usize));
    for point in 0..n {
        let votes = vote_table(params, received, set0, point);
        error_vector.coords[point as usize] = spec.element(plurality(&votes) as u64)?;
        if let Some(log) = votes_log.as_mut() {
            log.push(votes);
        }
    }
    let mut estimate = received.clone();
    for (e, &err) in estimate.coords.iter_mut().zip(&error_vector.coords) {
        *e = spec.sub(*e, err);
    }
    let status = if params.is_codeword(&estimate)? {
        DecodeStatus::Corrected
    } else {
        DecodeStatus::NotACodeword
    };
    Ok(DecodeResult {
        estimate,
        error_vector,
        status,
        votes_log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use crate::paritygen::build_orthogonal_set;
    use crate::rng::Xorshift64Star;

    fn setup(p: u64, e: u32, l: usize, lp: usize) -> (CodeParams, OrthogonalCheckSet) {
        let params = CodeParams::new(FieldSpec::new(p, e).unwrap(), l, lp).unwrap();
        let set = build_orthogonal_set(&params).unwrap();
        (params, set)
    }

    fn random_codeword(params: &CodeParams, rng: &mut Xorshift64Star) -> Word {
        let msg: Vec<FieldElement> = (0..params.k())
            .map(|_| params.spec().element(rng.gen_range(params.q())).unwrap())
            .collect();
        params.encode(&msg).unwrap()
    }

    #[test]
    fn plurality_tie_breaks() {
        // Syndrome multiset {1,1,0,2} -> 1; {0,0,1,1} -> 0 by the zero
        // preference; {1,1,2,2} -> 1 by the smallest-index preference.
        assert_eq!(plurality(&[1, 2, 1]), 1);
        assert_eq!(plurality(&[2, 2, 0]), 0);
        assert_eq!(plurality(&[0, 2, 2]), 1);
    }

    #[test]
    fn codeword_yields_zero_estimates_everywhere() {
        let (params, set) = setup(3, 1, 1, 2);
        let mut rng = Xorshift64Star::new(1);
        let c = random_codeword(&params, &mut rng);
        for point in 0..params.n() {
            assert!(estimate_error_at(&params, &c, &set, point)
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn single_error_at_anchor_gives_unanimous_syndromes() {
        let (params, set) = setup(3, 1, 1, 2);
        let mut msg = vec![FieldElement::ZERO; params.k()];
        msg[0] = FieldElement::ONE;
        let mut received = params.encode(&msg).unwrap(); // all-ones word
        let two = params.spec().element(2).unwrap();
        received.coords[0] = params.spec().add(received.coords[0], two);

        let res = majority_decode_with_votes(&params, &received, &set).unwrap();
        assert_eq!(res.error_vector.coords[0], two);
        let votes = &res.votes_log.as_ref().unwrap()[0];
        assert_eq!(votes[two.index()], set.j() as u32);
    }

    #[test]
    fn zero_errors_decode_to_corrected() {
        let (params, set) = setup(3, 1, 2, 2);
        let mut rng = Xorshift64Star::new(5);
        let c = random_codeword(&params, &mut rng);
        let res = majority_decode(&params, &c, &set).unwrap();
        assert_eq!(res.status, DecodeStatus::Corrected);
        assert_eq!(res.estimate, c);
        assert_eq!(res.error_vector.weight(), 0);
    }

    #[test]
    fn exhaustive_radius_two_on_gf3_1_2() {
        // J = 4: every pattern of weight <= 2 is corrected.
        let (params, set) = setup(3, 1, 1, 2);
        assert_eq!(set.j() / 2, 2);
        let spec = params.spec().clone();
        let n = params.n() as usize;
        let mut rng = Xorshift64Star::new(17);
        for _ in 0..5 {
            let c = random_codeword(&params, &mut rng);
            let mut patterns = 0;
            for i in 0..n {
                for vi in 1..params.q() {
                    let mut r = c.clone();
                    r.coords[i] = spec.add(r.coords[i], spec.element(vi).unwrap());
                    let res = majority_decode(&params, &r, &set).unwrap();
                    assert_eq!(res.status, DecodeStatus::Corrected);
                    assert_eq!(res.estimate, c);
                    patterns += 1;
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    for vi in 1..params.q() {
                        for vj in 1..params.q() {
                            let mut r = c.clone();
                            r.coords[i] = spec.add(r.coords[i], spec.element(vi).unwrap());
                            r.coords[j] = spec.add(r.coords[j], spec.element(vj).unwrap());
                            let res = majority_decode(&params, &r, &set).unwrap();
                            assert_eq!(res.status, DecodeStatus::Corrected);
                            assert_eq!(res.estimate, c, "failed at weight-2 ({i},{j})");
                            patterns += 1;
                        }
                    }
                }
            }
            assert_eq!(patterns, 162);
        }
    }

    #[test]
    fn random_weight_14_patterns_on_gf3_2_2() {
        // Smoke version of the radius test; the acceptance suite runs 1000.
        let (params, set) = setup(3, 1, 2, 2);
        assert_eq!(set.j() / 2, 14);
        let spec = params.spec().clone();
        let mut rng = Xorshift64Star::new(23);
        for _ in 0..50 {
            let c = random_codeword(&params, &mut rng);
            let mut r = c.clone();
            for pos in rng.sample_distinct(params.n(), 14) {
                let v = spec.element(1 + rng.gen_range(params.q() - 1)).unwrap();
                r.coords[pos as usize] = spec.add(r.coords[pos as usize], v);
            }
            let res = majority_decode(&params, &r, &set).unwrap();
            assert_eq!(res.status, DecodeStatus::Corrected);
            assert_eq!(res.estimate, c);
        }
    }

    #[test]
    fn decoding_is_translation_equivariant() {
        let (params, set) = setup(3, 1, 2, 2);
        let spec = params.spec().clone();
        let mut rng = Xorshift64Star::new(41);
        for _ in 0..5 {
            let c = random_codeword(&params, &mut rng);
            let mut r = c.clone();
            for pos in rng.sample_distinct(params.n(), 6) {
                let v = spec.element(1 + rng.gen_range(params.q() - 1)).unwrap();
                r.coords[pos as usize] = spec.add(r.coords[pos as usize], v);
            }
            let u = params.point_from_index(rng.gen_range(params.n())).unwrap();
            let aut = crate::paritygen::AffineAutomorphism::translation(&params, u).unwrap();
            let r_moved = crate::paritygen::apply_to_word(&params, &r, &aut).unwrap();

            let direct = majority_decode(&params, &r_moved, &set).unwrap();
            let via = crate::paritygen::apply_to_word(
                &params,
                &majority_decode(&params, &r, &set).unwrap().estimate,
                &aut,
            )
            .unwrap();
            assert_eq!(direct.estimate, via);
        }
    }

    #[test]
    fn result_invariants_hold_for_arbitrary_received_words() {
        let (params, set) = setup(3, 1, 1, 2);
        let spec = params.spec().clone();
        let mut rng = Xorshift64Star::new(77);
        let mut saw_failure = false;
        for _ in 0..50 {
            let received = Word {
                coords: (0..params.n())
                    .map(|_| spec.element(rng.gen_range(params.q())).unwrap())
                    .collect(),
            };
            let res = majority_decode(&params, &received, &set).unwrap();
            // estimate = received - error_vector, coordinate-wise.
            for i in 0..params.n() as usize {
                assert_eq!(
                    res.estimate.coords[i],
                    spec.sub(received.coords[i], res.error_vector.coords[i])
                );
            }
            let member = params.is_codeword(&res.estimate).unwrap();
            match res.status {
                DecodeStatus::Corrected => assert!(member),
                DecodeStatus::NotACodeword => {
                    assert!(!member);
                    saw_failure = true;
                }
            }
        }
        // Random words of length 9 over GF(3) are rarely within radius 2 of
        // the 27-codeword code; the failure branch must be exercised.
        assert!(saw_failure);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let (params, set) = setup(3, 1, 1, 2);
        let short = Word::zero(3);
        assert!(matches!(
            majority_decode(&params, &short, &set),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            estimate_error_at(&params, &short, &set, 0),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
