//! The stranding state sum `f(G)` and facts about its terms.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qlaurent::LaurentPoly;
use crate::stranding::{enumerate_labelings, flow_exponent_labels, Stranding};
use crate::tensorspace::{BinaryWord, TensorFactor, TensorMonomial, WebVector};
use crate::webgraph::{Indexed, WebGraph};

fn monomial_of(idx: &Indexed, labels: &[BinaryWord]) -> TensorMonomial {
    let factors = (0..idx.num_boundary)
        .map(|b| {
            let (e, sigma) = idx.incident[b][0];
            let w = labels[e];
            TensorFactor::plain(if sigma == 1 { w } else { w.complement() })
        })
        .collect();
    TensorMonomial(factors)
}

/// Factor `j` is the label of boundary edge `j` if it points into the boundary, else its complement.
pub fn boundary_monomial(g: &WebGraph, s: &Stranding) -> Result<TensorMonomial> {
    let idx = g.indexed()?;
    if idx.incident[..idx.num_boundary]
        .iter()
        .any(|inc| inc.len() != 1)
    {
        return Err(Error::InvalidWeb(
            "boundary vertex without exactly one edge".into(),
        ));
    }
    Ok(monomial_of(&idx, &s.in_edge_order(g)?))
}

/// Each stranding's boundary monomial with its flow exponent.
pub fn stranding_terms(g: &WebGraph) -> Result<Vec<(Stranding, TensorMonomial, i64)>> {
    let idx = g.indexed()?;
    let all = enumerate_labelings(g, &idx);
    all.par_iter()
        .map(|l| {
            Ok((
                Stranding::from_edge_order(g, l),
                monomial_of(&idx, l),
                flow_exponent_labels(&idx, l)?,
            ))
        })
        .collect()
}

/// `f(G) = Σ_S (-q)^{x(S) - y(S)} x_S`.
pub fn web_vector(g: &WebGraph) -> Result<WebVector> {
    let idx = g.indexed()?;
    let all = enumerate_labelings(g, &idx);
    let terms: Vec<(TensorMonomial, i64)> = all
        .par_iter()
        .map(|l| Ok((monomial_of(&idx, l), flow_exponent_labels(&idx, l)?)))
        .collect::<Result<_>>()?;
    // Sum (-q)^e counts per monomial before building polynomials.
    let mut acc: BTreeMap<TensorMonomial, BTreeMap<i64, i64>> = BTreeMap::new();
    for (m, e) in terms {
        *acc.entry(m).or_default().entry(e).or_insert(0) += 1;
    }
    let mut v = WebVector::zero();
    for (m, exps) in acc {
        let mut c = LaurentPoly::zero();
        for (e, count) in exps {
            c = c + LaurentPoly::neg_q_pow(e).scale(&num_bigint::BigInt::from(count));
        }
        v.add_term(m, &c);
    }
    Ok(v)
}

/// Every stranding's monomial has a nonzero coefficient in `f(G)`.
pub fn nonvanishing_check(g: &WebGraph) -> Result<bool> {
    let v = web_vector(g)?;
    let idx = g.indexed()?;
    let all = enumerate_labelings(g, &idx);
    Ok(!v.is_zero()
        && all
            .iter()
            .all(|l| !v.coeff(&monomial_of(&idx, l)).is_zero()))
}

/// Each coefficient's term at `q^e` has sign `(-1)^e`, so no two strandings cancel.
pub fn uniform_parity_signs(v: &WebVector) -> bool {
    v.terms().all(|(_, c)| {
        c.terms()
            .all(|(e, k)| (e.rem_euclid(2) == 0) == (k.sign() == num_bigint::Sign::Plus))
    })
}

/// The lex-smallest monomial and its coefficient.
pub fn lex_leading_term(v: &WebVector) -> Result<(TensorMonomial, LaurentPoly)> {
    v.first_term()
        .map(|(m, c)| (m.clone(), c.clone()))
        .ok_or_else(|| Error::Precondition("lex leading term of the zero vector".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::qlaurent::{qbinom, subst_neg_q};
    use crate::tensorspace::ell;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    fn mono(ws: &[&str]) -> TensorMonomial {
        TensorMonomial::plain(&ws.iter().map(|s| w(s)).collect::<Vec<_>>())
    }

    #[test]
    fn cup_n2() {
        let v = web_vector(&corpus::cup(2, 1)).unwrap();
        let mut expect = WebVector::zero();
        expect.add_term(mono(&["10", "01"]), &LaurentPoly::one());
        expect.add_term(mono(&["01", "10"]), &-LaurentPoly::monomial(1, -1));
        assert_eq!(v, expect);
        assert_eq!(v.to_text(), "x1⊗x2 - q^-1 x2⊗x1");
        let (m, c) = lex_leading_term(&v).unwrap();
        assert_eq!(m, mono(&["10", "01"]));
        assert!(c.is_one());
    }

    #[test]
    fn weight_two_cup_n3() {
        let mut g = corpus::cup(3, 2);
        let e = &mut g.edges[0];
        std::mem::swap(&mut e.tail, &mut e.head);
        let v = web_vector(&g).unwrap();
        let mut expect = WebVector::zero();
        expect.add_term(mono(&["110", "001"]), &LaurentPoly::one());
        expect.add_term(mono(&["101", "010"]), &LaurentPoly::neg_q_pow(-1));
        expect.add_term(mono(&["011", "100"]), &LaurentPoly::neg_q_pow(-2));
        assert_eq!(v, expect);
    }

    #[test]
    fn loops_give_binomials_at_minus_q() {
        for n in 2..=6 {
            for k in 1..n {
                let v = web_vector(&corpus::loop_web(n, k)).unwrap();
                assert_eq!(
                    v,
                    WebVector::scalar(subst_neg_q(&qbinom(n as i64, k as i64))),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn type_one_tripod_closed_form() {
        for n in 3..=5 {
            for k in 1..n {
                for l in 1..n - k {
                    let m = n - k - l;
                    let v = web_vector(&corpus::tripod(n, k, l, m)).unwrap();
                    let mut expect = WebVector::zero();
                    for b1 in BinaryWord::all_of_weight(n, k) {
                        for b2 in BinaryWord::all_of_weight(n, l) {
                            if !b1.is_disjoint(&b2) {
                                continue;
                            }
                            let b3 = b1.or(&b2).complement();
                            let e = -(ell(&b2, &b1) as i64)
                                - ell(&b3, &b1) as i64
                                - ell(&b3, &b2) as i64;
                            expect.add_term(
                                TensorMonomial::plain(&[b1, b2, b3]),
                                &LaurentPoly::neg_q_pow(e),
                            );
                        }
                    }
                    assert_eq!(v, expect, "n={n} ({k},{l},{m})");
                }
            }
        }
    }

    #[test]
    fn empty_web_is_one() {
        let g = corpus::empty_web(3);
        assert_eq!(
            web_vector(&g).unwrap(),
            WebVector::scalar(LaurentPoly::one())
        );
        assert!(nonvanishing_check(&g).unwrap());
    }

    #[test]
    fn running_example_monomials() {
        let g = corpus::running_example();
        let labels = [
            "0001", "1001", "0111", "1110", "0010", "1011", "0100", "1100",
        ];
        let s = Stranding::from_edge_order(&g, &labels.iter().map(|x| w(x)).collect::<Vec<_>>());
        assert_eq!(
            boundary_monomial(&g, &s).unwrap(),
            mono(&["0001", "0100", "1110", "1011"])
        );
        let f = g.flip_edges(&["e6"]).unwrap();
        assert_eq!(
            boundary_monomial(&f, &s.flipped(&["e6"])).unwrap(),
            mono(&["0001", "0100", "1110", "1011"])
        );
        let base = crate::stranding::base_stranding(&g).unwrap();
        assert_eq!(
            boundary_monomial(&g, &base).unwrap(),
            mono(&["1000", "0100", "1011", "0111"])
        );
    }

    #[test]
    fn running_example_vector_properties() {
        let g = corpus::running_example();
        let v = web_vector(&g).unwrap();
        assert!(!v.is_zero());
        assert!(nonvanishing_check(&g).unwrap());
        assert!(uniform_parity_signs(&v));
        let set = corpus::running_example_flip_set();
        assert_eq!(web_vector(&g.flip_edges(&set).unwrap()).unwrap(), v);
        assert_eq!(web_vector(&g.jitter(7, 0.05)).unwrap(), v);
    }

    #[test]
    fn disjoint_union_splices() {
        let g = corpus::two_cups(3, 2, 1);
        let v = web_vector(&g).unwrap();
        let inner = web_vector(&corpus::cup(3, 2)).unwrap();
        let outer = web_vector(&corpus::cup(3, 1)).unwrap();
        let mut expect = WebVector::zero();
        for (m1, c1) in inner.terms() {
            for (m2, c2) in outer.terms() {
                let m = m2.splice(0, 0, m1.factors());
                expect.add_term(m, &(c1 * c2));
            }
        }
        assert_eq!(v, expect);
    }

    #[test]
    fn lex_leading_term_of_zero_errors() {
        assert!(lex_leading_term(&WebVector::zero()).is_err());
        let single = WebVector::single(mono(&["10"]), LaurentPoly::q());
        assert_eq!(
            lex_leading_term(&single).unwrap(),
            (mono(&["10"]), LaurentPoly::q())
        );
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::corpus;
    use proptest::prelude::*;

    fn pick(index: usize) -> WebGraph {
        let webs = corpus::small_webs(4);
        webs[index % webs.len()].clone()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn flips_leave_the_vector_unchanged(index in 0usize..1000, mask in any::<u32>()) {
            let g = pick(index);
            let ids: Vec<&str> = g.edges.iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1).map(|(_, e)| e.id.as_str()).collect();
            let flipped = g.flip_edges(&ids).unwrap();
            prop_assert_eq!(web_vector(&flipped).unwrap(), web_vector(&g).unwrap());
        }

        #[test]
        fn redrawing_leaves_the_vector_unchanged(index in 0usize..1000, seed in any::<u64>()) {
            let g = pick(index);
            let moved = g.jitter(seed, 0.05);
            prop_assume!(moved.validate().is_valid());
            prop_assert_eq!(web_vector(&moved).unwrap(), web_vector(&g).unwrap());
        }

        #[test]
        fn coefficients_have_uniform_parity(index in 0usize..1000) {
            let v = web_vector(&pick(index)).unwrap();
            prop_assert!(uniform_parity_signs(&v));
        }
    }
}
