//! Action of `E_i`, `F_i`, `K_i` on tensor products of fundamental
//! representations and their duals, and the invariance certificate.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qlaurent::LaurentPoly;
use crate::tensorspace::{TensorFactor, TensorMonomial, WebVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    E,
    F,
    K,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Generator::E => "E",
            Generator::F => "F",
            Generator::K => "K",
        };
        write!(f, "{s}")
    }
}

/// A scalar `sign · q^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Mono {
    sign: i64,
    exp: i64,
}

impl Mono {
    const ONE: Mono = Mono { sign: 1, exp: 0 };

    fn times(self, o: Mono) -> Mono {
        Mono {
            sign: self.sign * o.sign,
            exp: self.exp + o.exp,
        }
    }

    fn poly(self) -> LaurentPoly {
        LaurentPoly::monomial(self.sign, self.exp)
    }
}

/// `+1` if `i ∈ T, i+1 ∉ T`; `-1` if the reverse; else 0.
fn pattern(f: &TensorFactor, i: usize) -> i64 {
    f.word.bit(i) - f.word.bit(i + 1)
}

fn k_scalar(f: &TensorFactor, i: usize) -> Mono {
    let p = pattern(f, i);
    Mono {
        sign: 1,
        exp: if f.dual { -p } else { p },
    }
}

fn e_single(f: &TensorFactor, i: usize) -> Option<(Mono, TensorFactor)> {
    let p = pattern(f, i);
    let moved = TensorFactor {
        word: f.word.swap_adjacent(i),
        dual: f.dual,
    };
    match (f.dual, p) {
        (false, -1) => Some((Mono::ONE, moved)),
        (true, 1) => Some((Mono { sign: -1, exp: 1 }, moved)),
        _ => None,
    }
}

fn f_single(f: &TensorFactor, i: usize) -> Option<(Mono, TensorFactor)> {
    let p = pattern(f, i);
    let moved = TensorFactor {
        word: f.word.swap_adjacent(i),
        dual: f.dual,
    };
    match (f.dual, p) {
        (false, 1) => Some((Mono::ONE, moved)),
        (true, -1) => Some((Mono { sign: -1, exp: -1 }, moved)),
        _ => None,
    }
}

fn ambient_n(v: &WebVector) -> Option<usize> {
    v.terms()
        .find_map(|(m, _)| m.factors().first().map(|f| f.word.len()))
}

fn check_color(v: &WebVector, i: usize) -> Result<()> {
    if i == 0 {
        return Err(Error::Parameter("color must be at least 1".into()));
    }
    if let Some(n) = ambient_n(v) {
        if i >= n {
            return Err(Error::Parameter(format!("color {i} outside 1..{}", n - 1)));
        }
    }
    Ok(())
}

fn act_monomial(g: Generator, i: usize, m: &TensorMonomial, out: &mut Vec<(TensorMonomial, Mono)>) {
    let fs = m.factors();
    let t = fs.len();
    match g {
        Generator::K => {
            let s = fs
                .iter()
                .fold(Mono::ONE, |acc, f| acc.times(k_scalar(f, i)));
            out.push((m.clone(), s));
        }
        Generator::E => {
            for j in 0..t {
                if let Some((s, nf)) = e_single(&fs[j], i) {
                    let tail = fs[j + 1..]
                        .iter()
                        .fold(Mono::ONE, |acc, f| acc.times(k_scalar(f, i)));
                    out.push((m.splice(j, 1, &[nf]), s.times(tail)));
                }
            }
        }
        Generator::F => {
            for j in 0..t {
                if let Some((s, nf)) = f_single(&fs[j], i) {
                    let head = fs[..j].iter().fold(Mono::ONE, |acc, f| {
                        let k = k_scalar(f, i);
                        acc.times(Mono {
                            sign: 1,
                            exp: -k.exp,
                        })
                    });
                    out.push((m.splice(j, 1, &[nf]), s.times(head)));
                }
            }
        }
    }
}

fn act(g: Generator, i: usize, v: &WebVector) -> Result<WebVector> {
    check_color(v, i)?;
    let mut out = WebVector::zero();
    let mut buf = Vec::new();
    for (m, c) in v.terms() {
        buf.clear();
        act_monomial(g, i, m, &mut buf);
        for (nm, s) in buf.drain(..) {
            out.add_term(nm, &(c * &s.poly()));
        }
    }
    Ok(out)
}

pub fn act_e(i: usize, v: &WebVector) -> Result<WebVector> {
    act(Generator::E, i, v)
}

pub fn act_f(i: usize, v: &WebVector) -> Result<WebVector> {
    act(Generator::F, i, v)
}

pub fn act_k(i: usize, v: &WebVector) -> Result<WebVector> {
    act(Generator::K, i, v)
}

/// `K_i^{-1}`: reciprocal scalars of `K_i`.
pub fn act_k_inv(i: usize, v: &WebVector) -> Result<WebVector> {
    check_color(v, i)?;
    Ok(v.map_linear(|m| {
        let e: i64 = m.factors().iter().map(|f| k_scalar(f, i).exp).sum();
        vec![(m.clone(), LaurentPoly::monomial(1, -e))]
    }))
}

/// One row of the invariance table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceRow {
    pub generator: Generator,
    pub color: usize,
    pub pass: bool,
}

/// Checks `E_i v = 0`, `F_i v = 0` and `K_i v = v` for every color.
pub fn invariance_table(v: &WebVector, n: usize) -> Result<Vec<InvarianceRow>> {
    if let Some(m) = ambient_n(v) {
        if m != n {
            return Err(Error::LengthMismatch(format!(
                "vector has n = {m}, expected {n}"
            )));
        }
    }
    let grid: Vec<(Generator, usize)> = (1..n)
        .flat_map(|i| [Generator::E, Generator::F, Generator::K].map(|g| (g, i)))
        .collect();
    grid.par_iter()
        .map(|&(g, i)| {
            let w = act(g, i, v)?;
            let pass = match g {
                Generator::K => &w == v,
                _ => w.is_zero(),
            };
            Ok(InvarianceRow {
                generator: g,
                color: i,
                pass,
            })
        })
        .collect()
}

/// True iff every generator acts trivially.
pub fn check_invariant(v: &WebVector) -> bool {
    let Some(n) = ambient_n(v) else {
        return true;
    };
    invariance_table(v, n)
        .map(|t| t.iter().all(|r| r.pass))
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensorspace::BinaryWord;
    use proptest::prelude::*;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    fn plain(ws: &[&str]) -> WebVector {
        WebVector::single(
            TensorMonomial::plain(&ws.iter().map(|s| w(s)).collect::<Vec<_>>()),
            LaurentPoly::one(),
        )
    }

    #[test]
    fn single_factor_rules() {
        assert_eq!(act_e(1, &plain(&["01"])).unwrap(), plain(&["10"]));
        assert_eq!(act_f(1, &plain(&["10"])).unwrap(), plain(&["01"]));
        let dual = WebVector::single(
            TensorMonomial(vec![TensorFactor::dual(w("10"))]),
            LaurentPoly::one(),
        );
        assert_eq!(
            act_k(1, &dual).unwrap(),
            dual.scale(&LaurentPoly::monomial(1, -1))
        );
        let e = act_e(1, &dual).unwrap();
        let expect = WebVector::single(
            TensorMonomial(vec![TensorFactor::dual(w("01"))]),
            -LaurentPoly::q(),
        );
        assert_eq!(e, expect);
    }

    #[test]
    fn coproduct_on_two_factors() {
        let v = act_e(1, &plain(&["01", "10"])).unwrap();
        assert_eq!(v, plain(&["10", "10"]).scale(&LaurentPoly::q()));
    }

    #[test]
    fn invariance_examples() {
        let mut cup = plain(&["10", "01"]);
        cup.add_term(
            TensorMonomial::plain(&[w("01"), w("10")]),
            &-LaurentPoly::monomial(1, -1),
        );
        assert!(check_invariant(&cup));
        assert!(!check_invariant(&plain(&["10", "10"])));
        assert!(check_invariant(&WebVector::scalar(LaurentPoly::one())));
        let table = invariance_table(&plain(&["10", "10"]), 2).unwrap();
        assert_eq!(table.iter().filter(|r| !r.pass).count(), 2);
        assert!(act_e(2, &cup).is_err());
        assert!(act_e(0, &cup).is_err());
    }

    #[test]
    fn action_keeps_weights() {
        let v = plain(&["0110", "1001", "0011"]);
        for i in 1..4 {
            for g in [act_e(i, &v).unwrap(), act_f(i, &v).unwrap()] {
                for (m, _) in g.terms() {
                    assert_eq!(m.signature(), v.signature().unwrap());
                }
            }
        }
    }

    #[test]
    fn corpus_vectors_are_invariant() {
        use crate::corpus;
        use crate::invariantvec::web_vector;
        let webs = [
            corpus::running_example(),
            corpus::cup(4, 2),
            corpus::two_cups(3, 2, 1),
            corpus::tripod(5, 1, 2, 2),
            corpus::sink_tripod(4, 1, 2, 1),
            corpus::nested_cups(4, &[1, 3]),
        ];
        for g in &webs {
            assert!(check_invariant(&web_vector(g).unwrap()));
        }
        let broken = web_vector(&corpus::cup(3, 1))
            .unwrap()
            .add(&plain(&["100", "100"]));
        assert!(!check_invariant(&broken));
    }

    fn arb_vector() -> impl Strategy<Value = (usize, WebVector)> {
        (2usize..=4).prop_flat_map(|n| {
            let factor = (1usize..n, 0u64..(1u64 << n), any::<bool>());
            (
                Just(n),
                proptest::collection::vec(factor, 1..=3),
                proptest::collection::vec((-3i64..=3, -2i64..=2), 1..4),
                any::<u64>(),
            )
                .prop_map(|(n, sig, coeffs, seed)| {
                    let mut v = WebVector::zero();
                    let all: Vec<Vec<BinaryWord>> = sig
                        .iter()
                        .map(|&(k, _, _)| BinaryWord::all_of_weight(n, k))
                        .collect();
                    for (t, &(c, e)) in coeffs.iter().enumerate() {
                        let fs: Vec<TensorFactor> = sig
                            .iter()
                            .zip(&all)
                            .enumerate()
                            .map(|(j, (&(_, r, d), words))| {
                                let pick = ((r ^ seed.rotate_left((t * 7 + j) as u32)) as usize)
                                    % words.len();
                                TensorFactor {
                                    word: words[pick],
                                    dual: d,
                                }
                            })
                            .collect();
                        v.add_term(TensorMonomial(fs), &LaurentPoly::monomial(c, e));
                    }
                    (n, v)
                })
        })
    }

    proptest! {
        #[test]
        fn commutator_relation((n, v) in arb_vector()) {
            for i in 1..n {
                let ef = act_e(i, &act_f(i, &v).unwrap()).unwrap();
                let fe = act_f(i, &act_e(i, &v).unwrap()).unwrap();
                let lhs = ef.sub(&fe).scale(&(LaurentPoly::q() - LaurentPoly::monomial(1, -1)));
                let rhs = act_k(i, &v).unwrap().sub(&act_k_inv(i, &v).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn k_and_k_inverse_cancel((n, v) in arb_vector()) {
            for i in 1..n {
                prop_assert_eq!(act_k_inv(i, &act_k(i, &v).unwrap()).unwrap(), v.clone());
            }
        }
    }
}
