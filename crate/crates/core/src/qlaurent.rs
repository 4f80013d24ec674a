//! Laurent polynomials in one variable `q` with big-integer coefficients.
//!
//! Every scalar in the crate lives here: quantum integers, quantum binomials,
//! web-vector coefficients and the entries of rank matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Exact Laurent polynomial `sum c_e q^e`, stored without zero coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^e`.
    pub fn monomial<C: Into<BigInt>>(c: C, e: i64) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        Self { coeffs }
    }

    /// `(-q)^e`, the building block of every state-sum weight.
    pub fn neg_q_pow(e: i64) -> Self {
        let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
        Self::monomial(sign, e)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    /// Coefficient of `q^e` (zero when absent).
    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Adds `c q^e` in place, keeping the canonical form.
    pub fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(old) => {
                *old += c;
                if old.is_zero() {
                    self.coeffs.remove(&e);
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    /// Multiplies by `q^s`.
    pub fn shift(&self, s: i64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e + s, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces `q` by `-q`: odd-exponent coefficients change sign.
    pub fn subst_neg_q(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e, if e.rem_euclid(2) == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Replaces `q` by `q^-1`.
    pub fn bar(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Exact division. Fails when `other` does not divide `self` in `Z[q, q^-1]`.
    pub fn div_exact(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::InexactDivision("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (d_max, d_lead) = other
            .coeffs
            .iter()
            .next_back()
            .map(|(e, c)| (*e, c.clone()))
            .unwrap();
        let d_min = other.min_degree().unwrap();
        let floor = self.min_degree().unwrap() - d_min;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((r_max, r_lead)) =
            rem.coeffs.iter().next_back().map(|(e, c)| (*e, c.clone()))
        {
            let e = r_max - d_max;
            let (c, r) = r_lead.div_rem(&d_lead);
            if e < floor || !r.is_zero() {
                return Err(Error::InexactDivision(format!("({self}) / ({other})")));
            }
            let term = Self::monomial(c.clone(), e);
            rem -= &(&term * other);
            quot.add_term(e, c);
        }
        Ok(quot)
    }

    /// Value at a rational point `q = t` (`t` nonzero).
    pub fn eval_rational(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.coeffs {
            let p = if *e >= 0 {
                num_traits::pow(t.clone(), *e as usize)
            } else {
                num_traits::pow(t.recip(), (-*e) as usize)
            };
            acc += p * BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Value at `q = t` modulo the Mersenne prime `2^61 - 1`.
    pub fn eval_mod_p(&self, t: u64) -> u64 {
        let t_inv = modp::inv(t);
        let mut acc = 0u64;
        for (e, c) in &self.coeffs {
            let base = if *e >= 0 { t } else { t_inv };
            let p = modp::pow(base, e.unsigned_abs());
            acc = modp::add(acc, modp::mul(p, modp::from_bigint(c)));
        }
        acc
    }
}

/// Arithmetic modulo `2^61 - 1`, used for the specialization fast path.
mod modp {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::ToPrimitive;

    pub const P: u64 = (1 << 61) - 1;

    pub fn add(a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= P {
            s - P
        } else {
            s
        }
    }

    pub fn sub(a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + P - b
        }
    }

    pub fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    pub fn pow(mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(a: u64) -> u64 {
        pow(a, P - 2)
    }

    pub fn from_bigint(c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(P)).to_u64().unwrap()
    }
}

/// Quantum integer `[k] = (q^k - q^-k) / (q - q^-1)`.
pub fn qint(k: i64) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    let m = k.abs();
    let sign = if k < 0 { -1 } else { 1 };
    let mut e = m - 1;
    while e >= -(m - 1) && m > 0 {
        p.add_term(e, BigInt::from(sign));
        e -= 2;
    }
    p
}

/// Quantum binomial `[k]...[k-l+1] / ([l]...[1])`, valid for any integer `k`.
pub fn qbinom(k: i64, l: i64) -> LaurentPoly {
    assert!(l >= 0, "qbinom lower index must be nonnegative");
    let mut num = LaurentPoly::one();
    let mut den = LaurentPoly::one();
    for i in 0..l {
        num = &num * &qint(k - i);
        den = &den * &qint(i + 1);
    }
    num.div_exact(&den)
        .expect("quantum binomial division is exact")
}

/// Free-function form of [`LaurentPoly::subst_neg_q`].
pub fn subst_neg_q(p: &LaurentPoly) -> LaurentPoly {
    p.subst_neg_q()
}

/// Rank over the field of rational functions `Q(q)`.
///
/// Fraction-free elimination decides the answer. A modular specialization
/// first proposes a set of independent columns; when Bareiss confirms those
/// columns reach the largest possible rank, the full elimination is skipped.
pub fn rank_over_q(rows: &[Vec<LaurentPoly>]) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    assert!(
        rows.iter().all(|r| r.len() == ncols),
        "rank_over_q needs a rectangular matrix"
    );
    let cap = nrows.min(ncols);
    if cap == 0 {
        return 0;
    }
    let mut rng = rand::thread_rng();
    let t = rng.gen_range(2..modp::P - 1);
    let (_, pivots) = rank_mod_p_with_pivots(rows, t);
    if pivots.len() == cap {
        let sub: Vec<Vec<LaurentPoly>> = rows
            .iter()
            .map(|r| pivots.iter().map(|&j| r[j].clone()).collect())
            .collect();
        if bareiss_rank(&sub) == cap {
            return cap;
        }
    }
    bareiss_rank(rows)
}

/// Fraction-free Gaussian elimination with full pivoting.
pub fn bareiss_rank(rows: &[Vec<LaurentPoly>]) -> usize {
    let mut a: Vec<Vec<LaurentPoly>> = rows.to_vec();
    let nrows = a.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut prev = LaurentPoly::one();
    let mut rank = 0;
    for k in 0..nrows.min(ncols) {
        // Pick the pivot with the fewest terms to keep entries small.
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, entry) in row.iter().enumerate().skip(k) {
                if !entry.is_zero() && best.map_or(true, |b| entry.num_terms() < b.2) {
                    best = Some((i, j, entry.num_terms()));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let pivot = a[k][k].clone();
        for i in (k + 1)..nrows {
            let factor = a[i][k].clone();
            for j in (k + 1)..ncols {
                let v = &(&pivot * &a[i][j]) - &(&factor * &a[k][j]);
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = LaurentPoly::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Rank after specializing `q` to the rational number `t`.
pub fn rank_at_rational(rows: &[Vec<LaurentPoly>], t: &BigRational) -> usize {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|p| p.eval_rational(t)).collect())
        .collect();
    let nrows = a.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let Some(pi) = (rank..nrows).find(|&i| !a[i][col].is_zero()) else {
            col += 1;
            continue;
        };
        a.swap(rank, pi);
        let pivot = a[rank][col].clone();
        for i in (rank + 1)..nrows {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &pivot;
            for j in col..ncols {
                let d = &f * &a[rank][j];
                a[i][j] -= d;
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Rank modulo `2^61 - 1` at `q = t`, with the pivot columns used.
pub fn rank_mod_p_with_pivots(rows: &[Vec<LaurentPoly>], t: u64) -> (usize, Vec<usize>) {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|p| p.eval_mod_p(t)).collect())
        .collect();
    let nrows = a.len();
    if nrows == 0 {
        return (0, vec![]);
    }
    let ncols = a[0].len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pi) = (rank..nrows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, pi);
        let inv = modp::inv(a[rank][col]);
        for i in (rank + 1)..nrows {
            if a[i][col] == 0 {
                continue;
            }
            let f = modp::mul(a[i][col], inv);
            for j in col..ncols {
                let d = modp::mul(f, a[rank][j]);
                a[i][j] = modp::sub(a[i][j], d);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    (rank, pivots)
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let var = match *e {
                0 => String::new(),
                1 => "q".to_string(),
                e => format!("q^{e}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}{var}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parses the textual form produced by `Display`, e.g. `q^4 + 2 - q^-2`.
    fn from_str(s: &str) -> Result<Self> {
        let words: Vec<&str> = s.split_whitespace().collect();
        for pair in words.windows(2) {
            let (a, b) = (
                pair[0].chars().last().unwrap(),
                pair[1].chars().next().unwrap(),
            );
            if (a.is_ascii_alphanumeric()) && (b.is_ascii_alphanumeric()) {
                return Err(Error::Parse(format!("missing operator in `{s}`")));
            }
        }
        let compact: String = words.concat();
        if compact.is_empty() {
            return Err(Error::Parse(format!("empty polynomial `{s}`")));
        }
        let bad = || Error::Parse(format!("malformed polynomial `{s}`"));
        let bytes = compact.as_bytes();
        let mut out = LaurentPoly::zero();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = BigInt::one();
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            } else if i > 0 {
                return Err(bad());
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coeff = if i > start {
                compact[start..i].parse::<BigInt>().map_err(|_| bad())?
            } else {
                BigInt::one()
            };
            let mut exp = 0i64;
            if i < bytes.len() && bytes[i] == b'q' {
                i += 1;
                exp = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let es = i;
                    if i < bytes.len() && bytes[i] == b'-' {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    exp = compact[es..i].parse::<i64>().map_err(|_| bad())?;
                }
            } else if i == start {
                return Err(bad());
            }
            out.add_term(exp, sign * coeff);
        }
        Ok(out)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.coeffs.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c);
        }
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// Small helper for tests and callers that hold coefficients as `i64`.
pub fn poly_from_i64(terms: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
}

/// Integer value of a constant polynomial, if it is one.
pub fn as_constant(p: &LaurentPoly) -> Option<i64> {
    match p.num_terms() {
        0 => Some(0),
        1 if p.coeffs.contains_key(&0) => p.coeff(0).to_i64(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn qint_small_values() {
        assert!(qint(0).is_zero());
        assert_eq!(qint(2), p("q + q^-1"));
        assert_eq!(qint(-3), -p("q^2 + 1 + q^-2"));
        assert_eq!(qint(1), LaurentPoly::one());
    }

    #[test]
    fn qint_matches_defining_quotient() {
        let denom = &LaurentPoly::q() - &LaurentPoly::monomial(1, -1);
        for k in -6..=6 {
            let num = &LaurentPoly::monomial(1, k) - &LaurentPoly::monomial(1, -k);
            assert_eq!(num.div_exact(&denom).unwrap(), qint(k), "k = {k}");
        }
    }

    #[test]
    fn qbinom_examples() {
        assert_eq!(qbinom(5, 0), LaurentPoly::one());
        assert_eq!(qbinom(4, 2), p("q^4 + q^2 + 2 + q^-2 + q^-4"));
        for n in 1..=6 {
            assert_eq!(qbinom(n, 1), qint(n));
        }
        assert!(qbinom(2, 3).is_zero());
    }

    #[test]
    fn qbinom_times_denominator_is_numerator() {
        for k in 0..=8 {
            for l in 0..=k {
                let mut num = LaurentPoly::one();
                let mut den = LaurentPoly::one();
                for i in 0..l {
                    num = &num * &qint(k - i);
                    den = &den * &qint(i + 1);
                }
                assert_eq!(&qbinom(k, l) * &den, num, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn subst_neg_q_examples() {
        assert_eq!(subst_neg_q(&qint(4)), p("-q^3 - q - q^-1 - q^-3"));
        assert_eq!(
            subst_neg_q(&LaurentPoly::constant(7)),
            LaurentPoly::constant(7)
        );
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let cases = [
            "q^4 + 2 - q^-2",
            "0",
            "-q",
            "3q^2 - 1",
            "-q^-1",
            "q - 12q^-5",
        ];
        for s in cases {
            assert_eq!(p(s).to_string(), s);
        }
        assert!("q^".parse::<LaurentPoly>().is_err());
        assert!("2 3".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn inexact_division_is_an_error() {
        assert!(p("q + 1").div_exact(&p("2")).is_err());
        assert!(p("q^2 + 1").div_exact(&p("q + 1")).is_err());
        assert_eq!(p("q^2 - 1").div_exact(&p("q + 1")).unwrap(), p("q - 1"));
    }

    #[test]
    fn rank_examples() {
        let one = LaurentPoly::one;
        let zero = LaurentPoly::zero;
        assert_eq!(rank_over_q(&[vec![one(), zero()], vec![zero(), one()]]), 2);
        let z3: Vec<Vec<LaurentPoly>> = (0..3).map(|_| (0..3).map(|_| zero()).collect()).collect();
        assert_eq!(rank_over_q(&z3), 0);
        let m = vec![
            vec![one(), LaurentPoly::q()],
            vec![LaurentPoly::monomial(1, -1), one()],
        ];
        assert_eq!(rank_over_q(&m), 1);
        assert_eq!(bareiss_rank(&m), 1);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-4i64..=4, -3i64..=3), 0..5).prop_map(|ts| poly_from_i64(&ts))
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<LaurentPoly>>> {
        let entry = proptest::collection::vec((-2i64..=2, -2i64..=2), 0..3)
            .prop_map(|ts| poly_from_i64(&ts));
        proptest::collection::vec(proptest::collection::vec(entry, 5), 5)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn subst_neg_q_is_a_ring_homomorphism(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!((&a * &b).subst_neg_q(), &a.subst_neg_q() * &b.subst_neg_q());
            prop_assert_eq!(a.subst_neg_q().subst_neg_q(), a.clone());
        }

        #[test]
        fn exact_division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
        }

        #[test]
        fn text_roundtrip(a in arb_poly()) {
            prop_assert_eq!(a.to_string().parse::<LaurentPoly>().unwrap(), a);
        }

        #[test]
        fn rank_matches_max_of_random_specializations(m in arb_matrix(), seeds in proptest::array::uniform3(102i64..1_000_000)) {
            let exact = rank_over_q(&m);
            prop_assert_eq!(exact, bareiss_rank(&m));
            let specialized = seeds.iter().map(|&s| rank_at_rational(&m, &BigRational::new(BigInt::from(s), BigInt::from(101)))).max().unwrap();
            prop_assert!(specialized <= exact);
            prop_assert_eq!(specialized, exact);
        }
    }
}
