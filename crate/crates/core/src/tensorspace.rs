//! Binary words, wedge-basis tensor monomials and formal linear combinations.
//!
//! A word `b` of length `n` with ones at positions `t_1 > ... > t_k` names the
//! basis vector `x_{t_1} ∧ ... ∧ x_{t_k}` of the k-th fundamental
//! representation. Positions are 1-based throughout the public API.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlaurent::LaurentPoly;

/// Fixed-length 0/1 word, bit `i` (1-based) stored at bit `i - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryWord {
    bits: u64,
    n: u8,
}

impl BinaryWord {
    pub const MAX_LEN: usize = 63;

    pub fn new(n: usize, bits: u64) -> Self {
        assert!(n <= Self::MAX_LEN, "word length {n} too large");
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Self {
            bits: bits & mask,
            n: n as u8,
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(n, 0)
    }

    pub fn ones(n: usize) -> Self {
        Self::new(n, u64::MAX)
    }

    /// Ones in the first `c` positions.
    pub fn lambda(n: usize, c: usize) -> Self {
        Self::new(n, (1u64 << c) - 1)
    }

    /// Single one at position `i`.
    pub fn unit(n: usize, i: usize) -> Self {
        Self::new(n, 1u64 << (i - 1))
    }

    /// Word with ones at the given 1-based positions.
    pub fn from_positions(n: usize, positions: &[usize]) -> Self {
        let mut bits = 0u64;
        for &p in positions {
            assert!((1..=n).contains(&p), "position {p} outside 1..={n}");
            bits |= 1u64 << (p - 1);
        }
        Self::new(n, bits)
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn raw(&self) -> u64 {
        self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!((1..=self.len()).contains(&i));
        (self.bits >> (i - 1)) & 1 == 1
    }

    pub fn bit(&self, i: usize) -> i64 {
        self.get(i) as i64
    }

    pub fn complement(&self) -> Self {
        Self::new(self.len(), !self.bits)
    }

    /// Swaps positions `i` and `i + 1`.
    pub fn swap_adjacent(&self, i: usize) -> Self {
        let a = self.get(i);
        let b = self.get(i + 1);
        let mut bits = self.bits & !(0b11u64 << (i - 1));
        if a {
            bits |= 1u64 << i;
        }
        if b {
            bits |= 1u64 << (i - 1);
        }
        Self::new(self.len(), bits)
    }

    /// Ascending list of positions holding a one.
    pub fn positions(&self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.get(i)).collect()
    }

    /// Bitwise union; callers use it for sums of disjoint words.
    pub fn or(&self, other: &Self) -> Self {
        Self::new(self.len(), self.bits | other.bits)
    }

    pub fn and(&self, other: &Self) -> Self {
        Self::new(self.len(), self.bits & other.bits)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits & other.bits == 0
    }

    /// Every word of length `n` and weight `k`, in increasing raw order.
    pub fn all_of_weight(n: usize, k: usize) -> Vec<Self> {
        if k > n {
            return vec![];
        }
        (0..(1u64 << n))
            .filter(|b| b.count_ones() as usize == k)
            .map(|b| Self::new(n, b))
            .collect()
    }

    /// Entries as integers, position 1 first.
    pub fn to_vec(&self) -> Vec<i64> {
        (1..=self.len()).map(|i| self.bit(i)).collect()
    }

    /// Builds a word from a 0/1 integer vector; `None` if an entry is outside {0, 1}.
    pub fn from_int_vec(v: &[i64]) -> Option<Self> {
        let mut bits = 0u64;
        for (idx, &x) in v.iter().enumerate() {
            match x {
                0 => {}
                1 => bits |= 1u64 << idx,
                _ => return None,
            }
        }
        Some(Self::new(v.len(), bits))
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len() {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for BinaryWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > Self::MAX_LEN {
            return Err(Error::Parse(format!("bad word length in `{s}`")));
        }
        let mut bits = 0u64;
        for (idx, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1u64 << idx,
                _ => return Err(Error::Parse(format!("non-binary character in `{s}`"))),
            }
        }
        Ok(Self::new(s.len(), bits))
    }
}

/// Order by the ascending position list, compared lexicographically.
impl Ord for BinaryWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.positions()
            .cmp(&other.positions())
            .then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for BinaryWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `ℓ(b, b2) = |{(i, j) : i < j, b_i = 1, b2_j = 1}|`.
pub fn inversion_ell(b: &BinaryWord, b2: &BinaryWord) -> Result<u32> {
    if b.len() != b2.len() {
        return Err(Error::LengthMismatch(format!("{b} vs {b2}")));
    }
    Ok(ell(b, b2))
}

/// Unchecked form of [`inversion_ell`] for hot loops.
pub fn ell(b: &BinaryWord, b2: &BinaryWord) -> u32 {
    let mut total = 0;
    let mut rest = b2.raw();
    while rest != 0 {
        let j = rest.trailing_zeros();
        total += (b.raw() & ((1u64 << j) - 1)).count_ones();
        rest &= rest - 1;
    }
    total
}

/// Rewrites `x_{i_1} ∧ ... ∧ x_{i_k}` as `c · x_b` in the descending basis.
/// Returns `None` when an index repeats (the wedge vanishes).
pub fn wedge_sort_scalar(indices: &[usize], n: usize) -> Option<(LaurentPoly, BinaryWord)> {
    let mut seen = 0u64;
    for &i in indices {
        assert!((1..=n).contains(&i), "index {i} outside 1..={n}");
        if seen & (1u64 << (i - 1)) != 0 {
            return None;
        }
        seen |= 1u64 << (i - 1);
    }
    let mut ascending_pairs = 0i64;
    for a in 0..indices.len() {
        for b in (a + 1)..indices.len() {
            if indices[a] < indices[b] {
                ascending_pairs += 1;
            }
        }
    }
    Some((
        LaurentPoly::neg_q_pow(ascending_pairs),
        BinaryWord::new(n, seen),
    ))
}

/// One tensor factor: `x_b` or its dual `x_b^*`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TensorFactor {
    pub word: BinaryWord,
    pub dual: bool,
}

impl TensorFactor {
    pub fn plain(word: BinaryWord) -> Self {
        Self { word, dual: false }
    }

    pub fn dual(word: BinaryWord) -> Self {
        Self { word, dual: true }
    }
}

/// Ordered tensor product of factors; the empty monomial is the scalar unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct TensorMonomial(pub Vec<TensorFactor>);

impl TensorMonomial {
    pub fn empty() -> Self {
        Self(vec![])
    }

    pub fn plain(words: &[BinaryWord]) -> Self {
        Self(words.iter().map(|w| TensorFactor::plain(*w)).collect())
    }

    pub fn factors(&self) -> &[TensorFactor] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Per-position (weight, dual) pairs naming the ambient tensor space.
    pub fn signature(&self) -> Vec<(usize, bool)> {
        self.0.iter().map(|f| (f.word.weight(), f.dual)).collect()
    }

    /// Splices `inner` in place of positions `at..at + remove`.
    pub fn splice(&self, at: usize, remove: usize, inner: &[TensorFactor]) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + inner.len() - remove.min(self.0.len()));
        v.extend_from_slice(&self.0[..at]);
        v.extend_from_slice(inner);
        v.extend_from_slice(&self.0[at + remove..]);
        Self(v)
    }
}

/// Formal `Z[q, q^-1]`-linear combination of tensor monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct WebVector {
    terms: BTreeMap<TensorMonomial, LaurentPoly>,
}

impl WebVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The scalar `c`, stored on the empty monomial.
    pub fn scalar(c: LaurentPoly) -> Self {
        let mut v = Self::zero();
        v.add_term(TensorMonomial::empty(), &c);
        v
    }

    pub fn single(m: TensorMonomial, c: LaurentPoly) -> Self {
        let mut v = Self::zero();
        v.add_term(m, &c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&TensorMonomial, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &TensorMonomial) -> LaurentPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: TensorMonomial, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                *old += c;
                if old.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &WebVector) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn add(&self, other: &WebVector) -> WebVector {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &WebVector) -> WebVector {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn scale(&self, c: &LaurentPoly) -> WebVector {
        let mut out = WebVector::zero();
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.add_term(m.clone(), &(v * c));
        }
        out
    }

    /// Common ambient signature, `None` for the zero vector.
    pub fn signature(&self) -> Option<Vec<(usize, bool)>> {
        self.terms.keys().next().map(|m| m.signature())
    }

    /// Checks every monomial lives in the same tensor space.
    pub fn check_ambient(&self) -> Result<()> {
        let mut sig: Option<(Vec<(usize, bool)>, usize)> = None;
        for m in self.terms.keys() {
            let n = m.0.first().map_or(0, |f| f.word.len());
            if m.0.iter().any(|f| f.word.len() != n) {
                return Err(Error::MixedAmbient(format!(
                    "factor lengths differ in {m:?}"
                )));
            }
            let s = (m.signature(), n);
            match &sig {
                None => sig = Some(s),
                Some(prev) if *prev != s => {
                    return Err(Error::MixedAmbient(format!("{:?} vs {:?}", prev.0, s.0)));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Applies a linear map given on basis monomials.
    pub fn map_linear<F>(&self, mut f: F) -> WebVector
    where
        F: FnMut(&TensorMonomial) -> Vec<(TensorMonomial, LaurentPoly)>,
    {
        let mut out = WebVector::zero();
        for (m, c) in &self.terms {
            for (m2, c2) in f(m) {
                out.add_term(m2, &(c * &c2));
            }
        }
        out
    }

    /// The smallest monomial under the lex order, with its coefficient.
    pub fn first_term(&self) -> Option<(&TensorMonomial, &LaurentPoly)> {
        self.terms.iter().next()
    }

    fn json_terms(&self) -> Vec<JsonTerm> {
        self.terms
            .iter()
            .map(|(m, c)| JsonTerm {
                factors: m
                    .0
                    .iter()
                    .map(|f| JsonFactor {
                        bits: f.word.to_string(),
                        dual: f.dual,
                    })
                    .collect(),
                coeff: c.to_string(),
            })
            .collect()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.json_terms()).expect("web vector serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.json_terms()).expect("web vector serializes")
    }

    pub fn from_json_str(s: &str) -> Result<WebVector> {
        let terms: Vec<JsonTerm> =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut raw = Vec::with_capacity(terms.len());
        for t in terms {
            let factors = t
                .factors
                .iter()
                .map(|f| {
                    Ok(TensorFactor {
                        word: f.bits.parse()?,
                        dual: f.dual,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            raw.push((TensorMonomial(factors), t.coeff.parse()?));
        }
        vector_canonicalize(raw)
    }

    /// Human-readable form with each factor written in ascending wedge order.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mut coeff = c.clone();
            let mut parts = Vec::new();
            for f in &m.0 {
                let pos = f.word.positions();
                let k = pos.len() as i64;
                // x_desc = (-q)^{-k(k-1)/2} x_asc
                coeff = &coeff * &LaurentPoly::neg_q_pow(-(k * (k - 1) / 2));
                let body = if pos.is_empty() {
                    "1".to_string()
                } else {
                    pos.iter()
                        .map(|p| format!("x{p}"))
                        .collect::<Vec<_>>()
                        .join("∧")
                };
                parts.push(match (f.dual, pos.len() > 1) {
                    (false, _) => body,
                    (true, false) => format!("{body}*"),
                    (true, true) => format!("({body})*"),
                });
            }
            let mono = parts.join("⊗");
            out.push_str(&format_term(idx == 0, &coeff, &mono));
        }
        out
    }
}

fn format_term(first: bool, coeff: &LaurentPoly, mono: &str) -> String {
    if coeff.num_terms() == 1 {
        let (e, c) = coeff.terms().next().unwrap();
        let neg = c.is_negative();
        let mag = LaurentPoly::monomial(c.abs(), e);
        let sign = match (first, neg) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        };
        let body = if mono.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            mono.to_string()
        } else {
            format!("{mag} {mono}")
        };
        format!("{sign}{body}")
    } else {
        let sep = if first { "" } else { " + " };
        if mono.is_empty() {
            format!("{sep}({coeff})")
        } else {
            format!("{sep}({coeff}) {mono}")
        }
    }
}

impl fmt::Debug for WebVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WebVector[")?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let facs: Vec<String> =
                m.0.iter()
                    .map(|x| format!("{}{}", x.word, if x.dual { "*" } else { "" }))
                    .collect();
            write!(f, "({c}) [{}]", facs.join("|"))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct JsonFactor {
    bits: String,
    dual: bool,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    factors: Vec<JsonFactor>,
    coeff: String,
}

/// Merges equal monomials, drops zeros and checks the ambient space is common.
pub fn vector_canonicalize<I>(raw: I) -> Result<WebVector>
where
    I: IntoIterator<Item = (TensorMonomial, LaurentPoly)>,
{
    let mut v = WebVector::zero();
    for (m, c) in raw {
        v.add_term(m, &c);
    }
    v.check_ambient()?;
    Ok(v)
}
