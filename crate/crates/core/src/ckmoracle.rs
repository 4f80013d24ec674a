//! Independent evaluation route: webs written as compositions of CKM maps.
//!
//! A [`Program`] is a stack of layers applied to the scalar 1, bottom first.
//! Each layer is a row of identity slots with exactly one primitive. The
//! primitives cover every map of the CKM dictionary plus the cap of the
//! stranding side and three macros (cup, Type I tripod, Type II tripod) that
//! expand into raw maps. [`render_program`] draws the same program as a
//! Fontaine web, so the two evaluation routes can be compared exactly.

use std::collections::VecDeque;
use std::fmt;

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::invariantvec::web_vector;
use crate::qlaurent::LaurentPoly;
use crate::tensorspace::{ell, BinaryWord, TensorFactor, WebVector};
use crate::webgraph::{BoundaryVertex, Edge, InteriorVertex, WebGraph};

/// A tensor factor type: `(weight, is_dual)`.
pub type FactorType = (usize, bool);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimKind {
    /// `V_k ⊗ V_l → V_{k+l}`.
    MergeM {
        k: usize,
        l: usize,
    },
    /// `V_{k+l} → V_k ⊗ V_l`.
    SplitMPrime {
        k: usize,
        l: usize,
    },
    /// `V_k → V_{n-k}^*`.
    DualD {
        k: usize,
    },
    DualDSigned {
        k: usize,
    },
    /// `V_{n-k}^* → V_k`, inverse of `DualD { k }`.
    DualInv {
        k: usize,
    },
    DualInvSigned {
        k: usize,
    },
    /// `1 → V_k ⊗ V_k^*`.
    CupLeft {
        k: usize,
    },
    /// `1 → V_k^* ⊗ V_k`.
    CupRight {
        k: usize,
    },
    /// `V_k^* ⊗ V_k → 1`.
    CapLeft {
        k: usize,
    },
    /// `V_k ⊗ V_k^* → 1`.
    CapRight {
        k: usize,
    },
    /// `V_k ⊗ V_{n-k} → 1`, the cap of the stranding side.
    FCap {
        k: usize,
    },
    /// Fontaine cup of weight `k` drawn left to right: `1 → V_{n-k} ⊗ V_k`.
    Cup {
        k: usize,
    },
    /// Source tripod with out-weights summing to `n`.
    TripodI {
        k: usize,
        l: usize,
        m: usize,
    },
    /// Source tripod with out-weights summing to `2n`.
    TripodII {
        k: usize,
        l: usize,
        m: usize,
    },
}

impl PrimKind {
    pub fn name(&self) -> &'static str {
        match self {
            PrimKind::MergeM { .. } => "MergeM",
            PrimKind::SplitMPrime { .. } => "SplitM'",
            PrimKind::DualD { .. } => "Dual_D",
            PrimKind::DualDSigned { .. } => "Dual_D_signed",
            PrimKind::DualInv { .. } => "DualInv",
            PrimKind::DualInvSigned { .. } => "DualInv_signed",
            PrimKind::CupLeft { .. } => "CupLeft_C_L",
            PrimKind::CupRight { .. } => "CupRight_C_R",
            PrimKind::CapLeft { .. } => "CapLeft_CL",
            PrimKind::CapRight { .. } => "CapRight_CR",
            PrimKind::FCap { .. } => "FCap_C",
            PrimKind::Cup { .. } => "Cup",
            PrimKind::TripodI { .. } => "TripodI",
            PrimKind::TripodII { .. } => "TripodII",
        }
    }

    fn params(&self) -> Vec<(&'static str, usize)> {
        use PrimKind::*;
        match *self {
            MergeM { k, l } | SplitMPrime { k, l } => vec![("k", k), ("l", l)],
            DualD { k }
            | DualDSigned { k }
            | DualInv { k }
            | DualInvSigned { k }
            | CupLeft { k }
            | CupRight { k }
            | CapLeft { k }
            | CapRight { k }
            | FCap { k }
            | Cup { k } => vec![("k", k)],
            TripodI { k, l, m } | TripodII { k, l, m } => vec![("k", k), ("l", l), ("m", m)],
        }
    }

    pub fn is_macro(&self) -> bool {
        matches!(
            self,
            PrimKind::Cup { .. } | PrimKind::TripodI { .. } | PrimKind::TripodII { .. }
        )
    }

    /// Checks weights against `n`.
    pub fn check(&self, n: usize) -> Result<()> {
        use PrimKind::*;
        let inner = |w: usize| (1..n).contains(&w);
        let ok = match *self {
            MergeM { k, l } | SplitMPrime { k, l } => k + l <= n,
            DualD { k }
            | DualDSigned { k }
            | DualInv { k }
            | DualInvSigned { k }
            | CupLeft { k }
            | CupRight { k }
            | CapLeft { k }
            | CapRight { k } => k <= n,
            FCap { k } | Cup { k } => inner(k),
            TripodI { k, l, m } => inner(k) && inner(l) && inner(m) && k + l + m == n,
            TripodII { k, l, m } => inner(k) && inner(l) && inner(m) && k + l + m == 2 * n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "{self} is not admissible at n = {n}"
            )))
        }
    }

    pub fn domain(&self, n: usize) -> Vec<FactorType> {
        use PrimKind::*;
        match *self {
            MergeM { k, l } => vec![(k, false), (l, false)],
            SplitMPrime { k, l } => vec![(k + l, false)],
            DualD { k } | DualDSigned { k } => vec![(k, false)],
            DualInv { k } | DualInvSigned { k } => vec![(n - k, true)],
            CapLeft { k } => vec![(k, true), (k, false)],
            CapRight { k } => vec![(k, false), (k, true)],
            FCap { k } => vec![(k, false), (n - k, false)],
            CupLeft { .. } | CupRight { .. } | Cup { .. } | TripodI { .. } | TripodII { .. } => {
                vec![]
            }
        }
    }

    pub fn codomain(&self, n: usize) -> Vec<FactorType> {
        use PrimKind::*;
        match *self {
            MergeM { k, l } => vec![(k + l, false)],
            SplitMPrime { k, l } => vec![(k, false), (l, false)],
            DualD { k } | DualDSigned { k } => vec![(n - k, true)],
            DualInv { k } | DualInvSigned { k } => vec![(k, false)],
            CupLeft { k } => vec![(k, false), (k, true)],
            CupRight { k } => vec![(k, true), (k, false)],
            CapLeft { .. } | CapRight { .. } | FCap { .. } => vec![],
            Cup { k } => vec![(n - k, false), (k, false)],
            TripodI { k, l, m } | TripodII { k, l, m } => vec![(k, false), (l, false), (m, false)],
        }
    }

    /// Sign attached to this piece when matching the two evaluation routes.
    pub fn sign(&self) -> i64 {
        match *self {
            PrimKind::TripodI { k, l, .. } => parity(k * l),
            _ => 1,
        }
    }

    /// Raw primitives realizing a macro, as `(offset, kind)` pairs applied in order.
    fn expansion(&self, n: usize) -> Option<Vec<(usize, PrimKind)>> {
        use PrimKind::*;
        match *self {
            Cup { k } => Some(vec![(0, CupLeft { k: n - k }), (1, DualInv { k })]),
            TripodI { k, l, m } => Some(vec![
                (0, CupLeft { k: k + l }),
                (1, DualInv { k: m }),
                (0, SplitMPrime { k, l }),
            ]),
            TripodII { l, m, .. } => Some(vec![
                (0, CupLeft { k: n - m }),
                (1, DualInv { k: m }),
                (1, CupLeft { k: n - l }),
                (2, DualInv { k: l }),
                (0, MergeM { k: n - m, l: n - l }),
            ]),
            _ => None,
        }
    }
}

impl fmt::Display for PrimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params().iter().map(|(_, v)| v.to_string()).collect();
        write!(f, "{}({})", self.name(), ps.join(","))
    }
}

fn parity(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A primitive placed at a factor position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Primitive {
    pub kind: PrimKind,
    pub slot: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Slot {
    Id,
    Prim(PrimKind),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub slots: Vec<Slot>,
    /// Band height used by the renderer; defaults to 1.
    pub height: Option<f64>,
}

impl Layer {
    /// `before` identity slots, the primitive, then `after` identity slots.
    pub fn new(before: usize, kind: PrimKind, after: usize) -> Layer {
        let mut slots = vec![Slot::Id; before];
        slots.push(Slot::Prim(kind));
        slots.extend(std::iter::repeat(Slot::Id).take(after));
        Layer {
            slots,
            height: None,
        }
    }

    /// The primitive and its factor position.
    pub fn primitive(&self) -> Result<Primitive> {
        let mut found = None;
        for (i, s) in self.slots.iter().enumerate() {
            if let Slot::Prim(k) = s {
                if found.is_some() {
                    return Err(Error::Signature(
                        "layer holds more than one primitive".into(),
                    ));
                }
                found = Some(Primitive { kind: *k, slot: i });
            }
        }
        found.ok_or_else(|| Error::Signature("layer holds no primitive".into()))
    }

    fn identities(&self) -> usize {
        self.slots.iter().filter(|s| **s == Slot::Id).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub n: usize,
    pub layers: Vec<Layer>,
}

impl Program {
    pub fn new(n: usize) -> Program {
        Program {
            n,
            layers: Vec::new(),
        }
    }

    /// Appends a layer with `kind` placed after `before` factors of the current top.
    pub fn push(&mut self, before: usize, kind: PrimKind) -> Result<&mut Program> {
        let top = self.signatures()?.pop().unwrap_or_default();
        let arity = kind.domain(self.n).len();
        if before + arity > top.len() {
            return Err(Error::Signature(format!(
                "{kind} at {before} does not fit {} factors",
                top.len()
            )));
        }
        self.layers
            .push(Layer::new(before, kind, top.len() - before - arity));
        self.signatures()?;
        Ok(self)
    }

    /// The factor types after each layer, starting with the empty bottom.
    pub fn signatures(&self) -> Result<Vec<Vec<FactorType>>> {
        let n = self.n;
        if n < 2 || n > 63 {
            return Err(Error::Parameter(format!("n = {n} outside 2..=63")));
        }
        let mut cur: Vec<FactorType> = Vec::new();
        let mut out = vec![cur.clone()];
        for (t, layer) in self.layers.iter().enumerate() {
            let p = layer.primitive()?;
            p.kind.check(n)?;
            let dom = p.kind.domain(n);
            if layer.identities() + dom.len() != cur.len() {
                return Err(Error::Signature(format!(
                    "layer {t}: {} identities plus {} inputs for {} factors",
                    layer.identities(),
                    dom.len(),
                    cur.len()
                )));
            }
            if cur[p.slot..p.slot + dom.len()] != dom[..] {
                return Err(Error::Signature(format!(
                    "layer {t}: {} expects {:?}",
                    p.kind, dom
                )));
            }
            cur.splice(p.slot..p.slot + dom.len(), p.kind.codomain(n));
            out.push(cur.clone());
        }
        Ok(out)
    }

    pub fn boundary_signature(&self) -> Result<Vec<FactorType>> {
        Ok(self.signatures()?.pop().unwrap_or_default())
    }

    pub fn from_json_str(s: &str) -> Result<Program> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Program::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Program> {
        let bad = |m: &str| Error::Parse(format!("program: {m}"));
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing n"))? as usize;
        let layers = v
            .get("layers")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing layers"))?;
        let mut out = Program::new(n);
        for l in layers {
            let slots = l
                .get("slots")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("layer without slots"))?;
            let slots = slots
                .iter()
                .map(slot_from_json)
                .collect::<Result<Vec<_>>>()?;
            let height = match l.get("height") {
                None | Some(Value::Null) => None,
                Some(h) => Some(h.as_f64().ok_or_else(|| bad("height must be a number"))?),
            };
            out.layers.push(Layer { slots, height });
        }
        out.signatures()?;
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let layers: Vec<Value> = self
            .layers
            .iter()
            .map(|l| {
                let slots: Vec<Value> = l
                    .slots
                    .iter()
                    .map(|s| match s {
                        Slot::Id => json!("id"),
                        Slot::Prim(k) => {
                            let mut o = serde_json::Map::new();
                            o.insert("prim".into(), json!(k.name()));
                            for (name, val) in k.params() {
                                o.insert(name.into(), json!(val));
                            }
                            Value::Object(o)
                        }
                    })
                    .collect();
                match l.height {
                    Some(h) => json!({"slots": slots, "height": h}),
                    None => json!({"slots": slots}),
                }
            })
            .collect();
        json!({"n": self.n, "layers": layers})
    }

    pub fn to_json_string(&self) -> String {
        self.to_json().to_string()
    }
}

fn slot_from_json(v: &Value) -> Result<Slot> {
    if v.as_str() == Some("id") {
        return Ok(Slot::Id);
    }
    let bad = |m: String| Error::Parse(format!("slot {v}: {m}"));
    let name = v
        .get("prim")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("expected \"id\" or an object with prim".into()))?;
    let p = |key: &str| -> Result<usize> {
        v.get(key)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| bad(format!("missing parameter {key}")))
    };
    use PrimKind::*;
    let kind = match name {
        "MergeM" => MergeM {
            k: p("k")?,
            l: p("l")?,
        },
        "SplitM'" => SplitMPrime {
            k: p("k")?,
            l: p("l")?,
        },
        "Dual_D" => DualD { k: p("k")? },
        "Dual_D_signed" => DualDSigned { k: p("k")? },
        "DualInv" => DualInv { k: p("k")? },
        "DualInv_signed" => DualInvSigned { k: p("k")? },
        "CupLeft_C_L" => CupLeft { k: p("k")? },
        "CupRight_C_R" => CupRight { k: p("k")? },
        "CapLeft_CL" => CapLeft { k: p("k")? },
        "CapRight_CR" => CapRight { k: p("k")? },
        "FCap_C" => FCap { k: p("k")? },
        "Cup" => Cup { k: p("k")? },
        "TripodI" => TripodI {
            k: p("k")?,
            l: p("l")?,
            m: p("m")?,
        },
        "TripodII" => TripodII {
            k: p("k")?,
            l: p("l")?,
            m: p("m")?,
        },
        other => return Err(bad(format!("unknown primitive {other}"))),
    };
    Ok(Slot::Prim(kind))
}

/// The stranding-side cap: `(-q)^{ℓ(b, 1-b)}` when the right word is the complement of the left.
pub fn fcap(n: usize, k: usize, left: &TensorFactor, right: &TensorFactor) -> Result<LaurentPoly> {
    if left.dual || right.dual || left.word.len() != n || right.word.len() != n {
        return Err(Error::Signature(
            "cap takes two plain factors of length n".into(),
        ));
    }
    if left.word.weight() != k || right.word.weight() != n - k {
        return Err(Error::Signature(format!(
            "cap of weight {k} on factors of weights {} and {}",
            left.word.weight(),
            right.word.weight()
        )));
    }
    let comp = left.word.complement();
    Ok(if right.word == comp {
        LaurentPoly::neg_q_pow(ell(&left.word, &comp) as i64)
    } else {
        LaurentPoly::zero()
    })
}

type Image = Vec<(Vec<TensorFactor>, LaurentPoly)>;

fn signed(v: Image, s: i64) -> Image {
    if s == 1 {
        v
    } else {
        v.into_iter().map(|(f, c)| (f, -c)).collect()
    }
}

/// A raw primitive applied to the factors it consumes.
fn apply_raw(n: usize, kind: PrimKind, xs: &[TensorFactor]) -> Image {
    use PrimKind::*;
    let plain = TensorFactor::plain;
    let dual = TensorFactor::dual;
    let q_pow = |e: i64| LaurentPoly::monomial(1, e);
    match kind {
        MergeM { .. } => {
            let (b1, b2) = (xs[0].word, xs[1].word);
            if b1.is_disjoint(&b2) {
                vec![(
                    vec![plain(b1.or(&b2))],
                    LaurentPoly::neg_q_pow(ell(&b1, &b2) as i64),
                )]
            } else {
                vec![]
            }
        }
        SplitMPrime { k, l } => {
            let b = xs[0].word;
            let terms = BinaryWord::all_of_weight(n, k)
                .into_iter()
                .filter(|b1| b1.and(&b) == *b1)
                .map(|b1| {
                    let b2 = BinaryWord::new(n, b.raw() & !b1.raw());
                    (
                        vec![plain(b1), plain(b2)],
                        LaurentPoly::neg_q_pow(-(ell(&b2, &b1) as i64)),
                    )
                })
                .collect();
            signed(terms, parity(k * l))
        }
        DualD { k } | DualDSigned { k } => {
            let b = xs[0].word;
            let c = b.complement();
            let s = if matches!(kind, DualDSigned { .. }) {
                parity(k * (n - k))
            } else {
                1
            };
            signed(
                vec![(vec![dual(c)], LaurentPoly::neg_q_pow(ell(&b, &c) as i64))],
                s,
            )
        }
        DualInv { k } | DualInvSigned { k } => {
            let b = xs[0].word;
            let c = b.complement();
            let s = if matches!(kind, DualInvSigned { .. }) {
                parity(k * (n - k))
            } else {
                1
            };
            signed(
                vec![(
                    vec![plain(c)],
                    LaurentPoly::neg_q_pow(-(ell(&c, &b) as i64)),
                )],
                s,
            )
        }
        CupLeft { k } => BinaryWord::all_of_weight(n, k)
            .into_iter()
            .map(|b| (vec![plain(b), dual(b)], LaurentPoly::one()))
            .collect(),
        CupRight { k } => BinaryWord::all_of_weight(n, k)
            .into_iter()
            .map(|b| {
                let e = (k * (n - k)) as i64 - 2 * ell(&b, &b.complement()) as i64;
                (vec![dual(b), plain(b)], q_pow(e))
            })
            .collect(),
        CapLeft { .. } => {
            if xs[0].word == xs[1].word {
                vec![(vec![], LaurentPoly::one())]
            } else {
                vec![]
            }
        }
        CapRight { k } => {
            let b = xs[0].word;
            if b == xs[1].word {
                vec![(
                    vec![],
                    q_pow(2 * ell(&b, &b.complement()) as i64 - (k * (n - k)) as i64),
                )]
            } else {
                vec![]
            }
        }
        FCap { k } => {
            let c = fcap(n, k, &xs[0], &xs[1]).expect("signature checked by caller");
            if c.is_zero() {
                vec![]
            } else {
                vec![(vec![], c)]
            }
        }
        Cup { .. } | TripodI { .. } | TripodII { .. } => {
            unreachable!("macros are expanded before application")
        }
    }
}

fn factor_type(f: &TensorFactor) -> FactorType {
    (f.word.weight(), f.dual)
}

/// Applies `p` to every monomial of `v`, extended linearly.
pub fn apply_primitive(n: usize, p: &Primitive, v: &WebVector) -> Result<WebVector> {
    p.kind.check(n)?;
    if let Some(steps) = p.kind.expansion(n) {
        let mut cur = v.clone();
        for (off, k) in steps {
            cur = apply_primitive(
                n,
                &Primitive {
                    kind: k,
                    slot: p.slot + off,
                },
                &cur,
            )?;
        }
        return Ok(cur);
    }
    let dom = p.kind.domain(n);
    for (m, _) in v.terms() {
        let fs = m.factors();
        if fs.iter().any(|f| f.word.len() != n) {
            return Err(Error::Signature(format!(
                "factor length differs from n = {n}"
            )));
        }
        if p.slot + dom.len() > fs.len()
            || fs[p.slot..p.slot + dom.len()]
                .iter()
                .map(factor_type)
                .ne(dom.iter().copied())
        {
            return Err(Error::Signature(format!(
                "{} at slot {} does not match the vector",
                p.kind, p.slot
            )));
        }
    }
    Ok(v.map_linear(|m| {
        let xs = &m.factors()[p.slot..p.slot + dom.len()];
        apply_raw(n, p.kind, xs)
            .into_iter()
            .map(|(fs, c)| (m.splice(p.slot, dom.len(), &fs), c))
            .collect()
    }))
}

/// Applies layers in order to `v`.
pub fn apply_layers(n: usize, layers: &[Layer], v: &WebVector) -> Result<WebVector> {
    let mut cur = v.clone();
    for layer in layers {
        cur = apply_primitive(n, &layer.primitive()?, &cur)?;
    }
    Ok(cur)
}

/// The composition of all layers applied to the scalar 1.
pub fn eval_program(p: &Program) -> Result<WebVector> {
    p.signatures()?;
    apply_layers(p.n, &p.layers, &WebVector::scalar(LaurentPoly::one()))
}

/// Product of the Type I tripod signs `(-1)^{kl}`.
pub fn program_sign(p: &Program) -> i64 {
    p.layers
        .iter()
        .filter_map(|l| l.primitive().ok())
        .map(|pr| pr.kind.sign())
        .product()
}

/// Both sides of the comparison.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub stranding_side: WebVector,
    pub map_side: WebVector,
    pub sign: i64,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        let g = if self.sign == 1 {
            self.map_side.clone()
        } else {
            self.map_side.scale(&-LaurentPoly::one())
        };
        g == self.stranding_side
    }
}

pub fn oracle_report(p: &Program) -> Result<OracleReport> {
    let web = render_program(p)?;
    Ok(OracleReport {
        stranding_side: web_vector(&web)?,
        map_side: eval_program(p)?,
        sign: program_sign(p),
    })
}

/// True iff the state sum of the rendered web equals `sign · (map composition)`.
pub fn compare_f_g(p: &Program) -> bool {
    oracle_report(p).map(|r| r.agrees()).unwrap_or(false)
}

// ---------------------------------------------------------------------------
// Rendering

#[derive(Clone, Copy, Debug, PartialEq)]
struct P2 {
    x: f64,
    y: f64,
}

/// An edge under construction. Points run from `ends[0]` to `ends[1]`;
/// the edge has weight `weight` in that direction when `forward` is set.
#[derive(Clone, Debug)]
struct Chain {
    pts: VecDeque<P2>,
    ends: [Option<String>; 2],
    weight: usize,
    forward: bool,
    closed: bool,
    alive: bool,
}

impl Chain {
    fn reverse(&mut self) {
        let v: Vec<P2> = self.pts.drain(..).rev().collect();
        self.pts.extend(v);
        self.ends.swap(0, 1);
        self.forward = !self.forward;
    }

    fn push(&mut self, end: usize, p: P2) {
        let last = if end == 0 {
            self.pts.front()
        } else {
            self.pts.back()
        };
        if let Some(l) = last {
            if (l.x - p.x).abs() < 1e-12 && (l.y - p.y).abs() < 1e-12 {
                return;
            }
        }
        if end == 0 {
            self.pts.push_front(p)
        } else {
            self.pts.push_back(p)
        }
    }
}

/// An open strand: chain index and which end sits on top.
#[derive(Clone, Copy, Debug)]
struct Strand {
    chain: usize,
    end: usize,
}

/// Draws the program as a Fontaine web: pieces become vertexless cups and
/// source tripods, caps join strands, and the top strands meet the boundary.
pub fn render_program(p: &Program) -> Result<WebGraph> {
    let sigs = p.signatures()?;
    let n = p.n;
    let spacing = 1.0;
    let xpos = |j: f64| (j + 1.0) * spacing;
    let heights: Vec<f64> = p
        .layers
        .iter()
        .map(|l| {
            let h = l.height.unwrap_or(1.0);
            if h.is_finite() && h > 0.0 {
                Ok(h)
            } else {
                Err(Error::Geometry(format!("band height {h} must be positive")))
            }
        })
        .collect::<Result<_>>()?;
    let mut chains: Vec<Chain> = Vec::new();
    let mut strands: Vec<Strand> = Vec::new();
    let mut interior: Vec<InteriorVertex> = Vec::new();
    // Bands stack downward from y = -0.5.
    let mut y_top = -0.5 - heights.iter().sum::<f64>();
    for (layer, h) in p.layers.iter().zip(&heights) {
        let y_bot = y_top;
        y_top = y_bot + h;
        let y_mid = y_bot + h / 2.0;
        let prim = layer.primitive()?;
        let i = prim.slot;
        let consumed = prim.kind.domain(n).len();
        let produced = prim.kind.codomain(n).len();
        let wide = consumed.max(produced);
        let piece_x = xpos(i as f64 + (wide as f64 - 1.0) / 2.0);
        let ids_after = strands.len() - i - consumed;
        // Identity strands.
        for j in 0..i {
            let s = strands[j];
            chains[s.chain].push(
                s.end,
                P2 {
                    x: xpos(j as f64),
                    y: y_mid,
                },
            );
            chains[s.chain].push(
                s.end,
                P2 {
                    x: xpos(j as f64),
                    y: y_top,
                },
            );
        }
        for t in 0..ids_after {
            let s = strands[i + consumed + t];
            let j = (i + t) as f64;
            chains[s.chain].push(
                s.end,
                P2 {
                    x: xpos(j + wide as f64),
                    y: y_mid,
                },
            );
            chains[s.chain].push(
                s.end,
                P2 {
                    x: xpos(j + produced as f64),
                    y: y_top,
                },
            );
        }
        let mut new_strands: Vec<Strand> = Vec::new();
        match prim.kind {
            PrimKind::Cup { k } => {
                let mut pts = VecDeque::new();
                pts.push_back(P2 {
                    x: xpos(i as f64),
                    y: y_top,
                });
                pts.push_back(P2 {
                    x: piece_x,
                    y: y_mid,
                });
                pts.push_back(P2 {
                    x: xpos(i as f64 + 1.0),
                    y: y_top,
                });
                chains.push(Chain {
                    pts,
                    ends: [None, None],
                    weight: k,
                    forward: true,
                    closed: false,
                    alive: true,
                });
                let c = chains.len() - 1;
                new_strands.push(Strand { chain: c, end: 0 });
                new_strands.push(Strand { chain: c, end: 1 });
            }
            PrimKind::TripodI { k, l, m } | PrimKind::TripodII { k, l, m } => {
                let vid = format!("v{}", interior.len() + 1);
                interior.push(InteriorVertex {
                    id: vid.clone(),
                    x: piece_x,
                    y: y_mid,
                });
                for (t, w) in [k, l, m].into_iter().enumerate() {
                    let mut pts = VecDeque::new();
                    pts.push_back(P2 {
                        x: xpos((i + t) as f64),
                        y: y_top,
                    });
                    chains.push(Chain {
                        pts,
                        ends: [Some(vid.clone()), None],
                        weight: w,
                        forward: true,
                        closed: false,
                        alive: true,
                    });
                    new_strands.push(Strand {
                        chain: chains.len() - 1,
                        end: 1,
                    });
                }
            }
            PrimKind::FCap { k } => {
                let (left, right) = (strands[i], strands[i + 1]);
                let peak = P2 {
                    x: piece_x,
                    y: y_mid,
                };
                join_cap(&mut chains, &mut strands, left, right, peak, n, k)?;
            }
            other => {
                return Err(Error::Precondition(format!("{other} has no Fontaine drawing; render takes Cup, TripodI, TripodII and FCap_C")));
            }
        }
        strands.splice(i..i + consumed, new_strands);
    }
    // Boundary.
    let top = sigs.last().cloned().unwrap_or_default();
    let mut boundary = Vec::new();
    for (j, s) in strands.iter().enumerate() {
        let id = format!("b{}", j + 1);
        boundary.push(BoundaryVertex {
            id: id.clone(),
            x: xpos(j as f64),
        });
        chains[s.chain].ends[s.end] = Some(id);
    }
    let mut edges = Vec::new();
    for c in chains.iter().filter(|c| c.alive) {
        let mut pts: Vec<P2> = c.pts.iter().copied().collect();
        let id = format!("e{}", edges.len() + 1);
        if c.closed {
            if !c.forward {
                pts.reverse();
            }
            edges.push(Edge {
                id,
                tail: None,
                head: None,
                weight: c.weight as i64,
                via: pts.iter().map(|p| [p.x, p.y]).collect(),
            });
            continue;
        }
        let (mut tail, mut head) = (c.ends[0].clone(), c.ends[1].clone());
        if !c.forward {
            pts.reverse();
            std::mem::swap(&mut tail, &mut head);
        }
        // A vertex end's own position is not a via point.
        let strip = |p: &P2, v: &Option<String>| {
            v.as_ref().is_some_and(|id| {
                interior
                    .iter()
                    .any(|iv| &iv.id == id && iv.x == p.x && iv.y == p.y)
            })
        };
        if pts.first().is_some_and(|p| strip(p, &tail)) {
            pts.remove(0);
        }
        if pts.last().is_some_and(|p| strip(p, &head)) {
            pts.pop();
        }
        edges.push(Edge {
            id,
            tail,
            head,
            weight: c.weight as i64,
            via: pts.iter().map(|p| [p.x, p.y]).collect(),
        });
    }
    let g = WebGraph {
        n,
        boundary,
        interior,
        edges,
    };
    let report = g.validate();
    if !report.is_valid() {
        return Err(Error::Geometry(format!(
            "rendered web is invalid: {report}"
        )));
    }
    let bw = g.boundary_weight_vector()?;
    if bw != top.iter().map(|t| t.0).collect::<Vec<_>>() {
        return Err(Error::Geometry(format!(
            "rendered boundary {bw:?} disagrees with the program signature {top:?}"
        )));
    }
    Ok(g)
}

/// Upward weight carried by a strand.
fn strand_weight(chains: &[Chain], s: Strand, n: usize) -> usize {
    let c = &chains[s.chain];
    let arrives = (s.end == 1) == c.forward;
    if arrives {
        c.weight
    } else {
        n - c.weight
    }
}

fn join_cap(
    chains: &mut [Chain],
    strands: &mut [Strand],
    left: Strand,
    right: Strand,
    peak: P2,
    n: usize,
    k: usize,
) -> Result<()> {
    if strand_weight(chains, left, n) != k || strand_weight(chains, right, n) != n - k {
        return Err(Error::Signature(
            "cap weights disagree with the strands".into(),
        ));
    }
    if left.chain == right.chain {
        let c = &mut chains[left.chain];
        if left.end == 0 {
            c.reverse();
        }
        c.push(1, peak);
        c.closed = true;
        return Ok(());
    }
    let (lc, rc) = (left.chain, right.chain);
    if left.end == 0 {
        chains[lc].reverse();
        for s in strands.iter_mut().filter(|s| s.chain == lc) {
            s.end = 1 - s.end;
        }
    }
    if right.end == 1 {
        chains[rc].reverse();
        for s in strands.iter_mut().filter(|s| s.chain == rc) {
            s.end = 1 - s.end;
        }
    }
    chains[lc].push(1, peak);
    let tail_pts: Vec<P2> = chains[rc].pts.iter().copied().collect();
    for p in tail_pts {
        chains[lc].push(1, p);
    }
    chains[lc].ends[1] = chains[rc].ends[1].take();
    chains[rc].alive = false;
    for s in strands.iter_mut().filter(|s| s.chain == rc) {
        *s = Strand { chain: lc, end: 1 };
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Stock programs and random generators

/// A single Fontaine cup: boundary `(n-k, k)`.
pub fn cup_program(n: usize, k: usize) -> Program {
    Program {
        n,
        layers: vec![Layer::new(0, PrimKind::Cup { k }, 0)],
    }
}

/// A single source tripod; Type I when `k+l+m = n`, Type II when it is `2n`.
pub fn tripod_program(n: usize, k: usize, l: usize, m: usize) -> Program {
    let kind = if k + l + m == n {
        PrimKind::TripodI { k, l, m }
    } else {
        PrimKind::TripodII { k, l, m }
    };
    Program {
        n,
        layers: vec![Layer::new(0, kind, 0)],
    }
}

/// A decomposition of the sl4 running example: two Type I and two Type II tripods joined by four caps.
pub fn running_example_program() -> Program {
    use PrimKind::*;
    let mut p = Program::new(4);
    let steps = [
        (0, TripodI { k: 1, l: 2, m: 1 }),
        (3, TripodII { k: 3, l: 2, m: 3 }),
        (2, FCap { k: 1 }),
        (2, TripodI { k: 2, l: 1, m: 1 }),
        (1, FCap { k: 2 }),
        (3, TripodII { k: 3, l: 3, m: 2 }),
        (2, FCap { k: 1 }),
        (3, FCap { k: 2 }),
    ];
    for (at, kind) in steps {
        p.push(at, kind)
            .expect("running example program is well formed");
    }
    p
}

/// Sixteen layers drawing the eight-point `sl_4` web of the tableau with row word `12132344`.
pub fn intro_web_program() -> Program {
    use PrimKind::*;
    let mut p = Program::new(4);
    let steps = [
        (0, TripodI { k: 1, l: 2, m: 1 }),
        (0, TripodII { k: 2, l: 3, m: 3 }),
        (2, FCap { k: 3 }),
        (2, TripodII { k: 3, l: 3, m: 2 }),
        (4, FCap { k: 2 }),
        (1, TripodI { k: 1, l: 2, m: 1 }),
        (3, FCap { k: 1 }),
        (3, TripodI { k: 2, l: 1, m: 1 }),
        (2, FCap { k: 2 }),
        (3, FCap { k: 1 }),
        (0, TripodI { k: 1, l: 1, m: 2 }),
        (2, FCap { k: 2 }),
        (5, TripodI { k: 1, l: 1, m: 2 }),
        (4, FCap { k: 3 }),
        (6, TripodI { k: 2, l: 1, m: 1 }),
        (5, FCap { k: 2 }),
    ];
    for (at, kind) in steps {
        p.push(at, kind).expect("intro web program is well formed");
    }
    p
}

/// Random Fontaine program with up to `layers` layers and at most `max_width` open strands.
pub fn random_fontaine_program<R: Rng>(
    n: usize,
    layers: usize,
    max_width: usize,
    rng: &mut R,
) -> Program {
    let mut p = Program::new(n);
    for _ in 0..layers {
        let top = p.boundary_signature().unwrap_or_default();
        let caps: Vec<(usize, PrimKind)> = (0..top.len().saturating_sub(1))
            .filter(|&i| top[i].0 + top[i + 1].0 == n)
            .map(|i| (i, PrimKind::FCap { k: top[i].0 }))
            .collect();
        let mut pieces: Vec<PrimKind> = (1..n).map(|k| PrimKind::Cup { k }).collect();
        for k in 1..n {
            for l in 1..n {
                for total in [n, 2 * n] {
                    if total > k + l && total - k - l < n {
                        pieces.push(if total == n {
                            PrimKind::TripodI {
                                k,
                                l,
                                m: total - k - l,
                            }
                        } else {
                            PrimKind::TripodII {
                                k,
                                l,
                                m: total - k - l,
                            }
                        });
                    }
                }
            }
        }
        pieces.retain(|k| top.len() + k.codomain(n).len() <= max_width);
        if caps.is_empty() && pieces.is_empty() {
            break;
        }
        let (at, kind) = if !caps.is_empty() && (pieces.is_empty() || rng.gen_bool(0.5)) {
            caps[rng.gen_range(0..caps.len())]
        } else {
            (
                rng.gen_range(0..=top.len()),
                pieces[rng.gen_range(0..pieces.len())],
            )
        };
        p.push(at, kind)
            .expect("generator only proposes admissible layers");
    }
    p
}

/// Random program of raw CKM primitives, at most `max_width` factors wide.
pub fn random_raw_program<R: Rng>(
    n: usize,
    layers: usize,
    max_width: usize,
    rng: &mut R,
) -> Program {
    use PrimKind::*;
    let mut p = Program::new(n);
    for _ in 0..layers {
        let top = p.boundary_signature().unwrap_or_default();
        let mut moves: Vec<(usize, PrimKind)> = Vec::new();
        if top.len() + 2 <= max_width {
            for at in 0..=top.len() {
                for k in 1..n {
                    moves.push((at, CupLeft { k }));
                    moves.push((at, CupRight { k }));
                }
            }
        }
        for (i, &(w, d)) in top.iter().enumerate() {
            if d {
                moves.push((i, DualInv { k: n - w }));
                moves.push((i, DualInvSigned { k: n - w }));
            } else {
                moves.push((i, DualD { k: w }));
                moves.push((i, DualDSigned { k: w }));
                if top.len() < max_width {
                    for k in 1..w {
                        moves.push((i, SplitMPrime { k, l: w - k }));
                    }
                }
            }
            if let Some(&(w2, d2)) = top.get(i + 1) {
                match (d, d2) {
                    (false, false) if w + w2 < n => moves.push((i, MergeM { k: w, l: w2 })),
                    _ => {}
                }
                match (d, d2) {
                    (false, false) if w + w2 == n => moves.push((i, FCap { k: w })),
                    (true, false) if w == w2 => moves.push((i, CapLeft { k: w })),
                    (false, true) if w == w2 => moves.push((i, CapRight { k: w })),
                    _ => {}
                }
            }
        }
        let (at, kind) = moves[rng.gen_range(0..moves.len())];
        p.push(at, kind)
            .expect("generator only proposes admissible layers");
    }
    p
}
