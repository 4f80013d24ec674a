//! Local relations as concrete bounded webs, checked on web vectors.
//!
//! Every relation is a pair of formal combinations of fragments. A fragment
//! is a small graph whose legs are bent up to the boundary axis in a fixed
//! layout, so both sides share one boundary. Edge weights outside `[0, n]`
//! kill a term; weight-0 and weight-n edges are erased and the vertices they
//! touch are smoothed away.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariantvec::web_vector;
use crate::qlaurent::{qbinom, qint, subst_neg_q, LaurentPoly};
use crate::tensorspace::WebVector;
use crate::webgraph::{BoundaryVertex, Edge, InteriorVertex, WebGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Bigon,
    Ih,
    SquareRemoval,
    SquareSwitch,
    SquareSwitchGeneral,
    Loop,
    Circle,
    EdgeFlip,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::Bigon,
        Rule::Ih,
        Rule::SquareRemoval,
        Rule::SquareSwitch,
        Rule::SquareSwitchGeneral,
        Rule::Loop,
        Rule::Circle,
        Rule::EdgeFlip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Bigon => "bigon",
            Rule::Ih => "ih",
            Rule::SquareRemoval => "square-removal",
            Rule::SquareSwitch => "square-switch",
            Rule::SquareSwitchGeneral => "square-switch-general",
            Rule::Loop => "loop",
            Rule::Circle => "circle",
            Rule::EdgeFlip => "edge-flip",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rule> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown relation `{s}`")))
    }
}

/// One web with its coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: LaurentPoly,
    pub web: WebGraph,
}

/// `Σ lhs = Σ rhs` as an identity of web vectors. Terms killed by the zero rule are absent.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationInstance {
    pub rule: Rule,
    pub params: BTreeMap<String, i64>,
    pub lhs: Vec<Term>,
    pub rhs: Vec<Term>,
}

impl RelationInstance {
    pub fn label(&self) -> String {
        let ps: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!("{}({})", self.rule, ps.join(","))
    }

    pub fn webs(&self) -> impl Iterator<Item = &WebGraph> {
        self.lhs.iter().chain(&self.rhs).map(|t| &t.web)
    }

    /// The same instance with every via point moved by at most `amount`.
    pub fn jittered(&self, seed: u64, amount: f64) -> RelationInstance {
        let j = |ts: &[Term]| -> Vec<Term> {
            ts.iter()
                .enumerate()
                .map(|(i, t)| Term {
                    coeff: t.coeff.clone(),
                    web: t.web.jitter(seed.wrapping_add(i as u64), amount),
                })
                .collect()
        };
        RelationInstance {
            rule: self.rule,
            params: self.params.clone(),
            lhs: j(&self.lhs),
            rhs: j(&self.rhs),
        }
    }
}

// ---------------------------------------------------------------------------
// Drafts: graphs that may still carry weight 0 / n edges and 2-valent vertices.

#[derive(Clone, Debug)]
struct DVertex {
    id: String,
    pos: [f64; 2],
    boundary: bool,
}

#[derive(Clone, Debug)]
struct DEdge {
    tail: Option<usize>,
    head: Option<usize>,
    weight: i64,
    /// Full polyline tail to head; for closed loops the cycle without repetition.
    points: Vec<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Top,
    Bottom,
}

#[derive(Clone, Debug)]
struct Leg {
    vertex: usize,
    weight: i64,
    /// Points from the boundary into the fragment.
    inward: bool,
    side: Side,
    foot: f64,
}

/// A local picture: interior vertices, internal edges and legs (each side listed left to right).
#[derive(Clone, Debug, Default)]
struct Fragment {
    verts: Vec<(String, [f64; 2])>,
    edges: Vec<(usize, usize, i64, Vec<[f64; 2]>)>,
    legs: Vec<Leg>,
}

impl Fragment {
    fn vertex(&mut self, id: &str, x: f64, y: f64) -> usize {
        self.verts.push((id.into(), [x, y]));
        self.verts.len() - 1
    }

    fn edge(&mut self, tail: usize, head: usize, weight: i64, via: &[[f64; 2]]) {
        self.edges.push((tail, head, weight, via.to_vec()));
    }

    fn leg(&mut self, side: Side, vertex: usize, weight: i64, inward: bool, foot: f64) {
        self.legs.push(Leg {
            vertex,
            weight,
            inward,
            side,
            foot,
        });
    }
}

const BOTTOM: f64 = -4.0;
const LEFT: f64 = -0.5;
const RIGHT: f64 = 2.5;
const SPACING: f64 = 0.4;

/// Lays the fragment out below the axis. Bottom legs split into a left half
/// that wraps around the left side and a right half that wraps around the right.
fn draft(n: usize, frag: &Fragment, flips: &[bool]) -> (Vec<DVertex>, Vec<DEdge>) {
    let mut verts: Vec<DVertex> = Vec::new();
    let mut edges: Vec<DEdge> = Vec::new();
    let nv = frag.verts.len();
    let bottoms: Vec<usize> = (0..frag.legs.len())
        .filter(|&i| frag.legs[i].side == Side::Bottom)
        .collect();
    let tops: Vec<usize> = (0..frag.legs.len())
        .filter(|&i| frag.legs[i].side == Side::Top)
        .collect();
    let left_count = bottoms.len().div_ceil(2);
    let (left, right) = bottoms.split_at(left_count);

    // Route of each leg from its vertex to the axis, plus its axis x.
    let mut routes: BTreeMap<usize, Vec<[f64; 2]>> = BTreeMap::new();
    for (depth, &i) in left.iter().enumerate() {
        let leg = &frag.legs[i];
        let d = SPACING * (depth + 1) as f64;
        let (x, y) = (LEFT - d, BOTTOM - d);
        routes.insert(i, vec![[leg.foot, BOTTOM], [leg.foot, y], [x, y], [x, 0.0]]);
    }
    for (depth, &i) in right.iter().rev().enumerate() {
        let leg = &frag.legs[i];
        let d = SPACING * (depth + 1) as f64;
        let (x, y) = (RIGHT + d, BOTTOM - d);
        routes.insert(i, vec![[leg.foot, BOTTOM], [leg.foot, y], [x, y], [x, 0.0]]);
    }
    for &i in &tops {
        routes.insert(i, vec![[frag.legs[i].foot, 0.0]]);
    }

    // Boundary order on the axis: left wraps (outermost first), tops, right wraps (innermost first).
    let axis_order: Vec<usize> = left
        .iter()
        .rev()
        .chain(&tops)
        .chain(right.iter().rev())
        .copied()
        .collect();
    for (id, pos) in &frag.verts {
        verts.push(DVertex {
            id: id.clone(),
            pos: *pos,
            boundary: false,
        });
    }
    for &(t, h, w, ref via) in &frag.edges {
        let mut pts = vec![frag.verts[t].1];
        pts.extend_from_slice(via);
        pts.push(frag.verts[h].1);
        edges.push(DEdge {
            tail: Some(t),
            head: Some(h),
            weight: w,
            points: pts,
        });
    }
    for (slot, &i) in axis_order.iter().enumerate() {
        let leg = &frag.legs[i];
        let route = &routes[&i];
        let axis = *route.last().unwrap();
        verts.push(DVertex {
            id: format!("b{}", slot + 1),
            pos: axis,
            boundary: true,
        });
        let b = nv + slot;
        let mut out = vec![frag.verts[leg.vertex].1];
        out.extend_from_slice(route);
        let flip = flips.get(i).copied().unwrap_or(false);
        let inward = leg.inward ^ flip;
        let weight = if flip {
            n as i64 - leg.weight
        } else {
            leg.weight
        };
        let e = if inward {
            out.reverse();
            DEdge {
                tail: Some(b),
                head: Some(leg.vertex),
                weight,
                points: out,
            }
        } else {
            DEdge {
                tail: Some(leg.vertex),
                head: Some(b),
                weight,
                points: out,
            }
        };
        edges.push(e);
    }
    (verts, edges)
}

fn flip_dedge(e: &mut DEdge, n: i64) {
    std::mem::swap(&mut e.tail, &mut e.head);
    e.weight = n - e.weight;
    e.points.reverse();
}

/// Applies the zero rule and smoothing. `None` means the term vanishes.
fn realize(n: usize, verts: Vec<DVertex>, edges: Vec<DEdge>) -> Result<Option<WebGraph>> {
    let ni = n as i64;
    if edges.iter().any(|e| e.weight < 0 || e.weight > ni) {
        return Ok(None);
    }
    let mut edges: Vec<Option<DEdge>> = edges
        .into_iter()
        .map(|e| (e.weight != 0 && e.weight != ni).then_some(e))
        .collect();
    let mut alive = vec![true; verts.len()];
    let incident = |edges: &[Option<DEdge>], v: usize| -> Vec<usize> {
        let mut out = Vec::new();
        for (i, e) in edges.iter().enumerate() {
            if let Some(e) = e {
                if e.tail == Some(v) {
                    out.push(i);
                }
                if e.head == Some(v) {
                    out.push(i);
                }
            }
        }
        out
    };
    loop {
        let mut changed = false;
        for v in 0..verts.len() {
            if !alive[v] {
                continue;
            }
            let inc = incident(&edges, v);
            if verts[v].boundary {
                match inc.len() {
                    0 => alive[v] = false,
                    1 => {}
                    _ => {
                        return Err(Error::InvalidWeb(format!(
                            "boundary `{}` with several edges",
                            verts[v].id
                        )))
                    }
                }
                continue;
            }
            match inc.len() {
                0 => {
                    alive[v] = false;
                    changed = true;
                }
                2 if inc[0] == inc[1] => {
                    // A self-loop through a smoothed vertex closes up.
                    let mut e = edges[inc[0]].take().unwrap();
                    e.points.pop();
                    e.tail = None;
                    e.head = None;
                    edges.push(Some(e));
                    alive[v] = false;
                    changed = true;
                }
                2 => {
                    let mut a = edges[inc[0]].take().unwrap();
                    let mut b = edges[inc[1]].take().unwrap();
                    if a.head != Some(v) {
                        flip_dedge(&mut a, ni);
                    }
                    if b.tail != Some(v) {
                        flip_dedge(&mut b, ni);
                    }
                    if a.weight != b.weight {
                        return Err(Error::InvalidWeb(format!(
                            "weights disagree when smoothing `{}`",
                            verts[v].id
                        )));
                    }
                    let mut points = a.points;
                    points.extend_from_slice(&b.points[1..]);
                    edges[inc[0]] = Some(DEdge {
                        tail: a.tail,
                        head: b.head,
                        weight: a.weight,
                        points,
                    });
                    alive[v] = false;
                    changed = true;
                }
                3 => {}
                k => {
                    return Err(Error::InvalidWeb(format!(
                        "vertex `{}` left with {k} edges",
                        verts[v].id
                    )))
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut g = WebGraph {
        n,
        boundary: Vec::new(),
        interior: Vec::new(),
        edges: Vec::new(),
    };
    for (v, d) in verts.iter().enumerate() {
        if !alive[v] {
            continue;
        }
        if d.boundary {
            g.boundary.push(BoundaryVertex {
                id: d.id.clone(),
                x: d.pos[0],
            });
        } else {
            g.interior.push(InteriorVertex {
                id: d.id.clone(),
                x: d.pos[0],
                y: d.pos[1],
            });
        }
    }
    for (i, e) in edges.into_iter().flatten().enumerate() {
        let closed = e.tail.is_none();
        let via = if closed {
            e.points.clone()
        } else {
            e.points[1..e.points.len() - 1].to_vec()
        };
        g.edges.push(Edge {
            id: format!("e{}", i + 1),
            tail: e.tail.map(|t| verts[t].id.clone()),
            head: e.head.map(|h| verts[h].id.clone()),
            weight: e.weight,
            via: dedup(via),
        });
    }
    let report = g.validate();
    if !report.is_valid() {
        return Err(Error::InvalidWeb(format!(
            "realized relation web is invalid: {report}"
        )));
    }
    Ok(Some(g))
}

fn dedup(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.dedup();
    pts
}

// ---------------------------------------------------------------------------
// Fragments of each relation.

fn bigon_fragment(k: i64, l: i64) -> Fragment {
    let mut f = Fragment::default();
    let lower = f.vertex("v1", 1.0, -3.0);
    let upper = f.vertex("v2", 1.0, -1.5);
    f.edge(lower, upper, k, &[[0.4, -2.25]]);
    f.edge(lower, upper, l, &[[1.6, -2.25]]);
    f.leg(Side::Bottom, lower, k + l, true, 1.0);
    f.leg(Side::Top, upper, k + l, false, 1.0);
    f
}

/// Parallel strands of the given weights pointing up, at feet `0, 2, ...`.
fn strands(weights: &[i64]) -> Fragment {
    let mut f = Fragment::default();
    let feet: Vec<f64> = if weights.len() == 1 {
        vec![1.0]
    } else {
        (0..weights.len()).map(|i| 2.0 * i as f64).collect()
    };
    let ids: Vec<usize> = feet
        .iter()
        .enumerate()
        .map(|(i, &x)| f.vertex(&format!("p{}", i + 1), x, -2.25))
        .collect();
    for (i, &w) in weights.iter().enumerate() {
        f.leg(Side::Bottom, ids[i], w, true, feet[i]);
    }
    for (i, &w) in weights.iter().enumerate() {
        f.leg(Side::Top, ids[i], w, false, feet[i]);
    }
    f
}

fn ih_left(k: i64, l: i64, m: i64) -> Fragment {
    let mut f = Fragment::default();
    let low = f.vertex("v1", 0.5, -3.0);
    let top = f.vertex("v2", 1.0, -2.0);
    f.edge(low, top, k + l, &[]);
    f.leg(Side::Bottom, low, k, true, 0.0);
    f.leg(Side::Bottom, low, l, true, 1.0);
    f.leg(Side::Bottom, top, m, true, 2.0);
    f.leg(Side::Top, top, k + l + m, false, 1.0);
    f
}

fn ih_right(k: i64, l: i64, m: i64) -> Fragment {
    let mut f = Fragment::default();
    let low = f.vertex("v1", 1.5, -3.0);
    let top = f.vertex("v2", 1.0, -2.0);
    f.edge(low, top, l + m, &[]);
    f.leg(Side::Bottom, top, k, true, 0.0);
    f.leg(Side::Bottom, low, l, true, 1.0);
    f.leg(Side::Bottom, low, m, true, 2.0);
    f.leg(Side::Top, top, k + l + m, false, 1.0);
    f
}

/// A square with bottom rung `bottom` and top rung `top` (positive means left to right).
fn square(
    k: i64,
    l: i64,
    bottom: i64,
    top: i64,
    left: i64,
    right: i64,
    out_left: i64,
    out_right: i64,
) -> Fragment {
    let mut f = Fragment::default();
    let a = f.vertex("a", 0.0, -3.0);
    let b = f.vertex("b", 2.0, -3.0);
    let c = f.vertex("c", 0.0, -1.5);
    let d = f.vertex("d", 2.0, -1.5);
    if bottom >= 0 {
        f.edge(a, b, bottom, &[]);
    } else {
        f.edge(b, a, -bottom, &[]);
    }
    if top >= 0 {
        f.edge(c, d, top, &[]);
    } else {
        f.edge(d, c, -top, &[]);
    }
    f.edge(a, c, left, &[]);
    f.edge(b, d, right, &[]);
    f.leg(Side::Bottom, a, k, true, 0.0);
    f.leg(Side::Bottom, b, l, true, 2.0);
    f.leg(Side::Top, c, out_left, false, 0.0);
    f.leg(Side::Top, d, out_right, false, 2.0);
    f
}

fn rung(k: i64, l: i64, across: i64) -> Fragment {
    let mut f = Fragment::default();
    let a = f.vertex("a", 0.0, -3.0);
    let b = f.vertex("b", 2.0, -3.0);
    f.edge(a, b, across, &[]);
    f.leg(Side::Bottom, a, k, true, 0.0);
    f.leg(Side::Bottom, b, l, true, 2.0);
    f.leg(Side::Top, a, k - across, false, 0.0);
    f.leg(Side::Top, b, l + across, false, 2.0);
    f
}

/// Square in switch form: the bottom rung is drawn left to right and the top
/// rung right to left; a negative weight reverses that rung.
fn switch_fragment(
    k: i64,
    l: i64,
    bottom_lr: i64,
    top_rl: i64,
    left: i64,
    right: i64,
    out_left: i64,
    out_right: i64,
) -> Fragment {
    square(k, l, bottom_lr, -top_rl, left, right, out_left, out_right)
}

fn closed_loop(n: usize, k: i64) -> Result<Option<WebGraph>> {
    let pts = vec![[0.0, -2.0], [1.0, -2.0], [1.0, -1.0], [0.0, -1.0]];
    let e = DEdge {
        tail: None,
        head: None,
        weight: k,
        points: pts,
    };
    realize(n, Vec::new(), vec![e])
}

// ---------------------------------------------------------------------------

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Parameter(format!("n = {n} must be at least 2")));
    }
    Ok(())
}

fn check_count(name: &str, v: i64) -> Result<()> {
    if v < 0 {
        return Err(Error::Parameter(format!(
            "{name} = {v} must be nonnegative"
        )));
    }
    Ok(())
}

/// `[a choose b]` at `-q`, zero for negative `b`.
fn binom_neg_q(a: i64, b: i64) -> LaurentPoly {
    if b < 0 {
        LaurentPoly::zero()
    } else {
        subst_neg_q(&qbinom(a, b))
    }
}

fn params(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

type Side2 = Vec<(LaurentPoly, Fragment)>;

fn assemble(
    rule: Rule,
    n: usize,
    ps: BTreeMap<String, i64>,
    lhs: Side2,
    rhs: Side2,
    flips: &[bool],
) -> Result<RelationInstance> {
    let side = |terms: Side2| -> Result<Vec<Term>> {
        let mut out = Vec::new();
        for (coeff, frag) in terms {
            if coeff.is_zero() {
                continue;
            }
            let (v, e) = draft(n, &frag, flips);
            if let Some(web) = realize(n, v, e)? {
                out.push(Term { coeff, web });
            }
        }
        Ok(out)
    };
    Ok(RelationInstance {
        rule,
        params: ps,
        lhs: side(lhs)?,
        rhs: side(rhs)?,
    })
}

/// Bigon removal: the bigon with sides `k`, `l` equals `[k+l choose l]` at `-q` times a strand.
pub fn make_bigon(n: usize, k: i64, l: i64) -> Result<RelationInstance> {
    make_bigon_flipped(n, k, l, &[])
}

pub fn make_bigon_flipped(n: usize, k: i64, l: i64, flips: &[bool]) -> Result<RelationInstance> {
    check_n(n)?;
    let lhs = vec![(LaurentPoly::one(), bigon_fragment(k, l))];
    let rhs = vec![(binom_neg_q(k + l, l), strands(&[k + l]))];
    assemble(
        Rule::Bigon,
        n,
        params(&[("n", n as i64), ("k", k), ("l", l)]),
        lhs,
        rhs,
        flips,
    )
}

/// Associativity of merging three strands of weights `k`, `l`, `m`.
#[allow(non_snake_case)]
pub fn make_IH(n: usize, k: i64, l: i64, m: i64) -> Result<RelationInstance> {
    make_ih_flipped(n, k, l, m, &[])
}

pub fn make_ih_flipped(
    n: usize,
    k: i64,
    l: i64,
    m: i64,
    flips: &[bool],
) -> Result<RelationInstance> {
    check_n(n)?;
    let lhs = vec![(LaurentPoly::one(), ih_left(k, l, m))];
    let rhs = vec![(LaurentPoly::one(), ih_right(k, l, m))];
    assemble(
        Rule::Ih,
        n,
        params(&[("n", n as i64), ("k", k), ("l", l), ("m", m)]),
        lhs,
        rhs,
        flips,
    )
}

/// Two rungs `s` then `r`, both left to right, collapse to one rung `r+s`.
pub fn make_square_removal(n: usize, k: i64, l: i64, r: i64, s: i64) -> Result<RelationInstance> {
    make_square_removal_flipped(n, k, l, r, s, &[])
}

pub fn make_square_removal_flipped(
    n: usize,
    k: i64,
    l: i64,
    r: i64,
    s: i64,
    flips: &[bool],
) -> Result<RelationInstance> {
    check_n(n)?;
    check_count("r", r)?;
    check_count("s", s)?;
    let lhs = vec![(
        LaurentPoly::one(),
        square(k, l, s, r, k - s, l + s, k - r - s, l + r + s),
    )];
    let rhs = vec![(binom_neg_q(r + s, r), rung(k, l, r + s))];
    let ps = params(&[("n", n as i64), ("k", k), ("l", l), ("r", r), ("s", s)]);
    assemble(Rule::SquareRemoval, n, ps, lhs, rhs, flips)
}

/// Unit rungs: the square equals the switched square plus `[k-l]` at `-q` times two strands.
pub fn make_square_switch_unit(n: usize, k: i64, l: i64) -> Result<RelationInstance> {
    make_square_switch_unit_flipped(n, k, l, &[])
}

pub fn make_square_switch_unit_flipped(
    n: usize,
    k: i64,
    l: i64,
    flips: &[bool],
) -> Result<RelationInstance> {
    check_n(n)?;
    let lhs = vec![(
        LaurentPoly::one(),
        switch_fragment(k, l, 1, 1, k - 1, l + 1, k, l),
    )];
    let rhs = vec![
        (
            LaurentPoly::one(),
            switch_fragment(k, l, -1, -1, k + 1, l - 1, k, l),
        ),
        (subst_neg_q(&qint(k - l)), strands(&[k, l])),
    ];
    assemble(
        Rule::SquareSwitch,
        n,
        params(&[("n", n as i64), ("k", k), ("l", l)]),
        lhs,
        rhs,
        flips,
    )
}

/// General rungs: bottom `s` left to right, top `r` right to left, expanded over `t`.
pub fn make_square_switch_general(
    n: usize,
    k: i64,
    l: i64,
    r: i64,
    s: i64,
) -> Result<RelationInstance> {
    make_square_switch_general_flipped(n, k, l, r, s, &[])
}

pub fn make_square_switch_general_flipped(
    n: usize,
    k: i64,
    l: i64,
    r: i64,
    s: i64,
    flips: &[bool],
) -> Result<RelationInstance> {
    check_n(n)?;
    check_count("r", r)?;
    check_count("s", s)?;
    let top = k + r - s;
    let lhs = vec![(
        LaurentPoly::one(),
        switch_fragment(k, l, s, r, k - s, l + s, top, l - r + s),
    )];
    let big = k - l + r - s;
    let rhs = (0..=r.min(s))
        .map(|t| {
            // The displayed sign (-1)^{(big-1)t} is exactly what the -q substitution does to the binomial.
            let coeff = binom_neg_q(big, t);
            (
                coeff,
                switch_fragment(
                    k,
                    l,
                    -(r - t),
                    -(s - t),
                    k + r - t,
                    l - r + t,
                    top,
                    l - r + s,
                ),
            )
        })
        .collect();
    let ps = params(&[("n", n as i64), ("k", k), ("l", l), ("r", r), ("s", s)]);
    assemble(Rule::SquareSwitchGeneral, n, ps, lhs, rhs, flips)
}

/// A vertexless loop of weight `k` equals `[n choose k]` at `-q`.
pub fn make_loop(n: usize, k: i64) -> Result<RelationInstance> {
    check_n(n)?;
    let lhs = closed_loop(n, k)?
        .map(|web| Term {
            coeff: LaurentPoly::one(),
            web,
        })
        .into_iter()
        .collect();
    let coeff = binom_neg_q(n as i64, k);
    let rhs = if coeff.is_zero() {
        Vec::new()
    } else {
        vec![Term {
            coeff,
            web: WebGraph {
                n,
                boundary: vec![],
                interior: vec![],
                edges: vec![],
            },
        }]
    };
    Ok(RelationInstance {
        rule: Rule::Loop,
        params: params(&[("n", n as i64), ("k", k)]),
        lhs,
        rhs,
    })
}

/// The bigon whose outer legs have weight `n`: after smoothing, a circle made
/// of a `k` edge and a reversed `n-k` edge, equal to `(-1)^{k(n-k)} [n choose k]`.
pub fn make_circle(n: usize, k: i64) -> Result<RelationInstance> {
    check_n(n)?;
    let ni = n as i64;
    let lhs = vec![(LaurentPoly::one(), bigon_fragment(k, ni - k))];
    let coeff = if (0..=ni).contains(&k) {
        let sign = if (k * (ni - k)) % 2 == 0 { 1 } else { -1 };
        qbinom(ni, k).scale(&num_bigint::BigInt::from(sign))
    } else {
        LaurentPoly::zero()
    };
    let rhs = vec![(coeff, Fragment::default())];
    assemble(
        Rule::Circle,
        n,
        params(&[("n", ni), ("k", k)]),
        lhs,
        rhs,
        &[],
    )
}

/// `G` against `G` with the listed edges flipped.
pub fn make_edge_flip<S: AsRef<str>>(g: &WebGraph, ids: &[S]) -> Result<RelationInstance> {
    let flipped = g.flip_edges(ids)?;
    Ok(RelationInstance {
        rule: Rule::EdgeFlip,
        params: params(&[("n", g.n as i64), ("flipped", ids.len() as i64)]),
        lhs: vec![Term {
            coeff: LaurentPoly::one(),
            web: g.clone(),
        }],
        rhs: vec![Term {
            coeff: LaurentPoly::one(),
            web: flipped,
        }],
    })
}

fn side_vector(terms: &[Term]) -> Result<WebVector> {
    let parts: Vec<WebVector> = terms
        .par_iter()
        .map(|t| Ok(web_vector(&t.web)?.scale(&t.coeff)))
        .collect::<Result<_>>()?;
    Ok(parts.iter().fold(WebVector::zero(), |acc, v| acc.add(v)))
}

fn check_signatures(inst: &RelationInstance) -> Result<()> {
    let mut seen: Option<Vec<usize>> = None;
    for g in inst.webs() {
        let b = g.boundary_weight_vector()?;
        match &seen {
            None => seen = Some(b),
            Some(s) if *s != b => {
                return Err(Error::Signature(format!(
                    "{}: boundary {s:?} against {b:?}",
                    inst.label()
                )));
            }
            _ => {}
        }
    }
    Ok(())
}

/// `Σ lhs - Σ rhs`.
pub fn residual(inst: &RelationInstance) -> Result<WebVector> {
    check_signatures(inst)?;
    Ok(side_vector(&inst.lhs)?.sub(&side_vector(&inst.rhs)?))
}

/// True iff both sides have the same web vector.
pub fn verify(inst: &RelationInstance) -> Result<bool> {
    Ok(residual(inst)?.is_zero())
}

/// `f(G) = f(G with E flipped)`.
pub fn verify_edge_flip<S: AsRef<str>>(g: &WebGraph, ids: &[S]) -> Result<bool> {
    verify(&make_edge_flip(g, ids)?)
}

/// Every admissible instance of `rule` for `2 <= n <= max_n`: all left-hand
/// edge weights lie in `[0, n]`, and rung weights satisfy `r + s <= 3`.
pub fn relation_grid(rule: Rule, max_n: usize) -> Result<Vec<RelationInstance>> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        let ni = n as i64;
        let w = 0..=ni;
        match rule {
            Rule::Bigon => {
                for k in w.clone() {
                    for l in 0..=ni - k {
                        out.push(make_bigon(n, k, l)?);
                    }
                }
            }
            Rule::Ih => {
                for k in w.clone() {
                    for l in 0..=ni - k {
                        for m in 0..=ni - k - l {
                            out.push(make_IH(n, k, l, m)?);
                        }
                    }
                }
            }
            Rule::SquareRemoval => {
                for (k, l, r, s) in four(ni) {
                    if s <= k && r + s <= k && l + r + s <= ni {
                        out.push(make_square_removal(n, k, l, r, s)?);
                    }
                }
            }
            Rule::SquareSwitch => {
                for k in 1..=ni {
                    for l in 0..ni {
                        out.push(make_square_switch_unit(n, k, l)?);
                    }
                }
            }
            Rule::SquareSwitchGeneral => {
                for (k, l, r, s) in four(ni) {
                    let inside = |x: i64| (0..=ni).contains(&x);
                    if inside(k - s) && inside(l + s) && inside(k + r - s) && inside(l - r + s) {
                        out.push(make_square_switch_general(n, k, l, r, s)?);
                    }
                }
            }
            Rule::Loop => {
                for k in w.clone() {
                    out.push(make_loop(n, k)?);
                }
            }
            Rule::Circle => {
                for k in w.clone() {
                    out.push(make_circle(n, k)?);
                }
            }
            Rule::EdgeFlip => {
                for k in 1..ni {
                    let g = make_IH(n, k, 0, ni - k)?.lhs.remove(0).web;
                    let all: Vec<String> = g.edges.iter().map(|e| e.id.clone()).collect();
                    out.push(make_edge_flip(&g, &all)?);
                }
                for (k, l, r, s) in
                    four(ni).filter(|&(k, l, r, s)| r == 1 && s == 1 && k >= 1 && l < ni)
                {
                    let g = make_square_switch_general(n, k, l, r, s)?.lhs.remove(0).web;
                    for mask in 0u32..(1 << g.edges.len()) {
                        let ids: Vec<String> = g
                            .edges
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask >> i & 1 == 1)
                            .map(|(_, e)| e.id.clone())
                            .collect();
                        if mask % 7 == 0 {
                            out.push(make_edge_flip(&g, &ids)?);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn four(ni: i64) -> impl Iterator<Item = (i64, i64, i64, i64)> {
    (0..=ni).flat_map(move |k| {
        (0..=ni)
            .flat_map(move |l| (0..=3i64).flat_map(move |r| (0..=3 - r).map(move |s| (k, l, r, s))))
    })
}

/// Outcome of verifying one instance.
#[derive(Clone, Debug, Serialize)]
pub struct RelationOutcome {
    pub label: String,
    pub pass: bool,
    /// Text form of `lhs - rhs`; empty on success.
    pub residual: String,
}

/// Verifies every instance in parallel.
pub fn verify_all(instances: &[RelationInstance]) -> Result<Vec<RelationOutcome>> {
    instances
        .par_iter()
        .map(|inst| {
            let r = residual(inst)?;
            Ok(RelationOutcome {
                label: inst.label(),
                pass: r.is_zero(),
                residual: if r.is_zero() {
                    String::new()
                } else {
                    r.to_text()
                },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn assert_holds(inst: &RelationInstance) {
        let r = residual(inst).unwrap();
        assert!(
            r.is_zero(),
            "{} fails, residual {}",
            inst.label(),
            r.to_text()
        );
    }

    #[test]
    fn stated_coefficients() {
        let lp = make_loop(4, 2).unwrap();
        let expect = LaurentPoly::from_terms([
            (4, 1.into()),
            (2, 1.into()),
            (0, 2.into()),
            (-2, 1.into()),
            (-4, 1.into()),
        ]);
        assert_eq!(lp.rhs[0].coeff, expect);
        let b = make_bigon(3, 1, 1).unwrap();
        assert_eq!(
            b.rhs[0].coeff,
            LaurentPoly::from_terms([(1, (-1).into()), (-1, (-1).into())])
        );
        let sw = make_square_switch_unit(4, 2, 1).unwrap();
        assert!(sw.rhs[1].coeff.is_one());
    }

    #[test]
    fn bigon_grid() {
        for n in 2..=4usize {
            for k in 1..n as i64 {
                for l in 1..=n as i64 - k {
                    let inst = make_bigon(n, k, l).unwrap();
                    assert_eq!(inst.lhs.len(), 1);
                    assert_holds(&inst);
                }
            }
        }
    }

    #[test]
    fn ih_grid_to_five() {
        for inst in relation_grid(Rule::Ih, 5).unwrap() {
            assert_holds(&inst);
        }
    }

    #[test]
    fn square_relations_at_four() {
        for rule in [
            Rule::SquareRemoval,
            Rule::SquareSwitch,
            Rule::SquareSwitchGeneral,
        ] {
            let grid = relation_grid(rule, 4).unwrap();
            assert!(!grid.is_empty());
            for inst in &grid {
                assert_holds(inst);
            }
        }
    }

    #[test]
    fn loops_and_circles() {
        for n in 2..=5usize {
            for k in 0..=n as i64 {
                assert_holds(&make_loop(n, k).unwrap());
                let c = make_circle(n, k).unwrap();
                assert!(c.lhs.iter().all(|t| t.web.boundary.is_empty()));
                assert_holds(&c);
            }
        }
        // Out-of-range weights vanish on both sides.
        let gone = make_loop(3, 4).unwrap();
        assert!(gone.lhs.is_empty() && gone.rhs.is_empty());
    }

    #[test]
    fn smoothing_builds_the_expected_shapes() {
        // k + l = n erases the legs and closes a loop.
        let c = make_bigon(4, 1, 3).unwrap();
        let g = &c.lhs[0].web;
        assert!(g.boundary.is_empty() && g.interior.is_empty());
        assert_eq!(g.edges.len(), 1);
        assert!(g.edges[0].is_loop());
        // A zero rung leaves two parallel strands.
        let s = make_square_removal(4, 2, 1, 0, 0).unwrap();
        assert!(s.lhs[0].web.interior.is_empty());
        assert_eq!(s.lhs[0].web.edges.len(), 2);
        // A negative weight kills the term.
        let sw = make_square_switch_general(4, 3, 1, 1, 3).unwrap();
        assert!(sw.lhs.is_empty() || sw.lhs.len() == 1);
        assert!(make_square_removal(4, 2, 1, -1, 0).is_err());
        assert!(make_loop(1, 0).is_err());
    }

    #[test]
    fn zero_rule_terms_still_balance() {
        // t = 0 term has a weight-(k+r) vertical above n, so only smaller t survive.
        let inst = make_square_switch_general(4, 3, 1, 2, 1).unwrap();
        assert!(inst.rhs.len() < 2 || inst.rhs.iter().all(|t| t.web.validate().is_valid()));
        assert_holds(&inst);
        let unit = make_square_switch_unit(4, 4, 0).unwrap();
        assert_holds(&unit);
    }

    #[test]
    fn leg_flip_orbit_of_square_switch() {
        for (k, l, r, s) in [(2, 1, 1, 1), (2, 2, 2, 1), (3, 1, 1, 2), (1, 2, 1, 1)] {
            for mask in 0..16u32 {
                let flips: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
                assert_holds(&make_square_switch_general_flipped(4, k, l, r, s, &flips).unwrap());
            }
        }
        for mask in 0..16u32 {
            let flips: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
            assert_holds(&make_square_switch_unit_flipped(4, 3, 1, &flips).unwrap());
            assert_holds(&make_ih_flipped(4, 1, 1, 2, &flips).unwrap());
        }
    }

    #[test]
    fn wrong_sign_is_caught() {
        let mut inst = make_square_switch_unit(4, 3, 1).unwrap();
        inst.rhs[1].coeff = -inst.rhs[1].coeff.clone();
        assert!(!verify(&inst).unwrap());
        // k-l+r-s = 2: applying the displayed sign on top of the -q substitution breaks the t = 1 term.
        let mut g = make_square_switch_general(4, 3, 1, 1, 1).unwrap();
        assert_eq!(g.rhs.len(), 2);
        assert_holds(&g);
        g.rhs[1].coeff = -g.rhs[1].coeff.clone();
        assert!(!verify(&g).unwrap());
        let mut b = make_bigon(3, 1, 1).unwrap();
        b.rhs[0].coeff = qint(2);
        assert!(!verify(&b).unwrap());
    }

    #[test]
    fn mismatched_boundaries_error() {
        let mut inst = make_bigon(3, 1, 1).unwrap();
        inst.rhs[0].web = corpus::cup(3, 1);
        assert!(matches!(verify(&inst), Err(Error::Signature(_))));
    }

    #[test]
    fn edge_flips() {
        let g = corpus::running_example();
        assert!(verify_edge_flip(&g, &corpus::running_example_flip_set()).unwrap());
        assert!(verify_edge_flip::<&str>(&g, &[]).unwrap());
        let t = crate::tableauweb::StandardTableau::from_word_str(3, "112233").unwrap();
        let (tw, _) = crate::tableauweb::web_from_tableau(&t).unwrap();
        let all: Vec<String> = tw.edges.iter().map(|e| e.id.clone()).collect();
        assert!(verify_edge_flip(&tw, &all).unwrap());
        for inst in relation_grid(Rule::EdgeFlip, 3).unwrap() {
            assert_holds(&inst);
        }
    }

    #[test]
    fn redrawing_keeps_relations() {
        for inst in [
            make_square_switch_unit(4, 2, 1).unwrap(),
            make_IH(4, 1, 2, 1).unwrap(),
            make_bigon(4, 2, 1).unwrap(),
        ] {
            assert_holds(&inst.jittered(11, 0.05));
        }
    }

    #[test]
    fn rule_names_roundtrip() {
        for r in Rule::ALL {
            assert_eq!(r.name().parse::<Rule>().unwrap(), r);
        }
        assert!("kekule".parse::<Rule>().is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn redrawn_instances_still_verify(rule_index in 0usize..8, pick in 0usize..1000, seed in any::<u64>()) {
            let grid = relation_grid(Rule::ALL[rule_index % Rule::ALL.len()], 3).unwrap();
            let inst = grid[pick % grid.len()].jittered(seed, 0.03);
            prop_assume!(inst.webs().all(|g| g.validate().is_valid()));
            prop_assert!(verify(&inst).unwrap(), "{}", inst.label());
        }
    }
}
