//! Basis webs from standard rectangular tableaux.
//!
//! A tableau marks boundary position `i` with the row holding entry `i`.
//! Stack matching of marks `c` against `c+1` gives the arcs of color `c`;
//! drawing the arcs and resolving their meeting points yields a web together
//! with the stranding the arcs induce.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariantvec::web_vector;
use crate::qlaurent::{rank_over_q, LaurentPoly};
use crate::stranding::Stranding;
use crate::tensorspace::{BinaryWord, TensorMonomial};
use crate::webgraph::{BoundaryVertex, Edge, InteriorVertex, WebGraph};

/// An `n × c` array of the entries `1..=nc`, stored row by row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StandardTableau {
    pub rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    /// Builds the tableau whose entry `i` sits in row `word[i-1]` (rows numbered from 1).
    pub fn from_word(n: usize, word: &[usize]) -> Result<StandardTableau> {
        let mut rows = vec![Vec::new(); n];
        for (i, &r) in word.iter().enumerate() {
            if r == 0 || r > n {
                return Err(Error::Tableau(format!("letter {r} outside 1..={n}")));
            }
            rows[r - 1].push(i + 1);
        }
        let t = StandardTableau { rows };
        if !validate_tableau(&t) {
            return Err(Error::Tableau(format!(
                "word {word:?} is not a rectangular standard filling"
            )));
        }
        Ok(t)
    }

    /// Parses a word of decimal digits, as in `12132344`.
    pub fn from_word_str(n: usize, word: &str) -> Result<StandardTableau> {
        let letters = word
            .chars()
            .map(|ch| {
                ch.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::Parse(format!("bad letter {ch:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        StandardTableau::from_word(n, &letters)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn columns(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Row (from 1) of every entry, in entry order.
    pub fn word(&self) -> Vec<usize> {
        let mut w = vec![0; self.size()];
        for (r, row) in self.rows.iter().enumerate() {
            for &e in row {
                if (1..=w.len()).contains(&e) {
                    w[e - 1] = r + 1;
                }
            }
        }
        w
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("tableau serializes")
    }

    pub fn from_json_str(s: &str) -> Result<StandardTableau> {
        let t: StandardTableau =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if !validate_tableau(&t) {
            return Err(Error::Tableau("not a rectangular standard tableau".into()));
        }
        Ok(t)
    }
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|e| format!("{e:>3}")).collect();
            write!(f, "{}", cells.join(""))?;
        }
        Ok(())
    }
}

/// Rectangular shape with at least two rows, entries `1..=nc` once each,
/// rows and columns strictly increasing.
pub fn validate_tableau(t: &StandardTableau) -> bool {
    let (n, c) = (t.n(), t.columns());
    if n < 2 || c == 0 || t.rows.iter().any(|r| r.len() != c) {
        return false;
    }
    let mut seen = vec![false; n * c + 1];
    for &e in t.rows.iter().flatten() {
        if e == 0 || e > n * c || seen[e] {
            return false;
        }
        seen[e] = true;
    }
    let rows_ok = t.rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
    let cols_ok = (1..n).all(|i| (0..c).all(|j| t.rows[i - 1][j] < t.rows[i][j]));
    rows_ok && cols_ok
}

/// Every standard tableau of shape `n × c`, in lex order of words.
pub fn standard_tableaux(n: usize, c: usize) -> Vec<StandardTableau> {
    fn go(
        n: usize,
        c: usize,
        lens: &mut Vec<usize>,
        word: &mut Vec<usize>,
        out: &mut Vec<StandardTableau>,
    ) {
        if word.len() == n * c {
            out.push(
                StandardTableau::from_word(n, word).expect("enumeration yields standard fillings"),
            );
            return;
        }
        for r in 0..n {
            if lens[r] < c && (r == 0 || lens[r - 1] > lens[r]) {
                lens[r] += 1;
                word.push(r + 1);
                go(n, c, lens, word, out);
                word.pop();
                lens[r] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    if n >= 2 && c >= 1 {
        go(n, c, &mut vec![0; n], &mut Vec::new(), &mut out);
    }
    out
}

/// Number of standard tableaux of shape `n × c`, by enumeration.
pub fn count_syt(n: usize, c: usize) -> usize {
    standard_tableaux(n, c).len()
}

/// The hook-length count for the `n × c` rectangle.
pub fn hook_length_count(n: usize, c: usize) -> u128 {
    let mut hooks: Vec<u128> = Vec::new();
    for i in 0..n {
        for j in 0..c {
            hooks.push(((c - j - 1) + (n - i - 1) + 1) as u128);
        }
    }
    // (nc)! / Π hooks, dividing as we go to stay small.
    let mut num: Vec<u128> = (1..=(n * c) as u128).collect();
    for h in hooks {
        let mut h = h;
        for x in num.iter_mut() {
            let g = gcd(*x, h);
            *x /= g;
            h /= g;
            if h == 1 {
                break;
            }
        }
    }
    num.into_iter().product()
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Fillings of the `n × (Σk)/n` rectangle with content `1^{k_1} 2^{k_2} …`,
/// strictly increasing along rows and weakly down columns.
pub fn count_row_strict(n: usize, k: &[usize]) -> u128 {
    let total: usize = k.iter().sum();
    if n == 0 || total % n != 0 || k.iter().any(|&x| x > n) {
        return 0;
    }
    let width = total / n;
    // Row lengths after each value; a value goes into distinct rows and the
    // lengths must stay a partition bounded by the width.
    let mut memo: BTreeMap<(usize, Vec<usize>), u128> = BTreeMap::new();
    fn go(
        i: usize,
        lens: Vec<usize>,
        n: usize,
        width: usize,
        k: &[usize],
        memo: &mut BTreeMap<(usize, Vec<usize>), u128>,
    ) -> u128 {
        if i == k.len() {
            return u128::from(lens.iter().all(|&l| l == width));
        }
        if let Some(&v) = memo.get(&(i, lens.clone())) {
            return v;
        }
        let mut total = 0;
        for mask in 0u64..(1u64 << n) {
            if mask.count_ones() as usize != k[i] {
                continue;
            }
            let next: Vec<usize> = (0..n)
                .map(|r| lens[r] + ((mask >> r) & 1) as usize)
                .collect();
            if next.iter().any(|&l| l > width) || next.windows(2).any(|w| w[0] < w[1]) {
                continue;
            }
            total += go(i + 1, next, n, width, k, memo);
        }
        memo.insert((i, lens), total);
        total
    }
    go(0, vec![0; n], n, width, k, &mut memo)
}

/// An arc of color `color` joining `opener < closer`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColoredArc {
    pub color: usize,
    pub opener: usize,
    pub closer: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulticolorMatching {
    pub m: usize,
    pub arcs: Vec<ColoredArc>,
}

impl MulticolorMatching {
    pub fn arcs_of_color(&self, c: usize) -> Vec<(usize, usize)> {
        self.arcs
            .iter()
            .filter(|a| a.color == c)
            .map(|a| (a.opener, a.closer))
            .collect()
    }
}

/// For each color `c`, a position marked `c+1` closes the nearest unmatched `c` to its left.
pub fn matching_from_tableau(t: &StandardTableau) -> Result<MulticolorMatching> {
    if !validate_tableau(t) {
        return Err(Error::Tableau("not a rectangular standard tableau".into()));
    }
    let word = t.word();
    let n = t.n();
    let mut arcs = Vec::new();
    for c in 1..n {
        let mut stack = Vec::new();
        for (i, &r) in word.iter().enumerate() {
            if r == c {
                stack.push(i + 1);
            } else if r == c + 1 {
                let o = stack.pop().ok_or_else(|| {
                    Error::Tableau(format!("position {} has no partner of color {c}", i + 1))
                })?;
                arcs.push(ColoredArc {
                    color: c,
                    opener: o,
                    closer: i + 1,
                });
            }
        }
        if let Some(o) = stack.pop() {
            return Err(Error::Tableau(format!(
                "position {o} has no partner of color {c}"
            )));
        }
    }
    arcs.sort_by_key(|a| (a.color, a.closer));
    Ok(MulticolorMatching {
        m: word.len(),
        arcs,
    })
}

// ---------------------------------------------------------------------------
// Drawing and resolution

/// Depth of the interior vertex placed under a boundary point with two arcs.
const FOOT_DEPTH: f64 = 0.1;
/// Distance from a crossing to each of its two new vertices.
const CROSS_OFFSET: f64 = 0.05;
const DEFAULT_EPS: f64 = 1e-3;
const RETRIES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Pt2 {
    x: f64,
    y: f64,
}

impl Pt2 {
    fn add(self, o: Pt2, s: f64) -> Pt2 {
        Pt2 {
            x: self.x + s * o.x,
            y: self.y + s * o.y,
        }
    }
    fn sub(self, o: Pt2) -> Pt2 {
        Pt2 {
            x: self.x - o.x,
            y: self.y - o.y,
        }
    }
    fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
    fn cross(self, o: Pt2) -> f64 {
        self.x * o.y - self.y * o.x
    }
}

/// An arc drawn as a V, traversed from closer to opener.
struct DrawnArc {
    arc: ColoredArc,
    /// Closer foot, apex, opener foot.
    path: [Pt2; 3],
}

impl DrawnArc {
    fn new(arc: ColoredArc, eps: f64) -> DrawnArc {
        let slope = 1.0 + arc.color as f64 * eps;
        let (i, j) = (arc.opener as f64, arc.closer as f64);
        let apex = Pt2 {
            x: (i + j) / 2.0,
            y: -FOOT_DEPTH - slope * (j - i) / 2.0,
        };
        DrawnArc {
            arc,
            path: [
                Pt2 {
                    x: j,
                    y: -FOOT_DEPTH,
                },
                apex,
                Pt2 {
                    x: i,
                    y: -FOOT_DEPTH,
                },
            ],
        }
    }

    fn leg_len(&self, leg: usize) -> f64 {
        self.path[leg + 1].sub(self.path[leg]).norm()
    }

    /// Arclength position of a point on `leg` at fraction `s`.
    fn arclen(&self, leg: usize, s: f64) -> f64 {
        (if leg == 1 { self.leg_len(0) } else { 0.0 }) + s * self.leg_len(leg)
    }

    fn point_at(&self, t: f64) -> Pt2 {
        let l0 = self.leg_len(0);
        if t <= l0 {
            self.path[0].add(self.path[1].sub(self.path[0]), t / l0)
        } else {
            let l1 = self.leg_len(1);
            self.path[1].add(self.path[2].sub(self.path[1]), (t - l0) / l1)
        }
    }

    fn direction_at(&self, t: f64) -> Pt2 {
        let leg = usize::from(t > self.leg_len(0));
        let d = self.path[leg + 1].sub(self.path[leg]);
        Pt2 {
            x: d.x / d.norm(),
            y: d.y / d.norm(),
        }
    }

    fn total(&self) -> f64 {
        self.leg_len(0) + self.leg_len(1)
    }
}

/// Proper intersection of two segments as fractions along each.
fn seg_intersection(a0: Pt2, a1: Pt2, b0: Pt2, b1: Pt2) -> Option<(f64, f64)> {
    let r = a1.sub(a0);
    let s = b1.sub(b0);
    let den = r.cross(s);
    if den.abs() < 1e-14 {
        return None;
    }
    let qp = b0.sub(a0);
    let t = qp.cross(s) / den;
    let u = qp.cross(r) / den;
    let tol = 1e-12;
    if (-tol..=1.0 + tol).contains(&t) && (-tol..=1.0 + tol).contains(&u) {
        Some((t, u))
    } else {
        None
    }
}

/// Where an arc meets another: arclength on this arc and the index of the crossing.
#[derive(Clone, Copy, Debug)]
struct Meeting {
    t: f64,
    crossing: usize,
}

struct Crossing {
    at: Pt2,
    /// Arc passing from upper right to lower left, and from lower right to upper left.
    falling: usize,
    rising: usize,
}

/// Finds all crossings; errors on same-color contact or degenerate placement.
fn find_crossings(drawn: &[DrawnArc]) -> Result<(Vec<Crossing>, Vec<Vec<Meeting>>)> {
    let mut crossings = Vec::new();
    let mut meetings = vec![Vec::new(); drawn.len()];
    for a in 0..drawn.len() {
        for b in a + 1..drawn.len() {
            let (da, db) = (&drawn[a], &drawn[b]);
            let mut hits = Vec::new();
            for la in 0..2 {
                for lb in 0..2 {
                    if let Some((s, u)) =
                        seg_intersection(da.path[la], da.path[la + 1], db.path[lb], db.path[lb + 1])
                    {
                        let p = da.path[la].add(da.path[la + 1].sub(da.path[la]), s);
                        // Arcs sharing a boundary position meet at its foot, which becomes a vertex.
                        let at_foot = p.y > -FOOT_DEPTH - 1e-9;
                        if !at_foot {
                            hits.push((la, s, lb, u, p));
                        }
                    }
                }
            }
            if hits.is_empty() {
                continue;
            }
            if da.arc.color == db.arc.color {
                return Err(Error::Geometry(format!(
                    "arcs {:?} and {:?} of one color meet",
                    da.arc, db.arc
                )));
            }
            if hits.len() > 1 {
                return Err(Error::Geometry(format!(
                    "arcs {:?} and {:?} meet more than once",
                    da.arc, db.arc
                )));
            }
            let (la, s, lb, u, p) = hits[0];
            // Leg 0 runs from the closer down to the apex (falling leftward);
            // leg 1 climbs from the apex to the opener.
            let (falling, rising) = match (la, lb) {
                (0, 1) => (a, b),
                (1, 0) => (b, a),
                _ => return Err(Error::Geometry("parallel legs cross".into())),
            };
            let k = crossings.len();
            crossings.push(Crossing {
                at: p,
                falling,
                rising,
            });
            meetings[a].push(Meeting {
                t: da.arclen(la, s),
                crossing: k,
            });
            meetings[b].push(Meeting {
                t: db.arclen(lb, u),
                crossing: k,
            });
        }
    }
    // Keep crossings apart from each other, the apex and the feet.
    let margin = 3.0 * CROSS_OFFSET;
    for (ai, ms) in meetings.iter_mut().enumerate() {
        ms.sort_by(|x, y| x.t.total_cmp(&y.t));
        let d = &drawn[ai];
        let apex_t = d.leg_len(0);
        for (idx, m) in ms.iter().enumerate() {
            if m.t < margin || d.total() - m.t < margin || (m.t - apex_t).abs() < margin {
                return Err(Error::Geometry(format!(
                    "crossing too close to a corner of arc {:?}",
                    d.arc
                )));
            }
            if idx > 0 && m.t - ms[idx - 1].t < 2.0 * margin {
                return Err(Error::Geometry(format!(
                    "crossings too close on arc {:?}",
                    d.arc
                )));
            }
        }
    }
    for i in 0..crossings.len() {
        for j in i + 1..crossings.len() {
            if crossings[i].at.sub(crossings[j].at).norm() < 4.0 * CROSS_OFFSET {
                return Err(Error::Geometry("two crossings nearly coincide".into()));
            }
        }
    }
    Ok((crossings, meetings))
}

/// A web drawn from a tableau, with the stranding induced by its arcs.
#[derive(Clone, Debug)]
pub struct TableauWeb {
    pub web: WebGraph,
    pub stranding: Stranding,
    pub matching: MulticolorMatching,
    /// Number of arc crossings resolved.
    pub crossings: usize,
}

/// Builds the basis web for `t`, retrying with other slope perturbations on degeneracy.
pub fn web_from_tableau(t: &StandardTableau) -> Result<(WebGraph, Stranding)> {
    let mut last = None;
    for attempt in 0..RETRIES {
        match web_from_tableau_with(t, DEFAULT_EPS * (attempt + 1) as f64) {
            Ok(tw) => return Ok((tw.web, tw.stranding)),
            Err(Error::Geometry(msg)) => last = Some(msg),
            Err(e) => return Err(e),
        }
    }
    Err(Error::Geometry(format!(
        "no nondegenerate drawing after {RETRIES} tries: {}",
        last.unwrap_or_default()
    )))
}

/// Builds the basis web with arc slopes `1 + color·eps`.
pub fn web_from_tableau_with(t: &StandardTableau, eps: f64) -> Result<TableauWeb> {
    let matching = matching_from_tableau(t)?;
    let n = t.n();
    let word = t.word();
    let m = word.len();
    let drawn: Vec<DrawnArc> = matching
        .arcs
        .iter()
        .map(|&a| DrawnArc::new(a, eps))
        .collect();
    let (crossings, meetings) = find_crossings(&drawn)?;

    let boundary: Vec<BoundaryVertex> = (1..=m)
        .map(|p| BoundaryVertex {
            id: format!("b{p}"),
            x: p as f64,
        })
        .collect();
    let mut interior = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut labels: Vec<BinaryWord> = Vec::new();
    let mut push_edge = |tail: &str,
                         head: &str,
                         weight: usize,
                         via: Vec<Pt2>,
                         label: BinaryWord,
                         edges: &mut Vec<Edge>| {
        edges.push(Edge {
            id: format!("e{}", edges.len() + 1),
            tail: Some(tail.to_string()),
            head: Some(head.to_string()),
            weight: weight as i64,
            via: via.iter().map(|p| [p.x, p.y]).collect(),
        });
        labels.push(label);
    };

    // Positions with two arcs get a vertex under the boundary and a weight-1 stub.
    let mut foot: Vec<Option<String>> = vec![None; m + 1];
    for p in 1..=m {
        let r = word[p - 1];
        if r > 1 && r < n {
            let id = format!("f{p}");
            interior.push(InteriorVertex {
                id: id.clone(),
                x: p as f64,
                y: -FOOT_DEPTH,
            });
            push_edge(
                &id,
                &format!("b{p}"),
                1,
                vec![],
                BinaryWord::unit(n, r),
                &mut edges,
            );
            foot[p] = Some(id);
        }
    }
    // Each crossing becomes an upper and a lower vertex joined by a short edge.
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (k, c) in crossings.iter().enumerate() {
        let (u, l) = (format!("u{}", k + 1), format!("l{}", k + 1));
        interior.push(InteriorVertex {
            id: u.clone(),
            x: c.at.x,
            y: c.at.y + CROSS_OFFSET,
        });
        interior.push(InteriorVertex {
            id: l.clone(),
            x: c.at.x,
            y: c.at.y - CROSS_OFFSET,
        });
        let (cf, cr) = (drawn[c.falling].arc.color, drawn[c.rising].arc.color);
        let lam = |c: usize| BinaryWord::lambda(n, c);
        // The falling arc runs down the short edge and the rising arc runs up it.
        if cr > cf {
            push_edge(
                &l,
                &u,
                cr - cf,
                vec![],
                BinaryWord::new(n, lam(cr).raw() & !lam(cf).raw()),
                &mut edges,
            );
        } else {
            push_edge(
                &u,
                &l,
                cf - cr,
                vec![],
                BinaryWord::new(n, lam(cf).raw() & !lam(cr).raw()),
                &mut edges,
            );
        }
        upper.push(u);
        lower.push(l);
    }
    // Arc segments between consecutive nodes.
    let attach = 2.0 * CROSS_OFFSET;
    for (ai, d) in drawn.iter().enumerate() {
        let a = d.arc;
        let label = BinaryWord::lambda(n, a.color);
        let end_node = |p: usize| -> (String, Vec<Pt2>) {
            match &foot[p] {
                Some(id) => (id.clone(), vec![]),
                None => (
                    format!("b{p}"),
                    vec![Pt2 {
                        x: p as f64,
                        y: -FOOT_DEPTH,
                    }],
                ),
            }
        };
        // (vertex at the start, via points leaving it, arclength where the segment starts)
        let (start_v, start_via) = end_node(a.closer);
        let mut cur_v = start_v;
        let mut cur_via = start_via;
        let mut cur_t = 0.0;
        for mt in &meetings[ai] {
            let c = &crossings[mt.crossing];
            let falling = c.falling == ai;
            let (entry_v, exit_v) = if falling {
                (&upper[mt.crossing], &lower[mt.crossing])
            } else {
                (&lower[mt.crossing], &upper[mt.crossing])
            };
            let mut via = cur_via.clone();
            let apex_t = d.leg_len(0);
            if cur_t < apex_t && mt.t > apex_t {
                via.push(d.path[1]);
            }
            via.push(d.point_at(mt.t - attach));
            push_edge(&cur_v, entry_v, a.color, via, label, &mut edges);
            cur_v = exit_v.clone();
            cur_via = vec![d.point_at(mt.t + attach)];
            cur_t = mt.t;
            debug_assert!(d.direction_at(mt.t).norm() > 0.0);
        }
        let (end_v, end_via) = end_node(a.opener);
        let mut via = cur_via;
        if cur_t < d.leg_len(0) {
            via.push(d.path[1]);
        }
        via.extend(end_via);
        push_edge(&cur_v, &end_v, a.color, via, label, &mut edges);
    }
    let web = WebGraph {
        n,
        boundary,
        interior,
        edges,
    };
    let report = web.validate();
    if !report.is_valid() {
        return Err(Error::Geometry(format!(
            "resolved web is invalid: {report}"
        )));
    }
    let stranding = Stranding::from_edge_order(&web, &labels);
    Ok(TableauWeb {
        web,
        stranding,
        matching,
        crossings: crossings.len(),
    })
}

/// The monomial `x_{row(1)} ⊗ … ⊗ x_{row(m)}`.
pub fn row_monomial(t: &StandardTableau) -> TensorMonomial {
    let n = t.n();
    TensorMonomial::plain(
        &t.word()
            .iter()
            .map(|&r| BinaryWord::unit(n, r))
            .collect::<Vec<_>>(),
    )
}

/// Rank of the tableau web vectors against the number of tableaux.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisRank {
    pub webs: usize,
    pub rank: usize,
    pub expected: usize,
}

/// Builds `f(G_T)` for every standard tableau on `n × (m/n)` and computes the rank of their coefficient matrix.
pub fn basis_rank(n: usize, m: usize) -> Result<BasisRank> {
    if n < 2 || m == 0 || m % n != 0 {
        return Err(Error::Parameter(format!(
            "need n ≥ 2 dividing m, got n = {n}, m = {m}"
        )));
    }
    let tabs = standard_tableaux(n, m / n);
    let vectors = tabs
        .par_iter()
        .map(|t| web_from_tableau(t).and_then(|(g, _)| web_vector(&g)))
        .collect::<Result<Vec<_>>>()?;
    let mut columns: BTreeMap<TensorMonomial, usize> = BTreeMap::new();
    for v in &vectors {
        for (mono, _) in v.terms() {
            let next = columns.len();
            columns.entry(mono.clone()).or_insert(next);
        }
    }
    let rows: Vec<Vec<LaurentPoly>> = vectors
        .iter()
        .map(|v| {
            let mut row = vec![LaurentPoly::zero(); columns.len()];
            for (mono, c) in v.terms() {
                row[columns[mono]] = c.clone();
            }
            row
        })
        .collect();
    Ok(BasisRank {
        webs: tabs.len(),
        rank: rank_over_q(&rows),
        expected: count_syt(n, m / n),
    })
}

/// True iff the tableau webs are linearly independent and as many as the invariant space's dimension.
pub fn basis_rank_check(n: usize, m: usize) -> bool {
    basis_rank(n, m)
        .map(|r| r.rank == r.expected && r.webs == r.expected)
        .unwrap_or(false)
}
