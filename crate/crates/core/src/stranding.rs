//! Strandings stored as binary edge labelings, their enumeration, flows and
//! the two canonical strandings (mod-n face distance and sl3 depth).

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensorspace::BinaryWord;
use crate::webgraph::faces::{dual_distance_with, faces_indexed};
use crate::webgraph::geometry::polyline_area2;
use crate::webgraph::{face_depths, Indexed, WebGraph};

/// A binary labeling keyed by edge id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Stranding {
    pub labels: BTreeMap<String, BinaryWord>,
}

#[derive(Serialize, Deserialize)]
struct StrandingJson {
    labels: BTreeMap<String, String>,
}

impl Stranding {
    /// Builds a stranding from labels listed in the web's edge order.
    pub fn from_edge_order(g: &WebGraph, labels: &[BinaryWord]) -> Stranding {
        Stranding {
            labels: g
                .edges
                .iter()
                .zip(labels)
                .map(|(e, b)| (e.id.clone(), *b))
                .collect(),
        }
    }

    /// Labels in the web's edge order.
    pub fn in_edge_order(&self, g: &WebGraph) -> Result<Vec<BinaryWord>> {
        if self.labels.len() != g.edges.len() {
            let extra: Vec<&String> = self.labels.keys().filter(|k| g.edge(k).is_none()).collect();
            return Err(Error::InvalidStranding(format!(
                "{} labels for {} edges (unknown: {extra:?})",
                self.labels.len(),
                g.edges.len()
            )));
        }
        g.edges
            .iter()
            .map(|e| {
                let b = self.labels.get(&e.id).copied().ok_or_else(|| {
                    Error::InvalidStranding(format!("missing label for edge `{}`", e.id))
                })?;
                if b.len() != g.n {
                    return Err(Error::LengthMismatch(format!(
                        "label of `{}` has length {}",
                        e.id,
                        b.len()
                    )));
                }
                Ok(b)
            })
            .collect()
    }

    pub fn label(&self, edge: &str) -> Option<BinaryWord> {
        self.labels.get(edge).copied()
    }

    pub fn to_json_string(&self) -> String {
        let j = StrandingJson {
            labels: self
                .labels
                .iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect(),
        };
        serde_json::to_string(&j).expect("stranding serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Stranding> {
        let j: StrandingJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut labels = BTreeMap::new();
        for (k, v) in j.labels {
            labels.insert(k, v.parse::<BinaryWord>()?);
        }
        Ok(Stranding { labels })
    }

    /// Replaces the labels of flipped edges by their complements.
    pub fn flipped(&self, edges: &[&str]) -> Stranding {
        let mut s = self.clone();
        for e in edges {
            if let Some(b) = s.labels.get_mut(*e) {
                *b = b.complement();
            }
        }
        s
    }
}

impl fmt::Display for Stranding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .labels
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrandDir {
    With,
    Against,
}

/// Color `c` runs with the edge iff `b_c - b_{c+1} = 1`, against iff it is `-1`.
pub fn binary_to_strands(b: &BinaryWord) -> BTreeMap<usize, StrandDir> {
    let mut out = BTreeMap::new();
    for c in 1..b.len() {
        match b.bit(c) - b.bit(c + 1) {
            1 => {
                out.insert(c, StrandDir::With);
            }
            -1 => {
                out.insert(c, StrandDir::Against);
            }
            _ => {}
        }
    }
    out
}

/// Rebuilds a word from its strands and last bit, checking the weight.
pub fn strands_to_binary(
    strands: &BTreeMap<usize, StrandDir>,
    n: usize,
    weight: usize,
    last_bit: bool,
) -> Result<BinaryWord> {
    let mut v = vec![0i64; n];
    v[n - 1] = last_bit as i64;
    for c in (1..n).rev() {
        let a = match strands.get(&c) {
            Some(StrandDir::With) => 1,
            Some(StrandDir::Against) => -1,
            None => 0,
        };
        v[c - 1] = v[c] + a;
    }
    if let Some(&c) = strands.keys().find(|&&c| c == 0 || c >= n) {
        return Err(Error::InvalidStranding(format!(
            "color {c} outside 1..{}",
            n - 1
        )));
    }
    let b = BinaryWord::from_int_vec(&v).ok_or_else(|| {
        Error::InvalidStranding(format!("strands do not come from a 0/1 word: {v:?}"))
    })?;
    if b.weight() != weight {
        return Err(Error::InvalidStranding(format!(
            "reconstructed weight {} differs from {weight}",
            b.weight()
        )));
    }
    Ok(b)
}

/// Signed sum `Σ σ·label` at a vertex is a multiple of the all-ones vector.
fn vertex_ok(n: usize, parts: impl Iterator<Item = (BinaryWord, i64)>) -> bool {
    let mut sum = [0i64; 64];
    for (b, s) in parts {
        let mut bits = b.raw();
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            sum[i] += s;
            bits &= bits - 1;
        }
    }
    sum[..n].iter().all(|&x| x == sum[0])
}

pub(crate) fn labels_valid(idx: &Indexed, labels: &[BinaryWord]) -> bool {
    if labels.len() != idx.edges.len() {
        return false;
    }
    if idx
        .edges
        .iter()
        .zip(labels)
        .any(|(e, b)| b.weight() != e.weight || b.len() != idx.n)
    {
        return false;
    }
    idx.incident
        .iter()
        .skip(idx.num_boundary)
        .all(|inc| vertex_ok(idx.n, inc.iter().map(|&(e, s)| (labels[e], s))))
}

/// Weights match and every color is conserved at every interior vertex.
pub fn validate_stranding(g: &WebGraph, s: &Stranding) -> Result<bool> {
    let labels = s.in_edge_order(g)?;
    Ok(labels_valid(&g.indexed()?, &labels))
}

/// One step of the static search order.
struct Step {
    edge: usize,
    /// Vertex whose other incident labels determine this one.
    forced_by: Option<usize>,
    /// Interior vertices whose labels are all known after this step.
    check: Vec<usize>,
}

fn search_order(idx: &Indexed) -> Vec<Step> {
    let ne = idx.edges.len();
    let mut assigned = vec![false; ne];
    let mut steps = Vec::with_capacity(ne);
    let interior: Vec<usize> = (idx.num_boundary..idx.incident.len()).collect();
    let unassigned_at = |assigned: &[bool], v: usize| -> Vec<usize> {
        idx.incident[v]
            .iter()
            .filter(|&&(e, _)| !assigned[e])
            .map(|&(e, _)| e)
            .collect()
    };
    let touches = |assigned: &[bool], e: usize| -> bool {
        let ie = &idx.edges[e];
        ie.tail
            .iter()
            .chain(ie.head.iter())
            .any(|&v| idx.incident[v].iter().any(|&(f, _)| assigned[f]))
    };
    for _ in 0..ne {
        let mut pick: Option<(usize, Option<usize>)> = None;
        for &v in &interior {
            let un = unassigned_at(&assigned, v);
            if un.len() == 1 {
                pick = Some((un[0], Some(v)));
                break;
            }
        }
        if pick.is_none() {
            let frontier = (0..ne).filter(|&e| !assigned[e] && touches(&assigned, e));
            let best =
                frontier.min_by_key(|&e| (idx.edges[e].weight.min(idx.n - idx.edges[e].weight), e));
            let e = best.unwrap_or_else(|| (0..ne).find(|&e| !assigned[e]).expect("edge left"));
            pick = Some((e, None));
        }
        let (e, forced_by) = pick.expect("picked");
        assigned[e] = true;
        let ie = &idx.edges[e];
        let mut check: Vec<usize> = ie
            .tail
            .iter()
            .chain(ie.head.iter())
            .copied()
            .filter(|&v| v >= idx.num_boundary && unassigned_at(&assigned, v).is_empty())
            .collect();
        check.sort();
        check.dedup();
        steps.push(Step {
            edge: e,
            forced_by,
            check,
        });
    }
    steps
}

/// The unique label for `edge` completing the vertex sum at `v`, if one exists.
fn complete(idx: &Indexed, v: usize, edge: usize, labels: &[BinaryWord]) -> Option<BinaryWord> {
    let n = idx.n;
    let mut sum = vec![0i64; n];
    let mut sigma = 0;
    for &(e, s) in &idx.incident[v] {
        if e == edge {
            sigma = s;
            continue;
        }
        for (i, x) in sum.iter_mut().enumerate() {
            *x += s * labels[e].bit(i + 1);
        }
    }
    let lo = *sum.iter().min()?;
    let hi = *sum.iter().max()?;
    let w = idx.edges[edge].weight;
    for c in lo - 1..=hi + 1 {
        let cand: Vec<i64> = sum.iter().map(|&x| sigma * (c - x)).collect();
        if let Some(b) = BinaryWord::from_int_vec(&cand) {
            if b.weight() == w {
                return Some(b);
            }
        }
    }
    None
}

fn search(
    idx: &Indexed,
    steps: &[Step],
    at: usize,
    labels: &mut Vec<BinaryWord>,
    out: &mut Vec<Vec<BinaryWord>>,
) {
    if at == steps.len() {
        out.push(labels.clone());
        return;
    }
    let step = &steps[at];
    let candidates: Vec<BinaryWord> = match step.forced_by {
        Some(v) => complete(idx, v, step.edge, labels).into_iter().collect(),
        None => BinaryWord::all_of_weight(idx.n, idx.edges[step.edge].weight),
    };
    for b in candidates {
        labels[step.edge] = b;
        let ok = step
            .check
            .iter()
            .all(|&v| vertex_ok(idx.n, idx.incident[v].iter().map(|&(e, s)| (labels[e], s))));
        if ok {
            search(idx, steps, at + 1, labels, out);
        }
    }
}

/// Sort key: label bits over edges taken in lexicographic id order.
fn sort_key(order: &[usize], labels: &[BinaryWord]) -> Vec<u8> {
    let mut key = Vec::new();
    for &e in order {
        let b = labels[e];
        key.extend((1..=b.len()).map(|i| b.get(i) as u8));
    }
    key
}

pub(crate) fn id_order(g: &WebGraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.edges.len()).collect();
    order.sort_by(|&a, &b| g.edges[a].id.cmp(&g.edges[b].id));
    order
}

/// All valid labelings in web edge order, sorted canonically.
pub(crate) fn enumerate_labelings(g: &WebGraph, idx: &Indexed) -> Vec<Vec<BinaryWord>> {
    let steps = search_order(idx);
    let ne = idx.edges.len();
    let mut all: Vec<Vec<BinaryWord>> = if steps.is_empty() {
        vec![Vec::new()]
    } else {
        let first = &steps[0];
        BinaryWord::all_of_weight(idx.n, idx.edges[first.edge].weight)
            .into_par_iter()
            .flat_map_iter(|b| {
                let mut labels = vec![BinaryWord::zeros(idx.n); ne];
                labels[first.edge] = b;
                let mut out = Vec::new();
                let ok = first.check.iter().all(|&v| {
                    vertex_ok(idx.n, idx.incident[v].iter().map(|&(e, s)| (labels[e], s)))
                });
                if ok {
                    search(idx, &steps, 1, &mut labels, &mut out);
                }
                out
            })
            .collect()
    };
    let order = id_order(g);
    all.par_sort_by_cached_key(|l| sort_key(&order, l));
    all
}

/// Every valid stranding exactly once, sorted by label bits over sorted edge ids.
pub fn enumerate_strandings(g: &WebGraph) -> Result<Vec<Stranding>> {
    let idx = g.indexed()?;
    Ok(enumerate_labelings(g, &idx)
        .iter()
        .map(|l| Stranding::from_edge_order(g, l))
        .collect())
}

/// Brute force over the full product of per-edge label choices.
pub fn naive_strandings(g: &WebGraph) -> Result<Vec<Stranding>> {
    let idx = g.indexed()?;
    let domains: Vec<Vec<BinaryWord>> = idx
        .edges
        .iter()
        .map(|e| BinaryWord::all_of_weight(idx.n, e.weight))
        .collect();
    let mut out: Vec<Vec<BinaryWord>> = Vec::new();
    let mut cursor = vec![0usize; domains.len()];
    if domains.iter().any(|d| d.is_empty()) {
        return Ok(Vec::new());
    }
    loop {
        let labels: Vec<BinaryWord> = cursor.iter().zip(&domains).map(|(&i, d)| d[i]).collect();
        if labels_valid(&idx, &labels) {
            out.push(labels);
        }
        let mut k = 0;
        loop {
            if k == cursor.len() {
                let order = id_order(g);
                out.sort_by_cached_key(|l| sort_key(&order, l));
                return Ok(out
                    .iter()
                    .map(|l| Stranding::from_edge_order(g, l))
                    .collect());
            }
            cursor[k] += 1;
            if cursor[k] < domains[k].len() {
                break;
            }
            cursor[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    CW,
    CCW,
}

/// A connected piece of the `(i, j)` flow.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowComponent {
    pub pair: (usize, usize),
    /// Edge id and whether the flow runs with the edge direction.
    pub traversals: Vec<(String, bool)>,
    pub closed: bool,
    pub orientation: Orientation,
}

struct RawComponent {
    steps: Vec<(usize, bool)>,
    closed: bool,
    area2: f64,
}

/// Decomposes the `(i, j)` flow into paths and cycles.
fn flow_components(
    idx: &Indexed,
    labels: &[BinaryWord],
    i: usize,
    j: usize,
) -> Result<Vec<RawComponent>> {
    let nv = idx.pos.len();
    let mut out_of: Vec<Option<(usize, bool)>> = vec![None; nv];
    let mut used = vec![false; idx.edges.len()];
    let mut comps = Vec::new();
    let mut carrying = Vec::new();
    for (e, ie) in idx.edges.iter().enumerate() {
        let d = labels[e].bit(i) - labels[e].bit(j);
        if d == 0 {
            continue;
        }
        let with = d == 1;
        match (ie.tail, ie.head) {
            (Some(t), Some(h)) => {
                let from = if with { t } else { h };
                if out_of[from].replace((e, with)).is_some() {
                    return Err(Error::InvalidStranding(format!(
                        "two ({i},{j}) flow edges leave `{}`",
                        idx.vertex_ids[from]
                    )));
                }
                carrying.push(e);
            }
            _ => {
                used[e] = true;
                let a = if with { ie.area2 } else { -ie.area2 };
                comps.push(RawComponent {
                    steps: vec![(e, with)],
                    closed: true,
                    area2: a,
                });
            }
        }
    }
    let step_end = |e: usize, with: bool| -> usize {
        let ie = &idx.edges[e];
        if with {
            ie.head.unwrap()
        } else {
            ie.tail.unwrap()
        }
    };
    let walk = |start: usize, used: &mut Vec<bool>| -> Result<(Vec<(usize, bool)>, f64, usize)> {
        let mut v = start;
        let mut steps = Vec::new();
        let mut area = 0.0;
        while let Some((e, with)) = out_of[v] {
            if used[e] {
                break;
            }
            used[e] = true;
            steps.push((e, with));
            area += if with {
                idx.edges[e].area2
            } else {
                -idx.edges[e].area2
            };
            v = step_end(e, with);
            if v < idx.num_boundary {
                break;
            }
        }
        Ok((steps, area, v))
    };
    for b in 0..idx.num_boundary {
        if let Some((e, _)) = out_of[b] {
            if used[e] {
                continue;
            }
            let (steps, area, end) = walk(b, &mut used)?;
            if end >= idx.num_boundary {
                return Err(Error::InvalidStranding(format!(
                    "({i},{j}) flow path from boundary does not end on it"
                )));
            }
            comps.push(RawComponent {
                steps,
                closed: false,
                area2: area,
            });
        }
    }
    for &e in &carrying {
        if used[e] {
            continue;
        }
        let ie = &idx.edges[e];
        let with = out_of[ie.tail.unwrap()] == Some((e, true));
        let start = if with {
            ie.tail.unwrap()
        } else {
            ie.head.unwrap()
        };
        let (steps, area, end) = walk(start, &mut used)?;
        if end != start {
            return Err(Error::InvalidStranding(format!(
                "({i},{j}) flow component fails to close"
            )));
        }
        comps.push(RawComponent {
            steps,
            closed: true,
            area2: area,
        });
    }
    Ok(comps)
}

fn orient(area2: f64) -> Result<Orientation> {
    if area2 > 0.0 {
        Ok(Orientation::CCW)
    } else if area2 < 0.0 {
        Ok(Orientation::CW)
    } else {
        Err(Error::Geometry("flow component encloses zero area".into()))
    }
}

/// All flow components over all pairs `i < j`.
pub fn flows(g: &WebGraph, s: &Stranding) -> Result<Vec<FlowComponent>> {
    let idx = g.indexed()?;
    let labels = s.in_edge_order(g)?;
    let mut out = Vec::new();
    for i in 1..=g.n {
        for j in i + 1..=g.n {
            for c in flow_components(&idx, &labels, i, j)? {
                out.push(FlowComponent {
                    pair: (i, j),
                    traversals: c
                        .steps
                        .iter()
                        .map(|&(e, w)| (g.edges[e].id.clone(), w))
                        .collect(),
                    closed: c.closed,
                    orientation: orient(c.area2)?,
                });
            }
        }
    }
    Ok(out)
}

/// Winding of a component's polyline, closed along the axis when open.
pub fn orientation(g: &WebGraph, comp: &FlowComponent) -> Result<Orientation> {
    let lookup = g.edge_lookup();
    let mut pts = Vec::new();
    for (id, with) in &comp.traversals {
        let e = *lookup.get(id).ok_or_else(|| Error::UnknownId(id.clone()))?;
        let mut p = g.polyline(&g.edges[e])?;
        if !with {
            p.reverse();
        }
        if !pts.is_empty() {
            p.remove(0);
        }
        pts.extend(p);
    }
    if let (Some(&first), Some(&last)) = (pts.first(), pts.last()) {
        if first != last {
            pts.push(first);
        }
    }
    orient(polyline_area2(&pts))
}

pub(crate) fn flow_exponent_labels(idx: &Indexed, labels: &[BinaryWord]) -> Result<i64> {
    let mut x = 0i64;
    let mut y = 0i64;
    for i in 1..=idx.n {
        for j in i + 1..=idx.n {
            for c in flow_components(idx, labels, i, j)? {
                match orient(c.area2)? {
                    Orientation::CCW => y += 1,
                    Orientation::CW if c.closed => x += 1,
                    Orientation::CW => {}
                }
            }
        }
    }
    Ok(x - y)
}

/// Closed clockwise components minus all counterclockwise components.
pub fn flow_exponent(g: &WebGraph, s: &Stranding) -> Result<i64> {
    let labels = s.in_edge_order(g)?;
    flow_exponent_labels(&g.indexed()?, &labels)
}

/// Ones in the cyclic interval `(a, a + len]`, residue 0 read as position `n`.
fn cyclic_interval(n: usize, a: usize, len: usize) -> BinaryWord {
    let positions: Vec<usize> = (1..=len).map(|t| (a + t - 1) % n + 1).collect();
    BinaryWord::from_positions(n, &positions)
}

/// The stranding read off from mod-n face distances.
pub fn base_stranding(g: &WebGraph) -> Result<Stranding> {
    let idx = g.indexed()?;
    let fs = faces_indexed(&idx)?;
    let dist = dual_distance_with(&idx, &fs)?;
    let labels: Vec<BinaryWord> = idx
        .edges
        .iter()
        .enumerate()
        .map(|(e, ie)| cyclic_interval(idx.n, dist[fs.left[e]], ie.weight))
        .collect();
    Ok(Stranding::from_edge_order(g, &labels))
}

/// The sl3 stranding chosen by comparing unweighted face depths across each edge.
pub fn sl3_depth_stranding(g: &WebGraph) -> Result<Stranding> {
    if g.n != 3 {
        return Err(Error::Precondition(format!(
            "depth stranding needs n = 3, got {}",
            g.n
        )));
    }
    let idx = g.indexed()?;
    let (fs, depth) = face_depths(g)?;
    for v in idx.num_boundary..idx.incident.len() {
        let mut ds: Vec<usize> = idx.incident[v]
            .iter()
            .flat_map(|&(e, _)| [depth[fs.left[e]], depth[fs.right[e]]])
            .collect();
        ds.sort();
        ds.dedup();
        if ds.len() < 2 {
            return Err(Error::Precondition(format!(
                "all faces around `{}` have the same depth",
                idx.vertex_ids[v]
            )));
        }
    }
    let labels: Vec<BinaryWord> = idx
        .edges
        .iter()
        .enumerate()
        .map(|(e, ie)| {
            // Orient as a weight-1 edge first.
            let (a, b) = if ie.weight == 1 {
                (fs.left[e], fs.right[e])
            } else {
                (fs.right[e], fs.left[e])
            };
            let pos = match depth[a].cmp(&depth[b]) {
                std::cmp::Ordering::Less => 1,
                std::cmp::Ordering::Equal => 2,
                std::cmp::Ordering::Greater => 3,
            };
            let w = BinaryWord::unit(3, pos);
            if ie.weight == 1 {
                w
            } else {
                w.complement()
            }
        })
        .collect();
    if !labels_valid(&idx, &labels) {
        return Err(Error::Precondition(
            "depth rule does not produce a valid stranding on this web".into(),
        ));
    }
    Ok(Stranding::from_edge_order(g, &labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use proptest::prelude::*;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn strands_of_words() {
        let s = binary_to_strands(&w("0100"));
        assert_eq!(s.get(&1), Some(&StrandDir::Against));
        assert_eq!(s.get(&2), Some(&StrandDir::With));
        assert_eq!(s.len(), 2);
        for c in 1..4 {
            let s = binary_to_strands(&BinaryWord::lambda(4, c));
            assert_eq!(
                s.into_iter().collect::<Vec<_>>(),
                vec![(c, StrandDir::With)]
            );
        }
    }

    #[test]
    fn strands_roundtrip_all_short_words() {
        for n in 1..=6 {
            for bits in 0..(1u64 << n) {
                let b = BinaryWord::new(n, bits);
                let back =
                    strands_to_binary(&binary_to_strands(&b), n, b.weight(), b.get(n)).unwrap();
                assert_eq!(back, b);
            }
        }
        assert!(strands_to_binary(&binary_to_strands(&w("0100")), 4, 2, false).is_err());
    }

    fn example_stranding() -> Stranding {
        // Boundary monomial x_0001 ⊗ x_0100 ⊗ x_1110 ⊗ x_1011 on the running example.
        let g = corpus::running_example();
        let labels = [
            "0001", "1001", "0111", "1110", "0010", "1011", "0100", "1100",
        ];
        Stranding::from_edge_order(&g, &labels.iter().map(|s| w(s)).collect::<Vec<_>>())
    }

    #[test]
    fn running_example_stranding_checks() {
        let g = corpus::running_example();
        let s = example_stranding();
        assert!(validate_stranding(&g, &s).unwrap());
        let mut bad = s.clone();
        bad.labels.insert("e2".into(), w("1100"));
        assert!(!validate_stranding(&g, &bad).unwrap());
        let mut wrong_weight = s.clone();
        wrong_weight.labels.insert("e1".into(), w("0011"));
        assert!(!validate_stranding(&g, &wrong_weight).unwrap());
        let mut missing = s.clone();
        missing.labels.remove("e1");
        assert!(validate_stranding(&g, &missing).is_err());
    }

    #[test]
    fn loop_and_cup_counts() {
        assert_eq!(
            enumerate_strandings(&corpus::loop_web(4, 2)).unwrap().len(),
            6
        );
        for n in 2..=6 {
            for k in 1..n {
                let expect = BinaryWord::all_of_weight(n, k).len();
                assert_eq!(
                    enumerate_strandings(&corpus::cup(n, k)).unwrap().len(),
                    expect
                );
            }
        }
        assert_eq!(
            enumerate_strandings(&corpus::empty_web(3)).unwrap().len(),
            1
        );
    }

    #[test]
    fn running_example_enumeration_matches_brute_force() {
        let g = corpus::running_example();
        let fast = enumerate_strandings(&g).unwrap();
        let slow = naive_strandings(&g).unwrap();
        assert_eq!(fast, slow);
        assert!(fast.contains(&example_stranding()));
    }

    #[test]
    fn flip_preserves_label_sets() {
        let g = corpus::running_example();
        let set = corpus::running_example_flip_set();
        let f = g.flip_edges(&set).unwrap();
        let mut a: Vec<Stranding> = enumerate_strandings(&g)
            .unwrap()
            .iter()
            .map(|s| s.flipped(&set))
            .collect();
        let mut b = enumerate_strandings(&f).unwrap();
        a.sort_by_key(|s| s.to_string());
        b.sort_by_key(|s| s.to_string());
        assert_eq!(a, b);
    }

    #[test]
    fn flows_on_a_1010_edge() {
        let g = corpus::cup(4, 2);
        let s = Stranding::from_edge_order(&g, &[w("1010")]);
        let pairs: Vec<(usize, usize)> = flows(&g, &s).unwrap().iter().map(|c| c.pair).collect();
        assert_eq!(pairs, vec![(1, 2), (1, 4), (2, 3), (3, 4)]);
    }

    #[test]
    fn cup_flow_orientations() {
        let g = corpus::cup(2, 1);
        let s = Stranding::from_edge_order(&g, &[w("10")]);
        let comps = flows(&g, &s).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].orientation, Orientation::CCW);
        assert!(!comps[0].closed);
        assert_eq!(orientation(&g, &comps[0]).unwrap(), Orientation::CCW);
        let mut rev = comps[0].clone();
        rev.traversals[0].1 = false;
        assert_eq!(orientation(&g, &rev).unwrap(), Orientation::CW);
        assert_eq!(flow_exponent(&g, &s).unwrap(), -1);
        let s2 = Stranding::from_edge_order(&g, &[w("01")]);
        assert_eq!(flow_exponent(&g, &s2).unwrap(), 0);
    }

    #[test]
    fn clockwise_square_is_cw() {
        let mut g = corpus::loop_web(2, 1);
        g.edges[0].via.reverse();
        let s = Stranding::from_edge_order(&g, &[w("10")]);
        let comps = flows(&g, &s).unwrap();
        assert_eq!(comps[0].orientation, Orientation::CW);
        assert!(comps[0].closed);
    }

    #[test]
    fn loop_exponents() {
        for n in 2..=6 {
            let g = corpus::loop_web(n, 1);
            for i in 1..=n {
                let s = Stranding::from_edge_order(&g, &[BinaryWord::unit(n, i)]);
                assert_eq!(flow_exponent(&g, &s).unwrap(), 2 * i as i64 - n as i64 - 1);
            }
        }
    }

    #[test]
    fn color_strands_are_adjacent_pair_flows() {
        let g = corpus::running_example();
        let s = example_stranding();
        let comps = flows(&g, &s).unwrap();
        for c in 1..4 {
            let mut from_flow: Vec<(String, bool)> = comps
                .iter()
                .filter(|x| x.pair == (c, c + 1))
                .flat_map(|x| x.traversals.clone())
                .collect();
            from_flow.sort();
            let mut from_strands: Vec<(String, bool)> = s
                .labels
                .iter()
                .filter_map(|(id, b)| {
                    binary_to_strands(b)
                        .get(&c)
                        .map(|d| (id.clone(), *d == StrandDir::With))
                })
                .collect();
            from_strands.sort();
            assert_eq!(from_flow, from_strands);
        }
    }

    #[test]
    fn the_24_flow_of_the_example_stranding() {
        let g = corpus::running_example();
        let comps = flows(&g, &example_stranding()).unwrap();
        let c24: Vec<Vec<(String, bool)>> = comps
            .iter()
            .filter(|c| c.pair == (2, 4))
            .map(|c| c.traversals.clone())
            .collect();
        let t = |id: &str, with: bool| (id.to_string(), with);
        assert_eq!(
            c24,
            vec![
                vec![t("e1", false), t("e2", false), t("e6", false)],
                vec![t("e7", true), t("e8", true), t("e4", true)],
            ]
        );
    }

    #[test]
    fn base_stranding_of_running_example() {
        let g = corpus::running_example();
        let s = base_stranding(&g).unwrap();
        assert!(validate_stranding(&g, &s).unwrap());
        // into-boundary edges keep the label, out-of-boundary edges are complemented
        assert_eq!(s.label("e1").unwrap(), w("1000"));
        assert_eq!(s.label("e6").unwrap().complement(), w("0100"));
        assert_eq!(s.label("e4").unwrap(), w("1011"));
        assert_eq!(s.label("e7").unwrap().complement(), w("0111"));
    }

    #[test]
    fn sink_and_source_sums() {
        for (n, k, l, m) in [(4, 1, 1, 2), (5, 1, 2, 2), (4, 3, 3, 2), (5, 4, 3, 3)] {
            let g = corpus::tripod(n, k, l, m);
            let total = k + l + m;
            for s in enumerate_strandings(&g).unwrap() {
                let mut sum = vec![0; n];
                for b in s.labels.values() {
                    for i in 1..=n {
                        sum[i - 1] += b.bit(i);
                    }
                }
                assert!(sum.iter().all(|&x| x as usize == total / n));
            }
        }
    }

    #[test]
    fn sl3_rule_cases() {
        // cup: bounded face on the left (depth 1), U on the right (depth 0)
        let s = sl3_depth_stranding(&corpus::cup(3, 1)).unwrap();
        assert_eq!(s.label("e1").unwrap(), w("001"));
        // weight 2 is read as a reversed weight-1 edge, then complemented
        let s = sl3_depth_stranding(&corpus::cup(3, 2)).unwrap();
        assert_eq!(s.label("e1").unwrap(), w("011"));
        let g = corpus::tripod(3, 1, 1, 1);
        let s = sl3_depth_stranding(&g).unwrap();
        assert!(validate_stranding(&g, &s).unwrap());
        assert_eq!(s.label("e1").unwrap(), w("100"));
        assert_eq!(s.label("e2").unwrap(), w("010"));
        assert_eq!(s.label("e3").unwrap(), w("001"));
        assert!(sl3_depth_stranding(&corpus::cup(4, 1)).is_err());
    }

    proptest! {
        #[test]
        fn flip_invariance_of_strandings_and_flows(mask in 0u32..256) {
            let g = corpus::running_example();
            let set: Vec<&str> = g.edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.id.as_str()).collect();
            let f = g.flip_edges(&set).unwrap();
            prop_assert!(f.validate().is_valid());
            let ss = enumerate_strandings(&g).unwrap();
            for s in ss.iter().take(12) {
                let t = s.flipped(&set);
                prop_assert!(validate_stranding(&f, &t).unwrap());
                prop_assert_eq!(flow_exponent(&g, s).unwrap(), flow_exponent(&f, &t).unwrap());
                let mut a: Vec<((usize, usize), Vec<String>)> = flows(&g, s).unwrap().into_iter().map(|c| (c.pair, c.traversals.into_iter().map(|t| t.0).collect())).collect();
                let mut b: Vec<((usize, usize), Vec<String>)> = flows(&f, &t).unwrap().into_iter().map(|c| (c.pair, c.traversals.into_iter().map(|t| t.0).collect())).collect();
                a.sort(); b.sort();
                prop_assert_eq!(a, b);
            }
            prop_assert_eq!(ss.len(), enumerate_strandings(&f).unwrap().len());
        }

        #[test]
        fn flow_graphs_are_paths_and_cycles(idx in 0usize..1000) {
            let g = corpus::running_example();
            let ss = enumerate_strandings(&g).unwrap();
            let s = &ss[idx % ss.len()];
            let gi = g.indexed().unwrap();
            let labels = s.in_edge_order(&g).unwrap();
            for i in 1..=4 {
                for j in i + 1..=4 {
                    let mut indeg = vec![0; gi.pos.len()];
                    let mut outdeg = vec![0; gi.pos.len()];
                    for (e, ie) in gi.edges.iter().enumerate() {
                        match labels[e].bit(i) - labels[e].bit(j) {
                            1 => { outdeg[ie.tail.unwrap()] += 1; indeg[ie.head.unwrap()] += 1; }
                            -1 => { outdeg[ie.head.unwrap()] += 1; indeg[ie.tail.unwrap()] += 1; }
                            _ => {}
                        }
                    }
                    for v in gi.num_boundary..gi.pos.len() {
                        prop_assert_eq!(indeg[v], outdeg[v]);
                        prop_assert!(indeg[v] <= 1);
                    }
                }
            }
        }
    }
}
