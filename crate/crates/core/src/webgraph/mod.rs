//! Fontaine web graphs with explicit plane geometry.
//!
//! Boundary vertices sit on the axis `y = 0`; everything else lies strictly
//! below it. Edges are polylines from tail to head. A vertexless closed loop
//! is an edge with `tail = head = None` whose `via` list is the closed curve.

pub mod faces;
pub mod geometry;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use faces::{dual_distance, face_depths, faces, FaceSet, FaceStep};
pub use geometry::{segments_cross, Pt};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryVertex {
    pub id: String,
    pub x: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteriorVertex {
    pub id: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    #[serde(default)]
    pub tail: Option<String>,
    #[serde(default)]
    pub head: Option<String>,
    pub weight: i64,
    #[serde(default)]
    pub via: Vec<[f64; 2]>,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail.is_none() && self.head.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WebGraph {
    pub n: usize,
    pub boundary: Vec<BoundaryVertex>,
    #[serde(default)]
    pub interior: Vec<InteriorVertex>,
    #[serde(default)]
    pub edges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexType {
    TypeI,
    TypeII,
}

/// One violated invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Issue {
    pub subject: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, subject: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue {
            subject: subject.into(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", issue.subject, issue.message)?;
        }
        Ok(())
    }
}

/// Index-based view of a web used by the algorithms.
#[derive(Clone, Debug)]
pub struct Indexed {
    pub n: usize,
    pub num_boundary: usize,
    pub vertex_ids: Vec<String>,
    pub pos: Vec<Pt>,
    pub edges: Vec<IEdge>,
    pub edge_ids: Vec<String>,
    /// Per vertex: (edge index, +1 if the edge points into the vertex, -1 otherwise).
    pub incident: Vec<Vec<(usize, i64)>>,
}

#[derive(Clone, Debug)]
pub struct IEdge {
    pub tail: Option<usize>,
    pub head: Option<usize>,
    pub weight: usize,
    /// Full polyline from tail to head; closed loops repeat their first point at the end.
    pub points: Vec<Pt>,
    /// Twice the signed area swept by the polyline (shoelace partial sum).
    pub area2: f64,
}

impl WebGraph {
    pub fn from_json_str(s: &str) -> Result<WebGraph> {
        let g: WebGraph = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        for pair in g.boundary.windows(2) {
            if pair[0].x >= pair[1].x {
                return Err(Error::Parse(format!(
                    "boundary list not sorted by x: `{}` at {} precedes `{}` at {}",
                    pair[0].id, pair[0].x, pair[1].id, pair[1].x
                )));
            }
        }
        Ok(g)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("web serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("web serializes")
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn vertex_position(&self, id: &str) -> Option<Pt> {
        if let Some(b) = self.boundary.iter().find(|b| b.id == id) {
            return Some(Pt::new(b.x, 0.0));
        }
        self.interior
            .iter()
            .find(|v| v.id == id)
            .map(|v| Pt::new(v.x, v.y))
    }

    pub fn is_boundary(&self, id: &str) -> bool {
        self.boundary.iter().any(|b| b.id == id)
    }

    /// Full polyline of an edge; closed loops repeat their first point.
    pub fn polyline(&self, e: &Edge) -> Result<Vec<Pt>> {
        let mut pts = Vec::with_capacity(e.via.len() + 2);
        if e.is_loop() {
            pts.extend(e.via.iter().map(|p| Pt::new(p[0], p[1])));
            if pts.len() >= 2 && pts.first() == pts.last() {
                pts.pop();
            }
            if pts.len() < 3 {
                return Err(Error::InvalidWeb(format!(
                    "loop edge `{}` needs at least 3 points",
                    e.id
                )));
            }
            pts.push(pts[0]);
            return Ok(pts);
        }
        let (Some(t), Some(h)) = (&e.tail, &e.head) else {
            return Err(Error::InvalidWeb(format!(
                "edge `{}` has exactly one endpoint",
                e.id
            )));
        };
        let tp = self
            .vertex_position(t)
            .ok_or_else(|| Error::UnknownId(t.clone()))?;
        let hp = self
            .vertex_position(h)
            .ok_or_else(|| Error::UnknownId(h.clone()))?;
        pts.push(tp);
        pts.extend(e.via.iter().map(|p| Pt::new(p[0], p[1])));
        pts.push(hp);
        Ok(pts)
    }

    /// Builds the index view. Requires well-formed references but not full validity.
    pub fn indexed(&self) -> Result<Indexed> {
        let mut ids: Vec<String> = self.boundary.iter().map(|b| b.id.clone()).collect();
        ids.extend(self.interior.iter().map(|v| v.id.clone()));
        let mut lookup = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if lookup.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidWeb(format!("duplicate vertex id `{id}`")));
            }
        }
        let mut pos: Vec<Pt> = self.boundary.iter().map(|b| Pt::new(b.x, 0.0)).collect();
        pos.extend(self.interior.iter().map(|v| Pt::new(v.x, v.y)));
        let mut incident = vec![Vec::new(); ids.len()];
        let mut edges = Vec::with_capacity(self.edges.len());
        for (ei, e) in self.edges.iter().enumerate() {
            let find = |id: &Option<String>| -> Result<Option<usize>> {
                match id {
                    None => Ok(None),
                    Some(s) => lookup
                        .get(s)
                        .copied()
                        .map(Some)
                        .ok_or_else(|| Error::UnknownId(s.clone())),
                }
            };
            let tail = find(&e.tail)?;
            let head = find(&e.head)?;
            if e.weight < 0 {
                return Err(Error::InvalidWeb(format!(
                    "edge `{}` has negative weight",
                    e.id
                )));
            }
            if let Some(t) = tail {
                incident[t].push((ei, -1));
            }
            if let Some(h) = head {
                incident[h].push((ei, 1));
            }
            let points = self.polyline(e)?;
            let area2 = geometry::polyline_area2(&points);
            edges.push(IEdge {
                tail,
                head,
                weight: e.weight as usize,
                points,
                area2,
            });
        }
        Ok(Indexed {
            n: self.n,
            num_boundary: self.boundary.len(),
            vertex_ids: ids,
            pos,
            edges,
            edge_ids: self.edges.iter().map(|e| e.id.clone()).collect(),
            incident,
        })
    }

    /// Checks every structural, arithmetic and geometric invariant.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let n = self.n as i64;
        if self.n < 2 {
            rep.push("web", format!("n = {} is below 2", self.n));
        }
        for pair in self.boundary.windows(2) {
            if pair[0].x >= pair[1].x {
                rep.push(
                    &pair[1].id,
                    "boundary vertices not strictly increasing in x",
                );
            }
        }
        for v in &self.interior {
            if !(v.y < 0.0) {
                rep.push(&v.id, "interior vertex not strictly below the axis");
            }
        }
        let mut seen = BTreeSet::new();
        for id in self
            .boundary
            .iter()
            .map(|b| &b.id)
            .chain(self.interior.iter().map(|v| &v.id))
        {
            if !seen.insert(id.clone()) {
                rep.push(id, "duplicate vertex id");
            }
        }
        let mut eseen = BTreeSet::new();
        for e in &self.edges {
            if !eseen.insert(e.id.clone()) {
                rep.push(&e.id, "duplicate edge id");
            }
            if e.weight < 1 || e.weight > n - 1 {
                rep.push(&e.id, format!("weight {} outside [1, {}]", e.weight, n - 1));
            }
            if e.tail.is_some() != e.head.is_some() {
                rep.push(&e.id, "edge has exactly one endpoint");
            }
            for id in e.tail.iter().chain(e.head.iter()) {
                if !seen.contains(id) {
                    rep.push(&e.id, format!("unknown endpoint `{id}`"));
                }
            }
            for p in &e.via {
                if !(p[1] < 0.0) {
                    rep.push(
                        &e.id,
                        format!("via point ({}, {}) not below the axis", p[0], p[1]),
                    );
                }
            }
            if e.is_loop() && e.via.len() < 3 {
                rep.push(&e.id, "closed loop needs at least 3 points");
            }
        }
        if !rep.is_valid() {
            return rep;
        }
        let idx = match self.indexed() {
            Ok(i) => i,
            Err(err) => {
                rep.push("web", err.to_string());
                return rep;
            }
        };
        for (vi, inc) in idx.incident.iter().enumerate() {
            let deg = inc.len();
            let id = &idx.vertex_ids[vi];
            if vi < idx.num_boundary {
                if deg != 1 {
                    rep.push(id, format!("boundary vertex has degree {deg}, expected 1"));
                }
            } else {
                if deg != 3 {
                    rep.push(id, format!("interior vertex has degree {deg}, expected 3"));
                }
                let flow: i64 = inc
                    .iter()
                    .map(|&(e, s)| s * idx.edges[e].weight as i64)
                    .sum();
                if flow.rem_euclid(n) != 0 {
                    rep.push(id, format!("net weight flow {flow} is not 0 mod {n}"));
                }
            }
        }
        for issue in geometry::crossing_issues(&idx) {
            rep.push(issue.0, issue.1);
        }
        rep
    }

    /// `k_i` is the weight when boundary edge `i` points into the boundary, `n - weight` otherwise.
    pub fn boundary_weight_vector(&self) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(self.boundary.len());
        for b in &self.boundary {
            let e = self
                .edges
                .iter()
                .find(|e| e.head.as_deref() == Some(&b.id) || e.tail.as_deref() == Some(&b.id))
                .ok_or_else(|| {
                    Error::InvalidWeb(format!("boundary vertex `{}` has no edge", b.id))
                })?;
            let w = e.weight as usize;
            out.push(if e.head.as_deref() == Some(&b.id) {
                w
            } else {
                self.n - w
            });
        }
        Ok(out)
    }

    /// Reverses each listed edge and replaces its weight `l` by `n - l`.
    pub fn flip_edges<S: AsRef<str>>(&self, ids: &[S]) -> Result<WebGraph> {
        let mut g = self.clone();
        let set: BTreeSet<&str> = ids.iter().map(|s| s.as_ref()).collect();
        for id in &set {
            if self.edge(id).is_none() {
                return Err(Error::UnknownId(id.to_string()));
            }
        }
        for e in g.edges.iter_mut() {
            if !set.contains(e.id.as_str()) {
                continue;
            }
            std::mem::swap(&mut e.tail, &mut e.head);
            e.weight = self.n as i64 - e.weight;
            if e.is_loop() {
                let mut pts = e.via.clone();
                if pts.len() >= 2 && pts.first() == pts.last() {
                    pts.pop();
                }
                let first = pts[0];
                let mut rest: Vec<[f64; 2]> = pts[1..].to_vec();
                rest.reverse();
                e.via = std::iter::once(first).chain(rest).collect();
            } else {
                e.via.reverse();
            }
        }
        Ok(g)
    }

    /// Type I if the source-form weights sum to `n`, Type II if they sum to `2n`.
    pub fn vertex_type(&self, v: &str) -> Result<VertexType> {
        if !self.interior.iter().any(|x| x.id == v) {
            return Err(Error::Precondition(format!(
                "`{v}` is not an interior vertex"
            )));
        }
        let mut total = 0i64;
        for e in &self.edges {
            if e.tail.as_deref() == Some(v) {
                total += e.weight;
            }
            if e.head.as_deref() == Some(v) {
                total += self.n as i64 - e.weight;
            }
        }
        match total {
            t if t == self.n as i64 => Ok(VertexType::TypeI),
            t if t == 2 * self.n as i64 => Ok(VertexType::TypeII),
            t => Err(Error::InvalidWeb(format!(
                "vertex `{v}` has source-form weight sum {t}"
            ))),
        }
    }

    /// Edge ids in lexicographic order.
    pub fn sorted_edge_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.edges.iter().map(|e| e.id.clone()).collect();
        ids.sort();
        ids
    }

    /// Maps edge id to index.
    pub fn edge_lookup(&self) -> BTreeMap<String, usize> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect()
    }

    /// Moves every via point by a deterministic pseudo-random offset of at most `amount`.
    pub fn jitter(&self, seed: u64, amount: f64) -> WebGraph {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut g = self.clone();
        for e in g.edges.iter_mut() {
            for p in e.via.iter_mut() {
                p[0] += rng.gen_range(-amount..=amount);
                p[1] += rng.gen_range(-amount..=amount);
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn running_example_is_valid_with_expected_boundary() {
        let g = corpus::running_example();
        assert!(g.validate().is_valid(), "{}", g.validate());
        assert_eq!(g.boundary_weight_vector().unwrap(), vec![1, 1, 3, 3]);
        assert_eq!(g.vertex_type("v1").unwrap(), VertexType::TypeI);
        assert_eq!(g.vertex_type("v2").unwrap(), VertexType::TypeI);
        assert_eq!(g.vertex_type("v3").unwrap(), VertexType::TypeII);
        assert_eq!(g.vertex_type("v4").unwrap(), VertexType::TypeII);
    }

    #[test]
    fn single_edge_between_boundary_vertices_is_valid() {
        let g = corpus::cup(3, 1);
        assert!(g.validate().is_valid());
        assert_eq!(g.boundary_weight_vector().unwrap(), vec![2, 1]);
    }

    #[test]
    fn cup_boundary_vector_is_complement_then_weight() {
        for n in 2..=6 {
            for k in 1..n {
                assert_eq!(
                    corpus::cup(n, k).boundary_weight_vector().unwrap(),
                    vec![n - k, k]
                );
            }
        }
    }

    #[test]
    fn inward_tripod_with_bad_sum_is_invalid() {
        let mut g = corpus::tripod(4, 1, 1, 2);
        for e in g.edges.iter_mut() {
            std::mem::swap(&mut e.tail, &mut e.head);
            e.via.reverse();
            e.weight = 1;
        }
        let rep = g.validate();
        assert!(!rep.is_valid());
        assert!(
            rep.issues
                .iter()
                .any(|i| i.subject == "v" && i.message.contains("not 0 mod 4")),
            "{rep}"
        );
    }

    #[test]
    fn boundaryless_web_has_empty_weight_vector() {
        let g = corpus::loop_web(4, 2);
        assert!(g.validate().is_valid());
        assert!(g.boundary_weight_vector().unwrap().is_empty());
    }

    #[test]
    fn flip_examples() {
        let g = corpus::running_example();
        let violet = corpus::running_example_flip_set();
        let f = g.flip_edges(&violet).unwrap();
        assert!(f.validate().is_valid());
        assert_eq!(f.boundary_weight_vector().unwrap(), vec![1, 1, 3, 3]);
        let weights: Vec<i64> = f.edges.iter().map(|e| e.weight).collect();
        let orig: Vec<i64> = g.edges.iter().map(|e| e.weight).collect();
        for (i, e) in g.edges.iter().enumerate() {
            if violet.contains(&e.id.as_str()) {
                assert_eq!(weights[i], 4 - orig[i]);
            }
        }
        assert_eq!(f.flip_edges(&violet).unwrap(), g);
        let all: Vec<String> = g.sorted_edge_ids();
        let fa = g.flip_edges(&all).unwrap();
        assert!(fa.validate().is_valid());
        assert_eq!(fa.boundary_weight_vector().unwrap(), vec![1, 1, 3, 3]);
        assert!(g.flip_edges(&["nope"]).is_err());
    }

    #[test]
    fn flipped_vertex_types_are_stable() {
        let g = corpus::running_example();
        let f = g.flip_edges(&g.sorted_edge_ids()).unwrap();
        for v in &g.interior {
            assert_eq!(g.vertex_type(&v.id).unwrap(), f.vertex_type(&v.id).unwrap());
        }
    }

    #[test]
    fn source_weight_sums_classify() {
        let t1 = corpus::tripod(5, 1, 1, 3);
        assert_eq!(t1.vertex_type("v").unwrap(), VertexType::TypeI);
        let t2 = corpus::tripod(5, 4, 4, 2);
        assert_eq!(t2.vertex_type("v").unwrap(), VertexType::TypeII);
    }

    #[test]
    fn json_roundtrip_is_byte_exact() {
        let g = corpus::running_example();
        let s = g.to_json_string();
        let back = WebGraph::from_json_str(&s).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json_string(), s);
        let lp = corpus::loop_web(3, 1).to_json_string();
        assert!(lp.contains(r#""tail":null,"head":null"#));
    }

    #[test]
    fn parser_rejects_unsorted_boundary() {
        let s = r#"{"n":2,"boundary":[{"id":"b2","x":2.0},{"id":"b1","x":1.0}],"interior":[],"edges":[{"id":"e","tail":"b1","head":"b2","weight":1,"via":[[1.5,-1.0]]}]}"#;
        assert!(matches!(WebGraph::from_json_str(s), Err(Error::Parse(_))));
    }

    #[test]
    fn crossing_edges_are_rejected() {
        let s = r#"{"n":2,"boundary":[{"id":"a","x":1.0},{"id":"b","x":2.0},{"id":"c","x":3.0},{"id":"d","x":4.0}],
            "edges":[{"id":"e1","tail":"a","head":"c","weight":1,"via":[[2.0,-1.0]]},
                     {"id":"e2","tail":"b","head":"d","weight":1,"via":[[3.0,-1.0]]}]}"#;
        let g = WebGraph::from_json_str(s).unwrap();
        let rep = g.validate();
        assert!(
            rep.issues.iter().any(|i| i.message.contains("cross")),
            "{rep}"
        );
    }

    #[test]
    fn via_above_axis_is_rejected() {
        let mut g = corpus::cup(2, 1);
        g.edges[0].via.push([1.5, 0.5]);
        assert!(!g.validate().is_valid());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::corpus;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn flipping_twice_is_identity(index in 0usize..1000, mask in any::<u32>()) {
            let webs = corpus::small_webs(5);
            let g = &webs[index % webs.len()];
            let ids: Vec<&str> = g.edges.iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1).map(|(_, e)| e.id.as_str()).collect();
            let once = g.flip_edges(&ids).unwrap();
            prop_assert!(once.validate().is_valid());
            prop_assert_eq!(once.flip_edges(&ids).unwrap().to_json_string(), g.to_json_string());
        }

        #[test]
        fn json_roundtrip_after_redrawing(index in 0usize..1000, seed in any::<u64>()) {
            let webs = corpus::small_webs(5);
            let g = webs[index % webs.len()].jitter(seed, 0.05);
            let text = g.to_json_string();
            prop_assert_eq!(WebGraph::from_json_str(&text).unwrap().to_json_string(), text);
        }
    }
}
