//! Face tracing on the web augmented by the boundary axis and a closing arc.

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, TAU};

use super::geometry::{polyline_area2, winding_number, Pt};
use super::{Indexed, WebGraph};
use crate::error::{Error, Result};

/// One step of a face boundary walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceStep {
    /// Web edge traversed with (`forward`) or against its direction.
    Edge { edge: usize, forward: bool },
    /// Axis segment between consecutive boundary vertices (0-based indices).
    Axis { from: usize, to: usize },
    /// The virtual arc closing the axis at infinity.
    Arc,
}

#[derive(Clone, Debug)]
pub struct FaceSet {
    /// For each face, its boundary cycles (a face around floating pieces has several).
    pub walks: Vec<Vec<Vec<FaceStep>>>,
    /// Id of the unbounded face `U`.
    pub outer: usize,
    /// Per edge: the face to its left and right relative to its direction.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// Faces met along the axis: before `b_1`, between consecutive boundary vertices, after `b_m`.
    pub axis_faces: Vec<usize>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn bounded(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.walks.len()).filter(move |&f| f != self.outer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    Real(usize, bool),
    AxisFwd(usize),
    AxisBwd(usize),
    ArcEast,
    ArcWest,
}

struct Half {
    origin: usize,
    angle: f64,
    twin: usize,
    kind: Kind,
    pts: Vec<Pt>,
}

fn halfedges(idx: &Indexed) -> Result<(Vec<Half>, usize)> {
    let mut hs: Vec<Half> = Vec::new();
    let mut nverts = idx.pos.len();
    let push_pair = |hs: &mut Vec<Half>,
                     o1: usize,
                     a1: f64,
                     k1: Kind,
                     p1: Vec<Pt>,
                     o2: usize,
                     a2: f64,
                     k2: Kind,
                     p2: Vec<Pt>| {
        let i = hs.len();
        hs.push(Half {
            origin: o1,
            angle: a1,
            twin: i + 1,
            kind: k1,
            pts: p1,
        });
        hs.push(Half {
            origin: o2,
            angle: a2,
            twin: i,
            kind: k2,
            pts: p2,
        });
    };
    for (ei, e) in idx.edges.iter().enumerate() {
        let pts = &e.points;
        let k = pts.len();
        let (o1, o2) = match (e.tail, e.head) {
            (Some(t), Some(h)) => (t, h),
            _ => {
                nverts += 1;
                (nverts - 1, nverts - 1)
            }
        };
        let fwd_angle = pts[0].angle_to(pts[1]);
        let bwd_angle = pts[k - 1].angle_to(pts[k - 2]);
        let mut rev = pts.clone();
        rev.reverse();
        push_pair(
            &mut hs,
            o1,
            fwd_angle,
            Kind::Real(ei, true),
            pts.clone(),
            o2,
            bwd_angle,
            Kind::Real(ei, false),
            rev,
        );
    }
    let m = idx.num_boundary;
    for i in 0..m.saturating_sub(1) {
        let (a, b) = (idx.pos[i], idx.pos[i + 1]);
        push_pair(
            &mut hs,
            i,
            0.0,
            Kind::AxisFwd(i),
            vec![a, b],
            i + 1,
            std::f64::consts::PI,
            Kind::AxisBwd(i),
            vec![b, a],
        );
    }
    if m >= 1 {
        let (ea, wa) = if m == 1 {
            (FRAC_PI_2 + 0.1, FRAC_PI_2 - 0.1)
        } else {
            (FRAC_PI_2, FRAC_PI_2)
        };
        push_pair(
            &mut hs,
            0,
            ea,
            Kind::ArcEast,
            Vec::new(),
            m - 1,
            wa,
            Kind::ArcWest,
            Vec::new(),
        );
    }
    Ok((hs, nverts))
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let nx = parent[y];
        parent[y] = r;
        y = nx;
    }
    r
}

/// Traces all faces; `U` is the face left of the closing arc.
pub fn faces(g: &WebGraph) -> Result<FaceSet> {
    faces_indexed(&g.indexed()?)
}

pub(crate) fn faces_indexed(idx: &Indexed) -> Result<FaceSet> {
    let (hs, nverts) = halfedges(idx)?;
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nverts];
    for (h, half) in hs.iter().enumerate() {
        out[half.origin].push(h);
    }
    for (v, list) in out.iter_mut().enumerate() {
        list.sort_by(|&a, &b| hs[a].angle.partial_cmp(&hs[b].angle).unwrap());
        for w in 0..list.len() {
            let a = hs[list[w]].angle;
            let b = if w + 1 < list.len() {
                hs[list[w + 1]].angle
            } else {
                hs[list[0]].angle + TAU
            };
            if list.len() > 1 && (b - a).abs() < 1e-12 {
                let name = idx
                    .vertex_ids
                    .get(v)
                    .cloned()
                    .unwrap_or_else(|| format!("loop anchor {v}"));
                return Err(Error::Geometry(format!(
                    "coincident departure angles at `{name}`"
                )));
            }
        }
    }
    let mut rank_at = vec![0usize; hs.len()];
    for list in &out {
        for (r, &h) in list.iter().enumerate() {
            rank_at[h] = r;
        }
    }
    let next = |h: usize| -> usize {
        let t = hs[h].twin;
        let list = &out[hs[t].origin];
        list[(rank_at[t] + list.len() - 1) % list.len()]
    };

    let mut cycle_of = vec![usize::MAX; hs.len()];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..hs.len() {
        if cycle_of[start] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cyc = Vec::new();
        let mut h = start;
        loop {
            cycle_of[h] = id;
            cyc.push(h);
            h = next(h);
            if h == start {
                break;
            }
            if cyc.len() > hs.len() {
                return Err(Error::Geometry("face walk failed to close".into()));
            }
        }
        cycles.push(cyc);
    }

    let mut parent: Vec<usize> = (0..nverts).collect();
    for half in &hs {
        let a = find(&mut parent, half.origin);
        let b = find(&mut parent, hs[half.twin].origin);
        parent[a] = b;
    }
    let comp_of_cycle: Vec<usize> = cycles
        .iter()
        .map(|c| find(&mut parent, hs[c[0]].origin))
        .collect();
    let main_comp = if idx.num_boundary > 0 {
        Some(find(&mut parent, 0))
    } else {
        None
    };

    let polygon = |c: &[usize]| -> Vec<Pt> {
        let mut poly = Vec::new();
        for &h in c {
            let p = &hs[h].pts;
            poly.extend_from_slice(&p[..p.len().saturating_sub(1)]);
        }
        poly
    };
    let area = |c: &[usize]| -> f64 { c.iter().map(|&h| polyline_area2(&hs[h].pts)).sum() };

    // Classify cycles.
    #[derive(Clone, Copy, PartialEq)]
    enum Role {
        Outer,
        Sky,
        Bounded,
        FloatOuter,
    }
    let mut roles = Vec::with_capacity(cycles.len());
    let mut areas = vec![0.0; cycles.len()];
    let mut comps: Vec<usize> = comp_of_cycle.clone();
    comps.sort();
    comps.dedup();
    let mut float_outer_of = std::collections::HashMap::new();
    for (ci, c) in cycles.iter().enumerate() {
        let kinds: Vec<Kind> = c.iter().map(|&h| hs[h].kind).collect();
        if kinds.contains(&Kind::ArcEast) {
            roles.push(Role::Outer);
        } else if kinds.contains(&Kind::ArcWest) {
            roles.push(Role::Sky);
        } else {
            areas[ci] = area(c);
            roles.push(Role::Bounded);
        }
    }
    for &comp in &comps {
        if Some(comp) == main_comp {
            continue;
        }
        let mine: Vec<usize> = (0..cycles.len())
            .filter(|&c| comp_of_cycle[c] == comp)
            .collect();
        let outer = *mine
            .iter()
            .min_by(|&&a, &&b| areas[a].partial_cmp(&areas[b]).unwrap())
            .expect("component has a cycle");
        roles[outer] = Role::FloatOuter;
        float_outer_of.insert(comp, outer);
    }
    for (ci, r) in roles.iter().enumerate() {
        if *r == Role::Bounded && !(areas[ci] > 0.0) {
            return Err(Error::Geometry(format!(
                "bounded face walk has non-positive area {}",
                areas[ci] / 2.0
            )));
        }
    }

    // Assign face ids: U first, then bounded cycles in trace order.
    let outer_id = 0usize;
    let mut face_of_cycle = vec![usize::MAX; cycles.len()];
    let mut walks: Vec<Vec<Vec<FaceStep>>> = vec![Vec::new()];
    let to_steps = |c: &[usize]| -> Vec<FaceStep> {
        c.iter()
            .map(|&h| match hs[h].kind {
                Kind::Real(e, f) => FaceStep::Edge {
                    edge: e,
                    forward: f,
                },
                Kind::AxisFwd(i) => FaceStep::Axis { from: i, to: i + 1 },
                Kind::AxisBwd(i) => FaceStep::Axis { from: i + 1, to: i },
                Kind::ArcEast | Kind::ArcWest => FaceStep::Arc,
            })
            .collect()
    };
    for (ci, r) in roles.iter().enumerate() {
        match r {
            Role::Outer => {
                face_of_cycle[ci] = outer_id;
                walks[outer_id].push(to_steps(&cycles[ci]));
            }
            Role::Bounded => {
                face_of_cycle[ci] = walks.len();
                walks.push(vec![to_steps(&cycles[ci])]);
            }
            _ => {}
        }
    }
    for (&comp, &oc) in float_outer_of
        .iter()
        .collect::<std::collections::BTreeMap<_, _>>()
    {
        let probe = hs[cycles[oc][0]].pts[0];
        let mut best: Option<(f64, usize)> = None;
        for (ci, c) in cycles.iter().enumerate() {
            if roles[ci] != Role::Bounded || comp_of_cycle[ci] == comp {
                continue;
            }
            if winding_number(&polygon(c), probe) != 0 && best.map_or(true, |(a, _)| areas[ci] < a)
            {
                best = Some((areas[ci], ci));
            }
        }
        let face = best.map_or(outer_id, |(_, ci)| face_of_cycle[ci]);
        face_of_cycle[oc] = face;
        walks[face].push(to_steps(&cycles[oc]));
    }

    let ne = idx.edges.len();
    let mut left = vec![0; ne];
    let mut right = vec![0; ne];
    let mut axis_faces = Vec::new();
    let m = idx.num_boundary;
    let mut axis_between = vec![outer_id; m.saturating_sub(1)];
    for (h, half) in hs.iter().enumerate() {
        let f = face_of_cycle[cycle_of[h]];
        match half.kind {
            Kind::Real(e, true) => left[e] = f,
            Kind::Real(e, false) => right[e] = f,
            Kind::AxisBwd(i) => axis_between[i] = f,
            _ => {}
        }
    }
    if m > 0 {
        axis_faces.push(outer_id);
        axis_faces.extend(axis_between);
        axis_faces.push(outer_id);
    }

    // Euler check on the augmented graph: V - E + F = 1 + components.
    let v = nverts as i64;
    let e = (hs.len() / 2) as i64;
    let f = walks.len() as i64 + if m > 0 { 1 } else { 0 };
    if v - e + f != 1 + comps.len() as i64 {
        return Err(Error::Geometry(format!(
            "Euler check failed: V={v} E={e} F={f} components={}",
            comps.len()
        )));
    }
    Ok(FaceSet {
        walks,
        outer: outer_id,
        left,
        right,
        axis_faces,
    })
}

/// `dist_n(U, A)` for every face: crossing an edge from its left to its right adds its weight.
pub fn dual_distance(g: &WebGraph) -> Result<Vec<usize>> {
    let idx = g.indexed()?;
    let fs = faces_indexed(&idx)?;
    dual_distance_with(&idx, &fs)
}

pub(crate) fn dual_distance_with(idx: &Indexed, fs: &FaceSet) -> Result<Vec<usize>> {
    let n = idx.n;
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); fs.len()];
    for (ei, e) in idx.edges.iter().enumerate() {
        let (a, b) = (fs.left[ei], fs.right[ei]);
        adj[a].push((b, e.weight % n));
        adj[b].push((a, (n - e.weight % n) % n));
    }
    let mut dist = vec![usize::MAX; fs.len()];
    dist[fs.outer] = 0;
    let mut queue = VecDeque::from([fs.outer]);
    while let Some(a) = queue.pop_front() {
        for &(b, w) in &adj[a] {
            let d = (dist[a] + w) % n;
            if dist[b] == usize::MAX {
                dist[b] = d;
                queue.push_back(b);
            } else if dist[b] != d {
                return Err(Error::InvalidWeb(format!(
                    "mod-{n} face distance is path dependent at face {b}"
                )));
            }
        }
    }
    if dist.contains(&usize::MAX) {
        return Err(Error::Geometry(
            "face unreachable from the outer face".into(),
        ));
    }
    Ok(dist)
}

/// Unweighted dual-graph distance from `U`.
pub fn face_depths(g: &WebGraph) -> Result<(FaceSet, Vec<usize>)> {
    let idx = g.indexed()?;
    let fs = faces_indexed(&idx)?;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); fs.len()];
    for ei in 0..idx.edges.len() {
        adj[fs.left[ei]].push(fs.right[ei]);
        adj[fs.right[ei]].push(fs.left[ei]);
    }
    let mut depth = vec![usize::MAX; fs.len()];
    depth[fs.outer] = 0;
    let mut queue = VecDeque::from([fs.outer]);
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            if depth[b] == usize::MAX {
                depth[b] = depth[a] + 1;
                queue.push_back(b);
            }
        }
    }
    Ok((fs, depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn running_example_faces_and_distances() {
        let g = corpus::running_example();
        let fs = faces(&g).unwrap();
        assert_eq!(fs.len(), 5);
        let d = dual_distance(&g).unwrap();
        assert_eq!(d[fs.outer], 0);
        let mut bounded: Vec<usize> = fs.bounded().map(|f| d[f]).collect();
        bounded.sort();
        assert_eq!(bounded, vec![1, 1, 2, 3]);
        for (ei, e) in g.edges.iter().enumerate() {
            assert_eq!(
                (d[fs.right[ei]] + 4 - d[fs.left[ei]]) % 4,
                e.weight as usize % 4
            );
        }
    }

    #[test]
    fn cup_and_loop_have_one_bounded_face() {
        let fs = faces(&corpus::cup(3, 2)).unwrap();
        assert_eq!(fs.len(), 2);
        // left-to-right cup below the axis: interior is on the left of the edge
        assert_eq!(fs.right[0], fs.outer);
        assert_ne!(fs.left[0], fs.outer);
        let fl = faces(&corpus::loop_web(4, 1)).unwrap();
        assert_eq!(fl.len(), 2);
        assert_eq!(fl.right[0], fl.outer);
    }

    #[test]
    fn axis_faces_of_two_cups() {
        let g = corpus::two_cups(3, 2, 1);
        let fs = faces(&g).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs.axis_faces.len(), 5);
        assert_eq!(fs.axis_faces[0], fs.outer);
        assert_ne!(fs.axis_faces[1], fs.outer);
        assert_eq!(fs.axis_faces[2], fs.outer);
        assert_ne!(fs.axis_faces[3], fs.outer);
        assert_eq!(fs.axis_faces[4], fs.outer);
    }

    #[test]
    fn nested_loops_attach_to_innermost_face() {
        let mut g = corpus::loop_web(3, 1);
        let mut inner = g.edges[0].clone();
        inner.id = "e2".into();
        inner.via = vec![[0.25, -1.75], [0.75, -1.75], [0.75, -1.25], [0.25, -1.25]];
        g.edges.push(inner);
        assert!(g.validate().is_valid());
        let fs = faces(&g).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs.right[0], fs.outer);
        assert_eq!(fs.right[1], fs.left[0]);
        let d = dual_distance(&g).unwrap();
        // crossing a counterclockwise loop outward adds its weight
        assert_eq!(d[fs.left[0]], 2);
        assert_eq!(d[fs.left[1]], 1);
        let (_, depth) = face_depths(&g).unwrap();
        assert_eq!(depth[fs.left[1]], 2);
    }

    #[test]
    fn floating_loop_inside_a_cup() {
        let mut g = corpus::cup(3, 1);
        g.edges[0].via = vec![[1.0, -3.0], [2.0, -3.0]];
        g.edges.push(crate::webgraph::Edge {
            id: "e2".into(),
            tail: None,
            head: None,
            weight: 2,
            via: vec![[1.25, -2.0], [1.75, -2.0], [1.75, -1.0], [1.25, -1.0]],
        });
        assert!(g.validate().is_valid(), "{}", g.validate());
        let fs = faces(&g).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs.right[1], fs.left[0]);
        assert_eq!(fs.walks[fs.left[0]].len(), 2);
    }
}
