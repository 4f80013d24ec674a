//! Built-in example webs.

use crate::webgraph::{BoundaryVertex, Edge, InteriorVertex, WebGraph};

fn bv(id: &str, x: f64) -> BoundaryVertex {
    BoundaryVertex { id: id.into(), x }
}

fn iv(id: &str, x: f64, y: f64) -> InteriorVertex {
    InteriorVertex {
        id: id.into(),
        x,
        y,
    }
}

fn edge(id: &str, tail: &str, head: &str, weight: usize, via: &[[f64; 2]]) -> Edge {
    Edge {
        id: id.into(),
        tail: Some(tail.into()),
        head: Some(head.into()),
        weight: weight as i64,
        via: via.to_vec(),
    }
}

/// The sl4 web with boundary weight vector (1,1,3,3): two Type I vertices on the left, two Type II on the right.
pub fn running_example() -> WebGraph {
    WebGraph {
        n: 4,
        boundary: vec![bv("b1", 1.0), bv("b2", 2.0), bv("b3", 5.0), bv("b4", 6.0)],
        interior: vec![
            iv("v1", 3.0, -1.0),
            iv("v2", 3.0, -2.0),
            iv("v3", 4.0, -1.0),
            iv("v4", 4.0, -2.0),
        ],
        edges: vec![
            edge("e1", "v2", "b1", 1, &[[1.0, -2.0]]),
            edge("e2", "v1", "v2", 2, &[]),
            edge("e3", "v4", "v2", 3, &[]),
            edge("e4", "v3", "b3", 3, &[[5.0, -1.0]]),
            edge("e5", "v1", "v3", 1, &[]),
            edge("e6", "b2", "v1", 3, &[[2.0, -1.0]]),
            edge("e7", "b4", "v4", 1, &[[6.0, -2.0]]),
            edge("e8", "v4", "v3", 2, &[]),
        ],
    }
}

/// Edges of the running example highlighted in the edge-flip illustration.
pub fn running_example_flip_set() -> Vec<&'static str> {
    vec!["e3", "e5", "e6", "e7", "e8"]
}

/// A single edge `b1 → b2` of weight `k`; boundary vector `(n-k, k)`.
pub fn cup(n: usize, k: usize) -> WebGraph {
    WebGraph {
        n,
        boundary: vec![bv("b1", 1.0), bv("b2", 2.0)],
        interior: vec![],
        edges: vec![edge("e1", "b1", "b2", k, &[[1.5, -1.0]])],
    }
}

/// Two side-by-side cups of weights `k1` and `k2`.
pub fn two_cups(n: usize, k1: usize, k2: usize) -> WebGraph {
    WebGraph {
        n,
        boundary: vec![bv("b1", 1.0), bv("b2", 2.0), bv("b3", 3.0), bv("b4", 4.0)],
        interior: vec![],
        edges: vec![
            edge("e1", "b1", "b2", k1, &[[1.5, -1.0]]),
            edge("e2", "b3", "b4", k2, &[[3.5, -1.0]]),
        ],
    }
}

/// A source vertex `v` with out-edges of weights `k, l, m` to three boundary vertices.
pub fn tripod(n: usize, k: usize, l: usize, m: usize) -> WebGraph {
    WebGraph {
        n,
        boundary: vec![bv("b1", 1.0), bv("b2", 2.0), bv("b3", 3.0)],
        interior: vec![iv("v", 2.0, -1.0)],
        edges: vec![
            edge("e1", "v", "b1", k, &[[1.0, -1.0]]),
            edge("e2", "v", "b2", l, &[]),
            edge("e3", "v", "b3", m, &[[3.0, -1.0]]),
        ],
    }
}

/// A sink vertex `v` with in-edges of weights `k, l, m` from three boundary vertices.
pub fn sink_tripod(n: usize, k: usize, l: usize, m: usize) -> WebGraph {
    let mut g = tripod(n, k, l, m);
    for e in g.edges.iter_mut() {
        std::mem::swap(&mut e.tail, &mut e.head);
        e.via.reverse();
    }
    g
}

/// The vertexless loop of weight `k`, drawn counterclockwise.
pub fn loop_web(n: usize, k: usize) -> WebGraph {
    WebGraph {
        n,
        boundary: vec![],
        interior: vec![],
        edges: vec![Edge {
            id: "e1".into(),
            tail: None,
            head: None,
            weight: k as i64,
            via: vec![[0.0, -2.0], [1.0, -2.0], [1.0, -1.0], [0.0, -1.0]],
        }],
    }
}

/// The empty web (no boundary, no edges).
pub fn empty_web(n: usize) -> WebGraph {
    WebGraph {
        n,
        boundary: vec![],
        interior: vec![],
        edges: vec![],
    }
}

/// Cups of weights `ks`, drawn nested: the outermost joins the first and last boundary vertices.
pub fn nested_cups(n: usize, ks: &[usize]) -> WebGraph {
    let c = ks.len();
    let boundary: Vec<BoundaryVertex> = (0..2 * c)
        .map(|i| bv(&format!("b{}", i + 1), (i + 1) as f64))
        .collect();
    let edges = ks
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let (a, b) = (i + 1, 2 * c - i);
            let depth = -((c - i) as f64);
            edge(
                &format!("e{}", i + 1),
                &format!("b{a}"),
                &format!("b{b}"),
                k,
                &[[a as f64, depth], [b as f64, depth]],
            )
        })
        .collect();
    WebGraph {
        n,
        boundary,
        interior: vec![],
        edges,
    }
}

/// The named webs shipped as JSON files under `corpus/`, keyed by file stem.
pub fn bundled() -> Vec<(&'static str, WebGraph)> {
    vec![
        ("cup_n2", cup(2, 1)),
        ("loop_n4_k2", loop_web(4, 2)),
        ("running_example", running_example()),
        ("tripod_n3_111", tripod(3, 1, 1, 1)),
        ("sink_tripod_n4_121", sink_tripod(4, 1, 2, 1)),
        ("two_cups_n3_12", two_cups(3, 1, 2)),
        ("nested_cups_n4_13", nested_cups(4, &[1, 3])),
        ("empty_n3", empty_web(3)),
    ]
}

/// Every cup, source tripod and sink tripod for `2 <= n <= max_n`, plus loops and the bundled webs.
pub fn small_webs(max_n: usize) -> Vec<WebGraph> {
    let mut out: Vec<WebGraph> = bundled().into_iter().map(|(_, g)| g).collect();
    for n in 2..=max_n {
        for k in 1..n {
            out.push(cup(n, k));
            out.push(loop_web(n, k));
            for l in 1..n {
                for m in 1..n {
                    if (k + l + m) % n == 0 {
                        out.push(tripod(n, k, l, m));
                        out.push(sink_tripod(n, k, l, m));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_small_web_validates() {
        let webs = small_webs(5);
        assert!(webs.len() > 50);
        for g in &webs {
            let report = g.validate();
            assert!(report.is_valid(), "{report}");
        }
    }
}
