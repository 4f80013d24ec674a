//! Planar point helpers, shoelace sums and the non-crossing check.

use super::Indexed;

pub const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pt {
    pub x: f64,
    pub y: f64,
}

impl Pt {
    pub const fn new(x: f64, y: f64) -> Pt {
        Pt { x, y }
    }

    pub fn sub(self, o: Pt) -> Pt {
        Pt::new(self.x - o.x, self.y - o.y)
    }

    pub fn cross(self, o: Pt) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn dot(self, o: Pt) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn lerp(self, o: Pt, t: f64) -> Pt {
        Pt::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    /// Direction angle in `[0, 2π)`.
    pub fn angle_to(self, o: Pt) -> f64 {
        let a = (o.y - self.y).atan2(o.x - self.x);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }
}

/// `Σ (x_k y_{k+1} - x_{k+1} y_k)` over consecutive points.
pub fn polyline_area2(pts: &[Pt]) -> f64 {
    pts.windows(2).map(|w| w[0].cross(w[1])).sum()
}

/// Winding number of a closed polygon (last point joins the first) around `p`.
pub fn winding_number(poly: &[Pt], p: Pt) -> i32 {
    let mut wn = 0;
    let k = poly.len();
    for i in 0..k {
        let a = poly[i];
        let b = poly[(i + 1) % k];
        let side = b.sub(a).cross(p.sub(a));
        if a.y <= p.y {
            if b.y > p.y && side > 0.0 {
                wn += 1;
            }
        } else if b.y <= p.y && side < 0.0 {
            wn -= 1;
        }
    }
    wn
}

fn point_segment_distance(p: Pt, a: Pt, b: Pt) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.sub(a).norm();
    }
    let t = (p.sub(a).dot(ab) / len2).clamp(0.0, 1.0);
    p.sub(a.lerp(b, t)).norm()
}

/// True if the closed segments `ab` and `cd` properly cross or touch.
pub fn segments_cross(a: Pt, b: Pt, c: Pt, d: Pt) -> bool {
    segment_distance(a, b, c, d) < TOL
}

pub fn segment_distance(a: Pt, b: Pt, c: Pt, d: Pt) -> f64 {
    let d1 = b.sub(a).cross(c.sub(a));
    let d2 = b.sub(a).cross(d.sub(a));
    let d3 = d.sub(c).cross(a.sub(c));
    let d4 = d.sub(c).cross(b.sub(c));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

struct Seg {
    edge: usize,
    index: usize,
    count: usize,
    a: Pt,
    b: Pt,
    /// Endpoint `a` is the tail vertex / endpoint `b` is the head vertex.
    a_vertex: Option<usize>,
    b_vertex: Option<usize>,
    closed: bool,
}

/// Pairs of (subject id, message) for every overlap or crossing.
pub(super) fn crossing_issues(idx: &Indexed) -> Vec<(String, String)> {
    let mut segs = Vec::new();
    let mut issues = Vec::new();
    let ids = |e: usize| idx.edge_ids[e].clone();
    for (ei, e) in idx.edges.iter().enumerate() {
        let count = e.points.len() - 1;
        let closed = e.tail.is_none();
        for k in 0..count {
            let (a, b) = (e.points[k], e.points[k + 1]);
            if a.sub(b).norm() < TOL {
                issues.push((ids(ei), "zero-length polyline segment".to_string()));
            }
            segs.push(Seg {
                edge: ei,
                index: k,
                count,
                a,
                b,
                a_vertex: if k == 0 { e.tail } else { None },
                b_vertex: if k + 1 == count { e.head } else { None },
                closed,
            });
        }
    }
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (s, t) = (&segs[i], &segs[j]);
            if bbox_far(s, t) {
                continue;
            }
            let shared = shared_point(s, t);
            let bad = match shared {
                Some((p, u, v)) => {
                    let (u, v) = (u.sub(p), v.sub(p));
                    u.cross(v).abs() <= TOL * u.norm() * v.norm() && u.dot(v) > 0.0
                }
                None => segment_distance(s.a, s.b, t.a, t.b) < TOL,
            };
            if bad {
                let msg = if shared.is_some() {
                    "overlaps"
                } else {
                    "crosses or touches"
                };
                issues.push((
                    ids(s.edge),
                    format!(
                        "{msg} edge `{}` (segments {} and {})",
                        idx.edge_ids[t.edge], s.index, t.index
                    ),
                ));
            }
        }
    }
    issues
}

fn bbox_far(s: &Seg, t: &Seg) -> bool {
    let (sx0, sx1) = (s.a.x.min(s.b.x), s.a.x.max(s.b.x));
    let (sy0, sy1) = (s.a.y.min(s.b.y), s.a.y.max(s.b.y));
    let (tx0, tx1) = (t.a.x.min(t.b.x), t.a.x.max(t.b.x));
    let (ty0, ty1) = (t.a.y.min(t.b.y), t.a.y.max(t.b.y));
    sx1 + TOL < tx0 || tx1 + TOL < sx0 || sy1 + TOL < ty0 || ty1 + TOL < sy0
}

/// The legitimately shared point of two segments, with the far endpoints of each.
fn shared_point(s: &Seg, t: &Seg) -> Option<(Pt, Pt, Pt)> {
    if s.edge == t.edge {
        if t.index == s.index + 1 {
            return Some((s.b, s.a, t.b));
        }
        if s.closed && s.index == 0 && t.index + 1 == t.count {
            return Some((s.a, s.b, t.a));
        }
    }
    let ends_s = [(s.a_vertex, s.a, s.b), (s.b_vertex, s.b, s.a)];
    let ends_t = [(t.a_vertex, t.a, t.b), (t.b_vertex, t.b, t.a)];
    for (vs, ps, fs) in ends_s {
        for (vt, _, ft) in ends_t {
            if vs.is_some() && vs == vt {
                return Some((ps, fs, ft));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn winding_of_square() {
        let sq = [
            Pt::new(0.0, 0.0),
            Pt::new(1.0, 0.0),
            Pt::new(1.0, 1.0),
            Pt::new(0.0, 1.0),
        ];
        assert_eq!(winding_number(&sq, Pt::new(0.5, 0.5)), 1);
        assert_eq!(winding_number(&sq, Pt::new(1.5, 0.5)), 0);
        let rev: Vec<Pt> = sq.iter().rev().copied().collect();
        assert_eq!(winding_number(&rev, Pt::new(0.5, 0.5)), -1);
        let mut closed = sq.to_vec();
        closed.push(sq[0]);
        assert!(polyline_area2(&closed) > 0.0);
    }

    #[test]
    fn segment_crossing_cases() {
        let p = Pt::new;
        assert!(segments_cross(
            p(0.0, 0.0),
            p(2.0, 2.0),
            p(0.0, 2.0),
            p(2.0, 0.0)
        ));
        assert!(!segments_cross(
            p(0.0, 0.0),
            p(1.0, 0.0),
            p(0.0, 1.0),
            p(1.0, 1.0)
        ));
        assert!(segments_cross(
            p(0.0, 0.0),
            p(1.0, 0.0),
            p(1.0, 0.0),
            p(1.0, 1.0)
        ));
        assert!(segments_cross(
            p(0.0, 0.0),
            p(2.0, 0.0),
            p(1.0, 0.0),
            p(3.0, 0.0)
        ));
    }
}
