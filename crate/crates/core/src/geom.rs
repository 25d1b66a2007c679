//! Plane geometry primitives: points, segments, robust orientation, and a
//! few small utilities (set diameter, minimal enclosing disk).

use serde::{Deserialize, Serialize};

/// A point of the plane. Also used as a 2-vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(&self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn add(&self, other: Point2) -> Point2 {
        Point2::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(&self, other: Point2) -> Point2 {
        Point2::new(self.x - other.x, self.y - other.y)
    }

    pub fn scale(&self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }

    pub fn dot(&self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(&self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Linear interpolation `self + t (other - self)`.
    pub fn lerp(&self, other: Point2, t: f64) -> Point2 {
        Point2::new(self.x + t * (other.x - self.x), self.y + t * (other.y - self.y))
    }
}

/// Sign of the signed area of triangle (a, b, c): positive when c lies to
/// the left of the directed line a -> b.
///
/// Uses the standard floating-point filter and falls back to an exact
/// expansion only when the filtered value is ambiguous.
pub fn orient2d(a: Point2, b: Point2, c: Point2) -> f64 {
    let detleft = (a.x - c.x) * (b.y - c.y);
    let detright = (a.y - c.y) * (b.x - c.x);
    let det = detleft - detright;

    if detleft > 0.0 {
        if detright <= 0.0 {
            return det;
        }
    } else if detleft < 0.0 {
        if detright >= 0.0 {
            return det;
        }
    } else {
        return det;
    }

    // Error bound for the filtered determinant (Shewchuk's ccwerrboundA).
    let detsum = detleft.abs() + detright.abs();
    let errbound = 3.330_669_073_875_47e-16 * detsum;
    if det >= errbound || -det >= errbound {
        return det;
    }
    orient2d_exact(a, b, c)
}

// Exact 2x2 difference determinant via error-free transformations.
fn orient2d_exact(a: Point2, b: Point2, c: Point2) -> f64 {
    let (axcy, axcy_err) = two_product(a.x - c.x, b.y - c.y);
    let (aycx, aycx_err) = two_product(a.y - c.y, b.x - c.x);
    // det = (axcy + axcy_err) - (aycx + aycx_err); accumulate in a 4-term
    // expansion and return the exact sign with leading magnitude.
    let mut terms = [axcy, axcy_err, -aycx, -aycx_err];
    // Grow-expansion style summation: repeatedly two_sum into a running tail.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    terms.sort_by(|p, q| p.abs().partial_cmp(&q.abs()).unwrap());
    for t in terms {
        let (s, e) = two_sum(sum, t);
        sum = s;
        comp += e;
    }
    sum + comp
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn two_product(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

/// Does the closed segment [a, b] intersect the closed segment [c, d]?
pub fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient2d(c, d, a);
    let d2 = orient2d(c, d, b);
    let d3 = orient2d(a, b, c);
    let d4 = orient2d(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Distance from `p` to the closed segment [a, b], and the parameter
/// t in [0, 1] of the closest point.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> (f64, f64) {
    let ab = b.sub(a);
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return (p.dist(a), 0.0);
    }
    let t = (p.sub(a).dot(ab) / len2).clamp(0.0, 1.0);
    let proj = a.lerp(b, t);
    (p.dist(proj), t)
}

/// Intersection of line (p1, p2) with line (p3, p4). Returns `None` when the
/// determinant vanishes relative to the segment scales.
pub fn line_intersection(p1: Point2, p2: Point2, p3: Point2, p4: Point2) -> Option<Point2> {
    let r = p2.sub(p1);
    let s = p4.sub(p3);
    let denom = r.cross(s);
    let scale = r.norm() * s.norm();
    if denom.abs() <= 1e-14 * scale {
        return None;
    }
    let t = p3.sub(p1).cross(s) / denom;
    Some(p1.add(r.scale(t)))
}

/// Euclidean diameter of a point set (largest pairwise distance).
pub fn diameter(points: &[Point2]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            best = best.max(points[i].dist(points[j]));
        }
    }
    best
}

/// Total length of a polyline.
pub fn polyline_length(points: &[Point2]) -> f64 {
    points.windows(2).map(|w| w[0].dist(w[1])).sum()
}

/// Center of the minimal closed disk containing the points (Welzl's
/// algorithm with a deterministic insertion order).
pub fn min_enclosing_disk(points: &[Point2]) -> (Point2, f64) {
    assert!(!points.is_empty());
    let mut center = points[0];
    let mut r = 0.0f64;
    let eps = 1e-12;
    for (i, &p) in points.iter().enumerate() {
        if p.dist(center) <= r * (1.0 + eps) {
            continue;
        }
        center = p;
        r = 0.0;
        for (j, &q) in points[..i].iter().enumerate() {
            if q.dist(center) <= r * (1.0 + eps) {
                continue;
            }
            center = p.lerp(q, 0.5);
            r = p.dist(q) / 2.0;
            for &s in &points[..j] {
                if s.dist(center) <= r * (1.0 + eps) {
                    continue;
                }
                center = circumcenter(p, q, s).unwrap_or(center);
                r = center.dist(p);
            }
        }
    }
    (center, r)
}

fn circumcenter(a: Point2, b: Point2, c: Point2) -> Option<Point2> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d.abs() < 1e-300 {
        return None;
    }
    let a2 = a.x * a.x + a.y * a.y;
    let b2 = b.x * b.x + b.y * b.y;
    let c2 = c.x * c.x + c.y * c.y;
    Some(Point2::new(
        (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
        (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d,
    ))
}

/// Even-odd test for a closed polygon given by `vertices` (implicitly
/// closed). Points on the boundary are classified arbitrarily.
pub fn point_in_polygon(p: Point2, vertices: &[Point2]) -> bool {
    let n = vertices.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let vi = vertices[i];
        let vj = vertices[j];
        if (vi.y > p.y) != (vj.y > p.y) {
            let x_int = vi.x + (p.y - vi.y) / (vj.y - vi.y) * (vj.x - vi.x);
            if p.x < x_int {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Operator norm and determinant of a 2x2 matrix [[a, b], [c, d]].
pub fn op_norm_det(a: f64, b: f64, c: f64, d: f64) -> (f64, f64) {
    // singular values from the two rotational invariants
    let e = (a + d) / 2.0;
    let f = (a - d) / 2.0;
    let g = (c + b) / 2.0;
    let h = (c - b) / 2.0;
    let q = e.hypot(h);
    let r = f.hypot(g);
    (q + r, a * d - b * c)
}

/// Smallest singular value of [[a, b], [c, d]].
pub fn min_singular(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let e = (a + d) / 2.0;
    let f = (a - d) / 2.0;
    let g = (c + b) / 2.0;
    let h = (c - b) / 2.0;
    let q = e.hypot(h);
    let r = f.hypot(g);
    (q - r).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_signs() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        assert!(orient2d(a, b, Point2::new(0.5, 1.0)) > 0.0);
        assert!(orient2d(a, b, Point2::new(0.5, -1.0)) < 0.0);
        assert_eq!(orient2d(a, b, Point2::new(2.0, 0.0)), 0.0);
    }

    #[test]
    fn orientation_near_degenerate() {
        // Points nearly collinear; the exact path must give a consistent sign.
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1e17, 1e17);
        let c = Point2::new(1e17 + 1.0, 1e17 + 1.0);
        assert_eq!(orient2d(a, b, c), 0.0);
    }

    #[test]
    fn segment_tests() {
        let o = Point2::new(0.0, 0.0);
        let e = Point2::new(1.0, 0.0);
        assert!(segments_intersect(
            o,
            e,
            Point2::new(0.5, -0.5),
            Point2::new(0.5, 0.5)
        ));
        assert!(!segments_intersect(
            o,
            e,
            Point2::new(0.5, 0.1),
            Point2::new(0.5, 0.5)
        ));
        let (d, t) = point_segment_distance(Point2::new(0.5, 1.0), o, e);
        assert!((d - 1.0).abs() < 1e-15);
        assert!((t - 0.5).abs() < 1e-15);
    }

    #[test]
    fn min_disk_examples() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(1.0, 1.0),
        ];
        let (c, r) = min_enclosing_disk(&pts);
        assert!(c.dist(Point2::new(1.0, 0.0)) < 1e-9);
        assert!((r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn op_norm_identity() {
        let (n, det) = op_norm_det(1.0, 0.0, 0.0, 1.0);
        assert!((n - 1.0).abs() < 1e-15);
        assert!((det - 1.0).abs() < 1e-15);
        let (n, det) = op_norm_det(3.0, 0.0, 0.0, 0.5);
        assert!((n - 3.0).abs() < 1e-12);
        assert!((det - 1.5).abs() < 1e-12);
        assert!((min_singular(3.0, 0.0, 0.0, 0.5) - 0.5).abs() < 1e-12);
    }
}
