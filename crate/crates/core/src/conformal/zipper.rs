//! Conformal map engine built from elementary slit-map compositions.
//!
//! The boundary nodes z_0, ..., z_{n-1} of the curve are "zipped" onto the
//! real line one at a time. The opening move sends the first side to the
//! real axis; each later step removes the circular arc through the origin
//! and the current image of the next node with a Mobius rotation followed
//! by a vertical-slit square root. A terminal Mobius map and a square
//! unfold the two complementary sides onto the upper half-plane, so one
//! chain provides the Riemann maps of both sides of the curve with a single
//! shared boundary correspondence.
//!
//! The computed region is bounded by the circular-arc interpolation of the
//! nodes; accuracy is measured against the polygon afterwards, not assumed.

use crate::curve::JordanCurve;
use crate::error::{Error, Result};
use crate::geom::Point2;
use num_complex::Complex64 as C64;

/// One slit step: the Mobius `sigma(z) = z / (1 - z/(2c))` straightens the
/// arc through 0 and the node image into the vertical slit `[0, ih]`, which
/// `sqrt(z^2 + h^2)` then removes. `c` infinite means the arc is already
/// vertical.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct ZipStep {
    c2: f64, // 2c, the real foot of the arc circle; infinite for vertical slits
    h: f64,  // slit height after straightening
}

/// Which complementary side of the curve a map addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Side {
    Interior,
    Exterior,
}

/// The full composition. Maps the plane minus the interpolated curve onto
/// the two quadrants of the upper half-plane split by the imaginary axis,
/// then onto the upper half-plane per side.
#[derive(Debug, Clone)]
pub struct ZipperChain {
    z0: C64,
    z1: C64,
    steps: Vec<ZipStep>,
    /// Real image of z_0 before the terminal normalization.
    terminal_a: f64,
    /// True when the interior side lands in the right quadrant {Re > 0}.
    interior_right: bool,
}

fn c(p: Point2) -> C64 {
    C64::new(p.x, p.y)
}

/// Square root with branch cut along the positive real axis and values in
/// the closed upper half-plane.
fn sqrt_up(z: C64) -> C64 {
    let s = z.sqrt();
    if s.im < 0.0 {
        -s
    } else {
        s
    }
}

impl ZipStep {
    fn from_node(w: C64) -> Result<ZipStep> {
        if !(w.im > 0.0) || !w.is_finite() {
            return Err(Error::ConvergenceFailure {
                tol: 0.0,
                achieved: f64::INFINITY,
            });
        }
        if w.re.abs() <= 1e-300 * w.im.abs() {
            return Ok(ZipStep {
                c2: f64::INFINITY,
                h: w.im,
            });
        }
        let c2 = w.norm_sqr() / w.re; // = 2c
        let sw = w / (C64::new(1.0, 0.0) - w / c2);
        let h = sw.im;
        if !(h > 0.0) {
            return Err(Error::ConvergenceFailure {
                tol: 0.0,
                achieved: f64::INFINITY,
            });
        }
        Ok(ZipStep { c2, h })
    }

    #[inline]
    fn apply(&self, z: C64) -> C64 {
        let s = if self.c2.is_infinite() {
            z
        } else {
            z / (C64::new(1.0, 0.0) - z / self.c2)
        };
        sqrt_up(s * s + self.h * self.h)
    }

    /// Forward step restricted to the real axis, tracking the point at
    /// infinity explicitly (the real line is a circle through infinity).
    #[inline]
    fn apply_real(&self, x: f64) -> f64 {
        let s = if self.c2.is_infinite() {
            x
        } else if x.is_infinite() {
            -self.c2
        } else {
            let denom = 1.0 - x / self.c2;
            if denom == 0.0 {
                return f64::INFINITY;
            }
            x / denom
        };
        if s.is_infinite() {
            return s;
        }
        s.signum() * (s * s + self.h * self.h).sqrt()
    }

    /// Inverse step. Real inputs may enter the slit and come back complex.
    #[inline]
    fn invert(&self, u: C64) -> C64 {
        let s = sqrt_up(u * u - self.h * self.h);
        if self.c2.is_infinite() {
            s
        } else {
            s / (C64::new(1.0, 0.0) + s / self.c2)
        }
    }

    /// Inverse step along the boundary: a real coordinate either stays real
    /// or enters the slit interior and becomes complex.
    #[inline]
    fn invert_real(&self, x: f64) -> RealOrComplex {
        if x.is_infinite() {
            let s = f64::INFINITY * x.signum();
            return if self.c2.is_infinite() {
                RealOrComplex::Real(s)
            } else {
                RealOrComplex::Real(self.c2)
            };
        }
        let v = x * x - self.h * self.h;
        if v >= 0.0 {
            let s = x.signum() * v.sqrt();
            if self.c2.is_infinite() {
                RealOrComplex::Real(s)
            } else {
                let denom = 1.0 + s / self.c2;
                if denom == 0.0 {
                    RealOrComplex::Real(f64::INFINITY)
                } else {
                    RealOrComplex::Real(s / denom)
                }
            }
        } else {
            let s = C64::new(0.0, (-v).sqrt());
            RealOrComplex::Complex(if self.c2.is_infinite() {
                s
            } else {
                s / (C64::new(1.0, 0.0) + s / self.c2)
            })
        }
    }
}

enum RealOrComplex {
    Real(f64),
    Complex(C64),
}

impl ZipperChain {
    /// Zip the node loop. Nodes must be in positive (counterclockwise)
    /// order along the curve.
    pub fn build(nodes: &[Point2]) -> Result<ZipperChain> {
        let n = nodes.len();
        if n < 4 {
            return Err(Error::TooFewSamples { need: 4, got: n });
        }
        let z0 = c(nodes[0]);
        let z1 = c(nodes[1]);
        // current images of the nodes still to be zipped
        let mut imgs: Vec<C64> = nodes[2..]
            .iter()
            .map(|&p| initial_map(c(p), z0, z1))
            .collect();
        let mut steps: Vec<ZipStep> = Vec::with_capacity(n - 2);
        let mut a_img = f64::INFINITY; // image of z0 under the opening map
        for k in 0..imgs.len() {
            let step = ZipStep::from_node(imgs[k])?;
            for img in imgs.iter_mut().skip(k + 1) {
                *img = step.apply(*img);
            }
            a_img = step.apply_real(a_img);
            steps.push(step);
        }
        if !a_img.is_finite() || a_img.abs() < 1e-300 {
            return Err(Error::ConvergenceFailure {
                tol: 0.0,
                achieved: f64::INFINITY,
            });
        }
        Ok(ZipperChain {
            z0,
            z1,
            steps,
            terminal_a: a_img,
            interior_right: true, // fixed up by classify()
        })
    }

    /// Decide which quadrant holds the interior, probing with a point known
    /// to lie inside the curve.
    pub fn classify(&mut self, interior_probe: Point2) -> Result<()> {
        let w = self.to_prenormal(c(interior_probe));
        let winf = self.to_prenormal_infinity();
        if !w.is_finite() || w.im <= 0.0 || !winf.is_finite() || winf.im <= 0.0 {
            return Err(Error::ConvergenceFailure {
                tol: 0.0,
                achieved: f64::INFINITY,
            });
        }
        if (w.re > 0.0) == (winf.re > 0.0) {
            // both sides in one quadrant: the discretization collapsed
            return Err(Error::ConvergenceFailure {
                tol: 0.0,
                achieved: f64::INFINITY,
            });
        }
        self.interior_right = w.re > 0.0;
        Ok(())
    }

    /// Plane point to the pre-square normal position (upper half-plane with
    /// the two sides in the two quadrants).
    fn to_prenormal(&self, z: C64) -> C64 {
        let mut w = initial_map(z, self.z0, self.z1);
        for s in &self.steps {
            w = s.apply(w);
        }
        // terminal Mobius: 0 -> 0, A -> infinity
        w / (C64::new(1.0, 0.0) - w / self.terminal_a)
    }

    fn to_prenormal_infinity(&self) -> C64 {
        let mut w = C64::new(0.0, 1.0); // opening map sends infinity to i
        for s in &self.steps {
            w = s.apply(w);
        }
        w / (C64::new(1.0, 0.0) - w / self.terminal_a)
    }

    /// Full forward map of one side: plane point -> upper half-plane.
    pub fn to_halfplane(&self, z: C64, side: Side) -> C64 {
        let w = self.to_prenormal(z);
        self.square_side(w, side)
    }

    pub fn infinity_to_halfplane(&self) -> C64 {
        self.square_side(self.to_prenormal_infinity(), Side::Exterior)
    }

    fn square_side(&self, w: C64, side: Side) -> C64 {
        let right = match side {
            Side::Interior => self.interior_right,
            Side::Exterior => !self.interior_right,
        };
        if right {
            w * w
        } else {
            -(w * w)
        }
    }

    fn unsquare_side(&self, u: C64, side: Side) -> C64 {
        let right = match side {
            Side::Interior => self.interior_right,
            Side::Exterior => !self.interior_right,
        };
        if right {
            // root in the right quadrant
            let s = u.sqrt();
            if s.re < 0.0 {
                -s
            } else {
                s
            }
        } else {
            // -w^2 = u  =>  w = sqrt(-u), root in the left quadrant
            let s = (-u).sqrt();
            let s = if s.im < 0.0 { -s } else { s };
            if s.re > 0.0 {
                -s
            } else {
                s
            }
        }
    }

    /// Full inverse map of one side: upper half-plane -> plane point.
    pub fn from_halfplane(&self, u: C64, side: Side) -> C64 {
        let w = self.unsquare_side(u, side);
        // invert terminal Mobius
        let mut z = w / (C64::new(1.0, 0.0) + w / self.terminal_a);
        for s in self.steps.iter().rev() {
            z = s.invert(z);
        }
        invert_initial(z, self.z0, self.z1)
    }

    /// Boundary trace of one side: a real half-plane coordinate mapped back
    /// to the plane. The point stays on the real axis until it enters the
    /// slit it originally came from, then finishes as an ordinary interior
    /// evaluation of the remaining inverse steps.
    pub fn boundary_from_real(&self, xi: f64, side: Side) -> C64 {
        let right = match side {
            Side::Interior => self.interior_right,
            Side::Exterior => !self.interior_right,
        };
        // invert the side square on the boundary:
        //   right quadrant: xi >= 0 -> sqrt(xi); xi < 0 -> i sqrt(-xi)
        //   left quadrant:  xi <= 0 -> -sqrt(-xi); xi > 0 -> i sqrt(xi)
        let w: RealOrComplex = if right {
            if xi >= 0.0 {
                RealOrComplex::Real(xi.sqrt())
            } else {
                RealOrComplex::Complex(C64::new(0.0, (-xi).sqrt()))
            }
        } else if xi <= 0.0 {
            RealOrComplex::Real(-(-xi).sqrt())
        } else {
            RealOrComplex::Complex(C64::new(0.0, xi.sqrt()))
        };
        // terminal Mobius inverse
        let mut state = match w {
            RealOrComplex::Real(x) => {
                if x.is_infinite() {
                    RealOrComplex::Real(-self.terminal_a)
                } else {
                    let denom = 1.0 + x / self.terminal_a;
                    if denom == 0.0 {
                        RealOrComplex::Real(f64::INFINITY)
                    } else {
                        RealOrComplex::Real(x / denom)
                    }
                }
            }
            RealOrComplex::Complex(z) => {
                RealOrComplex::Complex(z / (C64::new(1.0, 0.0) + z / self.terminal_a))
            }
        };
        for s in self.steps.iter().rev() {
            state = match state {
                RealOrComplex::Real(x) => s.invert_real(x),
                RealOrComplex::Complex(z) => RealOrComplex::Complex(s.invert(z)),
            };
        }
        match state {
            RealOrComplex::Real(x) => invert_initial_real(x, self.z0, self.z1),
            RealOrComplex::Complex(z) => invert_initial(z, self.z0, self.z1),
        }
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }
}

fn initial_map(z: C64, z0: C64, z1: C64) -> C64 {
    // i sqrt((z - z1)/(z - z0)); infinity handled by the callers
    let ratio = (z - z1) / (z - z0);
    let s = ratio.sqrt();
    let s = if s.re < 0.0 { -s } else { s };
    C64::new(0.0, 1.0) * s
}

fn invert_initial(w: C64, z0: C64, z1: C64) -> C64 {
    // w = i sqrt(m) => m = -w^2, z = (z1 - m z0) / (1 - m)
    let m = -(w * w);
    (z1 - m * z0) / (C64::new(1.0, 0.0) - m)
}

fn invert_initial_real(x: f64, z0: C64, z1: C64) -> C64 {
    if x.is_infinite() {
        return z0;
    }
    let m = -(x * x); // real <= 0
    (z1 - m * z0) / (1.0 - m)
}

/// Choose boundary nodes: every polygon vertex, plus edge subdivisions
/// distributed by length until `n_boundary` nodes are reached.
pub fn choose_nodes(curve: &JordanCurve, n_boundary: usize) -> (Vec<Point2>, Vec<f64>) {
    let verts = curve.vertices();
    let n = verts.len();
    let mut counts = vec![0usize; n]; // extra nodes per edge
    let extra = n_boundary.saturating_sub(n);
    if extra > 0 {
        let total = curve.len();
        // largest-remainder apportionment by edge length
        let mut rem: Vec<(f64, usize)> = Vec::with_capacity(n);
        let mut assigned = 0usize;
        for i in 0..n {
            let len = verts[i].dist(verts[(i + 1) % n]);
            let share = extra as f64 * len / total;
            counts[i] = share.floor() as usize;
            assigned += counts[i];
            rem.push((share - share.floor(), i));
        }
        rem.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        for &(_, i) in rem.iter().take(extra - assigned) {
            counts[i] += 1;
        }
    }
    let mut nodes = Vec::with_capacity(n_boundary.max(n));
    let mut params = Vec::with_capacity(n_boundary.max(n));
    let mut s_acc = 0.0;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let len = a.dist(b);
        nodes.push(a);
        params.push(s_acc);
        for k in 1..=counts[i] {
            let t = k as f64 / (counts[i] + 1) as f64;
            nodes.push(a.lerp(b, t));
            params.push(s_acc + t * len);
        }
        s_acc += len;
    }
    (nodes, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves;

    #[test]
    fn chain_builds_on_circle() {
        let curve = curves::circle(64, 1.0);
        let (nodes, _) = choose_nodes(&curve, 64);
        let mut chain = ZipperChain::build(&nodes).unwrap();
        chain.classify(Point2::new(0.0, 0.0)).unwrap();
        // interior centre maps into the open half-plane
        let w = chain.to_halfplane(C64::new(0.0, 0.0), Side::Interior);
        assert!(w.im > 0.0, "interior probe must land in the half-plane: {w}");
        // a far exterior point lands in the half-plane on the exterior side
        let v = chain.to_halfplane(C64::new(5.0, 3.0), Side::Exterior);
        assert!(v.im > 0.0);
    }

    #[test]
    fn forward_inverse_roundtrip() {
        let curve = curves::circle(64, 1.0);
        let (nodes, _) = choose_nodes(&curve, 64);
        let mut chain = ZipperChain::build(&nodes).unwrap();
        chain.classify(Point2::new(0.0, 0.0)).unwrap();
        for &p in &[
            C64::new(0.1, 0.2),
            C64::new(-0.5, 0.1),
            C64::new(0.0, -0.7),
            C64::new(0.3, 0.0),
        ] {
            let w = chain.to_halfplane(p, Side::Interior);
            let back = chain.from_halfplane(w, Side::Interior);
            assert!((back - p).norm() < 1e-9, "{p} -> {w} -> {back}");
        }
        for &p in &[C64::new(2.0, 1.0), C64::new(-3.0, -0.5)] {
            let w = chain.to_halfplane(p, Side::Exterior);
            let back = chain.from_halfplane(w, Side::Exterior);
            assert!((back - p).norm() < 1e-9, "{p} -> {w} -> {back}");
        }
    }

    #[test]
    fn boundary_trace_lands_on_curve() {
        let curve = curves::circle(128, 1.0);
        let (nodes, _) = choose_nodes(&curve, 128);
        let mut chain = ZipperChain::build(&nodes).unwrap();
        chain.classify(Point2::new(0.0, 0.0)).unwrap();
        for k in 0..200 {
            let xi = -40.0 + 80.0 * (k as f64 + 0.5) / 200.0;
            let z = chain.boundary_from_real(xi, Side::Interior);
            let d = curve.dist_to(Point2::new(z.re, z.im));
            assert!(d < 5e-3, "xi={xi} lands {d} away from the curve");
        }
    }
}
