//! Riemann maps of the two sides of a Jordan curve, hyperbolic rays, shadow
//! projection, and weighted path length.
//!
//! Both maps come from a single slit-map chain over shared boundary nodes
//! (see [`zipper`]), so the interior and exterior boundary correspondences
//! agree exactly at the nodes. The interior map is normalized to send 0 to
//! a deepest point of the bounded side; the exterior map fixes infinity.

pub mod zipper;

use crate::curve::JordanCurve;
use crate::error::{Error, Result};
use crate::exec;
use crate::geom::Point2;
use num_complex::Complex64 as C64;
use std::sync::Arc;

pub use zipper::Side;

/// Default boundary-correspondence tolerance, relative to curve diameter.
pub const DEFAULT_TOL_REL: f64 = 1e-3;

/// Discrete Riemann map of one side of the curve with boundary
/// correspondence and inverse evaluation.
///
/// Immutable after construction; evaluators are pure.
#[derive(Debug, Clone)]
pub struct ConformalMap {
    side: Side,
    curve: Arc<JordanCurve>,
    chain: Arc<zipper::ZipperChain>,
    /// Interior: Blaschke parameter moving the chain image of the base
    /// point to 0. Exterior: half-plane affine normalization (a, b) taking
    /// the chain image of infinity to i.
    norm: Normalization,
    /// Sampled boundary correspondence, strictly monotone in angle.
    table: BoundaryTable,
    accuracy: f64,
    base_image: Option<Point2>,
}

#[derive(Debug, Clone, Copy)]
enum Normalization {
    Interior { q: C64 },
    Exterior { a: f64, b: f64 },
}

/// Ordered angle -> arclength correspondence samples. Angles are unwrapped
/// to an increasing sequence spanning one turn; parameters are unwrapped in
/// the traversal direction of the side.
#[derive(Debug, Clone)]
pub struct BoundaryTable {
    pub angles: Vec<f64>,
    pub params: Vec<f64>,
    /// +1 when arclength increases with angle (interior side), -1 otherwise.
    pub direction: f64,
}

/// A hyperbolic ray sampled from the base point toward its boundary
/// endpoint, with cumulative arclength and distance-to-curve per sample.
#[derive(Debug, Clone)]
pub struct HyperbolicRay {
    pub side: Side,
    pub shadow_param: f64,
    pub shadow_point: Point2,
    pub preimage_angle: f64,
    pub samples: Vec<RaySample>,
    pub total_arclen: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct RaySample {
    pub point: Point2,
    /// Interior: preimage radius in [0, 1). Exterior: preimage radius > 1.
    pub radial: f64,
    /// Cumulative arclength from the base-side start of the polyline.
    pub arclen: f64,
    pub dist: f64,
}

/// Build both maps from one shared chain.
pub fn build_maps(
    curve: &Arc<JordanCurve>,
    n_boundary: usize,
    tol: f64,
) -> Result<(ConformalMap, ConformalMap)> {
    if n_boundary < curve.vertices().len() {
        return Err(Error::Config(format!(
            "n_boundary {} below vertex count {}",
            n_boundary,
            curve.vertices().len()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::ConvergenceFailure {
            tol,
            achieved: f64::INFINITY,
        });
    }
    let (nodes, _params) = zipper::choose_nodes(curve, n_boundary);
    let mut chain = zipper::ZipperChain::build(&nodes)?;
    let base = deepest_interior_point(curve);
    chain.classify(base)?;
    let chain = Arc::new(chain);

    let q = cayley(chain.to_halfplane(C64::new(base.x, base.y), Side::Interior));
    if q.norm() >= 1.0 {
        return Err(Error::ConvergenceFailure {
            tol,
            achieved: f64::INFINITY,
        });
    }
    let winf = chain.infinity_to_halfplane();
    if !(winf.im > 0.0) {
        return Err(Error::ConvergenceFailure {
            tol,
            achieved: f64::INFINITY,
        });
    }

    let interior = ConformalMap::assemble(
        Side::Interior,
        curve.clone(),
        chain.clone(),
        Normalization::Interior { q },
        Some(base),
        tol,
    )?;
    let exterior = ConformalMap::assemble(
        Side::Exterior,
        curve.clone(),
        chain,
        Normalization::Exterior {
            a: winf.re,
            b: winf.im,
        },
        None,
        tol,
    )?;
    Ok((interior, exterior))
}

/// Interior map alone (spec operation).
pub fn build_interior_map(
    curve: &Arc<JordanCurve>,
    n_boundary: usize,
    tol: f64,
) -> Result<ConformalMap> {
    Ok(build_maps(curve, n_boundary, tol)?.0)
}

/// Exterior map alone (spec operation).
pub fn build_exterior_map(
    curve: &Arc<JordanCurve>,
    n_boundary: usize,
    tol: f64,
) -> Result<ConformalMap> {
    Ok(build_maps(curve, n_boundary, tol)?.1)
}

impl ConformalMap {
    fn assemble(
        side: Side,
        curve: Arc<JordanCurve>,
        chain: Arc<zipper::ZipperChain>,
        norm: Normalization,
        base_image: Option<Point2>,
        tol: f64,
    ) -> Result<ConformalMap> {
        let mut map = ConformalMap {
            side,
            curve,
            chain,
            norm,
            table: BoundaryTable {
                angles: Vec::new(),
                params: Vec::new(),
                direction: 1.0,
            },
            accuracy: 0.0,
            base_image,
        };
        let n_table = (2 * map.chain.step_count()).clamp(256, 8192);
        let samples = exec::map_indexed(n_table, |k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n_table as f64;
            let p = map.boundary_point(theta);
            let (s, d) = map.curve.nearest_param(p);
            (theta, s, d)
        });
        let accuracy = samples.iter().fold(0.0f64, |acc, &(_, _, d)| acc.max(d));
        if accuracy > tol {
            return Err(Error::ConvergenceFailure {
                tol,
                achieved: accuracy,
            });
        }
        map.accuracy = accuracy;
        map.table = unwrap_table(&samples, map.curve.len())?;
        Ok(map)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn curve(&self) -> &Arc<JordanCurve> {
        &self.curve
    }

    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    pub fn base_image(&self) -> Option<Point2> {
        self.base_image
    }

    pub fn boundary_table(&self) -> &BoundaryTable {
        &self.table
    }

    /// Dump the boundary table as CSV rows `angle,arclength`.
    pub fn boundary_table_csv(&self) -> String {
        let mut out = String::from("angle,arclength\n");
        for (t, s) in self.table.angles.iter().zip(&self.table.params) {
            out.push_str(&format!("{t:.17e},{s:.17e}\n"));
        }
        out
    }

    /// Forward evaluation: preimage point (disk side) to plane point.
    /// Interior preimages live in the unit disk, exterior ones outside it.
    pub fn forward(&self, u: C64) -> Point2 {
        let z = match self.norm {
            Normalization::Interior { q } => {
                let v = (u + q) / (C64::new(1.0, 0.0) + q.conj() * u);
                self.chain.from_halfplane(cayley_inv(v), Side::Interior)
            }
            Normalization::Exterior { a, b } => {
                let v = C64::new(1.0, 0.0) / u;
                let w = cayley_inv(v);
                self.chain
                    .from_halfplane(w * b + a, Side::Exterior)
            }
        };
        Point2::new(z.re, z.im)
    }

    /// Inverse evaluation: plane point to preimage point.
    pub fn inverse(&self, p: Point2) -> C64 {
        let z = C64::new(p.x, p.y);
        match self.norm {
            Normalization::Interior { q } => {
                let v = cayley(self.chain.to_halfplane(z, Side::Interior));
                (v - q) / (C64::new(1.0, 0.0) - q.conj() * v)
            }
            Normalization::Exterior { a, b } => {
                let w = self.chain.to_halfplane(z, Side::Exterior);
                C64::new(1.0, 0.0) / cayley((w - a) / b)
            }
        }
    }

    /// Boundary point at preimage angle `theta`.
    pub fn boundary_point(&self, theta: f64) -> Point2 {
        let u = C64::from_polar(1.0, theta);
        let xi = match self.norm {
            Normalization::Interior { q } => {
                let v = (u + q) / (C64::new(1.0, 0.0) + q.conj() * u);
                halfplane_boundary_coord(v)
            }
            Normalization::Exterior { a, b } => {
                let v = C64::new(1.0, 0.0) / u;
                let xi0 = halfplane_boundary_coord(v);
                if xi0.is_infinite() {
                    f64::INFINITY
                } else {
                    xi0 * b + a
                }
            }
        };
        let z = self.chain.boundary_from_real(xi, self.side);
        Point2::new(z.re, z.im)
    }

    /// Arclength parameter of the boundary point at angle `theta`, snapped
    /// to the curve.
    pub fn boundary_param(&self, theta: f64) -> f64 {
        self.curve.nearest_param(self.boundary_point(theta)).0
    }

    /// Preimage angle whose boundary point has arclength parameter `s`.
    /// Seeds from the table, then bisects; the correspondence is a cyclic
    /// homeomorphism so the bracket is monotone.
    pub fn angle_of_param(&self, s: f64) -> f64 {
        let s = self.curve.wrap(s);
        let t = &self.table;
        let n = t.angles.len();
        let total = self.curve.len();
        // locate bracket in the unwrapped param sequence
        let target = |sp: f64| -> f64 {
            // unwrapped distance of sp from params[0] in traversal direction
            let mut d = (sp - self.curve.wrap(t.params[0])) * t.direction;
            if d < 0.0 {
                d += total;
            }
            d
        };
        let goal = target(s);
        let mut lo = 0usize;
        let mut hi = n; // virtual index n = params[0] + total
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let v = if mid == n {
                total
            } else {
                (t.params[mid] - t.params[0]) * t.direction
            };
            if v <= goal {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let th_lo = t.angles[lo];
        let th_hi = if hi == n {
            t.angles[0] + 2.0 * std::f64::consts::PI
        } else {
            t.angles[hi]
        };
        // bisect on the unwrapped param function
        let mut a = th_lo;
        let mut b = th_hi;
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            let sm = self.boundary_param(m);
            let v = target(sm);
            if v <= goal {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-14 {
                break;
            }
        }
        0.5 * (a + b)
    }

    /// Shadow projection: boundary endpoint of the hyperbolic ray through
    /// `w`, as a point snapped onto the curve.
    pub fn shadow_project(&self, w: Point2) -> Result<Point2> {
        self.check_side(w)?;
        let u = self.inverse(w);
        match self.side {
            Side::Interior => {
                if u.norm() < 1e-9 {
                    return Err(Error::BasePointUndefined);
                }
            }
            Side::Exterior => {
                if u.norm() > 1e12 {
                    return Err(Error::BasePointUndefined);
                }
            }
        }
        let theta = u.arg();
        let p = self.boundary_point(theta);
        let (s, _) = self.curve.nearest_param(p);
        Ok(self.curve.point_at(s))
    }

    /// Shadow parameter (arclength) of the ray through `w`.
    pub fn shadow_param(&self, w: Point2) -> Result<f64> {
        let p = self.shadow_project(w)?;
        Ok(self.curve.nearest_param(p).0)
    }

    fn check_side(&self, w: Point2) -> Result<()> {
        let inside = self.curve.contains(w);
        let on_curve = self.curve.dist_to(w) <= self.curve.snap_tol();
        match self.side {
            Side::Interior if !inside || on_curve => Err(Error::OutsideDomain(w.x, w.y)),
            Side::Exterior if inside || on_curve => Err(Error::OutsideDomain(w.x, w.y)),
            _ => Ok(()),
        }
    }

    /// Hyperbolic ray toward the boundary point `z` (which must lie on the
    /// curve within snapping tolerance), sampled geometrically toward the
    /// boundary. Interior rays start at the base image; exterior rays start
    /// at preimage radius `outer_radius` (collar truncation).
    pub fn hyperbolic_ray(&self, z: Point2, n_samples: usize) -> Result<HyperbolicRay> {
        let s = self.curve.param_of(z)?;
        if n_samples < 2 {
            return Err(Error::TooFewSamples {
                need: 2,
                got: n_samples,
            });
        }
        Ok(self.ray_at_param(s, n_samples, 2.0))
    }

    /// Ray addressed by arclength parameter; used by the reflection cache.
    pub fn ray_at_param(&self, s: f64, n_samples: usize, outer_radius: f64) -> HyperbolicRay {
        let theta = self.angle_of_param(s);
        self.ray_at_angle(theta, s, n_samples, outer_radius)
    }

    /// Ray addressed by preimage angle (exact in the preimage; no angle
    /// root-finding). The shadow parameter is computed from the landing.
    pub fn ray_at_angle(
        &self,
        theta: f64,
        shadow_param: f64,
        n_samples: usize,
        outer_radius: f64,
    ) -> HyperbolicRay {
        // geometric spacing toward the boundary: delta halves every
        // `per_octave` samples down to 2^-octaves
        let octaves = 30usize;
        let per_octave = (n_samples / octaves).max(2);
        let count = octaves * per_octave;
        let shadow_point = self.curve.point_at(shadow_param);
        let mut samples: Vec<RaySample> = Vec::with_capacity(count + 2);
        let ratio = 2f64.powf(-1.0 / per_octave as f64);
        let mut delta = 1.0f64;
        for _ in 0..=count {
            let u = match self.side {
                Side::Interior => C64::from_polar(1.0 - delta, theta),
                Side::Exterior => C64::from_polar(1.0 + (outer_radius - 1.0) * delta, theta),
            };
            let p = self.forward(u);
            samples.push(RaySample {
                point: p,
                radial: u.norm(),
                arclen: 0.0,
                dist: self.curve.dist_to(p),
            });
            delta *= ratio;
        }
        // exact landing point on the curve
        samples.push(RaySample {
            point: shadow_point,
            radial: 1.0,
            arclen: 0.0,
            dist: 0.0,
        });
        let mut acc = 0.0;
        for i in 1..samples.len() {
            acc += samples[i].point.dist(samples[i - 1].point);
            samples[i].arclen = acc;
        }
        HyperbolicRay {
            side: self.side,
            shadow_param,
            shadow_point,
            preimage_angle: theta,
            samples,
            total_arclen: acc,
        }
    }
}

impl HyperbolicRay {
    /// Arclength from the sample at preimage radius `rho` to the boundary
    /// endpoint, interpolating inside cells.
    pub fn tail_arclen_at_radial(&self, rho: f64) -> f64 {
        let (i, t) = self.locate_radial(rho);
        let a = &self.samples[i];
        let b = &self.samples[i + 1];
        let arc = a.arclen + t * (b.arclen - a.arclen);
        self.total_arclen - arc
    }

    /// Point at given arclength measured backwards from the boundary
    /// endpoint.
    pub fn point_at_tail_arclen(&self, tail: f64) -> Option<Point2> {
        let target = self.total_arclen - tail;
        if target < self.samples[0].arclen - 1e-12 || tail < -1e-12 {
            return None;
        }
        let target = target.max(self.samples[0].arclen);
        // binary search over cumulative arclength
        let mut lo = 0usize;
        let mut hi = self.samples.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.samples[mid].arclen <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let a = &self.samples[lo];
        let b = &self.samples[hi];
        let span = b.arclen - a.arclen;
        let t = if span > 0.0 {
            (target - a.arclen) / span
        } else {
            0.0
        };
        Some(a.point.lerp(b.point, t))
    }

    fn locate_radial(&self, rho: f64) -> (usize, f64) {
        // radial is monotone along the polyline: increasing for interior
        // rays, decreasing for exterior ones
        let inc = self.side == Side::Interior;
        let n = self.samples.len();
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let v = self.samples[mid].radial;
            let go_right = if inc { v <= rho } else { v >= rho };
            if go_right {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let a = self.samples[lo].radial;
        let b = self.samples[hi].radial;
        let t = if (b - a).abs() > 0.0 {
            ((rho - a) / (b - a)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        (lo, t)
    }

    /// Cumulative weighted length (density dist^exponent) from the start;
    /// one entry per sample. The cell reaching the boundary endpoint uses
    /// the closed form for a linearly vanishing distance.
    pub fn weighted_cumulative(&self, curve: &JordanCurve, exponent: f64) -> Vec<f64> {
        let mut cum = Vec::with_capacity(self.samples.len());
        cum.push(0.0);
        let mut acc = 0.0;
        for i in 1..self.samples.len() {
            let a = &self.samples[i - 1];
            let b = &self.samples[i];
            acc += weighted_cell(curve, a.point, b.point, a.dist, b.dist, exponent);
            cum.push(acc);
        }
        cum
    }
}

/// Weighted length of a polyline path under the density dist(., curve)^e.
///
/// Composite midpoint per cell; a cell with exactly one endpoint on the
/// curve is integrated in closed form assuming linearly vanishing distance.
/// An empty or single-point path has length zero. For exponents <= -1 the
/// integral diverges whenever the path touches the curve.
pub fn weighted_length(curve: &JordanCurve, path: &[Point2], exponent: f64) -> Result<f64> {
    if path.len() < 2 {
        return Ok(0.0);
    }
    let touch_tol = 1e-12 * curve.diameter();
    if exponent <= -1.0 {
        for p in path {
            if curve.dist_to(*p) <= touch_tol {
                return Err(Error::NonFinite(exponent));
            }
        }
    }
    let mut acc = 0.0;
    for w in path.windows(2) {
        let da = curve.dist_to(w[0]);
        let db = curve.dist_to(w[1]);
        acc += weighted_cell(curve, w[0], w[1], da, db, exponent);
        if !acc.is_finite() {
            return Err(Error::NonFinite(exponent));
        }
    }
    Ok(acc)
}

fn weighted_cell(
    curve: &JordanCurve,
    a: Point2,
    b: Point2,
    da: f64,
    db: f64,
    e: f64,
) -> f64 {
    let len = a.dist(b);
    if len == 0.0 {
        return 0.0;
    }
    if e == 0.0 {
        return len;
    }
    let touch_tol = 1e-12 * curve.diameter();
    let a_on = da <= touch_tol;
    let b_on = db <= touch_tol;
    if a_on ^ b_on {
        // closed form for dist falling linearly to zero across the cell
        let d = if a_on { db } else { da };
        return len * d.powf(e) / (e + 1.0);
    }
    if a_on && b_on {
        return if e > 0.0 { 0.0 } else { f64::INFINITY };
    }
    let mid = a.lerp(b, 0.5);
    curve.dist_to(mid).powf(e) * len
}

/// Audit of the shortest-curve property of conformal images of hyperbolic
/// geodesics: the measured constant over sampled point pairs.
pub fn gehring_hayman_constant(map: &ConformalMap, n_pairs: usize, seed: u64) -> f64 {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 1.0f64;
    for _ in 0..n_pairs {
        let r1: f64 = rng.gen_range(0.05..0.95f64);
        let t1: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r2: f64 = rng.gen_range(0.05..0.95f64);
        let t2: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let x = C64::from_polar(r1, t1);
        let y = C64::from_polar(r2, t2);
        let geo = disk_geodesic(x, y, 64);
        let chord: Vec<C64> = (0..=64)
            .map(|k| x + (y - x) * (k as f64 / 64.0))
            .collect();
        let lg = image_length(map, &geo);
        let lc = image_length(map, &chord);
        if lc > 0.0 {
            worst = worst.max(lg / lc);
        }
    }
    worst
}

fn image_length(map: &ConformalMap, pts: &[C64]) -> f64 {
    let img: Vec<Point2> = pts.iter().map(|&u| map.forward(u)).collect();
    crate::geom::polyline_length(&img)
}

/// Hyperbolic geodesic between two points of the unit disk, sampled as a
/// polyline (via the Mobius transport of a diameter segment).
pub fn disk_geodesic(x: C64, y: C64, n: usize) -> Vec<C64> {
    // move x to 0: m(u) = (u - x)/(1 - conj(x) u); geodesic is then radial
    let m = |u: C64| (u - x) / (C64::new(1.0, 0.0) - x.conj() * u);
    let minv = |u: C64| (u + x) / (C64::new(1.0, 0.0) + x.conj() * u);
    let ym = m(y);
    (0..=n)
        .map(|k| minv(ym * (k as f64 / n as f64)))
        .collect()
}

fn cayley(w: C64) -> C64 {
    (w - C64::new(0.0, 1.0)) / (w + C64::new(0.0, 1.0))
}

fn cayley_inv(u: C64) -> C64 {
    C64::new(0.0, 1.0) * (C64::new(1.0, 0.0) + u) / (C64::new(1.0, 0.0) - u)
}

/// Real boundary coordinate of the half-plane point corresponding to a
/// unimodular disk point under the inverse Cayley transform.
fn halfplane_boundary_coord(v: C64) -> f64 {
    // v on the unit circle; i(1+v)/(1-v) is real there
    let denom = C64::new(1.0, 0.0) - v;
    if denom.norm() < 1e-14 {
        return f64::INFINITY;
    }
    let w = C64::new(0.0, 1.0) * (C64::new(1.0, 0.0) + v) / denom;
    w.re
}

/// Deepest point of the bounded side: maximizes distance to the curve.
/// Coarse grid scan followed by a shrinking pattern search.
pub fn deepest_interior_point(curve: &JordanCurve) -> Point2 {
    let verts = curve.vertices();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for v in verts {
        x0 = x0.min(v.x);
        x1 = x1.max(v.x);
        y0 = y0.min(v.y);
        y1 = y1.max(v.y);
    }
    let n = 96;
    let mut best = Point2::new((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let mut best_d = if curve.contains(best) {
        curve.dist_to(best)
    } else {
        -1.0
    };
    for i in 0..=n {
        for j in 0..=n {
            let p = Point2::new(
                x0 + (x1 - x0) * i as f64 / n as f64,
                y0 + (y1 - y0) * j as f64 / n as f64,
            );
            if !curve.contains(p) {
                continue;
            }
            let d = curve.dist_to(p);
            if d > best_d {
                best_d = d;
                best = p;
            }
        }
    }
    let mut step = (x1 - x0).max(y1 - y0) / n as f64;
    for _ in 0..40 {
        let mut improved = false;
        for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let p = Point2::new(best.x + dx * step, best.y + dy * step);
            if curve.contains(p) {
                let d = curve.dist_to(p);
                if d > best_d {
                    best_d = d;
                    best = p;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
        if step < 1e-12 * curve.diameter() {
            break;
        }
    }
    best
}

fn unwrap_table(samples: &[(f64, f64, f64)], total: f64) -> Result<BoundaryTable> {
    let n = samples.len();
    let angles: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let raw: Vec<f64> = samples.iter().map(|s| s.1).collect();
    // Determine traversal direction by majority vote of increments.
    let mut pos = 0usize;
    let mut neg = 0usize;
    for i in 1..n {
        let mut d = raw[i] - raw[i - 1];
        if d > total / 2.0 {
            d -= total;
        }
        if d < -total / 2.0 {
            d += total;
        }
        if d > 0.0 {
            pos += 1;
        } else if d < 0.0 {
            neg += 1;
        }
    }
    let direction = if pos >= neg { 1.0 } else { -1.0 };
    // Unwrap monotonically in the traversal direction.
    let mut params = Vec::with_capacity(n);
    params.push(raw[0]);
    let mut acc = raw[0];
    for i in 1..n {
        let mut d = (raw[i] - raw[i - 1]) * direction;
        while d < -total / 2.0 {
            d += total;
        }
        while d > 1.5 * total {
            d -= total;
        }
        if d < 0.0 {
            // small backtrack from numerical noise: clamp, the
            // correspondence must be a homeomorphism
            if d < -1e-6 * total {
                return Err(Error::ConvergenceFailure {
                    tol: 0.0,
                    achieved: -d,
                });
            }
            d = 0.0;
        }
        acc += d * direction;
        params.push(acc);
    }
    Ok(BoundaryTable {
        angles,
        params,
        direction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves;

    fn disk_maps(n: usize) -> (ConformalMap, ConformalMap) {
        let curve = Arc::new(curves::circle(n, 1.0));
        build_maps(&curve, n, 1e-2).unwrap()
    }

    #[test]
    fn interior_disk_identity() {
        let curve = Arc::new(curves::circle(512, 1.0));
        let (int, _) = build_maps(&curve, 512, 1e-3).unwrap();
        let base = int.base_image().unwrap();
        assert!(base.norm() < 1e-3, "base {base:?} should be near origin");
        // The map should be the identity up to rotation: measure the worst
        // deviation of |forward(u)| from |u| on an interior grid.
        let mut worst = 0.0f64;
        for k in 0..16 {
            for r in [0.3, 0.6, 0.9, 0.99] {
                let th = std::f64::consts::TAU * k as f64 / 16.0;
                let p = int.forward(C64::from_polar(r, th));
                worst = worst.max((p.norm() - r).abs());
            }
        }
        assert!(worst < 2e-3, "radial deviation {worst}");
    }

    #[test]
    fn boundary_table_rotation_fit() {
        let (int, _) = disk_maps(512);
        // angle -> param should be angle-affine for the disk: s = R*(theta-c)
        let t = int.boundary_table();
        let n = t.angles.len();
        let slope = (t.params[n - 1] - t.params[0]) / (t.angles[n - 1] - t.angles[0]);
        let mut worst = 0.0f64;
        for i in 0..n {
            let pred = t.params[0] + slope * (t.angles[i] - t.angles[0]);
            worst = worst.max((pred - t.params[i]).abs());
        }
        assert!((slope.abs() - 1.0).abs() < 1e-2, "slope {slope}");
        assert!(worst < 1e-2 * int.curve().len(), "table deviation {worst}");
    }

    #[test]
    fn exterior_disk_identity_on_probe_circles() {
        let (_, ext) = disk_maps(512);
        // up to rotation, |forward(v)| should equal |v| on probe circles
        for r in [1.1, 2.0] {
            let mut worst = 0.0f64;
            for k in 0..32 {
                let th = std::f64::consts::TAU * k as f64 / 32.0;
                let p = ext.forward(C64::from_polar(r, th));
                worst = worst.max((p.norm() - r).abs());
            }
            assert!(worst < 1e-2 * r, "probe circle {r}: deviation {worst}");
        }
    }

    #[test]
    fn exterior_translation_equivariance() {
        let curve = Arc::new(curves::circle(128, 1.0));
        let (_, ext) = build_maps(&curve, 128, 1e-2).unwrap();
        let shifted: Vec<Point2> = curve
            .vertices()
            .iter()
            .map(|p| Point2::new(p.x + 5.0, p.y))
            .collect();
        let curve2 = Arc::new(crate::curve::validate_curve(shifted).unwrap());
        let (_, ext2) = build_maps(&curve2, 128, 1e-2).unwrap();
        for k in 0..8 {
            let v = C64::from_polar(1.5, std::f64::consts::TAU * k as f64 / 8.0);
            let a = ext.forward(v);
            let b = ext2.forward(v);
            assert!(
                (b.x - a.x - 5.0).abs() < 2e-2 && (b.y - a.y).abs() < 2e-2,
                "equivariance violated: {a:?} vs {b:?}"
            );
        }
    }

    #[test]
    fn zero_tolerance_rejected() {
        let curve = Arc::new(curves::circle(64, 1.0));
        assert!(matches!(
            build_maps(&curve, 64, 0.0),
            Err(Error::ConvergenceFailure { .. })
        ));
    }

    #[test]
    fn square_base_image_is_center() {
        let curve = Arc::new(curves::square());
        let (int, _) = build_maps(&curve, 64, 1e-2).unwrap();
        let base = int.base_image().unwrap();
        assert!(base.dist(Point2::new(0.5, 0.5)) < 1e-3, "base {base:?}");
    }

    #[test]
    fn interior_ray_is_radial_on_disk() {
        let curve = Arc::new(curves::circle(512, 1.0));
        let (int, _) = build_maps(&curve, 512, 1e-3).unwrap();
        let ray = int.hyperbolic_ray(Point2::new(1.0, 0.0), 240).unwrap();
        // Hausdorff distance to the radial segment [0, (1,0)]
        let mut worst = 0.0f64;
        for s in &ray.samples {
            worst = worst.max(s.point.y.abs().max(((s.point.x).clamp(0.0, 1.0) - s.point.x).abs()));
        }
        assert!(worst < 1e-3, "ray deviation from radial: {worst}");
        let last = ray.samples.last().unwrap();
        assert!(last.point.dist(Point2::new(1.0, 0.0)) < 1e-9);
    }

    #[test]
    fn ray_rejects_interior_point() {
        let curve = Arc::new(curves::circle(64, 1.0));
        let (int, _) = build_maps(&curve, 64, 1e-2).unwrap();
        assert!(matches!(
            int.hyperbolic_ray(Point2::new(0.2, 0.0), 64),
            Err(Error::PointNotOnCurve(_, _))
        ));
    }

    #[test]
    fn shadow_project_disk() {
        let curve = Arc::new(curves::circle(512, 1.0));
        let (int, ext) = build_maps(&curve, 512, 1e-3).unwrap();
        let s = int.shadow_project(Point2::new(0.5, 0.0)).unwrap();
        assert!(s.dist(Point2::new(1.0, 0.0)) < 1e-3, "{s:?}");
        let s = ext.shadow_project(Point2::new(3.0, 0.0)).unwrap();
        assert!(s.dist(Point2::new(1.0, 0.0)) < 1e-2, "{s:?}");
        // base point undefined at the origin
        assert!(matches!(
            int.shadow_project(Point2::new(0.0, 0.0)).or_else(|e| match e {
                Error::BasePointUndefined => Err(e),
                _ => Ok(Point2::new(0.0, 0.0)),
            }),
            Err(Error::BasePointUndefined)
        ));
        // outside the side
        assert!(int.shadow_project(Point2::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn shadow_of_ray_points_is_fixed() {
        let curve = Arc::new(curves::circle(256, 1.0));
        let (int, _) = build_maps(&curve, 256, 1e-2).unwrap();
        let z = curve.point_at(1.3);
        let ray = int.hyperbolic_ray(z, 120).unwrap();
        for idx in [30, 60, 90] {
            let p = ray.samples[idx].point;
            if p.norm() < 1e-6 {
                continue;
            }
            let s = int.shadow_project(p).unwrap();
            assert!(s.dist(ray.shadow_point) < 5e-3, "{s:?} vs {:?}", ray.shadow_point);
        }
    }

    #[test]
    fn weighted_length_radial_oracle() {
        // integral of (1-s)^(-1/2) over [3/4, 1] equals 1 exactly
        let curve = curves::circle(512, 1.0);
        let mut path = Vec::new();
        let m = 20usize; // samples per octave
        let octaves = 26usize;
        for k in 0..=(m * octaves) {
            let delta = 0.25 * 2f64.powf(-(k as f64) / m as f64);
            path.push(Point2::new(1.0 - delta, 0.0));
        }
        path.push(Point2::new(1.0, 0.0));
        let v = weighted_length(&curve, &path, -0.5).unwrap();
        assert!((v - 1.0).abs() < 1e-3, "weighted length {v}");
    }

    #[test]
    fn weighted_length_exponent_zero_is_arclength() {
        let curve = curves::circle(64, 1.0);
        let path = vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.3, 0.1),
            Point2::new(0.5, -0.2),
        ];
        let v = weighted_length(&curve, &path, 0.0).unwrap();
        assert!((v - crate::geom::polyline_length(&path)).abs() < 1e-15);
        assert_eq!(weighted_length(&curve, &[], 0.5).unwrap(), 0.0);
    }

    #[test]
    fn weighted_length_divergent_exponent() {
        let curve = curves::circle(64, 1.0);
        let path = vec![Point2::new(0.5, 0.0), Point2::new(1.0, 0.0)];
        assert!(matches!(
            weighted_length(&curve, &path, -1.5),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn ray_tail_monotone() {
        let curve = Arc::new(curves::circle(256, 1.0));
        let (int, _) = build_maps(&curve, 256, 1e-2).unwrap();
        let ray = int.hyperbolic_ray(Point2::new(1.0, 0.0), 200).unwrap();
        let cum = ray.weighted_cumulative(&curve, -0.5);
        let total = *cum.last().unwrap();
        let mut prev_tail = f64::MAX;
        for i in (0..cum.len()).step_by(20) {
            let tail = total - cum[i];
            assert!(tail <= prev_tail + 1e-12);
            prev_tail = tail;
        }
    }

    #[test]
    fn gehring_hayman_finite() {
        let curve = Arc::new(curves::square());
        let (int, _) = build_maps(&curve, 64, 1e-2).unwrap();
        let c1 = gehring_hayman_constant(&int, 40, 7);
        assert!(c1.is_finite() && c1 < 10.0, "C_GH = {c1}");
    }
}
