//! Built-in test curves: circle, square, rounded L-shape, and a cusp curve
//! whose bounded side stresses the subhyperbolic condition.

use crate::curve::{validate_curve, JordanCurve};
use crate::geom::Point2;

/// Regular `n`-gon inscribed in the circle of radius `r`, counterclockwise.
pub fn circle(n: usize, r: f64) -> JordanCurve {
    let verts: Vec<Point2> = (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            Point2::new(r * t.cos(), r * t.sin())
        })
        .collect();
    validate_curve(verts).expect("regular polygon is simple")
}

/// Axis-aligned unit square.
pub fn square() -> JordanCurve {
    validate_curve(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.0, 1.0),
    ])
    .expect("square is simple")
}

/// L-shape with the reflex corner rounded by a circular arc, `n_round`
/// samples on the arc. Outer extent 2 x 2, inner cut 1 x 1.
pub fn rounded_l(n_round: usize) -> JordanCurve {
    let r = 0.25;
    let mut verts = vec![
        Point2::new(0.0, 0.0),
        Point2::new(2.0, 0.0),
        Point2::new(2.0, 1.0),
        Point2::new(1.0 + r, 1.0),
    ];
    // arc around the reflex corner at (1, 1), center (1 + r, 1 + r)
    let c = Point2::new(1.0 + r, 1.0 + r);
    for i in 1..n_round {
        let t = std::f64::consts::PI + std::f64::consts::FRAC_PI_2 * i as f64 / n_round as f64;
        // sweep from angle 3pi/2 backwards to pi around the center
        let a = 1.5 * std::f64::consts::PI - (t - std::f64::consts::PI);
        let a = a - std::f64::consts::FRAC_PI_2; // angles pi..pi/2 reversed
        let _ = a;
        let ang = 1.5 * std::f64::consts::PI
            - std::f64::consts::FRAC_PI_2 * i as f64 / n_round as f64;
        let p = Point2::new(c.x + r * ang.cos(), c.y + r * ang.sin());
        verts.push(p);
        let _ = t;
    }
    verts.push(Point2::new(1.0, 1.0 + r));
    verts.push(Point2::new(1.0, 2.0));
    verts.push(Point2::new(0.0, 2.0));
    validate_curve(verts).expect("rounded L is simple")
}

/// Closed curve with an inward-pointing cusp at the origin: the branches
/// y = +-x^{3/2} for x in [0, 1], capped by three straight sides. The cusp
/// points into the bounded side, so the bounded side fails the
/// subhyperbolic condition near the tip.
pub fn cusp(n_branch: usize) -> JordanCurve {
    let mut verts = Vec::with_capacity(2 * n_branch + 4);
    // lower branch from (1, -1) to the cusp tip at (0, 0)
    for i in 0..=n_branch {
        let x = 1.0 - i as f64 / n_branch as f64;
        verts.push(Point2::new(x, -x.powf(1.5)));
    }
    // upper branch from the tip back out to (1, 1)
    for i in 1..=n_branch {
        let x = i as f64 / n_branch as f64;
        verts.push(Point2::new(x, x.powf(1.5)));
    }
    // cap on the right, wrapping around x = 1.75
    verts.push(Point2::new(1.75, 1.0));
    verts.push(Point2::new(1.75, -1.0));
    validate_curve(verts).expect("cusp curve is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_curves_validate() {
        assert!(circle(512, 1.0).len() > 6.27);
        assert!((square().len() - 4.0).abs() < 1e-12);
        let l = rounded_l(16);
        assert!(l.len() > 7.0);
        let c = cusp(64);
        assert!(c.len() > 5.0);
    }
}
