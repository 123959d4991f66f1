//! Points and boundary primitives with exact distance / nearest-point queries.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

/// A point of the plane, doubling as a complex number.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

pub const ORIGIN: Point = Point { re: 0.0, im: 0.0 };

impl Point {
    /// Both coordinates must be finite; NaN/infinity never enters geometry.
    pub fn new(re: f64, im: f64) -> Point {
        assert!(re.is_finite() && im.is_finite(), "non-finite point ({re}, {im})");
        Point { re, im }
    }

    pub fn from_polar(r: f64, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(r * c, r * s)
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn abs_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    /// Principal argument in (-pi, pi]; 0 for the origin.
    pub fn arg(self) -> f64 {
        if self.re == 0.0 && self.im == 0.0 {
            0.0
        } else {
            self.im.atan2(self.re)
        }
    }

    pub fn conj(self) -> Point {
        Point { re: self.re, im: -self.im }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).abs()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.re * other.re + self.im * other.im
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Complex division; caller keeps the denominator away from zero.
impl std::ops::Div for Point {
    type Output = Point;
    fn div(self, den: Point) -> Point {
        let d = den.abs_sq();
        Point {
            re: (self.re * den.re + self.im * den.im) / d,
            im: (self.im * den.re - self.re * den.im) / d,
        }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point { re: -self.re, im: -self.im }
    }
}

/// Complex product.
impl Mul for Point {
    type Output = Point;
    fn mul(self, rhs: Point) -> Point {
        Point {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

/// Scalar product.
impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point { re: self.re * rhs, im: self.im * rhs }
    }
}

/// A primitive boundary element. Distances are exact (up to rounding), and
/// one-dimensional pieces (arcs, segments, rays) are two-sided: they are slits
/// seen from either side.
#[derive(Clone, Debug)]
pub enum BoundaryPiece {
    /// Circular arc `center + radius*e^{i*theta}`, `theta` in `[theta_min, theta_max]`.
    Arc { center: Point, radius: f64, theta_min: f64, theta_max: f64 },
    /// Straight segment from `a` to `b`.
    Segment { a: Point, b: Point },
    /// Half-line from `origin` in direction `angle`.
    Ray { origin: Point, angle: f64 },
    /// Full circle.
    Circle { center: Point, radius: f64 },
}

impl BoundaryPiece {
    pub fn arc(center: Point, radius: f64, theta_min: f64, theta_max: f64) -> BoundaryPiece {
        let span = theta_max - theta_min;
        assert!(radius > 0.0, "arc radius must be positive");
        assert!(span > 0.0 && span <= TAU + 1e-12, "arc span must lie in (0, 2*pi]");
        BoundaryPiece::Arc { center, radius, theta_min, theta_max }
    }

    pub fn segment(a: Point, b: Point) -> BoundaryPiece {
        assert!(a != b, "degenerate segment");
        BoundaryPiece::Segment { a, b }
    }

    pub fn ray(origin: Point, angle: f64) -> BoundaryPiece {
        BoundaryPiece::Ray { origin, angle }
    }

    pub fn circle(center: Point, radius: f64) -> BoundaryPiece {
        assert!(radius > 0.0, "circle radius must be positive");
        BoundaryPiece::Circle { center, radius }
    }

    /// Point of the piece closest to `p`.
    pub fn nearest_point(&self, p: Point) -> Point {
        match *self {
            BoundaryPiece::Circle { center, radius } => {
                let v = p - center;
                let d = v.abs();
                if d == 0.0 {
                    // Every circle point is equidistant; pick angle 0.
                    center + Point::new(radius, 0.0)
                } else {
                    center + v * (radius / d)
                }
            }
            BoundaryPiece::Arc { center, radius, theta_min, theta_max } => {
                let v = p - center;
                let phi = if v.re == 0.0 && v.im == 0.0 { theta_min } else { v.im.atan2(v.re) };
                // Offset from theta_min, wrapped into [0, 2*pi).
                let off = (phi - theta_min).rem_euclid(TAU);
                let span = theta_max - theta_min;
                if off <= span {
                    let d = v.abs();
                    if d == 0.0 {
                        center + Point::from_polar(radius, theta_min)
                    } else {
                        center + v * (radius / d)
                    }
                } else {
                    let e0 = center + Point::from_polar(radius, theta_min);
                    let e1 = center + Point::from_polar(radius, theta_max);
                    if p.dist(e0) <= p.dist(e1) {
                        e0
                    } else {
                        e1
                    }
                }
            }
            BoundaryPiece::Segment { a, b } => {
                let ab = b - a;
                let t = ((p - a).dot(ab) / ab.abs_sq()).clamp(0.0, 1.0);
                a + ab * t
            }
            BoundaryPiece::Ray { origin, angle } => {
                let u = Point::from_polar(1.0, angle);
                let t = (p - origin).dot(u).max(0.0);
                origin + u * t
            }
        }
    }

    /// Euclidean distance from `p` to the piece.
    pub fn distance(&self, p: Point) -> f64 {
        // The radial cases avoid cancellation through the foot point.
        match *self {
            BoundaryPiece::Circle { center, radius } => ((p - center).abs() - radius).abs(),
            BoundaryPiece::Arc { center, radius, theta_min, theta_max } => {
                let v = p - center;
                let phi = if v.re == 0.0 && v.im == 0.0 { theta_min } else { v.im.atan2(v.re) };
                let off = (phi - theta_min).rem_euclid(TAU);
                if off <= theta_max - theta_min {
                    (v.abs() - radius).abs()
                } else {
                    let e0 = center + Point::from_polar(radius, theta_min);
                    let e1 = center + Point::from_polar(radius, theta_max);
                    p.dist(e0).min(p.dist(e1))
                }
            }
            _ => p.dist(self.nearest_point(p)),
        }
    }

    /// Mirror image across the real axis.
    pub fn conj(&self) -> BoundaryPiece {
        match *self {
            BoundaryPiece::Arc { center, radius, theta_min, theta_max } => BoundaryPiece::Arc {
                center: center.conj(),
                radius,
                theta_min: -theta_max,
                theta_max: -theta_min,
            },
            BoundaryPiece::Segment { a, b } => BoundaryPiece::Segment { a: a.conj(), b: b.conj() },
            BoundaryPiece::Ray { origin, angle } => {
                BoundaryPiece::Ray { origin: origin.conj(), angle: -angle }
            }
            BoundaryPiece::Circle { center, radius } => {
                BoundaryPiece::Circle { center: center.conj(), radius }
            }
        }
    }

    /// Rough equality used by symmetry tests.
    pub fn approx_eq(&self, other: &BoundaryPiece, tol: f64) -> bool {
        fn ang_eq(a: f64, b: f64, tol: f64) -> bool {
            (a - b).rem_euclid(TAU).min((b - a).rem_euclid(TAU)) <= tol
        }
        match (self, other) {
            (
                BoundaryPiece::Arc { center: c1, radius: r1, theta_min: lo1, theta_max: hi1 },
                BoundaryPiece::Arc { center: c2, radius: r2, theta_min: lo2, theta_max: hi2 },
            ) => c1.dist(*c2) <= tol && (r1 - r2).abs() <= tol && ang_eq(*lo1, *lo2, tol) && ang_eq(*hi1, *hi2, tol),
            (BoundaryPiece::Segment { a: a1, b: b1 }, BoundaryPiece::Segment { a: a2, b: b2 }) => {
                (a1.dist(*a2) <= tol && b1.dist(*b2) <= tol)
                    || (a1.dist(*b2) <= tol && b1.dist(*a2) <= tol)
            }
            (BoundaryPiece::Ray { origin: o1, angle: t1 }, BoundaryPiece::Ray { origin: o2, angle: t2 }) => {
                o1.dist(*o2) <= tol && ang_eq(*t1, *t2, tol)
            }
            (BoundaryPiece::Circle { center: c1, radius: r1 }, BoundaryPiece::Circle { center: c2, radius: r2 }) => {
                c1.dist(*c2) <= tol && (r1 - r2).abs() <= tol
            }
            _ => false,
        }
    }
}

/// Uniform parametrization used by brute-force distance oracles in tests.
/// Rays are truncated at `ray_len` for sampling purposes.
pub fn sample_piece(piece: &BoundaryPiece, t: f64, ray_len: f64) -> Point {
    match *piece {
        BoundaryPiece::Arc { center, radius, theta_min, theta_max } => {
            center + Point::from_polar(radius, theta_min + t * (theta_max - theta_min))
        }
        BoundaryPiece::Segment { a, b } => a + (b - a) * t,
        BoundaryPiece::Ray { origin, angle } => origin + Point::from_polar(1.0, angle) * (t * ray_len),
        BoundaryPiece::Circle { center, radius } => center + Point::from_polar(radius, t * TAU - PI),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_distance_cases() {
        let s = BoundaryPiece::segment(Point::new(0.0, 0.0), Point::new(2.0, 0.0));
        assert!((s.distance(Point::new(1.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!((s.distance(Point::new(-1.0, 0.0)) - 1.0).abs() < 1e-15);
        assert!(s.distance(Point::new(1.5, 0.0)) < 1e-15);
    }

    #[test]
    fn arc_distance_in_and_out_of_range() {
        let a = BoundaryPiece::arc(ORIGIN, 1.0, 0.0, PI);
        assert!((a.distance(Point::new(0.0, 2.0)) - 1.0).abs() < 1e-15);
        // Below the upper half circle: nearest is an endpoint, (1, 0) or (-1, 0).
        let d = a.distance(Point::new(0.0, -2.0));
        assert!((d - 5f64.sqrt()).abs() < 1e-12);
        // Wrap-around containment: arc through the branch cut of atan2.
        let b = BoundaryPiece::arc(ORIGIN, 1.0, 3.0, 4.0);
        let inside_angle = 3.5;
        assert!(b.distance(Point::from_polar(2.0, inside_angle)) - 1.0 < 1e-12);
    }

    #[test]
    fn ray_distance_foot_vs_tip() {
        let r = BoundaryPiece::ray(Point::new(-0.25, 0.0), PI);
        // Point above the ray projects orthogonally.
        assert!((r.distance(Point::new(-2.0, 0.5)) - 0.5).abs() < 1e-15);
        // Point on the other side of the tip projects to the tip.
        let d = r.distance(Point::new(0.0, 1.0));
        assert!((d - (1.0 + 1.0 / 16.0f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn circle_distance_center_degenerate() {
        let c = BoundaryPiece::circle(ORIGIN, 1.0);
        assert!((c.distance(ORIGIN) - 1.0).abs() < 1e-15);
        let foot = c.nearest_point(ORIGIN);
        assert!((foot.abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nearest_point_lies_on_piece() {
        let pieces = [
            BoundaryPiece::arc(Point::new(0.3, -0.2), 2.0, -1.0, 2.5),
            BoundaryPiece::segment(Point::new(-1.0, 0.5), Point::new(2.0, -0.25)),
            BoundaryPiece::ray(Point::new(0.1, 0.1), 0.7),
            BoundaryPiece::circle(Point::new(-0.4, 0.9), 0.6),
        ];
        let mut x = 0.123_f64;
        for piece in &pieces {
            for _ in 0..200 {
                // Cheap deterministic scatter.
                x = (x * 9301.0 + 49297.0) % 233280.0;
                let p = Point::new(x / 23328.0 - 5.0, (x * 7.0 % 233280.0) / 23328.0 - 5.0);
                let foot = piece.nearest_point(p);
                assert!(piece.distance(foot) <= 1e-12, "foot off piece: {piece:?} {p:?}");
                assert!((piece.distance(p) - p.dist(foot)).abs() <= 1e-9);
            }
        }
    }
}
