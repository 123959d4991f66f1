//! Planar simply connected domains as explicit boundary-piece lists.
//!
//! A [`DomainSpec`] couples a membership predicate with a finite list of
//! [`BoundaryPiece`]s whose union is exactly the topological boundary of the
//! domain (plus, optionally, one artificial "escape" circle). Keeping the
//! boundary explicit makes `dist(z, ∂D)` exact, which is what the
//! walk-on-spheres kernel needs for its jump radii.

mod builders;
mod piece;

pub use piece::{sample_piece, BoundaryPiece, Point, ORIGIN};

use crate::error::{Error, Result};

/// Proximity at which a point counts as sitting on a slit piece and is
/// therefore excluded from the domain.
const ON_BOUNDARY_EPS: f64 = 1e-15;

/// Classification of a walk termination point.
///
/// `Far` means the nearest genuine boundary point has modulus `>= R` (it
/// contributes to `omega(R)`), `Near` means modulus `< R`, `Escape` means the
/// nearest piece is the artificial circle `|z| = R` (contributes to
/// `omega_hat(R)`), and `Ambiguous` records terminations where two pieces of
/// different classes sit inside the resolution band.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HitClass {
    Far,
    Near,
    Escape,
    Ambiguous,
}

/// Exact membership predicates for the domain catalog.
#[derive(Clone, Debug)]
enum Membership {
    /// Open unit disk.
    Disk,
    /// Unit disk minus the radial slit `[a, 1)`.
    SlitDisk { a: f64 },
    /// Koebe image domain: plane minus the ray `(-inf, -1/4]`.
    Koebe,
    /// The sector-with-obstacles counter-example domains. `walls` adds the
    /// radial wall segments of the second construction.
    CounterExample { levels: u32, walls: bool },
    /// Star polygon; membership by even-odd ray crossing.
    StarPolygon { vertices: Vec<Point> },
}

/// A named domain: membership predicate, boundary pieces, scale hints.
#[derive(Clone, Debug)]
pub struct DomainSpec {
    name: String,
    pieces: Vec<BoundaryPiece>,
    membership: Membership,
    scale: f64,
    starlike: bool,
    unbounded: bool,
    basepoint: Point,
    /// Index of the escape circle piece, when attached.
    escape_idx: Option<usize>,
    /// Radius of the escape circle, when attached.
    escape_radius: Option<f64>,
}

impl DomainSpec {
    fn new(
        name: String,
        pieces: Vec<BoundaryPiece>,
        membership: Membership,
        scale: f64,
        starlike: bool,
        unbounded: bool,
    ) -> DomainSpec {
        let d = DomainSpec {
            name,
            pieces,
            membership,
            scale,
            starlike,
            unbounded,
            basepoint: ORIGIN,
            escape_idx: None,
            escape_radius: None,
        };
        debug_assert!(d.contains(d.basepoint));
        d
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pieces(&self) -> &[BoundaryPiece] {
        &self.pieces
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn starlike(&self) -> bool {
        self.starlike
    }

    pub fn unbounded(&self) -> bool {
        self.unbounded
    }

    pub fn basepoint(&self) -> Point {
        self.basepoint
    }

    pub fn escape_index(&self) -> Option<usize> {
        self.escape_idx
    }

    /// Moves the basepoint; the new point must lie inside.
    pub fn with_basepoint(mut self, p: Point) -> Result<DomainSpec> {
        if !self.contains(p) {
            return Err(Error::PointOutsideDomain(p.re, p.im));
        }
        self.basepoint = p;
        Ok(self)
    }

    /// Appends the artificial circle `|z| = R` as a distinguished escape piece.
    ///
    /// Walks started at the basepoint stay in the component of
    /// `D ∩ {|z| < R}` containing it automatically, because walk-on-spheres
    /// jumps remain inside boundary-free disks.
    pub fn with_escape_circle(mut self, r: f64) -> Result<DomainSpec> {
        if r.is_nan() || r <= self.basepoint.abs() {
            return Err(Error::invalid(format!(
                "escape radius {r} must exceed |basepoint| = {}",
                self.basepoint.abs()
            )));
        }
        if self.escape_idx.is_some() {
            return Err(Error::invalid("escape circle already attached".to_string()));
        }
        self.pieces.push(BoundaryPiece::circle(ORIGIN, r));
        self.escape_idx = Some(self.pieces.len() - 1);
        self.escape_radius = Some(r);
        Ok(self)
    }

    /// Membership test. Boundary points (including slits) are outside.
    pub fn contains(&self, z: Point) -> bool {
        if !z.is_finite() {
            return false;
        }
        if let Some(r) = self.escape_radius {
            if z.abs() >= r {
                return false;
            }
        }
        match &self.membership {
            Membership::Disk => z.abs() < 1.0,
            Membership::SlitDisk { a } => {
                z.abs() < 1.0 && !(z.im == 0.0 && z.re >= *a && z.re < 1.0)
            }
            Membership::Koebe => !(z.im == 0.0 && z.re <= -0.25),
            Membership::CounterExample { levels, walls } => {
                ce_contains(z, *levels, *walls)
            }
            Membership::StarPolygon { vertices } => even_odd_inside(z, vertices),
        }
    }

    /// Exact distance from an interior point to the boundary (including the
    /// escape circle when attached).
    pub fn boundary_distance(&self, z: Point) -> Result<f64> {
        if !self.contains(z) {
            return Err(Error::PointOutsideDomain(z.re, z.im));
        }
        let mut best = f64::INFINITY;
        for piece in &self.pieces {
            best = best.min(piece.distance(z));
        }
        Ok(best)
    }

    /// Argmin piece with its foot point; ties break to the lowest index.
    pub fn nearest_piece(&self, z: Point) -> Result<(usize, Point, f64)> {
        if !self.contains(z) {
            return Err(Error::PointOutsideDomain(z.re, z.im));
        }
        Ok(self.nearest_piece_unchecked(z))
    }

    /// Same as [`nearest_piece`](Self::nearest_piece) without the membership
    /// check; the walk kernel maintains the interior invariant itself.
    pub(crate) fn nearest_piece_unchecked(&self, z: Point) -> (usize, Point, f64) {
        let mut best = (0usize, z, f64::INFINITY);
        for (i, piece) in self.pieces.iter().enumerate() {
            let d = piece.distance(z);
            if d < best.2 {
                best = (i, piece.nearest_point(z), d);
            }
        }
        best
    }

    /// Distance only, no membership check; the walk kernel's hot path.
    pub(crate) fn distance_unchecked(&self, z: Point) -> f64 {
        let mut best = f64::INFINITY;
        for piece in &self.pieces {
            let d = piece.distance(z);
            if d < best {
                best = d;
            }
        }
        best
    }

    /// The two closest pieces with their feet, for termination classification.
    pub(crate) fn two_nearest(&self, z: Point) -> [(usize, Point, f64); 2] {
        let mut first = (usize::MAX, z, f64::INFINITY);
        let mut second = (usize::MAX, z, f64::INFINITY);
        for (i, piece) in self.pieces.iter().enumerate() {
            let d = piece.distance(z);
            if d < first.2 {
                second = first;
                first = (i, piece.nearest_point(z), d);
            } else if d < second.2 {
                second = (i, piece.nearest_point(z), d);
            }
        }
        [first, second]
    }
}

/// Membership for the counter-example domains: strictly inside the unit disk,
/// or inside the sector `|Arg z| < 1` and not within `1e-15` of an obstacle
/// arc (or wall, for the walled variant). On-boundary points are outside.
fn ce_contains(z: Point, levels: u32, walls: bool) -> bool {
    let r = z.abs();
    if r < 1.0 {
        return true;
    }
    let theta = z.arg();
    if theta.abs() >= 1.0 {
        return false;
    }
    for n in 1..=levels {
        let rn = f64::exp(n as f64);
        let half = 40f64.powi(-(n as i32));
        // Obstacle arcs at radius e^n over half <= |theta| <= 1.
        let arc_dist = if theta.abs() >= half {
            (r - rn).abs()
        } else {
            // In the slot: nearest arc point is the endpoint at angle ±half.
            z.dist(Point::from_polar(rn, half.copysign(theta)))
        };
        if arc_dist <= ON_BOUNDARY_EPS {
            return false;
        }
        if walls {
            // Radial walls at |theta| = half, radii [e^n, e^{n + half}].
            let outer = f64::exp(n as f64 + half);
            for sign in [1.0, -1.0] {
                let a = Point::from_polar(rn, sign * half);
                let b = Point::from_polar(outer, sign * half);
                let ab = b - a;
                let t = ((z - a).dot(ab) / ab.abs_sq()).clamp(0.0, 1.0);
                if z.dist(a + ab * t) <= ON_BOUNDARY_EPS {
                    return false;
                }
            }
        }
    }
    true
}

/// Even-odd crossing test against a closed polygon.
fn even_odd_inside(z: Point, vertices: &[Point]) -> bool {
    let mut inside = false;
    let n = vertices.len();
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if z.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

pub use builders::{
    build_ce1, build_ce2, build_koebe, build_star_polygon, build_unit_disk, build_unit_disk_slit,
    ce_radius, parse_domain,
};
