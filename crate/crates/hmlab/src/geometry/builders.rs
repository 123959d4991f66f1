//! Constructors for the domain catalog and the `--domain` name grammar.

use std::f64::consts::PI;

use super::{BoundaryPiece, DomainSpec, Membership, Point, ORIGIN};
use crate::error::{Error, Result};

/// The probed radius sequence of the counter-example domains,
/// `R_n = e^{n + 1/40^n}`.
pub fn ce_radius(n: u32) -> f64 {
    f64::exp(n as f64 + 40f64.powi(-(n as i32)))
}

/// Unit disk `|z| < 1`.
pub fn build_unit_disk() -> DomainSpec {
    DomainSpec::new(
        "disk".to_string(),
        vec![BoundaryPiece::circle(ORIGIN, 1.0)],
        Membership::Disk,
        1.0,
        true,
        false,
    )
}

/// Unit disk minus the radial slit `[a, 1)`, for `a` in `(0, 1)`.
///
/// Boundary: the unit circle plus the (two-sided) slit segment.
pub fn build_unit_disk_slit(a: f64) -> Result<DomainSpec> {
    if a.is_nan() || a <= 0.0 || a >= 1.0 {
        return Err(Error::invalid(format!("slit start a = {a} must lie in (0, 1)")));
    }
    Ok(DomainSpec::new(
        format!("slit-disk:a={a}"),
        vec![
            BoundaryPiece::circle(ORIGIN, 1.0),
            BoundaryPiece::segment(Point::new(a, 0.0), Point::new(1.0, 0.0)),
        ],
        Membership::SlitDisk { a },
        1.0,
        true,
        false,
    ))
}

/// Image of the disk under the Koebe map: the plane minus the ray
/// `(-inf, -1/4]`. Unbounded; the single boundary piece is the ray.
pub fn build_koebe() -> DomainSpec {
    DomainSpec::new(
        "koebe".to_string(),
        vec![BoundaryPiece::ray(Point::new(-0.25, 0.0), PI)],
        Membership::Koebe,
        1.0,
        true,
        true,
    )
}

/// Shared sector scaffolding of the two counter-example domains: the unit
/// circle arcs outside the sector `|Arg z| < 1` and the two confining rays.
fn sector_pieces() -> Vec<BoundaryPiece> {
    vec![
        BoundaryPiece::arc(ORIGIN, 1.0, 1.0, PI),
        BoundaryPiece::arc(ORIGIN, 1.0, -PI, -1.0),
        BoundaryPiece::ray(Point::from_polar(1.0, 1.0), 1.0),
        BoundaryPiece::ray(Point::from_polar(1.0, -1.0), -1.0),
    ]
}

fn check_levels(levels: u32) -> Result<()> {
    // Past 8 levels the slot half-width 1/40^n at radius e^n drops to the
    // double-precision noise floor; refuse rather than silently degrade.
    if !(1..=8).contains(&levels) {
        return Err(Error::invalid(format!("levels = {levels} must lie in 1..=8")));
    }
    Ok(())
}

/// First counter-example: unit disk joined with the sector `|Arg z| < 1`,
/// minus per-level obstacle arcs at radius `e^n` spanning
/// `1/40^n <= |Arg z| <= 1`.
pub fn build_ce1(levels: u32) -> Result<DomainSpec> {
    check_levels(levels)?;
    let mut pieces = sector_pieces();
    for n in 1..=levels {
        let rn = f64::exp(n as f64);
        let half = 40f64.powi(-(n as i32));
        pieces.push(BoundaryPiece::arc(ORIGIN, rn, half, 1.0));
        pieces.push(BoundaryPiece::arc(ORIGIN, rn, -1.0, -half));
    }
    Ok(DomainSpec::new(
        format!("ce1:levels={levels}"),
        pieces,
        Membership::CounterExample { levels, walls: false },
        f64::exp(levels as f64),
        false,
        true,
    ))
}

/// Second counter-example: as [`build_ce1`] plus, per level, the two radial
/// wall segments at `|Arg z| = 1/40^n` spanning radii `[e^n, e^{n + 1/40^n}]`.
/// Each wall is stored once; point-to-segment distance is two-sided.
pub fn build_ce2(levels: u32) -> Result<DomainSpec> {
    let base = build_ce1(levels)?;
    let mut pieces = base.pieces.clone();
    for n in 1..=levels {
        let rn = f64::exp(n as f64);
        let half = 40f64.powi(-(n as i32));
        let outer = ce_radius(n);
        for sign in [1.0, -1.0] {
            pieces.push(BoundaryPiece::segment(
                Point::from_polar(rn, sign * half),
                Point::from_polar(outer, sign * half),
            ));
        }
    }
    Ok(DomainSpec::new(
        format!("ce2:levels={levels}"),
        pieces,
        Membership::CounterExample { levels, walls: true },
        f64::exp(levels as f64),
        false,
        true,
    ))
}

/// Star polygon with `spikes` outer vertices at radius `r_out` (angles
/// `2*pi*k/spikes`) alternating with inner vertices at radius `r_in`, offset
/// half a step. Starlike with respect to the origin.
pub fn build_star_polygon(spikes: u32, r_in: f64, r_out: f64) -> Result<DomainSpec> {
    if spikes < 3 {
        return Err(Error::invalid(format!("spikes = {spikes} must be >= 3")));
    }
    if r_in.is_nan() || r_out.is_nan() || r_in <= 0.0 || r_in >= r_out {
        return Err(Error::invalid(format!(
            "need 0 < r_in < r_out, got r_in = {r_in}, r_out = {r_out}"
        )));
    }
    let step = 2.0 * PI / spikes as f64;
    let mut vertices = Vec::with_capacity(2 * spikes as usize);
    for k in 0..spikes {
        vertices.push(Point::from_polar(r_out, k as f64 * step));
        vertices.push(Point::from_polar(r_in, (k as f64 + 0.5) * step));
    }
    let pieces = (0..vertices.len())
        .map(|i| BoundaryPiece::segment(vertices[i], vertices[(i + 1) % vertices.len()]))
        .collect();
    Ok(DomainSpec::new(
        format!("star:k={spikes},rin={r_in},rout={r_out}"),
        pieces,
        Membership::StarPolygon { vertices },
        r_out,
        true,
        false,
    ))
}

/// Parses the CLI domain grammar:
/// `disk`, `slit-disk:a=<v>`, `koebe`, `ce1:levels=<n>`, `ce2:levels=<n>`,
/// `star:k=<n>,rin=<v>,rout=<v>`.
pub fn parse_domain(spec: &str) -> Result<DomainSpec> {
    let (head, params) = match spec.split_once(':') {
        Some((h, p)) => (h, p),
        None => (spec, ""),
    };
    let mut kv = std::collections::BTreeMap::new();
    if !params.is_empty() {
        for part in params.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("bad domain parameter '{part}' in '{spec}'")))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    let get_f64 = |kv: &std::collections::BTreeMap<String, String>, key: &str| -> Result<f64> {
        kv.get(key)
            .ok_or_else(|| Error::invalid(format!("domain '{spec}' needs parameter '{key}'")))?
            .parse::<f64>()
            .map_err(|_| Error::invalid(format!("parameter '{key}' in '{spec}' is not a number")))
    };
    let get_u32 = |kv: &std::collections::BTreeMap<String, String>, key: &str| -> Result<u32> {
        kv.get(key)
            .ok_or_else(|| Error::invalid(format!("domain '{spec}' needs parameter '{key}'")))?
            .parse::<u32>()
            .map_err(|_| Error::invalid(format!("parameter '{key}' in '{spec}' is not an integer")))
    };
    match head {
        "disk" => Ok(build_unit_disk()),
        "koebe" => Ok(build_koebe()),
        "slit-disk" => build_unit_disk_slit(get_f64(&kv, "a")?),
        "ce1" => build_ce1(get_u32(&kv, "levels")?),
        "ce2" => build_ce2(get_u32(&kv, "levels")?),
        "star" => build_star_polygon(get_u32(&kv, "k")?, get_f64(&kv, "rin")?, get_f64(&kv, "rout")?),
        _ => Err(Error::invalid(format!("unknown domain '{spec}'"))),
    }
}
