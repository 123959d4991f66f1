//! Closed-form harmonic-measure values used as ground truth for the Monte
//! Carlo engine.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Counterclockwise arc of the unit circle from `e^{i*theta1}` to
/// `e^{i*theta2}`. Stored with span `theta2 - theta1` in `(0, 2*pi]`.
#[derive(Clone, Copy, Debug)]
pub struct ArcSpec {
    theta1: f64,
    theta2: f64,
}

impl ArcSpec {
    pub fn new(theta1: f64, theta2: f64) -> Result<ArcSpec> {
        if !theta1.is_finite() || !theta2.is_finite() {
            return Err(Error::invalid("non-finite arc endpoint".to_string()));
        }
        let mut span = (theta2 - theta1).rem_euclid(TAU);
        if span == 0.0 {
            if theta1 == theta2 {
                return Err(Error::invalid("empty arc".to_string()));
            }
            span = TAU; // full circle given as e.g. (0, 2*pi)
        }
        let t1 = theta1.rem_euclid(TAU);
        Ok(ArcSpec { theta1: t1, theta2: t1 + span })
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    pub fn span(&self) -> f64 {
        self.theta2 - self.theta1
    }

    pub fn full_circle() -> ArcSpec {
        ArcSpec { theta1: 0.0, theta2: TAU }
    }
}

/// Beurling-Nevanlinna projection bound: a closed connected set reaching the
/// unit circle from modulus `r0` has harmonic measure at the origin at least
/// `(2/pi) * asin((1-r0)/(1+r0))`.
pub fn bn_lower_bound(r0: f64) -> Result<f64> {
    if r0.is_nan() || r0 <= 0.0 || r0 > 1.0 {
        return Err(Error::invalid(format!("r0 = {r0} must lie in (0, 1]")));
    }
    Ok((2.0 / PI) * ((1.0 - r0) / (1.0 + r0)).asin())
}

/// Harmonic measure of the unit circle in the slit disk, evaluated at `-b`:
/// `omega_{D\[a,1)}(-b, ∂D) = 1 - (2/pi) atan(1/sqrt(Q^2-1))` with
/// `Q = (1+a)(1+b)/((1-a)(1-b))`.
pub fn slit_disk_escape(a: f64, b: f64) -> Result<f64> {
    if a.is_nan() || a <= 0.0 || a >= 1.0 {
        return Err(Error::invalid(format!("a = {a} must lie in (0, 1)")));
    }
    if b.is_nan() || !(0.0..1.0).contains(&b) {
        return Err(Error::invalid(format!("b = {b} must lie in [0, 1)")));
    }
    let q = (1.0 + a) * (1.0 + b) / ((1.0 - a) * (1.0 - b));
    Ok(1.0 - (2.0 / PI) * (1.0 / (q * q - 1.0).sqrt()).atan())
}

/// Circle-portion harmonic measure of the Koebe domain,
/// `omega_hat(R) = 1 - (2/pi) atan((4R-1)/(4 sqrt(R)))` for `R > 1/4`.
pub fn koebe_omega_hat(r: f64) -> Result<f64> {
    if r.is_nan() || r <= 0.25 {
        return Err(Error::invalid(format!("R = {r} must exceed 1/4")));
    }
    Ok(1.0 - (2.0 / PI) * ((4.0 * r - 1.0) / (4.0 * r.sqrt())).atan())
}

/// Far-boundary harmonic measure of the Koebe domain,
/// `omega(R) = (1/pi) * atan(sqrt(4R-1)/(2R-1))` on the continuous branch
/// with values in `(0, pi)`, realized as `atan2(sqrt(4R-1), 2R-1)` so the
/// value crosses `R = 1/2` smoothly.
pub fn koebe_omega(r: f64) -> Result<f64> {
    if r.is_nan() || r <= 0.25 {
        return Err(Error::invalid(format!("R = {r} must exceed 1/4")));
    }
    Ok((4.0 * r - 1.0).sqrt().atan2(2.0 * r - 1.0) / PI)
}

/// The ratio `omega_hat(R)/omega(R)`; tends to 2 as `R` grows.
pub fn koebe_ratio(r: f64) -> Result<f64> {
    Ok(koebe_omega_hat(r)? / koebe_omega(r)?)
}

/// Harmonic measure of an arc seen from the disk center: normalized angular
/// length.
pub fn center_arc_measure(arc: &ArcSpec) -> f64 {
    arc.span() / TAU
}

/// Harmonic measure of an arc at an interior point `z`, by Möbius transport
/// of `z` to the center: the image arc's normalized angular length.
pub fn arc_measure(z: Point, arc: &ArcSpec) -> Result<f64> {
    if z.abs() >= 1.0 {
        return Err(Error::PointOutsideDomain(z.re, z.im));
    }
    if arc.span() >= TAU {
        return Ok(1.0);
    }
    let one = Point::new(1.0, 0.0);
    let transport = |theta: f64| -> f64 {
        let w = Point::from_polar(1.0, theta);
        ((w - z) / (one - z.conj() * w)).arg()
    };
    let a1 = transport(arc.theta1());
    let a2 = transport(arc.theta2());
    let span = (a2 - a1).rem_euclid(TAU);
    Ok(span / TAU)
}

/// Two-sided bound for the harmonic measure of a geodesic at the origin in
/// terms of the hyperbolic distance `d` to it:
/// `e^{-d} <= omega <= (4/pi) e^{-d}` (upper bound clamped at 1).
pub fn geodesic_bounds(d: f64) -> (f64, f64) {
    debug_assert!(d >= 0.0);
    let e = (-d).exp();
    (e, (4.0 / PI * e).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::geodesic_chord;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn bn_lower_bound_values() {
        assert!(bn_lower_bound(1.0).unwrap().abs() < 1e-15);
        // arcsin(1/2) = pi/6 makes the bound exactly 1/3.
        assert!((bn_lower_bound(1.0 / 3.0).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((bn_lower_bound(0.5).unwrap() - 0.216346895938785).abs() < 1e-12);
        // Decreasing in r0.
        assert!(bn_lower_bound(0.2).unwrap() > bn_lower_bound(0.4).unwrap());
        assert!(bn_lower_bound(0.0).is_err());
        assert!(bn_lower_bound(1.5).is_err());
    }

    #[test]
    fn slit_disk_escape_values() {
        assert!((slit_disk_escape(0.5, 0.0).unwrap() - 0.783653104061).abs() < 1e-12);
        assert!((slit_disk_escape(0.5, 0.5).unwrap() - 0.929118108795).abs() < 1e-12);
        assert!((slit_disk_escape(0.25, 0.25).unwrap() - 0.76555337751).abs() < 1e-11);
        assert!((slit_disk_escape(0.75, 0.5).unwrap() - 0.969673304036).abs() < 1e-12);
        // A vanishing slit is almost never hit.
        assert!(slit_disk_escape(0.999999, 0.0).unwrap() > 0.999);
        // Strictly increasing in both arguments.
        assert!(slit_disk_escape(0.6, 0.0).unwrap() > slit_disk_escape(0.5, 0.0).unwrap());
        assert!(slit_disk_escape(0.5, 0.25).unwrap() > slit_disk_escape(0.5, 0.0).unwrap());
        assert!(slit_disk_escape(0.0, 0.0).is_err());
        assert!(slit_disk_escape(0.5, 1.0).is_err());
    }

    #[test]
    fn slit_hit_complements_bn_bound_exactly() {
        // The slit [a, 1) is its own circular projection, so the projection
        // bound is attained: 1 - escape(a, 0) = bn_lower_bound(a).
        for a in [0.1, 1.0 / 3.0, 0.5, 0.8] {
            let hit = 1.0 - slit_disk_escape(a, 0.0).unwrap();
            assert!((hit - bn_lower_bound(a).unwrap()).abs() < 1e-12, "a = {a}");
        }
    }

    #[test]
    fn koebe_omega_hat_values() {
        assert!(koebe_omega_hat(0.2500001).unwrap() > 0.999);
        assert!((koebe_omega_hat(1.0).unwrap() - 0.590334470602).abs() < 1e-12);
        assert!((koebe_omega_hat(100.0).unwrap() - 0.0636090050247).abs() < 1e-12);
        assert!(koebe_omega_hat(0.25).is_err());
    }

    #[test]
    fn koebe_omega_values() {
        // Branch midpoint: the denominator 2R-1 vanishes.
        assert!((koebe_omega(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((koebe_omega(1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((koebe_omega(100.0).unwrap() - 0.0318442664733).abs() < 1e-12);
        // Continuity across R = 1/2.
        let below = koebe_omega(0.5 - 1e-9).unwrap();
        let above = koebe_omega(0.5 + 1e-9).unwrap();
        assert!((below - above).abs() < 1e-8);
        assert!(below > 0.5 && above < 0.5);
        assert!(koebe_omega(0.1).is_err());
    }

    #[test]
    fn koebe_ratio_values_and_limit() {
        assert!((koebe_ratio(1.0).unwrap() - 1.77100341181).abs() < 1e-10);
        assert!((koebe_ratio(100.0).unwrap() - 1.9975025984).abs() < 1e-10);
        let decades: Vec<f64> = [1e2, 1e3, 1e4, 1e5]
            .iter()
            .map(|&r| koebe_ratio(r).unwrap())
            .collect();
        for pair in decades.windows(2) {
            assert!((pair[1] - 2.0).abs() < (pair[0] - 2.0).abs());
        }
    }

    #[test]
    fn koebe_ratio_range_on_log_grid() {
        let mut prev_gap = f64::INFINITY;
        for k in 0..=200 {
            let r = 10f64.powf(-0.52 + k as f64 * (8.0 + 0.52) / 200.0);
            let ratio = koebe_ratio(r).unwrap();
            assert!(ratio > 1.0 && ratio < 2.26, "R = {r}: ratio = {ratio}");
            if r >= 1e3 {
                let gap = (ratio - 2.0).abs();
                assert!(gap <= prev_gap, "R = {r}");
                prev_gap = gap;
            }
        }
    }

    #[test]
    fn center_arc_measure_values() {
        assert_eq!(center_arc_measure(&ArcSpec::full_circle()), 1.0);
        let quarter = ArcSpec::new(0.3, 0.3 + FRAC_PI_2).unwrap();
        assert!((center_arc_measure(&quarter) - 0.25).abs() < 1e-15);
        let sixth = ArcSpec::new(0.0, PI / 3.0).unwrap();
        assert!((center_arc_measure(&sixth) - 1.0 / 6.0).abs() < 1e-15);
        assert!(ArcSpec::new(0.1, 0.1).is_err());
    }

    #[test]
    fn arc_measure_values() {
        let arc = ArcSpec::new(FRAC_PI_2, 3.0 * FRAC_PI_2).unwrap();
        let at_center = arc_measure(Point::new(0.0, 0.0), &arc).unwrap();
        assert!((at_center - 0.5).abs() < 1e-15);
        // Möbius transport from z = 1/2: endpoint images are -0.8 ± 0.6i.
        let shifted = arc_measure(Point::new(0.5, 0.0), &arc).unwrap();
        assert!((shifted - 0.204832764699133).abs() < 1e-12);
        assert!(arc_measure(Point::new(1.0, 0.0), &arc).is_err());
    }

    #[test]
    fn arc_measure_mean_value_property() {
        // Averaging over a centered circle recovers the center value.
        let arc = ArcSpec::new(-0.3, 1.1).unwrap();
        let n = 20_000;
        let mut acc = 0.0;
        for k in 0..n {
            let s = Point::from_polar(0.5, TAU * k as f64 / n as f64);
            acc += arc_measure(s, &arc).unwrap();
        }
        let avg = acc / n as f64;
        assert!((avg - center_arc_measure(&arc)).abs() < 1e-6, "avg = {avg}");
    }

    #[test]
    fn arc_measure_rotation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..500 {
            let t1 = rng.gen_range(0.0..TAU);
            let t2 = t1 + rng.gen_range(0.01..TAU - 0.01);
            let rot = rng.gen_range(0.0..TAU);
            let z = Point::from_polar(rng.gen_range(0.0..0.95), rng.gen_range(0.0..TAU));
            let m1 = arc_measure(z, &ArcSpec::new(t1, t2).unwrap()).unwrap();
            let m2 = arc_measure(
                Point::from_polar(1.0, rot) * z,
                &ArcSpec::new(t1 + rot, t2 + rot).unwrap(),
            )
            .unwrap();
            assert!((m1 - m2).abs() <= 1e-12);
        }
    }

    #[test]
    fn arc_measure_additive_over_disjoint_arcs() {
        let z = Point::new(0.3, -0.4);
        let a = arc_measure(z, &ArcSpec::new(0.0, 1.0).unwrap()).unwrap();
        let b = arc_measure(z, &ArcSpec::new(1.0, 2.5).unwrap()).unwrap();
        let joint = arc_measure(z, &ArcSpec::new(0.0, 2.5).unwrap()).unwrap();
        assert!((a + b - joint).abs() < 1e-13);
    }

    #[test]
    fn geodesic_bounds_values() {
        assert_eq!(geodesic_bounds(0.0), (1.0, 1.0));
        let (lo, hi) = geodesic_bounds(3f64.sqrt().ln());
        assert!((lo - 0.577350269189626).abs() < 1e-14);
        assert!((hi - 0.735105193895723).abs() < 1e-14);
        // The exact measure from the alpha = pi/3 chord sits inside.
        let exact = 2.0 * (PI / 3.0) / PI;
        assert!(lo <= exact && exact <= hi);
        let (lo10, hi10) = geodesic_bounds(10.0);
        assert!((lo10 - 4.53999298e-5).abs() < 1e-12);
        assert!((hi10 - 5.78049859e-5).abs() < 1e-12);
    }

    #[test]
    fn geodesic_bounds_bracket_chord_measure() {
        for k in 1..=100 {
            let alpha = k as f64 * FRAC_PI_2 / 100.0;
            let chord = geodesic_chord(alpha).unwrap();
            let (lo, hi) = geodesic_bounds(chord.d);
            let omega = 2.0 * alpha / PI;
            assert!(
                lo <= omega + 1e-12 && omega <= hi + 1e-12,
                "alpha = {alpha}: {lo} <= {omega} <= {hi}"
            );
        }
    }
}
