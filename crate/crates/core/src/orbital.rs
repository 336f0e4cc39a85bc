//! Two-body orbit sampling, propagation and impulsive maneuvers (ECI frame).

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::relmotion::rtn_basis;
use crate::scenario::{BehaviorClass, PerClass};
use crate::{Error, Result, Vec3};

/// Earth gravitational parameter, m^3/s^2.
pub const MU_EARTH: f64 = 3.986_004_418e14;
/// Earth equatorial radius, m.
pub const R_EARTH: f64 = 6.378_137e6;
/// Geostationary semi-major axis, m.
pub const GEO_SEMI_MAJOR_AXIS: f64 = 42_164_169.0;

/// Lowest perigee altitude accepted for any sampled or maneuvered orbit.
const MIN_PERIGEE_ALTITUDE: f64 = 150e3;
const KEPLER_TOL: f64 = 1e-12;
const KEPLER_MAX_ITER: usize = 64;

fn wrap_angle(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitalElements {
    pub semi_major_axis: f64,
    pub eccentricity: f64,
    pub inclination: f64,
    pub raan: f64,
    pub arg_perigee: f64,
    pub true_anomaly: f64,
    /// Seconds since scenario start at which `true_anomaly` holds.
    pub epoch: f64,
}

impl OrbitalElements {
    /// Validated constructor; angles are normalized into [0, 2π).
    pub fn new(
        semi_major_axis: f64,
        eccentricity: f64,
        inclination: f64,
        raan: f64,
        arg_perigee: f64,
        true_anomaly: f64,
        epoch: f64,
    ) -> Result<Self> {
        let el = Self {
            semi_major_axis,
            eccentricity,
            inclination: wrap_angle(inclination),
            raan: wrap_angle(raan),
            arg_perigee: wrap_angle(arg_perigee),
            true_anomaly: wrap_angle(true_anomaly),
            epoch,
        };
        el.validate()?;
        Ok(el)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.eccentricity) || !self.eccentricity.is_finite() {
            return Err(Error::Domain(format!(
                "eccentricity {} outside [0, 1): only bound orbits are supported",
                self.eccentricity
            )));
        }
        if !(self.semi_major_axis > R_EARTH) {
            return Err(Error::Domain(format!("semi-major axis {} m is inside the Earth", self.semi_major_axis)));
        }
        Ok(())
    }

    pub fn mean_motion(&self) -> f64 {
        (MU_EARTH / self.semi_major_axis.powi(3)).sqrt()
    }

    pub fn period(&self) -> f64 {
        TAU / self.mean_motion()
    }

    pub fn perigee_radius(&self) -> f64 {
        self.semi_major_axis * (1.0 - self.eccentricity)
    }

    /// Cartesian state at the element epoch.
    pub fn to_state(&self) -> Result<StateVector> {
        self.validate()?;
        let (a, e, nu) = (self.semi_major_axis, self.eccentricity, self.true_anomaly);
        let p = a * (1.0 - e * e);
        let r = p / (1.0 + e * nu.cos());
        let r_pf = Vec3::new(r * nu.cos(), r * nu.sin(), 0.0);
        let k = (MU_EARTH / p).sqrt();
        let v_pf = Vec3::new(-k * nu.sin(), k * (e + nu.cos()), 0.0);

        let (so, co) = self.raan.sin_cos();
        let (si, ci) = self.inclination.sin_cos();
        let (sw, cw) = self.arg_perigee.sin_cos();
        // Columns of the perifocal-to-ECI rotation R3(-Ω) R1(-i) R3(-ω).
        let p_hat = Vec3::new(co * cw - so * sw * ci, so * cw + co * sw * ci, sw * si);
        let q_hat = Vec3::new(-co * sw - so * cw * ci, -so * sw + co * cw * ci, cw * si);
        Ok(StateVector {
            t: self.epoch,
            position: p_hat * r_pf.x + q_hat * r_pf.y,
            velocity: p_hat * v_pf.x + q_hat * v_pf.y,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    pub t: f64,
    pub position: Vec3,
    pub velocity: Vec3,
}

impl StateVector {
    pub fn new(t: f64, position: Vec3, velocity: Vec3) -> Self {
        Self { t, position, velocity }
    }

    /// Specific orbital energy v²/2 − μ/r.
    pub fn specific_energy(&self) -> f64 {
        0.5 * self.velocity.norm_squared() - MU_EARTH / self.position.norm()
    }

    pub fn angular_momentum(&self) -> Vec3 {
        self.position.cross(&self.velocity)
    }

    pub fn semi_major_axis(&self) -> f64 {
        -MU_EARTH / (2.0 * self.specific_energy())
    }

    pub fn eccentricity_vector(&self) -> Vec3 {
        let r = self.position.norm();
        let v2 = self.velocity.norm_squared();
        ((v2 - MU_EARTH / r) * self.position - self.position.dot(&self.velocity) * self.velocity) / MU_EARTH
    }

    /// Classical elements of the osculating orbit, epoch = `self.t`.
    ///
    /// Undefined angles get fixed conventions: RAAN = 0 for equatorial orbits
    /// (node line along +x) and argument of perigee = 0 for circular ones, with
    /// the true anomaly then measured from that reference direction.
    pub fn to_elements(&self) -> Result<OrbitalElements> {
        let energy = self.specific_energy();
        if !(energy < 0.0) {
            return Err(Error::Domain(format!("state is not bound (specific energy {energy} J/kg)")));
        }
        let h = self.angular_momentum();
        let h_norm = h.norm();
        if h_norm <= 0.0 {
            return Err(Error::Domain("rectilinear state has no orbit plane".into()));
        }
        let h_hat = h / h_norm;
        let a = -MU_EARTH / (2.0 * energy);
        let e_vec = self.eccentricity_vector();
        let e = e_vec.norm();
        let inclination = h_hat.z.clamp(-1.0, 1.0).acos();

        let node = Vec3::z().cross(&h);
        let node_hat = if node.norm() > 1e-11 * h_norm { node.normalize() } else { Vec3::x() };
        let raan = node_hat.y.atan2(node_hat.x);
        let q_hat = h_hat.cross(&node_hat);
        let arg_lat = self.position.dot(&q_hat).atan2(self.position.dot(&node_hat));
        let arg_perigee = if e > 1e-11 { e_vec.dot(&q_hat).atan2(e_vec.dot(&node_hat)) } else { 0.0 };
        OrbitalElements::new(a, e, inclination, raan, arg_perigee, arg_lat - arg_perigee, self.t)
    }
}

/// Advance a Cartesian state by `dt` seconds along its two-body conic.
///
/// Uses Lagrange f/g coefficients with the eccentric-anomaly change solved by
/// Newton iteration to 1e-12 rad, so it stays regular for circular and
/// equatorial orbits.
pub fn propagate_state(state: &StateVector, dt: f64) -> Result<StateVector> {
    let r0v = state.position;
    let v0v = state.velocity;
    let r0 = r0v.norm();
    if !(r0 > 0.0) {
        return Err(Error::Domain("zero position vector".into()));
    }
    let energy = state.specific_energy();
    if !(energy < 0.0) {
        return Err(Error::Domain(format!("hyperbolic or parabolic state (specific energy {energy} J/kg)")));
    }
    if dt == 0.0 {
        return Ok(*state);
    }
    let a = -MU_EARTH / (2.0 * energy);
    let sqrt_a = a.sqrt();
    let n = (MU_EARTH / (a * a * a)).sqrt();
    let sigma0 = r0v.dot(&v0v) / MU_EARTH.sqrt();
    let c1 = sigma0 / sqrt_a;
    let c2 = 1.0 - r0 / a;

    let mean = n * dt;
    let turns = (mean / TAU).round();
    let m = mean - turns * TAU;
    let kepler = |x: f64| x + c1 * (1.0 - x.cos()) - c2 * x.sin() - m;

    let mut x = m;
    let mut converged = false;
    for _ in 0..KEPLER_MAX_ITER {
        let f = kepler(x);
        let fp = 1.0 + c1 * x.sin() - c2 * x.cos();
        let step = f / fp;
        x -= step;
        if step.abs() < KEPLER_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        // Newton can cycle for extreme eccentricities; fall back to bisection,
        // the residual is monotone because its derivative is r/a > 0.
        let (mut lo, mut hi) = (m - 2.0 * PI, m + 2.0 * PI);
        while hi - lo > KEPLER_TOL {
            let mid = 0.5 * (lo + hi);
            if kepler(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        x = 0.5 * (lo + hi);
    }
    let de = x + turns * TAU;
    let (s, c) = x.sin_cos();

    let r = a + (r0 - a) * c + sigma0 * sqrt_a * s;
    let f = 1.0 - a / r0 * (1.0 - c);
    let g = dt - (de - s) / n;
    let fdot = -(MU_EARTH * a).sqrt() / (r * r0) * s;
    let gdot = 1.0 - a / r * (1.0 - c);

    Ok(StateVector { t: state.t + dt, position: f * r0v + g * v0v, velocity: fdot * r0v + gdot * v0v })
}

/// State on the two-body conic through `elements` at absolute time `t`.
pub fn propagate(elements: &OrbitalElements, t: f64) -> Result<StateVector> {
    if t < 0.0 {
        return Err(Error::Domain(format!("negative propagation time {t}")));
    }
    let start = elements.to_state()?;
    propagate_state(&start, t - elements.epoch)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManeuverSpec {
    pub t_burn: f64,
    pub delta_v: Vec3,
}

/// Instantaneous burn: position kept, velocity incremented by `delta_v`.
pub fn apply_impulse(state: &StateVector, spec: &ManeuverSpec) -> StateVector {
    debug_assert!(
        (state.t - spec.t_burn).abs() <= 1e-9 * spec.t_burn.abs().max(1.0),
        "burn applied at t={} but scheduled for t={}",
        state.t,
        spec.t_burn
    );
    StateVector { t: state.t, position: state.position, velocity: state.velocity + spec.delta_v }
}

/// Coast arc followed by an optional single burn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trajectory {
    initial: StateVector,
    post_burn: Option<StateVector>,
}

impl Trajectory {
    pub fn coast(initial: StateVector) -> Self {
        Self { initial, post_burn: None }
    }

    pub fn from_elements(elements: &OrbitalElements) -> Result<Self> {
        Ok(Self::coast(elements.to_state()?))
    }

    /// Apply `spec`; propagation after the burn restarts from the post-burn state.
    pub fn with_maneuver(mut self, spec: &ManeuverSpec) -> Result<Self> {
        let at_burn = self.state_at(spec.t_burn)?;
        self.post_burn = Some(apply_impulse(&at_burn, spec));
        Ok(self)
    }

    pub fn post_burn(&self) -> Option<&StateVector> {
        self.post_burn.as_ref()
    }

    pub fn state_at(&self, t: f64) -> Result<StateVector> {
        match &self.post_burn {
            Some(pb) if t >= pb.t => propagate_state(pb, t - pb.t),
            _ => propagate_state(&self.initial, t - self.initial.t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitRegime {
    Leo,
    Meo,
    Geo,
}

impl OrbitRegime {
    pub const ALL: [OrbitRegime; 3] = [OrbitRegime::Leo, OrbitRegime::Meo, OrbitRegime::Geo];

    pub fn as_str(self) -> &'static str {
        match self {
            OrbitRegime::Leo => "leo",
            OrbitRegime::Meo => "meo",
            OrbitRegime::Geo => "geo",
        }
    }
}

impl std::fmt::Display for OrbitRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for OrbitRegime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "leo" => Ok(OrbitRegime::Leo),
            "meo" => Ok(OrbitRegime::Meo),
            "geo" => Ok(OrbitRegime::Geo),
            other => Err(Error::Input(format!("unknown orbit regime '{other}'"))),
        }
    }
}

/// Altitude band above the equatorial radius, meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AltitudeBand {
    pub min: f64,
    pub max: f64,
}

impl AltitudeBand {
    pub fn semi_major_axis_range(&self) -> (f64, f64) {
        (R_EARTH + self.min, R_EARTH + self.max)
    }
}

/// Range window (m) between a GEO attacker and the target at t = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeWindow {
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitConfig {
    pub leo: AltitudeBand,
    pub meo: AltitudeBand,
    pub geo: AltitudeBand,
    /// Upper bound on sampled LEO/MEO eccentricity.
    pub max_eccentricity: f64,
    /// Upper bound on sampled LEO/MEO inclination, radians.
    pub max_inclination: f64,
    /// Target orbit radius (circular, equatorial).
    pub geo_semi_major_axis: f64,
    /// Target true longitude at t = 0, radians.
    pub target_longitude: f64,
    /// Initial attacker–target range window for GEO-regime attackers.
    pub geo_proximity: PerClass<RangeWindow>,
    /// Maximum plane tilt of a GEO attacker relative to the target, radians.
    pub geo_max_tilt: f64,
    /// Relative speed perturbation of a GEO attacker around circular speed.
    pub geo_speed_jitter: f64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        let geo_alt = GEO_SEMI_MAJOR_AXIS - R_EARTH;
        Self {
            leo: AltitudeBand { min: 400e3, max: 2_000e3 },
            meo: AltitudeBand { min: 10_000e3, max: 20_000e3 },
            geo: AltitudeBand { min: geo_alt - 250e3, max: geo_alt + 250e3 },
            max_eccentricity: 0.01,
            max_inclination: 100f64.to_radians(),
            geo_semi_major_axis: GEO_SEMI_MAJOR_AXIS,
            target_longitude: 0.0,
            geo_proximity: PerClass {
                benign: RangeWindow { min: 100e3, max: 1_000e3 },
                covert: RangeWindow { min: 10e3, max: 300e3 },
                threatening: RangeWindow { min: 10e3, max: 300e3 },
            },
            geo_max_tilt: 0.05f64.to_radians(),
            geo_speed_jitter: 5e-5,
        }
    }
}

impl OrbitConfig {
    pub fn band(&self, regime: OrbitRegime) -> AltitudeBand {
        match regime {
            OrbitRegime::Leo => self.leo,
            OrbitRegime::Meo => self.meo,
            OrbitRegime::Geo => self.geo,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for regime in OrbitRegime::ALL {
            let b = self.band(regime);
            if !(b.min < b.max) || !(b.min > 0.0) {
                return Err(Error::Config(format!(
                    "{regime} altitude band [{}, {}] must satisfy 0 < min < max",
                    b.min, b.max
                )));
            }
        }
        if !(self.leo.max <= self.meo.min && self.meo.max <= self.geo.min) {
            return Err(Error::Config("regime bands must be non-overlapping and ordered LEO < MEO < GEO".into()));
        }
        let (geo_lo, geo_hi) = self.geo.semi_major_axis_range();
        if !(geo_lo..=geo_hi).contains(&self.geo_semi_major_axis) {
            return Err(Error::Config("GEO target radius lies outside the GEO band".into()));
        }
        if !(0.0..1.0).contains(&self.max_eccentricity) {
            return Err(Error::Config("max_eccentricity must be in [0, 1)".into()));
        }
        for class in BehaviorClass::ALL {
            let w = self.geo_proximity.get(class);
            if !(w.min > 0.0 && w.min < w.max) {
                return Err(Error::Config(format!("GEO proximity window for {class} must satisfy 0 < min < max")));
            }
        }
        Ok(())
    }

    /// The GEO target: circular, equatorial, fixed for every scenario.
    pub fn target_elements(&self) -> OrbitalElements {
        OrbitalElements {
            semi_major_axis: self.geo_semi_major_axis,
            eccentricity: 0.0,
            inclination: 0.0,
            raan: 0.0,
            arg_perigee: 0.0,
            true_anomaly: wrap_angle(self.target_longitude),
            epoch: 0.0,
        }
    }
}

/// Draw attacker elements for one scenario.
///
/// LEO/MEO attackers get a semi-major axis uniform in the regime band and
/// small random eccentricity. GEO attackers are placed near the target at a
/// range drawn from the class's proximity window, on a slightly perturbed
/// near-circular orbit.
pub fn sample_orbit<R: Rng + ?Sized>(
    regime: OrbitRegime,
    class: BehaviorClass,
    cfg: &OrbitConfig,
    rng: &mut R,
) -> Result<OrbitalElements> {
    cfg.validate()?;
    match regime {
        OrbitRegime::Leo | OrbitRegime::Meo => {
            let (a_lo, a_hi) = cfg.band(regime).semi_major_axis_range();
            let a = rng.random_range(a_lo..a_hi);
            let e_cap = (1.0 - (R_EARTH + MIN_PERIGEE_ALTITUDE) / a).min(cfg.max_eccentricity).max(0.0);
            let e = if e_cap > 0.0 { rng.random_range(0.0..e_cap) } else { 0.0 };
            OrbitalElements::new(
                a,
                e,
                rng.random_range(0.0..=cfg.max_inclination),
                rng.random_range(0.0..TAU),
                rng.random_range(0.0..TAU),
                rng.random_range(0.0..TAU),
                0.0,
            )
        }
        OrbitRegime::Geo => sample_geo_attacker(class, cfg, rng),
    }
}

fn sample_geo_attacker<R: Rng + ?Sized>(
    class: BehaviorClass,
    cfg: &OrbitConfig,
    rng: &mut R,
) -> Result<OrbitalElements> {
    let target = cfg.target_elements().to_state()?;
    let basis = rtn_basis(&target)?;
    let window = cfg.geo_proximity.get(class);
    let (a_lo, a_hi) = cfg.geo.semi_major_axis_range();
    for _ in 0..64 {
        let range = rng.random_range(window.min..=window.max);
        let along = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let dir_rtn = Vec3::new(rng.random_range(-0.2..0.2), along, rng.random_range(-0.2..0.2)).normalize();
        let offset = basis.to_inertial(&dir_rtn) * range;
        let position = target.position + offset;
        let r_hat = position.normalize();
        let tilt = rng.random_range(-cfg.geo_max_tilt..=cfg.geo_max_tilt);
        let plane_normal = (basis.n_hat + basis.t_hat * tilt.tan()).normalize();
        let along_track = plane_normal.cross(&r_hat).normalize();
        let speed = (MU_EARTH / position.norm()).sqrt()
            * (1.0 + rng.random_range(-cfg.geo_speed_jitter..=cfg.geo_speed_jitter));
        let state = StateVector::new(0.0, position, along_track * speed);
        let el = state.to_elements()?;
        if (a_lo..=a_hi).contains(&el.semi_major_axis) {
            return Ok(el);
        }
    }
    Err(Error::Config("GEO proximity window incompatible with the GEO band (no valid attacker after 64 draws)".into()))
}

/// How a maneuver's direction is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DirectionPrior {
    Isotropic,
    /// Density ∝ cos(θ)^exponent on the hemisphere around the line of sight
    /// to the target (exponent 1 is the Lambertian, cos-weighted case).
    TowardTarget {
        exponent: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeltaVPrior {
    pub min_mps: f64,
    pub max_mps: f64,
    pub direction: DirectionPrior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ManeuverPriors {
    pub delta_v: PerClass<DeltaVPrior>,
    /// Burn window as fractions of the horizon.
    pub burn_window: (f64, f64),
}

impl Default for ManeuverPriors {
    fn default() -> Self {
        Self {
            delta_v: PerClass {
                benign: DeltaVPrior { min_mps: 0.0, max_mps: 0.5, direction: DirectionPrior::Isotropic },
                // Covert and threatening attackers fly the same kind of
                // approach; only the pointing focus differs.
                covert: DeltaVPrior {
                    min_mps: 1.0,
                    max_mps: 20.0,
                    direction: DirectionPrior::TowardTarget { exponent: 2.0 },
                },
                threatening: DeltaVPrior {
                    min_mps: 1.0,
                    max_mps: 20.0,
                    direction: DirectionPrior::TowardTarget { exponent: 4.0 },
                },
            },
            burn_window: (0.1, 0.8),
        }
    }
}

impl ManeuverPriors {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.burn_window;
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(Error::Config("burn window must satisfy 0 <= lo < hi <= 1".into()));
        }
        for class in BehaviorClass::ALL {
            let p = self.delta_v.get(class);
            if !(0.0 <= p.min_mps && p.min_mps < p.max_mps) {
                return Err(Error::Config(format!("Δv prior for {class} needs 0 <= min < max")));
            }
            if let DirectionPrior::TowardTarget { exponent } = p.direction {
                if !(exponent >= 0.0) {
                    return Err(Error::Config(format!("Δv exponent for {class} must be >= 0")));
                }
            }
        }
        Ok(())
    }
}

/// Burn epoch drawn uniformly in the burn window and snapped to the sample grid.
pub fn sample_burn_time<R: Rng + ?Sized>(priors: &ManeuverPriors, horizon: f64, dt: f64, rng: &mut R) -> f64 {
    let (lo, hi) = priors.burn_window;
    let t = rng.random_range(lo * horizon..=hi * horizon);
    ((t / dt).round() * dt).clamp(dt, horizon - dt)
}

/// Δv vector for `class`; `line_of_sight` points from attacker to target.
pub fn sample_delta_v<R: Rng + ?Sized>(prior: &DeltaVPrior, line_of_sight: &Vec3, rng: &mut R) -> Vec3 {
    let magnitude = rng.random_range(prior.min_mps..prior.max_mps);
    let dir = match prior.direction {
        DirectionPrior::Isotropic => random_unit(rng),
        DirectionPrior::TowardTarget { exponent } => {
            let axis = line_of_sight.normalize();
            let cos_t = rng.random::<f64>().powf(1.0 / (exponent + 1.0));
            let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
            let phi = rng.random_range(0.0..TAU);
            let helper = if axis.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
            let u = axis.cross(&helper).normalize();
            let w = axis.cross(&u);
            axis * cos_t + (u * phi.cos() + w * phi.sin()) * sin_t
        }
    };
    dir * magnitude
}

fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi = rng.random_range(0.0..TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), z)
}

/// True when the orbit through `state` stays above the minimum perigee altitude.
pub fn clears_earth(state: &StateVector) -> bool {
    let energy = state.specific_energy();
    if energy >= 0.0 {
        return false;
    }
    let e = state.eccentricity_vector().norm();
    state.semi_major_axis() * (1.0 - e) > R_EARTH + MIN_PERIGEE_ALTITUDE
}
