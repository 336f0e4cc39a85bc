//! Target-centered RTN (LVLH) frame and per-timestep kinematic features.

use serde::{Deserialize, Serialize};

use crate::orbital::{StateVector, R_EARTH};
use crate::{Error, Result, Vec3};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Regularizer in the curvature denominator.
pub const CURVATURE_EPS: f64 = 1e-12;

/// Orthonormal radial / along-track / cross-track triad in ECI components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RtnBasis {
    pub r_hat: Vec3,
    pub t_hat: Vec3,
    pub n_hat: Vec3,
}

impl RtnBasis {
    /// Components of an ECI vector along R, T, N.
    pub fn project(&self, v: &Vec3) -> Vec3 {
        Vec3::new(v.dot(&self.r_hat), v.dot(&self.t_hat), v.dot(&self.n_hat))
    }

    /// Inverse of [`RtnBasis::project`].
    pub fn to_inertial(&self, rtn: &Vec3) -> Vec3 {
        self.r_hat * rtn.x + self.t_hat * rtn.y + self.n_hat * rtn.z
    }
}

/// Gram–Schmidt RTN basis from the target state.
pub fn rtn_basis(target: &StateVector) -> Result<RtnBasis> {
    let r = target.position.norm();
    if !(r > 0.0) {
        return Err(Error::Frame("target position is zero".into()));
    }
    let r_hat = target.position / r;
    let t_prime = target.velocity - target.velocity.dot(&r_hat) * r_hat;
    let t_norm = t_prime.norm();
    if !(t_norm > 1e-9) {
        return Err(Error::Frame("target velocity is parallel to its position; along-track axis undefined".into()));
    }
    let t_hat = t_prime / t_norm;
    Ok(RtnBasis { r_hat, t_hat, n_hat: r_hat.cross(&t_hat) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeState {
    pub t: f64,
    pub rel_pos_rtn: Vec3,
    pub rel_vel_rtn: Vec3,
    pub range: f64,
    pub range_rate: f64,
}

pub fn relative_state(attacker: &StateVector, target: &StateVector, basis: &RtnBasis) -> Result<RelativeState> {
    if (attacker.t - target.t).abs() > 1e-9 * target.t.abs().max(1.0) {
        return Err(Error::Geometry(format!("attacker epoch {} differs from target epoch {}", attacker.t, target.t)));
    }
    let r_rel = attacker.position - target.position;
    let v_rel = attacker.velocity - target.velocity;
    let range = r_rel.norm();
    if !(range > 0.0) {
        return Err(Error::Geometry(format!("attacker and target coincide at t={}", target.t)));
    }
    Ok(RelativeState {
        t: target.t,
        rel_pos_rtn: basis.project(&r_rel),
        rel_vel_rtn: basis.project(&v_rel),
        range,
        range_rate: v_rel.dot(&r_rel) / range,
    })
}

/// Central differences on interior points, one-sided two-point differences at
/// both ends; output is aligned with the input.
pub fn central_diff(series: &[f64], dt: f64) -> Result<Vec<f64>> {
    let n = series.len();
    if n < 3 {
        return Err(Error::Size { need: 3, got: n });
    }
    if !(dt > 0.0) {
        return Err(Error::Parameter(format!("time step must be positive, got {dt}")));
    }
    let mut out = Vec::with_capacity(n);
    out.push((series[1] - series[0]) / dt);
    out.extend(series.windows(3).map(|w| (w[2] - w[0]) / (2.0 * dt)));
    out.push((series[n - 1] - series[n - 2]) / dt);
    Ok(out)
}

/// Frenet–Serret curvature ‖v×a‖ / (‖v‖³ + ε).
pub fn curvature(v: &Vec3, a: &Vec3) -> f64 {
    v.cross(a).norm() / (v.norm().powi(3) + CURVATURE_EPS)
}

/// Doppler shift f_D = −ṙ/λ with λ = c/f_c; positive while closing.
pub fn doppler_shift(range_rate: f64, carrier_hz: f64) -> f64 {
    -range_rate * carrier_hz / SPEED_OF_LIGHT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TcaResult {
    pub i_star: usize,
    pub t_tca_frac: f64,
    pub t_to_tca: Vec<f64>,
}

/// Closest-approach index (first minimum) and normalized time-to-TCA series.
pub fn tca_features(range: &[f64]) -> Result<TcaResult> {
    let n = range.len();
    if n < 2 {
        return Err(Error::Size { need: 2, got: n });
    }
    let mut i_star = 0;
    for (i, &r) in range.iter().enumerate() {
        if r < range[i_star] {
            i_star = i;
        }
    }
    let span = (n - 1) as f64;
    Ok(TcaResult {
        i_star,
        t_tca_frac: i_star as f64 / span,
        t_to_tca: (0..n).map(|i| (i as f64 - i_star as f64) / span).collect(),
    })
}

/// Angle between the receiver boresight and the line of sight to the attacker.
pub fn boresight_angle(attacker_pos: &Vec3, receiver_pos: &Vec3, boresight_dir: &Vec3) -> Result<f64> {
    let los = attacker_pos - receiver_pos;
    let dist = los.norm();
    if !(dist > 0.0) {
        return Err(Error::Geometry("attacker coincides with the receiver".into()));
    }
    let cos = (los / dist).dot(boresight_dir).clamp(-1.0, 1.0);
    Ok(cos.acos())
}

/// Whether the straight segment between two points clears the Earth sphere.
pub fn line_of_sight_clear(a: &Vec3, b: &Vec3) -> bool {
    let d = b - a;
    let len2 = d.norm_squared();
    let s = if len2 > 0.0 { (-a.dot(&d) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (a + d * s).norm() >= R_EARTH
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicRow {
    pub t: f64,
    pub range: f64,
    pub range_rate: f64,
    pub v_r: f64,
    pub v_t: f64,
    pub v_n: f64,
    pub a_r: f64,
    pub a_t: f64,
    pub a_n: f64,
    pub jerk: f64,
    pub curvature: f64,
    pub doppler_shift: f64,
    pub doppler_rate: f64,
    pub boresight_angle: f64,
    pub t_to_tca: f64,
    pub visibility: bool,
}

/// Kinematic feature rows for aligned attacker/target samples spaced `dt` apart.
///
/// `boresight` holds the receive-antenna pointing direction at each sample.
/// Accelerations difference the RTN-projected relative velocity; jerk
/// differences the acceleration magnitude; Doppler rate differences f_D.
pub fn kinematic_rows(
    attacker: &[StateVector],
    target: &[StateVector],
    boresight: &[Vec3],
    dt: f64,
    carrier_hz: f64,
) -> Result<Vec<KinematicRow>> {
    let n = target.len();
    if attacker.len() != n || boresight.len() != n {
        return Err(Error::Input(format!(
            "series length mismatch: attacker {}, target {n}, boresight {}",
            attacker.len(),
            boresight.len()
        )));
    }
    let mut rel = Vec::with_capacity(n);
    let mut angles = Vec::with_capacity(n);
    let mut visible = Vec::with_capacity(n);
    for i in 0..n {
        let basis = rtn_basis(&target[i])?;
        rel.push(relative_state(&attacker[i], &target[i], &basis)?);
        angles.push(boresight_angle(&attacker[i].position, &target[i].position, &boresight[i])?);
        visible.push(line_of_sight_clear(&attacker[i].position, &target[i].position));
    }
    let component = |k: usize| rel.iter().map(|s| s.rel_vel_rtn[k]).collect::<Vec<_>>();
    let (v_r, v_t, v_n) = (component(0), component(1), component(2));
    let a_r = central_diff(&v_r, dt)?;
    let a_t = central_diff(&v_t, dt)?;
    let a_n = central_diff(&v_n, dt)?;
    let a_mag: Vec<f64> = (0..n).map(|i| Vec3::new(a_r[i], a_t[i], a_n[i]).norm()).collect();
    let jerk = central_diff(&a_mag, dt)?;
    let range: Vec<f64> = rel.iter().map(|s| s.range).collect();
    let doppler: Vec<f64> = rel.iter().map(|s| doppler_shift(s.range_rate, carrier_hz)).collect();
    let doppler_rate = central_diff(&doppler, dt)?;
    let tca = tca_features(&range)?;

    Ok((0..n)
        .map(|i| {
            let v = Vec3::new(v_r[i], v_t[i], v_n[i]);
            let a = Vec3::new(a_r[i], a_t[i], a_n[i]);
            KinematicRow {
                t: target[i].t,
                range: range[i],
                range_rate: rel[i].range_rate,
                v_r: v_r[i],
                v_t: v_t[i],
                v_n: v_n[i],
                a_r: a_r[i],
                a_t: a_t[i],
                a_n: a_n[i],
                jerk: jerk[i],
                curvature: curvature(&v, &a),
                doppler_shift: doppler[i],
                doppler_rate: doppler_rate[i],
                boresight_angle: angles[i],
                t_to_tca: tca.t_to_tca[i],
                visibility: visible[i],
            }
        })
        .collect())
}
