//! Heating from constant-jerk moves, loss-threshold retention and drop-recapture diffusion.

use atomarray_model::Real;
use serde::{Deserialize, Serialize};

use crate::error::TransportError;

pub const HBAR: f64 = 1.054_571_817e-34;
pub const K_B: f64 = 1.380_649e-23;
/// Mass of a 87Rb atom in kg.
pub const RB87_MASS: f64 = 86.909_180_527 * 1.660_539_066_60e-27;

/// Number of trap frequencies sampled when averaging over the spread.
const SPREAD_SAMPLES: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct TrapParams<T> {
    /// Radial trap angular frequency in rad/s.
    pub omega0: T,
    /// Zero-point size in m; must equal sqrt(ħ/(2 m ω0)).
    pub x_zpf: T,
    pub mass: T,
    /// Quanta added before the atom leaves the trap.
    pub n_max: T,
    /// Fractional half-width of the uniform trap-frequency spread.
    pub omega_spread: T,
    /// Factor on ω0 while moving (1 = no derating, e.g. from acoustic lensing).
    #[serde(default = "one")]
    pub derating: T,
}

fn one<T: Real>() -> T {
    T::one()
}

pub fn zero_point_size<T: Real>(omega0: T, mass: T) -> T {
    (T::lit(HBAR) / (T::lit(2.0) * mass * omega0)).sqrt()
}

impl<T: Real> TrapParams<T> {
    /// 87Rb in a trap of `freq_khz` with the given loss threshold and spread.
    pub fn rb87(freq_khz: T, n_max: T, omega_spread: T) -> Self {
        let omega0 = T::lit(2.0) * T::PI() * freq_khz * T::lit(1e3);
        let mass = T::lit(RB87_MASS);
        TrapParams { omega0, x_zpf: zero_point_size(omega0, mass), mass, n_max, omega_spread, derating: T::one() }
    }

    /// 40 kHz, N_max = 26, ±15 % frequency spread.
    pub fn bell_transport() -> Self {
        Self::rb87(T::lit(40.0), T::lit(26.0), T::lit(0.15))
    }

    pub fn validate(&self) -> Result<(), TransportError> {
        let bad = |m: &str| Err(TransportError::InvalidTraps(m.to_string()));
        for (v, name) in [(self.omega0, "omega0"), (self.x_zpf, "x_zpf"), (self.mass, "mass"), (self.n_max, "n_max")] {
            if !(v > T::zero()) || !v.is_finite() {
                return bad(&format!("{name} must be positive"));
            }
        }
        if !(self.omega_spread >= T::zero() && self.omega_spread < T::one()) {
            return bad("omega_spread must lie in [0, 1)");
        }
        if !(self.derating > T::zero()) {
            return bad("derating must be positive");
        }
        let expect = zero_point_size(self.omega0, self.mass);
        if ((self.x_zpf - expect) / expect).abs() > T::lit(1e-6) {
            return bad("x_zpf inconsistent with omega0 and mass");
        }
        Ok(())
    }

    fn effective_omega(&self) -> T {
        self.omega0 * self.derating
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    CubicConstantJerk,
}

/// One atom's straight move. Distances in μm, durations in μs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoveSegment<T> {
    pub atom: u32,
    pub dx: T,
    pub dy: T,
    pub duration_us: T,
    pub profile: Profile,
}

impl<T: Real> MoveSegment<T> {
    pub fn new(atom: u32, dx: T, dy: T, duration_us: T) -> Self {
        MoveSegment { atom, dx, dy, duration_us, profile: Profile::CubicConstantJerk }
    }

    pub fn distance_um(&self) -> T {
        self.dx.hypot(self.dy)
    }
}

/// ΔN of one axis: ½ (6 D / (x_zpf ω² T²))², D in μm and T in μs.
fn axis_delta_n<T: Real>(d_um: T, t_us: T, omega: T, x_zpf: T) -> T {
    let d = d_um * T::lit(1e-6);
    let t = t_us * T::lit(1e-6);
    let a = T::lit(6.0) * d / (x_zpf * omega * omega * t * t);
    T::lit(0.5) * a * a
}

/// Mean vibrational quanta added by a constant-jerk move, summed over the two axes.
pub fn heating_delta_n<T: Real>(seg: &MoveSegment<T>, traps: &TrapParams<T>) -> Result<T, TransportError> {
    if !(seg.duration_us > T::zero()) {
        return Err(TransportError::NonPositiveDuration(seg.duration_us.as_f64()));
    }
    let omega = traps.effective_omega();
    let x_zpf = zero_point_size(omega, traps.mass);
    Ok(axis_delta_n(seg.dx.abs(), seg.duration_us, omega, x_zpf)
        + axis_delta_n(seg.dy.abs(), seg.duration_us, omega, x_zpf))
}

/// Retention at a single trap frequency: 1 − ½(1 − erf[(N_max − ΔN)/√(2ΔN)]).
///
/// The printed loss-threshold integral gives the population above N_max, i.e.
/// the loss; retention is its complement.
pub fn retention_single<T: Real>(delta_n: T, n_max: T) -> T {
    if delta_n <= T::zero() {
        return T::one();
    }
    let z = ((n_max - delta_n) / (T::lit(2.0) * delta_n).sqrt()).as_f64();
    T::one() - T::lit(0.5) * (T::one() - T::lit(statrs::function::erf::erf(z)))
}

/// Retention after a move that adds `delta_n` quanta at ω0, averaged over trap
/// frequencies spread uniformly by ±omega_spread (ΔN ∝ ω⁻³ at fixed move).
pub fn retention<T: Real>(delta_n: T, traps: &TrapParams<T>) -> T {
    if delta_n <= T::zero() {
        return T::one();
    }
    if traps.omega_spread == T::zero() {
        return retention_single(delta_n, traps.n_max);
    }
    let k = SPREAD_SAMPLES;
    let mut acc = T::zero();
    for i in 0..k {
        // midpoint rule over [1 − s, 1 + s]
        let u = (T::from_usize_lossy(i) + T::lit(0.5)) / T::from_usize_lossy(k);
        let ratio = T::one() - traps.omega_spread + T::lit(2.0) * traps.omega_spread * u;
        acc += retention_single(delta_n / ratio.powi(3), traps.n_max);
    }
    acc / T::from_usize_lossy(k)
}

/// Bell-pair fidelity proxy (retention squared) against average separation speed.
///
/// The moved atom travels `distance_um` out and back, so a speed v means a
/// single move of duration 2D/v (μm/μs).
pub fn pair_retention_vs_speed<T: Real>(distance_um: T, speeds: &[T], traps: &TrapParams<T>) -> Vec<(T, T)> {
    speeds
        .iter()
        .map(|&v| {
            let t = T::lit(2.0) * distance_um / v;
            let seg = MoveSegment::new(0, distance_um, T::zero(), t);
            let r = retention(heating_delta_n(&seg, traps).expect("positive duration"), traps);
            (v, r * r)
        })
        .collect()
}

/// First speed at which the curve drops `drop` below its slow-move plateau.
pub fn fidelity_knee<T: Real>(curve: &[(T, T)], drop: T) -> Option<T> {
    let plateau = curve.first()?.1;
    curve.iter().find(|&&(_, f)| f < plateau - drop).map(|&(v, _)| v)
}

/// Survival after `n_drops` trap-off periods of `t_drop_us` each.
///
/// Each drop lets the atom fly freely with a thermal velocity; the accumulated
/// 2D displacement is a random walk of per-axis width v_th·t_drop·√N, and the
/// atom is recaptured if it lies within `trap_radius_um`:
/// survival = 1 − exp(−R² / (2σ²)).
pub fn drop_loss<T: Real>(t_drop_us: T, n_drops: u32, temperature_uk: T, trap_radius_um: T) -> T {
    if n_drops == 0 || t_drop_us <= T::zero() {
        return T::one();
    }
    let v_th = (T::lit(K_B) * temperature_uk * T::lit(1e-6) / T::lit(RB87_MASS)).sqrt(); // m/s = μm/μs
    let sigma = v_th * t_drop_us * T::lit(n_drops as f64).sqrt();
    let r = trap_radius_um;
    T::one() - (-(r * r) / (T::lit(2.0) * sigma * sigma)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rb87_zero_point_size() {
        let t = TrapParams::<f64>::bell_transport();
        assert!((t.x_zpf - 38.1e-9).abs() < 0.2e-9);
        t.validate().unwrap();
    }

    #[test]
    fn inconsistent_zpf_rejected() {
        let mut t = TrapParams::<f64>::bell_transport();
        t.x_zpf = 38e-9;
        assert!(t.validate().is_err());
    }

    #[test]
    fn retention_edges() {
        assert_eq!(retention_single(0.0, 26.0), 1.0);
        assert!((retention_single(26.0f64, 26.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let t = TrapParams::<f32>::bell_transport();
        let dn = heating_delta_n(&MoveSegment::new(0, 55.0f32, 0.0, 200.0), &t).unwrap();
        assert!((dn - 5.9).abs() < 0.1);
    }
}
