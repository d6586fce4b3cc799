/// Bell-state fidelity from the two even-parity populations and the parity-oscillation amplitude.
///
/// Loss reads as 1, so when `pop11` exceeds `pop00` by more than 0.1 the even-population
/// sum is replaced by `2·pop00`.
pub fn bell_fidelity_estimator(pop00: f64, pop11: f64, parity_amplitude: f64) -> f64 {
    let even = if pop11 - pop00 > 0.1 { 2.0 * pop00 } else { pop00 + pop11 };
    even / 2.0 + parity_amplitude / 2.0
}
