//! Published example channels used for regression tests and experiments.

use crate::linalg::{from_parts, from_real_rows, re};
use crate::model::WiretapChannel;

/// Real 2×2 nondegraded channels whose saddle-point covariance does not achieve
/// the capacity under joint sum and per-antenna power limits.
pub fn nondegraded_2x2() -> WiretapChannel {
    let hb = from_real_rows(2, 2, &[-0.4176, 1.4224, -1.4963, -2.0426]);
    let he = from_real_rows(2, 2, &[0.6726, 1.4335, 1.7762, -0.3694]);
    WiretapChannel::new(hb, he).expect("fixture is well formed")
}

/// Complex channels with a 4-antenna Bob, 3-antenna Eve and 2 transmit antennas.
pub fn complex_4x2_3x2() -> WiretapChannel {
    let hb = from_parts(
        4,
        2,
        &[-0.3974, -0.0939, -0.0216, -0.6734, -1.1903, -0.9728, 0.2017, -0.9450],
        &[0.5641, 0.2532, 0.8051, 0.2605, -0.3939, -0.4468, -0.6897, -0.7306],
    );
    let he = from_parts(
        3,
        2,
        &[-0.2015, -0.6178, -0.0559, -0.3858, 0.6935, -0.5064],
        &[0.3127, -1.048, -0.3000, -0.2817, 0.05587, -0.1443],
    );
    WiretapChannel::new(hb, he).expect("fixture is well formed")
}

/// A degraded channel with `H_b = 1.5 H_e` and three transmit antennas.
pub fn degraded_2x3() -> WiretapChannel {
    let he = from_parts(2, 3, &[0.8, -0.3, 0.5, 0.1, 0.9, -0.6], &[0.2, 0.4, -0.1, -0.5, 0.0, 0.3]);
    WiretapChannel::new(&he * re(1.5), he).expect("fixture is well formed")
}
