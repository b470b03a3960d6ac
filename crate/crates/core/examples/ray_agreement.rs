//! Oracle against leading-order asymptotics along the ray ξ = −3 for a Gaussian.

use hirota_core::asymptotics::leading_q;
use hirota_core::interp::UniformGrid;
use hirota_core::ode::Tolerance;
use hirota_core::rhoracle::{oracle_q, DeformedOptions, OracleMode};
use hirota_core::scattering::{reflection_coefficients, EquationParams, Profile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = EquationParams { alpha: 0.0, beta: 1.0 };
    let profile = Profile::gaussian(0.5, 1.0, 0.0)?;
    let data = reflection_coefficients(&profile, UniformGrid::new(-8.0, 8.0, 2001), params, Tolerance::default())?;
    let xi = -3.0;
    for t in [10.0, 20.0, 40.0] {
        let start = std::time::Instant::now();
        let oracle = oracle_q(&data, xi * t, t, &OracleMode::Deformed(DeformedOptions::default()))?;
        let refined = oracle_q(&data, xi * t, t, &OracleMode::Deformed(DeformedOptions::default().refined()))?;
        let (leading, exponent) = leading_q(xi * t, t, &data)?;
        let scaled = (oracle.q - leading).norm() * t.powf(exponent);
        println!(
            "t = {t:>4}: oracle {:.8} (refined {:.2e}, {} nodes), leading {:.8}, E = {scaled:.4e} [{:.1?}]",
            oracle.q,
            (oracle.q - refined.q).norm(),
            oracle.nodes,
            leading,
            start.elapsed()
        );
    }
    Ok(())
}
