//! Named example states used by the CLI and the test suites.

use crate::error::Result;
use crate::fock::{FockVector, ModeSystem};

/// Four modes `a, b, c, d` (kept block `a, b`):
/// `(a+ c+ + a+ d+ + b+ c+ + b+ d+)|0> / 2`, a product of one-particle states
/// on each block in the canonical order.
pub fn four_mode_product() -> Result<FockVector> {
    let sys = ModeSystem::new(&["a", "b", "c", "d"], 2)?;
    FockVector::from_superposition(&sys, "0.5: a+ c+; 0.5: a+ d+; 0.5: b+ c+; 0.5: b+ d+")
}

/// Two modes `a, b` (kept `a`): equal superposition of all four occupation
/// patterns, mixing both parity sectors.
pub fn mixed_parity_plus() -> Result<FockVector> {
    let sys = ModeSystem::new(&["a", "b"], 1)?;
    FockVector::from_superposition(&sys, "0.5: ; 0.5: a+; 0.5: b+; 0.5: a+ b+")
}

/// Two modes `A, R`: `(|00> + A+ R+ |0>) / sqrt 2`.
pub fn grassmann_pair() -> Result<FockVector> {
    let sys = ModeSystem::new(&["A", "R"], 1)?;
    FockVector::from_superposition(&sys, "1: ; 1: A+ R+")
}

/// Modes `uA, dA, uR, dR` (spin up/down for parties A and R), kept block A:
/// `cos(theta) uA+ dR+ |0> + sin(theta) dA+ uR+ |0>`.
pub fn dirac_pair(theta: f64) -> Result<FockVector> {
    let sys = ModeSystem::new(&["uA", "dA", "uR", "dR"], 2)?;
    let text = format!("{}: uA+ dR+; {}: dA+ uR+", theta.cos(), theta.sin());
    FockVector::from_superposition(&sys, &text)
}

/// The symmetric Dirac singlet, `dirac_pair(pi/4)`.
pub fn dirac_singlet() -> Result<FockVector> {
    dirac_pair(std::f64::consts::FRAC_PI_4)
}

/// Looks up a state by its CLI name.
pub fn named(name: &str) -> Option<Result<FockVector>> {
    Some(match name {
        "four-mode-product" => four_mode_product(),
        "mixed-parity" => mixed_parity_plus(),
        "grassmann-pair" => grassmann_pair(),
        "dirac-singlet" => dirac_singlet(),
        _ => return None,
    })
}

pub const NAMES: [&str; 4] = ["four-mode-product", "mixed-parity", "grassmann-pair", "dirac-singlet"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_named_states_are_normalized() {
        for name in NAMES {
            let v = named(name).unwrap().unwrap();
            assert!(v.is_normalized(), "{name}");
        }
        assert!(named("nope").is_none());
    }

    #[test]
    fn parity_of_examples() {
        assert!(four_mode_product().unwrap().ssr_compliant());
        assert!(!mixed_parity_plus().unwrap().ssr_compliant());
        assert!(grassmann_pair().unwrap().ssr_compliant());
        assert!(dirac_singlet().unwrap().ssr_compliant());
    }
}
