//! Atomic-unit conversions (hbar = 1, lengths in Bohr, energies in Hartree).

/// Electron masses per unified atomic mass unit (CODATA).
pub const AMU_IN_ELECTRON_MASSES: f64 = 1822.888486;

/// Wavenumbers (cm^-1) per Hartree.
pub const HARTREE_IN_WAVENUMBERS: f64 = 219474.63;

pub fn amu_to_au(mass_amu: f64) -> f64 {
    mass_amu * AMU_IN_ELECTRON_MASSES
}

/// Angular frequency in atomic units from a harmonic wavenumber.
pub fn wavenumber_to_au(omega_cm: f64) -> f64 {
    omega_cm / HARTREE_IN_WAVENUMBERS
}

pub fn millihartree(value: f64) -> f64 {
    value * 1e-3
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oh_radical_mass() {
        assert!((amu_to_au(0.9412) - 1715.7026).abs() < 1e-3);
    }

    #[test]
    fn oh_frequency_is_about_18_millihartree() {
        let w = wavenumber_to_au(3978.6);
        assert!((w - 0.0181278).abs() < 1e-6);
        assert!((2.0 * std::f64::consts::PI / w - 346.6).abs() < 0.1);
    }
}
