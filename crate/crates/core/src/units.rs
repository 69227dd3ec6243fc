//! Conversion constants. All computation is in atomic units
//! (hbar = m_e = e' = 1); conversions happen only when results are shown.

/// Fixed conversion factors between atomic and laboratory units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub hartree_to_ev: f64,
    pub bohr_to_angstrom: f64,
}

pub const ATOMIC: UnitSystem = UnitSystem {
    hartree_to_ev: 27.211,
    bohr_to_angstrom: 0.52918,
};

impl UnitSystem {
    pub fn to_ev(&self, hartree: f64) -> f64 {
        hartree * self.hartree_to_ev
    }

    pub fn to_angstrom(&self, bohr: f64) -> f64 {
        bohr * self.bohr_to_angstrom
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        ATOMIC
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions() {
        assert_eq!(ATOMIC.to_ev(1.0), 27.211);
        assert_eq!(ATOMIC.to_angstrom(2.0), 2.0 * 0.52918);
    }
}
