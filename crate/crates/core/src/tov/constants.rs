use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// CGS physical constants used by the neutron-star model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Neutron mass, g.
    pub m_n: f64,
    /// Speed of light, cm s^-1.
    pub c: f64,
    /// Planck constant, erg s.
    pub h: f64,
    /// Gravitational constant, cm^3 g^-1 s^-2.
    pub g: f64,
    /// Solar mass, g.
    pub m_sun: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            m_n: 1.674_927_498_04e-24,
            c: 2.997_924_58e10,
            h: 6.626_070_15e-27,
            g: 6.674_30e-8,
            m_sun: 1.988_92e33,
        }
    }
}

impl PhysicalConstants {
    pub fn is_valid(&self) -> bool {
        [self.m_n, self.c, self.h, self.g, self.m_sun]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0)
    }

    /// `pi m_n^4 c^5 / (3 h^3)`, erg cm^-3.
    pub fn pressure_scale(&self) -> f64 {
        PI * self.m_n.powi(4) * self.c.powi(5) / (3.0 * self.h.powi(3))
    }

    /// `h / (2 m_n c)`, cm.
    pub fn compton_half(&self) -> f64 {
        self.h / (2.0 * self.m_n * self.c)
    }

    pub fn c2(&self) -> f64 {
        self.c * self.c
    }
}
