//! Unit conversions. All frequencies are stored internally as angular
//! frequencies in rad/s and all times in seconds; configuration files and
//! reports use linear MHz/GHz and ns/us.

pub const TWO_PI: f64 = std::f64::consts::TAU;

/// Linear frequency in MHz to angular frequency in rad/s.
pub fn mhz(f: f64) -> f64 {
    TWO_PI * 1e6 * f
}

/// Linear frequency in GHz to angular frequency in rad/s.
pub fn ghz(f: f64) -> f64 {
    TWO_PI * 1e9 * f
}

/// Angular frequency in rad/s to linear MHz.
pub fn rad_to_mhz(w: f64) -> f64 {
    w / (TWO_PI * 1e6)
}

pub fn ns(t: f64) -> f64 {
    t * 1e-9
}

pub fn us(t: f64) -> f64 {
    t * 1e-6
}

pub fn s_to_ns(t: f64) -> f64 {
    t * 1e9
}
