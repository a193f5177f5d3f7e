//! Mode occupations, the 2D spectral energy density and its Doppler /
//! Lorentz transformation.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use crate::error::{invalid, Error, Result};

/// Below this `ħω/k_BT` the Planck occupation uses its Laurent series.
const SMALL_X: f64 = 1e-6;

/// Mean photon number `n(ω)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Occupation {
    Planck { temperature: f64 },
    Zero,
    Tabulated(OccupationTable),
}

/// Tabulated `(ω, n)` pairs with strictly increasing `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationTable {
    omega: Vec<f64>,
    n: Vec<f64>,
}

impl OccupationTable {
    pub fn new(omega: Vec<f64>, n: Vec<f64>) -> Result<Self> {
        if omega.len() != n.len() {
            return Err(Error::InvalidTable(format!(
                "column lengths differ: {} vs {}",
                omega.len(),
                n.len()
            )));
        }
        if omega.len() < 2 {
            return Err(Error::InvalidTable("need at least two rows".into()));
        }
        if omega.iter().chain(&n).any(|v| !v.is_finite()) {
            return Err(Error::InvalidTable("non-finite entry".into()));
        }
        if omega[0] <= 0.0 {
            return Err(Error::InvalidTable("omega must be > 0".into()));
        }
        if let Some(i) = omega.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTable(format!(
                "omega not strictly increasing at row {}",
                i + 2
            )));
        }
        if n.iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidTable("occupation must be >= 0".into()));
        }
        Ok(OccupationTable { omega, n })
    }

    /// Two-column CSV `(omega, n)` with a header row.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::InvalidTable(e.to_string()))?
            .clone();
        if headers.len() != 2 || headers.iter().any(|h| h.parse::<f64>().is_ok()) {
            return Err(Error::InvalidTable(
                "expected a two-column header row, e.g. `omega,n`".into(),
            ));
        }
        let mut omega = Vec::new();
        let mut n = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::InvalidTable(e.to_string()))?;
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::InvalidTable(format!("row {}: missing column", line + 2)))?
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidTable(format!("row {}: {e}", line + 2)))
            };
            omega.push(parse(0)?);
            n.push(parse(1)?);
        }
        OccupationTable::new(omega, n)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())
            .map_err(|e| Error::InvalidTable(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_csv_reader(file)
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn values(&self) -> &[f64] {
        &self.n
    }

    fn bracket(&self, w: f64) -> Option<usize> {
        if w <= self.omega[0] || w >= *self.omega.last().unwrap() {
            return None;
        }
        Some(self.omega.partition_point(|&x| x <= w) - 1)
    }

    /// Log-linear in `ω` between nodes; clamped outside.
    pub fn eval(&self, w: f64) -> f64 {
        let Some(i) = self.bracket(w) else {
            return if w <= self.omega[0] { self.n[0] } else { *self.n.last().unwrap() };
        };
        let (w0, w1) = (self.omega[i], self.omega[i + 1]);
        let (n0, n1) = (self.n[i], self.n[i + 1]);
        let f = (w - w0) / (w1 - w0);
        if n0 > 0.0 && n1 > 0.0 {
            (n0.ln() + f * (n1.ln() - n0.ln())).exp()
        } else {
            n0 + f * (n1 - n0)
        }
    }

    /// Central differences on the table nodes, interpolated linearly.
    pub fn derivative(&self, w: f64) -> Result<f64> {
        let m = self.omega.len();
        if m < 3 {
            return Err(Error::DerivativeUnavailable(format!(
                "tabulated occupation has {m} rows; central differences need at least 3"
            )));
        }
        let node = |j: usize| -> f64 {
            let (a, b) = match j {
                0 => (0, 1),
                j if j == m - 1 => (m - 2, m - 1),
                j => (j - 1, j + 1),
            };
            (self.n[b] - self.n[a]) / (self.omega[b] - self.omega[a])
        };
        let Some(i) = self.bracket(w) else {
            // clamped region is flat
            return Ok(0.0);
        };
        let f = (w - self.omega[i]) / (self.omega[i + 1] - self.omega[i]);
        Ok(node(i) + f * (node(i + 1) - node(i)))
    }
}

impl Occupation {
    pub fn planck(temperature: f64) -> Result<Self> {
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(invalid(format!("temperature must be >= 0, got {temperature}")));
        }
        Ok(Occupation::Planck { temperature })
    }

    pub fn n(&self, omega: f64) -> f64 {
        match self {
            Occupation::Planck { temperature } => planck_occupation(omega, *temperature),
            Occupation::Zero => 0.0,
            Occupation::Tabulated(t) => t.eval(omega),
        }
    }

    /// `∂n/∂ω`. Closed form `−(n² + n)/T` for Planck.
    pub fn dn_domega(&self, omega: f64) -> Result<f64> {
        match self {
            Occupation::Planck { temperature } => {
                if *temperature == 0.0 {
                    return Ok(0.0);
                }
                let n = planck_occupation(omega, *temperature);
                Ok(-(n * n + n) / temperature)
            }
            Occupation::Zero => Ok(0.0),
            Occupation::Tabulated(t) => t.derivative(omega),
        }
    }

    /// Photon-number variance `n² + n`.
    pub fn variance(&self, omega: f64) -> f64 {
        let n = self.n(omega);
        n * n + n
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Occupation::Zero => true,
            Occupation::Planck { temperature } => *temperature == 0.0,
            Occupation::Tabulated(t) => t.n.iter().all(|&v| v == 0.0),
        }
    }
}

/// `1/(e^{ω/T} − 1)`; zero at `T = 0`.
pub fn planck_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = omega / temperature;
    if x < SMALL_X {
        1.0 / x - 0.5 + x / 12.0
    } else {
        1.0 / x.exp_m1()
    }
}

/// `ρ(ω) = (ħω/π)(n(ω) + ½)`: energy per unit length per unit frequency.
pub fn spectral_density(omega: f64, occ: &Occupation) -> f64 {
    omega / PI * (occ.n(omega) + 0.5)
}

/// Uniform velocity along `y` with derived Lorentz factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostParams {
    v: f64,
    gamma: f64,
}

impl BoostParams {
    pub fn new(v: f64) -> Result<Self> {
        if !(v.abs() < 1.0) {
            return Err(invalid(format!("|v| must be < 1, got v = {v}")));
        }
        Ok(BoostParams { v, gamma: 1.0 / (1.0 - v * v).sqrt() })
    }

    pub fn velocity(&self) -> f64 {
        self.v
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Relativistic velocity addition.
    pub fn compose(&self, other: &BoostParams) -> Result<BoostParams> {
        BoostParams::new((self.v + other.v) / (1.0 + self.v * other.v))
    }
}

/// Propagation direction relative to the boost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// `γ ω′ (1 ± v)`.
pub fn doppler_shift(omega_prime: f64, boost: &BoostParams, direction: Direction) -> f64 {
    boost.gamma * omega_prime * (1.0 + direction.sign() * boost.v)
}

/// `ρ′(ω′) = (ħω′/π)[n(γω′(1+v)) + ½]`.
pub fn transformed_spectral_density(omega_prime: f64, occ: &Occupation, boost: &BoostParams) -> f64 {
    let w = doppler_shift(omega_prime, boost, Direction::Forward);
    omega_prime / PI * (occ.n(w) + 0.5)
}

/// `ρ′(ω′) = ρ(γω′(1+v)) / (γ(1+v))` for an arbitrary lab-frame density.
pub fn lorentz_transform_density<F: Fn(f64) -> f64>(omega_prime: f64, boost: &BoostParams, rho: F) -> f64 {
    let factor = boost.gamma * (1.0 + boost.v);
    rho(omega_prime * factor) / factor
}
