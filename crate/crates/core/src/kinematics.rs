//! Coordinate algebra for a two-body bound state boosted along z.
//!
//! Natural units throughout. Four-vectors are ordered `(t, x, y, z)` and only
//! the `t` and `z` components take part in boosts.

use std::f64::consts::SQRT_2;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Proton mass in GeV, used when a beam energy is given without a mass.
pub const PROTON_MASS_GEV: f64 = 0.938;

/// Boost (and squeeze) parameter η. The sign gives the boost direction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Rapidity(f64);

impl Rapidity {
    pub const ZERO: Rapidity = Rapidity(0.0);

    pub fn new(eta: f64) -> Result<Self> {
        if eta.is_finite() {
            Ok(Rapidity(eta))
        } else {
            Err(Error::Domain(format!("rapidity must be finite, got {eta}")))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Velocity β = tanh η.
    pub fn velocity(self) -> f64 {
        self.0.tanh()
    }
}

impl TryFrom<f64> for Rapidity {
    type Error = Error;

    fn try_from(eta: f64) -> Result<Self> {
        Rapidity::new(eta)
    }
}

impl From<Rapidity> for f64 {
    fn from(eta: Rapidity) -> f64 {
        eta.0
    }
}

impl std::ops::Neg for Rapidity {
    type Output = Rapidity;

    fn neg(self) -> Rapidity {
        Rapidity(-self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const ZERO: FourVector = FourVector::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector { t, x, y, z }
    }

    pub fn components(&self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }
}

impl Add for FourVector {
    type Output = FourVector;

    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for FourVector {
    type Output = FourVector;

    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;

    fn mul(self, s: f64) -> FourVector {
        FourVector::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }
}

/// The positions (or momenta) of the two constituents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourVectorPair {
    pub a: FourVector,
    pub b: FourVector,
}

impl FourVectorPair {
    pub fn new(a: FourVector, b: FourVector) -> Self {
        FourVectorPair { a, b }
    }
}

/// Longitudinal and time separation of the constituents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeSeparation {
    pub z: f64,
    pub t: f64,
}

impl SpacetimeSeparation {
    pub fn new(z: f64, t: f64) -> Self {
        SpacetimeSeparation { z, t }
    }

    /// z² − t².
    pub fn interval(&self) -> f64 {
        self.z * self.z - self.t * self.t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightConeCoords {
    pub u: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumLightCone {
    pub q_u: f64,
    pub q_v: f64,
}

/// Center-of-mass position X = (a + b)/2 and relative coordinate x = (a − b)/(2√2).
pub fn pair_coordinates(pair: &FourVectorPair) -> (FourVector, FourVector) {
    let center = (pair.a + pair.b) * 0.5;
    let relative = (pair.a - pair.b) * (1.0 / (2.0 * SQRT_2));
    (center, relative)
}

/// Total momentum P = a + b and relative momentum q = √2 (a − b).
pub fn momentum_variables(pair: &FourVectorPair) -> (FourVector, FourVector) {
    (pair.a + pair.b, (pair.a - pair.b) * SQRT_2)
}

pub fn boost_zt(p: SpacetimeSeparation, eta: Rapidity) -> SpacetimeSeparation {
    let (sh, ch) = (eta.0.sinh(), eta.0.cosh());
    SpacetimeSeparation {
        z: p.z * ch + p.t * sh,
        t: p.z * sh + p.t * ch,
    }
}

pub fn to_light_cone(p: SpacetimeSeparation) -> LightConeCoords {
    LightConeCoords {
        u: (p.z + p.t) / SQRT_2,
        v: (p.z - p.t) / SQRT_2,
    }
}

pub fn from_light_cone(c: LightConeCoords) -> SpacetimeSeparation {
    SpacetimeSeparation {
        z: (c.u + c.v) / SQRT_2,
        t: (c.u - c.v) / SQRT_2,
    }
}

/// In light-cone coordinates the boost is diagonal: u → e^η u, v → e^{−η} v.
pub fn boost_light_cone(c: LightConeCoords, eta: Rapidity) -> LightConeCoords {
    LightConeCoords {
        u: eta.0.exp() * c.u,
        v: (-eta.0).exp() * c.v,
    }
}

/// Momentum light-cone variables. Note q_u pairs with q_0 − q_z, the
/// opposite sign to the position-space u.
pub fn momentum_light_cone(q_z: f64, q_0: f64) -> MomentumLightCone {
    MomentumLightCone {
        q_u: (q_0 - q_z) / SQRT_2,
        q_v: (q_0 + q_z) / SQRT_2,
    }
}

/// Inverse of [`momentum_light_cone`], returning `(q_z, q_0)`.
pub fn momentum_from_light_cone(c: MomentumLightCone) -> (f64, f64) {
    ((c.q_v - c.q_u) / SQRT_2, (c.q_u + c.q_v) / SQRT_2)
}

/// η = arccosh(E/m) for a particle of energy `energy` and mass `mass` (GeV).
pub fn rapidity_from_energy(energy: f64, mass: f64) -> Result<Rapidity> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::Domain(format!("mass must be positive, got {mass}")));
    }
    if !(energy.is_finite() && energy >= mass) {
        return Err(Error::Domain(format!(
            "energy {energy} GeV is below the mass {mass} GeV"
        )));
    }
    Rapidity::new((energy / mass).acosh())
}
