use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

/// An angle `k * pi/4` with `k` reduced modulo 8.
///
/// All protocol angles live in this set, so protocol arithmetic is exact
/// integer arithmetic and every angle serialises to a single byte.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Angle8(u8);

impl Angle8 {
    pub const ZERO: Angle8 = Angle8(0);
    pub const PI_4: Angle8 = Angle8(1);
    pub const PI_2: Angle8 = Angle8(2);
    pub const PI: Angle8 = Angle8(4);

    /// Builds `k * pi/4`, reducing any integer `k` modulo 8.
    pub fn new(k: i64) -> Self {
        Angle8(k.rem_euclid(8) as u8)
    }

    pub fn k(self) -> u8 {
        self.0
    }

    pub fn radians(self) -> f64 {
        f64::from(self.0) * FRAC_PI_4
    }

    pub fn all() -> impl Iterator<Item = Angle8> + Clone {
        (0..8u8).map(Angle8)
    }

    /// Uniform sample from the eight angles.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Angle8(rng.gen_range(0..8))
    }
}

impl TryFrom<u8> for Angle8 {
    type Error = String;

    fn try_from(k: u8) -> Result<Self, Self::Error> {
        if k < 8 {
            Ok(Angle8(k))
        } else {
            Err(format!("angle index {k} outside 0..8"))
        }
    }
}

impl From<Angle8> for u8 {
    fn from(a: Angle8) -> u8 {
        a.0
    }
}

impl Add for Angle8 {
    type Output = Angle8;
    fn add(self, rhs: Angle8) -> Angle8 {
        Angle8((self.0 + rhs.0) % 8)
    }
}

impl Sub for Angle8 {
    type Output = Angle8;
    fn sub(self, rhs: Angle8) -> Angle8 {
        Angle8((self.0 + 8 - rhs.0) % 8)
    }
}

impl Neg for Angle8 {
    type Output = Angle8;
    fn neg(self) -> Angle8 {
        Angle8((8 - self.0) % 8)
    }
}

impl fmt::Display for Angle8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "0"),
            4 => write!(f, "pi"),
            k => write!(f, "{k}pi/4"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_modulo_eight() {
        assert_eq!(Angle8::new(9), Angle8::new(1));
        assert_eq!(Angle8::new(-1), Angle8::new(7));
        assert_eq!(-Angle8::ZERO, Angle8::ZERO);
        assert_eq!(-Angle8::PI_4, Angle8::new(7));
        assert_eq!(Angle8::PI_4 + Angle8::PI, Angle8::new(5));
    }

    #[test]
    fn rejects_out_of_range_bytes() {
        assert!(Angle8::try_from(8u8).is_err());
        assert!(serde_json::from_str::<Angle8>("9").is_err());
        assert_eq!(serde_json::from_str::<Angle8>("3").unwrap(), Angle8::new(3));
    }

    proptest! {
        #[test]
        fn group_laws(a in 0i64..8, b in 0i64..8) {
            let (a, b) = (Angle8::new(a), Angle8::new(b));
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!(a - b, a + (-b));
            prop_assert_eq!((a + b) - b, a);
            prop_assert!(((a + b).radians() - (a.radians() + b.radians())).rem_euclid(std::f64::consts::TAU).abs() < 1e-12
                || ((a + b).radians() - (a.radians() + b.radians())).rem_euclid(std::f64::consts::TAU) > std::f64::consts::TAU - 1e-12);
        }
    }
}
