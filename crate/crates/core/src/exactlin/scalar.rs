use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use super::LinAlgError;

/// Default working prime.
pub const DEFAULT_PRIME: u32 = 32003;

/// The scalar domain every matrix lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// The prime field `F_p`. Build through [`Field::fp`] so the modulus is checked.
    Fp(u32),
    /// The rationals.
    Q,
}

impl Field {
    pub fn fp(p: u32) -> Result<Self, LinAlgError> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(LinAlgError::BadModulus(p));
        }
        Ok(Field::Fp(p))
    }

    pub fn modulus(self) -> Option<u32> {
        match self {
            Field::Fp(p) => Some(p),
            Field::Q => None,
        }
    }

    /// Number of elements, `None` for an infinite field.
    pub fn order(self) -> Option<u64> {
        self.modulus().map(u64::from)
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, x: i64) -> Scalar {
        match self {
            Field::Fp(p) => Scalar::Fp {
                value: reduce_i64(x, p),
                modulus: p,
            },
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(x))),
        }
    }

    /// Uniform element of `F_p`, or an integer in `[-9, 9]` over `Q`.
    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> Scalar {
        match self {
            Field::Fp(p) => Scalar::Fp {
                value: rng.gen_range(0..p),
                modulus: p,
            },
            Field::Q => self.from_i64(rng.gen_range(-9..=9)),
        }
    }

    /// Parses a scalar in this field from its report representation
    /// (`"17"` or `"-3/4"`).
    pub fn parse_scalar(self, s: &str) -> Result<Scalar, LinAlgError> {
        let bad = || LinAlgError::Parse(s.to_string());
        match self {
            Field::Fp(p) => {
                let v = BigInt::from_str(s.trim()).map_err(|_| bad())?;
                let r = ((v % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                Ok(Scalar::Fp {
                    value: r.to_u32().ok_or_else(bad)?,
                    modulus: p,
                })
            }
            Field::Q => {
                let s = s.trim();
                let q = match s.split_once('/') {
                    Some((num, den)) => {
                        let num = BigInt::from_str(num).map_err(|_| bad())?;
                        let den = BigInt::from_str(den).map_err(|_| bad())?;
                        if den.is_zero() {
                            return Err(bad());
                        }
                        BigRational::new(num, den)
                    }
                    None => BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?),
                };
                Ok(Scalar::Q(q))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Fp(p) => write!(f, "fp:{p}"),
            Field::Q => f.write_str("qq"),
        }
    }
}

impl FromStr for Field {
    type Err = LinAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qq" | "QQ" => Ok(Field::Q),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u32>().ok())
                    .ok_or_else(|| LinAlgError::Parse(s.to_string()))?;
                Field::fp(p)
            }
        }
    }
}

/// An exact field element.
///
/// Rationals are kept in lowest terms with positive denominator (guaranteed
/// by `BigRational`); prime-field values are canonical representatives in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { value: u32, modulus: u32 },
    Q(BigRational),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Fp { modulus, .. } => Field::Fp(*modulus),
            Scalar::Q(_) => Field::Q,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { value, .. } => *value == 0,
            Scalar::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { value, .. } => *value == 1,
            Scalar::Q(q) => q.is_one(),
        }
    }

    fn check(&self, other: &Scalar) -> Result<(), LinAlgError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(LinAlgError::DomainMismatch(self.field(), other.field()))
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, LinAlgError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Fp { value: a, modulus }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((*a as u64 + *b as u64) % *modulus as u64) as u32,
                modulus: *modulus,
            },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            _ => unreachable!(),
        })
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, LinAlgError> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Fp { value: a, modulus }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((*a as u64 * *b as u64) % *modulus as u64) as u32,
                modulus: *modulus,
            },
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: (*modulus - *value) % *modulus,
                modulus: *modulus,
            },
            Scalar::Q(q) => Scalar::Q(-q),
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, LinAlgError> {
        self.try_add(&other.neg())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: inv_mod(*value, *modulus),
                modulus: *modulus,
            },
            Scalar::Q(q) => Scalar::Q(q.recip()),
        })
    }

    /// Value as a signed integer when it is one (prime-field values use the
    /// canonical representative).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Fp { value, .. } => Some(*value as i64),
            Scalar::Q(q) if q.is_integer() => q.to_integer().to_i64(),
            Scalar::Q(_) => None,
        }
    }

    /// Symmetric representative in `(-p/2, p/2]`, used by the CAS export.
    pub fn to_signed_repr(&self) -> String {
        match self {
            Scalar::Fp { value, modulus } => {
                if *value > modulus / 2 {
                    format!("-{}", modulus - value)
                } else {
                    value.to_string()
                }
            }
            Scalar::Q(_) => self.to_string(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { value, .. } => write!(f, "{value}"),
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

pub(crate) fn reduce_i64(x: i64, p: u32) -> u32 {
    x.rem_euclid(p as i64) as u32
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(a: u32, mut e: u32, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64 % p64;
    let mut base = a as u64 % p64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
