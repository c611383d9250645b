use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub type Int = BigInt;

/// The discrete base ring: either the integers or the integers modulo `n >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integers,
    IntegersMod(Int),
}

impl BaseRing {
    pub fn integers_mod(n: impl Into<Int>) -> Result<Self> {
        let n = n.into();
        if n < Int::from(2) {
            return Err(Error::input(format!("modulus must be >= 2, got {n}")));
        }
        Ok(BaseRing::IntegersMod(n))
    }

    /// Shorthand for small moduli; panics if `n < 2`.
    pub fn zn(n: u64) -> Self {
        assert!(n >= 2, "modulus must be >= 2");
        BaseRing::IntegersMod(Int::from(n))
    }

    pub fn modulus(&self) -> Option<&Int> {
        match self {
            BaseRing::Integers => None,
            BaseRing::IntegersMod(n) => Some(n),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BaseRing::IntegersMod(_))
    }

    /// Canonical representative: unchanged over Z, in `[0, n)` over Z/n.
    pub fn reduce(&self, x: &Int) -> Int {
        match self {
            BaseRing::Integers => x.clone(),
            BaseRing::IntegersMod(n) => x.mod_floor(n),
        }
    }

    pub fn reduce_in_place(&self, x: &mut Int) {
        if let BaseRing::IntegersMod(n) = self {
            if x.is_negative() || &*x >= n {
                *x = x.mod_floor(n);
            }
        }
    }

    pub fn is_zero(&self, x: &Int) -> bool {
        match self {
            BaseRing::Integers => x.is_zero(),
            BaseRing::IntegersMod(n) => x.mod_floor(n).is_zero(),
        }
    }

    /// The associate class generator: `|x|` over Z, `gcd(x, n)` over Z/n (with `0` for `n`).
    pub fn normal_part(&self, x: &Int) -> Int {
        match self {
            BaseRing::Integers => x.abs(),
            BaseRing::IntegersMod(n) => {
                let g = x.gcd(n);
                if &g == n {
                    Int::zero()
                } else {
                    g
                }
            }
        }
    }

    /// Does `a` divide `b` in the ring?
    pub fn divides(&self, a: &Int, b: &Int) -> bool {
        match self {
            BaseRing::Integers => {
                if a.is_zero() {
                    b.is_zero()
                } else {
                    (b % a).is_zero()
                }
            }
            BaseRing::IntegersMod(n) => {
                let g = a.gcd(n);
                b.mod_floor(n).mod_floor(&g).is_zero()
            }
        }
    }

    /// Some `q` with `a * q = b`, assuming `divides(a, b)`. Over Z/n the
    /// smallest nonnegative such `q` is returned.
    pub fn exact_quotient(&self, a: &Int, b: &Int) -> Option<Int> {
        match self {
            BaseRing::Integers => {
                if a.is_zero() {
                    return if b.is_zero() { Some(Int::zero()) } else { None };
                }
                let (q, r) = b.div_rem(a);
                r.is_zero().then_some(q)
            }
            BaseRing::IntegersMod(n) => {
                let a = a.mod_floor(n);
                let b = b.mod_floor(n);
                let g = a.gcd(n);
                if !b.mod_floor(&g).is_zero() {
                    return None;
                }
                let n1 = n / &g;
                if n1.is_one() {
                    return Some(Int::zero());
                }
                let a1 = (&a / &g).mod_floor(&n1);
                let b1 = (&b / &g).mod_floor(&n1);
                let inv = mod_inverse(&a1, &n1)?;
                Some((b1 * inv).mod_floor(&n1))
            }
        }
    }

    /// A unit `u` with `x * u = normal_part(x)`.
    pub fn normalizing_unit(&self, x: &Int) -> Int {
        match self {
            BaseRing::Integers => {
                if x.is_negative() {
                    -Int::one()
                } else {
                    Int::one()
                }
            }
            BaseRing::IntegersMod(n) => {
                let x = x.mod_floor(n);
                if x.is_zero() {
                    return Int::one();
                }
                let g = x.gcd(n);
                let n1 = n / &g;
                let x1 = (&x / &g).mod_floor(&n1);
                let u0 = if n1.is_one() {
                    Int::zero()
                } else {
                    mod_inverse(&x1, &n1).expect("x/g is a unit mod n/g")
                };
                // Lift u0 mod n1 to a unit mod n.
                let mut u = u0;
                loop {
                    if u.gcd(n).is_one() {
                        return u;
                    }
                    u += &n1;
                }
            }
        }
    }

    pub fn unit_inverse(&self, u: &Int) -> Option<Int> {
        match self {
            BaseRing::Integers => {
                if u.abs().is_one() {
                    Some(u.clone())
                } else {
                    None
                }
            }
            BaseRing::IntegersMod(n) => mod_inverse(&u.mod_floor(n), n),
        }
    }

    pub fn is_unit(&self, u: &Int) -> bool {
        self.unit_inverse(u).is_some()
    }

    /// Uniform element of Z/n, or a small integer in `[-2, 2]` over Z.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Int {
        match self {
            BaseRing::Integers => Int::from(rng.gen_range(-2i64..=2)),
            BaseRing::IntegersMod(n) => match n.to_u64() {
                Some(m) => Int::from(rng.gen_range(0..m)),
                None => Int::from(rng.gen::<u128>()).mod_floor(n),
            },
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "Z"),
            BaseRing::IntegersMod(n) => write!(f, "Z/{n}"),
        }
    }
}

impl FromStr for BaseRing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Z" {
            return Ok(BaseRing::Integers);
        }
        if let Some(rest) = t.strip_prefix("Z/") {
            let n: Int = rest
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("bad modulus in ring '{s}'")))?;
            return BaseRing::integers_mod(n);
        }
        Err(Error::input(format!("unknown ring '{s}', expected Z or Z/n")))
    }
}

/// Extended gcd: `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn mod_inverse(a: &Int, n: &Int) -> Option<Int> {
    let (g, s, _) = ext_gcd(a, n);
    if g.is_one() {
        Some(s.mod_floor(n))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!("Z".parse::<BaseRing>().unwrap(), BaseRing::Integers);
        assert_eq!("Z/4".parse::<BaseRing>().unwrap(), BaseRing::zn(4));
        assert!("Z/1".parse::<BaseRing>().is_err());
        assert!("Q".parse::<BaseRing>().is_err());
        assert_eq!(BaseRing::zn(12).to_string(), "Z/12");
    }

    #[test]
    fn divisibility_mod_n() {
        let r = BaseRing::zn(4);
        assert!(r.divides(&Int::from(2), &Int::from(2)));
        assert!(!r.divides(&Int::from(2), &Int::from(1)));
        assert!(r.divides(&Int::from(3), &Int::from(1)));
        assert_eq!(r.exact_quotient(&Int::from(2), &Int::from(2)), Some(Int::from(1)));
        assert_eq!(r.exact_quotient(&Int::from(3), &Int::from(1)), Some(Int::from(3)));
    }

    #[test]
    fn normalizing_unit_is_unit() {
        let r = BaseRing::zn(12);
        for x in 0..12 {
            let x = Int::from(x);
            let u = r.normalizing_unit(&x);
            assert!(r.is_unit(&u));
            assert_eq!(r.reduce(&(&x * &u)), r.reduce(&r.normal_part(&x)));
        }
    }
}
