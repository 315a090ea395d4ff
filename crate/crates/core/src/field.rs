//! Arithmetic in the binary extension fields GF(2^r), 2 <= r <= 16.
//!
//! Elements are polynomials over GF(2) of degree < r, stored as the integer
//! whose bit `i` is the coefficient of `x^i`. Addition is XOR. Multiplication
//! goes through exp/log tables over a generator of the multiplicative group;
//! for r <= 8 a full product table is also kept, since the census inner loops
//! are dominated by multiplications.
//!
//! When no reduction polynomial is given, the lexicographically smallest
//! irreducible polynomial of the requested degree is used:
//!
//! | r | poly    | r  | poly     |
//! |---|---------|----|----------|
//! | 2 | 0x7     | 9  | 0x203    |
//! | 3 | 0xB     | 10 | 0x409    |
//! | 4 | 0x13    | 11 | 0x805    |
//! | 5 | 0x25    | 12 | 0x1009   |
//! | 6 | 0x43    | 13 | 0x201B   |
//! | 7 | 0x83    | 14 | 0x4021   |
//! | 8 | 0x11B   | 15 | 0x8003   |
//! |   |         | 16 | 0x1002B  |

use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 16;

/// An element of some GF(2^r). The field is implied by context.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline(always)]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline(always)]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Add for Elem {
    type Output = Elem;

    #[inline(always)]
    fn add(self, rhs: Elem) -> Elem {
        Elem(self.0 ^ rhs.0)
    }
}

impl AddAssign for Elem {
    #[inline(always)]
    fn add_assign(&mut self, rhs: Elem) {
        self.0 ^= rhs.0;
    }
}

impl std::iter::Sum for Elem {
    fn sum<I: Iterator<Item = Elem>>(iter: I) -> Elem {
        iter.fold(Elem::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#X}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:X}", self.0)
    }
}

impl From<u16> for Elem {
    fn from(v: u16) -> Self {
        Elem(v)
    }
}

/// Parse `0x..` hex (either case) or a plain decimal integer.
pub fn parse_hex_u32(s: &str) -> Result<u32> {
    let t = s.trim();
    let parsed = if let Some(h) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        u32::from_str_radix(h, 16)
    } else {
        t.parse::<u32>()
    };
    parsed.map_err(|_| Error::Parse(format!("invalid integer literal {s:?}")))
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Str(String),
        }
        let v = match Raw::deserialize(d)? {
            Raw::Int(i) => i,
            Raw::Str(s) => parse_hex_u32(&s).map_err(serde::de::Error::custom)? as u64,
        };
        u16::try_from(v)
            .map(Elem)
            .map_err(|_| serde::de::Error::custom(format!("element {v:#X} exceeds 16 bits")))
    }
}

/// Degree of a GF(2) polynomial; `None` for the zero polynomial.
pub fn gf2_degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

/// Remainder of `a` divided by `b` over GF(2).
pub fn gf2_rem(mut a: u32, b: u32) -> u32 {
    let db = gf2_degree(b).expect("division by the zero polynomial");
    while let Some(da) = gf2_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Degree of the smallest nontrivial factor of `p`, or `None` if `p` is
/// irreducible. Trial division by every polynomial of degree up to deg(p)/2.
pub fn smallest_factor_degree(p: u32) -> Option<u32> {
    let deg = gf2_degree(p)?;
    for d in 1..=deg / 2 {
        for q in (1u32 << d)..(1u32 << (d + 1)) {
            if gf2_rem(p, q) == 0 {
                return Some(d);
            }
        }
    }
    None
}

pub fn is_irreducible(p: u32) -> bool {
    matches!(gf2_degree(p), Some(d) if d >= 1) && smallest_factor_degree(p).is_none()
}

/// All irreducible polynomials of degree `r`, ascending.
pub fn irreducible_polys(r: u32) -> Vec<u32> {
    ((1u32 << r)..(1u32 << (r + 1)))
        .filter(|&p| is_irreducible(p))
        .collect()
}

/// The lexicographically smallest irreducible polynomial of degree `r`.
pub fn default_poly(r: u32) -> u32 {
    ((1u32 << r)..(1u32 << (r + 1)))
        .find(|&p| is_irreducible(p))
        .expect("irreducible polynomials exist in every degree")
}

fn clmul_mod(mut a: u32, mut b: u32, poly: u32, r: u32) -> u32 {
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & (1 << r) != 0 {
            a ^= poly;
        }
    }
    acc
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A binary field GF(2^r) with a fixed irreducible reduction polynomial.
#[derive(Clone)]
pub struct FieldSpec {
    r: u32,
    poly: u32,
    generator: Elem,
    // exp has 2(q-1) entries so that log(x) + log(y) never wraps.
    exp: Vec<u16>,
    log: Vec<u16>,
    // full product table for r <= 8, indexed (x << r) | y
    table: Option<Vec<u8>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})/{:#X}", self.r, self.poly)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && self.poly == other.poly
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Build GF(2^r), validating that `poly` (or the default) is irreducible
    /// of degree exactly `r`.
    pub fn new(r: u32, poly: Option<u32>) -> Result<FieldSpec> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&r) {
            return Err(Error::InvalidDegree(r));
        }
        let poly = match poly {
            None => default_poly(r),
            Some(p) => {
                let actual = gf2_degree(p).unwrap_or(0);
                if actual != r {
                    return Err(Error::DegreeMismatch { poly: p, expected: r, actual });
                }
                if let Some(factor_degree) = smallest_factor_degree(p) {
                    return Err(Error::ReduciblePolynomial { poly: p, factor_degree });
                }
                p
            }
        };

        let q = 1u32 << r;
        let group = q - 1;
        let factors = prime_factors(group);
        let slow_pow = |g: u32, mut e: u32| {
            let (mut base, mut acc) = (g, 1u32);
            while e > 0 {
                if e & 1 == 1 {
                    acc = clmul_mod(acc, base, poly, r);
                }
                base = clmul_mod(base, base, poly, r);
                e >>= 1;
            }
            acc
        };
        let generator = (2..q)
            .find(|&g| factors.iter().all(|&p| slow_pow(g, group / p) != 1))
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u16; 2 * group as usize];
        let mut log = vec![0u16; q as usize];
        let mut x = 1u32;
        for i in 0..group as usize {
            exp[i] = x as u16;
            exp[i + group as usize] = x as u16;
            log[x as usize] = i as u16;
            x = clmul_mod(x, generator, poly, r);
        }
        debug_assert_eq!(x, 1);

        let mut field = FieldSpec {
            r,
            poly,
            generator: Elem(generator as u16),
            exp,
            log,
            table: None,
        };
        if r <= 8 {
            let mut table = vec![0u8; (q * q) as usize];
            for a in 1..q {
                for b in 1..q {
                    table[((a << r) | b) as usize] = field.mul_log(Elem(a as u16), Elem(b as u16)).0 as u8;
                }
            }
            field.table = Some(table);
        }
        Ok(field)
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Number of elements, 2^r.
    pub fn order(&self) -> usize {
        1usize << self.r
    }

    /// Order of the multiplicative group, 2^r - 1.
    pub fn group_order(&self) -> usize {
        self.order() - 1
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.index() < self.order()
    }

    pub fn check(&self, x: Elem) -> Result<Elem> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::ElementOutOfRange { value: x.0 as u32, r: self.r })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order() as u32).map(|v| Elem(v as u16))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.order() as u32).map(|v| Elem(v as u16))
    }

    #[inline(always)]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        x + y
    }

    #[inline(always)]
    fn mul_log(&self, x: Elem, y: Elem) -> Elem {
        if x.is_zero() || y.is_zero() {
            return Elem::ZERO;
        }
        Elem(self.exp[self.log[x.index()] as usize + self.log[y.index()] as usize])
    }

    #[inline(always)]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        match &self.table {
            Some(t) => Elem(t[(x.index() << self.r) | y.index()] as u16),
            None => self.mul_log(x, y),
        }
    }

    #[inline(always)]
    pub fn square(&self, x: Elem) -> Elem {
        self.mul(x, x)
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let g = self.group_order();
        Ok(Elem(self.exp[(g - self.log[x.index()] as usize) % g]))
    }

    /// `x / y`; fails when `y` is zero.
    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^e`, with `pow(0, 0) = 1`.
    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if x.is_zero() {
            return Elem::ZERO;
        }
        let g = self.group_order() as u64;
        let l = (self.log[x.index()] as u64 * (e % g)) % g;
        Elem(self.exp[l as usize])
    }

    /// The unique square root, `x^(2^(r-1))`.
    pub fn sqrt(&self, x: Elem) -> Elem {
        self.pow(x, 1u64 << (self.r - 1))
    }

    /// Every `x` with `x^3 = 1`, ascending.
    pub fn cube_roots_of_unity(&self) -> Vec<Elem> {
        self.nonzero_elements().filter(|&x| self.pow(x, 3) == Elem::ONE).collect()
    }

    /// The element `x` itself, i.e. a root of the reduction polynomial.
    pub fn root(&self) -> Elem {
        Elem(2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_polys_match_table() {
        let expected = [
            (2, 0x7),
            (3, 0xB),
            (4, 0x13),
            (5, 0x25),
            (6, 0x43),
            (7, 0x83),
            (8, 0x11B),
            (9, 0x203),
            (10, 0x409),
            (11, 0x805),
            (12, 0x1009),
            (13, 0x201B),
            (14, 0x4021),
            (15, 0x8003),
            (16, 0x1002B),
        ];
        for (r, p) in expected {
            assert_eq!(default_poly(r), p, "r = {r}");
        }
    }

    #[test]
    fn make_field_examples() {
        let f = FieldSpec::new(4, None).unwrap();
        assert_eq!((f.degree(), f.poly()), (4, 0x13));
        assert!(FieldSpec::new(4, Some(0x13)).is_ok());
        assert_eq!(
            FieldSpec::new(4, Some(0x18)).unwrap_err(),
            Error::ReduciblePolynomial { poly: 0x18, factor_degree: 1 }
        );
        assert!(matches!(FieldSpec::new(4, Some(0x25)), Err(Error::DegreeMismatch { .. })));
        assert!(matches!(FieldSpec::new(1, None), Err(Error::InvalidDegree(1))));
        assert!(matches!(FieldSpec::new(17, None), Err(Error::InvalidDegree(17))));
    }

    #[test]
    fn non_primitive_poly_still_finds_generator() {
        // x is not primitive modulo the AES polynomial; 0x3 is
        let f = FieldSpec::new(8, Some(0x11B)).unwrap();
        assert_eq!(f.generator(), Elem(3));
        let mut seen = vec![false; 256];
        for e in 0..255 {
            seen[f.pow(f.generator(), e).index()] = true;
        }
        assert_eq!(seen.iter().filter(|&&s| s).count(), 255);
    }

    #[test]
    fn small_examples() {
        let f = FieldSpec::new(4, Some(0x13)).unwrap();
        assert_eq!(Elem(5) + Elem(3), Elem(6));
        assert_eq!(Elem(9) + Elem(9), Elem::ZERO);
        assert_eq!(f.mul(Elem(2), Elem(8)), Elem(3));
        assert_eq!(f.inv(Elem(2)).unwrap(), Elem(9));
        assert_eq!(f.inv(Elem::ONE).unwrap(), Elem::ONE);
        assert_eq!(f.inv(Elem::ZERO), Err(Error::ZeroInverse));
        assert_eq!(f.pow(Elem(2), 4), Elem(3));
        assert_eq!(f.pow(Elem::ZERO, 0), Elem::ONE);
        assert_eq!(f.sqrt(Elem::ZERO), Elem::ZERO);
        assert_eq!(f.sqrt(Elem::ONE), Elem::ONE);
    }

    #[test]
    fn elem_serde_roundtrip() {
        let v: Vec<Elem> = serde_json::from_str(r#"["0x1B", "0xb", 7]"#).unwrap();
        assert_eq!(v, vec![Elem(0x1B), Elem(0xB), Elem(7)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["0x1B","0xB","0x7"]"#);
    }
}
