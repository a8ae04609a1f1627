use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// The ground field: the rationals or a prime field `F_p` with `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    pub fn zero(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { p: *p, v: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::one()),
            Field::Fp(p) => Scalar::Fp { p: *p, v: 1 % *p },
        }
    }

    /// The integer `n` as a field element.
    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from(BigInt::from(n))),
            Field::Fp(p) => {
                let p = *p as i64;
                Scalar::Fp {
                    p: p as u64,
                    v: n.rem_euclid(p) as u64,
                }
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact field element. Rationals are stored reduced with positive
/// denominator (num-rational maintains this); prime-field values live in
/// `[0, p)`. Serialized as strings ("a" or "a/b") in the workspace format.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { p: u64, v: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { p, v } => *v == 1 % *p,
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(r) => {
                assert!(!r.is_zero(), "division by zero");
                Scalar::Q(r.recip())
            }
            Scalar::Fp { p, v } => {
                assert!(*v != 0, "division by zero");
                // Fermat: v^(p-2) mod p.
                let mut acc: u128 = 1;
                let mut base = *v as u128;
                let mut e = *p - 2;
                let m = *p as u128;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                Scalar::Fp { p: *p, v: acc as u64 }
            }
        }
    }

    fn check_same(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "mixed-field arithmetic is rejected"
        );
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                p: *p,
                v: (a + b) % p,
            },
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                p: *p,
                v: (a + p - b) % p,
            },
            _ => unreachable!(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                p: *p,
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
        }
    }
}

impl Scalar {
    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }

    /// Parse "a" or "a/b" over the given field.
    pub fn parse(field: Field, s: &str) -> Option<Scalar> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        match field {
            Field::Q => {
                let n: BigInt = num.parse().ok()?;
                let d: BigInt = match den {
                    Some(d) => d.parse().ok()?,
                    None => BigInt::one(),
                };
                if d.is_zero() {
                    return None;
                }
                Some(Scalar::Q(BigRational::new(n, d)))
            }
            Field::Fp(p) => {
                let n: i64 = num.parse().ok()?;
                let base = Field::Fp(p).from_i64(n);
                match den {
                    None => Some(base),
                    Some(d) => {
                        let d: i64 = d.parse().ok()?;
                        let d = Field::Fp(p).from_i64(d);
                        if d.is_zero() {
                            None
                        } else {
                            Some(base.div(&d))
                        }
                    }
                }
            }
        }
    }

    /// Rational absolute height, used only for deterministic tie-breaking in
    /// displays; prime-field elements report their representative.
    pub fn display_key(&self) -> String {
        self.to_string()
    }
}

/// Signs occur everywhere in the Koszul calculus; `sign(k)` is `(-1)^k`.
pub fn sign(field: Field, k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        field.one()
    } else {
        -&field.one()
    }
}

impl Scalar {
    pub fn abs_q(&self) -> Option<BigRational> {
        match self {
            Scalar::Q(r) => Some(r.abs()),
            _ => None,
        }
    }
}
