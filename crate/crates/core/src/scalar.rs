//! Scalar backends.
//!
//! Every algorithm in this crate is generic over [`Scalar`]. Two backends are
//! provided: [`QSqrt2`], exact arithmetic in the real quadratic field
//! `Q(√2)`, and plain `f64`. The exact backend never uses a tolerance; the
//! float backend uses the relative pivot tolerance [`FLOAT_PIVOT_TOL`] for
//! rank decisions and caller-supplied absolute tolerances for residuals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ScalarParseError;

/// Relative pivot tolerance for float rank decisions.
pub const FLOAT_PIVOT_TOL: f64 = 1e-9;

/// Field element used by all algebra, geometry and contact code.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// True for backends whose equality is decidable without tolerance.
    const EXACT: bool;
    /// Tag used in the algebra definition file (`field`).
    const FIELD_TAG: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn sqrt2() -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;

    /// Residual test: exact zero for exact backends, `|x| <= tol` otherwise.
    fn within(&self, tol: f64) -> bool;

    /// Pivot test used by elimination: exact zero, or `|x| <= 1e-9 * scale`.
    fn negligible(&self, scale: f64) -> bool;

    /// Lossless textual form (canonical `p/q+r/s*r2` for the exact field,
    /// 17 significant digits for floats).
    fn to_exact_string(&self) -> String;

    fn parse_scalar(s: &str) -> Result<Self, ScalarParseError>;

    /// Exact square root when it exists in the field (always for
    /// nonnegative floats).
    fn sqrt_exact(&self) -> Option<Self>;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const FIELD_TAG: &'static str = "float64";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn sqrt2() -> Self {
        std::f64::consts::SQRT_2
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn within(&self, tol: f64) -> bool {
        f64::abs(*self) <= tol
    }
    fn negligible(&self, scale: f64) -> bool {
        f64::abs(*self) <= FLOAT_PIVOT_TOL * scale.max(f64::MIN_POSITIVE)
    }
    fn to_exact_string(&self) -> String {
        format!("{:.16e}", self)
    }
    fn parse_scalar(s: &str) -> Result<Self, ScalarParseError> {
        let t = s.trim();
        if let Ok(v) = t.parse::<f64>() {
            return Ok(v);
        }
        // Accept the exact grammar too, so exact files can be read as floats.
        QSqrt2::from_str(t).map(|q| q.to_f64())
    }
    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

/// Element `a + b·√2` of `Q(√2)` with arbitrary-precision rational parts.
///
/// `BigRational` keeps both parts in lowest terms, so structural equality is
/// field equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    a: BigRational,
    b: BigRational,
}

impl QSqrt2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn from_parts(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> Self {
        Self {
            a: ratio(a_num, a_den),
            b: ratio(b_num, b_den),
        }
    }

    /// Rational part.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of √2.
    pub fn sqrt2_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b√2`.
    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -self.b.clone(),
        }
    }

    /// Field norm `a² - 2b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(2.into()) * &self.b * &self.b
    }

    fn signum_i8(&self) -> i8 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // Opposite signs: compare a² with 2b².
        let lhs = &self.a * &self.a;
        let rhs = BigRational::from_integer(2.into()) * &self.b * &self.b;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: scale down before converting.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum_i8().cmp(&0)
    }
}

impl Add for QSqrt2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl Sub for QSqrt2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl Mul for QSqrt2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.b.is_zero() && rhs.b.is_zero() {
            return Self {
                a: self.a * rhs.a,
                b: BigRational::zero(),
            };
        }
        let two = BigRational::from_integer(2.into());
        Self {
            a: &self.a * &rhs.a + two * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Div for QSqrt2 {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero_exact(), "division by zero in Q(sqrt2)");
        if rhs.b.is_zero() {
            return Self {
                a: self.a / &rhs.a,
                b: self.b / &rhs.a,
            };
        }
        let n = rhs.norm();
        let num = self * rhs.conjugate();
        Self {
            a: num.a / &n,
            b: num.b / &n,
        }
    }
}

impl Neg for QSqrt2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self { a: -self.a, b: -self.b }
    }
}

impl AddAssign for QSqrt2 {
    fn add_assign(&mut self, rhs: Self) {
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl SubAssign for QSqrt2 {
    fn sub_assign(&mut self, rhs: Self) {
        self.a -= rhs.a;
        self.b -= rhs.b;
    }
}

impl MulAssign for QSqrt2 {
    fn mul_assign(&mut self, rhs: Self) {
        let lhs = std::mem::take(self);
        *self = lhs * rhs;
    }
}

impl QSqrt2 {
    fn is_zero_exact(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl Scalar for QSqrt2 {
    const EXACT: bool = true;
    const FIELD_TAG: &'static str = "exact-sqrt2";

    fn zero() -> Self {
        Self {
            a: BigRational::zero(),
            b: BigRational::zero(),
        }
    }
    fn one() -> Self {
        Self {
            a: BigRational::one(),
            b: BigRational::zero(),
        }
    }
    fn from_i64(v: i64) -> Self {
        Self {
            a: BigRational::from_integer(v.into()),
            b: BigRational::zero(),
        }
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self {
            a: ratio(num, den),
            b: BigRational::zero(),
        }
    }
    fn sqrt2() -> Self {
        Self {
            a: BigRational::zero(),
            b: BigRational::one(),
        }
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + std::f64::consts::SQRT_2 * rational_to_f64(&self.b)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_exact()
    }
    fn abs(&self) -> Self {
        if self.signum_i8() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn within(&self, _tol: f64) -> bool {
        self.is_zero_exact()
    }
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero_exact()
    }
    fn to_exact_string(&self) -> String {
        self.to_string()
    }
    fn parse_scalar(s: &str) -> Result<Self, ScalarParseError> {
        s.parse()
    }
    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero_exact() {
            return Some(Self::zero());
        }
        // Try x = p + q√2 with x² = a + b√2: p² + 2q² = a, 2pq = b.
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Self {
                    a: r,
                    b: BigRational::zero(),
                });
            }
            // a = 2 q² for pure multiples of √2.
            let half = &self.a / BigRational::from_integer(2.into());
            return rational_sqrt(&half).map(|q| Self {
                a: BigRational::zero(),
                b: q,
            });
        }
        // p² = (a ± sqrt(a² - 2b²)) / 2.
        let disc = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(2.into());
        for cand in [(&self.a + &disc) / &two, (&self.a - &disc) / &two] {
            if cand.is_positive() {
                if let Some(p) = rational_sqrt(&cand) {
                    let q = &self.b / (&two * &p);
                    let root = Self { a: p, b: q };
                    if root.clone() * root.clone() == *self {
                        return Some(root.abs());
                    }
                }
            }
        }
        None
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let b = if self.b.is_one() {
            "r2".to_string()
        } else if (-self.b.clone()).is_one() {
            "-r2".to_string()
        } else {
            format!("{}*r2", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{b}")
        } else if b.starts_with('-') {
            write!(f, "{}{}", self.a, b)
        } else {
            write!(f, "{}+{}", self.a, b)
        }
    }
}

impl fmt::Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for QSqrt2 {
    type Err = ScalarParseError;

    /// Accepts sums of terms `p`, `p/q`, `p.d` (decimal), each optionally
    /// followed by `*r2`; bare `r2` and `-r2` are allowed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(ScalarParseError::new(s, "empty scalar"));
        }
        let mut out = Self::zero();
        let mut start = 0;
        let bytes = text.as_bytes();
        let mut i = 1;
        let mut terms = Vec::new();
        while i <= bytes.len() {
            let at_end = i == bytes.len();
            if at_end || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'/' && bytes[i - 1] != b'e') {
                terms.push(&text[start..i]);
                start = i;
            }
            i += 1;
        }
        for term in terms {
            out += parse_term(term).map_err(|m| ScalarParseError::new(s, m))?;
        }
        Ok(out)
    }
}

fn parse_term(term: &str) -> Result<QSqrt2, &'static str> {
    let (sign, body) = match term.as_bytes().first() {
        Some(b'+') => (1, &term[1..]),
        Some(b'-') => (-1, &term[1..]),
        _ => (1, term),
    };
    if body.is_empty() {
        return Err("dangling sign");
    }
    let (coeff, irrational) = if body == "r2" {
        ("1", true)
    } else if let Some(c) = body.strip_suffix("*r2") {
        (c, true)
    } else {
        (body, false)
    };
    let mut value = parse_rational(coeff)?;
    if sign < 0 {
        value = -value;
    }
    Ok(if irrational {
        QSqrt2::new(BigRational::zero(), value)
    } else {
        QSqrt2::new(value, BigRational::zero())
    })
}

fn parse_rational(s: &str) -> Result<BigRational, &'static str> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().map_err(|_| "bad numerator")?;
        let d: BigInt = d.parse().map_err(|_| "bad denominator")?;
        if d.is_zero() {
            return Err("zero denominator");
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err("bad decimal");
        }
        let digits: BigInt = format!("{whole}{frac}").parse().map_err(|_| "bad decimal")?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(digits, den));
    }
    let n: BigInt = s.parse().map_err(|_| "not a rational or r2 term")?;
    Ok(BigRational::from_integer(n))
}

/// Convenience constructor: integer.
pub fn int<S: Scalar>(v: i64) -> S {
    S::from_i64(v)
}

/// Convenience constructor: `num/den`.
pub fn frac<S: Scalar>(num: i64, den: i64) -> S {
    S::from_ratio(num, den)
}

/// Sum of an iterator of scalars.
pub fn sum<S: Scalar, I: IntoIterator<Item = S>>(it: I) -> S {
    it.into_iter().fold(S::zero(), |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> QSqrt2 {
        s.parse().unwrap()
    }

    #[test]
    fn multiplication_follows_field_rule() {
        // (1 + √2)(3 - 2√2) = 3 - 4 + (3 - 2)√2 = -1 + √2
        assert_eq!(q("1+r2") * q("3-2*r2"), q("-1+r2"));
        assert_eq!(QSqrt2::sqrt2() * QSqrt2::sqrt2(), QSqrt2::from_i64(2));
    }

    #[test]
    fn inverse_of_unit() {
        let u = q("1+r2");
        assert_eq!(u.recip(), q("-1+r2"));
        assert_eq!(q("1/2*r2") * q("r2"), QSqrt2::one());
    }

    #[test]
    fn ordering_uses_exact_sign() {
        assert!(q("3/2") > q("r2"));
        assert!(q("7/5") < q("r2"));
        assert!(q("-r2") < q("-7/5"));
        assert_eq!(q("3-2*r2").abs(), q("3-2*r2"));
        assert!(q("3-2*r2").is_positive());
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(q("2/4+0*r2").to_string(), "1/2");
        assert_eq!(q("2*r2").to_string(), "2*r2");
        assert_eq!(q("1/3-1/2*r2").to_string(), "1/3-1/2*r2");
        assert_eq!(q("-r2").to_string(), "-r2");
        assert_eq!(q("0.25").to_string(), "1/4");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<QSqrt2>().is_err());
        assert!("1/0".parse::<QSqrt2>().is_err());
        assert!("sqrt(3)".parse::<QSqrt2>().is_err());
        assert!("1+".parse::<QSqrt2>().is_err());
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(q("8").sqrt_exact(), Some(q("2*r2")));
        assert_eq!(q("3+2*r2").sqrt_exact(), Some(q("1+r2")));
        assert_eq!(q("9/4").sqrt_exact(), Some(q("3/2")));
        assert_eq!(q("3").sqrt_exact(), None);
        assert_eq!(q("-1").sqrt_exact(), None);
    }

    fn arb_q() -> impl Strategy<Value = QSqrt2> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(a, b, c, d)| QSqrt2::from_parts(a, b, c, d))
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(x in arb_q()) {
            prop_assert_eq!(x.to_string().parse::<QSqrt2>().unwrap(), x);
        }

        #[test]
        fn field_axioms_and_float_image(x in arb_q(), y in arb_q()) {
            let prod = x.clone() * y.clone();
            prop_assert!((prod.to_f64() - x.to_f64() * y.to_f64()).abs() < 1e-9);
            if !y.is_zero() {
                prop_assert_eq!((x.clone() / y.clone()) * y.clone(), x.clone());
            }
            prop_assert_eq!(x.clone() < y.clone(), x.to_f64() < y.to_f64());
        }
    }
}
