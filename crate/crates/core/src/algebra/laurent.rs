//! Laurent polynomials in one variable `t` over the rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;

/// Exact rational numbers.
pub type Rational = BigRational;

/// An element of `Q[t, t^-1]`.
///
/// Stored as `t^min_exp * (c_0 + c_1 t + ...)`. The first and last stored
/// coefficients are nonzero; the zero polynomial has no coefficients and
/// `min_exp == 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    min_exp: i64,
    coeffs: Vec<Rational>,
}

impl LaurentPoly {
    pub fn new(min_exp: i64, coeffs: Vec<Rational>) -> Self {
        let mut p = LaurentPoly { min_exp, coeffs };
        p.trim();
        p
    }

    /// Builds from integer coefficients, starting at `t^min_exp`.
    pub fn from_ints(min_exp: i64, coeffs: &[i64]) -> Self {
        Self::new(min_exp, coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(0, vec![c])
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn monomial(c: Rational, exp: i64) -> Self {
        Self::new(exp, vec![c])
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// `t^exp`.
    pub fn t_pow(exp: i64) -> Self {
        Self::monomial(Rational::one(), exp)
    }

    fn trim(&mut self) {
        let lead = self.coeffs.iter().rposition(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.min_exp = 0;
            }
            Some(last) => {
                self.coeffs.truncate(last + 1);
                let first = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
                if first > 0 {
                    self.coeffs.drain(..first);
                    self.min_exp += first as i64;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.min_exp == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Units of the Laurent ring are exactly the nonzero monomials `c t^n`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Largest exponent present; `None` for zero.
    pub fn max_exp(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.min_exp + self.coeffs.len() as i64 - 1)
        }
    }

    /// Coefficients from `t^min_exp` upwards.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        let idx = exp - self.min_exp;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            Rational::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Coefficient of the highest power of `t`.
    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Max exponent minus min exponent. This is the only notion of degree
    /// that is invariant under multiplication by units, and every degree in
    /// the crate goes through here. Undefined for zero.
    pub fn breadth(&self) -> Option<u64> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() as u64 - 1)
        }
    }

    /// Total bit size of the numerators and denominators, used to rank
    /// pivots of equal breadth.
    pub fn height(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.numer().bits() + c.denom().bits())
            .sum()
    }

    /// Multiplies by `t^n`.
    pub fn shift(&self, n: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { min_exp: self.min_exp + n, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { min_exp: self.min_exp, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Canonical associate: lowest exponent 0, coprime integer coefficients,
    /// positive leading coefficient.
    pub fn normalize_unit(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.normalizing_factor()).shift(-self.min_exp)
    }

    /// The rational `c` with `c * t^-min_exp * self` normalized.
    fn normalizing_factor(&self) -> Rational {
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in &self.coeffs {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if self.leading_coeff().unwrap().is_negative() {
            factor = -factor;
        }
        factor
    }

    /// The unit `u` with `self = u * self.normalize_unit()`. Zero maps to one.
    pub fn unit_part(&self) -> Self {
        if self.is_zero() {
            return Self::one();
        }
        Self::monomial(self.normalizing_factor().recip(), self.min_exp)
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        Some(Self::monomial(self.coeffs[0].recip(), -self.min_exp))
    }

    /// Division with remainder for the Euclidean structure of the Laurent ring,
    /// with breadth as the Euclidean function: `self = q * rhs + r` where
    /// `r == 0` or `breadth(r) < breadth(rhs)`.
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self), AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok((Self::zero(), Self::zero()));
        }
        // Both as t^e * (polynomial with nonzero constant term).
        let mut rem = self.coeffs.clone();
        let div = &rhs.coeffs;
        let dlen = div.len();
        if rem.len() < dlen {
            return Ok((Self::zero(), self.clone()));
        }
        let lead_inv = div[dlen - 1].recip();
        let qlen = rem.len() - dlen + 1;
        let mut quot = vec![Rational::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + dlen - 1] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in div.iter().enumerate() {
                if !d.is_zero() {
                    rem[i + j] -= &c * d;
                }
            }
            quot[i] = c;
        }
        let q = LaurentPoly::new(self.min_exp - rhs.min_exp, quot);
        let r = LaurentPoly::new(self.min_exp, rem);
        Ok((q, r))
    }

    /// Exact quotient, or `None` when `rhs` does not divide `self`.
    pub fn div_exact(&self, rhs: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(rhs).ok()?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        if self.is_unit() {
            return true;
        }
        other.div_rem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Normalized greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.normalize_unit()
    }

    /// Evaluates at a nonzero rational (or any rational when no negative powers occur).
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        if self.min_exp >= 0 {
            acc * num_traits::pow(x.clone(), self.min_exp as usize)
        } else {
            acc / num_traits::pow(x.clone(), (-self.min_exp) as usize)
        }
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        let base = self.min_exp;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (base + i as i64, c))
    }

    /// Compares by (breadth, height); zero sorts last.
    pub fn pivot_cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => self
                .breadth()
                .cmp(&other.breadth())
                .then_with(|| self.height().cmp(&other.height())),
        }
    }

    fn add_impl(&self, rhs: &Self, negate: bool) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -rhs } else { rhs.clone() };
        }
        let lo = self.min_exp.min(rhs.min_exp);
        let hi = self.max_exp().unwrap().max(rhs.max_exp().unwrap());
        let mut out = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(self.min_exp - lo) as usize + i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            let slot = &mut out[(rhs.min_exp - lo) as usize + i];
            if negate {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        LaurentPoly::new(lo, out)
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if rhs.is_unit() {
            return self.scale(&rhs.coeffs[0]).shift(rhs.min_exp);
        }
        if self.is_unit() {
            return rhs.scale(&self.coeffs[0]).shift(self.min_exp);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        LaurentPoly::new(self.min_exp + rhs.min_exp, out)
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly { min_exp: 0, coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly { min_exp: 0, coeffs: vec![Rational::one()] }
    }
}

impl Default for LaurentPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for LaurentPoly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                $body(self, rhs)
            }
        }
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                $body(&self, &rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                $body(&self, rhs)
            }
        }
        impl $trait<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &LaurentPoly, b: &LaurentPoly| a.add_impl(b, false));
forward_binop!(Sub, sub, |a: &LaurentPoly, b: &LaurentPoly| a.add_impl(b, true));
forward_binop!(Mul, mul, |a: &LaurentPoly, b: &LaurentPoly| a.mul_impl(b));

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = self.add_impl(rhs, false);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        *self = self.add_impl(rhs, true);
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { min_exp: self.min_exp, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Renders as `c0 + c1*t + c2*t^2`, lowest power first, rationals as `p/q`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in self.terms() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let var = match exp {
                0 => String::new(),
                1 => "t".to_string(),
                e => format!("t^{e}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Parses a rational written as `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let s = s.trim();
    let bad = || AlgebraError::Parse(format!("bad rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

impl serde::Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Accepts the rendering produced by `Display` (and a little more: terms in
/// any order, `*` optional, repeated powers summed).
impl FromStr for LaurentPoly {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(AlgebraError::Parse("empty polynomial".into()));
        }
        // Split into signed terms; a '-' right after '^' belongs to an exponent.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !cur.is_empty() {
                    terms.push((negative, std::mem::take(&mut cur)));
                } else if prev.is_some() {
                    return Err(AlgebraError::Parse(format!("bad polynomial `{s}`")));
                }
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        if cur.is_empty() {
            return Err(AlgebraError::Parse(format!("bad polynomial `{s}`")));
        }
        terms.push((negative, cur));

        let mut acc = LaurentPoly::zero();
        for (neg, term) in terms {
            let (coeff_str, exp) = match term.find('t') {
                None => (term.as_str(), 0i64),
                Some(pos) => {
                    let head = term[..pos].trim_end_matches('*');
                    let tail = &term[pos + 1..];
                    let exp = if tail.is_empty() {
                        1
                    } else if let Some(e) = tail.strip_prefix('^') {
                        e.parse::<i64>()
                            .map_err(|_| AlgebraError::Parse(format!("bad exponent in `{term}`")))?
                    } else {
                        return Err(AlgebraError::Parse(format!("bad term `{term}`")));
                    };
                    (if head.is_empty() { "1" } else { head }, exp)
                }
            };
            let mut c = parse_rational(coeff_str)?;
            if neg {
                c = -c;
            }
            acc += &LaurentPoly::monomial(c, exp);
        }
        Ok(acc)
    }
}
