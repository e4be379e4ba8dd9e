//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(n)-1}` as an integer
//! numerator vector over a common positive denominator, kept in lowest terms.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor must be positive")]
    BadConductor,
    #[error("zero denominator")]
    ZeroDenominator,
}

struct FieldData {
    conductor: u32,
    degree: usize,
    /// Φ_n, lowest coefficient first, monic.
    modulus: Vec<BigInt>,
    /// Residues of ζ^{d}, …, ζ^{2d-2}.
    high_powers: Vec<Vec<BigInt>>,
}

/// Handle to an interned cyclotomic field.
#[derive(Clone, Copy)]
pub struct Field(&'static FieldData);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.conductor == other.0.conductor
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.0.conductor)
    }
}

fn registry() -> &'static Mutex<HashMap<u32, &'static FieldData>> {
    static REG: OnceLock<Mutex<HashMap<u32, &'static FieldData>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

type Poly = Vec<BigInt>;

fn poly_trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Exact division of integer polynomials by a monic divisor.
fn poly_div_monic(num: &Poly, den: &Poly) -> Poly {
    let mut rem = num.clone();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        q[k] = c;
    }
    q
}

fn cyclotomic_poly(n: u32, cache: &mut HashMap<u32, Poly>) -> Poly {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut p: Poly = vec![BigInt::zero(); n as usize + 1];
    p[0] = BigInt::from(-1);
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d, cache);
            p = poly_div_monic(&p, &phi_d);
            poly_trim(&mut p);
        }
    }
    cache.insert(n, p.clone());
    p
}

impl Field {
    pub fn cyclotomic(conductor: u32) -> Result<Field, ScalarError> {
        if conductor == 0 {
            return Err(ScalarError::BadConductor);
        }
        let mut reg = registry().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(&data) = reg.get(&conductor) {
            return Ok(Field(data));
        }
        let modulus = cyclotomic_poly(conductor, &mut HashMap::new());
        let degree = modulus.len() - 1;
        let mut high_powers = Vec::new();
        // ζ^d = -(m_0 + … + m_{d-1} ζ^{d-1})
        let mut cur: Vec<BigInt> = modulus[..degree].iter().map(|c| -c).collect();
        for _ in degree..(2 * degree).saturating_sub(1) {
            high_powers.push(cur.clone());
            // multiply by ζ
            let top = cur[degree - 1].clone();
            let mut next = vec![BigInt::zero(); degree];
            for i in 1..degree {
                next[i] = cur[i - 1].clone();
            }
            for i in 0..degree {
                next[i] -= &top * &modulus[i];
            }
            cur = next;
        }
        let data: &'static FieldData =
            Box::leak(Box::new(FieldData { conductor, degree, modulus, high_powers }));
        reg.insert(conductor, data);
        Ok(Field(data))
    }

    pub fn conductor(self) -> u32 {
        self.0.conductor
    }

    pub fn degree(self) -> usize {
        self.0.degree
    }

    /// Coefficients of Φ_n, lowest first.
    pub fn modulus(self) -> &'static [BigInt] {
        &self.0.modulus
    }

    pub fn zero(self) -> Scalar {
        Scalar { field: self, num: vec![BigInt::zero(); self.degree()], den: BigInt::one() }
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, v: i64) -> Scalar {
        self.rational(BigInt::from(v), BigInt::one())
    }

    pub fn ratio(self, n: i64, d: i64) -> Scalar {
        self.rational(BigInt::from(n), BigInt::from(d))
    }

    pub fn rational(self, n: BigInt, d: BigInt) -> Scalar {
        assert!(!d.is_zero(), "zero denominator");
        let mut num = vec![BigInt::zero(); self.degree()];
        num[0] = n;
        let mut s = Scalar { field: self, num, den: d };
        s.normalize();
        s
    }

    /// ζ_n^k for any integer k.
    pub fn zeta(self, k: i64) -> Scalar {
        let n = self.conductor() as i64;
        let e = k.rem_euclid(n) as usize;
        let mut coeffs = vec![BigInt::zero(); e + 1];
        coeffs[e] = BigInt::one();
        self.from_coeffs(coeffs, BigInt::one()).expect("nonzero denominator")
    }

    /// Build from power-basis coefficients of any length; reduced modulo Φ_n.
    pub fn from_coeffs(self, coeffs: Vec<BigInt>, den: BigInt) -> Result<Scalar, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator);
        }
        let d = self.degree();
        let mut c = coeffs;
        if c.len() > d {
            // reduce modulo the monic Φ_n
            let m = self.modulus();
            for k in (d..c.len()).rev() {
                let top = std::mem::take(&mut c[k]);
                if top.is_zero() {
                    continue;
                }
                for i in 0..d {
                    c[k - d + i] -= &top * &m[i];
                }
            }
            c.truncate(d);
        }
        c.resize(d, BigInt::zero());
        let mut s = Scalar { field: self, num: c, den };
        s.normalize();
        Ok(s)
    }

    pub fn from_i64_coeffs(self, coeffs: &[i64], den: i64) -> Scalar {
        self.from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(den))
            .expect("nonzero denominator")
    }
}

/// An element of `Q(ζ_n)`.
#[derive(Clone)]
pub struct Scalar {
    field: Field,
    num: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.den == other.den && self.num == other.num
    }
}
impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor().hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Scalar {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational number, if it lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check_field(&self, other: &Scalar) {
        assert!(self.field == other.field, "mixed fields {:?} and {:?}", self.field, other.field);
    }

    fn add_impl(&self, other: &Scalar, sign: bool) -> Scalar {
        self.check_field(other);
        let mut num = Vec::with_capacity(self.num.len());
        if self.den == other.den {
            for (a, b) in self.num.iter().zip(&other.num) {
                num.push(if sign { a + b } else { a - b });
            }
            let mut s = Scalar { field: self.field, num, den: self.den.clone() };
            s.normalize();
            return s;
        }
        for (a, b) in self.num.iter().zip(&other.num) {
            let x = a * &other.den;
            let y = b * &self.den;
            num.push(if sign { x + y } else { x - y });
        }
        let mut s = Scalar { field: self.field, num, den: &self.den * &other.den };
        s.normalize();
        s
    }

    fn mul_impl(&self, other: &Scalar) -> Scalar {
        self.check_field(other);
        let d = self.num.len();
        if self.is_zero() || other.is_zero() {
            return self.field.zero();
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let hp = &self.field.0.high_powers;
        let mut num: Vec<BigInt> = prod[..d].to_vec();
        for k in d..2 * d - 1 {
            let c = &prod[k];
            if c.is_zero() {
                continue;
            }
            for (i, r) in hp[k - d].iter().enumerate() {
                if !r.is_zero() {
                    num[i] += c * r;
                }
            }
        }
        let mut s = Scalar { field: self.field, num, den: &self.den * &other.den };
        s.normalize();
        s
    }

    /// Multiplicative inverse, by solving the linear system `self * x = 1`.
    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let d = self.field.degree();
        if let Some(q) = self.as_rational() {
            let r = q.recip();
            return Ok(self.field.rational(r.numer().clone(), r.denom().clone()));
        }
        // column j of the matrix is self * ζ^j
        let zeta = self.field.zeta(1);
        let mut col = Scalar { field: self.field, num: self.num.clone(), den: BigInt::one() };
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); d + 1]; d];
        for j in 0..d {
            for i in 0..d {
                m[i][j] = BigRational::new(col.num[i].clone(), col.den.clone());
            }
            col = col.mul_impl(&zeta);
        }
        m[0][d] = BigRational::one();
        for c in 0..d {
            let p = (c..d).find(|&r| !m[r][c].is_zero()).ok_or(ScalarError::DivisionByZero)?;
            m.swap(c, p);
            let piv = m[c][c].clone();
            for k in c..=d {
                m[c][k] = &m[c][k] / &piv;
            }
            for r in 0..d {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for k in c..=d {
                        let t = &f * &m[c][k];
                        m[r][k] -= t;
                    }
                }
            }
        }
        // x = (solution) / original denominator^-1, i.e. multiply by self.den
        let lcm = m.iter().fold(BigInt::one(), |acc, row| acc.lcm(row[d].denom()));
        let num = m
            .iter()
            .map(|row| row[d].numer() * (&lcm / row[d].denom()) * &self.den)
            .collect();
        let mut s = Scalar { field: self.field, num, den: lcm };
        s.normalize();
        Ok(s)
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul_impl(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Scalar, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut out = self.field.one();
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(out)
    }

    /// Numerical value as (re, im); for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.field.conductor() as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.num.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            let a = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += c * a.cos();
            im += c * a.sin();
        }
        (re, im)
    }

    /// Short numerical rendering such as `0.27639` or `0.5+0.86603i`.
    pub fn approx_string(&self) -> String {
        let (re, im) = self.to_complex();
        let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
        let (re, im) = (clean(re), clean(im));
        if im == 0.0 {
            format!("{re:.12}")
        } else {
            format!("{re:.12}{im:+.12}i")
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = BigRational::new(c.clone(), self.den.clone());
            let neg = q.is_negative();
            let a = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{a}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.add_impl(o, true)
    }
}
impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.add_impl(o, false)
    }
}
impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.mul_impl(o)
    }
}
impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        self.add_impl(&o, true)
    }
}
impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        self.add_impl(&o, false)
    }
}
impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        self.mul_impl(&o)
    }
}
impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        for c in &mut self.num {
            *c = -std::mem::take(c);
        }
        self
    }
}
impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}
impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = self.add_impl(o, true);
    }
}
impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = self.add_impl(o, false);
    }
}
impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = self.mul_impl(o);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_degrees() {
        for (n, d) in [(1, 1), (2, 1), (3, 2), (4, 2), (5, 4), (6, 2), (8, 4), (12, 4), (15, 8)] {
            assert_eq!(Field::cyclotomic(n).unwrap().degree(), d, "n={n}");
        }
    }

    #[test]
    fn zeta_has_order_n() {
        for n in [3u32, 4, 5, 7, 12] {
            let k = Field::cyclotomic(n).unwrap();
            let z = k.zeta(1);
            assert!(z.pow(n as i64).unwrap().is_one());
            assert!(!z.pow(n as i64 / 2).unwrap().is_one() || n == 1);
        }
    }

    #[test]
    fn golden_ratio_in_q_zeta5() {
        let k = Field::cyclotomic(5).unwrap();
        let phi = k.from_i64_coeffs(&[0, 0, -1, -1], 1);
        assert_eq!(&phi * &phi, &phi + &k.one());
        let inv = phi.inv().unwrap();
        assert_eq!(inv, &phi - &k.one());
    }

    #[test]
    fn inverse_of_general_element() {
        let k = Field::cyclotomic(7).unwrap();
        let a = k.from_i64_coeffs(&[3, -1, 0, 2, 5, -4], 7);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
    }

    #[test]
    fn long_vectors_reduce() {
        let k = Field::cyclotomic(5).unwrap();
        // 1 + ζ + ζ^2 + ζ^3 + ζ^4 = 0
        assert!(k.from_i64_coeffs(&[1, 1, 1, 1, 1], 1).is_zero());
        assert_eq!(k.from_i64_coeffs(&[0, 0, 0, 0, 0, 1], 1), k.one());
    }

    #[test]
    fn normalized_denominators() {
        let k = Field::cyclotomic(3).unwrap();
        let a = k.from_i64_coeffs(&[2, 4], -6);
        assert_eq!(a.denominator(), &BigInt::from(3));
        assert_eq!(a.numerator(), &[BigInt::from(-1), BigInt::from(-2)]);
        assert_eq!(k.ratio(0, 5), k.zero());
    }

    #[test]
    fn division_by_zero() {
        let k = Field::cyclotomic(5).unwrap();
        assert_eq!(k.zero().inv(), Err(ScalarError::DivisionByZero));
    }
}
