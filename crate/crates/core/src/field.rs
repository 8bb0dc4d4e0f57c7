//! Prime fields `F_p`, quadratic extensions `F_{p^2}`, and exact scalars of
//! the form `a + b*sqrt(d)` with rational `a`, `b` (surd rationals).
//!
//! Field elements carry their field description with them, so arithmetic can
//! be written generically over the [`Coeff`] trait without threading a context
//! argument through every polynomial operation.

use num::bigint::ToBigInt;
use num::{BigInt, BigRational, One, Signed, Zero};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Errors raised by field construction and embeddings.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("prime {0} is too small; lines are certified by vanishing at 5 points, which needs p >= 5")]
    TooSmallPrime(u64),
    #[error("prime {0} exceeds the supported range (p < 2^31)")]
    TooLargePrime(u64),
    #[error("unsupported extension degree k = {0}; only k = 1 and k = 2 are available")]
    UnsupportedExtension(u8),
    #[error("{0} has no square root in the requested field")]
    NoSquareRootInField(String),
    #[error("denominator {0} is not invertible modulo {1}")]
    DenominatorNotInvertible(String, u64),
    #[error("surd index {0} is not square-free")]
    NotSquareFree(i64),
}

const MAX_PRIME: u64 = (1 << 31) - 1;

/// Deterministic Miller–Rabin, exact for all `u64` inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A finite field `F_{p^k}` with `k` in `{1, 2}`.
///
/// For `k = 2` the field is realised as `F_p[t] / (t^2 - d)` where `d` is the
/// least quadratic non-residue modulo `p`, so the representation is a
/// deterministic function of `p` alone.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct FieldSpec {
    p: u64,
    k: u8,
    /// `t^2 = d` for `k = 2`; zero when `k = 1`.
    d: u64,
}

impl FieldSpec {
    /// Build `F_{p^k}`. Requires `p` prime, `p >= 5`, `k` in `{1, 2}`.
    pub fn make(p: u64, k: u8) -> Result<FieldSpec, FieldError> {
        if p >= 5 && !is_prime(p) {
            return Err(FieldError::CompositeModulus(p));
        }
        if p < 5 {
            // report compositeness first so `make(4, 1)` names the real problem
            if !is_prime(p) {
                return Err(FieldError::CompositeModulus(p));
            }
            return Err(FieldError::TooSmallPrime(p));
        }
        if p > MAX_PRIME {
            return Err(FieldError::TooLargePrime(p));
        }
        match k {
            1 => Ok(FieldSpec { p, k: 1, d: 0 }),
            2 => {
                let d = least_nonresidue(p);
                Ok(FieldSpec { p, k: 2, d })
            }
            other => Err(FieldError::UnsupportedExtension(other)),
        }
    }

    /// Like [`FieldSpec::make`] but also admits `p = 2` and `p = 3` (prime
    /// field only). Intended for projective point/line counting; the
    /// line-on-surface test needs `p >= 5` and is not supported here.
    pub fn make_any_prime(p: u64, k: u8) -> Result<FieldSpec, FieldError> {
        if p == 2 || p == 3 {
            if k != 1 {
                return Err(FieldError::UnsupportedExtension(k));
            }
            return Ok(FieldSpec { p, k: 1, d: 0 });
        }
        FieldSpec::make(p, k)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// Number of elements, `p^k`.
    pub fn q(&self) -> u64 {
        match self.k {
            1 => self.p,
            _ => self.p * self.p,
        }
    }

    /// For `k = 2`, the `d` with `t^2 = d`; `None` for prime fields.
    pub fn irreducible_d(&self) -> Option<u64> {
        (self.k == 2).then_some(self.d)
    }

    /// Human-readable descriptor such as `F_29` or `F_13^2`.
    pub fn label(&self) -> String {
        match self.k {
            1 => format!("F_{}", self.p),
            _ => format!("F_{}^2", self.p),
        }
    }

    pub fn zero(&self) -> Fq {
        Fq { c0: 0, c1: 0, ctx: *self }
    }

    pub fn one(&self) -> Fq {
        Fq { c0: 1, c1: 0, ctx: *self }
    }

    /// Element of the prime subfield from a (possibly negative) integer.
    pub fn elem(&self, n: i64) -> Fq {
        let p = self.p as i64;
        let mut r = n % p;
        if r < 0 {
            r += p;
        }
        Fq { c0: r as u64, c1: 0, ctx: *self }
    }

    /// Element `c0 + c1*t` from residues.
    pub fn elem2(&self, c0: u64, c1: u64) -> Fq {
        debug_assert!(self.k == 2 || c1 == 0);
        Fq { c0: c0 % self.p, c1: c1 % self.p, ctx: *self }
    }

    /// The `idx`-th element in the canonical order `c0 + c1 * p`.
    pub fn elem_from_index(&self, idx: u64) -> Fq {
        debug_assert!(idx < self.q());
        Fq { c0: idx % self.p, c1: idx / self.p, ctx: *self }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.q()).map(|i| self.elem_from_index(i))
    }

    #[inline]
    fn raw_add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn raw_sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn raw_mul(&self, a: u64, b: u64) -> u64 {
        // p < 2^31, so the product fits in u64
        (a * b) % self.p
    }

    /// Square root with a canonical choice: of the two roots `r` and `-r`,
    /// the one with the lexicographically smaller `(c0, c1)` is returned.
    /// `p >= 5` required.
    pub fn sqrt(&self, a: Fq) -> Option<Fq> {
        debug_assert!(self.p >= 5);
        if a.is_zero() {
            return Some(self.zero());
        }
        let exp_half = (self.q() - 1) / 2;
        if a.pow(exp_half) != self.one() {
            return None;
        }
        // Tonelli–Shanks over the cyclic group of order q - 1
        let mut m = self.q() - 1;
        let mut s = 0u32;
        while m.is_multiple_of(2) {
            m /= 2;
            s += 1;
        }
        let z = self
            .elements()
            .skip(1)
            .find(|e| e.pow(exp_half) != self.one())
            .expect("a quadratic non-residue exists for q > 2");
        let mut c = z.pow(m);
        let mut t = a.pow(m);
        let mut r = a.pow(m.div_ceil(2));
        let mut e = s;
        while t != self.one() {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != self.one() {
                t2 = t2.mul(&t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..e - i - 1 {
                b = b.mul(&b);
            }
            r = r.mul(&b);
            c = b.mul(&b);
            t = t.mul(&c);
            e = i;
        }
        debug_assert_eq!(r.mul(&r), a);
        let neg = r.neg();
        if (r.c0, r.c1) <= (neg.c0, neg.c1) {
            Some(r)
        } else {
            Some(neg)
        }
    }

    /// Embed an exact surd rational into this field.
    ///
    /// `a + b*sqrt(d)` maps to `a + b*r` where `r` is the canonical square
    /// root of `d mod p`. Fails if a denominator shares a factor with `p` or
    /// if `d` is a non-residue in a prime field.
    pub fn embed_surd(&self, s: &SurdRational) -> Result<Fq, FieldError> {
        let a = self.embed_rational(&s.a)?;
        if s.b.is_zero() {
            return Ok(a);
        }
        let b = self.embed_rational(&s.b)?;
        let d = self.elem(s.d);
        let r = self
            .sqrt(d)
            .ok_or_else(|| FieldError::NoSquareRootInField(format!("sqrt({}) in {}", s.d, self.label())))?;
        Ok(a.add(&b.mul(&r)))
    }

    fn embed_rational(&self, r: &BigRational) -> Result<Fq, FieldError> {
        let p = BigInt::from(self.p);
        let den = r.denom().clone() % &p;
        if den.is_zero() {
            return Err(FieldError::DenominatorNotInvertible(r.denom().to_string(), self.p));
        }
        let num = ((r.numer() % &p) + &p) % &p;
        let den_u = ((den + &p) % &p)
            .to_bigint()
            .and_then(|b| u64::try_from(b).ok())
            .expect("reduced residue fits u64");
        let num_u = u64::try_from(num).expect("reduced residue fits u64");
        let den_elem = Fq { c0: den_u, c1: 0, ctx: *self };
        let inv = den_elem
            .try_inv()
            .ok_or_else(|| FieldError::DenominatorNotInvertible(r.denom().to_string(), self.p))?;
        Ok(Fq { c0: num_u, c1: 0, ctx: *self }.mul(&inv))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn least_nonresidue(p: u64) -> u64 {
    let legendre = |a: u64| {
        let mut acc = 1u64;
        let mut b = a % p;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = (acc as u128 * b as u128 % p as u128) as u64;
            }
            b = (b as u128 * b as u128 % p as u128) as u64;
            e >>= 1;
        }
        acc
    };
    (2..p).find(|&d| legendre(d) == p - 1).expect("odd prime fields have non-residues")
}

/// An element of an [`FieldSpec`] field, `c0 + c1*t`, carrying its field.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fq {
    c0: u64,
    c1: u64,
    ctx: FieldSpec,
}

impl Fq {
    pub fn field(&self) -> FieldSpec {
        self.ctx
    }

    /// Residue pair `(c0, c1)`; `c1` is zero in prime fields.
    pub fn residues(&self) -> (u64, u64) {
        (self.c0, self.c1)
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    pub fn add(&self, o: &Fq) -> Fq {
        debug_assert_eq!(self.ctx, o.ctx);
        Fq {
            c0: self.ctx.raw_add(self.c0, o.c0),
            c1: self.ctx.raw_add(self.c1, o.c1),
            ctx: self.ctx,
        }
    }

    pub fn sub(&self, o: &Fq) -> Fq {
        debug_assert_eq!(self.ctx, o.ctx);
        Fq {
            c0: self.ctx.raw_sub(self.c0, o.c0),
            c1: self.ctx.raw_sub(self.c1, o.c1),
            ctx: self.ctx,
        }
    }

    pub fn mul(&self, o: &Fq) -> Fq {
        debug_assert_eq!(self.ctx, o.ctx);
        let f = &self.ctx;
        if f.k == 1 {
            Fq { c0: f.raw_mul(self.c0, o.c0), c1: 0, ctx: *f }
        } else {
            // (a0 + a1 t)(b0 + b1 t) with t^2 = d
            let c0 = f.raw_add(f.raw_mul(self.c0, o.c0), f.raw_mul(f.d, f.raw_mul(self.c1, o.c1)));
            let c1 = f.raw_add(f.raw_mul(self.c0, o.c1), f.raw_mul(self.c1, o.c0));
            Fq { c0, c1, ctx: *f }
        }
    }

    pub fn neg(&self) -> Fq {
        let f = &self.ctx;
        Fq {
            c0: if self.c0 == 0 { 0 } else { f.p - self.c0 },
            c1: if self.c1 == 0 { 0 } else { f.p - self.c1 },
            ctx: *f,
        }
    }

    pub fn pow(&self, mut e: u64) -> Fq {
        let mut acc = self.ctx.one();
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn try_inv(&self) -> Option<Fq> {
        if self.is_zero() {
            return None;
        }
        let f = &self.ctx;
        if f.k == 1 {
            Some(self.pow(f.p - 2))
        } else {
            // (a0 + a1 t)^-1 = (a0 - a1 t) / (a0^2 - d a1^2)
            let norm = f.raw_sub(f.raw_mul(self.c0, self.c0), f.raw_mul(f.d, f.raw_mul(self.c1, self.c1)));
            let conj = Fq { c0: self.c0, c1: if self.c1 == 0 { 0 } else { f.p - self.c1 }, ctx: *f };
            let norm_inv = Fq { c0: norm, c1: 0, ctx: *f }.pow(f.p - 2);
            Some(conj.mul(&norm_inv))
        }
    }

    pub fn inv(&self) -> Fq {
        self.try_inv().expect("inverse of zero")
    }

    /// Canonical index in the element order used by `elements()`.
    pub fn index(&self) -> u64 {
        self.c0 + self.c1 * self.ctx.p
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self, self.ctx.label())
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1 == 0 {
            write!(f, "{}", self.c0)
        } else if self.c0 == 0 {
            write!(f, "{}t", self.c1)
        } else {
            write!(f, "{}+{}t", self.c0, self.c1)
        }
    }
}

/// Coefficient ring interface shared by exact scalars and field elements.
///
/// Implementations carry whatever context they need inside the value, so new
/// constants are derived from an existing one (`zero_like`, `int_like`).
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn try_inv(&self) -> Option<Self>;
    /// `n` times the unit, in this value's ring.
    fn int_like(&self, n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
    fn double(&self) -> Self {
        self.add(self)
    }
    /// Exact division within the ring; `None` when `self` is not a multiple
    /// of `d`. The default suits fields; polynomial rings override it.
    fn div_exact_coeff(&self, d: &Self) -> Option<Self> {
        d.try_inv().map(|i| self.mul(&i))
    }
}

impl Coeff for Fq {
    fn zero_like(&self) -> Self {
        self.ctx.zero()
    }
    fn one_like(&self) -> Self {
        self.ctx.one()
    }
    fn add(&self, o: &Self) -> Self {
        Fq::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Fq::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Fq::mul(self, o)
    }
    fn neg(&self) -> Self {
        Fq::neg(self)
    }
    fn is_zero(&self) -> bool {
        Fq::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        Fq::try_inv(self)
    }
    fn int_like(&self, n: i64) -> Self {
        self.ctx.elem(n)
    }
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f * f) {
            return false;
        }
        while n.is_multiple_of(f) {
            n /= f;
        }
        f += 1;
    }
    true
}

/// Exact scalar `a + b*sqrt(d)` with rational `a`, `b` and square-free `d`.
///
/// `d = 0` encodes a plain rational. Arithmetic between two different
/// non-zero surd indices is not defined (one surd per computation domain)
/// and panics.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurdRational {
    a: BigRational,
    b: BigRational,
    d: i64,
}

impl SurdRational {
    pub fn rational(a: BigRational) -> SurdRational {
        SurdRational { a, b: BigRational::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> SurdRational {
        SurdRational::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_fraction(num: i64, den: i64) -> SurdRational {
        assert!(den != 0, "zero denominator");
        SurdRational::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `a + b*sqrt(d)`; `d` must be square-free (and is dropped when `b = 0`).
    pub fn surd(a: BigRational, b: BigRational, d: i64) -> Result<SurdRational, FieldError> {
        if !is_squarefree(d) || d == 1 {
            return Err(FieldError::NotSquareFree(d));
        }
        if b.is_zero() {
            return Ok(SurdRational::rational(a));
        }
        Ok(SurdRational { a, b, d })
    }

    /// `sqrt(d)` as a scalar.
    pub fn sqrt_of(d: i64) -> Result<SurdRational, FieldError> {
        SurdRational::surd(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> (&BigRational, i64) {
        (&self.b, self.d)
    }

    /// The surd index `d`, or zero for plain rationals.
    pub fn surd_index(&self) -> i64 {
        self.d
    }

    fn joint_d(&self, o: &SurdRational) -> i64 {
        match (self.d, o.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) if d1 == d2 => d1,
            (d1, d2) => panic!("mixed surd indices {d1} and {d2}"),
        }
    }
}

impl fmt::Display for SurdRational {
    /// Canonical rendering: `a`, `b*sqrt(d)`, or `a+b*sqrt(d)` with reduced
    /// fractions and no spaces, e.g. `-5+sqrt(7)` or `1/2-3/4*sqrt(7)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let mag = self.b.abs();
        let surd = if mag.is_one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", mag, self.d)
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{surd}")
            } else {
                write!(f, "{surd}")
            }
        } else if self.b.is_negative() {
            write!(f, "{}-{surd}", self.a)
        } else {
            write!(f, "{}+{surd}", self.a)
        }
    }
}

impl Coeff for SurdRational {
    fn zero_like(&self) -> Self {
        SurdRational::rational(BigRational::zero())
    }
    fn one_like(&self) -> Self {
        SurdRational::rational(BigRational::one())
    }
    fn add(&self, o: &Self) -> Self {
        let d = self.joint_d(o);
        let b = &self.b + &o.b;
        SurdRational { a: &self.a + &o.a, d: if b.is_zero() { 0 } else { d }, b }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self.joint_d(o);
        let dd = BigRational::from_integer(BigInt::from(d));
        let a = &self.a * &o.a + (&self.b * &o.b) * &dd;
        let b = &self.a * &o.b + &self.b * &o.a;
        SurdRational { a, d: if b.is_zero() { 0 } else { d }, b }
    }
    fn neg(&self) -> Self {
        SurdRational { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // (a + b sqrt(d))^-1 = (a - b sqrt(d)) / (a^2 - b^2 d)
        let dd = BigRational::from_integer(BigInt::from(self.d));
        let norm = &self.a * &self.a - (&self.b * &self.b) * &dd;
        assert!(!norm.is_zero(), "zero norm is impossible for square-free d");
        let conj = SurdRational { a: self.a.clone(), b: -self.b.clone(), d: self.d };
        let s = norm.recip();
        Some(SurdRational {
            a: &conj.a * &s,
            b: &conj.b * &s,
            d: if conj.b.is_zero() { 0 } else { self.d },
        })
    }
    fn int_like(&self, n: i64) -> Self {
        SurdRational::from_int(n)
    }
}
