//! Dense univariate polynomials over a [`Coeff`] ring.
//!
//! Used wherever a single parameter is analysed: discriminants along a
//! pencil, root multiplicities in the singularity classifier, and the
//! palindromic symmetry test for pencil determinants.

use crate::field::{Coeff, FieldSpec, Fq};
use std::fmt;

/// Dense univariate polynomial; `coeffs[i]` multiplies `X^i`, trailing zeros
/// are trimmed so the representation is canonical.
#[derive(Clone, PartialEq)]
pub struct UniPoly<C: Coeff> {
    unit: C,
    coeffs: Vec<C>,
}

impl<C: Coeff> UniPoly<C> {
    pub fn new(unit: C, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { unit: unit.one_like(), coeffs }
    }

    pub fn zero(unit: C) -> Self {
        UniPoly::new(unit, Vec::new())
    }

    pub fn constant(c: C) -> Self {
        let unit = c.one_like();
        UniPoly::new(unit, vec![c])
    }

    /// The monomial `c * X^e`.
    pub fn monomial(c: C, e: usize) -> Self {
        let unit = c.one_like();
        let mut coeffs = vec![c.zero_like(); e + 1];
        coeffs[e] = c;
        UniPoly::new(unit, coeffs)
    }

    pub fn unit(&self) -> &C {
        &self.unit
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.unit.zero_like())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect();
        UniPoly::new(self.unit.clone(), coeffs)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        UniPoly::new(self.unit.clone(), self.coeffs.iter().map(C::neg).collect())
    }

    pub fn scale(&self, s: &C) -> Self {
        UniPoly::new(self.unit.clone(), self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.unit.clone());
        }
        let mut coeffs =
            vec![self.unit.zero_like(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        UniPoly::new(self.unit.clone(), coeffs)
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = self.unit.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&self.unit.int_like(i as i64)))
            .collect();
        UniPoly::new(self.unit.clone(), coeffs)
    }

    /// Euclidean division; panics if the divisor is zero or its leading
    /// coefficient is not invertible.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dl = d.leading().expect("division by zero polynomial");
        let dinv = dl.try_inv().expect("leading coefficient must be invertible");
        let dd = d.degree().unwrap();
        let mut rem = self.clone();
        let mut q = vec![self.unit.zero_like(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading().unwrap().mul(&dinv);
            let shift = rd - dd;
            q[shift] = c.clone();
            let piece = UniPoly::monomial(c, shift).mul(d);
            rem = rem.sub(&piece);
        }
        (UniPoly::new(self.unit.clone(), q), rem)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        match a.leading().and_then(C::try_inv) {
            Some(inv) => a.scale(&inv),
            None => a,
        }
    }

    pub fn make_monic(&self) -> Self {
        match self.leading().and_then(C::try_inv) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Order of vanishing at zero (number of trailing zero coefficients);
    /// `None` for the zero polynomial (infinite order).
    pub fn valuation_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Multiplicity of `r` as a root (0 when not a root).
    pub fn root_multiplicity(&self, r: &C) -> usize {
        let lin = UniPoly::new(self.unit.clone(), vec![r.neg(), self.unit.one_like()]);
        let mut m = 0;
        let mut f = self.clone();
        loop {
            if f.is_zero() {
                return m;
            }
            let (q, rem) = f.divrem(&lin);
            if !rem.is_zero() {
                return m;
            }
            m += 1;
            f = q;
        }
    }

    /// Number of distinct roots in an algebraic closure, via
    /// `deg f - deg gcd(f, f')`. Correct when the degree is smaller than the
    /// characteristic (or in characteristic zero); callers enforce that.
    pub fn distinct_root_count(&self) -> Option<usize> {
        let d = self.degree()?;
        let g = self.gcd(&self.derivative());
        Some(d - g.degree().unwrap_or(0))
    }

    /// Coefficient reversal within the window `0..=n`:
    /// `sum c_i X^i` maps to `sum c_i X^(n-i)`. Requires `deg <= n`.
    pub fn reversal(&self, n: usize) -> Self {
        assert!(self.degree().is_none_or(|d| d <= n), "reversal window too small");
        let mut coeffs = vec![self.unit.zero_like(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[n - i] = c.clone();
        }
        UniPoly::new(self.unit.clone(), coeffs)
    }
}

impl UniPoly<Fq> {
    /// All roots in the coefficient field, with multiplicities, found by
    /// scanning the field (fields here are small by design).
    pub fn roots_with_multiplicity(&self, field: FieldSpec) -> Vec<(Fq, usize)> {
        if self.is_zero() {
            return Vec::new();
        }
        field
            .elements()
            .filter(|e| self.eval(e).is_zero())
            .map(|e| {
                let m = self.root_multiplicity(&e);
                (e, m)
            })
            .collect()
    }
}

impl<C: Coeff> fmt::Display for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*T")?,
                _ => write!(f, "({c})*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
