//! Polynomial arithmetic.
//!
//! [`MultiPoly`] is a sparse polynomial in the four projective coordinates
//! `x, y, z, w` with coefficients in any [`Coeff`] ring; [`UniPoly`] is a
//! dense univariate companion used for discriminants and root analysis.
//! Exponent vectors are ordered lexicographically, which fixes a canonical
//! term order for display, leading terms and exact division.

mod matrix;
mod parse;
mod paramform;
mod unipoly;

pub use matrix::{
    bareiss_det, bareiss_det_in_ring, det_by_evaluation, hessian_matrix, hessian_matrix_in,
    nullspace, solve_linear, PolyMatrix,
};
pub use parse::{parse_poly, ParseError};
pub use paramform::{
    compose_on_curve, polar_form, strip_t_power, sylvester_resultant,
    sylvester_resultant_formal, tangent_form, ParamForm,
};
pub use unipoly::UniPoly;

use crate::field::Coeff;
use std::collections::BTreeMap;
use std::fmt;

/// Variable indices into exponent vectors.
pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const W: usize = 3;

/// Display names of the four coordinates.
pub const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// Sparse polynomial in `x, y, z, w` over a coefficient ring `C`.
///
/// Invariant: `terms` never stores a zero coefficient. Every polynomial
/// carries `unit`, the multiplicative identity of its ring, so constants of
/// the right ring can be derived even from the zero polynomial.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<C: Coeff> {
    unit: C,
    terms: BTreeMap<[u16; 4], C>,
}

impl<C: Coeff> MultiPoly<C> {
    /// The zero polynomial over the ring of `unit`.
    pub fn zero(unit: C) -> Self {
        MultiPoly { unit: unit.one_like(), terms: BTreeMap::new() }
    }

    /// A constant polynomial.
    pub fn constant(c: C) -> Self {
        let unit = c.one_like();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 4], c);
        }
        MultiPoly { unit, terms }
    }

    /// The monomial `c * x^e0 y^e1 z^e2 w^e3`.
    pub fn monomial(c: C, exps: [u16; 4]) -> Self {
        let unit = c.one_like();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MultiPoly { unit, terms }
    }

    /// The bare variable `var`.
    pub fn variable(unit: C, var: usize) -> Self {
        let mut exps = [0u16; 4];
        exps[var] = 1;
        MultiPoly::monomial(unit.one_like(), exps)
    }

    /// Build from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms(unit: C, it: impl IntoIterator<Item = ([u16; 4], C)>) -> Self {
        let mut p = MultiPoly::zero(unit);
        for (exps, c) in it {
            p.add_term(exps, c);
        }
        p
    }

    /// The multiplicative identity of the coefficient ring.
    pub fn unit(&self) -> &C {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u16; 4], &C)> {
        self.terms.iter()
    }

    /// Coefficient of an exponent vector (zero if absent).
    pub fn coeff(&self, exps: [u16; 4]) -> C {
        self.terms.get(&exps).cloned().unwrap_or_else(|| self.unit.zero_like())
    }

    fn add_term(&mut self, exps: [u16; 4], c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u16> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in a single variable, or `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// True when every term has the same total degree (zero counts as
    /// homogeneous of any degree).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u16>());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    /// Lex-leading term (greatest exponent vector), if non-zero.
    pub fn leading_term(&self) -> Option<(&[u16; 4], &C)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.neg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (*e, c.neg())).collect();
        MultiPoly { unit: self.unit.clone(), terms }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = MultiPoly::zero(self.unit.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                r.add_term(e, ca.mul(cb));
            }
        }
        r
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(self.unit.clone());
        }
        let terms = self.terms.iter().map(|(e, t)| (*e, t.mul(c))).collect();
        MultiPoly { unit: self.unit.clone(), terms }
    }

    pub fn pow(&self, e: u16) -> Self {
        let mut r = MultiPoly::constant(self.unit.clone());
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Multiply by the monomial `x^e0 y^e1 z^e2 w^e3`.
    pub fn mul_monomial(&self, shift: [u16; 4]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                ([e[0] + shift[0], e[1] + shift[1], e[2] + shift[2], e[3] + shift[3]], c.clone())
            })
            .collect();
        MultiPoly { unit: self.unit.clone(), terms }
    }

    /// Partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut r = MultiPoly::zero(self.unit.clone());
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[var] -= 1;
            r.add_term(ne, c.mul(&self.unit.int_like(e[var] as i64)));
        }
        r
    }

    /// Evaluate at a point.
    pub fn eval(&self, pt: &[C; 4]) -> C {
        let mut acc = self.unit.zero_like();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (v, &exp) in pt.iter().zip(e.iter()) {
                for _ in 0..exp {
                    m = m.mul(v);
                }
            }
            acc = acc.add(&m);
        }
        acc
    }

    /// Substitute `var := rep` (a polynomial), leaving other variables alone.
    pub fn substitute(&self, var: usize, rep: &Self) -> Self {
        let max_e = match self.degree_in(var) {
            None => return self.clone(),
            Some(d) => d,
        };
        // cache rep^0 .. rep^max_e
        let mut pows = Vec::with_capacity(max_e as usize + 1);
        pows.push(MultiPoly::constant(self.unit.clone()));
        for i in 1..=max_e as usize {
            let next = pows[i - 1].mul(rep);
            pows.push(next);
        }
        let mut r = MultiPoly::zero(self.unit.clone());
        for (e, c) in &self.terms {
            let mut rest = *e;
            rest[var] = 0;
            let part = pows[e[var] as usize].mul_monomial(rest).scale(c);
            r = r.add(&part);
        }
        r
    }

    /// Apply the linear substitution `x_i := sum_j m[i][j] x_j`, i.e. compose
    /// with the matrix `m` acting on coordinates.
    pub fn compose_linear(&self, m: &[[C; 4]; 4]) -> Self {
        let forms: Vec<MultiPoly<C>> = (0..4)
            .map(|i| {
                MultiPoly::from_terms(
                    self.unit.clone(),
                    (0..4).map(|j| {
                        let mut e = [0u16; 4];
                        e[j] = 1;
                        (e, m[i][j].clone())
                    }),
                )
            })
            .collect();
        let max_deg: [u16; 4] = {
            let mut md = [0u16; 4];
            for e in self.terms.keys() {
                for i in 0..4 {
                    md[i] = md[i].max(e[i]);
                }
            }
            md
        };
        let pow_cache: Vec<Vec<MultiPoly<C>>> = (0..4)
            .map(|i| {
                let mut v = Vec::with_capacity(max_deg[i] as usize + 1);
                v.push(MultiPoly::constant(self.unit.clone()));
                for k in 1..=max_deg[i] as usize {
                    let next = v[k - 1].mul(&forms[i]);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut r = MultiPoly::zero(self.unit.clone());
        for (e, c) in &self.terms {
            let mut m = MultiPoly::constant(c.clone());
            for i in 0..4 {
                if e[i] > 0 {
                    m = m.mul(&pow_cache[i][e[i] as usize]);
                }
            }
            r = r.add(&m);
        }
        r
    }

    /// The four partial derivatives, in variable order.
    pub fn gradient(&self) -> [Self; 4] {
        [0, 1, 2, 3].map(|v| self.derivative(v))
    }

    /// Per-variable minimum exponents over all terms: the exponent vector of
    /// the largest monomial dividing every term (`None` for the zero
    /// polynomial). `[0, 0, 0, 0]` means no non-trivial monomial factor.
    pub fn min_exponents(&self) -> Option<[u16; 4]> {
        let mut it = self.terms.keys();
        let mut m = *it.next()?;
        for e in it {
            for i in 0..4 {
                m[i] = m[i].min(e[i]);
            }
        }
        Some(m)
    }

    /// Split into graded parts by degree in `var`: entry `d` of the result is
    /// the coefficient of `var^d`, a polynomial in the other variables.
    pub fn parts_by_degree_in(&self, var: usize) -> Vec<Self> {
        let top = self.degree_in(var).unwrap_or(0);
        let mut parts = vec![MultiPoly::zero(self.unit.clone()); top as usize + 1];
        for (e, c) in &self.terms {
            let mut ne = *e;
            ne[var] = 0;
            parts[e[var] as usize].add_term(ne, c.clone());
        }
        parts
    }

    /// Split into graded parts by total degree.
    pub fn parts_by_total_degree(&self) -> Vec<Self> {
        let top = self.total_degree().unwrap_or(0);
        let mut parts = vec![MultiPoly::zero(self.unit.clone()); top as usize + 1];
        for (e, c) in &self.terms {
            let d: u16 = e.iter().sum();
            parts[d as usize].add_term(*e, c.clone());
        }
        parts
    }

    /// Split by the total degree in a subset of the variables only: entry `d`
    /// collects the terms whose exponents over `vars` sum to `d` (keeping the
    /// other variables in place).
    pub fn parts_by_degree_in_vars(&self, vars: &[usize]) -> Vec<Self> {
        let deg = |e: &[u16; 4]| -> usize { vars.iter().map(|&v| e[v] as usize).sum() };
        let top = self.terms.keys().map(deg).max().unwrap_or(0);
        let mut parts = vec![MultiPoly::zero(self.unit.clone()); top + 1];
        for (e, c) in &self.terms {
            parts[deg(e)].add_term(*e, c.clone());
        }
        parts
    }

    /// Drop every term whose total degree in `vars` exceeds `cap`.
    pub fn truncate_by_degree_in_vars(&self, vars: &[usize], cap: usize) -> Self {
        MultiPoly::from_terms(
            self.unit.clone(),
            self.terms.iter().filter_map(|(e, c)| {
                let d: usize = vars.iter().map(|&v| e[v] as usize).sum();
                (d <= cap).then(|| (*e, c.clone()))
            }),
        )
    }

    /// Exact division: returns `Some(q)` with `self = q * d` when the
    /// division leaves no remainder, `None` otherwise. Coefficients must be
    /// invertible where needed (always true over a field).
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (lead_e, lead_c) = d.leading_term()?;
        let lead_inv = lead_c.try_inv()?;
        let lead_e = *lead_e;
        let mut rem = self.clone();
        let mut q = MultiPoly::zero(self.unit.clone());
        while let Some((re, rc)) = rem.leading_term() {
            let mut qe = [0u16; 4];
            for i in 0..4 {
                if re[i] < lead_e[i] {
                    return None;
                }
                qe[i] = re[i] - lead_e[i];
            }
            let qc = rc.mul(&lead_inv);
            let piece = MultiPoly::monomial(qc, qe);
            rem = rem.sub(&piece.mul(d));
            q = q.add(&piece);
        }
        Some(q)
    }

    /// Map coefficients through a fallible function, dropping zeros.
    pub fn try_map_coeffs<D: Coeff, E>(
        &self,
        unit: D,
        mut f: impl FnMut(&C) -> Result<D, E>,
    ) -> Result<MultiPoly<D>, E> {
        let mut r = MultiPoly::zero(unit);
        for (e, c) in &self.terms {
            r.add_term(*e, f(c)?);
        }
        Ok(r)
    }

    /// View as univariate in `var`; fails if any other variable occurs.
    pub fn as_univariate(&self, var: usize) -> Option<UniPoly<C>> {
        let mut coeffs = vec![self.unit.zero_like(); self.degree_in(var).unwrap_or(0) as usize + 1];
        for (e, c) in &self.terms {
            for (i, &exp) in e.iter().enumerate() {
                if i != var && exp != 0 {
                    return None;
                }
            }
            coeffs[e[var] as usize] = c.clone();
        }
        Some(UniPoly::new(self.unit.clone(), coeffs))
    }

    /// Embed a univariate polynomial as a `MultiPoly` in `var`.
    pub fn from_univariate(u: &UniPoly<C>, var: usize) -> Self {
        MultiPoly::from_terms(
            u.unit().clone(),
            u.coeffs().iter().enumerate().map(|(i, c)| {
                let mut e = [0u16; 4];
                e[var] = i as u16;
                (e, c.clone())
            }),
        )
    }
}

impl<C: Coeff> fmt::Display for MultiPoly<C> {
    /// Deterministic rendering in descending lex order. A plain negative
    /// coefficient such as `-5` or `-1/2` folds its sign into the separator;
    /// compound coefficients like `-5+sqrt(7)` or `3+2t` are parenthesised.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let cs = c.to_string();
            let foldable = cs.starts_with('-') && !cs[1..].contains(['+', '-']);
            let (neg, mag) =
                if foldable { (true, cs[1..].to_string()) } else { (false, cs) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = e.iter().all(|&x| x == 0);
            let compound = mag.contains(['+', '-']);
            let mut wrote = false;
            if is_const || mag != "1" {
                if compound {
                    write!(f, "({mag})")?;
                } else {
                    write!(f, "{mag}")?;
                }
                wrote = true;
            }
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                wrote = true;
                if exp == 1 {
                    write!(f, "{}", VAR_NAMES[i])?;
                } else {
                    write!(f, "{}^{}", VAR_NAMES[i], exp)?;
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Polynomials form a coefficient ring themselves (inverses exist only for
/// invertible constants), so `UniPoly<MultiPoly<C>>` models a polynomial in
/// an auxiliary parameter whose coefficients are forms in `x, y, z, w`.
impl<C: Coeff> Coeff for MultiPoly<C> {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.unit.clone())
    }
    fn one_like(&self) -> Self {
        MultiPoly::constant(self.unit.clone())
    }
    fn add(&self, o: &Self) -> Self {
        MultiPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        MultiPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        MultiPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        MultiPoly::neg(self)
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        if self.total_degree() == Some(0) {
            self.coeff([0; 4]).try_inv().map(MultiPoly::constant)
        } else {
            None
        }
    }
    fn int_like(&self, n: i64) -> Self {
        MultiPoly::constant(self.unit.int_like(n))
    }
    fn div_exact_coeff(&self, d: &Self) -> Option<Self> {
        self.div_exact(d)
    }
}

impl<'a, C: Coeff> std::ops::Add for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, o: &'a MultiPoly<C>) -> MultiPoly<C> {
        MultiPoly::add(self, o)
    }
}

impl<'a, C: Coeff> std::ops::Sub for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, o: &'a MultiPoly<C>) -> MultiPoly<C> {
        MultiPoly::sub(self, o)
    }
}

impl<'a, C: Coeff> std::ops::Mul for &'a MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, o: &'a MultiPoly<C>) -> MultiPoly<C> {
        MultiPoly::mul(self, o)
    }
}

impl<C: Coeff> std::ops::Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        MultiPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Fq};

    fn f13() -> FieldSpec {
        FieldSpec::make(13, 1).unwrap()
    }

    fn xyzw(f: FieldSpec) -> [MultiPoly<Fq>; 4] {
        [0, 1, 2, 3].map(|v| MultiPoly::variable(f.one(), v))
    }

    #[test]
    fn ring_identities() {
        let f = f13();
        let [x, y, _, _] = xyzw(f);
        let a = &x.scale(&f.elem(3)) + &y.pow(2);
        let b = &x - &MultiPoly::constant(f.elem(5));
        assert_eq!(&a + &b, &b + &a);
        assert_eq!(&a * &b, &b * &a);
        assert_eq!((&a - &a), MultiPoly::zero(f.one()));
        assert_eq!(&a * &(&b + &b), &(&a * &b) + &(&a * &b));
        assert!((-&a).add(&a).is_zero());
    }

    #[test]
    fn difference_of_squares_divides() {
        let f = f13();
        let [x, y, _, _] = xyzw(f);
        let prod = &(&x + &y) * &(&x - &y);
        assert_eq!(prod.div_exact(&(&x + &y)), Some(&x - &y));
        assert_eq!(prod.div_exact(&(&x - &y)), Some(&x + &y));
        // x^2 + y^2 is not divisible by x + y over F_13 (i = 5 gives roots,
        // but x + y itself is not a factor: check remainder path)
        let sum_sq = &x.pow(2) + &y.pow(2);
        assert_eq!(sum_sq.div_exact(&(&x + &y)), None);
    }

    #[test]
    fn degrees_and_homogeneity() {
        let f = f13();
        let [x, y, z, w] = xyzw(f);
        let q = &(&x * &y) + &(&z * &w);
        assert_eq!(q.total_degree(), Some(2));
        assert!(q.is_homogeneous());
        let mixed = &q + &x;
        assert!(!mixed.is_homogeneous());
        assert_eq!(mixed.degree_in(X), Some(1));
        assert_eq!(q.degree_in(W), Some(1));
        assert!(MultiPoly::zero(f.one()).is_homogeneous());
    }

    #[test]
    fn derivative_and_euler_relation() {
        let f = f13();
        let [x, y, z, w] = xyzw(f);
        // Euler: sum x_i dS/dx_i = deg * S for homogeneous S
        let s = &(&x.pow(4) + &(&y.pow(3) * &z)) + &(&(&z * &w) * &(&x * &y));
        let mut acc = MultiPoly::zero(f.one());
        for (v, poly) in [&x, &y, &z, &w].into_iter().enumerate() {
            acc = acc.add(&poly.mul(&s.derivative(v)));
        }
        assert_eq!(acc, s.scale(&f.elem(4)));
    }

    #[test]
    fn eval_matches_term_sum() {
        let f = f13();
        let [x, y, z, w] = xyzw(f);
        let s = &(&x.pow(2) * &y) - &(&z.pow(3) + &w);
        let pt = [f.elem(2), f.elem(3), f.elem(5), f.elem(7)];
        // 4*3 - (125 + 7) = 12 - 132 = -120 = -120 + 130 = 10 mod 13
        assert_eq!(s.eval(&pt), f.elem(10));
    }

    #[test]
    fn substitution_and_linear_composition() {
        let f = f13();
        let [x, y, z, _] = xyzw(f);
        let s = &x.pow(2) + &(&y * &z);
        // x := y + z gives (y + z)^2 + yz = y^2 + 3yz + z^2
        let subst = s.substitute(X, &(&y + &z));
        let expect = &(&y.pow(2) + &z.pow(2)) + &(&y * &z).scale(&f.elem(3));
        assert_eq!(subst, expect);
        // swap x and y via a matrix
        let o = f.one();
        let zr = f.zero();
        let m = [[zr, o, zr, zr], [o, zr, zr, zr], [zr, zr, o, zr], [zr, zr, zr, o]];
        let swapped = s.compose_linear(&m);
        assert_eq!(swapped, &y.pow(2) + &(&x * &z));
    }

    #[test]
    fn composition_is_multiplicative_in_the_matrix() {
        let f = f13();
        let o = f.one();
        let zr = f.zero();
        let s = {
            let [x, y, z, w] = xyzw(f);
            &(&x.pow(2) * &w.pow(2)) + &(&y.pow(3) * &z)
        };
        // m1: shear x += 2z, m2: swap z, w
        let m1 = [
            [o, zr, f.elem(2), zr],
            [zr, o, zr, zr],
            [zr, zr, o, zr],
            [zr, zr, zr, o],
        ];
        let m2 = [[o, zr, zr, zr], [zr, o, zr, zr], [zr, zr, zr, o], [zr, zr, o, zr]];
        // matrix product m1*m2 acting first by m2 on coordinates
        let mut prod = [[zr; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = zr;
                for (k, row) in m2.iter().enumerate() {
                    acc = acc.add(&m1[i][k].mul(&row[j]));
                }
                prod[i][j] = acc;
            }
        }
        assert_eq!(s.compose_linear(&prod), s.compose_linear(&m1).compose_linear(&m2));
    }

    #[test]
    fn graded_parts_reassemble() {
        let f = f13();
        let [x, y, z, w] = xyzw(f);
        let s = &(&(&x.pow(2) * &y) + &(&x * &(&z * &w))) + &w.pow(3);
        let parts = s.parts_by_degree_in(X);
        let mut back = MultiPoly::zero(f.one());
        for (d, part) in parts.iter().enumerate() {
            let mut e = [0u16; 4];
            e[X] = d as u16;
            back = back.add(&part.mul_monomial(e));
        }
        assert_eq!(back, s);
        let tparts = s.parts_by_total_degree();
        assert_eq!(tparts.len(), 4);
        assert_eq!(tparts.iter().fold(MultiPoly::zero(f.one()), |a, p| a.add(p)), s);
    }

    #[test]
    fn univariate_round_trip() {
        let f = f13();
        let [_, _, z, _] = xyzw(f);
        let p = &(&z.pow(3) - &z.scale(&f.elem(4))) + &MultiPoly::constant(f.elem(6));
        let u = p.as_univariate(Z).unwrap();
        assert_eq!(u.degree(), Some(3));
        assert_eq!(MultiPoly::from_univariate(&u, Z), p);
        let [x, ..] = xyzw(f);
        assert!((&p + &x).as_univariate(Z).is_none());
    }

    #[test]
    fn display_is_readable() {
        let f = f13();
        let [x, y, _, w] = xyzw(f);
        let p = &(&x.pow(2) * &y).scale(&f.elem(3)) - &w;
        assert_eq!(p.to_string(), "3*x^2*y + 12*w");
        assert_eq!(MultiPoly::<Fq>::zero(f.one()).to_string(), "0");
        assert_eq!(MultiPoly::constant(f.elem(1)).to_string(), "1");
    }
}
