//! Forms along a parametrised curve, and Sylvester resultants.
//!
//! For a surface `S` and a curve `t -> P(t)` the two objects of interest are
//! the *tangent form* `sum_i dS/dx_i(P(t)) * x_i` (the pencil of tangent
//! planes along the curve) and the *polar form* `sum_{i,j} d2S/dx_i dx_j
//! (P(t)) * x_i x_j`. Both are polynomials in `t` whose coefficients are
//! forms in `x, y, z, w`, modelled as [`UniPoly`] over [`MultiPoly`].
//! Eliminating `t` with a Sylvester resultant yields a single form that
//! vanishes on every line whose full intersection behaviour with the curve
//! degenerates — the engine behind the degree-bound certificates.

use crate::field::Coeff;
use crate::poly::{bareiss_det_in_ring, MultiPoly, UniPoly};

/// Polynomial in an auxiliary parameter `t` with form coefficients.
pub type ParamForm<C> = UniPoly<MultiPoly<C>>;

/// Substitute a parametrised point into a polynomial:
/// `(s ∘ P)(t)` as a univariate polynomial in `t`.
pub fn compose_on_curve<C: Coeff>(s: &MultiPoly<C>, p: &[UniPoly<C>; 4]) -> UniPoly<C> {
    let unit = s.unit().clone();
    let max_deg: [u16; 4] = {
        let mut md = [0u16; 4];
        for (e, _) in s.terms() {
            for i in 0..4 {
                md[i] = md[i].max(e[i]);
            }
        }
        md
    };
    let pows: Vec<Vec<UniPoly<C>>> = (0..4)
        .map(|i| {
            let mut v = Vec::with_capacity(max_deg[i] as usize + 1);
            v.push(UniPoly::constant(unit.clone()));
            for k in 1..=max_deg[i] as usize {
                let next = v[k - 1].mul(&p[i]);
                v.push(next);
            }
            v
        })
        .collect();
    let mut acc = UniPoly::zero(unit.clone());
    for (e, c) in s.terms() {
        let mut m = UniPoly::constant(c.clone());
        for i in 0..4 {
            if e[i] > 0 {
                m = m.mul(&pows[i][e[i] as usize]);
            }
        }
        acc = acc.add(&m);
    }
    acc
}

/// The tangent form `sum_i dS/dx_i(P(t)) x_i` along a curve.
pub fn tangent_form<C: Coeff>(s: &MultiPoly<C>, p: &[UniPoly<C>; 4]) -> ParamForm<C> {
    let unit = s.unit().clone();
    let mut coeffs: Vec<MultiPoly<C>> = Vec::new();
    for var in 0..4 {
        let u = compose_on_curve(&s.derivative(var), p);
        for (k, c) in u.coeffs().iter().enumerate() {
            while coeffs.len() <= k {
                coeffs.push(MultiPoly::zero(unit.clone()));
            }
            coeffs[k] = coeffs[k].add(&MultiPoly::monomial(c.clone(), single(var)));
        }
    }
    UniPoly::new(MultiPoly::zero(unit), coeffs)
}

/// The polar form `sum_{i,j} d2S/dx_i dx_j(P(t)) x_i x_j` along a curve.
pub fn polar_form<C: Coeff>(s: &MultiPoly<C>, p: &[UniPoly<C>; 4]) -> ParamForm<C> {
    let unit = s.unit().clone();
    let mut coeffs: Vec<MultiPoly<C>> = Vec::new();
    for i in 0..4 {
        let di = s.derivative(i);
        for j in 0..4 {
            let u = compose_on_curve(&di.derivative(j), p);
            let mut e = single(i);
            e[j] += 1;
            for (k, c) in u.coeffs().iter().enumerate() {
                while coeffs.len() <= k {
                    coeffs.push(MultiPoly::zero(unit.clone()));
                }
                coeffs[k] = coeffs[k].add(&MultiPoly::monomial(c.clone(), e));
            }
        }
    }
    UniPoly::new(MultiPoly::zero(unit), coeffs)
}

fn single(var: usize) -> [u16; 4] {
    let mut e = [0u16; 4];
    e[var] = 1;
    e
}

/// Divide out the largest power of `t`, returning the quotient and the
/// exponent removed. The zero polynomial is returned unchanged with 0.
pub fn strip_t_power<C: Coeff>(f: &UniPoly<C>) -> (UniPoly<C>, usize) {
    match f.valuation_at_zero() {
        None | Some(0) => (f.clone(), 0),
        Some(v) => (UniPoly::new(f.unit().clone(), f.coeffs()[v..].to_vec()), v),
    }
}

/// Resultant of two univariate polynomials via the Sylvester matrix,
/// computed fraction-free so it stays exact when the coefficients are
/// themselves polynomials.
///
/// Degenerate cases follow the matrix convention: if either input is zero
/// the resultant is zero; if both are non-zero constants it is 1 (empty
/// matrix).
pub fn sylvester_resultant<C: Coeff>(a: &UniPoly<C>, b: &UniPoly<C>) -> C {
    match (a.degree(), b.degree()) {
        (Some(m), Some(n)) => sylvester_resultant_formal(a, b, m, n),
        _ => a.unit().zero_like(),
    }
}

/// Resultant with respect to *formal* degrees `m >= deg a`, `n >= deg b`:
/// the Sylvester matrix is built as if the leading coefficients up to those
/// degrees were present (as zeros). Unlike the true resultant this commutes
/// with specialising symbolic coefficients even when a specialisation drops
/// the leading term, which is what degree-bound certificates rely on.
pub fn sylvester_resultant_formal<C: Coeff>(
    a: &UniPoly<C>,
    b: &UniPoly<C>,
    m: usize,
    n: usize,
) -> C {
    let unit = a.unit().clone();
    assert!(
        a.degree().is_none_or(|d| d <= m) && b.degree().is_none_or(|d| d <= n),
        "formal degree below actual degree"
    );
    if a.is_zero() || b.is_zero() {
        return unit.zero_like();
    }
    if m + n == 0 {
        return unit;
    }
    let size = m + n;
    let mut rows: Vec<Vec<C>> = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![unit.zero_like(); size];
        for (i, c) in a.coeffs().iter().enumerate() {
            // column for t^(m - i) shifted right by `shift`
            row[shift + (m - i)] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![unit.zero_like(); size];
        for (i, c) in b.coeffs().iter().enumerate() {
            row[shift + (n - i)] = c.clone();
        }
        rows.push(row);
    }
    bareiss_det_in_ring(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Fq};
    use crate::poly::{parse_poly, W, X, Y, Z};

    fn upoly(f: FieldSpec, cs: &[i64]) -> UniPoly<Fq> {
        UniPoly::new(f.one(), cs.iter().map(|&c| f.elem(c)).collect())
    }

    #[test]
    fn twisted_cubic_lies_on_quadric() {
        let f = FieldSpec::make(13, 1).unwrap();
        let s = parse_poly("x*w - y*z")
            .unwrap()
            .try_map_coeffs(f.one(), |c| f.embed_surd(c))
            .unwrap();
        // P(t) = (1 : t : t : t^2)
        let p = [upoly(f, &[1]), upoly(f, &[0, 1]), upoly(f, &[0, 1]), upoly(f, &[0, 0, 1])];
        assert!(compose_on_curve(&s, &p).is_zero());
    }

    #[test]
    fn tangent_form_of_a_quadric() {
        let f = FieldSpec::make(13, 1).unwrap();
        let s = parse_poly("x*w - y*z")
            .unwrap()
            .try_map_coeffs(f.one(), |c| f.embed_surd(c))
            .unwrap();
        let p = [upoly(f, &[1]), upoly(f, &[0, 1]), upoly(f, &[0, 0, 1]), upoly(f, &[0, 0, 0, 1])];
        // dS = (w, -z, -y, x) at (1, t, t^2, t^3):
        // l_t = t^3 x - t^2 y - t z + w
        let l = tangent_form(&s, &p);
        assert_eq!(l.degree(), Some(3));
        let one = f.one();
        assert_eq!(l.coeff(0), MultiPoly::variable(one, W));
        assert_eq!(l.coeff(1), MultiPoly::variable(one, Z).neg());
        assert_eq!(l.coeff(2), MultiPoly::variable(one, Y).neg());
        assert_eq!(l.coeff(3), MultiPoly::variable(one, X));
    }

    #[test]
    fn polar_form_recovers_twice_the_quadric() {
        // for a quadratic form S the polar form is 2*S independent of t
        let f = FieldSpec::make(13, 1).unwrap();
        let s = parse_poly("x*w - y*z + z^2")
            .unwrap()
            .try_map_coeffs(f.one(), |c| f.embed_surd(c))
            .unwrap();
        let p = [upoly(f, &[1]), upoly(f, &[0, 1]), upoly(f, &[2]), upoly(f, &[0, 0, 1])];
        let q = polar_form(&s, &p);
        assert_eq!(q.degree(), Some(0));
        assert_eq!(q.coeff(0), s.scale(&f.elem(2)));
    }

    #[test]
    fn scalar_resultants_match_hand_values() {
        let f = FieldSpec::make(13, 1).unwrap();
        // Res(x - 2, x^2 - 1) = (1 - 2)(-1 - 2) = 3
        let a = upoly(f, &[-2, 1]);
        let b = upoly(f, &[-1, 0, 1]);
        assert_eq!(sylvester_resultant(&a, &b), f.elem(3));
        // shared root kills the resultant
        let c = upoly(f, &[-1, 1]);
        assert_eq!(sylvester_resultant(&c, &b), f.zero());
        // multiplicativity in the first argument
        let g = upoly(f, &[1, 1]);
        let prod = sylvester_resultant(&a.mul(&g), &b);
        let split = sylvester_resultant(&a, &b).mul(&sylvester_resultant(&g, &b));
        assert_eq!(prod, split);
    }

    #[test]
    fn resultant_detects_common_roots_exhaustively() {
        let f = FieldSpec::make(7, 1).unwrap();
        // all monic quadratics vs all monic linears over F_7
        for a0 in 0..7 {
            for a1 in 0..7 {
                let q = upoly(f, &[a0, a1, 1]);
                for r in 0..7 {
                    let l = upoly(f, &[-r, 1]);
                    let res = sylvester_resultant(&l, &q);
                    assert_eq!(res.is_zero(), q.eval(&f.elem(r)).is_zero(), "a0={a0} a1={a1} r={r}");
                }
            }
        }
    }

    #[test]
    fn parametric_resultant_eliminates_t() {
        let f = FieldSpec::make(13, 1).unwrap();
        let x = MultiPoly::variable(f.one(), X);
        let y = MultiPoly::variable(f.one(), Y);
        // a(t) = x - t, b(t) = y - t^2; eliminating t gives y - x^2 up to sign
        let a = UniPoly::new(MultiPoly::zero(f.one()), vec![x.clone(), MultiPoly::constant(f.elem(-1))]);
        let b = UniPoly::new(
            MultiPoly::zero(f.one()),
            vec![y.clone(), MultiPoly::zero(f.one()), MultiPoly::constant(f.elem(-1))],
        );
        let res = sylvester_resultant(&a, &b);
        let expect = &y - &x.pow(2);
        assert!(res == expect || res == expect.neg(), "got {res}");
    }

    #[test]
    fn strip_t_power_works() {
        let f = FieldSpec::make(13, 1).unwrap();
        let p = upoly(f, &[0, 0, 3, 1]);
        let (q, v) = strip_t_power(&p);
        assert_eq!(v, 2);
        assert_eq!(q, upoly(f, &[3, 1]));
        let (same, v0) = strip_t_power(&q);
        assert_eq!((same, v0), (q, 0));
    }
}
