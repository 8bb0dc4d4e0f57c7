//! Certificate-style upper bounds for line configurations.
//!
//! Each construction here turns one of the elimination arguments behind the
//! line-count bounds into a finite, mechanically checkable certificate over
//! the same field used for enumeration:
//!
//! * [`residual_cubic_pencil`] sweeps the pencil of planes through the line
//!   `{x = z = 0}` of a zero-cubic normal form. Every plane cuts out that
//!   line plus a residual cubic; the cubic's tangent line at its second
//!   intersection with `{x = z = 0}` lies on the surface exactly at the
//!   common roots of two polynomials `b3, b4` in the pencil parameter, so
//!   the certificate bounds the lines meeting `{x = z = 0}` away from the
//!   double point by `deg gcd(b3, b4) <= 4`.
//! * [`principal_resultant`] eliminates the parameter from the tangent and
//!   polar forms along a parametrised curve on the surface. Any surface
//!   line meeting the curve lies inside both forms at the meeting
//!   parameter, hence inside the zero locus of the resultant; the
//!   certificate records the resultant, its maximal monomial factor, the
//!   monomial-free quotient and a degree bound.
//! * [`double_line_hessian_pencil`] handles surfaces that are singular
//!   along the whole line `{x = y = 0}`: each plane `y = lambda x` through
//!   the line leaves a residual quadratic form, and the pencil of its
//!   discriminants (a polynomial of degree at most 8 in `lambda`) controls
//!   which planes contribute lines meeting the singular line.

use thiserror::Error;

use crate::enumerate::CurveParam;
use crate::field::{Coeff, Fq};
use crate::geom::ProjLine;
use crate::poly::{
    bareiss_det, compose_on_curve, hessian_matrix_in, polar_form, sylvester_resultant,
    tangent_form, MultiPoly, UniPoly, W, X, Y, Z,
};
use crate::surface::{extract_normal_form, NormalShape};

/// Failure modes of the certificate constructions.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    /// The surface is not in the shape the certificate needs (zero-cubic
    /// normal form for the pencil, double along `{x = y = 0}` for the
    /// discriminant pencil).
    #[error("the surface is not in the shape required by this certificate")]
    WrongShape,
    /// The pencil line `{x = z = 0}` does not lie on the surface, i.e. the
    /// coefficient of `y^4` is nonzero.
    #[error("the line x = z = 0 does not lie on the surface")]
    LineMissing,
    /// The parametrised curve does not lie on the surface.
    #[error("the parametrised curve does not lie on the surface")]
    CurveNotOnSurface,
    /// The curve offers no usable tangent data: its tangent form vanishes
    /// identically, or at all but finitely many parameters.
    #[error("the curve is degenerate for elimination: too few smooth tangent samples")]
    DegenerateCurve,
    /// The eliminated resultant vanishes identically, so it bounds nothing.
    #[error("the eliminated resultant vanishes identically")]
    ZeroResultant,
}

/// Subcase analysis returned instead of a tangent-line pencil when the
/// `y^2`-coefficient `q02` of the normal form vanishes. In that case the
/// residual cubic meets `{x = z = 0}` only at the double point, so no
/// moving second intersection exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegenerateAnalysis {
    /// `h031 = h130 = 0`: the surface is singular along `{x = z = 0}`
    /// itself, so the double point is not isolated.
    SingularAlongLine,
    /// `h130 = 0`, `h031 != 0`: in every plane of the pencil the residual
    /// cubic meets `{x = z = 0}` only at the double point, so every line
    /// meeting `{x = z = 0}` passes through the double point.
    AllThroughDoublePoint,
    /// `h130 != 0`: as above except in the single plane `x = lambda0 z`,
    /// which may carry up to two further lines.
    ExceptionalPlane { lambda0: Fq },
}

/// Outcome of [`residual_cubic_pencil`].
///
/// In the main case (`q02 != 0`, `degenerate` is `None`) the plane
/// `x = lambda z` meets the surface in `{x = z = 0}` plus a cubic; the
/// cubic's second intersection with `{x = z = 0}` is `(0 : 1 : 0 :
/// mu(lambda))` and the tangent line there is `w = mu y + nu z` inside the
/// plane. Restricting the cubic to that tangent line leaves
/// `z^2 (b3(lambda) y + b4(lambda) z)`, so the tangent line lies on the
/// surface exactly at the common roots of `b3` and `b4`.
#[derive(Debug, Clone)]
pub struct PencilCertificate {
    /// Coefficient of `y` after the double contact; degree at most 3.
    pub b3: UniPoly<Fq>,
    /// Coefficient of `z` after the double contact; degree at most 4.
    pub b4: UniPoly<Fq>,
    /// Field elements where `b3` and `b4` vanish simultaneously: the pencil
    /// parameters whose tangent line lies on the surface.
    pub common_roots: Vec<Fq>,
    /// `w`-coordinate of the moving second intersection point.
    pub mu: UniPoly<Fq>,
    /// `z`-slope of the moving tangent line.
    pub nu: UniPoly<Fq>,
    /// Set when `q02 = 0` and the tangent-line construction does not
    /// apply; `b3`, `b4`, `mu`, `nu` are zero in that case.
    pub degenerate: Option<DegenerateAnalysis>,
}

impl PencilCertificate {
    /// Reconstruct the moving tangent line at pencil parameter `lambda`:
    /// the span of `(0 : 1 : 0 : mu(lambda))` and `(lambda : 0 : 1 :
    /// nu(lambda))` inside the plane `x = lambda z`. It lies on the surface
    /// exactly when `lambda` is a common root of `b3` and `b4`.
    ///
    /// Returns `None` for degenerate certificates.
    pub fn tangent_line(&self, lambda: Fq) -> Option<ProjLine> {
        if self.degenerate.is_some() {
            return None;
        }
        let field = lambda.field();
        let m = self.mu.eval(&lambda);
        let n = self.nu.eval(&lambda);
        ProjLine::from_spanning(
            [field.zero(), field.one(), field.zero(), m],
            [lambda, field.zero(), field.one(), n],
        )
    }
}

/// Sweep the pencil of planes through `{x = z = 0}` of a surface in
/// zero-cubic normal form and certify which planes carry a line meeting
/// that line away from the double point.
///
/// Requires the surface to be written in the normal shape
/// `w^2 z^2 + w z Q2(x, y) + H4(x, y, z)` ([`BoundsError::WrongShape`]
/// otherwise) with `h040 = 0`, i.e. `{x = z = 0}` on the surface
/// ([`BoundsError::LineMissing`] otherwise). When `q02 = 0` the moving
/// intersection point degenerates and the certificate instead reports the
/// applicable [`DegenerateAnalysis`] subcase.
pub fn residual_cubic_pencil(s: &MultiPoly<Fq>) -> Result<PencilCertificate, BoundsError> {
    let nf = extract_normal_form(s).map_err(|_| BoundsError::WrongShape)?;
    if nf.shape != NormalShape::ZeroCubic {
        return Err(BoundsError::WrongShape);
    }
    let field = s.unit().field();
    if !nf.h(0, 4, 0).is_zero() {
        return Err(BoundsError::LineMissing);
    }
    let h031 = nf.h(0, 3, 1);
    let h130 = nf.h(1, 3, 0);
    if nf.q02.is_zero() {
        // The section of the cubic by {x = z = 0} collapses to
        // (h031 + lambda h130) y^3: no second intersection point moves
        // along the line, so report which subcase applies instead.
        let analysis = if h130.is_zero() && h031.is_zero() {
            DegenerateAnalysis::SingularAlongLine
        } else if h130.is_zero() {
            DegenerateAnalysis::AllThroughDoublePoint
        } else {
            DegenerateAnalysis::ExceptionalPlane { lambda0: h031.neg().mul(&h130.inv()) }
        };
        let zero = UniPoly::zero(field.one());
        return Ok(PencilCertificate {
            b3: zero.clone(),
            b4: zero.clone(),
            common_roots: Vec::new(),
            mu: zero.clone(),
            nu: zero,
            degenerate: Some(analysis),
        });
    }

    // Substituting x := lambda z restricts to the plane x = lambda z; the
    // x exponent slot holds the pencil parameter afterwards. The section
    // contains {x = z = 0}, so dividing by z leaves the residual cubic
    // C_lambda in (y, z, w) with coefficients in F[lambda].
    let xz = MultiPoly::monomial(field.one(), [1, 0, 1, 0]);
    let z1 = MultiPoly::monomial(field.one(), [0, 0, 1, 0]);
    let cubic = s
        .substitute(X, &xz)
        .div_exact(&z1)
        .expect("a pencil-plane section is divisible by z when h040 = 0");

    // On {x = z = 0} the cubic is y^2 (q02 w + (h031 + lambda h130) y):
    // besides the double point it meets the line at (0 : 1 : 0 : mu).
    let q02_inv = nf.q02.inv();
    let mu = UniPoly::new(
        field.one(),
        vec![h031.neg().mul(&q02_inv), h130.neg().mul(&q02_inv)],
    );
    // The w-gradient of the cubic at that point is the constant q02, so
    // the tangent line there is w = mu y + nu z with nu polynomial.
    let nu = eval_at_moving_point(&cubic.derivative(Z), &mu).scale(&q02_inv.neg());

    // Restrict the cubic to its tangent line, parametrised by (y : z). The
    // double contact at the moving point forces divisibility by z^2; what
    // remains is linear in (y, z).
    let wsub = MultiPoly::from_univariate(&mu, X)
        .mul(&MultiPoly::variable(field.one(), Y))
        .add(&MultiPoly::from_univariate(&nu, X).mul(&MultiPoly::variable(field.one(), Z)));
    let z2 = MultiPoly::monomial(field.one(), [0, 0, 2, 0]);
    let lin = cubic
        .substitute(W, &wsub)
        .div_exact(&z2)
        .expect("the residual cubic meets its tangent line doubly at the moving point");

    let mut b3 = vec![field.zero(); 4];
    let mut b4 = vec![field.zero(); 5];
    for (e, c) in lin.terms() {
        assert_eq!(e[Y] + e[Z], 1, "the residual after double contact is linear in (y, z)");
        assert_eq!(e[W], 0, "the tangent substitution eliminates w");
        if e[Y] == 1 {
            assert!(e[X] <= 3, "b3 has degree at most 3");
            b3[e[X] as usize] = *c;
        } else {
            assert!(e[X] <= 4, "b4 has degree at most 4");
            b4[e[X] as usize] = *c;
        }
    }
    let b3 = UniPoly::new(field.one(), b3);
    let b4 = UniPoly::new(field.one(), b4);
    let common_roots: Vec<Fq> = field
        .elements()
        .filter(|t| b3.eval(t).is_zero() && b4.eval(t).is_zero())
        .collect();
    Ok(PencilCertificate { b3, b4, common_roots, mu, nu, degenerate: None })
}

/// Evaluate a polynomial in the pencil parameter (the `x` slot) and
/// `y, z, w` at the moving point `(y, z, w) = (1, 0, mu(lambda))`.
fn eval_at_moving_point(p: &MultiPoly<Fq>, mu: &UniPoly<Fq>) -> UniPoly<Fq> {
    let field = p.unit().field();
    let msub = MultiPoly::from_univariate(mu, X);
    p.substitute(W, &msub)
        .substitute(Y, &MultiPoly::constant(field.one()))
        .substitute(Z, &MultiPoly::zero(field.one()))
        .as_univariate(X)
        .expect("only the pencil parameter survives the substitution")
}

/// Outcome of [`principal_resultant`].
///
/// Every surface line meeting the generating curve lies in the zero locus
/// of `resultant`; lines away from the coordinate locus of
/// `monomial_divisor` lie in the zero locus of `quotient`.
#[derive(Debug, Clone)]
pub struct ResultantCertificate {
    /// Resultant of the (possibly parameter-stripped) tangent form and the
    /// polar form along the curve; a homogeneous polynomial in `x, y, z, w`.
    pub resultant: MultiPoly<Fq>,
    /// Exponents of the maximal monomial dividing the resultant.
    pub monomial_divisor: [u16; 4],
    /// `resultant` divided by its monomial content (exact by construction).
    pub quotient: MultiPoly<Fq>,
    /// Total degree of the resultant.
    pub degree: usize,
    /// Certified bound: `deg_t(polar) + 2 deg_t(tangent)` for the forms
    /// that entered the elimination. Always `degree <= degree_bound`.
    pub degree_bound: usize,
    /// Number of parameter powers removed from the tangent form before
    /// elimination (`1` when the curve crosses the singular locus at the
    /// parameter origin, `0` otherwise).
    pub stripped_t_power: usize,
    /// Whether at three sampled parameters the tangent plane properly cuts
    /// the polar quadric. A failed sample leaves the divisibility and
    /// degree data intact but marks the certificate inconclusive.
    pub nondegenerate: bool,
}

/// Eliminate the curve parameter from the tangent and polar forms of the
/// surface along a parametrised curve that lies on it.
///
/// At a parameter `t` where a surface line meets the curve, the line lies
/// in the tangent plane and inside the polar quadric of the meeting point,
/// so the two forms share the root `t` along the whole line and their
/// resultant vanishes there. The certificate records the resultant, its
/// monomial content (exact division only), the quotient and the degree
/// bound from the elimination matrix.
///
/// Fails with [`BoundsError::CurveNotOnSurface`] when the curve is not
/// contained in the surface, [`BoundsError::DegenerateCurve`] when the
/// tangent form vanishes identically or fewer than three parameters give a
/// usable sample, and [`BoundsError::ZeroResultant`] when the eliminated
/// polynomial is identically zero.
pub fn principal_resultant(
    s: &MultiPoly<Fq>,
    curve: &CurveParam,
) -> Result<ResultantCertificate, BoundsError> {
    if !curve.lies_on(s) {
        return Err(BoundsError::CurveNotOnSurface);
    }
    let field = s.unit().field();
    let l_form = tangent_form(s, curve.map());
    if l_form.is_zero() {
        return Err(BoundsError::DegenerateCurve);
    }
    // A parametrisation crossing the singular locus at t = 0 has a tangent
    // form divisible by t. Exactly one factor is removed: that keeps the
    // elimination nontrivial while the polar factor at t = 0 stays in the
    // resultant (it carries the divisibility the certificate reports).
    let stripped_t_power = match l_form.valuation_at_zero() {
        Some(v) if v > 0 => 1,
        _ => 0,
    };
    let l_red = if stripped_t_power == 1 {
        UniPoly::new(l_form.unit().clone(), l_form.coeffs()[1..].to_vec())
    } else {
        l_form.clone()
    };
    let q_form = polar_form(s, curve.map());
    let resultant = sylvester_resultant(&l_red, &q_form);
    if resultant.is_zero() {
        return Err(BoundsError::ZeroResultant);
    }
    let d_l = l_red.degree().expect("the stripped tangent form is nonzero");
    let d_q = q_form.degree().expect("a zero polar form forces a zero resultant");
    let degree_bound = d_q + 2 * d_l;
    let degree = resultant.total_degree().expect("the resultant is nonzero") as usize;
    assert!(degree <= degree_bound, "elimination degree exceeds its certificate bound");

    let monomial_divisor = resultant.min_exponents().expect("the resultant is nonzero");
    let quotient = resultant
        .div_exact(&MultiPoly::monomial(field.one(), monomial_divisor))
        .expect("a polynomial is divisible by its monomial content");

    // Sample three parameters with a nonzero tangent form and test whether
    // the tangent plane lies inside the polar quadric (i.e. divides it):
    // a failed sample downgrades the certificate to inconclusive.
    let mut samples = 0usize;
    let mut nondegenerate = true;
    for t in field.elements() {
        if samples == 3 {
            break;
        }
        let tc = MultiPoly::constant(t);
        let lt = l_form.eval(&tc);
        if lt.is_zero() {
            continue;
        }
        samples += 1;
        if q_form.eval(&tc).div_exact(&lt).is_some() {
            nondegenerate = false;
        }
    }
    if samples < 3 {
        return Err(BoundsError::DegenerateCurve);
    }
    Ok(ResultantCertificate {
        resultant,
        monomial_divisor,
        quotient,
        degree,
        degree_bound,
        stripped_t_power,
        nondegenerate,
    })
}

/// Discriminant pencil of a surface that is double along `{x = y = 0}`.
///
/// Substituting `y := lambda x` restricts to the plane `y = lambda x`
/// through the singular line; the section is divisible by `x^2` and the
/// quotient is a quadratic form in `(x, z, w)` with coefficients in
/// `F[lambda]`. The returned polynomial is the determinant of its Hessian
/// matrix — the discriminant of the residual conic — and has degree at
/// most 8 in `lambda`. Planes whose residual conic splits into lines are
/// located among the roots, so distinct roots bound the planes
/// contributing lines that meet the singular line.
///
/// Fails with [`BoundsError::WrongShape`] unless the input is a
/// homogeneous quartic lying in the square of the ideal of `{x = y = 0}`
/// (every monomial has `x`- plus `y`-degree at least 2).
pub fn double_line_hessian_pencil<C: Coeff>(s: &MultiPoly<C>) -> Result<UniPoly<C>, BoundsError> {
    if s.total_degree() != Some(4) || !s.is_homogeneous() {
        return Err(BoundsError::WrongShape);
    }
    if s.terms().any(|(e, _)| e[X] + e[Y] < 2) {
        return Err(BoundsError::WrongShape);
    }
    let unit = s.unit().clone();
    // The y slot holds the pencil parameter after the substitution.
    let xy = MultiPoly::monomial(unit.clone(), [1, 1, 0, 0]);
    let x2 = MultiPoly::monomial(unit.clone(), [2, 0, 0, 0]);
    let residual = s
        .substitute(Y, &xy)
        .div_exact(&x2)
        .expect("a surface double along the line has sections divisible by x^2");
    let hess = hessian_matrix_in(&residual, &[X, Z, W]);
    let pencil = bareiss_det(&hess)
        .as_univariate(Y)
        .expect("the discriminant of the residual conic depends only on the pencil parameter");
    if let Some(d) = pencil.degree() {
        assert!(d <= 8, "the discriminant pencil has degree at most 8");
    }
    Ok(pencil)
}

/// Whether `p` vanishes identically on the line.
pub fn vanishes_on_line(p: &MultiPoly<Fq>, line: &ProjLine) -> bool {
    let field = p.unit().field();
    let [a, b] = line.spanning_rows();
    let m = [
        [a[0], b[0], field.zero(), field.zero()],
        [a[1], b[1], field.zero(), field.zero()],
        [a[2], b[2], field.zero(), field.zero()],
        [a[3], b[3], field.zero(), field.zero()],
    ];
    p.compose_linear(&m).is_zero()
}

/// Whether all four partial derivatives of `p` vanish identically on the
/// line.
pub fn partials_vanish_on_line(p: &MultiPoly<Fq>, line: &ProjLine) -> bool {
    p.gradient().iter().all(|g| vanishes_on_line(g, line))
}

/// Whether `p` vanishes along the parametrised curve, identically in the
/// parameter and at the excluded limit points.
pub fn vanishes_on_curve(p: &MultiPoly<Fq>, curve: &CurveParam) -> bool {
    compose_on_curve(p, curve.map()).is_zero()
        && curve.excluded_points().iter().all(|pt| p.eval(pt.coords()).is_zero())
}

/// Whether all four partial derivatives of `p` vanish along the curve.
pub fn partials_vanish_on_curve(p: &MultiPoly<Fq>, curve: &CurveParam) -> bool {
    p.gradient().iter().all(|g| vanishes_on_curve(g, curve))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{lines_meeting_curve, lines_on_poly, CurveKind};
    use crate::field::{FieldSpec, SurdRational};
    use crate::geom::ProjPoint;
    use crate::poly::parse_poly;
    use std::collections::BTreeSet;

    fn over(field: FieldSpec, src: &str) -> MultiPoly<Fq> {
        parse_poly(src)
            .unwrap()
            .try_map_coeffs(field.one(), |c| field.embed_surd(c))
            .unwrap()
    }

    const TWENTY_LINE_Q4: &str = "w^2*z^2 + w*z*(x+y)^2 + x^3*y + x*y^3 + x^3*z \
        - 3*x^2*z^2 + 4*x*z^3 + 3*x^2*y*z - 6*x*y*z^2 + 3*x*y^2*z + 4*y*z^3 \
        - 3*y^2*z^2 + y^3*z";

    /// `{x = z = 0}` over the given field.
    fn base_line(f: FieldSpec) -> ProjLine {
        let e = |v: [i64; 4]| v.map(|c| f.elem(c));
        ProjLine::from_spanning(e([0, 1, 0, 0]), e([0, 0, 0, 1])).unwrap()
    }

    fn root_indices(roots: &[Fq]) -> BTreeSet<u64> {
        roots.iter().map(Fq::index).collect()
    }

    #[test]
    fn twenty_line_pencil_has_zero_b3_and_a_quartic_b4() {
        for (p, expected_roots) in [(41u64, [4, 15, 28, 39]), (73, [11, 23, 52, 64])] {
            let f = FieldSpec::make(p, 1).unwrap();
            let s = over(f, TWENTY_LINE_Q4);
            let cert = residual_cubic_pencil(&s).unwrap();
            assert!(cert.degenerate.is_none());
            assert!(cert.b3.is_zero(), "b3 vanishes identically for this surface");
            let b4 = UniPoly::new(f.one(), [4i64, -8, 12, -8, 2].map(|c| f.elem(c)).to_vec());
            assert_eq!(cert.b4, b4);
            assert_eq!(root_indices(&cert.common_roots), BTreeSet::from(expected_roots));
        }
    }

    #[test]
    fn pencil_tangent_lines_are_exactly_the_lines_meeting_the_base_line() {
        let f = FieldSpec::make(41, 1).unwrap();
        let s = over(f, TWENTY_LINE_Q4);
        let cert = residual_cubic_pencil(&s).unwrap();
        let l0 = base_line(f);
        let o = ProjPoint::from_ints(f, [0, 0, 0, 1]).unwrap();
        let set = lines_on_poly(&s, "twenty");
        assert_eq!(set.len(), 20);
        let meeting: BTreeSet<ProjLine> = set
            .lines()
            .iter()
            .filter(|l| **l != l0 && l.meets(&l0) && !l.contains(&o))
            .copied()
            .collect();
        let tangents: BTreeSet<ProjLine> = cert
            .common_roots
            .iter()
            .map(|r| cert.tangent_line(*r).unwrap())
            .collect();
        for t in &tangents {
            assert!(vanishes_on_line(&s, t), "a common root certifies a line on the surface");
        }
        assert_eq!(tangents, meeting);
    }

    #[test]
    fn pencil_bounds_an_unfamiliar_zero_cubic_surface() {
        // No frozen numbers here: only the structural guarantees — every
        // common root yields a surface line, and those tangent lines are
        // exactly the lines meeting {x = z = 0} away from the double point.
        let f = FieldSpec::make(13, 1).unwrap();
        let s = over(
            f,
            "w^2*z^2 + w*z*(2*x^2 - x*y + 3*y^2) + x^3*z + x^2*y*z - 2*x*y^2*z + y^3*z + x^4",
        );
        let cert = residual_cubic_pencil(&s).unwrap();
        assert!(cert.degenerate.is_none());
        assert!(cert.common_roots.len() <= 4);
        let l0 = base_line(f);
        let o = ProjPoint::from_ints(f, [0, 0, 0, 1]).unwrap();
        let set = lines_on_poly(&s, "adhoc");
        let meeting: BTreeSet<ProjLine> = set
            .lines()
            .iter()
            .filter(|l| **l != l0 && l.meets(&l0) && !l.contains(&o))
            .copied()
            .collect();
        let tangents: BTreeSet<ProjLine> = cert
            .common_roots
            .iter()
            .map(|r| cert.tangent_line(*r).unwrap())
            .collect();
        for t in &tangents {
            assert!(vanishes_on_line(&s, t));
        }
        assert_eq!(tangents, meeting);
    }

    #[test]
    fn pencil_rejects_wrong_shapes_and_missing_lines() {
        let f = FieldSpec::make(13, 1).unwrap();
        let fermat = over(f, "x^4 + y^4 + z^4 + w^4");
        assert!(matches!(residual_cubic_pencil(&fermat), Err(BoundsError::WrongShape)));
        let no_line = over(f, "w^2*z^2 + w*z*(x+y)^2 + y^4");
        assert!(matches!(residual_cubic_pencil(&no_line), Err(BoundsError::LineMissing)));
    }

    #[test]
    fn degenerate_pencil_reports_all_lines_through_the_double_point() {
        let f = FieldSpec::make(13, 1).unwrap();
        // q02 = 0, h130 = 0, h031 = 1: no plane of the pencil has a moving
        // intersection point, so lines meeting {x = z = 0} run through the
        // double point. Cross-check against a full enumeration.
        let s = over(f, "w^2*z^2 + w*z*x^2 + y^3*z + x^4");
        let cert = residual_cubic_pencil(&s).unwrap();
        assert_eq!(cert.degenerate, Some(DegenerateAnalysis::AllThroughDoublePoint));
        assert!(cert.b3.is_zero() && cert.b4.is_zero());
        assert!(cert.tangent_line(f.zero()).is_none());
        let l0 = base_line(f);
        let o = ProjPoint::from_ints(f, [0, 0, 0, 1]).unwrap();
        for l in lines_on_poly(&s, "degenerate").lines() {
            if *l != l0 && l.meets(&l0) {
                assert!(l.contains(&o), "line meets the base line away from the double point");
            }
        }
    }

    #[test]
    fn degenerate_pencil_isolates_the_exceptional_plane() {
        let f = FieldSpec::make(13, 1).unwrap();
        // q02 = 0, h130 = 1, h031 = 1: the only plane that can carry lines
        // meeting {x = z = 0} away from the double point is x = -z.
        let s = over(f, "w^2*z^2 + w*z*x^2 + x*y^3 + y^3*z + x^4");
        let cert = residual_cubic_pencil(&s).unwrap();
        let lambda0 = f.elem(-1);
        assert_eq!(cert.degenerate, Some(DegenerateAnalysis::ExceptionalPlane { lambda0 }));
        let l0 = base_line(f);
        let o = ProjPoint::from_ints(f, [0, 0, 0, 1]).unwrap();
        for l in lines_on_poly(&s, "exceptional").lines() {
            if *l != l0 && l.meets(&l0) && !l.contains(&o) {
                let in_plane = l
                    .spanning_rows()
                    .iter()
                    .all(|r| r[0].sub(&lambda0.mul(&r[2])).is_zero());
                assert!(in_plane, "stray line outside the exceptional plane x = lambda0 z");
            }
        }
    }

    #[test]
    fn degenerate_pencil_detects_a_singular_base_line() {
        let f = FieldSpec::make(13, 1).unwrap();
        // q02 = h031 = h130 = 0: the gradient vanishes along {x = z = 0}.
        let s = over(f, "w^2*z^2 + w*z*x^2 + x^4 + y^2*z^2");
        let cert = residual_cubic_pencil(&s).unwrap();
        assert_eq!(cert.degenerate, Some(DegenerateAnalysis::SingularAlongLine));
        for pt in [[0i64, 1, 0, 0], [0, 1, 0, 1], [0, 0, 0, 1]] {
            let at = pt.map(|c| f.elem(c));
            for g in s.gradient() {
                assert!(g.eval(&at).is_zero(), "base line point is not singular");
            }
        }
    }

    /// Shared check for the resultant certificates: every enumerated line
    /// meeting the curve at a finite parameter lies in the zero locus of
    /// the resultant, and in the zero locus of the quotient unless it lies
    /// inside the coordinate locus of the monomial divisor. (A line
    /// touching the curve only at an excluded limit point corresponds to a
    /// common root at infinity, which the resultant does not certify.)
    fn check_meeting_lines(s: &MultiPoly<Fq>, curve: &CurveParam, cert: &ResultantCertificate) {
        let field = s.unit().field();
        let finite: Vec<ProjPoint<4>> = field
            .elements()
            .filter_map(|t| ProjPoint::new([0, 1, 2, 3].map(|i| curve.map()[i].eval(&t))))
            .collect();
        let set = lines_on_poly(s, "fixture");
        let meeting = lines_meeting_curve(s, &set, curve).unwrap();
        assert!(meeting.count > 0, "the fixture should have lines meeting the curve");
        for l in &meeting.lines {
            if !finite.iter().any(|p| l.contains(p)) {
                continue;
            }
            assert!(vanishes_on_line(&cert.resultant, l));
            let in_divisor_locus = (0..4).any(|v| {
                cert.monomial_divisor[v] > 0
                    && vanishes_on_line(&MultiPoly::variable(field.one(), v), l)
            });
            if !in_divisor_locus {
                assert!(vanishes_on_line(&cert.quotient, l));
            }
        }
    }

    #[test]
    fn conic_resultant_certificate_for_a_unit_cubic_surface() {
        let f = FieldSpec::make(13, 1).unwrap();
        let s = over(f, "w^2*z^2 + w*y^3 + x^3*z + x^2*y^2 + z^4");
        let one = f.one();
        let map = [
            UniPoly::new(one, vec![f.zero(), one]),
            UniPoly::constant(one),
            UniPoly::zero(one),
            UniPoly::new(one, vec![f.zero(), f.zero(), f.elem(-1)]),
        ];
        let o = ProjPoint::from_ints(f, [0, 0, 0, 1]).unwrap();
        let curve = CurveParam::new(CurveKind::Conic, map, vec![o]).unwrap();
        let cert = principal_resultant(&s, &curve).unwrap();
        assert_eq!(cert.stripped_t_power, 0);
        assert_eq!(cert.monomial_divisor, [0, 0, 2, 0]);
        assert_eq!(cert.degree, 10);
        assert_eq!(cert.degree_bound, 10);
        assert_eq!(cert.quotient.total_degree(), Some(8));
        assert!(cert.nondegenerate);
        // The double line of the z = 0 section and the conic itself sit in
        // the singular locus of the quotient.
        let e = |v: [i64; 4]| v.map(|c| f.elem(c));
        let l0 = ProjLine::from_spanning(e([1, 0, 0, 0]), e([0, 0, 0, 1])).unwrap();
        assert!(vanishes_on_line(&cert.quotient, &l0));
        assert!(partials_vanish_on_line(&cert.quotient, &l0));
        assert!(vanishes_on_curve(&cert.quotient, &curve));
        assert!(partials_vanish_on_curve(&cert.quotient, &curve));
        check_meeting_lines(&s, &curve, &cert);
    }

    #[test]
    fn line_resultant_certificate_has_a_degree_six_quotient() {
        let f = FieldSpec::make(13, 1).unwrap();
        let s = over(f, "w^2*z^2 + w*y^3 + x^3*z + x*y^3 + z^4");
        let one = f.one();
        let map = [
            UniPoly::new(one, vec![f.zero(), one]),
            UniPoly::constant(one),
            UniPoly::zero(one),
            UniPoly::new(one, vec![f.zero(), f.elem(-1)]),
        ];
        let limit = ProjPoint::from_ints(f, [1, 0, 0, -1]).unwrap();
        let curve = CurveParam::new(CurveKind::Line, map, vec![limit]).unwrap();
        let cert = principal_resultant(&s, &curve).unwrap();
        assert_eq!(cert.stripped_t_power, 0);
        assert_eq!(cert.monomial_divisor, [0, 0, 2, 0]);
        assert_eq!(cert.degree, 8);
        assert_eq!(cert.degree_bound, 8);
        assert_eq!(cert.quotient.total_degree(), Some(6));
        // At t = 0 the tangent plane lies inside the polar quadric, so the
        // sampled nondegeneracy check honestly reports inconclusive.
        assert!(!cert.nondegenerate);
        let e = |v: [i64; 4]| v.map(|c| f.elem(c));
        let l0 = ProjLine::from_spanning(e([1, 0, 0, 0]), e([0, 0, 0, 1])).unwrap();
        assert!(vanishes_on_curve(&cert.quotient, &curve));
        assert!(partials_vanish_on_curve(&cert.quotient, &curve));
        assert!(vanishes_on_line(&cert.quotient, &l0));
        assert!(!partials_vanish_on_line(&cert.quotient, &l0));
        check_meeting_lines(&s, &curve, &cert);
    }

    #[test]
    fn transversal_conic_on_a_double_line_surface_strips_one_power() {
        let f = FieldSpec::make(13, 1).unwrap();
        let s = over(f, "y^4 - y^2*z*w + x^2*z^2 + x^2*w^2 + x^4 + x*y*z*w");
        let one = f.one();
        // (0 : t : 1 : t^2) passes through (0:0:1:0) on the singular line
        // {x = y = 0} at t = 0, so the tangent form is divisible by t.
        let map = [
            UniPoly::zero(one),
            UniPoly::new(one, vec![f.zero(), one]),
            UniPoly::constant(one),
            UniPoly::new(one, vec![f.zero(), f.zero(), one]),
        ];
        let o = ProjPoint::from_ints(f, [0, 0, 0, 1]).unwrap();
        let curve = CurveParam::new(CurveKind::Conic, map, vec![o]).unwrap();
        let cert = principal_resultant(&s, &curve).unwrap();
        assert_eq!(cert.stripped_t_power, 1);
        assert_eq!(cert.monomial_divisor, [2, 0, 0, 0]);
        assert_eq!(cert.degree, 10);
        assert!(cert.degree <= 12);
        assert_eq!(cert.degree_bound, 10);
        assert_eq!(cert.quotient.total_degree(), Some(8));
        assert!(cert.nondegenerate);
        assert!(vanishes_on_curve(&cert.quotient, &curve));
        assert!(partials_vanish_on_curve(&cert.quotient, &curve));
        check_meeting_lines(&s, &curve, &cert);
    }

    #[test]
    fn resultant_rejects_curves_off_the_surface() {
        let f = FieldSpec::make(13, 1).unwrap();
        let s = over(f, "x^4 + y^4 + z^4 + w^4");
        let one = f.one();
        let map = [
            UniPoly::new(one, vec![f.zero(), one]),
            UniPoly::constant(one),
            UniPoly::zero(one),
            UniPoly::zero(one),
        ];
        let limit = ProjPoint::from_ints(f, [1, 0, 0, 0]).unwrap();
        let curve = CurveParam::new(CurveKind::Line, map, vec![limit]).unwrap();
        assert!(matches!(
            principal_resultant(&s, &curve),
            Err(BoundsError::CurveNotOnSurface)
        ));
    }

    const TWENTY_SEVEN: &str = "x^2*(w*z + y*w + y*z - 10/3*x*y - 4*y^2) \
        + x*y*z*(w + z) \
        + y^2*(1/2*w^2 + 1/4*w*z + 1/2*z^2 + x*w + 3*x*z + 5/4*y*w + 5/4*y*z - 1/2*x*y)";

    #[test]
    fn hessian_pencil_of_the_twenty_seven_line_surface() {
        // Exact rational arithmetic first: the discriminant pencil times 96
        // has the integer coefficient vector below (ascending powers).
        let s = parse_poly(TWENTY_SEVEN).unwrap();
        let pencil = double_line_hessian_pencil(&s).unwrap();
        let unit = SurdRational::from_int(1);
        let expected = UniPoly::new(
            unit.clone(),
            [0i64, 640, 2240, 3360, 1680, -840, -1260, -810, -225]
                .map(SurdRational::from_int)
                .to_vec(),
        );
        assert_eq!(pencil.scale(&SurdRational::from_int(96)), expected);

        // The same construction over the two report fields. The root count
        // caps the planes through the singular line carrying split conics.
        for (p, roots) in [
            (109u64, [0u64, 15, 25, 44, 48, 55, 73, 107]),
            (223, [0, 10, 76, 84, 166, 182, 194, 221]),
        ] {
            let f = FieldSpec::make(p, 1).unwrap();
            let sp = over(f, TWENTY_SEVEN);
            let pp = double_line_hessian_pencil(&sp).unwrap();
            assert_eq!(pp.degree(), Some(8));
            let got: BTreeSet<u64> =
                pp.roots_with_multiplicity(f).iter().map(|(r, _)| r.index()).collect();
            assert_eq!(got, BTreeSet::from(roots));
        }
    }

    #[test]
    fn hessian_pencil_is_palindromic_for_a_coordinate_swap_symmetry() {
        // With no xy cross quadric and equal x^2/y^2 quadrics the surface
        // is invariant under swapping x and y, which acts on the pencil
        // parameter as lambda -> 1/lambda; the discriminant pencil must be
        // its own degree-8 reversal.
        let f = FieldSpec::make(13, 1).unwrap();
        let s = over(
            f,
            "x^2*z*w + x^2*z^2 + x^2*w^2 + x^3*y + y^2*z*w + y^2*z^2 + y^2*w^2 + x*y^3",
        );
        let pencil = double_line_hessian_pencil(&s).unwrap();
        assert!(!pencil.is_zero());
        assert_eq!(pencil, pencil.reversal(8));
        let expected = UniPoly::new(f.one(), [0i64, 6, 0, 18, 0, 18, 0, 6].map(|c| f.elem(c)).to_vec());
        assert_eq!(pencil, expected);
    }

    #[test]
    fn hessian_pencil_rejects_surfaces_not_double_along_the_line() {
        let f = FieldSpec::make(13, 1).unwrap();
        let fermat = over(f, "x^4 + y^4 + z^4 + w^4");
        assert!(matches!(double_line_hessian_pencil(&fermat), Err(BoundsError::WrongShape)));
        let shallow = over(f, "x^4 + y*z^3");
        assert!(matches!(double_line_hessian_pencil(&shallow), Err(BoundsError::WrongShape)));
    }
}
