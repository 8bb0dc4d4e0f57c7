//! Singular points of quartic surfaces: locating them, reading off
//! multiplicities and tangent cones, and classifying double points into the
//! simple (ADE) types.
//!
//! The classifier works on truncated power series. A double point is moved
//! to the origin, a transverse direction is rotated onto the `z`-axis, and
//! the equation is split as `(z^2 + a z + b) * unit` by graded Weierstrass
//! division up to a transverse-degree cap. The plane curve `a^2 - 4b = 0`
//! then determines the surface type: its own ADE type as a curve germ equals
//! the surface type of the double point. The curve germ is classified by
//! order, a second Weierstrass split (A series), or the factor structure of
//! the cubic part followed by one blow-up (D and E series). Whenever the cap
//! is too small to decide, the honest answer [`SingularClass::Unresolved`]
//! is returned instead of a guess.

use super::SurfaceError;
use crate::field::{Coeff, FieldSpec, Fq};
use crate::geom::{all_points, ProjLine, ProjPoint};
use crate::poly::{nullspace, MultiPoly, W, X, Y, Z};
use rayon::prelude::*;
use std::collections::BTreeSet;

/// Truncation order used by [`classify_double_point`]: power series are
/// tracked to this transverse degree. Deep `A_n`/`D_n` points with `n`
/// beyond roughly this order come back as `Unresolved`.
pub const DEFAULT_TRUNCATION: u32 = 12;

/// Classification of a singular point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularClass {
    /// Simple type `A_n`, `n >= 1`.
    A(u32),
    /// Simple type `D_n`, `n >= 4`.
    D(u32),
    /// Simple type `E_6`, `E_7` or `E_8`.
    E(u32),
    /// Proven beyond the simple types (for a surface point this is what the
    /// family constructions require at the distinguished point).
    NonSimple,
    /// The truncation order was insufficient to decide.
    Unresolved(u32),
}

impl std::fmt::Display for SingularClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularClass::A(n) => write!(f, "A{n}"),
            SingularClass::D(n) => write!(f, "D{n}"),
            SingularClass::E(n) => write!(f, "E{n}"),
            SingularClass::NonSimple => write!(f, "non-simple"),
            SingularClass::Unresolved(t) => write!(f, "unresolved(cap {t})"),
        }
    }
}

/// One singular point together with its local data.
#[derive(Debug, Clone)]
pub struct SingularRecord {
    pub point: ProjPoint<4>,
    /// Multiplicity of the surface at the point, between 2 and 4.
    pub multiplicity: u32,
    /// Lowest-order part of the equation in an affine chart at the point
    /// (a form in the three local variables `x, y, z`).
    pub tangent_cone: MultiPoly<Fq>,
    /// ADE classification; multiplicity 3 or 4 is always beyond the simple
    /// types, so those points carry [`SingularClass::NonSimple`].
    pub class: SingularClass,
}

/// Witness that the singular locus contains a curve.
#[derive(Debug, Clone)]
pub enum CurveWitness {
    /// A whole line is singular (checked symbolically: every partial
    /// derivative restricts to zero on it).
    Line(ProjLine),
    /// A conic in the given plane accounts for the singular points (checked
    /// on all rational points of the fitted conic).
    Conic { plane: [Fq; 4], quadric: MultiPoly<Fq> },
    /// The points lie on the base locus of a net of quadrics of this
    /// dimension — a space curve such as a twisted cubic.
    SpaceCurve { quadric_dim: usize },
}

/// Result of a full singular-locus scan.
#[derive(Debug, Clone)]
pub struct SingularScan {
    /// All rational singular points, in canonical point order.
    pub records: Vec<SingularRecord>,
    /// Set when the locus is (or strongly appears to be) positive
    /// dimensional; `None` for finitely many rational singular points.
    pub non_isolated: Option<CurveWitness>,
}

impl SingularScan {
    pub fn count(&self) -> usize {
        self.records.len()
    }

    pub fn is_isolated(&self) -> bool {
        self.non_isolated.is_none()
    }
}

/// Invertible change of coordinates moving `p` to `(0:0:0:1)`: the last
/// column is the point itself, the rest are standard basis vectors skipping
/// the pivot coordinate.
pub(crate) fn chart_matrix(p: &ProjPoint<4>) -> [[Fq; 4]; 4] {
    let field = p.field();
    let c = p.coords();
    let pivot = (0..4).find(|&i| !c[i].is_zero()).expect("projective point");
    let mut m = [[field.zero(); 4]; 4];
    let mut col = 0;
    for i in 0..4 {
        if i != pivot {
            m[i][col] = field.one();
            col += 1;
        }
        m[i][3] = c[i];
    }
    m
}

/// Dehomogenised equation in the chart at `p`: apply [`chart_matrix`] and
/// set the last variable to 1. The result lives in the local variables
/// `x, y, z` and vanishes at the origin iff `p` is on the surface.
fn chart_equation(s: &MultiPoly<Fq>, p: &ProjPoint<4>) -> MultiPoly<Fq> {
    let field = p.field();
    let moved = s.compose_linear(&chart_matrix(p));
    moved.substitute(W, &MultiPoly::constant(field.one()))
}

/// Multiplicity of the surface at `p` and the tangent cone there, read from
/// the lowest-order part of the chart equation. Multiplicity 1 means a
/// smooth point, in which case the "cone" is the tangent plane.
pub fn multiplicity_at(
    s: &MultiPoly<Fq>,
    p: &ProjPoint<4>,
) -> Result<(u32, MultiPoly<Fq>), SurfaceError> {
    let f = chart_equation(s, p);
    let parts = f.parts_by_total_degree();
    match parts.iter().position(|part| !part.is_zero()) {
        None => Ok((4, MultiPoly::zero(p.field().one()))),
        Some(0) => Err(SurfaceError::PointNotOnSurface),
        Some(m) => Ok((m as u32, parts[m].clone())),
    }
}

/// Classify a double point of the surface with the default truncation.
pub fn classify_double_point(
    s: &MultiPoly<Fq>,
    p: &ProjPoint<4>,
) -> Result<SingularClass, SurfaceError> {
    classify_double_point_trunc(s, p, DEFAULT_TRUNCATION)
}

/// Classify a double point, tracking power series to transverse degree
/// `cap`. Errors when the multiplicity at `p` is not exactly 2.
pub fn classify_double_point_trunc(
    s: &MultiPoly<Fq>,
    p: &ProjPoint<4>,
    cap: u32,
) -> Result<SingularClass, SurfaceError> {
    let f = chart_equation(s, p);
    let parts = f.parts_by_total_degree();
    let m = parts.iter().position(|part| !part.is_zero());
    match m {
        Some(2) => Ok(classify_chart_double_point(&f, &parts[2], cap)),
        Some(0) => Err(SurfaceError::PointNotOnSurface),
        Some(mult) => Err(SurfaceError::NotDoublePoint(mult as u32)),
        None => Err(SurfaceError::NotDoublePoint(4)),
    }
}

/// Rank of the quadratic form `cone` in the three chart variables. Exposed
/// for the consistency check `A_1 <=> rank 3` (in odd characteristic the
/// symmetric matrix `(d_i d_j cone) / 2` represents the form exactly).
pub fn cone_rank(cone: &MultiPoly<Fq>) -> usize {
    let field = cone.unit().field();
    let half = field.elem(2).inv();
    let mut m = [[field.zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut e = [0u16; 4];
            e[i] += 1;
            e[j] += 1;
            let c = cone.coeff(e);
            m[i][j] = if i == j { c } else { c.mul(&half) };
        }
    }
    // Gaussian elimination on the small symmetric matrix.
    let mut rank = 0;
    for col in 0..3 {
        let Some(pr) = (rank..3).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, pr);
        let inv = m[rank][col].inv();
        for x in m[rank].iter_mut() {
            *x = x.mul(&inv);
        }
        let base = m[rank];
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col];
                for (dst, b) in row.iter_mut().zip(base) {
                    *dst = dst.sub(&f.mul(&b));
                }
            }
        }
        rank += 1;
    }
    rank
}

fn classify_chart_double_point(f: &MultiPoly<Fq>, cone: &MultiPoly<Fq>, cap: u32) -> SingularClass {
    let field = f.unit().field();
    let zero = field.zero();
    // A direction not on the cone always exists: a non-zero quadric has at
    // most 2q+1 rational zeros in P^2, which has q^2+q+1 points.
    let v = all_points::<3>(field)
        .find(|v| {
            let c = v.coords();
            !cone.eval(&[c[0], c[1], c[2], zero]).is_zero()
        })
        .expect("direction off the tangent cone");
    let vc = v.coords();
    let pivot = (0..3).find(|&i| !vc[i].is_zero()).expect("projective point");
    // Rotate: new z-axis along v, the other two slots take the standard
    // vectors complementary to v's pivot; w stays put.
    let mut m = [[field.zero(); 4]; 4];
    let mut col = 0;
    for i in 0..3 {
        if i != pivot {
            m[i][col] = field.one();
            col += 1;
        }
        m[i][2] = vc[i];
    }
    m[3][3] = field.one();
    let rotated = f.compose_linear(&m);
    let lead = rotated.coeff([0, 0, 2, 0]);
    debug_assert!(!lead.is_zero());
    let scaled = rotated.scale(&lead.inv());
    let (a, b) = weierstrass_split(&scaled, Z, &[X, Y], cap as usize);
    let delta = (&a.mul(&a) - &b.scale(&field.elem(4)))
        .truncate_by_degree_in_vars(&[X, Y], cap as usize);
    match classify_plane_germ(&delta, cap) {
        GermClass::Smooth => unreachable!("double-point discriminant has order >= 2"),
        GermClass::A(n) => SingularClass::A(n),
        GermClass::D(n) => SingularClass::D(n),
        GermClass::E(n) => SingularClass::E(n),
        GermClass::NonSimple => SingularClass::NonSimple,
        GermClass::Unresolved(t) => SingularClass::Unresolved(t),
    }
}

/// Graded Weierstrass division: write `f = (main^2 + a*main + b) * U` as
/// power series in the `transverse` variables, where `a`, `b` involve only
/// the transverse variables, tracked up to transverse degree `cap`.
///
/// Requires the pure-`main` part of `f` to be `main^2 * u(main)` with
/// `u(0) = 1` (the caller rotates and scales to arrange this).
fn weierstrass_split(
    f: &MultiPoly<Fq>,
    main: usize,
    transverse: &[usize],
    cap: usize,
) -> (MultiPoly<Fq>, MultiPoly<Fq>) {
    let unit = *f.unit();
    let mut main2 = [0u16; 4];
    main2[main] = 2;
    let main2 = MultiPoly::monomial(unit, main2);
    let main_var = MultiPoly::variable(unit, main);

    let mut parts = f.parts_by_degree_in_vars(transverse);
    parts.resize(cap + 1, MultiPoly::zero(unit));
    let u0 = parts[0].div_exact(&main2).expect("pure part is main^2 * unit series");
    debug_assert!(u0.coeff([0; 4]).is_one(), "series unit not normalised");
    // Inverse of the unit series mod main^2 only needs its linear slope.
    let mut c3e = [0u16; 4];
    c3e[main] = 1;
    let c3 = u0.coeff(c3e);

    let mut u_parts = vec![u0.clone()];
    let mut lin_parts: Vec<MultiPoly<Fq>> = vec![MultiPoly::zero(unit)];
    let mut a = MultiPoly::zero(unit);
    let mut b = MultiPoly::zero(unit);
    for k in 1..=cap {
        let mut ek = parts[k].clone();
        for j in 1..k {
            ek = &ek - &lin_parts[j].mul(&u_parts[k - j]);
        }
        // Solve (a_k*main + b_k) * u0 = ek  (mod main^2).
        let em = ek.parts_by_degree_in(main);
        let e0 = em.first().cloned().unwrap_or_else(|| MultiPoly::zero(unit));
        let e1 = em.get(1).cloned().unwrap_or_else(|| MultiPoly::zero(unit));
        let bk = e0;
        let ak = &e1 - &bk.scale(&c3);
        let link = &ak.mul(&main_var) + &bk;
        let uk = (&ek - &link.mul(&u0)).div_exact(&main2).expect("remainder divisible");
        a = &a + &ak;
        b = &b + &bk;
        u_parts.push(uk);
        lin_parts.push(link);
    }
    (a, b)
}

/// ADE classes of plane curve germs at the origin, in the two variables
/// `x, y`. `Smooth` covers order 0 and 1 (no singularity), which arises in
/// the blow-up recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GermClass {
    Smooth,
    A(u32),
    D(u32),
    E(u32),
    NonSimple,
    Unresolved(u32),
}

fn classify_plane_germ(g: &MultiPoly<Fq>, cap: u32) -> GermClass {
    if g.is_zero() {
        return GermClass::Unresolved(cap);
    }
    let parts = g.parts_by_total_degree();
    let ord = parts.iter().position(|p| !p.is_zero()).expect("non-zero germ");
    match ord {
        0 | 1 => GermClass::Smooth,
        2 => classify_germ_order2(g, &parts[2], cap),
        3 => classify_germ_order3(g, &parts[3], cap),
        _ => GermClass::NonSimple,
    }
}

/// Order-2 germs: the `A` series. A second Weierstrass split in a direction
/// off the quadratic part gives `x^2 + p(y) x + q(y)`; the order of the
/// univariate discriminant `p^2 - 4q` is `n + 1` for type `A_n`.
fn classify_germ_order2(g: &MultiPoly<Fq>, g2: &MultiPoly<Fq>, cap: u32) -> GermClass {
    let field = g.unit().field();
    let zero = field.zero();
    let u = all_points::<2>(field)
        .find(|u| {
            let c = u.coords();
            !g2.eval(&[c[0], c[1], zero, zero]).is_zero()
        })
        .expect("direction off a non-zero binary quadratic");
    let uc = u.coords();
    let pivot = usize::from(uc[0].is_zero());
    let mut m = [[field.zero(); 4]; 4];
    m[0][0] = uc[0];
    m[1][0] = uc[1];
    m[1 - pivot][1] = field.one();
    m[2][2] = field.one();
    m[3][3] = field.one();
    let rotated = g.compose_linear(&m);
    let lead = rotated.coeff([2, 0, 0, 0]);
    debug_assert!(!lead.is_zero());
    let scaled = rotated.scale(&lead.inv());
    let (p, q) = weierstrass_split(&scaled, X, &[Y], cap as usize);
    let delta = (&p.mul(&p) - &q.scale(&field.elem(4)))
        .truncate_by_degree_in_vars(&[Y], cap as usize);
    let Some(du) = delta.as_univariate(Y) else {
        // Mixed variables would be a bug: p, q involve y only.
        unreachable!("discriminant of a plane germ is univariate");
    };
    match du.coeffs().iter().position(|c| !c.is_zero()) {
        None => GermClass::Unresolved(cap),
        Some(ord) => {
            debug_assert!(ord >= 2, "A-series discriminant has order >= 2");
            GermClass::A(ord as u32 - 1)
        }
    }
}

/// Order-3 germs: `D` and `E` series, decided by the factor structure of
/// the cubic part and one blow-up of the strict transform.
fn classify_germ_order3(g: &MultiPoly<Fq>, g3: &MultiPoly<Fq>, cap: u32) -> GermClass {
    let field = g.unit().field();
    // Root multiplicities of the binary cubic over P^1. A repeated root of
    // a cubic is unique, hence Galois-stable, hence rational: scanning the
    // rational points finds every repeated factor.
    let mut double_root: Option<ProjPoint<2>> = None;
    let mut triple_root: Option<ProjPoint<2>> = None;
    let mut simple_roots: Vec<ProjPoint<2>> = Vec::new();
    for u in all_points::<2>(field) {
        match root_multiplicity(g3, &u) {
            0 => {}
            1 => simple_roots.push(u),
            2 => double_root = Some(u),
            _ => triple_root = Some(u),
        }
    }
    if let Some(u3) = triple_root {
        // Send the triple direction to the y-axis so the cubic part becomes
        // x^3, then blow up.
        let h = blow_up_after_rotation(g, &u3, None, cap);
        return match classify_plane_germ(&h, cap) {
            GermClass::Smooth => GermClass::E(6),
            GermClass::A(1) => GermClass::E(7),
            GermClass::A(2) => GermClass::E(8),
            GermClass::Unresolved(t) => GermClass::Unresolved(t),
            _ => GermClass::NonSimple,
        };
    }
    if let Some(u2) = double_root {
        // Cubic = (double line)^2 * (simple line); the simple factor of a
        // cubic with a rational double root is rational, so it was found.
        let v = simple_roots.first().expect("third root of the cubic is rational");
        let h = blow_up_after_rotation(g, &u2, Some(v), cap);
        return match classify_plane_germ(&h, cap) {
            GermClass::Smooth => GermClass::D(5),
            GermClass::A(n) => GermClass::D(n + 5),
            GermClass::Unresolved(t) => GermClass::Unresolved(t),
            _ => GermClass::NonSimple,
        };
    }
    // No rational repeated root means no repeated root at all: three
    // distinct branches.
    GermClass::D(4)
}

/// Multiplicity of `u` as a root of the binary form `g3` in `x, y`:
/// parametrise through `u` and read the vanishing order at `t = 0`.
pub(crate) fn root_multiplicity(g3: &MultiPoly<Fq>, u: &ProjPoint<2>) -> usize {
    let field = g3.unit().field();
    let uc = u.coords();
    let pivot = usize::from(uc[0].is_zero());
    let comp = 1 - pivot;
    let mut m = [[field.zero(); 4]; 4];
    m[0][0] = uc[0];
    m[1][0] = uc[1];
    m[comp][1] = field.one();
    let composed = g3.compose_linear(&m);
    let deg = g3.total_degree().unwrap_or(0);
    (0..=deg)
        .position(|k| !composed.coeff([deg - k, k, 0, 0]).is_zero())
        .unwrap_or(deg as usize + 1)
}

/// Rotate so `special` goes to the y-axis point `(0:1)` (and `other`, when
/// given, to `(1:0)`), then blow up via `x -> x*y` and divide by `y^3`.
fn blow_up_after_rotation(
    g: &MultiPoly<Fq>,
    special: &ProjPoint<2>,
    other: Option<&ProjPoint<2>>,
    cap: u32,
) -> MultiPoly<Fq> {
    let field = g.unit().field();
    let sc = special.coords();
    let first: [Fq; 2] = match other {
        Some(v) => [v.coords()[0], v.coords()[1]],
        None => {
            // Any direction independent from `special` works.
            let pivot = usize::from(sc[0].is_zero());
            let mut e = [field.zero(); 2];
            e[1 - pivot] = field.one();
            e
        }
    };
    let mut m = [[field.zero(); 4]; 4];
    m[0][0] = first[0];
    m[1][0] = first[1];
    m[0][1] = sc[0];
    m[1][1] = sc[1];
    m[2][2] = field.one();
    m[3][3] = field.one();
    let rotated = g.compose_linear(&m);
    let xy = MultiPoly::monomial(field.one(), [1, 1, 0, 0]);
    let y3 = MultiPoly::monomial(field.one(), [0, 3, 0, 0]);
    let transformed = rotated.substitute(X, &xy);
    let h = transformed.div_exact(&y3).expect("order-3 germ blows up divisibly");
    h.truncate_by_degree_in_vars(&[X, Y], cap as usize)
}

/// Find all rational singular points (common zeros of the four partial
/// derivatives), classify each, and look for a positive-dimensional locus.
pub fn singular_points(s: &MultiPoly<Fq>) -> SingularScan {
    let field = s.unit().field();
    let pts = find_singular_points(s, field);
    let records = pts
        .iter()
        .map(|p| {
            let (multiplicity, tangent_cone) =
                multiplicity_at(s, p).expect("gradient zero implies on-surface in char != 2");
            let class = if multiplicity >= 3 {
                SingularClass::NonSimple
            } else {
                classify_chart_double_point(
                    &chart_equation(s, p),
                    &tangent_cone,
                    DEFAULT_TRUNCATION,
                )
            };
            SingularRecord { point: *p, multiplicity, tangent_cone, class }
        })
        .collect::<Vec<_>>();
    let non_isolated = if pts.len() as u64 > field.q() / 2 {
        detect_singular_curve(s, &pts, field)
    } else {
        None
    };
    SingularScan { records, non_isolated }
}

/// Scan `P^3(F)` for common zeros of the gradient, chart by chart. The big
/// affine chart `w = 1` runs in parallel over the first coordinate with an
/// incremental univariate evaluation in `z`.
fn find_singular_points(s: &MultiPoly<Fq>, field: FieldSpec) -> Vec<ProjPoint<4>> {
    let grad = s.gradient();
    let one = MultiPoly::constant(field.one());
    // Chart w = 1: each component becomes a polynomial in z whose
    // coefficients are polynomials in (x, y).
    let layers: Vec<Vec<MultiPoly<Fq>>> = grad
        .iter()
        .map(|g| g.substitute(W, &one).parts_by_degree_in(Z))
        .collect();
    let elements: Vec<Fq> = field.elements().collect();
    let mut out: Vec<ProjPoint<4>> = elements
        .par_iter()
        .map(|&x| {
            let mut found = Vec::new();
            let zero = field.zero();
            for &y in &elements {
                let at = [x, y, zero, zero];
                let c0: Vec<Fq> = layers[0].iter().map(|p| p.eval(&at)).collect();
                // The other three components are only evaluated once the
                // first one has a root in z, which is the rare case.
                let mut rest: Option<Vec<Vec<Fq>>> = None;
                for &z in &elements {
                    if !horner(&c0, z).is_zero() {
                        continue;
                    }
                    let rest = rest.get_or_insert_with(|| {
                        layers[1..]
                            .iter()
                            .map(|parts| parts.iter().map(|p| p.eval(&at)).collect())
                            .collect()
                    });
                    if rest.iter().all(|c| horner(c, z).is_zero()) {
                        found.push(ProjPoint::new([x, y, z, field.one()]).expect("affine point"));
                    }
                }
            }
            found
        })
        .flatten()
        .collect();
    // Chart w = 0, z = 1; then y = 1; then the point (1:0:0:0).
    let zero = field.zero();
    for x in &elements {
        for y in &elements {
            let pt = [*x, *y, field.one(), zero];
            if grad.iter().all(|g| g.eval(&pt).is_zero()) {
                out.push(ProjPoint::new(pt).expect("non-zero"));
            }
        }
    }
    for x in &elements {
        let pt = [*x, field.one(), zero, zero];
        if grad.iter().all(|g| g.eval(&pt).is_zero()) {
            out.push(ProjPoint::new(pt).expect("non-zero"));
        }
    }
    let pt = [field.one(), zero, zero, zero];
    if grad.iter().all(|g| g.eval(&pt).is_zero()) {
        out.push(ProjPoint::new(pt).expect("non-zero"));
    }
    out.sort();
    out.dedup();
    out
}

fn horner(coeffs: &[Fq], at: Fq) -> Fq {
    let mut acc = at.field().zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(&at).add(c);
    }
    acc
}

/// Try to recognise the singular set as (containing) a curve: a line first,
/// then a plane conic, then the base locus of a net of quadrics.
fn detect_singular_curve(
    s: &MultiPoly<Fq>,
    pts: &[ProjPoint<4>],
    field: FieldSpec,
) -> Option<CurveWitness> {
    let grad = s.gradient();
    // Lines: probe pairs among a few seed points; a candidate with at least
    // 5 rational singular points forces each cubic partial to vanish on the
    // whole line, which the symbolic restriction then certifies.
    let seeds = pts.len().min(12);
    for i in 0..seeds {
        for j in i + 1..seeds {
            let Some(line) = ProjLine::through(&pts[i], &pts[j]) else { continue };
            let on = pts.iter().filter(|p| line.contains(p)).count();
            if on < 5 {
                continue;
            }
            if grad.iter().all(|g| restricts_to_zero_on_line(g, &line)) {
                return Some(CurveWitness::Line(line));
            }
        }
    }
    // Conics: find a plane holding many singular points, fit a quadric
    // through all of them, and check the plane section accounts for the
    // points.
    if let Some(w) = fit_plane_conic(pts, field) {
        return Some(w);
    }
    // Space curves: the quadrics through every singular point. A twisted
    // cubic has q+1 rational points and leaves a net of dimension exactly 3
    // whose base locus is the curve; a point count close to q+1 rules out
    // nets that merely pass through a small special configuration.
    if pts.len() as u64 + 2 >= field.q() {
        let basis = quadrics_through(pts, field);
        if basis.len() >= 3 {
            return Some(CurveWitness::SpaceCurve { quadric_dim: basis.len() });
        }
    }
    None
}

pub(crate) fn restricts_to_zero_on_line(g: &MultiPoly<Fq>, line: &ProjLine) -> bool {
    let field = line.field();
    let [a, b] = line.spanning_rows();
    let m = [0, 1, 2, 3].map(|i| [a[i], b[i], field.zero(), field.zero()]);
    g.compose_linear(&m).is_zero()
}

/// The exponent vectors of the 10 quadric monomials in `x, y, z, w`.
fn quadric_monomials() -> [[u16; 4]; 10] {
    let mut out = [[0u16; 4]; 10];
    let mut k = 0;
    for i in 0..4 {
        for j in i..4 {
            out[k][i] += 1;
            out[k][j] += 1;
            k += 1;
        }
    }
    out
}

/// Basis of the space of quadrics vanishing at every given point.
fn quadrics_through(pts: &[ProjPoint<4>], field: FieldSpec) -> Vec<MultiPoly<Fq>> {
    let monos = quadric_monomials();
    let rows: Vec<Vec<Fq>> = pts
        .iter()
        .map(|p| {
            let c = p.coords();
            monos.iter().map(|e| eval_monomial(c, e)).collect()
        })
        .collect();
    nullspace(&rows, 10, &field.one())
        .into_iter()
        .map(|v| {
            MultiPoly::from_terms(field.one(), monos.iter().copied().zip(v))
        })
        .collect()
}

fn eval_monomial(c: &[Fq; 4], e: &[u16; 4]) -> Fq {
    let mut acc = c[0].field().one();
    for i in 0..4 {
        for _ in 0..e[i] {
            acc = acc.mul(&c[i]);
        }
    }
    acc
}

fn fit_plane_conic(pts: &[ProjPoint<4>], field: FieldSpec) -> Option<CurveWitness> {
    let singular: BTreeSet<ProjPoint<4>> = pts.iter().copied().collect();
    let seeds = pts.len().min(8);
    for i in 0..seeds {
        for j in i + 1..seeds {
            for k in j + 1..seeds {
                let Some(plane) = plane_through(&pts[i], &pts[j], &pts[k]) else { continue };
                let plane_pts: Vec<ProjPoint<4>> =
                    pts.iter().copied().filter(|p| on_plane(p, &plane)).collect();
                if (plane_pts.len() as u64) <= field.q() / 2 {
                    continue;
                }
                // A quadric through all of them; restricted to the plane it
                // is a conic through every on-plane singular point.
                let quadrics = quadrics_through(&plane_pts, field);
                let Some(q) = quadrics.into_iter().find(|q| !vanishes_on_plane(q, &plane, field))
                else {
                    continue;
                };
                // Accept when the rational points of plane ∩ quadric are all
                // singular: the fitted conic really is the singular curve.
                let conic_pts = plane_quadric_points(&plane, &q, field);
                if conic_pts.len() >= 3 && conic_pts.iter().all(|p| singular.contains(p)) {
                    return Some(CurveWitness::Conic { plane, quadric: q });
                }
            }
        }
    }
    None
}

fn plane_through(
    a: &ProjPoint<4>,
    b: &ProjPoint<4>,
    c: &ProjPoint<4>,
) -> Option<[Fq; 4]> {
    let field = a.field();
    let rows = vec![a.coords().to_vec(), b.coords().to_vec(), c.coords().to_vec()];
    let basis = nullspace(&rows, 4, &field.one());
    match basis.len() {
        1 => Some([basis[0][0], basis[0][1], basis[0][2], basis[0][3]]),
        _ => None, // collinear (or coincident) points span no unique plane
    }
}

fn on_plane(p: &ProjPoint<4>, plane: &[Fq; 4]) -> bool {
    let c = p.coords();
    let mut acc = c[0].field().zero();
    for i in 0..4 {
        acc = acc.add(&plane[i].mul(&c[i]));
    }
    acc.is_zero()
}

fn vanishes_on_plane(q: &MultiPoly<Fq>, plane: &[Fq; 4], field: FieldSpec) -> bool {
    // Substitute the plane's pivot variable and test for the zero
    // polynomial: exact, no sampling.
    let pivot = (0..4).find(|&i| !plane[i].is_zero()).expect("non-zero plane");
    let inv = plane[pivot].inv().neg();
    let mut rep = MultiPoly::zero(field.one());
    for (i, coef) in plane.iter().enumerate() {
        if i != pivot {
            rep = &rep + &MultiPoly::variable(field.one(), i).scale(&coef.mul(&inv));
        }
    }
    q.substitute(pivot, &rep).is_zero()
}

/// Rational points of the intersection of a plane with a quadric.
fn plane_quadric_points(
    plane: &[Fq; 4],
    q: &MultiPoly<Fq>,
    field: FieldSpec,
) -> Vec<ProjPoint<4>> {
    let basis = nullspace(&[plane.to_vec()], 4, &field.one());
    debug_assert_eq!(basis.len(), 3);
    let mut out = Vec::new();
    for t in all_points::<3>(field) {
        let tc = t.coords();
        let mut v = [field.zero(); 4];
        for (bi, b) in basis.iter().enumerate() {
            for slot in 0..4 {
                v[slot] = v[slot].add(&tc[bi].mul(&b[slot]));
            }
        }
        let p = ProjPoint::new(v).expect("independent basis");
        if q.eval(p.coords()).is_zero() {
            out.push(p);
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn over(field: FieldSpec, src: &str) -> MultiPoly<Fq> {
        parse_poly(src)
            .unwrap()
            .try_map_coeffs(field.one(), |c| field.embed_surd(c))
            .unwrap()
    }

    fn origin_chart(field: FieldSpec) -> ProjPoint<4> {
        ProjPoint::from_ints(field, [0, 0, 0, 1]).unwrap()
    }

    #[test]
    fn multiplicity_and_cone_at_the_distinguished_point() {
        let f = FieldSpec::make(13, 1).unwrap();
        let s = over(f, "w^2*z^2 + w*(y^3 + z*(x^2+y^2)) + x^4 + y^4 + z^4");
        let o = origin_chart(f);
        let (m, cone) = multiplicity_at(&s, &o).unwrap();
        assert_eq!(m, 2);
        assert_eq!(cone, over(f, "z^2"));
        // a smooth point reports multiplicity 1 with its tangent plane
        // (fourth powers mod 13 are {0,1,3,9} and 1+3+9 = 13, so the point
        // (1:2:4:0) lies on the Fermat quartic)
        let fermat = over(f, "x^4 + y^4 + z^4 + w^4");
        let p = ProjPoint::from_ints(f, [1, 2, 4, 0]).unwrap();
        let (m, plane) = multiplicity_at(&fermat, &p).unwrap();
        assert_eq!(m, 1);
        assert_eq!(plane.total_degree(), Some(1));
        // and off the surface it is an error
        let q = ProjPoint::from_ints(f, [1, 1, 0, 0]).unwrap();
        assert!(matches!(
            multiplicity_at(&fermat, &q),
            Err(SurfaceError::PointNotOnSurface)
        ));
    }

    #[test]
    fn rank_three_cone_is_a1_and_conversely() {
        let f = FieldSpec::make(13, 1).unwrap();
        let o = origin_chart(f);
        let s = over(f, "z^2*w^2 + x^2*w^2 + y^2*w^2 + x^4 + y^4 + z^4");
        let (m, cone) = multiplicity_at(&s, &o).unwrap();
        assert_eq!(m, 2);
        assert_eq!(cone_rank(&cone), 3);
        assert_eq!(classify_double_point(&s, &o).unwrap(), SingularClass::A(1));
        // rank 2 cone: not A1
        let s = over(f, "z^2*w^2 + x^2*w^2 + x^4 + y^4 + z^4");
        let (_, cone) = multiplicity_at(&s, &o).unwrap();
        assert_eq!(cone_rank(&cone), 2);
        assert_ne!(classify_double_point(&s, &o).unwrap(), SingularClass::A(1));
    }

    #[test]
    fn a_series_depths() {
        let f = FieldSpec::make(13, 1).unwrap();
        let o = origin_chart(f);
        // z^2 + x^2 + y^(n+1) is A_n (times w-powers for homogeneity)
        let s = over(f, "z^2*w^2 + x^2*w^2 + y^3*w");
        assert_eq!(classify_double_point(&s, &o).unwrap(), SingularClass::A(2));
        let s = over(f, "z^2*w^2 + x^2*w^2 + y^4");
        assert_eq!(classify_double_point(&s, &o).unwrap(), SingularClass::A(3));
        // a conjugate (non-split) pair of tangent planes: 2 is a non-square
        // mod 13, so z^2 - 2x^2 does not factor rationally, yet the depth is
        // still read off the discriminant without factoring the cone
        let s = over(f, "z^2*w^2 - 2*x^2*w^2 + y^4");
        assert_eq!(classify_double_point(&s, &o).unwrap(), SingularClass::A(3));
    }

    #[test]
    fn d_and_e_series() {
        let f = FieldSpec::make(13, 1).unwrap();
        let o = origin_chart(f);
        let cases = [
            ("z^2*w^2 + x^2*y*w + y^3*w", SingularClass::D(4)),
            ("z^2*w^2 + x^2*y*w + y^4", SingularClass::D(5)),
            ("z^2*w^2 + x^2*y*w + x*y^3", SingularClass::D(6)),
            ("z^2*w^2 + x^3*w + y^4", SingularClass::E(6)),
            ("z^2*w^2 + x^3*w + x*y^3", SingularClass::E(7)),
            ("z^2*w^2 + x^3*w + y^4 + x*y^3", SingularClass::E(6)),
        ];
        for (src, want) in cases {
            let s = over(f, src);
            assert_eq!(classify_double_point(&s, &o).unwrap(), want, "{src}");
        }
        // E8 needs y^5, which forces w-degree -1 in a quartic; check the
        // germ machinery directly on the curve discriminant instead.
        let germ = over(f, "x^3 + y^5");
        assert_eq!(classify_plane_germ(&germ, 12), GermClass::E(8));
        let germ = over(f, "x^3 + y^6");
        assert_eq!(classify_plane_germ(&germ, 12), GermClass::NonSimple);
        let germ = over(f, "x^2*y^2 + y^5");
        assert_eq!(classify_plane_germ(&germ, 12), GermClass::NonSimple);
        let germ = over(f, "x^2*y");
        assert_eq!(classify_plane_germ(&germ, 12), GermClass::Unresolved(12));
    }

    #[test]
    fn multiplicity_errors_for_higher_points() {
        let f = FieldSpec::make(13, 1).unwrap();
        let o = origin_chart(f);
        let s = over(f, "w*x^3 + w*y^3 + x^4 + y^4 + z^4 + w*z^3");
        let (m, _) = multiplicity_at(&s, &o).unwrap();
        assert_eq!(m, 3);
        assert!(matches!(
            classify_double_point(&s, &o),
            Err(SurfaceError::NotDoublePoint(3))
        ));
    }

    #[test]
    fn scan_classifies_an_a3_plus_three_a1_configuration() {
        let f = FieldSpec::make(13, 1).unwrap();
        let s = over(f, "x^4 + x*z^3 + y^2*z*w + x*w^3");
        let scan = singular_points(&s);
        assert!(scan.is_isolated());
        assert_eq!(scan.count(), 4);
        let deep = ProjPoint::from_ints(f, [0, 1, 0, 0]).unwrap();
        for r in &scan.records {
            assert_eq!(r.multiplicity, 2);
            if r.point == deep {
                assert_eq!(r.class, SingularClass::A(3));
            } else {
                // the other three nodes sit at (0 : 0 : z : 1), z^3 = -1
                let c = r.point.coords();
                assert!(c[0].is_zero() && c[1].is_zero());
                assert_eq!(r.class, SingularClass::A(1));
                assert_eq!(cone_rank(&r.tangent_cone), 3);
            }
        }
    }

    #[test]
    fn scan_detects_a_singular_line() {
        let f = FieldSpec::make(13, 1).unwrap();
        // singular along the whole line x = y = 0
        let s = over(f, "x^4 + x^2*y^2 + y^4 + x^3*z + y^3*w");
        let scan = singular_points(&s);
        assert!(matches!(scan.non_isolated, Some(CurveWitness::Line(_))));
        if let Some(CurveWitness::Line(l)) = &scan.non_isolated {
            let p = ProjPoint::from_ints(f, [0, 0, 1, 5]).unwrap();
            assert!(l.contains(&p));
        }
    }

    #[test]
    fn scan_detects_a_singular_conic() {
        let f = FieldSpec::make(13, 1).unwrap();
        // double conic: (x^2 + yw)^2 + y^4  restricted so the singular locus
        // is the conic {z = 0 section}: use (x^2+y*w)^2 + z^4
        let s = over(f, "(x^2 + y*w)^2 + z^4");
        let scan = singular_points(&s);
        match &scan.non_isolated {
            Some(CurveWitness::Conic { plane, .. }) => {
                // the conic lives in z = 0
                let nz: Vec<bool> = plane.iter().map(|c| !c.is_zero()).collect();
                assert_eq!(nz, [false, false, true, false]);
            }
            other => panic!("expected a conic witness, got {other:?}"),
        }
    }

    #[test]
    fn scan_detects_a_twisted_cubic_locus() {
        let f = FieldSpec::make(13, 1).unwrap();
        // The discriminant-style quartic singular along the twisted cubic:
        // (xz - y^2)^2 + (xw - yz)*(yw - z^2) ... classical: the quartic
        // (y^2 - xz)^2 - ... simplest verified: (y^2-xz)^2 + (z^2-yw)^2 is
        // singular where both quadrics vanish, which contains the cubic.
        let s = over(f, "(y^2 - x*z)^2 - (y^2 - x*z)*(z^2 - y*w) + (z^2 - y*w)^2 + (x*w - y*z)^2");
        let scan = singular_points(&s);
        assert!(scan.count() as u64 > f.q() / 2);
        assert!(matches!(scan.non_isolated, Some(CurveWitness::SpaceCurve { .. })));
    }
}
