//! Classification of quartics into the line-rich families.
//!
//! The constructions that push line counts beyond the generic bound all
//! hinge on one distinguished singular point `O` whose tangent cone is a
//! double plane. After moving `O` to `(0:0:0:1)` and the plane to `{z = 0}`
//! the equation takes the shape
//!
//! ```text
//! w^2 z^2 + w * (P3(x,y) + z * Q2(x,y)) + H4(x,y,z)
//! ```
//!
//! with `P3` either identically zero or (after one more change) the cube
//! `y^3`. The coefficients of `Q2 = q20 x^2 + q11 xy + q02 y^2` and of `H4`
//! then separate the three families:
//!
//! * `Q4`: `P3 = 0`, so the `w`-linear term is divisible by `z`;
//! * `Q5`: `P3 = y^3` with `q20 = h400 = h310 = 0` and `h301 != 0`;
//! * `Q6`: `P3 = y^3` with `q20 != 0`, `h400 = q20^2/4`,
//!   `h310 = q20 q11 / 2` and `h301 = 0`.
//!
//! [`classify_family`] detects which case (if any) applies to an arbitrary
//! quartic and returns the normalising change of coordinates; surfaces
//! without such a point fall back to the descriptive tags. The companion
//! [`normalize_line_to_plane`] moves a chosen line of a normalised surface
//! into the plane `{x = 0}` while keeping the normal shape, which is the
//! coordinate arrangement the bound certificates expect.

use super::singular::{chart_matrix, cone_rank, root_multiplicity, singular_points};
use super::SurfaceError;
use crate::field::{FieldSpec, Fq};
use crate::geom::{ProjLine, ProjPoint};
use crate::poly::{MultiPoly, W, Z};
use std::collections::BTreeMap;

/// Errors from family classification and line normalisation.
#[derive(Debug, thiserror::Error)]
pub enum FamilyError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    /// A point proven beyond the simple types resisted normalisation; this
    /// contradicts the structure theory and indicates an inconsistency.
    #[error("point {point} cannot be normalised: {reason}")]
    NotNormalizable { point: Box<ProjPoint<4>>, reason: String },
    /// Input to a normal-form operation was not in normal shape.
    #[error("polynomial is not in a recognised normal shape")]
    NotNormalForm,
    /// The requested line lies in the double plane `{z = 0}`.
    #[error("line lies in the distinguished tangent plane")]
    LineInCone,
    /// The requested line is not contained in the surface.
    #[error("line does not lie on the surface")]
    LineNotOnSurface,
    /// The plane spanned by the line and the distinguished point has no
    /// `x`-coefficient, which the cube-bearing shape cannot absorb.
    #[error("line spans an excluded plane through the distinguished point")]
    ExcludedPencilPlane,
}

/// Family membership labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Distinguished double point with vanishing cubic term.
    Q4,
    /// Cube-bearing shape with `q20 = 0`, `h301 != 0`.
    Q5,
    /// Cube-bearing shape with `q20 != 0`, `h301 = 0`.
    Q6,
    /// A point of multiplicity 3 or 4 (and no singular curve).
    TriplePoint,
    /// Only simple double points.
    ADEonly,
    /// No singular points at all.
    Smooth,
    /// The singular locus contains a curve.
    NonIsolated,
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FamilyKind::Q4 => "Q4",
            FamilyKind::Q5 => "Q5",
            FamilyKind::Q6 => "Q6",
            FamilyKind::TriplePoint => "triple-point",
            FamilyKind::ADEonly => "ade-only",
            FamilyKind::Smooth => "smooth",
            FamilyKind::NonIsolated => "non-isolated",
        };
        write!(f, "{s}")
    }
}

/// Which of the two normal shapes an equation has.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalShape {
    /// The pure `x, y` cubic part of the `w`-coefficient vanishes: the
    /// `w`-linear term is `w z Q2(x, y)`.
    ZeroCubic,
    /// The cubic part is normalised to `y^3`.
    UnitCubic,
}

/// Coefficients of a normal-shape equation: `Q2 = q20 x^2 + q11 xy +
/// q02 y^2` and all 15 coefficients `h[i][j][k]` of `H4`.
#[derive(Debug, Clone)]
pub struct NormalCoefficients {
    pub shape: NormalShape,
    pub q20: Fq,
    pub q11: Fq,
    pub q02: Fq,
    h4: BTreeMap<(u16, u16, u16), Fq>,
}

impl NormalCoefficients {
    /// The coefficient of `x^i y^j z^k` in `H4` (`i + j + k = 4`).
    pub fn h(&self, i: u16, j: u16, k: u16) -> Fq {
        self.h4[&(i, j, k)]
    }
}

/// Outcome of [`classify_family`].
#[derive(Debug, Clone)]
pub struct FamilyTag {
    pub tag: FamilyKind,
    /// For the three families: matrix `M` with `S(M x) * scale` equal to
    /// [`FamilyTag::normal_poly`].
    pub normalizing_map: Option<[[Fq; 4]; 4]>,
    pub scale: Option<Fq>,
    /// The normalised equation itself.
    pub normal_poly: Option<MultiPoly<Fq>>,
    pub coefficients: Option<NormalCoefficients>,
}

impl FamilyTag {
    fn plain(tag: FamilyKind) -> FamilyTag {
        FamilyTag {
            tag,
            normalizing_map: None,
            scale: None,
            normal_poly: None,
            coefficients: None,
        }
    }
}

/// Decide whether the quartic belongs to one of the line-rich families.
///
/// Runs the singular-locus scan, then tries to normalise every double point
/// whose tangent cone is a double plane. The first point that completes the
/// reduction and satisfies the coefficient conditions determines the tag;
/// surfaces with no such point get a descriptive fallback tag.
pub fn classify_family(s: &MultiPoly<Fq>) -> Result<FamilyTag, FamilyError> {
    let scan = singular_points(s);
    if scan.non_isolated.is_some() {
        return Ok(FamilyTag::plain(FamilyKind::NonIsolated));
    }
    if scan.records.is_empty() {
        return Ok(FamilyTag::plain(FamilyKind::Smooth));
    }
    if scan.records.iter().any(|r| r.multiplicity >= 3) {
        return Ok(FamilyTag::plain(FamilyKind::TriplePoint));
    }
    for r in &scan.records {
        // Only a double plane (rank-1 cone) can start the reduction; every
        // higher-rank cone belongs to an A-type point.
        if cone_rank(&r.tangent_cone) != 1 {
            continue;
        }
        if let Some(tag) = normalize_at(s, &r.point, r.class == super::SingularClass::NonSimple)? {
            return Ok(tag);
        }
    }
    Ok(FamilyTag::plain(FamilyKind::ADEonly))
}

/// Attempt the full reduction at one double point with a double-plane cone.
/// Returns `Ok(None)` when the point turns out simple (the coefficient
/// conditions fail), an error when `known_nonsimple` clashes with a cubic
/// term that is not a cube.
fn normalize_at(
    s: &MultiPoly<Fq>,
    point: &ProjPoint<4>,
    known_nonsimple: bool,
) -> Result<Option<FamilyTag>, FamilyError> {
    let field = s.unit().field();
    let mut map = chart_matrix(point);
    let mut poly = s.compose_linear(&map);
    let mut scale = field.one();

    // Split off the tangent cone: the w^2 coefficient, a rank-1 quadric
    // c * L^2 in x, y, z.
    let wparts = poly.parts_by_degree_in(W);
    debug_assert!(wparts.len() <= 3, "double point kills w^3 and w^4");
    let cone = wparts[2].clone();
    let (lead, l_form) = double_plane_form(&cone, field).ok_or_else(|| {
        FamilyError::NotNormalizable {
            point: Box::new(*point),
            reason: "tangent cone is not a double plane".into(),
        }
    })?;

    // Rotate L to the z coordinate: invert the row matrix (e_a, e_b, L).
    let rot = rotation_to_z(&l_form, field);
    map = mat_mul4(&map, &rot);
    poly = poly.compose_linear(&rot);
    let inv_lead = lead.inv();
    poly = poly.scale(&inv_lead);
    scale = scale.mul(&inv_lead);

    // Absorb the z^2 and z^3 parts of the w-linear term into w.
    let (shift, shifted) = absorb_w_shift(&poly, field);
    map = mat_mul4(&map, &shift);
    poly = shifted;

    // Extract P3, the pure x,y part of the w-coefficient.
    let wlin = poly.parts_by_degree_in(W).get(1).cloned().unwrap_or_else(|| {
        MultiPoly::zero(field.one())
    });
    let p3 = wlin.parts_by_degree_in(Z)[0].clone();
    if !p3.is_zero() {
        // P3 must be a perfect cube c * l^3; its triple root is rational.
        let triple = crate::geom::all_points::<2>(field)
            .find(|u| root_multiplicity(&p3, u) >= 3);
        let Some(u3) = triple else {
            if known_nonsimple {
                return Err(FamilyError::NotNormalizable {
                    point: Box::new(*point),
                    reason: "cubic term is not a perfect cube".into(),
                });
            }
            return Ok(None);
        };
        // Send the triple root to (1:0) so the cube becomes y^3, then
        // rescale w to make its coefficient 1.
        let rot2 = rotation_xy(&u3, field);
        map = mat_mul4(&map, &rot2);
        poly = poly.compose_linear(&rot2);
        let c3 = poly.coeff([0, 3, 0, 1]);
        debug_assert!(!c3.is_zero());
        let wscale = diag4([field.one(), field.one(), field.one(), c3], field);
        map = mat_mul4(&map, &wscale);
        poly = poly.compose_linear(&wscale);
        let c3sq_inv = c3.mul(&c3).inv();
        poly = poly.scale(&c3sq_inv);
        scale = scale.mul(&c3sq_inv);
    }

    // Read off the coefficients and test the family conditions.
    let coeffs = extract_normal_form(&poly)?;
    let verdict = match coeffs.shape {
        NormalShape::ZeroCubic => Some(FamilyKind::Q4),
        NormalShape::UnitCubic => {
            let four = field.elem(4);
            let two = field.elem(2);
            let c17a = coeffs.q20.mul(&coeffs.q20).sub(&four.mul(&coeffs.h(4, 0, 0)));
            let c17b = two
                .mul(&coeffs.q20)
                .mul(&coeffs.q11)
                .sub(&four.mul(&coeffs.h(3, 1, 0)));
            let c17c = coeffs.q20.mul(&coeffs.h(3, 0, 1));
            if !c17a.is_zero() || !c17b.is_zero() || !c17c.is_zero() {
                None // simple point of D or E type
            } else if coeffs.q20.is_zero() && !coeffs.h(3, 0, 1).is_zero() {
                Some(FamilyKind::Q5)
            } else if !coeffs.q20.is_zero() {
                Some(FamilyKind::Q6)
            } else {
                // q20 = h301 = 0 forces a singular curve through the point,
                // contradicting the isolated scan result.
                return Err(FamilyError::NotNormalizable {
                    point: Box::new(*point),
                    reason: "degenerate coefficients despite an isolated singular locus".into(),
                });
            }
        }
    };
    let Some(kind) = verdict else { return Ok(None) };

    // The whole reduction must reproduce the normalised equation exactly.
    let check = s.compose_linear(&map).scale(&scale);
    assert_eq!(check, poly, "normalising map failed to reproduce the normal form");
    Ok(Some(FamilyTag {
        tag: kind,
        normalizing_map: Some(map),
        scale: Some(scale),
        normal_poly: Some(poly),
        coefficients: Some(coeffs),
    }))
}

/// Recognise a rank-1 quadric in `x, y, z` as `c * L^2`; returns `c` and
/// the linear form `L` normalised to leading coefficient 1.
fn double_plane_form(cone: &MultiPoly<Fq>, field: FieldSpec) -> Option<(Fq, [Fq; 3])> {
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
    // For c * L L^T some diagonal entry c * L_i^2 is non-zero; its row is
    // proportional to L.
    let i0 = (0..3).find(|&i| !m[i][i].is_zero())?;
    let row = m[i0];
    let j0 = (0..3).find(|&j| !row[j].is_zero())?;
    let inv = row[j0].inv();
    let l: [Fq; 3] = [0, 1, 2].map(|j| row[j].mul(&inv));
    let lead = {
        let mut e = [0u16; 4];
        e[j0] = 2;
        cone.coeff(e)
    };
    // Verify exactly: cone = lead * L^2.
    let lpoly = (0..3).fold(MultiPoly::zero(field.one()), |acc, j| {
        &acc + &MultiPoly::variable(field.one(), j).scale(&l[j])
    });
    let rebuilt = lpoly.mul(&lpoly).scale(&lead);
    (rebuilt == *cone).then_some((lead, l))
}

/// A 4x4 change of coordinates making `z_new = L(x, y, z)`, fixing `w`.
fn rotation_to_z(l: &[Fq; 3], field: FieldSpec) -> [[Fq; 4]; 4] {
    let j0 = (0..3).find(|&j| !l[j].is_zero()).expect("non-zero linear form");
    let mut rows = [[field.zero(); 4]; 4];
    for (r, j) in (0..3).filter(|&j| j != j0).enumerate() {
        rows[r][j] = field.one();
    }
    rows[2][..3].copy_from_slice(l);
    rows[3][3] = field.one();
    invert4(&rows, field).expect("unit-triangular up to permutation")
}

/// A 4x4 change sending the `x, y` direction `u` to `(1:0)` (so a form
/// vanishing triply at `u` becomes a multiple of `y^3`), fixing `z, w`.
fn rotation_xy(u: &ProjPoint<2>, field: FieldSpec) -> [[Fq; 4]; 4] {
    let uc = u.coords();
    let pivot = usize::from(uc[0].is_zero());
    let mut m = [[field.zero(); 4]; 4];
    m[0][0] = uc[0];
    m[1][0] = uc[1];
    m[1 - pivot][1] = field.one();
    m[2][2] = field.one();
    m[3][3] = field.one();
    m
}

/// Replace `w` by `w - L1` where `L1` absorbs the `z^2` and `z^3` parts of
/// the `w`-linear coefficient; returns the substitution matrix and result.
fn absorb_w_shift(poly: &MultiPoly<Fq>, field: FieldSpec) -> ([[Fq; 4]; 4], MultiPoly<Fq>) {
    let wlin = poly
        .parts_by_degree_in(W)
        .get(1)
        .cloned()
        .unwrap_or_else(|| MultiPoly::zero(field.one()));
    let zparts = wlin.parts_by_degree_in(Z);
    let half = field.elem(2).inv();
    // L1 = (z^2-coefficient)/2 + z * (z^3-coefficient)/2, a linear form.
    let from_z2 = zparts.get(2).cloned().unwrap_or_else(|| MultiPoly::zero(field.one()));
    let from_z3 = zparts.get(3).map(|p| p.coeff([0; 4])).unwrap_or_else(|| field.zero());
    let l1 = [
        from_z2.coeff([1, 0, 0, 0]).mul(&half),
        from_z2.coeff([0, 1, 0, 0]).mul(&half),
        from_z3.mul(&half),
    ];
    let mut m = [[field.zero(); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = field.one();
    }
    for (j, c) in l1.iter().enumerate() {
        m[3][j] = c.neg();
    }
    let shifted = poly.compose_linear(&m);
    (m, shifted)
}

/// Check an equation is in normal shape and read off its coefficients.
pub fn extract_normal_form(s: &MultiPoly<Fq>) -> Result<NormalCoefficients, FamilyError> {
    let field = s.unit().field();
    if s.total_degree() != Some(4) || !s.is_homogeneous() {
        return Err(FamilyError::NotNormalForm);
    }
    let wparts = s.parts_by_degree_in(W);
    if wparts.len() != 3 {
        return Err(FamilyError::NotNormalForm);
    }
    let z2 = MultiPoly::monomial(field.one(), [0, 0, 2, 0]);
    if wparts[2] != z2 {
        return Err(FamilyError::NotNormalForm);
    }
    let zparts = wparts[1].parts_by_degree_in(Z);
    if zparts.len() > 2 {
        return Err(FamilyError::NotNormalForm);
    }
    let p3 = zparts.first().cloned().unwrap_or_else(|| MultiPoly::zero(field.one()));
    let shape = if p3.is_zero() {
        NormalShape::ZeroCubic
    } else if p3 == MultiPoly::monomial(field.one(), [0, 3, 0, 0]) {
        NormalShape::UnitCubic
    } else {
        return Err(FamilyError::NotNormalForm);
    };
    let q2 = zparts.get(1).cloned().unwrap_or_else(|| MultiPoly::zero(field.one()));
    if q2.degree_in(Z).unwrap_or(0) > 0 || q2.degree_in(W).unwrap_or(0) > 0 {
        return Err(FamilyError::NotNormalForm);
    }
    let mut h4 = BTreeMap::new();
    for i in 0..=4u16 {
        for j in 0..=(4 - i) {
            let k = 4 - i - j;
            h4.insert((i, j, k), wparts[0].coeff([i, j, k, 0]));
        }
    }
    Ok(NormalCoefficients {
        shape,
        q20: q2.coeff([2, 0, 0, 0]),
        q11: q2.coeff([1, 1, 0, 0]),
        q02: q2.coeff([0, 2, 0, 0]),
        h4,
    })
}

/// A normalised surface together with a line moved into `{x = 0}`.
#[derive(Debug, Clone)]
pub struct NormalizedLine {
    /// The transformed equation, again in normal shape.
    pub poly: MultiPoly<Fq>,
    /// Matrix `M` with `original(M x) = poly` (no rescaling involved).
    pub map: [[Fq; 4]; 4],
    /// The line in the new coordinates; it satisfies `x = 0`.
    pub line: ProjLine,
    pub shape: NormalShape,
}

/// Move a line of a normal-shape surface into the plane `{x = 0}` while
/// preserving the normal shape.
///
/// The plane in question is the one spanned by the line and the
/// distinguished point `(0:0:0:1)`. For the cube-bearing shape the plane
/// must have a non-zero `x`-coefficient — planes of the pencil `{y = c z}`
/// would destroy the `y^3` normalisation — and such lines do not occur on
/// members of the families (their coefficient constraints force the
/// corresponding sections to drop rank), so hitting
/// [`FamilyError::ExcludedPencilPlane`] signals an input outside the
/// families. For the shape with vanishing cubic term an `x`/`y` swap
/// rescues the `y`-pencil planes.
pub fn normalize_line_to_plane(
    s: &MultiPoly<Fq>,
    line: &ProjLine,
) -> Result<NormalizedLine, FamilyError> {
    let field = s.unit().field();
    let shape = extract_normal_form(s)?.shape;
    // The line must lie on the surface ...
    if !restricts_to_zero(s, line) {
        return Err(FamilyError::LineNotOnSurface);
    }
    // ... and off the double plane {z = 0}.
    let rows = line.spanning_rows();
    if rows[0][2].is_zero() && rows[1][2].is_zero() {
        return Err(FamilyError::LineInCone);
    }

    // Plane through the line and (0:0:0:1): w-free, normal from the
    // 2x3 system of the spanning rows' x,y,z parts.
    let sys: Vec<Vec<Fq>> = rows.iter().map(|r| r[..3].to_vec()).collect();
    let normals = crate::poly::nullspace(&sys, 3, &field.one());
    // A line on the surface through the distinguished point would lie in
    // {z = 0}, which was excluded, so the span here is always a plane.
    assert_eq!(normals.len(), 1, "line and distinguished point span a plane");
    let n = &normals[0];

    let mut map = [[field.zero(); 4]; 4];
    for (i, row) in map.iter_mut().enumerate() {
        row[i] = field.one();
    }
    let mut plane = [n[0], n[1], n[2]];
    if plane[0].is_zero() {
        match shape {
            NormalShape::UnitCubic => return Err(FamilyError::ExcludedPencilPlane),
            NormalShape::ZeroCubic => {
                if plane[1].is_zero() {
                    // both x and y coefficients zero would mean the plane is
                    // {z = 0}, already excluded
                    return Err(FamilyError::ExcludedPencilPlane);
                }
                // swap x and y; the zero-cubic shape is GL2-symmetric
                map[0][0] = field.zero();
                map[1][1] = field.zero();
                map[0][1] = field.one();
                map[1][0] = field.one();
                plane.swap(0, 1);
            }
        }
    }
    // Absorb the plane into the x coordinate: x_old = x_new - (b/a) y - (c/a) z.
    let a_inv = plane[0].inv();
    let beta = plane[1].mul(&a_inv);
    let gamma = plane[2].mul(&a_inv);
    let mut shear = [[field.zero(); 4]; 4];
    for (i, row) in shear.iter_mut().enumerate() {
        row[i] = field.one();
    }
    shear[0][1] = beta.neg();
    shear[0][2] = gamma.neg();
    map = mat_mul4(&map, &shear);
    let moved = s.compose_linear(&map);
    // Restore the normal shape (the shear re-introduces z-powers in the
    // w-linear term).
    let (shift, fixed) = absorb_w_shift(&moved, field);
    let map = mat_mul4(&map, &shift);
    debug_assert_eq!(s.compose_linear(&map), fixed);

    // Transform the line: new coordinates of p are M^{-1} p.
    let minv = invert4(&map, field).expect("composition of invertible maps");
    let [r0, r1] = rows;
    let img = |r: &[Fq; 4]| {
        let mut v = [field.zero(); 4];
        for (i, slot) in v.iter_mut().enumerate() {
            for j in 0..4 {
                *slot = slot.add(&minv[i][j].mul(&r[j]));
            }
        }
        v
    };
    let new_line =
        ProjLine::from_spanning(img(r0), img(r1)).expect("invertible image of a line");
    debug_assert!(
        new_line.spanning_rows().iter().all(|r| r[0].is_zero()),
        "line should now lie in x = 0"
    );
    let shape = extract_normal_form(&fixed)?.shape;
    Ok(NormalizedLine { poly: fixed, map, line: new_line, shape })
}

fn restricts_to_zero(s: &MultiPoly<Fq>, line: &ProjLine) -> bool {
    super::singular::restricts_to_zero_on_line(s, line)
}

/// Product of two substitution matrices: applying `a` then `b` equals
/// applying `a * b` once.
pub(crate) fn mat_mul4(a: &[[Fq; 4]; 4], b: &[[Fq; 4]; 4]) -> [[Fq; 4]; 4] {
    let zero = a[0][0].field().zero();
    let mut out = [[zero; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = zero;
            for (k, bk) in b.iter().enumerate() {
                acc = acc.add(&a[i][k].mul(&bk[j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Inverse of a 4x4 matrix over a field, by Gauss-Jordan elimination.
pub(crate) fn invert4(m: &[[Fq; 4]; 4], field: FieldSpec) -> Option<[[Fq; 4]; 4]> {
    let mut a = *m;
    let mut inv = [[field.zero(); 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = field.one();
    }
    for col in 0..4 {
        let pivot = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let f = a[col][col].inv();
        for j in 0..4 {
            a[col][j] = a[col][j].mul(&f);
            inv[col][j] = inv[col][j].mul(&f);
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..4 {
                    let s = f.mul(&a[col][j]);
                    a[r][j] = a[r][j].sub(&s);
                    let s = f.mul(&inv[col][j]);
                    inv[r][j] = inv[r][j].sub(&s);
                }
            }
        }
    }
    Some(inv)
}

fn diag4(d: [Fq; 4], field: FieldSpec) -> [[Fq; 4]; 4] {
    let mut m = [[field.zero(); 4]; 4];
    for i in 0..4 {
        m[i][i] = d[i];
    }
    m
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

    #[test]
    fn fallback_tags() {
        let f = FieldSpec::make(13, 1).unwrap();
        let fermat = over(f, "x^4 + y^4 + z^4 + w^4");
        assert_eq!(classify_family(&fermat).unwrap().tag, FamilyKind::Smooth);
        let nodal = over(f, "z^2*w^2 + x^2*w^2 + y^2*w^2 + x^4 + y^4 + z^4");
        assert_eq!(classify_family(&nodal).unwrap().tag, FamilyKind::ADEonly);
        let a3 = over(f, "x^4 + x*z^3 + y^2*z*w + x*w^3");
        assert_eq!(classify_family(&a3).unwrap().tag, FamilyKind::ADEonly);
        let double_conic = over(f, "(x^2 + y*w)^2 + z^4");
        assert_eq!(classify_family(&double_conic).unwrap().tag, FamilyKind::NonIsolated);
        let triple = over(f, "w*x^3 + w*y^3 + w*z^3 + x^4 + y^4 + z^4");
        assert_eq!(classify_family(&triple).unwrap().tag, FamilyKind::TriplePoint);
    }

    #[test]
    fn already_normalised_members_classify_in_place() {
        let f = FieldSpec::make(13, 1).unwrap();
        let q5 = over(f, "w^2*z^2 + w*(y^3 + z*x*y) + x^3*z + y^4 + z^4");
        let tag = classify_family(&q5).unwrap();
        assert_eq!(tag.tag, FamilyKind::Q5);
        let c = tag.coefficients.unwrap();
        assert_eq!(c.shape, NormalShape::UnitCubic);
        assert!(c.q20.is_zero());
        assert_eq!(c.q11, f.one());
        assert_eq!(c.h(3, 0, 1), f.one());
        // the map is the identity here
        let m = tag.normalizing_map.unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, if i == j { f.one() } else { f.zero() });
            }
        }

        let q6 = over(
            f,
            "w^2*z^2 + w*(y^3 + z*x^2) + 10*x^4 + y^4 + z^4 + x*y^2*z",
        );
        let tag = classify_family(&q6).unwrap();
        assert_eq!(tag.tag, FamilyKind::Q6);
        let c = tag.coefficients.unwrap();
        assert_eq!(c.q20, f.one());
        // h400 = q20^2 / 4 = 10 mod 13
        assert_eq!(c.h(4, 0, 0), f.elem(10));

        let q4 = over(
            f,
            "w^2*z^2 + w*z*(x+y)^2 + x^3*y + x*y^3 + x^3*z - 3*x^2*z^2 + 4*x*z^3 \
             + 3*x^2*y*z - 6*x*y*z^2 + 3*x*y^2*z + 4*y*z^3 - 3*y^2*z^2 + y^3*z",
        );
        let tag = classify_family(&q4).unwrap();
        assert_eq!(tag.tag, FamilyKind::Q4);
        let c = tag.coefficients.unwrap();
        assert_eq!(c.shape, NormalShape::ZeroCubic);
        assert_eq!(c.q20, f.one());
        assert_eq!(c.q11, f.elem(2));
        assert_eq!(c.q02, f.one());
    }

    #[test]
    fn classification_survives_a_coordinate_change() {
        let f = FieldSpec::make(13, 1).unwrap();
        let q5 = over(f, "w^2*z^2 + w*(y^3 + z*x*y) + x^3*z + y^4 + z^4");
        // permutation plus shear, determinant a unit
        let m = [
            [0, 0, 1, 5],
            [1, 0, 0, 2],
            [0, 1, 0, 3],
            [0, 0, 0, 1],
        ]
        .map(|row| row.map(|v: i64| f.elem(v)));
        let moved = q5.compose_linear(&m);
        let tag = classify_family(&moved).unwrap();
        assert_eq!(tag.tag, FamilyKind::Q5);
        // the returned map really does renormalise the moved equation
        let map = tag.normalizing_map.unwrap();
        let scale = tag.scale.unwrap();
        assert_eq!(
            moved.compose_linear(&map).scale(&scale),
            tag.normal_poly.unwrap()
        );
        let c = tag.coefficients.unwrap();
        assert!(c.q20.is_zero());
        assert!(!c.h(3, 0, 1).is_zero());
    }

    #[test]
    fn shape_recognition_rejects_off_form_input() {
        let f = FieldSpec::make(13, 1).unwrap();
        assert!(matches!(
            extract_normal_form(&over(f, "x^4 + y^4 + z^4 + w^4")),
            Err(FamilyError::NotNormalForm)
        ));
        // w-linear term with a z^2 part is not in shape
        assert!(matches!(
            extract_normal_form(&over(f, "w^2*z^2 + w*z^2*x + x^4 + y^4 + z^4")),
            Err(FamilyError::NotNormalForm)
        ));
        let ok = extract_normal_form(&over(f, "w^2*z^2 + w*z*x*y + x^4 + y^4 + z^4")).unwrap();
        assert_eq!(ok.shape, NormalShape::ZeroCubic);
        assert_eq!(ok.h(4, 0, 0), f.one());
        assert_eq!(ok.h(2, 2, 0), f.zero());
    }

    #[test]
    fn line_normalisation_moves_a_planted_line() {
        let f = FieldSpec::make(13, 1).unwrap();
        // built to contain the line through (1,1,0,0) and (0,0,1,1)
        let s = over(
            f,
            "w^2*z^2 + w*(y^3 + x*y*z) + x^3*z - 2*x^2*y*z - x^2*z^2 - z^4",
        );
        let a = ProjPoint::from_ints(f, [1, 1, 0, 0]).unwrap();
        let b = ProjPoint::from_ints(f, [0, 0, 1, 1]).unwrap();
        let line = ProjLine::through(&a, &b).unwrap();
        let out = normalize_line_to_plane(&s, &line).unwrap();
        assert_eq!(out.shape, NormalShape::UnitCubic);
        // the moved line lies in {x = 0} and still on the moved surface
        assert!(out.line.spanning_rows().iter().all(|r| r[0].is_zero()));
        assert!(restricts_to_zero(&out.poly, &out.line));
        // and the whole equation is still in normal shape
        extract_normal_form(&out.poly).unwrap();
    }

    #[test]
    fn line_normalisation_error_cases() {
        let f = FieldSpec::make(13, 1).unwrap();
        let s = over(
            f,
            "w^2*z^2 + w*(y^3 + x*y*z) + x^3*z - 2*x^2*y*z - x^2*z^2 - z^4",
        );
        // the distinguished line {y = z = 0} lies in the double plane
        let a = ProjPoint::from_ints(f, [1, 0, 0, 0]).unwrap();
        let b = ProjPoint::from_ints(f, [0, 0, 0, 1]).unwrap();
        let cone_line = ProjLine::through(&a, &b).unwrap();
        assert!(matches!(
            normalize_line_to_plane(&s, &cone_line),
            Err(FamilyError::LineInCone)
        ));
        // a random line misses the surface
        let c = ProjPoint::from_ints(f, [1, 2, 3, 4]).unwrap();
        let d = ProjPoint::from_ints(f, [0, 1, 1, 2]).unwrap();
        let off = ProjLine::through(&c, &d).unwrap();
        assert!(matches!(
            normalize_line_to_plane(&s, &off),
            Err(FamilyError::LineNotOnSurface)
        ));
        // a line whose plane with the distinguished point has no
        // x-coefficient: engineered on a non-member shape
        let s2 = over(f, "w^2*z^2 + w*y^3 + (z - y)*(x^3 + y^3)");
        let a = ProjPoint::from_ints(f, [0, 1, 1, 0]).unwrap();
        let b = ProjPoint::from_ints(f, [1, 1, 1, 0]).unwrap();
        let excl = ProjLine::through(&a, &b).unwrap();
        assert!(matches!(
            normalize_line_to_plane(&s2, &excl),
            Err(FamilyError::ExcludedPencilPlane)
        ));
    }

    #[test]
    fn normalised_line_keeps_family_membership() {
        let f = FieldSpec::make(13, 1).unwrap();
        let s = over(
            f,
            "w^2*z^2 + w*(y^3 + x*y*z) + x^3*z - 2*x^2*y*z - x^2*z^2 - z^4",
        );
        assert_eq!(classify_family(&s).unwrap().tag, FamilyKind::Q5);
        let a = ProjPoint::from_ints(f, [1, 1, 0, 0]).unwrap();
        let b = ProjPoint::from_ints(f, [0, 0, 1, 1]).unwrap();
        let line = ProjLine::through(&a, &b).unwrap();
        let out = normalize_line_to_plane(&s, &line).unwrap();
        assert_eq!(classify_family(&out.poly).unwrap().tag, FamilyKind::Q5);
    }
}
