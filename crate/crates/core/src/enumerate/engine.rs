//! The main line-enumeration engine.
//!
//! Every line of `P^3` meets every plane, so a line on the surface `S` can
//! be reconstructed from two of its intersection points with coordinate
//! planes: pick the first coordinate plane `H` not contained in `S` (the
//! base); a line meets `H` at a surface point `P`, and it also meets the
//! plane complementary to `P`'s pivot coordinate at a second surface point
//! `R != P` (the pivot coordinate is 1 on `P` and 0 on that plane). Both
//! scan lists are plane sections of `S` — `O(q)` points each — so the pair
//! scan costs `O(q^2)` certifications instead of visiting all `~q^4` lines.
//!
//! Each candidate pair is certified by evaluating `S` at `P + tR` for
//! `t = 1, 2, 3`: together with `P` and `R` these are five distinct points
//! of the candidate line, and a binary quartic with five roots vanishes
//! identically. This needs `1, 2, 3` distinct and non-zero, hence
//! characteristic at least 5.
//!
//! The one surface with no admissible base plane is the product of all four
//! coordinate planes; its lines (the lines of those planes) are listed
//! directly.

use rayon::prelude::*;
use std::collections::BTreeSet;

use super::{EnumerateError, LineSet};
use crate::field::{FieldSpec, Fq};
use crate::geom::{point_count, point_from_index, ProjLine, ProjPoint};
use crate::poly::MultiPoly;
use crate::surface::Surface;

/// Enumerate the lines of a named surface over a field.
///
/// Embeds the exact coefficients first; a coefficient with no image in the
/// field (a missing square root, a denominator divisible by `p`) raises
/// [`EnumerateError::Embedding`].
pub fn lines_on_surface(surface: &Surface, field: FieldSpec) -> Result<LineSet, EnumerateError> {
    let poly = surface.embed(field).map_err(EnumerateError::Embedding)?;
    Ok(lines_on_poly(&poly, surface.name()))
}

/// Enumerate the lines of an already-embedded homogeneous quartic.
pub fn lines_on_poly(s: &MultiPoly<Fq>, surface: &str) -> LineSet {
    assert!(
        s.is_homogeneous() && s.total_degree() == Some(4),
        "line enumeration expects a homogeneous quartic"
    );
    let field = s.unit().field();
    assert!(
        !field.q().is_multiple_of(2) && !field.q().is_multiple_of(3),
        "five-point line certification needs characteristic at least 5"
    );
    let Some(base) = (0..4).find(|&i| !coordinate_divides(s, i)) else {
        // all four coordinate planes divide S, so S = c*xyzw
        return quadruple_plane_lines(surface, field);
    };
    let sections: Vec<Vec<ProjPoint<4>>> = (0..4).map(|i| plane_section(s, i)).collect();
    let found: BTreeSet<ProjLine> = sections[base]
        .par_iter()
        .map(|p| {
            let pivot = (0..4)
                .find(|&j| !p.coords()[j].is_zero())
                .expect("projective point has a pivot");
            let mut out = Vec::new();
            for r in &sections[pivot] {
                // r lives in the plane where p's pivot coordinate vanishes,
                // so r and p are independent and span a genuine line
                if line_certified(s, p, r) {
                    out.push(ProjLine::through(p, r).expect("independent points"));
                }
            }
            out
        })
        .flatten()
        .collect();
    LineSet::new(surface, field, found.into_iter().collect())
}

/// Whether the coordinate `var` divides every term (the plane lies on `S`).
fn coordinate_divides(s: &MultiPoly<Fq>, var: usize) -> bool {
    s.terms().all(|(e, _)| e[var] > 0)
}

/// The surface points in the coordinate plane `{x_skip = 0}`.
fn plane_section(s: &MultiPoly<Fq>, skip: usize) -> Vec<ProjPoint<4>> {
    let field = s.unit().field();
    (0..point_count(field, 3))
        .into_par_iter()
        .filter_map(|idx| {
            let p3 = point_from_index::<3>(field, idx);
            let mut coords = [field.zero(); 4];
            let mut k = 0;
            for (i, c) in coords.iter_mut().enumerate() {
                if i != skip {
                    *c = p3.coords()[k];
                    k += 1;
                }
            }
            let pt = ProjPoint::new(coords).expect("non-zero embedding");
            s.eval(pt.coords()).is_zero().then_some(pt)
        })
        .collect()
}

/// Five-point certificate: `p` and `r` are already surface points, so the
/// span is on `S` iff `S(p + t r) = 0` for `t = 1, 2, 3` as well.
fn line_certified(s: &MultiPoly<Fq>, p: &ProjPoint<4>, r: &ProjPoint<4>) -> bool {
    let field = p.field();
    for t in [1i64, 2, 3] {
        let tt = field.elem(t);
        let pt = [0, 1, 2, 3].map(|i| p.coords()[i].add(&tt.mul(&r.coords()[i])));
        if !s.eval(&pt).is_zero() {
            return false;
        }
    }
    true
}

/// RREF spanning pairs for every line of `P^2`, by pivot block:
/// `q^2 + q + 1` matrices in a deterministic order.
pub(crate) fn p2_line_rows(field: FieldSpec) -> Vec<[[Fq; 3]; 2]> {
    let zero = field.zero();
    let one = field.one();
    let mut out = Vec::with_capacity((field.q() * field.q() + field.q() + 1) as usize);
    for a in field.elements() {
        for b in field.elements() {
            out.push([[one, zero, a], [zero, one, b]]);
        }
    }
    for a in field.elements() {
        out.push([[one, a, zero], [zero, zero, one]]);
    }
    out.push([[zero, one, zero], [zero, zero, one]]);
    out
}

/// Lines of the product of the four coordinate planes: the union of each
/// plane's full line set.
fn quadruple_plane_lines(surface: &str, field: FieldSpec) -> LineSet {
    let mut all = BTreeSet::new();
    for skip in 0..4 {
        for pair in p2_line_rows(field) {
            let embed = |r: &[Fq; 3]| {
                let mut v = [field.zero(); 4];
                let mut k = 0;
                for (i, slot) in v.iter_mut().enumerate() {
                    if i != skip {
                        *slot = r[k];
                        k += 1;
                    }
                }
                v
            };
            let l = ProjLine::from_spanning(embed(&pair[0]), embed(&pair[1]))
                .expect("independent rows stay independent");
            all.insert(l);
        }
    }
    LineSet::new(surface, field, all.into_iter().collect())
}
