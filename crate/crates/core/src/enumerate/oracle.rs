//! A second, independent line enumeration for cross-checking.
//!
//! Instead of scanning point pairs, walk the dual space: restrict the
//! quartic to every plane of `P^3` (there are `q^3 + q^2 + q + 1`) and find
//! the lines of that plane on which the restriction vanishes — a plane
//! quartic curve contains a line iff the curve vanishes at all `q + 1` of
//! its points, which for `q ≥ 5` forces a linear factor. The union over all
//! planes is the full line set, since every line lies in `q + 1` planes.
//!
//! Deliberately shares no search logic with the engine (different
//! traversal, different certification), at the price of being `O(q^3)`
//! planes times `O(q^2)` lines — use it for small fields only.

use rayon::prelude::*;
use std::collections::BTreeSet;

use super::engine::p2_line_rows;
use super::plucker_key;
use crate::field::{FieldSpec, Fq};
use crate::geom::{point_count, point_from_index, ProjLine};
use crate::poly::MultiPoly;

/// Enumerate all lines of `P^3(F_q)` on the quartic by plane restriction.
/// Returns the same canonical order a [`super::LineSet`] would use after
/// construction from this list.
pub fn lines_by_plane_pencil(s: &MultiPoly<Fq>) -> Vec<ProjLine> {
    assert!(
        s.is_homogeneous() && s.total_degree() == Some(4),
        "plane-pencil enumeration expects a homogeneous quartic"
    );
    let field = s.unit().field();
    assert!(
        !field.q().is_multiple_of(2) && !field.q().is_multiple_of(3),
        "vanishing at q + 1 points certifies a factor only for characteristic at least 5"
    );
    let candidates = p2_line_rows(field);
    let found: BTreeSet<ProjLine> = (0..point_count(field, 4))
        .into_par_iter()
        .flat_map_iter(|h_idx| {
            // the plane is the kernel of the dual vector h
            let h = point_from_index::<4>(field, h_idx);
            let basis = plane_basis(h.coords(), field);
            // restriction of S to the plane in basis coordinates (u, v, t)
            let m = [0, 1, 2, 3].map(|i| [basis[0][i], basis[1][i], basis[2][i], field.zero()]);
            let t = s.compose_linear(&m);
            let mut lines = Vec::new();
            for pair in &candidates {
                if t.is_zero() || p2_line_vanishes(&t, pair, field) {
                    let a = combine(&basis, &pair[0], field);
                    let b = combine(&basis, &pair[1], field);
                    lines.push(
                        ProjLine::from_spanning(a, b).expect("independent plane directions"),
                    );
                }
            }
            lines
        })
        .collect();
    let mut out: Vec<ProjLine> = found.into_iter().collect();
    out.sort_by_key(plucker_key);
    out
}

/// A spanning basis (three rows) of the plane `{h · x = 0}`.
fn plane_basis(h: &[Fq; 4], field: FieldSpec) -> [[Fq; 4]; 3] {
    let pivot = (0..4).find(|&j| !h[j].is_zero()).expect("non-zero dual vector");
    let inv = h[pivot].inv();
    let mut basis = [[field.zero(); 4]; 3];
    let mut k = 0;
    for j in 0..4 {
        if j == pivot {
            continue;
        }
        basis[k][j] = field.one();
        basis[k][pivot] = h[j].mul(&inv).neg();
        k += 1;
    }
    basis
}

/// Whether the restricted quartic vanishes at all `q + 1` points of a line
/// of `P^2` given by its spanning rows.
fn p2_line_vanishes(t: &MultiPoly<Fq>, pair: &[[Fq; 3]; 2], field: FieldSpec) -> bool {
    let eval_at = |v: [Fq; 3]| t.eval(&[v[0], v[1], v[2], field.zero()]);
    if !eval_at(pair[0]).is_zero() {
        return false;
    }
    for c in field.elements() {
        let v = [0, 1, 2].map(|i| c.mul(&pair[0][i]).add(&pair[1][i]));
        if !eval_at(v).is_zero() {
            return false;
        }
    }
    true
}

/// Map a `P^2` row through the plane basis back into `P^3`.
fn combine(basis: &[[Fq; 4]; 3], r: &[Fq; 3], field: FieldSpec) -> [Fq; 4] {
    let mut out = [field.zero(); 4];
    for (row, c) in basis.iter().zip(r) {
        for (o, b) in out.iter_mut().zip(row) {
            *o = o.add(&c.mul(b));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::lines_on_poly;
    use crate::poly::parse_poly;

    fn over(field: FieldSpec, src: &str) -> MultiPoly<Fq> {
        parse_poly(src)
            .unwrap()
            .try_map_coeffs(field.one(), |c| field.embed_surd(c))
            .unwrap()
    }

    fn assert_oracle_match(field: FieldSpec, src: &str, name: &str) {
        let s = over(field, src);
        let engine = lines_on_poly(&s, name);
        let oracle = lines_by_plane_pencil(&s);
        assert_eq!(
            engine.lines(),
            &oracle[..],
            "engine and plane-pencil disagree on {name} over F_{}",
            field.q()
        );
    }

    #[test]
    fn oracle_agrees_on_small_surfaces_over_f5() {
        // the Fermat quartic has no F_5 points at all (fourth powers are
        // 0 or 1 and at most four coordinates), hence no lines
        let f = FieldSpec::make(5, 1).unwrap();
        let s = over(f, "x^4 + y^4 + z^4 + w^4");
        assert!(lines_by_plane_pencil(&s).is_empty());
        assert_oracle_match(f, "x^4 + y^4 + z^4 + w^4", "fermat");
        assert_oracle_match(
            f,
            "w^2*z^2 + w*(y^3 + x*y*z) + x^3*z - 2*x^2*y*z - x^2*z^2 - z^4",
            "planted",
        );
        assert_oracle_match(f, "x*y*z*w", "planes");
    }

    #[test]
    fn oracle_agrees_on_a_mixed_surface_over_f7() {
        let f = FieldSpec::make(7, 1).unwrap();
        assert_oracle_match(f, "x^4 - y^4 + z^4 - w^4", "alternating");
        assert_oracle_match(f, "x^3*y + y^3*z + z^3*w + w^3*x", "cyclic");
    }
}
