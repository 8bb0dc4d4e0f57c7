//! Lines on a quartic surface: enumeration, incidence structure, and local
//! line geometry.
//!
//! The centre of the module is [`lines_on_surface`], which finds every line
//! of `P^3(F_q)` contained in a quartic by an `O(q^2)` plane-section pair
//! scan, certified pointwise (a binary quartic vanishing at five distinct
//! points is identically zero). Around it sit:
//!
//! * [`LineSet`] — the deduplicated result, ordered by Plücker key so that
//!   parallel runs are bit-identical;
//! * [`incidence_graph`] — which lines meet which, valences, connected
//!   components, coplanar quadruples, and the maximum pairwise-skew subset
//!   (exact up to 40 lines, a greedy lower bound beyond);
//! * [`lines_through_point`] — the lines through a singular point, read off
//!   the graded parts of the local equation;
//! * [`flecnodal_test`] — whether a smooth point admits a line with contact
//!   order at least 4;
//! * [`lines_meeting_curve`] — incidence of a line set with a parametrised
//!   curve, limit points included;
//! * [`lines_by_plane_pencil`] — a slow, independent second enumeration
//!   (restrict to every plane, look for linear factors) used to cross-check
//!   the main engine.

mod contact;
mod engine;
mod incidence;
mod oracle;

pub use contact::{
    flecnodal_test, lines_meeting_curve, lines_through_point, CurveKind, CurveMeeting,
    CurveParam, FlecnodalResult,
};
pub use engine::{lines_on_poly, lines_on_surface};
pub use incidence::{incidence_graph, DisjointBound, IncidenceGraph};
pub use oracle::lines_by_plane_pencil;

use crate::field::{FieldSpec, Fq};
use crate::geom::{restrict_to_line, ProjLine};
use crate::poly::MultiPoly;
use crate::surface::SurfaceError;

/// Errors raised while enumerating or analysing line configurations.
#[derive(Debug, thiserror::Error)]
pub enum EnumerateError {
    /// A surface coefficient has no image in the requested field.
    #[error("surface does not embed into the requested field: {0}")]
    Embedding(#[source] SurfaceError),
    /// Propagated surface-level failure (point off the surface, etc.).
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    /// The point is smooth, but the operation needs a singular one.
    #[error("the point is a smooth point of the surface")]
    SmoothPoint,
    /// The point is singular, but the operation needs a smooth one.
    #[error("the point is a singular point of the surface")]
    SingularPoint,
    /// The parametrised curve (or one of its limit points) is off the surface.
    #[error("the parametrised curve does not lie on the surface")]
    CurveNotOnSurface,
    /// A curve parametrisation whose degree does not match its declared kind.
    #[error("a {kind} parametrisation must have top coordinate degree {want}, found {got}")]
    DegreeMismatch { kind: CurveKind, want: usize, got: usize },
}

/// The lines of `P^3(F_q)` contained in a named surface, sorted by
/// normalised Plücker key and free of duplicates.
#[derive(Clone, Debug)]
pub struct LineSet {
    surface: String,
    field: FieldSpec,
    lines: Vec<ProjLine>,
}

/// Sort key: the normalised Plücker coordinates as index values.
fn plucker_key(l: &ProjLine) -> [u64; 6] {
    l.plucker().map(|c| c.index())
}

impl LineSet {
    /// Build a set from raw lines: sorts by Plücker key and removes
    /// duplicates. The caller is trusted on the on-surface property; use
    /// [`LineSet::verify_on`] to check it.
    pub fn new(surface: &str, field: FieldSpec, mut lines: Vec<ProjLine>) -> Self {
        lines.sort_by_key(plucker_key);
        lines.dedup();
        debug_assert!(
            lines.windows(2).all(|w| plucker_key(&w[0]) != plucker_key(&w[1])),
            "distinct lines share a Plücker key"
        );
        LineSet { surface: surface.to_string(), field, lines }
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Position of a line in the canonical order, if present.
    pub fn index_of(&self, l: &ProjLine) -> Option<usize> {
        self.lines.binary_search_by_key(&plucker_key(l), plucker_key).ok()
    }

    /// Check the defining invariant against an embedded equation: every
    /// member line restricts to the zero binary quartic.
    pub fn verify_on(&self, s: &MultiPoly<Fq>) -> bool {
        self.lines.iter().all(|l| restrict_to_line(s, l).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::line_from_index;

    #[test]
    fn construction_sorts_and_dedupes() {
        let f = FieldSpec::make(7, 1).unwrap();
        let a = line_from_index(f, 5);
        let b = line_from_index(f, 300);
        let set = LineSet::new("demo", f, vec![b, a, b]);
        assert_eq!(set.len(), 2);
        assert!(plucker_key(&set.lines()[0]) < plucker_key(&set.lines()[1]));
        assert!(set.index_of(&a).is_some());
        assert!(set.index_of(&b).is_some());
        assert_eq!(set.surface(), "demo");
        let c = line_from_index(f, 700);
        if c != a && c != b {
            assert_eq!(set.index_of(&c), None);
        }
    }
}
