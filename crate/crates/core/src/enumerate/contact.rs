//! Local line geometry: lines through a singular point, the order-of-contact
//! test at a smooth point, and incidence with a parametrised curve.
//!
//! All three work in a chart at the distinguished point: move it to
//! `(0:0:0:1)`, set `w = 1` and split the local equation into graded parts
//! `f_m + ... + f_4` by total degree. A direction `v` spans a line inside
//! the surface iff every part vanishes at `v`, and has contact order at
//! least `k` iff the parts up to degree `k - 1` do.

use std::fmt;

use super::{plucker_key, EnumerateError, LineSet};
use crate::field::{FieldSpec, Fq};
use crate::geom::{all_points, ProjLine, ProjPoint};
use crate::poly::{compose_on_curve, MultiPoly, UniPoly, W};
use crate::surface::{chart_matrix, multiplicity_at};

/// Graded parts of the local equation at `p` (chart coordinates, `w = 1`),
/// together with the chart matrix used to map directions back.
fn local_parts(
    s: &MultiPoly<Fq>,
    p: &ProjPoint<4>,
) -> ([[Fq; 4]; 4], Vec<MultiPoly<Fq>>) {
    let field = p.field();
    let chart = chart_matrix(p);
    let local = s
        .compose_linear(&chart)
        .substitute(W, &MultiPoly::constant(field.one()));
    (chart, local.parts_by_total_degree())
}

/// The line spanned by `p` and the chart direction `v`.
fn line_from_direction(chart: &[[Fq; 4]; 4], p: &ProjPoint<4>, v: &ProjPoint<3>) -> ProjLine {
    let dir = [0, 1, 2, 3].map(|i| {
        let mut acc = p.field().zero();
        for (j, c) in v.coords().iter().enumerate() {
            acc = acc.add(&chart[i][j].mul(c));
        }
        acc
    });
    ProjLine::from_spanning(*p.coords(), dir)
        .expect("chart directions are independent of the centre")
}

/// The lines of the surface through a singular point.
///
/// In the chart the local equation is `f_m + ... + f_4` with `m ≥ 2` the
/// multiplicity; a direction spans a line on `S` exactly when all parts
/// vanish on it, so the candidates are cut from the projectivised tangent
/// cone `{f_m = 0}` by the higher parts. The scan is exhaustive over
/// `P^2(F_q)` with the cone tested first.
///
/// Smooth points are rejected: through a smooth point the same scan would
/// be the flecnodal question, handled by [`flecnodal_test`].
pub fn lines_through_point(
    s: &MultiPoly<Fq>,
    p: &ProjPoint<4>,
) -> Result<Vec<ProjLine>, EnumerateError> {
    let (mult, _) = multiplicity_at(s, p)?;
    if mult < 2 {
        return Err(EnumerateError::SmoothPoint);
    }
    let field = p.field();
    let (chart, parts) = local_parts(s, p);
    let mut out: Vec<ProjLine> = Vec::new();
    for v in all_points::<3>(field) {
        let pt = [v.coords()[0], v.coords()[1], v.coords()[2], field.zero()];
        if parts.iter().skip(mult as usize).all(|g| g.eval(&pt).is_zero()) {
            out.push(line_from_direction(&chart, p, &v));
        }
    }
    out.sort_by_key(plucker_key);
    Ok(out)
}

/// Outcome of the order-of-contact test at a smooth point.
#[derive(Clone, Debug)]
pub struct FlecnodalResult {
    /// True when some line has contact order at least 4 at the point.
    pub is_flecnodal: bool,
    /// A line realising the contact, when one exists (the first in scan
    /// order; its restriction need not vanish identically).
    pub witness: Option<ProjLine>,
}

/// Whether some line through the smooth point `p` meets the surface with
/// contact order at least 4 there: the degree-1, 2 and 3 parts of the local
/// equation must share a root direction in `P^2(F_q)`.
pub fn flecnodal_test(
    s: &MultiPoly<Fq>,
    p: &ProjPoint<4>,
) -> Result<FlecnodalResult, EnumerateError> {
    let (mult, _) = multiplicity_at(s, p)?;
    if mult >= 2 {
        return Err(EnumerateError::SingularPoint);
    }
    let field = p.field();
    let (chart, parts) = local_parts(s, p);
    for v in all_points::<3>(field) {
        let pt = [v.coords()[0], v.coords()[1], v.coords()[2], field.zero()];
        if (1..=3).all(|k| parts.get(k).is_none_or(|g| g.eval(&pt).is_zero())) {
            return Ok(FlecnodalResult {
                is_flecnodal: true,
                witness: Some(line_from_direction(&chart, p, &v)),
            });
        }
    }
    Ok(FlecnodalResult { is_flecnodal: false, witness: None })
}

/// What a [`CurveParam`] claims to parametrise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Line,
    Conic,
    Cubic,
}

impl CurveKind {
    /// The top coordinate degree a parametrisation of this kind must have.
    pub fn parameter_degree(self) -> usize {
        match self {
            CurveKind::Line => 1,
            CurveKind::Conic => 2,
            CurveKind::Cubic => 3,
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::Line => "line",
            CurveKind::Conic => "conic",
            CurveKind::Cubic => "cubic",
        })
    }
}

/// A rational curve given by four coordinate polynomials in one parameter,
/// plus the limit points missed by the parametrisation (for the closure).
#[derive(Clone, Debug)]
pub struct CurveParam {
    kind: CurveKind,
    map: [UniPoly<Fq>; 4],
    excluded: Vec<ProjPoint<4>>,
}

impl CurveParam {
    /// Validate that the top coordinate degree matches the declared kind.
    pub fn new(
        kind: CurveKind,
        map: [UniPoly<Fq>; 4],
        excluded: Vec<ProjPoint<4>>,
    ) -> Result<Self, EnumerateError> {
        let got = map.iter().filter_map(UniPoly::degree).max().unwrap_or(0);
        let want = kind.parameter_degree();
        if got != want {
            return Err(EnumerateError::DegreeMismatch { kind, want, got });
        }
        Ok(CurveParam { kind, map, excluded })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn map(&self) -> &[UniPoly<Fq>; 4] {
        &self.map
    }

    pub fn excluded_points(&self) -> &[ProjPoint<4>] {
        &self.excluded
    }

    pub fn field(&self) -> FieldSpec {
        self.map[0].unit().field()
    }

    /// All rational points of the closure: the parametrised points over
    /// every `t ∈ F_q` plus the stored limit points, without repeats.
    pub fn points(&self) -> Vec<ProjPoint<4>> {
        let mut out: Vec<ProjPoint<4>> = Vec::new();
        for t in self.field().elements() {
            let coords = [0, 1, 2, 3].map(|i| self.map[i].eval(&t));
            if let Some(pt) = ProjPoint::new(coords) {
                if !out.contains(&pt) {
                    out.push(pt);
                }
            }
        }
        for e in &self.excluded {
            if !out.contains(e) {
                out.push(*e);
            }
        }
        out
    }

    /// Whether the closure lies on the surface: the composed equation is the
    /// zero polynomial in `t` and every limit point satisfies it too.
    pub fn lies_on(&self, s: &MultiPoly<Fq>) -> bool {
        compose_on_curve(s, &self.map).is_zero()
            && self.excluded.iter().all(|e| s.eval(e.coords()).is_zero())
    }
}

/// Lines of a set meeting a curve, with their set indices.
#[derive(Clone, Debug)]
pub struct CurveMeeting {
    pub count: usize,
    pub indices: Vec<usize>,
    pub lines: Vec<ProjLine>,
}

/// The lines of `set` that meet the closure of the parametrised curve in at
/// least one rational point. A line whose every closure point lies on it is
/// treated as a component of the curve, not as meeting it — so a line set
/// queried against one of its own lines returns exactly that line's
/// incidence-graph neighbours.
pub fn lines_meeting_curve(
    s: &MultiPoly<Fq>,
    set: &LineSet,
    curve: &CurveParam,
) -> Result<CurveMeeting, EnumerateError> {
    if !curve.lies_on(s) {
        return Err(EnumerateError::CurveNotOnSurface);
    }
    let pts = curve.points();
    let mut indices = Vec::new();
    let mut lines = Vec::new();
    for (i, l) in set.lines().iter().enumerate() {
        let hits = pts.iter().filter(|pt| l.contains(pt)).count();
        if hits > 0 && hits < pts.len() {
            indices.push(i);
            lines.push(*l);
        }
    }
    Ok(CurveMeeting { count: indices.len(), indices, lines })
}
