//! Projective points, lines in `P^3`, and incidence predicates over a
//! finite field.
//!
//! Everything is canonically represented: points scale their first non-zero
//! coordinate to 1, lines are the reduced row echelon form of their spanning
//! pair. Enumeration is index-based, so ranges can be split across threads
//! while keeping a deterministic overall order.

use crate::field::{Coeff, FieldError, FieldSpec, Fq, SurdRational};
use crate::poly::{parse_poly, MultiPoly, ParseError};
use std::cmp::Ordering;
use std::fmt;

/// Errors raised by incidence predicates.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    /// Both arguments describe the same line.
    #[error("the two lines coincide")]
    SameLine,
    /// A plane argument was not a non-zero homogeneous linear form.
    #[error("plane equation is not a non-zero linear form")]
    NotLinear,
    /// A point configuration contains the same point twice.
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
}

/// A point of `P^(N-1)` with `N` homogeneous coordinates, stored with the
/// first non-zero coordinate normalised to 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjPoint<const N: usize> {
    coords: [Fq; N],
}

impl<const N: usize> ProjPoint<N> {
    /// Normalise a coordinate vector; `None` when all coordinates vanish.
    pub fn new(coords: [Fq; N]) -> Option<Self> {
        let lead = coords.iter().find(|c| !c.is_zero())?;
        let inv = lead.inv();
        Some(ProjPoint { coords: coords.map(|c| c.mul(&inv)) })
    }

    pub fn from_ints(field: FieldSpec, coords: [i64; N]) -> Option<Self> {
        ProjPoint::new(coords.map(|c| field.elem(c)))
    }

    pub fn coords(&self) -> &[Fq; N] {
        &self.coords
    }

    pub fn field(&self) -> FieldSpec {
        self.coords[0].field()
    }
}

impl<const N: usize> PartialOrd for ProjPoint<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const N: usize> Ord for ProjPoint<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.map(|c| c.index()).cmp(&other.coords.map(|c| c.index()))
    }
}

impl<const N: usize> fmt::Debug for ProjPoint<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<const N: usize> fmt::Display for ProjPoint<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Number of points of `P^(N-1)`, i.e. `(q^N - 1) / (q - 1)`.
pub fn point_count(field: FieldSpec, n: usize) -> u64 {
    let q = field.q();
    let mut total = 0u64;
    let mut pw = 1u64;
    for _ in 0..n {
        total += pw;
        pw *= q;
    }
    total
}

/// The `idx`-th point of `P^(N-1)` in the canonical order: leading 1 at
/// coordinate 0 first, later coordinates vary fastest.
pub fn point_from_index<const N: usize>(field: FieldSpec, mut idx: u64) -> ProjPoint<N> {
    let q = field.q();
    for lead in 0..N {
        let free = N - 1 - lead;
        let block = q.pow(free as u32);
        if idx < block {
            let mut coords = [field.zero(); N];
            coords[lead] = field.one();
            for slot in (lead + 1..N).rev() {
                coords[slot] = field.elem_from_index(idx % q);
                idx /= q;
            }
            return ProjPoint { coords };
        }
        idx -= block;
    }
    panic!("point index out of range");
}

/// All points of `P^(N-1)` in index order.
pub fn all_points<const N: usize>(field: FieldSpec) -> impl Iterator<Item = ProjPoint<N>> {
    (0..point_count(field, N)).map(move |i| point_from_index::<N>(field, i))
}

fn det2(a: Fq, b: Fq, c: Fq, d: Fq) -> Fq {
    a.mul(&d).sub(&b.mul(&c))
}

/// Determinant of three points of `P^2` (zero iff collinear).
pub fn det3(r: &[[Fq; 3]; 3]) -> Fq {
    let m0 = det2(r[1][1], r[1][2], r[2][1], r[2][2]);
    let m1 = det2(r[1][0], r[1][2], r[2][0], r[2][2]);
    let m2 = det2(r[1][0], r[1][1], r[2][0], r[2][1]);
    r[0][0].mul(&m0).sub(&r[0][1].mul(&m1)).add(&r[0][2].mul(&m2))
}

/// Determinant of four rows of length 4 (zero iff coplanar).
pub fn det4(r: &[[Fq; 4]; 4]) -> Fq {
    let mut acc = r[0][0].field().zero();
    for col in 0..4 {
        let mut minor = [[r[0][0].field().zero(); 3]; 3];
        for (mi, row) in r.iter().skip(1).enumerate() {
            let mut mj = 0;
            for (j, &v) in row.iter().enumerate() {
                if j != col {
                    minor[mi][mj] = v;
                    mj += 1;
                }
            }
        }
        let term = r[0][col].mul(&det3(&minor));
        acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// All indices `i < j < k` of collinear triples among points of `P^2`.
/// The configuration must be duplicate-free: a repeated point would silently
/// inflate the count, so it is rejected instead.
pub fn collinear_triplets(pts: &[ProjPoint<3>]) -> Result<Vec<[usize; 3]>, GeomError> {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i] == pts[j] {
                return Err(GeomError::DuplicatePoint(i, j));
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let m = [*pts[i].coords(), *pts[j].coords(), *pts[k].coords()];
                if det3(&m).is_zero() {
                    out.push([i, j, k]);
                }
            }
        }
    }
    Ok(out)
}

/// Errors from reading point lists and single projective points.
#[derive(Debug, thiserror::Error)]
pub enum PointsError {
    /// A point does not have the expected number of `:`-separated coordinates.
    #[error("line {line}: expected {expected} coordinates, found {found}")]
    WrongArity { line: usize, expected: usize, found: usize },
    /// A coordinate failed to parse.
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    /// A coordinate parsed to something other than a scalar.
    #[error("line {line}: coordinate {text:?} is not a scalar")]
    NotConstant { line: usize, text: String },
    /// A point with all coordinates zero.
    #[error("line {line}: all coordinates are zero")]
    ZeroPoint { line: usize },
    /// Nothing but comments and blank lines.
    #[error("no points in file")]
    Empty,
    /// A coordinate could not be mapped into the requested field.
    #[error(transparent)]
    Embed(#[from] FieldError),
    /// An exact point whose coordinates all reduce to zero in the field.
    #[error("point {0} reduces to zero modulo the field characteristic")]
    CollapsesModP(usize),
}

/// Parse one exact scalar: an integer, rational, or `a + b*sqrt(d)` literal.
fn parse_scalar(part: &str, line: usize) -> Result<SurdRational, PointsError> {
    let poly = parse_poly(part).map_err(|source| PointsError::Parse { line, source })?;
    if !poly.is_zero() && poly.total_degree() != Some(0) {
        return Err(PointsError::NotConstant { line, text: part.trim().to_string() });
    }
    Ok(poly.coeff([0; 4]))
}

/// Parse a point-list for the collinearity counter: one projective point of
/// the plane per line, three `:`-separated coordinates, each an integer,
/// rational, or `a + b*sqrt(d)` literal. Blank lines and `#` comments are
/// skipped. Points stay exact so one parse can feed several fields.
pub fn parse_points(text: &str) -> Result<Vec<[SurdRational; 3]>, PointsError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let parts: Vec<&str> = body.split(':').collect();
        if parts.len() != 3 {
            return Err(PointsError::WrongArity { line, expected: 3, found: parts.len() });
        }
        let mut coords = Vec::with_capacity(3);
        for part in parts {
            coords.push(parse_scalar(part, line)?);
        }
        let point: [SurdRational; 3] =
            coords.try_into().expect("exactly three coordinates collected");
        if point.iter().all(|c| c.is_zero()) {
            return Err(PointsError::ZeroPoint { line });
        }
        out.push(point);
    }
    if out.is_empty() {
        return Err(PointsError::Empty);
    }
    Ok(out)
}

/// Embed exact plane points into a finite field, normalising projectively.
/// Surd coordinates need the field to contain the relevant square root.
pub fn embed_points(
    pts: &[[SurdRational; 3]],
    field: FieldSpec,
) -> Result<Vec<ProjPoint<3>>, PointsError> {
    pts.iter()
        .enumerate()
        .map(|(i, p)| {
            let c0 = field.embed_surd(&p[0])?;
            let c1 = field.embed_surd(&p[1])?;
            let c2 = field.embed_surd(&p[2])?;
            ProjPoint::new([c0, c1, c2]).ok_or(PointsError::CollapsesModP(i))
        })
        .collect()
}

/// A line of `P^3`, canonically the reduced row echelon form of any spanning
/// pair of points.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProjLine {
    rows: [[Fq; 4]; 2],
}

impl ProjLine {
    /// Line through two points; `None` when they coincide.
    pub fn through(a: &ProjPoint<4>, b: &ProjPoint<4>) -> Option<ProjLine> {
        ProjLine::from_spanning(*a.coords(), *b.coords())
    }

    /// Line spanned by two coordinate vectors; `None` if they are
    /// proportional (or either is zero).
    pub fn from_spanning(a: [Fq; 4], b: [Fq; 4]) -> Option<ProjLine> {
        let mut m = [a, b];
        // row reduce the 2x4 matrix to RREF
        let p0 = (0..4).find(|&j| !m[0][j].is_zero() || !m[1][j].is_zero())?;
        if m[0][p0].is_zero() {
            m.swap(0, 1);
        }
        let inv = m[0][p0].inv();
        m[0] = m[0].map(|c| c.mul(&inv));
        let f = m[1][p0];
        let base = m[0];
        for (dst, b) in m[1].iter_mut().zip(base) {
            *dst = dst.sub(&f.mul(&b));
        }
        let p1 = (p0 + 1..4).find(|&j| !m[1][j].is_zero())?;
        let inv = m[1][p1].inv();
        m[1] = m[1].map(|c| c.mul(&inv));
        let f = m[0][p1];
        let base = m[1];
        for (dst, b) in m[0].iter_mut().zip(base) {
            *dst = dst.sub(&f.mul(&b));
        }
        Some(ProjLine { rows: m })
    }

    pub fn spanning_rows(&self) -> &[[Fq; 4]; 2] {
        &self.rows
    }

    pub fn field(&self) -> FieldSpec {
        self.rows[0][0].field()
    }

    /// Normalised Plücker coordinates `(p01, p02, p03, p12, p13, p23)` with
    /// the first non-zero entry scaled to 1.
    pub fn plucker(&self) -> [Fq; 6] {
        let [a, b] = &self.rows;
        let mut pl = [a[0].field().zero(); 6];
        let mut k = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                pl[k] = det2(a[i], a[j], b[i], b[j]);
                k += 1;
            }
        }
        let lead = pl.iter().find(|c| !c.is_zero()).expect("rank-2 rows");
        let inv = lead.inv();
        pl.map(|c| c.mul(&inv))
    }

    /// The `q + 1` points of the line, in a deterministic order.
    pub fn points(&self) -> Vec<ProjPoint<4>> {
        let field = self.field();
        let [a, b] = self.rows;
        let mut out = Vec::with_capacity(field.q() as usize + 1);
        out.push(ProjPoint::new(b).expect("spanning row is non-zero"));
        for t in field.elements() {
            let pt = [0, 1, 2, 3].map(|i| a[i].add(&t.mul(&b[i])));
            out.push(ProjPoint::new(pt).expect("combination of independent rows"));
        }
        out
    }

    pub fn contains(&self, p: &ProjPoint<4>) -> bool {
        // p is on the line iff rank(rows + p) stays 2: every 3x3 minor of
        // the stacked 3x4 matrix must vanish; equivalently p reduces to zero
        let [a, b] = self.rows;
        let mut v = *p.coords();
        for row in [a, b] {
            let lead = (0..4).find(|&j| !row[j].is_zero()).expect("non-zero row");
            let f = v[lead];
            if !f.is_zero() {
                for j in 0..4 {
                    v[j] = v[j].sub(&f.mul(&row[j]));
                }
            }
        }
        v.iter().all(Fq::is_zero)
    }

    /// Two lines of `P^3` meet iff their spans are coplanar.
    pub fn meets(&self, other: &ProjLine) -> bool {
        let m = [self.rows[0], self.rows[1], other.rows[0], other.rows[1]];
        det4(&m).is_zero()
    }

    /// The intersection point of two distinct lines, `Ok(None)` when they are
    /// skew, `Err(SameLine)` when they coincide.
    pub fn intersection(&self, other: &ProjLine) -> Result<Option<ProjPoint<4>>, GeomError> {
        if self == other {
            return Err(GeomError::SameLine);
        }
        if !self.meets(other) {
            return Ok(None);
        }
        // Reduce both of our spanning rows against the other line's RREF
        // basis; the residuals w0, w1 are proportional (the lines share a
        // point, so the joint span has rank 3) and the proportionality
        // coefficients recover the common point.
        let reduce = |v: [Fq; 4]| -> [Fq; 4] {
            let mut v = v;
            for row in other.rows {
                let lead = (0..4).find(|&j| !row[j].is_zero()).expect("non-zero row");
                let f = v[lead];
                if !f.is_zero() {
                    for j in 0..4 {
                        v[j] = v[j].sub(&f.mul(&row[j]));
                    }
                }
            }
            v
        };
        let w0 = reduce(self.rows[0]);
        let w1 = reduce(self.rows[1]);
        let point = if w0.iter().all(Fq::is_zero) {
            self.rows[0]
        } else if w1.iter().all(Fq::is_zero) {
            self.rows[1]
        } else {
            // w1 = c * w0 with c read off at w0's leading coordinate, so
            // c * rows[0] - rows[1] reduces to zero: it lies on both lines.
            let j = (0..4).find(|&j| !w0[j].is_zero()).expect("non-zero residual");
            let c = w1[j].mul(&w0[j].inv());
            [0, 1, 2, 3].map(|i| c.mul(&self.rows[0][i]).sub(&self.rows[1][i]))
        };
        let p = ProjPoint::new(point).expect("meeting lines share a non-zero point");
        debug_assert!(self.contains(&p) && other.contains(&p));
        Ok(Some(p))
    }

    /// Whether the line lies inside the plane with coefficient vector `h`.
    pub fn in_plane(&self, h: &[Fq; 4]) -> bool {
        self.rows.iter().all(|r| {
            let mut acc = h[0].field().zero();
            for i in 0..4 {
                acc = acc.add(&r[i].mul(&h[i]));
            }
            acc.is_zero()
        })
    }

    /// The plane spanned by two distinct meeting lines (`None` if the lines
    /// are equal or skew).
    pub fn common_plane(&self, other: &ProjLine) -> Option<[Fq; 4]> {
        if self == other || !self.meets(other) {
            return None;
        }
        let third = other
            .rows
            .iter()
            .find(|r| !self.contains(&ProjPoint::new(**r).expect("non-zero row")))
            .expect("distinct lines differ in a point");
        let basis = [self.rows[0], self.rows[1], *third];
        nullspace_of_three(&basis)
    }
}

/// Whether a line lies inside the plane cut out by a homogeneous linear form.
pub fn line_in_plane(l: &ProjLine, h: &MultiPoly<Fq>) -> Result<bool, GeomError> {
    if h.is_zero() || h.total_degree() != Some(1) {
        return Err(GeomError::NotLinear);
    }
    let mut coeffs = [l.field().zero(); 4];
    for (i, c) in coeffs.iter_mut().enumerate() {
        let mut e = [0u16; 4];
        e[i] = 1;
        *c = h.coeff(e);
    }
    Ok(l.in_plane(&coeffs))
}

/// The restriction of a homogeneous quartic to a line, written in the basis
/// given by the line's canonical spanning rows `(A, B)`: entry `k` is the
/// coefficient of `s^(4-k) t^k` in `P(sA + tB)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinaryQuartic {
    pub coeffs: [Fq; 5],
}

impl BinaryQuartic {
    /// The line lies on the surface iff the restriction vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Fq::is_zero)
    }
}

/// Restrict a homogeneous degree-4 polynomial to a line of `P^3`.
pub fn restrict_to_line(p: &MultiPoly<Fq>, l: &ProjLine) -> BinaryQuartic {
    debug_assert!(p.is_homogeneous() && p.total_degree().is_none_or(|d| d == 4));
    let field = l.field();
    let [a, b] = *l.spanning_rows();
    let m = [0, 1, 2, 3].map(|i| [a[i], b[i], field.zero(), field.zero()]);
    let restricted = p.compose_linear(&m);
    let mut coeffs = [field.zero(); 5];
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c = restricted.coeff([(4 - k) as u16, k as u16, 0, 0]);
    }
    BinaryQuartic { coeffs }
}

/// Solve `basis * h = 0` for a rank-3 set of rows: the defining plane.
fn nullspace_of_three(rows: &[[Fq; 4]; 3]) -> Option<[Fq; 4]> {
    let field = rows[0][0].field();
    let mut m = *rows;
    let mut pivots = [usize::MAX; 3];
    let mut rank = 0;
    for col in 0..4 {
        let Some(r) = (rank..3).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, r);
        let inv = m[rank][col].inv();
        m[rank] = m[rank].map(|c| c.mul(&inv));
        let base = m[rank];
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col];
                for (dst, b) in row.iter_mut().zip(base) {
                    *dst = dst.sub(&f.mul(&b));
                }
            }
        }
        pivots[rank] = col;
        rank += 1;
        if rank == 3 {
            break;
        }
    }
    if rank != 3 {
        return None;
    }
    let free = (0..4).find(|c| !pivots.contains(c)).expect("one free column");
    let mut h = [field.zero(); 4];
    h[free] = field.one();
    for (r, &pc) in pivots.iter().enumerate() {
        h[pc] = m[r][free].neg();
    }
    Some(h)
}

/// Number of lines of `P^3`: `q^4 + q^3 + 2q^2 + q + 1`.
pub fn line_count(field: FieldSpec) -> u64 {
    let q = field.q();
    q.pow(4) + q.pow(3) + 2 * q * q + q + 1
}

/// Pivot-pair blocks for RREF line enumeration: `(col0, col1, free count)`.
const LINE_BLOCKS: [(usize, usize, u32); 6] =
    [(0, 1, 4), (0, 2, 3), (0, 3, 2), (1, 2, 2), (1, 3, 1), (2, 3, 0)];

/// The `idx`-th line of `P^3` in the canonical RREF order.
pub fn line_from_index(field: FieldSpec, mut idx: u64) -> ProjLine {
    let q = field.q();
    for &(p0, p1, free) in &LINE_BLOCKS {
        let block = q.pow(free);
        if idx >= block {
            idx -= block;
            continue;
        }
        let mut rows = [[field.zero(); 4]; 2];
        rows[0][p0] = field.one();
        rows[1][p1] = field.one();
        // row 1 free slots: columns past p1; row 0: columns past p0, skip p1
        for slot in (p1 + 1..4).rev() {
            rows[1][slot] = field.elem_from_index(idx % q);
            idx /= q;
        }
        for slot in (p0 + 1..4).rev() {
            if slot == p1 {
                continue;
            }
            rows[0][slot] = field.elem_from_index(idx % q);
            idx /= q;
        }
        return ProjLine { rows };
    }
    panic!("line index out of range");
}

/// All lines of `P^3` in index order.
pub fn all_lines(field: FieldSpec) -> impl Iterator<Item = ProjLine> {
    (0..line_count(field)).map(move |i| line_from_index(field, i))
}

impl PartialOrd for ProjLine {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ProjLine {
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |l: &ProjLine| l.rows.map(|r| r.map(|c| c.index()));
        key(self).cmp(&key(other))
    }
}

impl fmt::Debug for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.plucker();
        write!(f, "line[")?;
        for (i, c) in p.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Parse a projective point given as `a : b : c` (or with `N` components)
/// where each component is a constant expression such as `-5+sqrt(7)`,
/// then embed it into the field.
pub fn parse_projective_point<const N: usize>(
    src: &str,
    field: FieldSpec,
) -> Result<ProjPoint<N>, PointsError> {
    let parts: Vec<&str> = src.split(':').collect();
    if parts.len() != N {
        return Err(PointsError::WrongArity { line: 1, expected: N, found: parts.len() });
    }
    let mut exact = Vec::with_capacity(N);
    for part in parts {
        exact.push(parse_scalar(part, 1)?);
    }
    if exact.iter().all(|c| c.is_zero()) {
        return Err(PointsError::ZeroPoint { line: 1 });
    }
    let mut coords = [field.zero(); N];
    for (c, s) in coords.iter_mut().zip(&exact) {
        *c = field.embed_surd(s)?;
    }
    ProjPoint::new(coords).ok_or(PointsError::CollapsesModP(0))
}
