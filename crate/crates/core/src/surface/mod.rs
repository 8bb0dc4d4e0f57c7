//! Quartic surfaces in `P^3`: exact equations, the on-disk format, and
//! reductions to finite fields.
//!
//! A [`Surface`] stores its defining polynomial with exact scalars, either
//! plain rationals or elements of a fixed real quadratic extension
//! `Q(sqrt(d))`. All structural analysis (singular points, family
//! classification, line counts) happens after [`Surface::embed`] moves the
//! equation into a concrete finite field.
//!
//! # File format
//!
//! A surface file is plain UTF-8 text: three header lines, then the equation
//! on a single line. Blank lines and `#` comments may appear between records
//! but nothing else. Headers can come in any order; the canonical order is
//! the one written by [`Surface::canonical_text`]:
//!
//! ```text
//! name: fermat
//! source: sum of fourth powers
//! domain: rational
//! x^4 + y^4 + z^4 + w^4
//! ```
//!
//! `domain` is `rational` or `surd(d)` with `d` a square-free integer, and
//! every coefficient of the equation must live in the declared domain.
//! Re-serialising a loaded surface reproduces the canonical bytes exactly,
//! so files written by this module are stable under round-trips.

mod family;
mod singular;

pub use family::{
    classify_family, extract_normal_form, normalize_line_to_plane, FamilyError, FamilyKind,
    FamilyTag, NormalCoefficients, NormalShape, NormalizedLine,
};
pub use singular::{
    classify_double_point, classify_double_point_trunc, cone_rank, multiplicity_at,
    singular_points, CurveWitness, SingularClass, SingularRecord, SingularScan,
    DEFAULT_TRUNCATION,
};
pub(crate) use singular::chart_matrix;

use crate::field::{Coeff, FieldError, FieldSpec, Fq, SurdRational};
use crate::poly::{parse_poly, MultiPoly, ParseError};
use std::fmt;
use std::path::Path;

/// Scalar domain of a surface equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// All coefficients are rational numbers.
    Rational,
    /// Coefficients live in `Q(sqrt(d))` for this square-free `d`.
    Surd(i64),
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Rational => write!(f, "rational"),
            Domain::Surd(d) => write!(f, "surd({d})"),
        }
    }
}

/// Errors from loading, validating, or embedding a surface.
#[derive(Debug, thiserror::Error)]
pub enum SurfaceError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("missing `{0}:` header")]
    MissingKey(&'static str),
    #[error("line {line}: unrecognised content {text:?}")]
    UnknownLine { line: usize, text: String },
    #[error("line {line}: header `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("invalid domain {0:?} (expected `rational` or `surd(d)`)")]
    BadDomain(String),
    #[error("equation mixes distinct surds {0} and {1}")]
    MixedSurds(i64, i64),
    #[error("equation uses sqrt({found}) outside the declared domain `{declared}`")]
    DomainMismatch { declared: Domain, found: i64 },
    #[error("equation is identically zero")]
    ZeroEquation,
    #[error("equation is not homogeneous")]
    NotHomogeneous,
    #[error("equation has degree {0}, expected 4")]
    NotDegree4(u16),
    #[error(transparent)]
    Embed(#[from] FieldError),
    #[error("point does not lie on the surface")]
    PointNotOnSurface,
    #[error("point has multiplicity {0}, not a double point")]
    NotDoublePoint(u32),
}

/// A quartic surface with an exact defining equation.
#[derive(Debug, Clone)]
pub struct Surface {
    name: String,
    source: String,
    domain: Domain,
    equation: MultiPoly<SurdRational>,
    irreducible: Option<bool>,
}

impl Surface {
    /// Build a surface from an already-parsed equation, inferring the domain
    /// from its coefficients. Fails unless the equation is a non-zero
    /// homogeneous quartic.
    pub fn from_equation(
        name: impl Into<String>,
        source: impl Into<String>,
        equation: MultiPoly<SurdRational>,
    ) -> Result<Surface, SurfaceError> {
        let domain = infer_domain(&equation)?;
        validate_quartic(&equation)?;
        Ok(Surface {
            name: name.into(),
            source: source.into(),
            domain,
            equation,
            irreducible: None,
        })
    }

    /// Parse a surface from file text.
    pub fn parse(text: &str) -> Result<Surface, SurfaceError> {
        let mut name: Option<String> = None;
        let mut source: Option<String> = None;
        let mut domain: Option<Domain> = None;
        let mut expr: Option<(usize, &str)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let slot = |key: &str| line.strip_prefix(key).map(|rest| rest.trim().to_string());
            if let Some(v) = slot("name:") {
                store_header(&mut name, v, idx + 1, "name")?;
            } else if let Some(v) = slot("source:") {
                store_header(&mut source, v, idx + 1, "source")?;
            } else if let Some(v) = slot("domain:") {
                if domain.is_some() {
                    return Err(SurfaceError::DuplicateKey { line: idx + 1, key: "domain".into() });
                }
                domain = Some(parse_domain(&v)?);
            } else if expr.is_none() {
                expr = Some((idx + 1, raw));
            } else {
                return Err(SurfaceError::UnknownLine { line: idx + 1, text: raw.to_string() });
            }
        }
        let name = name.ok_or(SurfaceError::MissingKey("name"))?;
        let source = source.ok_or(SurfaceError::MissingKey("source"))?;
        let declared = domain.ok_or(SurfaceError::MissingKey("domain"))?;
        let (line, src) = expr.ok_or(SurfaceError::MissingKey("equation"))?;

        // The exact scalars support a single surd per computation, so a
        // mixture like sqrt(2)+sqrt(3) must be rejected before arithmetic.
        let kernels = surd_kernels(src);
        if kernels.len() > 1 {
            return Err(SurfaceError::MixedSurds(kernels[0], kernels[1]));
        }
        let equation =
            parse_poly(src).map_err(|source| SurfaceError::Parse { line, source })?;
        let inferred = infer_domain(&equation)?;
        match (declared, inferred) {
            (Domain::Surd(a), Domain::Surd(b)) if a != b => {
                return Err(SurfaceError::DomainMismatch { declared, found: b });
            }
            (Domain::Rational, Domain::Surd(b)) => {
                return Err(SurfaceError::DomainMismatch { declared, found: b });
            }
            // Declaring surd(d) for a rational equation is allowed: the
            // domain is a statement about the ambient ring, not the support.
            _ => {}
        }
        validate_quartic(&equation)?;
        Ok(Surface { name, source, domain: declared, equation, irreducible: None })
    }

    /// Load a surface from a file.
    pub fn load(path: impl AsRef<Path>) -> Result<Surface, SurfaceError> {
        Surface::parse(&std::fs::read_to_string(path)?)
    }

    /// The canonical serialisation: three headers and the equation, each
    /// newline-terminated. Loading this text and re-serialising reproduces
    /// the same bytes.
    pub fn canonical_text(&self) -> String {
        format!(
            "name: {}\nsource: {}\ndomain: {}\n{}\n",
            self.name, self.source, self.domain, self.equation
        )
    }

    /// Write the canonical serialisation to a file.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SurfaceError> {
        Ok(std::fs::write(path, self.canonical_text())?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// The exact defining equation.
    pub fn equation(&self) -> &MultiPoly<SurdRational> {
        &self.equation
    }

    /// Whether the surface is known to be irreducible: `None` until someone
    /// asserts it. Loading never sets this flag.
    pub fn irreducible(&self) -> Option<bool> {
        self.irreducible
    }

    pub fn set_irreducible(&mut self, known: bool) {
        self.irreducible = Some(known);
    }

    /// Reduce the equation into `field`. Fails when a coefficient does not
    /// exist there: a prime divides a denominator, or the surd has no square
    /// root in the field.
    pub fn embed(&self, field: FieldSpec) -> Result<MultiPoly<Fq>, SurfaceError> {
        Ok(self.equation.try_map_coeffs(field.one(), |c| field.embed_surd(c))?)
    }

    /// Singular-locus scan over a finite field (see [`singular_points`]).
    pub fn singular_points_over(&self, field: FieldSpec) -> Result<SingularScan, SurfaceError> {
        Ok(singular_points(&self.embed(field)?))
    }

    /// Family classification over a finite field (see [`classify_family`]).
    pub fn classify_family_over(&self, field: FieldSpec) -> Result<FamilyTag, FamilyError> {
        classify_family(&self.embed(field)?)
    }
}

fn store_header(
    slot: &mut Option<String>,
    value: String,
    line: usize,
    key: &str,
) -> Result<(), SurfaceError> {
    if slot.is_some() {
        return Err(SurfaceError::DuplicateKey { line, key: key.to_string() });
    }
    *slot = Some(value);
    Ok(())
}

fn parse_domain(text: &str) -> Result<Domain, SurfaceError> {
    if text == "rational" {
        return Ok(Domain::Rational);
    }
    if let Some(inner) = text.strip_prefix("surd(").and_then(|t| t.strip_suffix(')')) {
        if let Ok(d) = inner.trim().parse::<i64>() {
            // Route through the scalar constructor so square-free checking
            // lives in one place.
            return match SurdRational::sqrt_of(d) {
                Ok(_) => Ok(Domain::Surd(d)),
                Err(_) => Err(SurfaceError::BadDomain(text.to_string())),
            };
        }
    }
    Err(SurfaceError::BadDomain(text.to_string()))
}

/// Distinct integers `k` appearing as `sqrt(k)` in the raw expression text.
fn surd_kernels(src: &str) -> Vec<i64> {
    let mut found = Vec::new();
    let mut rest = src;
    while let Some(at) = rest.find("sqrt(") {
        rest = &rest[at + 5..];
        let end = rest.find(')').unwrap_or(rest.len());
        if let Ok(k) = rest[..end].trim().parse::<i64>() {
            if !found.contains(&k) {
                found.push(k);
            }
        }
    }
    found
}

fn infer_domain(p: &MultiPoly<SurdRational>) -> Result<Domain, SurfaceError> {
    let mut domain = Domain::Rational;
    for (_, c) in p.terms() {
        let d = c.surd_index();
        if d == 0 {
            continue;
        }
        match domain {
            Domain::Rational => domain = Domain::Surd(d),
            Domain::Surd(prev) if prev == d => {}
            Domain::Surd(prev) => return Err(SurfaceError::MixedSurds(prev, d)),
        }
    }
    Ok(domain)
}

fn validate_quartic<C: Coeff>(p: &MultiPoly<C>) -> Result<(), SurfaceError> {
    let Some(deg) = p.total_degree() else {
        return Err(SurfaceError::ZeroEquation);
    };
    if !p.is_homogeneous() {
        return Err(SurfaceError::NotHomogeneous);
    }
    if deg != 4 {
        return Err(SurfaceError::NotDegree4(deg));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let text = "name: fermat\nsource: sum of fourth powers\ndomain: rational\nx^4 + y^4 + z^4 + w^4\n";
        let s = Surface::parse(text).unwrap();
        assert_eq!(s.name(), "fermat");
        assert_eq!(s.domain(), Domain::Rational);
        assert_eq!(s.canonical_text(), text);
        let again = Surface::parse(&s.canonical_text()).unwrap();
        assert_eq!(again.equation(), s.equation());
    }

    #[test]
    fn surd_domain_round_trip() {
        let text = "name: tilted\nsource: test fixture\ndomain: surd(7)\nx^4 + (-5+sqrt(7))*x*y^2*w + z^4 + w^4\n";
        let s = Surface::parse(text).unwrap();
        assert_eq!(s.domain(), Domain::Surd(7));
        assert_eq!(s.canonical_text(), text);
    }

    #[test]
    fn header_order_is_flexible_but_canonical_on_output() {
        let text = "# fixture\ndomain: rational\n\nname: fermat\nx^4 + y^4 + z^4 + w^4\nsource: later\n";
        let s = Surface::parse(text).unwrap();
        assert!(s.canonical_text().starts_with("name: fermat\nsource: later\n"));
    }

    #[test]
    fn validation_errors() {
        let base = |eq: &str| {
            Surface::parse(&format!("name: t\nsource: t\ndomain: rational\n{eq}\n"))
        };
        assert!(matches!(base("x^3 + y^3 + z^3 + w^3"), Err(SurfaceError::NotDegree4(3))));
        assert!(matches!(base("x^4 + y^3"), Err(SurfaceError::NotHomogeneous)));
        assert!(matches!(base("x^4 - x^4"), Err(SurfaceError::ZeroEquation)));
        assert!(matches!(base("x^4 + ("), Err(SurfaceError::Parse { .. })));
        assert!(matches!(
            base("x^4 + sqrt(2)*y^4 + sqrt(3)*z^4"),
            Err(SurfaceError::MixedSurds(2, 3))
        ));
        assert!(matches!(
            base("sqrt(5)*x^4 + y^4 + z^4 + w^4"),
            Err(SurfaceError::DomainMismatch { found: 5, .. })
        ));
        assert!(matches!(
            Surface::parse("name: t\ndomain: rational\nx^4\n"),
            Err(SurfaceError::MissingKey("source"))
        ));
        assert!(matches!(
            Surface::parse("name: t\nsource: t\ndomain: gaussian\nx^4\n"),
            Err(SurfaceError::BadDomain(_))
        ));
        assert!(matches!(
            Surface::parse("name: t\nsource: t\ndomain: rational\nx^4 + w^4\nextra line\n"),
            Err(SurfaceError::UnknownLine { line: 5, .. })
        ));
    }

    #[test]
    fn embedding_respects_the_field() {
        let s = Surface::parse(
            "name: t\nsource: t\ndomain: surd(7)\nx^4 + sqrt(7)*y^4 + z^4 + w^4\n",
        )
        .unwrap();
        // 7 is a square mod 29 but not mod 13.
        let f29 = FieldSpec::make(29, 1).unwrap();
        let p = s.embed(f29).unwrap();
        assert_eq!(p.total_degree(), Some(4));
        let f13 = FieldSpec::make(13, 1).unwrap();
        assert!(matches!(s.embed(f13), Err(SurfaceError::Embed(_))));
    }
}
