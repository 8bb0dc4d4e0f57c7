//! Line configurations on quartic surfaces in projective 3-space over
//! finite fields.
//!
//! The crate provides, in dependency order:
//!
//! * [`field`] — prime fields `F_p`, quadratic extensions `F_{p^2}`, and
//!   exact surd-rational scalars, unified under the [`Coeff`] trait;
//! * [`poly`] — sparse multivariate and dense univariate polynomials,
//!   a text parser for quartic equations, fraction-free linear algebra and
//!   Sylvester resultants over polynomial entries;
//! * [`geom`] — indexed enumeration of projective points and lines,
//!   incidence predicates, and canonical line representatives;
//! * [`surface`] — quartic surfaces: loading, singular point analysis with
//!   ADE classification, and recognition of the special families with a
//!   non-simple double point or a double line;
//! * [`enumerate`] — exhaustive enumeration of the lines contained in a
//!   surface, the incidence graph of a configuration, and local line
//!   counting through a singular point;
//! * [`bounds`] — certificate-style degree bounds: residual cubic pencils
//!   through a double point, principal resultants along a parametrised
//!   curve, and the Hessian pencil of a double-line quartic.
//!
//! Everything is deterministic: enumeration orders, canonical forms and
//! report values do not depend on thread scheduling.

pub mod bounds;
pub mod enumerate;
pub mod field;
pub mod geom;
pub mod poly;
pub mod surface;

pub use field::{Coeff, FieldError, FieldSpec, Fq, SurdRational};
pub use geom::{BinaryQuartic, GeomError, ProjLine, ProjPoint};
pub use poly::{MultiPoly, ParseError, UniPoly};
pub use surface::{
    Domain, FamilyError, FamilyKind, FamilyTag, SingularClass, SingularScan, Surface,
    SurfaceError,
};
