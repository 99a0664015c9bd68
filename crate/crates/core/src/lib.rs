//! Exact-rational construction of fans as truncated Mahavier products.
//!
//! The closed relation studied here is the union of two origin-rooted line
//! segments in the unit square, `L_{r,ρ} = {y = r·x} ∪ {y = ρ·x}`. Its
//! depth-`m` Mahavier product is a finite union of straight segments in
//! `[0,1]^{m+1}`, one per word over `{r, ρ}`. Depending on the slopes the
//! limit object is a point, an arc, a Cantor fan, a countable smooth fan or
//! the Lelek fan; [`classify`] decides which, in exact arithmetic.
//!
//! Modules, bottom-up:
//!
//! - [`exactnum`]: exact rationals, prime signatures, multiplicative dependence.
//! - [`orbits`]: the multiplicative orbit `{r^k ρ^ℓ}` split by sign pattern,
//!   gap witnesses and exponent searches.
//! - [`itinerary`]: words over `{r, ρ}`, prefix products, endpoint vectors.
//! - [`mahavier`]: segment relations, branch sets, the Hilbert-cube metric and
//!   Hausdorff distance.
//! - [`classify`]: fan-kind decision procedure and finite-depth audits.
//! - [`formats`]: CSV / JSON / SVG emitters shared by the CLI.
//! - [`verify`]: the aggregated invariant suite.

pub mod classify;
pub mod error;
pub mod exactnum;
pub mod formats;
pub mod itinerary;
pub mod mahavier;
pub mod orbits;
pub mod verify;

pub use classify::{
    classify, lelek_density_audit, structure_report, AuditConfig, AuditRecord,
    ClassificationReport, FanKind,
};
pub use error::{Error, Result};
pub use exactnum::{
    compare_power_product, factor_signature, is_never_connect, multiplicative_dependence,
    ExponentPair, NeverConnect, PrimeBound, PrimeSignature, Rational, SlopePair,
};
pub use itinerary::{
    branch_param, build_sup_itinerary, endpoint_vector, is_useful_periodic, prefix_products,
    EndpointVector, Itinerary, PrefixProducts, Symbol, Word,
};
pub use mahavier::{
    cube_metric, endpoint_certificate, finite_mahavier, hausdorff, inverse_relation, project,
    relation_union, shift, Branch, BranchSet, CubePoint, PointCloud, SegmentRelation,
};
pub use orbits::{
    between_witness, enumerate_orbit, find_exponents, greedy_orbit, max_gap, OrbitClass,
    OrbitEntry, OrbitWindow,
};
