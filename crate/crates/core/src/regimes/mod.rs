//! Blow-up-set classification: validation of the order-`m` form, the
//! exponent sets and the regime searches.

pub mod exponents;
pub mod form;
pub mod search;
pub mod upoly;

pub use exponents::{exponent_sets, ExponentSets};
pub use form::{validate_form, Direction, FormReport, FormSpec};
pub use search::{
    regime_search_general, regime_search_m4, CachedExpander, ExpansionProvider, Origin, Pipeline,
    RegimeConfig, RegimeResult, RootReport, Verdict,
};
pub use upoly::{RealRoot, UPoly};
