//! Series and polynomial realizations.

pub mod laurent;
pub mod parse;
pub mod poly;
pub mod tseries;

pub use laurent::{series_equal, theta_term, Comparison, LaurentSeries, SeriesJson, EXACT};
pub use parse::{parse_poly, parse_series};
pub use poly::{Poly, PolyRing, SeriesRing};
pub use tseries::TSeries;
