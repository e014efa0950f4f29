//! Measurement and audit of a trajectory.

pub mod boundary;
pub mod bounds;
pub mod fit;
pub mod identities;
pub mod psw;
pub mod record;
pub mod threshold;

pub use boundary::{end_derivative, hausdorff_to_arc, EndDerivative};
pub use bounds::{check_bounds, BoundCheck, BoundsReport, BOUNDS_TOL};
pub use fit::{blowup_exponent, decay_fit, kosc_per_length, FitError};
pub use identities::{check_identities, ResidualRecord};
pub use psw::{check_psw, PswError, PswVariant};
pub use record::{measure, QuantityRecord};
pub use threshold::{kosc_margin, kosc_margin_of, smallness_threshold, DomainError, KoscMargin};
