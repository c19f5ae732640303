//! Kernel support vector machine trained by sequential minimal
//! optimization, with Platt-scaled probability estimates.

mod kernel;
pub mod model_io;
mod platt;
mod smo;

pub use kernel::Kernel;
pub use platt::fit_platt;
pub use smo::{decision_value, predict_prob, train, SvmModel, TrainConfig};
