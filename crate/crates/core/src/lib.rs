pub mod dual;
pub mod entanglement;
pub mod error;
pub mod families;
pub mod optimizer;
pub mod protocol;
pub mod qmat;
pub mod quad;
pub mod sun;

pub use entanglement::{concurrence, Concurrence};
pub use error::{Error, Result};
pub use qmat::{validate_density, DensityMatrix, Mat16, Mat2, Mat4, C64};
pub use sun::{cnot_angles, GateAngles};
