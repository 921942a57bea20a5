pub mod conjecture;
pub mod entropy;
pub mod error;
pub mod expansion;
pub mod quadrature;
pub mod specfun;
pub mod systems;
pub mod thermo;
pub mod uncertainty;
pub mod verify;
