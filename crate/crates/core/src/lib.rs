pub mod apolarity;
pub mod binary_sos;
pub mod error;
pub mod export;
pub mod form;
pub mod linalg;
pub mod parse;
pub mod quad_sos;
pub mod realroots;
pub mod scalar;
pub mod verify;
pub mod waring;
