pub mod canal;
pub mod curve;
pub mod mesh;
pub mod suite;
pub mod sweep;
