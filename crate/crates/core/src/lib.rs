pub mod brauer;
pub mod cyclo;
pub mod field;
pub mod k0;
pub mod linalg;
pub mod modrep;
pub mod shift;
