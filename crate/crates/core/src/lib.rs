pub mod arith;
pub mod cover;
pub mod oracle;
pub mod parametricity;
pub mod places;
pub mod prescriber;
