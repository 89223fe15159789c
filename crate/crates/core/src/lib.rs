pub mod arith;
pub mod descent;
pub mod error;
pub mod frontend;
pub mod groebner;
pub mod poly;
pub mod ratfunc;
pub mod verify;
