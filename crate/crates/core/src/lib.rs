pub mod constructors;
pub mod gf2;
pub mod pairing;
pub mod search;
pub mod trees;
