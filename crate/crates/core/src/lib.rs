pub mod cli_io;
pub mod exact_arith;
pub mod hull_codec;
pub mod thick_family;
pub mod tree_builder;
pub mod verifier;
