pub mod convert;
pub mod cyclotomic;
pub mod geometry;
pub mod grouplike;
pub mod numeric;
pub(crate) mod poly;
pub mod words;
