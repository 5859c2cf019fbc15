pub mod catalog;
pub mod dsbk;
pub mod par;
pub mod synth;
pub mod term;
