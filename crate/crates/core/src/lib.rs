#![no_std]

extern crate alloc;

pub mod algebraic;
pub mod builtin;
pub mod number;
pub mod piecewise;
pub mod poly;
pub mod projective;
pub mod distortion;
pub mod measure;
pub mod pigeonhole;
pub mod word;
pub mod matching;
pub mod marriage;
pub mod pipeline;
