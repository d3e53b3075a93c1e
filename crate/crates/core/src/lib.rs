#![no_std]

extern crate alloc;

pub mod classical;
pub mod expr;
pub mod interval;
pub mod lc;
pub mod lc_interval;
pub mod nsa;
pub mod poly;
pub mod rat;
pub mod riemann;
pub mod series;
pub mod transcendental;
pub mod verdict;
