#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod content;
pub mod experiments;
pub mod functionals;
pub mod gauges;
pub mod loewner;
pub mod parallel;
pub mod paths;
