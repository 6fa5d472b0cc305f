#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod chartab;
pub mod groups;
pub mod instance;
pub mod gelfand_graev;
pub mod check;
pub mod deligne_lusztig;
pub mod dual;
pub mod tau;
pub mod cache;
pub mod report;
pub mod verify;
pub mod cli;
