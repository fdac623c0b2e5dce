#![allow(clippy::needless_range_loop)]

pub mod arrangement;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod poset;
pub mod rational;
pub mod shards;
pub mod garside;
pub mod salvetti;
pub mod finposet;
pub mod shardmonoid;
pub mod coxeter;
pub mod coxbraid;
pub mod verify;
pub mod cli;
