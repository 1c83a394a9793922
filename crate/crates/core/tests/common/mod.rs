#![allow(dead_code)]

pub mod corpus;
pub mod eligible;
pub mod interval_model;
pub mod reductions;
