#![allow(dead_code)]

pub mod bigseries;
