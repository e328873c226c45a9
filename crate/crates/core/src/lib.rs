//! Robust connection game on temporal graphs.
//!
//! A traveler moves through a temporal graph from a start vertex to a target
//! while an adversary, holding a budget of arc delays, announces before every
//! move which arcs leaving the traveler's vertex depart late. This crate
//! provides the graph model and `.rcg` format ([`temporal`]), a referee and
//! transcripts ([`game`]), an exact solver with strategy extraction
//! ([`solver`]), a compiler from quantified boolean formulas to game instances
//! ([`reduction`]), brute-force ground truth ([`oracle`]) and instance
//! generators ([`gen`]).

pub mod game;
pub mod gen;
pub mod oracle;
pub mod reduction;
pub mod solver;
pub mod temporal;
