//! Simulation of a reactive maze-solving robot with three ultrasonic
//! range sensors, plus the discrete search tools used to check it.

pub mod controller;
pub mod maze;
pub mod robot;
pub mod search;
pub mod harness;
pub mod render;
