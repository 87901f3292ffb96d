pub mod error;
pub mod estimation;
pub mod geometry;
pub mod initialization;
pub mod learner;
pub mod lowerbound;
pub mod oracles;
pub mod refinement;
pub mod rng;
pub mod scenario;
pub mod selftest;
