//! Go-diagrams, Go-networks, Deodhar cells and Wilson loop diagrams in the
//! positroid and Deodhar decompositions of the real Grassmannian.

pub mod coxeter;
pub mod diagrams;
pub mod exact;
pub mod fibers;
pub mod networks;
pub mod plucker;
pub mod wilson;
