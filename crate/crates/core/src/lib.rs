pub mod enumerate;
pub mod fixtures;
pub mod moves;
pub mod plucking;
pub mod qcalc;
pub mod realize;
pub mod tree;
