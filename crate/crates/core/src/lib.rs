//! Finite categories, Grothendieck constructions, fibrations and FI-type
//! audits, all by exhaustive search over explicit composition tables.

pub mod cat;
pub mod corpus;
pub mod fitype;
pub mod format;
pub mod gen;
pub mod groth;
pub mod group;
pub mod indexed;
pub mod limits;
pub mod par;
pub mod theorem;
