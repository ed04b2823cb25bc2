//! Exact computations with Nichols algebras of diagonal type and their
//! deformations: cyclotomic scalars, braided commutators, a presentation
//! language, noncommutative Groebner completion, and the deformation,
//! lifting and isomorphism workflows built on them.
#![no_std]

extern crate alloc;

pub mod braiding;
pub mod deform;
pub mod freealg;
pub mod groebner;
pub mod isom;
pub mod presdsl;
pub mod scalars;
