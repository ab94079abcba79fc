//! Computations with the finite quotients of the first Grigorchuk group
//! acting on the binary rooted tree.

pub mod coset;
pub mod error;
pub mod families;
pub mod limits;
pub mod linalg;
pub mod nilq4;
pub mod pcp;
pub mod perm;
pub mod pquot;
pub mod presentation;
pub mod quotients;
pub mod report;
pub mod stab;
pub mod tree;
pub mod word;

pub use error::{Error, Result};
pub use word::{Alphabet, FreeWord, Substitution};
