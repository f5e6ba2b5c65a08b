//! Nonabelian Fourier analysis on concrete finite groups, with numerical
//! certification of three-term progression mixing in quasirandom groups.

pub mod chartab;
pub mod classes;
pub mod error;
pub mod fourier;
pub mod group;
pub mod hash;
pub mod mixing;

pub use chartab::{compute_character_table, CharacterTable};
pub use classes::{class_mult_coefficients, conjugacy_classes, ConjugacyData};
pub use error::{Error, Result};
pub use fourier::{GroupFunction, SpectralProfile};
pub use group::{construct_group, parse_spec, GroupSpec, GroupTable};
