//! Construction of numbers that are normal with respect to a Generalized
//! Lüroth Series (GLS), together with the machinery around it:
//!
//! * [`gls`]: branch tables, the map `T`, expansions and cylinder sets;
//! * [`sequences`]: equidistributed input sequences;
//! * [`discrepancy`]: exact extreme discrepancy of finite point sets;
//! * [`constructor`]: cutoff schedules and the digit stream of the normal number;
//! * [`normality`]: block frequencies against the product measure;
//! * [`rational`]: finite vs. eventually periodic expansions of rationals.

pub mod constructor;
pub mod digits_io;
pub mod discrepancy;
pub mod error;
pub mod gls;
pub mod normality;
pub mod rat;
pub mod rational;
pub mod real;
pub mod sequences;

pub use constructor::{
    choose_cutoffs, l_of, position_to_cell, z_digits, CutoffSchedule, CutoffSearch, DigitStream,
    ZDigits,
};
pub use discrepancy::{
    brute_force_discrepancy, extreme_discrepancy, prefix_discrepancies, PointSet,
};
pub use error::{Error, Result};
pub use gls::{builtin_spec, Block, Branch, Digit, Expansion, GlsSpec, Interval, Orientation};
pub use normality::{count_block, expected_measure, normality_report, BlockStats};
pub use rat::Rat;
pub use rational::{classify, survey_family, ExpansionClass};
pub use real::{ApproxReal, RealOracle, UnitReal};
pub use sequences::{farey_enum, kronecker, van_der_corput, Beta, PointSeq};
