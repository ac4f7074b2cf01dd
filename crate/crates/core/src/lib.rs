//! Numerical evaluation, interval certification and counterexample search
//! for the side-weighted median and Cevian inequalities
//!
//! ```text
//! sqrt(bc) m_a + sqrt(ac) m_b + sqrt(ab) m_c >= a m_a + b m_b + c m_c
//! (bc - a^2) m_a + (ac - b^2) m_b + (ab - c^2) m_c >= 0
//! ```
//!
//! and their analogues for altitudes, angle bisectors, nonnegative mixtures
//! of the three, and arbitrary Cevians.
//!
//! * [`triangle`]: side triples, Cevian families, normalization.
//! * [`inequality`]: signed slacks of every inequality and auxiliary lemma.
//! * [`interval`] and [`certify`]: outward-rounded intervals and the
//!   branch-and-bound certifier over the normalized domain.
//! * [`search`]: seeded sampling and pattern-search refinement of Cevian
//!   triples.
//! * [`report`]: run configurations, manifests and report documents.

pub mod certify;
mod clock;
pub mod inequality;
pub mod interval;
pub mod report;
pub mod search;
pub mod triangle;

pub use certify::{certify, CertificationTask, Certificate, Target};
pub use interval::{Box2, Interval};
pub use triangle::{CevianKind, CevianTriple, SideTriple};
