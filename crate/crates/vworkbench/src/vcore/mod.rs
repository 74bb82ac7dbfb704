//! Prefix-exchange bijections of the Cantor set.
//!
//! An element is a pair of complete prefix codes with a bijective pairing:
//! the cylinder of each domain leaf is carried affinely (by prefix
//! replacement) onto the cylinder of its paired range leaf. Reduction merges
//! sibling leaf pairs mapped to sibling leaf pairs; the reduced form is the
//! canonical representative, and equality compares reduced forms.

mod element;
mod random;

pub use element::{VElement, VError};
pub use random::{random_element, random_reducible, random_reducible_fixing};
