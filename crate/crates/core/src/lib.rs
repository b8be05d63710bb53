//! Executable finite site theory: stable classes of morphisms and the sites
//! they generate, arch calculus for hom-sets of representable sheaves, a
//! sheafification oracle, classifiers for reductive, coalescent and effectual
//! categories, and the finite localic dualities.

pub mod arch;
pub mod classify;
pub mod crosscheck;
pub mod duality;
pub mod examples;
pub mod fincat;
pub mod sheaf;
pub mod site;
pub mod verdict;
