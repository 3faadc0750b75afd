//! Batch front end: JSON descriptions of algebras and bases, scenario
//! documents, named checks and versioned reports with a fixed exit-code
//! contract.

pub mod checks;
pub mod format;
pub mod report;
pub mod scenario;
