pub mod scalar;
pub mod linalg;
pub mod symplectic;
pub mod weyl;
pub mod phi_module;
pub mod hodge_kernel;
pub mod ext_ledger;
pub mod hecke;
pub mod cli;
