//! Exact and numerical tools for rigidity computations in symplectic
//! topology: Novikov-field quantum algebras, decorated Floer-type complexes
//! and their spectral invariants, Conley–Zehnder and Robbin–Salamon indices,
//! toric moment polytopes and the model quasi-state.

pub mod novikov;
pub mod decorated_complex;
pub mod quantum_algebra;
pub mod symplectic_index;
pub mod toric;
pub mod model_quasi_state;
