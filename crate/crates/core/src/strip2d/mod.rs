//! Finite-element discretization of the pencil on a truncated curved strip.

pub mod assembly;
pub mod detect;
pub mod embed;
pub mod mesh;
pub mod solve;

pub use assembly::{assemble_pencil_2d, CutBc, DofMap, PencilForms2D};
pub use detect::{bracketing_check, detect_trapped_modes, DetectionTolerances, TrappedCandidate};
pub use embed::{embed_mesh, Embedding};
pub use mesh::{build_mesh, StripMesh2D};
pub use solve::{lh_min_eigenvalue, solve_top_spectrum, RitzMode, SolveOptions, SpectrumResult2D};
