//! Fragment-based 3D molecular design with reinforcement learning.
//!
//! Molecules are grown by rigidly attaching small fragment point clouds to a
//! seed structure, one new covalent bond per step. A hierarchical actor picks
//! the anchor hydrogen on the molecule, the fragment, the anchor hydrogen on
//! the fragment, and the internal coordinates (bond distance, dihedral
//! rotation, rotation sign) of the placement. The reward is the negative
//! energy change of bond formation, evaluated by a pluggable backend; training
//! uses PPO with GAE on parallel rollout workers.
//!
//! Module map:
//! - [`chem`]: elements, atom clouds, XYZ I/O, bond perception, fragment
//!   libraries and the bundled multisets
//! - [`geometry`]: rigid transforms, dihedrals, fragment attachment
//! - [`energy`]: energy backends (surrogate force field, external process)
//!   and the step reward
//! - [`env`]: the sequential-assembly environment
//! - [`neural`]: tensors, reverse-mode gradients, MLPs and the
//!   continuous-filter atom embedder
//! - [`policy`]: the hierarchical actor
//! - [`trainer`]: critic, GAE, the PPO loop and rollout workers
//! - [`evaluation`]: structure validity and offline evaluation snapshots

pub mod chem;
pub mod energy;
pub mod env;
pub mod evaluation;
pub mod geometry;
pub mod neural;
pub mod policy;
pub mod trainer;

pub use chem::{AtomCloud, BondGraph, Element, FragmentLibrary, FragmentMultiset};
pub use energy::{EnergyBackend, SurrogateBackend, SurrogateParams};
pub use env::{Env, EnvConfig, EnvState, StepOutcome};
pub use geometry::{RigidTransform, Vec3};
pub use policy::{Action, PolicyNet, SampledAction};
pub use trainer::PpoConfig;
