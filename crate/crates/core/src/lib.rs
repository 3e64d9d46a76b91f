//! Active goal manifold exploration (AGME) and a skill-babbling baseline
//! over four simulated worlds observed either as 2-D states or through a
//! 50×50 RGB camera.
//!
//! ```
//! use agme::{agme_run, AgmeConfig, ObservationMode, SimEnvironment, WorldKind};
//!
//! let mut env = SimEnvironment::new(WorldKind::Arm, ObservationMode::GroundTruth);
//! let cfg = AgmeConfig::new(vec![0.15; 3], 50, 7);
//! let out = agme_run(&mut env, &cfg, &[], |_, _, _| Ok(())).unwrap();
//! assert_eq!(out.repertoire.len(), 51);
//! ```

pub mod agme;
pub mod babbling;
pub mod camera;
pub mod dmp;
pub mod environment;
pub mod error;
pub mod eval;
pub mod explore;
pub mod geometry;
pub mod manifold;
pub mod repertoire;
pub mod rng;
pub mod runner;
pub mod sensor;
pub mod skill;
pub mod worlds;

pub use agme::{agme_run, agme_step, Agme, AgmeConfig};
pub use babbling::{babbling_run, babbling_step, inverse_model, BabblingConfig, SkillBabbling};
pub use camera::{raster_clear, raster_disk, raster_segment, render_scene, Image, Rgb, Scene};
pub use dmp::{dmp_rollout, DmpIntegrationSpec, DmpParams};
pub use environment::{Environment, ObservationMode, TestGoal};
pub use error::{Error, Result};
pub use eval::{
    dispersion, dispersion_of_states, dist_indicator, oracle_perf, perf, perf_on_goals,
    sample_goal_set, EvalConfig,
};
pub use explore::{explore, Explorer, RunOutput};
pub use geometry::{segment_circle_hit, Contact, Point};
pub use manifold::{knn, select_basis, ManifoldGraph, NeighborStats};
pub use repertoire::Repertoire;
pub use sensor::{euclidean_distance, PolicyParams, SensorVector};
pub use skill::{ParameterizedSkill, Skill};
pub use worlds::{arm_fk, SimEnvironment, World, WorldKind};

/// Compiles and runs the snippets of the guide in `book/` as doc-tests.
#[cfg(doctest)]
mod book {
    macro_rules! chapters {
        ($($name:ident => $file:literal),* $(,)?) => {
            $(
                #[doc = include_str!(concat!("../../../book/src/", $file))]
                pub struct $name;
            )*
        };
    }

    chapters! {
        Introduction => "introduction.md",
        Repertoire => "repertoire.md",
        ManifoldExploration => "manifold_exploration.md",
        SkillBabbling => "skill_babbling.md",
        ParameterizedSkill => "parameterized_skill.md",
        Worlds => "worlds.md",
        Dmp => "dmp.md",
        Camera => "camera.md",
        Evaluation => "evaluation.md",
        RunningExperiments => "running_experiments.md",
        FileFormats => "file_formats.md",
    }
}
