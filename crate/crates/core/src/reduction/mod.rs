//! Recursive planning of the factorization and the stage right-hand sides.
//!
//! A level marks one node per simple factor of the current Levi algebra and
//! splits it as `n⁻ ⊕ l ⊕ n⁺`. The development `x = e^W y e^V` then yields an
//! equation for `W` in `n⁻`, a development `y` in the Levi and a quadrature
//! for `V` in `n⁺`. Recursing on the Levi until only the Cartan subalgebra is
//! left gives the full stage list.

mod emit;
pub(crate) mod rhs;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::chevalley::{BasisKind, LieAlgebra};
use crate::error::{Error, Result};
use crate::grading::Grading;
use crate::rootsys::{DynkinType, RootSystem};

pub use emit::{emit_symbolic, Definition, StageDoc, SymbolicHierarchy, Tensor, TensorTerm};
pub use rhs::{
    contact_parts, contact_self_test, contact_stage_rhs, levi_input, riccati_rhs, theta_apply,
    theta_inverse, v_integrand, ContactParts,
};
pub(crate) use rhs::{contact_raw, riccati_raw};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cominuscule,
    Contact,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s.to_ascii_lowercase().as_str() {
            "cominuscule" => Ok(Mode::Cominuscule),
            "contact" => Ok(Mode::Contact),
            _ => Err(Error::InvalidArgument(format!("unknown mode '{}'", s))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Cominuscule => write!(f, "cominuscule"),
            Mode::Contact => write!(f, "contact"),
        }
    }
}

/// One step of the recursion: the ambient Levi algebra and its grading.
#[derive(Clone, Debug)]
pub struct Level {
    pub grading: Grading,
    /// Type of the ambient Levi (the full semisimple part at level 0).
    pub levi_type: DynkinType,
    /// Local simple node of the ambient Levi to global node.
    pub node_map: Vec<usize>,
    /// Basis indices spanning the ambient Levi: its root vectors and the Cartan.
    pub ambient: Vec<usize>,
    pub lower: Vec<usize>,
    pub zero: Vec<usize>,
    pub upper: Vec<usize>,
    /// Depth of the grading restricted to the ambient Levi.
    pub depth: i64,
}

impl Level {
    pub fn is_contact(&self) -> bool {
        self.depth >= 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Clone, Debug)]
pub enum Stage {
    /// `W` in `g_{-1}` of the level.
    Riccati { level: usize },
    /// Hand the degree-0 input to the next level.
    LeviDescent {
        from_level: usize,
        levi: DynkinType,
        embedding: Vec<usize>,
    },
    /// Abelian factor; `central` marks the center of a reductive algebra.
    Torus { indices: Vec<usize>, central: bool },
    /// `V` in `g_1` of the level.
    Integral { level: usize },
    /// Full negative or positive nilradical of a depth-2 level.
    Contact { level: usize, side: Side },
}

impl Stage {
    pub fn kind(&self) -> &'static str {
        match self {
            Stage::Riccati { .. } => "riccati",
            Stage::LeviDescent { .. } => "levi_descent",
            Stage::Torus { central: false, .. } => "torus",
            Stage::Torus { central: true, .. } => "center",
            Stage::Integral { .. } => "integral",
            Stage::Contact { side: Side::Lower, .. } => "contact_lower",
            Stage::Contact { side: Side::Upper, .. } => "contact_upper",
        }
    }

    pub fn is_factor(&self) -> bool {
        !matches!(self, Stage::LeviDescent { .. })
    }

    pub fn level(&self) -> Option<usize> {
        match *self {
            Stage::Riccati { level } | Stage::Integral { level } | Stage::Contact { level, .. } => Some(level),
            Stage::LeviDescent { from_level, .. } => Some(from_level),
            Stage::Torus { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Hierarchy {
    algebra: Arc<LieAlgebra>,
    mode: Mode,
    levels: Vec<Level>,
    stages: Vec<Stage>,
}

impl Hierarchy {
    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn factor_count(&self) -> usize {
        self.stages.iter().filter(|s| s.is_factor()).count()
    }

    /// `2·rank(ss) + rank`.
    pub fn factor_bound(&self) -> usize {
        let d = self.algebra.root_system().dynkin();
        2 * d.semisimple_rank() + d.rank()
    }

    /// Basis indices the unknown of a factor stage ranges over.
    pub fn unknowns(&self, stage: usize) -> &[usize] {
        match &self.stages[stage] {
            Stage::Riccati { level } | Stage::Contact { level, side: Side::Lower } => &self.levels[*level].lower,
            Stage::Integral { level } | Stage::Contact { level, side: Side::Upper } => &self.levels[*level].upper,
            Stage::Torus { indices, .. } => indices,
            Stage::LeviDescent { .. } => &[],
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let alg = &self.algebra;
        let labels = |idx: &[usize]| idx.iter().map(|&i| alg.label(i).to_string()).collect::<Vec<_>>();
        let mut factor = 0;
        let stages: Vec<serde_json::Value> = self
            .stages
            .iter()
            .enumerate()
            .map(|(s, st)| {
                let mut v = serde_json::json!({ "kind": st.kind() });
                if let Some(l) = st.level() {
                    v["level"] = serde_json::json!(l);
                }
                if st.is_factor() {
                    factor += 1;
                    v["factor"] = serde_json::json!(factor);
                    v["unknowns"] = serde_json::json!(labels(self.unknowns(s)));
                }
                if let Stage::LeviDescent { levi, embedding, .. } = st {
                    v["levi"] = serde_json::json!(levi.to_string());
                    v["embedding"] = serde_json::json!(labels(embedding));
                }
                v
            })
            .collect();
        let levels: Vec<serde_json::Value> = self
            .levels
            .iter()
            .map(|l| {
                serde_json::json!({
                    "levi": l.levi_type.to_string(),
                    "sigma": l.grading.sigma().iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "depth": l.depth,
                    "lower": labels(&l.lower),
                    "upper": labels(&l.upper),
                })
            })
            .collect();
        serde_json::json!({
            "group": alg.root_system().dynkin().to_string(),
            "mode": self.mode,
            "factor_count": self.factor_count(),
            "factor_bound": self.factor_bound(),
            "levels": levels,
            "stages": stages,
        })
    }
}

/// Plan the recursive factorization of `alg`.
pub fn plan_hierarchy(alg: Arc<LieAlgebra>, mode: Mode) -> Result<Hierarchy> {
    let rs = alg.root_system();
    let dynkin = rs.dynkin().clone();
    for c in &dynkin.components {
        match mode {
            Mode::Cominuscule if c.cominuscule_nodes().is_empty() => {
                return Err(Error::ExcludedType(c.to_string()));
            }
            Mode::Contact if c.rank < 2 => return Err(Error::RankOneContact(c.to_string())),
            _ => {}
        }
    }

    let mut cur = RootSystem::new(DynkinType {
        components: dynkin.components.clone(),
        torus: 0,
    });
    let mut cur_map: Vec<usize> = (0..dynkin.semisimple_rank()).collect();
    let mut removed: Vec<usize> = Vec::new();
    let mut levels = Vec::new();
    while cur.dynkin().semisimple_rank() > 0 {
        let mut local = Vec::new();
        for (cid, c) in cur.dynkin().components.iter().enumerate() {
            match mode {
                Mode::Cominuscule => {
                    let nodes = &cur.cominuscule_nodes()[cid];
                    let first = *nodes.first().ok_or_else(|| Error::ExcludedType(c.to_string()))?;
                    local.push(first);
                }
                Mode::Contact if c.rank >= 2 => local.extend(cur.contact_nodes(cid)?),
                Mode::Contact => local.push(cur.component_nodes(cid).start),
            }
        }
        let sigma: Vec<usize> = local.iter().map(|&k| cur_map[k]).collect();
        let grading = Grading::from_sigma(&alg, &sigma)?;
        let ambient: Vec<usize> = (0..alg.dim())
            .filter(|&i| match alg.kind(i) {
                BasisKind::Cartan(_) => true,
                BasisKind::Center(_) => false,
                BasisKind::Root(_) => rs.ht_sigma(&removed, alg.root_of(i).unwrap()) == 0,
            })
            .collect();
        let pick = |f: fn(i64) -> bool| -> Vec<usize> {
            ambient.iter().copied().filter(|&i| f(grading.degree(i))).collect()
        };
        let (lower, zero, upper) = (pick(|d| d < 0), pick(|d| d == 0), pick(|d| d > 0));
        let depth = ambient.iter().map(|&i| grading.degree(i).abs()).max().unwrap_or(0);
        if mode == Mode::Cominuscule && depth != 1 {
            return Err(Error::InvalidSigma(format!("level {} has depth {}", levels.len(), depth)));
        }
        let levi_type = DynkinType::new(cur.dynkin().components.clone(), removed.len())?;
        levels.push(Level {
            grading,
            levi_type,
            node_map: cur_map.clone(),
            ambient,
            lower,
            zero,
            upper,
            depth,
        });
        let levi = cur.levi_subsystem(&local)?;
        cur_map = levi.node_map.iter().map(|&k| cur_map[k]).collect();
        cur = RootSystem::new(DynkinType {
            components: levi.root_system.dynkin().components.clone(),
            torus: 0,
        });
        removed.extend(sigma);
    }

    for l in levels.iter().filter(|l| l.is_contact()) {
        let residual = contact_self_test(&alg, l, 3, 7)?;
        if residual > 1e-12 {
            return Err(Error::ThetaInversion(residual));
        }
    }

    let mut stages = Vec::new();
    let n_levels = levels.len();
    for (l, level) in levels.iter().enumerate() {
        stages.push(if level.is_contact() {
            Stage::Contact { level: l, side: Side::Lower }
        } else {
            Stage::Riccati { level: l }
        });
        if l + 1 < n_levels {
            stages.push(Stage::LeviDescent {
                from_level: l,
                levi: levels[l + 1].levi_type.clone(),
                embedding: levels[l + 1].ambient.clone(),
            });
        }
    }
    if dynkin.semisimple_rank() > 0 {
        stages.push(Stage::Torus {
            indices: alg.cartan_indices().collect(),
            central: false,
        });
    }
    for (l, level) in levels.iter().enumerate().rev() {
        stages.push(if level.is_contact() {
            Stage::Contact { level: l, side: Side::Upper }
        } else {
            Stage::Integral { level: l }
        });
    }
    if dynkin.torus > 0 {
        stages.push(Stage::Torus {
            indices: alg.center_indices().collect(),
            central: true,
        });
    }

    Ok(Hierarchy {
        algebra: alg,
        mode,
        levels,
        stages,
    })
}
