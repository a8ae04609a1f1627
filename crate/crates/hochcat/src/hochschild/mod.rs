//! Truncated Hochschild cochain complexes and derived Hom complexes.
//!
//! A *shape* describes one of the complexes `C(A)`, `C(X_1|...|X_m, X')`,
//! or their shifted `D` variants: a list of arm categories, the module
//! slots between them, and the target. A realized complex stores, per
//! internal degree, the list of *generators*: (object profile, one basis
//! element per input slot, one output basis element). The differential,
//! cup, brace, and every structure map are exact matrices on these bases.
//!
//! Truncation is by *weight* (total number of input slots); the weight
//! filtration is stable under the differential, so the truncated object is
//! an honest complex with d^2 = 0, exact in the certified degree window.

mod realize;
mod ops;
mod maps;

pub use maps::*;
pub use ops::*;
pub use realize::*;

use crate::dgcat::{CatRef, DgBimodule};
use std::sync::Arc;

/// What the cochains take values in.
#[derive(Clone)]
pub enum Target {
    /// Values in arms[0](A_0, A_n); only valid when there are no modules.
    CatHom,
    /// Values in an arms[0]-arms[last]-bimodule.
    Bimod(Arc<DgBimodule>),
}

/// The shape of a (shifted) derived Hom complex.
#[derive(Clone)]
pub struct Shape {
    /// m+1 arm categories A_0, ..., A_m.
    pub arms: Vec<CatRef>,
    /// m modules; `modules[j]` is an arms[j]-arms[j+1]-bimodule.
    pub modules: Vec<Arc<DgBimodule>>,
    /// true for the `D` variants (module slots are s-shifted).
    pub shifted: bool,
    pub target: Target,
}

impl Shape {
    /// The Hochschild cochain complex shape C(A).
    pub fn cat(cat: &CatRef) -> Shape {
        Shape {
            arms: vec![cat.clone()],
            modules: Vec::new(),
            shifted: false,
            target: Target::CatHom,
        }
    }

    /// C(X_1|...|X_m, X') (unshifted module slots).
    pub fn c_bimod(modules: Vec<Arc<DgBimodule>>, target: Arc<DgBimodule>) -> Shape {
        Self::bimod(modules, target, false)
    }

    /// D(X_1|...|X_m, X') (shifted module slots).
    pub fn d_bimod(modules: Vec<Arc<DgBimodule>>, target: Arc<DgBimodule>) -> Shape {
        Self::bimod(modules, target, true)
    }

    fn bimod(modules: Vec<Arc<DgBimodule>>, target: Arc<DgBimodule>, shifted: bool) -> Shape {
        assert!(!modules.is_empty(), "bimodule shapes need at least one module");
        let mut arms = vec![modules[0].left_cat.clone()];
        for m in &modules {
            arms.push(m.right_cat.clone());
        }
        Shape {
            arms,
            modules,
            shifted,
            target: Target::Bimod(target),
        }
    }

    pub fn n_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn n_modules(&self) -> usize {
        self.modules.len()
    }

    pub fn field(&self) -> crate::linalg::Field {
        self.arms[0].field
    }

    /// A shallow description for error messages.
    pub fn describe(&self) -> String {
        let kind = if self.shifted { "D" } else { "C" };
        let mods: Vec<&str> = self.modules.iter().map(|m| m.name.as_str()).collect();
        match &self.target {
            Target::CatHom => format!("{kind}({})", self.arms[0].name),
            Target::Bimod(t) => format!("{kind}({}; {})", mods.join("|"), t.name),
        }
    }
}
