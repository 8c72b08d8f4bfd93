//! Numerical tolerances used by checks and solvers.
//!
//! | knob     | default | used for                                           |
//! |----------|---------|----------------------------------------------------|
//! | `law`    | 1e-9    | algebraic identities of connectives                |
//! | `iso`    | 1e-7    | isomorphism inverse round trip                     |
//! | `rel`    | 1e-9    | relation properties, degree equality, adjacency    |
//! | `feas`   | 1e-8    | constraint satisfaction and tightness of solutions |
//! | `kkt`    | 1e-6    | KKT residual of the quadratic program              |
//!
//! For `f32` each default is raised to a small multiple of machine epsilon.

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<S> {
    pub law: S,
    pub iso: S,
    pub rel: S,
    pub feas: S,
    pub kkt: S,
}

pub const DEFAULT_LAW: f64 = 1e-9;
pub const DEFAULT_ISO: f64 = 1e-7;
pub const DEFAULT_REL: f64 = 1e-9;
pub const DEFAULT_FEAS: f64 = 1e-8;
pub const DEFAULT_KKT: f64 = 1e-6;

impl<S: Scalar> Tolerances<S> {
    pub fn new(law: f64, iso: f64, rel: f64, feas: f64, kkt: f64) -> Self {
        let floor = S::epsilon() * S::lit(64.0);
        let pick = |v: f64| S::lit(v).max(floor);
        Tolerances {
            law: pick(law),
            iso: pick(iso),
            rel: pick(rel),
            feas: pick(feas),
            kkt: pick(kkt),
        }
    }
}

impl<S: Scalar> Default for Tolerances<S> {
    fn default() -> Self {
        Self::new(
            DEFAULT_LAW,
            DEFAULT_ISO,
            DEFAULT_REL,
            DEFAULT_FEAS,
            DEFAULT_KKT,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_defaults_are_exact() {
        let t = Tolerances::<f64>::default();
        assert_eq!(t.law, 1e-9);
        assert_eq!(t.feas, 1e-8);
        assert_eq!(t.kkt, 1e-6);
    }

    #[test]
    fn f32_defaults_are_floored() {
        let t = Tolerances::<f32>::default();
        assert!(t.law > f32::EPSILON);
        assert_eq!(t.kkt, 1e-6_f32.max(f32::EPSILON * 64.0));
    }
}
