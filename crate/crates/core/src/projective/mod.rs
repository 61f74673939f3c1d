//! Affine and projective calculus on the base manifold.

mod connection;
mod curvature;
mod solutions;

pub use connection::{levi_civita, AffineConnection};
pub(crate) use connection::{pvar, xvar};
pub use curvature::{
    cotton, curvature, log_gradient, projective_change, projective_change_by_scale, projective_weyl,
    projective_weyl_cotton, special_part, thomas_parameters, weyl_traces, BaseCurvature,
};
pub use solutions::{
    dualize_lowdim, parallel_bivector_residual, prolong, prolonged_residuals, solution_residual, Prolongation,
    ProjectiveSolution, SolutionKind, SolutionResiduals,
};

use crate::error::Result;
use crate::symcore::ansatz::{solve_linear, AnsatzShape};
use crate::symcore::{Base, Var};

/// Basis of the polynomial solutions of degree at most `degree`, including
/// the integrability conditions of the kind.
pub fn polynomial_solutions(d: &AffineConnection, kind: SolutionKind, degree: u32) -> Result<Vec<ProjectiveSolution>> {
    let n = d.n();
    let shape = AnsatzShape {
        base: Base::M,
        slots: kind.slots(n),
        pweight: kind.pweight(),
        cweight: 0,
        antisymmetric: kind == SolutionKind::Bivector,
    };
    let vars: Vec<Var> = (0..n).map(xvar).collect();
    let sols = solve_linear(&shape, &vars, degree, |t| {
        let r = solution_residual(d, &ProjectiveSolution { kind, data: t.clone(), prolongation: None })?;
        let mut parts = vec![r.equation];
        parts.extend(r.integrability.into_iter().map(|(_, t)| t));
        Ok(parts)
    })?;
    sols.into_iter().map(|t| ProjectiveSolution::new(kind, t)).collect()
}

/// Parallel bivectors of bounded polynomial degree satisfying the curvature
/// integrability condition.
pub fn polynomial_parallel_bivectors(d: &AffineConnection, degree: u32) -> Result<Vec<ProjectiveSolution>> {
    let n = d.n();
    let kind = SolutionKind::Bivector;
    let shape = AnsatzShape { base: Base::M, slots: kind.slots(n), pweight: kind.pweight(), cweight: 0, antisymmetric: true };
    let vars: Vec<Var> = (0..n).map(xvar).collect();
    let sols = solve_linear(&shape, &vars, degree, |t| {
        let r = parallel_bivector_residual(d, &ProjectiveSolution { kind, data: t.clone(), prolongation: None })?;
        let mut parts = vec![r.equation];
        parts.extend(r.integrability.into_iter().map(|(_, t)| t));
        Ok(parts)
    })?;
    sols.into_iter().map(|t| ProjectiveSolution::new(kind, t)).collect()
}
