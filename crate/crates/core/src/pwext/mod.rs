//! The Patterson-Walker metric on `T*M` and its curvature.

mod covariance;
mod curvature;
mod fields;
mod geometry;
mod normal_form;

pub use covariance::{conformal_covariance_check, CovarianceReport};
pub use curvature::{
    cotton_closed, curvature_dictionary, einstein_implies_ricci_flat, frame_christoffels, frame_christoffels_intrinsic,
    riemann_closed, schouten, schouten_closed, vertical_defects, walker_condition, weyl_closed, weyl_vertical_condition,
    CurvatureDictionary, DictionaryEntry, IntrinsicCurvature, WeylBlockSign,
};
pub use fields::{k_form, k_properties, k_vector, lie_derivative_metric, mu, mu_endomorphism, KReport};
pub use geometry::{build, connection_theta, coord_var, is_horizontal, is_trace_free, PWGeometry};
pub use normal_form::{recover_connection, thomas_pw, Recovery, WalkerCondition, WalkerNormalForm};

impl PWGeometry {
    /// Memoized intrinsic curvature of the metric.
    pub fn curvature(&self) -> &IntrinsicCurvature {
        self.intrinsic()
    }
}
