//! Geodesic balls on the unit quaternions, their convolution, Crofton
//! valuations and the kinematic coefficients of `SO(4)`.

mod balls;
mod crofton;
mod quaternion;
mod tables;

pub use balls::{act, convolve_balls, f_closed, BallCF, GeodesicBall, SO4Element};
pub use crofton::{
    crofton_valuation, euler_integral_on_subsphere, sample_so4, sample_subsphere, CroftonEstimate, Subsphere,
    CROFTON_TAG,
};
pub use quaternion::UnitQuaternion;
pub use tables::{
    ball_cf_valuation, kinematic_lhs_closed, mc_kinematic_s3, recover_d, table_tensor, verify_m_table,
    KinematicEstimate, S3_KINEMATIC_TABLE,
};
