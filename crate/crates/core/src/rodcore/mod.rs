//! Rod kinematics: nodal coordinates, SE(3) interpolation, strains and their Jacobians.

mod constitutive;
mod kinematics;
mod mesh;
mod nodal;

pub use constitutive::{ConstitutiveLaw, CrossSectionInertia};
pub use kinematics::{
    element_strains, interpolate_pose, interpolate_pose_symmetric, node_pose_derivative,
    relative_twist, ElementKinematics, StrainState,
};
pub use mesh::{ElementGeometry, Mesh};
pub use nodal::{
    complement_jacobian, complement_update, complement_update_all, nodal_kinematic_map, node_pose,
    wrap_rotation_vector, NodalCoords, NODE_DOFS,
};
