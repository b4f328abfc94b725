#pragma once

#include "aeroflex/aero.hpp"
#include "aeroflex/beam.hpp"
#include "aeroflex/config.hpp"

namespace aeroflex {

// Coupled elastic-aerodynamic model for one cantilever wing at a fixed
// airspeed and density. State x_e = [xs_dot; xs; z] with xs the free
// structural DOFs (4 n_s) and z the aerodynamic lag states (4 n_a):
//   xe_dot = A xe + Bu u + Br alpha_r + Bg alpha_g + [Mae^-1 f_s; 0; 0]
// where u are the flap hinge-moment commands, alpha_r / alpha_g the
// rigid-motion and gust angles per strip and f_s generalized nodal forces
// (gravity, rigid-body inertial relief).
//
// Root reaction loads (clamp on beam, conjugate to (w, phi, theta, beta)):
//   F_root = M01 xs_dd + C01 xs_d + K01 xs.
// Reported as loads transmitted to the fuselage: shear positive up,
// bending positive tip-up, torsion positive nose-up.
struct WingModel {
    BeamModel beam;
    StripAeroModel aero;
    InterpMaps maps;
    std::vector<int> flap_nodes; // node index per control input

    int n_s{0}, n_a{0};
    MatX A, Bu, Br, Bg;
    MatX Mae;                 // apparent-mass-corrected structural mass
    Eigen::PartialPivLU<MatX> Mae_llt;

    // root loads as linear outputs: F_root = Croot xe + Du u + Dr alpha_r
    //                                        + Dfs f_s
    MatX Croot, Droot_u, Droot_r, Droot_fs;

    // lumped inertia per free node for rigid-elastic coupling
    VecX node_mass;        // plunge mass [kg]
    VecX node_pitch_static; // coupled w-theta static moment (flap + hinge offset)
    VecX node_flap_static;  // coupled w-beta static moment
    VecX node_twist_inertia;

    int n_states() const { return 8 * n_s + 4 * n_a; }

    VecX deriv(const VecX& xe, const VecX& u, const VecX& alpha_r,
               const VecX& alpha_g, const VecX& f_s) const;

    // (shear up, bending tip-up, torsion nose-up) at the clamp
    Vec3 root_loads(const VecX& xe, const VecX& u, const VecX& alpha_r,
                    const VecX& f_s) const;
};

WingModel build_wing(const AircraftConfig& cfg, double V, double rho);

// Generalized nodal gravity loads for a gravity vector expressed in the
// wing frame (x out the span, z down).
VecX gravity_nodal_forces(const WingModel& wing, const Vec3& g_wing);

// Generalized nodal loads relieving rigid-body motion: root linear
// acceleration a0 (wing frame, gravity excluded), angular acceleration and
// angular rate of the body expressed in the wing frame.
VecX inertial_nodal_forces(const WingModel& wing, const Vec3& a0_wing,
                           const Vec3& alpha_wing, const Vec3& omega_wing);

// Reaction of elastic motion on the carrying body: force and moment about
// the wing root, wing frame, including Coriolis coupling with the body
// rate. xs_dd is the structural acceleration (first 4 n_s derivative block).
void elastic_reaction(const WingModel& wing, const VecX& xe, const VecX& xs_dd,
                      const Vec3& omega_wing, Vec3& force_wing,
                      Vec3& moment_wing);

} // namespace aeroflex
