#pragma once

#include <functional>

#include "aeroflex/config.hpp"
#include "aeroflex/wing.hpp"

namespace aeroflex {

// Gust sampler: inertial position -> vertical gust velocity (down positive).
using GustField = std::function<double(const Vec3&)>;

// First and second mass moments about the body origin, deformation aware.
struct MassMoments {
    Vec3 S{Vec3::Zero()}; // kg*m
    Mat3 J{Mat3::Zero()}; // kg*m^2
};

struct ForceMomentSet {
    Vec3 F{Vec3::Zero()};   // body frame [N]
    Vec3 M{Vec3::Zero()};   // body frame [N*m]
    Vec3 d_F{Vec3::Zero()}; // elastic-coupling residual force
    Vec3 d_M{Vec3::Zero()};
};

// Control surface / power settings after actuator dynamics.
struct ControlInputs {
    double elevator{0.0}; // rad
    double rudder{0.0};   // rad
    double thrust{0.0};   // N
    VecX u_right, u_left; // flap hinge moments [N*m]
};

// Per-wing aerodynamic/structural inputs for one evaluation.
struct WingInputs {
    VecX alpha_r, alpha_g; // per strip [rad]
    VecX f_s;              // generalized nodal forces
    VecX h_dd;             // rigid plunge acceleration per strip, wing z
};

// Full aircraft: rigid-body dynamics coupled with two mirrored wing models.
// The left wing reuses the right wing's matrices with mirrored inputs and
// un-mirrored outputs (reflection about the x-z plane).
// The plant has an algebraic loop: body accelerations drive the wing
// inertial loading, whose root reactions feed back into the body
// accelerations. The loop is solved per derivative evaluation using a
// calibrated linear sensitivity (the map is linear in the accelerations,
// with nearly state-independent coefficients).
struct AccelCoupling {
    bool ready{false};
    Eigen::Matrix<double, 6, 6> gain_inv;  // (I - dG/da)^-1 of the loop
    MatX sens;  // d[dx; Vb_dot; omega_dot; root_r; root_l]/d(a_b, alpha_b)
};

struct AircraftModel {
    AircraftConfig cfg;
    WingModel wing;       // shared elastic-aero model (built at V_ref)
    double V_ref{0.0}, rho{0.0};
    Mat3 C_WB;            // body -> wing, right side
    Vec3 r_wb;            // right wing root, body frame
    bool rigid{false};            // quasi-steady wings, no elastic states
    bool elastic_coupling{true};  // d_F/d_M and deformation-dependent S, J
    mutable AccelCoupling acc;    // calibrated lazily at first evaluation

    int n_flaps() const { return int(wing.flap_nodes.size()); }
};

AircraftModel build_aircraft(const AircraftConfig& cfg, double V_ref,
                             double altitude_m, bool rigid = false);

// Eq.-style kinematics
Vec3 position_kinematics(double V, double chi, double gamma);

// (mu_dot, alpha_dot, beta_dot) from body rates and path rates; solves the
// attitude kinematic relation for the rate triplet.
Vec3 attitude_kinematics(const RigidState& s, double chi_dot,
                         double gamma_dot);

// matrix relating (mu_dot, alpha_dot, beta_dot) to the body-rate residual;
// exposed for the determinant/inversion tests
Mat3 attitude_rate_matrix(double alpha, double beta, double mu);

double drag_coefficient(double CL, double CD0, double k_drag);

// Airspeed of a body-fixed point (body frame), gust removed from the flow.
Vec3 local_airspeed(const Vec3& V_b, const Vec3& omega, const Vec3& r,
                    const Vec3& gust_body);

// Acceleration of a body-fixed point under rigid motion.
Vec3 rigid_point_acceleration(const Vec3& a_b, const Vec3& alpha_b,
                              const Vec3& omega_b, const Vec3& r);

// Strip-level rigid/gust inputs and nodal forcing for one wing.
// side = +1 right, -1 left. a_b is the body-frame acceleration of the
// reference point (previous step, gravity excluded), alpha_b the angular
// acceleration.
WingInputs wing_inputs(const AircraftModel& ac, int side, const RigidState& s,
                       const Vec3& a_b, const Vec3& alpha_b,
                       const GustField& gust);

// Mass moments from the fuselage points and the deformed wing nodes.
// xs_right/left are the structural displacement blocks (may be empty for
// the undeformed/rigid case).
MassMoments mass_moments(const AircraftModel& ac, const VecX& xs_right,
                         const VecX& xs_left);

// Total external forces/moments in the body frame. Strip loads are taken
// from the wing states and derivatives; surfaces, drag, thrust and gravity
// added. d_F/d_M computed when elastic coupling is enabled.
ForceMomentSet total_forces_moments(const AircraftModel& ac,
                                    const RigidState& s,
                                    const ControlInputs& ctl,
                                    const VecX& xe_r, const VecX& xe_l,
                                    const VecX& xsdd_r, const VecX& xsdd_l,
                                    const WingInputs& in_r,
                                    const WingInputs& in_l,
                                    const GustField& gust,
                                    const MassMoments& mm);

// Translational dynamics: returns (V_dot, chi_dot, gamma_dot) and the body
// acceleration V_b_dot (for the incremental controllers and Eq. 21).
struct TranslationalRates {
    double V_dot, chi_dot, gamma_dot;
    Vec3 Vb_dot;
};
TranslationalRates translational_dynamics(const RigidState& s, double mass,
                                          const MassMoments& mm,
                                          const Vec3& F_tot, const Vec3& d_F,
                                          const Vec3& alpha_b);

// Rotational dynamics, Eq.-(21) structure.
Vec3 rotational_dynamics(const RigidState& s, const MassMoments& mm,
                         const Vec3& Vb_dot, const Vec3& M_tot,
                         const Vec3& d_M);

} // namespace aeroflex
