#pragma once

#include "aeroflex/care.hpp"
#include "aeroflex/config.hpp"
#include "aeroflex/flight.hpp"

namespace aeroflex {

// ---------------------------------------------------------------- outer ---

// Position loop: inertial track errors -> course/climb references.
struct PositionRefs {
    double chi_ref, gamma_ref;
};
PositionRefs position_loop(const Vec3& pos, const Vec3& pos_ref,
                           const Vec3& vel_ref, double V, double gamma,
                           double K_Y, double K_Z);

// Control effectiveness of the angle of attack on the climb rate.
double path_control_effectiveness(double thrust, double q_dyn, double S_w,
                                  double CLa_total, double mass, double V,
                                  double mu, double alpha);

// Bank reference for coordinated course tracking.
double bank_reference(double nu_chi, double nu_gamma, double V, double gamma);

// Super-twisting disturbance term: nu_s = -lambda |s|^0.5 sign(s) + w,
// w_dot = -beta_st sign(s); gains from the disturbance bound.
struct SuperTwisting {
    double lambda{0.0}, beta_st{0.0};
    double w{0.0}; // integral state
    void set_bound(double eps_bar) {
        lambda = 1.5 * std::sqrt(eps_bar);
        beta_st = 1.1 * eps_bar;
    }
    double step(double s, double dt) {
        const double nu = -lambda * std::sqrt(std::abs(s)) * (s > 0 ? 1 : s < 0 ? -1 : 0) + w;
        w += -beta_st * (s > 0 ? 1 : s < 0 ? -1 : 0) * dt;
        return nu;
    }
};

// Incremental sliding-mode flight-path loop plus PI speed hold (50 Hz).
struct PathLoopController {
    ControlConfig gains;
    double mass{0.0}, S_w{0.0}, q_dyn{0.0};
    double eff_scale{1.0}; // robustness-test multiplier on the effectiveness

    SuperTwisting st_gamma;
    double alpha_cmd{0.0};    // incremented command
    double thrust_cmd{0.0};
    double thrust_trim{0.0}, thrust_max{1500.0};
    double v_integral{0.0};
    double Kp_v{60.0}, Ki_v{20.0};

    void init(double alpha_trim, double thrust_trim_value) {
        alpha_cmd = alpha_trim;
        thrust_trim = thrust_trim_value;
        thrust_cmd = thrust_trim_value;
        v_integral = 0.0;
        st_gamma.w = 0.0;
        st_gamma.set_bound(gains.disturbance_bound);
    }

    struct Output {
        double alpha_ref, mu_ref, thrust;
    };
    // gamma_dot_0: measured climb-angle rate (previous step)
    Output step(const RigidState& s, double chi_ref, double gamma_ref,
                double gamma_ref_dot, double V_ref, double gamma_dot_0,
                double dt);
};

// ------------------------------------------------------------- attitude ---

// Incremental backstepping sliding-mode attitude loop (100 Hz), commands
// (elevator, rudder, bending-moment difference).
struct AttitudeController {
    ControlConfig gains;
    Mat3 G2_bar{Mat3::Identity()}; // estimated control effectiveness on omega_dot
    Vec3 u{Vec3::Zero()};          // (delta_e, delta_r, M_phi_diff), incremented
    Vec3 omega_filt{Vec3::Zero()}, omega_dot_filt{Vec3::Zero()};
    Vec3 y_ref_prev{Vec3::Zero()}, x2_ref_prev{Vec3::Zero()};
    bool primed{false};

    void init(const Vec3& u_trim, const Vec3& y_ref0) {
        u = u_trim;
        y_ref_prev = y_ref0;
        omega_filt.setZero();
        omega_dot_filt.setZero();
        primed = false;
    }

    // second-order low-pass (15 Hz) differentiation of the body rate
    Vec3 angular_accel_estimate(const Vec3& omega, double dt);

    // y_ref = (mu_ref, alpha_ref, beta_ref); path rates are the measured
    // chi_dot/gamma_dot entering the attitude kinematics. u_meas carries the
    // achieved bending differential in its third entry; the roll increment
    // rides on that measurement so the slow wing loop does not wind it up.
    Vec3 step(const RigidState& s, const Vec3& y_ref, double chi_dot,
              double gamma_dot, const Vec3& u_meas, double dt);
};

// element-wise signed power |s|^gamma sign(s) used bythe sliding term
Vec3 sig_pow(const Vec3& s, double gamma_exp);

// ------------------------------------------------------------ wing load ---

// Algorithm-style bending reference allocation: split the commanded
// difference around trim, then shift both sides to respect the cap.
// Returns (right, left).
std::pair<double, double> bending_reference_allocation(double diff_ref,
                                                       double trim,
                                                       double cap);

// First-order shear reference filter.
struct ShearReference {
    double gain{0.0}, tau{1.0};
    double state{0.0}; // filtered deviation
    double trim{0.0};
    double step(double alpha_ref, double alpha_trim, double dt) {
        state += dt / tau * (gain * (alpha_ref - alpha_trim) - state);
        return trim + state;
    }
};

// LQR tracking controller for one wing (both wings share the design).
// A_aug/B_aug/Q and the Riccati solution are stored in balanced coordinates
// x_bal = scale^-1 x; `scale` maps physical augmented states into them.
// Augmented design plant: wing states, two load-tracking integrators, and
// the first-order flap actuators, so the gains respect the actuator lag.
struct WingLqrDesign {
    MatX A_aug, B_aug;
    MatX Q, R;
    LqrResult lqr;
    VecX scale;   // diagonal balancing transform (physical -> balanced: /scale)
    MatX C_y;     // (F_w, M_phi) rows from the root-load output map
    MatX D_y_u, D_y_r, D_y_fs;
    int nx{0};         // wing state count
    double act_tau{0}; // actuator time constant baked into A_aug
};

WingLqrDesign design_wing_lqr(const WingModel& wing, const ControlConfig& ct,
                              double act_tau);

struct WingLoadController {
    const WingModel* wing{nullptr};
    WingLqrDesign design;
    // trim operating point (deviation coordinates)
    VecX xe_trim, u_trim, alpha_r_trim, fs_trim;
    Eigen::Vector2d y_trim{Eigen::Vector2d::Zero()};
    Eigen::Vector2d integral{Eigen::Vector2d::Zero()};
    VecX u_state;        // internal model of the actuator hinge moments
    double u_limit{1e9}; // hinge-moment saturation [N*m]

    void reset() {
        integral.setZero();
        u_state = u_trim;
    }

    // y_meas/y_ref = (F_w, M_phi); returns the 7 hinge moments
    VecX step(const VecX& xe, const VecX& alpha_r, const VecX& f_s,
              const Eigen::Vector2d& y_meas, const Eigen::Vector2d& y_ref,
              double dt);
};

} // namespace aeroflex
