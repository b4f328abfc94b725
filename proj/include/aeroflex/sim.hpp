#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aeroflex/control.hpp"
#include "aeroflex/flight.hpp"
#include "aeroflex/turbulence.hpp"

namespace aeroflex {

// Monolithic continuous plant state:
//   [0:3)   inertial position
//   [3:9)   V, chi, gamma, mu, alpha, beta
//   [9:12)  p, q, r
//   [12:12+nxe)        right wing x_e   (flexible only)
//   [12+nxe:12+2nxe)   left wing x_e
struct PlantState {
    VecX x;
    int nxe{0};

    RigidState rigid() const;
    void set_rigid(const RigidState& s);
    Eigen::Ref<const VecX> xe_right() const { return x.segment(12, nxe); }
    Eigen::Ref<const VecX> xe_left() const { return x.segment(12 + nxe, nxe); }
};

// One-step-lagged acceleration estimates breaking the algebraic loop.
struct AccelLag {
    Vec3 a_b{Vec3::Zero()};      // body acceleration, gravity excluded
    Vec3 alpha_b{Vec3::Zero()};  // angular acceleration
};

struct PlantDeriv {
    VecX dx;
    Vec3 Vb_dot, omega_dot;
    VecX xsdd_r, xsdd_l;           // structural accelerations
    Vec3 root_loads_r, root_loads_l; // (F_w, M_phi, M_theta)
};

// Evaluates the full continuous dynamics. `gust` may be empty.
PlantDeriv plant_deriv(const AircraftModel& ac, const PlantState& ps,
                       const ControlInputs& ctl, const AccelLag& lag,
                       const GustField& gust);

// (F_w, M_phi, M_theta) transmitted at the clamp for one side
Vec3 wing_root_measurement(const AircraftModel& ac, int side,
                           const PlantState& ps, const ControlInputs& ctl,
                           const AccelLag& lag, const GustField& gust);

// first-order actuator with exact discrete update and saturation
struct Actuator {
    ActuatorSpec spec;
    double state{0.0};
    double update(double cmd, double dt) {
        if (spec.limit_rad > 0.0) cmd = std::clamp(cmd, -spec.limit_rad, spec.limit_rad);
        const double a = std::exp(-dt / spec.time_constant_s);
        state = cmd + (state - cmd) * a;
        if (spec.limit_rad > 0.0)
            state = std::clamp(state, -spec.limit_rad, spec.limit_rad);
        return state;
    }
};

// smooth sigmoid command profile amp/(1+exp(-rate(t-t0)))
double sigmoid_profile(double t, double amplitude, double rate, double t0);

// ------------------------------------------------------------- scenario ---

enum class CommandMode {
    hold,          // keep trim references
    attitude_alpha, // pull-up style alpha profile
    attitude_mu,    // sharp roll profile
    path,           // course/climb profile (spiral)
    position,       // 3D trajectory tracking
};

struct Scenario {
    int schema_version{1};
    std::string name;
    CommandMode mode{CommandMode::hold};
    double duration_s{10.0};
    double dt{5e-5};           // 20 kHz plant step
    double V_ref{35.0};
    double altitude_m{1000.0};
    bool flexible{true};
    bool mla_enabled{true};
    bool attitude_loop_enabled{true}; // false = open-loop (phugoid damper only)
    double bending_cap_Nm{5000.0};
    // sigmoid profile parameters (amplitudes rad, rates 1/s, centers s)
    double amp1{0.0}, rate1{8.0}, t1{1.0};
    double amp2{0.0}, rate2{8.0}, t2{3.0};
    // path mode: climb target and course rate
    double gamma_cmd_rad{0.0}, chi_rate_rads{0.0};
    // position mode: lateral/vertical sinusoid amplitudes and period
    double traj_amp_y_m{0.0}, traj_amp_z_m{0.0}, traj_period_s{30.0};
    // turbulence
    bool turbulence{false};
    double turb_length_m{762.0}, turb_sigma_ms{6.0};
    uint64_t turb_seed{1};
    // robustness-test multipliers on the estimated control effectiveness
    double g0_error{1.0};
    Mat3 g2_error{Mat3::Identity()};
    double log_rate_hz{100.0};
};

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& sc, const std::string& path);

// ------------------------------------------------------------ simulator ---

struct SimLog {
    std::vector<std::string> columns;
    std::vector<VecX> rows;
    void write_csv(const std::string& path) const;
};

struct SimResult {
    SimLog log;
    // trim values for metric baselines
    double alpha_trim, Fw_trim, Mphi_trim;
    bool diverged{false};
};

SimResult run_simulation(const AircraftConfig& cfg, const Scenario& sc);

} // namespace aeroflex
