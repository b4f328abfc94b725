#pragma once

#include <string>
#include <vector>

#include "aeroflex/flight.hpp"
#include "aeroflex/sim.hpp"

namespace aeroflex {

struct TrimPoint {
    double V{35.0};
    double alpha{0.0};
    double elevator{0.0};
    double thrust{0.0};
    VecX xe_right, xe_left;   // elastic equilibrium (empty when rigid)
    Vec3 root_loads;          // (F_w, M_phi, M_theta) at trim, right wing
    double residual{0.0};     // nondimensional residual norm
    ControlInputs controls() const {
        ControlInputs c;
        c.elevator = elevator;
        c.thrust = thrust;
        return c;
    }
    RigidState state() const {
        RigidState s;
        s.position = Vec3::Zero();
        s.V = V;
        s.alpha = alpha;
        return s;
    }
    PlantState plant_state(int nxe) const;
};

// Straight-and-level trim: solves (V_dot, gamma_dot, q_dot) = 0 over
// (alpha, elevator, thrust), with the elastic states at equilibrium for
// flexible aircraft (nested iteration).
TrimPoint trim_aircraft(const AircraftModel& ac, double V);

// Nondimensionalized trim residual (V_dot/g, gamma_dot*V/g, q_dot*c/(2V^2/c...))
Vec3 trim_residual(const AircraftModel& ac, const TrimPoint& tp);

// Central-difference linearization of the full plant about a trim point.
// State order matches PlantState (position rows excluded):
//   [V, chi, gamma, mu, alpha, beta, p, q, r, xe_R, xe_L]
struct LinearModel {
    MatX A;
    MatX B;  // columns: elevator, rudder, thrust, u_R(7), u_L(7)
    std::vector<std::string> state_names;
};

LinearModel linearize(const AircraftModel& ac, const TrimPoint& tp);

struct ModeInfo {
    double omega_n;   // rad/s
    double zeta;
    double freq_hz;
    std::string label;          // rigid / elastic / coupled
    double rigid_share;         // participation fraction in rigid states
    VecX participation;         // per-state participation factors (sum 1)
    std::complex<double> eig;
};

std::vector<ModeInfo> modal_analysis(const LinearModel& lm, int nxe);
void write_modes_csv(const std::vector<ModeInfo>& modes, const std::string& path);

} // namespace aeroflex
