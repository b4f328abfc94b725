#pragma once

#include "aeroflex/beam.hpp"
#include "aeroflex/config.hpp"
#include "aeroflex/types.hpp"

namespace aeroflex {

// Two-pole exponential approximation of an indicial response,
//   step(tau) = 1 - a1 exp(-b1 tau) - a2 exp(-b2 tau),
// in reduced time tau = V t / b.
struct IndicialApprox {
    double a1, b1, a2, b2;
    double value(double tau) const {
        return 1.0 - a1 * std::exp(-b1 * tau) - a2 * std::exp(-b2 * tau);
    }
    double feedthrough() const { return 1.0 - a1 - a2; }
};

inline IndicialApprox wagner_approx() { return {0.165, 0.0455, 0.335, 0.3}; }
inline IndicialApprox kussner_approx() { return {0.5, 0.13, 0.5, 1.0}; }

// Companion-form state space whose step response reproduces the indicial
// approximation in physical time at airspeed V and semichord b:
//   zdot = A z + B u,  y = C z + D u.
struct IndicialRealization {
    Eigen::Matrix2d A;
    Eigen::Vector2d B;
    Eigen::RowVector2d C;
    double D;
};

IndicialRealization indicial_realization(const IndicialApprox& ap, double V,
                                         double b);

// Aggregated strip aerodynamics for one wing. Strip motion coordinates
// x_a = (w, theta, beta) per strip (3 n_a total); lag states hold two
// Wagner and two Kussner poles per strip (4 n_a). Strip loads
// y_a = (f_z, m_theta, m_beta) per strip are totals over the strip width,
// f_z down positive, m_theta nose-up about the elastic axis, m_beta the
// hinge moment:
//   y_a = Ma xa_dd + Ca xa_d + Ka xa + Kz z + Kr alpha_r
//   z_d = Az z + Bz xa + Bzd xa_d + Bzr alpha_r + Bzg alpha_g
// with alpha_r the rigid-motion angle of attack per strip and alpha_g the
// gust angle per strip.
struct StripAeroModel {
    int n_strips{0};
    double V{0.0}, rho{0.0};
    MatX Ma, Ca, Ka;  // 3n x 3n
    MatX Kz;          // 3n x 4n
    MatX Kr;          // 3n x n
    MatX Kr_steady;   // 3n x n, fully developed circulatory gain (step at infinity)
    MatX Az;          // 4n x 4n
    MatX Bz, Bzd;     // 4n x 3n
    MatX Bzr, Bzg;    // 4n x n
};

StripAeroModel build_strip_aero(const std::vector<StripAeroSpec>& strips,
                                double V, double rho);

// Nearest-node interpolation between the beam and the strips.
// H_as (3 n_a x 4 n_s) picks strip (w, theta, beta) from the nearest free
// node; H_sa (4 n_s x 3 n_a) assigns strip loads to that node, transferring
// the vertical force with its moment arm into the bending rotation load.
struct InterpMaps {
    MatX H_as, H_sa;
    std::vector<int> strip_node; // free-node index (1-based) per strip
};

InterpMaps build_interp(const BeamModel& beam,
                        const std::vector<StripAeroSpec>& strips);

// Quasi-steady rigid-motion angle of attack of one strip: ratio of the
// flow-normal velocity (down positive, gust removed) to the chordwise
// flow speed, in the strip plane.
double strip_alpha_rigid(double v_normal_down, double v_chordwise);

} // namespace aeroflex
