#include "aeroflex/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aeroflex {

PositionRefs position_loop(const Vec3& pos, const Vec3& pos_ref,
                           const Vec3& vel_ref, double V, double gamma,
                           double K_Y, double K_Z) {
    const double nu_Y = vel_ref.y() + K_Y * (pos_ref.y() - pos.y());
    const double nu_Z = vel_ref.z() + K_Z * (pos_ref.z() - pos.z());
    const double sy = std::clamp(nu_Y / (V * std::cos(gamma)), -1.0, 1.0);
    const double sz = std::clamp(nu_Z / V, -1.0, 1.0);
    return {std::asin(sy), -std::asin(sz)};
}

double path_control_effectiveness(double thrust, double q_dyn, double S_w,
                                  double CLa_total, double mass, double V,
                                  double mu, double alpha) {
    return std::cos(mu) *
           (thrust * std::cos(alpha) + q_dyn * S_w * CLa_total) / (mass * V);
}

double bank_reference(double nu_chi, double nu_gamma, double V, double gamma) {
    return std::atan2(nu_chi * V * std::cos(gamma),
                      nu_gamma * V + kGravity * std::cos(gamma));
}

PathLoopController::Output PathLoopController::step(
    const RigidState& s, double chi_ref, double gamma_ref,
    double gamma_ref_dot, double V_ref, double gamma_dot_0, double dt) {
    const double nu_chi = gains.K_chi * (chi_ref - s.chi);
    const double nu_gamma = gains.K_chi * (gamma_ref - s.gamma);
    const double mu_ref = bank_reference(nu_chi, nu_gamma, s.V, s.gamma);

    // incremental sliding-mode climb control through the angle of attack
    const double sigma = s.gamma - gamma_ref;
    const double nu_n = -gains.K_gamma_sigma * sigma;
    const double nu_s = st_gamma.step(sigma, dt);
    const double G0 = eff_scale *
                      path_control_effectiveness(thrust_cmd, q_dyn, S_w,
                                                 gains.CLa_total, mass, s.V,
                                                 s.mu, s.alpha);
    if (std::abs(G0) > 1e-9)
        alpha_cmd += (nu_n + nu_s + gamma_ref_dot - gamma_dot_0) / G0;
    alpha_cmd = std::clamp(alpha_cmd, deg2rad(-10.0), deg2rad(15.0));

    // PI speed hold on thrust
    const double ev = V_ref - s.V;
    v_integral += ev * dt;
    thrust_cmd = std::clamp(thrust_trim + Kp_v * ev + Ki_v * v_integral, 0.0,
                            thrust_max);
    return {alpha_cmd, mu_ref, thrust_cmd};
}

Vec3 sig_pow(const Vec3& s, double gamma_exp) {
    Vec3 out;
    for (int i = 0; i < 3; ++i)
        out(i) = std::pow(std::abs(s(i)), gamma_exp) *
                 (s(i) > 0 ? 1.0 : s(i) < 0 ? -1.0 : 0.0);
    return out;
}

Vec3 AttitudeController::angular_accel_estimate(const Vec3& omega, double dt) {
    // critically damped second-order differentiator, ~15 Hz bandwidth
    const double wn = 2.0 * kPi * 15.0;
    if (!primed) {
        omega_filt = omega;
        omega_dot_filt.setZero();
    }
    const Vec3 err = omega - omega_filt;
    omega_filt += omega_dot_filt * dt;
    omega_dot_filt += (wn * wn * err - 2.0 * wn * omega_dot_filt) * dt;
    return omega_dot_filt;
}

Vec3 AttitudeController::step(const RigidState& s, const Vec3& y_ref,
                              double chi_dot, double gamma_dot,
                              const Vec3& u_meas, double dt) {
    const Mat3 E = attitude_rate_matrix(s.alpha, s.beta, s.mu);
    const Mat3 G1 = E.inverse();
    const Mat3 C_BK = dcm_body_from_kinematic(s.alpha, s.beta, s.mu);
    const Vec3 omega_K(-chi_dot * std::sin(s.gamma), gamma_dot,
                       chi_dot * std::cos(s.gamma));
    const Vec3 f1 = -G1 * (C_BK * omega_K);

    const Vec3 y(s.mu, s.alpha, s.beta);
    const Vec3 z1 = y - y_ref;
    const Vec3 y_ref_dot = primed ? Vec3((y_ref - y_ref_prev) / dt) : Vec3::Zero();
    const Vec3 K1 = gains.K1;
    const Vec3 x2_ref = E * (-f1 - K1.cwiseProduct(z1) + y_ref_dot);

    const Vec3 omega_dot_0 = angular_accel_estimate(s.omega, dt);
    const Vec3 x2_ref_dot = primed ? Vec3((x2_ref - x2_ref_prev) / dt) : Vec3::Zero();

    const Vec3 z2 = s.omega - x2_ref;
    const Vec3 nu_c = -gains.K2.cwiseProduct(z2) + x2_ref_dot -
                      G1.transpose() * z1;
    const Vec3 nu_s = -gains.K_s.cwiseProduct(sig_pow(z2, gains.gamma_s));

    // elevator and rudder actuators settle well within a control sample, so
    // the increment rides on the previous command; the bending differential
    // responds through the slower wing loop, so its increment rides on the
    // measurement to avoid wind-up against that lag
    const Vec3 du = G2_bar.inverse() * (nu_c + nu_s - omega_dot_0);
    u(0) += du(0);
    u(1) += du(1);
    u(2) = u_meas(2) + du(2);

    y_ref_prev = y_ref;
    x2_ref_prev = x2_ref;
    primed = true;
    return u;
}

std::pair<double, double> bending_reference_allocation(double diff_ref,
                                                       double trim,
                                                       double cap) {
    double right = trim - diff_ref / 2.0;
    double left = trim + diff_ref / 2.0;
    const double mx = std::max(right, left);
    if (mx > cap) {
        right -= mx - cap;
        left -= mx - cap;
    }
    return {right, left};
}

WingLqrDesign design_wing_lqr(const WingModel& wing, const ControlConfig& ct,
                              double act_tau) {
    WingLqrDesign d;
    const int nx = wing.n_states();
    const int nu = int(wing.flap_nodes.size());
    d.nx = nx;
    d.act_tau = act_tau;

    // tracked outputs (shear up, bending tip-up) from the root-load map
    d.C_y = MatX::Zero(2, nx);
    d.C_y.row(0) = wing.Croot.row(0);
    d.C_y.row(1) = -wing.Croot.row(1);
    d.D_y_u = MatX::Zero(2, nu);
    d.D_y_u.row(0) = wing.Droot_u.row(0);
    d.D_y_u.row(1) = -wing.Droot_u.row(1);
    d.D_y_r = MatX::Zero(2, wing.n_a);
    d.D_y_r.row(0) = wing.Droot_r.row(0);
    d.D_y_r.row(1) = -wing.Droot_r.row(1);
    d.D_y_fs = MatX::Zero(2, 4 * wing.n_s);
    d.D_y_fs.row(0) = wing.Droot_fs.row(0);
    d.D_y_fs.row(1) = -wing.Droot_fs.row(1);

    // state layout: [wing states; 2 load integrators; nu actuator moments],
    // input is the commanded hinge moment ahead of the actuator lag
    const int n = nx + 2 + nu;
    d.A_aug = MatX::Zero(n, n);
    d.A_aug.topLeftCorner(nx, nx) = wing.A;
    d.A_aug.block(nx, 0, 2, nx) = d.C_y;
    d.A_aug.block(0, nx + 2, nx, nu) = wing.Bu;
    d.A_aug.block(nx, nx + 2, 2, nu) = d.D_y_u;
    d.A_aug.bottomRightCorner(nu, nu) =
        -MatX::Identity(nu, nu) / act_tau;
    d.B_aug = MatX::Zero(n, nu);
    d.B_aug.bottomRows(nu) = MatX::Identity(nu, nu) / act_tau;

    VecX qdiag = VecX::Zero(n);
    qdiag.head(4 * wing.n_s).setConstant(ct.q_elastic_rate);
    qdiag(nx) = ct.q_integral;
    qdiag(nx + 1) = ct.q_integral;
    d.Q = qdiag.asDiagonal();
    d.R = ct.r_flap * MatX::Identity(nu, nu);

    // balance the augmented system (powers of two) before the Riccati solve;
    // the raw matrices span ~10 decades and wreck the achievable residual
    d.scale = VecX::Ones(n);
    for (int sweep = 0; sweep < 20; ++sweep) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(d.A_aug(j, i) * d.scale(i) / d.scale(j));
                r += std::abs(d.A_aug(i, j) * d.scale(j) / d.scale(i));
            }
            if (c <= 0.0 || r <= 0.0) continue;
            const double f =
                std::exp2(std::round(0.5 * std::log2(r / c)));
            if (f != 1.0 && std::isfinite(f)) {
                d.scale(i) *= f;
                changed = true;
            }
        }
        if (!changed) break;
    }
    const MatX S = d.scale.asDiagonal();
    const MatX Sinv = d.scale.cwiseInverse().asDiagonal();
    d.A_aug = Sinv * d.A_aug * S;
    d.B_aug = Sinv * d.B_aug;
    d.Q = S * d.Q * S;

    d.lqr = lqr_design(d.A_aug, d.B_aug, d.Q, d.R);
    return d;
}

VecX WingLoadController::step(const VecX& xe, const VecX& alpha_r,
                              const VecX& f_s, const Eigen::Vector2d& y_meas,
                              const Eigen::Vector2d& y_ref, double dt) {
    integral += (y_meas - y_ref) * dt;
    const int nx = design.nx;
    const int nu = int(u_trim.size());
    if (u_state.size() != nu) u_state = u_trim;
    VecX X = VecX::Zero(nx + 2 + nu);
    X.head(nx) = xe - xe_trim;
    X.segment(nx, 2) = integral;
    X.tail(nu) = u_state - u_trim;

    // known exogenous drive (deviation from trim) in the augmented dynamics
    VecX dvec = VecX::Zero(nx + 2 + nu);
    dvec.head(nx) = wing->Br * (alpha_r - alpha_r_trim);
    dvec.head(4 * wing->n_s) += wing->Mae_llt.solve(VecX(f_s - fs_trim));
    dvec.segment(nx, 2) += design.D_y_r * (alpha_r - alpha_r_trim) +
                           design.D_y_fs * (f_s - fs_trim) -
                           (y_ref - y_trim);

    // the gains live in the balanced coordinates of the design
    X = X.cwiseQuotient(design.scale);
    dvec = dvec.cwiseQuotient(design.scale);
    VecX u = u_trim + design.lqr.K_X * X + design.lqr.K_r * dvec;
    for (int i = 0; i < u.size(); ++i)
        u(i) = std::clamp(u(i), -u_limit, u_limit);

    // propagate the internal actuator model under the held command
    const double a = std::exp(-dt / design.act_tau);
    u_state = u + a * (u_state - u);
    return u;
}

} // namespace aeroflex
