#include "aeroflex/sim.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "aeroflex/control.hpp"
#include "aeroflex/trim.hpp"

namespace aeroflex {

RigidState PlantState::rigid() const {
    RigidState s;
    s.position = x.segment<3>(0);
    s.V = x(3);
    s.chi = x(4);
    s.gamma = x(5);
    s.mu = x(6);
    s.alpha = x(7);
    s.beta = x(8);
    s.omega = x.segment<3>(9);
    return s;
}

void PlantState::set_rigid(const RigidState& s) {
    x.segment<3>(0) = s.position;
    x(3) = s.V;
    x(4) = s.chi;
    x(5) = s.gamma;
    x(6) = s.mu;
    x(7) = s.alpha;
    x(8) = s.beta;
    x.segment<3>(9) = s.omega;
}

namespace {

PlantDeriv deriv_raw(const AircraftModel& ac, const PlantState& ps,
                     const ControlInputs& ctl, const AccelLag& lag,
                     const GustField& gust) {
    const RigidState s = ps.rigid();
    const int nxe = ps.nxe;
    const int ns4 = 4 * ac.wing.n_s;
    const int nf = ac.n_flaps();
    const VecX u_r = ctl.u_right.size() ? ctl.u_right : VecX::Zero(nf);
    const VecX u_l = ctl.u_left.size() ? ctl.u_left : VecX::Zero(nf);

    const WingInputs in_r = wing_inputs(ac, 1, s, lag.a_b, lag.alpha_b, gust);
    const WingInputs in_l = wing_inputs(ac, -1, s, lag.a_b, lag.alpha_b, gust);

    PlantDeriv out;
    out.dx = VecX::Zero(ps.x.size());
    VecX xe_r, xe_l, xed_r, xed_l;
    if (nxe > 0) {
        xe_r = ps.xe_right();
        xe_l = ps.xe_left();
        xed_r = ac.wing.deriv(xe_r, u_r, in_r.alpha_r, in_r.alpha_g, in_r.f_s);
        xed_l = ac.wing.deriv(xe_l, u_l, in_l.alpha_r, in_l.alpha_g, in_l.f_s);
        out.xsdd_r = xed_r.head(ns4);
        out.xsdd_l = xed_l.head(ns4);
    } else {
        out.xsdd_r = VecX::Zero(ns4);
        out.xsdd_l = VecX::Zero(ns4);
    }
    const VecX xs_r = nxe > 0 ? VecX(xe_r.segment(ns4, ns4)) : VecX();
    const VecX xs_l = nxe > 0 ? VecX(xe_l.segment(ns4, ns4)) : VecX();
    const MassMoments mm = mass_moments(ac, xs_r, xs_l);
    const ForceMomentSet fm =
        total_forces_moments(ac, s, ctl, xe_r, xe_l, out.xsdd_r, out.xsdd_l,
                             in_r, in_l, gust, mm);
    const TranslationalRates tr = translational_dynamics(
        s, ac.cfg.mass_kg, mm, fm.F, fm.d_F, lag.alpha_b);
    out.Vb_dot = tr.Vb_dot;
    out.omega_dot = rotational_dynamics(s, mm, tr.Vb_dot, fm.M, fm.d_M);

    const Vec3 att = attitude_kinematics(s, tr.chi_dot, tr.gamma_dot);
    out.dx.segment<3>(0) = position_kinematics(s.V, s.chi, s.gamma);
    out.dx(3) = tr.V_dot;
    out.dx(4) = tr.chi_dot;
    out.dx(5) = tr.gamma_dot;
    out.dx.segment<3>(6) = att;
    out.dx.segment<3>(9) = out.omega_dot;
    if (nxe > 0) {
        out.dx.segment(12, nxe) = xed_r;
        out.dx.segment(12 + nxe, nxe) = xed_l;
        out.root_loads_r = ac.wing.root_loads(xe_r, u_r, in_r.alpha_r, in_r.f_s);
        out.root_loads_l = ac.wing.root_loads(xe_l, u_l, in_l.alpha_r, in_l.f_s);
    } else {
        out.root_loads_r.setZero();
        out.root_loads_l.setZero();
    }
    return out;
}

VecX pack_outputs(const PlantDeriv& d) {
    const int n = int(d.dx.size());
    VecX y(n + 12);
    y.head(n) = d.dx;
    y.segment<3>(n) = d.Vb_dot;
    y.segment<3>(n + 3) = d.omega_dot;
    y.segment<3>(n + 6) = d.root_loads_r;
    y.segment<3>(n + 9) = d.root_loads_l;
    return y;
}

void calibrate_accel_coupling(const AircraftModel& ac, const PlantState& ps,
                              const ControlInputs& ctl) {
    const AccelLag lag0;
    const PlantDeriv d0 = deriv_raw(ac, ps, ctl, lag0, {});
    const VecX y0 = pack_outputs(d0);
    Eigen::Matrix<double, 6, 6> M;
    MatX D(y0.size(), 6);
    const double h = 1e-3;
    for (int j = 0; j < 6; ++j) {
        AccelLag lagj;
        if (j < 3) lagj.a_b(j) = h; else lagj.alpha_b(j - 3) = h;
        const PlantDeriv dj = deriv_raw(ac, ps, ctl, lagj, {});
        D.col(j) = (pack_outputs(dj) - y0) / h;
        M.col(j).head<3>() = (dj.Vb_dot - d0.Vb_dot) / h;
        M.col(j).tail<3>() = (dj.omega_dot - d0.omega_dot) / h;
    }
    ac.acc.gain_inv =
        (Eigen::Matrix<double, 6, 6>::Identity() - M).inverse();
    ac.acc.sens = D;
    ac.acc.ready = true;
}

} // namespace

PlantDeriv plant_deriv(const AircraftModel& ac, const PlantState& ps,
                       const ControlInputs& ctl, const AccelLag& lag,
                       const GustField& gust) {
    if (!ac.acc.ready) calibrate_accel_coupling(ac, ps, ctl);
    PlantDeriv out = deriv_raw(ac, ps, ctl, lag, gust);
    const RigidState s = ps.rigid();
    Eigen::Matrix<double, 6, 1> u, y;
    u << lag.a_b, lag.alpha_b;
    y << out.Vb_dot + s.omega.cross(s.velocity_body()), out.omega_dot;
    const Eigen::Matrix<double, 6, 1> delta = ac.acc.gain_inv * (y - u);
    const VecX corr = ac.acc.sens * delta;
    const int n = int(out.dx.size());
    out.dx += corr.head(n);
    out.Vb_dot += corr.segment<3>(n);
    out.omega_dot += corr.segment<3>(n + 3);
    out.root_loads_r += corr.segment<3>(n + 6);
    out.root_loads_l += corr.segment<3>(n + 9);
    if (ps.nxe > 0) {
        const int ns4 = 4 * ac.wing.n_s;
        out.xsdd_r = out.dx.segment(12, ns4);
        out.xsdd_l = out.dx.segment(12 + ps.nxe, ns4);
    }
    return out;
}

Vec3 wing_root_measurement(const AircraftModel& ac, int side,
                           const PlantState& ps, const ControlInputs& ctl,
                           const AccelLag& lag, const GustField& gust) {
    const RigidState s = ps.rigid();
    const int nf = ac.n_flaps();
    const WingInputs in = wing_inputs(ac, side, s, lag.a_b, lag.alpha_b, gust);
    const VecX& uc = side > 0 ? ctl.u_right : ctl.u_left;
    const VecX u = uc.size() ? uc : VecX::Zero(nf);
    const VecX xe = ps.nxe > 0
                        ? VecX(side > 0 ? ps.xe_right() : ps.xe_left())
                        : VecX(VecX::Zero(ac.wing.n_states()));
    return ac.wing.root_loads(xe, u, in.alpha_r, in.f_s);
}

double sigmoid_profile(double t, double amplitude, double rate, double t0) {
    return amplitude / (1.0 + std::exp(-rate * (t - t0)));
}

// ------------------------------------------------------------- scenario ---

namespace {

const char* mode_name(CommandMode m) {
    switch (m) {
        case CommandMode::hold: return "hold";
        case CommandMode::attitude_alpha: return "attitude_alpha";
        case CommandMode::attitude_mu: return "attitude_mu";
        case CommandMode::path: return "path";
        case CommandMode::position: return "position";
    }
    return "hold";
}

CommandMode mode_from_name(const std::string& s) {
    if (s == "hold") return CommandMode::hold;
    if (s == "attitude_alpha") return CommandMode::attitude_alpha;
    if (s == "attitude_mu") return CommandMode::attitude_mu;
    if (s == "path") return CommandMode::path;
    if (s == "position") return CommandMode::position;
    throw std::runtime_error("unknown scenario mode: " + s);
}

} // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scenario file not found: " + path);
    nlohmann::json j;
    in >> j;
    Scenario sc;
    sc.schema_version = j.value("schema_version", 1);
    if (sc.schema_version != 1)
        throw std::runtime_error("unsupported scenario schema version");
    sc.name = j.value("name", std::string("scenario"));
    sc.mode = mode_from_name(j.value("mode", std::string("hold")));
    sc.duration_s = j.value("duration_s", sc.duration_s);
    sc.dt = j.value("dt_s", sc.dt);
    sc.V_ref = j.value("V_ref_ms", sc.V_ref);
    sc.altitude_m = j.value("altitude_m", sc.altitude_m);
    sc.flexible = j.value("flexible", sc.flexible);
    sc.mla_enabled = j.value("mla_enabled", sc.mla_enabled);
    sc.attitude_loop_enabled =
        j.value("attitude_loop_enabled", sc.attitude_loop_enabled);
    sc.bending_cap_Nm = j.value("bending_cap_Nm", sc.bending_cap_Nm);
    sc.amp1 = j.value("amp1", sc.amp1);
    sc.rate1 = j.value("rate1", sc.rate1);
    sc.t1 = j.value("t1", sc.t1);
    sc.amp2 = j.value("amp2", sc.amp2);
    sc.rate2 = j.value("rate2", sc.rate2);
    sc.t2 = j.value("t2", sc.t2);
    sc.gamma_cmd_rad = j.value("gamma_cmd_rad", sc.gamma_cmd_rad);
    sc.chi_rate_rads = j.value("chi_rate_rads", sc.chi_rate_rads);
    sc.traj_amp_y_m = j.value("traj_amp_y_m", sc.traj_amp_y_m);
    sc.traj_amp_z_m = j.value("traj_amp_z_m", sc.traj_amp_z_m);
    sc.traj_period_s = j.value("traj_period_s", sc.traj_period_s);
    sc.turbulence = j.value("turbulence", sc.turbulence);
    sc.turb_length_m = j.value("turb_length_m", sc.turb_length_m);
    sc.turb_sigma_ms = j.value("turb_sigma_ms", sc.turb_sigma_ms);
    sc.turb_seed = j.value("turb_seed", sc.turb_seed);
    sc.g0_error = j.value("g0_error", sc.g0_error);
    const double g2s = j.value("g2_error_scale", 1.0);
    sc.g2_error = g2s * Mat3::Identity();
    sc.log_rate_hz = j.value("log_rate_hz", sc.log_rate_hz);
    if (!(sc.duration_s > 0.0)) throw std::runtime_error("duration must be positive");
    if (!sc.attitude_loop_enabled && sc.mla_enabled)
        throw std::runtime_error("open-loop baseline excludes load control");
    return sc;
}

void save_scenario(const Scenario& sc, const std::string& path) {
    nlohmann::json j;
    j["schema_version"] = sc.schema_version;
    j["name"] = sc.name;
    j["mode"] = mode_name(sc.mode);
    j["duration_s"] = sc.duration_s;
    j["dt_s"] = sc.dt;
    j["V_ref_ms"] = sc.V_ref;
    j["altitude_m"] = sc.altitude_m;
    j["flexible"] = sc.flexible;
    j["mla_enabled"] = sc.mla_enabled;
    j["attitude_loop_enabled"] = sc.attitude_loop_enabled;
    j["bending_cap_Nm"] = sc.bending_cap_Nm;
    j["amp1"] = sc.amp1;
    j["rate1"] = sc.rate1;
    j["t1"] = sc.t1;
    j["amp2"] = sc.amp2;
    j["rate2"] = sc.rate2;
    j["t2"] = sc.t2;
    j["gamma_cmd_rad"] = sc.gamma_cmd_rad;
    j["chi_rate_rads"] = sc.chi_rate_rads;
    j["traj_amp_y_m"] = sc.traj_amp_y_m;
    j["traj_amp_z_m"] = sc.traj_amp_z_m;
    j["traj_period_s"] = sc.traj_period_s;
    j["turbulence"] = sc.turbulence;
    j["turb_length_m"] = sc.turb_length_m;
    j["turb_sigma_ms"] = sc.turb_sigma_ms;
    j["turb_seed"] = sc.turb_seed;
    j["g0_error"] = sc.g0_error;
    j["g2_error_scale"] = sc.g2_error(0, 0);
    j["log_rate_hz"] = sc.log_rate_hz;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario: " + path);
    out << j.dump(2) << "\n";
}

void SimLog::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write log: " + path);
    out.precision(12);
    for (size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const VecX& r : rows) {
        for (int i = 0; i < r.size(); ++i)
            out << r(i) << (i + 1 < r.size() ? "," : "\n");
    }
}

// ------------------------------------------------------------ simulator ---

SimResult run_simulation(const AircraftConfig& cfg, const Scenario& sc) {
    AircraftModel ac = build_aircraft(cfg, sc.V_ref, sc.altitude_m, !sc.flexible);
    const TrimPoint tp = trim_aircraft(ac, sc.V_ref);
    const int nxe = sc.flexible ? ac.wing.n_states() : 0;
    const int nf = ac.n_flaps();
    const double dt = sc.dt;
    const double g = kGravity;

    PlantState ps = tp.plant_state(nxe);
    ps.x(2) = -sc.altitude_m;

    // frozen turbulence field
    TurbulenceField tf;
    GustField gust;
    if (sc.turbulence) {
        tf = generate_turbulence(4096.0, 512.0, 2.0, sc.turb_length_m,
                                 sc.turb_sigma_ms, sc.turb_seed);
        const double y_mid = 0.0, z_off = sc.altitude_m;
        (void)z_off;
        gust = [&tf, y_mid](const Vec3& p) {
            return tf.sample(p.x(), p.y() - y_mid + 256.0);
        };
    }

    // control effectiveness estimate for the attitude loop: elevator and
    // rudder columns by finite difference at trim, bending-difference
    // column through the inertia (unit diff produces unit roll moment)
    Mat3 G2_est = Mat3::Zero();
    {
        AccelLag lag0;
        const ControlInputs c0 = tp.controls();
        const double h = 1e-4;
        auto wdot = [&](const ControlInputs& c) {
            return plant_deriv(ac, ps, c, lag0, {}).omega_dot;
        };
        ControlInputs cp = c0, cm = c0;
        cp.elevator += h;
        cm.elevator -= h;
        G2_est.col(0) = (wdot(cp) - wdot(cm)) / (2.0 * h);
        cp = c0;
        cm = c0;
        cp.rudder += h;
        cm.rudder -= h;
        G2_est.col(1) = (wdot(cp) - wdot(cm)) / (2.0 * h);
        const MassMoments mm = mass_moments(ac, VecX(), VecX());
        G2_est.col(2) = mm.J.ldlt().solve(Vec3(1.0, 0.0, 0.0));
    }

    // controllers
    PathLoopController path;
    path.gains = cfg.control;
    path.mass = cfg.mass_kg;
    path.S_w = cfg.wing_area_m2;
    path.q_dyn = 0.5 * ac.rho * sc.V_ref * sc.V_ref;
    path.eff_scale = sc.g0_error;
    path.thrust_max = cfg.max_thrust_N;
    path.init(tp.alpha, tp.thrust);

    AttitudeController att;
    att.gains = cfg.control;
    att.G2_bar = G2_est * sc.g2_error;
    att.init(Vec3(tp.elevator, 0.0, 0.0), Vec3(0.0, tp.alpha, 0.0));

    WingLqrDesign wing_design;
    WingLoadController wlc_r, wlc_l;
    ShearReference shear;
    const double Mphi_trim = tp.root_loads(1);
    const double Fw_trim = tp.root_loads(0);
    if (sc.flexible && sc.mla_enabled) {
        wing_design = design_wing_lqr(ac.wing, cfg.control, cfg.flap_act.time_constant_s);
        AccelLag lag0;
        const WingInputs in0 = wing_inputs(ac, 1, tp.state(), lag0.a_b,
                                           lag0.alpha_b, {});
        for (WingLoadController* w : {&wlc_r, &wlc_l}) {
            w->wing = &ac.wing;
            w->design = wing_design;
            w->xe_trim = tp.xe_right;
            w->u_trim = VecX::Zero(nf);
            w->alpha_r_trim = in0.alpha_r;
            w->fs_trim = in0.f_s;
            w->y_trim = Eigen::Vector2d(Fw_trim, Mphi_trim);
            w->u_limit = cfg.flaps.front().hinge_stiffness_Nm *
                         cfg.flap_act.limit_rad;
            w->reset();
        }
        shear.gain = cfg.control.shear_filter_gain * path.q_dyn *
                     cfg.wing_area_m2 * cfg.control.CLa_total;
        shear.tau = cfg.control.shear_filter_tau_s > 0.0
                        ? cfg.control.shear_filter_tau_s
                        : cfg.strips.front().semichord_m / (0.3 * sc.V_ref);
        shear.trim = Fw_trim;
        shear.state = 0.0;
    }

    // actuators
    Actuator act_e{cfg.elevator, tp.elevator};
    Actuator act_r{cfg.rudder, 0.0};
    Actuator act_T{cfg.throttle, tp.thrust};
    act_T.spec.limit_rad = 0.0; // thrust clamped separately
    const double u_lim =
        cfg.flaps.front().hinge_stiffness_Nm * cfg.flap_act.limit_rad;
    std::vector<Actuator> act_fr(nf, Actuator{ActuatorSpec{cfg.flap_act.time_constant_s, u_lim, 0.0}, 0.0});
    std::vector<Actuator> act_fl = act_fr;

    ControlInputs ctl = tp.controls();
    ctl.u_right = VecX::Zero(nf);
    ctl.u_left = VecX::Zero(nf);

    // loop scheduling
    const int fast_div = std::max(1, int(std::lround(1.0 / (cfg.control.fast_loop_hz * dt))));
    const int slow_div = std::max(1, int(std::lround(1.0 / (cfg.control.slow_loop_hz * dt))));
    const int log_div = std::max(1, int(std::lround(1.0 / (sc.log_rate_hz * dt))));
    const double dt_fast = fast_div * dt;
    const double dt_slow = slow_div * dt;
    const int n_steps = int(std::lround(sc.duration_s / dt));

    // commanded references, held between ticks
    double alpha_ref = tp.alpha, mu_ref = 0.0;
    double gamma_ref = 0.0, chi_ref = 0.0, gamma_ref_prev = 0.0;
    bool slow_primed = false;
    double thrust_cmd = tp.thrust;
    double elev_cmd = tp.elevator, rud_cmd = 0.0, diff_cmd = 0.0;
    double Fw_ref = Fw_trim, Mr_ref = Mphi_trim, Ml_ref = Mphi_trim;
    VecX u_r_cmd = VecX::Zero(nf), u_l_cmd = VecX::Zero(nf);
    double v_int = 0.0; // speed-hold integral for the attitude-command modes
    const double nz_trim = std::cos(tp.alpha);

    AccelLag lag;
    PlantDeriv k1 = plant_deriv(ac, ps, ctl, lag, gust);

    SimResult res;
    res.alpha_trim = tp.alpha;
    res.Fw_trim = Fw_trim;
    res.Mphi_trim = Mphi_trim;
    res.log.columns = {
        "t_s", "x_m", "y_m", "z_m", "V_ms", "chi_rad", "gamma_rad",
        "mu_rad", "alpha_rad", "beta_rad", "p_rads", "q_rads", "r_rads",
        "nz_g", "Fw_r_N", "Mphi_r_Nm", "Mt_r_Nm", "Fw_l_N", "Mphi_l_Nm",
        "Mt_l_Nm", "alpha_ref_rad", "mu_ref_rad", "gamma_ref_rad",
        "chi_ref_rad", "Mphi_ref_r_Nm", "Mphi_ref_l_Nm", "Fw_ref_N",
        "elevator_rad", "rudder_rad", "thrust_N", "flap_max_rad",
        "tip_disp_m", "wg_ms", "nz_trim_g", "Mphi_trim_Nm", "alpha_trim_rad"};

    const int ns4 = 4 * ac.wing.n_s;
    for (int i = 0; i <= n_steps; ++i) {
        const double t = i * dt;
        const RigidState s = ps.rigid();

        // ---- outer loops (50 Hz)
        if (i % slow_div == 0) {
            if (sc.mode == CommandMode::attitude_alpha) {
                alpha_ref = tp.alpha +
                            sigmoid_profile(t, sc.amp1, sc.rate1, sc.t1) +
                            sigmoid_profile(t, sc.amp2, sc.rate2, sc.t2);
                mu_ref = 0.0;
            } else if (sc.mode == CommandMode::attitude_mu) {
                alpha_ref = tp.alpha;
                mu_ref = sigmoid_profile(t, sc.amp1, sc.rate1, sc.t1);
            } else {
                double chi_c = 0.0, gamma_c = 0.0;
                if (sc.mode == CommandMode::path) {
                    gamma_c = sigmoid_profile(t, sc.gamma_cmd_rad, sc.rate1,
                                              sc.t1);
                    chi_c = sc.chi_rate_rads * t;
                } else if (sc.mode == CommandMode::position) {
                    const double w = 2.0 * kPi / sc.traj_period_s;
                    const Vec3 pos_ref(sc.V_ref * t,
                                       sc.traj_amp_y_m * std::sin(w * t),
                                       -sc.altitude_m -
                                           sc.traj_amp_z_m * std::sin(w * t));
                    const Vec3 vel_ref(sc.V_ref,
                                       sc.traj_amp_y_m * w * std::cos(w * t),
                                       -sc.traj_amp_z_m * w * std::cos(w * t));
                    const PositionRefs pr =
                        position_loop(s.position, pos_ref, vel_ref, s.V,
                                      s.gamma, cfg.control.K_Y, cfg.control.K_Z);
                    chi_c = pr.chi_ref;
                    gamma_c = pr.gamma_ref;
                }
                const double gamma_ref_dot =
                    slow_primed ? (gamma_c - gamma_ref_prev) / dt_slow : 0.0;
                gamma_ref_prev = gamma_c;
                slow_primed = true;
                const auto out = path.step(s, chi_c, gamma_c, gamma_ref_dot,
                                           sc.V_ref, k1.dx(5), dt_slow);
                alpha_ref = out.alpha_ref;
                mu_ref = out.mu_ref;
                thrust_cmd = out.thrust;
                gamma_ref = gamma_c;
                chi_ref = chi_c;
            }
            if (sc.mode == CommandMode::attitude_alpha ||
                sc.mode == CommandMode::attitude_mu) {
                // PI speed hold when the path loop is bypassed
                const double ev = sc.V_ref - s.V;
                v_int += ev * dt_slow;
                thrust_cmd = std::clamp(tp.thrust + path.Kp_v * ev +
                                            path.Ki_v * v_int,
                                        0.0, cfg.max_thrust_N);
                gamma_ref = s.gamma;
                chi_ref = s.chi;
            }
        }

        // ---- attitude and wing-load loops (100 Hz)
        if (i % fast_div == 0) {
            const bool wing_loop = sc.flexible && sc.mla_enabled;
            WingInputs in_r, in_l;
            Vec3 rl_r = Vec3::Zero(), rl_l = Vec3::Zero();
            if (wing_loop) {
                in_r = wing_inputs(ac, 1, s, lag.a_b, lag.alpha_b, gust);
                in_l = wing_inputs(ac, -1, s, lag.a_b, lag.alpha_b, gust);
                rl_r = ac.wing.root_loads(ps.xe_right(), ctl.u_right,
                                          in_r.alpha_r, in_r.f_s);
                rl_l = ac.wing.root_loads(ps.xe_left(), ctl.u_left,
                                          in_l.alpha_r, in_l.f_s);
            }
            if (sc.attitude_loop_enabled) {
                const double diff_meas =
                    wing_loop ? rl_l(1) - rl_r(1) : diff_cmd;
                const Vec3 u_meas(ctl.elevator, ctl.rudder, diff_meas);
                const Vec3 u3 = att.step(s, Vec3(mu_ref, alpha_ref, 0.0),
                                         k1.dx(4), k1.dx(5), u_meas, dt_fast);
                elev_cmd = u3(0);
                rud_cmd = u3(1);
                diff_cmd = u3(2);
            } else {
                // open-loop baseline: low-gain phugoid damper on speed
                elev_cmd = tp.elevator + 0.01 * (s.V - sc.V_ref);
                rud_cmd = 0.0;
                diff_cmd = 0.0;
            }
            if (wing_loop) {
                std::tie(Mr_ref, Ml_ref) = bending_reference_allocation(
                    diff_cmd, Mphi_trim, sc.bending_cap_Nm);
                Fw_ref = shear.step(alpha_ref, tp.alpha, dt_fast);
                u_r_cmd = wlc_r.step(ps.xe_right(), in_r.alpha_r, in_r.f_s,
                                     {rl_r(0), rl_r(1)}, {Fw_ref, Mr_ref},
                                     dt_fast);
                u_l_cmd = wlc_l.step(ps.xe_left(), in_l.alpha_r, in_l.f_s,
                                     {rl_l(0), rl_l(1)}, {Fw_ref, Ml_ref},
                                     dt_fast);
            }
            if (!ps.x.allFinite()) {
                res.diverged = true;
                break;
            }
        }

        // ---- actuators (once per plant step)
        ctl.elevator = act_e.update(elev_cmd, dt);
        ctl.rudder = act_r.update(rud_cmd, dt);
        ctl.thrust = std::clamp(act_T.update(thrust_cmd, dt), 0.0,
                                cfg.max_thrust_N);
        for (int k = 0; k < nf; ++k) {
            ctl.u_right(k) = act_fr[k].update(u_r_cmd(k), dt);
            ctl.u_left(k) = act_fl[k].update(u_l_cmd(k), dt);
        }

        // derivative at the step start (also the measurement source)
        k1 = plant_deriv(ac, ps, ctl, lag, gust);

        // ---- logging
        if (i % log_div == 0) {
            const Vec3 V_b = s.velocity_body();
            const Vec3 g_b =
                s.dcm_body_from_inertial_frame() * Vec3(0.0, 0.0, g);
            const Vec3 f_sp = k1.Vb_dot + s.omega.cross(V_b) - g_b;
            const double nz = -f_sp.z() / g;
            double flap_max = 0.0, tip = 0.0;
            if (nxe > 0) {
                for (int kk = 0; kk < ac.wing.n_s; ++kk) {
                    flap_max = std::max(
                        flap_max,
                        std::max(std::abs(ps.xe_right()(ns4 + 4 * kk + 3)),
                                 std::abs(ps.xe_left()(ns4 + 4 * kk + 3))));
                }
                tip = -ps.xe_right()(ns4 + 4 * (ac.wing.n_s - 1));
            }
            const double wg = gust ? gust(s.position) : 0.0;
            VecX row(res.log.columns.size());
            row << t, s.position.x(), s.position.y(), s.position.z(), s.V,
                s.chi, s.gamma, s.mu, s.alpha, s.beta, s.omega.x(),
                s.omega.y(), s.omega.z(), nz, k1.root_loads_r(0),
                k1.root_loads_r(1), k1.root_loads_r(2), k1.root_loads_l(0),
                k1.root_loads_l(1), k1.root_loads_l(2), alpha_ref, mu_ref,
                gamma_ref, chi_ref, Mr_ref, Ml_ref, Fw_ref, ctl.elevator,
                ctl.rudder, ctl.thrust, flap_max, tip, wg, nz_trim,
                Mphi_trim, tp.alpha;
            res.log.rows.push_back(row);
            if (!row.allFinite()) {
                res.diverged = true;
                break;
            }
        }
        if (i == n_steps) break;

        // ---- RK4 step with frozen inputs
        auto shifted = [&](double h, const VecX& dxv) {
            PlantState p2 = ps;
            p2.x += h * dxv;
            return p2;
        };
        const PlantDeriv k2 =
            plant_deriv(ac, shifted(0.5 * dt, k1.dx), ctl, lag, gust);
        const PlantDeriv k3 =
            plant_deriv(ac, shifted(0.5 * dt, k2.dx), ctl, lag, gust);
        const PlantDeriv k4 =
            plant_deriv(ac, shifted(dt, k3.dx), ctl, lag, gust);
        ps.x += dt / 6.0 *
                (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);

        // one-step-lagged acceleration feedback for the next step
        lag.a_b = k1.Vb_dot + s.omega.cross(s.velocity_body());
        lag.alpha_b = k1.omega_dot;
    }
    return res;
}

} // namespace aeroflex
