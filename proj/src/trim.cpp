#include "aeroflex/trim.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace aeroflex {

PlantState TrimPoint::plant_state(int nxe) const {
    PlantState ps;
    ps.nxe = nxe;
    ps.x = VecX::Zero(12 + 2 * nxe);
    ps.x(3) = V;
    ps.x(7) = alpha;
    if (nxe > 0 && xe_right.size() == nxe) {
        ps.x.segment(12, nxe) = xe_right;
        ps.x.segment(12 + nxe, nxe) = xe_left;
    }
    return ps;
}

namespace {

// Fixed-point resolution of the acceleration feedback: the wing forcing
// depends on the rigid accelerations, which depend on the forces. Used for
// trim and linearization, where a self-consistent derivative is wanted
// instead of the simulator's one-step lag.
PlantDeriv consistent_deriv(const AircraftModel& ac, PlantState ps,
                            const ControlInputs& ctl, bool settle_elastic) {
    AccelLag lag;
    PlantDeriv d;
    const int nxe = ps.nxe;
    const int ns4 = 4 * ac.wing.n_s;
    Eigen::PartialPivLU<MatX> Alu;
    if (settle_elastic && nxe > 0) Alu.compute(ac.wing.A);
    // The acceleration fixed point contracts fast at first but is not a
    // strict contraction near the solution; keep the best iterate and stop
    // once the update error starts growing again.
    PlantDeriv best;
    double best_err = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 50; ++it) {
        if (settle_elastic && nxe > 0) {
            const RigidState s = ps.rigid();
            for (int side : {1, -1}) {
                const WingInputs in =
                    wing_inputs(ac, side, s, lag.a_b, lag.alpha_b, {});
                VecX rhs = ac.wing.Br * in.alpha_r + ac.wing.Bg * in.alpha_g;
                rhs.head(ns4) += ac.wing.Mae_llt.solve(in.f_s);
                const VecX u = side > 0 ? ctl.u_right : ctl.u_left;
                if (u.size()) rhs += ac.wing.Bu * u;
                const VecX xe = -Alu.solve(rhs);
                ps.x.segment(side > 0 ? 12 : 12 + nxe, nxe) = xe;
            }
        }
        d = plant_deriv(ac, ps, ctl, lag, {});
        const RigidState s = ps.rigid();
        const Vec3 a_new = d.Vb_dot + s.omega.cross(s.velocity_body());
        const double err = (a_new - lag.a_b).norm() +
                           (d.omega_dot - lag.alpha_b).norm();
        if (err < best_err) {
            best_err = err;
            best = d;
        } else if (best_err < 1e-9) {
            break;
        }
        lag.a_b = a_new;
        lag.alpha_b = d.omega_dot;
        if (err < 1e-13) break;
    }
    return best;
}

} // namespace

Vec3 trim_residual(const AircraftModel& ac, const TrimPoint& tp) {
    const int nxe = ac.rigid ? 0 : ac.wing.n_states();
    PlantState ps = tp.plant_state(nxe);
    if (nxe > 0 && tp.xe_right.size() == 0) {
        ps.x.segment(12, nxe).setZero();
        ps.x.segment(12 + nxe, nxe).setZero();
    }
    const PlantDeriv d = consistent_deriv(ac, ps, tp.controls(), nxe > 0);
    const double g = kGravity;
    return Vec3(d.dx(3) / g, tp.V * d.dx(5) / g,
                d.dx(10) * tp.V * tp.V / (g * g));
}

TrimPoint trim_aircraft(const AircraftModel& ac, double V) {
    const int nxe = ac.rigid ? 0 : ac.wing.n_states();
    const int ns4 = 4 * ac.wing.n_s;
    const double mg = ac.cfg.mass_kg * kGravity;

    // unknowns: alpha, elevator, thrust/(m g)
    Vec3 u(0.05, 0.0, 0.1);
    auto eval = [&](const Vec3& uv) {
        TrimPoint tp;
        tp.V = V;
        tp.alpha = uv(0);
        tp.elevator = uv(1);
        tp.thrust = uv(2) * mg;
        return trim_residual(ac, tp);
    };

    Vec3 r = eval(u);
    for (int it = 0; it < 50 && r.norm() > 1e-10; ++it) {
        Mat3 J;
        const double h = 1e-7;
        for (int j = 0; j < 3; ++j) {
            Vec3 up = u, um = u;
            up(j) += h;
            um(j) -= h;
            J.col(j) = (eval(up) - eval(um)) / (2.0 * h);
        }
        const Vec3 du = J.fullPivLu().solve(-r);
        double step = 1.0;
        for (int ls = 0; ls < 20; ++ls) {
            const Vec3 ut = u + step * du;
            const Vec3 rt = eval(ut);
            if (rt.norm() < r.norm() || rt.norm() < 1e-10) {
                u = ut;
                r = rt;
                break;
            }
            step *= 0.5;
        }
    }

    TrimPoint tp;
    tp.V = V;
    tp.alpha = u(0);
    tp.elevator = u(1);
    tp.thrust = u(2) * mg;
    tp.residual = r.norm();
    if (!(tp.residual < 1e-6))
        throw std::runtime_error("trim iteration did not converge");

    if (nxe > 0) {
        // record the elastic equilibrium and root loads at the solution
        const RigidState s = tp.state();
        const PlantState ps0 = tp.plant_state(nxe);
        const PlantDeriv d = consistent_deriv(ac, ps0, tp.controls(), true);
        AccelLag lag;
        lag.a_b = d.Vb_dot;
        lag.alpha_b = d.omega_dot;
        const WingInputs in = wing_inputs(ac, 1, s, lag.a_b, lag.alpha_b, {});
        VecX rhs = ac.wing.Br * in.alpha_r + ac.wing.Bg * in.alpha_g;
        rhs.head(ns4) += ac.wing.Mae_llt.solve(in.f_s);
        tp.xe_right = -ac.wing.A.partialPivLu().solve(rhs);
        tp.xe_left = tp.xe_right; // symmetric flight
        tp.root_loads = ac.wing.root_loads(tp.xe_right, VecX::Zero(ac.n_flaps()),
                                           in.alpha_r, in.f_s);
    } else {
        tp.root_loads.setZero();
    }
    return tp;
}

LinearModel linearize(const AircraftModel& ac, const TrimPoint& tp) {
    const int nxe = ac.rigid ? 0 : ac.wing.n_states();
    const int n = 9 + 2 * nxe;
    const PlantState ps0 = tp.plant_state(nxe);
    const ControlInputs ctl0 = tp.controls();
    const int nf = ac.n_flaps();

    auto f = [&](const PlantState& ps, const ControlInputs& ctl) {
        const PlantDeriv d = consistent_deriv(ac, ps, ctl, false);
        return VecX(d.dx.segment(3, n));
    };

    LinearModel lm;
    lm.A = MatX::Zero(n, n);
    lm.B = MatX::Zero(n, 3 + 2 * nf);
    const char* rigid_names[] = {"V", "chi", "gamma", "mu", "alpha",
                                 "beta", "p", "q", "r"};
    for (int i = 0; i < 9; ++i) lm.state_names.push_back(rigid_names[i]);
    for (int side : {0, 1})
        for (int i = 0; i < nxe; ++i)
            lm.state_names.push_back((side ? "xe_l_" : "xe_r_") +
                                     std::to_string(i));

    for (int j = 0; j < n; ++j) {
        const double scale = (j == 0) ? tp.V : 1.0;
        const double h = 1e-6 * scale;
        PlantState pp = ps0, pm = ps0;
        pp.x(3 + j) += h;
        pm.x(3 + j) -= h;
        lm.A.col(j) = (f(pp, ctl0) - f(pm, ctl0)) / (2.0 * h);
    }
    auto input_col = [&](int col, auto mutate) {
        const double h = 1e-6;
        ControlInputs cp = ctl0, cm = ctl0;
        mutate(cp, h);
        mutate(cm, -h);
        lm.B.col(col) = (f(ps0, cp) - f(ps0, cm)) / (2.0 * h);
    };
    input_col(0, [](ControlInputs& c, double h) { c.elevator += h; });
    input_col(1, [](ControlInputs& c, double h) { c.rudder += h; });
    {
        // thrust column per newton, with a step sized for the units
        const double hT = 1e-2;
        ControlInputs cp = ctl0, cm = ctl0;
        cp.thrust += hT;
        cm.thrust -= hT;
        lm.B.col(2) = (f(ps0, cp) - f(ps0, cm)) / (2.0 * hT);
    }
    for (int k = 0; k < nf; ++k) {
        input_col(3 + k, [&](ControlInputs& c, double h) {
            if (!c.u_right.size()) c.u_right = VecX::Zero(nf);
            c.u_right(k) += h;
        });
        input_col(3 + nf + k, [&](ControlInputs& c, double h) {
            if (!c.u_left.size()) c.u_left = VecX::Zero(nf);
            c.u_left(k) += h;
        });
    }
    return lm;
}

std::vector<ModeInfo> modal_analysis(const LinearModel& lm, int nxe) {
    const int n = int(lm.A.rows());
    Eigen::EigenSolver<MatX> es(lm.A);
    // per-state participation factors p_ki = V_ki * (V^-1)_ik; they are
    // invariant to state scaling, unlike raw eigenvector magnitudes
    const Eigen::MatrixXcd V = es.eigenvectors();
    const Eigen::MatrixXcd W = V.inverse();
    std::vector<ModeInfo> out;
    for (int i = 0; i < n; ++i) {
        const std::complex<double> lam = es.eigenvalues()(i);
        if (lam.imag() < 0.0) continue; // one entry per conjugate pair
        ModeInfo m;
        m.eig = lam;
        m.omega_n = std::abs(lam);
        m.zeta = m.omega_n > 1e-12 ? -lam.real() / m.omega_n : 1.0;
        if (lam.imag() == 0.0) m.zeta = 1.0;
        m.freq_hz = m.omega_n / (2.0 * kPi);

        m.participation = VecX(n);
        for (int k = 0; k < n; ++k)
            m.participation(k) = std::abs(V(k, i) * W(i, k));
        const double total = m.participation.sum();
        if (total > 0.0) m.participation /= total;
        m.rigid_share = m.participation.head(9).sum();
        (void)nxe;
        m.label = m.rigid_share > 0.8   ? "rigid"
                  : m.rigid_share < 0.1 ? "elastic"
                                        : "coupled";
        out.push_back(m);
    }
    std::sort(out.begin(), out.end(),
              [](const ModeInfo& a, const ModeInfo& b) {
                  return a.omega_n < b.omega_n;
              });
    return out;
}

void write_modes_csv(const std::vector<ModeInfo>& modes,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write modes: " + path);
    out << "eig_real,eig_imag,omega_n_rads,zeta,freq_hz,label,rigid_share\n";
    for (const auto& m : modes)
        out << m.eig.real() << "," << m.eig.imag() << "," << m.omega_n << ","
            << m.zeta << "," << m.freq_hz << "," << m.label << ","
            << m.rigid_share << "\n";
}

} // namespace aeroflex
