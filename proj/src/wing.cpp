#include "aeroflex/wing.hpp"

#include <stdexcept>

namespace aeroflex {

WingModel build_wing(const AircraftConfig& cfg, double V, double rho) {
    WingModel w;
    w.beam = build_beam(cfg);
    w.aero = build_strip_aero(cfg.strips, V, rho);
    w.maps = build_interp(w.beam, cfg.strips);
    w.n_s = w.beam.n_el;
    w.n_a = w.aero.n_strips;

    const int ns4 = 4 * w.n_s, na3 = 3 * w.n_a, na4 = 4 * w.n_a;
    const int nx = 2 * ns4 + na4;

    const MatX& Has = w.maps.H_as;
    const MatX& Hsa = w.maps.H_sa;

    w.Mae = w.beam.M11 - Hsa * w.aero.Ma * Has;
    w.Mae_llt.compute(w.Mae);
    {
        double rc = w.Mae_llt.rcond();
        if (!(rc > 1e-14))
            throw std::runtime_error("aeroelastic mass matrix is singular (rcond " +
                                     std::to_string(rc) + ")");
    }

    MatX A1v = Hsa * w.aero.Ca * Has - w.beam.C11;
    MatX A1x = Hsa * w.aero.Ka * Has - w.beam.K11;
    MatX A1z = Hsa * w.aero.Kz;

    w.A = MatX::Zero(nx, nx);
    w.A.block(0, 0, ns4, ns4) = w.Mae_llt.solve(A1v);
    w.A.block(0, ns4, ns4, ns4) = w.Mae_llt.solve(A1x);
    w.A.block(0, 2 * ns4, ns4, na4) = w.Mae_llt.solve(A1z);
    w.A.block(ns4, 0, ns4, ns4).setIdentity();
    w.A.block(2 * ns4, 0, na4, ns4) = w.aero.Bzd * Has;
    w.A.block(2 * ns4, ns4, na4, ns4) = w.aero.Bz * Has;
    w.A.block(2 * ns4, 2 * ns4, na4, na4) = w.aero.Az;

    // hinge-moment inputs at flap nodes
    for (int k = 1; k <= w.n_s; ++k)
        if (w.beam.flap_at_node[k].mass_kg > 0.0) w.flap_nodes.push_back(k);
    MatX Hu = MatX::Zero(ns4, int(w.flap_nodes.size()));
    for (size_t j = 0; j < w.flap_nodes.size(); ++j)
        Hu(4 * (w.flap_nodes[j] - 1) + 3, int(j)) = 1.0;

    w.Bu = MatX::Zero(nx, Hu.cols());
    w.Bu.topRows(ns4) = w.Mae_llt.solve(Hu);
    w.Br = MatX::Zero(nx, w.n_a);
    w.Br.topRows(ns4) = w.Mae_llt.solve(Hsa * w.aero.Kr);
    w.Br.bottomRows(na4) = w.aero.Bzr;
    w.Bg = MatX::Zero(nx, w.n_a);
    w.Bg.bottomRows(na4) = w.aero.Bzg;

    // root loads: F_root = M01 xs_dd + C01 xs_d + K01 xs with xs_dd taken
    // from the first derivative block
    w.Croot = w.beam.M01 * w.A.topRows(ns4);
    w.Croot.leftCols(ns4) += w.beam.C01;
    w.Croot.middleCols(ns4, ns4) += w.beam.K01;
    w.Droot_u = w.beam.M01 * w.Bu.topRows(ns4);
    w.Droot_r = w.beam.M01 * w.Br.topRows(ns4);
    w.Droot_fs = w.beam.M01 * w.Mae_llt.solve(MatX::Identity(ns4, ns4));

    // lumped node inertias (tributary running mass plus the flap body)
    w.node_mass = VecX::Zero(w.n_s);
    w.node_pitch_static = VecX::Zero(w.n_s);
    w.node_flap_static = VecX::Zero(w.n_s);
    w.node_twist_inertia = VecX::Zero(w.n_s);
    const auto& sec = cfg.beam_sections;
    auto interp = [&](double x, auto field) {
        for (size_t i = 1; i < sec.size(); ++i)
            if (x <= sec[i].station_m + 1e-12) {
                const double t = (x - sec[i - 1].station_m) /
                                 (sec[i].station_m - sec[i - 1].station_m);
                return field(sec[i - 1]) + t * (field(sec[i]) - field(sec[i - 1]));
            }
        return field(sec.back());
    };
    for (int k = 1; k <= w.n_s; ++k) {
        const auto [lo, hi] = w.beam.tributary(k);
        const int steps = 8;
        double m = 0.0, it = 0.0;
        for (int s = 0; s < steps; ++s) {
            const double x = lo + (s + 0.5) * (hi - lo) / steps;
            m += interp(x, [](const BeamSection& b) { return b.mass_per_m_kg; });
            it += interp(x, [](const BeamSection& b) { return b.pitch_inertia_per_m_kgm; });
        }
        m *= (hi - lo) / steps;
        it *= (hi - lo) / steps;
        const auto& f = w.beam.flap_at_node[k];
        w.node_mass(k - 1) = m + f.mass_kg;
        w.node_pitch_static(k - 1) = f.mass_kg * f.hinge_offset_m + f.static_moment_kgm;
        w.node_flap_static(k - 1) = f.static_moment_kgm;
        w.node_twist_inertia(k - 1) =
            it + f.mass_kg * f.hinge_offset_m * f.hinge_offset_m +
            2.0 * f.hinge_offset_m * f.static_moment_kgm + f.hinge_inertia_kgm2;
    }
    return w;
}

VecX WingModel::deriv(const VecX& xe, const VecX& u, const VecX& alpha_r,
                      const VecX& alpha_g, const VecX& f_s) const {
    VecX dx = A * xe + Bu * u + Br * alpha_r + Bg * alpha_g;
    dx.head(4 * n_s) += Mae_llt.solve(f_s);
    return dx;
}

Vec3 WingModel::root_loads(const VecX& xe, const VecX& u, const VecX& alpha_r,
                           const VecX& f_s) const {
    VecX F = Croot * xe + Droot_u * u + Droot_r * alpha_r + Droot_fs * f_s;
    // clamp reaction -> loads transmitted to the fuselage
    return Vec3(F(0), -F(1), -F(2));
}

VecX gravity_nodal_forces(const WingModel& wing, const Vec3& g_wing) {
    const double gz = g_wing.z();
    VecX f = VecX::Zero(4 * wing.n_s);
    for (int k = 1; k <= wing.n_s; ++k) {
        const int i0 = 4 * (k - 1);
        f(i0) += wing.node_mass(k - 1) * gz;
        f(i0 + 2) += wing.node_pitch_static(k - 1) * gz;
        f(i0 + 3) += wing.node_flap_static(k - 1) * gz;
        // tributary moment arm of the running mass
        const auto [lo, hi] = wing.beam.tributary(k);
        const double xk = wing.beam.stations(k);
        // linear-mass arm integral, midpoint approximation per half
        const double mtrib = wing.node_mass(k - 1) -
                             wing.beam.flap_at_node[k].mass_kg;
        const double xc = 0.5 * (lo + hi);
        f(i0 + 1) += (xk - xc) * mtrib * gz;
    }
    return f;
}

VecX inertial_nodal_forces(const WingModel& wing, const Vec3& a0_wing,
                           const Vec3& alpha_wing, const Vec3& omega_wing) {
    VecX f = VecX::Zero(4 * wing.n_s);
    const Vec3 w = omega_wing, al = alpha_wing;
    for (int k = 1; k <= wing.n_s; ++k) {
        const double x = wing.beam.stations(k);
        const Vec3 r(x, 0.0, 0.0);
        const Vec3 a = a0_wing + al.cross(r) + w.cross(w.cross(r));
        const int i0 = 4 * (k - 1);
        f(i0) -= wing.node_mass(k - 1) * a.z();
        f(i0 + 2) -= wing.node_pitch_static(k - 1) * a.z() +
                     wing.node_twist_inertia(k - 1) * al.x();
        f(i0 + 3) -= wing.node_flap_static(k - 1) * a.z() +
                     (wing.beam.flap_at_node[k].hinge_inertia_kgm2 +
                      wing.beam.flap_at_node[k].hinge_offset_m *
                          wing.beam.flap_at_node[k].static_moment_kgm) *
                         al.x();
        // bending moment relief from the spanwise acceleration gradient is
        // carried by the plunge forces themselves (lumped pattern)
    }
    return f;
}

void elastic_reaction(const WingModel& wing, const VecX& xe, const VecX& xs_dd,
                      const Vec3& omega_wing, Vec3& force_wing,
                      Vec3& moment_wing) {
    force_wing.setZero();
    moment_wing.setZero();
    const int ns4 = 4 * wing.n_s;
    for (int k = 1; k <= wing.n_s; ++k) {
        const int i0 = 4 * (k - 1);
        const double wdd = xs_dd(i0), thdd = xs_dd(i0 + 2), bdd = xs_dd(i0 + 3);
        const double wd = xe(i0);
        const double az = wing.node_mass(k - 1) * wdd +
                          wing.node_pitch_static(k - 1) * thdd +
                          wing.node_flap_static(k - 1) * bdd;
        Vec3 fk(0.0, 0.0, -az);
        fk -= 2.0 * wing.node_mass(k - 1) *
              omega_wing.cross(Vec3(0.0, 0.0, wd));
        const Vec3 r(wing.beam.stations(k), 0.0, 0.0);
        force_wing += fk;
        moment_wing += r.cross(fk);
        moment_wing.x() -= wing.node_twist_inertia(k - 1) * thdd;
    }
    (void)ns4;
}

} // namespace aeroflex
