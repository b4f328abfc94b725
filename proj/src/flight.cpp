#include "aeroflex/flight.hpp"

#include <stdexcept>

namespace aeroflex {

namespace {

const Mat3 kMirror = (Mat3() << 1, 0, 0, 0, -1, 0, 0, 0, 1).finished();

Mat3 wing_frame(double incidence) {
    // right wing: x out the span (+y body), y aft along the chord, z down,
    // pitched nose-up by the incidence about the span axis
    const double ci = std::cos(incidence), si = std::sin(incidence);
    Mat3 c;
    c << 0.0, 1.0, 0.0,
        -ci, 0.0, si,
        si, 0.0, ci;
    return c;
}

} // namespace

AircraftModel build_aircraft(const AircraftConfig& cfg, double V_ref,
                             double altitude_m, bool rigid) {
    validate_config(cfg);
    AircraftModel ac;
    ac.cfg = cfg;
    ac.V_ref = V_ref;
    ac.rho = air_density(altitude_m);
    ac.wing = build_wing(cfg, V_ref, ac.rho);
    ac.C_WB = wing_frame(cfg.wing_incidence_rad);
    ac.r_wb = cfg.wing_root_position_m;
    ac.rigid = rigid;
    ac.elastic_coupling = !rigid;
    return ac;
}

Vec3 position_kinematics(double V, double chi, double gamma) {
    return Vec3(V * std::cos(chi) * std::cos(gamma),
                V * std::sin(chi) * std::cos(gamma),
                -V * std::sin(gamma));
}

Mat3 attitude_rate_matrix(double alpha, double beta, double mu) {
    (void)mu;
    // columns: body-frame rotation axes of the mu, alpha, beta rates
    Mat3 e;
    e.col(0) = rot_y(alpha) * rot_z(-beta) * Vec3(1, 0, 0);
    e.col(1) = Vec3(0, 1, 0);
    e.col(2) = rot_y(alpha) * Vec3(0, 0, -1);
    return e;
}

Vec3 attitude_kinematics(const RigidState& s, double chi_dot,
                         double gamma_dot) {
    const Mat3 C_BK = dcm_body_from_kinematic(s.alpha, s.beta, s.mu);
    const Vec3 omega_K(-chi_dot * std::sin(s.gamma), gamma_dot,
                       chi_dot * std::cos(s.gamma));
    const Mat3 E = attitude_rate_matrix(s.alpha, s.beta, s.mu);
    return E.inverse() * (s.omega - C_BK * omega_K);
}

double drag_coefficient(double CL, double CD0, double k_drag) {
    return CD0 + k_drag * CL * CL;
}

Vec3 local_airspeed(const Vec3& V_b, const Vec3& omega, const Vec3& r,
                    const Vec3& gust_body) {
    return V_b + omega.cross(r) - gust_body;
}

Vec3 rigid_point_acceleration(const Vec3& a_b, const Vec3& alpha_b,
                              const Vec3& omega_b, const Vec3& r) {
    return a_b + alpha_b.cross(r) + omega_b.cross(omega_b.cross(r));
}

WingInputs wing_inputs(const AircraftModel& ac, int side, const RigidState& s,
                       const Vec3& a_b, const Vec3& alpha_b,
                       const GustField& gust) {
    const Mat3 M = side > 0 ? Mat3::Identity() : kMirror;
    const Mat3 C_BI = s.dcm_body_from_inertial_frame();
    const Mat3 C_IB = C_BI.transpose();

    // mirrored body-frame inputs (angular quantities flip as axial vectors)
    const Vec3 V_b = M * s.velocity_body();
    const Vec3 om = side > 0 ? s.omega : Vec3(-s.omega.x(), s.omega.y(), -s.omega.z());
    const Vec3 am = M * a_b;
    const Vec3 alm = side > 0 ? alpha_b : Vec3(-alpha_b.x(), alpha_b.y(), -alpha_b.z());
    const Vec3 g_b = C_BI * Vec3(0.0, 0.0, kGravity);
    const Vec3 g_m = M * g_b;

    const int n = ac.wing.n_a;
    WingInputs in;
    in.alpha_r.resize(n);
    in.alpha_g.resize(n);
    in.h_dd.resize(n);
    const Vec3 zw = ac.C_WB.row(2), yw = ac.C_WB.row(1);
    for (int i = 0; i < n; ++i) {
        const double x = ac.cfg.strips[i].station_m;
        const Vec3 r_body = ac.r_wb + ac.C_WB.transpose() * Vec3(x, 0, 0);
        const Vec3 v = V_b + om.cross(r_body);
        in.alpha_r(i) = strip_alpha_rigid(zw.dot(v), -yw.dot(v));
        const Vec3 a_strip =
            am + alm.cross(r_body) + om.cross(om.cross(r_body));
        in.h_dd(i) = zw.dot(a_strip);
        // gust sampled at the true strip position in the frozen field
        const Vec3 r_true = side > 0 ? r_body : Vec3(kMirror * r_body);
        const Vec3 p_inertial = s.position + C_IB * r_true;
        const double wg = gust ? gust(p_inertial) : 0.0;
        const Vec3 g_gust = M * (C_BI * Vec3(0.0, 0.0, wg));
        in.alpha_g(i) = -zw.dot(g_gust) / ac.V_ref;
    }

    const Vec3 g_w = ac.C_WB * g_m;
    in.f_s = gravity_nodal_forces(ac.wing, g_w);
    const Vec3 a0 = am + alm.cross(ac.r_wb) + om.cross(om.cross(ac.r_wb));
    in.f_s += inertial_nodal_forces(ac.wing, ac.C_WB * a0, ac.C_WB * alm,
                                    ac.C_WB * om);
    return in;
}

MassMoments mass_moments(const AircraftModel& ac, const VecX& xs_right,
                         const VecX& xs_left) {
    MassMoments mm;
    auto add_point = [&](double m, const Vec3& r) {
        mm.S += m * r;
        mm.J += m * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
    };
    for (const auto& p : ac.cfg.fuselage_masses) add_point(p.mass_kg, p.position_m);
    const Mat3 C_BW = ac.C_WB.transpose();
    for (int side : {1, -1}) {
        const VecX& xs = side > 0 ? xs_right : xs_left;
        for (int k = 1; k <= ac.wing.n_s; ++k) {
            const double w = xs.size() ? xs(4 * (k - 1)) : 0.0;
            Vec3 r = ac.r_wb + C_BW * Vec3(ac.wing.beam.stations(k), 0.0, w);
            if (side < 0) r = kMirror * r;
            add_point(ac.wing.node_mass(k - 1), r);
            const Vec3 xw = side > 0 ? Vec3(C_BW.col(0)) : Vec3(kMirror * C_BW.col(0));
            mm.J += ac.wing.node_twist_inertia(k - 1) * xw * xw.transpose();
        }
    }
    return mm;
}

ForceMomentSet total_forces_moments(const AircraftModel& ac,
                                    const RigidState& s,
                                    const ControlInputs& ctl,
                                    const VecX& xe_r, const VecX& xe_l,
                                    const VecX& xsdd_r, const VecX& xsdd_l,
                                    const WingInputs& in_r,
                                    const WingInputs& in_l,
                                    const GustField& gust,
                                    const MassMoments& mm) {
    ForceMomentSet out;
    const Vec3 V_b = s.velocity_body();
    const Mat3 C_BI = s.dcm_body_from_inertial_frame();
    const Mat3 C_IB = C_BI.transpose();
    const Mat3 C_BW = ac.C_WB.transpose();
    const double q_dyn = 0.5 * ac.rho * s.V * s.V;

    double lift_total = 0.0;
    const int ns4 = 4 * ac.wing.n_s;

    for (int side : {1, -1}) {
        const VecX& xe = side > 0 ? xe_r : xe_l;
        const VecX& xsdd = side > 0 ? xsdd_r : xsdd_l;
        const WingInputs& in = side > 0 ? in_r : in_l;
        const Mat3 M = side > 0 ? Mat3::Identity() : kMirror;

        VecX ya;
        if (ac.rigid) {
            ya = ac.wing.aero.Kr_steady * in.alpha_r;
        } else {
            const auto& a = ac.wing.aero;
            const MatX& Has = ac.wing.maps.H_as;
            // apparent-mass loads act on the absolute plunge acceleration:
            // elastic part through H_as plus the rigid strip acceleration
            VecX acc_a = Has * xsdd;
            for (int i = 0; i < ac.wing.n_a; ++i) acc_a(3 * i) += in.h_dd(i);
            ya = a.Ma * acc_a + a.Ca * (Has * xe.head(ns4)) +
                 a.Ka * (Has * xe.segment(ns4, ns4)) +
                 a.Kz * xe.tail(4 * ac.wing.n_a) + a.Kr * in.alpha_r;
        }
        Vec3 Fw = Vec3::Zero(), Mw = Vec3::Zero();
        for (int i = 0; i < ac.wing.n_a; ++i) {
            const double fz = ya(3 * i), mth = ya(3 * i + 1);
            const Vec3 r_w(ac.cfg.strips[i].station_m, 0.0, 0.0);
            Fw += Vec3(0.0, 0.0, fz);
            Mw += r_w.cross(Vec3(0.0, 0.0, fz)) + Vec3(mth, 0.0, 0.0);
            lift_total -= fz;
        }
        Vec3 F_body = C_BW * Fw;
        Vec3 M_body = C_BW * Mw + ac.r_wb.cross(F_body);
        out.F += M * F_body;
        out.M += side > 0 ? M_body : Vec3(-(kMirror * M_body));

        if (ac.elastic_coupling && xe.size()) {
            Vec3 fr, mr;
            const Vec3 om_m = side > 0 ? s.omega
                                       : Vec3(-s.omega.x(), s.omega.y(), -s.omega.z());
            elastic_reaction(ac.wing, xe, xsdd, ac.C_WB * om_m, fr, mr);
            Vec3 F_c = C_BW * fr;
            Vec3 M_c = C_BW * mr + ac.r_wb.cross(F_c);
            out.d_F += M * F_c;
            out.d_M += side > 0 ? M_c : Vec3(-(kMirror * M_c));
        }
    }

    // quasi-steady surfaces with gust penetration
    for (const auto& sf : ac.cfg.surfaces) {
        const Vec3 p_inertial = s.position + C_IB * sf.position_m;
        const double wg = gust ? gust(p_inertial) : 0.0;
        const Vec3 gust_body = C_BI * Vec3(0.0, 0.0, wg);
        const Vec3 v = local_airspeed(V_b, s.omega, sf.position_m, gust_body);
        double delta = 0.0;
        if (sf.control == "elevator") delta = ctl.elevator;
        else if (sf.control == "rudder") delta = ctl.rudder;
        const double angle = std::atan2(v.dot(sf.normal), v.x()) +
                             sf.incidence_rad + sf.control_gain * delta;
        const double q_loc = 0.5 * ac.rho * v.squaredNorm();
        const Vec3 F = -sf.normal * (q_loc * sf.area_m2 * sf.CLa * angle);
        out.F += F;
        out.M += sf.position_m.cross(F);
    }

    // drag along the freestream, applied at the reference point
    const double CL = lift_total / (q_dyn * ac.cfg.wing_area_m2);
    const double CD = drag_coefficient(CL, ac.cfg.CD0, ac.cfg.k_drag);
    const Vec3 x_aero = dcm_body_from_aero(s.alpha, s.beta).col(0);
    out.F -= x_aero * (q_dyn * ac.cfg.wing_area_m2 * CD);

    // thrust and gravity
    out.F += Vec3(ctl.thrust, 0.0, 0.0);
    const Vec3 g_b = C_BI * Vec3(0.0, 0.0, kGravity);
    out.F += ac.cfg.mass_kg * g_b;
    out.M += mm.S.cross(g_b); // deformation shifts the weight off the origin
    return out;
}

TranslationalRates translational_dynamics(const RigidState& s, double mass,
                                          const MassMoments& mm,
                                          const Vec3& F_tot, const Vec3& d_F,
                                          const Vec3& alpha_b) {
    const Mat3 St = skew(mm.S);
    const Vec3 rhs = (F_tot + St * alpha_b + skew(s.omega) * St * s.omega +
                      d_F) / mass;
    const Mat3 C_BK = dcm_body_from_kinematic(s.alpha, s.beta, s.mu);
    const Vec3 a_K = C_BK.transpose() * rhs;
    TranslationalRates tr;
    tr.V_dot = a_K.x();
    tr.chi_dot = a_K.y() / (s.V * std::cos(s.gamma));
    tr.gamma_dot = -a_K.z() / s.V;
    tr.Vb_dot = rhs - s.omega.cross(s.velocity_body());
    return tr;
}

Vec3 rotational_dynamics(const RigidState& s, const MassMoments& mm,
                         const Vec3& Vb_dot, const Vec3& M_tot,
                         const Vec3& d_M) {
    const Mat3 St = skew(mm.S);
    const Vec3 V_b = s.velocity_body();
    const Vec3 rhs = -St * Vb_dot - skew(V_b) * St.transpose() * s.omega -
                     skew(s.omega) * St * V_b -
                     skew(s.omega) * (mm.J * s.omega) + M_tot + d_M;
    return mm.J.ldlt().solve(rhs);
}

} // namespace aeroflex
