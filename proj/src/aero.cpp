#include "aeroflex/aero.hpp"

#include <stdexcept>

namespace aeroflex {

IndicialRealization indicial_realization(const IndicialApprox& ap, double V,
                                         double b) {
    if (V <= 0.0 || b <= 0.0)
        throw std::runtime_error("indicial realization needs positive V and b");
    const double s = V / b; // reduced-time rate
    IndicialRealization r;
    r.A << 0.0, 1.0,
        -s * s * ap.b1 * ap.b2, -s * (ap.b1 + ap.b2);
    r.B << 0.0, 1.0;
    r.C << (ap.a1 + ap.a2) * ap.b1 * ap.b2 * s * s,
        (ap.a1 * ap.b1 + ap.a2 * ap.b2) * s;
    r.D = ap.feedthrough();
    return r;
}

StripAeroModel build_strip_aero(const std::vector<StripAeroSpec>& strips,
                                double V, double rho) {
    const int n = int(strips.size());
    StripAeroModel m;
    m.n_strips = n;
    m.V = V;
    m.rho = rho;
    m.Ma = MatX::Zero(3 * n, 3 * n);
    m.Ca = MatX::Zero(3 * n, 3 * n);
    m.Ka = MatX::Zero(3 * n, 3 * n);
    m.Kz = MatX::Zero(3 * n, 4 * n);
    m.Kr = MatX::Zero(3 * n, n);
    m.Kr_steady = MatX::Zero(3 * n, n);
    m.Az = MatX::Zero(4 * n, 4 * n);
    m.Bz = MatX::Zero(4 * n, 3 * n);
    m.Bzd = MatX::Zero(4 * n, 3 * n);
    m.Bzr = MatX::Zero(4 * n, n);
    m.Bzg = MatX::Zero(4 * n, n);

    for (int i = 0; i < n; ++i) {
        const auto& s = strips[i];
        const double b = s.semichord_m, a = s.ea_offset, dx = s.width_m;
        const IndicialRealization wag = indicial_realization(wagner_approx(), V, b);
        const IndicialRealization kus = indicial_realization(kussner_approx(), V, b);

        // circulatory load pattern per unit effective angle of attack:
        // lift rho V^2 b CLa (down force is its negative), moment about the
        // elastic axis through the quarter-chord arm, hinge moment via T12
        Vec3 gc(-1.0, b * (0.5 + a), -b * s.T12 / (2.0 * kPi));
        gc *= rho * V * V * b * s.CLa * dx;

        // quasi-steady effective angle from strip motion
        Eigen::RowVector3d P(0.0, 1.0, s.T10 / kPi);
        Eigen::RowVector3d Pd(1.0 / V, b * (0.5 - a) / V,
                              s.T11 * b / (2.0 * kPi * V));

        const int ro = 3 * i, zo = 4 * i;
        m.Ka.block<3, 3>(ro, ro) += gc * (wag.D * P);
        m.Ca.block<3, 3>(ro, ro) += gc * (wag.D * Pd);
        m.Kz.block<3, 2>(ro, zo) += gc * wag.C;
        m.Kz.block<3, 2>(ro, zo + 2) += gc * kus.C;
        m.Kr.col(i).segment<3>(ro) += gc * wag.D;
        m.Kr_steady.col(i).segment<3>(ro) += gc;

        // non-circulatory apparent-mass loads (plunge/pitch only)
        const double am = kPi * rho * b * b * dx;
        m.Ma(ro, ro) += -am;             // f_z from w_dd
        m.Ma(ro, ro + 1) += am * b * a;  // f_z from theta_dd
        m.Ma(ro + 1, ro) += am * b * a;  // m_theta from w_dd
        m.Ma(ro + 1, ro + 1) += -am * b * b * (0.125 + a * a);
        m.Ca(ro, ro + 1) += -am * V;     // f_z from theta_d
        m.Ca(ro + 1, ro + 1) += -am * V * b * (0.5 - a);

        // lag dynamics: two Wagner poles driven by the quasi-steady angle,
        // two Kussner poles driven by the gust angle
        m.Az.block<2, 2>(zo, zo) = wag.A;
        m.Az.block<2, 2>(zo + 2, zo + 2) = kus.A;
        m.Bz.block<2, 3>(zo, ro) = wag.B * P;
        m.Bzd.block<2, 3>(zo, ro) = wag.B * Pd;
        m.Bzr.col(i).segment<2>(zo) = wag.B;
        m.Bzg.col(i).segment<2>(zo + 2) = kus.B;
    }
    return m;
}

InterpMaps build_interp(const BeamModel& beam,
                        const std::vector<StripAeroSpec>& strips) {
    const int n = int(strips.size());
    const int nf = beam.n_free_dof();
    InterpMaps im;
    im.H_as = MatX::Zero(3 * n, nf);
    im.H_sa = MatX::Zero(nf, 3 * n);
    im.strip_node.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = strips[i].station_m;
        int best = 1;
        for (int k = 2; k <= beam.n_el; ++k)
            if (std::abs(x - beam.stations(k)) <
                std::abs(x - beam.stations(best)))
                best = k;
        im.strip_node[i] = best;
        const int d = 4 * (best - 1);
        im.H_as(3 * i, d) = 1.0;          // strip plunge from node plunge
        // first-order chordwise/spanwise composition: w(x) = w_k + phi_k (x_k - x),
        // the work-conjugate of the moment-arm row in H_sa (keeps M_ae symmetric)
        im.H_as(3 * i, d + 1) = beam.stations(best) - x;
        im.H_as(3 * i + 1, d + 2) = 1.0;  // strip pitch from node twist
        im.H_as(3 * i + 2, d + 3) = 1.0;  // strip flap from node flap
        im.H_sa(d, 3 * i) = 1.0;                            // f_w
        im.H_sa(d + 1, 3 * i) = beam.stations(best) - x;    // moment arm
        im.H_sa(d + 2, 3 * i + 1) = 1.0;                    // f_theta
        im.H_sa(d + 3, 3 * i + 2) = 1.0;                    // f_beta
    }
    return im;
}

double strip_alpha_rigid(double v_normal_down, double v_chordwise) {
    return std::atan2(v_normal_down, v_chordwise);
}

} // namespace aeroflex
