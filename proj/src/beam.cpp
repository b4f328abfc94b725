#include "aeroflex/beam.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace aeroflex {

namespace {

// 4-point Gauss-Legendre rule on [-1, 1]
const double kGaussX[4] = {-0.8611363115940526, -0.3399810435848563,
                           0.3399810435848563, 0.8611363115940526};
const double kGaussW[4] = {0.3478548451374538, 0.6521451548625461,
                           0.6521451548625461, 0.3478548451374538};

// Hermite shape functions for (w0, w0', w1, w1') on an element of length l,
// xi in [0, 1].
void hermite(double xi, double l, double n[4]) {
    n[0] = 1.0 - 3.0 * xi * xi + 2.0 * xi * xi * xi;
    n[1] = l * (xi - 2.0 * xi * xi + xi * xi * xi);
    n[2] = 3.0 * xi * xi - 2.0 * xi * xi * xi;
    n[3] = l * (-xi * xi + xi * xi * xi);
}

void hermite_dd(double xi, double l, double n[4]) {
    n[0] = (-6.0 + 12.0 * xi) / (l * l);
    n[1] = (-4.0 + 6.0 * xi) / l;
    n[2] = (6.0 - 12.0 * xi) / (l * l);
    n[3] = (-2.0 + 6.0 * xi) / l;
}

} // namespace

std::pair<double, double> BeamModel::tributary(int node) const {
    // free nodes cover the whole span: node 1 absorbs the root region so
    // lumped totals conserve force/mass exactly
    const double lo = node <= 1 ? stations(0)
                                : 0.5 * (stations(node - 1) + stations(node));
    const double hi = node == n_el ? stations(n_el)
                                   : 0.5 * (stations(node) + stations(node + 1));
    return {lo, hi};
}

BeamModel build_beam(const AircraftConfig& cfg) {
    const auto& sec = cfg.beam_sections;
    const int n_el = int(sec.size()) - 1;
    if (n_el < 1) throw std::runtime_error("beam needs at least one element");

    BeamModel bm;
    bm.n_el = n_el;
    bm.stations.resize(n_el + 1);
    for (int i = 0; i <= n_el; ++i) bm.stations(i) = sec[i].station_m;

    const int nd = 4 * (n_el + 1);
    bm.M = MatX::Zero(nd, nd);
    bm.C = MatX::Zero(nd, nd);
    bm.K = MatX::Zero(nd, nd);

    // w and phi = -w' carry opposite signs in the Hermite parametrization
    auto wdof = [](int node) { return 4 * node; };
    const double sgn[2] = {1.0, -1.0}; // (w, w') -> (w, phi)

    for (int e = 0; e < n_el; ++e) {
        const double l = sec[e + 1].station_m - sec[e].station_m;
        Eigen::Matrix4d kb = Eigen::Matrix4d::Zero();
        Eigen::Matrix4d mb = Eigen::Matrix4d::Zero();
        Eigen::Matrix2d kt = Eigen::Matrix2d::Zero();
        Eigen::Matrix2d mt = Eigen::Matrix2d::Zero();
        for (int g = 0; g < 4; ++g) {
            const double xi = 0.5 * (kGaussX[g] + 1.0);
            const double w = 0.5 * kGaussW[g] * l;
            const double EI = sec[e].EI_Nm2 + xi * (sec[e + 1].EI_Nm2 - sec[e].EI_Nm2);
            const double GJ = sec[e].GJ_Nm2 + xi * (sec[e + 1].GJ_Nm2 - sec[e].GJ_Nm2);
            const double mu = sec[e].mass_per_m_kg +
                              xi * (sec[e + 1].mass_per_m_kg - sec[e].mass_per_m_kg);
            const double it = sec[e].pitch_inertia_per_m_kgm +
                              xi * (sec[e + 1].pitch_inertia_per_m_kgm -
                                    sec[e].pitch_inertia_per_m_kgm);
            double n[4], ndd[4];
            hermite(xi, l, n);
            hermite_dd(xi, l, ndd);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    kb(i, j) += w * EI * ndd[i] * ndd[j];
                    mb(i, j) += w * mu * n[i] * n[j];
                }
            const double nt[2] = {1.0 - xi, xi};
            const double ntd[2] = {-1.0 / l, 1.0 / l};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    kt(i, j) += w * GJ * ntd[i] * ntd[j];
                    mt(i, j) += w * it * nt[i] * nt[j];
                }
        }
        // scatter: bending DOFs (w, phi) at nodes e, e+1
        const int bd[4] = {wdof(e), wdof(e) + 1, wdof(e + 1), wdof(e + 1) + 1};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const double s = sgn[i % 2] * sgn[j % 2];
                bm.K(bd[i], bd[j]) += s * kb(i, j);
                bm.M(bd[i], bd[j]) += s * mb(i, j);
            }
        const int td[2] = {wdof(e) + 2, wdof(e + 1) + 2};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                bm.K(td[i], td[j]) += kt(i, j);
                bm.M(td[i], td[j]) += mt(i, j);
            }
    }

    // flaps: rigid bodies on their node, hinge spring and damper on beta
    bm.flap_at_node.assign(n_el + 1, FlapSpec{});
    for (const auto& f : cfg.flaps) {
        if (f.node_index < 1 || f.node_index > n_el)
            throw std::runtime_error("flap node index out of range");
        bm.flap_at_node[f.node_index] = f;
        const int iw = wdof(f.node_index);
        const double mf = f.mass_kg, Sf = f.static_moment_kgm;
        const double If = f.hinge_inertia_kgm2, dh = f.hinge_offset_m;
        // kinetic energy of the flap: z_cg = w + (dh + xi) theta + xi beta
        bm.M(iw, iw) += mf;
        bm.M(iw, iw + 2) += mf * dh + Sf;
        bm.M(iw + 2, iw) += mf * dh + Sf;
        bm.M(iw, iw + 3) += Sf;
        bm.M(iw + 3, iw) += Sf;
        bm.M(iw + 2, iw + 2) += mf * dh * dh + 2.0 * dh * Sf + If;
        bm.M(iw + 2, iw + 3) += dh * Sf + If;
        bm.M(iw + 3, iw + 2) += dh * Sf + If;
        bm.M(iw + 3, iw + 3) += If;
        bm.K(iw + 3, iw + 3) += f.hinge_stiffness_Nm;
        bm.C(iw + 3, iw + 3) += f.hinge_damping_Nms;
    }
    // nodes without a flap get a placeholder hinge DOF so the full system
    // stays positive definite; the root one is removed by the clamp anyway
    for (int k = 0; k <= n_el; ++k) {
        if (bm.flap_at_node[k].mass_kg == 0.0) {
            const int ib = wdof(k) + 3;
            bm.M(ib, ib) += 1e-6;
            bm.K(ib, ib) += 1e-3;
        }
    }

    const int nf = 4 * n_el;
    bm.M00 = bm.M.topLeftCorner(4, 4);
    bm.M01 = bm.M.topRightCorner(4, nf);
    bm.M11 = bm.M.bottomRightCorner(nf, nf);
    bm.C00 = bm.C.topLeftCorner(4, 4);
    bm.C01 = bm.C.topRightCorner(4, nf);
    bm.C11 = bm.C.bottomRightCorner(nf, nf);
    bm.K00 = bm.K.topLeftCorner(4, 4);
    bm.K01 = bm.K.topRightCorner(4, nf);
    bm.K11 = bm.K.bottomRightCorner(nf, nf);
    return bm;
}

VecX integrate_nodal_loads(const BeamModel& beam,
                           const std::function<double(double)>& f_z,
                           const std::function<double(double)>& m_x,
                           const std::function<double(double)>& m_y) {
    VecX out = VecX::Zero(beam.n_free_dof());
    for (int k = 1; k <= beam.n_el; ++k) {
        const auto [lo, hi] = beam.tributary(k);
        const double xi_k = beam.stations(k);
        double fw = 0.0, fphi = 0.0, fth = 0.0;
        for (int g = 0; g < 4; ++g) {
            const double x = 0.5 * (hi + lo) + 0.5 * (hi - lo) * kGaussX[g];
            const double w = 0.5 * (hi - lo) * kGaussW[g];
            const double fz = f_z(x);
            fw += w * fz;
            fphi += w * ((xi_k - x) * fz - m_x(x));
            fth += w * m_y(x);
        }
        const int i0 = 4 * (k - 1);
        out(i0) += fw;
        out(i0 + 1) += fphi;
        out(i0 + 2) += fth;
    }
    return out;
}

std::pair<VecX, MatX> beam_modes(const BeamModel& beam) {
    Eigen::GeneralizedSelfAdjointEigenSolver<MatX> es(beam.K11, beam.M11);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("beam eigenproblem failed");
    VecX w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return {w, es.eigenvectors()};
}

} // namespace aeroflex
