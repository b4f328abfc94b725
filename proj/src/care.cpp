#include "aeroflex/care.hpp"

#include <complex>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace aeroflex {

namespace {
using CMatX = Eigen::MatrixXcd;
using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using CMatL =
    Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

// A' X + X A = -C in extended precision; A must be Hurwitz.
MatL solve_lyapunov_ld(const MatL& A, const MatL& C) {
    const int n = int(A.rows());
    Eigen::ComplexSchur<MatL> schur(A);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("Schur decomposition failed");
    const CMatL T = schur.matrixT();
    const CMatL U = schur.matrixU();
    CMatL Ct = U.adjoint() * C.cast<std::complex<long double>>() * U;
    CMatL Y = CMatL::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        CMatL lhs = T.adjoint() + T(j, j) * CMatL::Identity(n, n);
        Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, 1> rhs =
            -Ct.col(j);
        if (j > 0) rhs -= Y.leftCols(j) * T.topRows(j).col(j);
        Y.col(j) = lhs.triangularView<Eigen::Lower>().solve(rhs);
    }
    MatL X = (U * Y * U.adjoint()).real();
    return 0.5 * (X + X.transpose());
}

} // namespace

MatX solve_lyapunov(const MatX& A, const MatX& C) {
    const int n = int(A.rows());
    Eigen::ComplexSchur<MatX> schur(A);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("Schur decomposition failed");
    const CMatX T = schur.matrixT();
    const CMatX U = schur.matrixU();
    // T* Y + Y T = -U* C U, solved column by column (T upper triangular)
    CMatX Ct = U.adjoint() * C.cast<std::complex<double>>() * U;
    CMatX Y = CMatX::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        CMatX lhs = T.adjoint() +
                    T(j, j) * CMatX::Identity(n, n);
        Eigen::VectorXcd rhs = -Ct.col(j);
        if (j > 0) rhs -= Y.leftCols(j) * T.topRows(j).col(j);
        Y.col(j) = lhs.triangularView<Eigen::Lower>().solve(rhs);
    }
    MatX X = (U * Y * U.adjoint()).real();
    return 0.5 * (X + X.transpose());
}

double care_residual(const MatX& A, const MatX& B, const MatX& Q,
                     const MatX& R, const MatX& W) {
    const MatX G = B * R.ldlt().solve(B.transpose());
    const MatX res = A.transpose() * W + W * A - W * G * W + Q;
    return res.norm() / Q.norm();
}

MatX solve_care(const MatX& A, const MatX& B, const MatX& Q, const MatX& R,
                double residual_tol) {
    const int n = int(A.rows());
    const MatX G = B * R.ldlt().solve(B.transpose());

    MatX H(2 * n, 2 * n);
    H << A, -G, -Q, -A.transpose();
    Eigen::ComplexEigenSolver<CMatX> es(H.cast<std::complex<double>>());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("Hamiltonian eigendecomposition failed");

    // stack eigenvectors of the stable invariant subspace
    CMatX U(2 * n, n);
    int found = 0;
    for (int i = 0; i < 2 * n && found < n; ++i)
        if (es.eigenvalues()(i).real() < 0.0) U.col(found++) = es.eigenvectors().col(i);
    if (found != n)
        throw std::runtime_error("no stabilizing Riccati solution (stable subspace deficient)");

    const CMatX U1 = U.topRows(n), U2 = U.bottomRows(n);
    Eigen::FullPivLU<CMatX> lu(U1);
    if (!lu.isInvertible())
        throw std::runtime_error("Riccati stable subspace is singular");
    MatX W = (U2 * lu.inverse()).real();
    W = 0.5 * (W + W.transpose());

    // Newton-Kleinman refinement, in extended precision: for badly scaled
    // systems (||A|| >> ||Q||) the double-precision residual floor
    // eps*||A||*||W|| can sit above the tolerance.
    {
        const MatL Al = A.cast<long double>(), Bl = B.cast<long double>();
        const MatL Ql = Q.cast<long double>(), Rl = R.cast<long double>();
        MatL Wl = W.cast<long double>();
        for (int it = 0; it < 20; ++it) {
            const MatL Kl = Rl.ldlt().solve(Bl.transpose() * Wl); // u = -K x
            const MatL Acl = Al - Bl * Kl;
            const MatL rhs = Ql + Kl.transpose() * Rl * Kl;
            Wl = solve_lyapunov_ld(Acl, rhs);
            Wl = 0.5 * (Wl + Wl.transpose());
            const long double res =
                (Al.transpose() * Wl + Wl * Al -
                 Wl * Bl * Rl.ldlt().solve(Bl.transpose() * Wl) + Ql)
                    .norm() /
                Ql.norm();
            if (res < residual_tol * 1e-2) break;
        }
        W = Wl.cast<double>();
    }
    const double res = care_residual(A, B, Q, R, W);
    if (!(res < residual_tol))
        throw std::runtime_error("Riccati residual " + std::to_string(res) +
                                 " above tolerance");
    return W;
}

LqrResult lqr_design(const MatX& A, const MatX& B, const MatX& Q,
                     const MatX& R) {
    LqrResult out;
    out.W = solve_care(A, B, Q, R);
    out.K_X = -R.ldlt().solve(B.transpose() * out.W);
    const MatX G = B * R.ldlt().solve(B.transpose());
    const MatX Mtx = out.W * G - A.transpose();
    out.K_r = -R.ldlt().solve(B.transpose() *
                              Mtx.partialPivLu().solve(out.W));
    out.residual = care_residual(A, B, Q, R, out.W);
    return out;
}

} // namespace aeroflex
