#pragma once

#include "aeroflex/types.hpp"

namespace aeroflex {

// Solves A' W + W A - W B R^-1 B' W + Q = 0 for the stabilizing W >= 0.
// Hamiltonian eigenvector method with Newton refinement; throws if no
// stabilizing solution is found or the residual stays above the threshold.
MatX solve_care(const MatX& A, const MatX& B, const MatX& Q, const MatX& R,
                double residual_tol = 1e-8);

// relative Riccati residual ||A'W + WA - WBR^-1B'W + Q|| / ||Q||
double care_residual(const MatX& A, const MatX& B, const MatX& Q,
                     const MatX& R, const MatX& W);

// Solves the Sylvester-type Lyapunov equation A' X + X A = -C for X
// (A must be Hurwitz), via complex Schur reduction.
MatX solve_lyapunov(const MatX& A, const MatX& C);

struct LqrResult {
    MatX W;    // Riccati solution
    MatX K_X;  // state feedback, u = K_X x + K_r r
    MatX K_r;  // reference/known-input feedforward
    double residual;
};

// LQR with the reference feedforward K_r = -R^-1 B' (W B R^-1 B' - A')^-1 W.
LqrResult lqr_design(const MatX& A, const MatX& B, const MatX& Q,
                     const MatX& R);

} // namespace aeroflex
