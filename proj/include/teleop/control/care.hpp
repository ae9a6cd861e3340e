#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace teleop {

struct SynthesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CareSolution {
  Eigen::MatrixXd P;  // stabilizing solution
  Eigen::MatrixXd K;  // R^-1 B^T P
  double residual = 0.0;  // Frobenius norm of the Riccati residual
};

// Continuous algebraic Riccati equation A'P + PA - P B R^-1 B' P + Q = 0.
// Stable invariant subspace of the Hamiltonian, then Newton-Kleinman polish.
// Throws SynthesisError when no stabilizing solution exists.
CareSolution solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                        const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

double care_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                     const Eigen::MatrixXd& P);

// Solves A'X + XA + W = 0 by Kronecker vectorization (small systems only).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W);

}  // namespace teleop
