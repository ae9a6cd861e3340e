#include "teleop/control/care.hpp"

#include <Eigen/Eigenvalues>

namespace teleop {

namespace {

bool is_hurwitz(const Eigen::MatrixXd& A) {
  const Eigen::VectorXcd ev = A.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (!(ev[i].real() < 0.0)) return false;
  }
  return true;
}

}  // namespace

double care_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                     const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd S = B * R.ldlt().solve(B.transpose());
  return (A.transpose() * P + P * A - P * S * P + Q).norm();
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W) {
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  // vec(A'X + XA) = (I (x) A' + A' (x) I) vec(X)
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n * n, n * n);
  const Eigen::MatrixXd At = A.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      L.block(i * n, j * n, n, n) += I(i, j) * At;
      L.block(i * n, j * n, n, n) += At(i, j) * I;
    }
  }
  const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(W.data(), n * n);
  const Eigen::VectorXd x = L.fullPivLu().solve(rhs);
  Eigen::MatrixXd X = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n);
  return 0.5 * (X + X.transpose());
}

CareSolution solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                        const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != B.cols() || R.cols() != B.cols()) {
    throw SynthesisError("solve_care: dimension mismatch");
  }
  if (!A.allFinite() || !B.allFinite() || !Q.allFinite() || !R.allFinite()) {
    throw SynthesisError("solve_care: non-finite input");
  }
  Eigen::LDLT<Eigen::MatrixXd> r_ldlt(R);
  if (r_ldlt.info() != Eigen::Success || !r_ldlt.isPositive() ||
      R.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() <= 0.0) {
    throw SynthesisError("solve_care: R must be positive definite");
  }
  const Eigen::MatrixXd S = B * r_ldlt.solve(B.transpose());

  Eigen::MatrixXd H(2 * n, 2 * n);
  H << A, -S, -Q, -A.transpose();
  Eigen::EigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) throw SynthesisError("solve_care: eigensolver failed");

  Eigen::MatrixXcd U(2 * n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    if (es.eigenvalues()[i].real() < 0.0) {
      if (k == n) throw SynthesisError("solve_care: Hamiltonian has no dichotomy");
      U.col(k++) = es.eigenvectors().col(i);
    }
  }
  if (k != n) throw SynthesisError("solve_care: eigenvalues on the imaginary axis");

  const Eigen::MatrixXcd U1 = U.topRows(n);
  const Eigen::MatrixXcd U2 = U.bottomRows(n);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(U1);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) throw SynthesisError("solve_care: pair is not stabilizable");
  Eigen::MatrixXd P = (U2 * lu.inverse()).real();
  P = 0.5 * (P + P.transpose());

  // Newton-Kleinman polish from the stabilizing guess.
  Eigen::MatrixXd K = r_ldlt.solve(B.transpose() * P);
  if (!is_hurwitz(A - B * K)) throw SynthesisError("solve_care: no stabilizing solution");
  for (int it = 0; it < 20; ++it) {
    const double before = care_residual(A, B, Q, R, P);
    if (before < 1e-13 * std::max(1.0, P.norm())) break;
    const Eigen::MatrixXd Acl = A - B * K;
    const Eigen::MatrixXd next = solve_lyapunov(Acl, Q + K.transpose() * R * K);
    if (!next.allFinite() || care_residual(A, B, Q, R, next) >= before) break;
    P = next;
    K = r_ldlt.solve(B.transpose() * P);
  }

  CareSolution out;
  out.P = P;
  out.K = K;
  out.residual = care_residual(A, B, Q, R, P);
  if (!is_hurwitz(A - B * K)) throw SynthesisError("solve_care: closed loop is not stable");
  return out;
}

}  // namespace teleop
