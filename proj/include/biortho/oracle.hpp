#pragma once

#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "biortho/forward.hpp"

namespace biortho {

// Reference implementations built directly on the Gram matrix. They share no
// code path with the recursive forward/backward updates and exist to check them.

inline constexpr double kGramPivotFloor = 1e-12;

template <typename Scalar>
struct GramSystem {
  MatrixX<Scalar> gram;
  Scalar condition_estimate;
  Eigen::LLT<MatrixX<Scalar>> llt;
};

/// G_nm = <alpha_n | alpha_m>, factored by Cholesky. Throws SingularGram when
/// factorization fails or a pivot falls below 1e-12 * max diagonal.
template <typename Scalar>
GramSystem<Scalar> gram_system(const Dictionary<Scalar>& dict) {
  MatrixX<Scalar> g = weighted_gram(dict.grid(), dict.atoms(), dict.atoms());
  Eigen::LLT<MatrixX<Scalar>> llt(g);
  if (llt.info() != Eigen::Success) throw SingularGram("Gram matrix is not positive definite");
  const Scalar floor = Scalar(kGramPivotFloor) * g.diagonal().maxCoeff();
  const VectorX<Scalar> pivots = llt.matrixL().toDenseMatrix().diagonal().array().square();
  if (pivots.minCoeff() <= floor) throw SingularGram("Gram matrix pivot below floor");

  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(g, Eigen::EigenvaluesOnly);
  const Scalar cond = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
  return {std::move(g), cond, std::move(llt)};
}

/// Duals from G B = I: dual_n = sum_m B_mn alpha_m.
template <typename Scalar>
DualState<Scalar> oracle_duals(const Dictionary<Scalar>& dict) {
  const GramSystem<Scalar> sys = gram_system(dict);
  const MatrixX<Scalar> inv = sys.llt.solve(MatrixX<Scalar>::Identity(dict.size(), dict.size()));
  return DualState<Scalar>(dict, dict.atoms() * inv);
}

/// Least-squares projection of f through the normal equations G c = A^T W f.
template <typename Scalar>
Approximation<Scalar> oracle_project(const Dictionary<Scalar>& dict, const Signal<Scalar>& f) {
  require_same_grid(dict.grid(), f.grid(), "oracle_project");
  const GramSystem<Scalar> sys = gram_system(dict);
  VectorX<Scalar> rhs(dict.size());
  for (Index n = 0; n < dict.size(); ++n) rhs(n) = weighted_dot(dict.grid(), dict.column(n), f.values());
  VectorX<Scalar> c = sys.llt.solve(rhs);
  const Scalar nsq = norm_sq(synthesize(dict, c));
  return {std::move(c), nsq, f};
}

/// ||f_N - f_{N/j}||^2 for every active j, each reduced projection computed
/// from scratch.
template <typename Scalar>
VectorX<Scalar> oracle_removal_losses(const Dictionary<Scalar>& dict, const Signal<Scalar>& f) {
  if (dict.size() < 2) throw LastAtom("need at least two atoms to remove one");
  const Signal<Scalar> full = synthesize(dict, oracle_project(dict, f).coeffs);
  VectorX<Scalar> losses(dict.size());
  for (Index j = 0; j < dict.size(); ++j) {
    const Dictionary<Scalar> reduced = dict.without_index(j);
    const Signal<Scalar> part = synthesize(reduced, oracle_project(reduced, f).coeffs);
    losses(j) = norm_sq(full - part);
  }
  return losses;
}

/// Exhaustive search for the single removal that increases the residual the
/// least. Losses within 1e-10 * ||f_N||^2 of the minimum tie, and ties go to
/// the smallest atom id.
template <typename Scalar>
std::pair<AtomId, Scalar> oracle_best_removal(const Dictionary<Scalar>& dict, const Signal<Scalar>& f) {
  const VectorX<Scalar> losses = oracle_removal_losses(dict, f);
  const Scalar energy = norm_sq(synthesize(dict, oracle_project(dict, f).coeffs));
  const Scalar cutoff = losses.minCoeff() + Scalar(1e-10) * energy;
  Index best = -1;
  for (Index j = 0; j < losses.size(); ++j) {
    if (losses(j) <= cutoff && (best < 0 || dict.id(j) < dict.id(best))) best = j;
  }
  return {dict.id(best), losses(best)};
}

/// Ratio of extreme Gram eigenvalues; +inf when the Gram matrix is singular.
template <typename Scalar>
Scalar gram_condition(const Dictionary<Scalar>& dict) {
  const MatrixX<Scalar> g = weighted_gram(dict.grid(), dict.atoms(), dict.atoms());
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(g, Eigen::EigenvaluesOnly);
  const Scalar lo = eig.eigenvalues().minCoeff();
  if (!(lo > Scalar(0))) return std::numeric_limits<Scalar>::infinity();
  return eig.eigenvalues().maxCoeff() / lo;
}

}  // namespace biortho
