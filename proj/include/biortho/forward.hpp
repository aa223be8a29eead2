#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "biortho/dictionary.hpp"

namespace biortho {

/// Reciprocal family of a dictionary: duals[n] satisfies <dual_n | atom_m> = delta_nm
/// and lies in the span of the active atoms.
///
/// Besides the duals, the state carries the Modified Gram-Schmidt vectors
/// psi_n used by forward growth. Those are dropped by a backward downdate
/// (they no longer span the reduced space) and rebuilt on the next add.
template <typename Scalar>
class DualState {
 public:
  DualState(Dictionary<Scalar> dict, MatrixX<Scalar> duals, MatrixX<Scalar> psi = {},
            VectorX<Scalar> psi_norm_sq = {},
            Scalar last_psi_norm_sq = std::numeric_limits<Scalar>::quiet_NaN())
      : dict_(std::move(dict)),
        duals_(std::move(duals)),
        psi_(std::move(psi)),
        psi_norm_sq_(std::move(psi_norm_sq)),
        last_psi_norm_sq_(last_psi_norm_sq) {
    if (duals_.rows() != dict_.grid().size() || duals_.cols() != dict_.size()) {
      throw InvalidArgument("dual matrix shape does not match dictionary");
    }
    if (psi_.cols() != 0 &&
        (psi_.cols() != dict_.size() || psi_.rows() != dict_.grid().size() ||
         psi_norm_sq_.size() != psi_.cols())) {
      throw InvalidArgument("orthogonalization vectors do not match dictionary");
    }
    dual_norm_sq_.resize(dict_.size());
    for (Index n = 0; n < dict_.size(); ++n) {
      dual_norm_sq_(n) = weighted_dot(dict_.grid(), duals_.col(n), duals_.col(n));
    }
  }

  const Dictionary<Scalar>& dictionary() const { return dict_; }
  const Grid<Scalar>& grid() const { return dict_.grid(); }
  Index size() const { return dict_.size(); }

  const MatrixX<Scalar>& duals() const { return duals_; }
  const VectorX<Scalar>& dual_norm_sq() const { return dual_norm_sq_; }
  Signal<Scalar> dual(Index n) const { return Signal<Scalar>(grid(), duals_.col(n)); }

  bool has_psi() const { return psi_.cols() == dict_.size(); }
  const MatrixX<Scalar>& psi() const { return psi_; }
  const VectorX<Scalar>& psi_norm_sq() const { return psi_norm_sq_; }

  // Diagnostic: ||psi_{k+1}||^2 of the most recent forward add (NaN otherwise).
  Scalar last_psi_norm_sq() const { return last_psi_norm_sq_; }

 private:
  Dictionary<Scalar> dict_;
  MatrixX<Scalar> duals_;
  VectorX<Scalar> dual_norm_sq_;
  MatrixX<Scalar> psi_;
  VectorX<Scalar> psi_norm_sq_;
  Scalar last_psi_norm_sq_;
};

/// Expansion of a signal f on the active atoms of a DualState.
template <typename Scalar>
struct Approximation {
  VectorX<Scalar> coeffs;
  Scalar approx_norm_sq;
  Signal<Scalar> signal;
};

template <typename Scalar>
struct ForwardOptions {
  Scalar dep_tol = Scalar(1e-8);
  bool pivoting = false;
};

namespace detail {

// Subtract from `v` its components along each psi column, one at a time in
// ascending order, re-reading the updated vector before each projection.
template <typename Scalar, typename Derived>
VectorX<Scalar> mgs_residual(const Grid<Scalar>& grid, const MatrixX<Scalar>& psi,
                             const VectorX<Scalar>& psi_norm_sq, const Eigen::MatrixBase<Derived>& v) {
  VectorX<Scalar> w = v;
  for (Index l = 0; l < psi.cols(); ++l) {
    const Scalar r = weighted_dot(grid, psi.col(l), w) / psi_norm_sq(l);
    w -= r * psi.col(l);
  }
  return w;
}

template <typename Scalar>
void require_independent(Scalar psi_norm_sq, Scalar atom_norm_sq, Scalar dep_tol, AtomId id) {
  using std::sqrt;
  const Scalar rel = sqrt(psi_norm_sq) / sqrt(atom_norm_sq);
  if (!(atom_norm_sq > Scalar(0)) || !(rel > dep_tol)) {
    throw LinearlyDependent("atom id " + to_string(id) +
                            " is linearly dependent on the active set (relative residual " +
                            std::to_string(static_cast<double>(rel)) + ")");
  }
}

template <typename Scalar>
std::pair<MatrixX<Scalar>, VectorX<Scalar>> gram_schmidt(const Dictionary<Scalar>& dict, Scalar dep_tol) {
  MatrixX<Scalar> psi(dict.grid().size(), 0);
  VectorX<Scalar> psi_norm_sq(0);
  for (Index n = 0; n < dict.size(); ++n) {
    VectorX<Scalar> w = mgs_residual(dict.grid(), psi, psi_norm_sq, dict.column(n));
    const Scalar nsq = weighted_dot(dict.grid(), w, w);
    require_independent(nsq, weighted_dot(dict.grid(), dict.column(n), dict.column(n)), dep_tol,
                        dict.id(n));
    psi.conservativeResize(Eigen::NoChange, n + 1);
    psi.col(n) = w;
    psi_norm_sq.conservativeResize(n + 1);
    psi_norm_sq(n) = nsq;
  }
  return {std::move(psi), std::move(psi_norm_sq)};
}

template <typename Scalar>
struct ForwardStep {
  DualState<Scalar> state;
  VectorX<Scalar> psi;
  Scalar psi_norm_sq;
  VectorX<Scalar> overlaps;  // <dual_n^k | new atom>, n = 1..k
};

template <typename Scalar>
ForwardStep<Scalar> extend(const DualState<Scalar>& state, const Atom<Scalar>& atom, Scalar dep_tol) {
  const Grid<Scalar>& grid = state.grid();
  require_same_grid(grid, atom.signal.grid(), "add_atom");
  Dictionary<Scalar> dict = state.dictionary().with_atom(atom);

  MatrixX<Scalar> psi;
  VectorX<Scalar> psi_norm_sq;
  if (state.has_psi()) {
    psi = state.psi();
    psi_norm_sq = state.psi_norm_sq();
  } else {
    std::tie(psi, psi_norm_sq) = gram_schmidt(state.dictionary(), dep_tol);
  }

  const VectorX<Scalar>& a = atom.signal.values();
  VectorX<Scalar> p = mgs_residual(grid, psi, psi_norm_sq, a);
  const Scalar pnsq = weighted_dot(grid, p, p);
  require_independent(pnsq, weighted_dot(grid, a, a), dep_tol, atom.id);

  const Index k = state.size();
  VectorX<Scalar> overlaps(k);
  MatrixX<Scalar> duals(grid.size(), k + 1);
  for (Index n = 0; n < k; ++n) {
    overlaps(n) = weighted_dot(grid, a, state.duals().col(n));
    duals.col(n) = state.duals().col(n) - (overlaps(n) / pnsq) * p;
  }
  duals.col(k) = p / pnsq;

  psi.conservativeResize(Eigen::NoChange, k + 1);
  psi.col(k) = p;
  psi_norm_sq.conservativeResize(k + 1);
  psi_norm_sq(k) = pnsq;

  return {DualState<Scalar>(std::move(dict), std::move(duals), std::move(psi), std::move(psi_norm_sq), pnsq),
          std::move(p), pnsq, std::move(overlaps)};
}

}  // namespace detail

/// Seed the recursion with a single atom: psi_1 = alpha_1, dual_1 = alpha_1 / ||alpha_1||^2.
template <typename Scalar>
DualState<Scalar> init_duals(const Atom<Scalar>& first) {
  const Grid<Scalar>& grid = first.signal.grid();
  const Scalar nsq = norm_sq(first.signal);
  if (!(nsq > Scalar(0))) {
    throw LinearlyDependent("atom id " + to_string(first.id) + " is the zero vector");
  }
  Dictionary<Scalar> dict(grid, {first});
  MatrixX<Scalar> duals = first.signal.values() / nsq;
  MatrixX<Scalar> psi = first.signal.values();
  VectorX<Scalar> psi_norm_sq = VectorX<Scalar>::Constant(1, nsq);
  return DualState<Scalar>(std::move(dict), std::move(duals), std::move(psi), std::move(psi_norm_sq), nsq);
}

template <typename Scalar>
DualState<Scalar> init_duals(const Dictionary<Scalar>& dict) {
  return init_duals(dict.atom(0));
}

/// Append one atom, updating every dual so the enlarged family stays
/// biorthogonal. Throws LinearlyDependent when the Gram-Schmidt residual of
/// the new atom is at most dep_tol times its norm.
template <typename Scalar>
DualState<Scalar> add_atom(const DualState<Scalar>& state, const Atom<Scalar>& atom,
                           Scalar dep_tol = Scalar(1e-8)) {
  return detail::extend(state, atom, dep_tol).state;
}

/// Build the duals of a whole dictionary by forward recursion.
///
/// With pivoting, atoms are processed in order of largest Gram-Schmidt
/// residual instead of dictionary order. The returned duals are always
/// aligned with the dictionary's own order.
template <typename Scalar>
DualState<Scalar> biorthogonalize(const Dictionary<Scalar>& dict, const ForwardOptions<Scalar>& opts = {}) {
  if (!opts.pivoting) {
    DualState<Scalar> state = init_duals(dict);
    for (Index n = 1; n < dict.size(); ++n) state = add_atom(state, dict.atom(n), opts.dep_tol);
    return state;
  }

  const Grid<Scalar>& grid = dict.grid();
  std::vector<Index> remaining(static_cast<std::size_t>(dict.size()));
  for (Index n = 0; n < dict.size(); ++n) remaining[static_cast<std::size_t>(n)] = n;

  MatrixX<Scalar> psi(grid.size(), 0);
  VectorX<Scalar> psi_norm_sq(0);
  std::optional<DualState<Scalar>> state;
  while (!remaining.empty()) {
    std::size_t best = 0;
    Scalar best_norm = Scalar(-1);
    for (std::size_t r = 0; r < remaining.size(); ++r) {
      VectorX<Scalar> w = detail::mgs_residual(grid, psi, psi_norm_sq, dict.column(remaining[r]));
      const Scalar nsq = weighted_dot(grid, w, w);
      if (nsq > best_norm) {
        best_norm = nsq;
        best = r;
      }
    }
    const Atom<Scalar> atom = dict.atom(remaining[best]);
    state = state ? add_atom(*state, atom, opts.dep_tol) : init_duals(atom);
    psi = state->psi();
    psi_norm_sq = state->psi_norm_sq();
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }

  // Permute duals back into dictionary order; psi stays in processing order.
  const Dictionary<Scalar>& processed = state->dictionary();
  MatrixX<Scalar> duals(grid.size(), dict.size());
  for (Index n = 0; n < dict.size(); ++n) {
    duals.col(n) = state->duals().col(processed.require_index(dict.id(n)));
  }
  return DualState<Scalar>(dict, std::move(duals), std::move(psi), std::move(psi_norm_sq),
                           state->last_psi_norm_sq());
}

/// Coefficients c_n = <dual_n | f> of the orthogonal projection of f.
template <typename Scalar>
Approximation<Scalar> fit(const DualState<Scalar>& state, const Signal<Scalar>& f) {
  require_same_grid(state.grid(), f.grid(), "fit");
  VectorX<Scalar> c(state.size());
  for (Index n = 0; n < state.size(); ++n) c(n) = weighted_dot(state.grid(), state.duals().col(n), f.values());
  const Scalar nsq = norm_sq(synthesize(state.dictionary(), c));
  return {std::move(c), nsq, f};
}

/// Forward step that also carries the coefficients along:
///   c_n^{k+1} = c_n^k - <dual_n^k | alpha_{k+1}> <psi|f> / ||psi||^2
///   c_{k+1}^{k+1} = <psi|f> / ||psi||^2
/// The approximant norm grows by <psi|f>^2 / ||psi||^2.
template <typename Scalar>
std::pair<DualState<Scalar>, Approximation<Scalar>> add_atom_with_coeffs(const DualState<Scalar>& state,
                                                                        const Approximation<Scalar>& approx,
                                                                        const Atom<Scalar>& atom,
                                                                        Scalar dep_tol = Scalar(1e-8)) {
  if (approx.coeffs.size() != state.size()) {
    throw InvalidArgument("approximation does not match dual state");
  }
  require_same_grid(state.grid(), approx.signal.grid(), "add_atom_with_coeffs");
  auto step = detail::extend(state, atom, dep_tol);
  const Scalar proj = weighted_dot(state.grid(), step.psi, approx.signal.values());
  const Scalar gain = proj / step.psi_norm_sq;

  const Index k = state.size();
  VectorX<Scalar> c(k + 1);
  c.head(k) = approx.coeffs - gain * step.overlaps;
  c(k) = gain;
  Approximation<Scalar> next{std::move(c), approx.approx_norm_sq + proj * gain, approx.signal};
  return {std::move(step.state), std::move(next)};
}

template <typename Scalar>
Signal<Scalar> approximant(const DualState<Scalar>& state, const Approximation<Scalar>& approx) {
  return synthesize(state.dictionary(), approx.coeffs);
}

/// max_{n,m} |<dual_n | atom_m> - delta_nm|
template <typename Scalar>
Scalar biorthogonality_error(const DualState<Scalar>& state) {
  MatrixX<Scalar> g = weighted_gram(state.grid(), state.duals(), state.dictionary().atoms());
  g.diagonal().array() -= Scalar(1);
  return g.cwiseAbs().maxCoeff();
}

/// Matrix of the projector sum_n |atom_n><dual_n| acting on sample vectors:
/// P = A * D^T * W with W the quadrature weights.
template <typename Scalar>
MatrixX<Scalar> projector_matrix(const DualState<Scalar>& state) {
  const VectorX<Scalar> w = state.grid().weights();
  return state.dictionary().atoms() * (state.duals().transpose() * w.asDiagonal());
}

using DualStated = DualState<double>;
using Approximationd = Approximation<double>;

}  // namespace biortho
