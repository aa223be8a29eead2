#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "biortho/forward.hpp"

namespace biortho {

/// Relative tolerance under which two impacts count as tied.
inline constexpr double kImpactTieTolerance = 1e-10;

/// Smallest admissible ||dual_j||^2. A valid biorthogonal family always has
/// ||dual_j|| >= 1 / ||atom_j||, so anything below this means corrupted state.
inline constexpr double kMinDualNormSq = 1e-14;

struct RemovalStep {
  AtomId removed_id;
  std::string label;
  double impact = 0;
  double approx_norm_sq_after = 0;
  std::vector<double> coeffs_after;
};

enum class StopReason { BudgetExceeded, TargetCount, Exhausted };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::BudgetExceeded: return "BudgetExceeded";
    case StopReason::TargetCount: return "TargetCount";
    case StopReason::Exhausted: return "Exhausted";
  }
  return "Unknown";
}

struct ReductionTrace {
  std::vector<RemovalStep> steps;
  std::optional<double> delta;  // only set for a residual budget
  double initial_norm_sq = 0;
  double projection_residual_sq = 0;  // ||f - f_N||^2 before any removal
  StopReason stopped_reason = StopReason::Exhausted;

  double cumulative_impact() const {
    double s = 0;
    for (const auto& st : steps) s += st.impact;
    return s;
  }

  // ||f - f^(k)||^2 measured against the raw signal.
  double residual_to_signal_sq() const { return projection_residual_sq + cumulative_impact(); }
};

/// Remove greedily while the accumulated loss ||f_N - f^(k)||^2 stays <= delta.
struct ResidualBudget {
  double delta = 0;
};

/// Remove greedily until `count` atoms remain.
struct TargetCount {
  Index count = 1;
};

/// Remove exactly these atoms, in this order.
struct ExplicitOrder {
  std::vector<AtomId> ids;
};

using StoppingRule = std::variant<ResidualBudget, TargetCount, ExplicitOrder>;

namespace detail {

template <typename Scalar>
Index removable_index(const DualState<Scalar>& state, AtomId j) {
  const Index i = state.dictionary().require_index(j);
  if (state.size() < 2) throw LastAtom("cannot remove atom id " + to_string(j) + ", it is the last one");
  if (!(state.dual_norm_sq()(i) > Scalar(kMinDualNormSq))) {
    throw IllConditioned("dual of atom id " + to_string(j) + " has squared norm " +
                         std::to_string(static_cast<double>(state.dual_norm_sq()(i))));
  }
  return i;
}

template <typename Scalar>
void require_consistent(const DualState<Scalar>& state, const Approximation<Scalar>& approx) {
  if (approx.coeffs.size() != state.size()) {
    throw InvalidArgument("approximation has " + std::to_string(approx.coeffs.size()) +
                          " coefficients for " + std::to_string(state.size()) + " atoms");
  }
}

// <dual_n | dual_j> / ||dual_j||^2 for every active n.
template <typename Scalar>
VectorX<Scalar> dual_overlaps(const DualState<Scalar>& state, Index j) {
  VectorX<Scalar> r(state.size());
  for (Index n = 0; n < state.size(); ++n) {
    r(n) = weighted_dot(state.grid(), state.duals().col(n), state.duals().col(j)) / state.dual_norm_sq()(j);
  }
  return r;
}

template <typename Scalar>
VectorX<Scalar> drop(const VectorX<Scalar>& v, Index i) {
  VectorX<Scalar> out(v.size() - 1);
  out << v.head(i), v.tail(v.size() - 1 - i);
  return out;
}

}  // namespace detail

/// Reciprocal family of the dictionary with atom j removed:
///   dual_n <- dual_n - dual_j <dual_j | dual_n> / ||dual_j||^2,  n != j.
template <typename Scalar>
DualState<Scalar> downdate_duals(const DualState<Scalar>& state, AtomId j) {
  const Index i = detail::removable_index(state, j);
  const VectorX<Scalar> r = detail::dual_overlaps(state, i);
  const Index n = state.size();

  MatrixX<Scalar> duals(state.grid().size(), n - 1);
  for (Index src = 0, dst = 0; src < n; ++src) {
    if (src == i) continue;
    duals.col(dst++) = state.duals().col(src) - r(src) * state.duals().col(i);
  }
  return DualState<Scalar>(state.dictionary().without_index(i), std::move(duals));
}

/// Unit vector spanning the part of V_N orthogonal to the span of the
/// surviving atoms: psi_j^f = alpha_j - P_{N/j} alpha_j, normalized.
///
/// The projection uses the downdated duals, so the result can be checked
/// against dual_j / ||dual_j|| independently.
template <typename Scalar>
Signal<Scalar> psi_flip(const DualState<Scalar>& state, AtomId j) {
  using std::sqrt;
  const Index i = detail::removable_index(state, j);
  const DualState<Scalar> reduced = downdate_duals(state, j);
  const auto aj = state.dictionary().column(i);
  VectorX<Scalar> p = aj;
  for (Index n = 0; n < reduced.size(); ++n) {
    p -= weighted_dot(reduced.grid(), reduced.duals().col(n), aj) * reduced.dictionary().column(n);
  }
  const Scalar nsq = weighted_dot(state.grid(), p, p);
  if (!(nsq > Scalar(0))) throw IllConditioned("atom id " + to_string(j) + " lies in the span of the others");
  return Signal<Scalar>(state.grid(), p / sqrt(nsq));
}

/// Coefficients of the projection onto the reduced span, from the known ones:
///   c_n <- c_n - <dual_n | dual_j> c_j / ||dual_j||^2.
/// The approximant norm drops by exactly impact(j).
template <typename Scalar>
Approximation<Scalar> downdate_coeffs(const DualState<Scalar>& state, const Approximation<Scalar>& approx,
                                      AtomId j) {
  detail::require_consistent(state, approx);
  const Index i = detail::removable_index(state, j);
  const VectorX<Scalar> r = detail::dual_overlaps(state, i);
  const Scalar cj = approx.coeffs(i);
  VectorX<Scalar> c = detail::drop(VectorX<Scalar>(approx.coeffs - cj * r), i);
  const Scalar loss = cj * cj / state.dual_norm_sq()(i);
  return {std::move(c), approx.approx_norm_sq - loss, approx.signal};
}

/// |c_j|^2 / ||dual_j||^2, the exact squared-norm loss of removing atom j
/// with adapted coefficients.
template <typename Scalar>
Scalar impact(const DualState<Scalar>& state, const Approximation<Scalar>& approx, AtomId j) {
  detail::require_consistent(state, approx);
  const Index i = state.dictionary().require_index(j);
  const Scalar cj = approx.coeffs(i);
  return cj * cj / state.dual_norm_sq()(i);
}

template <typename Scalar>
VectorX<Scalar> impacts(const DualState<Scalar>& state, const Approximation<Scalar>& approx) {
  detail::require_consistent(state, approx);
  return approx.coeffs.array().square() / state.dual_norm_sq().array();
}

/// Index of the smallest entry. Entries within kImpactTieTolerance * scale of
/// the minimum are ties, resolved toward the smallest atom id.
template <typename Scalar>
Index argmin_with_ties(const VectorX<Scalar>& values, std::span<const AtomId> ids, Scalar scale) {
  const Scalar lo = values.minCoeff();
  const Scalar cutoff = lo + Scalar(kImpactTieTolerance) * scale;
  Index best = -1;
  for (Index n = 0; n < values.size(); ++n) {
    if (values(n) > cutoff) continue;
    if (best < 0 || ids[static_cast<std::size_t>(n)] < ids[static_cast<std::size_t>(best)]) best = n;
  }
  return best;
}

/// Atom whose removal costs the least approximation energy. Impacts closer
/// than kImpactTieTolerance * ||f_N||^2 are treated as equal.
template <typename Scalar>
AtomId select_removal(const DualState<Scalar>& state, const Approximation<Scalar>& approx) {
  using std::abs;
  if (state.size() < 2) throw LastAtom("no removable atom in a single-atom state");
  const VectorX<Scalar> imp = impacts(state, approx);
  const Scalar scale = approx.approx_norm_sq > Scalar(0) ? approx.approx_norm_sq : abs(imp.minCoeff());
  return state.dictionary().id(argmin_with_ties(imp, state.dictionary().ids(), scale));
}

template <typename Scalar>
struct Reduction {
  DualState<Scalar> state;
  Approximation<Scalar> approx;
  ReductionTrace trace;
};

/// Downdate duals and coefficients together for one removal.
template <typename Scalar>
std::pair<DualState<Scalar>, Approximation<Scalar>> remove_atom(const DualState<Scalar>& state,
                                                               const Approximation<Scalar>& approx, AtomId j) {
  Approximation<Scalar> next = downdate_coeffs(state, approx, j);
  return {downdate_duals(state, j), std::move(next)};
}

/// Backward elimination loop. Each step removes one atom (chosen by minimal
/// impact or taken from an explicit order), downdates the duals and adapts the
/// remaining coefficients, and records the loss in the trace.
template <typename Scalar>
Reduction<Scalar> reduce(const DualState<Scalar>& state, const Approximation<Scalar>& approx,
                         const StoppingRule& stop) {
  detail::require_consistent(state, approx);
  Reduction<Scalar> out{state, approx, {}};
  out.trace.initial_norm_sq = static_cast<double>(approx.approx_norm_sq);
  out.trace.projection_residual_sq =
      static_cast<double>(norm_sq(approx.signal - approximant(state, approx)));

  auto apply = [&out](AtomId j) {
    const Index i = out.state.dictionary().require_index(j);
    RemovalStep step;
    step.removed_id = j;
    step.label = out.state.dictionary().label(i);
    step.impact = static_cast<double>(impact(out.state, out.approx, j));
    auto [s, a] = remove_atom(out.state, out.approx, j);
    out.state = std::move(s);
    out.approx = std::move(a);
    step.approx_norm_sq_after = static_cast<double>(out.approx.approx_norm_sq);
    step.coeffs_after.assign(out.approx.coeffs.data(), out.approx.coeffs.data() + out.approx.coeffs.size());
    out.trace.steps.push_back(std::move(step));
  };

  if (const auto* budget = std::get_if<ResidualBudget>(&stop)) {
    if (!(budget->delta >= 0)) throw InvalidArgument("residual budget must be >= 0");
    out.trace.delta = budget->delta;
    double spent = 0;
    for (;;) {
      if (out.state.size() < 2) {
        out.trace.stopped_reason = StopReason::Exhausted;
        break;
      }
      const AtomId j = select_removal(out.state, out.approx);
      const double cost = static_cast<double>(impact(out.state, out.approx, j));
      if (spent + cost > budget->delta) {
        out.trace.stopped_reason = StopReason::BudgetExceeded;
        break;
      }
      apply(j);
      spent += cost;
    }
  } else if (const auto* target = std::get_if<TargetCount>(&stop)) {
    if (target->count < 1) throw InvalidArgument("target count must be >= 1");
    while (out.state.size() > target->count) apply(select_removal(out.state, out.approx));
    out.trace.stopped_reason = StopReason::TargetCount;
  } else {
    const auto& order = std::get<ExplicitOrder>(stop);
    // Validate the whole order before touching the state.
    std::vector<AtomId> active(state.dictionary().ids().begin(), state.dictionary().ids().end());
    for (AtomId j : order.ids) {
      auto it = std::find(active.begin(), active.end(), j);
      if (it == active.end()) throw UnknownAtom("atom id " + to_string(j) + " is not active");
      if (active.size() < 2) throw LastAtom("removal order would empty the dictionary");
      active.erase(it);
    }
    for (AtomId j : order.ids) apply(j);
    out.trace.stopped_reason = StopReason::Exhausted;
  }
  return out;
}

/// Naive truncation against adapted removal for one explicit removal list.
/// Errors are squared distances to the raw signal.
template <typename Scalar>
struct TruncationComparison {
  Signal<Scalar> truncated;
  Signal<Scalar> adapted;
  Scalar truncated_error_sq;
  Scalar adapted_error_sq;
  ReductionTrace trace;
};

template <typename Scalar>
TruncationComparison<Scalar> compare_truncation(const DualState<Scalar>& state, const Approximation<Scalar>& approx,
                                                const std::vector<AtomId>& remove) {
  Reduction<Scalar> r = reduce(state, approx, StoppingRule{ExplicitOrder{remove}});
  VectorX<Scalar> kept = approx.coeffs;
  for (AtomId j : remove) kept(state.dictionary().require_index(j)) = Scalar(0);
  Signal<Scalar> truncated = synthesize(state.dictionary(), kept);
  Signal<Scalar> adapted = approximant(r.state, r.approx);
  const Scalar te = norm_sq(approx.signal - truncated);
  const Scalar ae = norm_sq(approx.signal - adapted);
  return {std::move(truncated), std::move(adapted), te, ae, std::move(r.trace)};
}

}  // namespace biortho
