#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <locale>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "biortho/space.hpp"

namespace biortho {

/// Stable identifier of an atom. Survives removals; positions do not.
struct AtomId {
  std::int64_t value = 0;
  auto operator<=>(const AtomId&) const = default;
};

inline std::string to_string(AtomId id) { return std::to_string(id.value); }

template <typename Scalar>
struct Atom {
  AtomId id;
  Signal<Scalar> signal;
  std::string label;
};

/// Ordered active set of atoms sharing one grid.
///
/// Atoms are stored as the columns of a dense n_points x N matrix; the
/// column order is the active index n = 0..N-1.
template <typename Scalar>
class Dictionary {
 public:
  Dictionary(Grid<Scalar> grid, const std::vector<Atom<Scalar>>& atoms) : grid_(grid) {
    if (atoms.empty()) throw InvalidArgument("dictionary needs at least one atom");
    atoms_.resize(grid.size(), static_cast<Index>(atoms.size()));
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      require_same_grid(grid_, atoms[i].signal.grid(), "dictionary atom");
      if (atoms[i].label.find(',') != std::string::npos) {
        throw InvalidArgument("atom label must not contain commas: " + atoms[i].label);
      }
      if (std::find(ids_.begin(), ids_.end(), atoms[i].id) != ids_.end()) {
        throw DuplicateAtom("atom id " + to_string(atoms[i].id) + " appears twice");
      }
      atoms_.col(static_cast<Index>(i)) = atoms[i].signal.values();
      ids_.push_back(atoms[i].id);
      labels_.push_back(atoms[i].label);
    }
  }

  const Grid<Scalar>& grid() const { return grid_; }
  Index size() const { return atoms_.cols(); }
  const MatrixX<Scalar>& atoms() const { return atoms_; }
  std::span<const AtomId> ids() const { return ids_; }
  const std::vector<std::string>& labels() const { return labels_; }

  AtomId id(Index i) const { return ids_[static_cast<std::size_t>(i)]; }
  const std::string& label(Index i) const { return labels_[static_cast<std::size_t>(i)]; }
  auto column(Index i) const { return atoms_.col(i); }

  Signal<Scalar> signal(Index i) const { return Signal<Scalar>(grid_, atoms_.col(i)); }
  Atom<Scalar> atom(Index i) const { return {id(i), signal(i), label(i)}; }

  std::optional<Index> index_of(AtomId id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) return std::nullopt;
    return static_cast<Index>(it - ids_.begin());
  }

  bool contains(AtomId id) const { return index_of(id).has_value(); }

  Index require_index(AtomId id) const {
    auto i = index_of(id);
    if (!i) throw UnknownAtom("atom id " + to_string(id) + " is not active");
    return *i;
  }

  AtomId next_id() const {
    return AtomId{std::max_element(ids_.begin(), ids_.end())->value + 1};
  }

  Dictionary with_atom(const Atom<Scalar>& atom) const {
    require_same_grid(grid_, atom.signal.grid(), "dictionary atom");
    if (contains(atom.id)) throw DuplicateAtom("atom id " + to_string(atom.id) + " already active");
    if (atom.label.find(',') != std::string::npos) {
      throw InvalidArgument("atom label must not contain commas: " + atom.label);
    }
    Dictionary out = *this;
    out.atoms_.conservativeResize(Eigen::NoChange, size() + 1);
    out.atoms_.col(size()) = atom.signal.values();
    out.ids_.push_back(atom.id);
    out.labels_.push_back(atom.label);
    return out;
  }

  Dictionary without_index(Index i) const {
    if (size() == 1) throw LastAtom("cannot remove the only remaining atom");
    Dictionary out = *this;
    const Index n = size();
    if (i < n - 1) {
      out.atoms_.middleCols(i, n - 1 - i) = atoms_.rightCols(n - 1 - i);
    }
    out.atoms_.conservativeResize(Eigen::NoChange, n - 1);
    out.ids_.erase(out.ids_.begin() + i);
    out.labels_.erase(out.labels_.begin() + i);
    return out;
  }

 private:
  Grid<Scalar> grid_;
  MatrixX<Scalar> atoms_;
  std::vector<AtomId> ids_;
  std::vector<std::string> labels_;
};

template <typename Scalar>
Dictionary<Scalar> remove_atom(const Dictionary<Scalar>& dict, AtomId id) {
  const Index i = dict.require_index(id);
  return dict.without_index(i);
}

/// Rescale `raw` to unit norm on its grid. Throws DegenerateAtom when the
/// pre-normalization norm is below 1e-12.
template <typename Scalar>
Signal<Scalar> normalized(const Signal<Scalar>& raw, const std::string& what) {
  using std::sqrt;
  const Scalar n = sqrt(norm_sq(raw));
  if (!(n >= Scalar(1e-12))) {
    throw DegenerateAtom(what + " has norm " + std::to_string(static_cast<double>(n)) +
                         " on the grid");
  }
  return Signal<Scalar>(raw.grid(), raw.values() / n);
}

/// Unnormalized Mexican hat e^{-u^2} (1 - u^2), u = t - center.
template <typename Scalar>
Signal<Scalar> mexican_hat(const Grid<Scalar>& grid, Scalar center) {
  using std::exp;
  return Signal<Scalar>::sample(grid, [center](Scalar t) {
    const Scalar u2 = (t - center) * (t - center);
    return exp(-u2) * (Scalar(1) - u2);
  });
}

template <typename Scalar>
std::string mexican_hat_label(Scalar center) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "mexhat(center=" << static_cast<double>(center) << ")";
  return os.str();
}

/// One unit-norm Mexican hat per center, ids 1..N in the order given.
template <typename Scalar>
Dictionary<Scalar> mexican_hat_dictionary(const Grid<Scalar>& grid, std::span<const Scalar> centers) {
  if (centers.empty()) throw InvalidArgument("at least one center is required");
  std::vector<Atom<Scalar>> atoms;
  atoms.reserve(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    std::string label = mexican_hat_label(centers[i]);
    atoms.push_back({AtomId{static_cast<std::int64_t>(i) + 1},
                     normalized(mexican_hat(grid, centers[i]), label), label});
  }
  return Dictionary<Scalar>(grid, atoms);
}

template <typename Scalar>
Dictionary<Scalar> mexican_hat_dictionary(const Grid<Scalar>& grid, const std::vector<Scalar>& centers) {
  return mexican_hat_dictionary(grid, std::span<const Scalar>(centers));
}

/// Centers of the 13-atom worked example, ordered so that they line up with
/// kExampleCoefficients: 0, +1, -1, +2, -2, ..., +6, -6.
inline constexpr std::array<double, 13> kExampleCenters = {0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6};

/// Published expansion coefficients of the example signal (4 decimals).
inline constexpr std::array<double, 13> kExampleCoefficients = {
    2.8273, 2.4954, 2.4954, 1.9988, 1.9988, 1.4989, 1.4989,
    0.8630, 0.8630, 0.2957, 0.2957, 0.0648, 0.0648};

template <typename Scalar>
Dictionary<Scalar> paper_example_dictionary(const Grid<Scalar>& grid) {
  if (!grid.covers(Scalar(-4), Scalar(4))) {
    throw InvalidArgument("example dictionary needs a grid covering [-4, 4], got " + describe(grid));
  }
  std::vector<Scalar> centers(kExampleCenters.begin(), kExampleCenters.end());
  return mexican_hat_dictionary(grid, centers);
}

/// sum_n coeffs(n) * atom_n
template <typename Scalar, typename Derived>
Signal<Scalar> synthesize(const Dictionary<Scalar>& dict, const Eigen::MatrixBase<Derived>& coeffs) {
  if (coeffs.size() != dict.size()) {
    throw InvalidArgument("coefficient count " + std::to_string(coeffs.size()) +
                          " does not match dictionary size " + std::to_string(dict.size()));
  }
  VectorX<Scalar> v = VectorX<Scalar>::Zero(dict.grid().size());
  for (Index n = 0; n < dict.size(); ++n) v += coeffs(n) * dict.column(n);
  return Signal<Scalar>(dict.grid(), std::move(v));
}

/// The example signal: the published coefficients applied to the example
/// dictionary.
template <typename Scalar>
Signal<Scalar> paper_example_signal(const Dictionary<Scalar>& dict) {
  VectorX<Scalar> c(static_cast<Index>(kExampleCoefficients.size()));
  for (Index i = 0; i < c.size(); ++i) c(i) = Scalar(kExampleCoefficients[static_cast<std::size_t>(i)]);
  return synthesize(dict, c);
}

using Atomd = Atom<double>;
using Dictionaryd = Dictionary<double>;

}  // namespace biortho
