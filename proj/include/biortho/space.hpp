#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "biortho/errors.hpp"

namespace biortho {

using Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Uniform sampling of [t_min, t_max] carrying trapezoid quadrature weights.
///
/// The grid is the discrete stand-in for L2: every inner product in the
/// library is the weighted sum  sum_k w_k a_k b_k  with w_k = h in the
/// interior and h/2 at both endpoints.
template <typename Scalar>
class Grid {
 public:
  Grid(Scalar t_min, Scalar t_max, Index n_points)
      : t_min_(t_min), t_max_(t_max), n_points_(n_points) {
    if (!std::isfinite(t_min) || !std::isfinite(t_max) || !(t_min < t_max)) {
      throw InvalidArgument("grid requires finite t_min < t_max");
    }
    if (n_points < 2) {
      throw InvalidArgument("grid requires at least 2 points");
    }
  }

  Scalar t_min() const { return t_min_; }
  Scalar t_max() const { return t_max_; }
  Index size() const { return n_points_; }
  Scalar step() const { return (t_max_ - t_min_) / Scalar(n_points_ - 1); }

  Scalar abscissa(Index k) const { return t_min_ + Scalar(k) * step(); }

  VectorX<Scalar> abscissae() const {
    VectorX<Scalar> t(n_points_);
    const Scalar h = step();
    for (Index k = 0; k < n_points_; ++k) t(k) = t_min_ + Scalar(k) * h;
    return t;
  }

  Scalar weight(Index k) const {
    const Scalar h = step();
    return (k == 0 || k == n_points_ - 1) ? h / Scalar(2) : h;
  }

  VectorX<Scalar> weights() const {
    VectorX<Scalar> w = VectorX<Scalar>::Constant(n_points_, step());
    w(0) /= Scalar(2);
    w(n_points_ - 1) /= Scalar(2);
    return w;
  }

  bool covers(Scalar lo, Scalar hi) const { return t_min_ <= lo && t_max_ >= hi; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Scalar t_min_;
  Scalar t_max_;
  Index n_points_;
};

template <typename Scalar>
std::string describe(const Grid<Scalar>& g) {
  return "[" + std::to_string(static_cast<double>(g.t_min())) + ", " +
         std::to_string(static_cast<double>(g.t_max())) + "] x " + std::to_string(g.size());
}

/// Weighted inner product of two sampled vectors on `grid`.
///
/// Summation runs over ascending k with no compensation, and each term is
/// w_k * (a_k * b_k), so the result is bit-identical under swapping a and b.
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar weighted_dot(const Grid<Scalar>& grid, const Eigen::MatrixBase<DerivedA>& a,
                    const Eigen::MatrixBase<DerivedB>& b) {
  eigen_assert(a.size() == grid.size() && b.size() == grid.size());
  const Index n = grid.size();
  const Scalar h = grid.step();
  const Scalar half = h / Scalar(2);
  Scalar sum(0);
  for (Index k = 0; k < n; ++k) {
    const Scalar w = (k == 0 || k == n - 1) ? half : h;
    sum += w * (a(k) * b(k));
  }
  return sum;
}

/// Matrix of pairwise weighted inner products, (i, j) -> <x_i | y_j> over columns.
template <typename Scalar, typename DerivedX, typename DerivedY>
MatrixX<Scalar> weighted_gram(const Grid<Scalar>& grid, const Eigen::MatrixBase<DerivedX>& x,
                              const Eigen::MatrixBase<DerivedY>& y) {
  MatrixX<Scalar> g(x.cols(), y.cols());
  for (Index i = 0; i < x.cols(); ++i)
    for (Index j = 0; j < y.cols(); ++j) g(i, j) = weighted_dot(grid, x.col(i), y.col(j));
  return g;
}

/// Sampled real-valued function on a grid. Immutable after construction.
template <typename Scalar>
class Signal {
 public:
  Signal(Grid<Scalar> grid, VectorX<Scalar> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw InvalidArgument("signal has " + std::to_string(values_.size()) +
                            " samples, grid has " + std::to_string(grid_.size()));
    }
    if (!values_.allFinite()) {
      throw InvalidArgument("signal contains non-finite samples");
    }
  }

  static Signal zero(const Grid<Scalar>& grid) {
    return Signal(grid, VectorX<Scalar>::Zero(grid.size()));
  }

  template <typename Fn>
  static Signal sample(const Grid<Scalar>& grid, Fn&& fn) {
    VectorX<Scalar> v(grid.size());
    for (Index k = 0; k < grid.size(); ++k) v(k) = fn(grid.abscissa(k));
    return Signal(grid, std::move(v));
  }

  const Grid<Scalar>& grid() const { return grid_; }
  const VectorX<Scalar>& values() const { return values_; }
  Index size() const { return values_.size(); }
  Scalar operator[](Index k) const { return values_(k); }

 private:
  Grid<Scalar> grid_;
  VectorX<Scalar> values_;
};

template <typename Scalar>
void require_same_grid(const Grid<Scalar>& a, const Grid<Scalar>& b, const char* what) {
  if (!(a == b)) {
    throw GridMismatch(std::string(what) + ": " + describe(a) + " vs " + describe(b));
  }
}

template <typename Scalar>
Scalar inner(const Signal<Scalar>& a, const Signal<Scalar>& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  return weighted_dot(a.grid(), a.values(), b.values());
}

template <typename Scalar>
Scalar norm_sq(const Signal<Scalar>& a) {
  return weighted_dot(a.grid(), a.values(), a.values());
}

template <typename Scalar>
Scalar norm(const Signal<Scalar>& a) {
  using std::sqrt;
  return sqrt(norm_sq(a));
}

/// alpha * x + y
template <typename Scalar>
Signal<Scalar> axpy(Scalar alpha, const Signal<Scalar>& x, const Signal<Scalar>& y) {
  require_same_grid(x.grid(), y.grid(), "axpy");
  return Signal<Scalar>(x.grid(), alpha * x.values() + y.values());
}

template <typename Scalar>
Signal<Scalar> operator-(const Signal<Scalar>& a, const Signal<Scalar>& b) {
  return axpy(Scalar(-1), b, a);
}

using Gridd = Grid<double>;
using Signald = Signal<double>;

}  // namespace biortho
