#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "biortho/biortho.hpp"

namespace biortho::testing {

inline Gridd example_grid() { return Gridd(-4.0, 4.0, 801); }

inline Index index_of(const Dictionaryd& d, AtomId id) { return d.require_index(id); }

inline double rel_frobenius(const MatrixX<double>& a, const MatrixX<double>& b) {
  return (a - b).norm() / b.norm();
}

inline std::vector<Atomd> atoms_from_columns(const Gridd& grid, const MatrixX<double>& cols,
                                             const std::string& prefix = "a") {
  std::vector<Atomd> atoms;
  for (Index n = 0; n < cols.cols(); ++n) {
    atoms.push_back({AtomId{n + 1}, Signald(grid, cols.col(n)), prefix + std::to_string(n + 1)});
  }
  return atoms;
}

/// N atoms, exactly orthonormal in the weighted inner product (Householder QR
/// of the sqrt-weighted samples).
inline Dictionaryd orthonormal_dictionary(std::mt19937_64& rng, Index n_atoms, Index dim) {
  const Gridd grid(0.0, 1.0, dim);
  std::normal_distribution<double> normal;
  MatrixX<double> raw(dim, n_atoms);
  for (Index i = 0; i < raw.size(); ++i) raw.data()[i] = normal(rng);
  const VectorX<double> sw = grid.weights().array().sqrt();
  const MatrixX<double> scaled = sw.asDiagonal() * raw;
  Eigen::HouseholderQR<MatrixX<double>> qr(scaled);
  const MatrixX<double> q = qr.householderQ() * MatrixX<double>::Identity(dim, n_atoms);
  const MatrixX<double> cols = sw.cwiseInverse().asDiagonal() * q;
  return Dictionaryd(grid, atoms_from_columns(grid, cols, "o"));
}

/// Unit-norm random atoms sharing a common component of random strength, so
/// the Gram matrix ranges from nearly diagonal to badly conditioned. Draws
/// are rejected until the condition number is at most `max_condition`.
inline Dictionaryd random_dictionary(std::mt19937_64& rng, Index n_atoms, Index dim,
                                     double max_condition = 1e6) {
  const Gridd grid(0.0, 1.0, dim);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> log_shared(-1.0, 2.5);
  for (;;) {
    VectorX<double> base(dim);
    for (Index k = 0; k < dim; ++k) base(k) = normal(rng);
    MatrixX<double> cols(dim, n_atoms);
    for (Index n = 0; n < n_atoms; ++n) {
      const double s = std::pow(10.0, log_shared(rng));
      for (Index k = 0; k < dim; ++k) cols(k, n) = normal(rng) + s * base(k);
    }
    std::vector<Atomd> atoms = atoms_from_columns(grid, cols, "r");
    for (auto& a : atoms) a.signal = normalized(a.signal, a.label);
    Dictionaryd dict(grid, atoms);
    if (gram_condition(dict) <= max_condition) return dict;
  }
}

inline Signald random_signal(std::mt19937_64& rng, const Gridd& grid) {
  std::normal_distribution<double> normal;
  VectorX<double> v(grid.size());
  for (Index k = 0; k < grid.size(); ++k) v(k) = normal(rng);
  return Signald(grid, v);
}

inline VectorX<double> example_coefficients() {
  VectorX<double> c(static_cast<Index>(kExampleCoefficients.size()));
  for (Index i = 0; i < c.size(); ++i) c(i) = kExampleCoefficients[static_cast<std::size_t>(i)];
  return c;
}

inline AtomId id_of_center(const Dictionaryd& d, double center) {
  const std::string label = mexican_hat_label(center);
  for (Index n = 0; n < d.size(); ++n) {
    if (d.label(n) == label) return d.id(n);
  }
  throw UnknownAtom("no atom with label " + label);
}

}  // namespace biortho::testing
