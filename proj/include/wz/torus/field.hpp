#pragma once

#include <complex>
#include <span>
#include <vector>

#include "wz/torus/grid.hpp"

namespace wz {

/// Real periodic function sampled at the nodes of a Grid, row-major in (i, j).
class ScalarField {
 public:
  explicit ScalarField(Grid grid);
  ScalarField(Grid grid, std::vector<double> values);

  /// Samples f at every node.
  template <class F>
  static ScalarField sample(Grid grid, F&& f) {
    ScalarField out(grid);
    const double h = grid.h();
    for (int i = 0; i < grid.n(); ++i)
      for (int j = 0; j < grid.n(); ++j) out(i, j) = f(i * h, j * h);
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double mean() const;
  double max_abs() const;
  double min() const;
  double max() const;
  /// True when |mean| <= tol.
  bool is_zero_mean(double tol = 1e-12) const;
  /// Subtracts the mean in place.
  void remove_mean();

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  /// this += s * o
  void axpy(double s, const ScalarField& o);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

struct VectorField {
  ScalarField u1;
  ScalarField u2;

  explicit VectorField(Grid grid) : u1(grid), u2(grid) {}
  VectorField(ScalarField a, ScalarField b);

  const Grid& grid() const { return u1.grid(); }
  Vec2 at(int i, int j) const { return {u1(i, j), u2(i, j)}; }
  /// Largest pointwise Euclidean magnitude.
  double max_norm() const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double s);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
};

/// Fourier coefficients of a real field, F(k) = n^-2 sum_x f(x) exp(-2 pi i k.x).
/// Only k2 >= 0 is stored; negative k2 is recovered by Hermitian symmetry.
class SpectralField {
 public:
  using Complex = std::complex<double>;

  explicit SpectralField(Grid grid);

  const Grid& grid() const { return grid_; }
  std::span<Complex> coefficients() { return coeffs_; }
  std::span<const Complex> coefficients() const { return coeffs_; }

  /// Coefficient of wavevector (k1, k2) with |k_i| <= n/2.
  Complex at(int k1, int k2) const;
  /// Sets the coefficient of (k1, k2) and, where it is also stored, of (-k1, -k2)
  /// to the conjugate so the represented field stays real.
  void set(int k1, int k2, Complex value);
  /// Adds value to (k1, k2) and its conjugate to (-k1, -k2); the result is
  /// the transform of value e_k + conj(value) e_{-k}.
  void add_real_mode(int k1, int k2, Complex value);

  /// Storage slot of (k1, k2) with k2 >= 0.
  std::size_t slot(int k1, int k2) const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator*=(double s);

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

}  // namespace wz
