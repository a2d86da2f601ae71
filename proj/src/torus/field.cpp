#include "wz/torus/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wz {

Grid::Grid(int n) : n_(n) {
  if (n < 16 || n % 2 != 0) throw std::invalid_argument("Grid: n must be even and >= 16");
}

ScalarField::ScalarField(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("ScalarField: size mismatch");
}

double ScalarField::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool ScalarField::is_zero_mean(double tol) const { return std::abs(mean()) <= tol; }

void ScalarField::remove_mean() {
  const double m = mean();
  for (double& v : values_) v -= m;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void ScalarField::axpy(double s, const ScalarField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += s * o.values_[k];
}

VectorField::VectorField(ScalarField a, ScalarField b) : u1(std::move(a)), u2(std::move(b)) {
  if (!(u1.grid() == u2.grid())) throw std::invalid_argument("VectorField: grid mismatch");
}

double VectorField::max_norm() const {
  double m = 0.0;
  for (std::size_t k = 0; k < u1.size(); ++k) m = std::max(m, std::hypot(u1[k], u2[k]));
  return m;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  u1 += o.u1;
  u2 += o.u2;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  u1 -= o.u1;
  u2 -= o.u2;
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  u1 *= s;
  u2 *= s;
  return *this;
}

SpectralField::SpectralField(Grid grid) : grid_(grid), coeffs_(grid.spectral_size()) {}

std::size_t SpectralField::slot(int k1, int k2) const {
  const int n = grid_.n();
  if (k2 < 0 || k2 > n / 2 || k1 < -n / 2 || k1 > n / 2)
    throw std::out_of_range("SpectralField: wavevector outside stored range");
  const int i1 = ((k1 % n) + n) % n;
  return static_cast<std::size_t>(i1) * (n / 2 + 1) + static_cast<std::size_t>(k2);
}

SpectralField::Complex SpectralField::at(int k1, int k2) const {
  if (k2 >= 0) return coeffs_[slot(k1, k2)];
  return std::conj(coeffs_[slot(-k1, -k2)]);
}

void SpectralField::set(int k1, int k2, Complex value) {
  if (k2 < 0) {
    k1 = -k1;
    k2 = -k2;
    value = std::conj(value);
  }
  const int n = grid_.n();
  const bool self_conjugate_column = k2 == 0 || k2 == n / 2;
  if (!self_conjugate_column) {
    coeffs_[slot(k1, k2)] = value;
  } else if (k1 == 0 || std::abs(k1) == n / 2) {
    coeffs_[slot(k1, k2)] = value.real();
  } else {
    coeffs_[slot(k1, k2)] = value;
    coeffs_[slot(-k1, k2)] = std::conj(value);
  }
}

void SpectralField::add_real_mode(int k1, int k2, Complex value) {
  if (k2 < 0) {
    k1 = -k1;
    k2 = -k2;
    value = std::conj(value);
  }
  const int n = grid_.n();
  if (k2 == 0 || k2 == n / 2) {
    if (k1 == 0 || std::abs(k1) == n / 2) {
      coeffs_[slot(k1, k2)] += 2.0 * value.real();
    } else {
      coeffs_[slot(k1, k2)] += value;
      coeffs_[slot(-k1, k2)] += std::conj(value);
    }
  } else {
    coeffs_[slot(k1, k2)] += value;
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (!(grid_ == o.grid_)) throw std::invalid_argument("SpectralField: grid mismatch");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

}  // namespace wz
