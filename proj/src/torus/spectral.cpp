#include "wz/torus/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wz {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

const Plans& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, Plans> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const std::size_t real_size = static_cast<std::size_t>(n) * n;
  const std::size_t complex_size = static_cast<std::size_t>(n) * (n / 2 + 1);
  double* r = fftw_alloc_real(real_size);
  fftw_complex* c = fftw_alloc_complex(complex_size);
  Plans p;
  p.forward = fftw_plan_dft_r2c_2d(n, n, r, c, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.backward = fftw_plan_dft_c2r_2d(n, n, c, r, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(r);
  fftw_free(c);
  if (!p.forward || !p.backward) throw std::runtime_error("FFTW planning failed");
  return cache.emplace(n, p).first->second;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

bool is_nyquist(const Grid& g, int k) { return std::abs(k) == g.n() / 2; }

// Applies mult(k1, k2) to every stored coefficient and returns the real field.
template <class Mult>
ScalarField apply_multiplier(const SpectralField& f, Mult&& mult) {
  const Grid& g = f.grid();
  SpectralField out(g);
  auto src = f.coefficients();
  auto dst = out.coefficients();
  const int n = g.n();
  const int half = n / 2 + 1;
  for (int i = 0; i < n; ++i) {
    const int k1 = g.wavenumber(i);
    for (int j = 0; j < half; ++j) {
      const std::size_t s = static_cast<std::size_t>(i) * half + j;
      dst[s] = mult(k1, j) * src[s];
    }
  }
  return from_spectral(out);
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

SpectralField to_spectral(const ScalarField& f) {
  const Grid& g = f.grid();
  const Plans& p = plans_for(g.n());
  SpectralField out(g);
  std::vector<double> in(f.values().begin(), f.values().end());
  fftw_execute_dft_r2c(p.forward, in.data(), as_fftw(out.coefficients().data()));
  out *= 1.0 / static_cast<double>(g.size());
  return out;
}

ScalarField from_spectral(const SpectralField& f) {
  const Grid& g = f.grid();
  const Plans& p = plans_for(g.n());
  // c2r overwrites its input.
  std::vector<std::complex<double>> work(f.coefficients().begin(), f.coefficients().end());
  ScalarField out(g);
  fftw_execute_dft_c2r(p.backward, as_fftw(work.data()), out.values().data());
  return out;
}

void dealias(SpectralField& f) {
  const Grid& g = f.grid();
  const int n = g.n();
  const int half = n / 2 + 1;
  const int cut = n / 3;
  auto c = f.coefficients();
  for (int i = 0; i < n; ++i) {
    const int k1 = g.wavenumber(i);
    for (int j = 0; j < half; ++j)
      if (std::abs(k1) > cut || j > cut) c[static_cast<std::size_t>(i) * half + j] = 0.0;
  }
}

VectorField biot_savart(const SpectralField& xi_hat) {
  const Grid& g = xi_hat.grid();
  using C = std::complex<double>;
  // u_hat = -i k^perp xi_hat / (2 pi |k|^2), k^perp = (-k2, k1).
  auto component = [&](int which) {
    return apply_multiplier(xi_hat, [&](int k1, int k2) -> C {
      if ((k1 == 0 && k2 == 0) || is_nyquist(g, k1) || is_nyquist(g, k2)) return 0.0;
      const double k2norm = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
      const double kp = which == 0 ? -k2 : k1;
      return C(0.0, -kp / (kTwoPi * k2norm));
    });
  };
  return VectorField(component(0), component(1));
}

VectorField biot_savart(const ScalarField& xi, bool dealiased, double mean_tol) {
  const double scale = std::max(1.0, xi.max_abs());
  if (std::abs(xi.mean()) > mean_tol * scale)
    throw std::invalid_argument("biot_savart: vorticity must have zero mean");
  SpectralField hat = to_spectral(xi);
  if (dealiased) dealias(hat);
  return biot_savart(hat);
}

VectorField gradient(const SpectralField& f_hat) {
  const Grid& g = f_hat.grid();
  using C = std::complex<double>;
  auto component = [&](int which) {
    return apply_multiplier(f_hat, [&](int k1, int k2) -> C {
      if (is_nyquist(g, k1) || is_nyquist(g, k2)) return 0.0;
      return C(0.0, kTwoPi * (which == 0 ? k1 : k2));
    });
  };
  return VectorField(component(0), component(1));
}

VectorField gradient(const ScalarField& f) { return gradient(to_spectral(f)); }

namespace {

SpectralField derivative_combination(const VectorField& u, double sign1, double sign2, bool curl) {
  const Grid& g = u.grid();
  SpectralField a = to_spectral(u.u1);
  SpectralField b = to_spectral(u.u2);
  SpectralField out(g);
  auto ca = a.coefficients();
  auto cb = b.coefficients();
  auto co = out.coefficients();
  const int n = g.n();
  const int half = n / 2 + 1;
  using C = std::complex<double>;
  for (int i = 0; i < n; ++i) {
    const int k1 = g.wavenumber(i);
    for (int j = 0; j < half; ++j) {
      const std::size_t s = static_cast<std::size_t>(i) * half + j;
      if (is_nyquist(g, k1) || is_nyquist(g, j)) {
        co[s] = 0.0;
        continue;
      }
      const C d1(0.0, kTwoPi * k1);
      const C d2(0.0, kTwoPi * j);
      // curl: d1 u2 - d2 u1, divergence: d1 u1 + d2 u2
      co[s] = curl ? sign1 * d1 * cb[s] + sign2 * d2 * ca[s] : sign1 * d1 * ca[s] + sign2 * d2 * cb[s];
    }
  }
  return out;
}

}  // namespace

ScalarField curl(const VectorField& u) { return from_spectral(derivative_combination(u, 1.0, -1.0, true)); }

ScalarField divergence(const VectorField& u) {
  return from_spectral(derivative_combination(u, 1.0, 1.0, false));
}

double spectral_inner_product(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("spectral_inner_product: grid mismatch");
  const Grid& grid = f.grid();
  const int n = grid.n();
  const int half = n / 2 + 1;
  auto a = f.coefficients();
  auto b = g.coefficients();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < half; ++j) {
      const std::size_t s = static_cast<std::size_t>(i) * half + j;
      // Columns 1..n/2-1 stand for themselves and their mirror images.
      const double weight = (j == 0 || j == n / 2) ? 1.0 : 2.0;
      sum += weight * (std::conj(a[s]) * b[s]).real();
    }
  }
  return sum;
}

}  // namespace wz
