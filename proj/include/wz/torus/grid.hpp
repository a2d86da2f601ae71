#pragma once

#include <cmath>
#include <cstddef>

namespace wz {

/// Uniform n x n grid on the unit torus [0,1)^2. Node (i, j) sits at (i h, j h).
class Grid {
 public:
  /// Throws std::invalid_argument unless n is even and at least 16.
  explicit Grid(int n);

  int n() const { return n_; }
  double h() const { return 1.0 / n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(j);
  }
  /// Complex coefficients kept by a real-to-complex transform: n x (n/2 + 1).
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * (n_ / 2 + 1); }
  /// Signed wavenumber of FFT index i (i in [0, n)); the Nyquist index maps to +n/2.
  int wavenumber(int i) const { return i <= n_ / 2 ? i : i - n_; }

  bool operator==(const Grid& other) const { return n_ == other.n_; }

 private:
  int n_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend Vec2 operator*(Vec2 a, double s) { return a *= s; }
  double norm() const { return std::hypot(x, y); }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// Reduces a real coordinate to [0, 1).
inline double wrap_unit(double v) {
  double r = v - std::floor(v);
  return r >= 1.0 ? 0.0 : r;
}

/// Signed minimal-image difference of two coordinates, in [-1/2, 1/2].
inline double minimal_image(double d) { return d - std::nearbyint(d); }

/// A point of the torus; components are kept in [0, 1).
struct TorusPoint {
  double x = 0.0;
  double y = 0.0;

  TorusPoint() = default;
  TorusPoint(double px, double py) : x(wrap_unit(px)), y(wrap_unit(py)) {}

  TorusPoint shifted(const Vec2& d) const { return {x + d.x, y + d.y}; }
};

/// Shortest displacement from a to b on the torus.
inline Vec2 torus_displacement(const TorusPoint& a, const TorusPoint& b) {
  return {minimal_image(b.x - a.x), minimal_image(b.y - a.y)};
}

/// Geodesic distance on the flat unit torus; lies in [0, sqrt(2)/2].
inline double geodesic_distance(const TorusPoint& a, const TorusPoint& b) {
  return torus_displacement(a, b).norm();
}

}  // namespace wz
