#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace solitonlab {

/// Raised when a jet operation leaves the domain of the underlying
/// function (division by zero, sqrt of a nonpositive value, ...).
struct JetDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A point in chart coordinates.
struct CoordPoint {
  std::vector<double> coords;

  CoordPoint() = default;
  explicit CoordPoint(std::vector<double> c) : coords(std::move(c)) {}
  CoordPoint(std::initializer_list<double> c) : coords(c) {}

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int i) const { return coords[static_cast<size_t>(i)]; }

  std::string to_string() const;
};

/// Truncated Taylor expansion of a scalar in n variables: the value and
/// all partial derivatives through order 3.  The second- and
/// third-order blocks are stored packed in canonical order (i <= j and
/// i <= j <= k), so index symmetry holds by construction.
///
/// All operations are pure; a Jet3 is immutable once built.
class Jet3 {
 public:
  static Jet3 constant(int n, double c);
  static Jet3 seed(const CoordPoint& p, int var_index);

  int vars() const { return n_; }
  double value() const { return value_; }

  double d1(int i) const { return d1_[static_cast<size_t>(i)]; }
  double d2(int i, int j) const { return d2_[idx2(i, j)]; }
  double d3(int i, int j, int k) const { return d3_[idx3(i, j, k)]; }

  Jet3 operator+(const Jet3& o) const;
  Jet3 operator-(const Jet3& o) const;
  Jet3 operator*(const Jet3& o) const;
  Jet3 operator/(const Jet3& o) const;
  Jet3 operator-() const;

  Jet3 operator+(double c) const;
  Jet3 operator*(double c) const;

  /// Composition with a univariate function given its value and first
  /// three derivatives at value().  Faa di Bruno through order 3.
  Jet3 compose(double f0, double f1, double f2, double f3) const;

  friend Jet3 sin(const Jet3& u);
  friend Jet3 cos(const Jet3& u);
  friend Jet3 exp(const Jet3& u);
  friend Jet3 sqrt(const Jet3& u);
  friend Jet3 pow(const Jet3& u, int e);

  bool all_finite() const;

 private:
  explicit Jet3(int n);
  void check_same(const Jet3& o) const;

  size_t idx2(int i, int j) const;
  size_t idx3(int i, int j, int k) const;

  int n_ = 0;
  double value_ = 0.0;
  std::vector<double> d1_;
  std::vector<double> d2_;  // packed, i <= j
  std::vector<double> d3_;  // packed, i <= j <= k
};

Jet3 sin(const Jet3& u);
Jet3 cos(const Jet3& u);
Jet3 exp(const Jet3& u);
Jet3 sqrt(const Jet3& u);
Jet3 pow(const Jet3& u, int e);

}  // namespace solitonlab
