#include "solitonlab/jet.hpp"

#include <cmath>
#include <sstream>

namespace solitonlab {

std::string CoordPoint::to_string() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < coords.size(); ++i) {
    if (i) os << ", ";
    os << coords[i];
  }
  os << ")";
  return os.str();
}

namespace {
size_t packed2_size(int n) { return static_cast<size_t>(n) * (n + 1) / 2; }
size_t packed3_size(int n) {
  return static_cast<size_t>(n) * (n + 1) * (n + 2) / 6;
}
}  // namespace

Jet3::Jet3(int n)
    : n_(n), d1_(static_cast<size_t>(n), 0.0),
      d2_(packed2_size(n), 0.0), d3_(packed3_size(n), 0.0) {}

size_t Jet3::idx2(int i, int j) const {
  if (i > j) std::swap(i, j);
  // row-major over the upper triangle
  return static_cast<size_t>(i) * n_ - static_cast<size_t>(i) * (i - 1) / 2 +
         static_cast<size_t>(j - i);
}

size_t Jet3::idx3(int i, int j, int k) const {
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
  size_t base = 0;
  for (int t = 0; t < i; ++t) base += packed2_size(n_ - t);
  // packed 2-index position of (j-i, k-i) in dimension n_-i
  int m = n_ - i, a = j - i, b = k - i;
  return base + static_cast<size_t>(a) * m -
         static_cast<size_t>(a) * (a - 1) / 2 + static_cast<size_t>(b - a);
}

Jet3 Jet3::constant(int n, double c) {
  Jet3 r(n);
  r.value_ = c;
  return r;
}

Jet3 Jet3::seed(const CoordPoint& p, int var_index) {
  int n = p.dim();
  if (var_index < 0 || var_index >= n)
    throw std::out_of_range("Jet3::seed: variable index " +
                            std::to_string(var_index) + " out of range for " +
                            std::to_string(n) + " variables");
  Jet3 r(n);
  r.value_ = p[var_index];
  r.d1_[static_cast<size_t>(var_index)] = 1.0;
  return r;
}

void Jet3::check_same(const Jet3& o) const {
  if (n_ != o.n_)
    throw std::invalid_argument("Jet3: mixed variable counts " +
                                std::to_string(n_) + " vs " +
                                std::to_string(o.n_));
}

Jet3 Jet3::operator+(const Jet3& o) const {
  check_same(o);
  Jet3 r(*this);
  r.value_ += o.value_;
  for (size_t i = 0; i < d1_.size(); ++i) r.d1_[i] += o.d1_[i];
  for (size_t i = 0; i < d2_.size(); ++i) r.d2_[i] += o.d2_[i];
  for (size_t i = 0; i < d3_.size(); ++i) r.d3_[i] += o.d3_[i];
  return r;
}

Jet3 Jet3::operator-(const Jet3& o) const {
  check_same(o);
  Jet3 r(*this);
  r.value_ -= o.value_;
  for (size_t i = 0; i < d1_.size(); ++i) r.d1_[i] -= o.d1_[i];
  for (size_t i = 0; i < d2_.size(); ++i) r.d2_[i] -= o.d2_[i];
  for (size_t i = 0; i < d3_.size(); ++i) r.d3_[i] -= o.d3_[i];
  return r;
}

Jet3 Jet3::operator-() const {
  Jet3 r(*this);
  r.value_ = -r.value_;
  for (auto& x : r.d1_) x = -x;
  for (auto& x : r.d2_) x = -x;
  for (auto& x : r.d3_) x = -x;
  return r;
}

Jet3 Jet3::operator+(double c) const {
  Jet3 r(*this);
  r.value_ += c;
  return r;
}

Jet3 Jet3::operator*(double c) const {
  Jet3 r(*this);
  r.value_ *= c;
  for (auto& x : r.d1_) x *= c;
  for (auto& x : r.d2_) x *= c;
  for (auto& x : r.d3_) x *= c;
  return r;
}

Jet3 Jet3::operator*(const Jet3& o) const {
  check_same(o);
  const Jet3& f = *this;
  const Jet3& g = o;
  Jet3 r(n_);
  r.value_ = f.value_ * g.value_;
  for (int i = 0; i < n_; ++i)
    r.d1_[static_cast<size_t>(i)] = f.d1(i) * g.value_ + f.value_ * g.d1(i);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      r.d2_[r.idx2(i, j)] = f.d2(i, j) * g.value_ + f.d1(i) * g.d1(j) +
                            f.d1(j) * g.d1(i) + f.value_ * g.d2(i, j);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      for (int k = j; k < n_; ++k)
        r.d3_[r.idx3(i, j, k)] =
            f.d3(i, j, k) * g.value_ + f.value_ * g.d3(i, j, k) +
            f.d2(i, j) * g.d1(k) + f.d2(i, k) * g.d1(j) +
            f.d2(j, k) * g.d1(i) + f.d1(i) * g.d2(j, k) +
            f.d1(j) * g.d2(i, k) + f.d1(k) * g.d2(i, j);
  return r;
}

Jet3 Jet3::compose(double f0, double f1, double f2, double f3) const {
  const Jet3& u = *this;
  Jet3 r(n_);
  r.value_ = f0;
  for (int i = 0; i < n_; ++i) r.d1_[static_cast<size_t>(i)] = f1 * u.d1(i);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      r.d2_[r.idx2(i, j)] = f1 * u.d2(i, j) + f2 * u.d1(i) * u.d1(j);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      for (int k = j; k < n_; ++k)
        r.d3_[r.idx3(i, j, k)] =
            f1 * u.d3(i, j, k) +
            f2 * (u.d1(i) * u.d2(j, k) + u.d1(j) * u.d2(i, k) +
                  u.d1(k) * u.d2(i, j)) +
            f3 * u.d1(i) * u.d1(j) * u.d1(k);
  return r;
}

Jet3 Jet3::operator/(const Jet3& o) const {
  check_same(o);
  double d = o.value_;
  if (d == 0.0)
    throw JetDomainError("division by zero");
  // 1/x composed with the denominator, then a product
  Jet3 inv = o.compose(1.0 / d, -1.0 / (d * d), 2.0 / (d * d * d),
                       -6.0 / (d * d * d * d));
  return *this * inv;
}

Jet3 sin(const Jet3& u) {
  double s = std::sin(u.value()), c = std::cos(u.value());
  return u.compose(s, c, -s, -c);
}

Jet3 cos(const Jet3& u) {
  double s = std::sin(u.value()), c = std::cos(u.value());
  return u.compose(c, -s, -c, s);
}

Jet3 exp(const Jet3& u) {
  double e = std::exp(u.value());
  return u.compose(e, e, e, e);
}

Jet3 sqrt(const Jet3& u) {
  double x = u.value();
  if (x <= 0.0)
    throw JetDomainError("sqrt of nonpositive value " + std::to_string(x));
  double s = std::sqrt(x);
  return u.compose(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
}

Jet3 pow(const Jet3& u, int e) {
  if (e == 0) return Jet3::constant(u.vars(), 1.0);
  bool neg = e < 0;
  int k = neg ? -e : e;
  Jet3 r = u;
  for (int i = 1; i < k; ++i) r = r * u;
  if (!neg) return r;
  double d = r.value();
  if (d == 0.0) throw JetDomainError("negative power of zero");
  return r.compose(1.0 / d, -1.0 / (d * d), 2.0 / (d * d * d),
                   -6.0 / (d * d * d * d));
}

bool Jet3::all_finite() const {
  if (!std::isfinite(value_)) return false;
  for (double x : d1_) if (!std::isfinite(x)) return false;
  for (double x : d2_) if (!std::isfinite(x)) return false;
  for (double x : d3_) if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace solitonlab
