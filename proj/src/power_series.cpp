#include "zerofree/power_series.hpp"

#include <algorithm>
#include <sstream>

#include "zerofree/errors.hpp"

namespace zerofree {

namespace {

std::string describe(cplx c) {
  std::ostringstream os;
  os << '(' << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
  return os.str();
}

void require_nonzero_constant(const PowerSeries& a, const char* op) {
  if (a.order() < 0) throw PreconditionError(std::string(op) + " of an empty series");
  if (a[0] == cplx{}) {
    throw PreconditionError(std::string(op) + " needs a nonzero constant term, got " + describe(a[0]));
  }
}

int common_order(const PowerSeries& a, const PowerSeries& b) { return std::min(a.order(), b.order()); }

}  // namespace

PowerSeries::PowerSeries(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {}

PowerSeries PowerSeries::constant(cplx c, int order) {
  std::vector<cplx> v(static_cast<std::size_t>(order + 1), cplx{});
  v[0] = c;
  return PowerSeries(std::move(v));
}

PowerSeries PowerSeries::identity(int order) {
  std::vector<cplx> v(static_cast<std::size_t>(order + 1), cplx{});
  if (order >= 1) v[1] = 1.0;
  return PowerSeries(std::move(v));
}

PowerSeries PowerSeries::truncated(int order) const {
  std::vector<cplx> v(c_.begin(), c_.begin() + std::min<std::ptrdiff_t>(order + 1, std::ssize(c_)));
  return PowerSeries(std::move(v));
}

cplx PowerSeries::eval(cplx z) const {
  cplx acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<cplx> PowerSeries::partial_sums(cplx z) const {
  std::vector<cplx> out;
  out.reserve(c_.size());
  cplx zr = 1.0, acc = 0.0;
  for (const cplx& c : c_) {
    acc += c * zr;
    out.push_back(acc);
    zr *= z;
  }
  return out;
}

PowerSeries PowerSeries::operator+(const PowerSeries& b) const {
  const int k = common_order(*this, b);
  std::vector<cplx> v(static_cast<std::size_t>(k + 1));
  for (int r = 0; r <= k; ++r) v[static_cast<std::size_t>(r)] = (*this)[r] + b[r];
  return PowerSeries(std::move(v));
}

PowerSeries PowerSeries::operator-(const PowerSeries& b) const { return *this + b * cplx{-1.0}; }

PowerSeries PowerSeries::operator*(const PowerSeries& b) const { return series_mul(*this, b); }

PowerSeries PowerSeries::operator*(cplx s) const {
  PowerSeries out = *this;
  for (auto& c : out.c_) c *= s;
  return out;
}

PowerSeries PowerSeries::operator+(cplx s) const {
  PowerSeries out = *this;
  if (!out.c_.empty()) out.c_[0] += s;
  return out;
}

PowerSeries series_mul(const PowerSeries& a, const PowerSeries& b) {
  const int k = common_order(a, b);
  std::vector<cplx> v(static_cast<std::size_t>(std::max(k + 1, 0)), cplx{});
  for (int n = 0; n <= k; ++n) {
    cplx s = 0.0;
    for (int i = 0; i <= n; ++i) s += a[i] * b[n - i];
    v[static_cast<std::size_t>(n)] = s;
  }
  return PowerSeries(std::move(v));
}

PowerSeries series_div(const PowerSeries& a, const PowerSeries& b) {
  require_nonzero_constant(b, "div");
  const int k = common_order(a, b);
  std::vector<cplx> c(static_cast<std::size_t>(k + 1));
  for (int n = 0; n <= k; ++n) {
    cplx s = a[n];
    for (int i = 1; i <= n; ++i) s -= b[i] * c[static_cast<std::size_t>(n - i)];
    c[static_cast<std::size_t>(n)] = s / b[0];
  }
  return PowerSeries(std::move(c));
}

PowerSeries series_exp(const PowerSeries& a) {
  const int k = a.order();
  std::vector<cplx> b(static_cast<std::size_t>(k + 1));
  if (k < 0) return PowerSeries(std::move(b));
  b[0] = std::exp(a[0]);
  // b' = a' b
  for (int n = 1; n <= k; ++n) {
    cplx s = 0.0;
    for (int i = 1; i <= n; ++i) s += static_cast<double>(i) * a[i] * b[static_cast<std::size_t>(n - i)];
    b[static_cast<std::size_t>(n)] = s / static_cast<double>(n);
  }
  return PowerSeries(std::move(b));
}

PowerSeries series_log(const PowerSeries& a) {
  require_nonzero_constant(a, "log");
  const int k = a.order();
  std::vector<cplx> b(static_cast<std::size_t>(k + 1));
  b[0] = std::log(a[0]);
  // a b' = a'
  for (int n = 1; n <= k; ++n) {
    cplx s = static_cast<double>(n) * a[n];
    for (int i = 1; i < n; ++i) s -= static_cast<double>(i) * b[static_cast<std::size_t>(i)] * a[n - i];
    b[static_cast<std::size_t>(n)] = s / (static_cast<double>(n) * a[0]);
  }
  return PowerSeries(std::move(b));
}

PowerSeries series_pow(const PowerSeries& a, cplx p) {
  require_nonzero_constant(a, "pow");
  const int k = a.order();
  std::vector<cplx> b(static_cast<std::size_t>(k + 1));
  b[0] = std::pow(a[0], p);
  // a b' = p a' b
  for (int n = 1; n <= k; ++n) {
    cplx s = 0.0;
    for (int i = 1; i <= n; ++i) {
      s += (p * static_cast<double>(i) - static_cast<double>(n - i)) * a[i] * b[static_cast<std::size_t>(n - i)];
    }
    b[static_cast<std::size_t>(n)] = s / (static_cast<double>(n) * a[0]);
  }
  return PowerSeries(std::move(b));
}

PowerSeries series_sqrt(const PowerSeries& a) {
  require_nonzero_constant(a, "sqrt");
  return series_pow(a, 0.5);
}

PowerSeries series_compose(const PowerSeries& a, const PowerSeries& b) {
  if (b.order() >= 0 && b[0] != cplx{}) {
    throw PreconditionError("compose needs an inner series with zero constant term, got " + describe(b[0]));
  }
  const int k = common_order(a, b);
  PowerSeries acc = PowerSeries::constant(k >= 0 ? a[k] : cplx{}, k);
  const PowerSeries inner = b.truncated(k);
  for (int r = k - 1; r >= 0; --r) acc = series_mul(acc, inner) + a[r];
  return acc;
}

PowerSeries series_divide_by_power(const PowerSeries& a, int shift, double tol) {
  double scale = 0.0;
  for (const auto& c : a.coeffs()) scale = std::max(scale, std::abs(c));
  for (int r = 0; r < shift && r <= a.order(); ++r) {
    if (std::abs(a[r]) > tol * std::max(scale, 1.0)) {
      throw PreconditionError("division by z^" + std::to_string(shift) + " of a series with coefficient " +
                              describe(a[r]) + " at order " + std::to_string(r));
    }
  }
  std::vector<cplx> v(a.coeffs().begin() + std::min(shift, a.order() + 1), a.coeffs().end());
  return PowerSeries(std::move(v));
}

PowerSeries series_arith(SeriesOp op, const PowerSeries& a, const PowerSeries& b, cplx p) {
  switch (op) {
    case SeriesOp::mul: return series_mul(a, b);
    case SeriesOp::div: return series_div(a, b);
    case SeriesOp::exp: return series_exp(a);
    case SeriesOp::log: return series_log(a);
    case SeriesOp::sqrt: return series_sqrt(a);
    case SeriesOp::pow: return series_pow(a, p);
    case SeriesOp::compose: return series_compose(a, b);
  }
  throw PreconditionError("unknown series operation");
}

}  // namespace zerofree
