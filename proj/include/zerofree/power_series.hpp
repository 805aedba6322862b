#pragma once

#include <complex>
#include <vector>

namespace zerofree {

using cplx = std::complex<double>;

/// Truncated Maclaurin series c_0 + c_1 z + ... + c_K z^K.
/// Binary operations truncate to the smaller order of the two operands.
class PowerSeries {
 public:
  PowerSeries() = default;
  explicit PowerSeries(std::vector<cplx> coeffs);
  static PowerSeries constant(cplx c, int order);
  /// The series z.
  static PowerSeries identity(int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  cplx operator[](int r) const { return c_[static_cast<std::size_t>(r)]; }
  cplx& operator[](int r) { return c_[static_cast<std::size_t>(r)]; }
  const std::vector<cplx>& coeffs() const { return c_; }

  PowerSeries truncated(int order) const;
  /// Horner evaluation of the polynomial.
  cplx eval(cplx z) const;
  /// Partial sums T_0(z), ..., T_K(z).
  std::vector<cplx> partial_sums(cplx z) const;

  PowerSeries operator+(const PowerSeries& b) const;
  PowerSeries operator-(const PowerSeries& b) const;
  PowerSeries operator*(const PowerSeries& b) const;
  PowerSeries operator*(cplx s) const;
  PowerSeries operator+(cplx s) const;

 private:
  std::vector<cplx> c_;
};

enum class SeriesOp { mul, div, exp, log, sqrt, pow, compose };

PowerSeries series_mul(const PowerSeries& a, const PowerSeries& b);
/// Requires b_0 != 0.
PowerSeries series_div(const PowerSeries& a, const PowerSeries& b);
PowerSeries series_exp(const PowerSeries& a);
/// Principal log of a_0; requires a_0 != 0.
PowerSeries series_log(const PowerSeries& a);
/// Principal branch a_0^p; requires a_0 != 0.
PowerSeries series_pow(const PowerSeries& a, cplx p);
PowerSeries series_sqrt(const PowerSeries& a);
/// a(b(z)); requires b_0 = 0.
PowerSeries series_compose(const PowerSeries& a, const PowerSeries& b);
/// Drops the first `shift` coefficients, i.e. a(z) / z^shift; requires
/// them to vanish within `tol` times the largest coefficient.
PowerSeries series_divide_by_power(const PowerSeries& a, int shift, double tol = 1e-12);

/// Dispatcher over the operations above; `b` is ignored by the unary ones
/// and `p` used only by pow.
PowerSeries series_arith(SeriesOp op, const PowerSeries& a, const PowerSeries& b = {}, cplx p = 0.5);

}  // namespace zerofree
