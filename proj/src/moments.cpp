#include "zerofree/moments.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "zerofree/errors.hpp"

namespace zerofree {

namespace {

struct KeyHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
    return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ULL ^ k.second);
  }
};

using SparsePower = std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, cplx, KeyHash>;

// m * m = square_sign(m) * identity for a phase-free monomial.
double square_sign(const Monomial& m) {
  if (m.basis() == Basis::pauli) return 1.0;
  const int d = m.weight();
  return (d * (d - 1) / 2) % 2 ? -1.0 : 1.0;
}

class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::vector<double> symbolic_moments(const OperatorSum& h, int K, double work_cap) {
  const int half = (K + 1) / 2;
  std::vector<SparsePower> powers;
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, Monomial, KeyHash> reps;
  SparsePower p0;
  const Monomial id = Monomial::identity(h.basis(), h.size());
  p0[id.key()] = 1.0;
  reps.emplace(id.key(), id);
  powers.push_back(std::move(p0));
  double work = 0.0;
  const auto m = static_cast<double>(h.num_terms());
  for (int j = 1; j <= half; ++j) {
    const SparsePower& prev = powers.back();
    work += static_cast<double>(prev.size()) * m;
    if (work > work_cap) {
      std::ostringstream os;
      os << "symbolic moments through order " << K << " need more than " << work_cap
         << " monomial products (reached " << work << " at power " << j << ")";
      throw PreconditionError(os.str());
    }
    SparsePower next;
    next.reserve(prev.size() * 2);
    for (const auto& [key, coef] : prev) {
      const Monomial& a = reps.at(key);
      for (const auto& t : h.terms()) {
        const Monomial prod = monomial_product(a, t.mono);
        const auto k = prod.key();
        next[k] += coef * t.coef * prod.phase_value();
        if (!reps.contains(k)) reps.emplace(k, prod.without_phase());
      }
    }
    powers.push_back(std::move(next));
  }
  std::vector<double> mu(static_cast<std::size_t>(K + 1), 0.0);
  for (int r = 0; r <= K; ++r) {
    const int a = (r + 1) / 2, b = r / 2;
    const SparsePower& pa = powers[static_cast<std::size_t>(a)];
    const SparsePower& pb = powers[static_cast<std::size_t>(b)];
    const SparsePower& small = pa.size() <= pb.size() ? pa : pb;
    const SparsePower& large = pa.size() <= pb.size() ? pb : pa;
    cplx s = 0.0;
    for (const auto& [key, coef] : small) {
      if (auto it = large.find(key); it != large.end()) s += coef * it->second * square_sign(reps.at(key));
    }
    mu[static_cast<std::size_t>(r)] = s.real();
  }
  return mu;
}

}  // namespace

std::vector<double> spectral_moments(const Spectrum& s, int K) {
  std::vector<NeumaierSum> acc(static_cast<std::size_t>(K + 1));
  for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
    const double e = s.eigenvalues(k);
    double p = 1.0;
    for (int r = 0; r <= K; ++r) {
      acc[static_cast<std::size_t>(r)].add(p);
      p *= e;
    }
  }
  std::vector<double> mu(static_cast<std::size_t>(K + 1));
  const auto dim = static_cast<double>(s.dim);
  for (int r = 0; r <= K; ++r) mu[static_cast<std::size_t>(r)] = acc[static_cast<std::size_t>(r)].value() / dim;
  return mu;
}

std::vector<double> moments(const OperatorSum& h, int K, MomentBackend backend, double work_cap) {
  if (K < 0) throw PreconditionError("moment order must be >= 0");
  if (backend == MomentBackend::automatic) {
    backend = (h.dim() <= kDefaultDenseCap || h.is_diagonal()) ? MomentBackend::spectral : MomentBackend::symbolic;
  }
  if (backend == MomentBackend::spectral) return spectral_moments(diagonalize(h), K);
  return symbolic_moments(h, K, work_cap);
}

PowerSeries moments_to_cumulants(const std::vector<double>& mu, int K, double dim_log) {
  if (mu.empty() || std::abs(mu[0] - 1.0) > 1e-12) {
    throw PreconditionError("moments must be normalized: mu[0] = 1");
  }
  if (K < 0 || K > static_cast<int>(mu.size()) - 1) {
    throw PreconditionError("cumulant order " + std::to_string(K) + " exceeds available moments");
  }
  std::vector<double> m(static_cast<std::size_t>(K + 1));
  double inv_fact = 1.0;
  for (int r = 0; r <= K; ++r) {
    if (r > 0) inv_fact /= r;
    m[static_cast<std::size_t>(r)] = (r % 2 ? -1.0 : 1.0) * mu[static_cast<std::size_t>(r)] * inv_fact;
  }
  std::vector<cplx> a(static_cast<std::size_t>(K + 1));
  a[0] = dim_log;
  for (int r = 1; r <= K; ++r) {
    double s = m[static_cast<std::size_t>(r)];
    for (int i = 1; i < r; ++i) {
      s -= (static_cast<double>(i) / r) * a[static_cast<std::size_t>(i)].real() * m[static_cast<std::size_t>(r - i)];
    }
    a[static_cast<std::size_t>(r)] = s;
  }
  return PowerSeries(std::move(a));
}

}  // namespace zerofree
