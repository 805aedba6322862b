#include "zerofree/codes.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "zerofree/errors.hpp"

namespace zerofree {

namespace {

constexpr double kLog2 = std::numbers::ln2;

// log cosh(z) for any complex z, stable for large |Re z|; imaginary part unwrapped.
cplx log_cosh(cplx z) {
  if (z.real() < 0) z = -z;
  return z + std::log((1.0 + std::exp(-2.0 * z)) / 2.0);
}

double wrap_phase(double p) { return std::remainder(p, 2.0 * std::numbers::pi); }

bool cosh_vanishes(cplx z) {
  const double scale = std::cosh(z.real());
  return std::abs(std::cosh(z)) <= 4.0 * std::numeric_limits<double>::epsilon() * scale;
}

int gf2_rank(std::vector<std::pair<std::uint64_t, std::uint64_t>> rows, int n) {
  int rank = 0;
  for (int col = 0; col < 2 * n && rank < static_cast<int>(rows.size()); ++col) {
    auto bit = [&](const std::pair<std::uint64_t, std::uint64_t>& r) {
      return col < n ? (r.first >> col) & 1U : (r.second >> (col - n)) & 1U;
    };
    auto pivot = std::find_if(rows.begin() + rank, rows.end(), bit);
    if (pivot == rows.end()) continue;
    std::iter_swap(rows.begin() + rank, pivot);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) != rank && bit(rows[i])) {
        rows[i].first ^= rows[static_cast<std::size_t>(rank)].first;
        rows[i].second ^= rows[static_cast<std::size_t>(rank)].second;
      }
    }
    ++rank;
  }
  return rank;
}

OperatorSum hamiltonian_of(int n, const std::vector<Monomial>& checks, const std::vector<int>& signs) {
  OperatorSum h(Basis::pauli, n);
  for (std::size_t i = 0; i < checks.size(); ++i) h.add(signs[i] ? -1.0 : 1.0, checks[i]);
  return h;
}

}  // namespace

std::vector<Monomial> StabilizerCode::all_checks() const {
  std::vector<Monomial> out = checks;
  out.insert(out.end(), redundant.begin(), redundant.end());
  return out;
}

std::vector<int> StabilizerCode::all_signs() const {
  std::vector<int> out = signs;
  out.insert(out.end(), redundant_signs.begin(), redundant_signs.end());
  return out;
}

void StabilizerCode::validate() const {
  if (signs.size() != checks.size() || redundant_signs.size() != redundant.size()) {
    throw PreconditionError("code '" + name + "': one sign per check required");
  }
  const auto all = all_checks();
  for (const auto& c : all) {
    if (c.basis() != Basis::pauli || c.size() != n) {
      throw PreconditionError("code '" + name + "': check does not act on " + std::to_string(n) + " qubits");
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (!all[i].commutes_with(all[j])) {
        throw PreconditionError("code '" + name + "': checks " + all[i].label() + " and " + all[j].label() +
                                " do not commute");
      }
    }
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> rows;
  for (const auto& c : checks) rows.push_back(c.key());
  if (gf2_rank(rows, n) != m()) throw PreconditionError("code '" + name + "': generators are not independent");
  if (m() != n - k) throw PreconditionError("code '" + name + "': m != n - k");
}

OperatorSum StabilizerCode::hamiltonian() const { return hamiltonian_of(n, checks, signs); }

OperatorSum StabilizerCode::full_hamiltonian() const { return hamiltonian_of(n, all_checks(), all_signs()); }

StabilizerCode repetition_code(int n) {
  if (n < 2) throw PreconditionError("repetition code needs n >= 2");
  StabilizerCode c;
  c.name = "repetition:" + std::to_string(n);
  c.n = n;
  c.k = 1;
  c.d = 1;
  for (int i = 0; i + 1 < n; ++i) {
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i + 1)] = 'Z';
    c.checks.push_back(Monomial::pauli(s));
    c.signs.push_back(0);
  }
  c.validate();
  return c;
}

StabilizerCode toric_code(int L) {
  if (L < 2) throw PreconditionError("toric code needs L >= 2");
  StabilizerCode c;
  c.name = "toric:" + std::to_string(L);
  c.n = 2 * L * L;
  c.k = 2;
  c.d = L;
  if (c.n > kMaxSystemSize) throw PreconditionError("toric code too large");
  auto wrap = [L](int a) { return ((a % L) + L) % L; };
  auto h_edge = [&](int x, int y) { return 2 * (wrap(x) * L + wrap(y)); };
  auto v_edge = [&](int x, int y) { return 2 * (wrap(x) * L + wrap(y)) + 1; };
  auto check = [&](std::initializer_list<int> qubits, char letter) {
    std::string s(static_cast<std::size_t>(c.n), 'I');
    for (int q : qubits) s[static_cast<std::size_t>(q)] = letter;
    return Monomial::pauli(s);
  };
  std::vector<Monomial> stars, plaquettes;
  for (int x = 0; x < L; ++x) {
    for (int y = 0; y < L; ++y) {
      stars.push_back(check({h_edge(x, y), h_edge(x - 1, y), v_edge(x, y), v_edge(x, y - 1)}, 'X'));
      plaquettes.push_back(check({h_edge(x, y), h_edge(x, y + 1), v_edge(x, y), v_edge(x + 1, y)}, 'Z'));
    }
  }
  c.checks.assign(stars.begin(), stars.end() - 1);
  c.checks.insert(c.checks.end(), plaquettes.begin(), plaquettes.end() - 1);
  c.signs.assign(c.checks.size(), 0);
  c.redundant = {stars.back(), plaquettes.back()};
  c.redundant_signs = {0, 0};
  c.validate();
  return c;
}

StabilizerCode steane_code() {
  StabilizerCode c;
  c.name = "steane";
  c.n = 7;
  c.k = 1;
  c.d = 3;
  for (const char* s : {"IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"}) {
    c.checks.push_back(Monomial::pauli(s));
  }
  c.signs.assign(6, 0);
  c.validate();
  return c;
}

StabilizerCode code_from_json(const nlohmann::json& j) {
  if (!j.contains("checks") || !j["checks"].is_array() || j["checks"].empty()) {
    throw PreconditionError("code JSON needs a non-empty \"checks\" array");
  }
  StabilizerCode c;
  c.name = j.value("name", std::string("custom"));
  for (const auto& s : j["checks"]) c.checks.push_back(Monomial::pauli(s.get<std::string>()));
  c.n = c.checks.front().size();
  c.signs = j.value("signs", std::vector<int>(c.checks.size(), 0));
  if (j.contains("redundant")) {
    for (const auto& s : j["redundant"]) c.redundant.push_back(Monomial::pauli(s.get<std::string>()));
    c.redundant_signs = j.value("redundant_signs", std::vector<int>(c.redundant.size(), 0));
  }
  c.k = j.value("k", c.n - c.m());
  c.d = j.value("d", 0);
  for (int& b : c.signs) b &= 1;
  for (int& b : c.redundant_signs) b &= 1;
  c.validate();
  return c;
}

nlohmann::json code_to_json(const StabilizerCode& c) {
  nlohmann::json j = {{"name", c.name}, {"n", c.n}, {"k", c.k}, {"d", c.d}, {"signs", c.signs}};
  j["checks"] = nlohmann::json::array();
  for (const auto& m : c.checks) j["checks"].push_back(m.label());
  if (!c.redundant.empty()) {
    j["redundant"] = nlohmann::json::array();
    for (const auto& m : c.redundant) j["redundant"].push_back(m.label());
    j["redundant_signs"] = c.redundant_signs;
  }
  return j;
}

StabilizerCode code_by_name(const std::string& name) {
  const auto colon = name.find(':');
  const std::string base = name.substr(0, colon);
  const int arg = colon == std::string::npos ? 0 : std::stoi(name.substr(colon + 1));
  if (base == "repetition") return repetition_code(arg > 0 ? arg : 3);
  if (base == "toric") return toric_code(arg > 0 ? arg : 2);
  if (base == "steane") return steane_code();
  throw PreconditionError("unknown code '" + name + "' (repetition:n, toric:L, steane)");
}

LogValue stabilizer_partition(const StabilizerCode& code, cplx z) {
  if (cosh_vanishes(z)) return LogValue::zero();
  const cplx lz = (code.m() + code.k) * kLog2 + static_cast<double>(code.m()) * log_cosh(z);
  return {lz.real(), wrap_phase(lz.imag()), false};
}

std::vector<int> anticommuting_set(const StabilizerCode& code, const Monomial& a) {
  if (a.basis() != Basis::pauli || a.size() != code.n) {
    throw PreconditionError("perturbation must be a Pauli string on the code's qubits");
  }
  std::vector<int> out;
  for (int i = 0; i < code.m(); ++i) {
    if (!code.checks[static_cast<std::size_t>(i)].commutes_with(a)) out.push_back(i);
  }
  return out;
}

cplx perturbed_block_sum(int r, double delta, cplx z) {
  // Group s by its number j of -1 entries: lambda = r - 2j with multiplicity C(r, j).
  cplx sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= r; ++j) {
    const double lambda = r - 2 * j;
    sum += binom * std::cosh(z * std::sqrt(lambda * lambda + delta * delta));
    binom = binom * (r - j) / (j + 1);
  }
  return sum;
}

Spectrum perturbed_block_spectrum(int r, double delta) {
  std::vector<double> e;
  for (std::uint32_t bits = 0; bits < (1U << r); ++bits) {
    const double lambda = r - 2 * std::popcount(bits);
    const double w = std::sqrt(lambda * lambda + delta * delta);
    e.push_back(w);
    e.push_back(-w);
  }
  return spectrum_from_values(std::move(e));
}

LogValue perturbed_stabilizer_partition(const StabilizerCode& code, const Monomial& a, double delta, cplx z) {
  const int r = static_cast<int>(anticommuting_set(code, a).size());
  if (r == 0) throw PreconditionError("perturbation commutes with every check (r = 0); block formula needs r >= 1");
  if (r > 20) throw PreconditionError("anticommuting set too large: r = " + std::to_string(r) + " > 20");
  const int rest = code.m() - r;
  const cplx s = perturbed_block_sum(r, delta, z);
  if (std::abs(s) == 0.0 || (rest > 0 && cosh_vanishes(z))) return LogValue::zero();
  const cplx lz = (rest + code.k) * kLog2 + static_cast<double>(rest) * log_cosh(z) + std::log(s);
  return {lz.real(), wrap_phase(lz.imag()), false};
}

SeparabilityReport separability_bound(const StabilizerCode& code) {
  SeparabilityReport rep;
  rep.v.assign(static_cast<std::size_t>(code.n), {0.0, 0.0, 0.0});
  const auto all = code.all_checks();
  rep.m_total = static_cast<int>(all.size());
  for (const auto& c : all) {
    const double w = c.weight();
    for (int a = 0; a < code.n; ++a) {
      const char l = c.letter(a);
      if (l == 'I') continue;
      rep.v[static_cast<std::size_t>(a)][static_cast<std::size_t>(l == 'X' ? 0 : l == 'Y' ? 1 : 2)] += 1.0 / w;
    }
  }
  for (const auto& va : rep.v) rep.bound += std::sqrt(va[0] * va[0] + va[1] * va[1] + va[2] * va[2]);
  if (rep.bound < rep.m_total) rep.threshold_beta = std::atanh(rep.bound / rep.m_total);
  return rep;
}

double separability_corollary(const StabilizerCode& code) {
  int w_max = 0;
  for (const auto& c : code.checks) w_max = std::max(w_max, c.weight());
  const double m = code.m();
  const double w_star = 1.0 - (2.0 - std::numbers::sqrt2) / w_max * (1.0 + code.k / m);
  return m * w_star;
}

double product_state_energy(const StabilizerCode& code, const std::vector<std::array<double, 3>>& bloch) {
  if (static_cast<int>(bloch.size()) != code.n) throw PreconditionError("one Bloch vector per qubit required");
  const auto all = code.all_checks();
  const auto signs = code.all_signs();
  double e = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    double term = signs[i] ? -1.0 : 1.0;
    for (int a = 0; a < code.n; ++a) {
      const char l = all[i].letter(a);
      if (l == 'I') continue;
      term *= bloch[static_cast<std::size_t>(a)][static_cast<std::size_t>(l == 'X' ? 0 : l == 'Y' ? 1 : 2)];
    }
    e += term;
  }
  return e;
}

}  // namespace zerofree
