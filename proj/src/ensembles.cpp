#include "zerofree/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "toml.hpp"
#include "zerofree/codes.hpp"
#include "zerofree/errors.hpp"
#include "zerofree/rng.hpp"

namespace zerofree {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Visits every strictly increasing k-tuple of {0..n-1} in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(std::span<const int>(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::string pauli_on(int n, std::span<const int> sites, char letter) {
  std::string s(static_cast<std::size_t>(n), 'I');
  for (int q : sites) s[static_cast<std::size_t>(q)] = letter;
  return s;
}

nlohmann::json complex_json(cplx c) { return {{"re", c.real()}, {"im", c.imag()}}; }

cplx i_pow(int k) {
  static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[((k % 4) + 4) % 4];
}

}  // namespace

std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::syk: return "syk";
    case EnsembleKind::klocal_pauli: return "klocal_pauli";
    case EnsembleKind::ising_pspin: return "ising_pspin";
    case EnsembleKind::heisenberg_sk: return "heisenberg_sk";
    case EnsembleKind::stabilizer: return "stabilizer";
    case EnsembleKind::fermi_hubbard: return "fermi_hubbard";
  }
  return "unknown";
}

EnsembleKind ensemble_from_string(std::string_view s) {
  for (auto k : {EnsembleKind::syk, EnsembleKind::klocal_pauli, EnsembleKind::ising_pspin,
                 EnsembleKind::heisenberg_sk, EnsembleKind::stabilizer, EnsembleKind::fermi_hubbard}) {
    if (to_string(k) == s) return k;
  }
  throw PreconditionError("unknown ensemble '" + std::string(s) + "'");
}

double syk_script_j(int q, double J) { return std::sqrt(q * J * J / std::pow(2.0, q - 1)); }

OperatorSum syk(int n_majoranas, int q, double J, std::uint64_t seed) {
  if (q <= 0 || q % 2 != 0) throw PreconditionError("syk needs even q > 0, got " + std::to_string(q));
  if (n_majoranas % 2 != 0) {
    throw PreconditionError("syk needs an even number of Majoranas, got " + std::to_string(n_majoranas));
  }
  if (q > n_majoranas) throw PreconditionError("syk needs q <= N");
  const Philox4x32 rng(seed);
  const double sd = std::sqrt(factorial(q - 1) * J * J / std::pow(static_cast<double>(n_majoranas), q - 1));
  // i^{q/2} prefactor and psi = gamma/sqrt(2) on each of the q factors.
  const cplx rescale = i_pow(q / 2) * std::pow(2.0, -0.5 * q);
  OperatorSum h(Basis::majorana, n_majoranas);
  std::uint64_t stream = 0;
  for_each_subset(n_majoranas, q, [&](std::span<const int> idx) {
    h.add(rescale * (sd * rng.normal(stream++)), Monomial::majorana(n_majoranas, idx));
  });
  h.meta() = {{"kind", "syk"},        {"seed", seed},
              {"N", n_majoranas},     {"q", q},
              {"J", J},               {"J_script", syk_script_j(q, J)},
              {"variance", sd * sd},  {"rescale", complex_json(rescale)}};
  return h;
}

OperatorSum klocal_pauli(int n_qubits, int k, int max_degree, int max_terms, double J, std::uint64_t seed) {
  if (k < 1 || k > n_qubits) throw PreconditionError("klocal_pauli needs 1 <= k <= n");
  if (max_degree < 1) throw PreconditionError("klocal_pauli needs max_degree >= 1");
  const Philox4x32 rng(seed);
  struct Candidate {
    std::vector<int> sites;
    std::uint64_t stream;
    double priority;
  };
  std::vector<Candidate> cands;
  std::uint64_t stream = 0;
  for_each_subset(n_qubits, k, [&](std::span<const int> idx) {
    cands.push_back({std::vector<int>(idx.begin(), idx.end()), stream, rng.uniform(stream, 0)});
    ++stream;
  });
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.priority < b.priority; });

  OperatorSum h(Basis::pauli, n_qubits);
  std::vector<int> deg(static_cast<std::size_t>(n_qubits), 0);
  int accepted = 0;
  for (const auto& c : cands) {
    if (max_terms > 0 && accepted >= max_terms) break;
    if (std::any_of(c.sites.begin(), c.sites.end(),
                    [&](int q) { return deg[static_cast<std::size_t>(q)] >= max_degree; })) {
      continue;
    }
    const auto letters = rng(c.stream, 1);
    std::string s(static_cast<std::size_t>(n_qubits), 'I');
    for (std::size_t j = 0; j < c.sites.size(); ++j) {
      s[static_cast<std::size_t>(c.sites[j])] = "XYZ"[letters[j % 4] % 3];
    }
    const double coef = J * (2.0 * rng.uniform(c.stream, 2) - 1.0);
    h.add(coef, Monomial::pauli(s));
    for (int q : c.sites) ++deg[static_cast<std::size_t>(q)];
    ++accepted;
  }
  h.meta() = {{"kind", "klocal_pauli"}, {"seed", seed},         {"n", n_qubits}, {"k", k},
              {"D", max_degree},        {"J", J},               {"rescale", complex_json(1.0)}};
  return h;
}

OperatorSum ising_pspin(int n_spins, int p, double J, std::uint64_t seed) {
  if (p < 1 || p > n_spins) throw PreconditionError("ising_pspin needs 1 <= p <= N");
  const Philox4x32 rng(seed);
  const double sd = J * std::sqrt(factorial(p) / (2.0 * std::pow(static_cast<double>(n_spins), p - 1)));
  OperatorSum h(Basis::pauli, n_spins);
  std::uint64_t stream = 0;
  for_each_subset(n_spins, p, [&](std::span<const int> idx) {
    h.add(sd * rng.normal(stream++), Monomial::pauli(pauli_on(n_spins, idx, 'Z')));
  });
  h.meta() = {{"kind", "ising_pspin"}, {"seed", seed},       {"N", n_spins},
              {"p", p},                {"J", J},             {"variance", sd * sd},
              {"rescale", complex_json(1.0)}};
  return h;
}

OperatorSum heisenberg_sk(int n_spins, double J, std::uint64_t seed) {
  if (n_spins < 2) throw PreconditionError("heisenberg_sk needs N >= 2");
  const Philox4x32 rng(seed);
  const double sd = J / std::sqrt(static_cast<double>(n_spins));
  OperatorSum h(Basis::pauli, n_spins);
  std::uint64_t stream = 0;
  // S = 1/2: S_i . S_j = (XX + YY + ZZ)/4.
  for_each_subset(n_spins, 2, [&](std::span<const int> idx) {
    const double jij = sd * rng.normal(stream++);
    for (char l : {'X', 'Y', 'Z'}) h.add(0.25 * jij, Monomial::pauli(pauli_on(n_spins, idx, l)));
  });
  h.meta() = {{"kind", "heisenberg_sk"}, {"seed", seed},      {"N", n_spins},
              {"spin", 0.5},             {"spin_assumed", true},
              {"J", J},                  {"variance", sd * sd}, {"rescale", complex_json(0.25)}};
  return h;
}

OperatorSum fermi_hubbard(int lx, int ly, double t, double U, double mu) {
  if (lx < 1 || ly < 1 || lx * ly > kMaxHubbardSites) {
    throw PreconditionError("fermi_hubbard lattice " + std::to_string(lx) + "x" + std::to_string(ly) +
                            " exceeds " + std::to_string(kMaxHubbardSites) + " sites");
  }
  const int sites = lx * ly;
  const int modes = 4 * sites;  // two Majoranas per spin-orbital
  auto orbital = [](int site, int spin) { return 2 * site + spin; };
  // c_o = (gamma_{2o} + i gamma_{2o+1}) / 2
  auto annihilate = [&](int o) {
    OperatorSum c(Basis::majorana, modes);
    const int a[1] = {2 * o};
    const int b[1] = {2 * o + 1};
    c.add(0.5, Monomial::majorana(modes, a));
    c.add(cplx{0.0, 0.5}, Monomial::majorana(modes, b));
    return c;
  };
  std::vector<OperatorSum> c, cd;
  for (int o = 0; o < 2 * sites; ++o) {
    c.push_back(annihilate(o));
    cd.push_back(c.back().adjoint());
  }
  auto site_id = [&](int x, int y) { return ((x % lx + lx) % lx) * ly + ((y % ly + ly) % ly); };
  std::vector<std::pair<int, int>> bonds;
  for (int x = 0; x < lx; ++x) {
    for (int y = 0; y < ly; ++y) {
      for (auto [nx, ny] : {std::pair{x + 1, y}, std::pair{x, y + 1}}) {
        int i = site_id(x, y), j = site_id(nx, ny);
        if (i == j) continue;
        auto bond = std::minmax(i, j);
        if (std::find(bonds.begin(), bonds.end(), std::pair{bond.first, bond.second}) == bonds.end()) {
          bonds.emplace_back(bond.first, bond.second);
        }
      }
    }
  }
  OperatorSum h(Basis::majorana, modes);
  for (auto [i, j] : bonds) {
    for (int s = 0; s < 2; ++s) {
      const int oi = orbital(i, s), oj = orbital(j, s);
      h.add(cd[oi] * c[oj], -t);
      h.add(cd[oj] * c[oi], -t);
    }
  }
  for (int i = 0; i < sites; ++i) {
    const OperatorSum nu = cd[orbital(i, 0)] * c[orbital(i, 0)];
    const OperatorSum nd = cd[orbital(i, 1)] * c[orbital(i, 1)];
    h.add(nu * nd, U);
    h.add(nu, -mu);
    h.add(nd, -mu);
  }
  h = h.pruned(1e-15);
  h.meta() = {{"kind", "fermi_hubbard"}, {"lx", lx}, {"ly", ly},  {"t", t},
              {"U", U},                  {"mu", mu}, {"bonds", bonds.size()},
              {"rescale", complex_json(1.0)}};
  return h;
}

OperatorSum generate(const InstanceSpec& s) {
  switch (s.kind) {
    case EnsembleKind::syk: return syk(s.size, s.order, s.J, s.seed);
    case EnsembleKind::klocal_pauli:
      return klocal_pauli(s.size, s.order, s.max_degree, s.max_terms, s.J, s.seed);
    case EnsembleKind::ising_pspin: return ising_pspin(s.size, s.order, s.J, s.seed);
    case EnsembleKind::heisenberg_sk: return heisenberg_sk(s.size, s.J, s.seed);
    case EnsembleKind::fermi_hubbard: return fermi_hubbard(s.lx, s.ly, s.t, s.U, s.mu);
    case EnsembleKind::stabilizer: {
      const StabilizerCode code = code_by_name(s.code);
      OperatorSum h = code.hamiltonian();
      h.meta() = {{"kind", "stabilizer"}, {"code", s.code}, {"n", code.n},
                  {"k", code.k},          {"m", code.m()},  {"rescale", complex_json(1.0)}};
      return h;
    }
  }
  throw PreconditionError("unknown ensemble");
}

CouplingStats coupling_stats(std::span<const OperatorSum> pool) {
  std::vector<double> raw;
  for (const auto& o : pool) {
    cplx rescale = 1.0;
    if (o.meta().contains("rescale")) {
      rescale = {o.meta()["rescale"].value("re", 1.0), o.meta()["rescale"].value("im", 0.0)};
    }
    for (const auto& t : o.terms()) {
      if (!t.mono.is_identity()) raw.push_back((t.coef / rescale).real());
    }
  }
  if (raw.size() < 30) {
    throw PreconditionError("too few terms for coupling statistics: " + std::to_string(raw.size()) + " < 30");
  }
  CouplingStats st;
  st.count = raw.size();
  st.mean = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
  double ss = 0.0;
  for (double x : raw) ss += (x - st.mean) * (x - st.mean);
  st.variance = ss / static_cast<double>(raw.size() - 1);
  return st;
}

CouplingStats coupling_stats(const OperatorSum& o) { return coupling_stats(std::span<const OperatorSum>(&o, 1)); }

InstanceSpec spec_from_json(const nlohmann::json& j) {
  InstanceSpec s;
  s.kind = ensemble_from_string(j.value("kind", std::string("syk")));
  for (const char* key : {"size", "majoranas", "qubits", "spins", "N", "n"}) {
    if (j.contains(key)) s.size = j[key].get<int>();
  }
  for (const char* key : {"order", "q", "p", "k"}) {
    if (j.contains(key)) s.order = j[key].get<int>();
  }
  if (s.kind == EnsembleKind::ising_pspin && !j.contains("order") && !j.contains("p")) s.order = 3;
  if (s.kind == EnsembleKind::klocal_pauli && !j.contains("order") && !j.contains("k")) s.order = 2;
  s.max_degree = j.value("D", j.value("max_degree", s.max_degree));
  s.max_terms = j.value("terms", j.value("max_terms", s.max_terms));
  s.lx = j.value("lx", s.lx);
  s.ly = j.value("ly", s.ly);
  s.J = j.value("J", s.J);
  s.U = j.value("U", s.U);
  s.t = j.value("t", s.t);
  s.mu = j.value("mu", s.mu);
  s.code = j.value("code", s.code);
  s.seed = j.value("seed", std::uint64_t{0});
  return s;
}

InstanceSpec spec_from_toml(std::string_view text) {
  toml::table tbl;
  try {
    tbl = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "invalid TOML instance spec: " << e.description();
    throw PreconditionError(os.str());
  }
  nlohmann::json j = nlohmann::json::object();
  for (auto&& [key, node] : tbl) {
    const std::string k(key.str());
    if (auto v = node.value<std::int64_t>(); v && node.is_integer()) {
      j[k] = *v;
    } else if (auto d = node.value<double>(); d && node.is_floating_point()) {
      j[k] = *d;
    } else if (auto str = node.value<std::string>()) {
      j[k] = *str;
    }
  }
  return spec_from_json(j);
}

nlohmann::json spec_to_json(const InstanceSpec& s) {
  return {{"kind", to_string(s.kind)}, {"size", s.size}, {"order", s.order}, {"D", s.max_degree},
          {"terms", s.max_terms},      {"lx", s.lx},     {"ly", s.ly},       {"J", s.J},
          {"U", s.U},                  {"t", s.t},       {"mu", s.mu},       {"code", s.code},
          {"seed", s.seed}};
}

OperatorSum rescaled_majorana(int n_modes, std::span<const int> indices) {
  const int w = static_cast<int>(indices.size());
  if (w == 0 || w % 2 != 0) throw PreconditionError("rescaled Majorana monomial needs an even, nonzero weight");
  const cplx coef = i_pow(w / 2) * std::pow(2.0, -0.5 * w);
  return OperatorSum::from_monomial(Monomial::majorana(n_modes, indices), coef);
}

}  // namespace zerofree
