#include "zerofree/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "zerofree/codes.hpp"
#include "zerofree/conformal_map.hpp"
#include "zerofree/ensembles.hpp"
#include "zerofree/errors.hpp"
#include "zerofree/instance_io.hpp"
#include "zerofree/interpolator.hpp"
#include "zerofree/otoc.hpp"
#include "zerofree/syk_theory.hpp"
#include "zerofree/zeros.hpp"

namespace zerofree {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "1.0.0";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw PreconditionError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw PreconditionError("cannot write " + p.string());
  out << content;
}

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw PreconditionError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw PreconditionError("not a number: '" + s + "'");
  return v;
}

cplx parse_complex(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() == 1) return to_double(parts[0]);
  if (parts.size() == 2) return {to_double(parts[0]), to_double(parts[1])};
  throw PreconditionError("expected 're' or 're,im', got '" + s + "'");
}

Rectangle parse_rect(const std::string& s) {
  const auto p = split(s, ',');
  if (p.size() != 4) throw PreconditionError("rectangle must be 're_min,re_max,im_min,im_max'");
  return {to_double(p[0]), to_double(p[1]), to_double(p[2]), to_double(p[3])};
}

SitePauli parse_site(const std::string& s) {
  const auto p = split(s, ':');
  if (p.size() != 2 || p[1].size() != 1 || std::string("XYZ").find(p[1][0]) == std::string::npos) {
    throw PreconditionError("site operator must look like '3:Z'");
  }
  return {static_cast<int>(to_double(p[0])), p[1][0]};
}

OperatorSum parse_observable(const std::string& s, const OperatorSum& h) {
  if (!s.empty() && s.front() == '[') {
    if (h.basis() != Basis::majorana) throw PreconditionError("Majorana observable on a Pauli instance");
    if (s.back() != ']') throw PreconditionError("Majorana observable must look like '[1,2]'");
    std::vector<int> idx;
    for (const auto& t : split(s.substr(1, s.size() - 2), ',')) idx.push_back(static_cast<int>(to_double(t)) - 1);
    return rescaled_majorana(h.size(), idx);
  }
  if (h.basis() != Basis::pauli) throw PreconditionError("Pauli observable on a Majorana instance");
  if (static_cast<int>(s.size()) != h.size()) throw PreconditionError("Pauli observable length must equal the qubit count");
  return OperatorSum::from_monomial(Monomial::pauli(s));
}

MomentBackend parse_backend(const std::string& s) {
  if (s == "auto") return MomentBackend::automatic;
  if (s == "symbolic") return MomentBackend::symbolic;
  if (s == "spectral") return MomentBackend::spectral;
  throw PreconditionError("backend must be auto, symbolic or spectral");
}

json complex_json(cplx c) { return {{"re", c.real()}, {"im", c.imag()}}; }

struct Context {
  std::vector<std::string> argv;
  std::string subcommand;
  json inputs = json::object();
  std::vector<fs::path> outputs;
  std::optional<std::uint64_t> seed;
  int threads = 1;

  void add_input(const fs::path& p) { inputs[p.string()] = hex64(fnv1a(read_file(p))); }

  json manifest() const {
    json m = {{"tool", "zerofree"}, {"version", kVersion}, {"subcommand", subcommand},
              {"argv", argv},       {"inputs", inputs},    {"threads", threads}};
    m["seed"] = seed ? json(*seed) : json(nullptr);
    json outs = json::array();
    for (const auto& o : outputs) outs.push_back(o.string());
    m["outputs"] = outs;
    return m;
  }
};

// Map parameters shared by z and obs.
struct MapArgs {
  std::string kind = "disk";
  std::optional<double> rho;
  double delta_theta = 0.0;

  std::optional<MapSpec> resolve(const OperatorSum& h, double beta_abs) const {
    if (kind == "disk") return std::nullopt;
    MapSpec spec;
    spec.delta_theta = delta_theta;
    if (kind == "strip") {
      spec.kind = MapKind::strip;
    } else if (kind == "wedge") {
      spec.kind = MapKind::wedge;
    } else {
      throw PreconditionError("map must be disk, strip or wedge");
    }
    if (rho) {
      spec.rho = *rho;
    } else if (spec.kind == MapKind::wedge && h.meta().contains("J_script") && beta_abs > 0.0) {
      spec.rho = syk_wedge_rho(beta_abs, h.meta().at("J_script").get<double>());
    } else {
      throw PreconditionError("--rho is required for this map and instance");
    }
    return spec;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-free region toolkit: partition functions, Fisher zeros, interpolation, OTOCs", "zerofree"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  int threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  app.add_flag("--json", as_json, "Machine-readable JSON envelope on stdout");
  app.add_option("--threads", threads, "Parallelism degree")->check(CLI::PositiveNumber);

  Context ctx;
  for (int i = 0; i < argc; ++i) ctx.argv.emplace_back(argv[i]);
  json data;
  std::ostringstream text;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a Hamiltonian instance");
  std::string g_out, g_spec, g_ensemble, g_code;
  std::optional<int> g_size, g_order, g_degree, g_terms, g_lx, g_ly;
  std::optional<double> g_J, g_U, g_t, g_mu;
  std::optional<std::uint64_t> g_seed;
  gen->add_option("-o,--output", g_out, "Instance JSON")->required();
  gen->add_option("--spec", g_spec, "Instance spec file (JSON or TOML)");
  gen->add_option("--ensemble", g_ensemble, "syk, klocal_pauli, ising_pspin, heisenberg_sk, stabilizer, fermi_hubbard");
  gen->add_option("--size,--majoranas,--qubits,--spins", g_size, "System size");
  gen->add_option("--order,--q,--p,--k", g_order, "Interaction order");
  gen->add_option("--D,--max-degree", g_degree, "Degree cap (klocal_pauli)");
  gen->add_option("--terms", g_terms, "Term cap (klocal_pauli)");
  gen->add_option("--J", g_J, "Coupling scale");
  gen->add_option("--lx", g_lx);
  gen->add_option("--ly", g_ly);
  gen->add_option("--U", g_U);
  gen->add_option("--hopping", g_t);
  gen->add_option("--mu", g_mu);
  gen->add_option("--code", g_code, "repetition:n, toric:L or steane");
  gen->add_option("--seed", g_seed);

  // z
  auto* zc = app.add_subcommand("z", "Estimate log Z(beta) by interpolation");
  std::string z_instance, z_backend = "auto";
  std::string z_beta = "1.0";
  MapArgs z_map;
  double z_eps = 1e-3;
  std::optional<int> z_K;
  int z_maxK = 160;
  std::optional<double> z_radius;
  bool z_oracle = false;
  zc->add_option("--instance", z_instance)->required();
  zc->add_option("--beta", z_beta, "re or re,im");
  zc->add_option("--map", z_map.kind, "disk, strip or wedge");
  zc->add_option("--rho", z_map.rho);
  zc->add_option("--delta-theta", z_map.delta_theta);
  zc->add_option("--eps", z_eps);
  zc->add_option("--K", z_K);
  zc->add_option("--max-K", z_maxK);
  zc->add_option("--radius", z_radius, "Disk zero-free radius");
  zc->add_option("--backend", z_backend, "auto, symbolic or spectral");
  zc->add_flag("--oracle", z_oracle, "Compare with exact diagonalization");

  // obs
  auto* oc = app.add_subcommand("obs", "Estimate a thermal expectation value");
  std::string o_instance, o_observable, o_backend = "auto";
  double o_beta = 1.0, o_delta = 1e-2;
  MapArgs o_map;
  bool o_oracle = false;
  oc->add_option("--instance", o_instance)->required();
  oc->add_option("--observable", o_observable, "Pauli string 'XIZ..' or Majorana '[1,2]'")->required();
  oc->add_option("--beta", o_beta);
  oc->add_option("--delta", o_delta);
  oc->add_option("--map", o_map.kind);
  oc->add_option("--rho", o_map.rho);
  oc->add_option("--delta-theta", o_map.delta_theta);
  oc->add_option("--backend", o_backend);
  oc->add_flag("--oracle", o_oracle);

  // scan
  auto* sc = app.add_subcommand("scan", "Fisher-zero atlas: grid, contour counts, refined zeros");
  std::string s_instance, s_code, s_rect = "-6,6,-6,6", s_res = "256x256", s_ppm, s_csv, s_zeros;
  double s_gamma = 0.15;
  bool s_locate = false;
  int s_dilations = CountOptions{}.max_dilations;
  sc->add_option("--instance", s_instance);
  sc->add_option("--code", s_code);
  sc->add_option("--rect", s_rect, "re_min,re_max,im_min,im_max");
  sc->add_option("--res", s_res, "WxH");
  sc->add_option("--gamma", s_gamma);
  sc->add_option("--ppm", s_ppm);
  sc->add_option("--csv", s_csv);
  sc->add_option("--zeros", s_zeros);
  sc->add_flag("--locate", s_locate);
  sc->add_option("--max-dilations", s_dilations, "1% rectangle dilations tried when the boundary nears a zero");

  // saddle
  auto* sd = app.add_subcommand("saddle", "Large-q saddle, critical point and predicted zero-free region");
  std::string sd_b;
  double sd_J = 1.0;
  sd->add_option("--b", sd_b, "b = beta J_script as re or re,im");
  sd->add_option("--J-script", sd_J);

  // code
  auto* cc = app.add_subcommand("code", "Stabilizer-code partition functions and separability");
  std::string c_name = "repetition:3", c_file, c_beta = "1.0", c_perturb;
  double c_delta = 0.0;
  cc->add_option("--name", c_name);
  cc->add_option("--file", c_file, "Code JSON");
  cc->add_option("--beta", c_beta);
  cc->add_option("--perturb", c_perturb, "Pauli string A for H + delta A");
  cc->add_option("--delta", c_delta);

  // otoc
  auto* ot = app.add_subcommand("otoc", "OTOC: interpolation, exact and Lieb-Robinson baselines");
  std::string t_instance, t_chain = "8,0.1,1", t_b = "3:Z", t_m = "4:Z", t_times = "0.1,0.25,0.5", t_csv;
  int t_L = 1, t_max_order = kOtocMaxOrder;
  double t_eta = 0.5, t_eps = 1e-3;
  std::optional<int> t_K, t_lr;
  bool t_direct = false, t_xyz = false;
  ot->add_option("--instance", t_instance);
  ot->add_option("--chain", t_chain, "n,J,seed of a random bond chain");
  ot->add_flag("--xyz", t_xyz, "Bond terms from XX, YY, ZZ only");
  ot->add_option("--b", t_b, "site:letter");
  ot->add_option("--m", t_m, "site:letter");
  ot->add_option("--L", t_L);
  ot->add_option("--t", t_times, "Comma-separated times");
  ot->add_option("--eta", t_eta);
  ot->add_option("--eps", t_eps);
  ot->add_option("--K", t_K);
  ot->add_option("--max-order", t_max_order);
  ot->add_option("--lr", t_lr, "Lieb-Robinson ball radius");
  ot->add_flag("--direct", t_direct, "Interpolate f instead of log(2 - f)");
  ot->add_option("--csv", t_csv);

  // certify-map
  auto* cm = app.add_subcommand("certify-map", "Check a conformal map's image constraints on the boundary");
  std::string m_kind = "strip";
  double m_rho = 0.5, m_dtheta = 0.0;
  int m_samples = 10000, m_order = 32;
  cm->add_option("--kind", m_kind, "strip or wedge");
  cm->add_option("--rho", m_rho);
  cm->add_option("--delta-theta", m_dtheta);
  cm->add_option("--samples", m_samples);
  cm->add_option("--order", m_order);

  std::vector<const char*> args(argv, argv + argc);
  try {
    app.parse(argc, args.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }
  ctx.threads = threads;

  auto finish = [&](const std::string& status, const std::string& message, int code) {
    const json manifest = ctx.manifest();
    if (!ctx.outputs.empty() && code == 0) {
      write_file(fs::path(ctx.outputs.front().string() + ".manifest.json"), manifest.dump(2) + '\n');
    }
    if (as_json) {
      json env = {{"status", status}, {"data", data}, {"manifest", manifest}};
      if (!message.empty()) env["message"] = message;
      out << env.dump(2) << '\n';
    } else {
      out << text.str();
      if (!message.empty()) err << "error: " << message << '\n';
    }
    return code;
  };

  try {
    if (gen->parsed()) {
      ctx.subcommand = "gen";
      json j = json::object();
      if (!g_spec.empty()) {
        ctx.add_input(g_spec);
        const std::string content = read_file(g_spec);
        j = fs::path(g_spec).extension() == ".toml" ? spec_to_json(spec_from_toml(content)) : json::parse(content);
      }
      if (!g_ensemble.empty()) j["kind"] = g_ensemble;
      if (g_size) {
        for (const char* key : {"majoranas", "qubits", "spins", "N", "n"}) j.erase(key);
        j["size"] = *g_size;
      }
      if (g_order) {
        for (const char* key : {"q", "p", "k"}) j.erase(key);
        j["order"] = *g_order;
      }
      if (g_degree) j["D"] = *g_degree;
      if (g_terms) j["terms"] = *g_terms;
      if (g_J) j["J"] = *g_J;
      if (g_lx) j["lx"] = *g_lx;
      if (g_ly) j["ly"] = *g_ly;
      if (g_U) j["U"] = *g_U;
      if (g_t) j["t"] = *g_t;
      if (g_mu) j["mu"] = *g_mu;
      if (!g_code.empty()) j["code"] = g_code;
      if (g_seed) j["seed"] = *g_seed;
      const InstanceSpec spec = spec_from_json(j);
      ctx.seed = spec.seed;
      const OperatorSum h = generate(spec);
      if (fs::path(g_out).has_parent_path()) fs::create_directories(fs::path(g_out).parent_path());
      save_instance(h, g_out);
      ctx.outputs.push_back(g_out);
      data = {{"path", g_out},
              {"kind", to_string(spec.kind)},
              {"terms", h.num_terms()},
              {"qubits", h.num_qubits()},
              {"hash", hex64(instance_hash(h))},
              {"spec", spec_to_json(spec)}};
      text << "wrote " << g_out << " (" << h.num_terms() << " terms, " << h.num_qubits() << " qubits)\n";
    } else if (zc->parsed()) {
      ctx.subcommand = "z";
      ctx.add_input(z_instance);
      const OperatorSum h = load_instance(z_instance);
      const cplx beta = parse_complex(z_beta);
      InterpolationOptions opt;
      opt.eps = z_eps;
      opt.K = z_K;
      opt.max_K = z_maxK;
      opt.disk_radius = z_radius;
      opt.backend = parse_backend(z_backend);
      opt.with_oracle = z_oracle;
      const auto spec = z_map.resolve(h, std::abs(beta));
      const InterpolationReport r =
          spec ? estimate_log_partition(h, beta, *spec, opt) : estimate_log_partition(h, beta, std::nullopt, opt);
      data = to_json(r);
      data["log_abs_z"] = r.estimate_logZ.real();
      data["arg_z"] = std::remainder(r.estimate_logZ.imag(), 2.0 * std::numbers::pi);
      text << "log|Z| = " << format_double(r.estimate_logZ.real()) << '\n'
           << "arg Z  = " << format_double(data["arg_z"].get<double>()) << '\n'
           << "K      = " << r.K << (r.K_capped ? " (capped; bound " + std::to_string(r.K_bound) + ")" : "") << '\n'
           << "map    = " << r.map_kind << '\n'
           << "tail   = " << format_double(r.tail_indicator) << (r.tail_warning ? "  WARNING: above eps/10" : "")
           << '\n';
      if (r.oracle_delta) text << "oracle delta = " << format_double(std::abs(*r.oracle_delta)) << '\n';
    } else if (oc->parsed()) {
      ctx.subcommand = "obs";
      ctx.add_input(o_instance);
      const OperatorSum h = load_instance(o_instance);
      const OperatorSum obs = parse_observable(o_observable, h);
      InterpolationOptions opt;
      opt.backend = parse_backend(o_backend);
      const ObservableEstimate e = estimate_observable(h, obs, o_beta, o_delta, o_map.resolve(h, o_beta), opt);
      data = {{"value", e.value},  {"lambda", e.lambda},         {"eps", e.eps},
              {"K", e.base.K},     {"base", to_json(e.base)},   {"perturbed", to_json(e.perturbed)}};
      text << "<O> = " << format_double(e.value) << "  (lambda " << format_double(e.lambda) << ", K " << e.base.K
           << ")\n";
      if (o_oracle) {
        const double exact = observable_exact(h, obs, o_beta);
        data["exact"] = exact;
        text << "exact = " << format_double(exact) << '\n';
      }
    } else if (sc->parsed()) {
      ctx.subcommand = "scan";
      if (s_instance.empty() == s_code.empty()) throw PreconditionError("scan needs exactly one of --instance or --code");
      OperatorSum h;
      if (!s_instance.empty()) {
        ctx.add_input(s_instance);
        h = load_instance(s_instance);
      } else {
        h = code_by_name(s_code).hamiltonian();
      }
      const Rectangle rect = parse_rect(s_rect);
      const auto res = split(s_res, 'x');
      if (res.size() != 2) throw PreconditionError("--res must look like 256x256");
      const int w = static_cast<int>(to_double(res[0])), hgt = static_cast<int>(to_double(res[1]));
      const Spectrum spec = diagonalize(h);
      CountOptions copt;
      copt.max_dilations = s_dilations;
      if (!s_ppm.empty() || !s_csv.empty()) {
        const auto grid = evaluate_grid(spec, rect, w, hgt, threads);
        if (!s_ppm.empty()) {
          write_file(s_ppm, render_ppm(grid, w, hgt, s_gamma));
          ctx.outputs.push_back(s_ppm);
        }
        if (!s_csv.empty()) {
          write_file(s_csv, grid_csv(grid));
          ctx.outputs.push_back(s_csv);
        }
      }
      if (s_locate || !s_zeros.empty()) {
        const ZeroAtlas atlas = locate_zeros(spec, rect, copt);
        data = zeros_json(atlas);
        if (!s_zeros.empty()) {
          write_file(s_zeros, data.dump(2) + '\n');
          ctx.outputs.push_back(s_zeros);
        }
        text << "zeros in rectangle: " << atlas.count << " (unresolved " << atlas.unresolved << ")\n";
        for (const Zero& z : atlas.zeros) {
          text << "  " << format_double(z.beta.real()) << ' ' << format_double(z.beta.imag()) << "  m=" << z.multiplicity
               << "  residual=" << format_double(z.residual) << '\n';
        }
      } else {
        const ZeroCount c = count_zeros_rectangle(spec, rect, copt);
        data = {{"count", c.rounded}, {"contour_value", c.value}, {"dilations", c.dilations}};
        text << "zeros in rectangle: " << c.rounded << " (contour value " << format_double(c.value) << ")\n";
      }
    } else if (sd->parsed()) {
      ctx.subcommand = "saddle";
      const CriticalPoint cp = critical_point();
      const ZeroFreeRegion region = zero_free_prediction(sd_J);
      data = {{"c0", complex_json(cp.c0)},
              {"b0", complex_json(cp.b0)},
              {"y", cp.y},
              {"J_script", sd_J},
              {"half_height", region.half_height}};
      text << "c0 = " << format_double(cp.c0.imag()) << "i\n"
           << "b0 = " << format_double(cp.b0.imag()) << "i\n"
           << "zero-free: Re beta != 0 or |Im beta| < " << format_double(region.half_height) << '\n';
      if (!sd_b.empty()) {
        const cplx b = parse_complex(sd_b);
        const SaddleSolution s = solve_cstar(b);
        data["saddle"] = to_json(s);
        json cands = json::array();
        for (const auto& c : dominance_scan(b)) {
          cands.push_back({{"c", complex_json(c.c)}, {"action_re", c.action_re}, {"is_c_star", c.is_c_star}});
        }
        data["dominance_scan"] = cands;
        text << "c* = " << format_double(s.c_star.real()) << (s.c_star.imag() < 0 ? " - " : " + ")
             << format_double(std::abs(s.c_star.imag())) << "i, Re action = " << format_double(s.action_re) << '\n';
      }
    } else if (cc->parsed()) {
      ctx.subcommand = "code";
      StabilizerCode code;
      if (!c_file.empty()) {
        ctx.add_input(c_file);
        code = code_from_json(json::parse(read_file(c_file)));
      } else {
        code = code_by_name(c_name);
      }
      code.validate();
      const cplx z = parse_complex(c_beta);
      const LogValue closed = stabilizer_partition(code, z);
      const LogValue exact = partition_exact(diagonalize(code.hamiltonian()), z);
      const SeparabilityReport sep = separability_bound(code);
      data = {{"name", code.name},
              {"n", code.n},
              {"k", code.k},
              {"m", code.m()},
              {"log_abs_z_closed_form", closed.is_zero ? json(nullptr) : json(closed.log_modulus)},
              {"log_abs_z_exact", exact.is_zero ? json(nullptr) : json(exact.log_modulus)},
              {"separability_bound", sep.bound},
              {"separability_checks", sep.m_total}};
      data["separability_threshold"] = sep.threshold_beta ? json(*sep.threshold_beta) : json("no-entanglement-threshold");
      text << code.name << ": n=" << code.n << " k=" << code.k << " m=" << code.m() << '\n'
           << "log|Z| closed form = " << (closed.is_zero ? "-inf" : format_double(closed.log_modulus)) << '\n'
           << "log|Z| exact       = " << (exact.is_zero ? "-inf" : format_double(exact.log_modulus)) << '\n'
           << "separability bound = " << format_double(sep.bound) << " over " << sep.m_total << " checks";
      text << (sep.threshold_beta ? ", beta_sep >= " + format_double(*sep.threshold_beta) : ", no entanglement threshold");
      text << '\n';
      if (!c_perturb.empty()) {
        const Monomial a = Monomial::pauli(c_perturb);
        const LogValue p = perturbed_stabilizer_partition(code, a, c_delta, z);
        data["perturbed_log_abs_z"] = p.is_zero ? json(nullptr) : json(p.log_modulus);
        data["anticommuting"] = anticommuting_set(code, a);
        text << "perturbed log|Z| = " << (p.is_zero ? "-inf" : format_double(p.log_modulus)) << '\n';
      }
    } else if (ot->parsed()) {
      ctx.subcommand = "otoc";
      OperatorSum h;
      if (!t_instance.empty()) {
        ctx.add_input(t_instance);
        h = load_instance(t_instance);
      } else {
        const auto p = split(t_chain, ',');
        if (p.size() != 3) throw PreconditionError("--chain must be n,J,seed");
        ctx.seed = static_cast<std::uint64_t>(to_double(p[2]));
        h = random_bond_chain(static_cast<int>(to_double(p[0])), to_double(p[1]), *ctx.seed, t_xyz);
      }
      OtocOptions opt;
      opt.eta = t_eta;
      opt.K = t_K;
      opt.max_order = t_max_order;
      opt.direct = t_direct;
      std::string csv = "t,exact,interpolated,lr_R,lr_estimate,err_interpolated,err_lr\n";
      json rows = json::array();
      for (const auto& ts : split(t_times, ',')) {
        const double t = to_double(ts);
        const OtocTask task = make_otoc_task(h, parse_site(t_b), parse_site(t_m), t, t_L);
        const double exact = otoc_reference(task);
        const OtocEstimate e = estimate_otoc(task, t_eps, opt);
        json row = {{"t", t}, {"exact", exact}, {"interpolated", e.value}, {"estimate", to_json(e)}};
        std::string lr_r = "", lr_v = "", lr_err = "";
        if (t_lr) {
          const LrResult lr = lr_baseline(task, *t_lr);
          row["lr"] = {{"R", lr.radius}, {"estimate", lr.estimate}, {"ball_size", lr.ball_size}};
          lr_r = std::to_string(lr.radius);
          lr_v = format_double(lr.estimate);
          lr_err = format_double(std::abs(lr.estimate - exact));
        }
        rows.push_back(row);
        csv += format_double(t) + ',' + format_double(exact) + ',' + format_double(e.value) + ',' + lr_r + ',' + lr_v +
               ',' + format_double(std::abs(e.value - exact)) + ',' + lr_err + '\n';
      }
      data = {{"rows", rows}};
      if (!t_csv.empty()) {
        write_file(t_csv, csv);
        ctx.outputs.push_back(t_csv);
      }
      text << csv;
    } else if (cm->parsed()) {
      ctx.subcommand = "certify-map";
      ConformalMap m;
      if (m_kind == "strip") {
        m = build_strip_map(m_rho, m_order);
      } else if (m_kind == "wedge") {
        m = build_wedge_map(m_rho, m_dtheta, m_order);
      } else {
        throw PreconditionError("--kind must be strip or wedge");
      }
      const MapCertificate c = certify_map(m, m_samples);
      data = {{"params", m.params_json()}, {"certificate", to_json(c)}};
      text << m_kind << " map, rho " << format_double(m_rho) << ": " << c.violations << " violations in " << c.samples
           << " samples\n";
    }
  } catch (const PreconditionError& e) {
    return finish("precondition_error", e.what(), 2);
  } catch (const NumericalFailure& e) {
    return finish("numerical_failure", e.what(), 3);
  } catch (const json::exception& e) {
    return finish("precondition_error", std::string("malformed JSON input: ") + e.what(), 2);
  }
  return finish("ok", "", 0);
}

}  // namespace zerofree
