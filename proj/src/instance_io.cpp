#include "zerofree/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "zerofree/errors.hpp"

namespace zerofree {

nlohmann::json instance_to_json(const OperatorSum& o) {
  nlohmann::json j;
  j["kind"] = o.meta().value("kind", std::string("custom"));
  if (o.basis() == Basis::pauli) {
    j["system"] = {{"qubits", o.size()}};
  } else {
    j["system"] = {{"majoranas", o.size()}};
  }
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : o.terms()) {
    nlohmann::json term = {{"re", t.coef.real()}, {"im", t.coef.imag()}};
    if (o.basis() == Basis::pauli) {
      term["monomial"] = t.mono.label();
    } else {
      std::vector<int> idx;
      for (int a : t.mono.mode_indices()) idx.push_back(a + 1);
      term["monomial"] = idx;
    }
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  j["meta"] = o.meta();
  return j;
}

OperatorSum instance_from_json(const nlohmann::json& j) {
  if (!j.contains("system") || !j.contains("terms")) {
    throw PreconditionError("instance JSON needs \"system\" and \"terms\"");
  }
  const auto& sys = j["system"];
  OperatorSum o;
  if (sys.contains("qubits")) {
    o = OperatorSum(Basis::pauli, sys["qubits"].get<int>());
  } else if (sys.contains("majoranas")) {
    o = OperatorSum(Basis::majorana, sys["majoranas"].get<int>());
  } else {
    throw PreconditionError("instance system must give \"qubits\" or \"majoranas\"");
  }
  for (const auto& t : j["terms"]) {
    const cplx c{t.value("re", 0.0), t.value("im", 0.0)};
    const auto& m = t.at("monomial");
    if (m.is_string()) {
      const auto letters = m.get<std::string>();
      if (o.basis() != Basis::pauli || static_cast<int>(letters.size()) != o.size()) {
        throw PreconditionError("monomial '" + letters + "' does not match the system");
      }
      o.add(c, Monomial::pauli(letters));
    } else {
      if (o.basis() != Basis::majorana) throw PreconditionError("index-list monomial on a qubit system");
      std::vector<int> idx;
      for (const auto& a : m) idx.push_back(a.get<int>() - 1);
      o.add(c, Monomial::majorana(o.size(), idx));
    }
  }
  if (j.contains("meta")) o.meta() = j["meta"];
  if (!o.meta().contains("kind") && j.contains("kind")) o.meta()["kind"] = j["kind"];
  return o;
}

OperatorSum load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open instance file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("invalid instance JSON in " + path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

void save_instance(const OperatorSum& o, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path.string());
  out << instance_to_json(o).dump(2) << '\n';
}

std::uint64_t instance_hash(const OperatorSum& o) {
  std::ostringstream os;
  os << (o.basis() == Basis::pauli ? 'P' : 'M') << o.size() << ';';
  for (const auto& t : o.terms()) {
    os << t.mono.label() << ':' << format_double(t.coef.real()) << ',' << format_double(t.coef.imag()) << ';';
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace zerofree
