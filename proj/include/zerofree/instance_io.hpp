#pragma once

#include <cstdint>
#include <filesystem>

#include "json.hpp"
#include "zerofree/operator_sum.hpp"

namespace zerofree {

/// {"kind", "system": {"qubits"|"majoranas"}, "terms": [{"re","im","monomial"}], "meta"}
/// Pauli monomials are letter strings ("XIZY"); Majorana monomials are
/// 1-based index lists ([1,4,6,7]).
nlohmann::json instance_to_json(const OperatorSum& o);
OperatorSum instance_from_json(const nlohmann::json& j);

OperatorSum load_instance(const std::filesystem::path& path);
void save_instance(const OperatorSum& o, const std::filesystem::path& path);

/// FNV-1a over the canonical instance serialization (terms only, not meta).
std::uint64_t instance_hash(const OperatorSum& o);

/// Text helpers shared by the writers: 17 significant digits.
std::string format_double(double x);

}  // namespace zerofree
