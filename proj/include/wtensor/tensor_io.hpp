#pragma once

#include <string>

#include "json.hpp"
#include "wtensor/symmetric_tensor.hpp"

namespace wtensor {

enum class TensorForm { Monomial, Entries };

/// {"order": m, "dim": n, "form": "monomial"|"entries", "terms": [{"idx": [...], "val": c}]}
/// Indices are 1-based and must already be sorted. "val" may be a number or a
/// rational string such as "-1/6".
SymmetricTensor tensor_from_json(const nlohmann::json& j);
nlohmann::json tensor_to_json(const SymmetricTensor& t, TensorForm form = TensorForm::Monomial);

SymmetricTensor read_tensor_file(const std::string& path);
void write_tensor_file(const std::string& path, const SymmetricTensor& t,
                       TensorForm form = TensorForm::Monomial);

/// Parses a JSON number or a "p/q" string.
double parse_real(const nlohmann::json& v);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

/// 64-bit FNV-1a digest of the canonical monomial-form serialization.
std::string tensor_digest(const SymmetricTensor& t);

}  // namespace wtensor
