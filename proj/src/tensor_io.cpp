#include "wtensor/tensor_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wtensor/error.hpp"

namespace wtensor {

using nlohmann::json;

double parse_real(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw Error(ErrorCode::ParseError, "value must be a number or rational string");
  const std::string s = v.get<std::string>();
  const auto slash = s.find('/');
  auto to_double = [&](const std::string& part) {
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(part, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "cannot parse '" + s + "'");
    }
    if (used != part.size()) throw Error(ErrorCode::ParseError, "cannot parse '" + s + "'");
    return d;
  };
  if (slash == std::string::npos) return to_double(s);
  const double num = to_double(s.substr(0, slash));
  const double den = to_double(s.substr(slash + 1));
  if (den == 0.0) throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
  return num / den;
}

SymmetricTensor tensor_from_json(const json& j) {
  try {
    const int order = j.at("order").get<int>();
    const int dim = j.at("dim").get<int>();
    const std::string form = j.value("form", std::string("monomial"));
    if (form != "monomial" && form != "entries") {
      throw Error(ErrorCode::ParseError, "form must be 'monomial' or 'entries'");
    }
    std::vector<std::pair<MultiIndex, double>> kv;
    for (const auto& term : j.at("terms")) {
      const auto raw = term.at("idx").get<std::vector<int>>();
      if (static_cast<int>(raw.size()) != order) {
        throw Error(ErrorCode::OrderMismatch, "term index length differs from order");
      }
      if (!std::is_sorted(raw.begin(), raw.end())) {
        throw Error(ErrorCode::ParseError, "term index is not in canonical (sorted) order");
      }
      kv.emplace_back(MultiIndex::canonicalize(raw, dim), parse_real(term.at("val")));
    }
    return form == "monomial" ? SymmetricTensor::from_monomials(order, dim, std::move(kv))
                              : SymmetricTensor::from_entries(order, dim, std::move(kv));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

json tensor_to_json(const SymmetricTensor& t, TensorForm form) {
  json terms = json::array();
  for (const auto& term : t.terms()) {
    auto idx = term.index.indices();
    const double v = form == TensorForm::Monomial ? term.coeff : term.coeff / term.index.multinomial();
    terms.push_back({{"idx", std::vector<int>(idx.begin(), idx.end())}, {"val", v}});
  }
  return {{"order", t.order()},
          {"dim", t.dim()},
          {"form", form == TensorForm::Monomial ? "monomial" : "entries"},
          {"terms", std::move(terms)}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << j.dump(2) << '\n';
}

SymmetricTensor read_tensor_file(const std::string& path) {
  return tensor_from_json(read_json_file(path));
}

void write_tensor_file(const std::string& path, const SymmetricTensor& t, TensorForm form) {
  write_json_file(path, tensor_to_json(t, form));
}

std::string tensor_digest(const SymmetricTensor& t) {
  const std::string s = tensor_to_json(t).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wtensor
