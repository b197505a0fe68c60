#pragma once

// JSON instance files:
//   { "name": "...", "A": [[2,3]], "b": [5], "c": [1, "1/2"],
//     "box": { "lower": [0,0], "upper": [3,3] } }
// A and b hold integers (JSON integers or decimal strings for large values);
// c holds integers or "p/q" strings. Floats are rejected everywhere.

#include "igap/integer_opt.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace igap {

using Json = nlohmann::ordered_json;

struct InstanceFile {
  std::optional<std::string> name;
  Instance instance;
  std::optional<EnumerationBox> box;

  bool operator==(const InstanceFile& o) const {
    auto sameBox = [](const std::optional<EnumerationBox>& x, const std::optional<EnumerationBox>& y) {
      if (x.has_value() != y.has_value()) return false;
      return !x || (x->lower == y->lower && x->upper == y->upper);
    };
    return name == o.name && instance.A == o.instance.A && instance.b == o.instance.b &&
           instance.c == o.instance.c && sameBox(box, o.box);
  }
};

namespace detail {

[[noreturn]] inline void fieldError(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::Parse, "field '" + field + "': " + what);
}

inline Integer integerField(const Json& j, const std::string& field) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Integer(std::to_string(j.get<std::uint64_t>()))
                                  : Integer(std::to_string(j.get<std::int64_t>()));
  }
  if (j.is_number_float()) fieldError(field, "floating-point value " + j.dump() + " is not allowed");
  if (j.is_string()) {
    try {
      return parseInteger(j.get<std::string>());
    } catch (const Error&) {
      fieldError(field, "'" + j.get<std::string>() + "' is not an integer");
    }
  }
  fieldError(field, "expected an integer, got " + std::string(j.type_name()));
}

inline Rational rationalField(const Json& j, const std::string& field) {
  if (j.is_string()) {
    try {
      return parseRational(j.get<std::string>());
    } catch (const Error&) {
      fieldError(field, "'" + j.get<std::string>() + "' is not a rational p/q");
    }
  }
  if (j.is_number_float())
    fieldError(field, "floating-point value " + j.dump() + " is not allowed; write \"p/q\"");
  return Rational(integerField(j, field));
}

template <class T, class F>
std::vector<T> vectorField(const Json& j, const std::string& field, F element) {
  if (!j.is_array()) fieldError(field, "expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(element(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

inline Json integerJson(const Integer& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

inline Json rationalJson(const Rational& v) {
  if (v.get_den() == 1) return integerJson(v.get_num());
  return v.get_str();
}

}  // namespace detail

inline Json toJson(const IntegerVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(detail::integerJson(x));
  return out;
}

/// Rational vectors always serialise as strings so reports read uniformly.
inline Json toJson(const RationalVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

inline InstanceFile parseInstanceJson(const Json& j) {
  using detail::fieldError;
  if (!j.is_object()) throw Error(ErrorKind::Parse, "instance must be a JSON object");
  for (const char* key : {"A", "b", "c"})
    if (!j.contains(key)) fieldError(key, "missing");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "A" && it.key() != "b" && it.key() != "c" && it.key() != "name" && it.key() != "box")
      fieldError(it.key(), "unknown field");

  InstanceFile file;
  if (j.contains("name")) {
    if (!j["name"].is_string()) fieldError("name", "expected a string");
    file.name = j["name"].get<std::string>();
  }
  const Json& ja = j["A"];
  if (!ja.is_array() || ja.empty()) fieldError("A", "expected a non-empty array of rows");
  std::vector<IntegerVector> rows;
  for (std::size_t i = 0; i < ja.size(); ++i) {
    const std::string f = "A[" + std::to_string(i) + "]";
    rows.push_back(detail::vectorField<Integer>(ja[i], f, detail::integerField));
    if (rows.back().empty()) fieldError(f, "empty row");
    if (rows.back().size() != rows.front().size())
      fieldError(f, "has " + std::to_string(rows.back().size()) + " entries, expected " +
                        std::to_string(rows.front().size()));
  }
  const std::size_t m = rows.size(), n = rows.front().size();
  IntegerVector b = detail::vectorField<Integer>(j["b"], "b", detail::integerField);
  if (b.size() != m)
    fieldError("b", "has " + std::to_string(b.size()) + " entries but A has " + std::to_string(m) + " rows");
  RationalVector c = detail::vectorField<Rational>(j["c"], "c", detail::rationalField);
  if (c.size() != n)
    fieldError("c", "has " + std::to_string(c.size()) + " entries but A has " + std::to_string(n) + " columns");

  if (j.contains("box")) {
    const Json& jb = j["box"];
    if (!jb.is_object() || !jb.contains("lower") || !jb.contains("upper"))
      fieldError("box", "expected {\"lower\": [...], \"upper\": [...]}");
    EnumerationBox box{detail::vectorField<Integer>(jb["lower"], "box.lower", detail::integerField),
                       detail::vectorField<Integer>(jb["upper"], "box.upper", detail::integerField)};
    if (box.lower.size() != n) fieldError("box.lower", "expected " + std::to_string(n) + " entries");
    if (box.upper.size() != n) fieldError("box.upper", "expected " + std::to_string(n) + " entries");
    file.box = std::move(box);
  }
  file.instance = Instance::make(IntegerMatrix::fromRows(rows, n), std::move(b), std::move(c));
  return file;
}

inline InstanceFile parseInstanceText(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
  }
  return parseInstanceJson(j);
}

inline InstanceFile readInstanceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parseInstanceText(ss.str());
}

inline Json toJson(const InstanceFile& file) {
  Json j = Json::object();
  if (file.name) j["name"] = *file.name;
  Json a = Json::array();
  for (std::size_t i = 0; i < file.instance.rows(); ++i) a.push_back(toJson(file.instance.A.rowVector(i)));
  j["A"] = std::move(a);
  j["b"] = toJson(file.instance.b);
  Json c = Json::array();
  for (const auto& x : file.instance.c) c.push_back(detail::rationalJson(x));
  j["c"] = std::move(c);
  if (file.box) j["box"] = Json{{"lower", toJson(file.box->lower)}, {"upper", toJson(file.box->upper)}};
  return j;
}

}  // namespace igap
