#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "idmps/mps.hpp"

// JSON file formats. Complex numbers are [re, im] pairs; doubles are written
// in their shortest round-trip representation.

namespace idmps::io {

using json = nlohmann::json;

inline constexpr int format_version = 1;

namespace detail {

inline json complex_list(std::span<const cplx> data) {
  json out = json::array();
  for (const auto& z : data) out.push_back(json::array({z.real(), z.imag()}));
  return out;
}

inline std::vector<cplx> parse_complex_list(const json& j) {
  if (!j.is_array()) throw error(errc::parse_error, "data must be a list of [re, im] pairs");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const auto& z : j) {
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
      throw error(errc::parse_error, "complex entries must be [re, im] number pairs");
    out.emplace_back(z[0].get<double>(), z[1].get<double>());
  }
  return out;
}

inline std::size_t parse_dim(const json& j, const char* what) {
  if (!j.is_number_unsigned()) throw error(errc::parse_error, std::string(what) + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

inline void check_version(const json& j) {
  if (!j.is_object()) throw error(errc::parse_error, "top level must be an object");
  if (!j.contains("version") || j["version"] != format_version)
    throw error(errc::parse_error, "unsupported or missing format version");
}

}  // namespace detail

/// "left", "right", "mixed:<c>", "vidal" or "unknown".
inline std::pair<Form, std::size_t> parse_form(const std::string& tag) {
  if (tag == "left") return {Form::left, 0};
  if (tag == "right") return {Form::right, 0};
  if (tag == "vidal") return {Form::vidal, 0};
  if (tag == "unknown") return {Form::unknown, 0};
  if (tag.rfind("mixed:", 0) == 0) {
    const auto num = tag.substr(6);
    if (!num.empty() && num.find_first_not_of("0123456789") == std::string::npos) return {Form::mixed, std::stoul(num)};
  }
  throw error(errc::parse_error, "unknown form tag '" + tag + "'");
}

inline json tensor_to_json(const DenseTensor& t) {
  return {{"version", format_version}, {"shape", t.shape()}, {"data", detail::complex_list(t.data())}};
}

inline DenseTensor tensor_from_json(const json& j) {
  detail::check_version(j);
  if (!j.contains("shape") || !j["shape"].is_array()) throw error(errc::parse_error, "missing shape");
  Shape shape;
  for (const auto& d : j["shape"]) shape.push_back(detail::parse_dim(d, "shape entry"));
  if (!j.contains("data")) throw error(errc::parse_error, "missing data");
  auto data = detail::parse_complex_list(j["data"]);
  return DenseTensor(std::move(shape), std::move(data));
}

inline json mps_to_json(const MatrixProductState& m) {
  json sites = json::array();
  for (const auto& s : m.sites)
    sites.push_back({{"phys_dim", s.phys_dim()},
                     {"left_dim", s.left_dim()},
                     {"right_dim", s.right_dim()},
                     {"data", detail::complex_list(s.data())}});
  json out = {{"version", format_version}, {"form", to_string(m.form, m.center)}, {"sites", sites}};
  if (!m.bonds.empty()) {
    json bonds = json::array();
    for (const auto& b : m.bonds) bonds.push_back(b.values);
    out["bonds"] = bonds;
  }
  return out;
}

inline MatrixProductState mps_from_json(const json& j) {
  detail::check_version(j);
  MatrixProductState m;
  if (!j.contains("form") || !j["form"].is_string()) throw error(errc::parse_error, "missing form tag");
  std::tie(m.form, m.center) = parse_form(j["form"].get<std::string>());
  if (!j.contains("sites") || !j["sites"].is_array()) throw error(errc::parse_error, "missing sites");
  for (const auto& s : j["sites"]) {
    if (!s.is_object() || !s.contains("phys_dim") || !s.contains("left_dim") || !s.contains("right_dim") ||
        !s.contains("data"))
      throw error(errc::parse_error, "site needs phys_dim, left_dim, right_dim and data");
    m.sites.emplace_back(detail::parse_dim(s["phys_dim"], "phys_dim"), detail::parse_dim(s["left_dim"], "left_dim"),
                         detail::parse_dim(s["right_dim"], "right_dim"), detail::parse_complex_list(s["data"]));
  }
  if (j.contains("bonds") && !j["bonds"].is_null()) {
    if (!j["bonds"].is_array()) throw error(errc::parse_error, "bonds must be a list of lists");
    for (const auto& b : j["bonds"]) {
      if (!b.is_array()) throw error(errc::parse_error, "bonds must be a list of lists");
      BondSpectrum spec;
      for (const auto& v : b) {
        if (!v.is_number()) throw error(errc::parse_error, "bond weights must be numbers");
        spec.values.push_back(v.get<double>());
      }
      m.bonds.push_back(std::move(spec));
    }
  }
  m.check_chain();
  return m;
}

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::parse_error, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw error(errc::parse_error, path + ": " + e.what());
  }
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw error(errc::parse_error, "cannot write " + path);
  out << j.dump() << '\n';
}

inline DenseTensor read_tensor(const std::string& path) { return tensor_from_json(read_json(path)); }
inline void write_tensor(const std::string& path, const DenseTensor& t) { write_json(path, tensor_to_json(t)); }
inline MatrixProductState read_mps(const std::string& path) { return mps_from_json(read_json(path)); }
inline void write_mps(const std::string& path, const MatrixProductState& m) { write_json(path, mps_to_json(m)); }

}  // namespace idmps::io
