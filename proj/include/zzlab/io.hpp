#pragma once

// JSON records and CSV emission. Doubles are written with std::to_chars
// (shortest round-trip form, '.' decimal, locale independent).

#include <array>
#include <charconv>
#include <complex>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "family.hpp"
#include "lfun.hpp"

namespace zzlab {

using Json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0) return "0";  // folds -0
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

/// Finite doubles as numbers; nan/inf become strings so the document stays valid JSON.
inline Json json_double(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

// ---------------------------------------------------------------------------
// Members.

inline Json member_to_json(const FamilySpec& S, const FamilyMember& m) {
  Json j;
  j["q"] = S.q();
  j["group"] = S.group.factors();
  Json ram = Json::array();
  for (const auto& r : m.ram_finite()) ram.push_back(Json::array({r.prime.coeffs(), r.g}));
  j["ram"] = std::move(ram);
  j["g_inf"] = m.g_inf();
  j["h_inf"] = m.h_inf();
  return j;
}

/// Parses a member record and checks it against S (same q and group, valid data).
inline FamilyMember member_from_json(const FamilySpec& S, const Json& j) {
  try {
    if (j.at("q").get<std::uint32_t>() != S.q() || j.at("group").get<std::vector<std::uint32_t>>() != S.group.factors())
      throw DomainError("member record belongs to a different family");
    std::vector<RamifiedPlace> ram;
    for (const auto& r : j.at("ram"))
      ram.push_back({MonicPoly(r.at(0).get<Poly>()), r.at(1).get<GroupElem>()});
    FamilyMember m(std::move(ram), j.at("g_inf").get<GroupElem>(), j.at("h_inf").get<GroupElem>());
    if (!validate_member(S, m)) throw DomainError("member record violates reciprocity: " + m.to_string());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed member record: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// L data.

inline Json cyclotomic_to_json(const CyclotomicInt& c) {
  Json a = Json::array();
  for (const auto& v : c.coords()) a.push_back(v.str());
  return a;
}

inline Json complex_to_json(std::complex<double> z) { return Json::array({json_double(z.real()), json_double(z.imag())}); }

inline Json lpoly_to_json(const LPolynomial& L) {
  Json j;
  j["rho"] = L.rho.exponents();
  j["conductor"] = L.conductor;
  j["degree"] = L.degree();
  j["cyclotomic_order"] = L.coeffs.empty() ? 1u : L.coeffs[0].modulus();
  Json exact = Json::array(), render = Json::array();
  for (const auto& c : L.coeffs) {
    exact.push_back(cyclotomic_to_json(c));
    render.push_back(complex_to_json(c.render()));
  }
  j["coeffs"] = std::move(exact);
  j["coeffs_complex"] = std::move(render);
  return j;
}

inline Json angles_to_json(const AngleSet& A) {
  Json t = Json::array();
  for (double th : A.theta) t.push_back(json_double(th));
  return Json{{"theta", std::move(t)}, {"rh_residual", json_double(A.rh_residual)}};
}

// ---------------------------------------------------------------------------
// Files.

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ResourceError("cannot open " + path + " for writing");
  f << text;
  if (!f) throw ResourceError("write to " + path + " failed");
}

inline void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw ConsistencyError("csv row width does not match the header");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& header() const noexcept { return header_; }
  std::size_t size() const noexcept { return rows_.size(); }

  std::string str() const {
    std::string s;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + quote(r[i]);
      s += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return s;
  }

 private:
  static std::string quote(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string q = "\"";
    for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace zzlab
