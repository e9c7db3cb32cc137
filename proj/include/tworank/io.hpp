#pragma once

// JSON encodings of the domain types. Loaders check every invariant of the
// target type and report all failing fields at once.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "tworank/bounds.hpp"
#include "tworank/error.hpp"
#include "tworank/forms.hpp"
#include "tworank/gf2.hpp"
#include "tworank/polyalg.hpp"
#include "tworank/repaction.hpp"

namespace tworank::io {

using json = nlohmann::json;

/// Input file is not syntactically valid JSON.
class MalformedInput : public Error
{
public:
  using Error::Error;
};

inline json read_json_file(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open input file: " + path, {path});
  try {
    return json::parse(in);
  } catch (json::parse_error const &e) {
    throw MalformedInput(path + ": " + e.what());
  }
}

namespace detail {

class Issues
{
public:
  void add(std::string field, std::string const &msg) { fields_.push_back(field + ": " + msg); }
  bool empty() const { return fields_.empty(); }

  void raise_if_any(std::string const &what) const
  {
    if (fields_.empty())
      return;
    std::string msg = what;
    for (auto const &f : fields_)
      msg += "; " + f;
    throw ValidationError(msg, fields_);
  }

private:
  std::vector<std::string> fields_;
};

inline bool get_count(json const &j, char const *key, std::size_t &out, Issues &issues, std::string const &path = "")
{
  auto const field = path + key;
  if (!j.is_object() || !j.contains(key)) {
    issues.add(field, "missing");
    return false;
  }
  auto const &v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    issues.add(field, "must be a nonnegative integer");
    return false;
  }
  out = v.get<std::size_t>();
  return true;
}

inline bool is_bit_string(json const &j, std::size_t len)
{
  if (!j.is_string())
    return false;
  auto const &s = j.get_ref<std::string const &>();
  return s.size() == len && s.find_first_not_of("01") == std::string::npos;
}

} // namespace detail

// ---------------------------------------------------------------------------
// BitMatrix

inline json to_json(BitMatrix const &m)
{
  json rows = json::array();
  for (auto const &r : m.row_data())
    rows.push_back(r.to_string());
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

inline BitMatrix bitmatrix_from_json(json const &j)
{
  detail::Issues issues;
  std::size_t rows = 0, cols = 0;
  bool ok = detail::get_count(j, "rows", rows, issues) & detail::get_count(j, "cols", cols, issues);
  if (!j.is_object() || !j.contains("data") || !j["data"].is_array()) {
    issues.add("data", "missing or not an array");
    ok = false;
  }
  if (ok) {
    auto const &data = j["data"];
    if (data.size() != rows)
      issues.add("data", "row count differs from rows");
    for (std::size_t i = 0; i < data.size(); ++i)
      if (!detail::is_bit_string(data[i], cols))
        issues.add("data[" + std::to_string(i) + "]", "must be a 0/1 string of length cols");
  }
  issues.raise_if_any("invalid BitMatrix");
  return BitMatrix::from_strings(j["data"].get<std::vector<std::string>>(), cols);
}

// ---------------------------------------------------------------------------
// FormFamily

inline json to_json(FormFamily const &fam)
{
  json forms = json::array();
  for (auto const &f : fam.forms()) {
    json rows = json::array();
    for (auto const &r : f.gram().row_data())
      rows.push_back(r.to_string());
    forms.push_back(rows);
  }
  return {{"n", fam.n()}, {"t", fam.t()}, {"forms", forms}};
}

inline FormFamily family_from_json(json const &j)
{
  detail::Issues issues;
  std::size_t n = 0, t = 0;
  bool ok = detail::get_count(j, "n", n, issues) & detail::get_count(j, "t", t, issues);
  if (ok && n > 64) {
    issues.add("n", "must be at most 64");
    ok = false;
  }
  if (!j.is_object() || !j.contains("forms") || !j["forms"].is_array()) {
    issues.add("forms", "missing or not an array");
    ok = false;
  }
  if (ok) {
    auto const &forms = j["forms"];
    if (forms.size() != t)
      issues.add("forms", "length differs from t");
    for (std::size_t s = 0; s < forms.size(); ++s) {
      auto const base = "forms[" + std::to_string(s) + "]";
      auto const &rows = forms[s];
      if (!rows.is_array() || rows.size() != n) {
        issues.add(base, "must be an array of n row strings");
        continue;
      }
      bool rows_ok = true;
      for (std::size_t i = 0; i < n; ++i)
        if (!detail::is_bit_string(rows[i], n)) {
          issues.add(base + "[" + std::to_string(i) + "]", "must be a 0/1 string of length n");
          rows_ok = false;
        }
      if (!rows_ok)
        continue;
      for (std::size_t i = 0; i < n; ++i) {
        auto const &ri = rows[i].get_ref<std::string const &>();
        if (ri[i] != '0')
          issues.add(base + "[" + std::to_string(i) + "][" + std::to_string(i) + "]", "diagonal must be zero");
        for (std::size_t k = 0; k < i; ++k)
          if (ri[k] != rows[k].get_ref<std::string const &>()[i])
            issues.add(base + "[" + std::to_string(i) + "][" + std::to_string(k) + "]",
                       "gram matrix must be symmetric");
      }
    }
  }
  issues.raise_if_any("invalid FormFamily");

  std::vector<AlternatingForm> forms;
  for (auto const &rows : j["forms"])
    forms.emplace_back(BitMatrix::from_strings(rows.get<std::vector<std::string>>(), n));
  return FormFamily(n, std::move(forms));
}

// ---------------------------------------------------------------------------
// Cayley tables

inline json table_to_json(GroupOracle const &G)
{
  json rows = json::array();
  for (ElementId g = 0; g < G.order(); ++g) {
    json row = json::array();
    for (ElementId h = 0; h < G.order(); ++h)
      row.push_back(G.mul(g, h));
    rows.push_back(row);
  }
  return {{"order", G.order()}, {"mul", rows}};
}

inline GroupOracle table_from_json(json const &j)
{
  detail::Issues issues;
  std::size_t order = 0;
  bool ok = detail::get_count(j, "order", order, issues);
  if (ok && (order == 0 || order > kMaxOracleOrder)) {
    issues.add("order", "must be between 1 and 65536");
    ok = false;
  }
  if (!j.is_object() || !j.contains("mul") || !j["mul"].is_array()) {
    issues.add("mul", "missing or not an array");
    ok = false;
  }
  std::vector<ElementId> table;
  if (ok) {
    auto const &mul = j["mul"];
    if (mul.size() != order)
      issues.add("mul", "row count differs from order");
    for (std::size_t g = 0; g < mul.size(); ++g) {
      auto const field = "mul[" + std::to_string(g) + "]";
      if (!mul[g].is_array() || mul[g].size() != order) {
        issues.add(field, "must be an array of order ids");
        continue;
      }
      for (std::size_t h = 0; h < order; ++h) {
        auto const &x = mul[g][h];
        if (!x.is_number_integer() || x.get<long long>() < 0 || x.get<long long>() >= static_cast<long long>(order))
          issues.add(field + "[" + std::to_string(h) + "]", "must be an element id below order");
        else
          table.push_back(x.get<ElementId>());
      }
    }
  }
  issues.raise_if_any("invalid Cayley table");
  return GroupOracle::from_table(order, std::move(table));
}

// ---------------------------------------------------------------------------
// Polynomials

inline json to_json(GradedPoly const &p)
{
  json monos = json::array();
  for (auto const &e : p.monomials()) {
    json row = json::array();
    for (std::size_t i = 0; i < p.nvars(); ++i)
      row.push_back(e[i]);
    monos.push_back(row);
  }
  return {{"nvars", p.nvars()}, {"degree", p.degree()}, {"monomials", monos}};
}

namespace detail {

inline GradedPoly poly_from_json(json const &j, Issues &issues, std::string const &path)
{
  std::size_t nvars = 0;
  if (!get_count(j, "nvars", nvars, issues, path))
    return {};
  if (nvars > kMaxPolyVars) {
    issues.add(path + "nvars", "must be at most 16");
    return {};
  }
  if (!j.contains("monomials") || !j["monomials"].is_array()) {
    issues.add(path + "monomials", "missing or not an array");
    return {};
  }
  std::vector<Exponents> monos;
  std::optional<std::size_t> degree;
  if (j.contains("degree")) {
    std::size_t d = 0;
    if (get_count(j, "degree", d, issues, path))
      degree = d;
  }
  auto const &arr = j["monomials"];
  for (std::size_t k = 0; k < arr.size(); ++k) {
    auto const field = path + "monomials[" + std::to_string(k) + "]";
    if (!arr[k].is_array() || arr[k].size() != nvars) {
      issues.add(field, "must be an exponent array of length nvars");
      continue;
    }
    Exponents e{};
    std::size_t deg = 0;
    bool good = true;
    for (std::size_t i = 0; i < nvars; ++i) {
      auto const &x = arr[k][i];
      if (!x.is_number_integer() || x.get<long long>() < 0 || x.get<long long>() > 0xffff) {
        issues.add(field + "[" + std::to_string(i) + "]", "must be a nonnegative exponent");
        good = false;
        continue;
      }
      e[i] = x.get<std::uint16_t>();
      deg += e[i];
    }
    if (!good)
      continue;
    if (!degree)
      degree = deg;
    else if (*degree != deg) {
      issues.add(field, "monomial degree differs (polynomial must be homogeneous)");
      continue;
    }
    monos.push_back(e);
  }
  if (!issues.empty())
    return {};
  GradedPoly p(nvars, degree.value_or(0));
  for (auto const &e : monos)
    p.toggle(e);
  return p;
}

} // namespace detail

inline GradedPoly poly_from_json(json const &j)
{
  detail::Issues issues;
  auto p = detail::poly_from_json(j, issues, "");
  issues.raise_if_any("invalid GradedPoly");
  return p;
}

inline json to_json(IdealGens const &I)
{
  json gens = json::array();
  for (auto const &g : I.gens)
    gens.push_back(to_json(g));
  return {{"nvars", I.nvars}, {"gens", gens}};
}

inline IdealGens ideal_from_json(json const &j)
{
  detail::Issues issues;
  IdealGens I;
  bool ok = detail::get_count(j, "nvars", I.nvars, issues);
  if (!j.is_object() || !j.contains("gens") || !j["gens"].is_array()) {
    issues.add("gens", "missing or not an array");
    ok = false;
  }
  if (ok) {
    auto const &gens = j["gens"];
    for (std::size_t k = 0; k < gens.size(); ++k) {
      auto const path = "gens[" + std::to_string(k) + "].";
      auto p = detail::poly_from_json(gens[k], issues, path);
      if (issues.empty() && p.nvars() != I.nvars)
        issues.add(path + "nvars", "differs from the ideal's nvars");
      I.gens.push_back(std::move(p));
    }
  }
  issues.raise_if_any("invalid IdealGens");
  return I;
}

// ---------------------------------------------------------------------------
// Quadratic systems and linear actions

inline json to_json(QuadraticSystem const &sys)
{
  json polys = json::array();
  for (auto const &p : sys.polys) {
    json monos = json::array();
    for (auto const &m : p.monomials())
      monos.push_back(m);
    polys.push_back(monos);
  }
  return {{"v", sys.v}, {"polys", polys}};
}

inline QuadraticSystem quadratic_system_from_json(json const &j)
{
  detail::Issues issues;
  QuadraticSystem sys;
  bool ok = detail::get_count(j, "v", sys.v, issues);
  if (!j.is_object() || !j.contains("polys") || !j["polys"].is_array()) {
    issues.add("polys", "missing or not an array");
    ok = false;
  }
  if (ok) {
    auto const &polys = j["polys"];
    for (std::size_t k = 0; k < polys.size(); ++k) {
      auto const base = "polys[" + std::to_string(k) + "]";
      if (!polys[k].is_array()) {
        issues.add(base, "must be an array of monomials");
        continue;
      }
      QuadraticPoly p;
      for (std::size_t m = 0; m < polys[k].size(); ++m) {
        auto const &mono = polys[k][m];
        auto const field = base + "[" + std::to_string(m) + "]";
        bool good = mono.is_array() && mono.size() <= 2;
        if (good)
          for (auto const &x : mono)
            good = good && x.is_number_integer() && x.get<long long>() >= 0 &&
                   x.get<long long>() < static_cast<long long>(sys.v);
        if (!good) {
          issues.add(field, "must list at most two variable indices below v");
          continue;
        }
        p.toggle(mono.get<QuadMonomial>());
      }
      sys.polys.push_back(std::move(p));
    }
  }
  issues.raise_if_any("invalid QuadraticSystem");
  return sys;
}

inline LinearAction action_from_json(json const &j)
{
  detail::Issues issues;
  LinearAction act;
  bool ok = detail::get_count(j, "nvars", act.nvars, issues);
  if (!j.is_object() || !j.contains("generators") || !j["generators"].is_array()) {
    issues.add("generators", "missing or not an array");
    ok = false;
  }
  if (ok) {
    auto const &gens = j["generators"];
    for (std::size_t k = 0; k < gens.size(); ++k) {
      auto const base = "generators[" + std::to_string(k) + "]";
      if (!gens[k].is_array() || gens[k].size() != act.nvars) {
        issues.add(base, "must be an array of nvars row strings");
        continue;
      }
      bool good = true;
      for (std::size_t i = 0; i < act.nvars; ++i)
        if (!detail::is_bit_string(gens[k][i], act.nvars)) {
          issues.add(base + "[" + std::to_string(i) + "]", "must be a 0/1 string of length nvars");
          good = false;
        }
      if (!good)
        continue;
      auto m = BitMatrix::from_strings(gens[k].get<std::vector<std::string>>(), act.nvars);
      if (rank(m) != act.nvars)
        issues.add(base, "must be invertible");
      act.generators.push_back(std::move(m));
    }
  }
  issues.raise_if_any("invalid LinearAction");
  return act;
}

inline json to_json(LinearAction const &act)
{
  json gens = json::array();
  for (auto const &g : act.generators) {
    json rows = json::array();
    for (auto const &r : g.row_data())
      rows.push_back(r.to_string());
    gens.push_back(rows);
  }
  return {{"nvars", act.nvars}, {"generators", gens}};
}

// ---------------------------------------------------------------------------
// Misc

inline std::string to_decimal(BigInt const &x) { return x.str(); }

inline json to_json(Subspace const &s)
{
  json basis = json::array();
  for (auto const &v : s.basis())
    basis.push_back(v.to_string());
  return {{"ambient_dim", s.ambient_dim()}, {"dim", s.dim()}, {"basis", basis}};
}

} // namespace tworank::io
