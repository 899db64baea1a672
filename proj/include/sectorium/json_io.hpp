#pragma once

// JSON readers and writers for group tables, irrep sets, cover specs and
// algebra elements. Complex numbers are [re, im] pairs. Readers throw
// MalformedInput naming the JSON pointer of the first offending field.

#include "sectorium/algebra.hpp"
#include "sectorium/cover.hpp"
#include "sectorium/error.hpp"
#include "sectorium/group.hpp"
#include "sectorium/rep.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

namespace sectorium::io {

using nlohmann::json;

namespace detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::MalformedInput, where + ": " + what);
}

inline const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where + "/" + key, "missing field");
  return *it;
}

inline std::size_t as_index(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

inline const json& as_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

}  // namespace detail

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) detail::fail(where, "expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline Matrix matrix_from_json(const json& j, std::size_t dim, const std::string& where) {
  detail::as_array(j, where);
  if (j.size() != dim) detail::fail(where, "expected " + std::to_string(dim) + " rows");
  Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r) {
    const std::string rw = where + "/" + std::to_string(r);
    detail::as_array(j[r], rw);
    if (j[r].size() != dim) detail::fail(rw, "expected " + std::to_string(dim) + " entries");
    for (std::size_t c = 0; c < dim; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c], rw + "/" + std::to_string(c));
  }
  return m;
}

inline json to_json(const GroupSpec& g) {
  return json{{"name", g.name},
              {"order", g.table.size()},
              {"elements", g.labels},
              {"identity", g.identity},
              {"table", g.table}};
}

inline GroupSpec group_spec_from_json(const json& j) {
  GroupSpec g;
  g.name = detail::as_string(detail::field(j, "name", ""), "/name");
  const std::size_t order = detail::as_index(detail::field(j, "order", ""), "/order");
  const auto& elems = detail::as_array(detail::field(j, "elements", ""), "/elements");
  for (std::size_t k = 0; k < elems.size(); ++k) g.labels.push_back(detail::as_string(elems[k], "/elements/" + std::to_string(k)));
  if (g.labels.size() != order) detail::fail("/elements", "has " + std::to_string(g.labels.size()) + " labels for order " + std::to_string(order));
  g.identity = detail::as_index(detail::field(j, "identity", ""), "/identity");
  const auto& table = detail::as_array(detail::field(j, "table", ""), "/table");
  if (table.size() != order) detail::fail("/table", "expected " + std::to_string(order) + " rows");
  for (std::size_t r = 0; r < table.size(); ++r) {
    const std::string rw = "/table/" + std::to_string(r);
    detail::as_array(table[r], rw);
    std::vector<Element> row;
    for (std::size_t c = 0; c < table[r].size(); ++c) row.push_back(detail::as_index(table[r][c], rw + "/" + std::to_string(c)));
    g.table.push_back(std::move(row));
  }
  return g;
}

inline json to_json(const std::string& group_name, const FiniteGroup& group, const std::vector<RawIrrep>& irreps) {
  json list = json::array();
  for (const auto& r : irreps) {
    json mats = json::object();
    for (Element g = 0; g < group.order(); ++g) mats[group.label(g)] = to_json(r.matrices[g]);
    list.push_back(json{{"label", r.label}, {"dim", r.dim}, {"matrices", std::move(mats)}});
  }
  return json{{"group", group_name}, {"irreps", std::move(list)}};
}

/// Matrices keyed by element label, reordered to the group's element indices.
inline std::vector<RawIrrep> irreps_from_json(const json& j, const FiniteGroup& group) {
  const auto gname = detail::as_string(detail::field(j, "group", ""), "/group");
  if (gname != group.name())
    throw Error(ErrorKind::GroupMismatch, "/group: irreps are for '" + gname + "', group is '" + group.name() + "'");
  const auto& list = detail::as_array(detail::field(j, "irreps", ""), "/irreps");
  std::vector<RawIrrep> out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string where = "/irreps/" + std::to_string(k);
    RawIrrep r;
    r.label = detail::as_string(detail::field(list[k], "label", where), where + "/label");
    r.dim = detail::as_index(detail::field(list[k], "dim", where), where + "/dim");
    if (r.dim == 0) detail::fail(where + "/dim", "must be positive");
    const auto& mats = detail::field(list[k], "matrices", where);
    if (!mats.is_object()) detail::fail(where + "/matrices", "expected an object keyed by element label");
    for (Element g = 0; g < group.order(); ++g) {
      const auto it = mats.find(group.label(g));
      if (it == mats.end()) detail::fail(where + "/matrices/" + group.label(g), "missing matrix");
      r.matrices.push_back(matrix_from_json(*it, r.dim, where + "/matrices/" + group.label(g)));
    }
    if (mats.size() != group.order()) detail::fail(where + "/matrices", "has entries for unknown elements");
    out.push_back(std::move(r));
  }
  return out;
}

struct CoverSpec {
  std::size_t base_size = 0;
  std::string group;
  std::vector<std::tuple<std::size_t, std::size_t, std::string>> edges;  // from, to, voltage label
};

inline CoverSpec cover_spec_from_json(const json& j) {
  CoverSpec c;
  c.base_size = detail::as_index(detail::field(j, "base_size", ""), "/base_size");
  c.group = detail::as_string(detail::field(j, "group", ""), "/group");
  if (j.contains("edges")) {
    const auto& edges = detail::as_array(j["edges"], "/edges");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const std::string where = "/edges/" + std::to_string(k);
      c.edges.emplace_back(detail::as_index(detail::field(edges[k], "from", where), where + "/from"),
                           detail::as_index(detail::field(edges[k], "to", where), where + "/to"),
                           detail::as_string(detail::field(edges[k], "voltage", where), where + "/voltage"));
    }
  }
  return c;
}

inline json to_json(const CoverSpec& c) {
  json edges = json::array();
  for (const auto& [from, to, v] : c.edges) edges.push_back(json{{"from", from}, {"to", to}, {"voltage", v}});
  return json{{"base_size", c.base_size}, {"group", c.group}, {"edges", std::move(edges)}};
}

inline DiscreteCover make_cover(const CoverSpec& spec, const FiniteGroup& group) {
  if (spec.group != group.name())
    throw Error(ErrorKind::GroupMismatch, "/group: cover is over '" + spec.group + "', group is '" + group.name() + "'");
  std::vector<CoverEdge> edges;
  for (std::size_t k = 0; k < spec.edges.size(); ++k) {
    const auto& [from, to, label] = spec.edges[k];
    const auto v = group.find(label);
    if (!v) detail::fail("/edges/" + std::to_string(k) + "/voltage", "unknown element '" + label + "'");
    edges.push_back({from, to, *v});
  }
  return DiscreteCover(spec.base_size, group, std::move(edges));
}

/// Either an array of n coefficients in element order or an object keyed by
/// element label (missing labels are zero); optionally wrapped as {"coeffs": ...}.
inline AlgebraElement element_from_json(const json& j, const FiniteGroup& group) {
  const json& body = (j.is_object() && j.contains("coeffs")) ? j["coeffs"] : j;
  const std::string base = (&body == &j) ? "" : "/coeffs";
  auto v = AlgebraElement::zero(group.order());
  if (body.is_array()) {
    if (body.size() != group.order())
      throw Error(ErrorKind::GroupMismatch, base + ": " + std::to_string(body.size()) + " coefficients for order " + std::to_string(group.order()));
    for (std::size_t k = 0; k < body.size(); ++k)
      v.coeffs(static_cast<Eigen::Index>(k)) = complex_from_json(body[k], base + "/" + std::to_string(k));
  } else if (body.is_object()) {
    for (const auto& [key, val] : body.items()) {
      const auto g = group.find(key);
      if (!g) detail::fail(base + "/" + key, "unknown element");
      v.coeffs(static_cast<Eigen::Index>(*g)) = complex_from_json(val, base + "/" + key);
    }
  } else {
    detail::fail(base, "expected an array or object of coefficients");
  }
  return v;
}

inline json to_json(const AlgebraElement& v, const FiniteGroup& group) {
  json out = json::object();
  for (Element g = 0; g < group.order(); ++g) out[group.label(g)] = to_json(v(g));
  return out;
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MalformedInput, path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedInput, path + ": " + e.what());
  }
}

}  // namespace sectorium::io
