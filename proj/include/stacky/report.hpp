#pragma once

#include <json.hpp>

#include <sstream>
#include <string>

#include "stacky/verify.hpp"

namespace stacky {

// Reports use insertion-ordered JSON so identical jobs serialize to identical
// bytes.  Rationals print as canonical fraction strings, group elements as
// integer coordinate arrays.
using Json = nlohmann::ordered_json;

inline Json json_int(const Int& x) {
  if (x <= Int(9007199254740992LL) && x >= Int(-9007199254740992LL))
    return Json(static_cast<std::int64_t>(x));
  std::ostringstream os;
  os << x;
  return Json(os.str());
}

inline std::string rat_str(const Rat& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

inline Json json_vec(const std::vector<Int>& v) {
  Json out = Json::array();
  for (const Int& x : v) out.push_back(json_int(x));
  return out;
}

inline Json json_group_element(const GroupElement& v) { return json_vec(v.v); }

inline Json json_matrix(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(json_int(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Columns of a sublattice basis as coordinate arrays.
inline Json json_lattice_basis(const Sublattice& s) {
  Json out = Json::array();
  for (std::size_t j = 0; j < s.rank(); ++j) out.push_back(json_group_element(s.basis_vector(j)));
  return out;
}

inline Json json_group(const FgAbelianGroup& g) {
  Json out;
  out["generators"] = g.n_generators();
  out["rank"] = g.rank();
  Json tors = Json::array();
  for (const Int& d : g.torsion_factors()) tors.push_back(json_int(d));
  out["torsion"] = std::move(tors);
  return out;
}

inline Json json_poly(const Poly& f, const std::vector<std::string>& names) {
  return Json(f.str(names));
}

inline Json json_poly_terms(const Poly& f) {
  Json terms = Json::array();
  for (const auto& [m, c] : f.terms()) {
    Json t;
    t["coeff"] = c.is_rational() ? rat_str(c.rat()) : std::to_string(c.residue());
    Json mono = Json::array();
    for (int e : m) mono.push_back(e);
    t["monomial"] = std::move(mono);
    terms.push_back(std::move(t));
  }
  return terms;
}

inline Json json_mass_report(const MassReport& r) {
  Json out;
  out["q"] = r.q;
  out["stack_mass"] = rat_str(r.stack_mass);
  out["refined_mass"] = rat_str(r.refined_mass);
  out["stable_point_count"] = json_int(r.stable_point_count);
  out["gauge_order"] = json_int(r.gauge_order);
  out["match"] = r.match;
  Json prof;
  for (const auto& [order, count] : r.stabilizer_profile) {
    std::ostringstream key;
    key << order;
    prof[key.str()] = json_int(count);
  }
  out["stabilizer_profile"] = std::move(prof);
  return out;
}

}  // namespace stacky
