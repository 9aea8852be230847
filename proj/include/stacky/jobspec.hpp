#pragma once

#include <cstdlib>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stacky/report.hpp"

namespace stacky {

// A job is one self-describing JSON document: an input (GL data or explicit
// Cox data), a command, and options.  Reports are deterministic byte-for-byte
// for a fixed document.
struct JobSpec {
  std::string command;
  std::string fixture;

  bool is_gl = false;
  GLData gl;

  // cox-kind input
  std::optional<CoxData> cox_input;
  std::vector<GroupElement> tilting_classes;

  // options
  std::vector<std::int64_t> qs;
  std::vector<Int> theta;
  long degree_bound = 6;
  std::optional<Int> budget;
  bool restricted = true;
  bool emit_cox = false;
  int workers = 1;
  std::optional<long> exponent_cap;
  std::vector<GroupElement> test_degrees;

  // stability-check payload
  std::optional<std::int64_t> rep_prime;
  std::vector<Rat> rep_m;
  std::vector<Rat> rep_g;
};

struct RunResult {
  Json report;
  int exit_code = 0;
};

namespace jobdetail {

[[noreturn]] inline void bad(const std::string& pointer, const std::string& what) {
  fail(errc::invalid_input, pointer + ": " + what);
}

inline Rat parse_rat(const Json& v, const std::string& ptr) {
  if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      auto slash = s.find('/');
      if (slash == std::string::npos) return Rat(Int(s));
      return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    } catch (...) {
      bad(ptr, "expected an integer or a \"p/q\" string");
    }
  }
  bad(ptr, "expected an integer or a \"p/q\" string");
}

inline Int parse_int(const Json& v, const std::string& ptr) {
  Rat r = parse_rat(v, ptr);
  if (denominator(r) != 1) bad(ptr, "expected an integer");
  return numerator(r);
}

inline std::int64_t parse_i64(const Json& v, const std::string& ptr, std::int64_t lo,
                              std::int64_t hi) {
  if (!v.is_number_integer()) bad(ptr, "expected an integer");
  std::int64_t x = v.get<std::int64_t>();
  if (x < lo || x > hi) bad(ptr, "out of documented range");
  return x;
}

inline const Json& field(const Json& obj, const char* key, const std::string& ptr) {
  if (!obj.is_object() || !obj.contains(key)) bad(ptr + "/" + key, "missing required field");
  return obj.at(key);
}

inline GroupElement parse_coords(const Json& v, std::size_t n, const std::string& ptr) {
  if (!v.is_array() || v.size() != n) bad(ptr, "expected a coordinate array of length " + std::to_string(n));
  GroupElement out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = parse_int(v[i], ptr + "/" + std::to_string(i));
  return out;
}

inline Poly parse_poly(const Json& v, std::size_t nvars, const std::string& ptr) {
  if (!v.is_array()) bad(ptr, "expected an array of terms");
  Poly f(nvars);
  for (std::size_t t = 0; t < v.size(); ++t) {
    const std::string tp = ptr + "/" + std::to_string(t);
    const Json& term = v[t];
    Rat c = parse_rat(field(term, "coeff", tp), tp + "/coeff");
    const Json& mono = field(term, "monomial", tp);
    if (!mono.is_array() || mono.size() != nvars) bad(tp + "/monomial", "wrong arity");
    Monomial m(nvars, 0);
    for (std::size_t i = 0; i < nvars; ++i)
      m[i] = static_cast<int>(parse_i64(mono[i], tp + "/monomial/" + std::to_string(i), 0, 64));
    f.add_term(m, FieldScalar::rational(c));
  }
  return f;
}

inline GLData parse_gl(const Json& in) {
  GLData g;
  g.d = static_cast<int>(parse_i64(field(in, "d", "/input"), "/input/d", 0, 6));
  const Json& weights = field(in, "weights", "/input");
  const Json& forms = field(in, "forms", "/input");
  if (!weights.is_array()) bad("/input/weights", "expected an array");
  if (!forms.is_array()) bad("/input/forms", "expected an array");
  if (weights.size() != forms.size()) bad("/input/weights", "weights and forms must pair up");
  if (forms.size() > 16) bad("/input/forms", "too many forms");
  for (std::size_t i = 0; i < weights.size(); ++i)
    g.weights.push_back(parse_i64(weights[i], "/input/weights/" + std::to_string(i), 1, 64));
  const std::size_t nv = static_cast<std::size_t>(g.d) + 1;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    const std::string fp = "/input/forms/" + std::to_string(i);
    const Json& cf = forms[i];
    if (!cf.is_array() || cf.size() != nv) bad(fp, "expected d+1 coefficients");
    Poly form(nv);
    for (std::size_t v = 0; v < nv; ++v) {
      Rat c = parse_rat(cf[v], fp + "/" + std::to_string(v));
      if (c != 0) form.add_term(monomial_var(nv, v), FieldScalar::rational(c));
    }
    g.forms.push_back(std::move(form));
  }
  return g;
}

inline void parse_cox(const Json& in, JobSpec& job) {
  const Json& grading = field(in, "grading", "/input");
  std::size_t gens = static_cast<std::size_t>(
      parse_i64(field(grading, "generators", "/input/grading"), "/input/grading/generators", 0, 32));
  const Json& grel = field(grading, "relations", "/input/grading");
  if (!grel.is_array()) bad("/input/grading/relations", "expected an array of relator columns");
  IntMatrix rel(gens, grel.size());
  for (std::size_t j = 0; j < grel.size(); ++j) {
    GroupElement col =
        parse_coords(grel[j], gens, "/input/grading/relations/" + std::to_string(j));
    for (std::size_t i = 0; i < gens; ++i) rel.at(i, j) = col[i];
  }
  FgAbelianGroup L(gens, rel);

  const Json& vars = field(in, "variables", "/input");
  if (!vars.is_array() || vars.empty() || vars.size() > 32)
    bad("/input/variables", "expected 1..32 variable names");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!vars[i].is_string()) bad("/input/variables/" + std::to_string(i), "expected a string");
    names.push_back(vars[i].get<std::string>());
  }
  const Json& degs = field(in, "degrees", "/input");
  if (!degs.is_array() || degs.size() != names.size())
    bad("/input/degrees", "expected one degree per variable");
  std::vector<GroupElement> degrees;
  for (std::size_t i = 0; i < degs.size(); ++i)
    degrees.push_back(parse_coords(degs[i], gens, "/input/degrees/" + std::to_string(i)));

  std::vector<Poly> relations;
  if (in.contains("relations")) {
    const Json& rels = in.at("relations");
    if (!rels.is_array()) bad("/input/relations", "expected an array");
    for (std::size_t r = 0; r < rels.size(); ++r)
      relations.push_back(parse_poly(rels[r], names.size(), "/input/relations/" + std::to_string(r)));
  }

  CoxData cox;
  cox.presentation = GradedPresentation(names, degrees, relations, L);
  cox.generator_classes = degrees;
  job.cox_input = std::move(cox);

  const Json& tilt = field(in, "tilting_classes", "/input");
  if (!tilt.is_array() || tilt.empty()) bad("/input/tilting_classes", "expected a nonempty array");
  for (std::size_t i = 0; i < tilt.size(); ++i)
    job.tilting_classes.push_back(
        parse_coords(tilt[i], gens, "/input/tilting_classes/" + std::to_string(i)));
}

}  // namespace jobdetail

inline JobSpec parse_jobspec(const Json& doc) {
  using namespace jobdetail;
  JobSpec job;
  if (!doc.is_object()) bad("", "job document must be an object");
  if (doc.contains("command")) {
    if (!doc.at("command").is_string()) bad("/command", "expected a string");
    job.command = doc.at("command").get<std::string>();
  }
  if (doc.contains("fixture")) {
    if (!doc.at("fixture").is_string()) bad("/fixture", "expected a string");
    job.fixture = doc.at("fixture").get<std::string>();
  }
  const Json& in = field(doc, "input", "");
  const Json& kind = field(in, "kind", "/input");
  if (!kind.is_string()) bad("/input/kind", "expected \"gl\" or \"cox\"");
  const std::string k = kind.get<std::string>();
  if (k == "gl") {
    job.is_gl = true;
    job.gl = parse_gl(in);
  } else if (k == "cox") {
    parse_cox(in, job);
  } else {
    bad("/input/kind", "expected \"gl\" or \"cox\"");
  }

  if (doc.contains("options")) {
    const Json& opt = doc.at("options");
    if (!opt.is_object()) bad("/options", "expected an object");
    if (opt.contains("q")) {
      const Json& qs = opt.at("q");
      if (!qs.is_array()) bad("/options/q", "expected an array of primes");
      for (std::size_t i = 0; i < qs.size(); ++i)
        job.qs.push_back(parse_i64(qs[i], "/options/q/" + std::to_string(i), 2, 997));
    }
    if (opt.contains("theta")) {
      const Json& th = opt.at("theta");
      if (!th.is_array()) bad("/options/theta", "expected an array of integers");
      for (std::size_t i = 0; i < th.size(); ++i)
        job.theta.push_back(parse_int(th[i], "/options/theta/" + std::to_string(i)));
    }
    if (opt.contains("degree_bound"))
      job.degree_bound = parse_i64(opt.at("degree_bound"), "/options/degree_bound", 0, 64);
    if (opt.contains("budget")) job.budget = parse_int(opt.at("budget"), "/options/budget");
    if (opt.contains("restricted")) {
      if (!opt.at("restricted").is_boolean()) bad("/options/restricted", "expected a boolean");
      job.restricted = opt.at("restricted").get<bool>();
    }
    if (opt.contains("emit_cox")) {
      if (!opt.at("emit_cox").is_boolean()) bad("/options/emit_cox", "expected a boolean");
      job.emit_cox = opt.at("emit_cox").get<bool>();
    }
    if (opt.contains("workers"))
      job.workers = static_cast<int>(parse_i64(opt.at("workers"), "/options/workers", 1, 64));
    if (opt.contains("exponent_cap"))
      job.exponent_cap = parse_i64(opt.at("exponent_cap"), "/options/exponent_cap", 0, 64);
    if (opt.contains("test_degrees")) {
      const Json& td = opt.at("test_degrees");
      if (!td.is_array()) bad("/options/test_degrees", "expected an array");
      std::size_t gens = job.is_gl ? 0 : job.cox_input->presentation.grading().n_generators();
      for (std::size_t i = 0; i < td.size(); ++i) {
        if (job.is_gl) {
          if (!td[i].is_array()) bad("/options/test_degrees/" + std::to_string(i), "expected coords");
          gens = td[i].size();
        }
        job.test_degrees.push_back(
            parse_coords(td[i], gens, "/options/test_degrees/" + std::to_string(i)));
      }
    }
  }

  if (doc.contains("rep")) {
    const Json& rep = doc.at("rep");
    job.rep_prime = parse_i64(field(rep, "prime", "/rep"), "/rep/prime", 0, 997);
    const Json& m = field(rep, "m", "/rep");
    if (!m.is_array()) bad("/rep/m", "expected an array");
    for (std::size_t i = 0; i < m.size(); ++i)
      job.rep_m.push_back(parse_rat(m[i], "/rep/m/" + std::to_string(i)));
    const Json& g = field(rep, "g", "/rep");
    if (!g.is_array()) bad("/rep/g", "expected an array");
    for (std::size_t i = 0; i < g.size(); ++i)
      job.rep_g.push_back(parse_rat(g[i], "/rep/g/" + std::to_string(i)));
  }
  return job;
}

namespace jobdetail {

// Orientation for printable free coordinates: positive on the effective cone.
inline Int cone_sign(const CoxData& cox) {
  if (cox.presentation.grading().rank() != 1 || cox.generator_classes.empty()) return 1;
  std::vector<Int> f = cox.presentation.grading().free_part(cox.generator_classes[0]);
  return f[0] < 0 ? Int(-1) : Int(1);
}

inline Json oriented_compact(const CoxData& cox, const GroupElement& v, const Int& sign) {
  const FgAbelianGroup& L = cox.presentation.grading();
  GroupElement k = L.compact_form(v);
  for (std::size_t i = 0; i < L.rank(); ++i) k[i] *= sign;
  return json_group_element(k);
}

inline Json emit_cox_doc(const CoxData& cox, const std::vector<GroupElement>& vertices) {
  const GradedPresentation& R = cox.presentation;
  Json out;
  out["kind"] = "cox";
  Json grading;
  grading["generators"] = R.grading().n_generators();
  Json rels = Json::array();
  const IntMatrix& rm = R.grading().relation_matrix();
  for (std::size_t j = 0; j < rm.cols(); ++j) rels.push_back(json_vec(rm.column(j)));
  grading["relations"] = std::move(rels);
  out["grading"] = std::move(grading);
  Json vars = Json::array();
  for (const auto& n : R.var_names()) vars.push_back(n);
  out["variables"] = std::move(vars);
  Json degs = Json::array();
  for (const auto& d : R.var_degrees()) degs.push_back(json_group_element(d));
  out["degrees"] = std::move(degs);
  Json relations = Json::array();
  for (const Poly& r : R.relations()) relations.push_back(json_poly_terms(r));
  out["relations"] = std::move(relations);
  Json tilt = Json::array();
  for (const auto& v : vertices) tilt.push_back(json_group_element(v));
  out["tilting_classes"] = std::move(tilt);
  return out;
}

// Default captures-cox test degrees: all vertex differences, all generator
// degrees, and (rank-1 gradings) every class of height 0..degree_bound.
inline std::vector<GroupElement> default_test_degrees(const CoxData& cox,
                                                      const std::vector<GroupElement>& vertices,
                                                      long degree_bound) {
  const FgAbelianGroup& L = cox.presentation.grading();
  std::set<GroupElement> canon_seen;
  std::vector<GroupElement> out;
  auto push = [&](const GroupElement& v) {
    GroupElement c = L.canonical_form(v);
    if (canon_seen.insert(c).second) out.push_back(v);
  };
  for (const auto& a : vertices)
    for (const auto& b : vertices) push(b - a);
  for (const auto& g : cox.generator_classes) push(g);
  if (L.rank() == 1) {
    // enumerate classes by oriented height and torsion coordinates
    Int sign = cone_sign(cox);
    const auto& factors = L.invariant_factors();
    std::size_t k = factors.size();
    // canonical coordinates: position i < k is Z/d_i, the last is free
    std::vector<long> tor_bounds;
    for (std::size_t i = 0; i < k; ++i)
      tor_bounds.push_back(static_cast<long>(factors[i]));
    std::vector<Int> coords(L.n_generators(), Int(0));
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == k) {
        for (long h = 0; h <= degree_bound; ++h) {
          coords[k] = sign * h;
          // map canonical coords back through U^{-1}: solve U v = coords
          // U is unimodular; use V of the Smith form? invert via solve.
          // canonical_form(v) = reduce(U v); we need any v with U v = coords.
          // Build v = U^{-1} coords by Gaussian elimination over Q.
          const IntMatrix& U = L.smith().U;
          std::vector<std::vector<Rat>> a(U.rows(), std::vector<Rat>(U.rows()));
          for (std::size_t r = 0; r < U.rows(); ++r)
            for (std::size_t c2 = 0; c2 < U.cols(); ++c2) a[r][c2] = Rat(U.at(r, c2));
          std::vector<Rat> b(U.rows());
          for (std::size_t r = 0; r < U.rows(); ++r) b[r] = Rat(coords[r]);
          std::vector<Rat> x = detail::solve_rational(a, b);
          GroupElement v(L.n_generators());
          for (std::size_t r = 0; r < x.size(); ++r) v[r] = numerator(x[r]);
          push(v);
        }
        return;
      }
      for (long t = 0; t < tor_bounds[i]; ++t) {
        coords[i] = t;
        rec(i + 1);
      }
      coords[i] = 0;
    };
    rec(0);
  }
  return out;
}

}  // namespace jobdetail

inline Int effective_budget(const JobSpec& job) {
  if (job.budget) return *job.budget;
  if (const char* env = std::getenv("STACKY_MODULI_BUDGET")) {
    try {
      return Int(std::string(env));
    } catch (...) {
      fail(errc::invalid_input, "STACKY_MODULI_BUDGET is not an integer");
    }
  }
  return Int(100000000);
}

inline RunResult run(const JobSpec& job) {
  using namespace jobdetail;
  Int budget = effective_budget(job);

  CoxData cox;
  std::vector<GroupElement> vertices;
  if (job.is_gl) {
    cox = build_cox_data(job.gl);
    vertices = tilting_interval(cox);
  } else {
    cox = *job.cox_input;
    const FgAbelianGroup& L = cox.presentation.grading();
    // the distinguished class 0 leads; keep the remaining input order
    std::size_t zero_at = job.tilting_classes.size();
    for (std::size_t i = 0; i < job.tilting_classes.size(); ++i)
      if (L.is_zero(job.tilting_classes[i])) {
        zero_at = i;
        break;
      }
    if (zero_at == job.tilting_classes.size())
      fail(errc::invalid_input, "/input/tilting_classes: the class 0 must be present");
    vertices.push_back(job.tilting_classes[zero_at]);
    for (std::size_t i = 0; i < job.tilting_classes.size(); ++i)
      if (i != zero_at) vertices.push_back(job.tilting_classes[i]);
  }

  Pipeline pipe = build_pipeline(cox, vertices, 100000, job.exponent_cap);
  const Quiver& q = pipe.quiver();
  Int sign = cone_sign(cox);

  StabilityParam theta;
  if (job.theta.empty()) {
    theta.theta.assign(q.n_vertices() - 1, Int(1));
  } else {
    if (job.theta.size() != q.n_vertices() - 1)
      fail(errc::invalid_input, "/options/theta: expected one entry per vertex != 0");
    theta.theta = job.theta;
  }

  Json doc;
  doc["tool"] = "stacky-moduli";
  doc["command"] = job.command;
  if (!job.fixture.empty()) doc["fixture"] = job.fixture;
  if (job.exponent_cap) doc["exponent_cap"] = *job.exponent_cap;
  Json& result = doc["result"] = Json::object();
  int exit_code = 0;

  auto arrows_json = [&]() {
    Json arr = Json::array();
    for (std::size_t a = 0; a < q.n_arrows(); ++a) {
      Json one;
      one["id"] = a;
      one["tail"] = q.arrows[a].tail;
      one["head"] = q.arrows[a].head;
      one["label"] = Poly::monomial_str(q.arrows[a].label, cox.presentation.var_names());
      arr.push_back(std::move(one));
    }
    return arr;
  };
  auto vertices_json = [&]() {
    Json vs = Json::array();
    for (const auto& v : vertices) vs.push_back(oriented_compact(cox, v, sign));
    return vs;
  };
  auto s_relations_json = [&]() {
    Json rels = Json::array();
    for (const Poly& r : pipe.s.pres.relations())
      rels.push_back(r.str(pipe.s.pres.var_names()));
    return rels;
  };
  auto de_ideal_json = [&]() {
    Json gens = Json::array();
    for (const Poly& g : pipe.de_ideal) gens.push_back(g.str(pipe.s.pres.var_names()));
    return gens;
  };
  auto lambda_r_json = [&]() {
    Json lr;
    lr["rank"] = pipe.lattices.lambda_r.rank();
    lr["basis"] = json_lattice_basis(pipe.lattices.lambda_r);
    return lr;
  };
  auto captures = [&]() {
    std::vector<GroupElement> degs = job.test_degrees.empty()
                                         ? default_test_degrees(cox, vertices, job.degree_bound)
                                         : job.test_degrees;
    return captures_cox_check(cox, q, pipe.s, pipe.de_ideal, degs, job.exponent_cap);
  };

  if (job.command == "build") {
    result["grading"] = json_group(cox.presentation.grading());
    result["vertices"] = vertices_json();
    result["arrow_count"] = q.n_arrows();
    result["arrows"] = arrows_json();
    result["relation_count"] = pipe.s.pres.relations().size();
    result["relations"] = s_relations_json();
    result["lambda_r"] = lambda_r_json();
    result["f_star_surjective"] = pipe.lattices.f_star_surjective;
    result["de_ideal"] = de_ideal_json();
    result["constraint_count"] = pipe.constraints.size();
    if (job.emit_cox) result["cox"] = emit_cox_doc(cox, vertices);
  } else if (job.command == "lambda-r") {
    result["chi_rank"] = pipe.lattices.chi_rank();
    result["f_star_matrix"] = json_matrix(pipe.lattices.f_star.matrix);
    result["lambda_r"] = lambda_r_json();
    result["f_star_surjective"] = pipe.lattices.f_star_surjective;
  } else if (job.command == "relations") {
    result["relation_count"] = pipe.s.pres.relations().size();
    result["relations"] = s_relations_json();
  } else if (job.command == "de-ideal") {
    result["generator_count"] = pipe.de_ideal.size();
    result["generators"] = de_ideal_json();
  } else if (job.command == "captures-cox") {
    CapturesCoxReport rep = captures();
    result["captures"] = rep.captures;
    Json unreached = Json::array();
    for (const auto& n : rep.unreached_generators) unreached.push_back(n);
    result["unreached_generators"] = std::move(unreached);
    result["degrees_checked"] = rep.degrees_checked.size();
    Json mism = Json::array();
    for (const auto& m : rep.hilbert_mismatches) {
      Json one;
      one["degree"] = oriented_compact(cox, m.degree, sign);
      one["dim_s_mod_ide"] = m.dim_s_mod_ide;
      one["dim_r"] = m.dim_r;
      mism.push_back(std::move(one));
    }
    result["hilbert_mismatches"] = std::move(mism);
    if (!rep.captures) exit_code = 1;
  } else if (job.command == "homogenize") {
    Json elements = Json::array();
    auto emit = [&](const Poly& s) {
      Json one;
      one["source"] = s.str(pipe.s.pres.var_names());
      Json terms = Json::array();
      for (const auto& t : homogenize(s, pipe.s, pipe.lattices)) {
        Json term;
        term["monomial"] = Poly::monomial_str(t.monomial, pipe.s.pres.var_names());
        term["coeff"] = rat_str(t.coeff.rat());
        term["kappa"] = json_vec(t.kappa_br);
        terms.push_back(std::move(term));
      }
      one["terms"] = std::move(terms);
      elements.push_back(std::move(one));
    };
    for (const Poly& g : pipe.de_ideal) emit(g);
    for (const Poly& r : pipe.s.pres.relations()) emit(r);
    result["elements"] = std::move(elements);
  } else if (job.command == "stability-check") {
    if (!job.rep_prime) fail(errc::invalid_input, "/rep: stability-check needs a rep");
    RefinedRep rep;
    rep.prime = *job.rep_prime;
    if (job.rep_m.size() != q.n_arrows())
      fail(errc::invalid_input, "/rep/m: expected one scalar per arrow");
    if (job.rep_g.size() != pipe.lattices.lambda_r.rank())
      fail(errc::invalid_input, "/rep/g: expected one unit per Lambda_r basis element");
    for (const Rat& x : job.rep_m) rep.m.push_back(FieldScalar::reduce(x, rep.prime));
    for (const Rat& x : job.rep_g) {
      FieldScalar u = FieldScalar::reduce(x, rep.prime);
      if (u.is_zero()) fail(errc::invalid_input, "/rep/g: units must be nonzero");
      rep.g.push_back(u);
    }
    result["check_refined"] = check_refined(rep, pipe.s, pipe.constraints);
    result["stable"] = is_theta_stable(rep, q, pipe.lattices, theta, job.restricted);
    result["semistable"] = is_theta_semistable(rep, q, pipe.lattices, theta, job.restricted);
    result["restricted"] = job.restricted;
  } else if (job.command == "count") {
    if (job.qs.empty()) fail(errc::invalid_input, "/options/q: count needs at least one prime");
    Json theta_json = Json::array();
    for (const Int& t : theta.theta) theta_json.push_back(json_int(t));
    result["theta"] = std::move(theta_json);
    result["restricted"] = job.restricted;
    Json reports = Json::array();
    bool all_match = true;
    for (std::int64_t qq : job.qs) {
      MassReport rep = compare_masses_single(pipe, qq, theta, job.restricted, budget, job.workers);
      all_match = all_match && rep.match;
      reports.push_back(json_mass_report(rep));
    }
    result["reports"] = std::move(reports);
    result["all_match"] = all_match;
    if (!all_match) exit_code = 1;
  } else if (job.command == "fiber-check") {
    if (job.qs.empty()) fail(errc::invalid_input, "/options/q: fiber-check needs at least one prime");
    Json results = Json::array();
    bool all_ok = true;
    for (std::int64_t qq : job.qs) {
      bool ok = fiber_check(pipe, qq, budget);
      all_ok = all_ok && ok;
      Json one;
      one["q"] = qq;
      one["ok"] = ok;
      results.push_back(std::move(one));
    }
    result["results"] = std::move(results);
    result["all_ok"] = all_ok;
    if (!all_ok) exit_code = 1;
  } else {
    fail(errc::invalid_input, "/command: unknown command \"" + job.command + "\"");
  }

  return {std::move(doc), exit_code};
}

inline RunResult run_job(const Json& doc) { return run(parse_jobspec(doc)); }

}  // namespace stacky
