#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "stacky/jobspec.hpp"

namespace {

std::vector<std::int64_t> split_ints(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stacky-moduli: quivers of sections and refined representation moduli"};
  std::string command, input_path, out_path, q_list, theta_list;
  long degree_bound = -1;
  std::string budget_str;
  int workers = 0;
  bool emit_cox = false;
  std::string restricted_str;
  long exponent_cap = -1;

  app.add_option("command", command,
                 "one of: build, lambda-r, relations, de-ideal, captures-cox, homogenize, "
                 "stability-check, count, fiber-check")
      ->required();
  app.add_option("--input", input_path, "job document (JSON)")->required();
  app.add_option("--q", q_list, "comma-separated list of primes");
  app.add_option("--theta", theta_list, "comma-separated stability parameter");
  app.add_option("--degree-bound", degree_bound, "captures-cox Hilbert comparison bound");
  app.add_option("--budget", budget_str, "enumeration budget (candidate evaluations)");
  app.add_option("--restricted", restricted_str, "true/false: Lambda_r-orthogonal subsets only");
  app.add_flag("--emit-cox", emit_cox, "embed a re-ingestable cox input in build reports");
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_option("--workers", workers, "enumeration worker threads (default 1)");
  app.add_option("--exponent-cap", exponent_cap, "monomial exponent cap for non rank-1 gradings");

  CLI11_PARSE(app, argc, argv);

  stacky::Json doc;
  try {
    std::ifstream in(input_path);
    if (!in) throw stacky::error(stacky::errc::invalid_input, "cannot open " + input_path);
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "InvalidInput: " << input_path << " is not valid JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  doc["command"] = command;
  if (!doc.contains("options")) doc["options"] = stacky::Json::object();
  if (!q_list.empty()) {
    stacky::Json qs = stacky::Json::array();
    for (auto q : split_ints(q_list)) qs.push_back(q);
    doc["options"]["q"] = std::move(qs);
  }
  if (!theta_list.empty()) {
    stacky::Json th = stacky::Json::array();
    for (auto t : split_ints(theta_list)) th.push_back(t);
    doc["options"]["theta"] = std::move(th);
  }
  if (degree_bound >= 0) doc["options"]["degree_bound"] = degree_bound;
  if (!budget_str.empty()) doc["options"]["budget"] = budget_str;
  if (!restricted_str.empty()) doc["options"]["restricted"] = restricted_str == "true";
  if (emit_cox) doc["options"]["emit_cox"] = true;
  if (workers > 0) doc["options"]["workers"] = workers;
  if (exponent_cap >= 0) doc["options"]["exponent_cap"] = exponent_cap;

  try {
    stacky::RunResult res = stacky::run_job(doc);
    std::string text = res.report.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path);
      out << text;
    }
    return res.exit_code;
  } catch (const stacky::error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << "\n";
    return 2;
  }
}
