#include <json.hpp>
#include <map>
#include <sstream>

#include "zinc_bridge/oracle.hpp"
#include "zinc_bridge/process.hpp"

namespace zb::oracle {

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Sat: return "sat";
    case Status::Unsat: return "unsat";
    case Status::Inapplicable: return "inapplicable";
  }
  return "?";
}

std::string_view classification_name(Classification c) {
  switch (c) {
    case Classification::Correct: return "correct";
    case Classification::Incorrect: return "incorrect";
    case Classification::Unverified: return "unverified";
  }
  return "?";
}

std::string_view reason_name(IncorrectReason r) {
  switch (r) {
    case IncorrectReason::None: return "none";
    case IncorrectReason::UnsatOnSat: return "unsat-on-sat";
    case IncorrectReason::SatOnUnsat: return "sat-on-unsat";
    case IncorrectReason::Delta: return "delta";
    case IncorrectReason::ObjectiveCount: return "objective-count";
    case IncorrectReason::SolutionSet: return "solution-set";
  }
  return "?";
}

Rational delta_threshold() { return Rational(Integer(1), Integer(1000000)); }

Verdict classify(const OracleResult& reference, const OracleResult& candidate) {
  Verdict v;
  if (reference.status == Status::Inapplicable) {
    v.detail = "reference inapplicable: " + reference.reason;
    return v;
  }
  if (candidate.status == Status::Inapplicable) {
    v.detail = "candidate inapplicable: " + candidate.reason;
    return v;
  }
  auto incorrect = [&](IncorrectReason r, std::string detail) {
    v.classification = Classification::Incorrect;
    v.reason = r;
    v.detail = std::move(detail);
    return v;
  };
  if (reference.status == Status::Sat && candidate.status == Status::Unsat)
    return incorrect(IncorrectReason::UnsatOnSat, "candidate reports unsat on a satisfiable instance");
  if (reference.status == Status::Unsat && candidate.status == Status::Sat)
    return incorrect(IncorrectReason::SatOnUnsat, "candidate reports sat on an unsatisfiable instance");
  if (reference.status == Status::Unsat) {
    v.classification = Classification::Correct;
    return v;
  }
  if (reference.optimum.size() != candidate.optimum.size())
    return incorrect(IncorrectReason::ObjectiveCount, "reference has " + std::to_string(reference.optimum.size()) +
                                                          " objectives, candidate " +
                                                          std::to_string(candidate.optimum.size()));
  const Rational threshold = delta_threshold();
  bool bad = false;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < reference.optimum.size(); ++k) {
    const Rational& r = reference.optimum[k];
    const Rational abs_err = (candidate.optimum[k] - r).abs();
    if (!v.abs_error || abs_err > *v.abs_error) v.abs_error = abs_err;
    Rational err = abs_err;
    if (!r.is_zero()) {
      err = abs_err / r.abs();
      if (!v.delta || err > *v.delta) v.delta = err;
    }
    if (err >= threshold && !bad) {
      bad = true;
      worst = k;
    }
  }
  if (bad)
    return incorrect(IncorrectReason::Delta, "objective " + std::to_string(worst) + ": reference " +
                                                 reference.optimum[worst].to_string() + ", candidate " +
                                                 candidate.optimum[worst].to_string());
  if (reference.solutions && candidate.solutions && *reference.solutions != *candidate.solutions)
    return incorrect(IncorrectReason::SolutionSet,
                     "projected solution sets differ (" + std::to_string(reference.solutions->size()) + " vs " +
                         std::to_string(candidate.solutions->size()) + ")");
  v.classification = Classification::Correct;
  return v;
}

namespace {

nlohmann::ordered_json result_json(const OracleResult& r) {
  nlohmann::ordered_json j;
  j["status"] = std::string(status_name(r.status));
  if (r.status == Status::Sat) {
    auto opt = nlohmann::json::array();
    for (const auto& q : r.optimum) opt.push_back(q.to_string());
    j["optimum"] = opt;
  }
  if (r.status == Status::Inapplicable) j["reason"] = r.reason;
  if (r.solutions) j["solutions"] = r.solutions->size();
  j["nodes"] = r.nodes;
  return j;
}

}  // namespace

std::string report_json(const ReportRecord& rec) {
  nlohmann::ordered_json j;
  j["id"] = rec.id;
  j["reference"] = result_json(rec.reference);
  j["candidate"] = result_json(rec.candidate);
  j["verdict"] = std::string(classification_name(rec.verdict.classification));
  if (rec.verdict.classification == Classification::Incorrect)
    j["reason"] = std::string(reason_name(rec.verdict.reason));
  if (rec.verdict.delta) {
    j["delta"] = rec.verdict.delta->to_string();
    j["delta_approx"] = rec.verdict.delta->to_approx_decimal(6);
  } else {
    j["delta"] = nullptr;
  }
  if (rec.verdict.abs_error) j["abs_error"] = rec.verdict.abs_error->to_string();
  if (!rec.verdict.detail.empty()) j["detail"] = rec.verdict.detail;
  return j.dump();
}

std::string report_jsonl(const std::vector<ReportRecord>& records) {
  std::string out;
  for (const auto& r : records) out += report_json(r) + "\n";
  return out;
}

OracleResult parse_solver_output(std::string_view output, const std::vector<std::string>& objective_vars,
                                 bool optimization) {
  std::istringstream in{std::string(output)};
  std::string line;
  std::map<std::string, std::string> current, last;
  bool have_solution = false, complete = false;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line == "----------") {
      last = current;
      current.clear();
      have_solution = true;
    } else if (line == "==========") {
      complete = true;
    } else if (line == "=====UNSATISFIABLE=====") {
      return OracleResult::unsat();
    } else if (line == "=====UNKNOWN=====" || line == "=====UNBOUNDED=====" || line == "=====ERROR=====") {
      return OracleResult::inapplicable("solver reported " + line);
    } else if (auto eq = line.find(" = "); eq != std::string::npos) {
      std::string value = line.substr(eq + 3);
      if (!value.empty() && value.back() == ';') value.pop_back();
      current[line.substr(0, eq)] = value;
    }
  }
  if (!have_solution) return OracleResult::inapplicable("solver produced no solution");
  if (!optimization) return OracleResult::sat();
  if (!complete) return OracleResult::inapplicable("solver did not prove optimality");
  std::vector<Rational> opt;
  for (const auto& name : objective_vars) {
    auto it = last.find(name);
    if (it == last.end()) return OracleResult::inapplicable("objective variable '" + name + "' missing from output");
    const std::string& s = it->second;
    try {
      if (s == "true" || s == "false") opt.emplace_back(s == "true" ? 1 : 0);
      else opt.push_back(Rational::parse_decimal(s));
    } catch (const std::exception&) {
      return OracleResult::inapplicable("cannot read value '" + s + "' of '" + name + "'");
    }
  }
  return OracleResult::sat(std::move(opt));
}

OracleResult run_external_solver(const std::string& command_template, const std::string& fzn_path,
                                 const std::vector<std::string>& objective_vars, bool optimization) {
  std::vector<std::string> argv = split_command(command_template);
  bool substituted = false;
  for (auto& a : argv) {
    for (auto pos = a.find("{fzn}"); pos != std::string::npos; pos = a.find("{fzn}", pos + fzn_path.size())) {
      a.replace(pos, 5, fzn_path);
      substituted = true;
    }
  }
  if (!substituted) argv.push_back(fzn_path);
  ProcessResult r = run_process(argv);
  if (r.exit_code != 0)
    throw ExternalError("solver exited with status " + std::to_string(r.exit_code) + ": " + r.err);
  return parse_solver_output(r.out, objective_vars, optimization);
}

}  // namespace zb::oracle
