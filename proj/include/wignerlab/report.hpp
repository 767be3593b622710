#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wignerlab/ksequence.hpp"
#include "wignerlab/preserver.hpp"
#include "wignerlab/search.hpp"
#include "wignerlab/wigner.hpp"

namespace wignerlab {

using Json = nlohmann::ordered_json;

inline Json complex_matrix_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const CheckReport& r, bool with_witness = true) {
  Json j;
  j["name"] = r.name;
  j["passed"] = r.passed;
  j["trials"] = r.trials;
  j["tolerance"] = r.tolerance;
  j["max_violation"] = r.max_violation;
  Json stats = Json::object();
  for (const auto& [key, value] : r.statistics) stats[key] = value;
  j["statistics"] = std::move(stats);
  if (r.witness) {
    Json w;
    w["trial"] = r.witness->trial;
    w["value"] = r.witness->value;
    if (with_witness) {
      Json ins = Json::array();
      for (const auto& x : r.witness->inputs) ins.push_back(complex_matrix_json(x.matrix()));
      Json outs = Json::array();
      for (const auto& x : r.witness->outputs) outs.push_back(complex_matrix_json(x.matrix()));
      w["inputs"] = std::move(ins);
      w["outputs"] = std::move(outs);
    }
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline Json to_json(const WignerForm& f) {
  Json j;
  j["transpose"] = f.transpose;
  j["reduced"] = f.reduced;
  j["unitary"] = complex_matrix_json(f.unitary);
  return j;
}

inline Json to_json(const BranchDiagnostics& d) {
  Json j;
  j["reduced"] = d.reduced;
  j["transpose"] = d.transpose;
  j["top_eigenvalue"] = d.top_eigenvalue;
  j["second_magnitude"] = d.second_magnitude;
  j["min_eigenvalue"] = d.min_eigenvalue;
  j["reconstruction_error"] =
      d.reconstruction_error ? Json(*d.reconstruction_error) : Json(nullptr);
  j["accepted"] = d.accepted;
  return j;
}

inline Json to_json(const DecompositionResult& r) {
  Json j;
  Json branches = Json::array();
  if (const auto* d = std::get_if<Decomposed>(&r)) {
    j["kind"] = "WignerForm";
    j["form"] = to_json(d->form);
    j["reconstruction_error"] = d->reconstruction_error;
    for (const auto& b : d->branches) branches.push_back(to_json(b));
  } else {
    const auto& nw = std::get<NotWignerForm>(r);
    j["kind"] = "NotWignerForm";
    j["best_residual"] = nw.best_residual;
    for (const auto& b : nw.branches) branches.push_back(to_json(b));
  }
  j["branches"] = std::move(branches);
  return j;
}

inline std::string describe(const DecompositionResult& r) {
  if (const auto* d = std::get_if<Decomposed>(&r)) {
    std::string s = d->form.transpose ? "U X^t U^dagger" : "U X U^dagger";
    if (d->form.reduced) s += " o R_k";
    return "WignerForm(" + s + ")";
  }
  return "NotWignerForm";
}

inline std::string describe(const KSequence& s) {
  return s.verdict == Verdict::Conclusive
             ? std::string("Conclusive")
             : "ReducesToDivisor(" + std::to_string(s.k_star) + ")";
}

inline Json to_json(const KSequence& s, std::int64_t k) {
  Json j;
  j["n"] = s.n;
  j["k"] = k;
  j["ks"] = s.ks;
  j["k_star"] = s.k_star;
  j["verdict"] = to_string(s.verdict);
  j["verdict_detail"] = describe(s);
  j["divisor_invariant"] = divisor_invariant_check(s.n, k);
  return j;
}

inline Json to_json(const Candidate& c, double residual_accept) {
  Json j;
  j["restart"] = c.restart;
  j["residual"] = c.residual;
  j["iterations"] = c.iterations;
  j["sample_seed"] = c.sample_seed;
  j["sample_count"] = c.sample_count;
  j["min_sample_gap"] = c.min_sample_gap;
  j["resampled"] = c.resampled;
  if (c.residual < residual_accept)
    j["verdict"] = is_wigner_form(c.classification)
                       ? to_string(CandidateVerdict::KnownForm)
                       : to_string(CandidateVerdict::ConjectureCandidate);
  else
    j["verdict"] = "AboveAccept";
  j["classification"] = to_json(c.classification);
  Json checks = Json::array();
  for (const auto& r : c.check_summary) checks.push_back(to_json(r, false));
  j["checks"] = std::move(checks);
  return j;
}

// Replay comparison ---------------------------------------------------------

/// Structural equality with numbers compared to `tol` (absolute, or relative
/// for magnitudes above 1). Keys listed in `skip` are ignored at any depth.
/// On mismatch, `where` receives the JSON path.
inline bool numerically_equal(const Json& a, const Json& b, double tol,
                              const std::vector<std::string>& skip, std::string* where,
                              const std::string& path = "") {
  auto fail = [&] {
    if (where) *where = path.empty() ? "/" : path;
    return false;
  };
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>();
    const double y = b.get<double>();
    if (x == y) return true;
    const double scale = std::max({1.0, std::abs(x), std::abs(y)});
    return std::abs(x - y) <= tol * scale ? true : fail();
  }
  if (a.type() != b.type()) return fail();
  if (a.is_object()) {
    if (a.size() != b.size()) return fail();
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (std::find(skip.begin(), skip.end(), it.key()) != skip.end()) continue;
      if (!b.contains(it.key())) return fail();
      if (!numerically_equal(it.value(), b.at(it.key()), tol, skip, where,
                             path + "/" + it.key()))
        return false;
    }
    return true;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return fail();
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!numerically_equal(a[i], b[i], tol, skip, where, path + "/" + std::to_string(i)))
        return false;
    return true;
  }
  return a == b ? true : fail();
}

/// The machine-readable block of a CLI report: everything before the first
/// line starting with '#'.
inline Json parse_report(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::string body;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] == '#') break;
    body += line;
    body += '\n';
  }
  return Json::parse(body);
}

}  // namespace wignerlab
