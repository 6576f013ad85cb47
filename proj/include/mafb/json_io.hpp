// JSON schemas for the file formats:
//   Polytope:          {"dimension": n, "vertices": [[...]]} or
//                      {"dimension": n, "halfspaces": [{"normal": [...], "offset": c}]}
//   MaxAffineFunction: {"pieces": [{"slope": [...], "intercept": b}], "domain": <Polytope>}
//   SolverConfig / SolveReport / verification fragments as emitted by the CLI.
// Reports use insertion-ordered JSON so identical runs serialize identically.
#pragma once

#include <nlohmann/json.hpp>

#include "mafb/solver.hpp"
#include "mafb/verification.hpp"

namespace mafb {

using Json = nlohmann::ordered_json;

inline Json to_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Vec vec_from_json(const Json& j) {
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[int(i)] = j[i].get<double>();
  return v;
}

inline Json to_json(const Polytope& P) {
  Json j;
  j["dimension"] = P.dimension();
  Json vs = Json::array();
  for (const auto& v : P.vertices()) vs.push_back(to_json(v));
  j["vertices"] = vs;
  return j;
}

inline Polytope polytope_from_json(const Json& j) {
  if (!j.contains("dimension")) throw config_error("polytope: missing dimension");
  const int dim = j["dimension"].get<int>();
  if (j.contains("vertices")) {
    std::vector<Vec> vs;
    for (const auto& e : j["vertices"]) vs.push_back(vec_from_json(e));
    return Polytope::from_vertices(dim, std::move(vs));
  }
  if (j.contains("halfspaces")) {
    std::vector<Halfspace> hs;
    for (const auto& e : j["halfspaces"])
      hs.push_back({vec_from_json(e.at("normal")), e.at("offset").get<double>()});
    return Polytope::from_halfspaces(dim, std::move(hs));
  }
  throw config_error("polytope: needs vertices or halfspaces");
}

inline Json to_json(const MaxAffineFunction& v) {
  Json j;
  Json ps = Json::array();
  for (const auto& p : v.pieces()) {
    Json e;
    e["slope"] = to_json(p.slope);
    e["intercept"] = p.intercept;
    ps.push_back(e);
  }
  j["pieces"] = ps;
  j["domain"] = to_json(v.domain());
  return j;
}

inline MaxAffineFunction max_affine_from_json(const Json& j) {
  Polytope domain = polytope_from_json(j.at("domain"));
  std::vector<AffinePiece> ps;
  for (const auto& e : j.at("pieces"))
    ps.push_back({vec_from_json(e.at("slope")), e.at("intercept").get<double>()});
  return MaxAffineFunction(std::move(ps), std::move(domain));
}

inline Json to_json(const SolverConfig& cfg) {
  Json j;
  j["k"] = cfg.k;
  j["polytope"] = to_json(cfg.polytope);
  j["piece_budget"] = cfg.piece_budget;
  j["max_outer_iterations"] = cfg.max_outer_iterations;
  j["energy_tolerance"] = cfg.energy_tolerance;
  j["refinement_schedule"] = cfg.refinement_schedule;
  j["random_seed"] = cfg.random_seed;
  return j;
}

inline SolverConfig solver_config_from_json(const Json& j) {
  SolverConfig cfg;
  cfg.k = j.at("k").get<int>();
  cfg.polytope = polytope_from_json(j.at("polytope"));
  if (j.contains("piece_budget")) cfg.piece_budget = j["piece_budget"].get<int>();
  if (j.contains("max_outer_iterations"))
    cfg.max_outer_iterations = j["max_outer_iterations"].get<int>();
  if (j.contains("energy_tolerance"))
    cfg.energy_tolerance = j["energy_tolerance"].get<double>();
  if (j.contains("refinement_schedule"))
    cfg.refinement_schedule =
        j["refinement_schedule"].get<std::vector<int>>();
  if (j.contains("random_seed"))
    cfg.random_seed = j["random_seed"].get<std::uint64_t>();
  validate(cfg);
  return cfg;
}

inline Json to_json(const EnergyRecord& r) {
  Json j;
  j["I"] = r.I_value;
  j["J"] = r.J_value;
  j["E"] = r.E_value;
  j["k"] = r.k;
  j["n"] = r.n;
  return j;
}

inline Json to_json(const InequalityCheck& c) {
  Json j;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["margin"] = c.margin;
  j["holds"] = c.holds;
  return j;
}

inline Json to_json(const InequalityReport& r) {
  Json j;
  j["lower_bound"] = to_json(r.lower_bound);
  j["upper_bound"] = to_json(r.upper_bound);
  if (r.concavity) j["concavity"] = to_json(*r.concavity);
  j["santalo_product"] = r.santalo_product;
  return j;
}

inline Json to_json(const ResidualSummary& r) {
  Json j;
  j["sample_count"] = r.sample_count;
  j["excluded"] = r.excluded;
  j["max_relative_residual"] = r.max_relative_residual;
  j["mean_relative_residual"] = r.mean_relative_residual;
  j["interior_margin"] = r.interior_margin;
  j["smoothing_width"] = r.smoothing_width;
  return j;
}

inline Json to_json(const ExponentFit& f) {
  Json j;
  j["face_id"] = f.face_id;
  j["fitted_exponent"] = f.fitted_exponent;
  j["coefficient"] = f.coefficient;
  j["fit_residual"] = f.fit_residual;
  Json h = Json::array();
  for (int r = 0; r < f.tangential_hessian.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < f.tangential_hessian.cols(); ++c)
      row.push_back(f.tangential_hessian(r, c));
    h.push_back(row);
  }
  j["tangential_hessian"] = h;
  j["tangential_pd"] = f.tangential_pd;
  return j;
}

inline Json to_json(const ConvexityReport& r) {
  Json j;
  j["min_defect"] = r.min_defect;
  j["max_flat_run"] = r.max_flat_run;
  j["diameter"] = r.diameter;
  j["flat_threshold"] = r.flat_threshold;
  j["run_limit"] = r.run_limit;
  j["convex"] = r.convex;
  j["strictly_convex"] = r.strictly_convex;
  return j;
}

inline Json to_json(const KlartagReport& r) {
  Json j;
  j["spread"] = r.spread;
  j["mean_constant"] = r.mean_constant;
  j["samples"] = r.samples;
  j["excluded"] = r.excluded;
  return j;
}

inline Json to_json(const PushforwardReport& r) {
  Json j;
  j["samples"] = r.samples;
  j["mc_tolerance"] = r.mc_tolerance;
  j["max_moment_error"] = r.max_moment_error;
  j["min_duality_gap"] = r.min_duality_gap;
  j["gap_count"] = r.gap_count;
  j["nu_barycenter"] = to_json(r.nu_barycenter);
  j["moments_ok"] = r.moments_ok;
  j["gaps_ok"] = r.gaps_ok;
  return j;
}

inline Json to_json(const SolveReport& r) {
  Json j;
  j["convergence_flag"] = to_string(r.convergence_flag);
  j["final_record"] = to_json(r.final_record);
  j["iterations"] = r.iterations;
  j["final_piece_count"] = r.final_piece_count;
  j["barycenter_residual"] = r.barycenter_residual;
  j["vstar_boundary_max"] = r.vstar_boundary_max;
  j["normalization_constant"] = r.normalization_constant;
  j["omega_inradius"] = r.omega_inradius;
  j["omega_outradius"] = r.omega_outradius;
  j["compactness_band"] = r.compactness_band;
  j["energy_history"] = r.energy_history;
  if (!r.error_message.empty()) j["error"] = r.error_message;
  return j;
}

// FNV-1a over the canonical serialization; embedded in every report.
inline std::string config_hash(const Json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace mafb
