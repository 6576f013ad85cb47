// Minimization of E over C_{n+2}(P) in the max-affine class: BFGS on the
// scale-reduced functional F = -log I - (n+k+1)/(n+1) log J, with barycenter
// re-projection after every accepted step, exact scale normalization, and
// residual-driven piece refinement per schedule stage.
//
// F is E minimized over the scaling family v -> lambda v (up to an additive
// constant), so descent on F plus the exact scale step keeps the reported
// energies monotone while removing the scaling direction from the search.
#pragma once

#include "mafb/functionals.hpp"

namespace mafb {

struct SolverConfig {
  int k = 1;
  Polytope polytope;
  int piece_budget = 64;
  int max_outer_iterations = 600;  // accepted descent steps per stage
  double energy_tolerance = 1e-10;
  std::vector<int> refinement_schedule;  // empty: doubling up to the budget
  std::uint64_t random_seed = 1;
};

inline void validate(const SolverConfig& cfg) {
  const int n = cfg.polytope.dimension();
  if (n < 1 || n > 2)
    throw config_error("solver supports domain dimension 1 or 2");
  if (cfg.k < 0) throw config_error("k must be a nonnegative integer");
  if (cfg.piece_budget < n + 2)
    throw config_error("piece_budget must be at least n+2");
  if (cfg.energy_tolerance <= 0) throw config_error("tolerances must be positive");
  if (cfg.max_outer_iterations < 1)
    throw config_error("max_outer_iterations must be positive");
  if (!cfg.polytope.origin_interior())
    throw config_error("the polytope must contain the origin in its interior");
  for (std::size_t i = 1; i < cfg.refinement_schedule.size(); ++i)
    if (cfg.refinement_schedule[i] < cfg.refinement_schedule[i - 1])
      throw config_error("refinement_schedule must be nondecreasing");
}

// Pieces reserved for the boundary-layer completion after the descent loop:
// per boundary component, a dyadic ladder of tangents of the local expansion.
inline int completion_reserve(const SolverConfig& cfg) {
  const int n = cfg.polytope.dimension();
  const int floor_count = std::max(n + 2, 2 * (n + 1) + 1);
  int reserve = n == 1 ? 2 * 3
                       : int(cfg.polytope.halfspaces().size()) * 3 * 2;
  if (cfg.piece_budget - reserve < floor_count)
    reserve = std::max(0, cfg.piece_budget - floor_count);
  return reserve;
}

inline std::vector<int> effective_schedule(const SolverConfig& cfg) {
  if (!cfg.refinement_schedule.empty()) return cfg.refinement_schedule;
  const int n = cfg.polytope.dimension();
  const int top = cfg.piece_budget - completion_reserve(cfg);
  std::vector<int> s;
  int c = std::min(top, 2 * (n + 1) + 1 + 2 * n);
  s.push_back(c);
  while (c < top) {
    c = std::min(top, 2 * c);
    s.push_back(c);
  }
  return s;
}

enum class ConvergenceFlag { converged, budget_exhausted, error };

inline const char* to_string(ConvergenceFlag f) {
  switch (f) {
    case ConvergenceFlag::converged: return "converged";
    case ConvergenceFlag::budget_exhausted: return "budget-exhausted";
    default: return "error";
  }
}

struct SolveReport {
  std::vector<double> energy_history;  // E of each accepted iterate
  EnergyRecord final_record;
  double barycenter_residual = 0;  // |∫ y v^{-(n+2)}| / ∫ v^{-(n+2)}
  double vstar_boundary_max = 0;
  ConvergenceFlag convergence_flag = ConvergenceFlag::error;
  double normalization_constant = 1;  // c with det D^2 v = c v^{-(n+2)}(-v*)^{-k}
  int iterations = 0;
  int final_piece_count = 0;
  double omega_inradius = 0;   // B_r(0) ⊂ Omega ⊂ B_R(0)
  double omega_outradius = 0;
  std::vector<double> compactness_band;  // (-inf u)^{k+1} |Omega| per stage end
  std::string error_message;
};

struct SolveResult {
  MaxAffineFunction v;
  DualFunction u;
  SolveReport report;
};

// v0 = 1 together with 2(n+1) supporting pieces of a shallow paraboloid;
// directions follow the domain's vertex/facet axes so symmetric domains get
// symmetric starts. The seed only jitters the paraboloid radius.
inline MaxAffineFunction initialize(const SolverConfig& cfg) {
  validate(cfg);
  const Polytope& P = cfg.polytope;
  const int n = P.dimension();
  Rng rng(cfg.random_seed);
  const double inr = P.inradius_about_origin();
  const double rt = (0.55 + 0.1 * rng.uniform()) * inr;
  const double curv = (0.35 + 0.1 * rng.uniform()) / (rt * rt);

  std::vector<Vec> dirs;
  for (const auto& vt : P.vertices()) dirs.push_back(vt.normalized());
  for (const auto& h : P.halfspaces()) dirs.push_back(h.normal);
  while (int(dirs.size()) < 2 * (n + 1)) dirs.push_back(rng.direction(n));
  dirs.resize(2 * (n + 1));

  std::vector<AffinePiece> ps;
  ps.push_back({Vec::Zero(n), 1.0});
  int idx = 0;
  for (const auto& d : dirs) {
    // two radii in 1D so all four pieces are active
    double r = rt * (n == 1 ? (idx / 2 % 2 ? 0.6 : 1.0) : 1.0);
    Vec p = r * d;
    ps.push_back({2 * curv * p, 1.0 - curv * p.squaredNorm()});
    ++idx;
  }
  return prune(MaxAffineFunction(std::move(ps), P));
}

namespace detail {

struct RefinementCandidate {
  double score;
  Vec slope;
};

// Monge-Ampere residual indicator per subdivision vertex: mass of the
// gradient cell |conv{active slopes}| against the dual-cell integral of
// rho = v^{-(n+2)} max(-v*, eps)^{-k}.
inline std::vector<RefinementCandidate> refinement_candidates(
    const MaxAffineFunction& v, const Subdivision& sub, int k, Rng& rng) {
  const int n = v.dimension();
  std::vector<RefinementCandidate> out;

  // Boundary candidates: the unmet boundary condition v* = 0 on dP leaves a
  // gradient gap of height t_max = (-v*) / <n_f, w> in the facet-normal
  // direction at each boundary vertex.
  for (const auto& w : sub.vertices) {
    if (w.facets.empty()) continue;
    Vec centroid = Vec::Zero(n);
    for (int i : w.active_pieces) centroid += v.pieces()[std::size_t(i)].slope;
    centroid /= double(w.active_pieces.size());
    double dloc = 0;
    for (int i : w.active_pieces)
      dloc = std::max(dloc, (v.pieces()[std::size_t(i)].slope - centroid).norm());
    for (int f : w.facets) {
      const auto& hs = v.domain().halfspaces()[std::size_t(f)];
      double denom = hs.normal.dot(w.point);
      if (denom <= 1e-9) continue;
      // -v* at w equals the active intercept
      double mvstar = 0;
      for (int i : w.active_pieces)
        mvstar = std::max(mvstar, v.pieces()[std::size_t(i)].intercept);
      double tmax = mvstar / denom;
      if (tmax <= 0) continue;
      double score = n == 1 ? tmax : tmax * std::max(dloc, tmax);
      // dyadic ladder toward the boundary-condition slope a + tmax * n_f;
      // the sqrt-type boundary expansion wants geometric slope clustering
      for (int j = 1; j <= 5; ++j) {
        Vec cand = centroid + tmax * (1.0 - std::pow(2.0, -j)) * hs.normal;
        cand += 1e-6 * tmax * (rng.uniform() - 0.5) * hs.normal;
        out.push_back({score * std::pow(2.0, 1 - j), cand});
      }
    }
  }

  for (const auto& w : sub.vertices) {
    if (w.active_pieces.size() < 2) continue;  // no gradient-cell mass
    std::vector<Vec> slopes;
    for (int i : w.active_pieces) slopes.push_back(v.pieces()[std::size_t(i)].slope);
    double mass = 0;
    Vec centroid = Vec::Zero(n);
    for (const auto& s : slopes) centroid += s;
    centroid /= double(slopes.size());
    if (n == 1) {
      double lo = slopes[0][0], hi = slopes[0][0];
      for (const auto& s : slopes) {
        lo = std::min(lo, s[0]);
        hi = std::max(hi, s[0]);
      }
      mass = hi - lo;
    } else {
      std::vector<poly2::P2> pts;
      for (const auto& s : slopes) pts.push_back(poly2::P2(s[0], s[1]));
      auto h = poly2::hull(pts);
      mass = h.size() >= 3 ? std::abs(poly2::area(h)) : 0.0;
      if (mass == 0 && slopes.size() >= 2) {
        // collinear slopes still carry 1D mass worth splitting
        double m = 0;
        for (std::size_t i = 0; i < slopes.size(); ++i)
          for (std::size_t j = i + 1; j < slopes.size(); ++j)
            m = std::max(m, (slopes[i] - slopes[j]).norm());
        mass = 1e-3 * m;
      }
    }
    // dual-cell share of the density integral
    double area = 0;
    const double tol = 1e-8 * std::max(1.0, v.domain().diameter());
    for (const auto& c : sub.cells) {
      for (const auto& q : c.verts)
        if ((q - w.point).norm() <= tol) {
          area += c.measure / double(c.verts.size());
          break;
        }
    }
    double mvstar = std::max(-v.v_star(w.point), 1e-6);
    double rho = std::pow(v.value(w.point), -(n + 2.0)) *
                 std::pow(mvstar, -double(k));
    double score = std::abs(mass - rho * area);
    Vec slope = centroid;
    if (slopes.size() >= 2) {
      // seeded jitter breaks exact ties between symmetric candidates
      Vec dir = slopes[0] - slopes[1];
      slope += 1e-6 * (rng.uniform() - 0.5) * dir;
    }
    out.push_back({score, slope});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.score > b.score;
  });
  return out;
}

}  // namespace detail

// Boundary-layer completion (1D): the loop's piecewise-linear minimizer
// truncates the (1-y)^{1+1/(k+1)} layer at the outermost tangency, leaving
// v* visibly nonzero at the endpoints. Tangents of the local expansion
//   v(y) ~ A - A t + p t^gamma,  t = 1 - |y|,  gamma = 1 + 1/(k+1),
//   p = sigma0/gamma,            sigma0^{k+1} = (k+1) A^{-3},
// anchored to the outermost piece (a0, b0) restore the boundary condition;
// the anchor A solves A = a0 + b0 + (gamma-1) p t*^gamma with t* the
// tangency depth of the current outer piece.
// 2D variant: stations along each facet's interior third; the tangential
// curvature Q enters the local balance
//   gamma (gamma-1) p Q A^{n+2} (c_f gamma p)^k = 1,
// the boundary gradient is g_bc = a0 + (b0/c_f) n_out, and the ladder
// consists of tangents of A + <g_bc, y-x> + p t^gamma at dyadic depths.
inline std::vector<AffinePiece> boundary_layer_pieces_2d(
    const MaxAffineFunction& v, int k, int levels, int stations) {
  const int n = 2;
  const double gamma = 1.0 + 1.0 / (k + 1);
  const Polytope& P = v.domain();
  std::vector<AffinePiece> out;
  for (std::size_t f = 0; f < P.halfspaces().size(); ++f) {
    const auto& hs = P.halfspaces()[f];
    auto fv = P.facet_vertices(f);
    if (fv.size() < 2) continue;
    const Vec inward = -hs.normal;
    Vec tangent(2);
    tangent << -hs.normal[1], hs.normal[0];
    const double flen = (fv[1] - fv[0]).norm();
    const Vec mid = 0.5 * (fv[0] + fv[1]);
    for (int s = 0; s < stations; ++s) {
      const double off = stations == 1 ? 0.0
                                       : (s - (stations - 1) * 0.5) /
                                             (stations - 1) * flen / 3.0;
      const Vec anchor = mid + off * tangent;
      const double cf = hs.normal.dot(anchor);
      if (cf <= 1e-9) continue;
      const Vec probe = anchor + 1e-7 * P.diameter() * inward;
      const auto& p0 = v.pieces()[std::size_t(v.active_piece(probe))];
      const double b0 = p0.intercept;
      if (b0 <= 0) continue;
      const double tmax = b0 / cf;
      // tangential curvature probe at the layer depth
      const double sstep = 0.08 * flen;
      auto val = [&](const Vec& y) { return v.value(y); };
      double A = p0.at(anchor);
      double Q = 0, tstar = 0, phat = 0;
      {
        Vec base = anchor + 0.15 * P.inradius_about_origin() * inward;
        Q = (val(base + sstep * tangent) - 2 * val(base) +
             val(base - sstep * tangent)) /
            (sstep * sstep);
      }
      if (Q <= 1e-9) continue;
      for (int fp = 0; fp < 8; ++fp) {
        double denom = std::pow(gamma, k + 1) * (gamma - 1) * Q *
                       std::pow(A, n + 2) * std::pow(cf, k);
        phat = std::pow(1.0 / denom, 1.0 / (k + 1));
        tstar = std::pow(tmax / (gamma * phat), double(k + 1));
        A = p0.at(anchor) + (gamma - 1) * phat * std::pow(tstar, gamma);
      }
      if (!(tstar > 0) || !std::isfinite(A) || !std::isfinite(phat)) continue;
      const Vec gbc = p0.slope + tmax * hs.normal;
      const double beta_bc = gbc.dot(inward);
      for (int l = 1; l <= levels; ++l) {
        double tl = tstar * std::pow(2.0, -double(k + 1) * l);
        double beta_l = beta_bc + gamma * phat * std::pow(tl, gamma - 1.0);
        Vec al = p0.slope + (beta_l - p0.slope.dot(inward)) * inward;
        Vec yl = anchor + tl * inward;
        double vl = A + beta_bc * tl + phat * std::pow(tl, gamma);
        out.push_back({al, vl - al.dot(yl)});
      }
    }
  }
  return out;
}

inline std::vector<AffinePiece> boundary_layer_pieces(
    const MaxAffineFunction& v, int k, int levels) {
  if (levels <= 0) return {};
  if (v.dimension() == 2) return boundary_layer_pieces_2d(v, k, levels, 3);
  if (v.dimension() != 1) return {};
  const double gamma = 1.0 + 1.0 / (k + 1);
  std::vector<AffinePiece> out;
  for (double sgn : {1.0, -1.0}) {
    double a0 = 0, b0 = 0;
    bool found = false;
    for (const auto& p : v.pieces())
      if (!found || sgn * p.slope[0] > sgn * a0) {
        a0 = p.slope[0];
        b0 = p.intercept;
        found = true;
      }
    const double as = sgn * a0;
    if (b0 <= 0 || as <= 0) continue;
    double A = as + b0, tstar = 0, phat = 0;
    for (int fp = 0; fp < 8; ++fp) {
      double sigma0 = std::pow((k + 1) / (A * A * A), 1.0 / (k + 1));
      phat = sigma0 / gamma;
      tstar = std::pow((A - as) / (gamma * phat), double(k + 1));
      A = as + b0 + (gamma - 1) * phat * std::pow(tstar, gamma);
    }
    if (!(tstar > 0) || !std::isfinite(A)) continue;
    for (int l = 1; l <= levels; ++l) {
      double tl = tstar * std::pow(2.0, -double(k + 1) * l);
      double vp = A - gamma * phat * std::pow(tl, gamma - 1.0);
      double vv = A - A * tl + phat * std::pow(tl, gamma);
      out.push_back({Vec::Constant(1, sgn * vp), vv - vp * (1.0 - tl)});
    }
  }
  return out;
}

inline Vec intercepts(const MaxAffineFunction& v) {
  Vec b(int(v.pieces().size()));
  for (std::size_t i = 0; i < v.pieces().size(); ++i)
    b[int(i)] = v.pieces()[i].intercept;
  return b;
}

inline SolveResult minimize_energy(const SolverConfig& cfg) {
  validate(cfg);
  const Polytope& P = cfg.polytope;
  const int n = P.dimension();
  const int k = cfg.k;
  const double tau = double(n + k + 1) / double(n + 1);
  Rng rng(cfg.random_seed ^ 0x5bd1e995);

  auto F_of = [&](const EnergyEvaluation& ev) {
    return -std::log(ev.I) - tau * std::log(ev.J);
  };
  auto normalize = [&](MaxAffineFunction v, EnergyEvaluation* ev_out) {
    // re-center, then move to the scale-optimal representative
    v = project_to_Cn2(v);
    EnergyEvaluation ev = evaluate_energy(v, k);
    double lam = optimal_scale(ev.J, n, k);
    if (std::abs(lam - 1.0) > 1e-15) {
      v = v.scaled(lam);
      ev = evaluate_energy(v, k);
    }
    if (ev_out) *ev_out = std::move(ev);
    return v;
  };

  SolveReport rep;
  MaxAffineFunction v = initialize(cfg);
  EnergyEvaluation ev;
  v = normalize(std::move(v), &ev);
  rep.energy_history.push_back(ev.E);

  const std::vector<int> schedule = effective_schedule(cfg);
  int total_iters = 0;
  bool out_of_budget = false;
  bool last_stage_converged = false;

  for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
    if (stage > 0) {
      // Lemma "remove-mass-outside-Omega" normalization between stages; it
      // preserves I and cannot increase E.
      MaxAffineFunction vr = normalize(mass_removal(v), nullptr);
      EnergyEvaluation evr = evaluate_energy(vr, k);
      if (evr.E <= ev.E + 1e-12 * std::abs(ev.E)) {
        v = std::move(vr);
        ev = std::move(evr);
        rep.energy_history.push_back(ev.E);
      }
    }

    // refinement: tangent pieces at the worst Monge-Ampere residual vertices
    const int target = schedule[stage];
    if (int(v.pieces().size()) < target) {
      auto cands = detail::refinement_candidates(v, ev.sub, k, rng);
      std::vector<AffinePiece> ps = v.pieces();
      const double slope_tol =
          1e-7 * std::max(1.0, P.diameter());
      std::size_t ci = 0;
      std::vector<std::size_t> fresh;
      while (int(ps.size()) < target && ci < cands.size()) {
        const Vec& a = cands[ci++].slope;
        bool dup = false;
        for (const auto& p : ps)
          if ((p.slope - a).norm() < slope_tol) {
            dup = true;
            break;
          }
        if (dup) continue;
        // tangent intercept: b = -u(a) keeps v unchanged as a function
        double ua = -std::numeric_limits<double>::infinity();
        for (const auto& w : ev.sub.vertices)
          ua = std::max(ua, a.dot(w.point) - w.value);
        fresh.push_back(ps.size());
        ps.push_back({a, -ua});
      }
      if (!fresh.empty()) {
        MaxAffineFunction vt(ps, P);
        // activate the inserted pieces: lift their intercepts while the
        // energy improves
        double scale = 1e-2 * std::max(1.0, std::abs(ev.sub.max_value));
        MaxAffineFunction best = vt;
        double bestE = ev.E;
        bool lifted = false;
        for (int probe = 0; probe < 14; ++probe, scale *= 0.5) {
          std::vector<AffinePiece> q = ps;
          for (std::size_t i : fresh) q[i].intercept += scale;
          try {
            MaxAffineFunction cand = normalize(MaxAffineFunction(q, P), nullptr);
            double Ec = evaluate_energy(cand, k).E;
            if (Ec < bestE - 1e-14) {
              best = std::move(cand);
              bestE = Ec;
              lifted = true;
              break;
            }
          } catch (const error&) {
          }
        }
        v = lifted ? best : vt;
        ev = evaluate_energy(v, k);
        if (ev.E <= rep.energy_history.back() + 1e-12 * std::abs(ev.E))
          rep.energy_history.push_back(ev.E);
      }
    }

    // BFGS descent on F with re-centering after each accepted step
    const std::size_t npieces = v.pieces().size();
    Mat H = Mat::Identity(int(npieces), int(npieces));
    Vec g_prev, b_prev;
    double warm = 1.0;
    int flat_steps = 0;
    last_stage_converged = false;
    out_of_budget = false;
    for (int iter = 0; iter < cfg.max_outer_iterations; ++iter) {
      if (iter + 1 == cfg.max_outer_iterations) out_of_budget = true;
      if (v.pieces().size() != npieces) break;  // pruning changed the basis
      auto [dI, dJ] = intercept_gradients(v, k, ev);
      Vec gF = -dI / ev.I - tau * dJ / ev.J;

      const double F0 = F_of(ev);
      const double gnorm = gF.norm();
      if (gnorm <= 1e-12 * std::max(1.0, std::abs(F0))) {
        last_stage_converged = true;
        out_of_budget = false;
        break;
      }
      if (g_prev.size() == gF.size()) {
        Vec s = intercepts(v) - b_prev;
        Vec ydiff = gF - g_prev;
        double sy = s.dot(ydiff);
        if (sy > 1e-12 * s.norm() * ydiff.norm()) {
          Mat I_ = Mat::Identity(int(npieces), int(npieces));
          Mat V = I_ - (s * ydiff.transpose()) / sy;
          H = V * H * V.transpose() + (s * s.transpose()) / sy;
        }
      }
      Vec d = -(H * gF);
      if (d.dot(gF) > -1e-16 * d.norm() * gnorm) {
        H = Mat::Identity(int(npieces), int(npieces));
        d = -gF;
      }

      // Armijo on raw F, then re-center and verify monotone energy
      double t = warm;
      bool accepted = false;
      MaxAffineFunction vnew = v;
      EnergyEvaluation evnew;
      for (int bt = 0; bt < 50; ++bt, t *= 0.5) {
        std::vector<AffinePiece> ps = v.pieces();
        for (std::size_t i = 0; i < npieces; ++i) ps[i].intercept += t * d[int(i)];
        try {
          MaxAffineFunction cand(ps, P);
          EnergyEvaluation evc = evaluate_energy(cand, k);
          if (F_of(evc) > F0 + 1e-4 * t * d.dot(gF)) continue;
          MaxAffineFunction candn = normalize(cand, &evc);
          if (evc.E > rep.energy_history.back() + 1e-13 * std::abs(evc.E))
            continue;
          vnew = std::move(candn);
          evnew = std::move(evc);
          accepted = true;
          warm = std::min(4.0 * t, 1e3);
          break;
        } catch (const error&) {
        }
      }
      if (!accepted) {
        last_stage_converged = true;
        out_of_budget = false;
        break;
      }
      b_prev = intercepts(v);
      g_prev = gF;
      double Eprev = rep.energy_history.back();
      v = std::move(vnew);
      ev = std::move(evnew);
      rep.energy_history.push_back(ev.E);
      ++total_iters;
      double dec = (Eprev - ev.E) / std::max(1.0, std::abs(ev.E));
      if (dec < cfg.energy_tolerance) {
        if (++flat_steps >= 3) {
          last_stage_converged = true;
          out_of_budget = false;
          break;
        }
      } else {
        flat_steps = 0;
      }
    }

    // stage bookkeeping: prune dead pieces and record compactness data
    v = prune(v);
    ev = evaluate_energy(v, k);
    rep.compactness_band.push_back(std::pow(-ev.u.min_value(), k + 1) *
                                   volume(ev.u.negativity_region()));
  }

  // final normalization to det D^2 v = v^{-(n+2)} (-v*)^{-k}, then the
  // boundary-layer completion (its expansion coefficients live in the
  // normalized frame)
  v = normalize(std::move(v), &ev);
  double c = ev.I * std::pow(ev.J, -(n + 2.0) / (n + 1.0)) / (n + 1.0);
  rep.normalization_constant = c;
  double lamc = std::pow(c, -1.0 / (2.0 * n + 2.0 + k));
  v = v.scaled(lamc);
  {
    const int reserve = completion_reserve(cfg);
    const int per_component =
        n == 1 ? 2 : int(P.halfspaces().size()) * 3;
    const int levels = per_component > 0 ? reserve / per_component : 0;
    if (levels > 0) {
      auto extra = boundary_layer_pieces(v, k, levels);
      if (!extra.empty()) {
        std::vector<AffinePiece> ps = v.pieces();
        for (auto& p : extra) ps.push_back(std::move(p));
        v = prune(MaxAffineFunction(std::move(ps), P));
        v = project_to_Cn2(v);
      }
    }
  }
  ev = evaluate_energy(v, k);

  rep.final_record = EnergyRecord{ev.I, ev.J, ev.E, k, n};
  rep.iterations = total_iters;
  rep.final_piece_count = int(v.pieces().size());
  rep.vstar_boundary_max = vstar_boundary_max(v);
  {
    ShiftGeometry geo(v, ev.sub);
    Vec zero = Vec::Zero(n);
    rep.barycenter_residual = geo.grad(zero).norm() / geo.mass(zero);
  }
  {
    const Polytope& omega = ev.u.negativity_region();
    rep.omega_inradius = omega.inradius_about_origin();
    double R = 0;
    for (const auto& q : omega.vertices()) R = std::max(R, q.norm());
    rep.omega_outradius = R;
  }
  rep.convergence_flag = out_of_budget ? ConvergenceFlag::budget_exhausted
                         : last_stage_converged
                             ? ConvergenceFlag::converged
                             : ConvergenceFlag::budget_exhausted;
  DualFunction u = std::move(ev.u);
  return SolveResult{std::move(v), std::move(u), std::move(rep)};
}

}  // namespace mafb
