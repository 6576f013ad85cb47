// The variational machinery around
//   I(v) = 1/(k+1) ∫ (-u)_+^{k+1},   J(v) = 1/(n+1) ∫_P v^{-(n+1)},
//   E(v) = -log I(v) + J(v)^{-1/(n+1)},
// together with first variations, the barycenter shift projection onto
// C_{n+2}(P), mass removal, and the explicit inequality checks.
//
// All integrals are closed-form: the integrands are powers of affine
// functions on the cells of a polyhedral subdivision, so per-simplex moments
// are exact (see core.hpp). The shift x -> v - <x,.> leaves the subdivision
// untouched (dominance constraints only see slope differences), which makes
// the Newton iteration for the optimal shift cheap.
#pragma once

#include <functional>
#include <optional>

#include "mafb/max_affine.hpp"

namespace mafb {

struct divergent_integral : error {
  using error::error;
};

struct EnergyRecord {
  double I_value = 0;
  double J_value = 0;
  double E_value = 0;
  int k = 0;
  int n = 0;
};

namespace detail {

struct Tri {
  int piece;
  double vol;
  std::vector<Vec> verts;
  std::vector<double> base;  // v at the simplex vertices (own-piece values)
};

inline std::vector<Tri> triangulate_cells(const std::vector<Cell>& cells,
                                          const std::vector<AffinePiece>& pieces,
                                          int dim) {
  std::vector<Tri> out;
  for (const auto& c : cells) {
    const auto& p = pieces[std::size_t(c.piece)];
    for (auto& s : triangulate(c, dim)) {
      Tri t;
      t.piece = c.piece;
      t.vol = s.volume;
      t.verts = std::move(s.verts);
      t.base.reserve(t.verts.size());
      for (const auto& q : t.verts) t.base.push_back(p.at(q));
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Geometry of the measure v^{-s} dy on P under shifts v - <x,.>; fixed
// triangulation, values recomputed per shift.
// ---------------------------------------------------------------------------
class ShiftGeometry {
 public:
  ShiftGeometry(const MaxAffineFunction& v, const Subdivision& sub)
      : n_(v.dimension()) {
    tris_ = detail::triangulate_cells(sub.cells, v.pieces(), n_);
    for (const auto& w : sub.vertices) {
      vpts_.push_back(w.point);
      vvals_.push_back(w.value);
    }
  }

  int dim() const { return n_; }

  double min_shifted_value(const Vec& x) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vpts_.size(); ++i)
      m = std::min(m, vvals_[i] - x.dot(vpts_[i]));
    return m;
  }

  // f(x) = J(v - <x,.>)
  double J(const Vec& x) const {
    double s = 0;
    for (const auto& t : tris_) s += simplex_negpow_integral(t.vol, values(t, x), n_ + 1);
    return s / (n_ + 1);
  }

  // grad f(x) = ∫ y (v - <x,y>)^{-(n+2)} dy
  Vec grad(const Vec& x) const {
    Vec g = Vec::Zero(n_);
    for (const auto& t : tris_) {
      auto c = values(t, x);
      for (int m = 0; m <= n_; ++m) {
        const int ex[1] = {m};
        g += t.verts[std::size_t(m)] *
             simplex_negpow_integral(t.vol, c, n_ + 2, std::span<const int>(ex, 1));
      }
    }
    return g;
  }

  // hess f(x) = (n+2) ∫ y y^T (v - <x,y>)^{-(n+3)} dy
  Mat hess(const Vec& x) const {
    Mat H = Mat::Zero(n_, n_);
    for (const auto& t : tris_) {
      auto c = values(t, x);
      for (int m = 0; m <= n_; ++m)
        for (int r = 0; r <= n_; ++r) {
          const int ex[2] = {m, r};
          H += t.verts[std::size_t(m)] * t.verts[std::size_t(r)].transpose() *
               simplex_negpow_integral(t.vol, c, n_ + 3, std::span<const int>(ex, 2));
        }
    }
    return (n_ + 2) * H;
  }

  // ∫ (v - <x,y>)^{-(n+2)} dy  (the nu normalizer)
  double mass(const Vec& x) const {
    double s = 0;
    for (const auto& t : tris_) s += simplex_negpow_integral(t.vol, values(t, x), n_ + 2);
    return s;
  }

 private:
  int n_;
  std::vector<detail::Tri> tris_;
  std::vector<Vec> vpts_;
  std::vector<double> vvals_;

  std::vector<double> values(const detail::Tri& t, const Vec& x) const {
    std::vector<double> c(t.base.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i] = t.base[i] - x.dot(t.verts[i]);
      if (c[i] <= 0)
        throw divergent_integral("shifted v is not positive on P");
    }
    return c;
  }
};

// ---------------------------------------------------------------------------
// I, J, E
// ---------------------------------------------------------------------------

inline double eval_J(const MaxAffineFunction& v, int n, const Subdivision& sub) {
  if (n != v.dimension())
    throw config_error("eval_J: n must match the domain dimension");
  if (sub.min_value <= 0)
    throw divergent_integral("eval_J: v must be positive on the domain");
  double s = 0;
  for (const auto& c : sub.cells) {
    const auto& p = v.pieces()[std::size_t(c.piece)];
    for (auto& t : triangulate(c, n)) {
      std::vector<double> vals;
      vals.reserve(t.verts.size());
      for (const auto& q : t.verts) vals.push_back(std::max(p.at(q), 1e-300));
      s += simplex_negpow_integral(t.volume, vals, n + 1);
    }
  }
  return s / (n + 1);
}

inline double eval_J(const MaxAffineFunction& v, int n) {
  return eval_J(v, n, subdivide(v));
}

inline double eval_I(const DualFunction& u, int k) {
  if (k < 0) throw config_error("eval_I: k must be a nonnegative integer");
  const int n = u.as_max_affine().dimension();
  double s = 0;
  for (const auto& c : u.cells_in_omega()) {
    const auto& p = u.pieces()[std::size_t(c.piece)];
    for (auto& t : triangulate(c, n)) {
      std::vector<double> vals;
      vals.reserve(t.verts.size());
      for (const auto& q : t.verts) vals.push_back(std::max(-p.at(q), 0.0));
      s += simplex_pow_integral(t.volume, vals, k + 1);
    }
  }
  return s / (k + 1);
}

inline double eval_I(const MaxAffineFunction& v, int k) {
  return eval_I(legendre_transform(v), k);
}

struct EnergyEvaluation {
  Subdivision sub;
  DualFunction u;
  double I = 0, J = 0, E = 0;
};

inline EnergyEvaluation evaluate_energy(const MaxAffineFunction& v, int k) {
  Subdivision sub = subdivide(v);
  if (sub.min_value <= 0)
    throw admissibility_error("energy undefined: v must be positive on P");
  const int n = v.dimension();
  DualFunction u = legendre_transform(v, sub);
  double J = eval_J(v, n, sub);
  double I = eval_I(u, k);
  double E = -std::log(I) + std::pow(J, -1.0 / (n + 1));
  return EnergyEvaluation{std::move(sub), std::move(u), I, J, E};
}

inline EnergyRecord eval_E(const MaxAffineFunction& v, int k) {
  EnergyEvaluation ev = evaluate_energy(v, k);
  return EnergyRecord{ev.I, ev.J, ev.E, k, v.dimension()};
}

// E(λv) = E(v) - (n+k+1) log λ + (λ-1) J^{-1/(n+1)}; minimized at
inline double optimal_scale(double J, int n, int k) {
  return (n + k + 1) * std::pow(J, 1.0 / (n + 1));
}

// ---------------------------------------------------------------------------
// First variation along a piece perturbation (slopes and/or intercepts)
// ---------------------------------------------------------------------------
struct Direction {
  std::vector<Vec> dslope;         // empty means zero slope perturbation
  std::vector<double> dintercept;  // empty means zero intercept perturbation
};

struct VariationBreakdown {
  double dI = 0, dJ = 0, dE = 0;
};

namespace detail {

// Velocity of the subdivision vertex w under the perturbation: active-piece
// equalities and domain facets pin w; differentiating them gives a linear
// system for dw/dt. The dual piece offset beta = v_t(w(t)) follows by the
// chain rule through any active piece.
struct VertexMotion {
  Vec wdot;
  double betadot;
};

inline VertexMotion vertex_motion(const SubVertex& w,
                                  const std::vector<AffinePiece>& pieces,
                                  const Polytope& P, const Vec* dslope,
                                  const double* dintercept,
                                  std::size_t npieces) {
  const int n = int(w.point.size());
  const int r0 = w.active_pieces.front();
  auto ds = [&](int i) -> Vec {
    return dslope ? dslope[std::size_t(i)] : Vec::Zero(n);
  };
  auto db = [&](int i) -> double {
    return dintercept ? dintercept[std::size_t(i)] : 0.0;
  };
  (void)npieces;

  const int rows = int(w.active_pieces.size()) - 1 + int(w.facets.size());
  Mat A(std::max(rows, 1), n);
  Vec rhs(std::max(rows, 1));
  int row = 0;
  for (std::size_t idx = 1; idx < w.active_pieces.size(); ++idx) {
    const int r = w.active_pieces[idx];
    A.row(row) = (pieces[std::size_t(r)].slope - pieces[std::size_t(r0)].slope)
                     .transpose();
    rhs[row] = -((ds(r) - ds(r0)).dot(w.point) + db(r) - db(r0));
    ++row;
  }
  for (int f : w.facets) {
    A.row(row) = P.halfspaces()[std::size_t(f)].normal.transpose();
    rhs[row] = 0.0;
    ++row;
  }
  VertexMotion m;
  if (row == 0) {
    // cannot happen for a genuine subdivision vertex; treat as pinned
    m.wdot = Vec::Zero(n);
  } else {
    A.conservativeResize(row, n);
    rhs.conservativeResize(row);
    m.wdot = A.completeOrthogonalDecomposition().solve(rhs);
  }
  m.betadot = ds(r0).dot(w.point) + db(r0) +
              pieces[std::size_t(r0)].slope.dot(m.wdot);
  return m;
}

}  // namespace detail

inline VariationBreakdown first_variation(const MaxAffineFunction& v, int k,
                                          const Direction& dir,
                                          const EnergyEvaluation& ev) {
  const int n = v.dimension();
  const std::size_t np = v.pieces().size();
  if (!dir.dslope.empty() && dir.dslope.size() != np)
    throw config_error("direction slope size mismatch");
  if (!dir.dintercept.empty() && dir.dintercept.size() != np)
    throw config_error("direction intercept size mismatch");
  const Vec* dsl = dir.dslope.empty() ? nullptr : dir.dslope.data();
  const double* dic = dir.dintercept.empty() ? nullptr : dir.dintercept.data();
  auto ds = [&](int i) -> Vec {
    return dsl ? dsl[std::size_t(i)] : Vec::Zero(n);
  };
  auto db = [&](int i) -> double { return dic ? dic[std::size_t(i)] : 0.0; };

  // dJ/dt = -∫_P (dv/dt) v^{-(n+2)}
  double dJ = 0;
  for (const auto& c : ev.sub.cells) {
    const auto& p = v.pieces()[std::size_t(c.piece)];
    const Vec dsi = ds(c.piece);
    const double dbi = db(c.piece);
    for (auto& t : triangulate(c, n)) {
      std::vector<double> vals;
      for (const auto& q : t.verts) vals.push_back(std::max(p.at(q), 1e-300));
      double m0 = simplex_negpow_integral(t.volume, vals, n + 2);
      double term = dbi * m0;
      if (dsl) {
        for (int m = 0; m <= n; ++m) {
          const int ex[1] = {m};
          term += dsi.dot(t.verts[std::size_t(m)]) *
                  simplex_negpow_integral(t.volume, vals, n + 2,
                                          std::span<const int>(ex, 1));
        }
      }
      dJ -= term;
    }
  }

  // dI/dt = -∫_Ω (du/dt) (-u)^k with du/dt = <wdot_j, x> - betadot_j on the
  // cell of dual piece j.
  double dI = 0;
  const auto& upieces = ev.u.pieces();
  for (const auto& c : ev.u.cells_in_omega()) {
    const auto& w = ev.sub.vertices[std::size_t(c.piece)];
    auto mot = detail::vertex_motion(w, v.pieces(), v.domain(), dsl, dic, np);
    const auto& p = upieces[std::size_t(c.piece)];
    for (auto& t : triangulate(c, n)) {
      std::vector<double> vals;
      for (const auto& q : t.verts) vals.push_back(std::max(-p.at(q), 0.0));
      double m0 = simplex_pow_integral(t.volume, vals, k);
      double term = -mot.betadot * m0;
      for (int m = 0; m <= n; ++m) {
        const int ex[1] = {m};
        term += mot.wdot.dot(t.verts[std::size_t(m)]) *
                simplex_pow_integral(t.volume, vals, k,
                                     std::span<const int>(ex, 1));
      }
      dI -= term;
    }
  }

  VariationBreakdown out;
  out.dI = dI;
  out.dJ = dJ;
  out.dE = -dI / ev.I -
           std::pow(ev.J, -(n + 2.0) / (n + 1.0)) / (n + 1.0) * dJ;
  return out;
}

inline VariationBreakdown first_variation(const MaxAffineFunction& v, int k,
                                          const Direction& dir) {
  return first_variation(v, k, dir, evaluate_energy(v, k));
}

inline double first_variation_E(const MaxAffineFunction& v, int k,
                                const Direction& dir) {
  return first_variation(v, k, dir).dE;
}

// Gradients of I and J with respect to all intercepts (slopes fixed),
// assembled from the structural vertex-motion terms.
inline std::pair<Vec, Vec> intercept_gradients(const MaxAffineFunction& v,
                                               int k,
                                               const EnergyEvaluation& ev) {
  const int n = v.dimension();
  const std::size_t np = v.pieces().size();
  Vec gJ = Vec::Zero(int(np));
  for (const auto& c : ev.sub.cells) {
    const auto& p = v.pieces()[std::size_t(c.piece)];
    double m0 = 0;
    for (auto& t : triangulate(c, n)) {
      std::vector<double> vals;
      for (const auto& q : t.verts) vals.push_back(std::max(p.at(q), 1e-300));
      m0 += simplex_negpow_integral(t.volume, vals, n + 2);
    }
    gJ[c.piece] -= m0;
  }

  Vec gI = Vec::Zero(int(np));
  for (const auto& c : ev.u.cells_in_omega()) {
    const auto& w = ev.sub.vertices[std::size_t(c.piece)];
    const auto& p = ev.u.pieces()[std::size_t(c.piece)];
    double M0 = 0;
    Vec M1 = Vec::Zero(n);
    for (auto& t : triangulate(c, n)) {
      std::vector<double> vals;
      for (const auto& q : t.verts) vals.push_back(std::max(-p.at(q), 0.0));
      M0 += simplex_pow_integral(t.volume, vals, k);
      for (int m = 0; m <= n; ++m) {
        const int ex[1] = {m};
        M1 += t.verts[std::size_t(m)] *
              simplex_pow_integral(t.volume, vals, k, std::span<const int>(ex, 1));
      }
    }
    // factor the active-constraint system once per vertex
    const int r0 = w.active_pieces.front();
    const int rows = int(w.active_pieces.size()) - 1 + int(w.facets.size());
    if (rows == 0) {
      gI[r0] += M0;  // wdot = 0, betadot = db_{r0}
      continue;
    }
    Mat A(rows, n);
    int row = 0;
    for (std::size_t idx = 1; idx < w.active_pieces.size(); ++idx) {
      const int r = w.active_pieces[idx];
      A.row(row++) =
          (v.pieces()[std::size_t(r)].slope - v.pieces()[std::size_t(r0)].slope)
              .transpose();
    }
    for (int f : w.facets)
      A.row(row++) = v.domain().halfspaces()[std::size_t(f)].normal.transpose();
    auto cod = A.completeOrthogonalDecomposition();
    const Vec a0 = v.pieces()[std::size_t(r0)].slope;
    for (int i : w.active_pieces) {
      Vec rhs = Vec::Zero(rows);
      int rr = 0;
      for (std::size_t idx = 1; idx < w.active_pieces.size(); ++idx) {
        const int r = w.active_pieces[idx];
        rhs[rr++] = -(double(r == i) - double(r0 == i));
      }
      Vec wdot = cod.solve(rhs);
      double betadot = double(r0 == i) + a0.dot(wdot);
      gI[i] -= wdot.dot(M1) - betadot * M0;
    }
  }
  return {std::move(gI), std::move(gJ)};
}

// Gradient of E with respect to the intercepts.
inline Vec energy_intercept_gradient(const MaxAffineFunction& v, int k,
                                     const EnergyEvaluation& ev) {
  auto [gI, gJ] = intercept_gradients(v, k, ev);
  const int n = v.dimension();
  return -gI / ev.I -
         std::pow(ev.J, -(n + 2.0) / (n + 1.0)) / (n + 1.0) * gJ;
}

// ---------------------------------------------------------------------------
// Optimal shift (Prop. "min over shifts"): the unique x0 in Omega minimizing
// f(x) = J(v - <x,.>), found by damped Newton on the strictly convex f.
// ---------------------------------------------------------------------------
struct ShiftDiagnostics {
  int iterations = 0;
  double residual = 0;      // |grad f| at the output
  double residual_scale = 0;  // nu normalizer at the output
};

inline Vec optimal_shift(const MaxAffineFunction& v, const Subdivision& sub,
                         ShiftDiagnostics* diag = nullptr) {
  if (sub.min_value <= 0)
    throw admissibility_error("optimal_shift: v must be positive on P");
  ShiftGeometry geo(v, sub);
  const int n = geo.dim();
  Vec x = Vec::Zero(n);
  double f = geo.J(x);
  const int max_iter = 200;
  for (int it = 0; it < max_iter; ++it) {
    Vec g = geo.grad(x);
    double scale = geo.mass(x);
    if (g.norm() <= 1e-9 * scale) {
      if (diag) *diag = {it, g.norm(), scale};
      return x;
    }
    Mat H = geo.hess(x);
    Vec d = H.ldlt().solve(-g);
    double alpha = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt, alpha *= 0.5) {
      Vec xn = x + alpha * d;
      if (geo.min_shifted_value(xn) <= 1e-13) continue;  // leaves Omega
      double fn = geo.J(xn);
      if (fn < f * (1 + 1e-14) ) {
        x = xn;
        f = fn;
        moved = true;
        break;
      }
    }
    if (!moved)
      throw convergence_error("optimal_shift: line search stalled");
  }
  throw convergence_error("optimal_shift: no convergence in 200 iterations");
}

inline Vec optimal_shift(const MaxAffineFunction& v,
                         ShiftDiagnostics* diag = nullptr) {
  return optimal_shift(v, subdivide(v), diag);
}

inline MaxAffineFunction project_to_Cn2(const MaxAffineFunction& v) {
  return v.shifted(optimal_shift(v));
}

// ---------------------------------------------------------------------------
// Mass removal: v~(y) = sup_{x in closure(Omega)} (<x,y> - u(x)), re-centered.
// Preserves I exactly, does not decrease J, and attains v~ = phi_Omega on dP.
// ---------------------------------------------------------------------------
inline MaxAffineFunction mass_removal(const MaxAffineFunction& v) {
  Subdivision sub = subdivide(v);
  DualFunction u = legendre_transform(v, sub);
  const int n = v.dimension();
  const double scale = std::max(1.0, u.bounding_box().diameter());
  std::vector<AffinePiece> ps;
  auto push = [&](const Vec& q, double uval) {
    for (const auto& p : ps)
      if ((p.slope - q).norm() <= 1e-9 * scale) return;
    ps.push_back({q, -uval});
  };
  for (const auto& c : u.cells_in_omega()) {
    const auto& p = u.pieces()[std::size_t(c.piece)];
    for (const auto& q : c.verts) push(q, p.at(q));
  }
  MaxAffineFunction vt = prune(MaxAffineFunction(std::move(ps), v.domain()));
  return project_to_Cn2(vt);
}

// (v1 + v2)/2 as a max-affine function (pairwise piece sums), pruned.
inline MaxAffineFunction midpoint_average(const MaxAffineFunction& v1,
                                          const MaxAffineFunction& v2) {
  std::vector<AffinePiece> ps;
  ps.reserve(v1.pieces().size() * v2.pieces().size());
  for (const auto& p : v1.pieces())
    for (const auto& q : v2.pieces())
      ps.push_back({0.5 * (p.slope + q.slope),
                    0.5 * (p.intercept + q.intercept)});
  return prune(MaxAffineFunction(std::move(ps), v1.domain()));
}

// ---------------------------------------------------------------------------
// Inequality suite: the explicit-constant bounds and the concavity test.
// ---------------------------------------------------------------------------
struct InequalityCheck {
  double lhs = 0, rhs = 0, margin = 0;
  bool holds = false;
};

struct InequalityReport {
  InequalityCheck lower_bound;   //  (n+1) J >= |Omega°| / (-inf u)
  InequalityCheck upper_bound;   //  J(v_c) <= (n+2)/(n+1) |Omega_c°| / |u_c(0)|
  std::optional<InequalityCheck> concavity;
  double santalo_product = 0;    //  |Omega| |Omega°|, reported only
};

inline InequalityReport inequality_suite(const MaxAffineFunction& v,
                                         const MaxAffineFunction* vprime = nullptr) {
  const int n = v.dimension();
  InequalityReport rep;

  Subdivision sub = subdivide(v);
  DualFunction u = legendre_transform(v, sub);
  const double J = eval_J(v, n, sub);
  const Polytope& omega = u.negativity_region();
  const Polytope polar = polar_body(omega);
  {
    double lhs = (n + 1) * J;
    double rhs = volume(polar) / (-u.min_value());
    rep.lower_bound = {lhs, rhs, lhs - rhs, lhs - rhs >= -1e-6 * std::abs(rhs)};
  }
  rep.santalo_product = volume(omega) * volume(polar);

  {
    // Prop 3.4 applied after re-centering at the Chebyshev center of Omega.
    Vec xc = chebyshev_center(omega).first;
    MaxAffineFunction vc = v.shifted(xc);
    Subdivision subc = subdivide(vc);
    DualFunction uc = legendre_transform(vc, subc);
    double Jc = eval_J(vc, n, subc);
    double u0 = uc.value(Vec::Zero(n));
    double rhs = (n + 2.0) / (n + 1.0) *
                 volume(polar_body(uc.negativity_region())) / std::abs(u0);
    rep.upper_bound = {Jc, rhs, rhs - Jc, rhs - Jc >= -1e-6 * std::abs(rhs)};
  }

  if (vprime) {
    double J1 = std::pow(J, -1.0 / (n + 1));
    double J2 = std::pow(eval_J(*vprime, n), -1.0 / (n + 1));
    MaxAffineFunction mid = midpoint_average(v, *vprime);
    double Jm = std::pow(eval_J(mid, n), -1.0 / (n + 1));
    double lhs = Jm, rhs = 0.5 * (J1 + J2);
    rep.concavity = InequalityCheck{lhs, rhs, lhs - rhs,
                                    lhs - rhs >= -1e-6 * std::abs(rhs)};
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The measure pair (mu, nu)
// ---------------------------------------------------------------------------
struct MeasurePair {
  int k = 0, n = 0;
  double mu_normalizer = 0;  // ∫ (-u)_+^k
  double nu_normalizer = 0;  // ∫_P v^{-(n+2)}
  Vec nu_barycenter;
  MaxAffineFunction v;
  DualFunction u;

  double mu_density(const Vec& x) const {
    return std::pow(std::max(-u.value(x), 0.0), k) / mu_normalizer;
  }
  double nu_density(const Vec& y) const {
    return std::pow(v.value(y), -(n + 2)) / nu_normalizer;
  }
  const Polytope& mu_support() const { return u.negativity_region(); }
  const Polytope& nu_support() const { return v.domain(); }
};

inline MeasurePair make_measure_pair(const MaxAffineFunction& v, int k) {
  Subdivision sub = subdivide(v);
  DualFunction u = legendre_transform(v, sub);
  const int n = v.dimension();
  MeasurePair mp{k, n, 0.0, 0.0, Vec::Zero(n), v, std::move(u)};

  for (const auto& c : mp.u.cells_in_omega()) {
    const auto& p = mp.u.pieces()[std::size_t(c.piece)];
    for (auto& t : triangulate(c, n)) {
      std::vector<double> vals;
      for (const auto& q : t.verts) vals.push_back(std::max(-p.at(q), 0.0));
      mp.mu_normalizer += simplex_pow_integral(t.volume, vals, k);
    }
  }
  Vec bar = Vec::Zero(n);
  for (const auto& c : sub.cells) {
    const auto& p = v.pieces()[std::size_t(c.piece)];
    for (auto& t : triangulate(c, n)) {
      std::vector<double> vals;
      for (const auto& q : t.verts) vals.push_back(std::max(p.at(q), 1e-300));
      mp.nu_normalizer += simplex_negpow_integral(t.volume, vals, n + 2);
      for (int m = 0; m <= n; ++m) {
        const int ex[1] = {m};
        bar += t.verts[std::size_t(m)] *
               simplex_negpow_integral(t.volume, vals, n + 2,
                                       std::span<const int>(ex, 1));
      }
    }
  }
  mp.nu_barycenter = bar / mp.nu_normalizer;
  return mp;
}

// Largest |v*| over boundary samples; small for solved outputs.
inline double vstar_boundary_max(const MaxAffineFunction& v,
                                 int samples_per_facet = 33) {
  const Polytope& P = v.domain();
  double m = 0;
  if (P.dimension() == 1) {
    for (const auto& vt : P.vertices()) m = std::max(m, std::abs(v.v_star(vt)));
    return m;
  }
  const auto& hs = P.halfspaces();
  for (std::size_t f = 0; f < hs.size(); ++f) {
    auto fv = P.facet_vertices(f);
    if (fv.size() < 2) continue;
    for (int s = 0; s < samples_per_facet; ++s) {
      double t = (s + 0.5) / samples_per_facet;
      Vec y = (1 - t) * fv[0] + t * fv[1];
      m = std::max(m, std::abs(v.v_star(y)));
    }
  }
  return m;
}

}  // namespace mafb
