// Independent oracles and post-hoc PDE checks: the 1D shooting oracle for
//   v'' = v^{-3} (v - y v')^{-k},  v* = 0 at y = ±1,
// mollified Monge-Ampere residuals, the moment-measure transform, the
// homogenized-ansatz constant, boundary exponent fits, and the free-boundary
// strict convexity test.
#pragma once

#include <boost/numeric/odeint.hpp>

#include "mafb/functionals.hpp"

namespace mafb {

// ---------------------------------------------------------------------------
// 1D shooting oracle.
//
// State (v, w = v', s = -v*) with s' = -y v^{-3} s^{-k}. The substitution
// tau = (1-y)^{1/(k+1)} removes the endpoint singularity: s ~ sigma0 * tau
// with sigma0^{k+1} = (k+1) v(1)^{-3}. Shooting is done FROM the boundary on
// the single parameter A = v(1) = v'(1): linearizing around the singular
// solution shows deviations scale like tau^{-k}, so integrating inward
// (tau increasing) damps them while the center condition v'(0) = 0 remains a
// stable target. Integrating outward instead caps the attainable boundary
// defect near sqrt(machine epsilon).
// ---------------------------------------------------------------------------
struct OdeProfile {
  int k = 1;
  std::vector<double> y;   // increasing grid on [0, 1]
  std::vector<double> v;   // even profile: value(-y) = value(y)
  std::vector<double> vp;  // v' on the grid (odd)
  double boundary_defect = 0;  // |s| at y = 1 after the shooting solve
  double center_value = 0;     // v(0)

  double value(double yy) const { return interp(std::abs(yy), v, false); }
  double deriv(double yy) const {
    double d = interp(std::abs(yy), vp, true);
    return yy >= 0 ? d : -d;
  }
  double vstar(double yy) const { return yy * deriv(yy) - value(yy); }
  double second_deriv(double yy) const {  // from the ODE itself
    double vv = value(yy), s = -vstar(yy);
    return std::pow(vv, -3.0) * std::pow(std::max(s, 1e-300), -double(k));
  }

 private:
  // cubic Hermite on (v, vp); derivative interpolation uses v'' from the ODE
  double interp(double yy, const std::vector<double>& f, bool is_deriv) const {
    if (yy >= y.back()) return f.back();
    auto it = std::upper_bound(y.begin(), y.end(), yy);
    std::size_t i = std::max<std::ptrdiff_t>(1, it - y.begin()) - 1;
    double h = y[i + 1] - y[i], t = (yy - y[i]) / h;
    if (!is_deriv) {
      double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
      double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
      return h00 * f[i] + h10 * h * vp[i] + h01 * f[i + 1] + h11 * h * vp[i + 1];
    }
    double d0 = dd(i), d1 = dd(i + 1);
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * f[i] + h10 * h * d0 + h01 * f[i + 1] + h11 * h * d1;
  }
  double dd(std::size_t i) const {
    double s = std::max(v[i] - y[i] * vp[i], 1e-300);
    return std::pow(v[i], -3.0) * std::pow(s, -double(k));
  }
};

struct OracleOptions {
  double bracket_lo = 0.2;
  double bracket_hi = 5.0;
  double integrator_tol = 1e-13;
  double max_dtau = 2e-4;
  double tau_start = 1e-7;  // matching point for the boundary expansion
};

namespace detail {

struct TauShot {
  double v_center = 0;       // v at y = 0
  double w_center = 0;       // v' at y = 0 (the shooting residual)
  double model_mismatch = 0; // |s_integrated - s_expansion| probed near tau0
  bool crashed = false;
  std::vector<double> tau, v, w;  // tau increasing from tau0 to 1
};

// Integrate inward from the boundary with data v(1) = v'(1) = A and the
// two-term expansion s = sigma0 tau + (1-gamma)(sigma0/gamma) tau^{k+2}.
inline TauShot integrate_from_boundary(int k, double A,
                                       const OracleOptions& opt, bool record) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 3>;  // v, w, s
  const double kk = k;
  const double gamma = (kk + 2) / (kk + 1);
  const double sigma0 = std::pow((kk + 1) / (A * A * A), 1.0 / (kk + 1));
  const double p = sigma0 / gamma;
  auto rhs = [&](const State& x, State& dx, double tau) {
    const double y = 1.0 - std::pow(tau, kk + 1);
    const double sigma = std::max(x[2], 1e-280) / tau;
    const double f = std::pow(x[0], -3.0) * std::pow(sigma, -kk);  // v'' tau^k
    dx[0] = -(kk + 1) * std::pow(tau, kk) * x[1];
    dx[1] = -(kk + 1) * f;
    dx[2] = (kk + 1) * y * f;
  };
  const double tau0 = opt.tau_start;
  const double t0 = std::pow(tau0, kk + 1);
  State x;
  x[0] = A - A * t0 + p * std::pow(t0, gamma);
  x[1] = A - gamma * p * tau0;
  x[2] = sigma0 * tau0 + (1 - gamma) * p * std::pow(tau0, kk + 2);

  TauShot shot;
  auto stepper = ode::make_controlled<ode::runge_kutta_fehlberg78<State>>(
      opt.integrator_tol, opt.integrator_tol);
  const double cap = record ? opt.max_dtau : 5e-3;
  double tau = tau0;
  double dt = tau0;
  const double tau_probe = 32 * tau0;
  bool probed = false;
  if (record) {
    shot.tau.push_back(tau);
    shot.v.push_back(x[0]);
    shot.w.push_back(x[1]);
  }
  while (tau < 1.0) {
    if (!std::isfinite(x[0]) || !std::isfinite(x[2]) || x[0] <= 0 ||
        x[2] <= 0) {
      shot.crashed = true;
      shot.w_center = (x[1] > 0 || !std::isfinite(x[1])) ? 1e3 : -1e3;
      return shot;
    }
    if (!probed && tau >= tau_probe) {
      double model = sigma0 * tau + (1 - gamma) * p * std::pow(tau, kk + 2);
      shot.model_mismatch = std::abs(x[2] - model);
      probed = true;
    }
    dt = std::min(std::abs(dt), cap);
    if (tau + dt > 1.0) dt = 1.0 - tau;
    auto res = stepper.try_step(rhs, x, tau, dt);
    if (res == ode::controlled_step_result::success) {
      if (record) {
        shot.tau.push_back(tau);
        shot.v.push_back(x[0]);
        shot.w.push_back(x[1]);
      }
    } else if (std::abs(dt) < 1e-17) {
      shot.crashed = true;
      shot.w_center = 1e3;
      return shot;
    }
  }
  shot.v_center = x[0];
  shot.w_center = x[1];
  return shot;
}

}  // namespace detail

inline OdeProfile ode_shooting_oracle(int k, OracleOptions opt = {}) {
  if (k < 1)
    throw config_error(
        "ode_shooting_oracle requires k >= 1 (the k = 0 two-point problem "
        "degenerates in 1D)");
  // residual: v'(0; A), vanishing at the even solution
  auto shoot = [&](double A) {
    return detail::integrate_from_boundary(k, A, opt, false).w_center;
  };
  double lo = opt.bracket_lo, hi = opt.bracket_hi;
  const int scan = 40;
  double prev_a = lo, prev_r = shoot(lo);
  double blo = 0, bhi = 0;
  bool found = false;
  for (int i = 1; i <= scan && !found; ++i) {
    double a = lo * std::pow(hi / lo, double(i) / scan);
    double r = shoot(a);
    if (prev_r == 0 || (prev_r < 0) != (r < 0)) {
      blo = prev_a;
      bhi = a;
      found = true;
    }
    prev_a = a;
    prev_r = r;
  }
  if (!found)
    throw convergence_error(
        "ode_shooting_oracle: no sign change of the center-slope residual for "
        "v(1) in [" +
        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  double flo = shoot(blo);
  for (int it = 0; it < 200 && bhi - blo > 1e-16 * bhi; ++it) {
    double mid = 0.5 * (blo + bhi);
    double fm = shoot(mid);
    if ((fm < 0) == (flo < 0)) {
      blo = mid;
      flo = fm;
    } else {
      bhi = mid;
    }
  }
  const double A = 0.5 * (blo + bhi);
  auto shot = detail::integrate_from_boundary(k, A, opt, true);
  if (shot.crashed) throw convergence_error("ode_shooting_oracle: final shot crashed");

  OdeProfile prof;
  prof.k = k;
  prof.center_value = shot.v_center;
  // the boundary condition holds by construction up to the expansion error,
  // probed against the integrated s near the matching point, plus the center
  // residual of the bisection
  prof.boundary_defect = shot.model_mismatch + std::abs(shot.w_center);
  // tau increasing = y decreasing; reverse into an increasing-y grid and pin
  // the exact boundary data at y = 1
  for (std::size_t i = shot.tau.size(); i-- > 0;) {
    prof.y.push_back(1.0 - std::pow(shot.tau[i], double(k) + 1));
    prof.v.push_back(shot.v[i]);
    prof.vp.push_back(shot.w[i]);
  }
  prof.y.push_back(1.0);
  prof.v.push_back(A);
  prof.vp.push_back(A);
  return prof;
}

// Max-affine interpolant of the oracle profile: tangent pieces at npieces
// points clustered toward the endpoints like the solver's own refinement.
inline MaxAffineFunction oracle_to_max_affine(const OdeProfile& prof,
                                              int npieces) {
  std::vector<AffinePiece> ps;
  int half = npieces / 2;
  for (int i = 0; i < half; ++i) {
    double t = (i + 0.5) / half;
    double yy = 1.0 - std::pow(1.0 - t, 1.6);  // cluster toward y = 1
    for (double sgn : {-1.0, 1.0}) {
      double y0 = sgn * yy;
      Vec a(1);
      a[0] = prof.deriv(y0);
      ps.push_back({a, prof.value(y0) - a[0] * y0});
    }
  }
  Vec a0(1);
  a0[0] = 0.0;
  ps.push_back({a0, prof.value(0.0)});
  return prune(MaxAffineFunction(ps, Polytope::interval(-1, 1)));
}

// ---------------------------------------------------------------------------
// Mollified Hessians of a max-affine function. Convolution with the C^2 bump
// rho_h ∝ (1 - |z/h|^2)^3, evaluated cell-exactly (the integrand is affine on
// each subdivision cell), then central differences with step h/4.
// ---------------------------------------------------------------------------
namespace detail {

inline const std::vector<std::pair<double, double>>& gauss16() {
  static const std::vector<std::pair<double, double>> gl = [] {
    // 16-point Gauss-Legendre nodes/weights on [-1,1] by Newton iteration
    std::vector<std::pair<double, double>> out(16);
    const int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = x;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      double p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1);
      out[std::size_t(n - 1 - i)] = {x, 2.0 / ((1 - x * x) * dp * dp)};
    }
    return out;
  }();
  return gl;
}

// C^2 bump (1-r^2)^3 normalized on the unit ball, dimension 1 or 2.
inline double bump(double r2) {
  if (r2 >= 1.0) return 0.0;
  double t = 1.0 - r2;
  return t * t * t;
}
inline double bump_norm(int dim) { return dim == 1 ? 32.0 / 35.0 : M_PI / 4.0; }

}  // namespace detail

// Evaluates (f * rho_h)(x) for a function affine on known convex cells.
class MollifiedMaxAffine {
 public:
  MollifiedMaxAffine(const MaxAffineFunction& f, double h)
      : f_(f), h_(h), sub_(subdivide(f)) {}

  MollifiedMaxAffine(const MaxAffineFunction& f, double h, Subdivision sub)
      : f_(f), h_(h), sub_(std::move(sub)) {}

  double width() const { return h_; }

  double value(const Vec& x) const {
    const int dim = f_.dimension();
    const double c = detail::bump_norm(dim) * std::pow(h_, dim);
    double acc = 0;
    if (dim == 1) {
      const auto& gl = detail::gauss16();
      for (const auto& cell : sub_.cells) {
        double a = std::max(cell.verts[0][0], x[0] - h_);
        double b = std::min(cell.verts[1][0], x[0] + h_);
        if (b <= a) continue;
        const auto& p = f_.pieces()[std::size_t(cell.piece)];
        for (auto [t, w] : gl) {
          double yy = 0.5 * (a + b) + 0.5 * (b - a) * t;
          double r = (yy - x[0]) / h_;
          Vec y(1);
          y[0] = yy;
          acc += 0.5 * (b - a) * w * p.at(y) * detail::bump(r * r);
        }
      }
      return acc / c;
    }
    // dim == 2: clip cells to the support square, integrate per triangle with
    // a tensor rule through the Duffy map
    const auto& gl = detail::gauss16();
    const double tol = 1e-12 * std::max(1.0, h_);
    poly2::P2 xc(x[0], x[1]);
    for (const auto& cell : sub_.cells) {
      poly2::Polygon poly;
      for (const auto& q : cell.verts) poly.push_back(poly2::P2(q[0], q[1]));
      poly = poly2::clip(poly, poly2::P2(1, 0), x[0] + h_, tol);
      poly = poly2::clip(poly, poly2::P2(-1, 0), -(x[0] - h_), tol);
      poly = poly2::clip(poly, poly2::P2(0, 1), x[1] + h_, tol);
      poly = poly2::clip(poly, poly2::P2(0, -1), -(x[1] - h_), tol);
      if (poly.size() < 3) continue;
      const auto& p = f_.pieces()[std::size_t(cell.piece)];
      poly2::P2 o = poly[0];
      for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        poly2::P2 e1 = poly[i] - o, e2 = poly[i + 1] - o;
        double jac = e1.x() * e2.y() - e1.y() * e2.x();
        if (std::abs(jac) < 1e-300) continue;
        for (auto [tu, wu] : gl) {
          double uu = 0.5 * (tu + 1);
          for (auto [tv, wv] : gl) {
            double vv = 0.5 * (tv + 1) * (1 - uu);
            poly2::P2 q = o + uu * e1 + vv * e2;
            double r2 = (q - xc).squaredNorm() / (h_ * h_);
            Vec y(2);
            y << q.x(), q.y();
            acc += 0.25 * wu * wv * (1 - uu) * jac * p.at(y) *
                   detail::bump(r2);
          }
        }
      }
    }
    return acc / c;
  }

  // central second differences with step h/4
  Mat hessian(const Vec& x) const {
    const int dim = f_.dimension();
    const double d = h_ / 4.0;
    Mat H(dim, dim);
    const double f0 = value(x);
    for (int i = 0; i < dim; ++i) {
      Vec e = Vec::Zero(dim);
      e[i] = d;
      H(i, i) = (value(x + e) - 2 * f0 + value(x - e)) / (d * d);
      for (int j = i + 1; j < dim; ++j) {
        Vec ej = Vec::Zero(dim);
        ej[j] = d;
        double v = (value(x + e + ej) - value(x + e - ej) -
                    value(x - e + ej) + value(x - e - ej)) /
                   (4 * d * d);
        H(i, j) = H(j, i) = v;
      }
    }
    return H;
  }

 private:
  MaxAffineFunction f_;
  double h_;
  Subdivision sub_;
};

// ---------------------------------------------------------------------------
// Monge-Ampere residual: max over interior samples of
//   | det D^2 v_h * v^{n+2} * (-v*)^k - 1 |.
// ---------------------------------------------------------------------------
struct ResidualSummary {
  int sample_count = 0;
  int excluded = 0;  // samples where -v* is not positive
  double max_relative_residual = 0;
  double mean_relative_residual = 0;
  double interior_margin = 0;
  double smoothing_width = 0;
};

struct MaResidualOptions {
  double smoothing_width = 0;   // 0: auto from piece count
  double interior_margin = 0.1; // fraction of the inradius kept clear of dP
  int samples = 200;
  std::uint64_t seed = 12345;
};

inline ResidualSummary ma_residual(const MaxAffineFunction& v, int k,
                                   MaResidualOptions opt = {}) {
  const int n = v.dimension();
  const Polytope& P = v.domain();
  auto [center, inradius] = chebyshev_center(P);
  double h = opt.smoothing_width;
  if (h <= 0)
    h = 1.2 * P.diameter() /
        std::sqrt(double(v.pieces().size())) * (n == 1 ? 0.5 : 0.45);
  h = std::min(h, 0.9 * opt.interior_margin * inradius);

  // deterministic interior samples: shrink P about its Chebyshev center
  std::vector<Vec> samples;
  Rng rng(opt.seed);
  const double shrink = 1.0 - opt.interior_margin * inradius * 2.0 / P.diameter();
  auto [lo, hi] = P.bounding_box();
  while (int(samples.size()) < opt.samples) {
    Vec y(n);
    for (int d = 0; d < n; ++d) y[d] = rng.uniform(lo[d], hi[d]);
    Vec z = center + shrink * (y - center);
    bool deep = true;
    for (const auto& hs : P.halfspaces())
      if (hs.normal.dot(z) > hs.offset - opt.interior_margin * inradius) {
        deep = false;
        break;
      }
    if (deep) samples.push_back(z);
  }

  MollifiedMaxAffine vh(v, h);
  ResidualSummary out;
  out.interior_margin = opt.interior_margin;
  out.smoothing_width = h;
  std::vector<double> res(samples.size(), -1.0);
  parallel_for(samples.size(), [&](std::size_t i) {
    const Vec& y = samples[i];
    double mvstar = -v.v_star(y);
    if (mvstar <= 1e-12) return;  // too close to the boundary behavior
    double det = vh.hessian(y).determinant();
    double lhs = det * std::pow(v.value(y), n + 2) * std::pow(mvstar, k);
    res[i] = std::abs(lhs - 1.0);
  });
  double sum = 0;
  for (double r : res) {
    if (r < 0) {
      ++out.excluded;
      continue;
    }
    ++out.sample_count;
    sum += r;
    out.max_relative_residual = std::max(out.max_relative_residual, r);
  }
  out.mean_relative_residual = out.sample_count ? sum / out.sample_count : 0;
  return out;
}

// ---------------------------------------------------------------------------
// Transport characterization: push mu = (-u)_+^k dx / Z through grad u and
// compare with nu; duality-gap battery for perturbed potentials.
// ---------------------------------------------------------------------------
struct PushforwardReport {
  std::size_t samples = 0;
  double mc_tolerance = 0;        // 3 / sqrt(N)
  double max_moment_error = 0;    // first and second moments vs exact nu
  double min_duality_gap = 0;     // over the perturbation battery
  int gap_count = 0;
  Vec nu_barycenter;
  bool moments_ok = false;
  bool gaps_ok = false;
};

inline PushforwardReport pushforward_check(const MaxAffineFunction& v, int k,
                                           std::size_t N, int perturbations,
                                           std::uint64_t seed) {
  const int n = v.dimension();
  MeasurePair mp = make_measure_pair(v, k);
  const DualFunction& u = mp.u;
  const Polytope& omega = u.negativity_region();
  auto [lo, hi] = omega.bounding_box();
  const double umin = u.min_value();

  PushforwardReport rep;
  rep.samples = N;
  rep.mc_tolerance = 3.0 / std::sqrt(double(N));
  rep.nu_barycenter = mp.nu_barycenter;

  // nu moments: first moments by the exact formula, second moments by
  // per-simplex Gauss quadrature (the integrand is smooth on each cell)
  Vec nu_m1 = Vec::Zero(n);
  Mat nu_m2 = Mat::Zero(n, n);
  {
    Subdivision sub = subdivide(v);
    const auto& gl = detail::gauss16();
    for (const auto& c : sub.cells) {
      const auto& p = v.pieces()[std::size_t(c.piece)];
      for (auto& t : triangulate(c, n)) {
        std::vector<double> vals;
        for (const auto& q : t.verts) vals.push_back(std::max(p.at(q), 1e-300));
        for (int m = 0; m <= n; ++m) {
          const int ex[1] = {m};
          nu_m1 += t.verts[std::size_t(m)] *
                   simplex_negpow_integral(t.volume, vals, n + 2,
                                           std::span<const int>(ex, 1));
        }
        if (n == 1) {
          double a = t.verts[0][0], b = t.verts[1][0];
          for (auto [tt, ww] : gl) {
            double yy = 0.5 * (a + b) + 0.5 * (b - a) * tt;
            Vec y(1);
            y[0] = yy;
            nu_m2(0, 0) += 0.5 * (b - a) * ww * yy * yy *
                           std::pow(p.at(y), -double(n + 2));
          }
        } else {
          const Vec& o = t.verts[0];
          Vec e1 = t.verts[1] - o, e2 = t.verts[2] - o;
          double jac = e1[0] * e2[1] - e1[1] * e2[0];
          for (auto [tu, wu] : gl) {
            double uu = 0.5 * (tu + 1);
            for (auto [tv, wv] : gl) {
              double vv = 0.5 * (tv + 1) * (1 - uu);
              Vec y = o + uu * e1 + vv * e2;
              double w = 0.25 * wu * wv * (1 - uu) * std::abs(jac) *
                         std::pow(p.at(y), -double(n + 2));
              nu_m2 += w * y * y.transpose();
            }
          }
        }
      }
    }
    nu_m1 /= mp.nu_normalizer;
    nu_m2 /= mp.nu_normalizer;
  }

  // mu samples by rejection, pushed through grad u
  std::vector<Vec> xs(N);
  parallel_for(N, [&](std::size_t i) {
    Rng r = Rng(seed).fork(i);
    for (;;) {
      Vec x(n);
      for (int d = 0; d < n; ++d) x[d] = r.uniform(lo[d], hi[d]);
      double dens = std::pow(std::max(-u.value(x), 0.0) / (-umin), double(k));
      if (r.uniform() < dens) {
        xs[i] = x;
        break;
      }
    }
  });

  Vec m1 = Vec::Zero(n);
  Mat m2 = Mat::Zero(n, n);
  std::vector<Vec> pushed(N);
  for (std::size_t i = 0; i < N; ++i) {
    pushed[i] = u.gradient(xs[i]);
    m1 += pushed[i];
    m2 += pushed[i] * pushed[i].transpose();
  }
  m1 /= double(N);
  m2 /= double(N);
  rep.max_moment_error = (m1 - nu_m1).cwiseAbs().maxCoeff();
  rep.max_moment_error =
      std::max(rep.max_moment_error, (m2 - nu_m2).cwiseAbs().maxCoeff());
  rep.moments_ok = rep.max_moment_error <= rep.mc_tolerance;

  // duality gaps: [∫ vhat dnu + ∫ uhat dmu] - [∫ v dnu + ∫ u dmu] >= 0 for
  // perturbed admissible vhat; differences estimated with common samples.
  Rng rng(seed ^ 0xabcdef);
  rep.min_duality_gap = std::numeric_limits<double>::infinity();
  // nu samples for the v-side difference
  std::size_t Nv = N;
  std::vector<Vec> ys(Nv);
  {
    auto [plo, phi] = v.domain().bounding_box();
    double vmin = subdivide(v).min_value;
    parallel_for(Nv, [&](std::size_t i) {
      Rng r = Rng(seed ^ 0x5555).fork(i);
      for (;;) {
        Vec y(n);
        for (int d = 0; d < n; ++d) y[d] = r.uniform(plo[d], phi[d]);
        if (!v.domain().contains(y)) continue;
        double dens = std::pow(vmin / v.value(y), n + 2);
        if (r.uniform() < dens) {
          ys[i] = y;
          break;
        }
      }
    });
  }
  for (int t = 0; t < perturbations; ++t) {
    std::vector<AffinePiece> ps = v.pieces();
    double eps = (t % 2 == 0 ? 0.05 : 0.3) * (0.5 + rng.uniform());
    for (auto& p : ps) p.intercept += eps * rng.normal();
    MaxAffineFunction vhat(ps, v.domain());
    DualFunction uhat = legendre_transform(vhat);
    double dv = 0, du = 0;
    for (std::size_t i = 0; i < Nv; ++i) dv += vhat.value(ys[i]) - v.value(ys[i]);
    dv /= double(Nv);
    for (std::size_t i = 0; i < N; ++i) du += uhat.value(xs[i]) - u.value(xs[i]);
    du /= double(N);
    double gap = dv + du;
    rep.min_duality_gap = std::min(rep.min_duality_gap, gap);
    ++rep.gap_count;
  }
  rep.gaps_ok = rep.min_duality_gap >= -rep.mc_tolerance;
  return rep;
}

// ---------------------------------------------------------------------------
// Moment-measure (Klartag) transform: z = x / (-u(x)), phi(z) = 1 / (-u(x)).
// For piecewise-linear u with pieces <w,x> - beta (beta > 0), phi is again
// max-affine: phi(z) = max_j (1 + <w_j, z>) / beta_j. The check evaluates
// det D^2 phi_h * phi^{n+2+k} across samples and reports the relative spread.
// ---------------------------------------------------------------------------
struct KlartagReport {
  double spread = 0;  // (max-min)/mean over samples
  double mean_constant = 0;
  int samples = 0;
  int excluded = 0;
};

inline MaxAffineFunction klartag_transform(const DualFunction& u,
                                           const Polytope& zdomain) {
  std::vector<AffinePiece> ps;
  for (const auto& p : u.pieces()) {
    double beta = -p.intercept;
    if (beta <= 1e-12) continue;
    Vec slope = p.slope / beta;
    ps.push_back({slope, 1.0 / beta});
  }
  return MaxAffineFunction(std::move(ps), zdomain);
}

inline KlartagReport klartag_transform_check(const DualFunction& u, int k,
                                             int samples_per_dim = 9,
                                             double interior_fraction = 0.8,
                                             double smoothing = 0) {
  const int n = u.as_max_affine().dimension();
  const Polytope& omega = u.negativity_region();

  // x samples in the shrunk Omega, mapped to z
  std::vector<Vec> zs;
  int total = samples_per_dim;
  if (n == 2) total = samples_per_dim * samples_per_dim;
  Rng rng(777);
  auto [lo, hi] = omega.bounding_box();
  int excluded = 0;
  while (int(zs.size()) < total) {
    Vec x(n);
    for (int d = 0; d < n; ++d) x[d] = rng.uniform(lo[d], hi[d]);
    Vec xi = interior_fraction * x;
    if (!omega.contains(xi)) continue;
    double mu = -u.value(xi);
    if (mu <= 0) {
      ++excluded;
      continue;
    }
    zs.push_back(xi / mu);
  }

  Vec zlo = zs.front(), zhi = zs.front();
  for (const auto& z : zs) {
    zlo = zlo.cwiseMin(z);
    zhi = zhi.cwiseMax(z);
  }
  double span = (zhi - zlo).norm() + 1.0;
  Polytope zbox = Polytope::box(zlo - Vec::Constant(n, 0.2 * span),
                                zhi + Vec::Constant(n, 0.2 * span));
  MaxAffineFunction phi = klartag_transform(u, zbox);
  double h = smoothing > 0
                 ? smoothing
                 : 0.8 * span / std::sqrt(double(phi.pieces().size()));
  MollifiedMaxAffine phih(phi, h);

  KlartagReport rep;
  rep.excluded = excluded;
  double mn = std::numeric_limits<double>::infinity(), mx = -mn, mean = 0;
  for (const auto& z : zs) {
    double det = phih.hessian(z).determinant();
    double c = det * std::pow(phi.value(z), n + 2 + k);
    mn = std::min(mn, c);
    mx = std::max(mx, c);
    mean += c;
    ++rep.samples;
  }
  mean /= rep.samples;
  rep.mean_constant = mean;
  rep.spread = (mx - mn) / mean;
  return rep;
}

// ---------------------------------------------------------------------------
// Homogenized ansatz residual (n = 1 base): phi(z, lambda) = (lambda v(z/l))^m
// on the cone over P; (d phi/d x_{n+1})^k det D^2 phi should equal
// (m-1) m^{n+k+1} with m = (2n+k+2)/(n+k+1).
// ---------------------------------------------------------------------------
inline Rational ansatz_constant_exact(int n, int k) {
  Rational m(2 * n + k + 2, n + k + 1);
  Rational mm1 = m - Rational(1);
  return mm1 * m.pow(n + k + 1);
}

struct AnsatzReport {
  double target = 0;
  double max_relative_deviation = 0;
  double boundary_derivative_max = 0;  // |d phi / d x_{n+1}| near the cone boundary
  int samples = 0;
};

namespace detail {

// Mollified value of the homogenized function over a 2D cone (n = 1 base):
// integrate over the support square, split along the kink rays of v.
class MollifiedCone2D {
 public:
  MollifiedCone2D(const MaxAffineFunction& v, double m, double h)
      : v_(v), m_(m), h_(h) {
    Subdivision sub = subdivide(v);
    std::vector<double> ks;
    for (const auto& w : sub.vertices) ks.push_back(w.point[0]);
    std::sort(ks.begin(), ks.end());
    kinks_ = std::move(ks);
  }

  double phi(double z, double lambda) const {
    return std::pow(lambda * v_.value(Vec::Constant(1, z / lambda)), m_);
  }

  double value(const Vec& x) const {
    // wedges between consecutive kink rays {z = kink * lambda}
    const auto& gl = gauss16();
    const double c = bump_norm(2) * h_ * h_;
    poly2::P2 xc(x[0], x[1]);
    poly2::Polygon sq = {{x[0] - h_, x[1] - h_},
                         {x[0] + h_, x[1] - h_},
                         {x[0] + h_, x[1] + h_},
                         {x[0] - h_, x[1] + h_}};
    double acc = 0;
    const double tol = 1e-13 * std::max(1.0, h_);
    for (std::size_t w = 0; w + 1 < kinks_.size(); ++w) {
      // wedge: kink_w * lambda <= z <= kink_{w+1} * lambda
      poly2::Polygon poly = sq;
      poly = poly2::clip(poly, unit_ray_normal(kinks_[w], true),
                         0.0, tol);
      poly = poly2::clip(poly, unit_ray_normal(kinks_[w + 1], false), 0.0, tol);
      if (poly.size() < 3) continue;
      poly2::P2 o = poly[0];
      for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        poly2::P2 e1 = poly[i] - o, e2 = poly[i + 1] - o;
        double jac = e1.x() * e2.y() - e1.y() * e2.x();
        for (auto [tu, wu] : gl) {
          double uu = 0.5 * (tu + 1);
          for (auto [tv, wv] : gl) {
            double vv = 0.5 * (tv + 1) * (1 - uu);
            poly2::P2 q = o + uu * e1 + vv * e2;
            double r2 = (q - xc).squaredNorm() / (h_ * h_);
            if (r2 >= 1 || q.y() <= 1e-9) continue;
            acc += 0.25 * wu * wv * (1 - uu) * jac * phi(q.x(), q.y()) *
                   bump(r2);
          }
        }
      }
    }
    return acc / c;
  }

  Mat hessian(const Vec& x) const {
    const double d = h_ / 4.0;
    Mat H(2, 2);
    double f0 = value(x);
    for (int i = 0; i < 2; ++i) {
      Vec e = Vec::Zero(2);
      e[i] = d;
      H(i, i) = (value(x + e) - 2 * f0 + value(x - e)) / (d * d);
      for (int j = i + 1; j < 2; ++j) {
        Vec ej = Vec::Zero(2);
        ej[j] = d;
        double vv = (value(x + e + ej) - value(x + e - ej) -
                     value(x - e + ej) + value(x - e - ej)) /
                    (4 * d * d);
        H(i, j) = H(j, i) = vv;
      }
    }
    return H;
  }

  double dlambda(const Vec& x) const {
    const double d = h_ / 4.0;
    Vec e = Vec::Zero(2);
    e[1] = d;
    return (value(x + e) - value(x - e)) / (2 * d);
  }

 private:
  // normal of {z - kink*lambda <= 0} (lower=true keeps z >= kink*lambda)
  static poly2::P2 unit_ray_normal(double kink, bool lower) {
    poly2::P2 nn(1.0, -kink);
    nn /= nn.norm();
    return lower ? poly2::P2(-nn) : nn;
  }

  const MaxAffineFunction& v_;
  double m_;
  double h_;
  std::vector<double> kinks_;
};

}  // namespace detail

inline AnsatzReport ansatz_residual(const MaxAffineFunction& v, int k,
                                    int samples = 30, double smoothing = 0) {
  const int n = v.dimension();
  if (n != 1)
    throw config_error(
        "ansatz_residual cone sampling is implemented for the 1D base; the "
        "constant identity itself is dimension-generic (ansatz_constant_exact)");
  const double m = 1.0 + double(n + 1) / double(n + k + 1);
  AnsatzReport rep;
  rep.target = ansatz_constant_exact(n, k).to_double();

  auto [lo, hi] = v.domain().bounding_box();
  double h = smoothing > 0
                 ? smoothing
                 : 0.7 * (hi[0] - lo[0]) / std::sqrt(double(v.pieces().size()));
  detail::MollifiedCone2D phih(v, m, h);

  // interior cone samples: lambda near 1, z/lambda in the middle of P
  Rng rng(4242);
  for (int s = 0; s < samples; ++s) {
    double lambda = 0.9 + 0.2 * rng.uniform();
    double yy = 0.6 * (lo[0] + (hi[0] - lo[0]) * rng.uniform());
    Vec x(2);
    x << yy * lambda, lambda;
    Mat H = phih.hessian(x);
    double dl = phih.dlambda(x);
    double val = std::pow(dl, double(k)) * H.determinant();
    rep.max_relative_deviation =
        std::max(rep.max_relative_deviation,
                 std::abs(val - rep.target) / rep.target);
    ++rep.samples;
  }

  // d phi / d lambda -> 0 toward the cone boundary, via the exact per-piece
  // formula  d phi/d lambda = m (lambda v)^{m-1} (-v*).
  for (double sgn : {-1.0, 1.0}) {
    double edge = sgn > 0 ? hi[0] : lo[0];
    double yy = edge - sgn * 1e-4 * (hi[0] - lo[0]);
    Vec y(1);
    y[0] = yy;
    double val = m * std::pow(v.value(y), m - 1) * (-v.v_star(y));
    rep.boundary_derivative_max =
        std::max(rep.boundary_derivative_max, std::abs(val));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Boundary exponent fit (Theorem "boundary-regularity"): near a facet-interior
// anchor, v - affine ~ p t^{1 + 1/(k+1)} along the inward normal.
// ---------------------------------------------------------------------------
struct ExponentFit {
  int face_id = -1;
  double fitted_exponent = 0;
  double coefficient = 0;  // p > 0
  Mat tangential_hessian;  // (n-1) x (n-1), positive definite on success
  double fit_residual = 0; // rms of the log-log fit
  bool tangential_pd = true;
};

struct ExponentFitOptions {
  double t_min = 0.02;
  double t_max = 0.2;    // fractions of the domain diameter
  int samples = 24;
  double drop_nearest = 0.10;  // exclude the nearest fraction of the window
  double tangential_scale = 0.15;
};

namespace detail {

// one-sided normal derivative of a profile-like callable, Richardson style
template <class F>
double one_sided_slope(F&& f, double f0, double h, double gamma_guess) {
  double d1 = (f(h) - f0) / h;
  double d2 = (f(2 * h) - f0) / (2 * h);
  double g = std::pow(2.0, gamma_guess - 1.0);
  return (g * d1 - d2) / (g - 1.0);
}

}  // namespace detail

template <class F>
ExponentFit fit_boundary_exponent_1d(F&& value_along_normal, double normal_slope,
                                     double extent,
                                     ExponentFitOptions opt = {}) {
  // value_along_normal(t) = v(anchor + t * inward_normal), t in [0, extent]
  const double f0 = value_along_normal(0.0);
  const double t_lo =
      (opt.t_min + opt.drop_nearest * (opt.t_max - opt.t_min)) * extent;
  const double t_hi = opt.t_max * extent;
  std::vector<double> lt, lr;
  for (int i = 0; i < opt.samples; ++i) {
    double t = t_lo * std::pow(t_hi / t_lo, double(i) / (opt.samples - 1));
    double rem = value_along_normal(t) - f0 - normal_slope * t;
    if (rem <= 0) continue;
    lt.push_back(std::log(t));
    lr.push_back(std::log(rem));
  }
  if (lt.size() < 4)
    throw stratum_error("exponent fit: not enough positive remainders");
  double n = double(lt.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    sx += lt[i];
    sy += lr[i];
    sxx += lt[i] * lt[i];
    sxy += lt[i] * lr[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double inter = (sy - slope * sx) / n;
  double rss = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    double e = lr[i] - slope * lt[i] - inter;
    rss += e * e;
  }
  ExponentFit fit;
  fit.fitted_exponent = slope;
  fit.coefficient = std::exp(inter);
  fit.fit_residual = std::sqrt(rss / n);
  fit.tangential_hessian = Mat::Zero(0, 0);
  return fit;
}

inline ExponentFit fit_boundary_exponent(const MaxAffineFunction& v,
                                         std::size_t face,
                                         ExponentFitOptions opt = {}) {
  const Polytope& P = v.domain();
  const int n = P.dimension();
  if (face >= P.halfspaces().size()) throw config_error("bad face id");
  const auto& hs = P.halfspaces()[face];
  auto fverts = P.facet_vertices(face);
  Vec anchor;
  if (n == 1) {
    anchor = fverts.at(0);
  } else {
    // facet-interior anchor: midpoint (middle third of the facet)
    anchor = 0.5 * (fverts.at(0) + fverts.at(1));
    double flen = (fverts[1] - fverts[0]).norm();
    // stratum guard: the window must stay in the facet's interior third
    if (opt.tangential_scale * P.diameter() > flen / 3.0)
      throw stratum_error(
          "exponent fit window too close to the lower-dimensional stratum");
  }
  Vec inward = -hs.normal;
  const double extent = P.diameter();

  // active piece just inside the anchor = exact one-sided gradient
  Vec probe = anchor + 1e-9 * extent * inward;
  Vec grad = v.gradient(probe);
  double normal_slope = grad.dot(inward);

  auto along = [&](double t) { return v.value(anchor + t * inward); };
  ExponentFit fit = fit_boundary_exponent_1d(along, normal_slope, extent, opt);
  fit.face_id = int(face);

  if (n == 2) {
    Vec tangent(2);
    tangent << -hs.normal[1], hs.normal[0];
    double s = opt.tangential_scale * extent;
    // second difference along the facet, nudged inward to stay in P
    Vec base = anchor + opt.t_min * extent * inward;
    double second = (v.value(base + s * tangent) - 2 * v.value(base) +
                     v.value(base - s * tangent)) /
                    (s * s);
    fit.tangential_hessian = Mat::Constant(1, 1, second);
    fit.tangential_pd = second > 0;
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Strict convexity of the free boundary {u = 0}: trace the level set radially
// (exact for the polyhedral u) and look for long flat runs.
// ---------------------------------------------------------------------------
struct ConvexityReport {
  double min_defect = 0;       // most negative mid-point deviation (convexity)
  double max_flat_run = 0;     // longest arc with defects below the threshold
  double diameter = 0;
  double flat_threshold = 0;   // 1e-6 * diam
  double run_limit = 0;        // 0.1 * diam
  bool convex = false;
  bool strictly_convex = false;
};

inline ConvexityReport free_boundary_convexity_check(const DualFunction& u,
                                                     int resolution = 2048) {
  const int n = u.as_max_affine().dimension();
  if (n != 2)
    throw config_error("free_boundary_convexity_check expects a 2D dual");
  const auto& pieces = u.pieces();
  auto radial = [&](double theta) {
    Vec d(2);
    d << std::cos(theta), std::sin(theta);
    double r = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces) {
      double a = p.slope.dot(d);
      if (a > 1e-14) r = std::min(r, -p.intercept / a);
    }
    if (!std::isfinite(r)) throw error("free boundary trace failed");
    return Vec(r * d);
  };
  std::vector<Vec> b(resolution);
  for (int i = 0; i < resolution; ++i)
    b[std::size_t(i)] = radial(2 * M_PI * i / resolution);

  ConvexityReport rep;
  rep.diameter = u.negativity_region().diameter();
  rep.flat_threshold = 1e-6 * rep.diameter;
  rep.run_limit = 0.1 * rep.diameter;

  std::vector<double> defect(b.size());
  rep.min_defect = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Vec& a = b[(i + b.size() - 1) % b.size()];
    const Vec& m = b[i];
    const Vec& c = b[(i + 1) % b.size()];
    Vec ch = c - a;
    double chord = ch.norm();
    double cross = ch[0] * (m - a)[1] - ch[1] * (m - a)[0];
    // height of the middle point over the chord, positive for outward bulge
    defect[i] = chord > 1e-300 ? -cross / chord : 0.0;
    rep.min_defect = std::min(rep.min_defect, defect[i]);
  }
  // longest run of consecutive near-flat samples, measured by arc length
  double run = 0, best = 0;
  for (std::size_t pass = 0; pass < 2; ++pass) {  // wrap around once
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (defect[i] < rep.flat_threshold) {
        run += (b[(i + 1) % b.size()] - b[i]).norm();
        best = std::max(best, run);
      } else {
        run = 0;
      }
    }
  }
  rep.max_flat_run = std::min(best, 2 * M_PI * rep.diameter);
  rep.convex = rep.min_defect >= -1e-9 * std::max(1.0, rep.diameter);
  rep.strictly_convex = rep.convex && rep.max_flat_run <= rep.run_limit;
  return rep;
}

}  // namespace mafb
