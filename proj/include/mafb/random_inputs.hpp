// Seeded generator of random admissible max-affine functions: tangents of a
// random positive quadratic at well-separated points, filtered so the induced
// subdivision has structural margins (no sliver cells, no near-coincident
// vertices). The margins keep finite-difference checks of the first
// variation inside a single combinatorial regime.
#pragma once

#include "mafb/functionals.hpp"

namespace mafb {

struct RandomInputOptions {
  int pieces = 8;
  double min_value = 0.1;       // lower bound for v on the domain
  double vertex_margin = 0.05;  // min subdivision-vertex separation / diameter
  double cell_margin = 4e-3;    // min cell measure / diameter^n
  int max_attempts = 500;
};

inline MaxAffineFunction random_admissible(Rng& rng, const Polytope& P,
                                           RandomInputOptions opt = {}) {
  const int n = P.dimension();
  auto [lo, hi] = P.bounding_box();
  const double diam = P.diameter();
  const double minsep =
      0.35 * (hi - lo).norm() / opt.pieces * (n == 1 ? 2.0 : 1.1);

  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    Mat A = Mat::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double t = 0.25 * rng.normal();
        A(i, j) += t;
        A(j, i) += t;
      }
    A = (A * A.transpose()).eval();
    A *= (0.4 + 0.4 * rng.uniform()) / A.norm();
    Vec g0 = 0.25 * rng.normal() * Vec::Ones(n);
    const double c = 1.5 + rng.uniform();

    std::vector<Vec> pts;
    for (int tries = 0; tries < 3000 && int(pts.size()) < opt.pieces; ++tries) {
      Vec y(n);
      for (int d = 0; d < n; ++d) y[d] = rng.uniform(lo[d], hi[d]);
      if (!P.contains(y)) continue;
      bool ok = true;
      for (const auto& p : pts)
        if ((p - y).norm() < minsep) {
          ok = false;
          break;
        }
      if (ok) pts.push_back(y);
    }
    if (int(pts.size()) < opt.pieces) continue;

    std::vector<AffinePiece> ps;
    for (const auto& y : pts) {
      Vec slope = A * y + g0;
      double q = 0.5 * y.dot(A * y) + g0.dot(y) + c;
      ps.push_back({slope, q - slope.dot(y)});
    }
    try {
      MaxAffineFunction v = prune(MaxAffineFunction(ps, P));
      if (int(v.pieces().size()) < opt.pieces) continue;
      Subdivision sub = subdivide(v);
      if (sub.min_value < opt.min_value) continue;
      bool good = true;
      for (std::size_t i = 0; i < sub.vertices.size() && good; ++i)
        for (std::size_t j = i + 1; j < sub.vertices.size(); ++j)
          if ((sub.vertices[i].point - sub.vertices[j].point).norm() <
              opt.vertex_margin * diam) {
            good = false;
            break;
          }
      for (const auto& cell : sub.cells)
        if (cell.measure < opt.cell_margin * std::pow(diam, n)) good = false;
      if (good) return v;
    } catch (const error&) {
    }
  }
  throw convergence_error("random_admissible: no admissible sample found");
}

// Random intercept direction with unit sup-norm.
inline Direction random_intercept_direction(Rng& rng, std::size_t npieces) {
  Direction d;
  d.dintercept.resize(npieces);
  double mx = 0;
  for (auto& x : d.dintercept) {
    x = rng.normal();
    mx = std::max(mx, std::abs(x));
  }
  for (auto& x : d.dintercept) x /= mx;
  return d;
}

}  // namespace mafb
