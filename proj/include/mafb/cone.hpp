// Degree-m homogenization over the cone C(P) = {(lambda y, lambda)} and the
// orthogonal change of variables aligning the cone axis with the orthant
// diagonal.
#pragma once

#include "mafb/max_affine.hpp"

namespace mafb {

inline double homogenization_degree(int n, int k) {
  return 1.0 + double(n + 1) / double(n + k + 1);
}

// phi(lambda y, lambda) = (lambda v(y))^m on C(P), m > 1.
class HomogenizedFunction {
 public:
  HomogenizedFunction(MaxAffineFunction v, double m)
      : v_(std::move(v)), m_(m) {
    if (!(m_ > 1.0)) throw config_error("homogenization degree must exceed 1");
  }

  const MaxAffineFunction& base() const { return v_; }
  double degree() const { return m_; }
  int cone_dimension() const { return v_.dimension() + 1; }

  double value(const Vec& zl) const {
    const auto [y, lambda] = split(zl);
    return std::pow(lambda * v_.value(y), m_);
  }

  // d phi / d x_{n+1} = m (lambda v)^{m-1} (-v*) through the active piece
  double axis_derivative(const Vec& zl) const {
    const auto [y, lambda] = split(zl);
    return m_ * std::pow(lambda * v_.value(y), m_ - 1.0) * (-v_.v_star(y));
  }

 private:
  std::pair<Vec, double> split(const Vec& zl) const {
    const int n = v_.dimension();
    if (zl.size() != n + 1)
      throw cone_domain_error("cone point has wrong dimension");
    const double lambda = zl[n];
    if (lambda <= 0)
      throw cone_domain_error("cone point needs positive last coordinate");
    Vec y = zl.head(n) / lambda;
    if (!v_.domain().contains(y, 1e-9 * std::max(1.0, v_.domain().diameter())))
      throw cone_domain_error("point lies outside the cone over the domain");
    return {std::move(y), lambda};
  }

  MaxAffineFunction v_;
  double m_;
};

inline HomogenizedFunction homogenize(const MaxAffineFunction& v, double m) {
  return HomogenizedFunction(v, m);
}

// Orthogonal T with T(0,...,0,1) = (1,...,1)/sqrt(n+1). When the cone rays
// (q_i, 1) over the simplex vertices are pairwise orthogonal (regular
// simplex, <q_i,q_j> = -1), T additionally maps each ray to a coordinate
// axis, so T(C(P)) is exactly the positive orthant. The standard barycentered
// simplex only has orthogonal rays for n = 1; for n >= 2 the axis-aligning
// Householder reflection is used and the image cone is not the orthant.
struct OrthantTransform {
  Mat T;      // (n+1) x (n+1), orthogonal
  bool exact; // true when the cone maps onto the orthant

  Vec apply(const Vec& x) const { return T * x; }
  Vec invert(const Vec& x) const { return T.transpose() * x; }
};

inline OrthantTransform transform_to_orthant(const Polytope& simplex) {
  const int n = simplex.dimension();
  if (int(simplex.vertices().size()) != n + 1)
    throw config_error("transform_to_orthant expects a simplex");
  std::vector<Vec> q = simplex.vertices();
  std::sort(q.begin(), q.end(), [](const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a[i] < b[i] - 1e-12) return true;
      if (a[i] > b[i] + 1e-12) return false;
    }
    return false;
  });

  const double scale = std::max(1.0, simplex.diameter());
  bool orthogonal_rays = true;
  for (int i = 0; i <= n && orthogonal_rays; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (std::abs(q[std::size_t(i)].dot(q[std::size_t(j)]) + 1.0) >
          1e-9 * scale * scale) {
        orthogonal_rays = false;
        break;
      }

  OrthantTransform out;
  if (orthogonal_rays) {
    Mat R(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
      Vec ray(n + 1);
      ray.head(n) = q[std::size_t(i)];
      ray[n] = 1.0;
      R.col(i) = ray.normalized();
    }
    out.T = R.transpose();
    out.exact = true;
  } else {
    Vec diag = Vec::Constant(n + 1, 1.0 / std::sqrt(double(n + 1)));
    Vec e = Vec::Zero(n + 1);
    e[n] = 1.0;
    Vec h = e - diag;
    if (h.norm() < 1e-14) {
      out.T = Mat::Identity(n + 1, n + 1);
    } else {
      out.T = Mat::Identity(n + 1, n + 1) -
              2.0 * (h * h.transpose()) / h.squaredNorm();
    }
    out.exact = false;
  }
  return out;
}

// phi composed with T^{-1}: a function on (the image of) the orthant.
class OrthantFunction {
 public:
  OrthantFunction(HomogenizedFunction phi, OrthantTransform t)
      : phi_(std::move(phi)), t_(std::move(t)) {}

  double value(const Vec& x) const { return phi_.value(t_.invert(x)); }
  const OrthantTransform& transform() const { return t_; }
  const HomogenizedFunction& cone_function() const { return phi_; }

 private:
  HomogenizedFunction phi_;
  OrthantTransform t_;
};

inline OrthantFunction transform_to_orthant(const HomogenizedFunction& phi) {
  return OrthantFunction(phi, transform_to_orthant(phi.base().domain()));
}

}  // namespace mafb
