// Convex polytopes kept in synchronized vertex and halfspace form (n ≤ 3 for
// the generic converters), plus the polygon clipping kit used by the
// subdivision machinery.
#pragma once

#include <algorithm>
#include <optional>

#include "mafb/core.hpp"

namespace mafb {

struct Halfspace {
  Vec normal;     // unit length after construction
  double offset;  // set is { y : <normal,y> <= offset }
};

namespace poly2 {

using P2 = Eigen::Vector2d;
using Polygon = std::vector<P2>;  // CCW, convex

inline double area(const Polygon& p) {
  double a = 0;
  const std::size_t m = p.size();
  for (std::size_t i = 0; i < m; ++i) {
    const P2& u = p[i];
    const P2& v = p[(i + 1) % m];
    a += u.x() * v.y() - v.x() * u.y();
  }
  return 0.5 * a;
}

inline P2 centroid(const Polygon& p) {
  if (p.empty()) return P2::Zero();
  P2 c = P2::Zero();
  for (const auto& q : p) c += q;
  return c / double(p.size());
}

// Keep { x : <n,x> <= c } (Sutherland-Hodgman on a convex CCW polygon).
inline Polygon clip(const Polygon& poly, const P2& n, double c, double tol) {
  Polygon out;
  const std::size_t m = poly.size();
  if (m == 0) return out;
  out.reserve(m + 2);
  for (std::size_t i = 0; i < m; ++i) {
    const P2& a = poly[i];
    const P2& b = poly[(i + 1) % m];
    const double da = c - n.dot(a);
    const double db = c - n.dot(b);
    if (da >= -tol) out.push_back(a);
    if ((da > tol && db < -tol) || (da < -tol && db > tol)) {
      double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  // merge near-duplicate consecutive points
  Polygon clean;
  clean.reserve(out.size());
  for (const auto& q : out) {
    if (clean.empty() || (q - clean.back()).norm() > tol) clean.push_back(q);
  }
  while (clean.size() > 1 && (clean.front() - clean.back()).norm() <= tol)
    clean.pop_back();
  if (clean.size() < 3) return {};
  return clean;
}

inline Polygon hull(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const P2& a, const P2& b) {
                          return (a - b).norm() < 1e-12;
                        }),
            pts.end());
  const std::size_t m = pts.size();
  if (m < 3) return pts;
  auto cross = [](const P2& o, const P2& a, const P2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) -
           (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<P2> h(2 * m);
  std::size_t k = 0;
  for (std::size_t i = 0; i < m; ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = m - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace poly2

class Polytope {
 public:
  Polytope() = default;

  static Polytope from_vertices(int dim, std::vector<Vec> pts);
  static Polytope from_halfspaces(int dim, std::vector<Halfspace> hs);
  static Polytope interval(double lo, double hi);
  static Polytope box(const Vec& lo, const Vec& hi);
  // P = ∩_i { y_i >= -1 } ∩ { Σ y_i <= 1 }, barycenter at the origin.
  static Polytope barycentered_simplex(int n);
  // Regular simplex with <q_i,q_j> = -1 for i != j; its cone C(P) is a
  // rotated orthant, which the standard simplex cone is not for n >= 2.
  static Polytope regular_simplex(int n);

  int dimension() const { return dim_; }
  bool degenerate() const { return degenerate_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }

  double diameter() const {
    double d = 0;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      for (std::size_t j = i + 1; j < vertices_.size(); ++j)
        d = std::max(d, (vertices_[i] - vertices_[j]).norm());
    return d;
  }

  double geom_tol() const { return kGeomTol * std::max(1.0, diameter()); }

  bool contains(const Vec& y, double tol) const {
    for (const auto& h : halfspaces_)
      if (h.normal.dot(y) > h.offset + tol) return false;
    return true;
  }
  bool contains(const Vec& y) const { return contains(y, geom_tol()); }

  bool origin_interior(double margin = 0.0) const {
    for (const auto& h : halfspaces_)
      if (h.offset <= margin + geom_tol()) return false;
    return true;
  }

  Vec vertex_barycenter() const {
    Vec b = Vec::Zero(dim_);
    for (const auto& v : vertices_) b += v;
    return b / double(vertices_.size());
  }

  // Largest r with B_r(0) ⊂ P; requires the origin inside.
  double inradius_about_origin() const {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& h : halfspaces_) r = std::min(r, h.offset);
    return r;
  }

  poly2::Polygon polygon() const {
    if (dim_ != 2) throw error("polygon(): dimension is not 2");
    poly2::Polygon p;
    p.reserve(vertices_.size());
    for (const auto& v : vertices_) p.push_back(poly2::P2(v[0], v[1]));
    return p;
  }

  std::pair<Vec, Vec> bounding_box() const {
    Vec lo = vertices_.front(), hi = vertices_.front();
    for (const auto& v : vertices_) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    return {lo, hi};
  }

  std::vector<Vec> facet_vertices(std::size_t f) const {
    const auto& h = halfspaces_.at(f);
    std::vector<Vec> out;
    const double tol = geom_tol();
    for (const auto& v : vertices_)
      if (std::abs(h.normal.dot(v) - h.offset) <= tol) out.push_back(v);
    return out;
  }

 private:
  int dim_ = 0;
  bool degenerate_ = false;
  std::vector<Vec> vertices_;
  std::vector<Halfspace> halfspaces_;

  static Polytope raw(int dim, std::vector<Vec> vs, std::vector<Halfspace> hs) {
    Polytope p;
    p.dim_ = dim;
    p.vertices_ = std::move(vs);
    p.halfspaces_ = std::move(hs);
    p.verify_forms();
    return p;
  }

  void verify_forms() const {
    // consistency guard; looser than the construction tolerances so that
    // near-duplicate input halfspaces cannot trip it
    const double tol = 1e-6 * std::max(1.0, diameter());
    for (const auto& v : vertices_)
      for (const auto& h : halfspaces_)
        if (h.normal.dot(v) > h.offset + tol)
          throw invalid_polytope("vertex violates halfspace form");
    for (const auto& h : halfspaces_) {
      double m = -std::numeric_limits<double>::infinity();
      for (const auto& v : vertices_) m = std::max(m, h.normal.dot(v));
      if (m < h.offset - tol)
        throw invalid_polytope("halfspace not supported by vertex form");
    }
  }

  friend Polytope polar_body(const Polytope&);
};

namespace detail {

inline Vec cross3d(const Vec& a, const Vec& b) {
  Vec c(3);
  c[0] = a[1] * b[2] - a[2] * b[1];
  c[1] = a[2] * b[0] - a[0] * b[2];
  c[2] = a[0] * b[1] - a[1] * b[0];
  return c;
}

inline std::vector<Halfspace> normalized(std::vector<Halfspace> hs) {
  for (auto& h : hs) {
    double n = h.normal.norm();
    if (n < 1e-14) throw invalid_polytope("zero normal in halfspace");
    h.normal /= n;
    h.offset /= n;
  }
  return hs;
}

// Vertex enumeration of a bounded halfspace intersection, n <= 3.
// Throws unbounded_polytope if the set is unbounded, invalid_polytope if it
// has empty interior.
inline std::vector<Vec> enumerate_vertices(int dim,
                                           const std::vector<Halfspace>& hs) {
  double scale = 1.0;
  for (const auto& h : hs) scale = std::max(scale, std::abs(h.offset));

  if (dim == 1) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& h : hs) {
      if (h.normal[0] > 0)
        hi = std::min(hi, h.offset / h.normal[0]);
      else
        lo = std::max(lo, h.offset / h.normal[0]);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw unbounded_polytope("interval unbounded");
    if (lo >= hi - kGeomTol * scale)
      throw invalid_polytope("empty interior");
    Vec a(1), b(1);
    a[0] = lo;
    b[0] = hi;
    return {a, b};
  }

  if (dim == 2) {
    auto run = [&](double R) {
      poly2::Polygon poly = {{-R, -R}, {R, -R}, {R, R}, {-R, R}};
      const double tol = kGeomTol * R;
      for (const auto& h : hs) {
        poly = poly2::clip(poly, poly2::P2(h.normal[0], h.normal[1]), h.offset,
                           tol);
        if (poly.empty()) break;
      }
      return poly;
    };
    double R = 1e6 * scale;
    poly2::Polygon poly = run(R);
    if (poly.empty()) throw invalid_polytope("empty interior");
    for (const auto& q : poly)
      if (q.cwiseAbs().maxCoeff() > 0.999 * R)
        throw unbounded_polytope("halfspace intersection unbounded");
    // second pass at the natural scale for clean coordinates
    double R2 = 0;
    for (const auto& q : poly) R2 = std::max(R2, q.cwiseAbs().maxCoeff());
    poly = run(4.0 * R2 + 1.0);
    if (std::abs(poly2::area(poly)) < kGeomTol * scale * scale)
      throw invalid_polytope("empty interior");
    std::vector<Vec> out;
    for (const auto& q : poly) {
      Vec v(2);
      v << q.x(), q.y();
      out.push_back(v);
    }
    return out;
  }

  if (dim == 3) {
    // brute force over constraint triples, with a guard box for boundedness
    std::vector<Halfspace> all = hs;
    const double R = 1e5 * scale;
    for (int i = 0; i < 3; ++i)
      for (double s : {1.0, -1.0}) {
        Halfspace h;
        h.normal = Vec::Zero(3);
        h.normal[i] = s;
        h.offset = R;
        all.push_back(h);
      }
    const std::size_t m = all.size();
    std::vector<Vec> verts;
    const double tol = 1e3 * kGeomTol * scale;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t l = j + 1; l < m; ++l) {
          Eigen::Matrix3d A;
          A.row(0) = all[i].normal.transpose();
          A.row(1) = all[j].normal.transpose();
          A.row(2) = all[l].normal.transpose();
          if (std::abs(A.determinant()) < 1e-10) continue;
          Eigen::Vector3d b(all[i].offset, all[j].offset, all[l].offset);
          Eigen::Vector3d x = A.fullPivLu().solve(b);
          bool ok = true;
          for (const auto& h : all)
            if (h.normal.dot(x) > h.offset + tol) {
              ok = false;
              break;
            }
          if (!ok) continue;
          if (x.cwiseAbs().maxCoeff() > 0.999 * R)
            throw unbounded_polytope("halfspace intersection unbounded");
          bool dup = false;
          for (const auto& v : verts)
            if ((v - Vec(x)).norm() < tol) {
              dup = true;
              break;
            }
          if (!dup) verts.push_back(x);
        }
    if (verts.size() < 4) throw invalid_polytope("empty interior");
    return verts;
  }

  throw error("vertex enumeration implemented for n <= 3");
}

inline std::vector<Vec> ordered_facet_polygon(const std::vector<Vec>& pts,
                                              const Vec& normal) {
  // order coplanar 3D points by angle around their centroid
  Vec c = Vec::Zero(3);
  for (const auto& p : pts) c += p;
  c /= double(pts.size());
  Vec a = cross3d(normal, Vec(Eigen::Vector3d(1, 0, 0)));
  if (a.norm() < 1e-8) a = cross3d(normal, Vec(Eigen::Vector3d(0, 1, 0)));
  a.normalize();
  Vec b = cross3d(normal, a).normalized();
  std::vector<std::pair<double, Vec>> ang;
  for (const auto& p : pts)
    ang.push_back({std::atan2(b.dot(p - c), a.dot(p - c)), p});
  std::sort(ang.begin(), ang.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Vec> out;
  for (auto& [t, p] : ang) out.push_back(p);
  return out;
}

}  // namespace detail

inline Polytope Polytope::from_vertices(int dim, std::vector<Vec> pts) {
  if (pts.empty()) throw invalid_polytope("empty vertex list");
  for (const auto& p : pts)
    if (p.size() != dim) throw invalid_polytope("vertex dimension mismatch");

  double scale = 1.0;
  for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double tol = kGeomTol * scale;

  // affine rank
  Mat D(dim, int(pts.size()) - 1);
  for (std::size_t i = 1; i < pts.size(); ++i)
    D.col(int(i) - 1) = pts[i] - pts[0];
  const bool degenerate =
      pts.size() <= std::size_t(dim) ||
      Eigen::FullPivLU<Mat>(D).setThreshold(1e-9).rank() < dim;
  if (degenerate) {
    Polytope p;
    p.dim_ = dim;
    p.degenerate_ = true;
    p.vertices_ = std::move(pts);
    return p;
  }

  if (dim == 1) {
    double lo = pts[0][0], hi = pts[0][0];
    for (const auto& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return interval(lo, hi);
  }

  if (dim == 2) {
    std::vector<poly2::P2> q;
    for (const auto& p : pts) q.push_back(poly2::P2(p[0], p[1]));
    poly2::Polygon h = poly2::hull(std::move(q));
    std::vector<Vec> vs;
    std::vector<Halfspace> hss;
    const std::size_t m = h.size();
    for (std::size_t i = 0; i < m; ++i) {
      Vec v(2);
      v << h[i].x(), h[i].y();
      vs.push_back(v);
      poly2::P2 d = h[(i + 1) % m] - h[i];
      Vec n(2);
      n << d.y(), -d.x();  // outward for CCW
      n.normalize();
      hss.push_back({n, n[0] * h[i].x() + n[1] * h[i].y()});
    }
    return raw(2, std::move(vs), std::move(hss));
  }

  if (dim == 3) {
    const std::size_t m = pts.size();
    std::vector<Halfspace> hss;
    auto have_plane = [&](const Vec& n, double c) {
      for (const auto& h : hss)
        if ((h.normal - n).norm() < 1e-9 && std::abs(h.offset - c) < tol)
          return true;
      return false;
    };
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        for (std::size_t l = j + 1; l < m; ++l) {
          Vec n = detail::cross3d(pts[j] - pts[i], pts[l] - pts[i]);
          if (n.norm() < tol * scale) continue;
          n.normalize();
          double c = n.dot(pts[i]);
          int above = 0, below = 0;
          for (const auto& p : pts) {
            double d = n.dot(p) - c;
            if (d > tol) ++above;
            if (d < -tol) ++below;
          }
          if (above > 0 && below > 0) continue;
          Vec nn = above == 0 ? n : Vec(-n);
          double cc = above == 0 ? c : -c;
          if (!have_plane(nn, cc)) hss.push_back({nn, cc});
        }
    // extreme points lie on >= 3 facets
    std::vector<Vec> vs;
    for (const auto& p : pts) {
      int cnt = 0;
      for (const auto& h : hss)
        if (std::abs(h.normal.dot(p) - h.offset) <= tol) ++cnt;
      if (cnt >= 3) {
        bool dup = false;
        for (const auto& v : vs)
          if ((v - p).norm() < tol) dup = true;
        if (!dup) vs.push_back(p);
      }
    }
    return raw(3, std::move(vs), std::move(hss));
  }

  throw error("from_vertices implemented for n <= 3");
}

inline Polytope Polytope::from_halfspaces(int dim, std::vector<Halfspace> hs) {
  if (hs.empty()) throw invalid_polytope("empty halfspace list");
  for (const auto& h : hs)
    if (h.normal.size() != dim)
      throw invalid_polytope("halfspace dimension mismatch");
  hs = detail::normalized(std::move(hs));
  std::vector<Vec> vs = detail::enumerate_vertices(dim, hs);
  double scale = 1.0;
  for (const auto& v : vs) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  const double tol = 1e3 * kGeomTol * scale;
  // drop redundant halfspaces
  std::vector<Halfspace> kept;
  for (const auto& h : hs) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& v : vs) m = std::max(m, h.normal.dot(v));
    if (m >= h.offset - tol) {
      bool dup = false;
      for (const auto& g : kept)
        if ((g.normal - h.normal).norm() < 1e-9 &&
            std::abs(g.offset - h.offset) < tol)
          dup = true;
      if (!dup) kept.push_back(h);
    }
  }
  if (dim == 2) {
    // keep the CCW vertex order produced by the clipper
    return raw(2, std::move(vs), std::move(kept));
  }
  if (dim == 1) {
    return raw(1, std::move(vs), std::move(kept));
  }
  return raw(3, std::move(vs), std::move(kept));
}

inline Polytope Polytope::interval(double lo, double hi) {
  if (!(lo < hi)) throw invalid_polytope("interval needs lo < hi");
  Vec a(1), b(1);
  a[0] = lo;
  b[0] = hi;
  Vec np(1), nm(1);
  np[0] = 1;
  nm[0] = -1;
  return raw(1, {a, b}, {{np, hi}, {nm, -lo}});
}

inline Polytope Polytope::box(const Vec& lo, const Vec& hi) {
  const int dim = int(lo.size());
  if (dim == 1) return interval(lo[0], hi[0]);
  std::vector<Vec> vs;
  if (dim == 2) {
    Vec v(2);
    v << lo[0], lo[1];
    vs.push_back(v);
    v << hi[0], lo[1];
    vs.push_back(v);
    v << hi[0], hi[1];
    vs.push_back(v);
    v << lo[0], hi[1];
    vs.push_back(v);
  } else {
    for (int mask = 0; mask < (1 << dim); ++mask) {
      Vec v(dim);
      for (int i = 0; i < dim; ++i) v[i] = (mask >> i & 1) ? hi[i] : lo[i];
      vs.push_back(v);
    }
  }
  std::vector<Halfspace> hs;
  for (int i = 0; i < dim; ++i) {
    Vec n = Vec::Zero(dim);
    n[i] = 1;
    hs.push_back({n, hi[i]});
    hs.push_back({Vec(-n), -lo[i]});
  }
  return raw(dim, std::move(vs), std::move(hs));
}

inline Polytope Polytope::barycentered_simplex(int n) {
  if (n < 1) throw config_error("barycentered_simplex requires n >= 1");
  std::vector<Vec> vs;
  Vec p0 = Vec::Constant(n, -1.0);
  vs.push_back(p0);
  for (int i = 0; i < n; ++i) {
    Vec p = p0;
    p[i] += n + 1;
    vs.push_back(p);
  }
  std::vector<Halfspace> hs;
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = -1;
    hs.push_back({e, 1.0});
  }
  Vec ones = Vec::Constant(n, 1.0 / std::sqrt(double(n)));
  hs.push_back({ones, 1.0 / std::sqrt(double(n))});
  return raw(n, std::move(vs), std::move(hs));
}

inline Polytope Polytope::regular_simplex(int n) {
  if (n < 1) throw config_error("regular_simplex requires n >= 1");
  // vertices sqrt(n+1)(e_i - 1/(n+1)) in the hyperplane 1^⊥ of R^{n+1},
  // expressed in an orthonormal basis of that hyperplane
  Mat B(n + 1, n);  // columns: orthonormal basis of 1^⊥
  {
    Mat M = Mat::Identity(n + 1, n + 1) -
            Mat::Constant(n + 1, n + 1, 1.0 / (n + 1));
    Eigen::FullPivHouseholderQR<Mat> qr(M);
    Mat Q = qr.matrixQ();
    // columns of Q spanning the range of M
    int c = 0;
    for (int i = 0; i < n + 1 && c < n; ++i) {
      Vec cand = Q.col(i);
      Vec proj = cand - Vec::Constant(n + 1, cand.sum() / (n + 1));
      if (proj.norm() > 0.5) B.col(c++) = proj.normalized();
    }
    if (c < n) throw error("regular_simplex: basis construction failed");
    // re-orthonormalize
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) B.col(i) -= B.col(j).dot(B.col(i)) * B.col(j);
      B.col(i).normalize();
    }
  }
  std::vector<Vec> vs;
  for (int i = 0; i < n + 1; ++i) {
    Vec e = Vec::Zero(n + 1);
    e[i] = 1;
    Vec q = std::sqrt(double(n + 1)) *
            (e - Vec::Constant(n + 1, 1.0 / (n + 1)));
    vs.push_back(B.transpose() * q);
  }
  if (n <= 3) return from_vertices(n, std::move(vs));
  throw error("regular_simplex halfspace form implemented for n <= 3");
}

// φ_P(x) = max_v <x,v>
inline double support_function(const Polytope& P, const Vec& x) {
  if (P.vertices().empty()) throw invalid_polytope("empty vertex list");
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : P.vertices()) m = std::max(m, x.dot(v));
  return m;
}

inline Polytope polar_body(const Polytope& P) {
  if (!P.origin_interior())
    throw unbounded_polytope("polar body unbounded: origin not interior");
  std::vector<Vec> pts;
  for (const auto& h : P.halfspaces()) pts.push_back(h.normal / h.offset);
  return Polytope::from_vertices(P.dimension(), std::move(pts));
}

inline double volume(const Polytope& P) {
  if (P.degenerate()) return 0.0;
  const int dim = P.dimension();
  if (dim == 1) {
    auto [lo, hi] = P.bounding_box();
    return hi[0] - lo[0];
  }
  if (dim == 2) return std::abs(poly2::area(P.polygon()));
  if (dim == 3) {
    Vec apex = P.vertex_barycenter();
    double vol = 0;
    for (std::size_t f = 0; f < P.halfspaces().size(); ++f) {
      auto pts = P.facet_vertices(f);
      if (pts.size() < 3) continue;
      const Vec& n = P.halfspaces()[f].normal;
      auto ring = detail::ordered_facet_polygon(pts, n);
      // facet area via the fan from ring[0]
      double area = 0;
      for (std::size_t i = 1; i + 1 < ring.size(); ++i)
        area += 0.5 * detail::cross3d(ring[i] - ring[0], ring[i + 1] - ring[0]).norm();
      double h = P.halfspaces()[f].offset - n.dot(apex);
      vol += area * h / 3.0;
    }
    return vol;
  }
  throw error("volume implemented for n <= 3");
}

// Chebyshev center (deepest point) and inradius, via bisection on the shrunk
// halfspace system.
inline std::pair<Vec, double> chebyshev_center(const Polytope& P) {
  const int dim = P.dimension();
  if (dim == 1) {
    auto [lo, hi] = P.bounding_box();
    Vec c(1);
    c[0] = 0.5 * (lo[0] + hi[0]);
    return {c, 0.5 * (hi[0] - lo[0])};
  }
  auto feasible_center = [&](double r) -> std::optional<Vec> {
    std::vector<Halfspace> hs = P.halfspaces();
    for (auto& h : hs) h.offset -= r;
    try {
      std::vector<Vec> vs = detail::enumerate_vertices(dim, hs);
      Vec c = Vec::Zero(dim);
      for (const auto& v : vs) c += v;
      return Vec(c / double(vs.size()));
    } catch (const error&) {
      return std::nullopt;
    }
  };
  double lo = 0.0, hi = P.diameter();
  Vec center = P.vertex_barycenter();
  for (int it = 0; it < 70; ++it) {
    double mid = 0.5 * (lo + hi);
    auto c = feasible_center(mid);
    if (c) {
      lo = mid;
      center = *c;
    } else {
      hi = mid;
    }
  }
  return {center, lo};
}

inline Polytope barycentered_simplex(int n) {
  return Polytope::barycentered_simplex(n);
}

}  // namespace mafb
