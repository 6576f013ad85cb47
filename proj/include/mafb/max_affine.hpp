// Max-affine convex functions v(y) = max_i <a_i,y> + b_i on a polytope P,
// the induced subdivision of P into activity cells, and the exact polyhedral
// Legendre transform u(x) = sup_{y in P} (<x,y> - v(y)).
//
// The transform rests on one structural fact: the supremum is attained at a
// vertex of the subdivision, so u is itself max-affine with one piece
// (w, -v(w)) per subdivision vertex w. Everything downstream (functionals,
// solver, verification) reuses the same subdivision code for u over a
// bounding box.
#pragma once

#include "mafb/polytope.hpp"

namespace mafb {

struct AffinePiece {
  Vec slope;
  double intercept;

  double at(const Vec& y) const { return slope.dot(y) + intercept; }
};

class MaxAffineFunction {
 public:
  MaxAffineFunction() = default;
  MaxAffineFunction(std::vector<AffinePiece> pieces, Polytope domain)
      : pieces_(std::move(pieces)), domain_(std::move(domain)) {
    if (pieces_.empty()) throw error("max-affine function needs pieces");
    for (const auto& p : pieces_)
      if (p.slope.size() != domain_.dimension())
        throw error("piece dimension mismatch");
  }

  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  const Polytope& domain() const { return domain_; }
  int dimension() const { return domain_.dimension(); }

  double value(const Vec& y) const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) m = std::max(m, p.at(y));
    return m;
  }

  // Ties resolved to the active piece of maximal index.
  int active_piece(const Vec& y) const {
    double m = value(y);
    const double tol = 1e-11 * std::max(1.0, std::abs(m));
    int best = 0;
    for (int i = 0; i < int(pieces_.size()); ++i)
      if (pieces_[std::size_t(i)].at(y) >= m - tol) best = i;
    return best;
  }

  // v*(y) = <y, grad v(y)> - v(y); equals -b on the active piece.
  double v_star(const Vec& y) const {
    if (!domain_.contains(y))
      throw domain_error("v_star: point outside the domain");
    return -pieces_[std::size_t(active_piece(y))].intercept;
  }

  Vec gradient(const Vec& y) const {
    return pieces_[std::size_t(active_piece(y))].slope;
  }

  MaxAffineFunction shifted(const Vec& x0) const {  // v - <x0, .>
    std::vector<AffinePiece> ps = pieces_;
    for (auto& p : ps) p.slope -= x0;
    return MaxAffineFunction(std::move(ps), domain_);
  }

  MaxAffineFunction scaled(double lambda) const {  // lambda * v
    std::vector<AffinePiece> ps = pieces_;
    for (auto& p : ps) {
      p.slope *= lambda;
      p.intercept *= lambda;
    }
    return MaxAffineFunction(std::move(ps), domain_);
  }

 private:
  std::vector<AffinePiece> pieces_;
  Polytope domain_;
};

// One linearity cell of the subdivision: 1D cells carry two endpoints, 2D
// cells a CCW polygon.
struct Cell {
  int piece = -1;
  std::vector<Vec> verts;
  double measure = 0;
};

struct SubVertex {
  Vec point;
  double value;                    // v at the point
  std::vector<int> active_pieces;  // pieces attaining the max here
  std::vector<int> facets;         // domain facets through the point
};

struct Subdivision {
  std::vector<Cell> cells;
  std::vector<SubVertex> vertices;
  double min_value = 0;  // of v over the closed region
  double max_value = 0;
};

struct Simplex {
  std::vector<Vec> verts;  // dim+1 points
  double volume = 0;
};

inline std::vector<Simplex> triangulate(const Cell& cell, int dim) {
  std::vector<Simplex> out;
  if (dim == 1) {
    Simplex s;
    s.verts = cell.verts;
    s.volume = std::abs(cell.verts[1][0] - cell.verts[0][0]);
    if (s.volume > 0) out.push_back(std::move(s));
    return out;
  }
  for (std::size_t i = 1; i + 1 < cell.verts.size(); ++i) {
    Simplex s;
    s.verts = {cell.verts[0], cell.verts[i], cell.verts[i + 1]};
    double cr = (s.verts[1] - s.verts[0])[0] * (s.verts[2] - s.verts[0])[1] -
                (s.verts[1] - s.verts[0])[1] * (s.verts[2] - s.verts[0])[0];
    s.volume = 0.5 * std::abs(cr);
    if (s.volume > 0) out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

inline Subdivision subdivide_family(const std::vector<AffinePiece>& pieces,
                                    const Polytope& region) {
  const int dim = region.dimension();
  if (dim != 1 && dim != 2)
    throw error("subdivision implemented for n in {1,2}");
  const double scale = std::max(1.0, region.diameter());
  const double tol = kGeomTol * scale;
  Subdivision sub;

  if (dim == 1) {
    auto [lov, hiv] = region.bounding_box();
    const double lo = lov[0], hi = hiv[0];
    for (int i = 0; i < int(pieces.size()); ++i) {
      double a = lo, b = hi;
      const double si = pieces[std::size_t(i)].slope[0];
      const double bi = pieces[std::size_t(i)].intercept;
      bool empty = false;
      for (int l = 0; l < int(pieces.size()) && !empty; ++l) {
        if (l == i) continue;
        const double sl = pieces[std::size_t(l)].slope[0];
        const double bl = pieces[std::size_t(l)].intercept;
        const double ds = si - sl;
        if (std::abs(ds) <= 1e-14 * scale) {
          if (bl > bi + tol || (std::abs(bl - bi) <= tol && l > i)) empty = true;
          continue;
        }
        const double y = (bl - bi) / ds;  // piece i wins on ds>0 side of y
        if (ds > 0)
          a = std::max(a, y);
        else
          b = std::min(b, y);
      }
      if (!empty && b - a > tol) {
        Cell c;
        c.piece = i;
        Vec va(1), vb(1);
        va[0] = a;
        vb[0] = b;
        c.verts = {va, vb};
        c.measure = b - a;
        sub.cells.push_back(std::move(c));
      }
    }
  } else {
    const poly2::Polygon base = region.polygon();
    for (int i = 0; i < int(pieces.size()); ++i) {
      poly2::Polygon poly = base;
      const auto& pi = pieces[std::size_t(i)];
      for (int l = 0; l < int(pieces.size()) && !poly.empty(); ++l) {
        if (l == i) continue;
        const auto& pl = pieces[std::size_t(l)];
        Vec dn = pl.slope - pi.slope;
        const double nd = dn.norm();
        if (nd <= 1e-14 * scale) {
          if (pl.intercept > pi.intercept + tol ||
              (std::abs(pl.intercept - pi.intercept) <= tol && l > i))
            poly.clear();
          continue;
        }
        // keep <a_l - a_i, y> <= b_i - b_l
        poly = poly2::clip(poly, poly2::P2(dn[0], dn[1]) / nd,
                           (pi.intercept - pl.intercept) / nd, tol);
      }
      double ar = poly.empty() ? 0.0 : std::abs(poly2::area(poly));
      if (ar > tol * scale) {
        Cell c;
        c.piece = i;
        for (const auto& q : poly) {
          Vec v(2);
          v << q.x(), q.y();
          c.verts.push_back(v);
        }
        c.measure = ar;
        sub.cells.push_back(std::move(c));
      }
    }
  }

  if (sub.cells.empty()) throw error("subdivision produced no cells");

  // dedupe vertices
  const double vtol = 1e-9 * scale;
  for (const auto& c : sub.cells) {
    for (const auto& q : c.verts) {
      bool found = false;
      for (const auto& w : sub.vertices)
        if ((w.point - q).norm() <= vtol) {
          found = true;
          break;
        }
      if (!found) {
        SubVertex sv;
        sv.point = q;
        sub.vertices.push_back(std::move(sv));
      }
    }
  }

  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (auto& w : sub.vertices) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces) m = std::max(m, p.at(w.point));
    w.value = m;
    vmin = std::min(vmin, m);
    vmax = std::max(vmax, m);
    const double atol = 1e-8 * std::max(1.0, std::abs(m));
    for (int i = 0; i < int(pieces.size()); ++i)
      if (pieces[std::size_t(i)].at(w.point) >= m - atol)
        w.active_pieces.push_back(i);
    for (int f = 0; f < int(region.halfspaces().size()); ++f) {
      const auto& h = region.halfspaces()[std::size_t(f)];
      if (std::abs(h.normal.dot(w.point) - h.offset) <= 1e-8 * scale)
        w.facets.push_back(f);
    }
  }
  sub.min_value = vmin;
  sub.max_value = vmax;
  return sub;
}

}  // namespace detail

inline Subdivision subdivide(const MaxAffineFunction& v) {
  return detail::subdivide_family(v.pieces(), v.domain());
}

// Drop pieces that are active on a null set only; the function is unchanged.
inline MaxAffineFunction prune(const MaxAffineFunction& v) {
  Subdivision sub = subdivide(v);
  std::vector<bool> keep(v.pieces().size(), false);
  for (const auto& c : sub.cells) keep[std::size_t(c.piece)] = true;
  std::vector<AffinePiece> ps;
  for (std::size_t i = 0; i < v.pieces().size(); ++i)
    if (keep[i]) ps.push_back(v.pieces()[i]);
  return MaxAffineFunction(std::move(ps), v.domain());
}

inline bool admissible(const Subdivision& sub) { return sub.min_value > 0; }

// ---------------------------------------------------------------------------
// Legendre transform
// ---------------------------------------------------------------------------
class DualFunction {
 public:
  DualFunction() = default;
  DualFunction(MaxAffineFunction u, Subdivision complex, Polytope omega)
      : u_(std::move(u)), complex_(std::move(complex)), omega_(std::move(omega)) {
    min_value_ = std::numeric_limits<double>::infinity();
    for (const auto& w : complex_.vertices)
      if (w.value < min_value_) {
        min_value_ = w.value;
        min_point_ = w.point;
      }
  }

  // u as a max-affine function over the bounding box
  const MaxAffineFunction& as_max_affine() const { return u_; }
  const std::vector<AffinePiece>& pieces() const { return u_.pieces(); }
  const Polytope& bounding_box() const { return u_.domain(); }
  const Polytope& negativity_region() const { return omega_; }
  const Subdivision& complex() const { return complex_; }

  double value(const Vec& x) const { return u_.value(x); }
  int active_piece(const Vec& x) const { return u_.active_piece(x); }
  Vec gradient(const Vec& x) const { return u_.gradient(x); }

  double min_value() const { return min_value_; }
  const Vec& min_point() const { return min_point_; }

  // Complex cells intersected with {u <= 0}: on a cell of piece j this is the
  // single extra constraint <w_j, x> <= beta_j.
  std::vector<Cell> cells_in_omega() const {
    const int dim = u_.dimension();
    const double scale = std::max(1.0, u_.domain().diameter());
    const double tol = kGeomTol * scale;
    std::vector<Cell> out;
    for (const auto& c : complex_.cells) {
      const auto& p = u_.pieces()[std::size_t(c.piece)];
      if (dim == 1) {
        double a = c.verts[0][0], b = c.verts[1][0];
        if (std::abs(p.slope[0]) <= 1e-14) {
          if (p.intercept > tol) continue;  // u > 0 on the whole cell
        } else {
          double y = -p.intercept / p.slope[0];
          if (p.slope[0] > 0)
            b = std::min(b, y);
          else
            a = std::max(a, y);
        }
        if (b - a > tol) {
          Cell cc;
          cc.piece = c.piece;
          Vec va(1), vb(1);
          va[0] = a;
          vb[0] = b;
          cc.verts = {va, vb};
          cc.measure = b - a;
          out.push_back(std::move(cc));
        }
      } else {
        poly2::Polygon poly;
        for (const auto& q : c.verts) poly.push_back(poly2::P2(q[0], q[1]));
        const double nd = p.slope.norm();
        if (nd <= 1e-14) {
          if (p.intercept > tol) continue;
        } else {
          poly = poly2::clip(poly, poly2::P2(p.slope[0], p.slope[1]) / nd,
                             -p.intercept / nd, tol);
        }
        double ar = poly.empty() ? 0.0 : std::abs(poly2::area(poly));
        if (ar > tol * scale) {
          Cell cc;
          cc.piece = c.piece;
          for (const auto& q : poly) {
            Vec v(2);
            v << q.x(), q.y();
            cc.verts.push_back(v);
          }
          cc.measure = ar;
          out.push_back(std::move(cc));
        }
      }
    }
    return out;
  }

 private:
  MaxAffineFunction u_;
  Subdivision complex_;
  Polytope omega_;
  double min_value_ = 0;
  Vec min_point_;
};

inline DualFunction legendre_transform(const MaxAffineFunction& v,
                                       const Subdivision& sub) {
  if (!admissible(sub))
    throw admissibility_error(
        "legendre transform requires v > 0 on the domain");
  const Polytope& P = v.domain();
  if (!P.origin_interior())
    throw admissibility_error(
        "legendre transform requires the origin interior to the domain");
  const int dim = P.dimension();

  // u = max_j <w_j, x> - v(w_j) over the subdivision vertices w_j
  std::vector<AffinePiece> upieces;
  upieces.reserve(sub.vertices.size());
  for (const auto& w : sub.vertices) upieces.push_back({w.point, -w.value});

  // Omega = {u < 0} sits inside (max_P v) * polar(P)
  Polytope polar = polar_body(P);
  const double r = 1.1 * sub.max_value;
  Vec lo = Vec::Constant(dim, std::numeric_limits<double>::infinity());
  Vec hi = -lo;
  for (const auto& q : polar.vertices()) {
    lo = lo.cwiseMin(r * q);
    hi = hi.cwiseMax(r * q);
  }
  Vec pad = Vec::Constant(dim, 0.05 * (hi - lo).norm() + 1e-9);
  Polytope box = Polytope::box(lo - pad, hi + pad);

  MaxAffineFunction u(upieces, box);
  Subdivision complex = subdivide(u);

  std::vector<Halfspace> omega_hs;
  for (const auto& p : upieces)
    if (p.slope.norm() > 1e-13)
      omega_hs.push_back({p.slope, -p.intercept});
  Polytope omega = Polytope::from_halfspaces(dim, std::move(omega_hs));

  return DualFunction(std::move(u), std::move(complex), std::move(omega));
}

inline DualFunction legendre_transform(const MaxAffineFunction& v) {
  return legendre_transform(v, subdivide(v));
}

// v** computed through the dual complex; equals v on P when every piece of v
// is active (exact biconjugation of the polyhedral class).
inline MaxAffineFunction biconjugate(const MaxAffineFunction& v) {
  DualFunction u = legendre_transform(v);
  std::vector<AffinePiece> ps;
  for (const auto& q : u.complex().vertices)
    ps.push_back({q.point, -q.value});
  return prune(MaxAffineFunction(std::move(ps), v.domain()));
}

}  // namespace mafb
