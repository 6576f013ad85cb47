// Core utilities: error types, deterministic RNG, exact simplex moment
// formulas, small rational arithmetic, and a slot-based parallel loop.
#pragma once

#include <Eigen/Dense>

#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace mafb {

inline constexpr const char* kVersion = "0.1.0";

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};
struct invalid_polytope : error {
  using error::error;
};
struct unbounded_polytope : error {
  using error::error;
};
struct admissibility_error : error {
  using error::error;
};
struct domain_error : error {
  using error::error;
};
struct cone_domain_error : error {
  using error::error;
};
struct convergence_error : error {
  using error::error;
};
struct stratum_error : error {
  using error::error;
};
struct config_error : error {
  using error::error;
};

// Relative tolerance used for coplanarity/degeneracy decisions in geometry.
inline constexpr double kGeomTol = 1e-10;

// ---------------------------------------------------------------------------
// Deterministic RNG (splitmix64). std:: distributions are implementation
// defined, so all sampling goes through this.
// ---------------------------------------------------------------------------
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : state(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {
    // Box-Muller on deterministic uniforms.
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  int uniform_int(int n) { return int(next_u64() % std::uint64_t(n)); }

  Vec direction(int dim) {
    Vec d(dim);
    double nrm = 0;
    do {
      for (int i = 0; i < dim; ++i) d[i] = normal();
      nrm = d.norm();
    } while (nrm < 1e-12);
    return d / nrm;
  }

  // Independent stream for task `index`; used by parallel sample loops.
  Rng fork(std::uint64_t index) const {
    Rng r(state ^ (0xd1342543de82ef95ull * (index + 1)));
    r.next_u64();
    return r;
  }
};

// ---------------------------------------------------------------------------
// Exact moments of affine powers over simplices.
//
// For an n-simplex S with vertex values c_0..c_n of an affine function ℓ,
//   ∫_S ℓ^q Π_{m∈extras} λ_m dx
//     = |S| n! mult! q! / (n+q+e)! · h_q(c ∪ c_extras)
//   ∫_S ℓ^{-p} Π_{m∈extras} λ_m dx          (c_i > 0, p ≥ n+e+1)
//     = |S| n! mult! (p-1-n-e)! / (p-1)! · h_{p-1-n-e}(1/c ∪ 1/c_extras) / Π(c ∪ c_extras)
// where h_r is the complete homogeneous symmetric polynomial, e = #extras and
// mult! is the product of multiplicity factorials of repeated extras. Both
// follow from the Hermite–Genocchi divided-difference representation; the
// reciprocal form is cancellation-free for positive values.
// ---------------------------------------------------------------------------

inline double factorial(int n) {
  static const auto table = [] {
    std::vector<double> t(171);
    t[0] = 1.0;
    for (int i = 1; i < 171; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  assert(n >= 0 && n < 171);
  return table[n];
}

inline double complete_homogeneous(std::span<const double> x, int r) {
  if (r == 0) return 1.0;
  std::vector<double> h(std::size_t(r) + 1, 0.0);
  h[0] = 1.0;
  for (double xi : x)
    for (int j = 1; j <= r; ++j) h[j] += xi * h[j - 1];
  return h[std::size_t(r)];
}

namespace detail {
inline double extras_multiplicity_factor(std::span<const int> extras) {
  double f = 1.0;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    int count = 1;
    for (std::size_t j = 0; j < i; ++j)
      if (extras[j] == extras[i]) ++count;
    f *= count;  // running multiplicity yields Π mult!
  }
  return f;
}
}  // namespace detail

// ∫_S ℓ^q Π λ_m dx with q ≥ 0.
inline double simplex_pow_integral(double volume, std::span<const double> c,
                                   int q, std::span<const int> extras = {}) {
  const int n = int(c.size()) - 1;
  const int e = int(extras.size());
  assert(q >= 0 && n >= 0);
  std::vector<double> args(c.begin(), c.end());
  for (int m : extras) args.push_back(c[std::size_t(m)]);
  const double h = complete_homogeneous(args, q);
  return volume * factorial(n) * detail::extras_multiplicity_factor(extras) *
         factorial(q) / factorial(n + q + e) * h;
}

// ∫_S ℓ^{-p} Π λ_m dx with p ≥ n+e+1 and all c_i > 0.
inline double simplex_negpow_integral(double volume, std::span<const double> c,
                                      int p, std::span<const int> extras = {}) {
  const int n = int(c.size()) - 1;
  const int e = int(extras.size());
  const int r = p - 1 - n - e;
  assert(r >= 0);
  std::vector<double> recip(c.size());
  double prod = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    assert(c[i] > 0);
    recip[i] = 1.0 / c[i];
    prod *= c[i];
  }
  std::vector<double> args = recip;
  for (int m : extras) {
    args.push_back(recip[std::size_t(m)]);
    prod *= c[std::size_t(m)];
  }
  const double h = complete_homogeneous(args, r);
  return volume * factorial(n) * detail::extras_multiplicity_factor(extras) *
         factorial(r) / factorial(p - 1) * h / prod;
}

// ---------------------------------------------------------------------------
// Exact rationals (int64), for the homogenization-constant identities.
// ---------------------------------------------------------------------------
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw error("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long a = num < 0 ? -num : num, b = den;
    while (b) {
      long long t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
  }

  friend Rational operator*(Rational a, Rational b) {
    return Rational(a.num * b.num, a.den * b.den);
  }
  friend Rational operator-(Rational a, Rational b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend bool operator==(Rational a, Rational b) {
    return a.num == b.num && a.den == b.den;
  }
  Rational pow(int e) const {
    Rational r(1);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }
  double to_double() const { return double(num) / double(den); }
};

// ---------------------------------------------------------------------------
// Slot-based parallel loop. Each index writes only to its own output slot and
// uses its own forked RNG, so results are bit-identical for any thread count.
// Worker count is capped by the MA_FB_THREADS environment variable (default 1).
// ---------------------------------------------------------------------------
inline int worker_thread_cap() {
  if (const char* env = std::getenv("MA_FB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  int threads = std::min<int>(worker_thread_cap(),
                              std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<std::size_t>(threads, count ? count : 1);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mafb
