#include "wtensor/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wtensor/error.hpp"
#include "wtensor/parallel.hpp"

namespace wtensor {

namespace {

double m_norm(const std::vector<double>& x, int m) {
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), m);
  return std::pow(s, 1.0 / m);
}

void normalize(std::vector<double>& x, int m) {
  const double nrm = m_norm(x, m);
  for (double& v : x) v /= nrm;
}

}  // namespace

NqzResult nqz(const SymmetricTensor& t, const NqzConfig& cfg) {
  if (t.order() < 2) throw Error(ErrorCode::InvalidArgument, "NQZ needs order at least 2");
  if (!t.is_nonnegative()) throw Error(ErrorCode::NegativeCoefficient, "NQZ requires a nonnegative tensor");
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "NQZ tolerance must be positive");
  const int n = t.dim();
  const int m = t.order();
  std::vector<double> x = cfg.start.empty() ? std::vector<double>(n, 1.0) : cfg.start;
  if (static_cast<int>(x.size()) != n) throw Error(ErrorCode::DimMismatch, "NQZ start vector length");
  for (double v : x) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "NQZ start vector must be strictly positive");
  }
  normalize(x, m);

  NqzResult res;
  for (int it = 0;; ++it) {
    const std::vector<double> y = t.apply(x);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < n; ++i) {
      const double r = y[i] / std::pow(x[i], m - 1);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    res.lower = lo;
    res.upper = hi;
    res.lambda = 0.5 * (lo + hi);
    res.iterations = it;
    res.x = x;
    if (hi - lo <= cfg.tol) {
      res.converged = true;
      return res;
    }
    if (it >= cfg.max_iter) return res;
    std::vector<double> next(n);
    for (int i = 0; i < n; ++i) next[i] = std::pow(y[i], 1.0 / (m - 1));
    // A zero component means the tensor is reducible from this start; the
    // bracket is no longer defined, so stop with what we have.
    if (*std::min_element(next.begin(), next.end()) <= 0.0) return res;
    normalize(next, m);
    x = std::move(next);
  }
}

AscentResult projected_ascent(const SymmetricTensor& t, const AscentConfig& cfg) {
  if (t.order() % 2 != 0) throw Error(ErrorCode::OddOrder, "projected ascent needs an even order");
  const int n = t.dim();
  const int m = t.order();
  // Starts are drawn up front so the result does not depend on the thread count.
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss;
  std::vector<std::vector<double>> starts(cfg.starts, std::vector<double>(n));
  for (auto& s : starts) {
    for (double& v : s) v = gauss(rng);
    if (m_norm(s, m) == 0.0) s[0] = 1.0;
    normalize(s, m);
  }

  std::vector<AscentResult> results(cfg.starts);
  parallel_for(cfg.starts, cfg.threads, [&](int k) {
    std::vector<double> x = starts[k];
    double f = t.eval(x);
    for (int it = 0; it < cfg.max_iter; ++it) {
      // Tangent part of the gradient: T x^{m-1} - f x^{[m-1]} vanishes at critical points.
      std::vector<double> g = t.apply(x);
      for (int i = 0; i < n; ++i) g[i] -= f * std::pow(x[i], m - 1);
      bool moved = false;
      std::vector<double> trial(n);
      for (double step = 1.0; step > 1e-12; step *= 0.5) {
        for (int i = 0; i < n; ++i) trial[i] = x[i] + step * g[i];
        if (m_norm(trial, m) == 0.0) continue;
        normalize(trial, m);
        const double ft = t.eval(trial);
        if (ft > f) {
          moved = ft - f > 1e-15 * (1.0 + std::abs(f));
          x = trial;
          f = ft;
          break;
        }
      }
      if (!moved) break;
    }
    results[k].lambda = f;
    results[k].x = std::move(x);
  });

  AscentResult best;
  best.lambda = -std::numeric_limits<double>::infinity();
  for (auto& r : results) {
    if (r.lambda > best.lambda) best = std::move(r);
  }
  return best;
}

double hyper_star_lambda(int m, int k) {
  if (m < 2 || k < 1) throw Error(ErrorCode::InvalidArgument, "hyper-star needs m >= 2 and k >= 1");
  if (m % 2 != 0) throw Error(ErrorCode::InvalidArgument, "hyper-star eigenvalue equation needs even m");
  auto f = [&](double x) { return std::pow(1.0 - x, m - 1) * (x - k) + k; };
  auto df = [&](double x) { return std::pow(1.0 - x, m - 2) * ((1.0 - x) - (m - 1) * (x - k)); };
  double lo = k, hi = k + 1.0;
  if (f(hi) == 0.0) return hi;
  // f(k) = k > 0 and f(k + 1) = k - k^{m-1} <= 0 for even m.
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 5; ++it) {
    const double d = df(x);
    if (d == 0.0) break;
    const double nx = x - f(x) / d;
    if (nx <= k || nx > k + 1.0) break;
    x = nx;
  }
  return x;
}

}  // namespace wtensor
