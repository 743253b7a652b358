/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "entfrontier/frontier.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <thread>

#include "entfrontier/measures.hpp"

namespace entfrontier {

namespace {

const double kGolden = 0.5 * (std::sqrt(5.0) - 1.0);

template <typename F>
double golden_max(const F& f, double lo, double hi, double tol) {
  double c = hi - kGolden * (hi - lo), d = lo + kGolden * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kGolden * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kGolden * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

std::string param_descriptor(double alpha, double p) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "alpha=%.6f;p=%.6f", alpha, p);
  return buf;
}

}  // namespace

const char* to_string(Axis axis) {
  switch (axis) {
    case Axis::C: return "C";
    case Axis::N: return "N";
    case Axis::B: return "B";
  }
  return "?";
}

Axis axis_from_string(const std::string& name) {
  if (name == "C" || name == "c") return Axis::C;
  if (name == "N" || name == "n") return Axis::N;
  if (name == "B" || name == "b") return Axis::B;
  throw DomainError("unknown axis: " + name);
}

std::vector<double> uniform_grid(int n) {
  if (n < 2) throw DomainError("grid needs at least 2 points");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = static_cast<double>(i) / (n - 1);
  return g;
}

std::vector<double> default_grid_b(int n) {
  std::vector<double> g = uniform_grid(n);
  for (double x = kUpperBoundaryKink - 0.01; x <= kUpperBoundaryKink + 0.01;
       x += 1e-4)
    if (x > 0.0 && x < 1.0) g.push_back(x);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(),
                      [](double a, double b) { return std::abs(a - b) < 1e-12; }),
          g.end());
  return g;
}

double pure_er(double x) { return wootters_w(x); }

double lower_d_er(double x) {
  if (x < -1e-12 || x > 1.0 + 1e-12)
    throw DomainError("lower_d_er: value outside [0,1]");
  return 1.0 - binary_entropy(0.5 * (1.0 + std::clamp(x, 0.0, 1.0)));
}

double horodecki_p_on(Axis axis, double x) {
  x = std::clamp(x, 0.0, 1.0);
  switch (axis) {
    case Axis::C:
      return x;
    case Axis::N:
      return std::sqrt(2.0 * x * (1.0 + x)) - x;
    case Axis::B:
      return std::sqrt(0.5 * (1.0 + x * x));
  }
  return x;
}

double horodecki_er_on(Axis axis, double x) {
  return ree_horodecki_value(horodecki_p_on(axis, x));
}

double upper_a2_mixed_er(double b) {
  b = std::clamp(b, 0.0, 1.0);
  const double p = 0.25 * (2.0 + std::sqrt(2.0 + 2.0 * b * b));
  const double disc = std::max(0.0, 5.0 * p * p - 4.0 * p - b * b);
  const double alpha = (p - std::sqrt(disc)) / (2.0 * p);
  return css_gen_horodecki(alpha, p).solution.ree;
}

double upper_a2_er(double b) { return a2_params(b).ree; }

double upper_a1_er(double n) {
  if (n < -1e-12 || n > 1.0 + 1e-12)
    throw DomainError("upper_a1_er: N outside [0,1]");
  n = std::clamp(n, 0.0, 1.0);
  if (n < 1e-9) return 0.0;
  if (n > 1.0 - 1e-12) return 1.0;

  // p on the family with negativity n at given alpha, from
  // sqrt((1-p)^2 + x) - (1-p) = n by bisection.
  const auto p_for = [n](double alpha) {
    const double peak = 2.0 * std::sqrt(alpha * (1.0 - alpha));
    if (peak < n) return -1.0;
    double lo = 0.0, hi = 1.0;
    const auto excess = [&](double p) {
      const double q = 1.0 - p;
      const double x = 4.0 * alpha * (1.0 - alpha) * p * p;
      return std::sqrt(q * q + x) - q - n;
    };
    for (int i = 0; i < 60 && hi - lo > 1e-14; ++i) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const auto er_at = [&](double alpha) {
    const double p = p_for(alpha);
    if (p < 0.0) return 0.0;
    if (p >= 1.0 - 1e-12) return wootters_w(n);
    return css_gen_horodecki(alpha, p).solution.ree;
  };

  const double alpha_min = 0.5 * (1.0 - std::sqrt(1.0 - n * n));
  const double lo = std::min(0.5, alpha_min + 1e-12);

  // Coarse scan, then golden refinement around the best cell; the edges
  // (pure state and the symmetric line) enter as explicit candidates.
  constexpr int kScan = 16;
  double best_alpha = 0.5, best = er_at(0.5);
  for (int i = 0; i <= kScan; ++i) {
    const double alpha = lo + (0.5 - lo) * i / kScan;
    const double v = er_at(alpha);
    if (v > best) {
      best = v;
      best_alpha = alpha;
    }
  }
  const double h = (0.5 - lo) / kScan;
  const double refined = golden_max(er_at, std::max(lo, best_alpha - h),
                                    std::min(0.5, best_alpha + h), 1e-9);
  best = std::max(best, er_at(refined));
  return std::max(best, wootters_w(n));
}

namespace {

FrontierCurve build_curve(Axis axis, const std::string& tag,
                          const std::vector<double>& grid,
                          const std::function<CurvePoint(double)>& eval) {
  FrontierCurve curve;
  curve.axis = axis;
  curve.tag = tag;
  curve.points.reserve(grid.size());
  double prev = -1.0;
  for (double x : grid) {
    if (x < -1e-12 || x > 1.0 + 1e-12)
      throw DomainError("curve grid value outside [0,1]");
    x = std::clamp(x, 0.0, 1.0);
    if (x <= prev) continue;
    prev = x;
    curve.points.push_back(eval(x));
  }
  return curve;
}

}  // namespace

FrontierCurve curve_pure(Axis axis, const std::vector<double>& grid) {
  return build_curve(axis, "P", grid,
                     [](double x) { return CurvePoint{x, pure_er(x), "pure"}; });
}

FrontierCurve curve_lower_d(Axis axis, const std::vector<double>& grid) {
  if (axis == Axis::C)
    throw DomainError("curve_lower_d: defined on the N and B axes");
  return build_curve(axis, "D", grid, [](double x) {
    return CurvePoint{x, lower_d_er(x), param_descriptor(0.5, 0.5 * (1.0 + x))};
  });
}

FrontierCurve curve_lower_c_horodecki(const std::vector<double>& grid) {
  return build_curve(Axis::C, "H", grid, [](double x) {
    return CurvePoint{x, ree_horodecki_value(x), param_descriptor(0.5, x)};
  });
}

FrontierCurve curve_upper_a2(const std::vector<double>& grid) {
  return build_curve(Axis::B, "A2", grid, [](double x) {
    const BoundaryPoint bp = a2_params(x);
    return CurvePoint{x, bp.ree, param_descriptor(bp.alpha, bp.p)};
  });
}

FrontierCurve curve_upper_a1(const std::vector<double>& grid) {
  return build_curve(Axis::N, "A1", grid, [](double x) {
    return CurvePoint{x, upper_a1_er(x), "constrained-max"};
  });
}

GapResult gap(const std::function<double(double)>& er, double lo, double hi,
              const std::string& curve_tag) {
  const auto diff = [&](double x) { return er(x) - wootters_w(x); };
  constexpr int kScan = 2000;
  // evaluators are pure; scan in parallel
  std::vector<double> values(kScan + 1);
  {
    std::atomic<int> next{0};
    const auto work = [&] {
      for (int i = next.fetch_add(1); i <= kScan; i = next.fetch_add(1))
        values[i] = diff(lo + (hi - lo) * i / kScan);
    };
    const int workers = thread_budget();
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
  }
  double best_x = lo, best = values[0];
  for (int i = 1; i <= kScan; ++i) {
    if (values[i] > best) {
      best = values[i];
      best_x = lo + (hi - lo) * i / kScan;
    }
  }
  const double h = (hi - lo) / kScan;
  const double x_ref = golden_max(diff, std::max(lo, best_x - h),
                                  std::min(hi, best_x + h), 1e-6);
  double x_opt = best_x, delta = best;
  if (diff(x_ref) > delta) {
    x_opt = x_ref;
    delta = diff(x_ref);
  }
  return GapResult{x_opt, delta, curve_tag, "P"};
}

GapResult gap(const FrontierCurve& curve) {
  GapResult out;
  out.curve = curve.tag;
  double best = -std::numeric_limits<double>::infinity();
  for (const CurvePoint& pt : curve.points) {
    const double v = pt.er - wootters_w(pt.x);
    if (v > best) {
      best = v;
      out.x_opt = pt.x;
    }
  }
  out.delta = best;
  return out;
}

std::vector<std::pair<double, double>> crossing(
    const std::function<double(double)>& a,
    const std::function<double(double)>& b, double lo, double hi) {
  constexpr int kScan = 320;
  constexpr double kTouchTol = 1e-9;
  const auto diff = [&](double x) { return a(x) - b(x); };

  std::vector<std::pair<double, double>> out;
  double prev_x = lo, prev_d = diff(lo);
  for (int i = 1; i <= kScan; ++i) {
    const double x = lo + (hi - lo) * i / kScan;
    const double d = diff(x);
    if ((prev_d > kTouchTol && d < -kTouchTol) ||
        (prev_d < -kTouchTol && d > kTouchTol)) {
      double x0 = prev_x, x1 = x, d0 = prev_d;
      while (x1 - x0 > 1e-6) {
        const double xm = 0.5 * (x0 + x1);
        const double dm = diff(xm);
        if ((d0 > 0.0) == (dm > 0.0)) {
          x0 = xm;
          d0 = dm;
        } else {
          x1 = xm;
        }
      }
      const double xc = 0.5 * (x0 + x1);
      out.emplace_back(xc, b(xc));
    }
    prev_x = x;
    prev_d = d;
  }
  if (!out.empty()) return out;

  // Tangential contact: locate where the positive excess of one curve over
  // the other dies out for good.
  constexpr double kExcess = 1e-6;
  double last_excess = -1.0;
  for (int i = 0; i <= kScan; ++i) {
    const double x = lo + (hi - lo) * i / kScan;
    if (std::abs(diff(x)) > kExcess) last_excess = x;
  }
  if (last_excess >= lo && last_excess < hi) {
    double x0 = last_excess, x1 = hi;
    while (x1 - x0 > 1e-6) {
      const double xm = 0.5 * (x0 + x1);
      (std::abs(diff(xm)) > kExcess ? x0 : x1) = xm;
    }
    const double xc = 0.5 * (x0 + x1);
    out.emplace_back(xc, b(xc));
  }
  return out;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer on the pair; deterministic per (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

int thread_budget() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("ENTFRONTIER_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

std::vector<ScatterPoint> monte_carlo_scatter(int n, std::uint64_t seed,
                                              int solver_starts) {
  if (n < 0) throw DomainError("monte_carlo_scatter: n must be nonnegative");
  std::vector<ScatterPoint> points(n);
  if (n == 0) return points;

  const int workers = std::min(thread_budget(), n);
  std::atomic<int> next{0};
  const auto work = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      const DensityMatrix rho = sample_mixture(mix_seed(seed, i));
      ScatterPoint& pt = points[i];
      const MeasureSet ms = measure_set(rho);
      pt.c = ms.concurrence;
      pt.n = ms.negativity;
      pt.b = ms.nonlocality;
      const Spectrum sp = spectrum(rho);
      pt.rank = 0;
      for (int k = 0; k < 4; ++k)
        if (sp.eigenvalues(k) > 1e-12) ++pt.rank;

      if (detect_family(rho) != CssMethod::numeric) {
        pt.er = ree(rho).ree;
      } else {
        ReeConfig cfg;
        cfg.starts = solver_starts;
        cfg.seed = mix_seed(seed ^ 0xabcdefULL, i);
        cfg.throw_on_failure = false;  // budget-capped points are re-verified
        pt.er = ree_numeric(rho, cfg).ree;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  return points;
}

double scatter_reverify(const DensityMatrix& rho, int starts) {
  ReeConfig cfg;
  cfg.starts = starts;
  cfg.tol = 1e-8;
  cfg.max_iter = 8000;
  cfg.throw_on_failure = false;
  return ree_numeric(rho, cfg).ree;
}

void write_curves_csv(std::ostream& os,
                      const std::vector<FrontierCurve>& curves) {
  os << "axis,value,E_R,source\n";
  char buf[128];
  for (const FrontierCurve& curve : curves)
    for (const CurvePoint& pt : curve.points) {
      std::snprintf(buf, sizeof(buf), "%s,%.12g,%.12g,%s\n",
                    to_string(curve.axis), pt.x, pt.er, curve.tag.c_str());
      os << buf;
    }
}

void write_scatter_csv(std::ostream& os, const std::vector<ScatterPoint>& points,
                       const std::vector<Axis>& axes) {
  os << "axis,value,E_R,source\n";
  char buf[128];
  for (const ScatterPoint& pt : points)
    for (Axis axis : axes) {
      const double v = axis == Axis::C ? pt.c : axis == Axis::N ? pt.n : pt.b;
      std::snprintf(buf, sizeof(buf), "%s,%.12g,%.12g,mc_rank%d\n",
                    to_string(axis), v, pt.er, pt.rank);
      os << buf;
    }
}

std::span<const ReferencePoint> reference_points() {
  static constexpr std::array<ReferencePoint, 6> kPoints{{
      {"rho1", 0.0369, 1.0000, 0.3770, 0.3770, 0.2279, 0.3770},
      {"rho2", 0.0751, 1.0000, 0.5271, 0.5271, 0.3847, 0.5271},
      {"rho3", 0.2198, 0.8536, 0.7070, 0.5756, 0.4039, 0.0000},
      {"rho4", 0.3510, 0.9565, 0.9130, 0.8706, 0.7445, 0.8169},
      {"rho5", 0.2116, 1.0000, 0.8169, 0.8169, 0.7445, 0.8169},
      {"rho6", 0.0947, 1.0000, 0.5856, 0.5856, 0.4520, 0.5856},
  }};
  return kPoints;
}

}  // namespace entfrontier
