/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "entfrontier/kkt.hpp"
#include "entfrontier/ree.hpp"

namespace entfrontier {

enum class Axis { C, N, B };

const char* to_string(Axis axis);
Axis axis_from_string(const std::string& name);

struct CurvePoint {
  double x = 0.0;
  double er = 0.0;
  std::string descriptor;
};

/// Boundary curve of the REE over one measure axis; x strictly increasing.
struct FrontierCurve {
  Axis axis = Axis::B;
  std::string tag;  // P, D, H, A1, A2
  std::vector<CurvePoint> points;
};

/// n evenly spaced points on [0,1].
std::vector<double> uniform_grid(int n = 401);

/// Default grid for the B axis: 401 points plus a 1e-4-step densification
/// within 0.01 of the upper-boundary kink.
std::vector<double> default_grid_b(int n = 401);

// Pointwise curve evaluators.
double pure_er(double x);                    // W(x), any axis
double lower_d_er(double x);                 // 1 - h((1+x)/2), axes N and B
double horodecki_p_on(Axis axis, double x);  // p giving measure x
double horodecki_er_on(Axis axis, double x);
double upper_a2_er(double b);        // optimal amplitude-damped family
double upper_a2_mixed_er(double b);  // mixed branch continued past the kink
double upper_a1_er(double n);        // max REE over the family at fixed N

FrontierCurve curve_pure(Axis axis, const std::vector<double>& grid);
FrontierCurve curve_lower_d(Axis axis, const std::vector<double>& grid);
FrontierCurve curve_lower_c_horodecki(const std::vector<double>& grid);
FrontierCurve curve_upper_a2(const std::vector<double>& grid);
FrontierCurve curve_upper_a1(const std::vector<double>& grid);

/// Largest REE excess over the pure-state curve W along an axis.
struct GapResult {
  double x_opt = 0.0;
  double delta = 0.0;
  std::string curve;
  std::string baseline = "P";
};

/// 2001-point scan of er(x) - W(x) on [lo, hi] plus golden-section
/// refinement of the maximizer to 1e-6 in x.
GapResult gap(const std::function<double(double)>& er, double lo, double hi,
              const std::string& curve_tag);

/// Grid-resolution gap of an already-sampled curve.
GapResult gap(const FrontierCurve& curve);

/// Crossings of two curve evaluators: sign changes of the difference located
/// by bisection to 1e-6. When one curve only touches the other (the
/// difference never turns negative), the boundary of the excess region is
/// returned instead.
std::vector<std::pair<double, double>> crossing(
    const std::function<double(double)>& a,
    const std::function<double(double)>& b, double lo, double hi);

struct ScatterPoint {
  double c = 0.0;
  double n = 0.0;
  double b = 0.0;
  double er = 0.0;
  int rank = 0;
};

/// Monte Carlo sample of the (C, N, B, E_R) cloud via sample_mixture; the
/// REE follows the closed-form dispatcher with a reduced-start numeric
/// solver. Deterministic per seed, independent of the thread count.
std::vector<ScatterPoint> monte_carlo_scatter(int n, std::uint64_t seed,
                                              int solver_starts = 4);

/// Re-verified REE of one state at higher effort (more starts, tighter tol).
double scatter_reverify(const DensityMatrix& rho, int starts = 16);

// CSV emission; header "axis,value,E_R,source", stable column order.
void write_curves_csv(std::ostream& os, const std::vector<FrontierCurve>& curves);
void write_scatter_csv(std::ostream& os, const std::vector<ScatterPoint>& points,
                       const std::vector<Axis>& axes);

/// Effective parallelism cap: ENTFRONTIER_THREADS or hardware concurrency.
int thread_budget();

/// Characteristic boundary states with reference measure values used by the
/// self-check table: {name, alpha, p, C, N, E_R, B}.
struct ReferencePoint {
  const char* name;
  double alpha, p, c, n, er, b;
};
std::span<const ReferencePoint> reference_points();

}  // namespace entfrontier
