/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "entfrontier/channels.hpp"
#include "entfrontier/frontier.hpp"
#include "entfrontier/kkt.hpp"
#include "entfrontier/measures.hpp"
#include "entfrontier/ree.hpp"
#include "entfrontier/state.hpp"

namespace {

using namespace entfrontier;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitVerify = 3;

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw DomainError("cannot open output file: " + output_path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

nlohmann::json matrix_json(const Mat4& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  return nlohmann::json{{"re", re}, {"im", im}};
}

nlohmann::json measures_json(const MeasureSet& ms) {
  return nlohmann::json{{"concurrence", ms.concurrence},
                        {"negativity", ms.negativity},
                        {"horodecki_m", ms.horodecki_m},
                        {"nonlocality", ms.nonlocality},
                        {"purity", ms.purity}};
}

int cmd_measure(const std::string& input, const std::string& output) {
  const DensityMatrix rho = load_state_json(input);
  const MeasureSet ms = measure_set(rho);
  const CssSolution css = ree(rho);
  nlohmann::json j = measures_json(ms);
  j["ree"] = css.ree;
  j["ree_method"] = to_string(css.method);
  emit(j.dump(2), output);
  return kExitOk;
}

int cmd_channel(const std::string& kind, double alpha, double q1, double q2,
                bool verify, const std::string& output) {
  nlohmann::json j;
  j["channel"] = kind;
  j["alpha"] = alpha;
  j["q1"] = q1;
  j["q2"] = q2;

  DensityMatrix out_state;
  if (kind == "adc") {
    const AdcState s = adc_closed_form(alpha, q1, q2);
    out_state = s.rho;
    j["alpha_eff"] = s.alpha_eff;
    j["p"] = s.p;
    j["alpha_degenerate"] = s.alpha_degenerate;
    j["measures"] = measures_json(adc_measures(s));
  } else {
    const PdcState s = pdc_closed_form(alpha, q1, q2);
    out_state = s.rho;
    j["alpha_eff"] = s.alpha_eff;
    j["p_eff"] = s.p_eff;
    j["y"] = s.y;
    j["measures"] = measures_json(measure_set(s.rho));
  }
  j["state"] = matrix_json(out_state.matrix());

  if (verify) {
    const DensityMatrix in = PureState::psi_alpha(alpha).density();
    const KrausChannel ch1 = kind == "adc" ? adc_kraus(q1) : pdc_kraus(q1);
    const KrausChannel ch2 = kind == "adc" ? adc_kraus(q2) : pdc_kraus(q2);
    const DensityMatrix direct = apply_two_side(ch1, ch2, in);
    const double dev =
        (direct.matrix() - out_state.matrix()).cwiseAbs().maxCoeff();
    j["kraus_deviation"] = dev;
    if (dev > 1e-10) {
      emit(j.dump(2), output);
      std::cerr << "verification failed: closed form deviates from Kraus "
                   "application by "
                << dev << "\n";
      return kExitVerify;
    }
  }
  emit(j.dump(2), output);
  return kExitOk;
}

int cmd_frontier(const std::string& axis_name, const std::string& curves_arg,
                 int grid_n, const std::string& output) {
  const Axis axis = axis_from_string(axis_name);
  std::vector<std::string> tags;
  std::stringstream ss(curves_arg);
  std::string tag;
  while (std::getline(ss, tag, ',')) tags.push_back(tag);
  if (tags.empty()) throw DomainError("no curves requested");

  const std::vector<double> grid =
      axis == Axis::B ? default_grid_b(grid_n) : uniform_grid(grid_n);

  std::vector<FrontierCurve> curves;
  for (const std::string& t : tags) {
    if (t == "P") {
      curves.push_back(curve_pure(axis, grid));
    } else if (t == "D") {
      curves.push_back(curve_lower_d(axis, grid));
    } else if (t == "H") {
      FrontierCurve c;
      c.axis = axis;
      c.tag = "H";
      for (double x : grid)
        c.points.push_back(
            {x, horodecki_er_on(axis, x),
             "p=" + std::to_string(horodecki_p_on(axis, x))});
      curves.push_back(std::move(c));
    } else if (t == "A1") {
      if (axis != Axis::N)
        throw DomainError("curve A1 is defined on the N axis");
      curves.push_back(curve_upper_a1(grid));
    } else if (t == "A2") {
      if (axis != Axis::B)
        throw DomainError("curve A2 is defined on the B axis");
      curves.push_back(curve_upper_a2(grid));
    } else {
      throw DomainError("unknown curve tag: " + t);
    }
  }
  std::ostringstream os;
  write_curves_csv(os, curves);
  emit(os.str(), output);
  return kExitOk;
}

std::function<double(double)> curve_evaluator(const std::string& tag, Axis axis) {
  if (tag == "H") return [axis](double x) { return horodecki_er_on(axis, x); };
  if (tag == "A2") {
    if (axis != Axis::B) throw DomainError("curve A2 is defined on the B axis");
    return upper_a2_mixed_er;
  }
  if (tag == "A1") {
    if (axis != Axis::N) throw DomainError("curve A1 is defined on the N axis");
    return upper_a1_er;
  }
  if (tag == "D") return lower_d_er;
  if (tag == "P") return pure_er;
  throw DomainError("unknown curve tag: " + tag);
}

int cmd_crossing(const std::string& axis_name, const std::string& tag,
                 double lo, double hi, const std::string& output) {
  const Axis axis = axis_from_string(axis_name);
  const auto points = crossing(curve_evaluator(tag, axis), pure_er, lo, hi);
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [x, er] : points)
    j.push_back({{"axis", to_string(axis)},
                 {"curve", tag},
                 {"baseline", "P"},
                 {"x", x},
                 {"E_R", er}});
  emit(j.dump(2), output);
  return kExitOk;
}

int cmd_gap(const std::string& axis_name, const std::string& tag,
            const std::string& output) {
  const Axis axis = axis_from_string(axis_name);
  const GapResult g = gap(curve_evaluator(tag, axis), 0.0, 1.0, tag);
  nlohmann::json j{{"axis", to_string(axis)},
                   {"curve", g.curve},
                   {"baseline", g.baseline},
                   {"x_opt", g.x_opt},
                   {"delta", g.delta}};
  emit(j.dump(2), output);
  return kExitOk;
}

int cmd_scatter(int n, std::uint64_t seed, const std::string& axes_arg,
                int starts, const std::string& output) {
  std::vector<Axis> axes;
  std::stringstream ss(axes_arg);
  std::string name;
  while (std::getline(ss, name, ',')) axes.push_back(axis_from_string(name));
  if (axes.empty()) throw DomainError("no axes requested");

  const std::vector<ScatterPoint> points = monte_carlo_scatter(n, seed, starts);
  std::ostringstream os;
  write_scatter_csv(os, points, axes);
  emit(os.str(), output);
  return kExitOk;
}

int cmd_kkt(const std::string& family, std::optional<double> b_value,
            const std::string& state_path, const std::string& css_path,
            const std::string& output) {
  KktReport report;
  if (!family.empty()) {
    if (!b_value) throw DomainError("--B is required with --family");
    const double b = *b_value;
    if (family == "D") {
      report = kkt_check_lower_family(b);
    } else if (family == "A2") {
      if (a2_params(b).p >= 1.0 - 1e-12)
        throw DomainError(
            "A2 family is pure (rank 1) at this nonlocality; the rank-2 "
            "check applies below the kink");
      report = kkt_check_upper_family(b);
    } else {
      throw DomainError("unknown family: " + family + " (use D or A2)");
    }
  } else {
    if (state_path.empty() || css_path.empty())
      throw DomainError("provide either --family with --B, or --state and --css");
    const DensityMatrix rho = load_state_json(state_path);
    const DensityMatrix css = load_state_json(css_path);
    report = kkt_check(rho, css, chsh_operator(rho).op);
  }
  emit(report.to_json(), output);
  return kExitOk;
}

int cmd_table1(const std::string& output) {
  std::ostringstream os;
  char buf[256];
  os << "state   alpha    p        C        N        B        E_R      "
        "C_ref    N_ref    B_ref    E_R_ref  max_dev\n";
  double max_dev = 0.0;
  for (const ReferencePoint& ref : reference_points()) {
    const AdcState s = adc_state(ref.alpha, ref.p);
    const MeasureSet ms = adc_measures(s);
    const double er = css_gen_horodecki(ref.alpha, ref.p).solution.ree;
    const double dev = std::max({std::abs(ms.concurrence - ref.c),
                                 std::abs(ms.negativity - ref.n),
                                 std::abs(ms.nonlocality - ref.b),
                                 std::abs(er - ref.er)});
    max_dev = std::max(max_dev, dev);
    std::snprintf(buf, sizeof(buf),
                  "%-7s %.4f  %.4f  %.5f  %.5f  %.5f  %.5f  %.4f   %.4f   "
                  "%.4f   %.4f   %.1e\n",
                  ref.name, ref.alpha, ref.p, ms.concurrence, ms.negativity,
                  ms.nonlocality, er, ref.c, ref.n, ref.b, ref.er, dev);
    os << buf;
  }
  std::snprintf(buf, sizeof(buf), "max absolute deviation: %.2e\n", max_dev);
  os << buf;
  emit(os.str(), output);
  return max_dev > 1e-3 ? kExitVerify : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit entanglement and nonlocality toolkit"};
  app.require_subcommand(1);

  std::string input, output, css_path;
  std::string axis_name = "B", curves = "P,D,H,A2", curve_tag = "A2";
  std::string channel_kind, family, axes_arg = "C,N,B";
  double alpha = 0.5, q1 = 0.0, q2 = 0.0;
  std::optional<double> b_value;
  bool verify = false;
  int grid_n = 401, n_samples = 1000, starts = 4;
  std::uint64_t seed = 1;
  double lo = 0.0, hi = 1.0;

  CLI::App* measure = app.add_subcommand("measure", "Measures and REE of a state file");
  measure->add_option("state", input, "state JSON file")->required();
  measure->add_option("--output", output, "output file (default stdout)");

  CLI::App* channel = app.add_subcommand("channel", "Apply a damping channel to |psi_alpha>");
  channel->add_option("kind", channel_kind, "adc or pdc")
      ->required()
      ->check(CLI::IsMember({"adc", "pdc"}));
  channel->add_option("--alpha", alpha, "input state parameter")->required();
  channel->add_option("--q1", q1, "damping on qubit 1")->required();
  channel->add_option("--q2", q2, "damping on qubit 2")->required();
  channel->add_flag("--verify", verify, "cross-check against Kraus application");
  channel->add_option("--output", output, "output file (default stdout)");

  CLI::App* frontier = app.add_subcommand("frontier", "Emit boundary curves as CSV");
  frontier->add_option("--axis", axis_name, "C, N or B")->capture_default_str();
  frontier->add_option("--curves", curves, "comma list of P,D,H,A1,A2")
      ->capture_default_str();
  frontier->add_option("--grid", grid_n, "grid size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  frontier->add_option("--output", output, "output file (default stdout)");

  CLI::App* crossing_cmd = app.add_subcommand("crossing", "Crossing of a curve with the pure-state curve");
  crossing_cmd->add_option("--axis", axis_name)->capture_default_str();
  crossing_cmd->add_option("--curve", curve_tag)->capture_default_str();
  crossing_cmd->add_option("--lo", lo)->capture_default_str();
  crossing_cmd->add_option("--hi", hi)->capture_default_str();
  crossing_cmd->add_option("--output", output);

  CLI::App* gap_cmd = app.add_subcommand("gap", "Maximal excess of a curve over the pure-state curve");
  gap_cmd->add_option("--axis", axis_name)->capture_default_str();
  gap_cmd->add_option("--curve", curve_tag)->capture_default_str();
  gap_cmd->add_option("--output", output);

  CLI::App* scatter = app.add_subcommand("scatter", "Monte Carlo scatter as CSV");
  scatter->add_option("--n", n_samples, "number of samples")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  scatter->add_option("--seed", seed, "sampling seed")->capture_default_str();
  scatter->add_option("--axes", axes_arg, "comma list of C,N,B")
      ->capture_default_str();
  scatter->add_option("--starts", starts, "numeric solver starts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scatter->add_option("--output", output, "output file (default stdout)");

  CLI::App* kkt_cmd = app.add_subcommand("kkt", "First-order extremality check");
  kkt_cmd->add_option("--family", family, "D or A2");
  kkt_cmd->add_option("--B", b_value, "nonlocality of the family state");
  kkt_cmd->add_option("--state", input, "state JSON file");
  kkt_cmd->add_option("--css", css_path, "closest-separable-state JSON file");
  kkt_cmd->add_option("--output", output);

  CLI::App* table = app.add_subcommand("table1", "Reference-point self check");
  table->add_option("--output", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInput;
  }

  try {
    if (measure->parsed()) return cmd_measure(input, output);
    if (channel->parsed())
      return cmd_channel(channel_kind, alpha, q1, q2, verify, output);
    if (frontier->parsed()) return cmd_frontier(axis_name, curves, grid_n, output);
    if (crossing_cmd->parsed())
      return cmd_crossing(axis_name, curve_tag, lo, hi, output);
    if (gap_cmd->parsed()) return cmd_gap(axis_name, curve_tag, output);
    if (scatter->parsed())
      return cmd_scatter(n_samples, seed, axes_arg, starts, output);
    if (kkt_cmd->parsed())
      return cmd_kkt(family, b_value, input, css_path, output);
    if (table->parsed()) return cmd_table1(output);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
