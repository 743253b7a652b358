/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "entfrontier/kkt.hpp"
#include "entfrontier/state.hpp"

using namespace entfrontier;

namespace {

double json_number(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\":";
  const auto pos = text.find(needle);
  if (pos == std::string::npos) return std::nan("");
  return std::strtod(text.c_str() + pos + needle.size(), nullptr);
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string out_file = "cli_test_stdout.tmp";
  const std::string cmd = std::string(ENTFRONTIER_CLI_PATH) + " " + args +
                          " > " + out_file + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(out_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  std::remove(out_file.c_str());
  return r;
}

}  // namespace

TEST_CASE("measure command") {
  SUBCASE("Bell state reports unit measures") {
    save_state_json("bell.tmp.json", PureState::psi_plus().density());
    const RunResult r = run_cli("measure bell.tmp.json");
    CHECK(r.exit_code == 0);
    CHECK(json_number(r.output, "concurrence") == doctest::Approx(1.0));
    CHECK(json_number(r.output, "ree") == doctest::Approx(1.0));
    CHECK(r.output.find("\"ree_method\": \"pure\"") != std::string::npos);
    std::remove("bell.tmp.json");
  }
  SUBCASE("maximally mixed state reports zeros") {
    save_state_json("mixed.tmp.json", DensityMatrix());
    const RunResult r = run_cli("measure mixed.tmp.json");
    CHECK(r.exit_code == 0);
    CHECK(json_number(r.output, "nonlocality") == doctest::Approx(0.0));
    CHECK(json_number(r.output, "ree") == doctest::Approx(0.0));
    std::remove("mixed.tmp.json");
  }
  SUBCASE("invalid state exits 2 naming the invariant") {
    std::ofstream bad("bad.tmp.json");
    bad << R"({"re": [[0.6,0,0,0],[0,0.6,0,0],[0,0,-0.1,0],[0,0,0,-0.1]],
               "im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})";
    bad.close();
    const RunResult r = run_cli("measure bad.tmp.json");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("positive semidefinite") != std::string::npos);
    std::remove("bad.tmp.json");
  }
  SUBCASE("missing file exits 2") {
    CHECK(run_cli("measure does_not_exist.json").exit_code == 2);
  }
}

TEST_CASE("channel command") {
  SUBCASE("symmetric damping of the Bell state, verified") {
    const RunResult r =
        run_cli("channel adc --alpha 0.5 --q1 0.3 --q2 0.3 --verify");
    CHECK(r.exit_code == 0);
    CHECK(json_number(r.output, "alpha_eff") == doctest::Approx(0.5));
  }
  SUBCASE("pdc with no damping returns the input state") {
    const RunResult r = run_cli("channel pdc --alpha 0.25 --q1 0 --q2 0");
    CHECK(r.exit_code == 0);
    CHECK(json_number(r.output, "p_eff") == doctest::Approx(1.0));
  }
  SUBCASE("domain errors exit 2") {
    CHECK(run_cli("channel adc --alpha 1.5 --q1 0 --q2 0").exit_code == 2);
    CHECK(run_cli("channel foo --alpha 0.5 --q1 0 --q2 0").exit_code == 2);
  }
  SUBCASE("unknown flags are rejected") {
    CHECK(run_cli("channel adc --alpha 0.5 --q1 0 --q2 0 --bogus 3").exit_code ==
          2);
  }
}

TEST_CASE("frontier command") {
  const RunResult r = run_cli("frontier --axis B --curves P,D --grid 11");
  CHECK(r.exit_code == 0);
  CHECK(r.output.rfind("axis,value,E_R,source", 0) == 0);
  CHECK(r.output.find(",P\n") != std::string::npos);
  CHECK(r.output.find(",D\n") != std::string::npos);

  CHECK(run_cli("frontier --axis C --curves A2 --grid 11").exit_code == 2);
  CHECK(run_cli("frontier --axis Q --curves P --grid 11").exit_code == 2);
}

TEST_CASE("crossing and gap commands") {
  SUBCASE("default crossing finds the upper-boundary kink") {
    const RunResult r = run_cli("crossing --axis B --curve A2");
    CHECK(r.exit_code == 0);
    CHECK(json_number(r.output, "x") == doctest::Approx(0.8169).epsilon(1e-3));
    CHECK(json_number(r.output, "E_R") == doctest::Approx(0.7445).epsilon(1e-3));
  }
  SUBCASE("Horodecki gap") {
    const RunResult r = run_cli("gap --axis B --curve H");
    CHECK(r.exit_code == 0);
    CHECK(json_number(r.output, "delta") == doctest::Approx(0.2949).epsilon(1e-3));
  }
}

TEST_CASE("scatter command") {
  SUBCASE("empty run emits only the header") {
    const RunResult r = run_cli("scatter --n 0 --seed 5");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "axis,value,E_R,source\n");
  }
  SUBCASE("same seed and flags give byte-identical output") {
    const RunResult a = run_cli("scatter --n 12 --seed 42");
    const RunResult b = run_cli("scatter --n 12 --seed 42");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("mc_rank") != std::string::npos);
  }
  SUBCASE("axes selection") {
    const RunResult r = run_cli("scatter --n 3 --seed 1 --axes N");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\nB,") == std::string::npos);
    CHECK(r.output.find("N,") != std::string::npos);
  }
}

TEST_CASE("kkt command") {
  SUBCASE("lower family passes") {
    const RunResult r = run_cli("kkt --family D --B 0.5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"passed\": true") != std::string::npos);
  }
  SUBCASE("state + css files") {
    save_state_json("kkt_state.tmp.json", d_params(0.5).state);
    const CVec4 plus = PureState::psi_plus().ket();
    const CVec4 minus = PureState::psi_minus().ket();
    save_state_json("kkt_css.tmp.json",
                    DensityMatrix(Mat4(0.5 * (plus * plus.adjoint()) +
                                       0.5 * (minus * minus.adjoint()))));
    const RunResult r =
        run_cli("kkt --state kkt_state.tmp.json --css kkt_css.tmp.json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("min_eig_x") != std::string::npos);
    std::remove("kkt_state.tmp.json");
    std::remove("kkt_css.tmp.json");
  }
  SUBCASE("missing arguments exit 2") {
    CHECK(run_cli("kkt --family D").exit_code == 2);
    CHECK(run_cli("kkt").exit_code == 2);
  }
}

TEST_CASE("table1 command") {
  const RunResult r = run_cli("table1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("rho4") != std::string::npos);
  CHECK(r.output.find("max absolute deviation") != std::string::npos);
}
