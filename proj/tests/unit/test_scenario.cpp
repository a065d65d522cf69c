#include <cmath>
#include <sstream>

#include "doctest.h"
#include "xxchain/scenario.hpp"

using namespace xxchain;

namespace {

std::vector<double> column(const ResultTable& t, const std::string& name) {
  const std::size_t c = t.column(name);
  std::vector<double> out;
  for (const auto& row : t.rows) out.push_back(row[c]);
  return out;
}

RunConfig steady_config(double t_first, double t_last) {
  RunConfig cfg;
  cfg.mode = Mode::Steady;
  cfg.chain = {3, 1.6, 1.0};
  cfg.gamma_first = cfg.gamma_last = 1.0 / 20;
  cfg.temperature_first = t_first;
  cfg.temperature_last = t_last;
  return cfg;
}

}  // namespace

TEST_CASE("numbers and grids") {
  CHECK(parse_number("1/50") == 0.02);
  CHECK(parse_number(" 2.5e-3 ") == 0.0025);
  CHECK(parse_number("+4") == 4.0);
  CHECK_THROWS_AS(parse_number("abc"), ConfigError);
  CHECK_THROWS_AS(parse_number("1/0"), ConfigError);
  CHECK_THROWS_AS(parse_number(""), ConfigError);

  CHECK(parse_grid("0:1:5") == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(parse_grid("0.1, 0.2,1/4") == std::vector<double>{0.1, 0.2, 0.25});
  CHECK(parse_grid("3:3:1") == std::vector<double>{3});
  CHECK_THROWS_AS(parse_grid("0:1"), ConfigError);
  CHECK_THROWS_AS(parse_grid("0:1:0"), ConfigError);
  CHECK_THROWS_AS(parse_grid("0:1:2.5"), ConfigError);
}

TEST_CASE("config parsing") {
  const RunConfig cfg = parse_config(R"(
    # comment
    [run]
    mode = sweep-noneq
    jobs = 3
    [chain]
    epsilon = 1.6   # trailing comment
    kappa = 1
    [baths]
    gamma_first = 1/20
    T_last = 0.3
    [grid]
    T_first = 0.05:0.5:11
    T_last = 0.1, 0.2
  )");
  CHECK(cfg.mode == Mode::SweepNonequilibrium);
  CHECK(cfg.jobs == 3);
  CHECK(cfg.chain.epsilon == 1.6);
  CHECK(cfg.gamma_first == 0.05);
  CHECK(cfg.temperature_last == 0.3);
  CHECK(cfg.t_first_grid.size() == 11);
  CHECK(cfg.t_last_grid == std::vector<double>{0.1, 0.2});
  CHECK(cfg.baths().beta_last == doctest::Approx(1.0 / 0.3));

  CHECK_THROWS_AS(parse_config("[chain]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[chain\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("epsilon 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[run]\nmode = sideways\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[run]\noracle = maybe\n"), ConfigError);
}

TEST_CASE("config round trip") {
  for (const auto& name : preset_names()) {
    RunConfig cfg = preset(name);
    cfg.verify_tolerance = 1e-9;
    cfg.output = "out.csv";
    cfg.initial = {InitialKind::Custom, {{0.1, 0.2}, {1.0 / 3.0, 0.0}}};
    CHECK(parse_config(write_config(cfg)) == cfg);
  }
  CHECK_THROWS_AS(preset("fig9"), ConfigError);
}

TEST_CASE("presets carry the figure parameters") {
  const RunConfig f1 = preset("fig1a");
  CHECK(f1.chain == ChainSpec{3, 1.5, 1.0});
  CHECK(f1.gamma_first == 1.0 / 50);
  CHECK(f1.baths().beta_first == doctest::Approx(10.0));
  CHECK(f1.kt_grid.front() == 0.0);
  CHECK(f1.kt_grid.back() == 200.0);
  const RunConfig f1b = preset("fig1b");
  CHECK(f1b.baths().beta_first == doctest::Approx(5.0));
  CHECK(f1b.baths().beta_last == doctest::Approx(1.0));
  const RunConfig f2 = preset("fig2");
  CHECK(f2.chain == ChainSpec{3, 3.0, 2.0});
  CHECK(f2.baths().beta_last == doctest::Approx(15.0));
  CHECK(preset("fig2-up").initial.kind == InitialKind::AllUp);
  CHECK(preset("fig4").t_first_grid.size() == 11);
  for (const auto& name : preset_names()) CHECK_NOTHROW(validate(preset(name)));
}

TEST_CASE("config validation") {
  RunConfig cfg = preset("fig1a");
  cfg.kt_grid = {0.0, 2.0, 1.0};
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg.kt_grid = {};
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = preset("fig1a");
  cfg.jobs = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = preset("fig1a");
  cfg.chain.epsilon = 1.2;  // below sqrt2 kappa
  CHECK_THROWS_AS(validate(cfg), ParameterError);
  cfg = preset("fig1a");
  cfg.temperature_last = -1.0;
  CHECK_THROWS_AS(validate(cfg), ParameterError);
  cfg = preset("fig3");
  cfg.temperature_grid = {0.2, 0.1};
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = preset("fig4");
  cfg.t_last_grid = {0.0, 0.1};
  CHECK_THROWS_AS(validate(cfg), ParameterError);
  cfg = preset("fig1a");
  cfg.initial = {InitialKind::Custom, {1.0, 0.0}};
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("state validity gates") {
  const DensityMatrix w3 = pure_state(w_state(3));
  CHECK(check_state(w3.rho).passes());
  CHECK_NOTHROW(require_valid_state(w3.rho, "w3"));

  ComplexMatrix scaled = 1.01 * w3.rho;
  CHECK(check_state(scaled).trace_error == doctest::Approx(0.01));
  CHECK_THROWS_AS(require_valid_state(scaled, "scaled"), VerificationError);

  ComplexMatrix skew = w3.rho;
  skew(0, 1) += Complex(0, 1e-6);
  CHECK_THROWS_AS(require_valid_state(skew, "skew"), VerificationError);

  ComplexMatrix negative = ComplexMatrix::Zero(4, 4);
  negative.diagonal() << 0.6, 0.5, 0.0, -0.1;
  CHECK(check_state(negative).min_eigenvalue == doctest::Approx(-0.1));
  CHECK_THROWS_AS(require_valid_state(negative, "negative"), VerificationError);
}

TEST_CASE("initial states") {
  RunConfig cfg = preset("fig2");
  CHECK(std::abs(initial_state(cfg).rho(7, 7)) == 0.0);
  cfg.initial.kind = InitialKind::AllUp;
  CHECK(initial_state(cfg).rho(7, 7) == Complex(1.0));
  cfg.initial.kind = InitialKind::Ground;
  CHECK(std::abs(initial_state(cfg).rho(0, 0) - 1.0) <= 1e-15);
  cfg.initial = {InitialKind::Custom, {0, 1, 1, 0, 0, 0, 0, 0}};
  CHECK(std::abs(initial_state(cfg).rho(1, 2) - 0.5) <= 1e-15);
}

TEST_CASE("evolve table") {
  RunConfig cfg = preset("fig1a");
  cfg.kt_grid = parse_grid("0:20:41");
  cfg.oracle = true;
  const ResultTable t = run(cfg);
  CHECK(t.columns.front() == "kt");
  CHECK(t.columns.size() == 2 + 8 + 3 + 2);
  CHECK(t.rows.size() == 41);
  for (const auto& row : t.rows) CHECK(row.size() == t.columns.size());
  CHECK(column(t, "concurrence")[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  for (double d : column(t, "oracle_deviation")) CHECK(d <= 1e-8);
  for (double e : column(t, "min_eigenvalue")) CHECK(e >= -1e-8);

  cfg.verify_tolerance = 1e-30;
  CHECK_THROWS_AS(run(cfg), VerificationError);
}

TEST_CASE("two-spin evolve goes through the Liouvillian") {
  RunConfig cfg = preset("fig1a");
  cfg.chain = {2, 1.5, 1.0};
  cfg.kt_grid = parse_grid("0:10:11");
  const ResultTable t = run(cfg);
  CHECK(t.columns.size() == 2 + 4 + 3);
  CHECK(column(t, "concurrence")[0] == doctest::Approx(1.0).epsilon(1e-12));
  double total = 0.0;
  for (int i = 1; i <= 4; ++i) total += column(t, "population_" + std::to_string(i)).back();
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("csv output and determinism") {
  RunConfig cfg = preset("fig4");
  cfg.t_first_grid = {0.1, 0.2, 0.3};
  cfg.t_last_grid = {0.1, 0.2};
  const std::string serial = run(cfg).to_csv();
  cfg.jobs = 4;
  std::string parallel = run(cfg).to_csv();
  CHECK(parallel.find("jobs = 4") != std::string::npos);
  parallel.replace(parallel.find("jobs = 4"), 8, "jobs = 1");
  CHECK(serial == parallel);

  std::istringstream in(serial);
  std::string line;
  std::getline(in, line);
  CHECK(line == std::string("# xxchain ") + kVersion);
  while (std::getline(in, line) && line.starts_with("#")) {
  }
  CHECK(line == "T_first,T_last,C_3spin,C_2spin,difference,status");
  std::getline(in, line);
  CHECK(line.starts_with("1.0000000000000001e-01,1.0000000000000001e-01,"));
}

TEST_CASE("steady runs") {
  for (double t : {0.1, 0.4, 2.0}) {
    const ResultTable table = run(steady_config(t, t));
    CHECK(column(table, "deviation")[0] <= 1e-10);
  }
  const ResultTable noneq = run(steady_config(0.1, 0.4));
  CHECK(column(noneq, "deviation")[0] <= 1e-10);

  const ResultTable cold = run(steady_config(1e-3, 1e-3));
  CHECK(column(cold, "population_1")[0] >= 1 - 1e-6);

  RunConfig two = steady_config(0.2, 0.3);
  two.chain.spins = 2;
  CHECK(std::isnan(column(run(two), "deviation")[0]));
}

TEST_CASE("equilibrium sweep: three spins beat two at low temperature") {
  RunConfig cfg = preset("fig3");
  cfg.epsilon_grid = {1.5, 2.0, 2.5};
  cfg.temperature_grid = {0.1, 0.2, 0.25};
  const ResultTable t = run(cfg);
  CHECK(t.rows.size() == 9);
  for (const auto& row : t.rows) {
    CHECK(row[t.column("status")] == kStatusOk);
    CHECK(row[t.column("difference")] > 0.0);
  }
}

TEST_CASE("sweeps flag invalid points instead of dropping them") {
  RunConfig cfg = preset("fig3");
  cfg.epsilon_grid = {1.0, 1.2, 2.0};
  cfg.temperature_grid = {0.2};
  const ResultTable t = run(cfg);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][t.column("status")] == (kStatusInvalidThreeSpin | kStatusInvalidTwoSpin));
  CHECK(t.rows[1][t.column("status")] == kStatusInvalidThreeSpin);
  CHECK(std::isnan(t.rows[1][t.column("C_3spin")]));
  CHECK(std::isnan(t.rows[1][t.column("difference")]));
  CHECK(!std::isnan(t.rows[1][t.column("C_2spin")]));
  CHECK(t.rows[2][t.column("status")] == kStatusOk);
}

TEST_CASE("hot baths wash out both concurrences") {
  RunConfig cfg = preset("fig4");
  cfg.t_first_grid = {20.0, 50.0};
  cfg.t_last_grid = {20.0, 50.0};
  const ResultTable t = run(cfg);
  for (const auto& row : t.rows) {
    CHECK(row[t.column("C_3spin")] == 0.0);
    CHECK(row[t.column("C_2spin")] == 0.0);
    CHECK(row[t.column("difference")] == 0.0);
  }
}

TEST_CASE("non-equilibrium sweep is symmetric under exchanging the baths") {
  const RunConfig cfg = preset("fig4");
  const ResultTable t = run(cfg);
  const std::size_t n = cfg.t_first_grid.size();
  REQUIRE(cfg.t_last_grid == cfg.t_first_grid);
  const std::size_t d = t.column("difference");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(t.rows[i * n + j][d] - t.rows[j * n + i][d]) <= 1e-10);
  }
}

TEST_CASE("compare23 covers the full product grid") {
  RunConfig cfg = preset("fig4");
  cfg.mode = Mode::Compare23;
  cfg.epsilon_grid = {1.6, 2.0};
  cfg.t_first_grid = {0.1, 0.2};
  cfg.t_last_grid = {0.15};
  const ResultTable t = run(cfg);
  CHECK(t.columns.front() == "epsilon");
  CHECK(t.rows.size() == 4);
  CHECK(t.rows[3][0] == 2.0);
  CHECK(t.rows[3][1] == 0.2);
}

TEST_CASE("parallel_for reports the lowest failing index") {
  std::vector<int> hits(100, 0);
  parallel_for(100, 8, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 7 || i == 31) throw std::runtime_error("fail " + std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "fail 7");
  }
}
