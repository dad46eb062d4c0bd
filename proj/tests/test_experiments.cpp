#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mtkit/experiments.hpp"

using namespace mtk;

namespace {

ExperimentConfig small(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.k_min = 4;
  c.k_max = 5;
  c.m_min = 1;
  c.m_max = 3;
  c.trials = 1;
  c.seed = 7;
  return c;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "mtkit_test_experiments";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("counterexample M") {
  CHECK(counterexample_M(1 - 1.0 / 64, 1000) == 7);
  CHECK(counterexample_M(1 - 1.0 / 64, 9) == 4);
  CHECK(counterexample_M(0.75, 1000) >= 1);
}

TEST_CASE("thm1 and corollary ratios are at least one") {
  const CsvTable t = run_experiment(small("thm1"));
  CHECK(t.header() == std::vector<std::string>{"k", "r", "L", "grid", "rho_random", "rho_adversary", "rho"});
  REQUIRE(t.rows().size() == 2);
  for (double v : t.numeric_column("rho")) CHECK(v >= 1.0 - 1e-12);
  CHECK(t.numeric_column("L")[0] == 16);

  ExperimentConfig c = small("corollary_b");
  c.m_max = 2;
  const CsvTable b = run_experiment(c);
  REQUIRE(b.rows().size() == 2);
  CHECK(b.numeric_column("depth")[1] == 4);
  for (double v : b.numeric_column("rho")) CHECK(v >= 1.0 - 1e-12);
}

TEST_CASE("lacunary first level by hand") {
  ExperimentConfig c = small("lacunary");
  c.m_max = 1;
  const CsvTable t = run_experiment(c);
  REQUIRE(t.rows().size() == 1);
  // Block {b_2, b_3} = {0.5, -0.5}: Psi' at 0 is 3 and 1/3.
  CHECK(t.numeric_column("D_closed")[0] == doctest::Approx(10.0 / 3).epsilon(1e-14));
  CHECK(t.numeric_column("D_direct")[0] == doctest::Approx(10.0 / 3).epsilon(1e-14));
  CHECK(t.numeric_column("D_minus_2m")[0] == doctest::Approx(4.0 / 3).epsilon(1e-14));
  CHECK(t.numeric_column("D_fd_rel_err")[0] < 1e-8);
  CHECK(t.numeric_column("psi2_direct_rel_err")[0] < 1e-12);
}

TEST_CASE("counterexample table") {
  const CsvTable t = run_experiment(small("counterexample"));
  REQUIRE(t.rows().size() == 4);
  CHECK(t.rows()[0][0] == "d_r");
  CHECK(t.rows()[1][0] == "d_r_arc");
  for (double v : t.numeric_column("ratio_sq")) CHECK(v >= 1.0 - 1e-12);
}

TEST_CASE("probe table") {
  ExperimentConfig c = small("probe");
  c.k_min = c.k_max = 8;
  c.trials = 2;
  const CsvTable t = run_experiment(c);
  CHECK(t.header() == std::vector<std::string>{"trial", "r", "lambda", "sigma", "g_norm_sq", "ratio"});
  REQUIRE(t.rows().size() == 2);
  c.k_min = c.k_max = 14;
  CHECK_THROWS_AS(run_experiment(c), ResourceError);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(run_experiment(small("nonsense")), InvalidArgument);
  ExperimentConfig c = small("thm1");
  c.k_min = 6, c.k_max = 5;
  CHECK_THROWS_AS(run_experiment(c), InvalidArgument);
  c = small("thm1");
  c.k_min = 1;
  CHECK_THROWS_AS(run_experiment(c), InvalidArgument);
  c = small("thm1");
  c.trials = -1;
  CHECK_THROWS_AS(run_experiment(c), InvalidArgument);
  c = small("thm1");
  c.grid = 32;  // below the resolution guard for k = 4
  CHECK_THROWS_AS(run_experiment(c), InvalidArgument);
  c.unsafe = true;
  CHECK_NOTHROW(run_experiment(c));
}

TEST_CASE("determinism and thread invariance") {
  for (const std::string name : {"thm1", "counterexample", "lacunary", "corollary_b"}) {
    ExperimentConfig c = small(name);
    const std::string a = run_experiment(c).str();
    CHECK(run_experiment(c).str() == a);
    c.jobs = 3;
    CHECK(run_experiment(c).str() == a);
    c.jobs = 1;
    c.seed = 8;
    if (name == "thm1" || name == "corollary_b") CHECK(run_experiment(c).str() != a);
  }
  Rng a = entry_rng(1, 2, 3), b = entry_rng(1, 2, 3), d = entry_rng(1, 2, 4);
  CHECK(a() == b());
  CHECK(entry_rng(1, 2, 3)() != d());
}

TEST_CASE("derived constants") {
  CsvTable t({"k", "r", "L", "grid", "rho_random", "rho_adversary", "rho"});
  t.add_row({"4", "0", "0", "0", "0", "0", "1.5"});
  t.add_row({"5", "0", "0", "0", "0", "0", "3"});
  const Constants c = derive_constants("thm1", t);
  CHECK(c.at("thm1.band") == 2.0);
  CHECK(c.at("thm1.rho_max") == 3.0);
  CHECK(c.at("thm1.rho_min") == 1.5);
  CHECK_THROWS_AS(derive_constants("thm1", CsvTable(t.header())), InvalidArgument);
  CHECK_THROWS_AS(derive_constants("nope", t), InvalidArgument);

  ExperimentConfig lc = small("lacunary");
  const Constants lac = derive_constants("lacunary", run_experiment(lc));
  CHECK(lac.at("lacunary.C_calibrated") == lac.at("lacunary.C_observed"));  // all m <= 7

  const Constants ce = derive_constants("counterexample", run_experiment(small("counterexample")));
  CHECK(ce.count("counterexample.d_r.slope") == 1);
  CHECK(ce.count("counterexample.d_r_arc.claim_c_min") == 1);
}

TEST_CASE("constants files") {
  const auto path = scratch("constants.txt").string();
  const Constants c{{"a.b", 0.1}, {"z", -3e-300}};
  save_constants(path, c);
  CHECK(load_constants(path) == c);

  const auto bad = scratch("bad.txt").string();
  std::ofstream(bad) << "# comment\nx=1\nnot a pair\n";
  try {
    load_constants(bad);
    FAIL("expected a parse error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
  std::ofstream(bad) << "x=abc\n";
  CHECK_THROWS_AS(load_constants(bad), InvalidArgument);
  CHECK_THROWS_AS(load_constants(scratch("missing.txt").string()), InvalidArgument);
}

TEST_CASE("least-squares slope") {
  CHECK(ls_slope({0, 1, 2}, {1, 3, 5}) == doctest::Approx(2.0));
  CHECK(ls_slope({0, 1, 2, 3}, {0, 1, 0, 1}) == doctest::Approx(0.2));
  CHECK_THROWS_AS(ls_slope({1}, {1}), InvalidArgument);
  CHECK_THROWS_AS(ls_slope({1, 2}, {1}), InvalidArgument);
}

TEST_CASE("plots") {
  CsvTable t({"k", "a", "b", "tag"});
  t.add_row({"1", "2", "3", "x"});
  t.add_row({"2", "4", "1", "y"});
  t.add_row({"3", "5", "0", "x"});
  PlotSpec s{"k", {"a", "b"}, "demo", false, "", ""};
  const std::string svg = render_plot(t, s);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("demo") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(render_plot(t, s) == svg);

  s.scatter = true;
  s.filter_column = "tag";
  s.filter_value = "x";
  const std::string sc = render_plot(t, s);
  CHECK(sc.find("polyline") == std::string::npos);
  CHECK(sc != svg);

  s.filter_value = "none";
  CHECK_THROWS_AS(render_plot(t, s), InvalidArgument);
  CHECK_THROWS_AS(render_plot(CsvTable(t.header()), PlotSpec{"k", {"a"}, "", false, "", ""}), InvalidArgument);
  CHECK_THROWS_AS(render_plot(t, PlotSpec{"k", {}, "", false, "", ""}), InvalidArgument);
  CHECK_THROWS_AS(render_plot(t, PlotSpec{"k", {"rho"}, "", false, "", ""}), InvalidArgument);

  const auto csv = scratch("plot.csv").string(), out = scratch("plot.svg").string();
  std::ofstream(csv) << t.str();
  emit_plot(csv, PlotSpec{"k", {"a"}, "file", false, "", ""}, out);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == render_plot(t, PlotSpec{"k", {"a"}, "file", false, "", ""}));
}
