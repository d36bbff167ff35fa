#include <gtest/gtest.h>

#include <filesystem>

#include "geoeig.hpp"
#include "support/fixtures.hpp"

using namespace geoeig;
using namespace geoeig::experiment;
using json = nlohmann::json;

namespace {

json small_config() {
  return json{{"graph", {{"n", 40}, {"seed", 3}}},
              {"filter", {{"type", "spline"}, {"m", 2}}},
              {"algorithms", {"pgda", "spgda", "pgda1h", "spgda1h", "gdaschur", "sgdaschur", "power"}},
              {"M", 30},
              {"trials", 3},
              {"seed", 11}};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "geoeig_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Config, Defaults) {
  const auto cfg = parse_config(json{{"graph", {{"n", 16}}}});
  EXPECT_EQ(cfg.filter.type, "spline");
  EXPECT_EQ(cfg.filter.m, 2);
  EXPECT_EQ(cfg.c, 0.01);
  EXPECT_EQ(cfg.iterations, 4000u);
  EXPECT_EQ(cfg.trials, 50u);
  EXPECT_EQ(cfg.algorithms.size(), 7u);
}

TEST(Config, Rejections) {
  auto with = [](const char* key, json v) {
    json j = small_config();
    j[key] = std::move(v);
    return j;
  };
  EXPECT_THROW(parse_config(with("bogus", 1)), invalid_parameter);
  EXPECT_THROW(parse_config(with("c", 0.0)), invalid_parameter);
  EXPECT_THROW(parse_config(with("c", -1.0)), invalid_parameter);
  EXPECT_THROW(parse_config(with("trials", 0)), invalid_parameter);
  EXPECT_THROW(parse_config(with("algorithms", json::array({"pgda", "lanczos"}))), invalid_parameter);
  EXPECT_THROW(parse_config(with("algorithms", json::array({"pgda", "pgda"}))), invalid_parameter);
  EXPECT_THROW(parse_config(with("algorithms", json::array())), invalid_parameter);
  EXPECT_THROW(parse_config(with("filter", {{"type", "wavelet"}})), invalid_parameter);
  EXPECT_THROW(parse_config(with("filter", {{"type", "spline"}, {"m", 0}})), invalid_parameter);
  EXPECT_THROW(parse_config(with("extremal", "middle")), invalid_parameter);
  EXPECT_THROW(parse_config(with("engine", "gpu")), invalid_parameter);
  EXPECT_THROW(parse_config(with("M", "many")), invalid_parameter);
  EXPECT_THROW(parse_config(json{{"M", 3}}), invalid_parameter);
  EXPECT_THROW(parse_config(json::array()), invalid_parameter);
  EXPECT_NO_THROW(parse_config(with("lambda", json::array({0.5, -0.25}))));
}

TEST(Run, ZeroIterationsGivesInitialRowsOnly) {
  json j = small_config();
  j["M"] = 0;
  j["trials"] = 1;
  const auto cfg = parse_config(j);
  const auto res = run_experiment(cfg);
  const auto csv = curves_csv(res);
  std::size_t rows = 0;
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "algo,n,ce,nr");
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.find(',') + 1, 2), "0,");
  }
  EXPECT_EQ(rows, 7u);
  const auto p = build_problem(cfg);
  const auto x0 = trial_initial_vector(cfg, 40, 0);
  EXPECT_NEAR(res.algorithms[0].mean_ce[0], clamped_log10(aligned_distance<cplx>(x0, *p.analytic_kernel)), 1e-14);
}

TEST(Run, AveragesLogValuesOverTrials) {
  json j = small_config();
  j["trials"] = 2;
  j["algorithms"] = json::array({"spgda", "pgda"});
  const auto cfg = parse_config(j);
  const auto res = run_experiment(cfg);
  const auto p = build_problem(cfg);
  const auto d = sqrt_degree_vector(*p.g);
  const auto a = identity(p.g) - spline_filter(p.g, 2);
  std::vector<std::vector<MetricPoint>> sp, pg;
  for (std::size_t t = 0; t < 2; ++t) {
    const auto x0 = trial_initial_vector(cfg, 40, t);
    sp.push_back(metrics_ce_nr(spgda_centralized(a, make_Qc_sym(a, 0.01), x0, 30), d, a));
    pg.push_back(metrics_ce_nr(pgda_centralized(a, make_Qc(a, 0.01), x0, 30), d, a));
  }
  for (std::size_t n = 0; n <= 30; ++n) {
    EXPECT_NEAR(res.algorithms[0].mean_ce[n], 0.5 * (sp[0][n].ce + sp[1][n].ce), 1e-12);
    EXPECT_NEAR(res.algorithms[0].mean_nr[n], 0.5 * (sp[0][n].nr + sp[1][n].nr), 1e-12);
    EXPECT_NEAR(res.algorithms[1].mean_ce[n], 0.5 * (pg[0][n].ce + pg[1][n].ce), 1e-12);
    EXPECT_NEAR(res.algorithms[1].mean_nr[n], 0.5 * (pg[0][n].nr + pg[1][n].nr), 1e-12);
  }
}

TEST(Run, DeterministicAndThreadIndependent) {
  const auto cfg = parse_config(small_config());
  const auto first = curves_csv(run_experiment(cfg));
  EXPECT_EQ(first, curves_csv(run_experiment(cfg)));
  auto threaded = cfg;
  threaded.threads = 3;
  EXPECT_EQ(first, curves_csv(run_experiment(threaded)));
}

TEST(Run, DistributedEngineAgrees) {
  json j = small_config();
  j["M"] = 15;
  j["trials"] = 2;
  const auto cent = run_experiment(parse_config(j));
  j["engine"] = "distributed";
  const auto dist = run_experiment(parse_config(j));
  for (std::size_t k = 0; k < cent.algorithms.size(); ++k)
    for (std::size_t n = 0; n <= 15; ++n) {
      EXPECT_NEAR(cent.algorithms[k].mean_nr[n], dist.algorithms[k].mean_nr[n], 1e-9);
      EXPECT_NEAR(cent.algorithms[k].mean_ce[n], dist.algorithms[k].mean_ce[n], 1e-9);
    }
}

TEST(Run, SchurConstantMakesPgdaAndGdaSchurEqual) {
  json j = small_config();
  j["algorithms"] = json::array({"pgda", "gdaschur"});
  const auto base = parse_config(j);
  const auto p = build_problem(base);
  j["c"] = schur_norm(p.a);
  const auto res = run_experiment(parse_config(j));
  EXPECT_EQ(res.algorithms[0].mean_ce, res.algorithms[1].mean_ce);
  EXPECT_EQ(res.algorithms[0].mean_nr, res.algorithms[1].mean_nr);
}

TEST(Run, RangeViolationReportedPerAlgorithm) {
  json j = small_config();
  j["range"] = 1;
  j["algorithms"] = json::array({"pgda", "pgda1h", "spgda1h"});
  const auto res = run_experiment(parse_config(j));
  EXPECT_FALSE(res.all_ok());
  EXPECT_FALSE(res.algorithms[0].setup.error.empty());
  EXPECT_TRUE(res.algorithms[1].setup.error.empty());
  EXPECT_TRUE(res.algorithms[2].setup.error.empty());
  const auto csv = curves_csv(res);
  EXPECT_EQ(csv.find("pgda,"), std::string::npos);
  const auto summary = summary_json(res, parse_config(j));
  EXPECT_EQ(summary["algorithms"][0]["status"], "rejected");
}

TEST(Run, MeteringMatchesRuntime) {
  const auto cfg = parse_config(small_config());
  const auto res = run_experiment(cfg);
  for (const auto& a : res.algorithms) {
    ASSERT_TRUE(a.metering);
    const auto& m = *a.metering;
    if (a.setup.name == "pgda" || a.setup.name == "gdaschur") EXPECT_EQ(m.rounds_per_iteration, 2u);
    if (a.setup.name == "spgda" || a.setup.name == "sgdaschur") EXPECT_EQ(m.rounds_per_iteration, 1u);
    if (m.preconditioner_matches) EXPECT_TRUE(*m.preconditioner_matches);
    if (a.setup.name == "pgda1h") EXPECT_EQ(m.range, 1u);
  }
}

TEST(Run, NumberFormatting) {
  EXPECT_EQ(format_number(-2.5), "-2.5");
  EXPECT_EQ(format_number(NAN), "nan");
  EXPECT_EQ(format_number(0.1), "0.1");
}

TEST(Io, GraphRoundTrip) {
  const auto g = fixtures::rgg(30, 4);
  const auto back = io::graph_from_json(io::graph_to_json(*g));
  EXPECT_TRUE(back == *g);
  EXPECT_EQ(back.coords(), g->coords());
  const auto single = io::graph_to_json(Graph(std::vector<std::vector<vertex>>{{}}));
  EXPECT_TRUE(single["edges"].empty());
  EXPECT_THROW(io::graph_from_json(json{{"n", 2}, {"edges", {{0, 5}}}}), invalid_vertex);
  EXPECT_THROW(io::graph_from_json(json{{"edges", json::array()}}), invalid_input);
}

TEST(Io, MatrixAndFilterRoundTrip) {
  const auto g = fixtures::rgg(20, 2);
  auto rng = make_rng(4);
  const auto a = random::local_matrix(g, 2, rng);
  EXPECT_EQ(max_abs_diff(io::matrix_from_json(io::matrix_to_json(a), g), a), 0.0);
  const auto f = random::poly_filter(g, rng);
  const auto back = io::poly_filter_from_json(io::poly_filter_to_json(f), g);
  EXPECT_EQ(max_abs_diff(poly_to_matrix(back), poly_to_matrix(f)), 0.0);
  EXPECT_THROW(io::matrix_from_json(json{{"n", 3}, {"triplets", json::array()}}, g), dimension_mismatch);
  EXPECT_THROW(io::matrix_from_json(json{{"n", 20}, {"triplets", {{0, 1}}}}, g), invalid_input);
}

TEST(Io, FileBackedConfig) {
  const auto g = fixtures::path(6);
  const auto gpath = scratch("path6.json");
  io::write_json(gpath.string(), io::graph_to_json(*g));
  const auto fpath = scratch("laplace_filter.json");
  io::write_json(fpath.string(), io::poly_filter_to_json(PolyFilter::univariate(normalized_laplacian(g), {0.0, 1.0})));
  const auto cpath = scratch("cfg.json");
  io::write_json(cpath.string(), json{{"graph", {{"file", "path6.json"}}},
                                      {"filter", {{"type", "polyfilter"}, {"path", "laplace_filter.json"}}},
                                      {"lambda", 0.0},
                                      {"algorithms", {"spgda1h", "pgda"}},
                                      {"M", 50},
                                      {"trials", 2}});
  const auto cfg = load_config(cpath.string());
  EXPECT_EQ(cfg.graph.file, gpath.string());
  const auto res = run_experiment(cfg);
  ASSERT_TRUE(res.all_ok());
  EXPECT_LT(res.algorithms[0].mean_nr.back(), res.algorithms[0].mean_nr.front());
}

TEST(Checks, SuitesPass) {
  for (const auto& name : checks::suite_names()) {
    const auto rep = checks::run_suite(name, 1);
    EXPECT_TRUE(rep.passed()) << name;
    const auto j = rep.to_json();
    EXPECT_EQ(j["suite"], name);
    EXPECT_FALSE(j["properties"].empty());
  }
  EXPECT_THROW(checks::run_suite("nonsense", 1), invalid_parameter);
}
