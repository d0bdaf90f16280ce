#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qtsync/certifier.hpp"
#include "qtsync/enumerate.hpp"
#include "qtsync/json_io.hpp"

using namespace qtsync;
using json = nlohmann::json;

TEST(Json, RoundTrips) {
  for (std::uint64_t k = 0; k < 30; ++k) {
    StreamRng rng(51, k);
    const Graph g = oracle::random_graph(1 + rng.below(12), 0.5, rng);
    EXPECT_EQ(io::graph_from_json(json::parse(io::to_json(g).dump())), g);
    EXPECT_EQ(io::graph_from_json(json{{"graph", io::to_json(g)}}), g);
    const PhaseState s = random_state(g.n(), rng);
    // Doubles survive the text form bit for bit.
    EXPECT_EQ(io::state_from_json(json::parse(io::to_json(s).dump())).theta, s.theta);
  }
  for (const auto& t : enumerate_rooted_trees_up_to(6)) {
    EXPECT_EQ(io::forest_from_json(json::parse(io::to_json(t).dump())), t);
  }
}

TEST(Json, ForestUsesNullForRoots) {
  const RootedForest f(std::vector<RootedForest::Parent>{std::nullopt, 0, std::nullopt});
  const auto j = io::to_json(f);
  EXPECT_EQ(j.dump(), R"({"parent":[null,0,null]})");
  EXPECT_EQ(io::forest_from_json(json{{"forest", j}}), f);
}

TEST(Json, RejectsMalformedInput) {
  EXPECT_THROW(io::graph_from_json(json{{"n", 3}}), std::invalid_argument);
  EXPECT_THROW(io::graph_from_json(json::parse(R"({"n":3,"edges":[[0,1,2]]})")), std::invalid_argument);
  EXPECT_THROW(io::graph_from_json(json::parse(R"({"n":3,"edges":[[0,3]]})")), std::invalid_argument);
  EXPECT_THROW(io::forest_from_json(json::parse(R"({"parent":[1,0]})")), std::invalid_argument);
  EXPECT_THROW(io::state_from_json(json::parse(R"({"angles":[1]})")), std::invalid_argument);
  EXPECT_THROW(io::read_json_file("/nonexistent/file.json"), std::runtime_error);
}

TEST(Json, CertificateFields) {
  const RootedForest f(std::vector<RootedForest::Parent>{std::nullopt, 0, 0, 1});
  const Graph g = comparability_closure(f);
  const auto ok = io::certificate_to_json(certify(g, f, PhaseState(std::vector<double>(4, 0.1))));
  EXPECT_EQ(ok.at("overall").at("status"), "certified_sync");
  ASSERT_EQ(ok.at("layers").size(), 3u);
  EXPECT_EQ(ok.at("layers")[0].at("depth"), 2);
  const auto& root = ok.at("layers")[2].at("nodes")[0];
  EXPECT_EQ(root.at("verdict"), "leaf_like");
  EXPECT_EQ(root.at("step1_alignment").size(), 2u);
  EXPECT_EQ(root.at("step3_parent_child").size(), 2u);

  CertifyOptions o;
  o.require_sosp = false;
  const auto bad = io::certificate_to_json(certify(g, f, PhaseState({0.0, kPi, 0.0, kPi}), o));
  EXPECT_EQ(bad.at("overall").at("status"), "failed");
  EXPECT_TRUE(bad.at("overall").contains("node"));
  EXPECT_FALSE(bad.at("overall").at("reason").get<std::string>().empty());
}

TEST(Json, SurveyFields) {
  const auto rep = multistart_survey(cycle_graph(5), 50, 3, {}, "C5");
  const auto j = io::survey_to_json(rep);
  EXPECT_EQ(j.at("graph_id"), "C5");
  EXPECT_EQ(j.at("n_starts"), 50);
  EXPECT_FALSE(j.contains("wall_seconds"));
  EXPECT_TRUE(io::survey_to_json(rep, true).contains("wall_seconds"));
  std::size_t total = 0;
  for (const auto& [k, v] : j.at("counts").items()) total += v.get<std::size_t>();
  EXPECT_EQ(total, 50u);
  EXPECT_EQ(io::survey_csv_row(rep).rfind("C5,5,50,", 0), 0u);
}

TEST(Csv, TrajectoryColumns) {
  const auto tr = integrate(complete_graph(3), PhaseState({0.0, 0.5, 1.0}));
  const std::string csv = io::trajectory_csv(tr);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,theta_0,theta_1,theta_2,energy");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), tr.samples.size() + 1);
}
