/*
 Copyright 2026 The netsched Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "netsched/io.hpp"
#include "netsched/presets.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>

namespace netsched {
namespace {

using testing::matrices_near;

RunConfig experiment1_config() {
    const auto pre = presets::preset("experiment1");
    RunConfig cfg;
    cfg.ncs = pre.config;
    cfg.schedule = pre.schedule;
    for (const auto& [i, c] : pre.certificates) cfg.certificates.push_back({i, c});
    return cfg;
}

std::string where_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.where();
    }
    return "<accepted>";
}

const char* kMinimal = R"({"capacity": 1, "plants": [
  {"index": 1, "A": [[2.0]], "B": [[1.0]], "K": [[-1.5]]},
  {"index": 2, "A": [[1.5]], "B": [[1.0]]}]})";

TEST(Config, ShippedExperimentFileLoads) {
    const auto cfg = load_config(std::string(NETSCHED_SOURCE_DIR) + "/presets/experiment1.json");
    EXPECT_EQ(cfg.ncs.size(), 2);
    EXPECT_EQ(cfg.ncs.capacity, 1);
    ASSERT_TRUE(cfg.schedule.has_value());
    EXPECT_EQ(cfg.schedule->probabilities.values, (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
    EXPECT_EQ(cfg.certificates.size(), 2u);
    EXPECT_TRUE(matrices_near(cfg.ncs.plant(1).A, presets::batch_reactor_A(), 0.0));
    EXPECT_TRUE(matrices_near(*cfg.ncs.plant(2).K, presets::pendulum_K(), 0.0));
}

TEST(Config, MinimalDocumentUsesDefaults) {
    const auto cfg = parse_config(kMinimal);
    EXPECT_EQ(cfg.ncs.size(), 2);
    EXPECT_TRUE(cfg.ncs.plant(1).has_gain());
    EXPECT_FALSE(cfg.ncs.plant(2).has_gain());
    EXPECT_FALSE(cfg.schedule.has_value());
    EXPECT_EQ(cfg.solver, SolverOptions{});
    EXPECT_EQ(cfg.simulation, SimulationOptions{});
    EXPECT_EQ(cfg.solver.h, Rational(1, 10));
    EXPECT_EQ(cfg.simulation.horizon, 1000);
}

TEST(Config, RoundTrip) {
    auto cfg = experiment1_config();
    cfg.solver.h = Rational(1, 4);
    cfg.simulation = {250, 40, 77};
    cfg.output = "elsewhere";
    const auto text = serialize(cfg);
    const auto back = parse_config(text);
    EXPECT_EQ(serialize(back), text);
    for (int i = 1; i <= 2; ++i) {
        EXPECT_TRUE(matrices_near(back.ncs.plant(i).A, cfg.ncs.plant(i).A, 0.0));
        EXPECT_TRUE(matrices_near(back.ncs.plant(i).B, cfg.ncs.plant(i).B, 0.0));
        EXPECT_TRUE(matrices_near(*back.ncs.plant(i).K, *cfg.ncs.plant(i).K, 0.0));
    }
    EXPECT_EQ(back.schedule->partition, cfg.schedule->partition);
    EXPECT_EQ(back.solver, cfg.solver);
    EXPECT_EQ(back.simulation, cfg.simulation);
    EXPECT_EQ(back.output, "elsewhere");
    EXPECT_TRUE(matrices_near(back.certificates[0].certificate.P_s, cfg.certificates[0].certificate.P_s, 0.0));
}

TEST(Config, CapacityMustBeBelowPlantCount) {
    std::string text = kMinimal;
    text.replace(text.find("\"capacity\": 1"), 13, "\"capacity\": 2");
    try {
        parse_config(text);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("capacity must satisfy 0<M<N"), std::string::npos);
    }
}

TEST(Config, FieldPathsInDiagnostics) {
    EXPECT_EQ(where_of(R"({"plants": []})"), "/capacity");
    EXPECT_EQ(where_of(R"({"capacity": 1, "plants": [{"index": 1, "B": [[1]]}]})"), "/plants/0/A");
    EXPECT_EQ(where_of(R"({"capacity": 1, "plants": [{"index": 1, "A": [[1, 2], [3]], "B": [[1]]}]})"),
              "/plants/0/A/1");
    EXPECT_EQ(where_of(R"({"capacity": 1, "plants": [{"index": 1, "A": [[1, "x"]], "B": [[1]]}]})"),
              "/plants/0/A/0/1");
    EXPECT_EQ(where_of(R"({"capacity": "one", "plants": []})"), "/capacity");
    EXPECT_EQ(where_of(R"({"capacity": 1, "plants": [{"index": 1, "A": [[1, 0], [0, 1]], "B": [[1]]}]})"),
              "/plants/0");
}

TEST(Config, RationalsMustBeStrings) {
    std::string text = kMinimal;
    text.pop_back();
    EXPECT_EQ(where_of(text + R"(, "solver": {"h": 0.1}})"), "/solver/h");
    EXPECT_EQ(where_of(text + R"(, "solver": {"h": "one tenth"}})"), "/solver/h");
    EXPECT_EQ(where_of(text + R"(, "solver": {"h": "3/2"}})"), "/solver/h");
    EXPECT_EQ(where_of(text + R"(, "schedule": {"blocks": [[1], [2]], "probabilities": ["1/2", 0.5]}})"),
              "/schedule/probabilities/1");
    EXPECT_EQ(parse_config(text + R"(, "solver": {"h": "1/20"}})").solver.h, Rational(1, 20));
}

TEST(Config, ScheduleInvariantsChecked) {
    std::string text = kMinimal;
    text.pop_back();
    EXPECT_EQ(where_of(text + R"(, "schedule": {"blocks": [[1], [1]], "probabilities": ["1/2", "1/2"]}})"),
              "/schedule");
    EXPECT_EQ(where_of(text + R"(, "schedule": {"blocks": [[1], [2]], "probabilities": ["1/3", "1/2"]}})"),
              "/schedule");
}

TEST(Config, SyntaxErrorsCarryLineAndColumn) {
    EXPECT_EQ(where_of("{\n  \"capacity\": 1,\n  \"plants\": [,]\n}"), "3:14");
    EXPECT_EQ(where_of("{"), "1:2");
}

TEST(Config, LoadPrefixesPath) {
    testing::TempDir dir("netsched-io");
    const auto path = (dir.path() / "bad.json").string();
    std::ofstream(path) << R"({"capacity": 1})";
    try {
        load_config(path);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.where(), path + ":/plants");
    }
    EXPECT_THROW(load_config((dir.path() / "missing.json").string()), std::runtime_error);
}

TEST(ResultDocuments, SearchOutcomeFields) {
    SearchOutcome out;
    out.status = SearchStatus::infeasible;
    out.multisets_examined = 3;
    const auto j = search_to_json(out);
    EXPECT_EQ(j.at("status"), "infeasible");
    EXPECT_EQ(j.at("multisets_examined"), 3);
}

}  // namespace
}  // namespace netsched
