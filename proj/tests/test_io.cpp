#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "support.hpp"

using namespace cdrop;
using namespace testing_support;
using cdrop::io::json;

namespace {

json minimal() {
  return json::parse(R"({
    "world": {"area_S": 1000, "time_window_T": 24},
    "events": [{"id": "e", "features": [{"name": "n", "digits": "42"}]}],
    "observer": {"identity": "ego", "home": {"x": 0, "y": 0, "resolution_a": 1}}
  })");
}

std::vector<std::string> fields_of(const json& j) {
  try {
    (void)io::parse_scenario(j);
  } catch (const io::SchemaError& e) {
    std::vector<std::string> out;
    for (const auto& v : e.violations()) out.push_back(v.field);
    return out;
  }
  return {};
}

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

TEST(Parse, Minimal) {
  const auto s = io::parse_scenario(minimal());
  ASSERT_EQ(s.events.size(), 1u);
  EXPECT_EQ(s.events[0].features[0].value, FeatureLiteral{DigitString{"42"}});
  EXPECT_TRUE(s.observer.is_ego);
  EXPECT_EQ(s.world.cost_model, InstructionCostModel{});
}

TEST(Parse, FullFixtureFields) {
  const auto s = fixture("eiffel_blaze.json");
  ASSERT_TRUE(s.events[0].location);
  EXPECT_EQ(s.events[0].location->id, "eiffel_tower");
  EXPECT_EQ(s.events[0].location->prominence_rank, 1);
  EXPECT_EQ(s.density_of(s.events[0]), 1e-4);

  const auto lk = fixture("lincoln_kennedy.json");
  EXPECT_EQ(lk.find_entity("kennedy")->prominence_rank, 3);
  EXPECT_EQ(lk.events[1].features[3].value, FeatureLiteral{std::uint64_t{100}});

  const auto tp = fixture("double_suicide_third_party.json");
  EXPECT_FALSE(tp.observer.is_ego);
  EXPECT_EQ(tp.observer.entity_id, "neighbour");

  const auto cd = fixture("double_suicide_common_decision.json");
  ASSERT_EQ(cd.hypotheses.size(), 1u);
  EXPECT_EQ(cd.hypotheses[0].credibility_cost, Bits(4));
}

TEST(Parse, StructuralErrors) {
  EXPECT_TRUE(contains(fields_of(json::array()), "$"));
  auto j = minimal();
  j.erase("world");
  EXPECT_TRUE(contains(fields_of(j), "world"));

  j = minimal();
  j["events"][0]["features"][0] = {{"name", "n"}, {"digits", "1"}, {"integer", 1}};
  EXPECT_TRUE(contains(fields_of(j), "events[e].features"));

  j = minimal();
  j["events"][0]["features"][0] = {{"name", "n"}, {"category", "x"}};
  EXPECT_TRUE(contains(fields_of(j), "events[e].features.domain_size"));

  j = minimal();
  j["events"][0]["location"] = "atlantis";
  EXPECT_TRUE(contains(fields_of(j), "events[e].location"));

  j = minimal();
  j["observer"]["identity"] = "someone";
  EXPECT_TRUE(contains(fields_of(j), "observer.identity"));

  j = minimal();
  j["world"]["area_S"] = "big";
  EXPECT_TRUE(contains(fields_of(j), "world.area_S"));
}

TEST(Parse, InvariantViolationsSurface) {
  auto j = minimal();
  j["events"][0]["features"].push_back({{"name", "n"}, {"digits", "7"}});
  EXPECT_TRUE(contains(fields_of(j), "events[e].features[n].name"));
  j = minimal();
  j["hypotheses"] = json::array({{{"id", "h"}, {"credibility_cost", 2}, {"explains", {"zzz"}}}});
  EXPECT_TRUE(contains(fields_of(j), "hypotheses[h].explains"));
}

TEST(Parse, CelebrityListGivesRank) {
  auto j = minimal();
  j["world"]["entities"] = json::array({{{"id", "a"}, {"kind", "person"}}, {{"id", "b"}, {"kind", "person"}, {"prominence_rank", 1}}});
  j["world"]["celebrity_lists"] = {{"stars", {"b", "a"}}};
  const auto s = io::parse_scenario(j);
  EXPECT_EQ(s.find_entity("a")->prominence_rank, 2);
  EXPECT_EQ(s.find_entity("b")->prominence_rank, 1);
}

TEST(ReadFile, Errors) {
  try {
    (void)io::read_json_file("/nonexistent/nope.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoFailure);
  }
  const std::string path = ::testing::TempDir() + "bad.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW((void)io::read_json_file(path), io::SchemaError);
  std::remove(path.c_str());
}

TEST(Output, Rounding) {
  EXPECT_EQ(io::round_bits(Bits(13.28771237)), 13.2877);
  EXPECT_EQ(io::round_bits(Bits(-0.00001)), 0.0);
  EXPECT_FALSE(std::signbit(io::round_bits(Bits(-0.00001))));
  EXPECT_DOUBLE_EQ(io::round_probability(1.855471e-12), 1.855e-12);
  EXPECT_DOUBLE_EQ(io::round_probability(1.0), 1.0);
}

TEST(Output, ReportJsonShape) {
  const auto r = coincidence_score(fixture("double_suicide.json"));
  const auto j = io::to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"U", "Cw", "C", "cognitive_probability", "hypothesis_used", "eq3_bound",
                                            "w_breakdown", "o_breakdown"}));
  EXPECT_TRUE(j["hypothesis_used"].is_null());
  EXPECT_EQ(j["o_breakdown"]["per_atom"].size(), r.o_breakdown.per_atom.size());
  EXPECT_EQ(j["o_breakdown"]["per_atom"][0]["machine"], "O");

  const auto neg = io::to_json(unexpectedness(fixture("kennedy_mention.json")));
  EXPECT_FALSE(neg.contains("cognitive_probability"));
  EXPECT_FALSE(neg.contains("eq3_bound"));
}

TEST(Output, ExplainRowsCoverEveryAtom) {
  const auto s = fixture("double_suicide_telepathy.json");
  const auto j = io::explain_json(s, unexpectedness(s));
  ASSERT_EQ(j["atoms"].size(), build_atoms(s).size());
  const auto& last = j["atoms"].back();
  EXPECT_EQ(last["atom"], "hypothesis(telepathy)");
  EXPECT_EQ(last["W_rule"], "omitted");
  EXPECT_EQ(last["O_rule"], "omitted");
  EXPECT_EQ(j["w_sequence"].size(), build_atoms(s).size() - 1);
}

TEST(Sweep, ParseSpec) {
  const auto spec = io::read_json_file(sweep_path("distance.json"));
  const auto parsed = parse_sweep_spec(spec, CDROP_SWEEP_DIR);
  EXPECT_EQ(parsed.parameter, SweepParameter::distance_km);
  ASSERT_EQ(parsed.values.size(), 9u);
  EXPECT_EQ(parsed.values.front(), 1.0);
  EXPECT_EQ(parsed.values.back(), 256.0);
  EXPECT_EQ(parsed.pointer, "/events/1/location/x");
}

TEST(Sweep, SpecErrors) {
  const auto fields = [](const json& j) {
    try {
      (void)parse_sweep_spec(j);
    } catch (const io::SchemaError& e) {
      std::vector<std::string> out;
      for (const auto& v : e.violations()) out.push_back(v.field);
      return out;
    }
    return std::vector<std::string>{};
  };
  const auto f = fields(json::parse(R"({"parameter": "speed", "values": [1, -2], "range": {}})"));
  EXPECT_TRUE(contains(f, "parameter"));
  EXPECT_TRUE(contains(f, "values"));
  EXPECT_TRUE(contains(f, "target"));
  EXPECT_TRUE(contains(fields(json::parse(R"({"parameter": "rank", "range": {"start": 1, "factor": 2, "count": 0},
                                               "target": {"scenario": "x", "pointer": "/a"}})")),
                       "range.count"));
  EXPECT_TRUE(contains(fields(json::parse(R"({"parameter": "rank", "values": [-1],
                                               "target": {"scenario": "x", "pointer": "/a"}})")),
                       "values"));
}

TEST(Sweep, RunAndCsv) {
  const auto spec = parse_sweep_spec(io::read_json_file(sweep_path("time.json")), CDROP_SWEEP_DIR);
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR((rows[i - 1].U - rows[i].U).value(), 1.0, 1e-9);
  const auto csv = to_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "param,U_bits,p");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Sweep, RankValuesAreIntegers) {
  const auto base = fixture_json("double_suicide_third_party.json");
  const double ego_u = unexpectedness(fixture("double_suicide.json")).U.value();
  const std::vector<double> ranks{1, 3, 7.4};
  const auto rows = run_sweep(base, "/world/entities/0/prominence_rank", ranks, SweepParameter::rank);
  EXPECT_NEAR(rows[0].U.value(), ego_u - 1.0, 1e-9);
  EXPECT_NEAR(rows[1].U.value(), ego_u - 2.0, 1e-9);
  EXPECT_NEAR(rows[2].U.value(), ego_u - 3.0, 1e-9);
  EXPECT_EQ(rows[2].param, 7.4);
}

TEST(Sweep, NegativeUHasEmptyProbability) {
  const auto base = fixture_json("double_suicide_common_decision.json");
  const std::vector<double> v{2};
  const auto rows = run_sweep(base, "/hypotheses/0/credibility_cost", v, SweepParameter::credibility_bits);
  ASSERT_FALSE(rows[0].p.has_value());
  const auto csv = to_csv(rows);
  EXPECT_EQ(csv.back(), '\n');
  EXPECT_EQ(csv[csv.size() - 2], ',');
}

TEST(Sweep, BadPointer) {
  const auto base = fixture_json("odometer.json");
  const std::vector<double> v{1};
  EXPECT_THROW((void)run_sweep(base, "/events/9/location/x", v, SweepParameter::distance_km), io::SchemaError);
  EXPECT_THROW((void)run_sweep(base, "no-slash", v, SweepParameter::distance_km), io::SchemaError);
}
