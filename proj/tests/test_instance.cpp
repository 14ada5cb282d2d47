#include <doctest.h>

#include "lprc/errors.hpp"
#include "lprc/genbench.hpp"
#include "lprc/instance.hpp"
#include "support/oracles.hpp"

using namespace lprc;
using lprc::testing::Builder;

namespace {

bool has_code(const std::vector<Violation>& vs, const std::string& code) {
  for (const auto& v : vs)
    if (v.code == code) return true;
  return false;
}

bool has_message(const std::vector<Violation>& vs, const std::string& text) {
  for (const auto& v : vs)
    if (v.message.find(text) != std::string::npos) return true;
  return false;
}

Builder small() {
  Builder b;
  int l = b.line("L1", {"a", "b", "c"});
  int d = b.dummy();
  int bus = b.bus("bus1", 2, {l, d});
  int od = b.od("a", "c", 2);
  b.reward(bus, l, od, 1);
  return b;
}

const char* kMinimal = R"({
  "K": 1,
  "nodes": ["x"],
  "arcs": [],
  "lines": [{"id": "dummy", "arcs": []}],
  "buses": [{"id": "b", "capacity": 1, "candidate_lines": ["dummy"]}],
  "od_pairs": []
})";

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-0.125") == make_rational(-1, 8));
  CHECK(parse_rational("7/20") == make_rational(7, 20));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational("1."), ParseError);
  CHECK(format_rational(make_rational(1, 8)) == "0.125");
  CHECK(format_rational(make_rational(-3, 4)) == "-0.75");
  CHECK(format_rational(make_rational(1, 3)) == "1/3");
  CHECK(format_rational(Rational(5)) == "5");
  CHECK(round_to_denominator(0.123456, 10000) == make_rational(1235, 10000));
}

TEST_CASE("valid instance has no violations") {
  CHECK(validate(small().in).empty());
}

TEST_CASE("cost out of range is reported") {
  Builder b = small();
  b.cost(0, 0, 0, make_rational(3, 2));
  auto vs = validate(b.in);
  CHECK(has_code(vs, "cost_range"));
  CHECK(has_message(vs, "cost out of [0,1]"));
}

TEST_CASE("dummy line reward is reported") {
  Builder b = small();
  b.in.rewards[{0, 1, 0}] = 2;
  CHECK(has_message(validate(b.in), "dummy line must have zero reward"));
}

TEST_CASE("structural violations") {
  SUBCASE("missing dummy") {
    Builder b = small();
    b.in.buses[0].candidate_lines = {0};
    CHECK(has_code(validate(b.in), "missing_dummy"));
  }
  SUBCASE("bad chaining") {
    Builder b = small();
    b.line("L2", {"c", "d"});
    b.in.lines.back().arcs = {0, 0};
    b.in.lines.back().nodes = b.in.walk_nodes(b.in.lines.back().arcs);
    CHECK(has_code(validate(b.in), "bad_chaining"));
  }
  SUBCASE("reward on an unservable OD") {
    Builder b = small();
    int od = b.od("c", "a", 1);
    b.in.rewards[{0, 0, od}] = 1;
    CHECK(has_code(validate(b.in), "reward_unservable"));
  }
  SUBCASE("bad capacity and demand") {
    Builder b = small();
    b.in.buses[0].capacity = 0;
    b.in.od_pairs[0].demand = 0;
    auto vs = validate(b.in);
    CHECK(has_code(vs, "bad_capacity"));
    CHECK(has_code(vs, "bad_demand"));
  }
  SUBCASE("od self loop") {
    Builder b = small();
    b.od("a", "a", 1);
    CHECK(has_code(validate(b.in), "od_self"));
  }
}

TEST_CASE("subpath index") {
  Builder b;
  int l = b.line("loop", {"a", "b", "c", "a", "d"});
  b.dummy();
  b.bus("bus1", 1, {0, 1});
  int ab = b.od("a", "b", 1);
  int ca = b.od("c", "a", 1);
  int da = b.od("d", "a", 1);
  int ad = b.od("a", "d", 1);
  auto index = build_subpath_index(b.in);
  CHECK(index.at(ab, l) == ArcRange{0, 0});
  CHECK(index.at(ca, l) == ArcRange{2, 2});
  CHECK_FALSE(index.at(da, l).has_value());
  // First visit of the origin, first later visit of the destination.
  CHECK(index.at(ad, l) == ArcRange{0, 3});
  CHECK_FALSE(index.at(ab, 1).has_value());
}

TEST_CASE("subpath ranges match node endpoints on generated instances") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Instance in = gen_random_instance(lprc::testing::micro_config(CostRegime::kGeneral), seed);
    auto index = build_subpath_index(in);
    for (int l = 0; l < static_cast<int>(in.lines.size()); ++l)
      for (int o = 0; o < in.num_ods(); ++o) {
        auto r = index.at(o, l);
        auto naive = lprc::testing::naive_span(in, l, o);
        if (!r) {
          CHECK(naive.first == -1);
          for (int bus = 0; bus < in.num_buses(); ++bus) CHECK(in.reward(bus, l, o) == 0);
          continue;
        }
        CHECK(naive == std::pair{r->first, r->last});
        const Line& line = in.lines[l];
        CHECK(in.network.arcs[line.arcs[r->first]].tail == in.od_pairs[o].origin);
        CHECK(in.network.arcs[line.arcs[r->last]].head == in.od_pairs[o].destination);
      }
  }
}

TEST_CASE("load minimal document") {
  Instance in = load_instance(kMinimal);
  CHECK(in.num_buses() == 1);
  CHECK(validate(in).empty());
}

TEST_CASE("load errors name the field") {
  std::string doc = kMinimal;
  doc.replace(doc.find("\"K\": 1,"), 7, "");
  try {
    load_instance(doc);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("K") != std::string::npos);
  }
  try {
    load_instance("{\n  \"K\": 1,\n  oops\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.location() == "line 3");
  }
}

TEST_CASE("save/load round trip") {
  Builder b = small();
  b.in.set_reward(0, 0, 0, make_rational(1, 3));
  b.in.set_cost(0, 0, 0, make_rational(1, 7));
  Instance back = load_instance(save_instance(b.in));
  CHECK(back == b.in);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomConfig c = lprc::testing::micro_config(CostRegime::kSmall, 2);
    Instance in = gen_random_instance(c, seed);
    CHECK(load_instance(save_instance(in)) == in);
  }
}

TEST_CASE("OD csv") {
  Network net{{"a", "b", "c"}, {}};
  auto ods = load_od_csv("origin,destination,demand\na,b,3\na,b,2\nb,c,1\n", net);
  REQUIRE(ods.size() == 2);
  CHECK(ods[0] == OdPair{0, 1, 5});
  CHECK(ods[1] == OdPair{1, 2, 1});
  CHECK(load_od_csv("origin,destination,demand\n", net).empty());
  try {
    load_od_csv("origin,destination,demand\na,a,1\n", net);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("origin equals destination") != std::string::npos);
  }
  CHECK_THROWS_AS(load_od_csv("origin,destination,demand\na,z,1\n", net), ParseError);
  CHECK_THROWS_AS(load_od_csv("origin,destination,demand\na,b,1.5\n", net), ParseError);
  CHECK_THROWS_AS(load_od_csv("origin,destination,demand\na,b,0\n", net), ParseError);
}

TEST_CASE("indexed instance lookups") {
  IndexedInstance in(small().in);
  CHECK(in.dummy_line(0) == 1);
  CHECK(in.line_index("L1") == 0);
  CHECK(in.bus_index("bus1") == 0);
  const Candidate& c = in.candidate(0, 0);
  REQUIRE(c.served.size() == 1);
  CHECK(c.served[0].reward == 1);
  CHECK(c.served[0].range == ArcRange{0, 1});
  CHECK_THROWS_AS(in.candidate(0, 5), PreconditionError);
}
