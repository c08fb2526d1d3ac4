#include "generators.hpp"

#include "walras/catalog.hpp"
#include "walras/io.hpp"

#include <doctest.h>

using namespace walras;
using walras::testing::Rng;

TEST_CASE("bundle keys use declared item order")
{
  std::vector<std::string> const items{"x", "y", "z"};
  Bundle const xz = Bundle::single(0).with(2);
  CHECK(io::bundle_key(xz, items) == "x,z");
  CHECK(io::bundle_key(Bundle::empty(), items) == "");
  CHECK(io::parse_bundle_key("z,x", items) == xz);
  CHECK(io::parse_bundle_key("", items) == Bundle::empty());
  CHECK_THROWS_AS(io::parse_bundle_key("x,w", items), io::ParseError);
  CHECK_THROWS_AS(io::parse_bundle_key("x,x", items), io::ParseError);
  CHECK(io::bundle_json(xz, items) == io::Json::array({"x", "z"}));
}

TEST_CASE("instances round-trip through JSON")
{
  Rng rng(191);
  for (int t = 0; t < 100; ++t)
  {
    std::size_t const n = static_cast<std::size_t>(testing::uniform(rng, 1, 3));
    std::size_t const m = static_cast<std::size_t>(testing::uniform(rng, 2, 4));
    Instance instance;
    switch (t % 3)
    {
    case 0:
      instance = testing::random_gs_instance(rng, n, m, 8);
      break;
    case 1:
      instance = testing::random_ggs2_instance(rng, n, m, testing::uniform(rng, 1, 8));
      break;
    default:
      instance = testing::random_table_instance(rng, n, m, 8);
      break;
    }
    auto const once = io::parse_instance(io::instance_json(instance));
    CHECK(once == instance);
    auto const twice = io::parse_instance_text(io::instance_json(once).dump());
    CHECK(twice == once);
  }
  auto const five = catalog::no_obstacle_instance(5);
  CHECK(io::parse_instance(io::instance_json(five)) == five);
}

TEST_CASE("instance schema")
{
  auto const parsed = io::parse_instance_text(R"({
    "items": ["a", "b", "c"],
    "players": [
      {"type": "truncation", "k": 2, "M": 4,
       "base": {"type": "unit_demand", "values": {"a": 2, "b": 2, "c": 4}}},
      {"type": "additive", "values": {"a": 1, "c": 2}},
      {"type": "table", "values": {"": 0, "a": 1, "b": 1, "c": 1, "a,b": 2, "a,c": 2, "b,c": 2, "a,b,c": 2}}
    ]})");
  CHECK(parsed.players[0] == catalog::ggs2_not_gs_valuation());
  CHECK(parsed.players[1](Bundle::full(3)) == 3);
  CHECK(parsed.players[2](Bundle::single(1).with(2)) == 2);
  auto const back = io::instance_json(parsed);
  CHECK(back["players"][0]["type"] == "truncation");
  CHECK(back["players"][0]["base"]["type"] == "unit_demand");
  CHECK(back["players"][2]["values"]["a,b,c"] == 2);
}

TEST_CASE("malformed instances are rejected")
{
  CHECK_THROWS_AS(io::parse_instance_text("{\"items\": [\"a\"], "), io::ParseError);
  CHECK_THROWS_AS(io::parse_instance_text(R"({"items": ["a"]})"), io::ParseError);
  CHECK_THROWS_AS(io::parse_instance_text(R"({"items": ["a", "a"], "players": []})"), io::ParseError);
  CHECK_THROWS_AS(io::parse_instance_text(R"({"items": ["a"], "players": [{"type": "table", "values": {"": 0}}]})"),
                  io::ParseError);
  CHECK_THROWS_AS(
    io::parse_instance_text(R"({"items": ["a"], "players": [{"type": "additive", "values": {"q": 1}}]})"),
    io::ParseError);
  CHECK_THROWS_AS(
    io::parse_instance_text(R"({"items": ["a"], "players": [{"type": "additive", "values": {"a": 1.5}}]})"),
    io::ParseError);
  CHECK_THROWS_AS(io::parse_instance_text(R"({"items": ["a"], "players": [{"type": "xor", "values": {}}]})"),
                  io::ParseError);
  CHECK_THROWS_AS(io::parse_instance_text(R"({"items": ["a"], "players": []})"), InvalidInput);
  CHECK_THROWS_AS(
    io::parse_instance_text(R"({"items": ["a", "b"], "players": [{"type": "table", "values": {"": 0, "a": 3, "b": 0, "a,b": 2}}]})"),
    InvalidInput);
}

TEST_CASE("prices")
{
  std::vector<std::string> const items{"x", "y"};
  auto const p = io::parse_price_text(R"({"y": 3})", items);
  CHECK(p == PriceVector(std::vector<Value>{0, 3}));
  CHECK(io::price_json(p, items) == io::Json{{"x", 0}, {"y", 3}});
  CHECK_THROWS_AS(io::parse_price_text(R"({"z": 1})", items), io::ParseError);
  CHECK_THROWS_AS(io::parse_price_text(R"({"x": -1})", items), io::ParseError);
  CHECK_THROWS_AS(io::parse_price_text(R"({"x": )", items), io::ParseError);
}

TEST_CASE("report schemas")
{
  auto const instance = catalog::two_bidders_one_item();
  auto const trace = auctions::gul_stacchetti(instance);
  auto const j = io::trace_json(trace, instance.items);
  CHECK(j["algorithm"] == "gul_stacchetti");
  CHECK(j["terminated"] == true);
  CHECK(j["steps"].size() == 5);
  CHECK(j["steps"][0]["t"] == 0);
  CHECK(j["steps"][0]["raised"] == io::Json::array({"x"}));
  CHECK(j["steps"][0]["lyapunov"] == 10);
  CHECK(j["steps"][0]["f"] == 1);
  CHECK(j["final_price"]["x"] == 5);

  auto const cert = oracle::is_walrasian(instance, trace.final_price);
  REQUIRE(cert.has_value());
  auto const c = io::certificate_json(*cert, instance.items);
  for (auto const* key : {"price", "allocation", "envy_free", "all_positive_priced_allocated", "lyapunov", "max_welfare"})
  {
    CHECK(c.contains(key));
  }
  CHECK(c["lyapunov"] == 5);
}
