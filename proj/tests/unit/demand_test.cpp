#include "generators.hpp"
#include "oracles.hpp"

#include "walras/catalog.hpp"
#include "walras/demand.hpp"
#include "walras/oracle.hpp"

#include <doctest.h>

#include <algorithm>

using namespace walras;
using walras::testing::Rng;

namespace {

Instance two_fives()
{
  return catalog::two_bidders_one_item();
}

Instance one_five()
{
  return Instance{{"x"}, {make_unit_demand(std::vector<Value>{5})}};
}

PriceVector price(std::vector<Value> values)
{
  return PriceVector(std::move(values));
}

Bundle of(std::initializer_list<Item> items)
{
  Bundle out;
  for (Item j : items)
  {
    out = out.with(j);
  }
  return out;
}

Instance random_any(Rng& rng)
{
  std::size_t const n = static_cast<std::size_t>(testing::uniform(rng, 1, 4));
  std::size_t const m = static_cast<std::size_t>(testing::uniform(rng, 2, 5));
  switch (testing::uniform(rng, 0, 2))
  {
  case 0:
    return testing::random_gs_instance(rng, n, m, 8);
  case 1:
    return testing::random_ggs2_instance(rng, n, m, testing::uniform(rng, 1, 8));
  default:
    return testing::random_table_instance(rng, n, m, 8);
  }
}

}  // namespace

TEST_CASE("utility")
{
  auto const v = catalog::ggs2_not_gs_valuation();
  CHECK(utility(v, price({0, 1, 2}), of({0, 1})) == 3);
  CHECK(utility(v, price({0, 1, 2}), Bundle::empty()) == 0);
  CHECK(utility(make_unit_demand(std::vector<Value>{5}), price({5}), of({0})) == 0);
  CHECK(utility(make_unit_demand(std::vector<Value>{1}), price({3}), of({0})) == -2);
}

TEST_CASE("demand sets")
{
  auto const v = catalog::ggs2_not_gs_valuation();
  auto const at_p = demand_sets(v, price({0, 1, 2}));
  CHECK(at_p.utility == 3);
  CHECK(at_p.demands(of({0, 1})));

  auto const at_q = demand_sets(v, price({2, 1, 2}));
  for (Bundle s : at_q.demand)
  {
    CHECK_FALSE(s.contains(1));
  }

  auto const zero = demand_sets(Valuation::from_table(2, {0, 0, 0, 0}), price({0, 0}));
  CHECK(zero.demand.size() == 4);
  CHECK(zero.minimal_demand == std::vector<Bundle>{Bundle::empty()});
  CHECK(zero.utility == 0);

  auto const five = demand_sets(make_unit_demand(std::vector<Value>{5}), price({3}));
  CHECK(five.demand == std::vector<Bundle>{of({0})});
  CHECK(five.utility == 2);
}

TEST_CASE("demand reports agree with brute force")
{
  Rng rng(17);
  for (int t = 0; t < 300; ++t)
  {
    auto const instance = random_any(rng);
    auto const p = testing::random_price(rng, instance.item_count(), 9);
    for (auto const& v : instance.players)
    {
      auto const report = demand_sets(v, p);
      auto const demand = testing::ref_demand(v, p);
      CHECK(report.demand == demand);
      CHECK(report.minimal_demand == testing::ref_minimal(demand));
      CHECK(report.utility == testing::ref_max_utility(v, p));
      CHECK(report.utility >= 0);
      CHECK(max_utility(v, p) == report.utility);
      for (Bundle s : report.minimal_demand)
      {
        CHECK(report.demands(s));
      }
    }
  }
}

TEST_CASE("f_i and f")
{
  CHECK(f_i(make_unit_demand(std::vector<Value>{5}), price({0}), of({0})) == 1);
  CHECK(f_i(catalog::ggs2_not_gs_valuation(), price({0, 0, 0}), Bundle::empty()) == 0);

  auto const five = catalog::no_obstacle_instance(5);
  CHECK(f_i(five.players[3], PriceVector(8), Bundle::single(7)) == 0);

  CHECK(f(two_fives(), price({0}), of({0})) == 1);
  CHECK(f(two_fives(), price({0}), Bundle::empty()) == 0);
}

TEST_CASE("f agrees with brute force")
{
  Rng rng(23);
  for (int t = 0; t < 200; ++t)
  {
    auto const instance = random_any(rng);
    auto const p = testing::random_price(rng, instance.item_count(), 9);
    auto const s = testing::random_bundle(rng, instance.item_count());
    CHECK(f(instance, p, s) == testing::ref_f(instance, p, s));
    CHECK(f_i(instance.players[0], p, s) == testing::ref_f_i(instance.players[0], p, s));
  }
}

TEST_CASE("over-demanded set examples")
{
  auto const both = over_demanded_set(two_fives(), price({0}));
  CHECK(both.o_star == of({0}));
  CHECK(both.f_value == 1);
  CHECK(both.per_player_f == std::vector<Value>{1, 1});
  CHECK(both.unique);

  CHECK(over_demanded_set(one_five(), price({0})).o_star.is_empty());

  auto const five = catalog::no_obstacle_instance(5);
  CHECK(over_demanded_set(five, PriceVector(8)).o_star.is_empty());
  for (std::uint32_t mask = 0; mask < bundle_count(8); ++mask)
  {
    CHECK(f(five, PriceVector(8), Bundle(mask)) <= 0);
  }
}

TEST_CASE("over-demanded set agrees with brute force")
{
  Rng rng(29);
  for (int t = 0; t < 200; ++t)
  {
    auto const instance = random_any(rng);
    auto const p = testing::random_price(rng, instance.item_count(), 6);
    auto const report = over_demanded_set(instance, p);
    auto const ref = testing::ref_obstacle(instance, p);
    if (ref.minimal_maximizers.empty())
    {
      CHECK(report.o_star.is_empty());
      continue;
    }
    auto const lex_first = *std::min_element(ref.minimal_maximizers.begin(), ref.minimal_maximizers.end(), lex_less);
    CHECK(report.o_star == lex_first);
    CHECK(report.f_value == ref.best);
    CHECK(report.unique == (ref.minimal_maximizers.size() == 1));
    Value sum = 0;
    for (Value x : report.per_player_f)
    {
      sum += x;
    }
    CHECK(report.f_value == sum - static_cast<Value>(report.o_star.size()));
  }
}

TEST_CASE("an obstacle rules out envy-free allocations on every class")
{
  Rng rng(31);
  for (int t = 0; t < 300; ++t)
  {
    auto const instance = random_any(rng);
    auto const p = testing::random_price(rng, instance.item_count(), 6);
    if (over_demanded_set(instance, p).f_value > 0)
    {
      CHECK_FALSE(testing::ref_envy_free(instance, p, false).has_value());
    }
  }
}

TEST_CASE("lyapunov")
{
  CHECK(lyapunov(two_fives(), price({0})) == 10);
  CHECK(lyapunov(two_fives(), price({5})) == 5);
  Instance zero{{"x", "y"}, {Valuation::from_table(2, {0, 0, 0, 0})}};
  CHECK(lyapunov(zero, price({0, 0})) == 0);

  Rng rng(37);
  for (int t = 0; t < 100; ++t)
  {
    auto const instance = random_any(rng);
    auto const p = testing::random_price(rng, instance.item_count(), 9);
    CHECK(lyapunov(instance, p) == testing::ref_lyapunov(instance, p));
  }
}

TEST_CASE("minimal minimizer examples")
{
  auto const r = minimal_minimizer(two_fives(), price({0}));
  CHECK(r.set == of({0}));
  CHECK(r.lyapunov == 9);
  CHECK_FALSE(r.tie_break_used);

  CHECK(minimal_minimizer(two_fives(), price({5})).set.is_empty());
}

TEST_CASE("minimal minimizer is the smallest argmin of L(p + 1_S)")
{
  Rng rng(41);
  for (int t = 0; t < 100; ++t)
  {
    auto const instance = random_any(rng);
    std::size_t const m = instance.item_count();
    auto const p = testing::random_price(rng, m, 6);
    auto const r = minimal_minimizer(instance, p);
    Value best = testing::ref_lyapunov(instance, p);
    for (std::uint32_t mask = 0; mask < bundle_count(m); ++mask)
    {
      best = std::min(best, testing::ref_lyapunov(instance, p.raised(Bundle(mask))));
    }
    CHECK(r.lyapunov == best);
    CHECK(testing::ref_lyapunov(instance, p.raised(r.set)) == best);
    for (std::uint32_t mask = 0; mask < bundle_count(m); ++mask)
    {
      Bundle const s(mask);
      if (testing::ref_lyapunov(instance, p.raised(s)) == best)
      {
        CHECK(s.size() >= r.set.size());
      }
    }
  }
}

TEST_CASE("on gross substitutes the minimizer is the obstacle")
{
  Rng rng(43);
  for (int t = 0; t < 150; ++t)
  {
    std::size_t const n = static_cast<std::size_t>(testing::uniform(rng, 1, 4));
    std::size_t const m = static_cast<std::size_t>(testing::uniform(rng, 1, 5));
    auto const instance = testing::random_gs_instance(rng, n, m, 8);
    auto const p = testing::random_price(rng, m, 8);
    auto const obstacle = over_demanded_set(instance, p);
    auto const minimizer = minimal_minimizer(instance, p);
    CHECK(obstacle.unique);
    CHECK_FALSE(minimizer.tie_break_used);
    if (obstacle.f_value > 0)
    {
      CHECK(minimizer.set == obstacle.o_star);
    }
  }
}

TEST_CASE("gross-substitute identities hold at random points")
{
  Rng rng(47);
  for (int t = 0; t < 300; ++t)
  {
    std::size_t const n = static_cast<std::size_t>(testing::uniform(rng, 1, 3));
    std::size_t const m = static_cast<std::size_t>(testing::uniform(rng, 1, 5));
    auto const instance = testing::random_gs_instance(rng, n, m, 8);
    auto const p = testing::random_price(rng, m, 9);
    auto const q = testing::random_price(rng, m, 9);
    auto const s = testing::random_bundle(rng, m);
    auto const j = static_cast<Item>(testing::uniform(rng, 0, static_cast<Value>(m) - 1));

    // u_p = u_{p + 1_S} + f_i(S)
    for (auto const& v : instance.players)
    {
      CHECK(testing::ref_max_utility(v, p) == testing::ref_max_utility(v, p.raised(s)) + testing::ref_f_i(v, p, s));
    }
    if (!s.contains(j))
    {
      CHECK(testing::ref_f(instance, p.raised(Bundle::single(j)), s) >= testing::ref_f(instance, p, s));
    }
    CHECK(testing::ref_lyapunov(instance, coordinate_max(p, q)) + testing::ref_lyapunov(instance, coordinate_min(p, q)) <=
          testing::ref_lyapunov(instance, p) + testing::ref_lyapunov(instance, q));
    CHECK(testing::ref_lyapunov(instance, p.raised(Bundle::single(j))) - testing::ref_lyapunov(instance, p) <= 1);
    if (testing::ref_f(instance, p, s) <= 0)
    {
      CHECK(testing::ref_lyapunov(instance, p.raised(s)) >= testing::ref_lyapunov(instance, p));
    }
  }
}
