#include "generators.hpp"
#include "oracles.hpp"

#include "walras/auctions.hpp"
#include "walras/catalog.hpp"
#include "walras/demand.hpp"
#include "walras/oracle.hpp"

#include <doctest.h>

using namespace walras;
using namespace walras::auctions;
using walras::testing::Rng;

namespace {

PriceVector price(std::vector<Value> values)
{
  return PriceVector(std::move(values));
}

Instance random_gs(Rng& rng)
{
  std::size_t const n = static_cast<std::size_t>(testing::uniform(rng, 1, 4));
  std::size_t const m = static_cast<std::size_t>(testing::uniform(rng, 1, 4));
  return testing::random_gs_instance(rng, n, m, 8);
}

void check_trace_shape(const AuctionTrace& trace)
{
  PriceVector p(trace.final_price.size());
  for (std::size_t t = 0; t < trace.steps.size(); ++t)
  {
    auto const& step = trace.steps[t];
    CHECK(step.t == t);
    CHECK(step.price_before == p);
    CHECK_FALSE(step.raised.is_empty());
    p = p.raised(step.raised);
  }
  CHECK(p == trace.final_price);
}

}  // namespace

TEST_CASE("two bidders drive the price to their value")
{
  auto const instance = catalog::two_bidders_one_item();
  for (auto const& trace : {gul_stacchetti(instance), ausubel_ascending(instance), fine_auction(instance)})
  {
    CHECK(trace.terminated);
    CHECK_FALSE(trace.iteration_cap_hit);
    CHECK(trace.steps.size() == 5);
    CHECK(trace.final_price == price({5}));
    check_trace_shape(trace);
  }
  auto const gs = gul_stacchetti(instance);
  CHECK(gs.algorithm == "gul_stacchetti");
  CHECK(gs.steps[0].lyapunov_before == 10);
  CHECK(gs.steps[0].f_value == 1);
  CHECK(gs.steps[0].kind == StepKind::obstacle);
  CHECK(ausubel_ascending(instance).steps[0].kind == StepKind::minimizer);
}

TEST_CASE("a lone bidder pays nothing")
{
  Instance const one{{"x"}, {make_unit_demand(std::vector<Value>{5})}};
  for (auto const& trace : {gul_stacchetti(one), ausubel_ascending(one), fine_auction(one)})
  {
    CHECK(trace.terminated);
    CHECK(trace.steps.empty());
    CHECK(trace.final_price == price({0}));
  }
}

TEST_CASE("fine auction raises one item at a time")
{
  Rng rng(127);
  for (int t = 0; t < 50; ++t)
  {
    auto const instance = random_gs(rng);
    auto const trace = fine_auction(instance);
    for (auto const& step : trace.steps)
    {
      CHECK(step.raised.size() == 1);
    }
    check_trace_shape(trace);
  }
}

TEST_CASE("engines agree and end at the minimal walrasian price")
{
  Rng rng(131);
  for (int t = 0; t < 60; ++t)
  {
    auto const instance = random_gs(rng);
    auto const gs = gul_stacchetti(instance);
    auto const au = ausubel_ascending(instance);
    auto const fine = fine_auction(instance);
    REQUIRE(gs.steps.size() == au.steps.size());
    for (std::size_t k = 0; k < gs.steps.size(); ++k)
    {
      CHECK(gs.steps[k].raised == au.steps[k].raised);
      CHECK(gs.steps[k].price_before == au.steps[k].price_before);
    }
    CHECK(gs.ambiguous_steps == 0);
    CHECK(au.ambiguous_steps == 0);

    auto const star = testing::ref_minimal_walrasian(instance, instance.max_value());
    REQUIRE(star.size() == 1);
    CHECK(gs.final_price == star[0]);
    CHECK(fine.final_price == star[0]);
    CHECK(testing::ref_lyapunov(instance, gs.final_price) == testing::ref_welfare(instance));
    CHECK_FALSE(monitor_domination(gs, star[0]).has_value());
    CHECK_FALSE(monitor_domination(fine, star[0]).has_value());

    // At the end, no set with f <= 0 lowers the Lyapunov.
    std::size_t const m = instance.item_count();
    for (std::uint32_t mask = 0; mask < bundle_count(m); ++mask)
    {
      Bundle const s(mask);
      if (testing::ref_f(instance, gs.final_price, s) <= 0)
      {
        CHECK(testing::ref_lyapunov(instance, gs.final_price.raised(s)) >= testing::ref_lyapunov(instance, gs.final_price));
      }
    }
  }
}

TEST_CASE("policies")
{
  auto const instance = catalog::two_bidders_one_item();
  auto const full = run_with_policy(instance, full_obstacle_policy(), "full");
  auto const gs = gul_stacchetti(instance);
  CHECK(full.final_price == gs.final_price);
  CHECK(full.steps.size() == gs.steps.size());

  Rng rng(137);
  for (int t = 0; t < 40; ++t)
  {
    auto const gen = random_gs(rng);
    auto const fine = fine_auction(gen);
    auto const min_index = run_with_policy(gen, min_index_policy());
    REQUIRE(fine.steps.size() == min_index.steps.size());
    for (std::size_t k = 0; k < fine.steps.size(); ++k)
    {
      CHECK(fine.steps[k].raised == min_index.steps[k].raised);
    }
    auto const target = gul_stacchetti(gen).final_price;
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
    {
      auto const random = run_with_policy(gen, random_subset_policy(seed));
      CHECK(random.final_price == target);
      for (auto const& step : random.steps)
      {
        CHECK_FALSE(step.raised.is_empty());
      }
    }
  }
}

TEST_CASE("random policy is reproducible per seed")
{
  Rng rng(139);
  auto const instance = testing::random_gs_instance(rng, 3, 4, 8);
  auto const a = run_with_policy(instance, random_subset_policy(9));
  auto const b = run_with_policy(instance, random_subset_policy(9));
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t k = 0; k < a.steps.size(); ++k)
  {
    CHECK(a.steps[k].raised == b.steps[k].raised);
  }
}

TEST_CASE("policies must stay inside the obstacle")
{
  auto const instance = catalog::two_bidders_one_item();
  CHECK_THROWS_AS(run_with_policy(instance, [](const PolicyContext&) { return Bundle::empty(); }), PolicyViolation);
  Instance two_items{default_labels(2),
                     {make_unit_demand(std::vector<Value>{5, 0}), make_unit_demand(std::vector<Value>{5, 0})}};
  CHECK_THROWS_AS(run_with_policy(two_items, [](const PolicyContext&) { return Bundle::full(2); }), PolicyViolation);
}

TEST_CASE("domination monitor flags the first bad step")
{
  auto trace = gul_stacchetti(catalog::two_bidders_one_item());
  CHECK_FALSE(monitor_domination(trace, price({5})).has_value());
  CHECK(monitor_domination(trace, price({4})) == trace.steps.size());
  trace.steps[2].price_before = price({7});
  CHECK(monitor_domination(trace, price({5})) == std::size_t{2});
}

TEST_CASE("non-substitute input hits the iteration cap or stops early")
{
  auto const five = catalog::no_obstacle_instance(5);
  auto const trace = gul_stacchetti(five);
  CHECK(trace.terminated);
  CHECK(trace.steps.empty());
  CHECK_FALSE(oracle::envy_free_exists(five, trace.final_price).has_value());
  CHECK(iteration_cap(five) == 5 * 8 * 2);
}
