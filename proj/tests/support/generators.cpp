#include "generators.hpp"

#include <algorithm>
#include <memory>

namespace walras::testing {

Value uniform(Rng& rng, Value lo, Value hi)
{
  return std::uniform_int_distribution<Value>(lo, hi)(rng);
}

namespace {

std::vector<Value> random_values(Rng& rng, std::size_t m, Value vmax)
{
  std::vector<Value> out(m);
  for (auto& x : out)
  {
    x = uniform(rng, 0, vmax);
  }
  return out;
}

}  // namespace

Valuation random_unit_demand(Rng& rng, std::size_t m, Value vmax)
{
  return make_unit_demand(random_values(rng, m, vmax));
}

Valuation random_additive(Rng& rng, std::size_t m, Value vmax)
{
  return make_additive(random_values(rng, m, vmax));
}

Valuation random_assignment(Rng& rng, std::size_t m, Value vmax)
{
  auto const slots = static_cast<std::size_t>(uniform(rng, 1, 3));
  std::vector<std::vector<Value>> weight(slots);
  for (auto& row : weight)
  {
    row = random_values(rng, m, vmax);
  }
  std::size_t const states = std::size_t{1} << slots;
  std::vector<Value> table(bundle_count(m), 0);
  for (std::uint32_t mask = 1; mask < bundle_count(m); ++mask)
  {
    // best[u]: heaviest matching of the items seen so far into slot set u.
    std::vector<Value> best(states, 0);
    for (Item j : Bundle(mask).items())
    {
      auto next = best;
      for (std::size_t used = 0; used < states; ++used)
      {
        for (std::size_t k = 0; k < slots; ++k)
        {
          if (!((used >> k) & 1U))
          {
            auto const to = used | (std::size_t{1} << k);
            next[to] = std::max(next[to], best[used] + weight[k][j]);
          }
        }
      }
      best = std::move(next);
    }
    table[mask] = *std::max_element(best.begin(), best.end());
  }
  return Valuation::from_table(m, std::move(table));
}

Valuation random_gs_valuation(Rng& rng, std::size_t m, Value vmax)
{
  switch (uniform(rng, 0, 2))
  {
  case 0:
    return random_unit_demand(rng, m, vmax);
  case 1:
    return random_additive(rng, m, vmax);
  default:
    return random_assignment(rng, m, vmax);
  }
}

Instance random_gs_instance(Rng& rng, std::size_t n, std::size_t m, Value vmax)
{
  Instance out{default_labels(m), {}};
  for (std::size_t i = 0; i < n; ++i)
  {
    out.players.push_back(random_gs_valuation(rng, m, vmax));
  }
  return out;
}

Valuation random_ggs2_valuation(Rng& rng, std::size_t m, Value cap)
{
  Value const low = uniform(rng, 0, cap);
  Value const floor = std::max(low, cap - low);
  std::vector<Value> singles(m);
  for (auto& x : singles)
  {
    x = uniform(rng, floor, cap);
  }
  singles[static_cast<std::size_t>(uniform(rng, 0, static_cast<Value>(m) - 1))] = low;
  auto base = std::make_shared<const Valuation>(make_additive(singles));
  return make_truncation(TruncationSpec{std::move(base), 2, cap});
}

Instance random_ggs2_instance(Rng& rng, std::size_t n, std::size_t m, Value cap)
{
  Instance out{default_labels(m), {}};
  for (std::size_t i = 0; i < n; ++i)
  {
    out.players.push_back(random_ggs2_valuation(rng, m, cap));
  }
  return out;
}

Valuation random_monotone_table(Rng& rng, std::size_t m, Value vmax)
{
  std::vector<Value> table(bundle_count(m), 0);
  for (std::uint32_t mask = 1; mask < bundle_count(m); ++mask)
  {
    Value floor = 0;
    for (Item j : Bundle(mask).items())
    {
      floor = std::max(floor, table[Bundle(mask).without(j).bits()]);
    }
    table[mask] = std::max(floor, uniform(rng, 0, vmax));
  }
  return Valuation::from_table(m, std::move(table));
}

Instance random_table_instance(Rng& rng, std::size_t n, std::size_t m, Value vmax)
{
  Instance out{default_labels(m), {}};
  for (std::size_t i = 0; i < n; ++i)
  {
    out.players.push_back(random_monotone_table(rng, m, vmax));
  }
  return out;
}

PriceVector random_price(Rng& rng, std::size_t m, Value hi)
{
  return PriceVector(random_values(rng, m, hi));
}

Bundle random_bundle(Rng& rng, std::size_t m)
{
  return Bundle(static_cast<std::uint32_t>(uniform(rng, 0, static_cast<Value>(bundle_count(m)) - 1)));
}

}  // namespace walras::testing
