#include "walras/catalog.hpp"

#include <memory>
#include <vector>

namespace walras::catalog {

namespace {

Valuation truncated_unit_demand(std::vector<Value> const& singles, Value cap)
{
  auto base = std::make_shared<const Valuation>(make_unit_demand(singles));
  return make_truncation(TruncationSpec{base, 2, cap});
}

}  // namespace

Valuation ggs2_not_gs_valuation()
{
  return truncated_unit_demand({2, 2, 4}, 4);
}

Instance ggs2_not_gs_instance()
{
  return Instance{default_labels(3), {ggs2_not_gs_valuation()}};
}

Instance no_obstacle_instance(std::size_t n)
{
  if (n < 3)
  {
    throw InvalidInput("the construction needs at least three players");
  }
  std::size_t const m = 2 * n - 2;
  std::vector<Value> flat(m, 1);
  std::vector<Value> tilted(m, 1);
  tilted.back() = 2;

  Instance out{default_labels(m), {}};
  for (std::size_t i = 0; i + 2 < n; ++i)
  {
    out.players.push_back(truncated_unit_demand(flat, 2));
  }
  out.players.push_back(truncated_unit_demand(tilted, 2));
  out.players.push_back(truncated_unit_demand(tilted, 2));
  return out;
}

Instance two_bidders_one_item()
{
  std::vector<Value> const five{5};
  return Instance{{"x"}, {make_unit_demand(five), make_unit_demand(five)}};
}

}  // namespace walras::catalog
