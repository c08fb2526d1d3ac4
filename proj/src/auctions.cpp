#include "walras/auctions.hpp"

#include <algorithm>
#include <memory>
#include <random>

namespace walras::auctions {

std::string to_string(StepKind kind)
{
  switch (kind)
  {
  case StepKind::obstacle:
    return "obstacle";
  case StepKind::minimizer:
    return "minimizer";
  case StepKind::induced:
    return "induced";
  case StepKind::min_items:
    return "min_items";
  }
  return "unknown";
}

StepPolicy full_obstacle_policy()
{
  return [](const PolicyContext& ctx) { return ctx.obstacle.o_star; };
}

StepPolicy min_index_policy()
{
  return [](const PolicyContext& ctx) { return Bundle::single(ctx.obstacle.o_star.first()); };
}

StepPolicy random_subset_policy(std::uint64_t seed)
{
  auto engine = std::make_shared<std::mt19937_64>(seed);
  return [engine](const PolicyContext& ctx) {
    auto const items = ctx.obstacle.o_star.items();
    // Nonzero subset index over the obstacle's items.
    std::uniform_int_distribution<std::uint64_t> pick(1, (std::uint64_t{1} << items.size()) - 1);
    std::uint64_t const mask = pick(*engine);
    Bundle out;
    for (std::size_t k = 0; k < items.size(); ++k)
    {
      if ((mask >> k) & 1U)
      {
        out = out.with(items[k]);
      }
    }
    return out;
  };
}

std::size_t iteration_cap(const Instance& instance)
{
  auto const vmax = static_cast<std::size_t>(std::max<Value>(instance.max_value(), 1));
  return instance.player_count() * instance.item_count() * vmax;
}

AuctionTrace run_with_policy(const Instance& instance, const StepPolicy& policy, std::string name)
{
  AuctionTrace trace;
  trace.algorithm = std::move(name);
  std::size_t const cap = iteration_cap(instance);
  PriceVector p(instance.item_count());
  while (true)
  {
    auto const obstacle = over_demanded_set(instance, p);
    if (obstacle.o_star.is_empty())
    {
      trace.terminated = true;
      break;
    }
    if (trace.steps.size() >= cap)
    {
      trace.iteration_cap_hit = true;
      break;
    }
    Bundle const raise = policy(PolicyContext{trace.steps.size(), p, obstacle});
    if (raise.is_empty() || !raise.subset_of(obstacle.o_star))
    {
      throw PolicyViolation("policy must return a nonempty subset of the over-demanded set");
    }
    if (!obstacle.unique)
    {
      ++trace.ambiguous_steps;
    }
    trace.steps.push_back({trace.steps.size(), p, raise, lyapunov(instance, p), obstacle.f_value, StepKind::obstacle});
    p = p.raised(raise);
  }
  trace.final_price = std::move(p);
  return trace;
}

AuctionTrace gul_stacchetti(const Instance& instance)
{
  return run_with_policy(instance, full_obstacle_policy(), "gul_stacchetti");
}

AuctionTrace fine_auction(const Instance& instance)
{
  return run_with_policy(instance, min_index_policy(), "fine");
}

AuctionTrace ausubel_ascending(const Instance& instance)
{
  AuctionTrace trace;
  trace.algorithm = "ausubel";
  std::size_t const cap = iteration_cap(instance);
  PriceVector p(instance.item_count());
  while (true)
  {
    auto const minimizer = minimal_minimizer(instance, p);
    if (minimizer.set.is_empty())
    {
      trace.terminated = true;
      break;
    }
    if (trace.steps.size() >= cap)
    {
      trace.iteration_cap_hit = true;
      break;
    }
    if (minimizer.tie_break_used)
    {
      ++trace.ambiguous_steps;
    }
    trace.steps.push_back({trace.steps.size(), p, minimizer.set, lyapunov(instance, p),
                           f(instance, p, minimizer.set), StepKind::minimizer});
    p = p.raised(minimizer.set);
  }
  trace.final_price = std::move(p);
  return trace;
}

std::optional<std::size_t> monitor_domination(const AuctionTrace& trace, const PriceVector& p_star)
{
  for (auto const& step : trace.steps)
  {
    if (!step.price_before.dominated_by(p_star))
    {
      return step.t;
    }
  }
  if (!trace.final_price.dominated_by(p_star))
  {
    return trace.steps.size();
  }
  return std::nullopt;
}

}  // namespace walras::auctions
