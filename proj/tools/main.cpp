// walras: run auctions, structural checks and oracles on JSON instances.

#include "walras/auctions.hpp"
#include "walras/catalog.hpp"
#include "walras/demand.hpp"
#include "walras/ggs2.hpp"
#include "walras/io.hpp"
#include "walras/oracle.hpp"
#include "walras/structure.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>

using namespace walras;
using io::Json;

namespace {

enum Exit
{
  ok = 0,
  failure = 1,
  cap_hit = 2,
  uncertified = 3,
};

struct Options
{
  std::string instance;
  std::string price;
  std::string algorithm = "gs";
  std::string out;
  std::string what;
  std::uint64_t seed = 1;
  std::uint64_t budget = 0;
  std::size_t samples = 200;
  Value bound = -1;
};

std::uint64_t budget_of(const Options& opt)
{
  if (opt.budget > 0)
  {
    return opt.budget;
  }
  if (char const* env = std::getenv("WALRAS_BUDGET"))
  {
    try
    {
      return std::stoull(env);
    }
    catch (const std::exception&)
    {
      throw InvalidInput(std::string("WALRAS_BUDGET is not a number: ") + env);
    }
  }
  return oracle::default_budget;
}

Instance load(const Options& opt)
{
  if (opt.instance.empty())
  {
    throw InvalidInput("--instance is required");
  }
  return io::load_instance(opt.instance);
}

PriceVector price_of(const Options& opt, const Instance& instance)
{
  if (opt.price.empty())
  {
    return PriceVector(instance.item_count());
  }
  return io::parse_price_text(opt.price, instance.items);
}

void emit(const Json& out, const std::string& path)
{
  if (path.empty())
  {
    std::cout << out.dump(2) << '\n';
    return;
  }
  std::ofstream file(path);
  if (!file)
  {
    throw InvalidInput("cannot write " + path);
  }
  file << out.dump(2) << '\n';
}

int cmd_run(const Options& opt)
{
  auto const instance = load(opt);
  auto const budget = budget_of(opt);
  auctions::AuctionTrace trace;
  std::optional<oracle::WalrasianCertificate> cert;
  Json extra = Json::object();

  std::string const& a = opt.algorithm;
  if (a == "ggs2" || a == "ggs2:min-items")
  {
    auto const rule = a == "ggs2" ? ggs2::PairStep::obstacle_then_min : ggs2::PairStep::min_items;
    auto result = ggs2::ggs2_auction(instance, budget, rule);
    trace = std::move(result.trace);
    extra["completion"] = ggs2::to_string(result.completion);
    extra["pair_step"] = ggs2::to_string(rule);
    if (trace.terminated)
    {
      cert = result.certificate;
    }
  }
  else
  {
    if (a == "gs")
    {
      trace = auctions::gul_stacchetti(instance);
    }
    else if (a == "ausubel")
    {
      trace = auctions::ausubel_ascending(instance);
    }
    else if (a == "fine")
    {
      trace = auctions::fine_auction(instance);
    }
    else if (a == "policy:full")
    {
      trace = auctions::run_with_policy(instance, auctions::full_obstacle_policy(), a);
    }
    else if (a == "policy:min-index")
    {
      trace = auctions::run_with_policy(instance, auctions::min_index_policy(), a);
    }
    else if (a == "policy:random")
    {
      trace = auctions::run_with_policy(instance, auctions::random_subset_policy(opt.seed), a);
    }
    else
    {
      throw InvalidInput("unknown algorithm '" + a + "'");
    }
    if (trace.terminated)
    {
      cert = oracle::is_walrasian(instance, trace.final_price, budget);
    }
  }

  bool const certified = cert && cert->valid();
  Json out{{"trace", io::trace_json(trace, instance.items)}};
  out["certificate"] = cert ? io::certificate_json(*cert, instance.items) : Json(nullptr);
  out["certified"] = certified;
  out.update(extra);
  emit(out, opt.out);
  if (trace.iteration_cap_hit)
  {
    std::cerr << "iteration cap reached after " << trace.steps.size() << " steps\n";
    return cap_hit;
  }
  return certified ? ok : uncertified;
}

int check_gs(const Instance& instance, std::uint64_t budget, Json& out)
{
  bool pass = true;
  Json players = Json::array();
  for (std::size_t i = 0; i < instance.player_count(); ++i)
  {
    auto const& v = instance.players[i];
    auto const si = structure::check_si_on_grid(v, std::nullopt, budget);
    auto const gs = structure::check_gs_on_grid(v, std::nullopt, budget);
    pass = pass && !si && !gs;
    players.push_back(Json{{"player", i},
                           {"single_improvement", si ? io::si_witness_json(*si, instance.items) : Json(nullptr)},
                           {"gross_substitutes", gs ? io::gs_witness_json(*gs, instance.items) : Json(nullptr)}});
  }
  out["players"] = std::move(players);
  return pass ? ok : failure;
}

int check_matroid(const Instance& instance, std::uint64_t budget, Json& out)
{
  std::size_t const m = instance.item_count();
  Value const hi = instance.max_value() + 1;
  double const work = std::pow(static_cast<double>(hi + 1), static_cast<double>(m)) *
                      static_cast<double>(bundle_count(m) * std::max<std::size_t>(instance.player_count(), 1));
  if (work > static_cast<double>(budget))
  {
    throw BudgetExceeded("matroid scan needs " + std::to_string(static_cast<std::uint64_t>(work)) +
                         " evaluations, budget " + std::to_string(budget));
  }
  std::vector<Value> digits(m, 0);
  std::uint64_t scanned = 0;
  while (true)
  {
    PriceVector const p(digits);
    ++scanned;
    for (std::size_t i = 0; i < instance.player_count(); ++i)
    {
      auto const report = demand_sets(instance.players[i], p, i);
      if (auto bad = structure::check_matroid_bases(report.minimal_demand))
      {
        out["violation"] = Json{{"player", i}, {"price", io::price_json(p, instance.items)}, {"reason", bad->describe()}};
        out["scanned"] = scanned;
        return failure;
      }
    }
    std::size_t k = m;
    while (k > 0 && digits[k - 1] == hi)
    {
      digits[--k] = 0;
    }
    if (k == 0)
    {
      break;
    }
    ++digits[k - 1];
  }
  out["violation"] = nullptr;
  out["scanned"] = scanned;
  return ok;
}

int check_lemmas(const Instance& instance, const Options& opt, Json& out)
{
  std::mt19937_64 rng(opt.seed);
  std::size_t const m = instance.item_count();
  Value const hi = instance.max_value() + 1;
  auto draw_price = [&] {
    std::vector<Value> values(m);
    for (auto& x : values)
    {
      x = std::uniform_int_distribution<Value>(0, hi)(rng);
    }
    return PriceVector(std::move(values));
  };
  auto draw_item = [&] { return m == 0 ? Item{0} : std::uniform_int_distribution<Item>(0, m - 1)(rng); };

  std::size_t failures = 0;
  Json first = nullptr;
  for (std::size_t t = 0; t < opt.samples; ++t)
  {
    structure::LemmaSample sample;
    sample.p = draw_price();
    sample.q = draw_price();
    sample.s = Bundle(std::uniform_int_distribution<std::uint32_t>(0, static_cast<std::uint32_t>(bundle_count(m) - 1))(rng));
    sample.j = draw_item();
    sample.x = draw_item();
    sample.y = draw_item();
    auto const report = structure::check_lemmas(instance, sample);
    if (!report.ok())
    {
      ++failures;
      if (first.is_null())
      {
        first = Json{{"p", io::price_json(sample.p, instance.items)},
                     {"q", io::price_json(sample.q, instance.items)},
                     {"s", io::bundle_json(sample.s, instance.items)},
                     {"reason", report.failure}};
      }
    }
  }
  out["samples"] = opt.samples;
  out["failures"] = failures;
  out["first_failure"] = first;
  return failures == 0 ? ok : failure;
}

int check_ggs2_shape(const Instance& instance, Json& out)
{
  std::optional<Value> cap;
  try
  {
    cap = ggs2::common_cap(instance);
  }
  catch (const ggs2::NotGgs2Instance& e)
  {
    out["shape"] = e.what();
    return failure;
  }
  out["M"] = cap ? Json(*cap) : Json(nullptr);
  bool pass = true;
  Json players = Json::array();
  for (std::size_t i = 0; i < instance.player_count() && cap; ++i)
  {
    auto const member = structure::is_ggs_member(instance.players[i], 2, *cap);
    pass = pass && member.member;
    players.push_back(Json{{"player", i}, {"member", member.member}, {"violation", member.violation}});
  }
  out["players"] = std::move(players);
  return pass ? ok : failure;
}

int cmd_check(const Options& opt)
{
  auto const instance = load(opt);
  Json out{{"check", opt.what}};
  int code = failure;
  if (opt.what == "gs")
  {
    code = check_gs(instance, budget_of(opt), out);
  }
  else if (opt.what == "matroid")
  {
    code = check_matroid(instance, budget_of(opt), out);
  }
  else if (opt.what == "lemmas")
  {
    code = check_lemmas(instance, opt, out);
  }
  else if (opt.what == "ggs2-shape")
  {
    code = check_ggs2_shape(instance, out);
  }
  else
  {
    throw InvalidInput("unknown check '" + opt.what + "' (gs, matroid, lemmas, ggs2-shape)");
  }
  out["pass"] = code == ok;
  emit(out, opt.out);
  return code;
}

int demo_ggs2_not_gs(const Options& opt)
{
  auto const instance = catalog::ggs2_not_gs_instance();
  auto const& v = instance.players.front();
  auto const& items = instance.items;
  PriceVector const p(std::vector<Value>{0, 1, 2});
  PriceVector const q(std::vector<Value>{2, 1, 2});

  auto const at_p = demand_sets(v, p);
  auto const at_q = demand_sets(v, q);
  auto const pair = structure::check_gs_pair(v, p, q);
  auto const grid = structure::check_gs_on_grid(v);
  bool const b_dropped = std::none_of(at_q.demand.begin(), at_q.demand.end(), [](Bundle s) { return s.contains(1); });
  bool const reproduced = pair && pair->s == Bundle::single(0).with(1) && b_dropped && grid;

  Json out{{"demo", "ggs2-not-gs"},
           {"expected", "D(p) = {a,b} with utility 3 at p=(0,1,2); no demand set contains b at q=(2,1,2)"},
           {"demand_at_p", io::demand_json(at_p, items)},
           {"demand_at_q", io::demand_json(at_q, items)},
           {"pair_witness", pair ? io::gs_witness_json(*pair, items) : Json(nullptr)},
           {"grid_witness", grid ? io::gs_witness_json(*grid, items) : Json(nullptr)},
           {"reproduced", reproduced}};
  emit(out, opt.out);
  return reproduced ? ok : failure;
}

int demo_no_obstacle(const Options& opt)
{
  auto const instance = catalog::no_obstacle_instance(5);
  PriceVector const p(instance.item_count());
  auto const obstacle = over_demanded_set(instance, p);
  Value best = 0;
  for (std::uint32_t mask = 0; mask < bundle_count(instance.item_count()); ++mask)
  {
    best = std::max(best, f(instance, p, Bundle(mask)));
  }
  auto const alloc = oracle::envy_free_exists(instance, p);
  bool const reproduced = obstacle.o_star.is_empty() && best <= 0 && !alloc;

  Json out{{"demo", "no-obstacle-no-allocation"},
           {"expected", "at p=0, f(S) <= 0 for every S and no envy-free allocation exists"},
           {"players", instance.player_count()},
           {"items", instance.item_count()},
           {"max_f", best},
           {"obstacle", io::obstacle_json(obstacle, instance.items)},
           {"envy_free_allocation", alloc ? io::allocation_json(*alloc, instance.items) : Json(nullptr)},
           {"reproduced", reproduced}};
  emit(out, opt.out);
  return reproduced ? ok : failure;
}

int cmd_demo(const Options& opt)
{
  if (opt.what == "ggs2-not-gs")
  {
    return demo_ggs2_not_gs(opt);
  }
  if (opt.what == "no-obstacle-no-allocation")
  {
    return demo_no_obstacle(opt);
  }
  throw InvalidInput("unknown demo '" + opt.what + "' (ggs2-not-gs, no-obstacle-no-allocation)");
}

int cmd_oracle(const Options& opt)
{
  auto const instance = load(opt);
  auto const budget = budget_of(opt);
  if (opt.what == "welfare")
  {
    emit(io::welfare_json(oracle::max_welfare(instance, budget), instance.items), opt.out);
    return ok;
  }
  if (opt.what == "min-walrasian")
  {
    Value const bound = opt.bound >= 0 ? opt.bound : instance.max_value();
    auto const result = oracle::minimal_walrasian_price(instance, bound, budget);
    emit(result.price ? io::price_json(*result.price, instance.items) : Json(nullptr), opt.out);
    if (!result.unique && result.price)
    {
      std::cerr << result.minimal.size() << " incomparable minimal Walrasian prices\n";
    }
    return ok;
  }
  if (opt.what == "envy-free")
  {
    auto const alloc = oracle::envy_free_exists(instance, price_of(opt, instance));
    emit(alloc ? io::allocation_json(*alloc, instance.items) : Json(nullptr), opt.out);
    return ok;
  }
  throw InvalidInput("unknown oracle '" + opt.what + "' (welfare, min-walrasian, envy-free)");
}

int cmd_inspect(const Options& opt)
{
  auto const instance = load(opt);
  auto const p = price_of(opt, instance);
  Json players = Json::array();
  for (std::size_t i = 0; i < instance.player_count(); ++i)
  {
    players.push_back(io::demand_json(demand_sets(instance.players[i], p, i), instance.items));
  }
  Json out{{"price", io::price_json(p, instance.items)},
           {"players", players},
           {"obstacle", io::obstacle_json(over_demanded_set(instance, p), instance.items)},
           {"lyapunov", lyapunov(instance, p)}};
  emit(out, opt.out);
  return ok;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Walrasian equilibrium laboratory for combinatorial auctions"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&opt](CLI::App* cmd) {
    cmd->add_option("--budget", opt.budget, "enumeration budget (overrides WALRAS_BUDGET)");
    cmd->add_option("--out", opt.out, "write JSON here instead of stdout");
  };

  auto* run = app.add_subcommand("run", "run an auction and certify its endpoint");
  run->add_option("--instance", opt.instance, "instance JSON")->required();
  run->add_option("--algorithm", opt.algorithm, "gs | ausubel | fine | ggs2 | ggs2:min-items | policy:<full|min-index|random>");
  run->add_option("--seed", opt.seed, "seed for policy:random");
  common(run);

  auto* check = app.add_subcommand("check", "structural checks with witnesses");
  check->add_option("what", opt.what, "gs | matroid | lemmas | ggs2-shape")->required();
  check->add_option("--instance", opt.instance, "instance JSON")->required();
  check->add_option("--seed", opt.seed, "seed for lemma sampling");
  check->add_option("--samples", opt.samples, "lemma samples");
  common(check);

  auto* demo = app.add_subcommand("demo", "reproduce a compiled-in instance");
  demo->add_option("name", opt.what, "ggs2-not-gs | no-obstacle-no-allocation")->required();
  common(demo);

  auto* orc = app.add_subcommand("oracle", "brute-force ground truth");
  orc->add_option("what", opt.what, "welfare | min-walrasian | envy-free")->required();
  orc->add_option("--instance", opt.instance, "instance JSON")->required();
  orc->add_option("--price", opt.price, "price JSON, e.g. {\"x\":0}");
  orc->add_option("--bound", opt.bound, "largest price scanned by min-walrasian");
  common(orc);

  auto* inspect = app.add_subcommand("inspect", "demand, obstacle and Lyapunov at a price");
  inspect->add_option("--instance", opt.instance, "instance JSON")->required();
  inspect->add_option("--price", opt.price, "price JSON; zero when omitted");
  common(inspect);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForAllHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e)
  {
    app.exit(e);
    return failure;
  }

  try
  {
    if (*run)
    {
      return cmd_run(opt);
    }
    if (*check)
    {
      return cmd_check(opt);
    }
    if (*demo)
    {
      return cmd_demo(opt);
    }
    if (*orc)
    {
      return cmd_oracle(opt);
    }
    return cmd_inspect(opt);
  }
  catch (const BudgetExceeded& e)
  {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return failure;
  }
  catch (const Error& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return failure;
  }
}
