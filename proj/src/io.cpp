#include "walras/io.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

namespace walras::io {

namespace {

Value integer(const Json& node, const std::string& what)
{
  if (!node.is_number_integer())
  {
    throw ParseError(what + " must be an integer");
  }
  return node.get<Value>();
}

Item label_index(const std::string& label, const std::vector<std::string>& items)
{
  auto it = std::find(items.begin(), items.end(), label);
  if (it == items.end())
  {
    throw ParseError("unknown item label '" + label + "'");
  }
  return static_cast<Item>(it - items.begin());
}

std::vector<Value> item_map(const Json& node, const std::vector<std::string>& items)
{
  if (!node.is_object())
  {
    throw ParseError("item values must be an object");
  }
  std::vector<Value> out(items.size(), 0);
  for (auto const& [label, value] : node.items())
  {
    out[label_index(label, items)] = integer(value, "value of '" + label + "'");
  }
  return out;
}

Json item_map_json(std::span<const Value> values, const std::vector<std::string>& items)
{
  Json out = Json::object();
  for (Item j = 0; j < items.size(); ++j)
  {
    out[items[j]] = values[j];
  }
  return out;
}

const Json& field(const Json& node, const char* name)
{
  if (!node.is_object() || !node.contains(name))
  {
    throw ParseError(std::string("missing field '") + name + "'");
  }
  return node.at(name);
}

}  // namespace

Json bundle_json(Bundle s, const std::vector<std::string>& items)
{
  Json out = Json::array();
  for (Item j : s.items())
  {
    out.push_back(items.at(j));
  }
  return out;
}

std::string bundle_key(Bundle s, const std::vector<std::string>& items)
{
  std::string out;
  for (Item j : s.items())
  {
    if (!out.empty())
    {
      out += ',';
    }
    out += items.at(j);
  }
  return out;
}

Bundle parse_bundle_key(const std::string& key, const std::vector<std::string>& items)
{
  Bundle out;
  if (key.empty())
  {
    return out;
  }
  std::stringstream in(key);
  std::string label;
  while (std::getline(in, label, ','))
  {
    Item const j = label_index(label, items);
    if (out.contains(j))
    {
      throw ParseError("bundle key '" + key + "' repeats '" + label + "'");
    }
    out = out.with(j);
  }
  if (key.back() == ',')
  {
    throw ParseError("bundle key '" + key + "' ends with a comma");
  }
  return out;
}

Json valuation_json(const Valuation& v, const std::vector<std::string>& items)
{
  Json out = Json::object();
  out["type"] = to_string(v.kind());
  switch (v.kind())
  {
  case ValuationKind::table: {
    Json values = Json::object();
    for (std::uint32_t mask = 0; mask < bundle_count(items.size()); ++mask)
    {
      values[bundle_key(Bundle(mask), items)] = v(Bundle(mask));
    }
    out["values"] = std::move(values);
    break;
  }
  case ValuationKind::additive:
  case ValuationKind::unit_demand:
    out["values"] = item_map_json(v.item_values(), items);
    break;
  case ValuationKind::truncation: {
    auto const* spec = v.truncation();
    out["k"] = spec->k;
    out["M"] = spec->cap;
    out["base"] = valuation_json(*spec->base, items);
    break;
  }
  }
  return out;
}

Valuation parse_valuation(const Json& node, const std::vector<std::string>& items)
{
  auto const& type = field(node, "type");
  if (!type.is_string())
  {
    throw ParseError("player type must be a string");
  }
  std::string const kind = type.get<std::string>();
  std::size_t const m = items.size();
  if (kind == "table")
  {
    auto const& values = field(node, "values");
    if (!values.is_object())
    {
      throw ParseError("table values must be an object");
    }
    std::vector<Value> table(bundle_count(m), 0);
    std::vector<char> seen(bundle_count(m), 0);
    for (auto const& [key, value] : values.items())
    {
      Bundle const s = parse_bundle_key(key, items);
      if (seen[s.bits()])
      {
        throw ParseError("table lists bundle '" + key + "' twice");
      }
      seen[s.bits()] = 1;
      table[s.bits()] = integer(value, "value of '" + key + "'");
    }
    for (std::uint32_t mask = 0; mask < bundle_count(m); ++mask)
    {
      if (!seen[mask])
      {
        throw ParseError("table is missing bundle '" + bundle_key(Bundle(mask), items) + "'");
      }
    }
    return Valuation::from_table(m, std::move(table));
  }
  if (kind == "additive")
  {
    return make_additive(item_map(field(node, "values"), items));
  }
  if (kind == "unit_demand")
  {
    return make_unit_demand(item_map(field(node, "values"), items));
  }
  if (kind == "truncation")
  {
    Value const k = integer(field(node, "k"), "k");
    if (k < 0)
    {
      throw ParseError("k must be non-negative");
    }
    auto base = std::make_shared<const Valuation>(parse_valuation(field(node, "base"), items));
    return make_truncation(TruncationSpec{std::move(base), static_cast<std::size_t>(k), integer(field(node, "M"), "M")});
  }
  throw ParseError("unknown player type '" + kind + "'");
}

Json instance_json(const Instance& instance)
{
  Json out = Json::object();
  out["items"] = instance.items;
  Json players = Json::array();
  for (auto const& v : instance.players)
  {
    players.push_back(valuation_json(v, instance.items));
  }
  out["players"] = std::move(players);
  return out;
}

Instance parse_instance(const Json& node)
{
  auto const& items = field(node, "items");
  if (!items.is_array())
  {
    throw ParseError("items must be an array");
  }
  Instance out;
  for (auto const& label : items)
  {
    if (!label.is_string())
    {
      throw ParseError("item labels must be strings");
    }
    std::string name = label.get<std::string>();
    if (name.empty() || name.find(',') != std::string::npos)
    {
      throw ParseError("item label '" + name + "' must be nonempty and comma-free");
    }
    if (std::find(out.items.begin(), out.items.end(), name) != out.items.end())
    {
      throw ParseError("duplicate item label '" + name + "'");
    }
    out.items.push_back(std::move(name));
  }
  if (out.items.size() > Limits{}.max_items)
  {
    throw InvalidInput("at most " + std::to_string(Limits{}.max_items) + " items are supported");
  }
  auto const& players = field(node, "players");
  if (!players.is_array())
  {
    throw ParseError("players must be an array");
  }
  for (auto const& player : players)
  {
    out.players.push_back(parse_valuation(player, out.items));
  }
  out.validate();
  return out;
}

Instance parse_instance_text(const std::string& text)
{
  Json node;
  try
  {
    node = Json::parse(text);
  }
  catch (const nlohmann::json::parse_error& e)
  {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return parse_instance(node);
}

Instance load_instance(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw InvalidInput("cannot open " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance_text(buffer.str());
}

Json price_json(const PriceVector& p, const std::vector<std::string>& items)
{
  return item_map_json(p.values(), items);
}

PriceVector parse_price(const Json& node, const std::vector<std::string>& items)
{
  auto values = item_map(node, items);
  for (Value x : values)
  {
    if (x < 0)
    {
      throw ParseError("prices must be non-negative");
    }
  }
  return PriceVector(std::move(values));
}

PriceVector parse_price_text(const std::string& text, const std::vector<std::string>& items)
{
  try
  {
    return parse_price(Json::parse(text), items);
  }
  catch (const nlohmann::json::parse_error& e)
  {
    throw ParseError(std::string("malformed price JSON: ") + e.what());
  }
}

Json allocation_json(const Allocation& alloc, const std::vector<std::string>& items)
{
  Json out = Json::array();
  for (Bundle s : alloc.bundles)
  {
    out.push_back(bundle_json(s, items));
  }
  return out;
}

Json demand_json(const DemandReport& report, const std::vector<std::string>& items)
{
  Json demand = Json::array();
  for (Bundle s : report.demand)
  {
    demand.push_back(bundle_json(s, items));
  }
  Json minimal = Json::array();
  for (Bundle s : report.minimal_demand)
  {
    minimal.push_back(bundle_json(s, items));
  }
  return Json{{"player", report.player}, {"utility", report.utility}, {"demand", demand}, {"minimal_demand", minimal}};
}

Json obstacle_json(const ObstacleReport& report, const std::vector<std::string>& items)
{
  return Json{{"o_star", bundle_json(report.o_star, items)},
              {"f", report.f_value},
              {"per_player_f", report.per_player_f},
              {"unique", report.unique}};
}

Json trace_json(const auctions::AuctionTrace& trace, const std::vector<std::string>& items)
{
  Json steps = Json::array();
  for (auto const& step : trace.steps)
  {
    steps.push_back(Json{{"t", step.t},
                         {"price", price_json(step.price_before, items)},
                         {"raised", bundle_json(step.raised, items)},
                         {"lyapunov", step.lyapunov_before},
                         {"f", step.f_value},
                         {"kind", auctions::to_string(step.kind)}});
  }
  return Json{{"algorithm", trace.algorithm},
              {"steps", steps},
              {"final_price", price_json(trace.final_price, items)},
              {"terminated", trace.terminated},
              {"iteration_cap_hit", trace.iteration_cap_hit},
              {"ambiguous_steps", trace.ambiguous_steps}};
}

Json certificate_json(const oracle::WalrasianCertificate& cert, const std::vector<std::string>& items)
{
  return Json{{"price", price_json(cert.price, items)},
              {"allocation", allocation_json(cert.allocation, items)},
              {"envy_free", cert.envy_free},
              {"all_positive_priced_allocated", cert.coverage},
              {"lyapunov", cert.lyapunov},
              {"max_welfare", cert.max_welfare}};
}

Json welfare_json(const oracle::WelfareResult& result, const std::vector<std::string>& items)
{
  return Json{{"value", result.value}, {"allocation", allocation_json(result.allocation, items)}};
}

Json gs_witness_json(const structure::GsWitness& w, const std::vector<std::string>& items)
{
  Json out{{"p", price_json(w.p, items)},
           {"q", price_json(w.q, items)},
           {"s", bundle_json(w.s, items)},
           {"kept", bundle_json(w.kept, items)},
           {"scale", w.scale}};
  out["violated_item"] = w.violated_item ? Json(items.at(*w.violated_item)) : Json(nullptr);
  return out;
}

Json si_witness_json(const structure::SiWitness& w, const std::vector<std::string>& items)
{
  return Json{{"p", price_json(w.p, items)}, {"s", bundle_json(w.s, items)}, {"scale", w.scale}};
}

}  // namespace walras::io
