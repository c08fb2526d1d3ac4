#pragma once

#include "walras/auctions.hpp"
#include "walras/demand.hpp"
#include "walras/model.hpp"
#include "walras/oracle.hpp"
#include "walras/structure.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace walras::io {

using Json = nlohmann::ordered_json;

class ParseError : public InvalidInput
{
public:
  using InvalidInput::InvalidInput;
};

/// Label list, in declared item order.
Json bundle_json(Bundle s, const std::vector<std::string>& items);
/// Comma-joined labels; "" for the empty bundle.
std::string bundle_key(Bundle s, const std::vector<std::string>& items);
Bundle parse_bundle_key(const std::string& key, const std::vector<std::string>& items);

Json valuation_json(const Valuation& v, const std::vector<std::string>& items);
Valuation parse_valuation(const Json& node, const std::vector<std::string>& items);

Json instance_json(const Instance& instance);
/// Validates against the default limits. Throws ParseError or InvalidInput.
Instance parse_instance(const Json& node);
Instance parse_instance_text(const std::string& text);
Instance load_instance(const std::filesystem::path& path);

/// Per-item map. Missing items price at zero; unknown labels are errors.
Json price_json(const PriceVector& p, const std::vector<std::string>& items);
PriceVector parse_price(const Json& node, const std::vector<std::string>& items);
PriceVector parse_price_text(const std::string& text, const std::vector<std::string>& items);

Json allocation_json(const Allocation& alloc, const std::vector<std::string>& items);

Json demand_json(const DemandReport& report, const std::vector<std::string>& items);
Json obstacle_json(const ObstacleReport& report, const std::vector<std::string>& items);
Json trace_json(const auctions::AuctionTrace& trace, const std::vector<std::string>& items);
Json certificate_json(const oracle::WalrasianCertificate& cert, const std::vector<std::string>& items);
Json welfare_json(const oracle::WelfareResult& result, const std::vector<std::string>& items);

Json gs_witness_json(const structure::GsWitness& w, const std::vector<std::string>& items);
Json si_witness_json(const structure::SiWitness& w, const std::vector<std::string>& items);

}  // namespace walras::io
