#pragma once

#include <json.hpp>

#include "wbmld/blowup.hpp"
#include "wbmld/search.hpp"
#include "wbmld/wps.hpp"

namespace wbmld {

using Json = nlohmann::ordered_json;

inline constexpr const char* kEngineVersion = "wbmld 1.0.0";

struct JsonOptions {
  bool decimal = false;  // add approximate "<field>_decimal" entries next to exact rationals
  bool full_log = false;
};

void put_rational(Json& j, const std::string& key, const Rational& q, const JsonOptions& opt);
Json to_json(const Weight& w);
Json to_json(const DivisorRecord& r, const JsonOptions& opt);
Json to_json(const MldResult& r, const JsonOptions& opt);
Json to_json(const GeneralityReport& r, const JsonOptions& opt);
Json to_json(const StandardWeightReport& r, const JsonOptions& opt);

// Envelope: command echo, engine version, result payload.
Json run_report(const Json& command, Json result);

}  // namespace wbmld
