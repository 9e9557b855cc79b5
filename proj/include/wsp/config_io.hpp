#pragma once

#include <stdexcept>
#include <string>

#include "wsp/market.hpp"

namespace wsp {

// Malformed or rejected configuration; message carries the offending field
// path (e.g. "market.shares[2]").
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses the strict JSON scenario document:
//   {"plan": {"P","B","p"},
//    "users": {"alpha", "light": {"d","D"[,"density"]}, "heavy": {...}},
//    "market": {"N", "shares": [...], "eta0"},
//    "rates": {"lambda", "lambda0"},
//    "discount": {"S"}}
// Unknown keys anywhere are rejected. "density" is an optional [[u,f],...]
// knot table; omitting it selects the uniform density.
MarketConfig parse_config(const std::string& json_text);
MarketConfig load_config(const std::string& path);

std::string config_to_json(const MarketConfig& cfg);

}  // namespace wsp
