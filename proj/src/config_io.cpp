#include "wsp/config_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace wsp {

namespace {

using nlohmann::json;

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    return j;
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(path + "." + key + ": unknown key");
    }
}

const json& get(const json& j, const std::string& path, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + "." + key + ": missing");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

UsageModel usage(const json& j, const std::string& path, UserClass cls) {
    require_object(j, path);
    reject_unknown(j, path, {"d", "D", "density"});
    UsageModel u;
    u.user_class = cls;
    u.min_usage = number(get(j, path, "d"), path + ".d");
    u.max_usage = number(get(j, path, "D"), path + ".D");
    if (auto it = j.find("density"); it != j.end()) {
        if (!it->is_array()) throw ConfigError(path + ".density: expected an array of [u,f] pairs");
        for (std::size_t k = 0; k < it->size(); ++k) {
            const auto& knot = (*it)[k];
            const std::string kp = path + ".density[" + std::to_string(k) + "]";
            if (!knot.is_array() || knot.size() != 2)
                throw ConfigError(kp + ": expected a [u,f] pair");
            u.density_knots.emplace_back(number(knot[0], kp + "[0]"), number(knot[1], kp + "[1]"));
        }
    }
    return u;
}

}  // namespace

MarketConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    require_object(j, "config");
    reject_unknown(j, "config", {"plan", "users", "market", "rates", "discount"});
    MarketConfig cfg;

    const json& plan = require_object(get(j, "config", "plan"), "plan");
    reject_unknown(plan, "plan", {"P", "B", "p"});
    cfg.plan.lump_fee = number(get(plan, "plan", "P"), "plan.P");
    cfg.plan.quota = number(get(plan, "plan", "B"), "plan.B");
    cfg.plan.overage_price = number(get(plan, "plan", "p"), "plan.p");

    const json& users = require_object(get(j, "config", "users"), "users");
    reject_unknown(users, "users", {"alpha", "light", "heavy"});
    cfg.alpha = number(get(users, "users", "alpha"), "users.alpha");
    cfg.light = usage(get(users, "users", "light"), "users.light", UserClass::light);
    cfg.heavy = usage(get(users, "users", "heavy"), "users.heavy", UserClass::heavy);

    const json& market = require_object(get(j, "config", "market"), "market");
    reject_unknown(market, "market", {"N", "shares", "eta0"});
    cfg.n = number(get(market, "market", "N"), "market.N");
    const json& shares = get(market, "market", "shares");
    if (!shares.is_array() || shares.empty())
        throw ConfigError("market.shares: expected a non-empty array");
    for (std::size_t k = 0; k < shares.size(); ++k)
        cfg.shares.push_back(number(shares[k], "market.shares[" + std::to_string(k) + "]"));
    cfg.eta0 = number(get(market, "market", "eta0"), "market.eta0");

    const json& rates = require_object(get(j, "config", "rates"), "rates");
    reject_unknown(rates, "rates", {"lambda", "lambda0"});
    cfg.rates.lambda = number(get(rates, "rates", "lambda"), "rates.lambda");
    cfg.rates.lambda0 = number(get(rates, "rates", "lambda0"), "rates.lambda0");

    const json& discount = require_object(get(j, "config", "discount"), "discount");
    reject_unknown(discount, "discount", {"S"});
    cfg.discount = number(get(discount, "discount", "S"), "discount.S");

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

MarketConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const MarketConfig& cfg) {
    json j;
    j["plan"] = {{"P", cfg.plan.lump_fee}, {"B", cfg.plan.quota}, {"p", cfg.plan.overage_price}};
    auto usage_json = [](const UsageModel& u) {
        json uj{{"d", u.min_usage}, {"D", u.max_usage}};
        if (!u.uniform()) {
            json knots = json::array();
            for (const auto& [x, f] : u.density_knots) knots.push_back({x, f});
            uj["density"] = knots;
        }
        return uj;
    };
    j["users"] = {{"alpha", cfg.alpha},
                  {"light", usage_json(cfg.light)},
                  {"heavy", usage_json(cfg.heavy)}};
    j["market"] = {{"N", cfg.n}, {"shares", cfg.shares}, {"eta0", cfg.eta0}};
    j["rates"] = {{"lambda", cfg.rates.lambda}, {"lambda0", cfg.rates.lambda0}};
    j["discount"] = {{"S", cfg.discount}};
    return j.dump(2);
}

}  // namespace wsp
