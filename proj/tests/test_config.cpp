#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "wsp/config_io.hpp"

using namespace wsp;

namespace {

std::string valid_json() {
    return R"({
      "plan": {"P": 20.0, "B": 3.0, "p": 10.0},
      "users": {
        "alpha": 0.25,
        "light": {"d": 0.0, "D": 2.0},
        "heavy": {"d": 0.0, "D": 6.0}
      },
      "market": {"N": 100.0, "shares": [0.4, 0.6], "eta0": 0.3},
      "rates": {"lambda": 1.0, "lambda0": 0.5},
      "discount": {"S": 1.0}
    })";
}

// message must carry the offending field path
void check_rejects(const std::string& text, const std::string& needle) {
    try {
        parse_config(text);
        FAIL_CHECK("expected ConfigError mentioning \"" << needle << "\"");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

std::string replaced(std::string text, const std::string& from, const std::string& to) {
    text.replace(text.find(from), from.size(), to);
    return text;
}

}  // namespace

TEST_CASE("a valid document parses into the full configuration") {
    const MarketConfig cfg = parse_config(valid_json());
    CHECK(cfg.plan.lump_fee == 20.0);
    CHECK(cfg.plan.quota == 3.0);
    CHECK(cfg.plan.overage_price == 10.0);
    CHECK(cfg.alpha == 0.25);
    CHECK(cfg.light.user_class == UserClass::light);
    CHECK(cfg.light.max_usage == 2.0);
    CHECK(cfg.heavy.user_class == UserClass::heavy);
    CHECK(cfg.heavy.max_usage == 6.0);
    CHECK(cfg.n == 100.0);
    CHECK(cfg.shares == std::vector<double>{0.4, 0.6});
    CHECK(cfg.eta0 == 0.3);
    CHECK(cfg.rates.lambda == 1.0);
    CHECK(cfg.rates.lambda0 == 0.5);
    CHECK(cfg.discount == 1.0);
    CHECK(cfg.light.uniform());
}

TEST_CASE("density knots are parsed and validated") {
    const std::string with_density = replaced(
        valid_json(), R"("heavy": {"d": 0.0, "D": 6.0})",
        R"("heavy": {"d": 0.0, "D": 6.0, "density": [[0.0, 0.3333333333333333], [6.0, 0.0]]})");
    const MarketConfig cfg = parse_config(with_density);
    CHECK_FALSE(cfg.heavy.uniform());
    CHECK(cfg.heavy.density_knots.size() == 2);
    CHECK(cfg.heavy.density_knots[0].second == doctest::Approx(1.0 / 3.0));

    check_rejects(replaced(valid_json(), R"("heavy": {"d": 0.0, "D": 6.0})",
                           R"("heavy": {"d": 0.0, "D": 6.0, "density": [[0.0]]})"),
                  "users.heavy.density[0]");
    check_rejects(replaced(valid_json(), R"("heavy": {"d": 0.0, "D": 6.0})",
                           R"("heavy": {"d": 0.0, "D": 6.0, "density": 7})"),
                  "users.heavy.density");
}

TEST_CASE("unknown keys are rejected at every level") {
    check_rejects(replaced(valid_json(), R"("discount": {"S": 1.0})",
                           R"("discount": {"S": 1.0}, "extra": 1)"),
                  "config.extra");
    check_rejects(replaced(valid_json(), R"("P": 20.0,)", R"("P": 20.0, "Q": 1,)"), "plan.Q");
    check_rejects(replaced(valid_json(), R"("alpha": 0.25,)", R"("alpha": 0.25, "beta": 1,)"),
                  "users.beta");
    check_rejects(replaced(valid_json(), R"("d": 0.0, "D": 2.0)", R"("d": 0.0, "D": 2.0, "x": 1)"),
                  "users.light.x");
    check_rejects(replaced(valid_json(), R"("eta0": 0.3)", R"("eta0": 0.3, "mu": 2)"),
                  "market.mu");
    check_rejects(replaced(valid_json(), R"("lambda0": 0.5)", R"("lambda0": 0.5, "nu": 3)"),
                  "rates.nu");
    check_rejects(replaced(valid_json(), R"("S": 1.0)", R"("S": 1.0, "T": 2.0)"), "discount.T");
}

TEST_CASE("missing and mistyped fields report their path") {
    check_rejects(replaced(valid_json(), R"("P": 20.0,)", ""), "plan.P");
    check_rejects(replaced(valid_json(), R"("S": 1.0)", R"("S": "one")"), "discount.S");
    check_rejects(replaced(valid_json(), "[0.4, 0.6]", R"([0.4, "x"])"), "market.shares[1]");
    check_rejects(replaced(valid_json(), "[0.4, 0.6]", "[]"), "market.shares");
    check_rejects(replaced(valid_json(), R"("rates": {"lambda": 1.0, "lambda0": 0.5},)", ""),
                  "config.rates");
    check_rejects("{]", "config:");
    check_rejects("[1, 2]", "config");
}

TEST_CASE("semantic validation still applies after parsing") {
    // shares not summing to one
    check_rejects(replaced(valid_json(), "[0.4, 0.6]", "[0.4, 0.4]"), "shares");
    // lambda must exceed lambda0
    check_rejects(replaced(valid_json(), R"("lambda": 1.0, "lambda0": 0.5)",
                           R"("lambda": 0.5, "lambda0": 0.5)"),
                  "lambda");
    // light users must stay within the quota
    check_rejects(replaced(valid_json(), R"("light": {"d": 0.0, "D": 2.0})",
                           R"("light": {"d": 0.0, "D": 4.0})"),
                  "light");
}

TEST_CASE("serialization round-trips through the parser") {
    const MarketConfig cfg = parse_config(valid_json());
    const MarketConfig again = parse_config(config_to_json(cfg));
    CHECK(again.plan.quota == cfg.plan.quota);
    CHECK(again.shares == cfg.shares);
    CHECK(again.rates.lambda0 == cfg.rates.lambda0);
    CHECK(again.heavy.max_usage == cfg.heavy.max_usage);

    const std::string with_density = replaced(
        valid_json(), R"("heavy": {"d": 0.0, "D": 6.0})",
        R"("heavy": {"d": 0.0, "D": 6.0, "density": [[0.0, 0.3333333333333333], [6.0, 0.0]]})");
    const MarketConfig dens = parse_config(with_density);
    const MarketConfig dens2 = parse_config(config_to_json(dens));
    CHECK(dens2.heavy.density_knots == dens.heavy.density_knots);
}

TEST_CASE("loading from disk") {
    const std::string path = "test_config_tmp.json";
    {
        std::ofstream out(path);
        out << valid_json();
    }
    const MarketConfig cfg = load_config(path);
    CHECK(cfg.n == 100.0);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_config("does_not_exist.json"), ConfigError);
}
