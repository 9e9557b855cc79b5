#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wsp/market.hpp"

namespace wsp {

// Horizon is months * dt model-months; billing months have length 1 and the
// dt windows set the trajectory checkpoints.
struct SimConfig {
    std::uint64_t seed = 1;
    int months = 0;  // number of dt-length windows in the horizon
    double dt = 0.25;
    int replications = 0;

    double horizon() const { return months * dt; }
    void validate(double discount) const;
};

// Inverse-CDF sampler for a UsageModel (uniform or piecewise-linear density).
class UsageSampler {
  public:
    explicit UsageSampler(const UsageModel& usage);
    double sample(std::mt19937_64& rng) const;

  private:
    bool uniform_ = true;
    double lo_ = 0.0, hi_ = 0.0;
    std::vector<double> u_, f_, cdf_;
};

// Replication stream k is mt19937_64 seeded with splitmix64(seed + k).
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

struct RepRecord {
    int rep = 0;
    std::size_t provider = 0;
    double profit = 0.0;
    double n_switched = 0.0;  // weighted users (families) churned in
    double n_new = 0.0;       // weighted arrivals from the untapped pool
};

struct ProviderEstimate {
    double mean = 0.0;
    double se = 0.0;
    double n_switched = 0.0;
    double n_new = 0.0;
};

struct SimResult {
    std::vector<ProviderEstimate> providers;
    std::vector<RepRecord> records;
    // subscriber counts (heavy users / pooled families) at window boundaries
    std::vector<double> checkpoints;
    std::vector<std::vector<double>> count_mean;  // [provider][checkpoint]
    std::vector<std::vector<double>> count_se;
};

// Monte Carlo estimate of both providers' discounted profits under upgrade
// times (t_0, t_1). Deterministic for a fixed seed regardless of parallelism.
SimResult simulate_rollover(const MarketConfig& cfg, const SimConfig& sim, const ExtendedTime& t_0,
                            const ExtendedTime& t_1, bool parallel = true);

SimResult simulate_shared(const MarketConfig& cfg, const SimConfig& sim, const ExtendedTime& t_0,
                          const ExtendedTime& t_1, bool parallel = true);

}  // namespace wsp
