// Monte Carlo estimators of percolation functionals: crossing probabilities,
// the characteristic length L(p), theta(p), one- and four-arm probabilities,
// the near-critical scale p_lambda(N), and net probabilities.
//
// Replica i of an estimate always uses replica_seed(base_seed, i), so two
// estimates with the same base seed are evaluated on the same coupled fields.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "frozenperc/connectivity.hpp"

namespace frozenperc {

struct Estimate {
    std::string estimand;
    nlohmann::json params = nlohmann::json::object();
    double value = 0.0;
    double stderr_ = 0.0;  // sample standard deviation / sqrt(replicas)
    std::int64_t replicas = 0;
    std::uint64_t base_seed = 0;
    nlohmann::json grid = nullptr;

    /// {estimand, params, value, stderr, replicas, base_seed, grid}
    nlohmann::json to_json() const;
};

/// Mean and standard error of per-replica samples.
Estimate summarize(std::string estimand, nlohmann::json params, std::span<const double> samples,
                   std::uint64_t base_seed);

/// Crossing probability of [0,width] x [0,height] at parameter p.
Estimate estimate_crossing(double width, double height, Orientation orientation, double p,
                           std::int64_t replicas, std::uint64_t base_seed,
                           Color color = Color::black, unsigned workers = 0);

struct LengthEstimate {
    enum class Status { finite, infinite, exceeds_grid };

    Status status = Status::finite;
    int value = 0;  // meaningful when finite
    double p = 0.0;
    std::int64_t replicas_per_n = 0;
    std::uint64_t base_seed = 0;
    std::vector<std::pair<int, double>> grid;  // (n, estimated crossing probability)

    nlohmann::json to_json() const;
};

/// Smallest n with estimated P(vertical black crossing of [0,2n]x[0,n]) <= 0.01
/// at min(p, 1-p): dyadic scan up to max_n, then bisection. L(p_c) is infinite.
LengthEstimate estimate_L(double p, std::int64_t replicas_per_n, std::uint64_t base_seed,
                          int max_n = 1024, unsigned workers = 0);

/// P(origin is black and joined to the inner boundary of B_radius).
Estimate estimate_theta(double p, double radius, std::int64_t replicas, std::uint64_t base_seed,
                        unsigned workers = 0);
/// theta at p_c with radius n.
Estimate estimate_pi1(int n, std::int64_t replicas, std::uint64_t base_seed, unsigned workers = 0);
/// Mean passage-site count at p_c divided by |B_{n/2}|. Carries the constants
/// hidden in E[X_n] ~ n^2 pi_4(n); lambda in p_lambda is relative to this.
Estimate estimate_pi4(int n, std::int64_t replicas, std::uint64_t base_seed, unsigned workers = 0,
                      double p_black = kCriticalP, double p_white = kCriticalP);

struct NearCriticalP {
    double p;
    bool clamped;
};

/// p_c + lambda / (N^2 pi4), clamped to [1e-9, 1 - 1e-9].
/// Throws std::invalid_argument when pi4 <= 0.
NearCriticalP p_lambda(double n, double lambda, double pi4);

Estimate estimate_net_prob(int m, int n, double p, std::int64_t replicas, std::uint64_t base_seed,
                           unsigned workers = 0);

/// Arm exponent from a log-log least-squares fit: minus the slope of
/// log(value) against log(n).
double fit_arm_exponent(std::span<const double> ns, std::span<const double> values);

}  // namespace frozenperc
