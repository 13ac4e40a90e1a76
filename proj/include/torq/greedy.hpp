#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "torq/board.hpp"

namespace torq {

struct GreedyStep {
    std::int64_t i = 0;
    std::int64_t Q = 0;
    std::int64_t dmin = 0, dmax = 0;
    std::int64_t parity_disparity = 0;  // signed |V_O^S| - |V_O^D| of the remaining vertices
    double p = 1.0;
};

struct GreedyTrace {
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    std::int64_t num_vertices = 0;  // |V(0)|
    int parts = 4;
    std::int64_t target = 0;        // edges wanted before stopping
    std::vector<GreedyStep> steps;  // steps[i] is the state before edge i is chosen; one extra after the last
    std::vector<Edge> matching;
    bool completed = false;
    std::string rng = "mt19937_64 seeded by splitmix64(seed)";
};

std::uint64_t splitmix64(std::uint64_t x);

GreedyTrace run_greedy(const TorusGraph& g, std::uint64_t seed, double stop_fraction = 0.9);

struct Envelope {
    double b = 0.05;
    double eq(std::int64_t n, double p) const;
    double ed(std::int64_t n, double p) const;
};

struct EnvelopeReport {
    std::int64_t first_q_violation = -1;
    std::int64_t first_d_violation = -1;
    double inside_fraction_q = 1.0;
    double inside_fraction_d = 1.0;
    std::vector<bool> q_inside, d_inside;
};

EnvelopeReport envelope_check(const GreedyTrace& t, double b = 0.05);

struct CountEstimate {
    double log_value = 0.0;   // sum of log Q(i) - log(N - i)
    double normalized = 0.0;  // log_value / n
};

CountEstimate count_estimate(const GreedyTrace& t);

struct KnuthEstimate {
    double estimate = 0.0;  // mean path product
    double log_estimate = 0.0;
    std::int64_t trials = 0;
    std::int64_t successes = 0;
};

KnuthEstimate knuth_count_estimator(const TorusGraph& g, std::int64_t trials, std::uint64_t seed = 0);

std::vector<std::int64_t> parity_track(const GreedyTrace& t);

}  // namespace torq
