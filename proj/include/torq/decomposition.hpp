#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "torq/board.hpp"
#include "torq/lattice.hpp"

namespace torq {

struct ZeroSumConfig {
    std::int64_t n = 0;
    std::int64_t a = 0, b = 0, c = 0, s = 0, d = 0;
    std::array<Edge, 4> positive{};
    std::array<Edge, 4> negative{};
    bool valid = false;

    std::vector<Vertex> vertices() const;
    // +1 on positive, -1 on negative
    SignedEdgeSet signed_edges(int sign = 1) const;
};

ZeroSumConfig make_config(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t s);

// config with e1 = (a, b+s) in M+ and e2 in M-, where e1 and e2 share exactly the vertex in part p;
// `free` is the one remaining parameter (s for X/Y, c for S, b for D)
ZeroSumConfig config_through(std::int64_t n, const Edge& e1, const Edge& e2, Part p, std::int64_t free);

struct PhaseRecord {
    std::string name;
    std::int64_t gadgets = 0;
    std::int64_t edges_added = 0;  // gross number of signed edges added
    std::int64_t size_delta = 0;   // net change of |phi|
};

struct Step {
    Generator g;
    std::int64_t mult = 1;
};

struct DecompositionResult {
    SupportVector target;
    SignedEdgeSet phi;
    std::vector<Step> steps;
    std::vector<PhaseRecord> phases;
    std::int64_t size() const { return phi.size(); }
    std::int64_t edge_radius = -1;  // max centered |coord| over edges of phi, when reported
};

struct PushDown {
    SignedEdgeSet phi;
    SupportVector u;
};

PushDown push_down(const SupportVector& u, std::int64_t t);

SignedEdgeSet zero_sum_support(const SupportVector& u, bool avoid_wrap);

DecompositionResult bidc_reduce(const SupportVector& v);
// declared bound on |phi| for bidc_reduce on a vector of size T
std::int64_t bidc_bound(std::int64_t T, std::int64_t n);

DecompositionResult decompose_bounded(const SupportVector& S);

DecompositionResult cover_leave(const SupportVector& L, std::int64_t radius);

struct MatchingPair {
    std::vector<Edge> plus, minus;
    std::int64_t configs_applied = 0;
};

MatchingPair to_matching_pair(const SignedEdgeSet& phi, const Interval& region);

struct Cascade {
    Edge e{};
    std::array<Edge, 4> T{};
    ZeroSumConfig outer;
    std::array<ZeroSumConfig, 4> inner;
    std::vector<Edge> through_e;  // perfect matching containing e
    std::vector<Edge> through_T;  // perfect matching containing T1..T4
    std::set<Vertex> vertices;
};

Cascade build_cascade(const TorusGraph& g, const Edge& e, const std::array<Edge, 4>& T,
                      const std::set<Vertex>& avoid = {});

}  // namespace torq
