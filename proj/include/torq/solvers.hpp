#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "torq/board.hpp"
#include "torq/lattice.hpp"

namespace torq {

// default bounds, overridden by TORQ_MAX_EXHAUSTIVE
constexpr std::int64_t default_count_bound = 13;
constexpr std::int64_t default_monsky_bound = 16;
std::int64_t exhaustive_bound(std::int64_t fallback);

std::uint64_t count_classical(std::int64_t n);
std::uint64_t count_toroidal(std::int64_t n);
std::uint64_t count_semiqueens(std::int64_t n, Mode mode);
// column of the queen in each row, for every toroidal solution
std::vector<std::vector<int>> toroidal_solutions(std::int64_t n, std::size_t limit = SIZE_MAX);
std::vector<std::vector<int>> classical_solutions(std::int64_t n, std::size_t limit = SIZE_MAX);
std::int64_t max_partial_toroidal(std::int64_t n);
std::int64_t monsky_formula(std::int64_t n);

enum class WCase { even_3div, even_3ndiv, odd_3div };
const char* wcase_name(WCase c);

struct WTuple {
    std::int64_t a, b, x, y, c, d, w, z;  // labels in 1..n
};

struct WSet {
    std::int64_t n = 0;
    WCase wcase = WCase::odd_3div;
    std::array<WTuple, 3> t{};
    std::vector<Vertex> removed;  // 48 vertices, 0-based coordinates

    std::vector<Square> fixed_queens() const;  // 12 squares, 0-based
};

WCase wcase_of(std::int64_t n);
// k with the extra diagonal shifted by n/k
std::int64_t wset_shift(WCase c);
std::vector<Vertex> wset_vertices(std::int64_t n, WCase c, const std::array<WTuple, 3>& t);
// empty string when every invariant holds, else the first failure
std::string wset_violation(const WSet& w);

WSet build_wset(std::int64_t n);
Verdict verify_tstar_lattice(std::int64_t n, const WSet& w);

struct ExtendOptions {
    double timeout_seconds = 60.0;
    std::int64_t max_restarts = 1000000;
    double greedy_fraction = 0.0;  // random greedy prefix before the search; 0 = search from scratch
    std::int64_t dfs_node_limit = 5000;
    std::uint64_t seed = 0;
};

struct Placement {
    std::int64_t n = 0;
    std::vector<Square> queens;
    std::vector<Square> fixed;
    std::vector<std::pair<int, int>> toroidal_pairs;
    std::int64_t restarts = 0;
};

std::optional<Placement> extend_classical(std::int64_t n, const WSet& w, const ExtendOptions& opt = {});

std::vector<std::pair<int, int>> verify_placement(std::int64_t n, const std::vector<Square>& queens, Mode mode);

}  // namespace torq
