#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace torq {

enum class Part : std::uint8_t { X = 0, Y = 1, S = 2, D = 3 };
enum class Kind { queens_toroidal, semiqueens_toroidal, queens_classical };
enum class Wrap { none, sum, diff, both };
enum class Mode { classical, toroidal };

const char* part_name(Part p);
Part part_from_name(const std::string& s);
const char* wrap_name(Wrap w);

struct Vertex {
    Part part;
    std::int64_t coord;
    auto operator<=>(const Vertex&) const = default;
};

struct Edge {
    std::int64_t x;
    std::int64_t y;
    auto operator<=>(const Edge&) const = default;
};

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

// residue -> centered representative
std::int64_t centered(std::int64_t n, std::int64_t c);
std::int64_t centered_bound_lo(std::int64_t n);
std::int64_t centered_bound_hi(std::int64_t n);

Edge edge_of(std::int64_t n, std::int64_t x, std::int64_t y);
inline std::int64_t s_of(std::int64_t n, const Edge& e) { return mod(e.x + e.y, n); }
inline std::int64_t d_of(std::int64_t n, const Edge& e) { return mod(e.x - e.y, n); }
std::array<Vertex, 4> vertices_of(std::int64_t n, const Edge& e);
Edge edge_from_centered(std::int64_t n, std::int64_t cx, std::int64_t cy);

Wrap wraps(std::int64_t n, const Edge& e);
bool wrap_parity_test(std::int64_t n, const Edge& e);

// t_0 and the shrinking radii t_i
std::int64_t t0(std::int64_t n);
std::int64_t t_k(std::int64_t n, int k);

struct Interval {
    enum class Shape { box, square };
    Shape shape;
    std::int64_t s;
    bool contains(std::int64_t n, const Vertex& v) const;
};

Interval box(std::int64_t s);
Interval square(std::int64_t s);

class TorusGraph {
public:
    TorusGraph(std::int64_t n, Kind kind = Kind::queens_toroidal, std::set<Vertex> removed = {});

    std::int64_t n() const { return n_; }
    Kind kind() const { return kind_; }
    const std::set<Vertex>& removed() const { return removed_; }

    int num_parts() const { return kind_ == Kind::semiqueens_toroidal ? 3 : 4; }
    std::int64_t part_size(Part p) const;
    bool is_vertex(const Vertex& v) const;
    bool has_vertex(const Vertex& v) const { return is_vertex(v) && !removed_.count(v); }
    std::vector<Vertex> vertices() const;

    // S/D coordinates: residues for toroidal, x+y and x-y+n-1 for classical
    std::vector<Vertex> edge_vertices(const Edge& e) const;
    bool has_edge(const Edge& e) const;
    std::vector<Edge> edges() const;
    std::vector<Edge> edges_through(const Vertex& v) const;

    // dense index over all vertex slots of the full board
    std::size_t num_slots() const;
    std::size_t index(const Vertex& v) const;

private:
    std::int64_t n_;
    Kind kind_;
    std::set<Vertex> removed_;
};

int pair_degree(const TorusGraph& g, const Vertex& u, const Vertex& v);

// closed form: all other vertices of the edge lie in I
std::vector<Edge> edges_into(const TorusGraph& g, const Vertex& v, const Interval& I);
// open form: at least one other vertex lies in I
std::vector<Edge> edges_touching(const TorusGraph& g, const Vertex& v, const Interval& I);

struct Square {
    std::int64_t row;
    std::int64_t col;
    auto operator<=>(const Square&) const = default;
};

bool attacks(std::int64_t n, Mode mode, Square q1, Square q2);

struct MatchingReport {
    bool valid = true;
    bool perfect = false;
    std::optional<Vertex> offending;
    std::string message;
};

MatchingReport verify_matching(const TorusGraph& g, const std::vector<Edge>& m, bool require_perfect);

struct ParityCensus {
    std::int64_t odd_s = 0, even_s = 0, odd_d = 0, even_d = 0;
    std::int64_t signed_gap() const { return odd_s - odd_d; }
    std::int64_t disparity() const { return signed_gap() < 0 ? -signed_gap() : signed_gap(); }
};

ParityCensus parity_census(std::int64_t n, const std::vector<Vertex>& vs);
ParityCensus parity_census(const TorusGraph& g);

}  // namespace torq
