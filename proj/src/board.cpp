#include "torq/board.hpp"

#include <algorithm>

#include <boost/multiprecision/cpp_int.hpp>

#include "torq/errors.hpp"

namespace torq {

const char* part_name(Part p) {
    switch (p) {
    case Part::X: return "X";
    case Part::Y: return "Y";
    case Part::S: return "S";
    case Part::D: return "D";
    }
    return "?";
}

Part part_from_name(const std::string& s) {
    if (s == "X") return Part::X;
    if (s == "Y") return Part::Y;
    if (s == "S") return Part::S;
    if (s == "D") return Part::D;
    throw invalid_argument("unknown part '" + s + "'");
}

const char* wrap_name(Wrap w) {
    switch (w) {
    case Wrap::none: return "none";
    case Wrap::sum: return "sum";
    case Wrap::diff: return "diff";
    case Wrap::both: return "both";
    }
    return "?";
}

std::int64_t centered_bound_lo(std::int64_t n) { return n % 2 ? -(n - 1) / 2 : -n / 2 + 1; }
std::int64_t centered_bound_hi(std::int64_t n) { return n % 2 ? (n - 1) / 2 : n / 2; }

std::int64_t centered(std::int64_t n, std::int64_t c) {
    std::int64_t r = mod(c, n);
    return r > centered_bound_hi(n) ? r - n : r;
}

Edge edge_of(std::int64_t n, std::int64_t x, std::int64_t y) {
    if (n < 1) throw invalid_argument("n must be positive");
    if (x < 0 || x >= n || y < 0 || y >= n)
        throw invalid_argument("edge coordinate out of range 0..n-1");
    return Edge{x, y};
}

Edge edge_from_centered(std::int64_t n, std::int64_t cx, std::int64_t cy) {
    return Edge{mod(cx, n), mod(cy, n)};
}

std::array<Vertex, 4> vertices_of(std::int64_t n, const Edge& e) {
    return {Vertex{Part::X, e.x}, Vertex{Part::Y, e.y}, Vertex{Part::S, s_of(n, e)},
            Vertex{Part::D, d_of(n, e)}};
}

Wrap wraps(std::int64_t n, const Edge& e) {
    std::int64_t a = centered(n, e.x), b = centered(n, e.y);
    std::int64_t lo = centered_bound_lo(n), hi = centered_bound_hi(n);
    bool ws = a + b < lo || a + b > hi;
    bool wd = a - b < lo || a - b > hi;
    if (ws && wd) return Wrap::both;
    if (ws) return Wrap::sum;
    if (wd) return Wrap::diff;
    return Wrap::none;
}

bool wrap_parity_test(std::int64_t n, const Edge& e) {
    if (n % 2 == 0) throw unsupported("wrap parity test holds only for odd n");
    std::int64_t s = centered(n, s_of(n, e)), d = centered(n, d_of(n, e));
    return mod(s, 2) != mod(d, 2);
}

std::int64_t t0(std::int64_t n) { return n % 2 ? (n - 1) / 2 : n / 2; }

std::int64_t t_k(std::int64_t n, int k) {
    // floor((4/5)^k t0) exactly
    boost::multiprecision::cpp_int num = t0(n), den = 1;
    for (int i = 0; i < k; ++i) {
        num *= 4;
        den *= 5;
    }
    return static_cast<std::int64_t>(num / den);
}

bool Interval::contains(std::int64_t n, const Vertex& v) const {
    std::int64_t c = centered(n, v.coord);
    if (c < 0) c = -c;
    if (shape == Shape::square) return c <= s;
    if (v.part == Part::X || v.part == Part::Y) return c <= (2 * s) / 3;
    return c <= s;
}

Interval box(std::int64_t s) { return Interval{Interval::Shape::box, s}; }
Interval square(std::int64_t s) { return Interval{Interval::Shape::square, s}; }

TorusGraph::TorusGraph(std::int64_t n, Kind kind, std::set<Vertex> removed)
    : n_(n), kind_(kind), removed_(std::move(removed)) {
    if (n < 1) throw invalid_argument("n must be positive");
    for (const auto& v : removed_)
        if (!is_vertex(v)) throw invalid_argument("removed vertex is not a vertex of the board");
}

std::int64_t TorusGraph::part_size(Part p) const {
    if (kind_ == Kind::semiqueens_toroidal && p == Part::D) return 0;
    if (kind_ == Kind::queens_classical && (p == Part::S || p == Part::D)) return 2 * n_ - 1;
    return n_;
}

bool TorusGraph::is_vertex(const Vertex& v) const {
    return v.coord >= 0 && v.coord < part_size(v.part);
}

std::vector<Vertex> TorusGraph::vertices() const {
    std::vector<Vertex> out;
    for (int p = 0; p < num_parts(); ++p)
        for (std::int64_t c = 0; c < part_size(Part(p)); ++c) {
            Vertex v{Part(p), c};
            if (!removed_.count(v)) out.push_back(v);
        }
    return out;
}

std::vector<Vertex> TorusGraph::edge_vertices(const Edge& e) const {
    std::vector<Vertex> out{{Part::X, e.x}, {Part::Y, e.y}};
    if (kind_ == Kind::queens_classical) {
        out.push_back({Part::S, e.x + e.y});
        out.push_back({Part::D, e.x - e.y + n_ - 1});
    } else {
        out.push_back({Part::S, s_of(n_, e)});
        if (kind_ == Kind::queens_toroidal) out.push_back({Part::D, d_of(n_, e)});
    }
    return out;
}

bool TorusGraph::has_edge(const Edge& e) const {
    if (e.x < 0 || e.x >= n_ || e.y < 0 || e.y >= n_) return false;
    if (removed_.empty()) return true;
    for (const auto& v : edge_vertices(e))
        if (removed_.count(v)) return false;
    return true;
}

std::vector<Edge> TorusGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(n_ * n_));
    for (std::int64_t x = 0; x < n_; ++x)
        for (std::int64_t y = 0; y < n_; ++y)
            if (has_edge({x, y})) out.push_back({x, y});
    return out;
}

std::vector<Edge> TorusGraph::edges_through(const Vertex& v) const {
    std::vector<Edge> out;
    if (!has_vertex(v)) return out;
    for (std::int64_t t = 0; t < n_; ++t) {
        Edge e{};
        bool ok = true;
        switch (v.part) {
        case Part::X: e = {v.coord, t}; break;
        case Part::Y: e = {t, v.coord}; break;
        case Part::S:
            if (kind_ == Kind::queens_classical) {
                e = {t, v.coord - t};
                ok = e.y >= 0 && e.y < n_;
            } else {
                e = {t, mod(v.coord - t, n_)};
            }
            break;
        case Part::D:
            if (kind_ == Kind::queens_classical) {
                e = {t, t - (v.coord - (n_ - 1))};
                ok = e.y >= 0 && e.y < n_;
            } else {
                e = {t, mod(t - v.coord, n_)};
            }
            break;
        }
        if (ok && has_edge(e)) out.push_back(e);
    }
    return out;
}

std::size_t TorusGraph::num_slots() const {
    std::size_t k = 0;
    for (int p = 0; p < num_parts(); ++p) k += static_cast<std::size_t>(part_size(Part(p)));
    return k;
}

std::size_t TorusGraph::index(const Vertex& v) const {
    std::size_t off = 0;
    for (int p = 0; p < static_cast<int>(v.part); ++p) off += static_cast<std::size_t>(part_size(Part(p)));
    return off + static_cast<std::size_t>(v.coord);
}

int pair_degree(const TorusGraph& g, const Vertex& u, const Vertex& v) {
    if (u.part == v.part) throw invalid_argument("pair degree needs vertices in different parts");
    int k = 0;
    for (const auto& e : g.edges_through(u))
        for (const auto& w : g.edge_vertices(e))
            if (w == v) ++k;
    return k;
}

std::vector<Edge> edges_into(const TorusGraph& g, const Vertex& v, const Interval& I) {
    std::int64_t n = g.n();
    std::vector<Edge> out;
    for (const auto& e : g.edges_through(v)) {
        bool all = true;
        for (const auto& w : g.edge_vertices(e))
            if (w != v && !I.contains(n, w)) all = false;
        if (all) out.push_back(e);
    }
    return out;
}

std::vector<Edge> edges_touching(const TorusGraph& g, const Vertex& v, const Interval& I) {
    std::int64_t n = g.n();
    std::vector<Edge> out;
    for (const auto& e : g.edges_through(v)) {
        bool any = false;
        for (const auto& w : g.edge_vertices(e))
            if (w != v && I.contains(n, w)) any = true;
        if (any) out.push_back(e);
    }
    return out;
}

bool attacks(std::int64_t n, Mode mode, Square a, Square b) {
    if (a == b) throw invalid_argument("attack test needs two distinct squares");
    if (a.row == b.row || a.col == b.col) return true;
    if (mode == Mode::classical)
        return a.row + a.col == b.row + b.col || a.row - a.col == b.row - b.col;
    return mod(a.row + a.col, n) == mod(b.row + b.col, n) || mod(a.row - a.col, n) == mod(b.row - b.col, n);
}

MatchingReport verify_matching(const TorusGraph& g, const std::vector<Edge>& m, bool require_perfect) {
    MatchingReport r;
    std::set<Vertex> seen;
    for (const auto& e : m) {
        if (!g.has_edge(e)) {
            r.valid = false;
            r.message = "edge (" + std::to_string(e.x) + "," + std::to_string(e.y) + ") not in graph";
            return r;
        }
        for (const auto& v : g.edge_vertices(e)) {
            if (!seen.insert(v).second) {
                r.valid = false;
                r.offending = v;
                r.message = std::string("vertex ") + part_name(v.part) + ":" + std::to_string(v.coord) +
                            " covered twice";
                return r;
            }
        }
    }
    if (require_perfect) {
        r.perfect = true;
        for (const auto& v : g.vertices())
            if (!seen.count(v)) {
                r.perfect = false;
                r.offending = v;
                r.message = std::string("vertex ") + part_name(v.part) + ":" + std::to_string(v.coord) +
                            " uncovered";
                break;
            }
    } else {
        r.perfect = seen.size() == g.vertices().size();
    }
    return r;
}

ParityCensus parity_census(std::int64_t n, const std::vector<Vertex>& vs) {
    ParityCensus c;
    for (const auto& v : vs) {
        if (v.part != Part::S && v.part != Part::D) continue;
        bool odd = mod(centered(n, v.coord), 2) == 1;
        if (v.part == Part::S) (odd ? c.odd_s : c.even_s)++;
        else (odd ? c.odd_d : c.even_d)++;
    }
    return c;
}

ParityCensus parity_census(const TorusGraph& g) { return parity_census(g.n(), g.vertices()); }

}  // namespace torq
