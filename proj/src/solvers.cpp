#include "torq/solvers.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "torq/errors.hpp"
#include "torq/greedy.hpp"

namespace torq {

std::int64_t exhaustive_bound(std::int64_t fallback) {
    if (const char* e = std::getenv("TORQ_MAX_EXHAUSTIVE")) {
        char* end = nullptr;
        long long v = std::strtoll(e, &end, 10);
        if (end != e && *end == '\0' && v > 0) return v;
    }
    return fallback;
}

namespace {

using mask = std::uint64_t;

void check_bound(std::int64_t n, std::int64_t fallback, const char* what) {
    if (n < 1) throw invalid_argument(std::string(what) + ": n must be positive");
    const std::int64_t lim = std::min<std::int64_t>(exhaustive_bound(fallback), 31);
    if (n > lim) throw unsupported(std::string(what) + ": n=" + std::to_string(n) + " above exhaustive bound " + std::to_string(lim));
}

inline mask full_mask(std::int64_t n) { return (mask{1} << n) - 1; }

// rotate an n-bit mask so bit c reads bit (c + r) mod n
inline mask rot_down(mask m, std::int64_t r, std::int64_t n) {
    if (r == 0) return m;
    return ((m >> r) | (m << (n - r))) & full_mask(n);
}
// bit c reads bit (c - r) mod n
inline mask rot_up(mask m, std::int64_t r, std::int64_t n) {
    if (r == 0) return m;
    return ((m << r) | (m >> (n - r))) & full_mask(n);
}

// toroidal: S indexed by (r+c) mod n, D by (c-r) mod n
inline mask toroidal_free(std::int64_t n, std::int64_t r, mask cols, mask S, mask D) {
    return ~(cols | rot_down(S, r, n) | rot_up(D, r, n)) & full_mask(n);
}

void place_toroidal(std::int64_t n, std::int64_t r, std::int64_t c, mask& S, mask& D) {
    S |= mask{1} << mod(r + c, n);
    D |= mask{1} << mod(c - r, n);
}

template <class F>
void classical_walk(std::int64_t n, std::int64_t row, mask cols, mask ld, mask rd, std::vector<int>& cur, F&& leaf) {
    if (row == n) {
        leaf(cur);
        return;
    }
    mask avail = ~(cols | ld | rd) & full_mask(n);
    while (avail) {
        mask bit = avail & (~avail + 1);
        avail ^= bit;
        cur[static_cast<std::size_t>(row)] = std::countr_zero(bit);
        classical_walk(n, row + 1, cols | bit, ((ld | bit) << 1) & full_mask(n), (rd | bit) >> 1, cur, leaf);
    }
}

std::uint64_t classical_count(std::int64_t n, std::int64_t row, mask cols, mask ld, mask rd) {
    if (row == n) return 1;
    std::uint64_t total = 0;
    mask avail = ~(cols | ld | rd) & full_mask(n);
    while (avail) {
        mask bit = avail & (~avail + 1);
        avail ^= bit;
        total += classical_count(n, row + 1, cols | bit, ((ld | bit) << 1) & full_mask(n), (rd | bit) >> 1);
    }
    return total;
}

template <class F>
void toroidal_walk(std::int64_t n, std::int64_t row, mask cols, mask S, mask D, std::vector<int>& cur, F&& leaf) {
    if (row == n) {
        leaf(cur);
        return;
    }
    mask avail = toroidal_free(n, row, cols, S, D);
    while (avail) {
        mask bit = avail & (~avail + 1);
        avail ^= bit;
        int c = std::countr_zero(bit);
        cur[static_cast<std::size_t>(row)] = c;
        mask S2 = S, D2 = D;
        place_toroidal(n, row, c, S2, D2);
        toroidal_walk(n, row + 1, cols | bit, S2, D2, cur, leaf);
    }
}

std::uint64_t toroidal_count(std::int64_t n, std::int64_t row, mask cols, mask S, mask D) {
    if (row == n) return 1;
    std::uint64_t total = 0;
    mask avail = toroidal_free(n, row, cols, S, D);
    while (avail) {
        mask bit = avail & (~avail + 1);
        avail ^= bit;
        mask S2 = S, D2 = D;
        place_toroidal(n, row, std::countr_zero(bit), S2, D2);
        total += toroidal_count(n, row + 1, cols | bit, S2, D2);
    }
    return total;
}

std::uint64_t semi_count(std::int64_t n, Mode mode, std::int64_t row, mask cols, mask S) {
    if (row == n) return 1;
    std::uint64_t total = 0;
    mask avail;
    if (mode == Mode::toroidal)
        avail = ~(cols | rot_down(S, row, n)) & full_mask(n);
    else
        avail = ~(cols | (S >> row)) & full_mask(n);  // S bit r+c
    while (avail) {
        mask bit = avail & (~avail + 1);
        avail ^= bit;
        int c = std::countr_zero(bit);
        mask S2 = S | (mask{1} << (mode == Mode::toroidal ? mod(row + c, n) : row + c));
        total += semi_count(n, mode, row + 1, cols | bit, S2);
    }
    return total;
}

}  // namespace

std::uint64_t count_classical(std::int64_t n) {
    check_bound(n, default_count_bound, "count_classical");
    return classical_count(n, 0, 0, 0, 0);
}

std::uint64_t count_toroidal(std::int64_t n) {
    check_bound(n, default_count_bound, "count_toroidal");
    return toroidal_count(n, 0, 0, 0, 0);
}

std::uint64_t count_semiqueens(std::int64_t n, Mode mode) {
    check_bound(n, default_count_bound, "count_semiqueens");
    return semi_count(n, mode, 0, 0, 0);
}

std::vector<std::vector<int>> toroidal_solutions(std::int64_t n, std::size_t limit) {
    check_bound(n, default_count_bound, "toroidal_solutions");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(n));
    toroidal_walk(n, 0, 0, 0, 0, cur, [&](const std::vector<int>& s) {
        if (out.size() < limit) out.push_back(s);
    });
    return out;
}

std::vector<std::vector<int>> classical_solutions(std::int64_t n, std::size_t limit) {
    check_bound(n, default_count_bound, "classical_solutions");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(n));
    classical_walk(n, 0, 0, 0, 0, cur, [&](const std::vector<int>& s) {
        if (out.size() < limit) out.push_back(s);
    });
    return out;
}

namespace {

// can k non-attacking toroidal queens fit, given one at (0,0)
bool partial_fits(std::int64_t n, std::int64_t row, std::int64_t need, std::int64_t skips, mask cols, mask S, mask D) {
    if (need == 0) return true;
    if (row == n) return false;
    const mask f = full_mask(n);
    if (std::popcount(~cols & f) < need || std::popcount(~S & f) < need || std::popcount(~D & f) < need) return false;
    mask avail = toroidal_free(n, row, cols, S, D);
    while (avail) {
        mask bit = avail & (~avail + 1);
        avail ^= bit;
        mask S2 = S, D2 = D;
        place_toroidal(n, row, std::countr_zero(bit), S2, D2);
        if (partial_fits(n, row + 1, need - 1, skips, cols | bit, S2, D2)) return true;
    }
    return skips > 0 && partial_fits(n, row + 1, need, skips - 1, cols, S, D);
}

}  // namespace

std::int64_t max_partial_toroidal(std::int64_t n) {
    check_bound(n, default_monsky_bound, "max_partial_toroidal");
    mask S = 0, D = 0;
    place_toroidal(n, 0, 0, S, D);
    for (std::int64_t k = n; k >= 1; --k)
        if (partial_fits(n, 1, k - 1, n - k, 1, S, D)) return k;
    return 1;
}

std::int64_t monsky_formula(std::int64_t n) {
    if (n < 1) throw invalid_argument("n must be positive");
    if (n % 6 == 1 || n % 6 == 5) return n;
    if (n % 3 != 0 && n % 4 != 0) return n - 1;
    return n - 2;
}

// ---- W-set ----

const char* wcase_name(WCase c) {
    switch (c) {
        case WCase::even_3div: return "even-3div";
        case WCase::even_3ndiv: return "even-3ndiv";
        case WCase::odd_3div: return "odd-3div";
    }
    return "?";
}

WCase wcase_of(std::int64_t n) {
    if (n % 6 == 1 || n % 6 == 5) throw invalid_argument("n = 1,5 mod 6 needs no W-set");
    if (n % 2 == 0) return n % 3 == 0 ? WCase::even_3div : WCase::even_3ndiv;
    return WCase::odd_3div;
}

std::int64_t wset_shift(WCase c) {
    switch (c) {
        case WCase::even_3div: return 6;
        case WCase::even_3ndiv: return 2;
        case WCase::odd_3div: return 3;
    }
    return 1;
}

std::vector<Vertex> wset_vertices(std::int64_t n, WCase wc, const std::array<WTuple, 3>& t) {
    const std::int64_t h = n / wset_shift(wc);
    std::vector<Vertex> v;
    v.reserve(48);
    for (const auto& q : t) {
        v.push_back({Part::X, mod(q.a - 1, n)});
        v.push_back({Part::X, mod(q.x - 1, n)});
        v.push_back({Part::Y, mod(q.b - 1, n)});
        v.push_back({Part::Y, mod(q.y - 1, n)});
        v.push_back({Part::S, mod(q.a + q.b - 2, n)});
        v.push_back({Part::S, mod(q.a + q.b + h - 2, n)});
        v.push_back({Part::D, mod(q.a - q.b, n)});
        v.push_back({Part::D, mod(q.x - q.y, n)});

        v.push_back({Part::X, mod(q.c - 1, n)});
        v.push_back({Part::X, mod(q.w - 1, n)});
        v.push_back({Part::Y, mod(q.d - 1, n)});
        v.push_back({Part::Y, mod(q.z - 1, n)});
        v.push_back({Part::S, mod(q.c + q.d - 2, n)});
        v.push_back({Part::S, mod(q.w + q.z - 2, n)});
        v.push_back({Part::D, mod(q.c - q.d, n)});
        v.push_back({Part::D, mod(q.c - q.d + h, n)});
    }
    return v;
}

std::vector<Square> WSet::fixed_queens() const {
    std::vector<Square> q;
    for (const auto& s : t) {
        q.push_back({s.a - 1, s.b - 1});
        q.push_back({s.x - 1, s.y - 1});
        q.push_back({s.c - 1, s.d - 1});
        q.push_back({s.w - 1, s.z - 1});
    }
    return q;
}

namespace {

std::int64_t wsum(const std::array<WTuple, 3>& t) {
    std::int64_t s = 0;
    for (const auto& q : t) s += q.a + q.b + q.c - q.d;
    return s;
}

bool congruence_ok(std::int64_t n, WCase wc, std::int64_t sigma) {
    switch (wc) {
        case WCase::odd_3div: return mod(1 + 2 * sigma, 3) == 0;
        case WCase::even_3div: return mod(2 + n + 2 * sigma, 12) == 0;
        case WCase::even_3ndiv: return mod(2 + n + 2 * sigma, 4) == 0;
    }
    return false;
}

// odd-diagonal balance of the removed set; automatic unless n even and the shift n/k odd
bool parity_ok(std::int64_t n, WCase wc, const std::array<WTuple, 3>& t) {
    if (n % 2 || (n / wset_shift(wc)) % 2 == 0) return true;
    std::int64_t plus = 0, minus = 0;
    for (const auto& q : t) {
        plus += (q.a + q.b) % 2;
        minus += (q.c + q.d) % 2;
    }
    return plus == minus;
}

}  // namespace

std::string wset_violation(const WSet& ws) {
    const std::int64_t n = ws.n;
    if (n < 1) return "n must be positive";
    if (n % 6 == 1 || n % 6 == 5) return "case: n = 1,5 mod 6";
    if (ws.wcase != wcase_of(n)) return "case: wrong divisibility case";
    std::set<std::int64_t> labels;
    for (const auto& q : ws.t)
        for (auto v : {q.a, q.b, q.x, q.y, q.c, q.d, q.w, q.z}) {
            if (v < 1 || v > n) return "range: label outside 1..n";
            labels.insert(v);
        }
    if (labels.size() != 24) return "distinct: the 24 labels are not distinct";
    for (const auto& q : ws.t) {
        if (q.a + q.b < 1 || q.a + q.b > n / 2) return "sum: a+b outside [n/2]";
        if (q.x + q.y != q.a + q.b + n) return "sum: x+y != a+b+n";
        if (q.c - q.d < 1 || q.c - q.d > n / 2) return "diff: c-d outside [n/2]";
        if (q.w - q.z != q.c - q.d - n) return "diff: w-z != c-d-n";
    }
    std::set<std::int64_t> s9, d9;
    for (const auto& q : ws.t) {
        s9.insert(mod(q.a + q.b, n));
        s9.insert(mod(q.c + q.d, n));
        s9.insert(mod(q.w + q.z, n));
        d9.insert(mod(q.a - q.b, n));
        d9.insert(mod(q.x - q.y, n));
        d9.insert(mod(q.c - q.d, n));
    }
    if (s9.size() != 9) return "nine-S: S-values not distinct";
    if (d9.size() != 9) return "nine-D: D-values not distinct";
    auto vs = wset_vertices(n, ws.wcase, ws.t);
    std::set<Vertex> uniq(vs.begin(), vs.end());
    if (uniq.size() != 48) return "vertices: removed set has repeats";
    if (ws.removed != vs) return "vertices: removed set does not match the tuples";
    if (!parity_ok(n, ws.wcase, ws.t)) return "parity: odd a+b and odd c-d counts differ";
    if (!congruence_ok(n, ws.wcase, wsum(ws.t))) return "congruence: case congruence fails";
    return "";
}

namespace {

using bits = unsigned __int128;

struct Used {
    bits l = 0, s = 0, d = 0;
    bool clash(const Used& o) const { return (l & o.l) || (s & o.s) || (d & o.d); }
    Used operator|(const Used& o) const { return {l | o.l, s | o.s, d | o.d}; }
};

// half-tuples in lexicographic order, each with the labels and residues it occupies
struct Half {
    std::int64_t p, q, r, t;
    Used u;
};

class WSearch {
public:
    explicit WSearch(std::int64_t n) : n_(n), wc_(wcase_of(n)), h_(n / wset_shift(wc_)) {
        const std::int64_t half = n / 2;
        for (std::int64_t a = 1; a <= n; ++a)
            for (std::int64_t b = 1; a + b <= half; ++b)
                for (std::int64_t x = a + b; x <= n; ++x) {
                    std::int64_t y = a + b + n - x;
                    Used u;
                    if (take(u, {a, b, x, y}, {a + b, a + b + h_}, {a - b, x - y})) plus_.push_back({a, b, x, y, u});
                }
        for (std::int64_t c = 1; c <= n; ++c)
            for (std::int64_t d = std::max<std::int64_t>(1, c - half); d < c; ++d)
                for (std::int64_t w = 1; w <= c - d; ++w) {
                    std::int64_t z = w - (c - d) + n;
                    Used u;
                    if (take(u, {c, d, w, z}, {c + d, w + z}, {c - d, c - d + h_})) minus_.push_back({c, d, w, z, u});
                }
    }

    bool run(std::array<WTuple, 3>& out) {
        Dom dp, dm;
        for (const auto& h : plus_) dp.push_back(&h);
        for (const auto& h : minus_) dm.push_back(&h);
        if (!group(0, dp, dm)) return false;
        out = t_;
        return true;
    }

private:
    std::int64_t n_;
    WCase wc_;
    std::int64_t h_;
    std::vector<Half> plus_, minus_;
    std::array<WTuple, 3> t_{};

    // labels and S-values (sum - 2) / D-values mod n, false on an internal repeat
    bool take(Used& u, std::initializer_list<std::int64_t> ls, std::initializer_list<std::int64_t> ss,
              std::initializer_list<std::int64_t> ds) const {
        for (auto v : ls) {
            bits b = bits{1} << (v - 1);
            if (u.l & b) return false;
            u.l |= b;
        }
        for (auto v : ss) {
            bits b = bits{1} << mod(v - 2, n_);
            if (u.s & b) return false;
            u.s |= b;
        }
        for (auto v : ds) {
            bits b = bits{1} << mod(v, n_);
            if (u.d & b) return false;
            u.d |= b;
        }
        return true;
    }

    using Dom = std::vector<const Half*>;

    static Dom filter(const Dom& d, const Used& u) {
        Dom out;
        for (const Half* h : d)
            if (!h->u.clash(u)) out.push_back(h);
        return out;
    }

    // domains hold the half-tuples still compatible with everything chosen so far
    bool group(int i, const Dom& dp, const Dom& dm) {
        auto& q = t_[static_cast<std::size_t>(i)];
        for (const Half* p : dp) {
            q.a = p->p, q.b = p->q, q.x = p->r, q.y = p->t;
            const Dom dm1 = filter(dm, p->u);
            if (dm1.empty()) continue;
            const Dom dp1 = i < 2 ? filter(dp, p->u) : Dom{};
            for (const Half* m : dm1) {
                q.c = m->p, q.d = m->q, q.w = m->r, q.z = m->t;
                if (i == 2) {
                    if (parity_ok(n_, wc_, t_) && congruence_ok(n_, wc_, wsum(t_))) return true;
                    continue;
                }
                const Dom dp2 = filter(dp1, m->u);
                if (dp2.empty()) continue;
                const Dom dm2 = filter(dm1, m->u);
                if (dm2.empty()) continue;
                if (group(i + 1, dp2, dm2)) return true;
            }
        }
        return false;
    }
};

}  // namespace

WSet build_wset(std::int64_t n) {
    if (n < 26) throw invalid_argument("build_wset needs n >= 26");
    if (n > 128) throw unsupported("build_wset is limited to n <= 128");
    WSet w;
    w.n = n;
    w.wcase = wcase_of(n);
    if (!WSearch(n).run(w.t)) throw capacity_error("no W-set tuple found for n=" + std::to_string(n));
    w.removed = wset_vertices(n, w.wcase, w.t);
    if (auto why = wset_violation(w); !why.empty()) throw verification_error("W-set re-check failed: " + why);
    return w;
}

Verdict verify_tstar_lattice(std::int64_t n, const WSet& w) {
    std::set<Vertex> removed(w.removed.begin(), w.removed.end());
    return in_lattice_queens(ones(TorusGraph(n, Kind::queens_toroidal, removed)));
}

// ---- classical extension ----

std::vector<std::pair<int, int>> verify_placement(std::int64_t n, const std::vector<Square>& queens, Mode mode) {
    std::set<Square> seen;
    for (const auto& q : queens) {
        if (q.row < 0 || q.row >= n || q.col < 0 || q.col >= n) throw invalid_argument("queen off the board");
        if (!seen.insert(q).second) throw invalid_argument("duplicate square in placement");
    }
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < queens.size(); ++i)
        for (std::size_t j = i + 1; j < queens.size(); ++j)
            if (attacks(n, mode, queens[i], queens[j])) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return pairs;
}

namespace {

// exhaustive completion of a partial matching, fewest-options vertex first
class Completer {
public:
    Completer(std::int64_t n, const std::set<Vertex>& blocked, std::int64_t limit, std::mt19937_64& rng)
        : n_(n), limit_(limit), rng_(rng) {
        for (int p = 0; p < 4; ++p) free_[p].assign(static_cast<std::size_t>(n), 1);
        for (const auto& v : blocked) free_[static_cast<int>(v.part)][static_cast<std::size_t>(v.coord)] = 0;
        for (std::int64_t x = 0; x < n; ++x) need_ += free_[0][static_cast<std::size_t>(x)];
    }

    bool run(std::vector<Edge>& out) {
        if (!solve()) return false;
        out.insert(out.end(), chosen_.begin(), chosen_.end());
        return true;
    }

private:
    std::int64_t n_, limit_, nodes_ = 0, need_ = 0;
    std::mt19937_64& rng_;
    std::array<std::vector<char>, 4> free_;
    std::vector<Edge> chosen_;

    bool ok(std::int64_t x, std::int64_t y) const {
        return free_[0][static_cast<std::size_t>(x)] && free_[1][static_cast<std::size_t>(y)] &&
               free_[2][static_cast<std::size_t>(mod(x + y, n_))] && free_[3][static_cast<std::size_t>(mod(x - y, n_))];
    }

    std::vector<Edge> options(Part p, std::int64_t c) const {
        std::vector<Edge> e;
        for (std::int64_t t = 0; t < n_; ++t) {
            std::int64_t x, y;
            switch (p) {
                case Part::X: x = c, y = t; break;
                case Part::Y: x = t, y = c; break;
                case Part::S: x = t, y = mod(c - t, n_); break;
                default: x = t, y = mod(t - c, n_); break;
            }
            if (ok(x, y)) e.push_back({x, y});
        }
        return e;
    }

    void set(const Edge& e, char v) {
        free_[0][static_cast<std::size_t>(e.x)] = v;
        free_[1][static_cast<std::size_t>(e.y)] = v;
        free_[2][static_cast<std::size_t>(mod(e.x + e.y, n_))] = v;
        free_[3][static_cast<std::size_t>(mod(e.x - e.y, n_))] = v;
    }

    bool solve() {
        if (static_cast<std::int64_t>(chosen_.size()) == need_) return true;
        if (++nodes_ > limit_) return false;
        std::vector<Edge> best;
        bool have = false;
        for (int p = 0; p < 4; ++p)
            for (std::int64_t c = 0; c < n_; ++c) {
                if (!free_[p][static_cast<std::size_t>(c)]) continue;
                auto o = options(static_cast<Part>(p), c);
                if (!have || o.size() < best.size()) best = std::move(o), have = true;
                if (best.empty()) return false;
            }
        std::shuffle(best.begin(), best.end(), rng_);
        for (const auto& e : best) {
            set(e, 0);
            chosen_.push_back(e);
            if (solve()) return true;
            chosen_.pop_back();
            set(e, 1);
        }
        return false;
    }
};

}  // namespace

std::optional<Placement> extend_classical(std::int64_t n, const WSet& w, const ExtendOptions& opt) {
    if (auto why = wset_violation(w); !why.empty() || w.n != n) throw invalid_argument("invalid W-set: " + why);
    if (!verify_tstar_lattice(n, w)) throw precondition_error("W-set fails the lattice check");
    std::set<Vertex> removed(w.removed.begin(), w.removed.end());
    TorusGraph g(n, Kind::queens_toroidal, removed);
    const auto fixed = w.fixed_queens();
    // a vertex with no edges rules out any perfect matching
    for (const auto& v : g.vertices())
        if (g.edges_through(v).empty()) return std::nullopt;
    const auto start = std::chrono::steady_clock::now();
    for (std::int64_t r = 0; r < opt.max_restarts; ++r) {
        std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
        if (el.count() > opt.timeout_seconds) break;
        const std::uint64_t rs = splitmix64(opt.seed + static_cast<std::uint64_t>(r));
        std::vector<Edge> m;
        std::set<Vertex> blocked = removed;
        if (opt.greedy_fraction > 0) {
            auto tr = run_greedy(g, rs, opt.greedy_fraction);
            if (!tr.completed) continue;
            m = tr.matching;
            for (const auto& e : m)
                for (const auto& v : vertices_of(n, e)) blocked.insert(v);
        }
        std::mt19937_64 rng(splitmix64(rs));
        if (!Completer(n, blocked, opt.dfs_node_limit, rng).run(m)) continue;

        Placement pl;
        pl.n = n;
        pl.fixed = fixed;
        pl.restarts = r + 1;
        pl.queens = fixed;
        for (const auto& e : m) pl.queens.push_back({e.x, e.y});
        std::sort(pl.queens.begin(), pl.queens.end());
        std::set<Square> fx(fixed.begin(), fixed.end());
        if (static_cast<std::int64_t>(pl.queens.size()) != n) throw verification_error("placement has the wrong size");
        if (!verify_placement(n, pl.queens, Mode::classical).empty())
            throw verification_error("placement has classical attacks");
        pl.toroidal_pairs = verify_placement(n, pl.queens, Mode::toroidal);
        if (pl.toroidal_pairs.size() != 6) throw verification_error("placement does not have exactly 6 toroidal attacks");
        for (auto [i, j] : pl.toroidal_pairs)
            if (!fx.count(pl.queens[static_cast<std::size_t>(i)]) || !fx.count(pl.queens[static_cast<std::size_t>(j)]))
                throw verification_error("toroidal attack outside the fixed queens");
        return pl;
    }
    return std::nullopt;
}

}  // namespace torq
