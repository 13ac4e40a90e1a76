#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>

#include "torq/errors.hpp"
#include "torq/solvers.hpp"

using namespace torq;

namespace {

// permutation brute force; semi drops the difference diagonal
std::uint64_t brute(std::int64_t n, bool toroidal, bool semi) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::uint64_t count = 0;
    do {
        bool ok = true;
        for (std::int64_t i = 0; i < n && ok; ++i)
            for (std::int64_t j = i + 1; j < n && ok; ++j) {
                std::int64_t si = i + p[i], sj = j + p[j], di = i - p[i], dj = j - p[j];
                if (toroidal) si = mod(si, n), sj = mod(sj, n), di = mod(di, n), dj = mod(dj, n);
                if (si == sj || (!semi && di == dj)) ok = false;
            }
        count += ok;
    } while (std::next_permutation(p.begin(), p.end()));
    return count;
}

std::vector<Square> squares(const std::vector<int>& cols) {
    std::vector<Square> q;
    for (std::size_t r = 0; r < cols.size(); ++r) q.push_back({static_cast<std::int64_t>(r), cols[r]});
    return q;
}

}  // namespace

TEST_CASE("published and small counts") {
    CHECK(count_classical(8) == 92);
    CHECK(count_classical(1) == 1);
    CHECK(count_classical(2) == 0);
    CHECK(count_classical(3) == 0);
    CHECK(count_classical(4) == 2);
    CHECK(count_toroidal(5) == 10);
    CHECK(count_toroidal(7) == 28);
    for (std::int64_t n : {2, 3, 4, 6, 8, 9, 10, 12}) CHECK(count_toroidal(n) == 0);
    CHECK(count_semiqueens(4, Mode::toroidal) == 0);
    CHECK(count_semiqueens(3, Mode::toroidal) == 3);
    CHECK(count_semiqueens(1, Mode::toroidal) == 1);
    CHECK(count_semiqueens(1, Mode::classical) == 1);
}

TEST_CASE("counters agree with permutation brute force") {
    for (std::int64_t n = 1; n <= 8; ++n) {
        CHECK(count_classical(n) == brute(n, false, false));
        CHECK(count_toroidal(n) == brute(n, true, false));
        CHECK(count_semiqueens(n, Mode::toroidal) == brute(n, true, true));
        CHECK(count_semiqueens(n, Mode::classical) == brute(n, false, true));
    }
}

TEST_CASE("frozen counts up to the default bound") {
    const std::uint64_t Q[] = {1, 0, 0, 2, 10, 4, 40, 92, 352, 724, 2680, 14200, 73712};
    const std::uint64_t T[] = {1, 0, 0, 0, 10, 0, 28, 0, 0, 0, 88, 0, 4524};
    for (std::int64_t n = 1; n <= 13; ++n) {
        CHECK(count_classical(n) == Q[n - 1]);
        CHECK(count_toroidal(n) == T[n - 1]);
        CHECK((count_toroidal(n) > 0) == (n % 6 == 1 || n % 6 == 5));
    }
    CHECK(count_semiqueens(9, Mode::toroidal) == 2025);
    CHECK(count_semiqueens(8, Mode::toroidal) == 0);
}

TEST_CASE("exhaustive bound") {
    CHECK_THROWS_AS(count_classical(14), unsupported);
    CHECK_THROWS_AS(count_toroidal(0), invalid_argument);
    setenv("TORQ_MAX_EXHAUSTIVE", "14", 1);
    CHECK(exhaustive_bound(default_count_bound) == 14);
    CHECK_NOTHROW(count_toroidal(14));
    unsetenv("TORQ_MAX_EXHAUSTIVE");
    CHECK(exhaustive_bound(default_count_bound) == 13);
}

TEST_CASE("toroidal witnesses are classical and lattice-consistent") {
    for (std::int64_t n = 1; n <= 12; ++n) {
        auto ts = toroidal_solutions(n);
        CHECK(ts.size() == count_toroidal(n));
        auto cs = classical_solutions(n);
        std::sort(cs.begin(), cs.end());
        for (const auto& s : ts) {
            CHECK(std::binary_search(cs.begin(), cs.end(), s));
            CHECK(verify_placement(n, squares(s), Mode::toroidal).empty());
            SignedEdgeSet phi(n);
            for (std::int64_t r = 0; r < n; ++r) phi.add(Edge{r, s[r]}, 1);
            SupportVector sh = shadow(phi);
            CHECK(sh == ones(TorusGraph(n)));
            CHECK(in_lattice_queens(sh).ok);
        }
    }
}

TEST_CASE("maximum partial toroidal solutions") {
    CHECK(max_partial_toroidal(6) == 4);
    CHECK(max_partial_toroidal(8) == 6);
    CHECK(max_partial_toroidal(10) == 9);
    CHECK(max_partial_toroidal(5) == 5);
    for (std::int64_t n = 1; n <= 14; ++n) CHECK(max_partial_toroidal(n) == monsky_formula(n));
}

TEST_CASE("verify_placement") {
    CHECK(verify_placement(5, {{0, 0}, {1, 2}, {2, 4}, {3, 1}, {4, 3}}, Mode::classical).empty());
    auto pairs = verify_placement(4, {{0, 0}, {0, 2}}, Mode::classical);
    CHECK(pairs.size() == 1);
    CHECK_THROWS_AS(verify_placement(4, {{0, 0}, {0, 0}}, Mode::classical), invalid_argument);
}

TEST_CASE("W-set invariants") {
    for (std::int64_t n : {26, 27, 28, 30, 32, 33, 36, 40, 45, 60, 64, 99, 128}) {
        WSet w = build_wset(n);
        CHECK_MESSAGE(wset_violation(w).empty(), "n=" << n);
        CHECK(w.wcase == wcase_of(n));
        CHECK(w.removed.size() == 48);
        CHECK(std::set<Vertex>(w.removed.begin(), w.removed.end()).size() == 48);
        CHECK(w.fixed_queens().size() == 12);
        Verdict v = verify_tstar_lattice(n, w);
        CHECK_MESSAGE(v.ok, "n=" << n << " " << v.condition);
    }
    CHECK_THROWS_AS(build_wset(25), invalid_argument);
    CHECK_THROWS_AS(build_wset(129), unsupported);
}

TEST_CASE("W-set case congruences") {
    WSet w30 = build_wset(30);
    std::int64_t sigma = 0;
    for (const auto& q : w30.t) sigma += q.a + q.b + q.c - q.d;
    CHECK(30 % 12 == 6);
    CHECK((2 + 6 + 2 * sigma) % 12 == 0);

    WSet w27 = build_wset(27);
    sigma = 0;
    for (const auto& q : w27.t) sigma += q.a + q.b + q.c - q.d;
    CHECK((1 + 2 * sigma) % 3 == 0);

    // lexicographically first tuples, frozen
    CHECK(w27.t[0].a == 1);
    CHECK(w27.t[0].b == 2);
    CHECK(w27.t[0].x == 6);
    CHECK(w27.t[0].y == 24);
}

TEST_CASE("breaking the congruence breaks the lattice condition") {
    // redraw one tuple with the sum/difference shape intact until only the congruence fails
    std::mt19937_64 rng(1);
    for (std::int64_t n : {27, 30, 32}) {
        WSet base = build_wset(n);
        auto r = [&](std::int64_t lo, std::int64_t hi) { return lo + static_cast<std::int64_t>(rng() % (hi - lo + 1)); };
        bool found = false;
        for (int t = 0; t < 2000000 && !found; ++t) {
            WSet w = base;
            auto& q = w.t[rng() % 3];
            std::int64_t s = r(2, n / 2), d = r(1, n / 2);
            q.a = r(1, s - 1), q.b = s - q.a, q.x = r(s, n), q.y = s + n - q.x;
            q.d = r(1, n - d), q.c = q.d + d, q.w = r(1, d), q.z = q.w + n - d;
            w.removed = wset_vertices(n, w.wcase, w.t);
            if (wset_violation(w).rfind("congruence", 0) != 0) continue;
            found = true;
            Verdict v = verify_tstar_lattice(n, w);
            CHECK_FALSE(v.ok);
            CHECK_MESSAGE((v.condition == "iv" || v.condition == "d"), v.condition);
        }
        CHECK_MESSAGE(found, "n=" << n);
    }
}

TEST_CASE("extend_classical") {
    ExtendOptions opt;
    opt.timeout_seconds = 20;
    opt.seed = 1;
    WSet w = build_wset(40);
    auto p = extend_classical(40, w, opt);
    REQUIRE(p.has_value());
    CHECK(p->queens.size() == 40);
    CHECK(verify_placement(40, p->queens, Mode::classical).empty());
    auto tor = verify_placement(40, p->queens, Mode::toroidal);
    CHECK(tor.size() == 6);
    CHECK(p->toroidal_pairs.size() == 6);
    std::set<Square> fixed(p->fixed.begin(), p->fixed.end());
    for (auto [a, b] : tor) {
        CHECK(fixed.count(p->queens[a]));
        CHECK(fixed.count(p->queens[b]));
    }

    // T* for this n has an isolated vertex, so the search gives up at once
    ExtendOptions quick;
    quick.timeout_seconds = 2;
    CHECK_FALSE(extend_classical(28, build_wset(28), quick).has_value());
}
