#include <doctest.h>

#include <cmath>
#include <map>

#include "torq/errors.hpp"
#include "torq/greedy.hpp"

using namespace torq;

namespace {

void audit(const TorusGraph& g, const GreedyTrace& t) {
    REQUIRE(t.steps.size() == t.matching.size() + 1);
    for (std::size_t i = 0; i + 1 < t.steps.size(); ++i) {
        const auto& a = t.steps[i];
        const auto& b = t.steps[i + 1];
        CHECK(b.Q < a.Q);
        CHECK(b.Q >= a.Q - 4 * a.dmax);
        CHECK(b.Q <= a.Q - 1);
        CHECK(a.p == doctest::Approx(1.0 - 4.0 * static_cast<double>(i) / static_cast<double>(t.num_vertices)));
    }
    CHECK(verify_matching(g, t.matching, false).valid);
}

}  // namespace

TEST_CASE("first step on the full board") {
    for (std::int64_t n : {5, 8, 13}) {
        TorusGraph g(n);
        GreedyTrace t = run_greedy(g, 1, 0.5);
        CHECK(t.steps[0].Q == n * n);
        CHECK(t.steps[0].dmin == n);
        CHECK(t.steps[0].dmax == n);
        CHECK(t.steps[0].p == 1.0);
        CHECK(t.num_vertices == 4 * n);
    }
}

TEST_CASE("traces satisfy the audit inequalities") {
    TorusGraph g5(5);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        GreedyTrace t = run_greedy(g5, seed, 1.0);
        audit(g5, t);
        if (t.completed) CHECK(verify_matching(g5, t.matching, true).perfect);
    }
    TorusGraph g(101);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        GreedyTrace t = run_greedy(g, seed, 0.9);
        audit(g, t);
        CHECK(t.target == 91);
    }
}

TEST_CASE("determinism") {
    TorusGraph g(31);
    GreedyTrace a = run_greedy(g, 42), b = run_greedy(g, 42), c = run_greedy(g, 43);
    CHECK(a.matching == b.matching);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
        CHECK(a.steps[i].Q == b.steps[i].Q);
        CHECK(a.steps[i].dmin == b.steps[i].dmin);
        CHECK(a.steps[i].parity_disparity == b.steps[i].parity_disparity);
    }
    CHECK(a.matching != c.matching);
}

TEST_CASE("first edge is uniform on T(5)") {
    TorusGraph g(5);
    std::map<Edge, int> hits;
    const int N = 100000;
    for (int s = 0; s < N; ++s) ++hits[run_greedy(g, static_cast<std::uint64_t>(s), 0.2).matching.at(0)];
    CHECK(hits.size() == 25);
    double chi = 0, e = N / 25.0;
    for (const auto& [k, c] : hits) chi += (c - e) * (c - e) / e;
    // 24 degrees of freedom, p = 0.001 at 51.18
    CHECK(chi < 51.18);
}

TEST_CASE("envelope") {
    Envelope env{0.05};
    double prev = -1;
    for (double p = 1.0; p > 0.01; p -= 0.01) {
        CHECK(env.eq(101, p) >= prev);
        prev = env.eq(101, p);
        CHECK(env.ed(101, p) >= 0);
    }
    CHECK(env.eq(101, 1.0) == doctest::Approx(2 * 0.05 * 101 * 101));

    TorusGraph g(101);
    GreedyTrace t = run_greedy(g, 7);
    EnvelopeReport r = envelope_check(t, 0.05);
    CHECK(r.q_inside.at(0));
    CHECK(r.inside_fraction_q > 0.9);

    // inflate Q by 10% at one step; a tight b makes the envelope smaller than the bump
    GreedyTrace bad = t;
    bad.steps[20].Q = static_cast<std::int64_t>(static_cast<double>(bad.steps[20].Q) * 1.1);
    EnvelopeReport tight = envelope_check(bad, 0.001);
    CHECK_FALSE(tight.q_inside.at(20));
    EnvelopeReport tight_clean = envelope_check(t, 0.001);
    CHECK(tight_clean.q_inside.at(20));
}

TEST_CASE("count estimate") {
    GreedyTrace empty;
    CHECK(count_estimate(empty).log_value == 0.0);
    for (std::int64_t n : {11, 31}) {
        GreedyTrace one = run_greedy(TorusGraph(n), 3, 1.0 / static_cast<double>(n));
        REQUIRE(one.matching.size() == 1);
        CHECK(count_estimate(one).log_value == doctest::Approx(std::log(static_cast<double>(n))));
    }
}

TEST_CASE("knuth estimator") {
    CHECK(knuth_count_estimator(TorusGraph(1), 10).estimate == doctest::Approx(1.0));
    KnuthEstimate k5 = knuth_count_estimator(TorusGraph(5), 20000, 1);
    CHECK(k5.estimate == doctest::Approx(1200.0).epsilon(0.1));
    CHECK(knuth_count_estimator(TorusGraph(6), 2000).estimate == 0.0);
    CHECK_THROWS_AS(knuth_count_estimator(TorusGraph(5), 0), invalid_argument);
}

TEST_CASE("parity disparity follows the wrap classes") {
    for (std::int64_t n : {5, 13, 101}) {
        TorusGraph g(n);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            GreedyTrace t = run_greedy(g, seed);
            auto track = parity_track(t);
            REQUIRE(track.size() == t.steps.size());
            CHECK(track[0] == 0);
            std::int64_t want = 0;
            for (std::size_t i = 0; i < t.matching.size(); ++i) {
                const Edge& e = t.matching[i];
                bool s_odd = mod(centered(n, s_of(n, e)), 2) == 1;
                bool d_odd = mod(centered(n, d_of(n, e)), 2) == 1;
                if (s_odd && !d_odd) --want;
                if (!s_odd && d_odd) ++want;
                CHECK(track[i + 1] == want);
                // and against a fresh census of what is left
                std::set<Vertex> gone;
                for (std::size_t j = 0; j <= i; ++j)
                    for (const auto& v : vertices_of(n, t.matching[j])) gone.insert(v);
                if (i % 7 == 0) CHECK(parity_census(TorusGraph(n, Kind::queens_toroidal, gone)).signed_gap() == want);
            }
        }
    }
    CHECK_THROWS_AS(parity_track(run_greedy(TorusGraph(6), 0)), unsupported);
}
