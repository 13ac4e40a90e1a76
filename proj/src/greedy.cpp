#include "torq/greedy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <random>

#include "torq/errors.hpp"

namespace torq {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

// unbiased index in [0, m)
std::size_t below(std::mt19937_64& rng, std::size_t m) {
    const std::uint64_t lim = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % m;
    std::uint64_t r;
    do r = rng();
    while (r >= lim);
    return static_cast<std::size_t>(r % m);
}

class Process {
public:
    explicit Process(const TorusGraph& g) : g_(g), n_(g.n()) {
        edges_ = g.edges();
        const std::size_t slots = g.num_slots();
        inc_.assign(slots, {});
        alive_v_.assign(slots, 0);
        deg_.assign(slots, 0);
        ev_.reserve(edges_.size());
        for (std::size_t id = 0; id < edges_.size(); ++id) {
            std::array<std::int32_t, 4> vs{-1, -1, -1, -1};
            auto verts = g.edge_vertices(edges_[id]);
            for (std::size_t k = 0; k < verts.size(); ++k) {
                auto s = static_cast<std::int32_t>(g.index(verts[k]));
                vs[k] = s;
                inc_[static_cast<std::size_t>(s)].push_back(static_cast<std::int32_t>(id));
                ++deg_[static_cast<std::size_t>(s)];
            }
            ev_.push_back(vs);
        }
        pool_.resize(edges_.size());
        pos_.resize(edges_.size());
        for (std::size_t id = 0; id < edges_.size(); ++id) pool_[id] = static_cast<std::int32_t>(id), pos_[id] = static_cast<std::int32_t>(id);
        std::int64_t maxd = 0;
        for (const auto& v : g.vertices()) {
            auto s = g.index(v);
            alive_v_[s] = 1;
            ++nv_;
            maxd = std::max<std::int64_t>(maxd, deg_[s]);
        }
        hist_.assign(static_cast<std::size_t>(maxd) + 1, 0);
        for (const auto& v : g.vertices()) ++hist_[static_cast<std::size_t>(deg_[g.index(v)])];
        dmax_ = maxd;
        dmin_ = 0;
        while (dmin_ <= dmax_ && hist_[static_cast<std::size_t>(dmin_)] == 0) ++dmin_;
        if (nv_ == 0) dmin_ = dmax_ = 0;
        track_parity_ = g.kind() == Kind::queens_toroidal;
        if (track_parity_) {
            auto pc = parity_census(g);
            gap_ = pc.signed_gap();
        }
        vs_by_slot_.resize(slots);
        for (const auto& v : g.vertices()) vs_by_slot_[g.index(v)] = v;
    }

    std::int64_t Q() const { return static_cast<std::int64_t>(pool_.size()); }
    std::int64_t dmin() const { return nv_ ? dmin_ : 0; }
    std::int64_t dmax() const { return nv_ ? dmax_ : 0; }
    std::int64_t gap() const { return gap_; }
    std::int64_t num_vertices() const { return nv_; }

    Edge step(std::mt19937_64& rng) {
        const std::int32_t id = pool_[below(rng, pool_.size())];
        const auto vs = ev_[static_cast<std::size_t>(id)];
        for (auto s : vs) {
            if (s < 0) continue;
            auto su = static_cast<std::size_t>(s);
            alive_v_[su] = 0;
            --nv_;
            --hist_[static_cast<std::size_t>(deg_[su])];
            if (track_parity_) {
                const Vertex& v = vs_by_slot_[su];
                bool odd = mod(centered(n_, v.coord), 2) == 1;
                if (odd && v.part == Part::S) --gap_;
                if (odd && v.part == Part::D) ++gap_;
            }
        }
        for (auto s : vs) {
            if (s < 0) continue;
            for (auto f : inc_[static_cast<std::size_t>(s)]) {
                if (pos_[static_cast<std::size_t>(f)] < 0) continue;
                remove(f);
                for (auto w : ev_[static_cast<std::size_t>(f)]) {
                    if (w < 0) continue;
                    auto wu = static_cast<std::size_t>(w);
                    if (alive_v_[wu]) {
                        --hist_[static_cast<std::size_t>(deg_[wu])];
                        --deg_[wu];
                        ++hist_[static_cast<std::size_t>(deg_[wu])];
                        dmin_ = std::min<std::int64_t>(dmin_, deg_[wu]);
                    } else {
                        --deg_[wu];
                    }
                }
            }
        }
        while (dmax_ > 0 && hist_[static_cast<std::size_t>(dmax_)] == 0) --dmax_;
        while (dmin_ < dmax_ && hist_[static_cast<std::size_t>(dmin_)] == 0) ++dmin_;
        return edges_[static_cast<std::size_t>(id)];
    }

    // full recount, for the periodic self-check
    bool consistent() const {
        std::vector<std::int32_t> d(deg_.size(), 0);
        for (auto id : pool_)
            for (auto s : ev_[static_cast<std::size_t>(id)])
                if (s >= 0) ++d[static_cast<std::size_t>(s)];
        std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = 0;
        for (std::size_t s = 0; s < d.size(); ++s) {
            if (!alive_v_[s]) continue;
            if (d[s] != deg_[s]) return false;
            lo = std::min<std::int64_t>(lo, d[s]);
            hi = std::max<std::int64_t>(hi, d[s]);
        }
        return nv_ == 0 || (lo == dmin_ && hi == dmax_);
    }

private:
    const TorusGraph& g_;
    std::int64_t n_;
    std::vector<Edge> edges_;
    std::vector<std::array<std::int32_t, 4>> ev_;
    std::vector<std::vector<std::int32_t>> inc_;
    std::vector<std::int32_t> pool_, pos_;
    std::vector<char> alive_v_;
    std::vector<std::int32_t> deg_;
    std::vector<std::int64_t> hist_;
    std::vector<Vertex> vs_by_slot_;
    std::int64_t nv_ = 0, dmin_ = 0, dmax_ = 0, gap_ = 0;
    bool track_parity_ = false;

    void remove(std::int32_t f) {
        auto fu = static_cast<std::size_t>(f);
        auto p = static_cast<std::size_t>(pos_[fu]);
        std::int32_t last = pool_.back();
        pool_[p] = last;
        pos_[static_cast<std::size_t>(last)] = static_cast<std::int32_t>(p);
        pool_.pop_back();
        pos_[fu] = -1;
    }
};

}  // namespace

GreedyTrace run_greedy(const TorusGraph& g, std::uint64_t seed, double stop_fraction) {
    if (!(stop_fraction > 0.0 && stop_fraction <= 1.0)) throw invalid_argument("stop_fraction must lie in (0,1]");
    Process pr(g);
    GreedyTrace t;
    t.n = g.n();
    t.seed = seed;
    t.num_vertices = pr.num_vertices();
    if (t.num_vertices == 0) throw invalid_argument("graph has no vertices");
    const int parts = g.num_parts();
    t.parts = parts;
    const double full = static_cast<double>(t.num_vertices) / parts;
    t.target = static_cast<std::int64_t>(std::ceil(stop_fraction * full - 1e-9));
    std::mt19937_64 rng(splitmix64(seed));
    auto record = [&](std::int64_t i) {
        GreedyStep s;
        s.i = i;
        s.Q = pr.Q();
        s.dmin = pr.dmin();
        s.dmax = pr.dmax();
        s.parity_disparity = pr.gap();
        s.p = 1.0 - static_cast<double>(parts * i) / static_cast<double>(t.num_vertices);
        t.steps.push_back(s);
    };
    std::int64_t i = 0;
    record(0);
    while (i < t.target && pr.Q() > 0) {
        t.matching.push_back(pr.step(rng));
        ++i;
        record(i);
#ifndef NDEBUG
        if (i % 256 == 0 && !pr.consistent()) throw verification_error("greedy degree bookkeeping drifted");
#endif
    }
    t.completed = i == t.target;
    return t;
}

double Envelope::eq(std::int64_t n, double p) const {
    return 2.0 * (1.0 - 4.0 * std::log(p)) * b * static_cast<double>(n) * static_cast<double>(n);
}

double Envelope::ed(std::int64_t n, double p) const {
    return 2.0 * (1.0 - 4.0 * std::log(p)) * std::pow(b, 2.0 / 3.0) * static_cast<double>(n);
}

EnvelopeReport envelope_check(const GreedyTrace& t, double b) {
    Envelope env{b};
    EnvelopeReport r;
    const double n = static_cast<double>(t.n);
    std::int64_t inq = 0, ind = 0;
    for (const auto& s : t.steps) {
        bool okq = true, okd = true;
        if (s.p > 0) {
            double q = n * n * std::pow(s.p, 4), d = n * std::pow(s.p, 3);
            okq = std::abs(static_cast<double>(s.Q) - q) <= env.eq(t.n, s.p);
            double dev = std::max(std::abs(static_cast<double>(s.dmax) - d), std::abs(static_cast<double>(s.dmin) - d));
            okd = dev <= env.ed(t.n, s.p);
        }
        r.q_inside.push_back(okq);
        r.d_inside.push_back(okd);
        inq += okq;
        ind += okd;
        if (!okq && r.first_q_violation < 0) r.first_q_violation = s.i;
        if (!okd && r.first_d_violation < 0) r.first_d_violation = s.i;
    }
    if (!t.steps.empty()) {
        r.inside_fraction_q = static_cast<double>(inq) / static_cast<double>(t.steps.size());
        r.inside_fraction_d = static_cast<double>(ind) / static_cast<double>(t.steps.size());
    }
    return r;
}

CountEstimate count_estimate(const GreedyTrace& t) {
    CountEstimate c;
    if (t.steps.empty() || t.matching.empty()) return c;
    const double N = static_cast<double>(t.num_vertices) / t.parts;
    const std::size_t m = t.matching.size();
    for (std::size_t i = 0; i < m; ++i)
        c.log_value += std::log(static_cast<double>(t.steps[i].Q)) - std::log(N - static_cast<double>(i));
    c.normalized = c.log_value / static_cast<double>(t.n);
    return c;
}

KnuthEstimate knuth_count_estimator(const TorusGraph& g, std::int64_t trials, std::uint64_t seed) {
    if (trials < 1) throw invalid_argument("trials must be positive");
    KnuthEstimate k;
    k.trials = trials;
    const int parts = g.num_parts();
    // running log-sum-exp of the path products
    double lmax = -std::numeric_limits<double>::infinity(), acc = 0.0;
    for (std::int64_t t = 0; t < trials; ++t) {
        Process pr(g);
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(t))));
        const std::int64_t want = pr.num_vertices() / parts;
        double lp = 0.0;
        std::int64_t placed = 0;
        while (placed < want && pr.Q() > 0) {
            lp += std::log(static_cast<double>(pr.Q()));
            pr.step(rng);
            ++placed;
        }
        if (placed < want || pr.num_vertices() != 0) continue;
        ++k.successes;
        if (lp > lmax) {
            acc = acc * std::exp(lmax - lp) + 1.0;
            lmax = lp;
        } else {
            acc += std::exp(lp - lmax);
        }
    }
    if (k.successes == 0) {
        k.estimate = 0.0;
        k.log_estimate = -std::numeric_limits<double>::infinity();
        return k;
    }
    k.log_estimate = lmax + std::log(acc) - std::log(static_cast<double>(trials));
    k.estimate = std::exp(k.log_estimate);
    return k;
}

std::vector<std::int64_t> parity_track(const GreedyTrace& t) {
    if (t.n % 2 == 0) throw unsupported("parity tracking needs odd n");
    std::vector<std::int64_t> out;
    out.reserve(t.steps.size());
    for (const auto& s : t.steps) out.push_back(s.parity_disparity);
    return out;
}

}  // namespace torq
