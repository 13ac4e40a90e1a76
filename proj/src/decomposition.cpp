#include "torq/decomposition.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>

#include "torq/errors.hpp"

namespace torq {

namespace {

std::int64_t iabs(std::int64_t x) { return x < 0 ? -x : x; }
int sgn(std::int64_t x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

// 0, 1, -1, 2, -2, ... restricted to the centered range
std::vector<std::int64_t> centered_scan(std::int64_t n) {
    std::vector<std::int64_t> out{0};
    for (std::int64_t k = 1; static_cast<std::int64_t>(out.size()) < n; ++k) {
        if (k <= centered_bound_hi(n)) out.push_back(k);
        if (-k >= centered_bound_lo(n)) out.push_back(-k);
    }
    return out;
}

std::vector<Edge> edges_through_vertex(std::int64_t n, const Vertex& v) {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t x = 0; x < n; ++x) {
        switch (v.part) {
        case Part::X: out.push_back({v.coord, x}); break;
        case Part::Y: out.push_back({x, v.coord}); break;
        case Part::S: out.push_back({x, mod(v.coord - x, n)}); break;
        case Part::D: out.push_back({x, mod(x - v.coord, n)}); break;
        }
    }
    return out;
}

void check_exact(const SignedEdgeSet& phi, const SupportVector& target, const char* who) {
    if (!(shadow(phi) == target)) throw verification_error(std::string(who) + ": shadow(phi) differs from target");
}

std::int64_t edge_radius_of(const SignedEdgeSet& phi) {
    std::int64_t r = 0;
    for (const auto& [e, k] : phi.m)
        for (const auto& v : vertices_of(phi.n, e)) r = std::max(r, iabs(centered(phi.n, v.coord)));
    return r;
}

// records one phase of a running decomposition
struct Tracker {
    DecompositionResult& res;
    PhaseRecord cur;
    std::int64_t before;
    Tracker(DecompositionResult& r, std::string name) : res(r), before(r.phi.size()) { cur.name = std::move(name); }
    void add(const SignedEdgeSet& edges, std::int64_t k) {
        res.phi.add(edges, k);
        cur.edges_added += edges.size() * iabs(k);
    }
    void add(const Edge& e, std::int64_t k) {
        res.phi.add(e, k);
        cur.edges_added += iabs(k);
    }
    void close() {
        cur.size_delta = res.phi.size() - before;
        res.phases.push_back(cur);
    }
};

}  // namespace

// ---- zero-sum configurations ----

ZeroSumConfig make_config(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t s) {
    if (n < 1) throw invalid_argument("n must be positive");
    ZeroSumConfig z;
    z.n = n;
    z.a = mod(a, n), z.b = mod(b, n), z.c = mod(c, n), z.s = mod(s, n);
    z.d = mod(b + c - a, n);
    auto E = [n](std::int64_t x, std::int64_t y) { return Edge{mod(x, n), mod(y, n)}; };
    a = z.a, b = z.b, c = z.c, s = z.s;
    std::int64_t d = z.d;
    z.positive = {E(a, b + s), E(b, d + s), E(c, a + s), E(d, c + s)};
    z.negative = {E(a, c + s), E(b, a + s), E(c, d + s), E(d, b + s)};
    std::set<Vertex> vs;
    for (const auto& e : z.positive)
        for (const auto& v : vertices_of(n, e)) vs.insert(v);
    z.valid = vs.size() == 16;
    return z;
}

std::vector<Vertex> ZeroSumConfig::vertices() const {
    std::set<Vertex> vs;
    for (const auto& e : positive)
        for (const auto& v : vertices_of(n, e)) vs.insert(v);
    for (const auto& e : negative)
        for (const auto& v : vertices_of(n, e)) vs.insert(v);
    return {vs.begin(), vs.end()};
}

SignedEdgeSet ZeroSumConfig::signed_edges(int sign) const {
    SignedEdgeSet p(n);
    for (const auto& e : positive) p.add(e, sign);
    for (const auto& e : negative) p.add(e, -sign);
    return p;
}

ZeroSumConfig config_through(std::int64_t n, const Edge& e1, const Edge& e2, Part p, std::int64_t f) {
    std::int64_t a = e1.x, b, c, s;
    switch (p) {
    case Part::X:
        s = f, b = e1.y - s, c = e2.y - s;
        break;
    case Part::Y: {
        std::int64_t d = e2.x;
        s = f, b = e1.y - s, c = d + a - b;
        break;
    }
    case Part::S:
        b = e2.x, s = e2.y - e1.x, c = f;
        break;
    case Part::D:
    default:
        c = e2.x, b = f, s = e1.y - b;
        break;
    }
    ZeroSumConfig z = make_config(n, a, b, c, s);
    bool ok1 = z.positive[0] == Edge{mod(e1.x, n), mod(e1.y, n)};
    bool ok2 = std::find(z.negative.begin(), z.negative.end(), Edge{mod(e2.x, n), mod(e2.y, n)}) != z.negative.end();
    if (!ok1 || !ok2) throw invalid_argument("edges do not share exactly the given part");
    return z;
}

// ---- push down ----

PushDown push_down(const SupportVector& u, std::int64_t t) {
    const std::int64_t n = u.n;
    if (t < 2 || t % 2) throw invalid_argument("push_down radius must be even and >= 2");
    if (t > t0(n)) throw invalid_argument("push_down radius exceeds t0(n)");
    Interval outer = square(t), inner = square(t / 2);
    for (const auto& [v, k] : u.w)
        if (!outer.contains(n, v)) throw precondition_error("support outside I'_t at " + std::string(part_name(v.part)) +
                                                            std::to_string(v.coord));

    PushDown out{SignedEdgeSet(n), u};
    auto E = [n](std::int64_t x, std::int64_t y) { return edge_from_centered(n, x, y); };
    for (const auto& [v, w] : u.w) {
        if (inner.contains(n, v)) continue;
        std::int64_t c = centered(n, v.coord);
        // c = 2a - i with i in {0, 1}
        std::int64_t a = c >= 0 ? (c + 1) / 2 : -((-c) / 2);
        std::int64_t i = 2 * a - c;
        switch (v.part) {
        case Part::S: out.phi.add(E(a, a - i), -w); break;
        case Part::D: out.phi.add(E(a, -a + i), -w); break;
        case Part::X:
            out.phi.add(E(c, 0), -w);
            out.phi.add(E(a, a - i), w);
            out.phi.add(E(a, -a + i), w);
            break;
        case Part::Y:
            out.phi.add(E(0, c), -w);
            out.phi.add(E(a, a - i), w);
            out.phi.add(E(-a + i, a), w);
            break;
        }
    }
    out.u += shadow(out.phi);
    for (const auto& [v, k] : out.u.w)
        if (!inner.contains(n, v)) throw verification_error("push_down left support outside I'_{t/2}");
    for (const auto& [e, k] : out.phi.m)
        for (const auto& v : vertices_of(n, e))
            if (!outer.contains(n, v)) throw verification_error("push_down used an edge outside I'_t");
    // a single X or Y unit turns into 7 units, so the factor is 7 rather than 6
    if (out.u.size() > 7 * u.size()) throw verification_error("push_down support growth above 7|u|");
    if (out.phi.size() > 3 * u.size()) throw verification_error("push_down used more than 3|u| edges");
    return out;
}

// ---- zero-summing S/D units ----

SignedEdgeSet zero_sum_support(const SupportVector& u, bool avoid_wrap) {
    const std::int64_t n = u.n;
    const bool by_parity = avoid_wrap || n % 2 == 0;
    const std::int64_t inv2 = n % 2 ? (n + 1) / 2 : 0;
    SignedEdgeSet phi(n);

    // units per class: [class][sign: 0 plus, 1 minus][part: 0 S, 1 D]
    std::vector<std::int64_t> units[2][2][2];
    for (const auto& [v, k] : u.w) {
        if (v.part != Part::S && v.part != Part::D) continue;
        int cls = by_parity ? static_cast<int>(mod(centered(n, v.coord), 2)) : 0;
        int sg = k > 0 ? 0 : 1;
        for (std::int64_t j = 0; j < iabs(k); ++j)
            units[cls][sg][v.part == Part::S ? 0 : 1].push_back(v.coord);
    }
    auto edge_sd = [&](std::int64_t s, std::int64_t d) {
        if (by_parity) {
            std::int64_t cs = centered(n, s), cd = centered(n, d);
            return edge_from_centered(n, (cs + cd) / 2, (cs - cd) / 2);
        }
        return Edge{mod((s + d) % n * inv2, n), mod(mod(s - d, n) * inv2, n)};
    };
    for (int cls = 0; cls < 2; ++cls) {
        auto& P = units[cls][0];
        auto& M = units[cls][1];
        std::int64_t ep = static_cast<std::int64_t>(P[0].size()) - static_cast<std::int64_t>(P[1].size());
        std::int64_t em = static_cast<std::int64_t>(M[0].size()) - static_cast<std::int64_t>(M[1].size());
        if (ep != em)
            throw precondition_error(std::string("parity balance fails on ") + (by_parity ? (cls ? "odd" : "even") : "all") +
                                     " units: S-D excess " + std::to_string(ep) + " (plus) vs " + std::to_string(em) +
                                     " (minus)");
        for (int sg = 0; sg < 2; ++sg) {
            auto& U = units[cls][sg];
            std::size_t k = std::min(U[0].size(), U[1].size());
            int sign = sg == 0 ? -1 : 1;
            for (std::size_t j = 0; j < k; ++j) phi.add(edge_sd(U[0][j], U[1][j]), sign);
            U[0].erase(U[0].begin(), U[0].begin() + static_cast<std::ptrdiff_t>(k));
            U[1].erase(U[1].begin(), U[1].begin() + static_cast<std::ptrdiff_t>(k));
        }
        // leftovers come in +/- pairs inside one part; route each pair through a dummy in the other part
        int part = P[0].empty() ? 1 : 0;
        std::int64_t dummy = by_parity ? cls : 0;
        for (std::size_t j = 0; j < P[part].size(); ++j) {
            std::int64_t up = P[part][j], um = M[part][j];
            if (part == 0) {
                phi.add(edge_sd(up, dummy), -1);
                phi.add(edge_sd(um, dummy), 1);
            } else {
                phi.add(edge_sd(dummy, up), -1);
                phi.add(edge_sd(dummy, um), 1);
            }
        }
    }
    SupportVector after = u + shadow(phi);
    for (const auto& [v, k] : after.w)
        if (v.part == Part::S || v.part == Part::D) throw verification_error("zero_sum_support left S/D weight");
    if (avoid_wrap)
        for (const auto& [e, k] : phi.m)
            if (wraps(n, e) != Wrap::none) throw verification_error("zero_sum_support used a wrap-around edge");
    return phi;
}

// ---- BIDC ----

namespace {

std::vector<std::int64_t> power_pieces(std::int64_t m, std::int64_t n) {
    std::vector<std::int64_t> out;
    std::int64_t cap = std::bit_floor(static_cast<std::uint64_t>(std::max<std::int64_t>(n / 2, 1)));
    while (m > 0) {
        std::int64_t p = std::min<std::int64_t>(cap, static_cast<std::int64_t>(std::bit_floor(static_cast<std::uint64_t>(m))));
        out.push_back(p);
        m -= p;
    }
    return out;
}

int log2i(std::int64_t p) { return std::countr_zero(static_cast<std::uint64_t>(p)); }

// coef * SQ(s; beta, gamma)
struct Term {
    std::int64_t coef, s, beta, gamma;
};

SupportVector sq_vec(std::int64_t n, std::int64_t s, std::int64_t b, std::int64_t c, std::int64_t k) {
    SupportVector v(n);
    v.add({Part::S, mod(s, n)}, k);
    v.add({Part::S, mod(s + b, n)}, -k);
    v.add({Part::S, mod(s + c, n)}, -k);
    v.add({Part::S, mod(s + b + c, n)}, k);
    return v;
}

class Bidc {
public:
    Bidc(const SupportVector& v, DecompositionResult& res) : n_(v.n), r_(v), res_(res) {}

    void run() {
        const std::int64_t n = n_;
        const std::int64_t tstar = log2i(std::bit_floor(static_cast<std::uint64_t>(n / 2))) + 1;
        std::vector<Term> terms;

        {
            Tracker tr(res_, "sq-decompose");
            for (const auto& g : sq_decompose(n, r_.part(Part::S)))
                terms.push_back({g.sign, g.a, mod(g.b - g.a, n), mod(g.c - g.a, n)});
            tr.cur.gadgets = static_cast<std::int64_t>(terms.size());
            tr.close();
            check(terms, {}, 0, "sq-decompose");
        }
        {
            Tracker tr(res_, "power-of-2");
            std::vector<Term> out;
            for (const auto& t : terms) {
                std::int64_t B = 0;
                for (auto pb : power_pieces(t.beta, n)) {
                    std::int64_t G = 0;
                    for (auto pg : power_pieces(t.gamma, n)) {
                        out.push_back({t.coef, mod(t.s + B + G, n), pb, pg});
                        G += pg;
                    }
                    B += pb;
                }
            }
            terms = std::move(out);
            tr.cur.gadgets = static_cast<std::int64_t>(terms.size());
            tr.close();
            check(terms, {}, 0, "power-of-2");
        }
        {
            Tracker tr(res_, "halve-to-step-1");
            std::vector<Term> out;
            for (auto t : terms) {
                std::int64_t lo = std::min(t.beta, t.gamma), hi = std::max(t.beta, t.gamma);
                while (lo > 1 && hi != 0) {
                    std::int64_t h = lo / 2;
                    apply(tr, qgen(t.s, h, hi, hi), t.coef);
                    apply(tr, qgen(t.s, h, hi, h), -t.coef);
                    lo = h;
                    hi = mod(2 * hi, n);
                }
                if (hi == 0) continue;
                out.push_back({t.coef, t.s, 1, hi});
            }
            terms = std::move(out);
            tr.close();
            check(terms, {}, 0, "halve-to-step-1");
        }
        std::vector<std::int64_t> c(static_cast<std::size_t>(tstar) + 1, 0);
        std::int64_t odd_bucket = 0;  // coefficient of SQ(1;1,1), even n only
        auto to_base = [&](Tracker& tr, std::int64_t coef, std::int64_t s, std::int64_t m) {
            std::int64_t M = 0;
            for (auto p : power_pieces(m, n)) {
                std::int64_t b = mod(s + M, n);
                M += p;
                if (p == 1 && n % 2 == 0) {
                    std::int64_t t = b % 2;
                    if (b != t) apply(tr, qgen(b, 1, 1, t - b), coef);
                    if (t == 0) c[0] += coef;
                    else odd_bucket += coef;
                    continue;
                }
                if (b != 0) apply(tr, qgen(b, 1, p, -b), coef);
                c[static_cast<std::size_t>(log2i(p))] += coef;
            }
        };
        {
            Tracker tr(res_, "base-0-shift");
            for (const auto& t : terms) to_base(tr, t.coef, t.s, t.gamma);
            if (n % 2 == 0) {
                if (odd_bucket != c[0]) throw verification_error("bidc: SQ(0;1,1) and SQ(1;1,1) counts differ");
                // SQ(0;1,1) + SQ(1;1,1) = SQ(0;1,2)
                c[1] += c[0];
                c[0] = 0;
                odd_bucket = 0;
            }
            tr.close();
            check({}, c, odd_bucket, "base-0-shift");
        }
        {
            Tracker tr(res_, "i2-zeroing");
            const Generator q0 = qgen(n - 2, 1, 2, 2);
            for (int guard = 0; guard < 64; ++guard) {
                std::int64_t sum = 0;
                for (std::size_t k = 0; k < c.size(); ++k) sum += c[k] * (std::int64_t(2) << k);
                if (sum % n) throw verification_error("bidc: quadratic sum not divisible by n after shifting");
                std::int64_t a = sum / n;
                if (a == 0) break;
                if (a % 2) throw verification_error("bidc: odd multiple of n in the quadratic sum");
                std::int64_t tau = -sgn(a), h = iabs(a) / 2;
                apply(tr, q0, tau * h);
                // r -= tau*h*Q0 adds tau*h*(SQ(0;1,2) + SQ(0;1,n-2))
                c[1] += tau * h;
                to_base(tr, tau * h, 0, n - 2);
                if (n % 2 == 0 && odd_bucket) throw verification_error("bidc: unexpected odd step in i2-zeroing");
            }
            tr.close();
            check({}, c, odd_bucket, "i2-zeroing");
        }
        {
            Tracker tr(res_, "binary-carry");
            for (std::int64_t i = 0; i + 1 < tstar; ++i) {
                std::int64_t ci = c[static_cast<std::size_t>(i)];
                std::int64_t k = ci >= 0 ? ci / 2 : -((-ci + 1) / 2);
                if (k == 0) continue;
                std::int64_t p = std::int64_t(1) << i;
                apply(tr, qgen(0, 1, p, p), k);
                c[static_cast<std::size_t>(i)] -= 2 * k;
                c[static_cast<std::size_t>(i) + 1] += k;
            }
            tr.close();
        }
        if (!r_.zero()) throw verification_error("bidc: residual not zero after binary carry");
    }

private:
    std::int64_t n_;
    SupportVector r_;
    DecompositionResult& res_;

    Generator qgen(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t s) const {
        return Generator{Generator::Type::q_gen, mod(a, n_), mod(b, n_), mod(c, n_), mod(s, n_), 1};
    }

    // phi += k * realize(q), r -= k * expand(q)
    void apply(Tracker& tr, const Generator& q, std::int64_t k) {
        if (k == 0) return;
        SupportVector ex = expand(n_, q);
        if (ex.zero()) return;
        SignedEdgeSet edges = realize(n_, q);
        tr.add(edges, k);
        for (const auto& [v, w] : ex.w) r_.add(v, -k * w);
        tr.cur.gadgets += iabs(k);
        res_.steps.push_back({q, k});
    }

    // the symbolic form must track the residual exactly
    void check(const std::vector<Term>& terms, const std::vector<std::int64_t>& c, std::int64_t odd_bucket,
               const char* phase) const {
        SupportVector sum(n_);
        for (const auto& t : terms) sum += sq_vec(n_, t.s, t.beta, t.gamma, t.coef);
        for (std::size_t k = 0; k < c.size(); ++k)
            if (c[k]) sum += sq_vec(n_, 0, 1, std::int64_t(1) << k, c[k]);
        if (odd_bucket) sum += sq_vec(n_, 1, 1, 1, odd_bucket);
        if (!(sum == r_)) throw verification_error(std::string("bidc: residual drifted in phase ") + phase);
    }
};

}  // namespace

std::int64_t bidc_bound(std::int64_t T, std::int64_t n) {
    // at most T sq-gens; (L+1)^2 pieces each; 3L+1 q-gens per piece through the shifts;
    // the i2 and carry phases are bounded by the coefficient mass T(L+1)^3 times (L+3); 8 edges per q-gen
    std::int64_t L = std::bit_width(static_cast<std::uint64_t>(n)) + 1;
    std::int64_t terms = T * (L + 1) * (L + 1);
    std::int64_t mass = terms * (L + 1);
    return 8 * (terms * (3 * L + 1) + mass * (L + 3));
}

DecompositionResult bidc_reduce(const SupportVector& v) {
    const std::int64_t n = v.n;
    if (n < 4) throw unsupported("bidc_reduce needs n >= 4");
    Verdict ok = in_sublattice_S(v);
    if (!ok) throw precondition_error("bidc_reduce: condition " + ok.condition + ": " + ok.detail);
    DecompositionResult res;
    res.target = v;
    res.phi = SignedEdgeSet(n);
    if (v.zero()) return res;
    Bidc(v, res).run();
    check_exact(res.phi, v, "bidc_reduce");
    return res;
}

// ---- bounded integral decomposition ----

DecompositionResult decompose_bounded(const SupportVector& S) {
    const std::int64_t n = S.n;
    if (S.kind != LatticeKind::queens) throw invalid_argument("decompose_bounded works on the queens lattice");
    Verdict ok = in_lattice_queens(S);
    if (!ok) throw precondition_error("not in L(T), condition (" + ok.condition + "): " + ok.detail);
    DecompositionResult res;
    res.target = S;
    res.phi = SignedEdgeSet(n);
    if (S.zero()) return res;
    if (n < 4) throw unsupported("decompose_bounded needs n >= 4");

    SupportVector r = S;  // r = S - shadow(phi)
    {
        Tracker tr(res, "edge-cover");
        for (const auto& [v, w0] : S.w) {
            const int sg = sgn(w0);
            for (std::int64_t j = 0; j < iabs(w0); ++j) {
                if (sgn(r.at(v)) != sg) break;
                Edge best{};
                std::int64_t best_gain = -5;
                for (const auto& e : edges_through_vertex(n, v)) {
                    std::int64_t gain = 0;
                    for (const auto& u : vertices_of(n, e)) {
                        std::int64_t x = r.at(u);
                        gain += iabs(x) - iabs(x - sg);
                    }
                    if (gain > best_gain) best_gain = gain, best = e;
                }
                tr.add(best, sg);
                for (const auto& u : vertices_of(n, best)) r.add(u, -sg);
                ++tr.cur.gadgets;
            }
        }
        tr.close();
    }
    {
        Tracker tr(res, "xy-eliminate");
        std::vector<std::int64_t> U[2][2];  // [part X/Y][plus/minus]
        for (const auto& [v, k] : r.w) {
            if (v.part != Part::X && v.part != Part::Y) continue;
            for (std::int64_t j = 0; j < iabs(k); ++j) U[v.part == Part::X ? 0 : 1][k > 0 ? 0 : 1].push_back(v.coord);
        }
        auto put = [&](const Edge& e, std::int64_t k) {
            tr.add(e, k);
            for (const auto& u : vertices_of(n, e)) r.add(u, -k);
            ++tr.cur.gadgets;
        };
        for (int sg = 0; sg < 2; ++sg) {
            std::int64_t sign = sg == 0 ? 1 : -1;
            std::size_t k = std::min(U[0][sg].size(), U[1][sg].size());
            for (std::size_t j = 0; j < k; ++j) put(Edge{U[0][sg][j], U[1][sg][j]}, sign);
            U[0][sg].erase(U[0][sg].begin(), U[0][sg].begin() + static_cast<std::ptrdiff_t>(k));
            U[1][sg].erase(U[1][sg].begin(), U[1][sg].begin() + static_cast<std::ptrdiff_t>(k));
        }
        for (int p = 0; p < 2; ++p) {
            if (U[p][0].size() != U[p][1].size()) throw verification_error("xy-eliminate: unbalanced leftovers");
            for (std::size_t j = 0; j < U[p][0].size(); ++j) {
                if (p == 0) {
                    put(Edge{U[0][0][j], 0}, 1);
                    put(Edge{U[0][1][j], 0}, -1);
                } else {
                    put(Edge{0, U[1][0][j]}, 1);
                    put(Edge{0, U[1][1][j]}, -1);
                }
            }
        }
        tr.close();
    }
    {
        Tracker tr(res, "d-part");
        for (const auto& g : sq_decompose(n, r.part(Part::D))) {
            // rows 0, q2-p; cols -p, -q1
            std::int64_t p = g.a, q1 = g.b, q2 = g.c;
            Generator m{Generator::Type::simple_matrix, 0, mod(q2 - p, n), mod(-p, n), mod(-q1, n), 1};
            SignedEdgeSet edges = realize(n, m);
            tr.add(edges, g.sign);
            SupportVector sh = shadow(edges);
            for (const auto& [v, k] : sh.w) r.add(v, -g.sign * k);
            res.steps.push_back({m, g.sign});
            ++tr.cur.gadgets;
        }
        tr.close();
    }
    for (const auto& [v, k] : r.w)
        if (v.part != Part::S) throw verification_error("decompose_bounded: residual outside S before bidc");
    DecompositionResult inner = bidc_reduce(r);
    res.phi.add(inner.phi);
    for (auto& ph : inner.phases) {
        ph.name = "bidc/" + ph.name;
        res.phases.push_back(ph);
    }
    // cancellation between the two parts of phi lands in the last phase, so the deltas still sum to |phi|
    std::int64_t total = 0;
    for (const auto& ph : res.phases) total += ph.size_delta;
    res.phases.back().size_delta += res.phi.size() - total;
    res.steps.insert(res.steps.end(), inner.steps.begin(), inner.steps.end());
    check_exact(res.phi, S, "decompose_bounded");
    return res;
}

// ---- covering a leave ----

DecompositionResult cover_leave(const SupportVector& L, std::int64_t radius) {
    const std::int64_t n = L.n;
    for (const auto& [v, k] : L.w)
        if (k != 1) throw precondition_error("qualifying leave: entries must be 0/1");
    if (radius < 1) throw invalid_argument("radius must be >= 1");
    Interval I = square(radius);
    for (const auto& [v, k] : L.w)
        if (!I.contains(n, v))
            throw precondition_error("qualifying leave condition 2: support outside I'_radius at " +
                                     std::string(part_name(v.part)) + std::to_string(v.coord));
    Verdict lv = in_lattice_queens(L);
    if (!lv) throw precondition_error("qualifying leave condition 1: not in L(T), (" + lv.condition + ") " + lv.detail);
    ParityCensus pc = parity_census(n, L.support());
    if (pc.disparity() != 0)
        throw precondition_error("qualifying leave condition 4: parity balance fails, |V_O^S| - |V_O^D| = " +
                                 std::to_string(pc.signed_gap()));

    DecompositionResult res;
    res.target = L;
    res.phi = SignedEdgeSet(n);
    if (L.zero()) {
        res.edge_radius = 0;
        return res;
    }
    std::int64_t t = radius + radius % 2;
    if (t > t0(n)) throw invalid_argument("radius too large for n");

    SupportVector r = L;  // r = L - shadow(phi)
    while (t >= 2) {
        Tracker tr(res, "push-down t=" + std::to_string(t));
        PushDown pd = push_down(r, t);
        tr.add(pd.phi, -1);
        tr.cur.gadgets = static_cast<std::int64_t>(pd.phi.m.size());
        r = pd.u;
        tr.close();
        t /= 2;
        if (t == 1) break;
        t += t % 2;
    }
    {
        Tracker tr(res, "zero-sum");
        SignedEdgeSet zs = zero_sum_support(r, true);
        tr.add(zs, -1);
        r += shadow(zs);
        tr.cur.gadgets = static_cast<std::int64_t>(zs.m.size());
        tr.close();
    }
    {
        Tracker tr(res, "finish");
        Interval core = square(1);
        for (const auto& [v, k] : r.w)
            if (!core.contains(n, v) || v.part == Part::S || v.part == Part::D)
                throw verification_error("cover_leave: residual not confined to X/Y in [-1,1]");
        auto at = [&](Part p, std::int64_t c) { return r.at({p, mod(c, n)}); };
        std::int64_t alpha = at(Part::X, 1);
        if (at(Part::X, -1) != alpha || at(Part::X, 0) != -2 * alpha)
            throw verification_error("cover_leave: X residual is not a multiple of (1,-2,1)");
        // G = -e(0,-1) - e(0,1) + e(-1,0) + e(1,0): X gets (1,-2,1), Y gets (-1,2,-1)
        SignedEdgeSet G(n);
        G.add(edge_from_centered(n, 0, -1), -1);
        G.add(edge_from_centered(n, 0, 1), -1);
        G.add(edge_from_centered(n, -1, 0), 1);
        G.add(edge_from_centered(n, 1, 0), 1);
        if (alpha) {
            tr.add(G, alpha);
            for (const auto& [v, k] : shadow(G).w) r.add(v, -alpha * k);
            tr.cur.gadgets = iabs(alpha);
        }
        if (!r.zero()) throw verification_error("cover_leave: residual on Y did not vanish");
        tr.close();
    }
    check_exact(res.phi, L, "cover_leave");
    res.edge_radius = edge_radius_of(res.phi);
    return res;
}

// ---- matching pair ----

namespace {

int part_rank(Part p) {
    switch (p) {
    case Part::D: return 0;
    case Part::S: return 1;
    case Part::Y: return 2;
    case Part::X: return 3;
    }
    return 4;
}

struct Unit {
    Edge e;
    int sign;
    bool alive;
};

}  // namespace

MatchingPair to_matching_pair(const SignedEdgeSet& phi, const Interval& region) {
    const std::int64_t n = phi.n;
    SupportVector target = shadow(phi);
    for (const auto& [v, k] : target.w)
        if (k < -1 || k > 1) throw precondition_error("to_matching_pair: shadow weight outside {-1,0,1}");

    // shrink phi first: subtract any configuration sharing at least five of its eight signed edges
    SignedEdgeSet work = phi;
    for (bool improved = true; improved;) {
        improved = false;
        std::vector<std::pair<Edge, std::int64_t>> es(work.m.begin(), work.m.end());
        for (const auto& [e1, k1] : es) {
            if (k1 <= 0 || improved) continue;
            auto v1 = vertices_of(n, e1);
            for (const auto& [e2, k2] : es) {
                if (k2 >= 0 || improved) continue;
                auto v2 = vertices_of(n, e2);
                for (int p = 0; p < 4 && !improved; ++p) {
                    if (v1[p] != v2[p]) continue;
                    for (std::int64_t f = 0; f < n; ++f) {
                        ZeroSumConfig z = config_through(n, e1, e2, static_cast<Part>(p), f);
                        auto zv = z.vertices();
                        if (!std::all_of(zv.begin(), zv.end(), [&](const Vertex& u) { return region.contains(n, u); }))
                            continue;
                        SignedEdgeSet next = work;
                        next.add(z.signed_edges(-1));
                        if (next.size() < work.size()) {
                            work = std::move(next);
                            improved = true;
                            break;
                        }
                    }
                }
            }
        }
    }

    std::vector<Unit> units;
    for (const auto& [e, k] : work.m)
        for (std::int64_t j = 0; j < iabs(k); ++j) units.push_back({e, sgn(k), true});

    // per vertex: plus count, minus count
    std::map<Vertex, std::pair<int, int>> cnt;
    auto touch = [&](const Edge& e, int sign, int delta) {
        for (const auto& v : vertices_of(n, e)) {
            auto& c = cnt[v];
            (sign > 0 ? c.first : c.second) += delta;
        }
    };
    for (const auto& u : units) touch(u.e, u.sign, 1);
    auto excess = [&](const Vertex& v) {
        auto it = cnt.find(v);
        if (it == cnt.end()) return 0;
        return std::max(0, it->second.first - 1) + std::max(0, it->second.second - 1);
    };
    auto covered = [&](const Vertex& v) {
        auto it = cnt.find(v);
        return it != cnt.end() && (it->second.first || it->second.second);
    };

    MatchingPair out;
    const auto scan = centered_scan(n);

    // alive units by (edge, sign), so that a new edge can cancel an existing opposite one
    std::map<std::pair<Edge, int>, std::vector<std::size_t>> live;
    for (std::size_t i = 0; i < units.size(); ++i) live[{units[i].e, units[i].sign}].push_back(i);
    auto kill = [&](std::size_t i) {
        units[i].alive = false;
        auto& l = live[{units[i].e, units[i].sign}];
        l.erase(std::find(l.begin(), l.end(), i));
    };

    // one replacement of the pair (units[ip], units[in]) meeting at v; false if no parameter is admissible.
    // fresh: the nine new vertices must be uncovered; otherwise any drop of the excess will do
    auto try_pair = [&](const Vertex& v, std::size_t ip, std::size_t in, bool fresh) {
        const Edge e1 = units[ip].e, e2 = units[in].e;
        auto v1 = vertices_of(n, e1), v2 = vertices_of(n, e2);
        std::set<Vertex> old(v1.begin(), v1.end());
        old.insert(v2.begin(), v2.end());
        for (std::int64_t f : scan) {
            ZeroSumConfig z = config_through(n, e1, e2, v.part, f);
            if (!z.valid) continue;
            auto zv = z.vertices();
            if (!std::all_of(zv.begin(), zv.end(), [&](const Vertex& u) { return region.contains(n, u); })) continue;
            if (fresh && !std::all_of(zv.begin(), zv.end(), [&](const Vertex& u) { return old.count(u) || !covered(u); }))
                continue;
            // the six new signed edges; each either cancels a live opposite unit or becomes a unit
            std::vector<std::pair<Edge, int>> fresh_edges;
            for (const auto& e : z.positive)
                if (e != e1) fresh_edges.push_back({e, -1});
            for (const auto& e : z.negative)
                if (e != e2) fresh_edges.push_back({e, 1});
            std::vector<std::size_t> cancel;
            std::vector<std::pair<Edge, int>> add;
            for (const auto& [e, sg] : fresh_edges) {
                auto it = live.find({e, -sg});
                std::size_t hit = SIZE_MAX;
                if (it != live.end())
                    for (std::size_t i : it->second)
                        if (i != ip && i != in && std::find(cancel.begin(), cancel.end(), i) == cancel.end()) {
                            hit = i;
                            break;
                        }
                if (hit != SIZE_MAX) cancel.push_back(hit);
                else add.push_back({e, sg});
            }
            auto apply = [&](int d) {
                touch(e1, 1, -d);
                touch(e2, -1, -d);
                for (std::size_t i : cancel) touch(units[i].e, units[i].sign, -d);
                for (const auto& [e, sg] : add) touch(e, sg, d);
            };
            // measure over the affected vertices, before and after
            std::int64_t before = 0, after = 0;
            for (const auto& u : zv) before += excess(u);
            apply(1);
            for (const auto& u : zv) after += excess(u);
            if (after >= before) {
                apply(-1);
                continue;
            }
            kill(ip), kill(in);
            for (std::size_t i : cancel) kill(i);
            for (const auto& [e, sg] : add) {
                live[{e, sg}].push_back(units.size());
                units.push_back({e, sg, true});
            }
            ++out.configs_applied;
            return true;
        }
        return false;
    };

    for (;;) {
        std::vector<std::pair<std::pair<int, std::int64_t>, Vertex>> bad;
        for (const auto& [v, c] : cnt)
            if (c.first >= 2 || c.second >= 2) bad.push_back({{part_rank(v.part), v.coord}, v});
        if (bad.empty()) break;
        std::sort(bad.begin(), bad.end());
        bool done = false;
        for (int pass = 0; pass < 2 && !done; ++pass)
        for (const auto& [key, v] : bad) {
            // one representative unit per distinct edge and sign
            std::vector<std::size_t> ps, ms;
            std::set<Edge> seen_p, seen_m;
            for (std::size_t i = 0; i < units.size(); ++i) {
                if (!units[i].alive) continue;
                auto vs = vertices_of(n, units[i].e);
                if (std::find(vs.begin(), vs.end(), v) == vs.end()) continue;
                if (units[i].sign > 0 && seen_p.insert(units[i].e).second) ps.push_back(i);
                if (units[i].sign < 0 && seen_m.insert(units[i].e).second) ms.push_back(i);
            }
            if (ps.empty() || ms.empty())
                throw precondition_error("to_matching_pair: vertex with same-sign edges and no opposite edge");
            for (std::size_t ip : ps) {
                for (std::size_t in : ms)
                    if ((done = try_pair(v, ip, in, pass == 0))) break;
                if (done) break;
            }
            if (done) break;
        }
        if (!done)
            throw capacity_error("to_matching_pair: no admissible configuration at " +
                                 std::string(part_name(bad.front().second.part)) +
                                 std::to_string(bad.front().second.coord));
    }

    for (const auto& u : units)
        if (u.alive) (u.sign > 0 ? out.plus : out.minus).push_back(u.e);
    std::sort(out.plus.begin(), out.plus.end());
    std::sort(out.minus.begin(), out.minus.end());
    TorusGraph full(n);
    if (!verify_matching(full, out.plus, false).valid || !verify_matching(full, out.minus, false).valid)
        throw verification_error("to_matching_pair: output sides are not matchings");
    SignedEdgeSet check(n);
    for (const auto& e : out.plus) check.add(e, 1);
    for (const auto& e : out.minus) check.add(e, -1);
    if (!(shadow(check) == target)) throw verification_error("to_matching_pair: shadow changed");
    return out;
}

// ---- cascades ----

Cascade build_cascade(const TorusGraph& g, const Edge& e, const std::array<Edge, 4>& T, const std::set<Vertex>& avoid) {
    const std::int64_t n = g.n();
    if (g.kind() != Kind::queens_toroidal) throw invalid_argument("cascades live on the toroidal queens graph");
    const auto ev = vertices_of(n, e);
    std::set<Vertex> blocked(avoid.begin(), avoid.end());
    blocked.insert(g.removed().begin(), g.removed().end());
    std::set<Vertex> seed_vs(ev.begin(), ev.end());
    for (int i = 0; i < 4; ++i) {
        auto tv = vertices_of(n, T[static_cast<std::size_t>(i)]);
        for (int j = 0; j < 4; ++j) {
            bool shared = tv[static_cast<std::size_t>(j)] == ev[static_cast<std::size_t>(j)];
            if (shared != (j == i)) throw invalid_argument("seed: T_i must meet e exactly in its part-i vertex");
        }
        for (int k = 0; k < i; ++k) {
            auto kv = vertices_of(n, T[static_cast<std::size_t>(k)]);
            for (int j = 0; j < 4; ++j)
                if (kv[static_cast<std::size_t>(j)] == tv[static_cast<std::size_t>(j)])
                    throw invalid_argument("seed: the T_i must be pairwise disjoint");
        }
        seed_vs.insert(tv.begin(), tv.end());
    }
    for (const auto& v : seed_vs)
        if (blocked.count(v)) throw precondition_error("seed vertex is blocked");

    const auto scan = centered_scan(n);
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    for (auto b : scan)
        for (auto c : scan) pairs.emplace_back(b, c);
    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& p, const auto& q) {
        return std::max(iabs(p.first), iabs(p.second)) < std::max(iabs(q.first), iabs(q.second));
    });

    for (const auto& [b, c] : pairs) {
        // e = (a, b+s) is P1 of the outer configuration
        ZeroSumConfig outer = make_config(n, e.x, b, c, e.y - b);
        if (!outer.valid) continue;
        std::set<Vertex> used = blocked;
        used.insert(seed_vs.begin(), seed_vs.end());
        bool ok = true;
        for (const auto& v : outer.vertices()) {
            if (std::find(ev.begin(), ev.end(), v) != ev.end()) continue;
            if (used.count(v)) ok = false;
        }
        if (!ok) continue;
        for (const auto& v : outer.vertices()) used.insert(v);

        Cascade cas;
        cas.e = e;
        cas.T = T;
        cas.outer = outer;
        for (int i = 0; i < 4 && ok; ++i) {
            const Vertex ei = ev[static_cast<std::size_t>(i)];
            Edge Si{};
            for (const auto& m : outer.negative) {
                auto mv = vertices_of(n, m);
                if (mv[static_cast<std::size_t>(i)] == ei) Si = m;
            }
            const Edge& Ti = T[static_cast<std::size_t>(i)];
            auto sv = vertices_of(n, Si), tv = vertices_of(n, Ti);
            bool found = false;
            for (std::int64_t f : scan) {
                ZeroSumConfig z = config_through(n, Si, Ti, ei.part, f);
                if (!z.valid) continue;
                bool fresh = true;
                for (const auto& v : z.vertices()) {
                    if (std::find(sv.begin(), sv.end(), v) != sv.end()) continue;
                    if (std::find(tv.begin(), tv.end(), v) != tv.end()) continue;
                    if (used.count(v)) fresh = false;
                }
                if (!fresh) continue;
                for (const auto& v : z.vertices()) used.insert(v);
                cas.inner[static_cast<std::size_t>(i)] = z;
                found = true;
                break;
            }
            if (!found) ok = false;
        }
        if (!ok) continue;

        for (const auto& m : outer.positive) cas.through_e.push_back(m);
        for (const auto& z : cas.inner) {
            for (const auto& m : z.positive)
                if (m != z.positive[0]) cas.through_e.push_back(m);
            for (const auto& m : z.negative) cas.through_T.push_back(m);
        }
        for (const auto& v : outer.vertices()) cas.vertices.insert(v);
        for (const auto& z : cas.inner)
            for (const auto& v : z.vertices()) cas.vertices.insert(v);
        if (cas.vertices.size() != 64) throw verification_error("cascade does not have 64 vertices");

        std::set<Vertex> rest;
        for (const auto& v : TorusGraph(n).vertices())
            if (!cas.vertices.count(v)) rest.insert(v);
        TorusGraph sub(n, Kind::queens_toroidal, rest);
        auto ra = verify_matching(sub, cas.through_e, true), rb = verify_matching(sub, cas.through_T, true);
        if (!ra.perfect || !rb.perfect) throw verification_error("cascade matchings are not perfect: " + ra.message + rb.message);
        if (std::find(cas.through_e.begin(), cas.through_e.end(), e) == cas.through_e.end())
            throw verification_error("cascade: e missing from its matching");
        for (const auto& t : T)
            if (std::find(cas.through_T.begin(), cas.through_T.end(), t) == cas.through_T.end())
                throw verification_error("cascade: T_i missing from its matching");
        return cas;
    }
    throw capacity_error("build_cascade: free parameters exhausted");
}

}  // namespace torq
