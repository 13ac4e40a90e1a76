#include "torq/lattice.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>

#include "torq/errors.hpp"

namespace torq {

using big = boost::multiprecision::cpp_int;

void SupportVector::add(const Vertex& v, std::int64_t k) {
    if (k == 0) return;
    auto it = w.find(v);
    if (it == w.end()) {
        w.emplace(v, k);
    } else if ((it->second += k) == 0) {
        w.erase(it);
    }
}

std::int64_t SupportVector::at(const Vertex& v) const {
    auto it = w.find(v);
    return it == w.end() ? 0 : it->second;
}

std::int64_t SupportVector::size() const {
    std::int64_t s = 0;
    for (const auto& [v, k] : w) s += k < 0 ? -k : k;
    return s;
}

std::vector<Vertex> SupportVector::support() const {
    std::vector<Vertex> out;
    for (const auto& [v, k] : w) out.push_back(v);
    return out;
}

std::vector<std::int64_t> SupportVector::part(Part p) const {
    std::vector<std::int64_t> out(static_cast<std::size_t>(n), 0);
    for (const auto& [v, k] : w)
        if (v.part == p) out[static_cast<std::size_t>(v.coord)] = k;
    return out;
}

SupportVector& SupportVector::operator+=(const SupportVector& o) {
    for (const auto& [v, k] : o.w) add(v, k);
    return *this;
}

SupportVector& SupportVector::operator-=(const SupportVector& o) {
    for (const auto& [v, k] : o.w) add(v, -k);
    return *this;
}

SupportVector SupportVector::operator-() const {
    SupportVector r(n, kind);
    for (const auto& [v, k] : w) r.w.emplace(v, -k);
    return r;
}

SupportVector operator+(SupportVector a, const SupportVector& b) { return a += b; }
SupportVector operator-(SupportVector a, const SupportVector& b) { return a -= b; }

SupportVector ones(const TorusGraph& g) {
    SupportVector v(g.n(), g.kind() == Kind::semiqueens_toroidal ? LatticeKind::semi : LatticeKind::queens);
    for (const auto& u : g.vertices()) v.add(u, 1);
    return v;
}

void SignedEdgeSet::add(const Edge& e, std::int64_t k) {
    if (k == 0) return;
    auto it = m.find(e);
    if (it == m.end()) {
        m.emplace(e, k);
    } else if ((it->second += k) == 0) {
        m.erase(it);
    }
}

void SignedEdgeSet::add(const SignedEdgeSet& o, std::int64_t k) {
    for (const auto& [e, c] : o.m) add(e, c * k);
}

std::int64_t SignedEdgeSet::size() const {
    std::int64_t s = 0;
    for (const auto& [e, k] : m) s += k < 0 ? -k : k;
    return s;
}

SignedEdgeSet SignedEdgeSet::operator-() const {
    SignedEdgeSet r(n);
    for (const auto& [e, k] : m) r.m.emplace(e, -k);
    return r;
}

SupportVector edge_shadow(std::int64_t n, const Edge& e, std::int64_t k) {
    SupportVector v(n);
    for (const auto& u : vertices_of(n, e)) v.add(u, k);
    return v;
}

SupportVector shadow(const SignedEdgeSet& phi, LatticeKind kind) {
    SupportVector v(phi.n, kind);
    for (const auto& [e, k] : phi.m) {
        auto vs = vertices_of(phi.n, e);
        int parts = kind == LatticeKind::semi ? 3 : 4;
        for (int i = 0; i < parts; ++i) v.add(vs[static_cast<std::size_t>(i)], k);
    }
    return v;
}

namespace {

struct Sums {
    big s[4], si[4], sq[4];
};

Sums sums_of(const SupportVector& v) {
    Sums r;
    for (const auto& [u, k] : v.w) {
        int p = static_cast<int>(u.part);
        big kb = k, c = u.coord;
        r.s[p] += kb;
        r.si[p] += kb * c;
        r.sq[p] += kb * c * c;
    }
    return r;
}

bool divides(const big& m, const big& x) { return x % m == 0; }

std::string str(const big& x) { return x.str(); }

Verdict fail(const std::string& cond, const std::string& detail) { return Verdict{false, cond, detail}; }

big odd_sum(const SupportVector& v, Part p) {
    big s = 0;
    for (const auto& [u, k] : v.w)
        if (u.part == p && u.coord % 2 == 1) s += k;
    return s;
}

}  // namespace

Verdict in_lattice_queens(const SupportVector& v) {
    const std::int64_t n = v.n;
    const bool odd = n % 2 == 1;
    Sums s = sums_of(v);
    const big N = n;
    if (!(s.s[0] == s.s[1] && s.s[1] == s.s[2] && s.s[2] == s.s[3]))
        return fail(odd ? "i" : "a", "part sums differ: X=" + str(s.s[0]) + " Y=" + str(s.s[1]) +
                                         " S=" + str(s.s[2]) + " D=" + str(s.s[3]));
    big lin1 = s.si[0] + s.si[1] - s.si[2];
    if (!divides(N, lin1)) return fail(odd ? "ii" : "b", "sum i(X)+i(Y)-i(S) = " + str(lin1) + " not 0 mod n");
    big lin2 = s.si[0] - s.si[1] - s.si[3];
    if (!divides(N, lin2)) return fail(odd ? "iii" : "c", "sum i(X)-i(Y)-i(D) = " + str(lin2) + " not 0 mod n");
    big q = s.sq[2] + s.sq[3] - 2 * s.sq[0] - 2 * s.sq[1];
    if (odd) {
        if (!divides(N, q)) return fail("iv", "quadratic combination " + str(q) + " not 0 mod n");
        return {};
    }
    if (!divides(2 * N, q)) return fail("d", "quadratic combination " + str(q) + " not 0 mod 2n");
    big os = odd_sum(v, Part::S), od = odd_sum(v, Part::D);
    if (os != od) return fail("e", "odd-coordinate weight differs: S=" + str(os) + " D=" + str(od));
    return {};
}

Verdict in_lattice_semiqueens(const SupportVector& v) {
    Sums s = sums_of(v);
    if (s.s[3] != 0) return fail("i", "weight on the X-Y part");
    if (!(s.s[0] == s.s[1] && s.s[1] == s.s[2]))
        return fail("i", "part sums differ: X=" + str(s.s[0]) + " Y=" + str(s.s[1]) + " S=" + str(s.s[2]));
    big lin = s.si[0] + s.si[1] - s.si[2];
    if (!divides(big(v.n), lin)) return fail("ii", "sum i(X)+i(Y)-i(S) = " + str(lin) + " not 0 mod n");
    return {};
}

Verdict in_sublattice_S(const SupportVector& v) {
    for (const auto& [u, k] : v.w)
        if (u.part != Part::S) return fail("support", "weight outside the S part");
    Sums s = sums_of(v);
    const big N = v.n;
    if (s.s[2] != 0) return fail("sum", "sum is " + str(s.s[2]));
    if (!divides(N, s.si[2])) return fail("linear", "sum i v_i = " + str(s.si[2]) + " not 0 mod n");
    if (v.n % 2 == 1) {
        if (!divides(N, s.sq[2])) return fail("quadratic", "sum i^2 v_i = " + str(s.sq[2]) + " not 0 mod n");
        return {};
    }
    if (!divides(2 * N, s.sq[2])) return fail("quadratic", "sum i^2 v_i = " + str(s.sq[2]) + " not 0 mod 2n");
    big os = odd_sum(v, Part::S);
    if (os != 0) return fail("parity", "odd-coordinate weight is " + str(os));
    return {};
}

const char* generator_name(Generator::Type t) {
    switch (t) {
    case Generator::Type::simple_matrix: return "simple-matrix";
    case Generator::Type::sq_gen: return "sq-gen";
    case Generator::Type::two_part_gen: return "two-part-gen";
    case Generator::Type::q_gen: return "q-gen";
    }
    return "?";
}

SupportVector expand(std::int64_t n, const Generator& g) {
    SupportVector v(n);
    const std::int64_t sg = g.sign;
    auto S = [&](std::int64_t c, std::int64_t k) { v.add({Part::S, mod(c, n)}, k * sg); };
    auto D = [&](std::int64_t c, std::int64_t k) { v.add({Part::D, mod(c, n)}, k * sg); };
    switch (g.type) {
    case Generator::Type::simple_matrix: {
        for (const auto& [e, k] : std::initializer_list<std::pair<Edge, int>>{
                 {{g.a, g.c}, 1}, {{g.b, g.d}, 1}, {{g.a, g.d}, -1}, {{g.b, g.c}, -1}})
            v += edge_shadow(n, {mod(e.x, n), mod(e.y, n)}, k * sg);
        break;
    }
    case Generator::Type::sq_gen:
        S(g.a, 1), S(g.b, -1), S(g.c, -1), S(g.b + g.c - g.a, 1);
        break;
    case Generator::Type::two_part_gen: {
        std::int64_t d = g.b + g.c - g.a, s = g.d;
        S(g.a, 1), S(g.b, -1), S(g.c, -1), S(d, 1);
        D(s - g.a, -1), D(s - g.b, 1), D(s - g.c, 1), D(s - d, -1);
        break;
    }
    case Generator::Type::q_gen: {
        std::int64_t a = g.a, b = g.b, c = g.c, s = g.d;
        S(a, 1), S(a + b, -1), S(a + c, -1), S(a + b + c, 1);
        S(s + a, -1), S(s + a + b, 1), S(s + a + c, 1), S(s + a + b + c, -1);
        break;
    }
    }
    return v;
}

namespace {

// x with 2x = t mod n, if any
bool half(std::int64_t n, std::int64_t t, std::int64_t& x) {
    t = mod(t, n);
    if (n % 2 == 1) {
        x = mod(t * ((n + 1) / 2) % n, n);
        return true;
    }
    if (t % 2) return false;
    x = t / 2;
    return true;
}

// simple matrix with S-pattern (+a, -(a+beta), -(a+gamma), +(a+beta+gamma)) and first row x1
void add_sq_matrix(std::int64_t n, SignedEdgeSet& out, std::int64_t a, std::int64_t beta, std::int64_t gamma,
                   std::int64_t x1, std::int64_t k) {
    std::int64_t y1 = a - x1;
    auto E = [&](std::int64_t x, std::int64_t y) { return Edge{mod(x, n), mod(y, n)}; };
    out.add(E(x1, y1), k);
    out.add(E(x1 + gamma, y1 + beta), k);
    out.add(E(x1, y1 + beta), -k);
    out.add(E(x1 + gamma, y1), -k);
}

}  // namespace

bool realizable(std::int64_t n, const Generator& g) {
    std::int64_t x;
    switch (g.type) {
    case Generator::Type::simple_matrix: return true;
    case Generator::Type::sq_gen: return false;
    case Generator::Type::two_part_gen: return half(n, g.d - (g.c - g.a), x);
    case Generator::Type::q_gen:
        if (n % 2 == 1) return true;
        return mod(g.b, 2) == 0 || mod(g.c, 2) == 0 || mod(g.d, 2) == 0;
    }
    return false;
}

SignedEdgeSet realize(std::int64_t n, const Generator& g) {
    SignedEdgeSet out(n);
    switch (g.type) {
    case Generator::Type::simple_matrix:
        out.add(Edge{mod(g.a, n), mod(g.c, n)}, g.sign);
        out.add(Edge{mod(g.b, n), mod(g.d, n)}, g.sign);
        out.add(Edge{mod(g.a, n), mod(g.d, n)}, -g.sign);
        out.add(Edge{mod(g.b, n), mod(g.c, n)}, -g.sign);
        return out;
    case Generator::Type::sq_gen:
        throw unsupported("an sq-gen is not in the queens lattice on its own");
    case Generator::Type::two_part_gen: {
        std::int64_t x1;
        if (!half(n, g.d - (g.c - g.a), x1)) throw unsupported("two-part generator shift has the wrong parity");
        add_sq_matrix(n, out, g.a, g.b - g.a, g.c - g.a, x1, g.sign);
        return out;
    }
    case Generator::Type::q_gen: {
        std::int64_t a = g.a, b = g.b, c = g.c, s = g.d;
        if (n % 2 == 0 && mod(s, 2) == 1) {
            // Qgen(a,b,c,s) = Qgen(a,s,c,b) = Qgen(a,s,b,c)
            if (mod(b, 2) == 0) std::swap(b, s);
            else if (mod(c, 2) == 0) std::swap(c, s), std::swap(b, c);
            else throw unsupported("q-gen with b, c, s all odd is not in the lattice for even n");
        }
        std::int64_t h;
        half(n, s, h);
        add_sq_matrix(n, out, a, b, c, 0, g.sign);
        add_sq_matrix(n, out, a + s, b, c, h, -g.sign);
        return out;
    }
    }
    return out;
}

std::vector<Generator> simple_matrix_decompose(const Matrix& A0) {
    Matrix A = A0;
    const std::size_t R = A.size(), C = R ? A[0].size() : 0;
    for (const auto& row : A) {
        if (row.size() != C) throw invalid_argument("ragged matrix");
    }
    for (std::size_t i = 0; i < R; ++i) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < C; ++j) s += A[i][j];
        if (s != 0) throw invalid_argument("row " + std::to_string(i) + " sum is nonzero");
    }
    for (std::size_t j = 0; j < C; ++j) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < R; ++i) s += A[i][j];
        if (s != 0) throw invalid_argument("column " + std::to_string(j) + " sum is nonzero");
    }
    std::vector<Generator> out;
    for (;;) {
        std::size_t a = R, c = C;
        for (std::size_t i = 0; i < R && a == R; ++i)
            for (std::size_t j = 0; j < C; ++j)
                if (A[i][j] > 0) {
                    a = i, c = j;
                    break;
                }
        if (a == R) break;
        std::size_t b = 0, d = 0;
        while (A[b][c] >= 0) ++b;
        while (A[a][d] >= 0) ++d;
        A[a][c] -= 1, A[b][d] -= 1, A[a][d] += 1, A[b][c] += 1;
        out.push_back({Generator::Type::simple_matrix, std::int64_t(a), std::int64_t(b), std::int64_t(c),
                       std::int64_t(d), 1});
    }
    return out;
}

namespace {

int sgn(std::int64_t x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

void apply_sq(std::int64_t n, std::vector<std::int64_t>& v, std::int64_t p, std::int64_t q1, std::int64_t q2,
              int sign) {
    auto at = [&](std::int64_t c) -> std::int64_t& { return v[static_cast<std::size_t>(mod(c, n))]; };
    at(p) -= sign;
    at(q1) += sign;
    at(q2) += sign;
    at(q1 + q2 - p) -= sign;
}

// a case-(ii) triple: a' and two distinct coordinates of the opposite sign, fourth point not a'
bool find_triple(std::int64_t n, const std::vector<std::int64_t>& v, std::int64_t& ap, std::int64_t& a,
                 std::int64_t& b) {
    std::vector<std::int64_t> pos, neg;
    for (std::int64_t i = 0; i < n; ++i) {
        if (v[static_cast<std::size_t>(i)] > 0) pos.push_back(i);
        if (v[static_cast<std::size_t>(i)] < 0) neg.push_back(i);
    }
    for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t w = v[static_cast<std::size_t>(i)];
        if (!w) continue;
        const auto& opp = w > 0 ? neg : pos;
        std::size_t lim = std::min<std::size_t>(opp.size(), 3);
        for (std::size_t j = 0; j < lim; ++j)
            for (std::size_t k = j + 1; k < lim; ++k)
                if (mod(opp[j] + opp[k] - 2 * i, n) != 0) {
                    ap = i, a = opp[j], b = opp[k];
                    return true;
                }
    }
    return false;
}

}  // namespace

std::vector<Generator> sq_decompose(std::int64_t n, std::vector<std::int64_t> v) {
    if (static_cast<std::int64_t>(v.size()) != n) throw invalid_argument("vector length must be n");
    big s = 0, si = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        s += v[static_cast<std::size_t>(i)];
        si += big(v[static_cast<std::size_t>(i)]) * i;
    }
    if (s != 0) throw precondition_error("sum is nonzero");
    if (si % n != 0) throw precondition_error("linear sum is nonzero mod n");
    std::vector<Generator> out;
    auto nonzero = [&] { return std::any_of(v.begin(), v.end(), [](std::int64_t x) { return x != 0; }); };
    while (nonzero()) {
        std::int64_t ap, a, b;
        if (find_triple(n, v, ap, a, b)) {
            int sg = sgn(v[static_cast<std::size_t>(ap)]);
            apply_sq(n, v, ap, a, b, sg);
            out.push_back({Generator::Type::sq_gen, ap, a, mod(b, n), 0, sg});
            continue;
        }
        // degenerate case: every triple closes up on itself; spend one generator on a fresh c
        ap = 0;
        while (v[static_cast<std::size_t>(ap)] == 0) ++ap;
        int sg = sgn(v[static_cast<std::size_t>(ap)]);
        a = 0;
        while (sgn(v[static_cast<std::size_t>(a)]) != -sg) ++a;
        bool done = false;
        for (std::int64_t c = 0; c < n && !done; ++c) {
            std::int64_t d = mod(a + c - ap, n);
            if (c == a || c == ap || d == a || d == ap || d == c) continue;
            if (v[static_cast<std::size_t>(c)] || v[static_cast<std::size_t>(d)]) continue;
            auto trial = v;
            apply_sq(n, trial, ap, a, c, sg);
            std::int64_t t1, t2, t3;
            bool clear = std::all_of(trial.begin(), trial.end(), [](std::int64_t x) { return x == 0; });
            if (!clear && !find_triple(n, trial, t1, t2, t3)) continue;
            v = std::move(trial);
            out.push_back({Generator::Type::sq_gen, ap, a, c, 0, sg});
            done = true;
        }
        if (!done) throw capacity_error("no fresh coordinate for the degenerate sq-gen step");
    }
    return out;
}

struct HnfOracle::Impl {
    std::int64_t n;
    LatticeKind kind;
    std::size_t dim;
    std::map<std::size_t, std::vector<big>> basis;

    std::size_t idx(const Vertex& v) const { return static_cast<std::size_t>(v.part) * n + v.coord; }

    void insert(std::vector<big> r) {
        for (;;) {
            std::size_t p = 0;
            while (p < dim && r[p] == 0) ++p;
            if (p == dim) return;
            auto it = basis.find(p);
            if (it == basis.end()) {
                if (r[p] < 0)
                    for (auto& x : r) x = -x;
                basis.emplace(p, std::move(r));
                return;
            }
            auto& b = it->second;
            // gcd step on the pivot column, keep the gcd row in the basis
            while (r[p] != 0) {
                big q = b[p] / r[p];
                for (std::size_t j = p; j < dim; ++j) b[j] -= q * r[j];
                std::swap(b, r);
            }
            if (b[p] < 0)
                for (auto& x : b) x = -x;
        }
    }
};

HnfOracle::HnfOracle(std::int64_t n, LatticeKind kind) : impl_(std::make_unique<Impl>()) {
    if (n < 1) throw invalid_argument("n must be positive");
    if (n > hnf_max_n) throw unsupported("HNF oracle limited to n <= " + std::to_string(hnf_max_n));
    impl_->n = n;
    impl_->kind = kind;
    impl_->dim = static_cast<std::size_t>((kind == LatticeKind::semi ? 3 : 4) * n);
    int parts = kind == LatticeKind::semi ? 3 : 4;
    for (std::int64_t x = 0; x < n; ++x)
        for (std::int64_t y = 0; y < n; ++y) {
            std::vector<big> r(impl_->dim, 0);
            auto vs = vertices_of(n, {x, y});
            for (int i = 0; i < parts; ++i) r[impl_->idx(vs[static_cast<std::size_t>(i)])] += 1;
            impl_->insert(std::move(r));
        }
}

HnfOracle::~HnfOracle() = default;
HnfOracle::HnfOracle(HnfOracle&&) noexcept = default;

std::int64_t HnfOracle::rank() const { return static_cast<std::int64_t>(impl_->basis.size()); }

bool HnfOracle::member(const SupportVector& v) const {
    if (v.n != impl_->n) throw invalid_argument("vector and oracle disagree on n");
    std::vector<big> r(impl_->dim, 0);
    for (const auto& [u, k] : v.w) {
        if (impl_->kind == LatticeKind::semi && u.part == Part::D) return false;
        r[impl_->idx(u)] = k;
    }
    for (const auto& [p, b] : impl_->basis) {
        if (r[p] == 0) continue;
        if (r[p] % b[p] != 0) return false;
        big q = r[p] / b[p];
        for (std::size_t j = p; j < impl_->dim; ++j) r[j] -= q * b[j];
    }
    return std::all_of(r.begin(), r.end(), [](const big& x) { return x == 0; });
}

bool hnf_oracle(std::int64_t n, LatticeKind kind, const SupportVector& v) {
    return HnfOracle(n, kind).member(v);
}

}  // namespace torq
