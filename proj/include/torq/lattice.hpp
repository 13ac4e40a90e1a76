#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "torq/board.hpp"

namespace torq {

enum class LatticeKind { queens, semi };

struct SupportVector {
    std::int64_t n = 0;
    LatticeKind kind = LatticeKind::queens;
    std::map<Vertex, std::int64_t> w;

    SupportVector() = default;
    explicit SupportVector(std::int64_t n_, LatticeKind k = LatticeKind::queens) : n(n_), kind(k) {}

    void add(const Vertex& v, std::int64_t k);
    std::int64_t at(const Vertex& v) const;
    std::int64_t size() const;
    bool zero() const { return w.empty(); }
    std::vector<Vertex> support() const;
    // dense weights of one part, indexed by residue
    std::vector<std::int64_t> part(Part p) const;

    SupportVector& operator+=(const SupportVector& o);
    SupportVector& operator-=(const SupportVector& o);
    SupportVector operator-() const;
    bool operator==(const SupportVector& o) const { return n == o.n && w == o.w; }
};

SupportVector operator+(SupportVector a, const SupportVector& b);
SupportVector operator-(SupportVector a, const SupportVector& b);
SupportVector ones(const TorusGraph& g);

struct SignedEdgeSet {
    std::int64_t n = 0;
    std::map<Edge, std::int64_t> m;

    SignedEdgeSet() = default;
    explicit SignedEdgeSet(std::int64_t n_) : n(n_) {}

    void add(const Edge& e, std::int64_t k);
    void add(const SignedEdgeSet& o, std::int64_t k = 1);
    std::int64_t size() const;
    bool empty() const { return m.empty(); }
    SignedEdgeSet operator-() const;
    bool operator==(const SignedEdgeSet& o) const { return n == o.n && m == o.m; }
};

SupportVector shadow(const SignedEdgeSet& phi, LatticeKind kind = LatticeKind::queens);
SupportVector edge_shadow(std::int64_t n, const Edge& e, std::int64_t k = 1);

struct Verdict {
    bool ok = true;
    std::string condition;  // first violated condition, empty when ok
    std::string detail;
    explicit operator bool() const { return ok; }
};

Verdict in_lattice_queens(const SupportVector& v);
Verdict in_lattice_semiqueens(const SupportVector& v);
Verdict in_sublattice_S(const SupportVector& v);

struct Generator {
    enum class Type { simple_matrix, sq_gen, two_part_gen, q_gen };
    Type type;
    // simple matrix: rows a,b and cols c,d; sq-gen: (a,b,c); two-part and q-gen: (a,b,c) and shift d
    std::int64_t a = 0, b = 0, c = 0, d = 0;
    int sign = 1;
};

const char* generator_name(Generator::Type t);

SupportVector expand(std::int64_t n, const Generator& g);
// signed edges with shadow == expand(g); throws unsupported when g is not in the lattice
SignedEdgeSet realize(std::int64_t n, const Generator& g);
bool realizable(std::int64_t n, const Generator& g);

using Matrix = std::vector<std::vector<std::int64_t>>;
std::vector<Generator> simple_matrix_decompose(const Matrix& A);

// (1,-1,-1,1) decomposition of a one-part vector with sum 0 and linear sum 0 mod n
std::vector<Generator> sq_decompose(std::int64_t n, std::vector<std::int64_t> v);

// exact integer-span membership via a Hermite-style echelon basis over big integers
class HnfOracle {
public:
    HnfOracle(std::int64_t n, LatticeKind kind);
    ~HnfOracle();
    HnfOracle(HnfOracle&&) noexcept;
    bool member(const SupportVector& v) const;
    std::int64_t rank() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

bool hnf_oracle(std::int64_t n, LatticeKind kind, const SupportVector& v);
constexpr std::int64_t hnf_max_n = 15;

}  // namespace torq
