#include "torq/io.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace torq {

namespace {

const json& field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw schema_error(path.empty() ? "/" : path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw schema_error(path + "/" + key, "missing field");
    return *it;
}

std::int64_t get_int(const json& j, const char* key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_number_integer()) throw schema_error(path + "/" + key, "expected an integer");
    return v.get<std::int64_t>();
}

std::int64_t get_n(const json& j, const std::string& path) {
    std::int64_t n = get_int(j, "n", path);
    if (n < 1) throw schema_error(path + "/n", "must be a positive integer, got " + std::to_string(n));
    return n;
}

std::string get_str(const json& j, const char* key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_string()) throw schema_error(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

const json& get_array(const json& j, const char* key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_array()) throw schema_error(path + "/" + key, "expected an array");
    return v;
}

void check_schema(const json& j, const std::string& path) {
    if (j.is_object() && j.contains("schema") && j["schema"] != schema_tag)
        throw schema_error(path + "/schema", "unknown schema version");
}

std::pair<std::int64_t, std::int64_t> get_pair(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw schema_error(path, "expected [int, int]");
    return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

json edges_json(const std::vector<Edge>& es) {
    json a = json::array();
    for (const auto& e : es) a.push_back({e.x, e.y});
    return a;
}

}  // namespace

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw schema_error("/", std::string("malformed JSON: ") + e.what());
    }
}

json to_json(const Vertex& v) { return {{"part", part_name(v.part)}, {"coord", v.coord}}; }

Vertex vertex_from_json(const json& j, const std::string& path) {
    Vertex v;
    std::string p = get_str(j, "part", path);
    try {
        v.part = part_from_name(p);
    } catch (const std::exception&) {
        throw schema_error(path + "/part", "unknown part '" + p + "'");
    }
    v.coord = get_int(j, "coord", path);
    return v;
}

json to_json(const SupportVector& v) {
    json entries = json::array();
    for (const auto& [vx, w] : v.w) entries.push_back({{"part", part_name(vx.part)}, {"coord", vx.coord}, {"weight", w}});
    return {{"schema", schema_tag},
            {"n", v.n},
            {"kind", v.kind == LatticeKind::queens ? "queens" : "semi"},
            {"entries", entries}};
}

SupportVector support_vector_from_json(const json& j, const std::string& path) {
    check_schema(j, path);
    const std::int64_t n = get_n(j, path);
    LatticeKind kind = LatticeKind::queens;
    if (j.contains("kind")) {
        std::string k = get_str(j, "kind", path);
        if (k == "semi") kind = LatticeKind::semi;
        else if (k != "queens") throw schema_error(path + "/kind", "expected \"queens\" or \"semi\"");
    }
    SupportVector v(n, kind);
    const json& es = get_array(j, "entries", path);
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string p = path + "/entries/" + std::to_string(i);
        Vertex vx = vertex_from_json(es[i], p);
        if (vx.coord < 0 || vx.coord >= n) throw schema_error(p + "/coord", "outside 0..n-1");
        if (kind == LatticeKind::semi && vx.part == Part::D) throw schema_error(p + "/part", "semi vectors have no D part");
        v.add(vx, get_int(es[i], "weight", p));
    }
    return v;
}

json to_json(const SignedEdgeSet& phi) {
    json entries = json::array();
    for (const auto& [e, k] : phi.m) entries.push_back({{"x", e.x}, {"y", e.y}, {"mult", k}});
    return {{"schema", schema_tag}, {"n", phi.n}, {"entries", entries}};
}

SignedEdgeSet signed_edges_from_json(const json& j, const std::string& path) {
    check_schema(j, path);
    const std::int64_t n = get_n(j, path);
    SignedEdgeSet phi(n);
    const json& es = get_array(j, "entries", path);
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string p = path + "/entries/" + std::to_string(i);
        std::int64_t x = get_int(es[i], "x", p), y = get_int(es[i], "y", p);
        if (x < 0 || x >= n) throw schema_error(p + "/x", "outside 0..n-1");
        if (y < 0 || y >= n) throw schema_error(p + "/y", "outside 0..n-1");
        phi.add({x, y}, get_int(es[i], "mult", p));
    }
    return phi;
}

json to_json(const Verdict& v) {
    json j = {{"schema", schema_tag}, {"in_lattice", v.ok}};
    if (!v.ok) {
        j["condition"] = v.condition;
        j["detail"] = v.detail;
    }
    return j;
}

json to_json(const ZeroSumConfig& c) {
    json pos = json::array(), neg = json::array();
    for (const auto& e : c.positive) pos.push_back({e.x, e.y});
    for (const auto& e : c.negative) neg.push_back({e.x, e.y});
    return {{"schema", schema_tag}, {"n", c.n}, {"a", c.a}, {"b", c.b}, {"c", c.c}, {"s", c.s}, {"d", c.d},
            {"plus", pos}, {"minus", neg}, {"valid", c.valid}};
}

json to_json(const DecompositionResult& r) {
    json phases = json::array();
    for (const auto& p : r.phases)
        phases.push_back({{"name", p.name}, {"gadgets", p.gadgets}, {"edges_added", p.edges_added}});
    json j = {{"schema", schema_tag},
              {"target", to_json(r.target)},
              {"phi", to_json(r.phi)},
              {"phases", phases},
              {"size", r.size()}};
    if (r.edge_radius >= 0) j["edge_radius"] = r.edge_radius;
    return j;
}

json to_json(const MatchingPair& m) {
    return {{"schema", schema_tag}, {"plus", edges_json(m.plus)}, {"minus", edges_json(m.minus)}};
}

json to_json(const WSet& w) {
    json tuples = json::array();
    for (const auto& q : w.t)
        tuples.push_back({{"a", q.a}, {"b", q.b}, {"x", q.x}, {"y", q.y}, {"c", q.c}, {"d", q.d}, {"w", q.w}, {"z", q.z}});
    json removed = json::array();
    for (const auto& v : w.removed) removed.push_back(to_json(v));
    return {{"schema", schema_tag}, {"n", w.n}, {"case", wcase_name(w.wcase)}, {"tuples", tuples}, {"removed", removed}};
}

WSet wset_from_json(const json& j, const std::string& path) {
    check_schema(j, path);
    WSet w;
    w.n = get_n(j, path);
    std::string c = get_str(j, "case", path);
    if (c == "even-3div") w.wcase = WCase::even_3div;
    else if (c == "even-3ndiv") w.wcase = WCase::even_3ndiv;
    else if (c == "odd-3div") w.wcase = WCase::odd_3div;
    else throw schema_error(path + "/case", "unknown case '" + c + "'");
    const json& ts = get_array(j, "tuples", path);
    if (ts.size() != 3) throw schema_error(path + "/tuples", "expected 3 tuples");
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string p = path + "/tuples/" + std::to_string(i);
        auto& q = w.t[i];
        q = {get_int(ts[i], "a", p), get_int(ts[i], "b", p), get_int(ts[i], "x", p), get_int(ts[i], "y", p),
             get_int(ts[i], "c", p), get_int(ts[i], "d", p), get_int(ts[i], "w", p), get_int(ts[i], "z", p)};
    }
    w.removed = wset_vertices(w.n, w.wcase, w.t);
    if (j.contains("removed")) {
        const json& rs = get_array(j, "removed", path);
        std::vector<Vertex> got;
        for (std::size_t i = 0; i < rs.size(); ++i) got.push_back(vertex_from_json(rs[i], path + "/removed/" + std::to_string(i)));
        if (got != w.removed) throw schema_error(path + "/removed", "does not match the tuples");
    }
    return w;
}

json placement_json(std::int64_t n, Mode mode, const std::vector<Square>& queens) {
    json qs = json::array();
    for (const auto& q : queens) qs.push_back({q.row, q.col});
    return {{"schema", schema_tag}, {"n", n}, {"mode", mode == Mode::toroidal ? "toroidal" : "classical"}, {"queens", qs}};
}

json to_json(const Placement& p) {
    json j = placement_json(p.n, Mode::classical, p.queens);
    json fx = json::array(), pairs = json::array();
    for (const auto& q : p.fixed) fx.push_back({q.row, q.col});
    for (auto [a, b] : p.toroidal_pairs) pairs.push_back({a, b});
    j["fixed_queens"] = fx;
    j["toroidal_attack_pairs"] = pairs;
    j["restarts"] = p.restarts;
    return j;
}

PlacementDoc placement_from_json(const json& j, const std::string& path) {
    check_schema(j, path);
    PlacementDoc d;
    d.n = get_n(j, path);
    std::string m = j.contains("mode") ? get_str(j, "mode", path) : "toroidal";
    if (m == "toroidal") d.mode = Mode::toroidal;
    else if (m == "classical") d.mode = Mode::classical;
    else throw schema_error(path + "/mode", "expected \"toroidal\" or \"classical\"");
    const json& qs = get_array(j, "queens", path);
    for (std::size_t i = 0; i < qs.size(); ++i) {
        const std::string p = path + "/queens/" + std::to_string(i);
        auto [r, c] = get_pair(qs[i], p);
        if (r < 0 || r >= d.n || c < 0 || c >= d.n) throw schema_error(p, "square off the board");
        d.queens.push_back({r, c});
    }
    return d;
}

const char* trace_csv_header() { return "i,Q,p,n2p4,eq,dmin,dmax,np3,ed,parity_disparity"; }

void write_trace_csv(std::ostream& os, const GreedyTrace& t, double b) {
    Envelope env{b};
    const double n = static_cast<double>(t.n);
    os << trace_csv_header() << '\n';
    os << std::setprecision(10);
    for (const auto& s : t.steps) {
        const double p = s.p;
        os << s.i << ',' << s.Q << ',' << p << ',' << n * n * std::pow(p, 4) << ',';
        if (p > 0) os << env.eq(t.n, p);
        else os << "inf";
        os << ',' << s.dmin << ',' << s.dmax << ',' << n * std::pow(p, 3) << ',';
        if (p > 0) os << env.ed(t.n, p);
        else os << "inf";
        os << ',' << s.parity_disparity << '\n';
    }
}

}  // namespace torq
