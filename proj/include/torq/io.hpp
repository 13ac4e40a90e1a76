#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "torq/board.hpp"
#include "torq/decomposition.hpp"
#include "torq/errors.hpp"
#include "torq/greedy.hpp"
#include "torq/lattice.hpp"
#include "torq/solvers.hpp"

namespace torq {

using json = nlohmann::json;

inline constexpr const char* schema_tag = "torq/1";

// rejected input; `path` points at the offending field, e.g. "/entries/3/coord"
class schema_error : public invalid_argument {
public:
    schema_error(const std::string& path, const std::string& what)
        : invalid_argument(path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

json to_json(const Vertex& v);
Vertex vertex_from_json(const json& j, const std::string& path = "");

json to_json(const SupportVector& v);
SupportVector support_vector_from_json(const json& j, const std::string& path = "");

json to_json(const SignedEdgeSet& phi);
SignedEdgeSet signed_edges_from_json(const json& j, const std::string& path = "");

json to_json(const Verdict& v);
json to_json(const ZeroSumConfig& c);
json to_json(const DecompositionResult& r);
json to_json(const MatchingPair& m);

json to_json(const WSet& w);
WSet wset_from_json(const json& j, const std::string& path = "");

json placement_json(std::int64_t n, Mode mode, const std::vector<Square>& queens);
json to_json(const Placement& p);
// n, mode and the queen list of a placement document
struct PlacementDoc {
    std::int64_t n = 0;
    Mode mode = Mode::toroidal;
    std::vector<Square> queens;
};
PlacementDoc placement_from_json(const json& j, const std::string& path = "");

// i, Q, p, n2p4, eq, dmin, dmax, np3, ed, parity_disparity
void write_trace_csv(std::ostream& os, const GreedyTrace& t, double b);
const char* trace_csv_header();

json parse_json(const std::string& text);

}  // namespace torq
