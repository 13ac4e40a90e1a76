#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "torq/board.hpp"
#include "torq/decomposition.hpp"
#include "torq/errors.hpp"
#include "torq/greedy.hpp"
#include "torq/io.hpp"
#include "torq/lattice.hpp"
#include "torq/solvers.hpp"

using namespace torq;

namespace {

enum Exit { ok = 0, bad_input = 2, capacity = 3, verification = 4 };

struct timeout_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string out_path;

bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

void emit(const json& j) {
    if (out_path.empty()) {
        std::cout << j.dump() << '\n';
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw invalid_argument("cannot open " + out_path);
    f << j.dump(2) << '\n';
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw invalid_argument("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_json(ss.str());
}

void need_n(std::int64_t n) {
    if (n < 1) throw schema_error("--n", "must be a positive integer, got " + std::to_string(n));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"torq: toroidal and classical n-queens tools"};
    app.require_subcommand(1);
    bool timestamp_off = false;
    app.add_flag("--timestamp-off", timestamp_off, "accepted for compatibility; output carries no timestamps");

    std::int64_t n = 0;
    std::string mode = "toroidal";
    std::uint64_t seed = 0;
    std::int64_t seeds = 1;
    double b = 0.05, stop = 0.9, timeout = 60.0;
    std::string in_path;
    bool ones_flag = false, oracle = false, wset_only = false;
    std::int64_t radius = -1, region = -1;
    std::vector<std::int64_t> params;

    auto* count = app.add_subcommand("count", "exact solution counts");
    count->add_option("--n", n, "board side")->required();
    count->add_option("--mode", mode, "classical | toroidal | semi-toroidal | semi-classical");

    auto* lattice = app.add_subcommand("lattice", "lattice membership");
    auto* check = lattice->add_subcommand("check", "check a vector against the lattice conditions");
    lattice->require_subcommand(1);
    check->add_option("--n", n, "board side");
    check->add_flag("--ones", ones_flag, "use the all-ones vector of the board");
    check->add_option("--in", in_path, "SupportVector JSON file");
    check->add_option("--mode", mode, "queens | semi | sub (one-part sublattice)");
    check->add_flag("--oracle", oracle, "also run the Hermite normal form oracle");

    auto* decompose = app.add_subcommand("decompose", "write a lattice vector as a signed edge combination");
    decompose->add_option("--in", in_path, "SupportVector JSON file")->required();
    decompose->add_option("--radius", radius, "treat the input as a leave inside this radius");
    decompose->add_option("--region", region, "also turn phi into two matchings inside box(region)");

    auto* zsc = app.add_subcommand("zsc", "zero-sum configurations");
    zsc->add_option("--n", n, "board side")->required();
    zsc->add_option("--params", params, "a b c s")->expected(4);
    zsc->add_option("--seed", seed, "seed for random parameters");
    zsc->add_option("--seeds", seeds, "number of random configurations");

    auto* greedy = app.add_subcommand("greedy", "random greedy matching process");
    greedy->add_option("--n", n, "board side")->required();
    greedy->add_option("--mode", mode, "toroidal | semi-toroidal | classical");
    greedy->add_option("--seed", seed, "first seed");
    greedy->add_option("--seeds", seeds, "number of consecutive seeds");
    greedy->add_option("--b", b, "envelope constant");
    greedy->add_option("--stop", stop, "stop fraction in (0,1]");

    auto* extend = app.add_subcommand("extend", "classical placement with six toroidal attacks");
    extend->add_option("--n", n, "board side")->required();
    extend->add_option("--timeout", timeout, "wall-clock budget in seconds");
    extend->add_option("--seed", seed, "search seed");
    extend->add_flag("--wset-only", wset_only, "print the W-set and its lattice verdict");

    auto* monsky = app.add_subcommand("monsky", "largest partial toroidal solution");
    monsky->add_option("--n", n, "board side")->required();

    for (auto* sc : {count, check, decompose, zsc, greedy, extend, monsky})
        sc->add_option("--out", out_path, "write to a file (.json or .csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return bad_input;
    }

    try {
        if (*count) {
            need_n(n);
            std::uint64_t c;
            if (mode == "classical") c = count_classical(n);
            else if (mode == "toroidal") c = count_toroidal(n);
            else if (mode == "semi-toroidal") c = count_semiqueens(n, Mode::toroidal);
            else if (mode == "semi-classical") c = count_semiqueens(n, Mode::classical);
            else throw schema_error("--mode", "unknown mode '" + mode + "'");
            emit({{"schema", schema_tag}, {"n", n}, {"mode", mode}, {"count", c}});
        } else if (*check) {
            SupportVector v;
            if (ones_flag) {
                need_n(n);
                v = ones(TorusGraph(n, mode == "semi" ? Kind::semiqueens_toroidal : Kind::queens_toroidal));
                if (mode == "semi") v.kind = LatticeKind::semi;
            } else if (!in_path.empty()) {
                v = support_vector_from_json(read_json_file(in_path));
            } else {
                throw schema_error("--in", "give --ones or --in");
            }
            Verdict verdict;
            if (mode == "queens" || mode == "toroidal") verdict = in_lattice_queens(v);
            else if (mode == "semi") verdict = in_lattice_semiqueens(v);
            else if (mode == "sub") verdict = in_sublattice_S(v);
            else throw schema_error("--mode", "unknown mode '" + mode + "'");
            json j = to_json(verdict);
            j["n"] = v.n;
            if (oracle) {
                bool o = hnf_oracle(v.n, v.kind, v);
                j["oracle"] = o;
                if (mode != "sub" && o != verdict.ok) throw verification_error("closed form and oracle disagree");
            }
            emit(j);
        } else if (*decompose) {
            SupportVector v = support_vector_from_json(read_json_file(in_path));
            DecompositionResult r = radius >= 0 ? cover_leave(v, radius) : decompose_bounded(v);
            if (!(shadow(r.phi) == v)) throw verification_error("shadow of phi differs from the target");
            json j = to_json(r);
            if (region >= 0) {
                MatchingPair mp = to_matching_pair(r.phi, box(region));
                SignedEdgeSet d(v.n);
                for (const auto& e : mp.plus) d.add(e, 1);
                for (const auto& e : mp.minus) d.add(e, -1);
                if (!(shadow(d) == v)) throw verification_error("matching pair has the wrong shadow");
                j["pair"] = to_json(mp);
            }
            emit(j);
        } else if (*zsc) {
            need_n(n);
            auto one = [&](std::int64_t a, std::int64_t bb, std::int64_t c, std::int64_t s) {
                ZeroSumConfig cfg = make_config(n, a, bb, c, s);
                if (!shadow(cfg.signed_edges()).zero()) throw verification_error("configuration shadow is not zero");
                return to_json(cfg);
            };
            if (!params.empty()) {
                emit(one(params[0], params[1], params[2], params[3]));
            } else {
                if (seeds < 1) throw schema_error("--seeds", "must be positive");
                std::mt19937_64 rng(splitmix64(seed));
                std::uniform_int_distribution<std::int64_t> U(0, n - 1);
                json arr = json::array();
                for (std::int64_t k = 0; k < seeds; ++k) {
                    std::int64_t a = U(rng), bb = U(rng), c = U(rng), s = U(rng);
                    arr.push_back(one(a, bb, c, s));
                }
                emit(seeds == 1 ? arr[0] : json{{"schema", schema_tag}, {"n", n}, {"seed", seed}, {"configs", arr}});
            }
        } else if (*greedy) {
            need_n(n);
            if (seeds < 1) throw schema_error("--seeds", "must be positive");
            Kind kind = Kind::queens_toroidal;
            if (mode == "semi-toroidal") kind = Kind::semiqueens_toroidal;
            else if (mode == "classical") kind = Kind::queens_classical;
            else if (mode != "toroidal") throw schema_error("--mode", "unknown mode '" + mode + "'");
            TorusGraph g(n, kind);
            if (seeds == 1 && ends_with(out_path, ".csv")) {
                GreedyTrace t = run_greedy(g, seed, stop);
                std::ofstream f(out_path);
                if (!f) throw invalid_argument("cannot open " + out_path);
                write_trace_csv(f, t, b);
            } else {
                json runs = json::array(), seed_list = json::array();
                std::vector<double> fracs;
                double est = 0;
                for (std::int64_t k = 0; k < seeds; ++k) {
                    std::uint64_t s = seed + static_cast<std::uint64_t>(k);
                    GreedyTrace t = run_greedy(g, s, stop);
                    EnvelopeReport r = envelope_check(t, b);
                    CountEstimate c = count_estimate(t);
                    fracs.push_back(r.inside_fraction_q);
                    est += c.normalized;
                    seed_list.push_back(s);
                    runs.push_back({{"seed", s},
                                    {"completed", t.completed},
                                    {"steps", t.matching.size()},
                                    {"inside_fraction_q", r.inside_fraction_q},
                                    {"inside_fraction_d", r.inside_fraction_d},
                                    {"first_q_violation", r.first_q_violation},
                                    {"estimate_log", c.log_value},
                                    {"estimate_normalized", c.normalized}});
                }
                std::sort(fracs.begin(), fracs.end());
                const std::size_t m = fracs.size();
                double median = m % 2 ? fracs[m / 2] : 0.5 * (fracs[m / 2 - 1] + fracs[m / 2]);
                emit({{"schema", schema_tag},
                      {"n", n},
                      {"seeds", seed_list},
                      {"b", b},
                      {"stop_fraction", stop},
                      {"rng", "mt19937_64 seeded by splitmix64(seed)"},
                      {"summary", {{"inside_fraction_median", median}, {"estimate_mean_log", est / static_cast<double>(seeds)}}},
                      {"runs", runs}});
            }
        } else if (*extend) {
            need_n(n);
            WSet w = build_wset(n);
            Verdict v = verify_tstar_lattice(n, w);
            if (wset_only) {
                json j = to_json(w);
                j["lattice"] = to_json(v);
                emit(j);
            } else {
                if (!v) throw verification_error("W-set fails the lattice check: " + v.condition);
                ExtendOptions opt;
                opt.timeout_seconds = timeout;
                opt.seed = seed;
                auto p = extend_classical(n, w, opt);
                if (!p) throw timeout_error("no placement found within the budget");
                json j = to_json(*p);
                j["wset"] = to_json(w);
                emit(j);
            }
        } else if (*monsky) {
            need_n(n);
            emit({{"schema", schema_tag}, {"n", n}, {"max_partial", max_partial_toroidal(n)}, {"formula", monsky_formula(n)}});
        }
    } catch (const schema_error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return bad_input;
    } catch (const invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return bad_input;
    } catch (const precondition_error& e) {
        std::cerr << "rejected: " << e.what() << '\n';
        return bad_input;
    } catch (const unsupported& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return capacity;
    } catch (const capacity_error& e) {
        std::cerr << "capacity: " << e.what() << '\n';
        return capacity;
    } catch (const timeout_error& e) {
        std::cerr << "timeout: " << e.what() << '\n';
        return capacity;
    } catch (const verification_error& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return verification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return verification;
    }
    return ok;
}
