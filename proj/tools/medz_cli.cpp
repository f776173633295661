// medz: partition functions over optimal Hamming medians, the #D3SAT
// modular-counting pipeline, parsimony scenario counting, and chain analysis.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "medz/gadget.hpp"
#include "medz/mcmc.hpp"
#include "medz/pipeline.hpp"
#include "medz/trees.hpp"

using json = nlohmann::json;
using namespace medz;

namespace {

std::string int_str(const BigInt& z) { return z.get_str(); }

std::string rat_str(const BigRat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file: " + path);
    return in;
}

StringMultiset load_strings(const std::string& path, const std::string& format,
                            int pairs) {
    auto in = open_input(path);
    if (format == "a") return load_format_a(in, pairs);
    if (format == "b") return load_format_b(in);
    throw InputError("format must be 'a' or 'b'");
}

WeightFunction load_weight(const std::string& spec) {
    if (spec == "factorial") return WeightFunction::make_factorial();
    if (spec == "identity") return WeightFunction::make_identity();
    auto in = open_input(spec);
    return load_weight_table(in);
}

CNF3 load_cnf(const std::string& path) {
    auto in = open_input(path);
    return parse_dimacs(in);
}

void emit(const json& doc, const std::string& out_path) {
    std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("cannot open output file: " + out_path);
        out << text;
    }
}

uint64_t effective_seed(uint64_t cli_seed) {
    if (const char* env = std::getenv("MEDZ_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InputError("MEDZ_SEED must be an unsigned integer");
        }
    }
    return cli_seed;
}

json mismatch_json(const TableMismatch& m) {
    return json{{"table", m.table},
                {"row", m.row},
                {"column", m.column},
                {"printed", m.printed},
                {"recomputed", m.recomputed}};
}

json multiset_json(const std::map<int, int>& ms) {
    json out = json::object();
    for (auto [off, mult] : ms) {
        std::string key = off == 0 ? "n" : (off > 0 ? "n+" : "n") +
                                               (off > 0 ? std::to_string(off)
                                                        : std::to_string(off));
        out[key] = mult;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"partition functions over optimal Hamming medians"};
    app.require_subcommand(1);

    std::string strings_path, format = "a", weight_spec = "factorial";
    std::string cnf_path, mode = "practical", kind, blueprint_out, out_path;
    std::string tree_path, labels_path, cut_spec;
    int pairs = 0, jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    long long max_ambiguous = kDefaultAmbiguousGuard, cap = 1 << 20;
    int max_vars = 12, list_limit = 64;
    unsigned long prime = 0;
    uint64_t steps = 1000, seed = 0, init_state = 0, max_states = 1 << 12;
    bool metropolis = false;

    auto add_strings_opts = [&](CLI::App* c) {
        c->add_option("--strings", strings_path, "string multiset file")->required();
        c->add_option("--format", format, "a (raw lines) or b (pairs +extras)");
        c->add_option("--pairs", pairs, "pair count for format a");
        c->add_option("--max-ambiguous", max_ambiguous, "ambiguous-coordinate guard");
    };
    auto add_common = [&](CLI::App* c) {
        c->add_option("--output", out_path, "write the JSON document here");
    };

    auto* z_cmd = app.add_subcommand("z", "partition function Z(B, w)");
    add_strings_opts(z_cmd);
    z_cmd->add_option("--weight", weight_spec, "factorial | identity | table file");
    z_cmd->add_option("--jobs", jobs, "worker threads");
    add_common(z_cmd);

    auto* medians_cmd = app.add_subcommand("medians", "optimal median set");
    add_strings_opts(medians_cmd);
    medians_cmd->add_option("--limit", list_limit, "max medians to list");
    add_common(medians_cmd);

    auto* count_cmd = app.add_subcommand("count-sat", "model count via the modular pipeline");
    count_cmd->add_option("--cnf", cnf_path, "DIMACS CNF file")->required();
    count_cmd->add_option("--mode", mode, "practical | theoretical");
    count_cmd->add_option("--jobs", jobs, "worker threads");
    count_cmd->add_option("--max-vars", max_vars, "guard on transformed variable count");
    add_common(count_cmd);

    auto* reduce_cmd = app.add_subcommand("reduce-d3", "rewrite to distinct-variable 3CNF");
    reduce_cmd->add_option("--cnf", cnf_path, "DIMACS CNF file")->required();
    add_common(reduce_cmd);

    auto* xor_cmd = app.add_subcommand("xor-augment", "append the XOR clause blocks");
    xor_cmd->add_option("--cnf", cnf_path, "DIMACS CNF file (must be D3)")->required();
    add_common(xor_cmd);

    auto* gadget_cmd = app.add_subcommand("build-gadget", "emit a string-gadget blueprint");
    gadget_cmd->add_option("--cnf", cnf_path, "DIMACS CNF file (must be D3)")->required();
    gadget_cmd->add_option("--kind", kind, "sharp | up | up2")->required();
    gadget_cmd->add_option("--prime", prime, "prime p (kind sharp only)");
    gadget_cmd->add_option("--blueprint-out", blueprint_out, "blueprint file to write")
        ->required();
    add_common(gadget_cmd);

    auto* tables_cmd = app.add_subcommand("verify-tables", "recompute the distance tables");
    add_common(tables_cmd);

    auto* tscore_cmd = app.add_subcommand("tree-score", "parsimony score and labeling count");
    tscore_cmd->add_option("--tree", tree_path, "parenthesized tree file")->required();
    tscore_cmd->add_option("--labels", labels_path, "name<TAB>bits leaf labels")->required();
    tscore_cmd->add_option("--pairs", pairs, "pair count of the label layout");
    tscore_cmd->add_option("--cap", cap, "labeling enumeration cap");
    add_common(tscore_cmd);

    auto* tcount_cmd = app.add_subcommand("tree-count", "scenario count over optimal labelings");
    tcount_cmd->add_option("--tree", tree_path, "parenthesized tree file")->required();
    tcount_cmd->add_option("--labels", labels_path, "name<TAB>bits leaf labels")->required();
    tcount_cmd->add_option("--pairs", pairs, "pair count of the label layout");
    tcount_cmd->add_option("--cap", cap, "labeling enumeration cap");
    tcount_cmd->add_option("--weight", weight_spec, "factorial | identity | table file");
    add_common(tcount_cmd);

    auto* sample_cmd = app.add_subcommand("sample", "run the median-sampling chain");
    add_strings_opts(sample_cmd);
    sample_cmd->add_option("--weight", weight_spec, "factorial | identity | table file");
    sample_cmd->add_flag("--metropolis", metropolis, "reweighted chain (default: primer)");
    sample_cmd->add_option("--steps", steps, "number of chain steps");
    sample_cmd->add_option("--seed", seed, "RNG seed (MEDZ_SEED overrides)");
    sample_cmd->add_option("--init", init_state, "initial ambiguous-bit pattern");
    add_common(sample_cmd);

    auto* diag_cmd = app.add_subcommand("diagnose", "exact chain diagnostics");
    add_strings_opts(diag_cmd);
    diag_cmd->add_option("--weight", weight_spec, "factorial | identity | table file");
    diag_cmd->add_flag("--metropolis", metropolis, "reweighted chain (default: primer)");
    diag_cmd->add_option("--max-states", max_states, "dense-matrix state guard");
    diag_cmd->add_option("--cut", cut_spec, "comma-separated states for a conductance cut");
    add_common(diag_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        json doc;
        if (z_cmd->parsed()) {
            auto B = load_strings(strings_path, format, pairs);
            auto w = load_weight(weight_spec);
            auto r = partition_function(B, w, jobs, max_ambiguous);
            doc = {{"subcommand", "z"},
                   {"Z", rat_str(r.Z)},
                   {"median_count", int_str(r.median_count)},
                   {"ambiguous_count", r.ambiguous_count},
                   {"min_total_distance", r.min_total_distance},
                   {"weight", w.name()}};
        } else if (medians_cmd->parsed()) {
            auto B = load_strings(strings_path, format, pairs);
            MedianSet ms = median_set(B);
            if (static_cast<long long>(ms.ambiguous.size()) > max_ambiguous)
                throw GuardError("medians: ambiguous count exceeds the guard");
            json listed = json::array();
            uint64_t total = 1ULL << ms.ambiguous.size();
            for (uint64_t i = 0; i < total && i < static_cast<uint64_t>(list_limit); ++i)
                listed.push_back(median_from_pattern(ms, i).to_string());
            doc = {{"subcommand", "medians"},
                   {"base", ms.base.to_string()},
                   {"ambiguous_coordinates", ms.ambiguous},
                   {"median_count", int_str(BigInt(1) << ms.ambiguous.size())},
                   {"min_total_distance", ms.min_total_distance},
                   {"medians", listed}};
        } else if (count_cmd->parsed()) {
            auto g = load_cnf(cnf_path);
            auto r = count_sat(g, mode, jobs, max_vars);
            json reports = json::array();
            for (const auto& rep : r.reports)
                reports.push_back({{"p", rep.p},
                                   {"q", rep.q},
                                   {"t", rep.t},
                                   {"T_mod_p", rep.T_mod_p},
                                   {"K_mod_p", rep.K_mod_p},
                                   {"gamma_mod_p", rep.gamma_mod_p}});
            doc = {{"subcommand", "count-sat"},
                   {"gamma", int_str(r.gamma)},
                   {"d3_gamma", int_str(r.d3_gamma)},
                   {"n", r.n},
                   {"k", r.k},
                   {"dropped_vars", r.dropped_vars},
                   {"mode", r.mode},
                   {"primes", reports}};
        } else if (reduce_cmd->parsed()) {
            auto g = load_cnf(cnf_path);
            auto r = to_d3cnf(g);
            doc = {{"subcommand", "reduce-d3"},
                   {"dimacs", to_dimacs(r.d3)},
                   {"n", r.d3.n},
                   {"k", r.d3.clauses.size()},
                   {"dropped_vars", r.dropped_vars},
                   {"count_multiplier_log2", r.dropped_vars}};
        } else if (xor_cmd->parsed()) {
            auto g = load_cnf(cnf_path);
            auto psi = xor_augment(g);
            doc = {{"subcommand", "xor-augment"},
                   {"dimacs", to_dimacs(psi)},
                   {"n", psi.n},
                   {"k", psi.clauses.size()}};
        } else if (gadget_cmd->parsed()) {
            auto g = load_cnf(cnf_path);
            json info;
            StringBlueprint bp;
            if (kind == "sharp") {
                if (prime == 0)
                    throw InputError("build-gadget: --prime is required for kind sharp");
                auto sg = build_sharp_gadget(g, prime);
                bp = sg.bp;
                info = {{"kind", "sharp"}, {"n", sg.n},    {"k", sg.k},
                        {"p", sg.p},       {"q", sg.q},    {"t", sg.t},
                        {"strings", sg.bp.total_strings()}};
            } else {
                auto tg = build_threshold_gadget(g, kind);
                info = {{"kind", tg.variant}, {"n", tg.n},
                        {"k", tg.k},          {"t", tg.t},
                        {"t_printed", tg.t_printed},
                        {"strings", tg.string_count}};
                bp = tg.bp;
            }
            std::ofstream bout(blueprint_out);
            if (!bout) throw InputError("cannot open blueprint file: " + blueprint_out);
            save_format_b(bout, bp);
            info["subcommand"] = "build-gadget";
            info["blueprint"] = blueprint_out;
            doc = info;
        } else if (tables_cmd->parsed()) {
            auto rep = verify_distance_tables();
            json mm = json::array();
            for (const auto& m : rep.mismatches) mm.push_back(mismatch_json(m));
            doc = {{"subcommand", "verify-tables"},
                   {"mismatches", mm},
                   {"table1_multisets_ok", rep.table1_multisets_ok},
                   {"table3_multisets_ok", rep.table3_multisets_ok},
                   {"extra_sums_ok", rep.extra_sums_ok},
                   {"only_the_two_flagged", rep.only_the_two_flagged},
                   {"satisfying_multiset_table1", multiset_json(satisfying_multiset_table1())},
                   {"nonsatisfying_multiset_table1",
                    multiset_json(nonsatisfying_multiset_table1())},
                   {"satisfying_multiset_table3", multiset_json(satisfying_multiset_table3())},
                   {"nonsatisfying_multiset_table3",
                    multiset_json(nonsatisfying_multiset_table3())}};
        } else if (tscore_cmd->parsed() || tcount_cmd->parsed()) {
            std::ifstream tin = open_input(tree_path);
            std::stringstream tbuf;
            tbuf << tin.rdbuf();
            Tree t = parse_tree(tbuf.str());
            auto lin = open_input(labels_path);
            auto sidecar = parse_label_sidecar(lin);
            std::vector<BitString> labels(t.nodes.size());
            Layout lay{};
            bool lay_set = false;
            for (int v : t.leaves()) {
                const auto& name = t.nodes[static_cast<size_t>(v)].name;
                auto it = sidecar.find(name);
                if (it == sidecar.end())
                    throw InputError("labels: missing leaf " + name);
                if (!lay_set) {
                    long long len = static_cast<long long>(it->second.size());
                    if (2LL * pairs > len)
                        throw InputError("labels: 2*pairs exceeds label length");
                    lay = Layout{pairs, len - 2LL * pairs};
                    lay_set = true;
                }
                labels[static_cast<size_t>(v)] = BitString::from_string(lay, it->second);
            }
            if (tscore_cmd->parsed()) {
                auto mpls = enumerate_mpl(t, labels, cap);
                doc = {{"subcommand", "tree-score"},
                       {"score", parsimony_score(t, mpls.front())},
                       {"mpl_count", mpls.size()},
                       {"tree", tree_to_string(t)}};
            } else {
                auto w = load_weight(weight_spec);
                BigRat Z = scenario_count_tree(t, labels, w, cap);
                doc = {{"subcommand", "tree-count"},
                       {"Z", rat_str(Z)},
                       {"weight", w.name()},
                       {"tree", tree_to_string(t)}};
            }
        } else if (sample_cmd->parsed()) {
            auto B = load_strings(strings_path, format, pairs);
            auto w = load_weight(weight_spec);
            ChainModel c = make_chain(B, metropolis, w);
            if (c.ambiguous_count() > max_ambiguous)
                throw GuardError("sample: ambiguous count exceeds the guard");
            if (c.state_count() > (1ULL << 20))
                throw GuardError("sample: state space exceeds 2^20");
            uint64_t s = effective_seed(seed);
            CounterRng rng(s);
            uint64_t state = init_state & (c.state_count() - 1);
            std::map<std::string, uint64_t> visits;
            visits[std::to_string(state)]++;
            for (uint64_t i = 0; i < steps; ++i) {
                state = chain_step(c, state, rng);
                visits[std::to_string(state)]++;
            }
            doc = {{"subcommand", "sample"},
                   {"chain", metropolis ? "metropolis" : "primer"},
                   {"seed", s},
                   {"steps", steps},
                   {"initial_state", init_state & (c.state_count() - 1)},
                   {"final_state", state},
                   {"ambiguous_count", c.ambiguous_count()},
                   {"visits", visits}};
        } else if (diag_cmd->parsed()) {
            auto B = load_strings(strings_path, format, pairs);
            auto w = load_weight(weight_spec);
            ChainModel c = make_chain(B, metropolis, w);
            auto d = chain_diagnostics(c, max_states);
            json pi = json::array();
            for (const auto& q : d.pi) pi.push_back(rat_str(q));
            doc = {{"subcommand", "diagnose"},
                   {"chain", metropolis ? "metropolis" : "primer"},
                   {"states", d.support.size()},
                   {"support", d.support},
                   {"pi", pi},
                   {"stationary_exact", d.stationary_exact},
                   {"balance_residual", rat_str(d.balance_residual)},
                   {"gap", d.spectral_gap}};
            if (!cut_spec.empty()) {
                std::vector<uint64_t> cut;
                std::stringstream cs(cut_spec);
                std::string tok;
                while (std::getline(cs, tok, ','))
                    if (!tok.empty()) cut.push_back(std::stoull(tok));
                BigRat phi = conductance_of_cut(c, cut, max_states);
                doc["conductance"] = {{"cut", cut},
                                      {"value", rat_str(phi)},
                                      {"bound", nullptr}};
            }
        }
        emit(doc, out_path);
        return 0;
    } catch (const GuardError& e) {
        std::cerr << json{{"error", e.what()}, {"type", "guard"}}.dump() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << json{{"error", e.what()}, {"type", "input"}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"type", "input"}}.dump() << "\n";
        return 2;
    }
}
