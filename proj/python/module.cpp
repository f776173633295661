// Python bindings for the main library operations. Big integers and exact
// rationals cross the boundary as decimal strings so nothing is rounded.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "medz/mcmc.hpp"
#include "medz/pipeline.hpp"
#include "medz/trees.hpp"

namespace py = pybind11;
using namespace medz;

namespace {

std::string rat_str(const BigRat& q) {
    BigRat c = q;
    c.canonicalize();
    return c.get_str();
}

StringMultiset multiset_from(const std::vector<std::string>& lines, int pairs) {
    std::string joined;
    for (const auto& l : lines) joined += l + "\n";
    std::istringstream in(joined);
    return load_format_a(in, pairs);
}

WeightFunction weight_from(const std::string& name) {
    if (name == "factorial") return WeightFunction::make_factorial();
    if (name == "identity") return WeightFunction::make_identity();
    throw InputError("unknown weight: " + name + " (use factorial or identity)");
}

CNF3 cnf_from(const std::string& dimacs) {
    std::istringstream in(dimacs);
    return parse_dimacs(in);
}

std::pair<Tree, std::vector<BitString>> tree_from(
    const std::string& text, const std::map<std::string, std::string>& labels,
    int pairs) {
    Tree t = parse_tree(text);
    Layout lay{};
    std::vector<BitString> out;
    bool first = true;
    for (int v : t.leaves()) {
        const auto& name = t.nodes[static_cast<size_t>(v)].name;
        auto it = labels.find(name);
        if (it == labels.end()) throw InputError("no label for leaf " + name);
        if (first) {
            lay = Layout{pairs,
                         static_cast<long long>(it->second.size()) - 2LL * pairs};
            out.assign(t.nodes.size(), BitString(lay));
            first = false;
        }
        out[static_cast<size_t>(v)] = BitString::from_string(lay, it->second);
    }
    return {t, out};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Partition functions over optimal Hamming medians, the modular model "
        "counter, parsimony scenario counting, and median-sampler diagnostics.";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<GuardError>(m, "GuardError", PyExc_RuntimeError);

    m.def(
        "hamming",
        [](const std::string& a, const std::string& b, int pairs) {
            Layout lay{pairs, static_cast<long long>(a.size()) - 2LL * pairs};
            return hamming(BitString::from_string(lay, a),
                           BitString::from_string(lay, b));
        },
        py::arg("a"), py::arg("b"), py::arg("pairs") = 0,
        "Hamming distance between two equal-length 0/1 strings.");

    m.def(
        "medians",
        [](const std::vector<std::string>& strings, int pairs) {
            auto B = multiset_from(strings, pairs);
            auto ms = median_set(B);
            py::dict d;
            d["base"] = ms.base.to_string();
            d["ambiguous_coordinates"] = ms.ambiguous;
            d["min_total_distance"] = ms.min_total_distance;
            std::vector<std::string> meds;
            for (const auto& mu : enumerate_medians_vec(B))
                meds.push_back(mu.to_string());
            d["medians"] = meds;
            return d;
        },
        py::arg("strings"), py::arg("pairs") = 0,
        "All optimal medians of a multiset of 0/1 strings.");

    m.def(
        "partition_function",
        [](const std::vector<std::string>& strings, int pairs,
           const std::string& weight, int jobs) {
            auto B = multiset_from(strings, pairs);
            auto r = partition_function(B, weight_from(weight), jobs);
            py::dict d;
            d["Z"] = rat_str(r.Z);
            d["median_count"] = r.median_count.get_str();
            d["ambiguous_count"] = r.ambiguous_count;
            d["min_total_distance"] = r.min_total_distance;
            return d;
        },
        py::arg("strings"), py::arg("pairs") = 0,
        py::arg("weight") = "factorial", py::arg("jobs") = 1,
        "Z(B, w): sum over optimal medians of the product of w(H).");

    m.def(
        "count_sat",
        [](const std::string& dimacs, const std::string& mode, int jobs) {
            auto r = count_sat(cnf_from(dimacs), mode, jobs);
            py::dict d;
            d["gamma"] = r.gamma.get_str();
            d["d3_gamma"] = r.d3_gamma.get_str();
            d["n"] = r.n;
            d["k"] = r.k;
            d["dropped_vars"] = r.dropped_vars;
            py::list primes;
            for (const auto& rep : r.reports) {
                py::dict pr;
                pr["p"] = rep.p;
                pr["q"] = rep.q;
                pr["t"] = rep.t;
                pr["T_mod_p"] = rep.T_mod_p;
                pr["K_mod_p"] = rep.K_mod_p;
                pr["gamma_mod_p"] = rep.gamma_mod_p;
                primes.append(pr);
            }
            d["primes"] = primes;
            return d;
        },
        py::arg("dimacs"), py::arg("mode") = "practical", py::arg("jobs") = 1,
        "Exact model count via per-prime modular partition sums and CRT.");

    m.def(
        "brute_force_count",
        [](const std::string& dimacs) {
            return brute_force_count(cnf_from(dimacs)).get_str();
        },
        py::arg("dimacs"), "Model count by direct enumeration (n <= 26).");

    m.def(
        "verify_tables",
        []() {
            auto rep = verify_distance_tables();
            py::dict d;
            py::list ms;
            for (const auto& mm : rep.mismatches) {
                py::dict e;
                e["table"] = mm.table;
                e["row"] = mm.row;
                e["column"] = mm.column;
                e["printed"] = mm.printed;
                e["recomputed"] = mm.recomputed;
                ms.append(e);
            }
            d["mismatches"] = ms;
            d["table1_multisets_ok"] = rep.table1_multisets_ok;
            d["table3_multisets_ok"] = rep.table3_multisets_ok;
            d["extra_sums_ok"] = rep.extra_sums_ok;
            d["only_the_two_flagged"] = rep.only_the_two_flagged;
            return d;
        },
        "Recompute the clause-block distance tables and diff the printed body.");

    m.def(
        "verify_separation",
        [](int n, int k, const std::string& variant, const std::string& weight) {
            auto rep = verify_separation(weight_from(weight), n, k, variant);
            py::dict d;
            d["h0"] = rat_str(rep.h0);
            d["h1"] = rat_str(rep.h1);
            d["h2"] = rat_str(rep.h2);
            d["h3"] = rat_str(rep.h3);
            d["h3_lt_h0"] = rep.h3_lt_h0;
            d["h3_lt_h1"] = rep.h3_lt_h1;
            d["h3_lt_h2"] = rep.h3_lt_h2;
            d["ratio"] = rat_str(rep.ratio);
            d["hypothesis_holds"] = rep.hypothesis_holds;
            d["logf_strictly_convex"] = rep.logf_strictly_convex;
            return d;
        },
        py::arg("n"), py::arg("k"), py::arg("variant") = "up",
        py::arg("weight") = "factorial",
        "Threshold-gadget level arithmetic h0..h3 and the separation checks.");

    m.def(
        "tree_score",
        [](const std::string& tree,
           const std::map<std::string, std::string>& labels, int pairs) {
            auto [t, lb] = tree_from(tree, labels, pairs);
            auto mpls = enumerate_mpl(t, lb);
            py::dict d;
            d["score"] = parsimony_score(t, mpls.front());
            d["mpl_count"] = static_cast<long long>(mpls.size());
            return d;
        },
        py::arg("tree"), py::arg("labels"), py::arg("pairs") = 0,
        "Parsimony score and number of optimal labelings.");

    m.def(
        "tree_count",
        [](const std::string& tree,
           const std::map<std::string, std::string>& labels, int pairs,
           const std::string& weight) {
            auto [t, lb] = tree_from(tree, labels, pairs);
            return rat_str(scenario_count_tree(t, lb, weight_from(weight)));
        },
        py::arg("tree"), py::arg("labels"), py::arg("pairs") = 0,
        py::arg("weight") = "factorial",
        "Sum over optimal labelings of the product of w(H) over edges.");

    m.def(
        "verify_tree_separation",
        [](int n, int k) {
            auto v = verify_tree_separation(n, k);
            py::dict d;
            d["copies_exponent"] = v.copies_exponent;
            d["ratio_lt_1"] = v.ratio_lt_1;
            d["log10_ratio"] = v.log10_ratio;
            d["b_good_consistent"] = v.b_good_consistent;
            d["b_good_printed"] = v.b_good_printed;
            d["b_bad"] = v.b_bad;
            d["constant_discrepancy"] = v.constant_discrepancy;
            return d;
        },
        py::arg("n"), py::arg("k"),
        "Exact comparison of the clause-tree good/bad scenario masses.");

    m.def(
        "diagnose",
        [](const std::vector<std::string>& strings, int pairs, bool metropolis,
           const std::string& weight) {
            auto B = multiset_from(strings, pairs);
            auto c = make_chain(B, metropolis, weight_from(weight));
            auto d = chain_diagnostics(c);
            py::dict out;
            out["support"] = d.support;
            std::vector<std::string> pi;
            for (const auto& p : d.pi) pi.push_back(rat_str(p));
            out["pi"] = pi;
            out["stationary_exact"] = d.stationary_exact;
            out["balance_residual"] = rat_str(d.balance_residual);
            out["spectral_gap"] = d.spectral_gap;
            return out;
        },
        py::arg("strings"), py::arg("pairs") = 0, py::arg("metropolis") = true,
        py::arg("weight") = "factorial",
        "Exact stationary analysis of the median-sampling chain.");

    m.def(
        "conductance",
        [](const std::vector<std::string>& strings, int pairs,
           const std::vector<uint64_t>& cut, bool metropolis,
           const std::string& weight) {
            auto B = multiset_from(strings, pairs);
            auto c = make_chain(B, metropolis, weight_from(weight));
            return rat_str(conductance_of_cut(c, cut));
        },
        py::arg("strings"), py::arg("pairs") = 0, py::arg("cut") = std::vector<uint64_t>{},
        py::arg("metropolis") = true, py::arg("weight") = "factorial",
        "Exact cut conductance of the chain (states are ambiguous-bit patterns).");

    m.def(
        "torpid_instance",
        [](int n, int t) {
            std::vector<std::string> out;
            for (const auto& s : torpid_instance(n, t).members)
                out.push_back(s.to_string());
            return out;
        },
        py::arg("n"), py::arg("t"),
        "t copies each of the all-zeros and all-ones strings of odd length n.");

    m.def(
        "torpid_bound",
        [](int n, int t) { return rat_str(torpid_bound(n, t)); }, py::arg("n"),
        py::arg("t"), "The conductance upper bound C(n, n//2)^{-(t-1)}.");
}
