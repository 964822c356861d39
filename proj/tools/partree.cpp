// Command-line driver: enumeration, homology, and verification campaigns with
// machine-readable reports. Exit code 0 when every check in the run passes,
// 1 on a verification failure, 2 on usage or configuration errors.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "partree/comparison.hpp"
#include "partree/operad_io.hpp"
#include "partree/operads.hpp"
#include "partree/parallel.hpp"
#include "partree/partitions.hpp"
#include "partree/posets.hpp"
#include "partree/simplicial.hpp"
#include "partree/trees.hpp"

using json = nlohmann::ordered_json;
using namespace partree;

namespace {

// ---------------------------------------------------------------------------
// Shared options
// ---------------------------------------------------------------------------

struct CommonOpts {
    int n = 0;
    std::string labels;
    std::string ring = "z";
    int jobs = 1;
    std::string format = "text";
    std::string out;
    int max_n = 0;  // raises per-command leaf bounds when positive
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_ring = true) {
    cmd->add_option("--n", o.n, "number of leaves (labels a, b, c, ...)");
    cmd->add_option("--labels", o.labels, "comma-separated leaf labels");
    if (with_ring) cmd->add_option("--ring", o.ring, "coefficient ring: z or q")->check(CLI::IsMember({"z", "q"}));
    cmd->add_option("--jobs", o.jobs, "parallel work units")->check(CLI::PositiveNumber);
    cmd->add_option("--format", o.format, "output format: text, json, or dot")
        ->check(CLI::IsMember({"text", "json", "dot"}));
    cmd->add_option("--out", o.out, "write the report to this file instead of stdout");
    cmd->add_option("--max-n", o.max_n, "raise the leaf-count guard for this command");
}

LeafSet leaf_set_from(const CommonOpts& o) {
    if (!o.labels.empty() && o.n > 0) fail("Usage", "give either --n or --labels, not both");
    if (!o.labels.empty()) {
        std::vector<std::string> labels;
        std::stringstream ss(o.labels);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) labels.push_back(item);
        }
        return LeafSet(std::move(labels));
    }
    if (o.n <= 0) fail("Usage", "give --n or --labels");
    return LeafSet::alphabet(o.n);
}

void guard_leaves(const LeafSet& a, int default_cap, const CommonOpts& o, const std::string& what) {
    const int cap = o.max_n > 0 ? o.max_n : default_cap;
    if (a.size() > cap)
        fail("Usage", what + " is capped at " + std::to_string(cap) +
                          " leaves (override with --max-n)");
}

Ring ring_from(const CommonOpts& o) { return o.ring == "q" ? Ring::rationals : Ring::integers; }

void emit(const CommonOpts& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(o.out);
        if (!f) fail("Usage", "cannot open --out file '" + o.out + "'");
        f << text;
    }
}

// ---------------------------------------------------------------------------
// JSON rendering
// ---------------------------------------------------------------------------

json partition_json(const LeafSet& a, const Partition& p) {
    json blocks = json::array();
    for (const auto& b : p.blocks()) {
        json bl = json::array();
        for (int x : b) bl.push_back(a.label(x));
        blocks.push_back(bl);
    }
    return blocks;
}

json tree_json(const LeafSet& a, const Tree& t) {
    json fam = json::array();
    for (const auto& m : t.family()) {
        json mem = json::array();
        for (int x : m) mem.push_back(a.label(x));
        fam.push_back(mem);
    }
    return fam;
}

json homology_json(const HomologyResult& h) {
    json out;
    out["reduced"] = h.reduced;
    out["empty"] = h.empty_complex;
    json degrees = json::array();
    for (std::size_t d = 0; d < h.degrees.size(); ++d) {
        json row;
        row["degree"] = d;
        row["betti"] = h.degrees[d].betti;
        json tor = json::array();
        for (const auto& t : h.degrees[d].torsion) tor.push_back(t.str());
        row["torsion"] = tor;
        degrees.push_back(row);
    }
    out["degrees"] = degrees;
    return out;
}

json initiality_json(const InitialityReport& rep) {
    json out;
    out["model"] = "sd";
    out["pass"] = rep.pass;
    out["homology_match"] = rep.homology_match;
    out["source_homology"] = homology_json(rep.source_homology);
    out["target_homology"] = homology_json(rep.target_homology);
    json slices = json::array();
    for (const auto& s : rep.slices) {
        json row;
        row["object"] = s.object;
        row["nonempty"] = s.nonempty;
        row["contractible"] = s.contractible;
        row["homology"] = s.homology;
        slices.push_back(row);
    }
    out["slices"] = slices;
    if (!rep.detail.empty()) out["detail"] = rep.detail;
    return out;
}

json tree_check_json(const TreeCheck& c) {
    json row;
    row["tree"] = c.tree;
    row["cover_ok"] = c.cover_ok;
    json cones = json::array();
    for (const auto& w : c.cone_ok) {
        json cw;
        cw["subset"] = w.subset;
        cw["ok"] = w.ok;
        if (!w.detail.empty()) cw["detail"] = w.detail;
        cones.push_back(cw);
    }
    row["cone_ok"] = cones;
    row["homology"] = homology_json(c.homology);
    row["homology_zero"] = c.homology_zero;
    row["slice_match"] = c.slice_match;
    row["pass"] = c.pass;
    if (!c.detail.empty()) row["detail"] = c.detail;
    return row;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string initiality_text(const std::string& name, const InitialityReport& rep) {
    std::ostringstream os;
    os << name << " (sd model)\n";
    for (const auto& s : rep.slices)
        os << "  slice over " << s.object << ": "
           << (s.ok() ? "contractible" : ("FAIL (" + s.homology + ")")) << "\n";
    os << "  source homology: " << rep.source_homology.to_string() << "\n";
    os << "  target homology: " << rep.target_homology.to_string() << "\n";
    os << "  homology match: " << (rep.homology_match ? "yes" : "NO") << "\n";
    os << (rep.pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Layered-tree DOT (a chain drawn with its layers)
// ---------------------------------------------------------------------------

std::string layered_tree_dot(const LeafSet& a, const Chain& chain) {
    std::ostringstream os;
    os << "digraph layering {\n  rankdir=BT;\n  node [shape=point];\n";
    const auto& elems = chain.elems();
    os << "  root [shape=point];\n";
    for (std::size_t l = 0; l < elems.size(); ++l)
        for (int b = 0; b < elems[l].block_count(); ++b) os << "  L" << l << "B" << b << ";\n";
    for (int i = 0; i < a.size(); ++i)
        os << "  leaf" << i << " [shape=plaintext, label=\"" << a.label(i) << "\"];\n";
    // root vertex to layer 0
    for (int b = 0; b < elems[0].block_count(); ++b) os << "  L0B" << b << " -> root;\n";
    // layer l+1 to layer l by containment
    for (std::size_t l = 0; l + 1 < elems.size(); ++l) {
        const std::vector<int> of = elems[l].block_of_leaf();
        for (int b = 0; b < elems[l + 1].block_count(); ++b)
            os << "  L" << l + 1 << "B" << b << " -> L" << l << "B"
               << of[elems[l + 1].blocks()[b][0]] << ";\n";
    }
    // leaves to the top layer
    const std::vector<int> of = elems.back().block_of_leaf();
    for (int i = 0; i < a.size(); ++i)
        os << "  leaf" << i << " -> L" << elems.size() - 1 << "B" << of[i] << ";\n";
    // keep layers on shared ranks
    os << "  {rank=same; root;}\n";
    for (std::size_t l = 0; l < elems.size(); ++l) {
        os << "  {rank=same;";
        for (int b = 0; b < elems[l].block_count(); ++b) os << " L" << l << "B" << b << ";";
        os << "}\n";
    }
    os << "}\n";
    return os.str();
}

Tree tree_from_json(const LeafSet& a, const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        fail("Usage", std::string("--tree is not valid JSON: ") + e.what());
    }
    std::vector<std::vector<std::string>> family;
    for (const auto& m : doc) family.push_back(m.get<std::vector<std::string>>());
    return Tree::validate_labels(a, family);
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_partitions(const CommonOpts& o, bool nontrivial) {
    LeafSet a = leaf_set_from(o);
    guard_leaves(a, 8, o, "partition enumeration");
    auto parts = all_partitions(a, nontrivial);
    if (o.format == "json") {
        json out;
        out["command"] = "partitions";
        out["labels"] = a.labels();
        out["nontrivial_only"] = nontrivial;
        out["count"] = parts.size();
        json items = json::array();
        for (const auto& p : parts) items.push_back(partition_json(a, p));
        out["partitions"] = items;
        emit(o, dump(out));
    } else {
        std::ostringstream os;
        for (const auto& p : parts) os << p.to_string(a) << "\n";
        os << "count: " << parts.size() << "\n";
        emit(o, os.str());
    }
    return 0;
}

int cmd_trees(const CommonOpts& o, bool plus) {
    LeafSet a = leaf_set_from(o);
    guard_leaves(a, 7, o, "tree enumeration");
    auto tp = enumerate_trees(a, !plus);
    if (o.format == "json") {
        json out;
        out["command"] = "trees";
        out["labels"] = a.labels();
        out["poset"] = plus ? "T+(A)" : "T(A)";
        out["count"] = tp.trees.size();
        json items = json::array();
        for (const auto& t : tp.trees) items.push_back(tree_json(a, t));
        out["trees"] = items;
        emit(o, dump(out));
    } else if (o.format == "dot") {
        std::ostringstream os;
        for (std::size_t i = 0; i < tp.trees.size(); ++i)
            os << to_dot(a, tp.trees[i], "tree" + std::to_string(i));
        emit(o, os.str());
    } else {
        std::ostringstream os;
        for (const auto& t : tp.trees) os << t.to_string(a) << "\n";
        os << "count: " << tp.trees.size() << "\n";
        emit(o, os.str());
    }
    return 0;
}

int cmd_homology(const CommonOpts& o, const std::string& which) {
    LeafSet a = leaf_set_from(o);
    HomologyResult h;
    if (which == "np") {
        guard_leaves(a, 6, o, "partition-complex homology");
        PartitionComplex pc = build_partition_complex(a);
        h = homology(pc.nerve, ring_from(o), true);
    } else {
        guard_leaves(a, 5, o, "tree-poset homology");
        auto tp = enumerate_trees(a, false);
        h = homology(order_complex(tp.poset), ring_from(o), true);
    }
    if (o.format == "json") {
        json out;
        out["command"] = "homology";
        out["complex"] = which;
        out["labels"] = a.labels();
        out["ring"] = o.ring == "q" ? "Q" : "Z";
        out["homology"] = homology_json(h);
        emit(o, dump(out));
    } else {
        emit(o, "reduced homology of " + (which == "np" ? std::string("NP(A)") : std::string("N T+(A)")) +
                    ": " + h.to_string() + "\n");
    }
    return 0;
}

int cmd_verify_theorem(const CommonOpts& o, int max_cone_subset, int fault_item,
                       const std::string& start_after, const std::string& tree_text) {
    LeafSet a = leaf_set_from(o);
    guard_leaves(a, 6, o, "the verification campaign");
    if (a.size() < 2) fail("Usage", "the campaign needs at least two leaves");

    VerifyOptions vopt;
    vopt.max_cone_subset = max_cone_subset;
    vopt.jobs = o.jobs;
    vopt.start_after = start_after;

    json out;
    out["command"] = "verify-theorem";
    out["labels"] = a.labels();
    out["model"] = "sd";
    std::ostringstream text;
    bool pass = true;
    bool vacuous = false;

    if (a.size() == 2) {
        vacuous = true;
        out["items"] = json::array();
        text << "n = 2: both sides empty; vacuous pass\n";
    } else {
        PartitionComplex pc = build_partition_complex(a);
        std::vector<Tree> todo;
        if (!tree_text.empty()) {
            todo.push_back(tree_from_json(a, tree_text));
            if (todo.back().is_corolla()) fail("Usage", "the corolla is not an object of T+(A)");
        } else {
            for (const auto& t : enumerate_trees(a, false).trees) {
                if (!start_after.empty() && t.to_string(a) <= start_after) continue;
                todo.push_back(t);
            }
        }
        json items = json::array();
        // chunked parallel execution; per-item results stream in order
        const int chunk = std::max(1, 4 * o.jobs);
        std::vector<TreeCheck> results(todo.size());
        for (std::size_t base = 0; base < todo.size(); base += chunk) {
            const int count = static_cast<int>(std::min<std::size_t>(chunk, todo.size() - base));
            parallel_for(count, o.jobs, [&](int i) {
                const std::size_t at = base + i;
                const bool fault = (fault_item == static_cast<int>(at));
                results[at] = verify_tree(pc, todo[at], vopt, fault);
            });
            for (int i = 0; i < count; ++i) {
                const TreeCheck& c = results[base + i];
                pass = pass && c.pass;
                items.push_back(tree_check_json(c));
                text << (c.pass ? "ok   " : "FAIL ") << c.tree;
                if (!c.pass && !c.detail.empty()) text << "  [" << c.detail << "]";
                if (!c.pass) {
                    for (const auto& cw : c.cone_ok)
                        if (!cw.ok) text << "  [cone " << cw.subset << ": " << cw.detail << "]";
                }
                text << "\n";
            }
        }
        out["items"] = std::move(items);
    }
    out["vacuous"] = vacuous;
    out["pass"] = pass;
    text << (pass ? "PASS" : "FAIL") << "\n";
    emit(o, o.format == "json" ? dump(out) : text.str());
    return pass ? 0 : 1;
}

int cmd_verify_zeta(const CommonOpts& o) {
    LeafSet a = leaf_set_from(o);
    guard_leaves(a, 5, o, "the zeta initiality check");
    InitialityReport rep = zeta_initiality(a);
    if (o.format == "json") {
        json out;
        out["command"] = "verify-zeta";
        out["labels"] = a.labels();
        out.update(initiality_json(rep));
        emit(o, dump(out));
    } else {
        emit(o, initiality_text("zeta: chains -> final element", rep));
    }
    return rep.pass ? 0 : 1;
}

int cmd_verify_labelled(const CommonOpts& o, const std::string& operad_spec) {
    LeafSet a = leaf_set_from(o);
    guard_leaves(a, 4, o, "the labelled comparison");
    auto operad = make_operad(operad_spec);
    validate_operad(*operad);
    InitialityReport rep = verify_labelled_comparison(*operad, a);
    if (o.format == "json") {
        json out;
        out["command"] = "verify-labelled";
        out["operad"] = operad->name();
        out["labels"] = a.labels();
        out.update(initiality_json(rep));
        emit(o, dump(out));
    } else {
        emit(o, initiality_text("labelled comparison for '" + operad->name() + "'", rep));
    }
    return rep.pass ? 0 : 1;
}

int cmd_bar_compare(const CommonOpts& o, const std::string& operad_spec) {
    LeafSet a = leaf_set_from(o);
    guard_leaves(a, 5, o, "the bar comparison");
    auto operad = make_operad(operad_spec);
    validate_operad(*operad);
    BarCompareReport rep = compare_bars(*operad, a);
    if (o.format == "json") {
        json out;
        out["command"] = "bar-compare";
        out["operad"] = rep.operad;
        out["labels"] = a.labels();
        out["z"] = {{"bar", homology_json(rep.bar_z)},
                    {"tree", homology_json(rep.tree_z)},
                    {"equal", rep.pass_z}};
        out["q"] = {{"bar", homology_json(rep.bar_q)},
                    {"tree", homology_json(rep.tree_q)},
                    {"equal", rep.pass_q}};
        out["pass"] = rep.pass;
        emit(o, dump(out));
    } else {
        std::ostringstream os;
        os << "bar comparison for '" << rep.operad << "', " << rep.n << " leaves\n";
        os << "  over Z: bar  " << rep.bar_z.to_string() << "\n";
        os << "          tree " << rep.tree_z.to_string() << "\n";
        os << "  over Q: bar  " << rep.bar_q.to_string() << "\n";
        os << "          tree " << rep.tree_q.to_string() << "\n";
        os << (rep.pass ? "PASS" : "FAIL") << "\n";
        emit(o, os.str());
    }
    return rep.pass ? 0 : 1;
}

int cmd_export(const CommonOpts& o, const std::string& what, const std::string& tree_text) {
    LeafSet a = leaf_set_from(o);
    if (what == "np") {
        guard_leaves(a, 6, o, "partition-complex export");
        PartitionComplex pc = build_partition_complex(a);
        json out;
        out["command"] = "export";
        out["object"] = "np";
        out["labels"] = a.labels();
        json cells = json::array();
        for (int d = 0; d <= pc.nerve.dimension(); ++d)
            for (int i = 0; i < pc.nerve.size(d); ++i) {
                const Simplex& s = pc.nerve.simplex(d, i);
                json row;
                row["dim"] = d;
                row["index"] = i;
                row["label"] = s.label;
                json faces = json::array();
                for (const auto& f : s.faces) faces.push_back(f.index);
                row["faces"] = faces;
                cells.push_back(row);
            }
        out["cells"] = cells;
        emit(o, dump(out));
        return 0;
    }
    if (what == "layerings") {
        guard_leaves(a, 7, o, "layering export");
        if (tree_text.empty()) fail("Usage", "export layerings needs --tree");
        Tree t = tree_from_json(a, tree_text);
        auto lays = elementary_layerings(a, t);
        if (o.format == "dot") {
            std::ostringstream os;
            for (const auto& l : lays) os << layered_tree_dot(a, l.chain);
            emit(o, os.str());
        } else {
            json out;
            out["command"] = "export";
            out["object"] = "layerings";
            out["tree"] = tree_json(a, t);
            json items = json::array();
            for (const auto& l : lays) {
                json chain = json::array();
                for (const auto& p : l.chain.elems()) chain.push_back(partition_json(a, p));
                items.push_back(chain);
            }
            out["layerings"] = items;
            if (o.format == "json") {
                emit(o, dump(out));
            } else {
                std::ostringstream os;
                for (const auto& l : lays) os << l.chain.to_string(a) << "\n";
                emit(o, os.str());
            }
        }
        return 0;
    }
    fail("Usage", "export expects 'np' or 'layerings'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"partree: partition complexes, tree posets, and their comparison"};
    app.require_subcommand(1);

    CommonOpts o_part, o_trees, o_hom, o_vt, o_vz, o_vl, o_bc, o_exp;
    bool plus = false;
    bool include_trivial = false;
    std::string hom_which = "np";
    int max_cone_subset = 0;
    int fault_item = -1;
    std::string start_after, tree_text, operad_vl, operad_bc, export_what, export_tree;

    auto* c_part = app.add_subcommand("partitions", "enumerate the nontrivial partitions of A");
    add_common(c_part, o_part, false);
    c_part->add_flag("--all", include_trivial, "include the indiscrete and discrete partitions");

    auto* c_trees = app.add_subcommand("trees", "enumerate the tree poset T(A) or T+(A)");
    add_common(c_trees, o_trees, false);
    c_trees->add_flag("--plus", plus, "omit the corolla (T+)");

    auto* c_hom = app.add_subcommand("homology", "reduced homology of NP(A) or of N T+(A)");
    c_hom->add_option("complex", hom_which, "np or tplus")
        ->required()
        ->check(CLI::IsMember({"np", "tplus"}));
    add_common(c_hom, o_hom);

    auto* c_vt = app.add_subcommand("verify-theorem",
                                    "per-tree slice contractibility: cover, cone witnesses, "
                                    "homology, and the subdivision-model slice");
    add_common(c_vt, o_vt, false);
    c_vt->add_option("--max-cone-subset", max_cone_subset,
                     "cap the size of leaf-vertex subsets for cone witnesses (0: all)");
    c_vt->add_option("--inject-fault", fault_item,
                     "testing: corrupt the cover data of this item index");
    c_vt->add_option("--start-after", start_after, "resume after this tree key");
    c_vt->add_option("--tree", tree_text, "verify a single tree (JSON family)");

    auto* c_vz = app.add_subcommand("verify-zeta",
                                    "homotopy initiality of the final-element projection");
    add_common(c_vz, o_vz, false);

    auto* c_vl = app.add_subcommand("verify-labelled",
                                    "homotopy initiality of the labelled comparison");
    c_vl->add_option("operad", operad_vl, "comm, assoc, or file:PATH")->required();
    add_common(c_vl, o_vl, false);

    auto* c_bc = app.add_subcommand("bar-compare",
                                    "homology of the two bar constructions over Z and Q");
    c_bc->add_option("operad", operad_bc, "comm, assoc, or file:PATH")->required();
    add_common(c_bc, o_bc, false);

    auto* c_exp = app.add_subcommand("export", "export complexes and layerings (JSON/DOT)");
    c_exp->add_option("object", export_what, "np or layerings")->required();
    add_common(c_exp, o_exp, false);
    c_exp->add_option("--tree", export_tree, "tree family as JSON (for layerings)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (c_part->parsed()) return cmd_partitions(o_part, !include_trivial);
        if (c_trees->parsed()) return cmd_trees(o_trees, plus);
        if (c_hom->parsed()) return cmd_homology(o_hom, hom_which);
        if (c_vt->parsed())
            return cmd_verify_theorem(o_vt, max_cone_subset, fault_item, start_after, tree_text);
        if (c_vz->parsed()) return cmd_verify_zeta(o_vz);
        if (c_vl->parsed()) return cmd_verify_labelled(o_vl, operad_vl);
        if (c_bc->parsed()) return cmd_bar_compare(o_bc, operad_bc);
        if (c_exp->parsed()) return cmd_export(o_exp, export_what, export_tree);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
