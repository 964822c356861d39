#include <map>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "partree/trees.hpp"

using namespace partree;

namespace {

std::vector<int> idx(const LeafSet& a, const std::vector<std::string>& labels) {
    std::vector<int> out;
    for (const auto& l : labels) out.push_back(a.index(l));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("laminar family validation", "[trees]") {
    LeafSet a6 = LeafSet::alphabet(6);
    SECTION("the six-leaf example") {
        Tree t = Tree::validate_labels(a6, {{"a", "b", "c", "d", "e", "f"},
                                            {"a", "b", "c", "d", "e"},
                                            {"a", "b"},
                                            {"c", "d", "e"}});
        REQUIRE(t.vertex_count() == 4);
        auto kids = t.children(idx(a6, {"a", "b", "c", "d", "e", "f"}));
        REQUIRE(kids.size() == 2);
        REQUIRE(kids[0] == idx(a6, {"a", "b", "c", "d", "e"}));
        REQUIRE(kids[1] == idx(a6, {"f"}));
    }
    SECTION("overlapping members are rejected") {
        LeafSet a4 = LeafSet::alphabet(4);
        REQUIRE_THROWS_MATCHES(
            Tree::validate_labels(a4, {{"a", "b", "c", "d"}, {"a", "b"}, {"b", "c"}}), DomainError,
            Catch::Matchers::Predicate<DomainError>(
                [](const DomainError& e) { return e.code() == "NotLaminar"; }));
    }
    SECTION("the corolla has no inner edges") {
        Tree c = Tree::corolla(4);
        REQUIRE(c.is_corolla());
        REQUIRE(c.inner_edge_count() == 0);
        REQUIRE(c.children(c.family()[0]).size() == 4);
    }
    SECTION("missing root and small blocks are rejected") {
        LeafSet a3 = LeafSet::alphabet(3);
        REQUIRE_THROWS_MATCHES(Tree::validate_labels(a3, {{"a", "b"}}), DomainError,
                               Catch::Matchers::Predicate<DomainError>([](const DomainError& e) {
                                   return e.code() == "MissingRoot";
                               }));
        REQUIRE_THROWS_MATCHES(Tree::validate_labels(a3, {{"a", "b", "c"}, {"a"}}), DomainError,
                               Catch::Matchers::Predicate<DomainError>([](const DomainError& e) {
                                   return e.code() == "SmallBlock";
                               }));
    }
}

TEST_CASE("tree enumeration matches the recurrence", "[trees]") {
    const std::vector<long> expected = {1, 4, 26, 236};
    for (int n = 2; n <= 5; ++n) {
        LeafSet a = LeafSet::alphabet(n);
        auto tp = enumerate_trees(a, true);
        REQUIRE(static_cast<long>(tp.trees.size()) == expected[n - 2]);
        REQUIRE(smith::Int(tp.trees.size()) == series_reduced_tree_count(n));
        auto plus = enumerate_trees(a, false);
        REQUIRE(plus.trees.size() + 1 == tp.trees.size());
    }
    REQUIRE_THROWS_MATCHES(enumerate_trees(LeafSet::alphabet(8), true), DomainError,
                           Catch::Matchers::Predicate<DomainError>([](const DomainError& e) {
                               return e.code() == "TooLarge";
                           }));
}

TEST_CASE("tree poset structure", "[trees]") {
    LeafSet a = LeafSet::alphabet(4);
    auto tp = enumerate_trees(a, true);
    SECTION("the corolla is the unique minimum") {
        int corolla = -1;
        for (std::size_t i = 0; i < tp.trees.size(); ++i)
            if (tp.trees[i].is_corolla()) corolla = static_cast<int>(i);
        REQUIRE(corolla >= 0);
        for (int j = 0; j < tp.poset.size(); ++j) REQUIRE(tp.poset.leq(corolla, j));
    }
    SECTION("covering relations add exactly one member") {
        for (int i = 0; i < tp.poset.size(); ++i)
            for (int j = 0; j < tp.poset.size(); ++j) {
                if (!tp.poset.lt(i, j)) continue;
                bool cover = true;
                for (int k = 0; k < tp.poset.size() && cover; ++k)
                    if (tp.poset.lt(i, k) && tp.poset.lt(k, j)) cover = false;
                if (cover)
                    REQUIRE(tp.trees[j].vertex_count() == tp.trees[i].vertex_count() + 1);
            }
    }
}

TEST_CASE("leaf vertices are the minimal members", "[trees]") {
    LeafSet a6 = LeafSet::alphabet(6);
    SECTION("the corolla's root is its unique leaf vertex") {
        Tree c = Tree::corolla(3);
        auto lv = leaf_vertices(c);
        REQUIRE(lv.size() == 1);
        REQUIRE(lv[0] == std::vector<int>{0, 1, 2});
    }
    SECTION("the six-leaf example tree") {
        Tree t = Tree::validate_labels(a6, {{"a", "b", "c", "d", "e", "f"},
                                            {"a", "b", "c", "d", "e"},
                                            {"a", "b"},
                                            {"c", "d", "e"}});
        auto lv = leaf_vertices(t);
        REQUIRE(lv.size() == 2);
        REQUIRE(lv[0] == idx(a6, {"a", "b"}));
        REQUIRE(lv[1] == idx(a6, {"c", "d", "e"}));
    }
    SECTION("two disjoint pairs") {
        LeafSet a4 = LeafSet::alphabet(4);
        Tree t = Tree::validate_labels(a4, {{"a", "b", "c", "d"}, {"a", "b"}, {"c", "d"}});
        REQUIRE(leaf_vertices(t).size() == 2);
    }
}

TEST_CASE("pruning leaf vertices", "[trees]") {
    LeafSet a6 = LeafSet::alphabet(6);
    Tree example = Tree::validate_labels(a6, {{"a", "b", "c", "d", "e", "f"},
                                            {"a", "b", "c", "d", "e"},
                                            {"a", "b"},
                                            {"c", "d", "e"}});
    SECTION("pruning one pair introduces a marker") {
        PruneResult r = prune(a6, example, {idx(a6, {"a", "b"})});
        REQUIRE(r.leaves.size() == 5);
        REQUIRE(r.leaves.index("l(a,b)") >= 0);
        REQUIRE(r.tree.vertex_count() == 3);
        // substituted family: root, {l(a,b),c,d,e}, {c,d,e}
        std::vector<int> big = idx(r.leaves, {"l(a,b)", "c", "d", "e"});
        REQUIRE(r.tree.has_member(big));
        REQUIRE(r.tree.has_member(idx(r.leaves, {"c", "d", "e"})));
    }
    SECTION("pruning all leaf vertices of a two-pair tree gives the corolla") {
        LeafSet a4 = LeafSet::alphabet(4);
        Tree t = Tree::validate_labels(a4, {{"a", "b", "c", "d"}, {"a", "b"}, {"c", "d"}});
        PruneResult r = prune(a4, t, {idx(a4, {"a", "b"}), idx(a4, {"c", "d"})});
        REQUIRE(r.tree.is_corolla());
        REQUIRE(r.leaves.size() == 2);
    }
    SECTION("pruning the only pair of a three-leaf tree") {
        LeafSet a3 = LeafSet::alphabet(3);
        Tree t = Tree::validate_labels(a3, {{"a", "b", "c"}, {"a", "b"}});
        PruneResult r = prune(a3, t, {idx(a3, {"a", "b"})});
        REQUIRE(r.tree.is_corolla());
        REQUIRE(r.leaves.size() == 2);
    }
    SECTION("vertex counts drop by one per pruned vertex") {
        PruneResult r = prune(a6, example, {idx(a6, {"c", "d", "e"})});
        REQUIRE(r.tree.vertex_count() == example.vertex_count() - 1);
    }
    SECTION("only leaf vertices may be pruned") {
        REQUIRE_THROWS_MATCHES(prune(a6, example, {idx(a6, {"a", "b", "c", "d", "e"})}), DomainError,
                               Catch::Matchers::Predicate<DomainError>([](const DomainError& e) {
                                   return e.code() == "NotLeafVertex";
                               }));
    }
}

TEST_CASE("grafting", "[trees]") {
    SECTION("the unit tree acts as an identity") {
        LeafSet ab = LeafSet(std::vector<std::string>{"a", "b"});
        LeafSet x = LeafSet(std::vector<std::string>{"x"});
        GraftResult r = graft(ab, Tree::corolla(2), "a", x, Tree::unit());
        REQUIRE(r.tree.is_corolla());
        REQUIRE(r.leaves.labels() == std::vector<std::string>{"b", "x"});
    }
    SECTION("grafting two corollas gives the three-leaf binary tree") {
        LeafSet ab = LeafSet(std::vector<std::string>{"a", "b"});
        LeafSet xy = LeafSet(std::vector<std::string>{"x", "y"});
        GraftResult r = graft(ab, Tree::corolla(2), "a", xy, Tree::corolla(2));
        REQUIRE(r.tree.vertex_count() == 2);
        REQUIRE(r.tree.has_member(idx(r.leaves, {"x", "y"})));
        REQUIRE(r.tree.has_member(idx(r.leaves, {"x", "y", "b"})));
    }
    SECTION("grafting is associative on corollas") {
        LeafSet ab = LeafSet(std::vector<std::string>{"a", "b"});
        LeafSet cd = LeafSet(std::vector<std::string>{"c", "d"});
        LeafSet ef = LeafSet(std::vector<std::string>{"e", "f"});
        // (T o_a S) o_c R and T o_a (S o_c R): S on {c, d} grafted at a, R at c
        GraftResult ts = graft(ab, Tree::corolla(2), "a", cd, Tree::corolla(2));
        GraftResult left = graft(ts.leaves, ts.tree, "c", ef, Tree::corolla(2));
        GraftResult sr = graft(cd, Tree::corolla(2), "c", ef, Tree::corolla(2));
        GraftResult right = graft(ab, Tree::corolla(2), "a", sr.leaves, sr.tree);
        REQUIRE(left.tree.to_string(left.leaves) == right.tree.to_string(right.leaves));
    }
    SECTION("label clashes and missing leaves are rejected") {
        LeafSet ab = LeafSet(std::vector<std::string>{"a", "b"});
        REQUIRE_THROWS_MATCHES(graft(ab, Tree::corolla(2), "z", ab, Tree::corolla(2)), DomainError,
                               Catch::Matchers::Predicate<DomainError>([](const DomainError& e) {
                                   return e.code() == "LeafNotFound";
                               }));
        REQUIRE_THROWS_MATCHES(graft(ab, Tree::corolla(2), "a",
                                     LeafSet(std::vector<std::string>{"b", "c"}), Tree::corolla(2)),
                               DomainError,
                               Catch::Matchers::Predicate<DomainError>([](const DomainError& e) {
                                   return e.code() == "LabelClash";
                               }));
    }
    SECTION("grafting commutes with leaf relabelling on small trees") {
        // relabel {a,b} -> {b,a} on the host, graft, compare against grafting
        // first and relabelling after
        LeafSet ab = LeafSet(std::vector<std::string>{"a", "b"});
        LeafSet ba = LeafSet(std::vector<std::string>{"b", "a"});
        LeafSet xy = LeafSet(std::vector<std::string>{"x", "y"});
        for (const auto& host : enumerate_trees(ab, true).trees) {
            GraftResult direct = graft(ab, host, "a", xy, Tree::corolla(2));
            GraftResult swapped = graft(ba, host, "a", xy, Tree::corolla(2));
            // the two leaf sets list b and x, y in different orders but the
            // families agree as label sets
            std::set<std::set<std::string>> fam1, fam2;
            for (const auto& m : direct.tree.family()) {
                std::set<std::string> mem;
                for (int i : m) mem.insert(direct.leaves.label(i));
                fam1.insert(mem);
            }
            for (const auto& m : swapped.tree.family()) {
                std::set<std::string> mem;
                for (int i : m) mem.insert(swapped.leaves.label(i));
                fam2.insert(mem);
            }
            REQUIRE(fam1 == fam2);
        }
    }
}

TEST_CASE("graft axioms over all small trees", "[trees]") {
    LeafSet ab(std::vector<std::string>{"a", "b"});
    LeafSet a3(std::vector<std::string>{"a", "b", "c"});
    LeafSet xy(std::vector<std::string>{"x", "y"});
    LeafSet x3(std::vector<std::string>{"x", "y", "z"});
    LeafSet uv(std::vector<std::string>{"u", "v"});

    SECTION("unit laws") {
        LeafSet w(std::vector<std::string>{"w"});
        for (const auto& host : enumerate_trees(a3, true).trees)
            for (const auto& leaf : a3.labels()) {
                GraftResult r = graft(a3, host, leaf, w, Tree::unit());
                REQUIRE(r.tree.vertex_count() == host.vertex_count());
            }
    }
    SECTION("associativity across disjoint grafts") {
        for (const auto& host : enumerate_trees(ab, true).trees)
            for (const auto& mid : enumerate_trees(xy, true).trees)
                for (const auto& inner : enumerate_trees(uv, true).trees) {
                    // graft mid at a, then inner at x; versus inner into mid
                    // first, then the composite at a
                    GraftResult hm = graft(ab, host, "a", xy, mid);
                    GraftResult left = graft(hm.leaves, hm.tree, "x", uv, inner);
                    GraftResult mi = graft(xy, mid, "x", uv, inner);
                    GraftResult right = graft(ab, host, "a", mi.leaves, mi.tree);
                    std::set<std::set<std::string>> fam1, fam2;
                    for (const auto& m : left.tree.family()) {
                        std::set<std::string> mem;
                        for (int i : m) mem.insert(left.leaves.label(i));
                        fam1.insert(mem);
                    }
                    for (const auto& m : right.tree.family()) {
                        std::set<std::string> mem;
                        for (int i : m) mem.insert(right.leaves.label(i));
                        fam2.insert(mem);
                    }
                    REQUIRE(fam1 == fam2);
                }
    }
    SECTION("vertex counts add under grafting") {
        for (const auto& host : enumerate_trees(a3, true).trees)
            for (const auto& guest : enumerate_trees(x3, true).trees) {
                GraftResult r = graft(a3, host, "b", x3, guest);
                REQUIRE(r.tree.vertex_count() == host.vertex_count() + guest.vertex_count());
            }
    }
}

TEST_CASE("tree poset order complexes", "[trees]") {
    SECTION("T(A) is contractible: the corolla is a minimum") {
        for (int n = 3; n <= 4; ++n) {
            SimplicialSet x = order_complex(enumerate_trees(LeafSet::alphabet(n), true).poset);
            REQUIRE(homology(x, Ring::integers, true).is_zero());
        }
    }
    SECTION("T+(A) has the homology of the partition complex") {
        const long expected[] = {2, 6, 24};
        for (int n = 3; n <= 5; ++n) {
            SimplicialSet x = order_complex(enumerate_trees(LeafSet::alphabet(n), false).poset);
            HomologyResult h = homology(x, Ring::integers, true);
            REQUIRE(h.betti(n - 3) == expected[n - 3]);
            for (int d = 0; d < static_cast<int>(h.degrees.size()); ++d)
                if (d != n - 3) REQUIRE(h.betti(d) == 0);
            REQUIRE_FALSE(h.has_torsion());
        }
    }
}

TEST_CASE("DOT export mentions every leaf", "[trees]") {
    LeafSet a = LeafSet::alphabet(3);
    Tree t = Tree::validate_labels(a, {{"a", "b", "c"}, {"a", "b"}});
    std::string dot = to_dot(a, t);
    REQUIRE(dot.find("digraph") != std::string::npos);
    for (const auto& l : a.labels()) REQUIRE(dot.find("\"" + l + "\"") != std::string::npos);
}
