#include <cstdio>
#include <fstream>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "partree/operad_io.hpp"
#include "partree/operads.hpp"

using namespace partree;

namespace {

// independent oracle for the associative structure: substitute one
// multiplication order into another at a leaf position
std::vector<int> substitute_word(const std::vector<int>& w, int pos, const std::vector<int>& u) {
    std::vector<int> out;
    const int m = static_cast<int>(u.size());
    for (int x : w) {
        if (x < pos) out.push_back(x);
        else if (x == pos)
            for (int y : u) out.push_back(pos + y);
        else out.push_back(x + m - 1);
    }
    return out;
}

std::string write_comm_table_file() {
    nlohmann::json doc;
    doc["name"] = "comm-table";
    doc["max_arity"] = 4;
    doc["operations"] = {{"2", {"m"}}, {"3", {"m"}}, {"4", {"m"}}};
    nlohmann::json actions = nlohmann::json::array();
    for (int n = 2; n <= 4; ++n) {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        do {
            actions.push_back({{"arity", n}, {"perm", p}, {"images", {0}}});
        } while (std::next_permutation(p.begin(), p.end()));
    }
    doc["actions"] = actions;
    nlohmann::json comps = nlohmann::json::array();
    for (int k = 2; k <= 4; ++k)
        for (int m = 2; m <= 4; ++m) {
            if (k + m - 1 > 4) continue;
            for (int j = 0; j < k; ++j)
                comps.push_back({{"arity", k},
                                 {"op", 0},
                                 {"at", j},
                                 {"sub_arity", m},
                                 {"sub_op", 0},
                                 {"result", 0}});
        }
    doc["compositions"] = comps;
    std::string path = "comm_table_test.json";
    std::ofstream f(path);
    f << doc.dump(1);
    return path;
}

}  // namespace

TEST_CASE("built-in operads satisfy the axioms", "[operads]") {
    auto comm = make_comm(8);
    auto assoc = make_assoc(6);
    REQUIRE_NOTHROW(validate_operad(*comm));
    REQUIRE_NOTHROW(validate_operad(*assoc));
    REQUIRE(comm->size(5) == 1);
    REQUIRE(assoc->size(2) == 2);
    REQUIRE(assoc->size(3) == 6);
    REQUIRE(assoc->size(4) == 24);
    REQUIRE_THROWS_MATCHES((void)assoc->size(7), DomainError,
                           Catch::Matchers::Predicate<DomainError>([](const DomainError& e) {
                               return e.code() == "ArityOverflow";
                           }));
}

TEST_CASE("associative composition substitutes orders", "[operads]") {
    auto assoc = make_assoc(6);
    // compare compose against the independent word-substitution oracle
    for (int k = 2; k <= 3; ++k)
        for (int m = 2; m <= 3; ++m) {
            if (k + m - 1 > 6) continue;
            for (int a = 0; a < assoc->size(k); ++a)
                for (int b = 0; b < assoc->size(m); ++b)
                    for (int j = 0; j < k; ++j) {
                        const auto w = detail::unrank_permutation(k, a);
                        const auto u = detail::unrank_permutation(m, b);
                        const auto expect = substitute_word(w, j, u);
                        const int got = assoc->compose(k, a, j, m, b);
                        REQUIRE(detail::unrank_permutation(k + m - 1, got) == expect);
                    }
        }
}

TEST_CASE("labellings and the nerve", "[operads]") {
    LeafSet a3 = LeafSet::alphabet(3);
    auto comm = make_comm(8);
    auto assoc = make_assoc(6);

    SECTION("the commutative nerve is a singleton on every tree") {
        for (const auto& t : enumerate_trees(a3, true).trees)
            REQUIRE(all_labellings(*comm, t).size() == 1);
    }
    SECTION("the corolla on three leaves carries six orders") {
        REQUIRE(all_labellings(*assoc, Tree::corolla(3)).size() == 6);
    }
    SECTION("restriction to the corolla keeps the adjacent orders") {
        Tree t = Tree::validate_labels(a3, {{"a", "b", "c"}, {"a", "b"}});
        auto ls = all_labellings(*assoc, t);
        REQUIRE(ls.size() == 4);
        std::set<std::vector<int>> restricted_words;
        for (const auto& l : ls) {
            Labelling r = restrict_labelling(*assoc, t, l, Tree::corolla(3));
            restricted_words.insert(detail::unrank_permutation(3, r[0]));
        }
        // exactly the orders where a and b are adjacent
        std::set<std::vector<int>> expected;
        for (const auto& w :
             {std::vector<int>{0, 1, 2}, {1, 0, 2}, {2, 0, 1}, {2, 1, 0}})
            expected.insert(w);
        REQUIRE(restricted_words == expected);
    }
    SECTION("contraction order does not matter") {
        LeafSet a4 = LeafSet::alphabet(4);
        // a three-vertex tree with two contractible members
        Tree t = Tree::validate_labels(a4, {{"a", "b", "c", "d"}, {"a", "b", "c"}, {"a", "b"}});
        Tree corolla = Tree::corolla(4);
        Tree mid1 = Tree::validate_labels(a4, {{"a", "b", "c", "d"}, {"a", "b", "c"}});
        Tree mid2 = Tree::validate_labels(a4, {{"a", "b", "c", "d"}, {"a", "b"}});
        for (const auto& l : all_labellings(*assoc, t)) {
            Labelling via1 = restrict_labelling(*assoc, mid1,
                                                restrict_labelling(*assoc, t, l, mid1), corolla);
            Labelling via2 = restrict_labelling(*assoc, mid2,
                                                restrict_labelling(*assoc, t, l, mid2), corolla);
            Labelling direct = restrict_labelling(*assoc, t, l, corolla);
            REQUIRE(via1 == direct);
            REQUIRE(via2 == direct);
        }
    }
    SECTION("nerve presheaves validate on the tree posets") {
        for (int n = 3; n <= 4; ++n) {
            LeafSet a = LeafSet::alphabet(n);
            auto tp = enumerate_trees(a, true);
            REQUIRE_NOTHROW(nerve(*comm, a, tp));
            REQUIRE_NOTHROW(nerve(*assoc, a, tp));
        }
    }
    SECTION("arity overflow is reported") {
        auto small = make_assoc(3);
        REQUIRE_THROWS_MATCHES(all_labellings(*small, Tree::corolla(4)), DomainError,
                               Catch::Matchers::Predicate<DomainError>([](const DomainError& e) {
                                   return e.code() == "ArityOverflow";
                               }));
    }
}

TEST_CASE("labelled partition complexes", "[operads]") {
    auto comm = make_comm(8);
    auto assoc = make_assoc(6);

    SECTION("the commutative labelled complex is the partition complex") {
        LeafSet a4 = LeafSet::alphabet(4);
        LabelledComplex lc = labelled_complex(*comm, a4);
        PartitionComplex pc = build_partition_complex(a4);
        REQUIRE(lc.complex.f_vector() == pc.nerve.f_vector());
        // structural identification: cells appear in the same chain order
        SimplicialMap m;
        m.images.resize(lc.complex.dimension() + 1);
        for (int d = 0; d <= lc.complex.dimension(); ++d)
            for (int i = 0; i < lc.complex.size(d); ++i) m.images[d].push_back({i, false});
        REQUIRE(check_simplicial_iso(lc.complex, pc.nerve, m).ok);
        REQUIRE(lc.target.poset.size() == 25);
    }
    SECTION("the associative labelled complex on three leaves is twelve points") {
        LeafSet a3 = LeafSet::alphabet(3);
        LabelledComplex lc = labelled_complex(*assoc, a3);
        REQUIRE(lc.complex.f_vector() == std::vector<long>{12});
    }
}

TEST_CASE("the labelled comparison is homotopy initial", "[operads]") {
    auto comm = make_comm(8);
    auto assoc = make_assoc(6);
    SECTION("commutative labels reproduce the unlabelled pipeline") {
        for (int n = 3; n <= 4; ++n) {
            LeafSet a = LeafSet::alphabet(n);
            InitialityReport rep = verify_labelled_comparison(*comm, a);
            REQUIRE(rep.pass);
            PartitionComplex pc = build_partition_complex(a);
            REQUIRE(same_homology(rep.source_homology,
                                  homology(pc.nerve, Ring::integers, true)));
        }
    }
    SECTION("associative labels on three leaves: twelve contractible components") {
        InitialityReport rep = verify_labelled_comparison(*assoc, LeafSet::alphabet(3));
        REQUIRE(rep.pass);
        REQUIRE(rep.source_homology.betti(0) == 11);
        REQUIRE(rep.homology_match);
    }
}

TEST_CASE("the simplicial bar construction", "[operads]") {
    auto comm = make_comm(8);
    auto assoc = make_assoc(6);
    SECTION("two leaves: a single generator in degree one") {
        ChainComplex c = bar_complex(*comm, LeafSet::alphabet(2));
        REQUIRE(c.dims == std::vector<long>{0, 1});
        HomologyResult h = homology(c);
        REQUIRE(h.betti(1) == 1);
    }
    SECTION("three leaves: basis sizes one and three, homology of rank two") {
        ChainComplex c = bar_complex(*comm, LeafSet::alphabet(3));
        REQUIRE(c.dims == std::vector<long>{0, 1, 3});
        HomologyResult h = homology(c);
        REQUIRE(h.betti(2) == 2);
        REQUIRE(h.betti(1) == 0);
    }
    SECTION("associative labels concentrate in the top degree") {
        ChainComplex c = bar_complex(*assoc, LeafSet::alphabet(3));
        HomologyResult h = homology(c);
        REQUIRE(h.betti(1) == 0);
        REQUIRE(h.betti(2) == 6);
    }
}

TEST_CASE("the tree-side bar model", "[operads]") {
    auto comm = make_comm(8);
    SECTION("two leaves: rank one in degree one") {
        HomologyResult h = homology(tree_bar_complex(*comm, LeafSet::alphabet(2)));
        REQUIRE(h.betti(1) == 1);
        REQUIRE(h.betti(0) == 0);
    }
    SECTION("three leaves: rank two in degree two") {
        HomologyResult h = homology(tree_bar_complex(*comm, LeafSet::alphabet(3)));
        REQUIRE(h.betti(2) == 2);
    }
    SECTION("four leaves: rank six in degree three") {
        HomologyResult h = homology(tree_bar_complex(*comm, LeafSet::alphabet(4)));
        REQUIRE(h.betti(3) == 6);
    }
}

TEST_CASE("the two bar models agree", "[operads]") {
    auto comm = make_comm(8);
    auto assoc = make_assoc(6);
    for (int n = 2; n <= 4; ++n) {
        BarCompareReport rep = compare_bars(*comm, LeafSet::alphabet(n));
        REQUIRE(rep.pass);
        REQUIRE_FALSE(rep.bar_z.has_torsion());
        // rank (n-1)! concentrated in degree n-1
        long fact = 1;
        for (int i = 2; i < n; ++i) fact *= i;
        REQUIRE(rep.bar_z.betti(n - 1) == fact);
    }
    for (int n = 3; n <= 4; ++n)
        REQUIRE(compare_bars(*assoc, LeafSet::alphabet(n)).pass);
}

TEST_CASE("operads load from table files", "[operads]") {
    const std::string path = write_comm_table_file();
    auto table = load_operad(path);
    REQUIRE(table->name() == "comm-table");
    REQUIRE(table->size(3) == 1);
    // the table-backed operad reproduces the built-in commutative pipelines
    auto comm = make_comm(4);
    for (int n = 2; n <= 4; ++n) {
        LeafSet a = LeafSet::alphabet(n);
        REQUIRE(same_homology(homology(bar_complex(*table, a)),
                              homology(bar_complex(*comm, a))));
    }
    std::remove(path.c_str());

    SECTION("missing composition entries are rejected") {
        nlohmann::json doc;
        doc["name"] = "broken";
        doc["max_arity"] = 3;
        doc["operations"] = {{"2", {"m"}}, {"3", {"m"}}};
        doc["actions"] = nlohmann::json::array();
        for (int n = 2; n <= 3; ++n) {
            std::vector<int> p(n);
            std::iota(p.begin(), p.end(), 0);
            do {
                doc["actions"].push_back({{"arity", n}, {"perm", p}, {"images", {0}}});
            } while (std::next_permutation(p.begin(), p.end()));
        }
        doc["compositions"] = nlohmann::json::array();  // none: incomplete
        std::ofstream f("broken_operad.json");
        f << doc.dump();
        f.close();
        REQUIRE_THROWS_MATCHES(load_operad("broken_operad.json"), DomainError,
                               Catch::Matchers::Predicate<DomainError>([](const DomainError& e) {
                                   return e.code() == "IncompleteTable";
                               }));
        std::remove("broken_operad.json");
    }
    SECTION("unreadable files are rejected") {
        REQUIRE_THROWS_MATCHES(load_operad("no_such_file.json"), DomainError,
                               Catch::Matchers::Predicate<DomainError>([](const DomainError& e) {
                                   return e.code() == "BadOperadFile";
                               }));
    }
}
