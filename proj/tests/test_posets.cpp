#include <algorithm>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "partree/comparison.hpp"
#include "partree/operads.hpp"
#include "partree/partitions.hpp"
#include "partree/posets.hpp"

using namespace partree;

namespace {

Poset chain_poset(int n) {
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> rel;
    for (int i = 0; i < n; ++i) {
        labels.push_back("c" + std::to_string(i));
        if (i + 1 < n) rel.push_back({i, i + 1});
    }
    return Poset::from_relation(labels, rel);
}

Poset antichain(int n) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("a" + std::to_string(i));
    return Poset::from_relation(labels, {});
}

MonotoneMap identity_map(const Poset& p) {
    std::vector<int> id(p.size());
    std::iota(id.begin(), id.end(), 0);
    return MonotoneMap::build(p, p, std::move(id));
}

}  // namespace

TEST_CASE("poset construction validates the axioms", "[posets]") {
    REQUIRE_NOTHROW(Poset::from_relation({"a", "b"}, {{0, 1}}));
    REQUIRE_THROWS_MATCHES(Poset::from_relation({"a", "b"}, {{0, 1}, {1, 0}}), DomainError,
                           Catch::Matchers::Predicate<DomainError>([](const DomainError& e) {
                               return e.code() == "NotAntisymmetric";
                           }));
    // closure: 0 <= 2 through 1
    Poset p = Poset::from_relation({"x", "y", "z"}, {{0, 1}, {1, 2}});
    REQUIRE(p.leq(0, 2));
}

TEST_CASE("order complexes", "[posets]") {
    SECTION("an antichain gives isolated points") {
        SimplicialSet x = order_complex(antichain(3));
        REQUIRE(x.f_vector() == std::vector<long>{3});
    }
    SECTION("a chain of three elements gives the 2-simplex") {
        SimplicialSet x = order_complex(chain_poset(3));
        SimplicialSet d2 = standard_simplex(2);
        REQUIRE(x.f_vector() == d2.f_vector());
        // explicit isomorphism: chains map by their vertex sets
        SimplicialMap m;
        m.images.resize(3);
        for (int d = 0; d <= 2; ++d)
            for (int i = 0; i < x.size(d); ++i) {
                // both complexes list simplices in the same lexicographic order
                m.images[d].push_back({i, false});
            }
        REQUIRE(check_simplicial_iso(x, d2, m).ok);
    }
    SECTION("the nontrivial partition poset on four leaves") {
        LeafSet a = LeafSet::alphabet(4);
        Poset p = partition_poset(a);
        SimplicialSet np = order_complex(p);
        // oracle: count comparable pairs directly
        auto parts = all_partitions(a, true);
        long pairs = 0;
        for (const auto& x : parts)
            for (const auto& y : parts)
                if (!(x == y) && partition_leq(x, y)) ++pairs;
        REQUIRE(np.f_vector() == std::vector<long>{13, pairs});
        REQUIRE(pairs == 18);
        HomologyResult h = homology(np, Ring::integers, true);
        REQUIRE(h.betti(1) == 6);
    }
}

TEST_CASE("slices of monotone maps", "[posets]") {
    Poset c3 = chain_poset(3);
    MonotoneMap id = identity_map(c3);
    SECTION("identity slices are principal down-sets") {
        REQUIRE(slice(id, 2).size() == 3);
        REQUIRE(slice(id, 0).size() == 1);
        for (int q = 0; q < c3.size(); ++q) {
            std::vector<int> elements;
            slice(id, q, &elements);
            for (int i = 0; i < c3.size(); ++i) {
                const bool in_downset = c3.leq(i, q);
                const bool in_slice =
                    std::find(elements.begin(), elements.end(), i) != elements.end();
                REQUIRE(in_downset == in_slice);
            }
        }
    }
    SECTION("missing elements are reported") {
        REQUIRE_THROWS_MATCHES(slice(id, "nope"), DomainError,
                               Catch::Matchers::Predicate<DomainError>([](const DomainError& e) {
                                   return e.code() == "ElementNotFound";
                               }));
    }
    SECTION("the slice of the layer-forgetting projection over a small tree") {
        LeafSet a = LeafSet::alphabet(4);
        PhiModel model = phi_sd_model(a);
        Tree t = Tree::validate_labels(a, {{"a", "b", "c", "d"}, {"a", "b"}});
        const int q = model.tplus.find(t.to_string(a));
        REQUIRE(q >= 0);
        Poset s = slice(model.map, q);
        // oracle: chains of nontrivial partitions all of whose size->=2 blocks
        // lie in the family; brute force leaves exactly one 0-chain
        PartitionComplex pc = build_partition_complex(a);
        long expected = 0;
        for (const auto& layer : pc.chains)
            for (const auto& ch : layer) {
                bool ok = true;
                for (int p : ch)
                    for (const auto& b : pc.partitions[p].nonsingleton_blocks())
                        if (!t.has_member(b)) ok = false;
                if (ok) ++expected;
            }
        REQUIRE(expected == 1);
        REQUIRE(s.size() == 1);
        REQUIRE(s.label(0) == "[(a,b)(c)(d)]");
    }
}

TEST_CASE("homotopy initiality checking", "[posets]") {
    SECTION("identities pass") {
        InitialityReport rep = check_homotopy_initial(identity_map(chain_poset(4)));
        REQUIRE(rep.pass);
        REQUIRE(rep.homology_match);
    }
    SECTION("collapsing an antichain to a point fails") {
        Poset two = antichain(2);
        Poset one = antichain(1);
        MonotoneMap f = MonotoneMap::build(two, one, {0, 0});
        InitialityReport rep = check_homotopy_initial(f);
        REQUIRE_FALSE(rep.pass);
        REQUIRE(rep.slices.size() == 1);
        REQUIRE(rep.slices[0].nonempty);
        REQUIRE_FALSE(rep.slices[0].contractible);
    }
}

TEST_CASE("posets with extrema have contractible order complexes", "[posets]") {
    std::mt19937 rng(321);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 4);
        std::vector<std::pair<int, int>> rel;
        for (int i = 1; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 10 < 4) rel.push_back({i, j});
        // element 0 is forced below everything (a minimum)
        for (int i = 1; i < n; ++i) rel.push_back({0, i});
        std::vector<std::string> labels;
        for (int i = 0; i < n; ++i) labels.push_back("m" + std::to_string(i));
        Poset p = Poset::from_relation(labels, rel);
        REQUIRE(homology(order_complex(p), Ring::integers, true).is_zero());
    }
}

TEST_CASE("slices are preimages of principal down-sets", "[posets]") {
    LeafSet a = LeafSet::alphabet(4);
    PhiModel model = phi_sd_model(a);
    for (int q = 0; q < model.tplus.size(); ++q) {
        std::vector<int> elements;
        slice(model.map, q, &elements);
        std::set<int> got(elements.begin(), elements.end());
        std::set<int> expected;
        for (int i = 0; i < model.sd.size(); ++i)
            if (model.tplus.leq(model.map.map[i], q)) expected.insert(i);
        REQUIRE(got == expected);
    }
}

TEST_CASE("linear extensions", "[posets]") {
    REQUIRE(linear_extensions(antichain(2)).size() == 2);
    REQUIRE(linear_extensions(chain_poset(3)).size() == 1);

    SECTION("the vertex poset of the six-leaf example tree has two extensions") {
        LeafSet a = LeafSet::alphabet(6);
        Tree t = Tree::validate_labels(
            a, {{"a", "b", "c", "d", "e", "f"}, {"a", "b", "c", "d", "e"}, {"a", "b"},
                {"c", "d", "e"}});
        REQUIRE(linear_extensions(vertex_poset(a, t)).size() == 2);
    }

    SECTION("counts agree with the brute-force permutation filter") {
        std::mt19937 rng(4242);
        for (int trial = 0; trial < 8; ++trial) {
            const int n = 3 + static_cast<int>(rng() % 4);  // up to 6 elements
            std::vector<std::pair<int, int>> rel;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (rng() % 10 < 3) rel.push_back({i, j});
            std::vector<std::string> labels;
            for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
            Poset p = Poset::from_relation(labels, rel);

            long oracle = 0;
            std::vector<int> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            do {
                std::vector<int> position(n);
                for (int i = 0; i < n; ++i) position[perm[i]] = i;
                bool extends = true;
                for (int i = 0; i < n && extends; ++i)
                    for (int j = 0; j < n && extends; ++j)
                        if (p.lt(i, j) && position[i] > position[j]) extends = false;
                if (extends) ++oracle;
            } while (std::next_permutation(perm.begin(), perm.end()));

            REQUIRE(static_cast<long>(linear_extensions(p).size()) == oracle);
        }
    }
}

TEST_CASE("categories of elements", "[posets]") {
    SECTION("a constant singleton presheaf reproduces the base") {
        Poset p = chain_poset(3);
        ElementsPoset e = elements_poset(p, Presheaf::constant(p, {"*"}));
        REQUIRE(e.poset.size() == p.size());
        for (int i = 0; i < p.size(); ++i)
            for (int j = 0; j < p.size(); ++j)
                REQUIRE(e.poset.leq(i, j) == p.leq(i, j));
    }
    SECTION("constant presheaves have product size and constant fibers") {
        Poset p = antichain(3);
        ElementsPoset e = elements_poset(p, Presheaf::constant(p, {"u", "v"}));
        REQUIRE(e.poset.size() == 6);
        std::vector<int> fiber(p.size(), 0);
        for (auto [base, x] : e.elements) ++fiber[base];
        for (int f : fiber) REQUIRE(f == 2);
    }
    SECTION("one bottom, two tops") {
        Poset p = chain_poset(2);
        Presheaf f;
        f.sets = {{"u"}, {"v", "w"}};
        f.restriction[{0, 0}] = {0};
        f.restriction[{1, 1}] = {0, 1};
        f.restriction[{0, 1}] = {0, 0};
        ElementsPoset e = elements_poset(p, f);
        REQUIRE(e.poset.size() == 3);
        REQUIRE(e.poset.minimal_elements().size() == 1);
    }
    SECTION("labellings of the three trees of T+ on three leaves") {
        LeafSet a = LeafSet::alphabet(3);
        auto assoc = make_assoc(6);
        TreePosetResult tp = enumerate_trees(a, false);
        Presheaf f = nerve(*assoc, a, tp);
        ElementsPoset e = elements_poset(tp.poset, f);
        // oracle: each two-vertex tree carries 2 x 2 labellings
        REQUIRE(tp.trees.size() == 3);
        long expected = 0;
        for (const auto& t : tp.trees) {
            long count = 1;
            for (const auto& m : t.family()) count *= [&] {
                const int arity = static_cast<int>(t.children(m).size());
                long fact = 1;
                for (int i = 2; i <= arity; ++i) fact *= i;
                return fact;
            }();
            expected += count;
        }
        REQUIRE(expected == 12);
        REQUIRE(e.poset.size() == 12);
    }
    SECTION("broken restrictions are rejected") {
        Poset p = chain_poset(2);
        Presheaf f;
        f.sets = {{"u"}, {"v"}};
        f.restriction[{0, 0}] = {0};
        f.restriction[{1, 1}] = {0};
        // missing (0, 1)
        REQUIRE_THROWS(elements_poset(p, f));
    }
}
