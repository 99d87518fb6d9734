#include "doctest.h"
#include "flagtrans/group.hpp"
#include "oracles.hpp"

#include <functional>
#include <random>
#include <set>

using namespace flagtrans;
using namespace oracle;

namespace {

PermGroup grp(std::size_t n, std::vector<std::string> gens) {
    std::vector<Permutation> ps;
    for (const auto& g : gens) ps.push_back(parse_perm(g, n));
    return PermGroup::from_generators(ps);
}

}  // namespace

TEST_CASE("order from generators") {
    CHECK(grp(5, {"(1,2)", "(1,2,3,4,5)"}).order() == 120);
    auto a5 = grp(5, {"(1,2,3)", "(3,4,5)"});
    CHECK(a5.order() == closure(a5.generators()).size());
    CHECK(a5.order() == 60);
    CHECK(grp(5, {"()"}).order() == 1);
    CHECK(grp(10, {"(1,2)", "(1,2,3,4,5,6,7,8,9,10)"}).order() == 3628800);
    CHECK(grp(6, {"(1,2,3)", "(2,3,4,5,6)"}).order() == 360);
    CHECK_THROWS_AS(PermGroup::from_generators({}), GroupError);
    CHECK_THROWS_AS(PermGroup::from_generators({Permutation(3), Permutation(4)}), GroupError);
}

TEST_CASE("order agrees with closure on random small groups") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = 3 + rng() % 5;
        std::vector<Permutation> gens{random_perm(n, rng)};
        if (rng() & 1) gens.push_back(random_perm(n, rng));
        auto G = PermGroup::from_generators(gens);
        CHECK(G.order() == closure(gens).size());
    }
}

TEST_CASE("order is invariant under reordering and random products of generators") {
    auto G = grp(8, {"(1,2,3,4,5,6,7,8)", "(1,2)(3,5)", "(2,6,7)"});
    std::vector<Permutation> rev(G.generators().rbegin(), G.generators().rend());
    CHECK(PermGroup::from_generators(rev).order() == G.order());
    std::vector<Permutation> prods;
    for (std::uint64_t s = 1; s <= 4; ++s) prods.push_back(G.random_element(s));
    auto H = PermGroup::from_generators(prods);
    CHECK(H.order() <= G.order());
    for (const auto& p : prods) CHECK(G.contains(p));
    // products of generators stay in the group and regenerate it together with the originals
    prods.insert(prods.end(), G.generators().begin(), G.generators().end());
    CHECK(PermGroup::from_generators(prods).order() == G.order());
}

TEST_CASE("membership") {
    auto a5 = grp(5, {"(1,2,3)", "(3,4,5)"});
    CHECK_FALSE(a5.contains(parse_perm("(1,2)", 5)));
    CHECK(a5.contains(parse_perm("(1,2,3)", 5)));
    CHECK(a5.contains(compose(compose(a5.generators()[0], a5.generators()[1]), a5.generators()[0])));
    CHECK_THROWS_AS(a5.contains(Permutation(4)), GroupError);
    auto els = closure(a5.generators());
    int inside = 0;
    std::vector<std::uint32_t> img{0, 1, 2, 3, 4};
    do {
        auto p = Permutation::from_images0(img);
        bool in = a5.contains(p);
        CHECK(in == (els.count(p) == 1));
        inside += in;
    } while (std::next_permutation(img.begin(), img.end()));
    CHECK(inside == 60);
}

TEST_CASE("orbits") {
    auto a5 = grp(5, {"(1,2,3)", "(3,4,5)"});
    CHECK(a5.orbit(1) == std::vector<Point>{1, 2, 3, 4, 5});
    CHECK(grp(4, {"(1,2)(3,4)"}).orbit(1) == std::vector<Point>{1, 2});
    CHECK(grp(5, {"()"}).orbit(3) == std::vector<Point>{3});
    CHECK_THROWS_AS(a5.orbit(6), GroupError);
}

TEST_CASE("stabilizers") {
    auto s5 = grp(5, {"(1,2)", "(1,2,3,4,5)"});
    CHECK(s5.stabilizer(5).order() == 24);
    auto a5 = grp(5, {"(1,2,3)", "(3,4,5)"});
    auto st = a5.stabilizer(1);
    CHECK(st.order() == 12);
    for (const auto& g : st.generators()) CHECK(g(1) == 1);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 30; ++t) {
        std::size_t n = 4 + rng() % 6;
        auto G = PermGroup::from_generators({random_perm(n, rng), random_perm(n, rng)});
        Point x = 1 + static_cast<Point>(rng() % n);
        CHECK(G.orbit(x).size() * G.stabilizer(x).order() == G.order());
    }
}

TEST_CASE("set orbits") {
    auto s5 = grp(5, {"(1,2)", "(1,2,3,4,5)"});
    std::vector<Point> S{1, 2, 3};
    auto o = set_orbit(s5, S);
    CHECK(o.size() == 10);
    CHECK(std::vector<Point>(o[0].begin(), o[0].end()) == S);
    CHECK(set_orbit(grp(5, {"()"}), std::vector<Point>{2, 4}).size() == 1);
    CHECK_THROWS_AS(set_orbit(s5, std::vector<Point>{}), GroupError);
    CHECK_FALSE(set_orbit_bounded(s5, S, 9).has_value());
}

TEST_CASE("coset action recovers the natural action") {
    auto s5 = grp(5, {"(1,2)", "(1,2,3,4,5)"});
    auto res = coset_action(s5, s5.stabilizer(5));
    CHECK(res.image_group.degree() == 5);
    CHECK(res.image_group.order() == 120);
    CHECK(res.labeling.size() == 5);
    CHECK(res.labeling[0].is_identity());
    auto a5 = grp(5, {"(1,2,3)", "(3,4,5)"});
    auto d10 = grp(5, {"(1,2,3,4,5)", "(2,5)(3,4)"});
    auto six = coset_action(a5, d10);
    CHECK(six.image_group.degree() == 6);
    CHECK(six.image_group.is_transitive());
    CHECK(six.image_group.order() == 60);
    CHECK(six.image_group.is_primitive());
    CHECK(six.image_group.stabilizer(1).order() == 10);
    CHECK(coset_action(s5, s5.stabilizer(2)).image_group.degree() == s5.orbit(2).size());
    CHECK_THROWS_AS(coset_action(a5, grp(5, {"(1,2)"})), GroupError);
    CHECK_THROWS_AS(coset_action(s5, grp(5, {"()"}), 100), GroupError);
}

TEST_CASE("coset labeling is breadth-first over generators") {
    auto s4 = grp(4, {"(1,2,3,4)", "(1,2)"});
    auto H = s4.stabilizer(4);
    auto res = coset_action(s4, H);
    // labels are in order of discovery: coset of rep[i]*g is new -> next label
    for (std::size_t i = 0; i < res.labeling.size(); ++i)
        for (std::size_t s = 0; s < s4.generators().size(); ++s) {
            auto img = res.image_group.generators()[s].at0(i);
            auto x = compose(compose(res.labeling[i], s4.generators()[s]), inverse(res.labeling[img]));
            CHECK(H.contains(x));
        }
}

TEST_CASE("canonical coset representative is constant on cosets") {
    auto s6 = grp(6, {"(1,2)", "(1,2,3,4,5,6)"});
    auto H = grp(6, {"(1,2,3)", "(1,2)", "(4,5)"});
    std::mt19937_64 rng(9);
    for (int t = 0; t < 50; ++t) {
        auto g = s6.random_element(rng());
        auto h = H.random_element(rng());
        CHECK(H.canonical_right_coset_rep(g) == H.canonical_right_coset_rep(compose(h, g)));
    }
}

TEST_CASE("transitivity and primitivity") {
    CHECK(grp(5, {"(1,2,3)", "(3,4,5)"}).is_transitive());
    CHECK_FALSE(grp(3, {"(1,2)"}).is_transitive());
    CHECK_FALSE(grp(4, {"(1,2,3,4)"}).is_primitive());
    CHECK(grp(5, {"(1,2)", "(1,2,3,4,5)"}).is_primitive());
    CHECK_THROWS_AS(grp(3, {"(1,2)"}).is_primitive(), GroupError);
}

TEST_CASE("is_primitive matches brute-force partition search up to degree 8") {
    std::mt19937_64 rng(17);
    int tested = 0, primitive = 0;
    std::vector<PermGroup> groups;
    for (std::size_t n = 2; n <= 8; ++n) {
        std::vector<std::uint32_t> cyc(n);
        for (std::size_t i = 0; i < n; ++i) cyc[i] = static_cast<std::uint32_t>((i + 1) % n);
        groups.push_back(PermGroup::from_generators({Permutation::from_images0(cyc)}));
    }
    groups.push_back(grp(8, {"(1,2,3,4,5,6,7,8)", "(1,5)(2,6)"}));
    groups.push_back(grp(6, {"(1,2,3)(4,5,6)", "(1,4)(2,5)(3,6)"}));
    groups.push_back(grp(8, {"(1,2,3,4)(5,6,7,8)", "(1,5)(2,6)(3,7)(4,8)", "(1,2)(3,4)"}));
    groups.push_back(grp(7, {"(1,2,3,4,5,6,7)", "(2,3,5)(4,7,6)"}));
    groups.push_back(grp(8, {"(1,2,4,8)(3,5,6,7)", "(1,2)(3,4)(5,6)(7,8)", "(2,3,5)(4,7,6)"}));
    while (groups.size() < 400) {
        std::size_t n = 3 + rng() % 6;
        std::vector<Permutation> gens{random_perm(n, rng)};
        if (rng() % 3) gens.push_back(random_perm(n, rng));
        // sparse permutations give imprimitive transitive groups often enough
        if (rng() & 1) {
            std::vector<std::uint32_t> img(n);
            for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<std::uint32_t>(i);
            std::swap(img[0], img[n / 2]);
            gens.push_back(Permutation::from_images0(img));
        }
        groups.push_back(PermGroup::from_generators(gens));
    }
    for (const auto& G : groups) {
        if (!G.is_transitive()) continue;
        ++tested;
        bool p = brute_primitive(G);
        primitive += p;
        CHECK(G.is_primitive() == p);
    }
    CHECK(tested > 100);
    CHECK(primitive > 10);
    CHECK(primitive < tested);
}

TEST_CASE("subgroup orbit signatures") {
    auto sig = subgroup_orbits(5, grp(5, {"()"}));
    REQUIRE(sig.lengths.size() == 1);
    CHECK(sig.lengths[0] == std::pair<std::size_t, std::size_t>{1, 5});
    auto s2 = subgroup_orbits(6, grp(6, {"(1,2)(3,4,5)"}));
    CHECK(s2.lengths == std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}, {2, 1}, {3, 1}});
    std::size_t total = 0;
    for (const auto& o : s2.orbits) total += o.size();
    CHECK(total == 6);
    CHECK_THROWS_AS(subgroup_orbits(7, grp(6, {"()"})), GroupError);
}

TEST_CASE("orbits from generators agree with the stabilizer chain") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 100; ++t) {
        std::size_t n = 4 + rng() % 9;
        std::vector<Permutation> gens{random_perm(n, rng)};
        if (rng() % 2) gens.push_back(random_perm(n, rng));
        auto G = PermGroup::from_generators(gens);
        CHECK(subgroup_orbits(n, std::span<const Permutation>(gens)).orbits == G.orbits());
    }
}

TEST_CASE("transporter") {
    auto G = grp(7, {"(1,2,3)", "(4,5)(6,7)", "(3,4)", "(5,6)"});
    for (Point a = 1; a <= 7; ++a)
        for (Point b = 1; b <= 7; ++b) {
            auto t = transporter(G, a, b);
            REQUIRE(t);
            CHECK((*t)(a) == b);
            CHECK(G.contains(*t));
        }
    auto H = grp(6, {"(1,2)", "(4,5,6)"});
    CHECK_FALSE(transporter(H, 1, 4));
    CHECK(transporter(H, 4, 6));
}

TEST_CASE("short stabilizer generates the full point stabilizer") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
        std::size_t n = 5 + rng() % 8;
        auto G = PermGroup::from_generators({random_perm(n, rng), random_perm(n, rng)});
        Point x = 1 + static_cast<Point>(rng() % n);
        auto S = short_stabilizer(G, x, t);
        auto full = G.stabilizer(x);
        CHECK(S.order() == full.order());
        for (const auto& g : S.generators()) {
            CHECK(g(x) == x);
            CHECK(G.contains(g));
        }
    }
}

TEST_CASE("pair orbitals") {
    auto s6 = grp(6, {"(1,2)", "(1,2,3,4,5,6)"});
    auto po = pair_orbitals(s6);
    CHECK(po.size == std::vector<std::uint64_t>{15});
    auto c7 = grp(7, {"(1,2,3,4,5,6,7)"});
    auto pc = pair_orbitals(c7);
    CHECK(pc.size == std::vector<std::uint64_t>{7, 7, 7});
    CHECK(pc.id[pc.index(1, 2)] == pc.id[pc.index(7, 1)]);
    CHECK(pc.id[pc.index(1, 2)] != pc.id[pc.index(1, 3)]);
    CHECK(pc.index(3, 5) == pc.index(5, 3));
    CHECK_THROWS_AS(pc.index(2, 2), GroupError);

    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
        std::size_t n = 4 + rng() % 9;
        std::vector<Permutation> gens{random_perm(n, rng)};
        auto G = PermGroup::from_generators(gens);
        auto p = pair_orbitals(G);
        std::uint64_t total = 0;
        for (auto s : p.size) total += s;
        CHECK(total == n * (n - 1) / 2);
        // Each orbital is the orbit of its first pair under the group.
        auto els = closure(gens);
        for (Point x = 1; x <= n; ++x)
            for (Point y = x + 1; y <= n; ++y) {
                std::set<std::pair<Point, Point>> orb;
                for (const auto& g : els) orb.insert(std::minmax(g(x), g(y)));
                CHECK(orb.size() == p.size[p.id[p.index(x, y)]]);
                for (auto [a, b] : orb) CHECK(p.id[p.index(a, b)] == p.id[p.index(x, y)]);
            }
    }
}
