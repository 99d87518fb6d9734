#include "doctest.h"
#include "flagtrans/classify.hpp"
#include "published_tables.hpp"

#include <set>

using namespace flagtrans;

namespace {

const Catalog& reference() {
    static const Catalog c = load_catalog(FLAGTRANS_CATALOG_PATH);
    return c;
}

std::vector<Permutation> elements(const PermGroup& G) {
    std::set<Permutation> seen{Permutation(G.degree())};
    std::vector<Permutation> out{Permutation(G.degree())};
    for (std::size_t i = 0; i < out.size(); ++i)
        for (const auto& g : G.generators()) {
            auto p = compose(out[i], g);
            if (seen.insert(p).second) out.push_back(p);
        }
    return out;
}

std::set<Permutation> closure(std::vector<Permutation> gens, std::size_t degree) {
    std::set<Permutation> seen{Permutation(degree)};
    std::vector<Permutation> todo{Permutation(degree)};
    while (!todo.empty()) {
        auto p = todo.back();
        todo.pop_back();
        for (const auto& g : gens) {
            auto q = compose(p, g);
            if (seen.insert(q).second) todo.push_back(q);
        }
    }
    return seen;
}

std::set<Permutation> conjugate(const std::set<Permutation>& H, const Permutation& g) {
    std::set<Permutation> out;
    for (const auto& h : H) out.insert(compose(compose(inverse(g), h), g));
    return out;
}

// Restricts the reference catalog to the listed groups.
Catalog restricted(const std::set<std::string>& keep) {
    const Catalog& ref = reference();
    Catalog c;
    for (const auto& g : ref.groups)
        if (keep.count(g.id)) c.groups.push_back(g);
    for (const auto& m : ref.max_subgroups)
        if (keep.count(m.group_id)) c.max_subgroups.push_back(m);
    for (const auto& s : ref.census)
        if (keep.count(s.group_id)) c.census.push_back(s);
    for (const auto& s : ref.subgroup_classes)
        if (keep.count(s.group_id)) c.subgroup_classes.push_back(s);
    for (auto d : ref.designs) {
        std::vector<Realization> all{d.primary()};
        all.insert(all.end(), d.alternates.begin(), d.alternates.end());
        std::erase_if(all, [&](const auto& r) { return !keep.count(r.group_id); });
        if (all.empty()) continue;
        d.group_id = all[0].group_id;
        d.action_ref = all[0].action_ref;
        d.base_block = all[0].base_block;
        d.alternates.assign(all.begin() + 1, all.end());
        c.designs.push_back(d);
    }
    return c;
}

}  // namespace

TEST_CASE("step1: no subgroup of index 2880 in S9") {
    auto r = step1_candidates(reference(), "S9", "3^3:(2xS4)", 2880);
    CHECK(r.candidates.empty());
    CHECK(r.coverage == Coverage::catalog);
    REQUIRE(r.census_classes);
    CHECK(*r.census_classes == 0);
}

TEST_CASE("step1: index not dividing the group order") {
    auto r = step1_candidates(reference(), "A5", "A4", 7);
    CHECK(r.candidates.empty());
    CHECK(r.coverage == Coverage::catalog);
    CHECK_THROWS_AS(step1_candidates(reference(), "A5", "S9", 10), CatalogError);
}

TEST_CASE("step1: seventeen classes of index 11340 in S9") {
    const Catalog& c = reference();
    auto r = step1_candidates(c, "S9", "3^3:(2xS4)", 11340);
    CHECK(r.coverage == Coverage::catalog);
    REQUIRE(r.candidates.size() == 17);
    const PermGroup& Gv = c.resolve_action("S9", "3^3:(2xS4)").group;
    for (std::size_t i = 0; i < r.candidates.size(); ++i) {
        CHECK(r.candidates[i].class_no == static_cast<int>(i + 1));
        PermGroup H = PermGroup::from_generators(r.candidates[i].generators);
        CHECK(H.order() == 32);
        for (const auto& h : H.generators()) CHECK(Gv.contains(h));
    }
}

TEST_CASE("step1: order-6 subgroups of A5 on 6 points match a brute-force search") {
    const Catalog& c = reference();
    const PermGroup& Gv = c.resolve_action("A5", "D10").group;
    auto els = elements(Gv);
    REQUIRE(els.size() == 60);
    // Every subgroup of A5 is generated by two elements.
    std::set<std::set<Permutation>> subs;
    for (const auto& x : els)
        for (const auto& y : els) {
            auto H = closure({x, y}, 6);
            if (H.size() == 6) subs.insert(H);
        }
    std::vector<std::set<std::set<Permutation>>> classes;
    for (const auto& H : subs) {
        bool known = false;
        for (const auto& cls : classes) known |= cls.count(H) > 0;
        if (known) continue;
        std::set<std::set<Permutation>> cls;
        for (const auto& g : els) cls.insert(conjugate(H, g));
        classes.push_back(cls);
    }
    CHECK(subs.size() == 10);

    auto r = step1_candidates(c, "A5", "D10", 10);
    CHECK(r.coverage == Coverage::catalog);
    REQUIRE(r.candidates.size() == classes.size());
    std::set<std::size_t> hit;
    for (const auto& cand : r.candidates) {
        auto H = closure(cand.generators, 6);
        CHECK(H.size() == 6);
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (classes[i].count(H)) hit.insert(i);
    }
    CHECK(hit.size() == classes.size());
}

TEST_CASE("step2 on the order-32 classes of S9") {
    const Catalog& c = reference();
    const PermGroup& Gv = c.resolve_action("S9", "3^3:(2xS4)").group;
    auto r = step1_candidates(c, "S9", "3^3:(2xS4)", 11340);
    REQUIRE(r.candidates.size() == 17);

    auto s1 = step2_orbit_filter(Gv, PermGroup::from_generators(r.candidates[0].generators), 32, 11340);
    CHECK(s1.qualifying().empty());
    REQUIRE(s1.k_orbits.size() == 3);
    for (const auto& ko : s1.k_orbits) CHECK(ko.set_orbit_size == 2835);

    auto s13 = step2_orbit_filter(Gv, PermGroup::from_generators(r.candidates[12].generators), 32, 11340);
    auto q = s13.qualifying();
    REQUIRE(q.size() == 2);
    for (const auto& ko : q) CHECK(ko.orbit.size() == 32);

    auto id = step2_orbit_filter(Gv, PermGroup::from_generators({Permutation(280)}), 32, 11340);
    CHECK(id.k_orbits.empty());
    CHECK(id.signature.lengths == std::vector<std::pair<std::size_t, std::size_t>>{{1, 280}});
}

TEST_CASE("step2 set-orbit sizes under the point stabilizer match full set orbits") {
    const Catalog& c = reference();
    const PermGroup& Gv = c.resolve_action("S9", "3^3:(2xS4)").group;
    auto r = step1_candidates(c, "S9", "3^3:(2xS4)", 11340);
    REQUIRE(r.candidates.size() == 17);
    for (std::size_t i : {0u, 3u, 7u, 9u, 12u}) {
        auto s = step2_orbit_filter(Gv, PermGroup::from_generators(r.candidates[i].generators), 32, 11340);
        for (const auto& ko : s.k_orbits) CHECK(ko.set_orbit_size == set_orbit(Gv, ko.orbit).size());
    }
    // Every subgroup class of some small actions, every block size.
    for (auto [g, h] : {std::pair{"A6", "3^2:4"}, std::pair{"S6", "S4x2"}, std::pair{"A7", "L2(7)"}, std::pair{"S7", "S5x2"}}) {
        CAPTURE(g);
        const auto& act = c.resolve_action(g, h);
        const std::uint64_t order = c.group(g).expected_order;
        for (const auto& cls : c.subgroup_classes) {
            if (cls.group_id != g || cls.order == order) continue;
            std::vector<Permutation> gens;
            for (const auto& x : cls.generators) gens.push_back(act.induced(x));
            for (std::size_t k = 3; k + 1 < act.group.degree(); ++k) {
                auto s = step2_orbit_filter(act.group, std::span<const Permutation>(gens), k, order / cls.order,
                                            &act.image_point_stabilizer);
                for (const auto& ko : s.k_orbits) CHECK(ko.set_orbit_size == set_orbit(act.group, ko.orbit).size());
            }
        }
    }
}

TEST_CASE("step3 through pair orbitals agrees with developing every block") {
    const Catalog& c = reference();
    std::size_t compared = 0, survived = 0;
    for (auto [g, h] : {std::pair{"A6", "3^2:4"}, std::pair{"S6", "S4x2"}, std::pair{"A7", "L2(7)"}, std::pair{"S7", "S5x2"},
                        std::pair{"M10", "5:4"}}) {
        CAPTURE(g);
        const auto& act = c.resolve_action(g, h);
        const std::size_t v = act.group.degree();
        const std::uint64_t order = c.group(g).expected_order;
        for (const auto& cls : c.subgroup_classes) {
            if (cls.group_id != g || cls.order == order) continue;
            const std::uint64_t b = order / cls.order;
            std::vector<Permutation> gens;
            for (const auto& x : cls.generators) gens.push_back(act.induced(x));
            for (std::size_t k = 3; k + 1 < v; ++k) {
                if ((b * k) % v != 0) continue;
                const std::uint64_t r = b * k / v;
                if ((r * (k - 1)) % (v - 1) != 0) continue;
                ParamTuple t{v, b, r, k, r * (k - 1) / (v - 1)};
                auto s2 = step2_orbit_filter(act.group, std::span<const Permutation>(gens), k, b, &act.image_point_stabilizer);
                for (const auto& ko : s2.qualifying()) {
                    auto fast = step3_lambda_check(act.group, act.pair_orbitals, ko.orbit, t);
                    auto slow = step3_lambda_check(act.group, ko.orbit, t);
                    ++compared;
                    survived += slow.survives;
                    CHECK(fast.survives == slow.survives);
                    CHECK(fast.check.is_2design == slow.check.is_2design);
                    CHECK(fast.check.params == slow.check.params);
                    CHECK(fast.check.replication_witness.has_value() == slow.check.replication_witness.has_value());
                    REQUIRE(fast.check.lambda_witness.has_value() == slow.check.lambda_witness.has_value());
                    if (slow.check.lambda_witness) {
                        const auto &a = *fast.check.lambda_witness, &z = *slow.check.lambda_witness;
                        CHECK(std::tie(a.x1, a.y1, a.count1, a.x2, a.y2, a.count2) ==
                              std::tie(z.x1, z.y1, z.count1, z.x2, z.y2, z.count2));
                    }
                    CHECK(fast.design.has_value() == slow.design.has_value());
                    if (fast.design && slow.design) CHECK(*fast.design == *slow.design);
                }
            }
        }
    }
    const auto& s9 = c.resolve_action("S9", "3^3:(2xS4)");
    auto r = step1_candidates(c, "S9", "3^3:(2xS4)", 11340);
    const ParamTuple t{280, 11340, 1296, 32, 144};
    for (std::size_t i = 9; i < 17; ++i)
        for (const auto& ko : step2_orbit_filter(s9.group, std::span<const Permutation>(r.candidates[i].generators), 32,
                                                 11340, &s9.image_point_stabilizer)
                                  .qualifying()) {
            auto fast = step3_lambda_check(s9.group, s9.pair_orbitals, ko.orbit, t);
            auto slow = step3_lambda_check(s9.group, ko.orbit, t);
            ++compared;
            survived += slow.survives;
            CHECK(fast.survives == slow.survives);
            REQUIRE(fast.check.lambda_witness.has_value() == slow.check.lambda_witness.has_value());
            if (slow.check.lambda_witness) {
                const auto &a = *fast.check.lambda_witness, &z = *slow.check.lambda_witness;
                CHECK(std::tie(a.x2, a.y2, a.count1, a.count2) == std::tie(z.x2, z.y2, z.count1, z.count2));
            }
        }
    CHECK(compared > 50);
    CHECK(survived > 0);
    CHECK(survived < compared);
}

TEST_CASE("step2 signatures reproduce the published orbit table") {
    const Catalog& c = reference();
    const PermGroup& Gv = c.resolve_action("S9", "3^3:(2xS4)").group;
    auto r = step1_candidates(c, "S9", "3^3:(2xS4)", 11340);
    REQUIRE(r.candidates.size() == 17);
    std::size_t agree = 0;
    for (const auto& row : orbit_rows()) {
        auto s = step2_orbit_filter(Gv, PermGroup::from_generators(r.candidates[row.class_no - 1].generators), 32, 11340);
        if (signature_text(s) == row.signature) ++agree;
        else
            MESSAGE("class " << row.class_no << ": computed " << signature_text(s) << ", published " << row.signature);
    }
    // Class 8 is printed with five 5670-orbits; the class has one 2835-orbit and four 5670-orbits.
    CHECK(agree == 16);
}

TEST_CASE("step3") {
    const Catalog& c = reference();
    const PermGroup& Gv = c.resolve_action("S9", "3^3:(2xS4)").group;
    auto r = step1_candidates(c, "S9", "3^3:(2xS4)", 11340);
    const ParamTuple t{280, 11340, 1296, 32, 144};

    auto s13 = step2_orbit_filter(Gv, PermGroup::from_generators(r.candidates[12].generators), 32, 11340).qualifying();
    REQUIRE(!s13.empty());
    auto d = step3_lambda_check(Gv, s13[0].orbit, t);
    CHECK(d.survives);
    REQUIRE(d.design);
    CHECK(*d.check.params == t);
    auto iso = are_isomorphic(*d.design, develop(Gv, c.design("D69").base_block));
    CHECK(iso.verdict == IsoVerdict::yes);

    auto s11 = step2_orbit_filter(Gv, PermGroup::from_generators(r.candidates[10].generators), 32, 11340).qualifying();
    REQUIRE(s11.size() == 2);
    for (const auto& ko : s11) {
        auto e = step3_lambda_check(Gv, ko.orbit, t);
        CHECK_FALSE(e.survives);
        CHECK_FALSE(e.check.is_2design);
        CHECK_FALSE(e.design);
    }

    auto c5 = PermGroup::from_generators({parse_perm("(1,2,3,4,5)", 5)});
    auto e = step3_lambda_check(c5, std::vector<Point>{1, 2, 3}, ParamTuple{5, 5, 3, 3, 3});
    CHECK_FALSE(e.survives);
    REQUIRE(e.check.lambda_witness);
    // Translates of {1,2,3}: 123, 234, 345, 451, 512. Pair (1,2) lies in two, (1,3) in one.
    const auto& w = *e.check.lambda_witness;
    CHECK(w.x1 == 1);
    CHECK(w.y1 == 2);
    CHECK(w.count1 == 2);
    CHECK(w.x2 == 1);
    CHECK(w.y2 == 3);
    CHECK(w.count2 == 1);
    CHECK_FALSE(e.check.replication_witness);
}

TEST_CASE("pipeline on the degree-5 and degree-6 groups merges shared designs") {
    Catalog c = restricted({"A5", "S5", "A6"});
    auto res = run_pipeline(c, PipelineOptions{2, kDefaultNodeBudget, true});
    CHECK(res.ok());
    for (const auto& d : res.discrepancies) MESSAGE(d);
    CHECK(res.dedup_classes.size() == c.designs.size());
    std::size_t d2 = 0;
    for (const auto& cls : res.dedup_classes) {
        std::set<std::string> groups;
        for (auto i : cls)
            if (res.instances[i].design_id == "D2") groups.insert(res.instances[i].realization.group_id);
        if (!groups.empty()) {
            ++d2;
            CHECK(groups == std::set<std::string>{"A6", "S5"});
        }
    }
    CHECK(d2 == 1);
    for (const auto& in : res.instances) CHECK(in.report.ok());
    for (const auto& t : res.traces) CHECK(t.status != TupleStatus::unresolved);

    auto again = run_pipeline(c, PipelineOptions{1, kDefaultNodeBudget, true});
    CHECK(to_json(again).dump() == to_json(res).dump());
}
