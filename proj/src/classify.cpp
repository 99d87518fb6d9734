#include "flagtrans/classify.hpp"

#include "flagtrans/parallel.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace flagtrans {

using nlohmann::ordered_json;

std::string to_string(Coverage c) { return c == Coverage::catalog ? "catalog" : "unknown"; }

std::string to_string(TupleStatus s) {
    switch (s) {
        case TupleStatus::eliminated: return "eliminated";
        case TupleStatus::survived: return "survived";
        default: return "unresolved";
    }
}

std::vector<KOrbit> Step2Result::qualifying() const {
    std::vector<KOrbit> out;
    for (const auto& o : k_orbits)
        if (o.qualifies) out.push_back(o);
    return out;
}

bool DesignInstance::matches_expected() const {
    return report.ok() && (!expected || report.two_design.params == expected);
}

Step1Result step1_candidates(const Catalog& c, const std::string& group_id, const std::string& action_ref,
                             std::uint64_t b) {
    const GroupSpec& g = c.group(group_id);
    c.max_subgroup(group_id, action_ref);
    Step1Result res;
    if (b == 0 || g.expected_order % b != 0) {
        res.coverage = Coverage::catalog;
        res.census_classes = 0;
        res.note = "index does not divide the group order";
        return res;
    }
    const std::uint64_t order = g.expected_order / b;
    for (const auto& s : c.stabilizer_candidates)
        if (s.group_id == group_id && s.action_ref == action_ref && s.index == b) res.candidates.push_back(s);
    if (!res.candidates.empty()) {
        res.source = "stabilizer_candidates";
    } else {
        auto classes = c.classes_of_order(group_id, order);
        if (!classes.empty()) {
            const ResolvedAction& act = c.resolve_action(group_id, action_ref);
            for (const auto* k : classes) {
                StabilizerCandidateSpec s{group_id, action_ref, b, k->class_no, {}};
                for (const auto& x : k->generators) s.generators.push_back(act.induced(x));
                res.candidates.push_back(std::move(s));
            }
            res.source = "subgroup_classes";
        }
    }
    std::sort(res.candidates.begin(), res.candidates.end(),
              [](const auto& x, const auto& y) { return x.class_no < y.class_no; });
    const SubgroupCensus* census = c.census_for(group_id);
    if (census) {
        auto it = census->classes_by_order.find(order);
        res.census_classes = it == census->classes_by_order.end() ? 0 : it->second;
    }
    if (res.census_classes && *res.census_classes == 0) {
        res.coverage = Coverage::catalog;
        res.note = "no subgroup of this index";
    } else if (res.census_classes && *res.census_classes == res.candidates.size()) {
        res.coverage = Coverage::catalog;
        res.note = "all classes supplied";
    } else {
        res.coverage = Coverage::unknown;
        res.note = res.candidates.empty() ? "classes not supplied" : "class list incomplete";
    }
    return res;
}

Step2Result step2_orbit_filter(const PermGroup& Gv, const PermGroup& H, std::size_t k, std::size_t b,
                               const PermGroup* Gv_1) {
    if (H.degree() != Gv.degree()) throw GroupError("step2: degree mismatch");
    return step2_orbit_filter(Gv, std::span<const Permutation>(H.generators()), k, b, Gv_1);
}

Step2Result step2_orbit_filter(const PermGroup& Gv, std::span<const Permutation> H_gens, std::size_t k, std::size_t b,
                               const PermGroup* Gv_1) {
    Step2Result res;
    const std::size_t v = Gv.degree();
    res.signature = subgroup_orbits(v, H_gens);
    std::optional<PermGroup> own;
    if (!Gv_1 && Gv.is_transitive()) Gv_1 = &own.emplace(short_stabilizer(Gv, 1));
    for (const auto& o : res.signature.orbits) {
        if (o.size() != k) continue;
        KOrbit ko;
        ko.orbit = o;
        if (Gv_1 && (b * k) % v == 0) {
            Permutation t = *transporter(Gv, o.front(), 1);
            std::vector<Point> moved;
            for (Point x : o) moved.push_back(t(x));
            auto orb = set_orbit_bounded(*Gv_1, moved, b * k / v);
            if (orb && (orb->size() * v) % k != 0) throw GroupError("step2: set orbit size not divisible");
            ko.set_orbit_size = orb ? orb->size() * v / k : b + 1;
        } else {
            auto orb = set_orbit_bounded(Gv, o, b);
            ko.set_orbit_size = orb ? orb->size() : b + 1;
        }
        ko.qualifies = ko.set_orbit_size == b;
        res.k_orbits.push_back(std::move(ko));
    }
    return res;
}

Step3Result step3_lambda_check(const PermGroup& Gv, std::span<const Point> orbit, const ParamTuple& expected) {
    Step3Result res;
    res.orbit.assign(orbit.begin(), orbit.end());
    Design D = develop(Gv, orbit);
    res.check = verify_2design(D);
    res.survives = res.check.is_2design && res.check.params == expected;
    if (res.survives) res.design = std::move(D);
    return res;
}

Step3Result step3_lambda_check(const PermGroup& Gv, const PairOrbitals& orbitals, std::span<const Point> orbit,
                               const ParamTuple& expected) {
    const std::size_t v = Gv.degree();
    if (orbitals.degree != v) throw GroupError("step3: orbitals of another degree");
    std::vector<std::uint64_t> inside(orbitals.size.size(), 0);
    for (std::size_t a = 0; a < orbit.size(); ++a)
        for (std::size_t c = a + 1; c < orbit.size(); ++c) ++inside[orbitals.id[orbitals.index(orbit[a], orbit[c])]];
    std::vector<std::uint64_t> lambda(inside.size());
    for (std::size_t d = 0; d < inside.size(); ++d) {
        if ((expected.b * inside[d]) % orbitals.size[d] != 0) throw GroupError("step3: orbital count not integral");
        lambda[d] = expected.b * inside[d] / orbitals.size[d];
    }
    if (std::all_of(lambda.begin(), lambda.end(), [&](auto x) { return x == lambda[0]; }))
        return step3_lambda_check(Gv, orbit, expected);
    Step3Result res;
    res.orbit.assign(orbit.begin(), orbit.end());
    const auto first = lambda[orbitals.id[0]];
    for (std::size_t x = 0, idx = 0; x < v && !res.check.lambda_witness; ++x)
        for (std::size_t y = x + 1; y < v; ++y, ++idx)
            if (lambda[orbitals.id[idx]] != first) {
                res.check.lambda_witness = PairWitness{1, 2, first, static_cast<Point>(x + 1), static_cast<Point>(y + 1),
                                                       lambda[orbitals.id[idx]]};
                break;
            }
    return res;
}

namespace {

std::string design_label(const std::vector<std::string>& ids) {
    std::string s;
    for (const auto& id : ids) s += (s.empty() ? "" : ", ") + id;
    return s;
}

struct Job {
    std::string design_id;
    std::string origin;
    Realization realization;
    std::string table_row_ref;
    std::optional<ParamTuple> expected;
    std::optional<Design> prebuilt;
};

}  // namespace

ClassificationResult run_pipeline(const Catalog& c, const PipelineOptions& opt) {
    ClassificationResult res;
    if (opt.validate_catalog) {
        auto rep = validate(c);
        if (!rep.ok()) {
            std::string msg = "catalog invalid:";
            for (const auto& e : rep.entries)
                if (!e.ok) msg += " [" + e.record + ": " + e.check + ": " + e.message + "]";
            throw CatalogError(msg);
        }
    }
    res.enumeration = enumerate_all(c);

    // Catalog realizations by (group, action, params).
    std::map<std::tuple<std::string, std::string, ParamTuple>, std::vector<std::string>> realized;
    for (const auto& d : c.designs) {
        realized[{d.group_id, d.action_ref, d.params}].push_back(d.design_id);
        for (const auto& a : d.alternates) realized[{a.group_id, a.action_ref, d.params}].push_back(d.design_id);
    }

    // Elimination traces.
    for (const auto& ct : res.enumeration.classes)
        for (const auto& t : ct.tuples) {
            EliminationTrace tr;
            tr.group_id = ct.group_id;
            tr.action_ref = ct.subgroup_id;
            tr.tuple = t;
            res.traces.push_back(std::move(tr));
        }
    std::vector<std::vector<Design>> found(res.traces.size());
    parallel_for(res.traces.size(), opt.threads, [&](std::size_t i) {
        auto& tr = res.traces[i];
        tr.step1 = step1_candidates(c, tr.group_id, tr.action_ref, tr.tuple.b);
        if (tr.step1.candidates.empty()) return;
        const ResolvedAction& act = c.resolve_action(tr.group_id, tr.action_ref);
        const PermGroup& Gv = act.group;
        for (const auto& cand : tr.step1.candidates) {
            ClassOutcome oc;
            oc.class_no = cand.class_no;
            oc.step2 = step2_orbit_filter(Gv, std::span<const Permutation>(cand.generators), tr.tuple.k, tr.tuple.b,
                                          &act.image_point_stabilizer);
            for (const auto& ko : oc.step2.k_orbits) {
                if (!ko.qualifies) continue;
                Step3Result s3 = step3_lambda_check(Gv, act.pair_orbitals, ko.orbit, tr.tuple);
                if (s3.design) {
                    found[i].push_back(std::move(*s3.design));
                    s3.design.reset();
                }
                oc.step3.push_back(std::move(s3));
            }
            tr.classes.push_back(std::move(oc));
        }
        for (auto& cand : tr.step1.candidates) cand.generators = {};
    });

    // Design instances: every catalog realization, then every pipeline-built design.
    std::vector<Job> jobs;
    for (const auto& d : c.designs) {
        jobs.push_back({d.design_id, "catalog", d.primary(), d.table_row_ref, d.params, std::nullopt});
        for (const auto& a : d.alternates) jobs.push_back({d.design_id, "catalog", a, d.table_row_ref, d.params, std::nullopt});
    }
    std::vector<std::vector<std::size_t>> trace_jobs(res.traces.size());
    for (std::size_t i = 0; i < found.size(); ++i)
        for (std::size_t j = 0; j < found[i].size(); ++j) {
            const auto& tr = res.traces[i];
            Realization r{tr.group_id, tr.action_ref, {found[i][j].block(0).begin(), found[i][j].block(0).end()}};
            trace_jobs[i].push_back(jobs.size());
            jobs.push_back({"", "pipeline", r, "", tr.tuple, std::move(found[i][j])});
        }

    std::vector<Design> designs(jobs.size());
    res.instances.resize(jobs.size());
    std::vector<std::string> errors(jobs.size());
    parallel_for(jobs.size(), opt.threads, [&](std::size_t i) {
        auto& job = jobs[i];
        auto& inst = res.instances[i];
        inst.design_id = job.design_id;
        inst.origin = job.origin;
        inst.realization = job.realization;
        inst.table_row_ref = job.table_row_ref;
        inst.expected = job.expected;
        try {
            const PermGroup& Gv = c.resolve_action(job.realization.group_id, job.realization.action_ref).group;
            designs[i] = job.prebuilt ? std::move(*job.prebuilt) : develop(Gv, job.realization.base_block);
            inst.report = check_design(Gv, designs[i]);
            inst.fp = fingerprint(designs[i]);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& inst = res.instances[i];
        std::string who = (inst.design_id.empty() ? std::string("pipeline design") : inst.design_id) + " under " +
                          inst.realization.group_id + "/" + inst.realization.action_ref;
        if (!errors[i].empty())
            res.discrepancies.push_back(who + ": " + errors[i]);
        else if (!inst.matches_expected()) {
            std::string why;
            if (!inst.report.two_design.is_2design)
                why = "not a 2-design";
            else if (inst.report.two_design.params != inst.expected)
                why = "parameters " + inst.report.two_design.params->str() + " differ from " + inst.expected->str();
            else if (!inst.report.flag_transitive)
                why = "not flag-transitive";
            else
                why = "point action not primitive";
            res.discrepancies.push_back(who + ": " + why);
        }
    }

    // Isomorphism classes: bucket by fingerprint, then resolve collisions by search.
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < jobs.size(); ++i)
        if (errors[i].empty() && res.instances[i].report.two_design.is_2design) usable.push_back(i);
    std::vector<std::vector<std::size_t>> buckets;
    for (std::size_t i : usable) {
        auto it = std::find_if(buckets.begin(), buckets.end(),
                               [&](const auto& bk) { return res.instances[bk.front()].fp == res.instances[i].fp; });
        if (it == buckets.end())
            buckets.push_back({i});
        else
            it->push_back(i);
    }
    std::vector<std::vector<std::vector<std::size_t>>> bucket_classes(buckets.size());
    std::vector<std::vector<IsoCheck>> bucket_checks(buckets.size());
    parallel_for(buckets.size(), opt.threads, [&](std::size_t bi) {
        auto& classes = bucket_classes[bi];
        for (std::size_t i : buckets[bi]) {
            bool placed = false;
            for (auto& cls : classes) {
                auto r = are_isomorphic(designs[cls.front()], designs[i], opt.node_budget);
                bucket_checks[bi].push_back({cls.front(), i, r.verdict, r.nodes});
                if (r.verdict == IsoVerdict::yes) {
                    cls.push_back(i);
                    placed = true;
                    break;
                }
            }
            if (!placed) classes.push_back({i});
        }
    });
    for (std::size_t bi = 0; bi < buckets.size(); ++bi) {
        for (auto& cls : bucket_classes[bi]) res.dedup_classes.push_back(std::move(cls));
        for (auto& chk : bucket_checks[bi]) {
            if (chk.verdict == IsoVerdict::unknown)
                res.discrepancies.push_back("isomorphism undecided within budget: instance " + std::to_string(chk.a) +
                                            " vs " + std::to_string(chk.b));
            res.iso_checks.push_back(chk);
        }
    }
    std::sort(res.dedup_classes.begin(), res.dedup_classes.end());

    // Name every class after its catalog design; pipeline designs inherit the name.
    std::map<std::string, std::size_t> class_of_id;
    for (std::size_t ci = 0; ci < res.dedup_classes.size(); ++ci) {
        std::set<std::string> ids;
        for (std::size_t i : res.dedup_classes[ci])
            if (res.instances[i].origin == "catalog") ids.insert(res.instances[i].design_id);
        if (ids.size() > 1) {
            std::string s;
            for (const auto& id : ids) s += (s.empty() ? "" : ", ") + id;
            res.discrepancies.push_back("designs recorded as distinct are isomorphic: " + s);
        }
        for (const auto& id : ids) {
            if (class_of_id.count(id) && class_of_id[id] != ci)
                res.discrepancies.push_back(id + ": realizations fall into different isomorphism classes");
            class_of_id[id] = ci;
        }
        std::string name = ids.empty() ? "new" : *ids.begin();
        for (std::size_t i : res.dedup_classes[ci])
            if (res.instances[i].origin == "pipeline") {
                res.instances[i].design_id = name;
                if (ids.empty())
                    res.discrepancies.push_back("pipeline produced a design absent from the catalog under " +
                                                res.instances[i].realization.group_id + "/" +
                                                res.instances[i].realization.action_ref);
            }
    }
    if (res.dedup_classes.size() != c.designs.size())
        res.discrepancies.push_back("found " + std::to_string(res.dedup_classes.size()) +
                                    " isomorphism classes, catalog lists " + std::to_string(c.designs.size()));

    // Per-class labels and tuple status.
    for (std::size_t ti = 0; ti < res.traces.size(); ++ti) {
        auto& tr = res.traces[ti];
        std::size_t consumed = 0;
        std::set<std::string> survivors;
        for (auto& oc : tr.classes) {
            bool fail2 = false, fail3 = false;
            std::vector<std::string> ids;
            for (const auto& ko : oc.step2.k_orbits) fail2 |= !ko.qualifies;
            if (oc.step2.k_orbits.empty()) fail2 = true;
            for (const auto& s3 : oc.step3) {
                if (!s3.survives) {
                    fail3 = true;
                    continue;
                }
                const std::string& id = res.instances[trace_jobs[ti][consumed++]].design_id;
                if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
                survivors.insert(id);
            }
            std::vector<std::string> parts;
            if (fail2) parts.push_back("Step(ii)");
            if (fail3) parts.push_back("Step(iii)");
            parts.insert(parts.end(), ids.begin(), ids.end());
            oc.label = design_label(parts);
        }
        auto it = realized.find({tr.group_id, tr.action_ref, tr.tuple});
        if (it != realized.end())
            for (const auto& id : it->second) survivors.insert(id);
        tr.surviving_designs.assign(survivors.begin(), survivors.end());
        if (!survivors.empty())
            tr.status = TupleStatus::survived;
        else if (tr.step1.coverage == Coverage::catalog)
            tr.status = TupleStatus::eliminated;
        else
            tr.status = TupleStatus::unresolved;
        if (it != realized.end() && tr.step1.coverage == Coverage::catalog && consumed == 0)
            res.discrepancies.push_back("catalog design " + it->second.front() + " under " + tr.group_id + "/" +
                                        tr.action_ref + " " + tr.tuple.str() + " not reached by steps (i)-(iii)");
    }
    return res;
}

namespace {

ordered_json params_json(const ParamTuple& t) {
    return {{"v", t.v}, {"b", t.b}, {"r", t.r}, {"k", t.k}, {"lambda", t.lambda}};
}

}  // namespace

std::string signature_text(const Step2Result& s2) {
    std::map<std::size_t, std::size_t> plain;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> annotated;
    std::set<std::size_t> k_lengths;
    for (const auto& ko : s2.k_orbits) {
        ++annotated[{ko.orbit.size(), ko.set_orbit_size}];
        k_lengths.insert(ko.orbit.size());
    }
    for (const auto& [len, m] : s2.signature.lengths)
        if (!k_lengths.count(len)) plain[len] = m;
    std::string s;
    auto add = [&](std::string part, std::size_t m) {
        if (m > 1) part += "^" + std::to_string(m);
        s += (s.empty() ? "" : ", ") + part;
    };
    for (const auto& [len, m] : plain) add(std::to_string(len), m);
    for (const auto& [key, m] : annotated) add(std::to_string(key.first) + "(" + std::to_string(key.second) + ")", m);
    return s;
}

ordered_json to_json(const EliminationTrace& t) {
    ordered_json j;
    j["group"] = t.group_id;
    j["stabilizer"] = t.action_ref;
    j["tuple"] = params_json(t.tuple);
    j["step1"] = {{"candidates", t.step1.candidates.size()}, {"source", t.step1.source},
                  {"coverage", to_string(t.step1.coverage)}, {"note", t.step1.note}};
    if (t.step1.census_classes) j["step1"]["census_classes"] = *t.step1.census_classes;
    ordered_json classes = ordered_json::array();
    for (const auto& oc : t.classes) {
        ordered_json cj;
        cj["class_no"] = oc.class_no;
        cj["orbit_signature"] = signature_text(oc.step2);
        ordered_json s3 = ordered_json::array();
        for (const auto& r : oc.step3) s3.push_back({{"orbit", r.orbit}, {"survives", r.survives}});
        cj["step3"] = s3;
        cj["outcome"] = oc.label;
        classes.push_back(cj);
    }
    j["classes"] = classes;
    j["surviving_designs"] = t.surviving_designs;
    j["status"] = to_string(t.status);
    return j;
}

ordered_json to_json(const ClassificationResult& r) {
    ordered_json j;
    ordered_json insts = ordered_json::array();
    for (const auto& in : r.instances) {
        ordered_json ij;
        ij["design_id"] = in.design_id;
        ij["origin"] = in.origin;
        ij["group"] = in.realization.group_id;
        ij["stabilizer"] = in.realization.action_ref;
        ij["base_block"] = in.realization.base_block;
        if (in.report.two_design.params) ij["params"] = params_json(*in.report.two_design.params);
        ij["is_2design"] = in.report.two_design.is_2design;
        ij["flag_transitive"] = in.report.flag_transitive;
        ij["point_primitive"] = in.report.point_primitive;
        ij["table_row_ref"] = in.table_row_ref;
        insts.push_back(ij);
    }
    j["instances"] = insts;
    ordered_json classes = ordered_json::array();
    for (const auto& cls : r.dedup_classes) classes.push_back(cls);
    j["dedup_classes"] = classes;
    ordered_json iso = ordered_json::array();
    for (const auto& ch : r.iso_checks)
        iso.push_back({{"a", ch.a}, {"b", ch.b}, {"verdict", to_string(ch.verdict)}, {"nodes", ch.nodes}});
    j["iso_checks"] = iso;
    ordered_json counts = ordered_json::array();
    for (const auto& c : r.enumeration.counts)
        counts.push_back({{"group", c.group_id}, {"tuples", c.distinct}, {"tuples_per_class", c.per_class_total}});
    j["enumeration"] = {{"groups", counts}, {"total", r.enumeration.total_distinct},
                        {"total_per_class", r.enumeration.total_per_class}};
    std::map<std::string, std::size_t> status;
    for (const auto& t : r.traces) ++status[to_string(t.status)];
    j["trace_status"] = status;
    ordered_json traces = ordered_json::array();
    for (const auto& t : r.traces) traces.push_back(to_json(t));
    j["traces"] = traces;
    j["classes"] = r.dedup_classes.size();
    j["discrepancies"] = r.discrepancies;
    return j;
}

std::string format_table(const Catalog& c, const ClassificationResult& r, int table) {
    std::map<std::string, std::size_t> group_rank;
    for (std::size_t i = 0; i < c.groups.size(); ++i) group_rank[c.groups[i].id] = i;
    auto number = [](const std::string& id) { return std::stoul(id.substr(1)); };
    std::vector<const DesignInstance*> rows;
    for (const auto& in : r.instances) {
        if (in.origin != "catalog" || !in.expected) continue;
        const auto& t = *in.expected;
        bool full = binomial(t.v, t.k) == t.b;
        if ((table == 1) == full) rows.push_back(&in);
    }
    std::sort(rows.begin(), rows.end(), [&](auto* a, auto* b) {
        auto ka = std::make_tuple(group_rank[a->realization.group_id], a->expected->v, a->expected->k,
                                  a->expected->lambda, number(a->design_id));
        auto kb = std::make_tuple(group_rank[b->realization.group_id], b->expected->v, b->expected->k,
                                  b->expected->lambda, number(b->design_id));
        return ka < kb;
    });
    std::ostringstream os;
    os << std::left << std::setw(6) << "Case" << std::setw(12) << "G" << std::setw(14) << "G_x" << std::right
       << std::setw(5) << "v" << std::setw(8) << "b" << std::setw(7) << "r" << std::setw(5) << "k" << std::setw(7)
       << "λ" << "  " << "Reference" << "\n";
    std::size_t n = 0;
    for (const auto* in : rows) {
        const auto& t = *in->expected;
        os << std::left << std::setw(6) << ++n << std::setw(12) << in->realization.group_id << std::setw(14)
           << in->realization.action_ref << std::right << std::setw(5) << t.v << std::setw(8) << t.b << std::setw(7)
           << t.r << std::setw(5) << t.k << std::setw(6) << t.lambda << "  " << in->design_id << "\n";
    }
    return os.str();
}

}  // namespace flagtrans
