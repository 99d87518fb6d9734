#include "flagtrans/catalog.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace flagtrans {

using nlohmann::json;

struct Catalog::Cache {
    struct ActionSlot {
        std::once_flag once;
        std::unique_ptr<ResolvedAction> value;
    };
    struct GroupSlot {
        std::once_flag once;
        std::unique_ptr<PermGroup> value;
    };
    std::mutex mu;
    std::map<std::string, std::unique_ptr<GroupSlot>> groups;
    std::map<std::pair<std::string, std::string>, std::unique_ptr<ActionSlot>> actions;
};

Catalog::Catalog() : cache_(std::make_shared<Cache>()) {}

Catalog::Catalog(const Catalog& o)
    : schema_version(o.schema_version),
      groups(o.groups),
      max_subgroups(o.max_subgroups),
      stabilizer_candidates(o.stabilizer_candidates),
      designs(o.designs),
      census(o.census),
      subgroup_classes(o.subgroup_classes),
      cache_(std::make_shared<Cache>()) {}

Catalog& Catalog::operator=(const Catalog& o) {
    if (this != &o) {
        Catalog tmp(o);
        *this = std::move(tmp);
    }
    return *this;
}

bool ValidationReport::ok() const { return failures() == 0; }

std::size_t ValidationReport::failures() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.ok; }));
}

const GroupSpec& Catalog::group(const std::string& id) const {
    for (const auto& g : groups)
        if (g.id == id) return g;
    throw CatalogError("unknown group '" + id + "'");
}

bool Catalog::has_group(const std::string& id) const {
    return std::any_of(groups.begin(), groups.end(), [&](const auto& g) { return g.id == id; });
}

const MaxSubgroupSpec& Catalog::max_subgroup(const std::string& group_id, const std::string& subgroup_id) const {
    for (const auto& m : max_subgroups)
        if (m.group_id == group_id && m.subgroup_id == subgroup_id) return m;
    throw CatalogError("unknown action '" + subgroup_id + "' of group '" + group_id + "'");
}

const DesignRecord& Catalog::design(const std::string& design_id) const {
    for (const auto& d : designs)
        if (d.design_id == design_id) return d;
    throw CatalogError("unknown design '" + design_id + "'");
}

bool Catalog::has_design(const std::string& id) const {
    return std::any_of(designs.begin(), designs.end(), [&](const auto& d) { return d.design_id == id; });
}

const SubgroupCensus* Catalog::census_for(const std::string& group_id) const {
    for (const auto& c : census)
        if (c.group_id == group_id) return &c;
    return nullptr;
}

std::vector<const SubgroupClassSpec*> Catalog::classes_of_order(const std::string& group_id,
                                                                std::uint64_t order) const {
    std::vector<const SubgroupClassSpec*> out;
    for (const auto& s : subgroup_classes)
        if (s.group_id == group_id && s.order == order) out.push_back(&s);
    std::sort(out.begin(), out.end(), [](auto* x, auto* y) { return x->class_no < y->class_no; });
    return out;
}

Permutation ResolvedAction::induced(const Permutation& x) const {
    return induced_coset_perm(point_stabilizer, labeling, label_of, x);
}

const PermGroup& Catalog::natural_group(const std::string& group_id) const {
    const GroupSpec& spec = group(group_id);
    Cache::GroupSlot* slot;
    {
        std::lock_guard lk(cache_->mu);
        auto& p = cache_->groups[group_id];
        if (!p) p = std::make_unique<Cache::GroupSlot>();
        slot = p.get();
    }
    std::call_once(slot->once, [&] { slot->value = std::make_unique<PermGroup>(PermGroup::from_generators(spec.generators)); });
    return *slot->value;
}

const ResolvedAction& Catalog::resolve_action(const std::string& group_id, const std::string& action_ref) const {
    const MaxSubgroupSpec& m = max_subgroup(group_id, action_ref);
    Cache::ActionSlot* slot;
    {
        std::lock_guard lk(cache_->mu);
        auto& p = cache_->actions[{group_id, action_ref}];
        if (!p) p = std::make_unique<Cache::ActionSlot>();
        slot = p.get();
    }
    std::call_once(slot->once, [&] {
        const PermGroup& G = natural_group(group_id);
        PermGroup H = PermGroup::from_generators(m.generators);
        auto res = coset_action(G, H);
        PermGroup stab = short_stabilizer(res.image_group, 1);
        PairOrbitals orbitals = pair_orbitals(res.image_group);
        slot->value = std::make_unique<ResolvedAction>(ResolvedAction{std::move(res.image_group), std::move(res.labeling),
                                                                      std::move(H), std::move(res.label_of),
                                                                      std::move(stab), std::move(orbitals)});
    });
    return *slot->value;
}

namespace {

std::string where(const std::string& record, const std::string& field) {
    return record + ", field '" + field + "'";
}

const json& require(const json& obj, const char* field, const std::string& record) {
    if (!obj.is_object()) throw CatalogError(record + ": expected an object");
    auto it = obj.find(field);
    if (it == obj.end()) throw CatalogError(where(record, field) + ": missing");
    return *it;
}

std::string get_string(const json& obj, const char* field, const std::string& record) {
    const json& j = require(obj, field, record);
    if (!j.is_string()) throw CatalogError(where(record, field) + ": expected a string");
    return j.get<std::string>();
}

std::uint64_t get_uint(const json& obj, const char* field, const std::string& record) {
    const json& j = require(obj, field, record);
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw CatalogError(where(record, field) + ": expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::vector<Permutation> get_perms(const json& obj, const char* field, std::size_t degree, const std::string& record) {
    const json& j = require(obj, field, record);
    if (!j.is_array()) throw CatalogError(where(record, field) + ": expected a list");
    std::vector<Permutation> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) throw CatalogError(where(record, field) + "[" + std::to_string(i) + "]: expected a string");
        try {
            out.push_back(parse_perm(j[i].get<std::string>(), degree));
        } catch (const PermError& e) {
            throw CatalogError(where(record, field) + "[" + std::to_string(i) + "]: " + e.what());
        }
    }
    if (out.empty()) throw CatalogError(where(record, field) + ": empty generator list");
    return out;
}

std::vector<Point> get_block(const json& obj, const char* field, const std::string& record) {
    const json& j = require(obj, field, record);
    if (!j.is_array()) throw CatalogError(where(record, field) + ": expected a list");
    std::vector<Point> out;
    for (const auto& x : j) {
        if (!x.is_number_unsigned() || x.get<std::uint64_t>() == 0)
            throw CatalogError(where(record, field) + ": expected positive integers");
        out.push_back(x.get<Point>());
    }
    return out;
}

}  // namespace

Catalog parse_catalog(const std::string& text, const std::string& origin) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw CatalogError(origin + ": no groups");
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1 + static_cast<std::size_t>(
                                   std::count(text.begin(), text.begin() + std::min(e.byte, text.size()), '\n'));
        throw CatalogError(origin + ":" + std::to_string(line) + ": JSON parse error: " + e.what());
    }
    if (!root.is_object()) throw CatalogError(origin + ": top level must be an object");
    Catalog c;
    c.schema_version = static_cast<int>(get_uint(root, "schema_version", "catalog"));
    if (c.schema_version != Catalog::kSchemaVersion)
        throw CatalogError(origin + ": unknown schema version " + std::to_string(c.schema_version));

    auto list = [&](const char* field, bool required) -> const json& {
        static const json empty = json::array();
        auto it = root.find(field);
        if (it == root.end()) {
            if (required) throw CatalogError(origin + ": missing '" + std::string(field) + "'");
            return empty;
        }
        if (!it->is_array()) throw CatalogError(origin + ": '" + std::string(field) + "' must be a list");
        return *it;
    };

    const json& gs = list("groups", false);
    if (gs.empty()) throw CatalogError(origin + ": no groups");
    for (std::size_t i = 0; i < gs.size(); ++i) {
        std::string rec = "groups[" + std::to_string(i) + "]";
        GroupSpec g;
        g.id = get_string(gs[i], "id", rec);
        rec += " (" + g.id + ")";
        g.natural_degree = get_uint(gs[i], "natural_degree", rec);
        if (g.natural_degree == 0) throw CatalogError(where(rec, "natural_degree") + ": must be positive");
        g.generators = get_perms(gs[i], "generators", g.natural_degree, rec);
        g.expected_order = get_uint(gs[i], "expected_order", rec);
        c.groups.push_back(std::move(g));
    }

    const json& ms = list("max_subgroups", true);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        std::string rec = "max_subgroups[" + std::to_string(i) + "]";
        MaxSubgroupSpec m;
        m.group_id = get_string(ms[i], "group_id", rec);
        m.subgroup_id = get_string(ms[i], "subgroup_id", rec);
        rec += " (" + m.group_id + "/" + m.subgroup_id + ")";
        if (!c.has_group(m.group_id)) throw CatalogError(rec + ": unknown group '" + m.group_id + "'");
        m.generators = get_perms(ms[i], "generators", c.group(m.group_id).natural_degree, rec);
        m.expected_order = get_uint(ms[i], "expected_order", rec);
        m.expected_index = get_uint(ms[i], "expected_index", rec);
        c.max_subgroups.push_back(std::move(m));
    }

    const json& sc = list("stabilizer_candidates", true);
    for (std::size_t i = 0; i < sc.size(); ++i) {
        std::string rec = "stabilizer_candidates[" + std::to_string(i) + "]";
        StabilizerCandidateSpec s;
        s.group_id = get_string(sc[i], "group_id", rec);
        s.action_ref = get_string(sc[i], "action_ref", rec);
        s.index = get_uint(sc[i], "index", rec);
        s.class_no = static_cast<int>(get_uint(sc[i], "class_no", rec));
        rec += " (" + s.group_id + "/" + s.action_ref + " class " + std::to_string(s.class_no) + ")";
        const std::size_t v = c.max_subgroup(s.group_id, s.action_ref).expected_index;
        s.generators = get_perms(sc[i], "generators", v, rec);
        c.stabilizer_candidates.push_back(std::move(s));
    }

    const json& ds = list("designs", true);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        std::string rec = "designs[" + std::to_string(i) + "]";
        DesignRecord d;
        d.design_id = get_string(ds[i], "design_id", rec);
        rec += " (" + d.design_id + ")";
        d.group_id = get_string(ds[i], "group_id", rec);
        d.action_ref = get_string(ds[i], "action_ref", rec);
        d.params = {get_uint(ds[i], "v", rec), get_uint(ds[i], "b", rec), get_uint(ds[i], "r", rec),
                    get_uint(ds[i], "k", rec), get_uint(ds[i], "lambda", rec)};
        d.base_block = get_block(ds[i], "base_block", rec);
        d.table_row_ref = ds[i].contains("table_row_ref") ? get_string(ds[i], "table_row_ref", rec) : "";
        if (ds[i].contains("alternates")) {
            const json& alts = ds[i]["alternates"];
            if (!alts.is_array()) throw CatalogError(where(rec, "alternates") + ": expected a list");
            for (std::size_t a = 0; a < alts.size(); ++a) {
                std::string arec = rec + ".alternates[" + std::to_string(a) + "]";
                d.alternates.push_back({get_string(alts[a], "group_id", arec), get_string(alts[a], "action_ref", arec),
                                        get_block(alts[a], "base_block", arec)});
            }
        }
        c.designs.push_back(std::move(d));
    }

    const json& cs = list("subgroup_census", false);
    for (std::size_t i = 0; i < cs.size(); ++i) {
        std::string rec = "subgroup_census[" + std::to_string(i) + "]";
        SubgroupCensus s;
        s.group_id = get_string(cs[i], "group_id", rec);
        const json& rows = require(cs[i], "classes_by_order", rec);
        if (!rows.is_array()) throw CatalogError(where(rec, "classes_by_order") + ": expected a list");
        for (const auto& row : rows) {
            if (!row.is_array() || row.size() != 2)
                throw CatalogError(where(rec, "classes_by_order") + ": expected [order, count] pairs");
            s.classes_by_order[row[0].get<std::uint64_t>()] = row[1].get<std::size_t>();
        }
        c.census.push_back(std::move(s));
    }

    const json& sub = list("subgroup_classes", false);
    for (std::size_t i = 0; i < sub.size(); ++i) {
        std::string rec = "subgroup_classes[" + std::to_string(i) + "]";
        SubgroupClassSpec s;
        s.group_id = get_string(sub[i], "group_id", rec);
        s.class_no = static_cast<int>(get_uint(sub[i], "class_no", rec));
        rec += " (" + s.group_id + " class " + std::to_string(s.class_no) + ")";
        if (!c.has_group(s.group_id)) throw CatalogError(rec + ": unknown group '" + s.group_id + "'");
        s.order = get_uint(sub[i], "order", rec);
        s.generators = get_perms(sub[i], "generators", c.group(s.group_id).natural_degree, rec);
        c.subgroup_classes.push_back(std::move(s));
    }
    return c;
}

Catalog load_catalog(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CatalogError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_catalog(ss.str(), path);
}

namespace {

void check(ValidationReport& rep, const std::string& record, const std::string& what, bool ok, std::string msg = {}) {
    rep.entries.push_back({record, what, ok, ok ? std::string{} : std::move(msg)});
}

std::string big(const BigInt& x) { return x.str(); }

}  // namespace

ValidationReport validate(const Catalog& c) {
    ValidationReport rep;
    std::set<std::string> ids;
    for (const auto& g : c.groups) {
        std::string rec = "group " + g.id;
        check(rep, rec, "unique id", ids.insert(g.id).second, "duplicate group id");
        try {
            const PermGroup& G = c.natural_group(g.id);
            check(rep, rec, "order", G.order() == g.expected_order,
                  "generated order " + big(G.order()) + " != expected " + std::to_string(g.expected_order));
        } catch (const std::exception& e) {
            check(rep, rec, "order", false, e.what());
        }
    }

    for (const auto& m : c.max_subgroups) {
        std::string rec = "max_subgroup " + m.group_id + "/" + m.subgroup_id;
        try {
            const GroupSpec& gs = c.group(m.group_id);
            const PermGroup& G = c.natural_group(m.group_id);
            bool inside = std::all_of(m.generators.begin(), m.generators.end(),
                                      [&](const auto& h) { return G.contains(h); });
            check(rep, rec, "membership", inside, "a generator is not in the parent group");
            if (!inside) continue;
            PermGroup H = PermGroup::from_generators(m.generators);
            check(rep, rec, "order", H.order() == m.expected_order,
                  "generated order " + big(H.order()) + " != expected " + std::to_string(m.expected_order));
            check(rep, rec, "index arithmetic", m.expected_order * m.expected_index == gs.expected_order,
                  "expected_order * expected_index != parent order");
            if (H.order() != m.expected_order || G.order() != gs.expected_order) continue;
            const ResolvedAction& act = c.resolve_action(m.group_id, m.subgroup_id);
            check(rep, rec, "coset degree", act.group.degree() == m.expected_index,
                  "coset action degree " + std::to_string(act.group.degree()) + " != expected_index");
            check(rep, rec, "faithful", act.group.order() == gs.expected_order,
                  "image order " + big(act.group.order()) + " != group order");
            bool prim = act.group.is_transitive() && act.group.is_primitive();
            check(rep, rec, "primitive", prim, "coset action is not primitive");
        } catch (const std::exception& e) {
            check(rep, rec, "resolve", false, e.what());
        }
    }

    for (const auto& s : c.stabilizer_candidates) {
        std::string rec = "candidate " + s.group_id + "/" + s.action_ref + "/" + std::to_string(s.index) + "#" +
                          std::to_string(s.class_no);
        try {
            const ResolvedAction& act = c.resolve_action(s.group_id, s.action_ref);
            bool inside = std::all_of(s.generators.begin(), s.generators.end(),
                                      [&](const auto& h) { return act.group.contains(h); });
            check(rep, rec, "membership", inside, "a generator is not in the acting group");
            if (!inside) continue;
            PermGroup H = PermGroup::from_generators(s.generators);
            check(rep, rec, "index", H.order() * s.index == act.group.order(),
                  "order " + big(H.order()) + " times index " + std::to_string(s.index) + " != acting group order");
        } catch (const std::exception& e) {
            check(rep, rec, "resolve", false, e.what());
        }
    }

    std::set<std::string> dids;
    for (const auto& d : c.designs) {
        std::string rec = "design " + d.design_id;
        check(rep, rec, "unique id", dids.insert(d.design_id).second, "duplicate design id");
        const ParamTuple& t = d.params;
        check(rep, rec, "bk = vr", t.b * t.k == t.v * t.r, "bk != vr");
        check(rep, rec, "lambda(v-1) = r(k-1)", t.lambda * (t.v - 1) == t.r * (t.k - 1), "lambda(v-1) != r(k-1)");
        check(rep, rec, "nontrivial k", t.k > 2 && t.k + 1 < t.v, "block size out of range");
        std::vector<Realization> all{d.primary()};
        all.insert(all.end(), d.alternates.begin(), d.alternates.end());
        for (const auto& r : all) {
            std::string what = "base block under " + r.group_id + "/" + r.action_ref;
            try {
                const MaxSubgroupSpec& m = c.max_subgroup(r.group_id, r.action_ref);
                bool ok = m.expected_index == t.v && r.base_block.size() == t.k &&
                          std::is_sorted(r.base_block.begin(), r.base_block.end()) &&
                          std::adjacent_find(r.base_block.begin(), r.base_block.end()) == r.base_block.end() &&
                          !r.base_block.empty() && r.base_block.back() <= t.v;
                check(rep, rec, what, ok, "base block is not a sorted k-subset of the action's points");
            } catch (const std::exception& e) {
                check(rep, rec, what, false, e.what());
            }
        }
    }

    for (const auto& s : c.census) check(rep, "census " + s.group_id, "group exists", c.has_group(s.group_id), "unknown group");

    std::map<std::pair<std::string, std::uint64_t>, std::size_t> supplied;
    for (const auto& s : c.subgroup_classes) {
        std::string rec = "subgroup class " + s.group_id + "#" + std::to_string(s.class_no);
        ++supplied[{s.group_id, s.order}];
        try {
            const PermGroup& G = c.natural_group(s.group_id);
            bool inside = std::all_of(s.generators.begin(), s.generators.end(), [&](const auto& h) { return G.contains(h); });
            check(rep, rec, "membership", inside, "a generator is not in the group");
            if (!inside) continue;
            BigInt o = PermGroup::from_generators(s.generators).order();
            check(rep, rec, "order", o == s.order, "order " + big(o) + " != " + std::to_string(s.order));
        } catch (const std::exception& e) {
            check(rep, rec, "resolve", false, e.what());
        }
    }
    for (const auto& [key, n] : supplied) {
        const SubgroupCensus* cen = c.census_for(key.first);
        if (!cen) continue;
        auto it = cen->classes_by_order.find(key.second);
        std::size_t want = it == cen->classes_by_order.end() ? 0 : it->second;
        check(rep, "subgroup classes " + key.first + " order " + std::to_string(key.second), "census", n <= want,
              std::to_string(n) + " classes supplied, census lists " + std::to_string(want));
    }
    return rep;
}

}  // namespace flagtrans
