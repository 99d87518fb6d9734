#include "flagtrans/classify.hpp"
#include "flagtrans/parallel.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <set>

using namespace flagtrans;
using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string catalog_path;
    std::string format = "text";
    std::size_t threads = default_threads();
};

Catalog open_catalog(const Config& cfg) {
    std::string path = cfg.catalog_path;
    if (path.empty())
        if (const char* env = std::getenv("FLAGTRANS_CATALOG")) path = env;
    if (path.empty()) throw UsageError("no catalog: pass --catalog or set FLAGTRANS_CATALOG");
    return load_catalog(path);
}

ordered_json params_json(const ParamTuple& t) {
    return {{"v", t.v}, {"b", t.b}, {"r", t.r}, {"k", t.k}, {"lambda", t.lambda}};
}

ordered_json design_json(const Design& D) {
    ordered_json blocks = ordered_json::array();
    for (std::size_t i = 0; i < D.b(); ++i) blocks.push_back(std::vector<Point>(D.block(i).begin(), D.block(i).end()));
    return {{"v", D.v()}, {"blocks", blocks}};
}

ordered_json report_json(const DesignCheckReport& r) {
    ordered_json j;
    j["is_2design"] = r.two_design.is_2design;
    if (r.two_design.params) j["params"] = params_json(*r.two_design.params);
    if (r.two_design.replication_witness) {
        const auto& w = *r.two_design.replication_witness;
        j["replication_witness"] = {{{"point", w.x1}, {"count", w.count1}}, {{"point", w.x2}, {"count", w.count2}}};
    }
    if (r.two_design.lambda_witness) {
        const auto& w = *r.two_design.lambda_witness;
        j["lambda_witness"] = {{{"pair", {w.x1, w.y1}}, {"count", w.count1}}, {{"pair", {w.x2, w.y2}}, {"count", w.count2}}};
    }
    j["flag_transitive"] = r.flag_transitive;
    j["point_primitive"] = r.point_primitive;
    return j;
}

std::string report_text(const DesignCheckReport& r) {
    std::ostringstream os;
    if (r.two_design.params)
        os << "2-design " << r.two_design.params->str();
    else {
        os << "not a 2-design";
        if (r.two_design.replication_witness) {
            const auto& w = *r.two_design.replication_witness;
            os << "; r_" << w.x1 << "=" << w.count1 << " but r_" << w.x2 << "=" << w.count2;
        }
        if (r.two_design.lambda_witness) {
            const auto& w = *r.two_design.lambda_witness;
            os << "; pair (" << w.x1 << "," << w.y1 << ") in " << w.count1 << " blocks but (" << w.x2 << "," << w.y2
               << ") in " << w.count2;
        }
    }
    os << ", flag-transitive: " << (r.flag_transitive ? "yes" : "no")
       << ", point-primitive: " << (r.point_primitive ? "yes" : "no");
    return os.str();
}

void emit(const Config& cfg, const ordered_json& j, const std::string& text) {
    if (cfg.format == "json")
        std::cout << j.dump(1) << "\n";
    else
        std::cout << text;
}

int cmd_enumerate(const Config& cfg, bool summary, const std::string& group) {
    Catalog c = open_catalog(cfg);
    if (!group.empty() && !c.has_group(group)) throw UsageError("unknown group '" + group + "'");
    Enumeration e = enumerate_all(c);
    ordered_json j;
    std::ostringstream os;
    if (summary) {
        ordered_json rows = ordered_json::array();
        if (cfg.format == "tsv") os << "group\ttuples\ttuples_per_class\n";
        std::size_t total = 0;
        for (const auto& cnt : e.counts) {
            if (!group.empty() && cnt.group_id != group) continue;
            total += cnt.distinct;
            rows.push_back({{"group", cnt.group_id}, {"tuples", cnt.distinct}, {"tuples_per_class", cnt.per_class_total}});
            if (cfg.format == "tsv")
                os << cnt.group_id << "\t" << cnt.distinct << "\t" << cnt.per_class_total << "\n";
            else
                os << std::left << std::setw(12) << cnt.group_id << std::right << std::setw(6) << cnt.distinct << "\n";
        }
        if (cfg.format == "tsv")
            os << "total\t" << total << "\t" << e.total_per_class << "\n";
        else
            os << std::left << std::setw(12) << "total" << std::right << std::setw(6) << total << "\n";
        j = {{"groups", rows}, {"total", total}};
    } else {
        ordered_json rows = ordered_json::array();
        os << "group\tstabilizer\tv\tb\tr\tk\tlambda\n";
        for (const auto& ct : e.classes) {
            if (!group.empty() && ct.group_id != group) continue;
            for (const auto& t : ct.tuples) {
                os << ct.group_id << "\t" << ct.subgroup_id << "\t" << t.v << "\t" << t.b << "\t" << t.r << "\t" << t.k
                   << "\t" << t.lambda << "\n";
                ordered_json r = params_json(t);
                r["group"] = ct.group_id;
                r["stabilizer"] = ct.subgroup_id;
                rows.push_back(r);
            }
        }
        j = rows;
    }
    emit(cfg, j, os.str());
    return kOk;
}

int cmd_verify(const Config& cfg, const std::string& id, bool all, bool blocks) {
    Catalog c = open_catalog(cfg);
    if (!c.has_design(id)) throw UsageError("unknown design '" + id + "'");
    const DesignRecord& d = c.design(id);
    std::vector<Realization> rs{d.primary()};
    if (all) rs.insert(rs.end(), d.alternates.begin(), d.alternates.end());
    bool ok = true;
    ordered_json arr = ordered_json::array();
    std::ostringstream os;
    for (const auto& r : rs) {
        const auto& act = c.resolve_action(r.group_id, r.action_ref);
        Design D = develop(act.group, r.base_block);
        DesignCheckReport rep = check_design(act.group, D);
        bool good = rep.ok() && rep.two_design.params == d.params;
        ok &= good;
        ordered_json j = report_json(rep);
        j = ordered_json{{"design_id", id}, {"group", r.group_id}, {"stabilizer", r.action_ref}, {"expected", params_json(d.params)},
                         {"report", j}, {"pass", good}};
        if (blocks) j["design"] = design_json(D);
        arr.push_back(j);
        os << id << " under " << r.group_id << " on cosets of " << r.action_ref << ": " << report_text(rep) << " -> "
           << (good ? "PASS" : "FAIL") << "\n";
    }
    emit(cfg, all ? arr : arr[0], os.str());
    return ok ? kOk : kFail;
}

int cmd_classify(const Config& cfg, int table, bool traces) {
    Catalog c = open_catalog(cfg);
    PipelineOptions opt;
    opt.threads = cfg.threads;
    ClassificationResult r = run_pipeline(c, opt);
    if (table) {
        std::cout << format_table(c, r, table);
        return r.ok() ? kOk : kFail;
    }
    ordered_json j = to_json(r);
    if (!traces) j.erase("traces");
    std::ostringstream os;
    std::map<std::string, std::size_t> status;
    for (const auto& t : r.traces) ++status[to_string(t.status)];
    os << "tuples: " << r.enumeration.total_distinct << " (" << r.enumeration.total_per_class << " counted per class)\n";
    os << "traces: " << r.traces.size();
    for (const auto& [s, n] : status) os << ", " << s << " " << n;
    os << "\ndesign instances checked: " << r.instances.size() << "\n";
    os << "isomorphism classes: " << r.dedup_classes.size() << "\n";
    for (const auto& msg : r.discrepancies) os << "DISCREPANCY: " << msg << "\n";
    emit(cfg, j, os.str());
    return r.ok() ? kOk : kFail;
}

int cmd_complement(const Config& cfg, const std::string& id, bool blocks) {
    Catalog c = open_catalog(cfg);
    if (!c.has_design(id)) throw UsageError("unknown design '" + id + "'");
    const DesignRecord& d = c.design(id);
    const auto& act = c.resolve_action(d.group_id, d.action_ref);
    Design D = develop(act.group, d.base_block);
    ParamTuple want = complement_params(d.params);
    Design C = complement(D);
    TwoDesignCheck chk = verify_2design(C);
    bool ok = chk.is_2design && chk.params == want;
    ordered_json j{{"design_id", id}, {"expected", params_json(want)}, {"is_2design", chk.is_2design}, {"pass", ok}};
    if (chk.params) j["params"] = params_json(*chk.params);
    if (blocks) j["design"] = design_json(C);
    std::ostringstream os;
    os << "complement of " << id << ": " << (chk.params ? chk.params->str() : std::string("not a 2-design"))
       << ", expected " << want.str() << " -> " << (ok ? "PASS" : "FAIL") << "\n";
    emit(cfg, j, os.str());
    return ok ? kOk : kFail;
}

int cmd_iso(const Config& cfg, const std::vector<std::string>& ids, std::uint64_t budget, std::optional<std::uint64_t> seed) {
    Catalog c = open_catalog(cfg);
    if (ids.empty() || ids.size() > 2 || (ids.size() == 1 && !seed))
        throw UsageError("iso needs two designs, or one design and --relabel-seed");
    std::vector<Design> ds;
    for (const auto& id : ids) {
        if (!c.has_design(id)) throw UsageError("unknown design '" + id + "'");
        const auto& d = c.design(id);
        ds.push_back(develop(c.resolve_action(d.group_id, d.action_ref).group, d.base_block));
    }
    if (ds.size() == 1) ds.push_back(random_relabeling(ds[0], *seed));
    bool fp_equal = fingerprint(ds[0]) == fingerprint(ds[1]);
    IsoResult r;
    std::string method;
    if (!fp_equal) {
        r.verdict = IsoVerdict::no;
        method = "fingerprint";
    } else {
        r = are_isomorphic(ds[0], ds[1], budget);
        method = "search";
    }
    ordered_json j{{"designs", ids}, {"verdict", to_string(r.verdict)}, {"method", method}, {"nodes", r.nodes}};
    std::ostringstream os;
    os << "isomorphic: " << to_string(r.verdict) << " (by " << method << (method == "search" ? ", " + std::to_string(r.nodes) + " nodes" : "")
       << ")\n";
    emit(cfg, j, os.str());
    return r.verdict == IsoVerdict::unknown ? kFail : kOk;
}

PermGroup symmetric(std::size_t n) {
    std::vector<Permutation> g{parse_perm("(1,2)", n), Permutation(n)};
    std::vector<std::uint32_t> cyc(n);
    for (std::size_t i = 0; i < n; ++i) cyc[i] = static_cast<std::uint32_t>((i + 1) % n);
    g[1] = Permutation::from_images0(cyc);
    return PermGroup::from_generators(g);
}

PermGroup alternating(std::size_t n) {
    // (1,2,3) with (1,...,n) for odd n, or (2,...,n) for even n
    std::vector<std::uint32_t> cyc(n);
    for (std::size_t i = 0; i < n; ++i) cyc[i] = static_cast<std::uint32_t>(i);
    std::size_t start = n % 2 ? 0 : 1;
    for (std::size_t i = start; i < n; ++i) cyc[i] = static_cast<std::uint32_t>(i + 1 == n ? start : i + 1);
    return PermGroup::from_generators({parse_perm("(1,2,3)", n), Permutation::from_images0(cyc)});
}

int cmd_fulldesigns(const Config& cfg, long n, std::optional<long> k) {
    if (n < 5 || n > 10) throw UsageError("n must lie in 5..10");
    if (k && (*k < 3 || *k > n - 2)) throw UsageError("k must lie in 3..n-2");
    PermGroup Sn = symmetric(static_cast<std::size_t>(n)), An = alternating(static_cast<std::size_t>(n));
    ordered_json arr = ordered_json::array();
    std::ostringstream os;
    bool ok = true;
    for (long kk = k ? *k : 3; kk <= (k ? *k : n - 2); ++kk) {
        Design D = full_design(static_cast<std::size_t>(n), static_cast<std::size_t>(kk));
        auto chk = verify_2design(D);
        bool fs = is_flag_transitive(Sn, D), fa = is_flag_transitive(An, D);
        bool prim = Sn.is_primitive() && An.is_primitive();
        ParamTuple want = full_design_params(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(kk));
        bool good = chk.params == want && fs && fa && prim;
        ok &= good;
        arr.push_back({{"n", n}, {"k", kk}, {"params", params_json(want)}, {"is_2design", chk.is_2design},
                       {"flag_transitive_Sn", fs}, {"flag_transitive_An", fa}, {"point_primitive", prim}, {"pass", good}});
        os << (chk.params ? chk.params->str() : std::string("not a 2-design")) << "  flag-transitive under S" << n << ": "
           << (fs ? "yes" : "no") << ", under A" << n << ": " << (fa ? "yes" : "no") << " -> " << (good ? "PASS" : "FAIL")
           << "\n";
    }
    emit(cfg, arr, os.str());
    return ok ? kOk : kFail;
}

int cmd_validate(const Config& cfg) {
    Catalog c = open_catalog(cfg);
    ValidationReport rep = validate(c);
    ordered_json arr = ordered_json::array();
    std::ostringstream os;
    for (const auto& e : rep.entries) {
        arr.push_back({{"record", e.record}, {"check", e.check}, {"ok", e.ok}, {"message", e.message}});
        if (!e.ok) os << "FAIL " << e.record << ": " << e.check << ": " << e.message << "\n";
    }
    os << rep.entries.size() << " checks, " << rep.failures() << " failures\n";
    emit(cfg, {{"entries", arr}, {"failures", rep.failures()}}, os.str());
    return rep.ok() ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flag-transitive point-primitive 2-designs with alternating socle"};
    app.require_subcommand(1);
    Config cfg;
    app.add_option("--catalog", cfg.catalog_path, "catalog JSON (default: $FLAGTRANS_CATALOG)");
    app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "tsv", "text"}));
    app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);

    bool summary = false;
    std::string group;
    auto* en = app.add_subcommand("enumerate", "list feasible parameter tuples");
    en->add_flag("--summary", summary, "per-group counts only");
    en->add_option("--group", group, "restrict to one group");

    std::string design_id;
    bool all = false, blocks = false;
    auto* ve = app.add_subcommand("verify", "develop and check one catalog design");
    ve->add_option("--design", design_id, "design id, e.g. D22")->required();
    ve->add_flag("--all-realizations", all, "also check the design under every other listed group");
    ve->add_flag("--blocks", blocks, "include the block list");

    int table = 0;
    bool traces = false;
    auto* cl = app.add_subcommand("classify", "run the full elimination and verification pipeline");
    cl->add_option("--emit-table", table, "print table 1 (full designs) or 2 (the rest)")->check(CLI::IsMember({1, 2}));
    cl->add_flag("--traces", traces, "include per-tuple elimination traces in JSON output");

    std::string comp_id;
    bool comp_blocks = false;
    auto* co = app.add_subcommand("complement", "build and check the complement of a catalog design");
    co->add_option("--design", comp_id, "design id")->required();
    co->add_flag("--blocks", comp_blocks, "include the block list");

    std::vector<std::string> iso_ids;
    std::uint64_t budget = kDefaultNodeBudget;
    std::optional<std::uint64_t> seed;
    auto* is = app.add_subcommand("iso", "decide isomorphism of two catalog designs");
    is->add_option("--design", iso_ids, "design id (give twice)")->required();
    is->add_option("--budget", budget, "search node budget");
    is->add_option("--relabel-seed", seed, "compare one design against a random relabeling of itself");

    long n = 0;
    std::optional<long> k;
    auto* fd = app.add_subcommand("fulldesigns", "construct and check full designs on n points");
    fd->add_option("--n", n, "number of points")->required();
    fd->add_option("--k", k, "block size");

    auto* va = app.add_subcommand("validate-catalog", "check every catalog record");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*en) return cmd_enumerate(cfg, summary, group);
        if (*ve) return cmd_verify(cfg, design_id, all, blocks);
        if (*cl) return cmd_classify(cfg, table, traces);
        if (*co) return cmd_complement(cfg, comp_id, comp_blocks);
        if (*is) return cmd_iso(cfg, iso_ids, budget, seed);
        if (*fd) return cmd_fulldesigns(cfg, n, k);
        if (*va) return cmd_validate(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CatalogError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}
