#ifndef FLAGTRANS_CATALOG_HPP
#define FLAGTRANS_CATALOG_HPP

#include "flagtrans/group.hpp"
#include "flagtrans/params.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace flagtrans {

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GroupSpec {
    std::string id;
    std::size_t natural_degree = 0;
    std::vector<Permutation> generators;
    std::uint64_t expected_order = 0;
};

struct MaxSubgroupSpec {
    std::string group_id;
    std::string subgroup_id;
    std::vector<Permutation> generators;
    std::uint64_t expected_order = 0;
    std::uint64_t expected_index = 0;
};

struct StabilizerCandidateSpec {
    std::string group_id;
    std::string action_ref;
    std::uint64_t index = 0;
    int class_no = 0;
    std::vector<Permutation> generators;   // degree v
};

struct Realization {
    std::string group_id;
    std::string action_ref;
    std::vector<Point> base_block;
};

struct DesignRecord {
    std::string design_id;
    std::string group_id;
    std::string action_ref;
    ParamTuple params;
    std::vector<Point> base_block;
    std::string table_row_ref;
    std::vector<Realization> alternates;   // the same design under other groups

    Realization primary() const { return {group_id, action_ref, base_block}; }
};

// Number of conjugacy classes of subgroups of each order, for one group.
struct SubgroupCensus {
    std::string group_id;
    std::map<std::uint64_t, std::size_t> classes_by_order;
};

// One conjugacy class of subgroups, given by generators of a representative in the natural representation.
struct SubgroupClassSpec {
    std::string group_id;
    int class_no = 0;
    std::uint64_t order = 0;
    std::vector<Permutation> generators;
};

struct ResolvedAction {
    PermGroup group;                      // degree-v image
    std::vector<Permutation> labeling;    // coset representatives in the natural representation
    PermGroup point_stabilizer;           // natural representation
    std::unordered_map<Permutation, std::uint32_t, PermHash> label_of;
    PermGroup image_point_stabilizer;     // stabilizer of point 1 in the degree-v image
    PairOrbitals pair_orbitals;           // of the degree-v image

    // Image of a natural-representation element of the group in this action.
    Permutation induced(const Permutation& x) const;
};

struct ValidationEntry {
    std::string record;
    std::string check;
    bool ok = true;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;
    bool ok() const;
    std::size_t failures() const;
};

class Catalog {
public:
    static constexpr int kSchemaVersion = 1;

    int schema_version = kSchemaVersion;
    std::vector<GroupSpec> groups;
    std::vector<MaxSubgroupSpec> max_subgroups;
    std::vector<StabilizerCandidateSpec> stabilizer_candidates;
    std::vector<DesignRecord> designs;
    std::vector<SubgroupCensus> census;
    std::vector<SubgroupClassSpec> subgroup_classes;

    Catalog();
    // Copies start with an empty cache so that edited copies never see stale actions.
    Catalog(const Catalog& o);
    Catalog& operator=(const Catalog& o);
    Catalog(Catalog&&) = default;
    Catalog& operator=(Catalog&&) = default;

    const GroupSpec& group(const std::string& id) const;
    const MaxSubgroupSpec& max_subgroup(const std::string& group_id, const std::string& subgroup_id) const;
    const DesignRecord& design(const std::string& design_id) const;
    const SubgroupCensus* census_for(const std::string& group_id) const;
    // Supplied subgroup classes of the given order, by class number.
    std::vector<const SubgroupClassSpec*> classes_of_order(const std::string& group_id, std::uint64_t order) const;
    bool has_group(const std::string& id) const;
    bool has_design(const std::string& id) const;

    // Cached, safe to call from several threads.
    const PermGroup& natural_group(const std::string& group_id) const;
    const ResolvedAction& resolve_action(const std::string& group_id, const std::string& action_ref) const;

private:
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

Catalog load_catalog(const std::string& path);
Catalog parse_catalog(const std::string& text, const std::string& origin = "<string>");
ValidationReport validate(const Catalog& c);

}  // namespace flagtrans

#endif
