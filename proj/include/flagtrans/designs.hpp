#ifndef FLAGTRANS_DESIGNS_HPP
#define FLAGTRANS_DESIGNS_HPP

#include "flagtrans/group.hpp"
#include "flagtrans/params.hpp"

#include <map>
#include <optional>
#include <random>

namespace flagtrans {

class DesignError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Design {
public:
    Design() = default;
    // Sorts each block and the block list; rejects duplicates, ragged or out-of-range blocks.
    Design(std::size_t v, SetList blocks);
    Design(std::size_t v, const std::vector<std::vector<Point>>& blocks);

    std::size_t v() const { return v_; }
    std::size_t k() const { return blocks_.k(); }
    std::size_t b() const { return blocks_.size(); }
    const SetList& blocks() const { return blocks_; }
    std::span<const Point> block(std::size_t i) const { return blocks_[i]; }
    // Index of a sorted block, or b() if absent.
    std::size_t find(std::span<const Point> block) const;
    const std::vector<std::size_t>& replication() const { return replication_; }   // 0-based points

    friend bool operator==(const Design& a, const Design& b) {
        return a.v_ == b.v_ && a.blocks_.k() == b.blocks_.k() && a.blocks_.data() == b.blocks_.data();
    }

private:
    std::size_t v_ = 0;
    SetList blocks_;
    std::vector<std::size_t> replication_;
};

struct PairWitness {
    Point x1, y1;
    std::size_t count1;
    Point x2, y2;
    std::size_t count2;
};

struct PointWitness {
    Point x1;
    std::size_t count1;
    Point x2;
    std::size_t count2;
};

struct TwoDesignCheck {
    bool is_2design = false;
    std::optional<ParamTuple> params;
    std::optional<PointWitness> replication_witness;
    std::optional<PairWitness> lambda_witness;
};

struct DesignCheckReport {
    TwoDesignCheck two_design;
    bool flag_transitive = false;
    bool point_primitive = false;
    bool ok() const { return two_design.is_2design && flag_transitive && point_primitive; }
};

Design develop(const PermGroup& G, std::span<const Point> base_block);
TwoDesignCheck verify_2design(const Design& D);
bool is_invariant(const PermGroup& G, const Design& D);
bool is_flag_transitive(const PermGroup& G, const Design& D);
DesignCheckReport check_design(const PermGroup& G, const Design& D);
Design complement(const Design& D);
Design full_design(std::size_t n, std::size_t k);
Design relabel(const Design& D, const Permutation& p);
Design random_relabeling(const Design& D, std::uint64_t seed);

struct Fingerprint {
    std::size_t v = 0, b = 0, k = 0;
    std::optional<ParamTuple> params;
    std::map<std::size_t, std::size_t> single_block;            // |B0 ∩ B| -> count
    std::optional<std::map<std::size_t, std::size_t>> pairwise; // over unordered block pairs, b <= 5000
    std::map<std::size_t, std::size_t> triples;                 // blocks through a 3-set -> number of 3-sets
    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

inline constexpr std::size_t kPairwiseProfileLimit = 5000;
Fingerprint fingerprint(const Design& D);

enum class IsoVerdict { yes, no, unknown };
std::string to_string(IsoVerdict v);

struct IsoResult {
    IsoVerdict verdict = IsoVerdict::unknown;
    std::uint64_t nodes = 0;
    std::optional<Permutation> mapping;   // point map D1 -> D2 when verdict is yes
};

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;
IsoResult are_isomorphic(const Design& D1, const Design& D2, std::uint64_t node_budget = kDefaultNodeBudget);

}  // namespace flagtrans

#endif
