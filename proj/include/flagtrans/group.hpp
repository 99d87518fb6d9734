#ifndef FLAGTRANS_GROUP_HPP
#define FLAGTRANS_GROUP_HPP

#include "flagtrans/perm.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <optional>
#include <utility>
#include <unordered_map>
#include <vector>

namespace flagtrans {

using BigInt = boost::multiprecision::cpp_int;

class GroupError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One link of a stabilizer chain. Points are 0-based here.
struct ChainLevel {
    std::uint32_t base = 0;
    std::vector<Permutation> gens;
    std::vector<std::uint32_t> orbit;
    std::vector<std::int32_t> pos;        // pos[x] = index into orbit, -1 if absent
    std::vector<Permutation> inv_trans;   // inv_trans[i] maps orbit[i] back to base
};

struct ChainOptions {
    std::vector<Point> base_prefix;           // 1-based
    std::optional<BigInt> order_bound;        // known upper bound on |G|
    std::uint64_t seed = 0x5eed;
};

class PermGroup {
public:
    static PermGroup from_generators(std::vector<Permutation> gens, const ChainOptions& opt = {});

    std::size_t degree() const { return degree_; }
    const std::vector<Permutation>& generators() const { return gens_; }
    const std::vector<ChainLevel>& chain() const { return chain_; }
    std::vector<Point> base() const;

    BigInt order() const;
    std::uint64_t order_u64() const;
    bool contains(const Permutation& p) const;
    // Returns the sifted residue and the level at which sifting stopped.
    std::pair<Permutation, std::size_t> sift(Permutation p) const;

    std::vector<Point> orbit(Point x) const;
    std::vector<std::vector<Point>> orbits() const;
    PermGroup stabilizer(Point x) const;
    bool is_transitive() const;
    bool is_primitive() const;

    // Canonical element of the right coset H*x, where H is this group.
    Permutation canonical_right_coset_rep(const Permutation& x) const;

    Permutation random_element(std::uint64_t seed) const;

private:
    std::size_t degree_ = 0;
    std::vector<Permutation> gens_;
    std::vector<ChainLevel> chain_;
};

// Sorted k-sets stored contiguously.
class SetList {
public:
    SetList() = default;
    explicit SetList(std::size_t k) : k_(k) {}
    std::size_t k() const { return k_; }
    std::size_t size() const { return k_ ? data_.size() / k_ : 0; }
    std::span<const Point> operator[](std::size_t i) const { return {data_.data() + i * k_, k_}; }
    void push_back(std::span<const Point> s) { data_.insert(data_.end(), s.begin(), s.end()); }
    const std::vector<Point>& data() const { return data_; }
    std::vector<Point>& data() { return data_; }
    void reserve(std::size_t n) { data_.reserve(n * k_); }

private:
    std::size_t k_ = 0;
    std::vector<Point> data_;
};

// Orbit of the set S under the induced action, breadth-first, FIFO, each set sorted.
// Stops with std::nullopt once more than limit sets are found (limit 0 = unlimited).
std::optional<SetList> set_orbit_bounded(const PermGroup& G, std::span<const Point> S, std::size_t limit);
SetList set_orbit(const PermGroup& G, std::span<const Point> S);

struct CosetActionResult {
    PermGroup image_group;
    std::vector<Permutation> labeling;   // labeling[i] represents the coset labeled i+1
    std::unordered_map<Permutation, std::uint32_t, PermHash> label_of;   // canonical rep -> 0-based label
};

CosetActionResult coset_action(const PermGroup& G, const PermGroup& H, std::size_t max_index = 1000000);

// Image of x (an element of G) in the action on the cosets of H with the given labeling.
Permutation induced_coset_perm(const PermGroup& H, const std::vector<Permutation>& labeling,
                               const std::unordered_map<Permutation, std::uint32_t, PermHash>& label_of,
                               const Permutation& x);

struct OrbitSignature {
    std::vector<std::pair<std::size_t, std::size_t>> lengths;   // (length, multiplicity), ascending
    std::vector<std::vector<Point>> orbits;                     // each sorted; ordered by least point
};

OrbitSignature subgroup_orbits(std::size_t degree, const PermGroup& H);
// An element of G mapping `from` to `to`, found along the generators' Schreier tree.
std::optional<Permutation> transporter(const PermGroup& G, Point from, Point to);

// Stabilizer of x in G on a short generating list of random elements (deterministic for a seed).
PermGroup short_stabilizer(const PermGroup& G, Point x, std::uint64_t seed = 1);

// Orbits of G on unordered pairs of distinct points, numbered by first occurrence in lexicographic order.
struct PairOrbitals {
    std::size_t degree = 0;
    std::vector<std::uint32_t> id;     // indexed by index(x, y)
    std::vector<std::uint64_t> size;   // pairs per orbital
    std::size_t index(Point x, Point y) const;   // 1-based points, x != y, either order
};

PairOrbitals pair_orbitals(const PermGroup& G);

// Same, from generators alone; no stabilizer chain is built.
OrbitSignature subgroup_orbits(std::size_t degree, std::span<const Permutation> gens);

}  // namespace flagtrans

#endif
