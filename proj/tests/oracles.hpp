#ifndef FLAGTRANS_TESTS_ORACLES_HPP
#define FLAGTRANS_TESTS_ORACLES_HPP

// Brute-force reference computations shared by the unit and acceptance tests.

#include "flagtrans/group.hpp"
#include "flagtrans/params.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using namespace flagtrans;

// Closure of the generators by breadth-first multiplication.
inline std::set<Permutation> closure(const std::vector<Permutation>& gens) {
    std::set<Permutation> seen{Permutation(gens.front().degree())};
    std::vector<Permutation> queue(seen.begin(), seen.end());
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (const auto& g : gens) {
            auto h = compose(queue[i], g);
            if (seen.insert(h).second) queue.push_back(h);
        }
    return seen;
}

// Every set partition of {0..n-1} as a block-label vector.
inline void partitions(std::size_t n, std::vector<int>& lab, std::size_t i, int used,
                       const std::function<void(const std::vector<int>&, int)>& f) {
    if (i == n) {
        f(lab, used);
        return;
    }
    for (int b = 0; b <= used; ++b) {
        lab[i] = b;
        partitions(n, lab, i + 1, std::max(used, b + 1), f);
    }
}

inline bool brute_primitive(const PermGroup& G) {
    const std::size_t n = G.degree();
    std::vector<int> lab(n);
    bool prim = true;
    partitions(n, lab, 0, 0, [&](const std::vector<int>& l, int blocks) {
        if (blocks == 1 || blocks == static_cast<int>(n) || !prim) return;
        for (const auto& g : G.generators())
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y)
                    if (l[x] == l[y] && l[g.at0(x)] != l[g.at0(y)]) return;
        prim = false;
    });
    return prim;
}

inline Permutation random_perm(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::uint32_t> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<std::uint32_t>(i);
    std::shuffle(img.begin(), img.end(), rng);
    return Permutation::from_images0(img);
}

// Direct search over every (k, r, lambda, b); each condition is tested as stated.
inline std::vector<ParamTuple> brute_tuples(const FeasibilityContext& ctx) {
    std::vector<ParamTuple> out;
    const std::uint64_t v = ctx.v;
    for (std::uint64_t k = 3; k + 1 < v; ++k) {
        const auto cap = binomial(v, k);
        for (std::uint64_t r = 1; r <= ctx.stabilizer_order; ++r) {
            if (ctx.stabilizer_order % r) continue;
            for (std::uint64_t lambda = 0; lambda * (v - 1) <= r * (k - 1); ++lambda) {
                if (lambda * (v - 1) != r * (k - 1)) continue;
                for (std::uint64_t b = 1; b * k <= v * r; ++b) {
                    if (b * k != v * r) continue;
                    if (r > lambda && r * r > lambda * v && b >= v && cap >= b) out.push_back({v, b, r, k, lambda});
                }
            }
        }
    }
    return out;
}

}  // namespace oracle

#endif
