#include "flagtrans/params.hpp"

#include "flagtrans/catalog.hpp"

#include <algorithm>
#include <set>

namespace flagtrans {

std::string ParamTuple::str() const {
    return "(" + std::to_string(v) + "," + std::to_string(b) + "," + std::to_string(r) + "," + std::to_string(k) +
           "," + std::to_string(lambda) + ")";
}

boost::multiprecision::cpp_int binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    boost::multiprecision::cpp_int c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        c *= n - k + i;
        c /= i;
    }
    return c;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> lo, hi;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        lo.push_back(d);
        if (d != n / d) hi.push_back(n / d);
    }
    lo.insert(lo.end(), hi.rbegin(), hi.rend());
    return lo;
}

std::vector<ParamTuple> feasible_tuples(const FeasibilityContext& ctx) {
    const std::uint64_t v = ctx.v;
    std::vector<ParamTuple> out;
    if (v < 5) return out;
    const auto rs = divisors(ctx.stabilizer_order);
    for (std::uint64_t k = 3; k + 1 < v; ++k) {
        const auto cap = binomial(v, k);
        for (std::uint64_t r : rs) {
            const std::uint64_t num = r * (k - 1);
            if (num % (v - 1)) continue;
            const std::uint64_t lambda = num / (v - 1);
            if ((v * r) % k) continue;
            const std::uint64_t b = v * r / k;
            if (r <= lambda) continue;
            if (r * r <= lambda * v) continue;
            if (b < v || cap < b) continue;
            out.push_back({v, b, r, k, lambda});
        }
    }
    return out;
}

ParamTuple full_design_params(std::uint64_t n, std::uint64_t k) {
    if (n < 5 || k < 3 || k + 2 > n) throw ParamError("full design needs n >= 5 and 3 <= k <= n-2");
    auto c = [](std::uint64_t a, std::uint64_t b) { return static_cast<std::uint64_t>(binomial(a, b)); };
    return {n, c(n, k), c(n - 1, k - 1), k, c(n - 2, k - 2)};
}

ParamTuple complement_params(const ParamTuple& t) {
    if (t.v < t.k + 2 || t.b + t.lambda < 2 * t.r + 1) throw ParamError("complement out of scope");
    return {t.v, t.b, t.b - t.r, t.v - t.k, t.b + t.lambda - 2 * t.r};
}

bool satisfies_basic_identities(const ParamTuple& t) {
    return t.b * t.k == t.v * t.r && t.lambda * (t.v - 1) == t.r * (t.k - 1) && t.r > t.lambda && t.r >= t.k &&
           t.r * t.r > t.lambda * t.v;
}

Enumeration enumerate_all(const Catalog& c) {
    Enumeration e;
    for (const auto& g : c.groups) {
        GroupTupleCount cnt{g.id, 0, 0};
        std::set<ParamTuple> seen;
        for (const auto& m : c.max_subgroups) {
            if (m.group_id != g.id) continue;
            ClassTuples ct{g.id, m.subgroup_id, {g.expected_order, m.expected_order, m.expected_index}, {}};
            ct.tuples = feasible_tuples(ct.ctx);
            cnt.per_class_total += ct.tuples.size();
            seen.insert(ct.tuples.begin(), ct.tuples.end());
            e.classes.push_back(std::move(ct));
        }
        cnt.distinct = seen.size();
        e.total_distinct += cnt.distinct;
        e.total_per_class += cnt.per_class_total;
        e.counts.push_back(cnt);
    }
    return e;
}

}  // namespace flagtrans
