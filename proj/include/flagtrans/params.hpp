#ifndef FLAGTRANS_PARAMS_HPP
#define FLAGTRANS_PARAMS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace flagtrans {

class ParamError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParamTuple {
    std::uint64_t v = 0, b = 0, r = 0, k = 0, lambda = 0;
    friend auto operator<=>(const ParamTuple&, const ParamTuple&) = default;
    std::string str() const;
};

struct FeasibilityContext {
    std::uint64_t group_order = 0;
    std::uint64_t stabilizer_order = 0;
    std::uint64_t v = 0;
};

boost::multiprecision::cpp_int binomial(std::uint64_t n, std::uint64_t k);
std::vector<std::uint64_t> divisors(std::uint64_t n);

// Ascending k, then ascending r.
std::vector<ParamTuple> feasible_tuples(const FeasibilityContext& ctx);

ParamTuple full_design_params(std::uint64_t n, std::uint64_t k);
ParamTuple complement_params(const ParamTuple& t);

// True iff bk = vr, lambda(v-1) = r(k-1), r > lambda, r >= k and r^2 > lambda v.
bool satisfies_basic_identities(const ParamTuple& t);

class Catalog;

struct ClassTuples {
    std::string group_id;
    std::string subgroup_id;
    FeasibilityContext ctx;
    std::vector<ParamTuple> tuples;
};

struct GroupTupleCount {
    std::string group_id;
    std::size_t per_class_total = 0;   // identical tuples from different classes counted separately
    std::size_t distinct = 0;          // identical tuples counted once per group
};

struct Enumeration {
    std::vector<ClassTuples> classes;
    std::vector<GroupTupleCount> counts;
    std::size_t total_distinct = 0;
    std::size_t total_per_class = 0;
};

Enumeration enumerate_all(const Catalog& c);

}  // namespace flagtrans

#endif
