#ifndef FLAGTRANS_PERM_HPP
#define FLAGTRANS_PERM_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flagtrans {

// Points are 1-based at the API boundary and 0-based in storage.
using Point = std::uint32_t;

class PermError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::size_t degree);

    // images[i] is the 1-based image of point i+1.
    static Permutation from_images(const std::vector<Point>& images);
    // images[i] is the 0-based image of point i; no validation.
    static Permutation from_images0(std::vector<std::uint32_t> images);

    std::size_t degree() const { return img_.size(); }
    Point operator()(Point x) const;
    std::uint32_t at0(std::size_t i) const { return img_[i]; }
    std::span<const std::uint32_t> images0() const { return img_; }

    bool is_identity() const;
    std::vector<std::vector<Point>> cycles() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::uint32_t> img_;
};

// compose(p, q) applies p first, then q.
Permutation compose(const Permutation& p, const Permutation& q);
Permutation inverse(const Permutation& p);
Permutation power(const Permutation& p, long long e);
std::uint64_t perm_order(const Permutation& p);

// Accepts "()", cycle notation "(1,2,3)(4,5)" or image lists "[2,3,1]".
Permutation parse_perm(std::string_view text, std::size_t degree);
std::string format_cycles(const Permutation& p);
std::string format_images(const Permutation& p);

struct PermHash {
    std::size_t operator()(const Permutation& p) const noexcept;
};

}  // namespace flagtrans

#endif
