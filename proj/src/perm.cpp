#include "flagtrans/perm.hpp"

#include <cctype>
#include <numeric>

namespace flagtrans {

Permutation::Permutation(std::size_t degree) : img_(degree) {
    std::iota(img_.begin(), img_.end(), 0u);
}

Permutation Permutation::from_images(const std::vector<Point>& images) {
    const std::size_t n = images.size();
    std::vector<std::uint32_t> img(n);
    std::vector<char> seen(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        Point y = images[i];
        if (y < 1 || y > n)
            throw PermError("image " + std::to_string(y) + " out of range 1.." + std::to_string(n));
        if (seen[y - 1]) throw PermError("image " + std::to_string(y) + " repeated");
        seen[y - 1] = 1;
        img[i] = y - 1;
    }
    return from_images0(std::move(img));
}

Permutation Permutation::from_images0(std::vector<std::uint32_t> images) {
    Permutation p;
    p.img_ = std::move(images);
    return p;
}

Point Permutation::operator()(Point x) const {
    if (x < 1 || x > img_.size()) throw PermError("point " + std::to_string(x) + " out of range");
    return img_[x - 1] + 1;
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
        if (img_[i] != i) return false;
    return true;
}

std::vector<std::vector<Point>> Permutation::cycles() const {
    std::vector<std::vector<Point>> out;
    std::vector<char> seen(img_.size(), 0);
    for (std::size_t i = 0; i < img_.size(); ++i) {
        if (seen[i] || img_[i] == i) continue;
        std::vector<Point> c;
        for (std::size_t j = i; !seen[j]; j = img_[j]) {
            seen[j] = 1;
            c.push_back(static_cast<Point>(j + 1));
        }
        out.push_back(std::move(c));
    }
    return out;
}

Permutation compose(const Permutation& p, const Permutation& q) {
    if (p.degree() != q.degree()) throw PermError("degree mismatch in compose");
    std::vector<std::uint32_t> img(p.degree());
    auto a = p.images0();
    auto b = q.images0();
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = b[a[i]];
    return Permutation::from_images0(std::move(img));
}

Permutation inverse(const Permutation& p) {
    std::vector<std::uint32_t> img(p.degree());
    auto a = p.images0();
    for (std::size_t i = 0; i < img.size(); ++i) img[a[i]] = static_cast<std::uint32_t>(i);
    return Permutation::from_images0(std::move(img));
}

Permutation power(const Permutation& p, long long e) {
    Permutation base = e < 0 ? inverse(p) : p;
    unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    Permutation acc(p.degree());
    while (n) {
        if (n & 1) acc = compose(acc, base);
        base = compose(base, base);
        n >>= 1;
    }
    return acc;
}

std::uint64_t perm_order(const Permutation& p) {
    std::uint64_t o = 1;
    for (const auto& c : p.cycles()) o = std::lcm(o, static_cast<std::uint64_t>(c.size()));
    return o;
}

namespace {

struct Lexer {
    std::string_view s;
    std::size_t i = 0;
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool at_end() { skip(); return i >= s.size(); }
    char peek() { skip(); return i < s.size() ? s[i] : '\0'; }
    void expect(char c) {
        if (peek() != c) throw PermError(std::string("expected '") + c + "' at offset " + std::to_string(i));
        ++i;
    }
    Point number() {
        skip();
        std::size_t start = i;
        unsigned long long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + static_cast<unsigned>(s[i] - '0');
            if (v > 0xffffffffull) throw PermError("number too large");
            ++i;
        }
        if (i == start) throw PermError("expected a number at offset " + std::to_string(start));
        return static_cast<Point>(v);
    }
};

}  // namespace

Permutation parse_perm(std::string_view text, std::size_t degree) {
    Lexer lx{text};
    if (lx.at_end()) throw PermError("empty permutation text");
    if (lx.peek() == '[') {
        lx.expect('[');
        std::vector<Point> imgs;
        if (lx.peek() != ']') {
            imgs.push_back(lx.number());
            while (lx.peek() == ',') {
                lx.expect(',');
                imgs.push_back(lx.number());
            }
        }
        lx.expect(']');
        if (!lx.at_end()) throw PermError("trailing characters after image list");
        if (imgs.size() != degree)
            throw PermError("image list has length " + std::to_string(imgs.size()) + ", expected " +
                            std::to_string(degree));
        return Permutation::from_images(imgs);
    }
    std::vector<std::uint32_t> img(degree);
    std::iota(img.begin(), img.end(), 0u);
    std::vector<char> used(degree, 0);
    while (!lx.at_end()) {
        lx.expect('(');
        std::vector<Point> cyc;
        if (lx.peek() != ')') {
            cyc.push_back(lx.number());
            while (lx.peek() == ',') {
                lx.expect(',');
                cyc.push_back(lx.number());
            }
        }
        lx.expect(')');
        for (Point x : cyc) {
            if (x < 1 || x > degree)
                throw PermError("point " + std::to_string(x) + " out of range 1.." + std::to_string(degree));
            if (used[x - 1]) throw PermError("point " + std::to_string(x) + " appears twice");
            used[x - 1] = 1;
        }
        for (std::size_t j = 0; j < cyc.size(); ++j) img[cyc[j] - 1] = cyc[(j + 1) % cyc.size()] - 1;
    }
    return Permutation::from_images0(std::move(img));
}

std::string format_cycles(const Permutation& p) {
    auto cs = p.cycles();
    if (cs.empty()) return "()";
    std::string out;
    for (const auto& c : cs) {
        out += '(';
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (j) out += ',';
            out += std::to_string(c[j]);
        }
        out += ')';
    }
    return out;
}

std::string format_images(const Permutation& p) {
    std::string out = "[";
    for (std::size_t i = 0; i < p.degree(); ++i) {
        if (i) out += ',';
        out += std::to_string(p.at0(i) + 1);
    }
    return out + "]";
}

std::size_t PermHash::operator()(const Permutation& p) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto x : p.images0()) {
        h ^= x;
        h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
}

}  // namespace flagtrans
