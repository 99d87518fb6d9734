#include "flagtrans/designs.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace flagtrans {

namespace {

bool lex_less(std::span<const Point> a, std::span<const Point> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

SetList sorted_setlist(const SetList& in) {
    std::vector<std::size_t> idx(in.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return lex_less(in[a], in[b]); });
    SetList out(in.k());
    out.reserve(in.size());
    for (std::size_t i : idx) out.push_back(in[i]);
    return out;
}

std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }
std::uint64_t choose3(std::uint64_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

}  // namespace

Design::Design(std::size_t v, SetList blocks) : v_(v) {
    const std::size_t k = blocks.k();
    if (blocks.size() == 0) throw DesignError("design has no blocks");
    for (Point& x : blocks.data())
        if (x < 1 || x > v) throw DesignError("block point out of range");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        Point* p = blocks.data().data() + i * k;
        std::sort(p, p + k);
        if (std::adjacent_find(p, p + k) != p + k) throw DesignError("block with a repeated point");
    }
    blocks_ = sorted_setlist(blocks);
    for (std::size_t i = 1; i < blocks_.size(); ++i)
        if (std::equal(blocks_[i].begin(), blocks_[i].end(), blocks_[i - 1].begin()))
            throw DesignError("duplicate block");
    replication_.assign(v, 0);
    for (Point x : blocks_.data()) ++replication_[x - 1];
}

Design::Design(std::size_t v, const std::vector<std::vector<Point>>& blocks) {
    if (blocks.empty()) throw DesignError("design has no blocks");
    SetList sl(blocks.front().size());
    for (const auto& B : blocks) {
        if (B.size() != sl.k()) throw DesignError("blocks of unequal size");
        sl.push_back(B);
    }
    *this = Design(v, std::move(sl));
}

std::size_t Design::find(std::span<const Point> block) const {
    std::size_t lo = 0, hi = blocks_.size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (lex_less(blocks_[mid], block))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < blocks_.size() && std::equal(block.begin(), block.end(), blocks_[lo].begin())) return lo;
    return blocks_.size();
}

Design develop(const PermGroup& G, std::span<const Point> base_block) {
    const std::size_t v = G.degree(), k = base_block.size();
    if (k <= 2 || k + 1 >= v) throw DesignError("block size must satisfy 2 < k < v-1");
    return Design(v, set_orbit(G, base_block));
}

TwoDesignCheck verify_2design(const Design& D) {
    TwoDesignCheck out;
    const std::size_t v = D.v(), k = D.k();
    const auto& rep = D.replication();
    for (std::size_t x = 1; x < v; ++x)
        if (rep[x] != rep[0]) {
            out.replication_witness = PointWitness{1, rep[0], static_cast<Point>(x + 1), rep[x]};
            break;
        }
    std::vector<std::uint32_t> pairs(choose2(v), 0);
    auto tri = [v](std::size_t x, std::size_t y) { return x * (2 * v - x - 1) / 2 + (y - x - 1); };
    for (std::size_t i = 0; i < D.b(); ++i) {
        auto B = D.block(i);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t c = a + 1; c < k; ++c) ++pairs[tri(B[a] - 1, B[c] - 1)];
    }
    for (std::size_t x = 0, idx = 0; x < v && !out.lambda_witness; ++x)
        for (std::size_t y = x + 1; y < v; ++y, ++idx)
            if (pairs[idx] != pairs[0]) {
                out.lambda_witness = PairWitness{1, 2, pairs[0], static_cast<Point>(x + 1), static_cast<Point>(y + 1),
                                                 pairs[idx]};
                break;
            }
    out.is_2design = !out.replication_witness && !out.lambda_witness;
    if (out.is_2design) out.params = ParamTuple{v, D.b(), rep[0], k, pairs[0]};
    return out;
}

bool is_invariant(const PermGroup& G, const Design& D) {
    if (G.degree() != D.v()) throw DesignError("group degree differs from the number of points");
    std::vector<Point> img(D.k());
    for (const auto& g : G.generators())
        for (std::size_t i = 0; i < D.b(); ++i) {
            auto B = D.block(i);
            for (std::size_t j = 0; j < B.size(); ++j) img[j] = g.at0(B[j] - 1) + 1;
            std::sort(img.begin(), img.end());
            if (D.find(img) == D.b()) return false;
        }
    return true;
}

bool is_flag_transitive(const PermGroup& G, const Design& D) {
    if (!is_invariant(G, D)) throw DesignError("design is not invariant under the group");
    if (!G.is_transitive()) return false;
    std::vector<std::size_t> through;   // blocks containing point 1
    for (std::size_t i = 0; i < D.b(); ++i)
        if (D.block(i)[0] == 1) through.push_back(i);   // blocks are sorted, so 1 can only be first
    if (through.size() != D.replication()[0]) return false;
    PermGroup G1 = G.stabilizer(1);
    std::vector<char> seen(D.b(), 0);
    std::vector<std::size_t> queue{through.front()};
    seen[through.front()] = 1;
    std::vector<Point> img(D.k());
    for (std::size_t q = 0; q < queue.size(); ++q) {
        auto B = D.block(queue[q]);
        for (const auto& g : G1.generators()) {
            for (std::size_t j = 0; j < B.size(); ++j) img[j] = g.at0(B[j] - 1) + 1;
            std::sort(img.begin(), img.end());
            std::size_t t = D.find(img);
            if (!seen[t]) {
                seen[t] = 1;
                queue.push_back(t);
            }
        }
    }
    return queue.size() == through.size();
}

DesignCheckReport check_design(const PermGroup& G, const Design& D) {
    DesignCheckReport rep;
    rep.two_design = verify_2design(D);
    rep.flag_transitive = is_flag_transitive(G, D);
    rep.point_primitive = G.is_transitive() && G.is_primitive();
    return rep;
}

Design complement(const Design& D) {
    const std::size_t v = D.v(), k = D.k();
    if (v < k + 2) throw DesignError("complement needs v - k >= 2");
    SetList out(v - k);
    out.reserve(D.b());
    std::vector<Point> c;
    for (std::size_t i = 0; i < D.b(); ++i) {
        auto B = D.block(i);
        c.clear();
        std::size_t j = 0;
        for (Point x = 1; x <= v; ++x) {
            if (j < k && B[j] == x)
                ++j;
            else
                c.push_back(x);
        }
        out.push_back(c);
    }
    return Design(v, std::move(out));
}

Design full_design(std::size_t n, std::size_t k) {
    if (n < 5 || k < 3 || k + 2 > n) throw DesignError("full design needs n >= 5 and 3 <= k <= n-2");
    SetList out(k);
    std::vector<Point> c(k);
    std::iota(c.begin(), c.end(), 1u);
    while (true) {
        out.push_back(c);
        std::size_t i = k;
        while (i > 0 && c[i - 1] == n - k + i) --i;
        if (i == 0) break;
        ++c[i - 1];
        for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
    }
    return Design(n, std::move(out));
}

Design relabel(const Design& D, const Permutation& p) {
    if (p.degree() != D.v()) throw DesignError("relabeling degree differs from v");
    SetList out(D.k());
    out.data().reserve(D.blocks().data().size());
    for (Point x : D.blocks().data()) out.data().push_back(p.at0(x - 1) + 1);
    return Design(D.v(), std::move(out));
}

Design random_relabeling(const Design& D, std::uint64_t seed) {
    std::vector<std::uint32_t> img(D.v());
    std::iota(img.begin(), img.end(), 0u);
    std::mt19937_64 rng(seed);
    std::shuffle(img.begin(), img.end(), rng);
    return relabel(D, Permutation::from_images0(std::move(img)));
}

Fingerprint fingerprint(const Design& D) {
    Fingerprint f;
    f.v = D.v();
    f.b = D.b();
    f.k = D.k();
    auto chk = verify_2design(D);
    f.params = chk.params;
    const std::size_t v = D.v(), k = D.k(), b = D.b();
    const std::size_t words = (v + 63) / 64;
    std::vector<std::uint64_t> bits(b * words, 0);
    for (std::size_t i = 0; i < b; ++i)
        for (Point x : D.block(i)) bits[i * words + (x - 1) / 64] |= 1ull << ((x - 1) % 64);
    auto meet = [&](std::size_t i, std::size_t j) {
        std::size_t c = 0;
        for (std::size_t w = 0; w < words; ++w) c += std::popcount(bits[i * words + w] & bits[j * words + w]);
        return c;
    };
    for (std::size_t j = 0; j < b; ++j) ++f.single_block[meet(0, j)];
    if (b <= kPairwiseProfileLimit) {
        std::vector<std::size_t> hist(k + 1, 0);
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = i + 1; j < b; ++j) ++hist[meet(i, j)];
        f.pairwise.emplace();
        for (std::size_t s = 0; s <= k; ++s)
            if (hist[s]) (*f.pairwise)[s] = hist[s];
    }
    std::vector<std::uint32_t> triples(choose3(v), 0);
    for (std::size_t i = 0; i < b; ++i) {
        auto B = D.block(i);
        for (std::size_t c = 2; c < k; ++c) {
            const std::uint64_t zc = choose3(B[c] - 1);
            for (std::size_t a = 1; a < c; ++a) {
                const std::uint64_t yc = zc + choose2(B[a] - 1);
                for (std::size_t x = 0; x < a; ++x) ++triples[yc + B[x] - 1];
            }
        }
    }
    for (auto t : triples) ++f.triples[t];
    return f;
}

std::string to_string(IsoVerdict v) {
    switch (v) {
        case IsoVerdict::yes: return "yes";
        case IsoVerdict::no: return "no";
        default: return "unknown";
    }
}

namespace {

using Key = std::vector<std::uint64_t>;
using Classes = std::map<Key, std::vector<Point>>;

struct Side {
    const Design& D;
    std::vector<std::vector<std::uint32_t>> through;
    std::vector<std::uint64_t> mask;
    std::vector<std::uint32_t> touched;

    explicit Side(const Design& d) : D(d), through(d.v()), mask(d.b(), 0) {
        for (std::size_t i = 0; i < d.b(); ++i)
            for (Point x : d.block(i)) through[x - 1].push_back(static_cast<std::uint32_t>(i));
    }

    // Points keyed by the multiset of masks of the blocks through them, where bit i of a
    // block's mask records whether it holds the i-th individualized point.
    Classes classes(const std::vector<Point>& seq) {
        for (auto t : touched) mask[t] = 0;
        touched.clear();
        for (std::size_t i = 0; i < seq.size(); ++i)
            for (auto blk : through[seq[i] - 1]) {
                if (!mask[blk]) touched.push_back(blk);
                mask[blk] |= 1ull << i;
            }
        std::vector<Key> keys(D.v());
        for (auto t : touched)
            for (Point x : D.block(t)) keys[x - 1].push_back(mask[t]);
        Classes out;
        for (std::size_t x = 0; x < D.v(); ++x) {
            std::sort(keys[x].begin(), keys[x].end());
            out[std::move(keys[x])].push_back(static_cast<Point>(x + 1));
        }
        return out;
    }
};

struct BudgetExhausted {};

class IsoSearch {
public:
    IsoSearch(const Design& a, const Design& b, std::uint64_t budget) : s1_(a), s2_(b), budget_(budget) {}

    bool run() { return search(); }
    std::uint64_t nodes() const { return nodes_; }
    std::optional<Permutation> mapping;

private:
    bool search() {
        if (++nodes_ > budget_ || seq1_.size() >= 64) throw BudgetExhausted{};
        Classes c1 = s1_.classes(seq1_);
        Classes c2 = s2_.classes(seq2_);
        if (c1.size() != c2.size()) return false;
        const std::vector<Point>* pick = nullptr;
        const Key* pick_key = nullptr;
        for (auto it1 = c1.begin(), it2 = c2.begin(); it1 != c1.end(); ++it1, ++it2) {
            if (it1->first != it2->first || it1->second.size() != it2->second.size()) return false;
            if (it1->second.size() > 1 && (!pick || it1->second.size() < pick->size())) {
                pick = &it1->second;
                pick_key = &it1->first;
            }
        }
        if (!pick) return try_leaf(c1, c2);
        const Point p = pick->front();
        const std::vector<Point> targets = c2.at(*pick_key);
        for (Point q : targets) {
            seq1_.push_back(p);
            seq2_.push_back(q);
            bool ok = search();
            seq1_.pop_back();
            seq2_.pop_back();
            if (ok) return true;
        }
        return false;
    }

    bool try_leaf(const Classes& c1, const Classes& c2) {
        const Design& A = s1_.D;
        const Design& B = s2_.D;
        std::vector<std::uint32_t> img(A.v());
        for (auto it1 = c1.begin(), it2 = c2.begin(); it1 != c1.end(); ++it1, ++it2)
            img[it1->second.front() - 1] = it2->second.front() - 1;
        std::vector<Point> blk(A.k());
        for (std::size_t i = 0; i < A.b(); ++i) {
            auto src = A.block(i);
            for (std::size_t j = 0; j < src.size(); ++j) blk[j] = img[src[j] - 1] + 1;
            std::sort(blk.begin(), blk.end());
            if (B.find(blk) == B.b()) return false;
        }
        mapping = Permutation::from_images0(std::move(img));
        return true;
    }

    Side s1_, s2_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<Point> seq1_, seq2_;
};

}  // namespace

IsoResult are_isomorphic(const Design& D1, const Design& D2, std::uint64_t node_budget) {
    IsoResult res;
    if (D1.v() != D2.v() || D1.b() != D2.b() || D1.k() != D2.k()) {
        res.verdict = IsoVerdict::no;
        return res;
    }
    auto r1 = D1.replication(), r2 = D2.replication();
    std::sort(r1.begin(), r1.end());
    std::sort(r2.begin(), r2.end());
    if (r1 != r2) {
        res.verdict = IsoVerdict::no;
        return res;
    }
    if (D1 == D2) {
        res.verdict = IsoVerdict::yes;
        res.mapping = Permutation(D1.v());
        return res;
    }
    IsoSearch s(D1, D2, node_budget);
    try {
        bool found = s.run();
        res.verdict = found ? IsoVerdict::yes : IsoVerdict::no;
        res.mapping = std::move(s.mapping);
    } catch (const BudgetExhausted&) {
        res.verdict = IsoVerdict::unknown;
    }
    res.nodes = s.nodes();
    return res;
}

}  // namespace flagtrans
