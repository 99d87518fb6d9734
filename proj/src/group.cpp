#include "flagtrans/group.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace flagtrans {

namespace {

void rebuild_orbit(ChainLevel& L, std::size_t degree) {
    L.orbit.assign(1, L.base);
    L.pos.assign(degree, -1);
    L.pos[L.base] = 0;
    L.inv_trans.assign(1, Permutation(degree));
    std::vector<Permutation> ginv;
    ginv.reserve(L.gens.size());
    for (const auto& g : L.gens) ginv.push_back(inverse(g));
    for (std::size_t i = 0; i < L.orbit.size(); ++i) {
        std::uint32_t x = L.orbit[i];
        for (std::size_t j = 0; j < L.gens.size(); ++j) {
            std::uint32_t y = L.gens[j].at0(x);
            if (L.pos[y] >= 0) continue;
            L.pos[y] = static_cast<std::int32_t>(L.orbit.size());
            L.orbit.push_back(y);
            // u(y) = u(x) g, so u(y)^-1 = g^-1 u(x)^-1
            L.inv_trans.push_back(compose(ginv[j], L.inv_trans[i]));
        }
    }
}

BigInt chain_order(const std::vector<ChainLevel>& chain) {
    BigInt o = 1;
    for (const auto& L : chain) o *= L.orbit.size();
    return o;
}

std::pair<Permutation, std::size_t> sift_from(const std::vector<ChainLevel>& chain, Permutation p,
                                              std::size_t start) {
    for (std::size_t i = start; i < chain.size(); ++i) {
        const auto& L = chain[i];
        std::int32_t k = L.pos[p.at0(L.base)];
        if (k < 0) return {std::move(p), i};
        if (k > 0) p = compose(p, L.inv_trans[static_cast<std::size_t>(k)]);
    }
    return {std::move(p), chain.size()};
}

class ChainBuilder {
public:
    ChainBuilder(std::size_t degree, std::vector<ChainLevel>& chain) : d_(degree), chain_(chain) {}

    void add_generator(const Permutation& r, std::size_t level) {
        if (level == chain_.size()) {
            ChainLevel L;
            for (std::size_t x = 0; x < d_; ++x)
                if (r.at0(x) != x) {
                    L.base = static_cast<std::uint32_t>(x);
                    break;
                }
            chain_.push_back(std::move(L));
        }
        for (std::size_t i = 0; i <= level; ++i) {
            chain_[i].gens.push_back(r);
            rebuild_orbit(chain_[i], d_);
        }
    }

    // Sifts p and records the residue; returns true if the chain grew.
    bool absorb(const Permutation& p, std::size_t start = 0) {
        auto [res, lvl] = sift_from(chain_, p, start);
        if (lvl == chain_.size() && res.is_identity()) return false;
        add_generator(res, lvl);
        return true;
    }

    void verify() {
        std::size_t i = chain_.size();
        while (i-- > 0) {
            bool restarted = false;
            for (std::size_t a = 0; a < chain_[i].orbit.size() && !restarted; ++a) {
                for (std::size_t s = 0; s < chain_[i].gens.size() && !restarted; ++s) {
                    const auto& L = chain_[i];
                    Permutation u = inverse(L.inv_trans[a]);
                    Permutation us = compose(u, L.gens[s]);
                    std::uint32_t img = us.at0(L.base);
                    Permutation h = compose(us, L.inv_trans[static_cast<std::size_t>(L.pos[img])]);
                    if (h.is_identity()) continue;
                    auto [res, lvl] = sift_from(chain_, h, i + 1);
                    if (lvl == chain_.size() && res.is_identity()) continue;
                    add_generator(res, lvl);
                    i = lvl + 1;
                    restarted = true;
                }
            }
        }
    }

private:
    std::size_t d_;
    std::vector<ChainLevel>& chain_;
};

class ProductReplacer {
public:
    ProductReplacer(const std::vector<Permutation>& gens, std::uint64_t seed) : rng_(seed) {
        std::size_t n = std::max<std::size_t>(10, gens.size());
        for (std::size_t i = 0; i < n; ++i) slots_.push_back(gens[i % gens.size()]);
        acc_ = Permutation(gens.front().degree());
        for (int i = 0; i < 50; ++i) next();
    }
    Permutation next() {
        std::uniform_int_distribution<std::size_t> pick(0, slots_.size() - 1);
        std::size_t s = pick(rng_), t = pick(rng_);
        while (t == s) t = pick(rng_);
        if (rng_() & 1)
            slots_[s] = compose(slots_[s], slots_[t]);
        else
            slots_[s] = compose(slots_[t], slots_[s]);
        acc_ = compose(acc_, slots_[s]);
        return acc_;
    }

private:
    std::mt19937_64 rng_;
    std::vector<Permutation> slots_;
    Permutation acc_;
};

}  // namespace

PermGroup PermGroup::from_generators(std::vector<Permutation> gens, const ChainOptions& opt) {
    if (gens.empty()) throw GroupError("empty generator list");
    PermGroup G;
    G.degree_ = gens.front().degree();
    for (const auto& g : gens)
        if (g.degree() != G.degree_) throw GroupError("generators have unequal degrees");
    G.gens_ = std::move(gens);

    ChainBuilder cb(G.degree_, G.chain_);
    for (Point b : opt.base_prefix) {
        if (b < 1 || b > G.degree_) throw GroupError("base point out of range");
        ChainLevel L;
        L.base = b - 1;
        G.chain_.push_back(std::move(L));
    }
    for (auto& L : G.chain_) rebuild_orbit(L, G.degree_);

    std::vector<Permutation> nontrivial;
    for (const auto& g : G.gens_)
        if (!g.is_identity()) nontrivial.push_back(g);
    if (nontrivial.empty()) return G;

    for (const auto& g : nontrivial) cb.absorb(g);

    auto reached = [&] { return opt.order_bound && chain_order(G.chain_) == *opt.order_bound; };
    if (!reached()) {
        ProductReplacer pr(nontrivial, opt.seed);
        int quiet = 0;
        while (quiet < 40 && !reached()) {
            if (cb.absorb(pr.next()))
                quiet = 0;
            else
                ++quiet;
        }
    }
    if (!reached()) cb.verify();
    if (opt.order_bound && chain_order(G.chain_) > *opt.order_bound)
        throw GroupError("group order exceeds the stated bound");
    return G;
}

std::vector<Point> PermGroup::base() const {
    std::vector<Point> b;
    for (const auto& L : chain_) b.push_back(L.base + 1);
    return b;
}

BigInt PermGroup::order() const { return chain_order(chain_); }

std::uint64_t PermGroup::order_u64() const {
    BigInt o = order();
    if (o > std::numeric_limits<std::uint64_t>::max()) throw GroupError("group order exceeds 64 bits");
    return static_cast<std::uint64_t>(o);
}

std::pair<Permutation, std::size_t> PermGroup::sift(Permutation p) const {
    if (p.degree() != degree_) throw GroupError("degree mismatch");
    return sift_from(chain_, std::move(p), 0);
}

bool PermGroup::contains(const Permutation& p) const {
    auto [res, lvl] = sift(p);
    return lvl == chain_.size() && res.is_identity();
}

std::vector<Point> PermGroup::orbit(Point x) const {
    if (x < 1 || x > degree_) throw GroupError("point out of range");
    std::vector<char> seen(degree_, 0);
    std::vector<Point> out{x};
    seen[x - 1] = 1;
    for (std::size_t i = 0; i < out.size(); ++i)
        for (const auto& g : gens_) {
            Point y = g.at0(out[i] - 1) + 1;
            if (!seen[y - 1]) {
                seen[y - 1] = 1;
                out.push_back(y);
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<Point>> PermGroup::orbits() const {
    std::vector<std::vector<Point>> out;
    std::vector<char> seen(degree_, 0);
    for (Point x = 1; x <= degree_; ++x) {
        if (seen[x - 1]) continue;
        auto o = orbit(x);
        for (Point y : o) seen[y - 1] = 1;
        out.push_back(std::move(o));
    }
    return out;
}

PermGroup PermGroup::stabilizer(Point x) const {
    if (x < 1 || x > degree_) throw GroupError("point out of range");
    ChainOptions opt;
    opt.base_prefix = {x};
    opt.order_bound = order();
    PermGroup full = from_generators(gens_, opt);
    PermGroup S;
    S.degree_ = degree_;
    S.chain_.assign(full.chain_.begin() + 1, full.chain_.end());
    if (!S.chain_.empty()) S.gens_ = S.chain_.front().gens;
    if (S.gens_.empty()) S.gens_.push_back(Permutation(degree_));
    return S;
}

bool PermGroup::is_transitive() const { return orbit(1).size() == degree_; }

bool PermGroup::is_primitive() const {
    if (!is_transitive()) throw GroupError("is_primitive requires a transitive group");
    const std::size_t d = degree_;
    if (d <= 2) return true;
    std::vector<std::uint32_t> parent(d), size(d);
    auto find = [&](std::uint32_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    for (std::uint32_t beta = 1; beta < d; ++beta) {
        std::iota(parent.begin(), parent.end(), 0u);
        std::fill(size.begin(), size.end(), 1u);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> work{{0u, beta}};
        parent[beta] = 0;
        size[0] = 2;
        bool whole = false;
        for (std::size_t w = 0; w < work.size() && !whole; ++w) {
            auto [a, b] = work[w];
            for (const auto& g : gens_) {
                std::uint32_t x = find(g.at0(a)), y = find(g.at0(b));
                if (x == y) continue;
                if (size[x] < size[y]) std::swap(x, y);
                parent[y] = x;
                size[x] += size[y];
                work.emplace_back(x, y);
                if (size[x] == d) {
                    whole = true;
                    break;
                }
            }
        }
        if (!whole) return false;
    }
    return true;
}

Permutation PermGroup::canonical_right_coset_rep(const Permutation& x) const {
    if (x.degree() != degree_) throw GroupError("degree mismatch");
    Permutation cur = x;
    for (const auto& L : chain_) {
        std::size_t best = 0;
        std::uint32_t best_img = cur.at0(L.orbit[0]);
        for (std::size_t i = 1; i < L.orbit.size(); ++i) {
            std::uint32_t im = cur.at0(L.orbit[i]);
            if (im < best_img) {
                best_img = im;
                best = i;
            }
        }
        if (best != 0) cur = compose(inverse(L.inv_trans[best]), cur);
    }
    return cur;
}

Permutation PermGroup::random_element(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    Permutation p(degree_);
    for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) {
        std::uniform_int_distribution<std::size_t> pick(0, it->orbit.size() - 1);
        p = compose(p, inverse(it->inv_trans[pick(rng)]));
    }
    return p;
}

namespace {

struct SetKeyHash {
    const std::vector<Point>* data;
    std::size_t k;
    std::size_t operator()(std::size_t i) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        const Point* p = data->data() + i * k;
        for (std::size_t j = 0; j < k; ++j) {
            h ^= p[j] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h * 0xff51afd7ed558ccdull);
    }
};

struct SetKeyEq {
    const std::vector<Point>* data;
    std::size_t k;
    bool operator()(std::size_t a, std::size_t b) const noexcept {
        return std::equal(data->data() + a * k, data->data() + (a + 1) * k, data->data() + b * k);
    }
};

}  // namespace

std::optional<SetList> set_orbit_bounded(const PermGroup& G, std::span<const Point> S, std::size_t limit) {
    if (S.empty()) throw GroupError("set_orbit of the empty set");
    std::vector<Point> first(S.begin(), S.end());
    std::sort(first.begin(), first.end());
    if (std::adjacent_find(first.begin(), first.end()) != first.end()) throw GroupError("repeated point in set");
    for (Point x : first)
        if (x < 1 || x > G.degree()) throw GroupError("set point out of range");
    const std::size_t k = first.size();
    SetList out(k);
    out.push_back(first);
    // Slot index out.size() is used as scratch for the candidate set.
    std::unordered_set<std::size_t, SetKeyHash, SetKeyEq> seen(64, SetKeyHash{&out.data(), k},
                                                               SetKeyEq{&out.data(), k});
    seen.insert(0);
    std::vector<Point> img(k);
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (const auto& g : G.generators()) {
            auto cur = out[i];
            for (std::size_t j = 0; j < k; ++j) img[j] = g.at0(cur[j] - 1) + 1;
            std::sort(img.begin(), img.end());
            out.push_back(img);
            if (seen.insert(out.size() - 1).second) {
                if (limit && out.size() > limit) return std::nullopt;
            } else {
                out.data().resize(out.data().size() - k);
            }
        }
    }
    return out;
}

SetList set_orbit(const PermGroup& G, std::span<const Point> S) { return *set_orbit_bounded(G, S, 0); }

CosetActionResult coset_action(const PermGroup& G, const PermGroup& H, std::size_t max_index) {
    if (G.degree() != H.degree()) throw GroupError("coset_action: degree mismatch");
    for (const auto& h : H.generators())
        if (!G.contains(h)) throw GroupError("coset_action: H is not a subgroup of G");
    BigInt og = G.order(), oh = H.order();
    if (og % oh != 0) throw GroupError("coset_action: |H| does not divide |G|");
    BigInt idx = og / oh;
    if (idx > max_index) throw GroupError("coset_action: index exceeds limit");
    const std::size_t m = static_cast<std::size_t>(idx);

    std::vector<Permutation> reps{H.canonical_right_coset_rep(Permutation(G.degree()))};
    std::unordered_map<Permutation, std::uint32_t, PermHash> label{{reps[0], 0u}};
    const auto& gens = G.generators();
    std::vector<std::vector<std::uint32_t>> images(gens.size(), std::vector<std::uint32_t>(m, 0));
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (std::size_t s = 0; s < gens.size(); ++s) {
            Permutation c = H.canonical_right_coset_rep(compose(reps[i], gens[s]));
            auto it = label.find(c);
            std::uint32_t l;
            if (it == label.end()) {
                l = static_cast<std::uint32_t>(reps.size());
                if (l >= m) throw GroupError("coset_action: more cosets than the index allows");
                label.emplace(c, l);
                reps.push_back(std::move(c));
            } else {
                l = it->second;
            }
            images[s][i] = l;
        }
    }
    if (reps.size() != m) throw GroupError("coset_action: coset count disagrees with the index");
    std::vector<Permutation> igens;
    for (auto& im : images) igens.push_back(Permutation::from_images0(std::move(im)));
    ChainOptions opt;
    opt.order_bound = og;
    return {PermGroup::from_generators(std::move(igens), opt), std::move(reps), std::move(label)};
}

Permutation induced_coset_perm(const PermGroup& H, const std::vector<Permutation>& labeling,
                               const std::unordered_map<Permutation, std::uint32_t, PermHash>& label_of,
                               const Permutation& x) {
    const std::size_t m = labeling.size();
    std::vector<std::uint32_t> im(m);
    for (std::size_t i = 0; i < m; ++i) {
        auto it = label_of.find(H.canonical_right_coset_rep(compose(labeling[i], x)));
        if (it == label_of.end()) throw GroupError("induced_coset_perm: element does not permute the cosets");
        im[i] = it->second;
    }
    return Permutation::from_images0(std::move(im));
}

std::optional<Permutation> transporter(const PermGroup& G, Point from, Point to) {
    const std::size_t n = G.degree();
    if (from < 1 || from > n || to < 1 || to > n) throw GroupError("point out of range");
    // tree[y] = (parent, generator index) on the way out from `from`.
    std::vector<std::pair<Point, std::size_t>> tree(n, {0, 0});
    std::vector<char> seen(n, 0);
    std::vector<Point> queue{from - 1};
    seen[from - 1] = 1;
    const auto& gens = G.generators();
    for (std::size_t i = 0; i < queue.size() && !seen[to - 1]; ++i)
        for (std::size_t s = 0; s < gens.size(); ++s) {
            Point y = gens[s].at0(queue[i]);
            if (seen[y]) continue;
            seen[y] = 1;
            tree[y] = {queue[i], s};
            queue.push_back(y);
        }
    if (!seen[to - 1]) return std::nullopt;
    Permutation p(n);
    for (Point y = to - 1; y != from - 1; y = tree[y].first) p = compose(gens[tree[y].second], p);
    return p;
}

PermGroup short_stabilizer(const PermGroup& G, Point x, std::uint64_t seed) {
    PermGroup S = G.stabilizer(x);
    const BigInt target = S.order();
    std::vector<Permutation> gens;
    ChainOptions opt;
    opt.order_bound = target;
    for (std::uint64_t i = 0;; ++i) {
        if (target == 1) return PermGroup::from_generators({Permutation(G.degree())});
        gens.push_back(S.random_element(seed * 0x9e3779b97f4a7c15ull + i));
        if (gens.size() < 2) continue;
        PermGroup T = PermGroup::from_generators(gens, opt);
        if (T.order() == target) return T;
        if (gens.size() >= 8) return S;
    }
}

std::size_t PairOrbitals::index(Point x, Point y) const {
    if (x == y || x < 1 || y < 1 || x > degree || y > degree) throw GroupError("pair index: bad pair");
    if (x > y) std::swap(x, y);
    const std::size_t a = x - 1, b = y - 1;
    return a * (2 * degree - a - 1) / 2 + (b - a - 1);
}

PairOrbitals pair_orbitals(const PermGroup& G) {
    PairOrbitals po;
    const std::size_t n = po.degree = G.degree();
    const std::size_t m = n * (n - 1) / 2;
    std::vector<std::uint32_t> parent(m);
    for (std::size_t i = 0; i < m; ++i) parent[i] = static_cast<std::uint32_t>(i);
    auto find = [&](std::uint32_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (const auto& g : G.generators())
        for (Point x = 1, i = 0; x <= n; ++x)
            for (Point y = x + 1; y <= n; ++y, ++i) {
                auto a = find(i), b = find(static_cast<std::uint32_t>(po.index(g(x), g(y))));
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
    po.id.resize(m);
    std::vector<std::uint32_t> label(m, UINT32_MAX);
    for (std::size_t i = 0; i < m; ++i) {
        auto r = find(static_cast<std::uint32_t>(i));
        if (label[r] == UINT32_MAX) {
            label[r] = static_cast<std::uint32_t>(po.size.size());
            po.size.push_back(0);
        }
        po.id[i] = label[r];
        ++po.size[label[r]];
    }
    return po;
}

OrbitSignature subgroup_orbits(std::size_t degree, const PermGroup& H) {
    if (H.degree() != degree) throw GroupError("subgroup_orbits: degree mismatch");
    return subgroup_orbits(degree, std::span<const Permutation>(H.generators()));
}

OrbitSignature subgroup_orbits(std::size_t degree, std::span<const Permutation> gens) {
    for (const auto& g : gens)
        if (g.degree() != degree) throw GroupError("subgroup_orbits: degree mismatch");
    OrbitSignature sig;
    std::vector<char> seen(degree, 0);
    for (Point x = 0; x < degree; ++x) {
        if (seen[x]) continue;
        std::vector<Point> o{x};
        seen[x] = 1;
        for (std::size_t i = 0; i < o.size(); ++i)
            for (const auto& g : gens) {
                Point y = g.at0(o[i]);
                if (!seen[y]) {
                    seen[y] = 1;
                    o.push_back(y);
                }
            }
        for (Point& y : o) ++y;
        std::sort(o.begin(), o.end());
        sig.orbits.push_back(std::move(o));
    }
    std::map<std::size_t, std::size_t> mult;
    for (const auto& o : sig.orbits) ++mult[o.size()];
    sig.lengths.assign(mult.begin(), mult.end());
    return sig;
}

}  // namespace flagtrans
