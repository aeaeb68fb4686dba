#include "hbs/perms.hpp"

#include <algorithm>
#include <unordered_set>

namespace hbs {

PermPair::PermPair(std::int32_t n, Transposition t1, Transposition t2)
    : n_(n), t1_(t1), t2_(t2) {
    auto check = [n](const Transposition& t) {
        return 1 <= t.i && t.i < t.j && t.j <= n;
    };
    if (n < 2 || !check(t1) || !check(t2))
        throw argument_error("PermPair: transpositions must satisfy 1 <= i < j <= n");
}

PermPair PermPair::identity(std::int32_t n) {
    return PermPair(n, Transposition{1, 2}, Transposition{1, 2});
}

bool PermPair::is_identity() const { return t1_ == t2_; }

std::vector<std::int32_t> PermPair::displaced() const {
    std::vector<std::int32_t> pts;
    for (std::int32_t x : {t1_.i, t1_.j, t2_.i, t2_.j}) {
        if (apply(x) != x && std::find(pts.begin(), pts.end(), x) == pts.end())
            pts.push_back(x);
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

std::vector<std::int32_t> PermPair::table() const {
    std::vector<std::int32_t> tab(static_cast<std::size_t>(n_) + 1, 0);
    for (std::int32_t x = 1; x <= n_; ++x) tab[static_cast<std::size_t>(x)] = apply(x);
    return tab;
}

bool PermPair::same_map(const PermPair& other) const {
    if (n_ != other.n_) return false;
    // Both move points within the union of their transposition supports only.
    for (std::int32_t x : {t1_.i, t1_.j, t2_.i, t2_.j, other.t1_.i, other.t1_.j,
                           other.t2_.i, other.t2_.j}) {
        if (apply(x) != other.apply(x)) return false;
    }
    return true;
}

std::vector<Transposition> transpositions(std::int32_t n) {
    if (n < 2) throw argument_error("transpositions: n >= 2 required");
    std::vector<Transposition> out;
    out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (std::int32_t i = 1; i <= n; ++i)
        for (std::int32_t j = i + 1; j <= n; ++j) out.push_back(Transposition{i, j});
    return out;
}

namespace {

// Hash of the map restricted to its displaced points; enough to distinguish
// members of S2(n) together with same_map.
std::uint64_t map_signature(const PermPair& phi) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int32_t x : phi.displaced()) {
        h ^= static_cast<std::uint64_t>(x);
        h *= 1099511628211ull;
        h ^= static_cast<std::uint64_t>(phi.apply(x));
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::vector<PermPair> s2_enumerate(std::int32_t n) {
    if (n < 2) throw argument_error("s2_enumerate: n >= 2 required");
    const auto ts = transpositions(n);
    std::vector<PermPair> reps;
    std::unordered_set<std::uint64_t> seen;
    for (const Transposition& t1 : ts) {
        for (const Transposition& t2 : ts) {
            PermPair phi(n, t1, t2);
            const std::uint64_t sig = map_signature(phi);
            if (seen.count(sig)) {
                // Hash collisions across distinct maps are possible in
                // principle; resolve by direct comparison.
                bool dup = false;
                for (const PermPair& r : reps) {
                    if (map_signature(r) == sig && r.same_map(phi)) { dup = true; break; }
                }
                if (dup) continue;
            }
            seen.insert(sig);
            reps.push_back(phi);
        }
    }
    return reps;
}

std::int32_t fixed_point(const PermPair& phi) {
    for (std::int32_t m = 1; m <= phi.n(); ++m)
        if (phi.apply(m) == m) return m;
    throw no_fixed_point("fixed_point: permutation moves every point (n < 5)");
}

namespace {

bool satisfies(const PermPair& phi, std::int32_t l1, std::int32_t s1, std::int32_t l2,
               std::int32_t s2) {
    return phi.apply(l1) == s1 && phi.apply(l2) == s2;
}

}  // namespace

std::optional<PermPair> find_two_constraint_perm(std::int32_t n, std::int32_t l1,
                                                 std::int32_t s1, std::int32_t l2,
                                                 std::int32_t s2) {
    if (n < 2 || l1 < 1 || l1 > n || l2 < 1 || l2 > n || s1 < 1 || s1 > n || s2 < 1 ||
        s2 > n)
        throw argument_error("find_two_constraint_perm: points outside {1..n}");
    if (l1 == l2 || s1 == s2)
        throw argument_error("find_two_constraint_perm: targets and sources must be distinct");

    if (l1 == s1 && l2 == s2 && n >= 2) return PermPair::identity(n);

    // Constructive attempt: route l1 -> s1 through t2, then fix up l2 with t1.
    if (l1 != s1) {
        Transposition t2{std::min(l1, s1), std::max(l1, s1)};
        const std::int32_t mid = t2.apply(l2);
        if (mid != s2 && s1 != mid && s1 != s2) {
            Transposition t1{std::min(mid, s2), std::max(mid, s2)};
            PermPair phi(n, t1, t2);
            if (satisfies(phi, l1, s1, l2, s2)) return phi;
        }
        if (mid == s2) {
            // l2 already lands correctly; t1 must fix both s1 and s2.
            for (std::int32_t a = 1; a <= n && a <= 6; ++a) {
                for (std::int32_t b = a + 1; b <= n && b <= 7; ++b) {
                    if (a == s1 || b == s1 || a == s2 || b == s2) continue;
                    PermPair phi(n, Transposition{a, b}, t2);
                    if (satisfies(phi, l1, s1, l2, s2)) return phi;
                }
            }
            // Degenerate dummy: t1 = t2 would undo t2; instead swap two
            // points that t2 already moves together. Fall through to the
            // bounded enumeration below.
        }
    }

    // Bounded fallback: any solution moving <= 4 points can be written over
    // the constrained points plus a couple of helpers.
    std::vector<std::int32_t> support;
    for (std::int32_t x : {l1, l2, s1, s2})
        if (std::find(support.begin(), support.end(), x) == support.end())
            support.push_back(x);
    for (std::int32_t x = 1; x <= n && support.size() < 10; ++x) {
        if (std::find(support.begin(), support.end(), x) == support.end())
            support.push_back(x);
    }
    std::sort(support.begin(), support.end());
    std::vector<Transposition> cand;
    for (std::size_t a = 0; a < support.size(); ++a)
        for (std::size_t b = a + 1; b < support.size(); ++b)
            cand.push_back(Transposition{support[a], support[b]});
    for (const Transposition& t1 : cand) {
        for (const Transposition& t2 : cand) {
            PermPair phi(n, t1, t2);
            if (satisfies(phi, l1, s1, l2, s2)) return phi;
        }
    }
    return std::nullopt;
}

}  // namespace hbs
