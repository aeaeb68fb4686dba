#include "hbs/partition.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace hbs {

namespace {

std::int64_t isqrt_floor(std::int64_t v) {
    std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Exact class-size floor: |R_q| >= sqrt(n) - 1  <=>  (|R_q|+1)^2 >= n.
std::int64_t size_floor(std::int64_t n) {
    std::int64_t s = isqrt_floor(n);
    if (s * s < n) ++s;  // ceil(sqrt(n))
    return s - 1;
}

std::string triple_str(const TripleKey& t) {
    std::ostringstream os;
    os << "(l=" << t.l << ",q=" << t.q << ",q'=" << t.qp << ")";
    return os.str();
}

}  // namespace

Partition::Partition(std::int32_t Q, std::vector<std::int32_t> labels)
    : Q_(Q), labels_(std::move(labels)), sizes_(static_cast<std::size_t>(Q) + 1, 0) {
    if (Q_ < 1) throw argument_error("Partition: Q >= 1 required");
    if (labels_.empty()) throw argument_error("Partition: labels cover {0..n}, n >= 0");
    for (std::int32_t lab : labels_) {
        if (lab < 1 || lab > Q_) throw argument_error("Partition: label outside [1..Q]");
        ++sizes_[static_cast<std::size_t>(lab)];
    }
}

std::vector<std::int64_t> Partition::class_members(std::int32_t q) const {
    std::vector<std::int64_t> out;
    for (std::int64_t m = 0; m <= n(); ++m)
        if (label(m) == q) out.push_back(m);
    return out;
}

bool Partition::class_sizes_ok() const {
    const std::int64_t floor = size_floor(n());
    for (std::int32_t q = 1; q <= Q_; ++q)
        if (class_size(q) < floor) return false;
    return true;
}

namespace {

// labels doubled over [0, 2n+1]: position t belongs to R_q u (R_q + n+1)
// exactly when doubled[t] == q.
std::vector<std::int32_t> doubled_labels(const Partition& p) {
    const std::int64_t n = p.n();
    std::vector<std::int32_t> out(static_cast<std::size_t>(2 * n + 2));
    for (std::int64_t t = 0; t <= n; ++t) {
        out[static_cast<std::size_t>(t)] = p.label(t);
        out[static_cast<std::size_t>(t + n + 1)] = p.label(t);
    }
    return out;
}

}  // namespace

std::vector<std::int64_t> good_K_set(const Partition& p, std::int64_t l, std::int32_t q,
                                     std::int32_t qp, std::int32_t d) {
    const std::int64_t n = p.n();
    if (l < 0 || l > n) throw argument_error("good_K_set: l outside [0..n]");
    const auto lab2 = doubled_labels(p);
    std::vector<std::int64_t> out;
    for (std::int64_t K = 1; d * K + l + 1 <= 2 * n + 1; ++K) {
        bool good = true;
        for (std::int32_t i = 1; i <= d; ++i) {
            const std::int64_t u = i * K + l;
            if (lab2[static_cast<std::size_t>(u)] != q ||
                lab2[static_cast<std::size_t>(u + 1)] != qp) {
                good = false;
                break;
            }
        }
        if (good) out.push_back(K);
    }
    return out;
}

namespace {

CertCandidate make_candidate(std::int64_t n, std::int64_t l, std::int64_t K,
                             std::int32_t d) {
    CertCandidate cand;
    cand.K = K;
    for (std::int32_t i = 1; i <= d; ++i) {
        CertWitness w;
        w.i = i;
        w.u = i * K + l;
        w.u_shifted = w.u > n;
        w.v = w.u + 1;
        w.v_shifted = w.v > n;
        cand.witnesses.push_back(w);
    }
    return cand;
}

Certificate build_certificate(const Partition& p, std::int32_t d, std::int32_t c) {
    Certificate cert;
    cert.d = d;
    cert.c = c;
    const std::int64_t n = p.n();
    const std::int64_t cap = max_stored_candidates(d, c);
    const auto lab2 = doubled_labels(p);
    for (std::int64_t l = 0; l <= n; ++l) {
        for (std::int64_t K = 1; d * K + l + 1 <= 2 * n + 1; ++K) {
            const std::int32_t q = lab2[static_cast<std::size_t>(K + l)];
            const std::int32_t qp = lab2[static_cast<std::size_t>(K + l + 1)];
            bool good = true;
            for (std::int32_t i = 2; i <= d; ++i) {
                const std::int64_t u = i * K + l;
                if (lab2[static_cast<std::size_t>(u)] != q ||
                    lab2[static_cast<std::size_t>(u + 1)] != qp) {
                    good = false;
                    break;
                }
            }
            if (!good) continue;
            auto& entry = cert.entries[TripleKey{l, q, qp}];
            if (static_cast<std::int64_t>(entry.size()) < cap)
                entry.push_back(make_candidate(n, l, K, d));
        }
    }
    return cert;
}

}  // namespace

bool verify_certificate(const Partition& p, const Certificate& cert, std::int32_t d,
                        std::int32_t c, std::string* why) {
    const std::int64_t n = p.n();
    const std::int64_t need = required_candidates(d, c);
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    for (std::int64_t l = 0; l <= n; ++l) {
        for (std::int32_t q = 1; q <= p.Q(); ++q) {
            for (std::int32_t qp = 1; qp <= p.Q(); ++qp) {
                const TripleKey key{l, q, qp};
                auto it = cert.entries.find(key);
                if (it == cert.entries.end())
                    throw incomplete_certificate("verify_certificate: missing triple " +
                                                 triple_str(key));
                const auto& cands = it->second;
                if (static_cast<std::int64_t>(cands.size()) < need)
                    return fail("triple " + triple_str(key) + ": only " +
                                std::to_string(cands.size()) + " candidates, need " +
                                std::to_string(need));
                std::int64_t prevK = 0;
                for (const CertCandidate& cand : cands) {
                    if (cand.K <= prevK)
                        return fail("triple " + triple_str(key) + ": candidates not ascending");
                    prevK = cand.K;
                    if (d * cand.K + l + 1 > 2 * n + 1)
                        return fail("triple " + triple_str(key) + ": K out of range");
                    if (static_cast<std::int32_t>(cand.witnesses.size()) != d)
                        return fail("triple " + triple_str(key) + ": wrong witness count");
                    for (const CertWitness& w : cand.witnesses) {
                        if (w.u != w.i * cand.K + l || w.v != w.u + 1)
                            return fail("triple " + triple_str(key) + ": witness positions");
                        if (w.u_shifted != (w.u > n) || w.v_shifted != (w.v > n))
                            return fail("triple " + triple_str(key) + ": witness side tags");
                        const std::int64_t ubase = w.u_shifted ? w.u - n - 1 : w.u;
                        const std::int64_t vbase = w.v_shifted ? w.v - n - 1 : w.v;
                        if (ubase < 0 || ubase > n || vbase < 0 || vbase > n)
                            return fail("triple " + triple_str(key) + ": witness out of [0,2n+1]");
                        if (p.label(ubase) != q || p.label(vbase) != qp)
                            return fail("triple " + triple_str(key) + ": membership violated");
                    }
                }
                // Role-wise distinctness: per i and per (side, u/v) role the
                // touched base elements must differ across candidates.
                for (std::int32_t i = 1; i <= d; ++i) {
                    std::vector<std::int64_t> role[4];
                    for (const CertCandidate& cand : cands) {
                        const CertWitness& w = cand.witnesses[static_cast<std::size_t>(i - 1)];
                        role[w.u_shifted ? 1 : 0].push_back(w.u_shifted ? w.u - n - 1 : w.u);
                        role[w.v_shifted ? 3 : 2].push_back(w.v_shifted ? w.v - n - 1 : w.v);
                    }
                    for (auto& r : role) {
                        std::sort(r.begin(), r.end());
                        if (std::adjacent_find(r.begin(), r.end()) != r.end())
                            return fail("triple " + triple_str(key) +
                                        ": duplicate touched element in a role");
                    }
                }
            }
        }
    }
    if (why) why->clear();
    return true;
}

std::uint64_t exhaustive_work_estimate(const Partition& p, std::int32_t d, std::int32_t c) {
    auto binom = [](std::int64_t n, std::int64_t k) -> std::uint64_t {
        if (k < 0 || k > n) return 0;
        std::uint64_t r = 1;
        for (std::int64_t i = 1; i <= k; ++i) {
            const std::uint64_t factor = static_cast<std::uint64_t>(n - k + i);
            if (r > UINT64_MAX / (factor ? factor : 1)) return UINT64_MAX;
            r = r * factor / static_cast<std::uint64_t>(i);
        }
        return r;
    };
    std::uint64_t total = 0;
    for (std::int32_t q = 1; q <= p.Q(); ++q) {
        std::uint64_t term = 1;
        const std::uint64_t base = binom(p.class_size(q), c - 1);
        for (std::int32_t e = 0; e < 4 * d; ++e) {
            if (base != 0 && term > UINT64_MAX / (base ? base : 1)) return UINT64_MAX;
            term *= base ? base : 1;
        }
        if (total > UINT64_MAX - term) return UINT64_MAX;
        total += term;
    }
    return total;
}

namespace {

// Per-candidate vulnerability: which (set, base element) deletions kill it.
struct Vuln {
    std::int32_t set;   // 0..(num_sets-1)
    std::int64_t base;  // element of the underlying class
};

struct AdversaryGame {
    std::vector<std::vector<Vuln>> cand_vulns;     // per surviving candidate
    std::vector<std::vector<std::int64_t>> touched;  // per set, deduped bases
    std::int32_t num_sets = 0;
};

// DFS over deletion families (restricted WLOG to touched elements; deleting
// an element no candidate relies on can never help the adversary).
// Returns true when the adversary can kill all candidates.
bool adversary_wins(const AdversaryGame& g, std::int32_t c) {
    const std::size_t m = g.cand_vulns.size();
    if (m == 0) return true;
    std::vector<std::int32_t> hits(m, 0);
    std::int64_t alive = static_cast<std::int64_t>(m);

    // Deleting one element kills at most one candidate per role, so the
    // remaining killing capacity bounds the search.
    std::function<bool(std::int32_t)> go = [&](std::int32_t set) -> bool {
        if (alive == 0) return true;
        if (set == g.num_sets) return false;
        const std::int64_t capacity =
            static_cast<std::int64_t>(g.num_sets - set) * (c - 1);
        if (alive > capacity) return false;

        const auto& bases = g.touched[static_cast<std::size_t>(set)];
        // Choose up to c-1 bases from this set (including none).
        std::vector<std::size_t> pick;
        std::function<bool(std::size_t)> choose = [&](std::size_t from) -> bool {
            if (go(set + 1)) return true;
            if (static_cast<std::int32_t>(pick.size()) == c - 1) return false;
            for (std::size_t b = from; b < bases.size(); ++b) {
                pick.push_back(b);
                for (std::size_t ci = 0; ci < g.cand_vulns.size(); ++ci) {
                    for (const Vuln& v : g.cand_vulns[ci]) {
                        if (v.set == set && v.base == bases[b]) {
                            if (hits[ci]++ == 0) --alive;
                        }
                    }
                }
                const bool won = choose(b + 1);
                for (std::size_t ci = 0; ci < g.cand_vulns.size(); ++ci) {
                    for (const Vuln& v : g.cand_vulns[ci]) {
                        if (v.set == set && v.base == bases[b]) {
                            if (--hits[ci] == 0) ++alive;
                        }
                    }
                }
                pick.pop_back();
                if (won) return true;
            }
            return false;
        };
        return choose(0);
    };
    return go(0);
}

}  // namespace

bool verify_exhaustive(const Partition& p, std::int32_t d, std::int32_t c,
                       std::uint64_t work_limit, std::string* why) {
    const std::uint64_t work = exhaustive_work_estimate(p, d, c);
    if (work > work_limit)
        throw too_large_error("verify_exhaustive: work estimate " + std::to_string(work) +
                              " exceeds limit " + std::to_string(work_limit));
    const std::int64_t n = p.n();
    for (std::int32_t q = 1; q <= p.Q(); ++q) {
        if (p.class_size(q) == 0) {
            if (why) *why = "class " + std::to_string(q) + " is empty";
            return false;
        }
    }
    for (std::int64_t l = 0; l <= n; ++l) {
        for (std::int32_t q = 1; q <= p.Q(); ++q) {
            for (std::int32_t qp = 1; qp <= p.Q(); ++qp) {
                const auto goods = good_K_set(p, l, q, qp, d);
                if (goods.empty()) {
                    if (why) *why = "triple " + triple_str({l, q, qp}) + " has no good K";
                    return false;
                }
                if (c == 1) continue;  // no deletions possible

                // Sets 0..2d-1 belong to q (role r uses set r-1); sets
                // 2d..4d-1 to q'. When q == q' the lemma engages one shared
                // family list, so both conditions reference the same sets.
                AdversaryGame game;
                game.num_sets = (q == qp) ? 2 * d : 4 * d;
                game.touched.resize(static_cast<std::size_t>(game.num_sets));
                for (std::int64_t K : goods) {
                    std::vector<Vuln> vul;
                    for (std::int32_t i = 1; i <= d; ++i) {
                        const std::int64_t u = i * K + l;
                        const std::int64_t v = u + 1;
                        const std::int32_t urole = (u > n) ? (2 * i - 1) : (2 * i - 2);
                        const std::int32_t vrole = (v > n) ? (2 * i - 1) : (2 * i - 2);
                        const std::int32_t uset = urole;
                        const std::int32_t vset = (q == qp) ? vrole : 2 * d + vrole;
                        vul.push_back({uset, (u > n) ? u - n - 1 : u});
                        vul.push_back({vset, (v > n) ? v - n - 1 : v});
                    }
                    game.cand_vulns.push_back(std::move(vul));
                }
                for (const auto& cv : game.cand_vulns) {
                    for (const Vuln& v : cv) {
                        auto& t = game.touched[static_cast<std::size_t>(v.set)];
                        if (std::find(t.begin(), t.end(), v.base) == t.end())
                            t.push_back(v.base);
                    }
                }
                for (auto& t : game.touched) std::sort(t.begin(), t.end());
                if (adversary_wins(game, c)) {
                    if (why)
                        *why = "triple " + triple_str({l, q, qp}) +
                               ": a deletion family kills every good K";
                    return false;
                }
            }
        }
    }
    if (why) why->clear();
    return true;
}

namespace {

// Good-K counting over all triples at once; cnt is indexed
// (l * Q + (q-1)) * Q + (q'-1).
void count_good(const std::vector<std::int32_t>& lab2, std::int64_t n, std::int32_t Q,
                std::int32_t d, std::vector<std::int32_t>& cnt) {
    std::fill(cnt.begin(), cnt.end(), 0);
    for (std::int64_t l = 0; l <= n; ++l) {
        for (std::int64_t K = 1; d * K + l + 1 <= 2 * n + 1; ++K) {
            const std::int32_t q = lab2[static_cast<std::size_t>(K + l)];
            const std::int32_t qp = lab2[static_cast<std::size_t>(K + l + 1)];
            bool good = true;
            for (std::int32_t i = 2; i <= d; ++i) {
                const std::int64_t u = i * K + l;
                if (lab2[static_cast<std::size_t>(u)] != q ||
                    lab2[static_cast<std::size_t>(u + 1)] != qp) {
                    good = false;
                    break;
                }
            }
            if (good) ++cnt[static_cast<std::size_t>((l * Q + q - 1) * Q + qp - 1)];
        }
    }
}

}  // namespace

namespace {

// Incremental good-K bookkeeping for the min-conflicts repair loop. The
// counter array is kept exact under single-position relabelings.
class RepairState {
public:
    RepairState(std::vector<std::int32_t>& labels, std::int64_t n, std::int32_t Q,
                std::int32_t d, std::int64_t need)
        : labels_(labels), n_(n), Q_(Q), d_(d), need_(need) {
        lab2_.resize(static_cast<std::size_t>(2 * n + 2));
        for (std::int64_t t = 0; t <= n; ++t) {
            lab2_[static_cast<std::size_t>(t)] = labels_[static_cast<std::size_t>(t)];
            lab2_[static_cast<std::size_t>(t + n + 1)] = labels_[static_cast<std::size_t>(t)];
        }
        cnt_.assign(static_cast<std::size_t>((n + 1) * Q * Q), 0);
        count_good(lab2_, n, Q, d, cnt_);
        deficient_.assign(cnt_.size(), false);
        for (std::int64_t l = 0; l <= n; ++l)
            for (std::int32_t q = 1; q <= Q; ++q)
                for (std::int32_t qp = 1; qp <= Q; ++qp) {
                    const std::size_t key = idx(l, q, qp);
                    if (cnt_[key] < need_) {
                        deficient_[key] = true;
                        queue_.push_back(TripleKey{l, q, qp});
                    }
                }
        deficit_ = static_cast<std::int64_t>(queue_.size());
    }

    std::int64_t deficit() const { return deficit_; }
    std::int32_t count(const TripleKey& t) const { return cnt_[idx(t.l, t.q, t.qp)]; }
    bool pop(TripleKey& out) {
        while (head_ < queue_.size()) {
            const TripleKey t = queue_[head_++];
            if (deficient_[idx(t.l, t.q, t.qp)]) {
                out = t;
                return true;
            }
        }
        return false;
    }
    void requeue(const TripleKey& t) { queue_.push_back(t); }

    // Relabel position t, updating counters and the deficiency queue.
    void relabel(std::int64_t t, std::int32_t newlab) {
        if (labels_[static_cast<std::size_t>(t)] == newlab) return;
        std::vector<std::pair<std::int64_t, std::int64_t>> affected;  // (l, K)
        for (std::int32_t i = 1; i <= d_; ++i) {
            for (std::int64_t lift : {t, t + n_ + 1}) {
                for (std::int64_t sub : {std::int64_t{0}, std::int64_t{1}}) {
                    // l = lift - sub - i*K over all valid K
                    for (std::int64_t K = 1;; ++K) {
                        const std::int64_t l = lift - sub - i * K;
                        if (l < 0) break;
                        if (l > n_) continue;
                        if (d_ * K + l + 1 > 2 * n_ + 1) continue;
                        affected.push_back({l, K});
                    }
                }
            }
        }
        std::sort(affected.begin(), affected.end());
        affected.erase(std::unique(affected.begin(), affected.end()), affected.end());

        for (const auto& [l, K] : affected) {
            const auto key = eval(l, K);
            if (key) bump(*key, -1);
        }
        labels_[static_cast<std::size_t>(t)] = newlab;
        lab2_[static_cast<std::size_t>(t)] = newlab;
        lab2_[static_cast<std::size_t>(t + n_ + 1)] = newlab;
        for (const auto& [l, K] : affected) {
            const auto key = eval(l, K);
            if (key) bump(*key, +1);
        }
    }

private:
    std::size_t idx(std::int64_t l, std::int32_t q, std::int32_t qp) const {
        return static_cast<std::size_t>((l * Q_ + q - 1) * Q_ + qp - 1);
    }
    std::optional<std::size_t> eval(std::int64_t l, std::int64_t K) const {
        const std::int32_t q = lab2_[static_cast<std::size_t>(K + l)];
        const std::int32_t qp = lab2_[static_cast<std::size_t>(K + l + 1)];
        for (std::int32_t i = 2; i <= d_; ++i) {
            const std::int64_t u = i * K + l;
            if (lab2_[static_cast<std::size_t>(u)] != q ||
                lab2_[static_cast<std::size_t>(u + 1)] != qp)
                return std::nullopt;
        }
        return idx(l, q, qp);
    }
    void bump(std::size_t key, std::int32_t delta) {
        const std::int32_t before = cnt_[key];
        cnt_[key] += delta;
        const bool was = before < need_;
        const bool now = cnt_[key] < need_;
        if (was == now) return;
        deficient_[key] = now;
        if (now) {
            const std::int64_t flat = static_cast<std::int64_t>(key);
            const std::int32_t qp = static_cast<std::int32_t>(flat % Q_) + 1;
            const std::int32_t q = static_cast<std::int32_t>((flat / Q_) % Q_) + 1;
            const std::int64_t l = flat / (Q_ * Q_);
            queue_.push_back(TripleKey{l, q, qp});
            ++deficit_;
        } else {
            --deficit_;
        }
    }

    std::vector<std::int32_t>& labels_;
    std::int64_t n_;
    std::int32_t Q_, d_;
    std::int64_t need_;
    std::vector<std::int32_t> lab2_;
    std::vector<std::int32_t> cnt_;
    std::vector<bool> deficient_;
    std::vector<TripleKey> queue_;
    std::size_t head_ = 0;
    std::int64_t deficit_ = 0;
};

}  // namespace

SearchResult search_partition(const SearchSpec& spec) {
    if (spec.d < 1 || spec.c < 1 || spec.Q < 1 || spec.N < 1)
        throw argument_error("search_partition: require d,c,Q,N >= 1");
    const std::int32_t d = spec.d, c = spec.c, Q = spec.Q;
    const std::int64_t need = required_candidates(d, c);

    // Default start size: the repair loop needs the expected number of good
    // steps per triple at the worst offset, about n / (d Q^{2d}), to clear
    // the required candidate count with a few to spare.
    std::int64_t density_floor = (need + 5) * d;
    for (std::int32_t e = 0; e < 2 * d; ++e)
        density_floor = std::min<std::int64_t>(density_floor * Q, 1 << 22);
    std::int64_t n = spec.start_n > 0
                         ? spec.start_n
                         : std::max({spec.N, max_stored_candidates(d, c) * Q * 8,
                                     static_cast<std::int64_t>(Q) * Q * 4, density_floor});
    n = std::max(n, spec.N);

    std::mt19937_64 rng(spec.seed);
    std::string best_diag = "no attempt made";

    for (std::int32_t attempt = 1; attempt <= spec.budget; ++attempt) {
        const std::int64_t floor = size_floor(n);
        const std::int64_t min1 = std::max<std::int64_t>(floor, spec.min_label1_size);

        // Propose: position 0 always gets label 1; remaining positions are a
        // shuffled multiset honoring the requested shares.
        std::vector<std::int32_t> labels(static_cast<std::size_t>(n) + 1, 1);
        {
            std::vector<std::int64_t> want(static_cast<std::size_t>(Q) + 1, 0);
            std::int64_t rest = n + 1;
            if (spec.label1_share > 0.0 && Q > 1) {
                want[1] = std::max<std::int64_t>(
                    min1, static_cast<std::int64_t>(spec.label1_share * (n + 1)));
                want[1] = std::min(want[1], n + 1 - (Q - 1));
                rest -= want[1];
                for (std::int32_t q = 2; q <= Q; ++q)
                    want[static_cast<std::size_t>(q)] = rest / (Q - 1);
                want[static_cast<std::size_t>(Q)] += rest % (Q - 1);
            } else {
                for (std::int32_t q = 1; q <= Q; ++q)
                    want[static_cast<std::size_t>(q)] = (n + 1) / Q;
                want[1] += (n + 1) % Q;
                if (want[1] < min1 && Q > 1) {
                    const std::int64_t deficit = min1 - want[1];
                    want[1] = min1;
                    want[static_cast<std::size_t>(Q)] -= deficit;
                }
            }
            std::vector<std::int32_t> bag;
            bag.reserve(static_cast<std::size_t>(n));
            want[1] -= 1;  // position 0 consumes one label-1 slot
            for (std::int32_t q = 1; q <= Q; ++q)
                bag.insert(bag.end(), static_cast<std::size_t>(want[static_cast<std::size_t>(q)]),
                           q);
            while (static_cast<std::int64_t>(bag.size()) < n) bag.push_back(1);
            bag.resize(static_cast<std::size_t>(n));
            for (std::size_t i = bag.size(); i > 1; --i)
                std::swap(bag[i - 1], bag[rng() % i]);
            for (std::int64_t m = 1; m <= n; ++m)
                labels[static_cast<std::size_t>(m)] = bag[static_cast<std::size_t>(m - 1)];
        }

        std::vector<std::int64_t> sizes(static_cast<std::size_t>(Q) + 1, 0);
        for (std::int64_t m = 0; m <= n; ++m)
            ++sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(m)])];

        // Min-conflicts repair: fix one deficient triple at a time with the
        // cheapest candidate step, keeping the good-K counters exact under
        // every relabeling. One repair at a time keeps collateral damage
        // visible and the loop convergent.
        RepairState state(labels, n, Q, d, need);
        const std::int64_t max_steps = 64 + 48 * state.deficit();
        const std::int64_t stagnation_window = 400;
        std::int64_t steps = 0, best_deficit = state.deficit(), last_improvement = 0;
        TripleKey t{0, 1, 1};
        while (steps < max_steps && state.deficit() > 0 && state.pop(t)) {
            ++steps;
            if (state.deficit() < best_deficit) {
                best_deficit = state.deficit();
                last_improvement = steps;
            }
            if (steps - last_improvement > stagnation_window) break;
            if (state.count(t) >= need) continue;
            const std::int64_t Kmax = (2 * n - t.l) / d;
            if (Kmax < 1) continue;
            std::int64_t bestK = -1;
            std::int32_t best_cost = INT32_MAX;
            auto consider = [&](std::int64_t K) {
                std::int32_t cost = 0;
                for (std::int32_t i = 1; i <= d && cost < best_cost; ++i) {
                    for (std::int32_t off = 0; off <= 1; ++off) {
                        std::int64_t pos = i * K + t.l + off;
                        if (pos > n) pos -= n + 1;
                        const std::int32_t want_label = off == 0 ? t.q : t.qp;
                        const std::int32_t old = labels[static_cast<std::size_t>(pos)];
                        if (old == want_label) continue;
                        if (pos == 0 || sizes[static_cast<std::size_t>(old)] - 1 <
                                            (old == 1 ? min1 : floor)) {
                            cost += 100;  // unusable relabeling
                        } else {
                            cost += 1;
                        }
                    }
                }
                if (cost < best_cost) {
                    best_cost = cost;
                    bestK = K;
                }
            };
            if (Kmax <= 512) {
                for (std::int64_t K = 1; K <= Kmax; ++K) consider(K);
            } else {
                for (std::int32_t trial = 0; trial < 32 && best_cost > 1; ++trial)
                    consider(1 + static_cast<std::int64_t>(rng() % Kmax));
            }
            if (bestK < 0 || best_cost >= 100) {
                state.requeue(t);
                continue;
            }
            for (std::int32_t i = 1; i <= d; ++i) {
                for (std::int32_t off = 0; off <= 1; ++off) {
                    std::int64_t pos = i * bestK + t.l + off;
                    if (pos > n) pos -= n + 1;
                    if (pos == 0) continue;
                    const std::int32_t want_label = off == 0 ? t.q : t.qp;
                    const std::int32_t old = labels[static_cast<std::size_t>(pos)];
                    if (old == want_label) continue;
                    if (sizes[static_cast<std::size_t>(old)] - 1 < (old == 1 ? min1 : floor))
                        continue;
                    state.relabel(pos, want_label);
                    --sizes[static_cast<std::size_t>(old)];
                    ++sizes[static_cast<std::size_t>(want_label)];
                }
            }
            if (state.count(t) < need) state.requeue(t);
        }

        bool solved = state.deficit() == 0;
        if (solved) {
            if (sizes[1] < min1) solved = false;
            for (std::int32_t q = 1; q <= Q; ++q)
                if (sizes[static_cast<std::size_t>(q)] < floor) solved = false;
        }
        if (!solved)
            best_diag = "n=" + std::to_string(n) + ", " + std::to_string(state.deficit()) +
                        " deficient triples after " + std::to_string(steps) + " repair steps";

        if (solved) {
            Partition part(Q, labels);
            Certificate cert = build_certificate(part, d, c);
            std::string why;
            if (!verify_certificate(part, cert, d, c, &why))
                throw consistency_error("search_partition: built certificate rejected: " + why);
            return SearchResult{std::move(part), std::move(cert), attempt, n};
        }
        if (attempt % 2 == 0 && n < spec.max_n) n = std::min(spec.max_n, n * 13 / 10 + 1);
    }
    throw search_failure("search_partition: budget exhausted; " + best_diag);
}

}  // namespace hbs
