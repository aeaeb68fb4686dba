/* partition.hpp -- deletion-robust multiple-recurrence partitions of {0..n}.
 *
 * A Partition splits {0..n} into Q labeled classes R_1..R_Q. The engine
 * searches for partitions such that for every offset l in [0,n] and every
 * ordered class pair (q,q') there are "good" step sizes K with
 *
 *     i*K + l     in R_q  u (R_q  + n + 1)   and
 *     i*K + l + 1 in R_q' u (R_q' + n + 1)   for all 1 <= i <= d,
 *
 * and certifies enough of them that any adversary deleting up to c-1
 * elements from each of the 2d engaged copies of R_q and of R_q' still
 * leaves a surviving K. Certificates are checked by verify_certificate;
 * verify_exhaustive replays the full adversarial quantifier on small
 * instances and is the engine's independent oracle.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hbs/errors.hpp"

namespace hbs {

class Partition {
public:
    // labels[m] in [1..Q] for m in [0..n]; classes may not be empty.
    Partition(std::int32_t Q, std::vector<std::int32_t> labels);

    std::int64_t n() const { return static_cast<std::int64_t>(labels_.size()) - 1; }
    std::int32_t Q() const { return Q_; }
    std::int32_t label(std::int64_t m) const { return labels_[static_cast<std::size_t>(m)]; }
    const std::vector<std::int32_t>& labels() const { return labels_; }

    std::vector<std::int64_t> class_members(std::int32_t q) const;
    std::int64_t class_size(std::int32_t q) const { return sizes_[static_cast<std::size_t>(q)]; }

    // Lemma-style size floor |R_q| >= sqrt(n) - 1, checked in exact integer
    // arithmetic: |R_q| >= sqrt(n)-1  <=>  (|R_q|+1)^2 >= n.
    bool class_sizes_ok() const;

private:
    std::int32_t Q_;
    std::vector<std::int32_t> labels_;
    std::vector<std::int64_t> sizes_;  // index 1..Q
};

// One certified step size for a triple (l,q,q'): K plus, per i, the touched
// positions and which side (direct or shifted copy) they hit.
struct CertWitness {
    std::int32_t i = 1;
    std::int64_t u = 0;      // i*K + l
    bool u_shifted = false;  // true: u - (n+1) in R_q, else u in R_q
    std::int64_t v = 0;      // i*K + l + 1
    bool v_shifted = false;
};

struct CertCandidate {
    std::int64_t K = 0;
    std::vector<CertWitness> witnesses;  // one per i = 1..d
};

struct TripleKey {
    std::int64_t l;
    std::int32_t q, qp;
    auto operator<=>(const TripleKey&) const = default;
};

struct Certificate {
    std::int32_t d = 1, c = 1;
    std::map<TripleKey, std::vector<CertCandidate>> entries;
};

// Candidates an adversary can never fully kill: deleting <= c-1 elements from
// each of the 4d engaged set copies removes at most 4d(c-1) candidates.
inline std::int64_t required_candidates(std::int32_t d, std::int32_t c) {
    return 4ll * d * (c - 1) + 1;
}
// The upper bound the counting argument quotes; certificates store at most
// this many candidates per triple.
inline std::int64_t max_stored_candidates(std::int32_t d, std::int32_t c) {
    return 4ll * c * d + 1;
}

// All K >= 1 with d*K + l + 1 <= 2n+1 such that every i <= d satisfies both
// membership conditions for (q, q').
std::vector<std::int64_t> good_K_set(const Partition& p, std::int64_t l, std::int32_t q,
                                     std::int32_t qp, std::int32_t d);

// True iff the certificate covers every triple with enough valid, role-wise
// distinct candidates. Missing triples raise incomplete_certificate.
bool verify_certificate(const Partition& p, const Certificate& cert, std::int32_t d,
                        std::int32_t c, std::string* why = nullptr);

// Exact adversarial check; requires sum_q C(|R_q|, c-1)^{4d} <= work_limit
// (raises too_large_error above it). True iff for EVERY triple and EVERY
// choice of deletion families some K survives.
bool verify_exhaustive(const Partition& p, std::int32_t d, std::int32_t c,
                       std::uint64_t work_limit = 1'000'000,
                       std::string* why = nullptr);

struct SearchSpec {
    std::int32_t d = 1;
    std::int32_t c = 1;
    std::int32_t Q = 1;
    std::int64_t N = 1;
    std::uint64_t seed = 0;
    std::int32_t budget = 48;     // proposal attempts before giving up
    std::int64_t start_n = -1;    // default max(N, (4cd+1)*Q*8)
    std::int64_t max_n = 400000;  // escalation cap

    // Construction-facing extras; neutral by default. Class 1 always
    // contains position 0 and is kept at least this large.
    std::int64_t min_label1_size = 0;
    // Fraction of positions proposed as label 1 (<0: balanced classes).
    double label1_share = -1.0;
};

struct SearchResult {
    Partition partition;
    Certificate certificate;
    std::int32_t attempts = 0;
    std::int64_t final_n = 0;
};

// Seeded randomized search with targeted repair; deterministic per spec.
// Throws search_failure (with the first failing triple) when the budget is
// exhausted.
SearchResult search_partition(const SearchSpec& spec);

// Work-size term used by the verify_exhaustive feasibility gate.
std::uint64_t exhaustive_work_estimate(const Partition& p, std::int32_t d, std::int32_t c);

}  // namespace hbs
