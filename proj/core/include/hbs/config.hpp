/* config.hpp -- run configuration shared by the builder, the verification
 * suite, and the command-line front end. */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hbs {

enum class Regime { Toy, Strict };

struct BuildConfig {
    Regime regime = Regime::Toy;
    std::uint64_t seed = 1;
    // Highest level index to build (toy default builds levels 0..7).
    std::int32_t depth = 7;
    // Deletion budget the occurrence-set property is stated with. The strict
    // regime forces 6; toy keeps it at 6 as well (a two-transposition slot
    // permutation displaces at most 4 slots).
    std::int32_t occurrence_budget = 6;
    // Attempt budget handed to the partition searcher per level.
    std::int32_t partition_budget = 48;
    // Strict regime: lower bound for accepted partition sizes.
    std::int64_t strict_floor = 101;

    static BuildConfig toy(std::uint64_t seed, std::int32_t depth = 7) {
        BuildConfig cfg;
        cfg.regime = Regime::Toy;
        cfg.seed = seed;
        cfg.depth = depth;
        return cfg;
    }
};

// Per-level targets of the toy profile. The occurrence-set budget is global;
// the certificate budget (cert_c) and multiplicity (cert_d) vary by level:
// level 2 carries the multiplicity-3 certificate the multiple-return grid
// relies on, deeper levels certify at multiplicity 1.
struct LevelPlan {
    std::int64_t n_target = 0;
    std::int32_t cert_d = 1;
    std::int32_t cert_c = 1;
    double star_share = -1.0;  // <0: balanced classes
    std::int64_t star_min = 0;
    std::int64_t n_cap = 0;  // escalation ceiling; 0 keeps n_target fixed
};

std::vector<LevelPlan> toy_level_plan(std::int32_t depth);

}  // namespace hbs
