/* report.hpp -- JSON artifacts and the verification suite.
 *
 * The verification items mirror the acceptance criteria one to one; the
 * command-line front end and the acceptance test binary both run them
 * through run_verify.
 */

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "hbs/builder.hpp"
#include "hbs/partition.hpp"

namespace hbs {

using json = nlohmann::ordered_json;

json partition_artifact(const Partition& p, const Certificate& cert, std::int32_t d,
                        std::int32_t c, std::uint64_t seed);

json level_dump(const Construction& c, std::int32_t k);

json build_summary(const Construction& c);

struct VerifyOptions {
    std::uint64_t seed = 1;
    std::int32_t depth = 7;
    std::string only;             // run a single item by name when nonempty
    std::int64_t horizon_scale = 1;
    std::int32_t d_max = 3;
};

// Runs the verification items and returns the report; pass/fail per item.
// Output is deterministic for a fixed (options, library version); timing is
// logged to stderr, never placed in the report.
json run_verify(const VerifyOptions& opt);

bool report_all_passed(const json& report);

}  // namespace hbs
