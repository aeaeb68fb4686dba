/* hbs_cli.cpp -- batch front end: search/certify partitions, build the
 * marker construction level by level, run the verification suite.
 *
 * Exit codes: 0 success, 1 verification failure, 2 search failure,
 * 64 usage error. Logs go to stderr; artifacts go to files (or stdout
 * with --stdout).
 */

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hbs/builder.hpp"
#include "hbs/dynamics.hpp"
#include "hbs/partition.hpp"
#include "hbs/report.hpp"

namespace {

constexpr int kExitVerifyFailure = 1;
constexpr int kExitSearchFailure = 2;
constexpr int kExitUsage = 64;

void write_artifact(const hbs::json& doc, const std::string& out_dir,
                    const std::string& filename, bool to_stdout) {
    const std::string text = doc.dump(2) + "\n";
    if (to_stdout) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / filename;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    std::cerr << "[hbs] wrote " << path.string() << "\n";
}

int cmd_partition(std::int32_t d, std::int32_t c, std::int32_t Q, std::int64_t N,
                  std::uint64_t seed, std::int32_t budget, std::uint64_t max_exhaustive,
                  const std::string& out_dir, bool to_stdout) {
    hbs::SearchSpec sp;
    sp.d = d;
    sp.c = c;
    sp.Q = Q;
    sp.N = N;
    sp.seed = seed;
    sp.budget = budget;
    hbs::SearchResult res = [&] {
        try {
            return hbs::search_partition(sp);
        } catch (const hbs::search_failure& e) {
            std::cerr << "[hbs] search failure: " << e.what() << "\n";
            std::exit(kExitSearchFailure);
        }
    }();
    const hbs::json artifact =
        hbs::partition_artifact(res.partition, res.certificate, d, c, seed);
    write_artifact(artifact, out_dir, "partition.json", to_stdout);

    std::string why;
    if (!hbs::verify_certificate(res.partition, res.certificate, d, c, &why)) {
        std::cerr << "[hbs] certificate rejected: " << why << "\n";
        return kExitVerifyFailure;
    }
    if (hbs::exhaustive_work_estimate(res.partition, d, c) <= max_exhaustive) {
        if (!hbs::verify_exhaustive(res.partition, d, c, max_exhaustive, &why)) {
            std::cerr << "[hbs] exhaustive verification failed: " << why << "\n";
            return kExitVerifyFailure;
        }
        std::cerr << "[hbs] exhaustive verification passed\n";
    } else {
        std::cerr << "[hbs] exhaustive verification skipped (above work limit)\n";
    }
    std::cerr << "[hbs] partition n=" << res.partition.n() << " certified\n";
    return 0;
}

int cmd_construct(const std::string& regime, std::uint64_t seed, std::int32_t depth,
                  const std::string& out_dir, bool to_stdout) {
    hbs::BuildConfig cfg;
    cfg.regime = regime == "strict" ? hbs::Regime::Strict : hbs::Regime::Toy;
    cfg.seed = seed;
    cfg.depth = depth;
    const hbs::Construction c = hbs::Construction::build(cfg);
    write_artifact(hbs::build_summary(c), out_dir, "build.json", to_stdout);
    for (std::int32_t k = 0; k <= c.depth(); ++k)
        write_artifact(hbs::level_dump(c, k), out_dir,
                       "level-" + std::to_string(k) + ".json", to_stdout);
    for (std::int32_t k = 0; k <= c.depth(); ++k) {
        std::cerr << "[hbs] level " << k << ": n=" << c.slot_count(k)
                  << " p=" << c.block_len(k)
                  << " hhat=" << c.level(k).prefix_catalog_count - 1 << "\n";
    }
    for (const std::string& note : c.notes()) std::cerr << "[hbs] note: " << note << "\n";
    return 0;
}

int cmd_verify(std::uint64_t seed, std::int32_t depth, const std::string& only,
               std::int32_t d_max, std::int64_t horizon_scale, const std::string& out_dir,
               bool to_stdout) {
    hbs::VerifyOptions opt;
    opt.seed = seed;
    opt.depth = depth;
    opt.only = only;
    opt.d_max = d_max;
    opt.horizon_scale = horizon_scale;
    const hbs::json report = hbs::run_verify(opt);
    write_artifact(report, out_dir, "report.json", to_stdout);
    if (!hbs::report_all_passed(report)) {
        for (const auto& item : report["items"]) {
            if (!item["pass"].get<bool>())
                std::cerr << "[hbs] FAILED: criterion " << item["criterion"] << " ("
                          << item["name"].get<std::string>() << ")\n";
        }
        return kExitVerifyFailure;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchical block subshift toolkit"};
    app.require_subcommand(1);

    // partition
    auto* part = app.add_subcommand("partition", "search and certify a slot partition");
    std::int32_t d = 1, c = 1, Q = 1, budget = 48;
    std::int64_t N = 1;
    std::uint64_t seed = 1, max_exhaustive = 1000000;
    std::string out_dir = "out";
    bool to_stdout = false;
    part->add_option("--d", d, "multiplicity")->check(CLI::PositiveNumber);
    part->add_option("--c", c, "deletion budget")->check(CLI::PositiveNumber);
    part->add_option("--Q", Q, "class count")->check(CLI::PositiveNumber);
    part->add_option("--N", N, "lower bound for n")->check(CLI::PositiveNumber);
    part->add_option("--seed", seed, "search seed");
    part->add_option("--budget", budget, "attempt budget")->check(CLI::PositiveNumber);
    part->add_option("--max-exhaustive", max_exhaustive, "work limit for the oracle");
    part->add_option("--out", out_dir, "output directory");
    part->add_flag("--stdout", to_stdout, "write artifacts to stdout");

    // construct
    auto* cons = app.add_subcommand("construct", "build marker levels and dump them");
    std::string regime = "toy";
    std::int32_t depth = 7;
    cons->add_option("--regime", regime, "toy|strict")
        ->check(CLI::IsMember({"toy", "strict"}));
    cons->add_option("--seed", seed, "build seed");
    cons->add_option("--depth", depth, "highest level to build")
        ->check(CLI::NonNegativeNumber);
    cons->add_option("--out", out_dir, "output directory");
    cons->add_flag("--stdout", to_stdout, "write artifacts to stdout");

    // verify
    auto* ver = app.add_subcommand("verify", "run the verification suite");
    std::string only;
    std::int32_t d_max = 3;
    std::int64_t horizon_scale = 1;
    ver->add_option("--seed", seed, "suite seed");
    ver->add_option("--depth", depth, "build depth used by the deep items");
    ver->add_option("--only", only, "run a single item by name");
    ver->add_option("--d", d_max, "multiplicity ceiling for the return grid")
        ->check(CLI::PositiveNumber);
    ver->add_option("--horizon-scale", horizon_scale, "scale scan horizons")
        ->check(CLI::PositiveNumber);
    ver->add_option("--out", out_dir, "output directory");
    ver->add_flag("--stdout", to_stdout, "write the report to stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (part->parsed())
            return cmd_partition(d, c, Q, N, seed, budget, max_exhaustive, out_dir, to_stdout);
        if (cons->parsed()) return cmd_construct(regime, seed, depth, out_dir, to_stdout);
        if (ver->parsed())
            return cmd_verify(seed, depth, only, d_max, horizon_scale, out_dir, to_stdout);
    } catch (const hbs::search_failure& e) {
        std::cerr << "[hbs] search failure: " << e.what() << "\n";
        return kExitSearchFailure;
    } catch (const std::exception& e) {
        std::cerr << "[hbs] error: " << e.what() << "\n";
        return kExitVerifyFailure;
    }
    return kExitUsage;
}
