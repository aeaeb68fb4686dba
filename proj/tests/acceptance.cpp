/* acceptance.cpp -- runs the full verification suite and prints one
 * pass/fail line per acceptance criterion. Exit status 0 only when every
 * criterion passes. */

#include <cstdio>
#include <iostream>

#include "hbs/report.hpp"

int main() {
    hbs::VerifyOptions opt;
    opt.seed = 1;
    opt.depth = 7;
    const hbs::json report = hbs::run_verify(opt);
    bool all = true;
    for (const auto& item : report["items"]) {
        const bool pass = item["pass"].get<bool>();
        all = all && pass;
        std::printf("criterion %d [%s]: %s\n", item["criterion"].get<int>(),
                    item["name"].get<std::string>().c_str(), pass ? "PASS" : "FAIL");
        if (!pass) {
            std::fflush(stdout);
            std::cerr << item["detail"].dump(2) << "\n";
        }
    }
    return all ? 0 : 1;
}
