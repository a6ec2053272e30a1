// Acceptance runner: executes every theorem-level check at full
// replication and prints one PASS/FAIL line per criterion.
//
// Usage: acceptance_tests [suite] [seed]
//   suite: a verify suite name or "all" (default "all")

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "learnlab/verify.hpp"

int main(int argc, char** argv) {
    const std::string suite = argc > 1 ? argv[1] : "all";
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20240601ULL;

    learnlab::VerifyReport report;
    try {
        report = learnlab::run_verify_suite(suite, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    int failures = 0;
    for (const auto& check : report.checks) {
        std::cout << (check.pass ? "PASS" : "FAIL") << "  " << check.name << "\n"
                  << "      claim: " << check.claim << "\n"
                  << "      gate:  " << check.threshold << "\n"
                  << "      measured: " << check.measured.dump() << "\n";
        if (!check.pass) ++failures;
    }
    std::cout << report.checks.size() - failures << "/" << report.checks.size()
              << " checks passed (seed " << seed << ")\n";
    return failures == 0 ? 0 : 1;
}
