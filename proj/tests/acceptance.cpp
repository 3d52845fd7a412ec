// Acceptance gate: runs every top-level criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 only when all
// criteria hold.

#include <cstdio>
#include <iostream>

#include "wplab/acceptance.hpp"

int main() {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    wplab::AcceptanceOptions opts;  // refine 3, truncation 4
    std::vector<wplab::CheckResult> checks = wplab::acceptance_suite(opts, &std::cout);

    bool all = true;
    std::printf("\n==== acceptance summary ====\n");
    for (const auto& c : checks) {
        std::printf("%s %-28s value=%-12.4e tol=%-12.4e\n", c.pass ? "[PASS]" : "[FAIL]",
                    c.name.c_str(), c.value, c.tol);
        all = all && c.pass;
    }
    std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
    return all ? 0 : 1;
}
