// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
#include <iostream>

#include "ordalg/selftest.hpp"

int main() {
    const auto seed = ordalg::selftest::seed();
    std::cout << "seed " << seed << std::endl;
    bool all = true;
    ordalg::selftest::run_all(seed, [&](const ordalg::selftest::Result& r) {
        std::cout << ordalg::selftest::format(r) << std::endl;
        all = all && r.passed;
    });
    std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
    return all ? 0 : 1;
}
