// Runs every acceptance check once at full scale and prints one line per check.

#include <cstdio>
#include <iostream>

#include "qfact/verify.hpp"

int main() {
    qfact::VerifyConfig cfg;
    bool all = true;
    double total = 0;
    for (int id = 1; id <= qfact::kCheckCount; ++id) {
        const auto r = qfact::run_check(id, cfg);
        total += r.seconds;
        all = all && r.pass;
        std::printf("criterion %2d %-34s %s  (%zu instances, %.2f s)  %s\n", r.id, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.instances, r.seconds, r.anchor.c_str());
        if (!r.pass) std::printf("    counterexample: %s\n", r.counterexample.dump().c_str());
        std::fflush(stdout);
    }
    std::printf("%s in %.1f s\n", all ? "all criteria pass" : "SOME CRITERIA FAIL", total);
    return all ? 0 : 1;
}
