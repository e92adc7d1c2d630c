// One line per acceptance criterion. Tolerances are the defaults pinned in
// AcceptanceConfig; nothing here loosens them.
#include <cstdio>

#include "dqm/verify.hpp"

int main() {
    const dqm::AcceptanceConfig cfg;
    int failed = 0;
    for (int id = 1; id <= dqm::criterion_count; ++id) {
        const auto r = dqm::run_criterion(id, cfg);
        std::printf("%s criterion %2d %-40s %7.1fs  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.seconds, r.detail.c_str());
        std::fflush(stdout);
        failed += r.passed ? 0 : 1;
    }
    std::printf("%d of %d criteria passed\n", dqm::criterion_count - failed, dqm::criterion_count);
    return failed == 0 ? 0 : 1;
}
