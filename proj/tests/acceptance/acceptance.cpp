// One line per acceptance criterion; exit status 1 when any fails.
#include <cstdio>
#include <exception>

#include "cmcforge/verify.hpp"

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    try {
        auto results = cmcforge::run_suites(argc > 1 ? argv[1] : "all");
        int failed = 0;
        for (const auto& r : results) {
            std::printf("criterion %2d %-15s %s  %s (%.1fs)\n", r.id, r.name.c_str(), r.pass ? "PASS" : "FAIL",
                        r.detail.c_str(), r.seconds);
            failed += !r.pass;
        }
        std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
        return failed ? 1 : 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance: %s\n", e.what());
        return 1;
    }
}
