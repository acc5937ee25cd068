// Acceptance suite: one line per criterion, nonzero exit on any failure.
//   acceptance [out_dir] [criterion ids...]
// With ids, only those criteria run and criterion 11 is skipped.

#include <cstdlib>
#include <iostream>
#include <set>

#include "fokas/acceptance.hpp"

using namespace fokas;

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "acceptance_out";
    std::set<int> only;
    for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));
    const RunConfig cfg = parse_config(json::object());
    bool all = true;
    if (!only.empty()) {
        for (int id : only) {
            if (id < 1 || id > int(acceptance::criteria().size())) continue;
            const auto t0 = std::chrono::steady_clock::now();
            auto r = acceptance::criteria()[id - 1](cfg.seed);
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            r.pass = r.pass && (r.budget <= 0 || r.seconds < r.budget);
            std::cout << result_line(r) << std::endl;
            all = all && r.pass;
        }
        return all ? 0 : 1;
    }
    std::filesystem::remove_all(dir);
    verify_all(cfg, dir / "run1", [&](const CriterionResult& r) {
        std::cout << result_line(r) << std::endl;
        all = all && r.pass;
    });
    const auto c11 = determinism(cfg, dir / "run1", dir / "run2");
    std::cout << result_line(c11) << std::endl;
    all = all && c11.pass;
    std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
    return all ? 0 : 1;
}
