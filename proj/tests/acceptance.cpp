#include <cstdio>
#include <string>

#include "buffon/acceptance.hpp"

int main(int argc, char** argv)
{
    buffon::acceptance::Options opt;
    for (int i = 1; i < argc; ++i)
        opt.only.emplace_back(argv[i]);
    const auto results = buffon::acceptance::run_suite(opt, [](const auto& r) {
        std::printf("%s\n", buffon::acceptance::format_line(r).c_str());
        std::fflush(stdout);
    });
    int passed = 0;
    for (const auto& r : results)
        passed += r.passed;
    const bool ok = buffon::acceptance::suite_passed(results);
    std::printf("%d/%zu criteria passed; suite %s\n", passed, results.size(), ok ? "PASSED" : "FAILED");
    return ok ? 0 : 1;
}
