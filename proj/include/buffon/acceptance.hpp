#pragma once

#include <functional>
#include <string>
#include <vector>

#include "buffon/kernels.hpp"

namespace buffon::acceptance {

struct Result {
    std::string id;
    std::string title;
    bool passed = false;
    bool known_unattainable = false; ///< reported as FAIL but not counted against the suite
    std::string detail;
    double seconds = 0;
    double limit_seconds = 0; ///< 0 means no runtime limit
};

struct Options {
    kernels::Exec exec = kernels::Exec::parallel;
    std::vector<std::string> only; ///< empty runs everything
};

std::vector<std::string> criterion_ids();

Result run_criterion(const std::string& id, const Options& opt = {});

/// Runs the selected criteria in order; `on_result` is called after each one.
std::vector<Result> run_suite(const Options& opt = {}, const std::function<void(const Result&)>& on_result = {});

/// True when every criterion passed except those marked known_unattainable.
bool suite_passed(const std::vector<Result>& results);

std::string format_line(const Result& r);

} // namespace buffon::acceptance
