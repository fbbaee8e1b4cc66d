// One PASS/FAIL line per acceptance criterion at full scale. Exit status is
// nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "fpt/io.hpp"
#include "fpt/validation.hpp"

using namespace fpt;

namespace {

struct Criterion {
    int id;
    std::string title;
    double time_limit_s;  // 0: no runtime bound
    std::function<std::vector<CheckResult>()> run;
};

bool all_pass(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

std::string summarize(const std::vector<CheckResult>& checks) {
    std::string text;
    for (const auto& c : checks) {
        if (!text.empty()) text += "; ";
        text += c.name + "=" + io::format_number(c.observed) + (c.passed ? "" : " (limit " + io::format_number(c.tolerance) + ")");
    }
    return text;
}

// Girsanov and direct Monte Carlo under two FPT_THREADS settings, compared bitwise.
CheckResult env_thread_invariance(const ValidationScale& scale) {
    const Boundary quad = make_boundary(BoundaryKind::quadratic, 1.0, {0.0, 0.5});
    const auto sample = [&](const char* threads) {
        ::setenv("FPT_THREADS", threads, 1);
        const EstimateCI g = fpt_density_girsanov(quad, 1.0, 64, 50000, scale.seed);
        const DirectMcResult d = fpt_direct_mc(quad, 1.0, 100, 50000, scale.seed);
        return io::format_number(g.mean) + io::density_csv(d.density) +
               std::to_string(g.mean) + std::to_string(d.cdf.mean);
    };
    const std::string one = sample("1");
    const std::string four = sample("4");
    ::unsetenv("FPT_THREADS");
    return {"fpt_threads_1_vs_4", one == four, one == four ? 0.0 : 1.0, 0.0};
}

CheckResult report_reproducibility() {
    const Boundary lin = make_boundary(BoundaryKind::linear, 1.0, {1.0});
    ValidationScale small;
    small.girsanov_paths = 20000;
    small.direct_paths = 20000;
    small.martingale_paths = 20000;
    small.seed = 11;
    const auto render = [&] { return io::dump(validation_report(lin, small, run_validation_suite(lin, small))); };
    const bool same = render() == render();
    return {"validate_report_byte_identical", same, same ? 0.0 : 1.0, 0.0};
}

}  // namespace

int main() {
    const ValidationScale scale = ValidationScale::full();
    const Boundary quad = make_boundary(BoundaryKind::quadratic, 1.0, {0.0, 0.5});
    MethodCurves curves;

    std::vector<Criterion> criteria{
        {1, "linear-boundary exactness", 1.0, [&] { return check_linear_exactness(scale); }},
        {2, "direct Monte Carlo consistency", 30.0, [&] { return check_direct_mc(scale); }},
        {3, "four-method agreement", 300.0,
         [&] {
             curves = compute_method_curves(quad, {0.5, 1.0, 2.0}, scale);
             return check_method_agreement(quad, curves);
         }},
        {4, "Jensen envelope", 0.0, [&] { return check_envelope(quad, curves); }},
        {5, "bridge law", 0.0, [&] { return check_bridge_law(scale); }},
        {6, "martingale diagnostic", 0.0, [&] { return check_martingale(scale); }},
        {7, "PDE residual convergence", 0.0, [&] { return check_residual_orders(); }},
        {8, "Burgers identity", 0.0, [&] { return check_burgers(); }},
        {9, "ratio and gauge checks", 0.0, [&] { return check_ratio_gauge(); }},
        {10, "determinism", 0.0,
         [&] {
             auto checks = check_thread_invariance(scale);
             checks.push_back(env_thread_invariance(scale));
             checks.push_back(report_reproducibility());
             return checks;
         }},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::vector<CheckResult> checks;
        std::string error;
        try {
            checks = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = error.empty() && all_pass(checks);
        std::string info = error.empty() ? summarize(checks) : "error: " + error;
        if (c.time_limit_s > 0.0) {
            info += "; runtime " + io::format_number(elapsed) + " s (limit " + io::format_number(c.time_limit_s) + " s)";
            ok = ok && elapsed < c.time_limit_s;
        } else {
            info += "; runtime " + io::format_number(elapsed) + " s";
        }
        if (!ok) ++failures;
        std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), info.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
