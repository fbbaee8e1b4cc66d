#include "fpt/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fpt/error.hpp"
#include "fpt/kernels.hpp"
#include "fpt/parallel.hpp"

namespace fpt {

std::string to_string(DensityMethod method) {
    switch (method) {
        case DensityMethod::girsanov_mc: return "girsanov_mc";
        case DensityMethod::direct_mc: return "direct_mc";
        case DensityMethod::fk_pde: return "fk_pde";
        case DensityMethod::heat_pde: return "heat_pde";
        case DensityMethod::closed_form: return "closed_form";
    }
    return "unknown";
}

DensityMethod density_method_from_string(const std::string& name) {
    for (auto m : {DensityMethod::girsanov_mc, DensityMethod::direct_mc, DensityMethod::fk_pde,
                   DensityMethod::heat_pde, DensityMethod::closed_form})
        if (to_string(m) == name) return m;
    throw InvalidArgument("unknown density method '" + name + "'");
}

void DensityCurve::validate() const {
    if (phi.size() != s_grid.size()) throw InvalidArgument("density curve lists differ in length");
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        if (!(s_grid[i] > 0.0)) throw InvalidArgument("density grid must be positive");
        if (i > 0 && !(s_grid[i] > s_grid[i - 1])) throw InvalidArgument("density grid must increase");
        if (!(phi[i] >= 0.0)) throw InvalidArgument("density must be nonnegative");
    }
    if (ci_low.has_value() != ci_high.has_value()) throw InvalidArgument("confidence band needs both sides");
    if (ci_low) {
        if (ci_low->size() != phi.size() || ci_high->size() != phi.size())
            throw InvalidArgument("confidence band length mismatch");
        for (std::size_t i = 0; i < phi.size(); ++i)
            if (!((*ci_low)[i] <= phi[i] && phi[i] <= (*ci_high)[i]))
                throw InvalidArgument("confidence band does not contain the estimate");
    }
}

double DensityCurve::at(double s) const {
    if (s_grid.empty()) throw InvalidArgument("empty density curve");
    if (s < s_grid.front() || s > s_grid.back()) throw InvalidArgument("density requested outside its grid");
    const auto it = std::lower_bound(s_grid.begin(), s_grid.end(), s);
    const auto i = static_cast<std::size_t>(std::distance(s_grid.begin(), it));
    if (s_grid[i] == s) return phi[i];
    const double w = (s - s_grid[i - 1]) / (s_grid[i] - s_grid[i - 1]);
    return (1.0 - w) * phi[i - 1] + w * phi[i];
}

namespace {

void require_affine(const Boundary& boundary) {
    if (!boundary.is_affine())
        throw InvalidArgument("closed-form density needs an affine boundary (f'' = 0)");
}

}  // namespace

double closed_form_density(const Boundary& boundary, double s) {
    require_affine(boundary);
    if (!(s > 0.0)) throw DomainError("density needs s > 0");
    const double a = boundary.a();
    const double gap = boundary.f(s);
    return a / std::sqrt(2.0 * std::numbers::pi * s * s * s) * std::exp(-gap * gap / (2.0 * s));
}

double closed_form_cdf(const Boundary& boundary, double t) {
    require_affine(boundary);
    if (!(t > 0.0)) throw DomainError("distribution needs t > 0");
    const double a = boundary.a();
    const double b = boundary.df(0.0);
    const double root = std::sqrt(t);
    return normal_cdf(-(a + b * t) / root) + std::exp(-2.0 * a * b) * normal_cdf((b * t - a) / root);
}

double girsanov_prefactor(const Boundary& boundary, double s) {
    const double a = boundary.a();
    return std::exp(-a * boundary.df(0.0) - 0.5 * boundary.integral_df_sq(s)) * level_hitting_density(s, a);
}

DirectMcResult fpt_direct_mc(const Boundary& boundary, double t_max, int n_steps, std::size_t n_paths,
                             std::uint64_t seed, const DirectMcOptions& opts) {
    if (!(boundary.f(0.0) > 0.0)) throw DegenerateBoundary("f(0) must be positive");
    if (!(t_max > 0.0)) throw InvalidArgument("t_max must be positive");
    if (n_steps < 100) throw InvalidArgument("direct Monte Carlo needs n_steps >= 100");
    if (n_paths == 0) throw InvalidArgument("direct Monte Carlo needs n_paths >= 1");
    if (opts.bins < 1) throw InvalidArgument("histogram needs at least one bin");

    const double dt = t_max / n_steps;
    const double sqrt_dt = std::sqrt(dt);
    std::vector<double> level(static_cast<std::size_t>(n_steps) + 1);
    for (int k = 0; k <= n_steps; ++k) level[static_cast<std::size_t>(k)] = boundary.f(t_max * k / n_steps);

    struct ChunkTally {
        RunningStats hits;
        std::vector<std::uint64_t> bins;
    };
    std::vector<ChunkTally> tallies(chunk_count(n_paths, opts.sampling.chunk_size));
    const auto bin_count = static_cast<std::size_t>(opts.bins);

    for_each_chunk(n_paths, opts.sampling.chunk_size, opts.sampling.resolved_workers(),
                   [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                       auto engine = chunk_engine(seed, chunk);
                       std::normal_distribution<double> normal;
                       std::uniform_real_distribution<double> uniform;
                       ChunkTally tally{{}, std::vector<std::uint64_t>(bin_count, 0)};
                       for (std::size_t i = begin; i < end; ++i) {
                           double b = 0.0;
                           double hit_time = -1.0;
                           for (int k = 1; k <= n_steps && hit_time < 0.0; ++k) {
                               const double next = b + sqrt_dt * normal(engine);
                               const double d0 = level[static_cast<std::size_t>(k) - 1] - b;
                               const double d1 = level[static_cast<std::size_t>(k)] - next;
                               const double t0 = dt * (k - 1);
                               if (d1 <= 0.0) {
                                   hit_time = t0 + dt * d0 / (d0 - d1);
                               } else {
                                   const double exponent = 2.0 * d0 * d1 / dt;
                                   if (exponent < 40.0 && uniform(engine) < std::exp(-exponent))
                                       hit_time = t0 + 0.5 * dt;
                               }
                               b = next;
                           }
                           tally.hits.push(hit_time >= 0.0 ? 1.0 : 0.0);
                           if (hit_time >= 0.0) {
                               const auto bin = std::min(bin_count - 1,
                                                         static_cast<std::size_t>(hit_time / t_max * opts.bins));
                               ++tally.bins[bin];
                           }
                       }
                       tallies[chunk] = std::move(tally);
                   });

    RunningStats hits;
    std::vector<std::uint64_t> counts(bin_count, 0);
    for (const auto& t : tallies) {
        hits.merge(t.hits);
        for (std::size_t j = 0; j < bin_count; ++j) counts[j] += t.bins[j];
    }

    DirectMcResult result;
    result.cdf = to_estimate(hits);
    DensityCurve& curve = result.density;
    curve.method = DensityMethod::direct_mc;
    curve.boundary_digest = boundary_digest(boundary);
    curve.ci_low.emplace();
    curve.ci_high.emplace();
    const double width = t_max / opts.bins;
    const auto n = static_cast<double>(n_paths);
    for (std::size_t j = 0; j < bin_count; ++j) {
        const double p = static_cast<double>(counts[j]) / n;
        const double se = std::sqrt(p * (1.0 - p) / n);
        curve.s_grid.push_back(width * (static_cast<double>(j) + 0.5));
        curve.phi.push_back(p / width);
        curve.ci_low->push_back(std::max(0.0, p - 3.0 * se) / width);
        curve.ci_high->push_back((p + 3.0 * se) / width);
    }
    return result;
}

EstimateCI fpt_density_girsanov(const Boundary& boundary, double s, int n_steps, std::size_t n_paths,
                                std::uint64_t seed, BridgeScheme scheme, const SamplingOptions& opts) {
    if (!(s > 0.0)) throw DomainError("density needs s > 0");
    const double prefactor = girsanov_prefactor(boundary, s);
    const EstimateCI functional = functional_mean({boundary.a(), s}, boundary, n_steps, n_paths, seed, scheme, opts);
    return {prefactor * functional.mean, prefactor * functional.std_error, functional.n};
}

DensityCurve girsanov_curve(const Boundary& boundary, const std::vector<double>& s_grid, int n_steps,
                            std::size_t n_paths, std::uint64_t seed, BridgeScheme scheme,
                            const SamplingOptions& opts) {
    DensityCurve curve;
    curve.method = DensityMethod::girsanov_mc;
    curve.boundary_digest = boundary_digest(boundary);
    curve.ci_low.emplace();
    curve.ci_high.emplace();
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
        const EstimateCI est = fpt_density_girsanov(boundary, s_grid[j], n_steps, n_paths, seed + j, scheme, opts);
        curve.s_grid.push_back(s_grid[j]);
        curve.phi.push_back(est.mean);
        curve.ci_low->push_back(std::max(0.0, est.lower()));
        curve.ci_high->push_back(est.upper());
    }
    curve.validate();
    return curve;
}

EstimateCI martingale_check(const Boundary& boundary, double t, int n_steps, std::size_t n_paths,
                            std::uint64_t seed, const SamplingOptions& opts) {
    if (!(t > 0.0)) throw DomainError("martingale check needs t > 0");
    if (n_steps < 1 || n_paths == 0) throw InvalidArgument("martingale check needs steps and paths");
    const double dt = t / n_steps;
    const double sqrt_dt = std::sqrt(dt);
    std::vector<double> slope(static_cast<std::size_t>(n_steps));
    double compensator = 0.0;
    for (int k = 0; k < n_steps; ++k) {
        slope[static_cast<std::size_t>(k)] = boundary.df(t * k / n_steps);
        compensator += 0.5 * slope[static_cast<std::size_t>(k)] * slope[static_cast<std::size_t>(k)] * dt;
    }
    if (std::all_of(slope.begin(), slope.end(), [](double v) { return v == 0.0; })) return {1.0, 0.0, n_paths};

    std::vector<RunningStats> per_chunk(chunk_count(n_paths, opts.chunk_size));
    for_each_chunk(n_paths, opts.chunk_size, opts.resolved_workers(),
                   [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                       auto engine = chunk_engine(seed, chunk);
                       std::normal_distribution<double> normal;
                       RunningStats stats;
                       for (std::size_t i = begin; i < end; ++i) {
                           double stochastic = 0.0;
                           for (double f1 : slope) stochastic += f1 * sqrt_dt * normal(engine);
                           stats.push(std::exp(stochastic - compensator));
                       }
                       per_chunk[chunk] = stats;
                   });
    RunningStats total;
    for (const auto& s : per_chunk) total.merge(s);
    return to_estimate(total);
}

}  // namespace fpt
