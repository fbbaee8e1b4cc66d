#include "fpt/bridge.hpp"

#include <algorithm>
#include <cmath>

#include "fpt/error.hpp"

namespace fpt {

std::string to_string(BridgeScheme scheme) {
    return scheme == BridgeScheme::sde_euler ? "sde_euler" : "three_bridge";
}

BridgeScheme bridge_scheme_from_string(const std::string& name) {
    if (name == "sde_euler") return BridgeScheme::sde_euler;
    if (name == "three_bridge") return BridgeScheme::three_bridge;
    throw InvalidArgument("unknown bridge scheme '" + name + "'");
}

std::vector<double> PathBatch::marginal(int k) const {
    std::vector<double> out(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) out[i] = values(static_cast<Eigen::Index>(i), k);
    return out;
}

BridgePathGenerator::BridgePathGenerator(BridgeSpec spec, int n_steps, BridgeScheme scheme)
    : spec_(spec), n_steps_(n_steps), scheme_(scheme) {
    spec_.validate();
    if (n_steps < 10) throw InvalidArgument("bridge sampling needs n_steps >= 10");
    dt_ = spec_.s / n_steps_;
    sqrt_dt_ = std::sqrt(dt_);
    walk_.resize(static_cast<std::size_t>(n_steps_) + 1);
}

void BridgePathGenerator::operator()(std::mt19937_64& engine, std::span<double> out) {
    if (scheme_ == BridgeScheme::sde_euler)
        euler(engine, out);
    else
        three_bridge(engine, out);
    out.front() = spec_.a;
    out.back() = 0.0;
}

// dX = [1/X - X/(s-t)] dt + dW. The 1/X term is taken implicitly, which
// keeps X positive without a reflection guard: X' solves
// X' = y + dt / X' with y the explicit part, i.e. X' = (y + sqrt(y^2 + 4 dt)) / 2.
// The pull toward zero uses (s - t) floored at dt/2; the last step pins to 0.
void BridgePathGenerator::euler(std::mt19937_64& engine, std::span<double> out) {
    constexpr double kFloor = 1e-10;
    double x = spec_.a;
    out[0] = x;
    for (int k = 0; k < n_steps_; ++k) {
        const double t = spec_.s * static_cast<double>(k) / n_steps_;
        const double remaining = std::max(spec_.s - t, 0.5 * dt_);
        const double clipped = std::max(x, kFloor);
        const double y = x - clipped / remaining * dt_ + sqrt_dt_ * normal_(engine);
        x = 0.5 * (y + std::sqrt(y * y + 4.0 * dt_));
        out[static_cast<std::size_t>(k) + 1] = x;
    }
}

void BridgePathGenerator::three_bridge(std::mt19937_64& engine, std::span<double> out) {
    const auto n = static_cast<std::size_t>(n_steps_);
    std::fill(out.begin(), out.end(), 0.0);
    for (int component = 0; component < 3; ++component) {
        walk_[0] = 0.0;
        for (std::size_t k = 1; k <= n; ++k) walk_[k] = walk_[k - 1] + sqrt_dt_ * normal_(engine);
        const double end = walk_[n];
        const double start = component == 0 ? spec_.a : 0.0;
        for (std::size_t k = 0; k <= n; ++k) {
            const double frac = static_cast<double>(k) / static_cast<double>(n);
            const double value = start * (1.0 - frac) + walk_[k] - frac * end;
            out[k] += value * value;
        }
    }
    for (double& v : out) v = std::sqrt(v);
}

namespace {

void check_counts(int n_steps, std::size_t n_paths) {
    if (n_steps < 10) throw InvalidArgument("bridge sampling needs n_steps >= 10");
    if (n_paths == 0) throw InvalidArgument("bridge sampling needs n_paths >= 1");
}

}  // namespace

PathBatch sample_bridge(const BridgeSpec& spec, int n_steps, std::size_t n_paths, std::uint64_t seed,
                        BridgeScheme scheme, const SamplingOptions& opts) {
    check_counts(n_steps, n_paths);
    spec.validate();
    PathBatch batch;
    batch.spec = spec;
    batch.n_steps = n_steps;
    batch.n_paths = n_paths;
    batch.dt = spec.s / n_steps;
    batch.seed = seed;
    batch.scheme = scheme;
    batch.values.resize(static_cast<Eigen::Index>(n_paths), n_steps + 1);
    batch.touched_zero.assign(n_paths, 0);
    for_each_chunk(n_paths, opts.chunk_size, opts.resolved_workers(),
                   [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                       auto engine = chunk_engine(seed, chunk);
                       BridgePathGenerator generate(spec, n_steps, scheme);
                       for (std::size_t i = begin; i < end; ++i) {
                           auto row = batch.values.row(static_cast<Eigen::Index>(i));
                           std::span<double> path(row.data(), static_cast<std::size_t>(n_steps) + 1);
                           generate(engine, path);
                           batch.touched_zero[i] =
                               std::any_of(path.begin() + 1, path.end() - 1, [](double v) { return v <= 0.0; });
                       }
                   });
    return batch;
}

PathBatch sample_sde(const BridgeSpec& spec, int n_steps, std::size_t n_paths, std::uint64_t seed,
                     const SamplingOptions& opts) {
    return sample_bridge(spec, n_steps, n_paths, seed, BridgeScheme::sde_euler, opts);
}

PathBatch sample_three_bridge(const BridgeSpec& spec, int n_steps, std::size_t n_paths, std::uint64_t seed,
                              const SamplingOptions& opts) {
    return sample_bridge(spec, n_steps, n_paths, seed, BridgeScheme::three_bridge, opts);
}

PathMatrix sample_marginals(const BridgeSpec& spec, int n_steps, std::size_t n_paths, std::uint64_t seed,
                            BridgeScheme scheme, std::span<const int> indices, const SamplingOptions& opts) {
    check_counts(n_steps, n_paths);
    for (int k : indices)
        if (k < 0 || k > n_steps) throw InvalidArgument("marginal index outside the time grid");
    PathMatrix out(static_cast<Eigen::Index>(n_paths), static_cast<Eigen::Index>(indices.size()));
    for_each_chunk(n_paths, opts.chunk_size, opts.resolved_workers(),
                   [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                       auto engine = chunk_engine(seed, chunk);
                       BridgePathGenerator generate(spec, n_steps, scheme);
                       std::vector<double> path(static_cast<std::size_t>(n_steps) + 1);
                       for (std::size_t i = begin; i < end; ++i) {
                           generate(engine, path);
                           for (std::size_t j = 0; j < indices.size(); ++j)
                               out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                                   path[static_cast<std::size_t>(indices[j])];
                       }
                   });
    return out;
}

Eigen::VectorXd curvature_weights(const Boundary& boundary, double s, int n_steps) {
    const double dt = s / n_steps;
    Eigen::VectorXd w(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) {
        const double trapezoid = (k == 0 || k == n_steps) ? 0.5 : 1.0;
        w(k) = trapezoid * dt * boundary.d2f(s * static_cast<double>(k) / n_steps);
    }
    return w;
}

std::vector<double> functional_values(const PathBatch& batch, const Boundary& boundary) {
    const Eigen::VectorXd w = curvature_weights(boundary, batch.spec.s, batch.n_steps);
    std::vector<double> out(batch.n_paths);
    for (std::size_t i = 0; i < batch.n_paths; ++i) {
        const Eigen::Map<const Eigen::VectorXd> path(batch.values.row(static_cast<Eigen::Index>(i)).data(),
                                                     batch.n_steps + 1);
        out[i] = std::exp(-path.dot(w));
    }
    return out;
}

EstimateCI functional_mean(const BridgeSpec& spec, const Boundary& boundary, int n_steps, std::size_t n_paths,
                           std::uint64_t seed, BridgeScheme scheme, const SamplingOptions& opts) {
    check_counts(n_steps, n_paths);
    spec.validate();
    const Eigen::VectorXd w = curvature_weights(boundary, spec.s, n_steps);
    if (w.isZero(0.0)) return {1.0, 0.0, n_paths};

    std::vector<RunningStats> per_chunk(chunk_count(n_paths, opts.chunk_size));
    for_each_chunk(n_paths, opts.chunk_size, opts.resolved_workers(),
                   [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                       auto engine = chunk_engine(seed, chunk);
                       BridgePathGenerator generate(spec, n_steps, scheme);
                       Eigen::VectorXd path(n_steps + 1);
                       RunningStats stats;
                       for (std::size_t i = begin; i < end; ++i) {
                           generate(engine, std::span<double>(path.data(), static_cast<std::size_t>(path.size())));
                           stats.push(std::exp(-path.dot(w)));
                       }
                       per_chunk[chunk] = stats;
                   });
    RunningStats total;
    for (const auto& s : per_chunk) total.merge(s);
    return to_estimate(total);
}

}  // namespace fpt
