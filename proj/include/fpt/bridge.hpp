#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fpt/boundary.hpp"
#include "fpt/kernels.hpp"
#include "fpt/parallel.hpp"
#include "fpt/stats.hpp"

namespace fpt {

enum class BridgeScheme { sde_euler, three_bridge };

std::string to_string(BridgeScheme scheme);
BridgeScheme bridge_scheme_from_string(const std::string& name);

struct SamplingOptions {
    std::size_t chunk_size = kDefaultChunkSize;
    int workers = 0;  // 0: worker_count()

    int resolved_workers() const { return workers > 0 ? workers : worker_count(); }
};

using PathMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A seeded batch of bridge paths on the uniform grid t_k = k s / n_steps.
struct PathBatch {
    BridgeSpec spec;
    int n_steps = 0;
    std::size_t n_paths = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    BridgeScheme scheme = BridgeScheme::three_bridge;
    PathMatrix values;  // n_paths x (n_steps + 1)
    std::vector<std::uint8_t> touched_zero;  // interior value hit 0 before s

    double time(int k) const { return spec.s * static_cast<double>(k) / static_cast<double>(n_steps); }
    /// Values of every path at grid index k.
    std::vector<double> marginal(int k) const;
};

/// Draws one discretized bridge path into `out` (size n_steps + 1).
class BridgePathGenerator {
public:
    BridgePathGenerator(BridgeSpec spec, int n_steps, BridgeScheme scheme);

    void operator()(std::mt19937_64& engine, std::span<double> out);

    int n_steps() const { return n_steps_; }

private:
    void euler(std::mt19937_64& engine, std::span<double> out);
    void three_bridge(std::mt19937_64& engine, std::span<double> out);

    BridgeSpec spec_;
    int n_steps_;
    BridgeScheme scheme_;
    double dt_;
    double sqrt_dt_;
    std::normal_distribution<double> normal_;
    std::vector<double> walk_;
};

PathBatch sample_bridge(const BridgeSpec& spec, int n_steps, std::size_t n_paths, std::uint64_t seed,
                        BridgeScheme scheme, const SamplingOptions& opts = {});

/// Euler scheme for the bridge SDE (drift-implicit in the 1/x term).
PathBatch sample_sde(const BridgeSpec& spec, int n_steps, std::size_t n_paths, std::uint64_t seed,
                     const SamplingOptions& opts = {});

/// Modulus of a 3-vector of Brownian bridges (start (a,0,0), end 0); exact
/// in law at grid points.
PathBatch sample_three_bridge(const BridgeSpec& spec, int n_steps, std::size_t n_paths, std::uint64_t seed,
                              const SamplingOptions& opts = {});

/// Values at the requested grid indices of freshly sampled paths, without
/// storing whole paths. Row i holds path i; identical to the corresponding
/// columns of sample_bridge with the same arguments.
PathMatrix sample_marginals(const BridgeSpec& spec, int n_steps, std::size_t n_paths, std::uint64_t seed,
                            BridgeScheme scheme, std::span<const int> indices, const SamplingOptions& opts = {});

/// Trapezoid weights dt w_k f''(t_k) for the pathwise integral of f'' X.
Eigen::VectorXd curvature_weights(const Boundary& boundary, double s, int n_steps);

/// exp(-\int_0^s f''(u) X_u du) per path, trapezoidal rule.
std::vector<double> functional_values(const PathBatch& batch, const Boundary& boundary);

/// Mean of the exponential functional over freshly sampled paths (streamed).
EstimateCI functional_mean(const BridgeSpec& spec, const Boundary& boundary, int n_steps, std::size_t n_paths,
                           std::uint64_t seed, BridgeScheme scheme, const SamplingOptions& opts = {});

}  // namespace fpt
