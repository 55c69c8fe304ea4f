#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

namespace cvahedge {

// Uniform monitoring grid t0 < t1 < ... < tK.
struct TimeGrid {
    double t0 = 0.0;
    double tK = 1.0;
    int steps_per_year = 200;
    int K = 0;
    double dt = 0.0;
    std::vector<double> dates;

    static TimeGrid make(double t0, double tK, int steps_per_year);
    double operator[](int k) const { return dates[static_cast<std::size_t>(k)]; }
    int size() const { return K + 1; }
};

struct GbmParams {
    double mu = 0.1;
    double r = 0.1;
    double sigma = 0.2;
};

struct MertonParams {
    double r = 0.1;
    double sigma = 0.2;
    double mu_j = -0.125;
    double sigma_j = 0.1;
    double xi = 0.1;

    // E[e^J]
    double kappa() const;
    double mean_jump() const { return kappa() - 1.0; }
};

using ModelParams = std::variant<GbmParams, MertonParams>;

void validate(const GbmParams& p);
void validate(const MertonParams& p);

// Row-major L x (K+1) matrix of stock levels.
struct PathSet {
    std::size_t paths = 0;
    std::size_t cols = 0;
    std::uint64_t seed = 0;
    std::vector<double> values;

    double at(std::size_t path, std::size_t k) const { return values[path * cols + k]; }
    const double* row(std::size_t path) const { return values.data() + path * cols; }
};

double bank_account(double r, double t0, double t);

// Independent random substreams per path. Keeping diffusion and jumps apart
// means a Merton run with xi = 0 consumes exactly the Gaussian draws of a GBM run.
enum class Stream : std::uint64_t { diffusion = 1, jumps = 2, default_time = 3 };

std::uint64_t splitmix64(std::uint64_t x);
std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path, Stream stream);

// Single path kernels; out must hold grid.size() values.
void simulate_gbm_path(const GbmParams& p, double s0, const TimeGrid& grid,
                       std::uint64_t seed, std::uint64_t path, double* out);
// Returns the number of jumps on the path.
long simulate_merton_path(const MertonParams& p, double s0, const TimeGrid& grid,
                          std::uint64_t seed, std::uint64_t path, double* out);
void simulate_path(const ModelParams& p, double s0, const TimeGrid& grid,
                   std::uint64_t seed, std::uint64_t path, double* out);

PathSet simulate_gbm(const GbmParams& p, double s0, const TimeGrid& grid,
                     std::size_t L, std::uint64_t seed);
PathSet simulate_merton(const MertonParams& p, double s0, const TimeGrid& grid,
                        std::size_t L, std::uint64_t seed);

double simulate_default_time(double hazard, std::uint64_t seed, std::uint64_t path);
std::vector<double> simulate_default_times(double hazard, std::size_t L, std::uint64_t seed);

}  // namespace cvahedge
