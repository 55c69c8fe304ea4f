#include "cvahedge/market_models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cvahedge {

TimeGrid TimeGrid::make(double t0, double tK, int steps_per_year) {
    if (!(tK > t0)) throw std::invalid_argument("time grid: tK must exceed t0");
    if (steps_per_year < 1) throw std::invalid_argument("time grid: steps_per_year must be >= 1");
    TimeGrid g;
    g.t0 = t0;
    g.tK = tK;
    g.steps_per_year = steps_per_year;
    g.K = std::max(1, static_cast<int>(std::lround((tK - t0) * steps_per_year)));
    g.dt = (tK - t0) / g.K;
    g.dates.resize(static_cast<std::size_t>(g.K) + 1);
    for (int k = 0; k <= g.K; ++k) g.dates[static_cast<std::size_t>(k)] = t0 + k * g.dt;
    g.dates.back() = tK;
    return g;
}

double MertonParams::kappa() const { return std::exp(mu_j + 0.5 * sigma_j * sigma_j); }

void validate(const GbmParams& p) {
    if (!(p.sigma >= 0.0)) throw std::invalid_argument("gbm: sigma must be non-negative");
}

void validate(const MertonParams& p) {
    if (!(p.sigma > 0.0)) throw std::invalid_argument("merton: sigma must be positive");
    if (!(p.sigma_j >= 0.0)) throw std::invalid_argument("merton: sigma_j must be non-negative");
    if (!(p.xi >= 0.0)) throw std::invalid_argument("merton: xi must be non-negative");
}

double bank_account(double r, double t0, double t) {
    if (t < t0) throw std::invalid_argument("bank_account: t < t0");
    return std::exp(r * (t - t0));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path, Stream stream) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ path);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return std::mt19937_64(seq);
}

void simulate_gbm_path(const GbmParams& p, double s0, const TimeGrid& grid,
                       std::uint64_t seed, std::uint64_t path, double* out) {
    auto rng = path_rng(seed, path, Stream::diffusion);
    std::normal_distribution<double> z;
    const double drift = p.mu * grid.dt;
    const double vol = p.sigma * std::sqrt(grid.dt);
    out[0] = s0;
    for (int k = 1; k <= grid.K; ++k) {
        // level Euler can in principle go negative for huge dt; floor keeps S > 0
        double s = out[k - 1] * (1.0 + drift + vol * z(rng));
        out[k] = s > 0.0 ? s : std::numeric_limits<double>::min();
    }
}

long simulate_merton_path(const MertonParams& p, double s0, const TimeGrid& grid,
                          std::uint64_t seed, std::uint64_t path, double* out) {
    auto rng = path_rng(seed, path, Stream::diffusion);
    auto jrng = path_rng(seed, path, Stream::jumps);
    std::normal_distribution<double> z;
    const double dt = grid.dt;
    const double drift =
        (p.r - p.xi * p.mean_jump() - 0.5 * p.sigma * p.sigma) * dt;
    const double vol = p.sigma * std::sqrt(dt);
    const bool jumps = p.xi > 0.0;
    std::poisson_distribution<int> count(jumps ? p.xi * dt : 1.0);
    std::normal_distribution<double> size(p.mu_j, p.sigma_j);
    long njumps = 0;
    double x = std::log(s0);
    out[0] = s0;
    for (int k = 1; k <= grid.K; ++k) {
        x += drift + vol * z(rng);
        if (jumps) {
            int n = count(jrng);
            njumps += n;
            for (int j = 0; j < n; ++j) x += p.sigma_j > 0.0 ? size(jrng) : p.mu_j;
        }
        out[k] = std::exp(x);
    }
    return njumps;
}

void simulate_path(const ModelParams& p, double s0, const TimeGrid& grid,
                   std::uint64_t seed, std::uint64_t path, double* out) {
    if (const auto* g = std::get_if<GbmParams>(&p))
        simulate_gbm_path(*g, s0, grid, seed, path, out);
    else
        simulate_merton_path(std::get<MertonParams>(p), s0, grid, seed, path, out);
}

namespace {
PathSet alloc(std::size_t L, const TimeGrid& grid, std::uint64_t seed, double s0) {
    if (!(s0 > 0.0)) throw std::invalid_argument("simulate: s0 must be positive");
    if (L < 1) throw std::invalid_argument("simulate: need at least one path");
    PathSet ps;
    ps.paths = L;
    ps.cols = static_cast<std::size_t>(grid.size());
    ps.seed = seed;
    ps.values.resize(L * ps.cols);
    return ps;
}
}  // namespace

PathSet simulate_gbm(const GbmParams& p, double s0, const TimeGrid& grid,
                     std::size_t L, std::uint64_t seed) {
    validate(p);
    PathSet ps = alloc(L, grid, seed, s0);
    for (std::size_t i = 0; i < L; ++i)
        simulate_gbm_path(p, s0, grid, seed, i, ps.values.data() + i * ps.cols);
    return ps;
}

PathSet simulate_merton(const MertonParams& p, double s0, const TimeGrid& grid,
                        std::size_t L, std::uint64_t seed) {
    validate(p);
    PathSet ps = alloc(L, grid, seed, s0);
    for (std::size_t i = 0; i < L; ++i)
        simulate_merton_path(p, s0, grid, seed, i, ps.values.data() + i * ps.cols);
    return ps;
}

double simulate_default_time(double hazard, std::uint64_t seed, std::uint64_t path) {
    if (hazard < 0.0) throw std::invalid_argument("default times: hazard must be >= 0");
    if (hazard == 0.0) return std::numeric_limits<double>::infinity();
    auto rng = path_rng(seed, path, Stream::default_time);
    std::exponential_distribution<double> e(hazard);
    return e(rng);
}

std::vector<double> simulate_default_times(double hazard, std::size_t L, std::uint64_t seed) {
    std::vector<double> out(L);
    for (std::size_t i = 0; i < L; ++i) out[i] = simulate_default_time(hazard, seed, i);
    return out;
}

}  // namespace cvahedge
