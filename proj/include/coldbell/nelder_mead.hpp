// nelder_mead.hpp: Downhill simplex minimiser and seeded multistart driver

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace coldbell::opt {

struct SimplexOptions {
    double initial_step = 0.5;
    double x_tolerance = 1e-6;   // max vertex distance from the best vertex
    double f_tolerance = 1e-12;  // spread of function values
    int max_evaluations = 5000;
    int max_polish = 3;  // re-seeded simplex restarts around the converged point
};

struct SimplexResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    int evaluations = 0;
    bool converged = false;
};

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// After convergence the simplex is rebuilt around the best point and the search
/// repeated, which guards against collapse onto a non-stationary point.
template <class F>
SimplexResult nelder_mead(F&& f, std::vector<double> x0, const SimplexOptions& opts = {}) {
    const std::size_t n = x0.size();
    SimplexResult result;
    result.x = x0;
    result.value = f(x0);
    result.evaluations = 1;

    std::vector<std::vector<double>> pts(n + 1);
    std::vector<double> vals(n + 1);
    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);

    for (int polish = 0; polish <= opts.max_polish; ++polish) {
        const double start_value = result.value;
        pts[0] = result.x;
        vals[0] = result.value;
        for (std::size_t i = 0; i < n; ++i) {
            pts[i + 1] = result.x;
            pts[i + 1][i] += opts.initial_step;
            vals[i + 1] = f(pts[i + 1]);
            ++result.evaluations;
        }
        bool converged = false;
        while (result.evaluations < opts.max_evaluations) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
            const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

            double size = 0.0;
            for (std::size_t v = 0; v <= n; ++v)
                for (std::size_t i = 0; i < n; ++i) size = std::max(size, std::abs(pts[v][i] - pts[best][i]));
            if (size < opts.x_tolerance && vals[worst] - vals[best] < opts.f_tolerance + opts.f_tolerance * std::abs(vals[best])) {
                converged = true;
                break;
            }

            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t v = 0; v <= n; ++v)
                if (v != worst)
                    for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[v][i] / static_cast<double>(n);

            for (std::size_t i = 0; i < n; ++i) trial[i] = centroid[i] + (centroid[i] - pts[worst][i]);
            const double fr = f(trial);
            ++result.evaluations;
            if (fr < vals[best]) {
                for (std::size_t i = 0; i < n; ++i) trial2[i] = centroid[i] + 2.0 * (centroid[i] - pts[worst][i]);
                const double fe = f(trial2);
                ++result.evaluations;
                if (fe < fr) {
                    pts[worst] = trial2;
                    vals[worst] = fe;
                } else {
                    pts[worst] = trial;
                    vals[worst] = fr;
                }
                continue;
            }
            if (fr < vals[second]) {
                pts[worst] = trial;
                vals[worst] = fr;
                continue;
            }
            const bool outside = fr < vals[worst];
            for (std::size_t i = 0; i < n; ++i)
                trial2[i] = outside ? centroid[i] + 0.5 * (trial[i] - centroid[i])
                                    : centroid[i] + 0.5 * (pts[worst][i] - centroid[i]);
            const double fc = f(trial2);
            ++result.evaluations;
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = trial2;
                vals[worst] = fc;
                continue;
            }
            for (std::size_t v = 0; v <= n; ++v) {
                if (v == best) continue;
                for (std::size_t i = 0; i < n; ++i) pts[v][i] = pts[best][i] + 0.5 * (pts[v][i] - pts[best][i]);
                vals[v] = f(pts[v]);
                ++result.evaluations;
            }
        }
        const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
        if (vals[best] <= result.value) {
            result.value = vals[best];
            result.x = pts[best];
        }
        result.converged = converged;
        if (!converged || start_value - result.value <= opts.f_tolerance * (1.0 + std::abs(result.value))) break;
    }
    return result;
}

/// SplitMix64 finaliser; derives independent stream seeds from a master seed.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace coldbell::opt
