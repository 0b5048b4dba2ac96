#include "cquartet/morph.hpp"

#include "cquartet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cquartet {

namespace {

double mean_of(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double rms_residual(std::span<const double> tau, std::span<const double> goal)
{
    double ss = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double r = tau[i] - goal[i];
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(tau.size()));
}

double range_of(std::span<const double> v)
{
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    return *mx - *mn;
}

struct Constraints {
    bool keep_mean;
    bool keep_sd;
    double mean;
    double sd;

    // Maps tau back onto {mean(tau) = mean, sd(tau) = sd} for the enabled
    // statistics.
    void project(std::vector<double>& tau) const
    {
        if (keep_sd) {
            const double m = mean_of(tau);
            const double s = population_sd(tau);
            const double ratio = s > 0.0 ? sd / s : 0.0;
            for (auto& t : tau)
                t = mean + (t - m) * ratio;
        }
        if (keep_mean || keep_sd) {
            const double drift = mean_of(tau) - mean;
            for (auto& t : tau)
                t -= drift;
        }
    }

    bool satisfied(std::span<const double> tau, double tol) const
    {
        if ((keep_mean || keep_sd) && std::fabs(mean_of(tau) - mean) > tol)
            return false;
        if (keep_sd && std::fabs(population_sd(tau) - sd) > tol)
            return false;
        return true;
    }
};

void validate(const MorphConfig& cfg)
{
    if (!(cfg.stat_tolerance > 0.0))
        throw std::invalid_argument("morph: stat_tolerance must be positive");
    if (cfg.iterations < 1)
        throw std::invalid_argument("morph: iterations must be at least 1");
    if (cfg.decay && !(*cfg.decay > 0.0 && *cfg.decay < 1.0))
        throw std::invalid_argument("morph: decay must lie in (0, 1)");
    if (!(cfg.step_scale > 0.0) || !std::isfinite(cfg.step_scale))
        throw std::invalid_argument("morph: step_scale must be positive");
    if (!(cfg.initial_temperature >= 0.0) || !std::isfinite(cfg.initial_temperature))
        throw std::invalid_argument("morph: initial_temperature must be non-negative");
}

}  // namespace

ShapeTarget ShapeTarget::from_table(std::vector<double> xs, std::vector<double> ys)
{
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("shape table needs matching, non-empty x and y columns");
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> sx, sy;
    for (std::size_t i : order) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
            throw std::invalid_argument("shape table values must be finite");
        if (!sx.empty() && xs[i] == sx.back())
            throw std::invalid_argument("shape table has duplicate x values");
        sx.push_back(xs[i]);
        sy.push_back(ys[i]);
    }
    const double lo = sx.front();
    const double hi = sx.back();
    auto fn = [sx = std::move(sx), sy = std::move(sy)](double x) {
        if (x <= sx.front())
            return sy.front();
        if (x >= sx.back())
            return sy.back();
        const auto it = std::upper_bound(sx.begin(), sx.end(), x);
        const auto j = static_cast<std::size_t>(it - sx.begin());
        const double t = (x - sx[j - 1]) / (sx[j] - sx[j - 1]);
        return sy[j - 1] + t * (sy[j] - sy[j - 1]);
    };
    return ShapeTarget(std::move(fn), lo, hi);
}

ShapeTarget ShapeTarget::from_effects(const EffectVector& v)
{
    return from_table(v.xs(), v.taus());
}

ShapeTarget ShapeTarget::from_function(std::function<double(double)> fn, double lo, double hi)
{
    if (!fn)
        throw std::invalid_argument("shape function is empty");
    if (!(lo <= hi))
        throw std::invalid_argument("shape domain is empty");
    return ShapeTarget(std::move(fn), lo, hi);
}

double population_sd(std::span<const double> v)
{
    const double m = mean_of(v);
    double ss = 0.0;
    for (double t : v)
        ss += (t - m) * (t - m);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

double shape_distance(const EffectVector& v, const ShapeTarget& target)
{
    if (v.units.empty())
        throw std::invalid_argument("shape_distance of an empty vector");
    double ss = 0.0;
    for (const auto& u : v.units) {
        if (!target.covers(u.x))
            throw std::invalid_argument("shape target is not defined at x = " + std::to_string(u.x));
        const double r = u.tau - target(u.x);
        ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(v.units.size()));
}

MorphResult morph(const EffectVector& v, const ShapeTarget& target, const MorphConfig& cfg,
                  const MorphObserver& on_accept)
{
    validate(cfg);
    if (v.units.empty())
        throw std::invalid_argument("morph of an empty vector");

    const std::size_t n = v.size();
    std::vector<double> tau = v.taus();
    std::vector<double> goal(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!target.covers(v.units[i].x))
            throw std::invalid_argument("shape target does not cover the source x range");
        goal[i] = target(v.units[i].x);
    }
    for (double t : tau)
        if (!std::isfinite(t))
            throw std::invalid_argument("morph: source effects must be finite");

    const Constraints constraints{cfg.preserve_mean, cfg.preserve_sd, mean_of(tau), population_sd(tau)};

    MorphResult result;
    result.best = v;
    result.initial_distance = rms_residual(tau, goal);
    result.final_distance = result.initial_distance;
    if (result.initial_distance == 0.0) {
        result.status = MorphStatus::at_target;
        return result;
    }

    // Step size reference: spread of the source, else of the target.
    double reference = range_of(tau);
    if (reference == 0.0)
        reference = range_of(goal);
    if (reference == 0.0)
        reference = std::max(std::fabs(constraints.mean), 1.0);
    const double step = cfg.step_scale * reference;

    Rng rng(cfg.seed, streams::morph);
    std::vector<double> candidate(n);
    std::vector<double> best = tau;
    double current = result.initial_distance;
    double best_distance = current;
    double temperature = cfg.initial_temperature;
    const double decay = cfg.decay.value_or(std::exp(-10.0 / static_cast<double>(cfg.iterations)));

    for (std::size_t iter = 0; iter < cfg.iterations; ++iter, temperature *= decay) {
        candidate = tau;
        candidate[rng.index(n)] += step * rng.normal();
        constraints.project(candidate);

        const double proposed = rms_residual(candidate, goal);
        const double delta = (proposed - current) / result.initial_distance;
        const double u = rng.uniform();
        const bool accept = delta <= 0.0 || (temperature > 0.0 && u < std::exp(-delta / temperature));
        if (!accept)
            continue;
        if (!constraints.satisfied(candidate, cfg.stat_tolerance)) {
            ++result.constraint_violations;
            continue;
        }

        tau.swap(candidate);
        current = proposed;
        ++result.accepted;
        if (current < best_distance) {
            best_distance = current;
            best = tau;
        }
        if (on_accept)
            on_accept(MorphStep{iter, tau, current, best_distance});
    }

    for (std::size_t i = 0; i < n; ++i)
        result.best.units[i].tau = best[i];
    result.best.pattern.reset();
    result.best.scale.reset();
    if (!cfg.preserve_mean && !cfg.preserve_sd)
        result.best.ate = mean_of(best);
    result.final_distance = best_distance;
    result.status = result.reduction() >= 0.01 ? MorphStatus::improved : MorphStatus::no_progress;
    return result;
}

}  // namespace cquartet
