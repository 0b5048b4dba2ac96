#pragma once

#include "cquartet/patterns.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace cquartet {

// Desired effect as a function of x over a closed domain.
class ShapeTarget {
public:
    // Piecewise-linear interpolation through (xs[i], ys[i]). xs must be
    // strictly increasing after sorting; at least one point.
    static ShapeTarget from_table(std::vector<double> xs, std::vector<double> ys);
    // Interpolates the effects of an existing vector, e.g. a canonical pattern.
    static ShapeTarget from_effects(const EffectVector& v);
    static ShapeTarget from_function(std::function<double(double)> fn, double lo, double hi);

    double operator()(double x) const { return fn_(x); }
    bool covers(double x) const { return x >= lo_ && x <= hi_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    ShapeTarget(std::function<double(double)> fn, double lo, double hi)
        : fn_(std::move(fn)), lo_(lo), hi_(hi)
    {
    }

    std::function<double(double)> fn_;
    double lo_;
    double hi_;
};

// Root-mean-square of tau_i - target(x_i).
double shape_distance(const EffectVector& v, const ShapeTarget& target);

struct MorphConfig {
    bool preserve_mean = true;
    bool preserve_sd = false;
    double stat_tolerance = 1e-9;
    std::size_t iterations = 200'000;
    // Proposal sd as a fraction of the source's tau range.
    double step_scale = 0.05;
    // Temperature is on the scale of distance changes relative to the
    // starting distance; it decays geometrically each iteration. Unset
    // decay cools by e^-10 over the budget (0.99995 at 2e5 iterations).
    double initial_temperature = 0.4;
    std::optional<double> decay;
    std::uint64_t seed = 0;
};

enum class MorphStatus {
    improved,     // distance reduced by at least 1%
    at_target,    // source already matched the target
    no_progress,  // soft failure: best-so-far returned anyway
};

struct MorphResult {
    EffectVector best;
    MorphStatus status = MorphStatus::no_progress;
    double initial_distance = 0.0;
    double final_distance = 0.0;
    std::size_t accepted = 0;
    // Accepted proposals that broke a preserved statistic (and were undone).
    std::size_t constraint_violations = 0;

    double reduction() const
    {
        return initial_distance > 0.0 ? 1.0 - final_distance / initial_distance : 0.0;
    }
};

struct MorphStep {
    std::size_t iteration;
    std::span<const double> tau;
    double distance;
    double best_distance;
};

// Called after every accepted proposal.
using MorphObserver = std::function<void(const MorphStep&)>;

double population_sd(std::span<const double> v);

// Simulated annealing from v toward target. Every visited state keeps the
// preserved statistics of v; x values and unit order are untouched.
MorphResult morph(const EffectVector& v, const ShapeTarget& target, const MorphConfig& cfg,
                  const MorphObserver& on_accept = {});

}  // namespace cquartet
