#pragma once

#include "cquartet/design.hpp"
#include "cquartet/patterns.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace cquartet {

enum class ScenarioKind { binary, continuous };

// A two-arm randomized trial over unit-level potential outcomes.
//
// Binary scenarios draw each unit's response type from the decomposition;
// continuous scenarios draw each unit's effect from the source vector and a
// control outcome from N(0, noise_sd^2). Units are randomized n/2 : n/2.
struct Scenario {
    ScenarioKind kind = ScenarioKind::binary;
    BinaryDecomposition decomposition;
    EffectVector source;
    double noise_sd = 0.0;
    std::size_t n_total = 126;
    double alpha = 0.05;
    std::size_t reps = 10'000;
    std::uint64_t seed = 0;

    static Scenario binary(const BinaryDecomposition& d, std::size_t n_total, std::size_t reps,
                           std::uint64_t seed, double alpha = 0.05);
    static Scenario continuous(EffectVector source, double noise_sd, std::size_t n_total,
                               std::size_t reps, std::uint64_t seed, double alpha = 0.05);

    double true_ate() const;
    void validate() const;
};

// Outcome noise sd that gives a difference in means the standard error se
// with n_total units split evenly.
double noise_for_standard_error(double se, std::size_t n_total);

enum class ResponseClass { always_survive, never_survive, saved, harmed };

struct SimUnit {
    std::optional<ResponseClass> response;  // binary scenarios only
    double tau = 0.0;
    double y0 = 0.0;
    double y1 = 0.0;
    bool treated = false;
};

// The units of one replication, drawn from the (seed, rep_index) stream.
std::vector<SimUnit> simulate_units(const Scenario& s, std::size_t rep_index);

struct TrialResult {
    double estimate = 0.0;
    double se = 0.0;
    bool significant = false;
};

TrialResult run_trial(const Scenario& s, std::size_t rep_index);

struct SimSummary {
    double empirical_power = 0.0;
    double mean_estimate = 0.0;
    // Absent when no replication was significant.
    std::optional<double> mean_significant_estimate;
    std::optional<double> mean_significant_abs_estimate;
    // Absent when nothing is significant or the true effect is zero.
    std::optional<double> sign_error_rate_among_significant;
    std::size_t reps_used = 0;
    std::size_t significant_reps = 0;
    double mc_standard_error = 0.0;
    double true_ate = 0.0;

    bool any_significant() const { return significant_reps > 0; }
};

// Runs every replication and reduces in replication order, so the result
// does not depend on the number of workers.
SimSummary summarize(const Scenario& s, unsigned workers = 1);

}  // namespace cquartet
