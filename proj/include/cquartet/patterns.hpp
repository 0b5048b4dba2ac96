#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cquartet {

// The eight canonical effect patterns. The first four (a-d) vary
// unpredictably across units; the last four (e-h) vary with a predictor x.
enum class PatternKind {
    constant,          // a
    low_variation,     // b
    high_variation,    // c
    occasional_large,  // d
    linear,            // e
    threshold,         // f
    plateau,           // g
    sweet_spot,        // h
};

char pattern_letter(PatternKind kind);
std::string_view pattern_name(PatternKind kind);
// Accepts a letter ("a".."h") or a name ("plateau", "sweet_spot", ...).
PatternKind parse_pattern(std::string_view text);
bool is_latent(PatternKind kind);

struct EffectUnit {
    double x = 0.0;
    double tau = 0.0;
};

// Ordered units with their latent effects and the average they were built to.
struct EffectVector {
    std::vector<EffectUnit> units;
    double ate = 0.0;
    std::optional<PatternKind> pattern;
    // Solved scale of the pattern: slope for e/f/g, bump height for h,
    // nonzero level for d.
    std::optional<double> scale;

    std::size_t size() const { return units.size(); }
    std::vector<double> xs() const;
    std::vector<double> taus() const;
};

double mean_effect(const EffectVector& v);

// Shape parameters. Unset optionals take data-dependent defaults.
struct PatternSpec {
    PatternKind kind = PatternKind::constant;
    std::uint64_t seed = 0;

    // b: effects drawn on ate * [1 - spread, 1 + spread]; 1 spans [0, 2 ate].
    double spread = 1.0;
    // c: normal sd as a multiple of |ate|, overridden by an absolute sd.
    double sd_factor = 2.5;
    std::optional<double> sd;
    // d: share of units with a nonzero effect; jitter is the relative sd of
    // mean-preserving noise on those units (0 disables it).
    double p_nonzero = 0.1;
    double jitter = 0.0;
    // e: slope of the effect in x. Default spans 2 ate across the x range.
    std::optional<double> slope;
    // f, g: x at which the effect starts. Defaults: grid midpoint for f,
    // min + 0.3 range for g.
    std::optional<double> threshold;
    // g: magnitude of the plateau, > 0. Default 1.8 |ate|.
    std::optional<double> cap;
    // h: bump centre and width. Defaults: median grid point, range / 6.
    std::optional<double> center;
    std::optional<double> width;
};

// Tolerance on |mean(tau) - ate| that a generated vector honours.
double mean_tolerance(const PatternSpec& spec);

// x = 1, 2, ..., n.
std::vector<double> index_grid(std::size_t n);
// n evenly spaced points on [lo, hi], endpoints included.
std::vector<double> even_grid(std::size_t n, double lo, double hi);

// Patterns a-d over the index grid 1..n, or over caller-supplied x values.
EffectVector generate_latent(const PatternSpec& spec, std::size_t n, double ate);
EffectVector generate_latent(const PatternSpec& spec, std::span<const double> x, double ate);

// Patterns e-h over the given predictor grid.
EffectVector generate_interaction(const PatternSpec& spec, std::span<const double> x, double ate);

// Any of the eight kinds over the given x values.
EffectVector generate(const PatternSpec& spec, std::span<const double> x, double ate);

}  // namespace cquartet
