#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace cquartet {

// A survival proportion, or the worst case p = 0.5 that maximises p(1 - p).
class Proportion {
public:
    static Proportion of(double p);
    static Proportion worst_case() { return Proportion(0.5, true); }

    double value() const { return value_; }
    bool is_worst_case() const { return worst_; }

private:
    Proportion(double v, bool worst) : value_(v), worst_(worst) {}
    double value_;
    bool worst_;
};

struct DesignSpec {
    double effect = 0.0;
    double alpha = 0.05;
    double target_power = 0.8;

    void validate() const;
};

// Standard error of a difference in proportions between arms of n1 and n2.
double se_diff_proportions(std::size_t n1, std::size_t n2, Proportion p1, Proportion p2);

// Probability the estimate clears the two-sided alpha boundary on the side
// of the effect: Phi(|effect| / se - z_{1 - alpha/2}). The far-tail
// rejection mass is ignored, so 2.8 standard errors give 80% power.
double power_normal(double effect, double se, double alpha);

// Continuous total sample size at which the worst-case SE 1/sqrt(n) gives
// target power: ((z_{1-alpha/2} + z_power) / |effect|)^2.
double required_n_continuous(double effect, double alpha, double target_power);

// Smallest even total n reaching target power with equal arms.
std::size_t required_n_total(double effect, double alpha, double target_power);
std::size_t required_n_total(const DesignSpec& spec);

// Sample-size multiplier for estimating an interaction of the given size
// relative to the main effect. The interaction contrast has twice the
// standard error, hence (2 / relative_size)^2.
double interaction_n_factor(double relative_size);

// Population split of a binary outcome into response types.
struct BinaryDecomposition {
    double always_survive = 0.0;
    double never_survive = 0.0;
    double saved = 0.0;   // survive only if treated
    double harmed = 0.0;  // survive only if untreated

    double control_survival() const { return always_survive + harmed; }
    double treated_survival() const { return always_survive + saved; }
    double ate() const { return saved - harmed; }
};

// Response types consistent with control survival p_control and average
// effect ate, given the harmed share. harmed = 0 is the monotone case.
BinaryDecomposition decompose_binary(double p_control, double ate, double harmed = 0.0);

// Average effect when only fraction_affected of units respond.
double dilute_effect(double fraction_affected, double effect_when_affected);

struct Stratum {
    std::string label;
    double weight = 0.0;
    double effect = 0.0;
};

// Population-weighted average effect. Weights must be non-negative and sum
// to 1 within 1e-12.
double poststratify(std::span<const Stratum> strata);

}  // namespace cquartet
