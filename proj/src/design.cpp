#include "cquartet/design.hpp"

#include "cquartet/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace cquartet {

namespace {

void check_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1)");
}

void check_power(double power)
{
    if (!(power > 0.0 && power < 1.0))
        throw std::invalid_argument("target power must lie in (0, 1)");
}

void check_fraction(double f, const char* what)
{
    // Tolerate last-bit rounding from the arithmetic that produced f.
    if (!(f >= -1e-15 && f <= 1.0 + 1e-15))
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

Proportion Proportion::of(double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("proportion must lie in [0, 1]");
    return Proportion(p, false);
}

void DesignSpec::validate() const
{
    check_alpha(alpha);
    check_power(target_power);
    if (!std::isfinite(effect))
        throw std::invalid_argument("effect must be finite");
}

double se_diff_proportions(std::size_t n1, std::size_t n2, Proportion p1, Proportion p2)
{
    if (n1 < 1 || n2 < 1)
        throw std::invalid_argument("arm sizes must be at least 1");
    const double a = p1.value();
    const double b = p2.value();
    return std::sqrt(a * (1.0 - a) / static_cast<double>(n1) + b * (1.0 - b) / static_cast<double>(n2));
}

double power_normal(double effect, double se, double alpha)
{
    if (!(se > 0.0))
        throw std::invalid_argument("standard error must be positive");
    check_alpha(alpha);
    const double z_crit = normal_quantile(1.0 - alpha / 2.0);
    return normal_cdf(std::fabs(effect) / se - z_crit);
}

double required_n_continuous(double effect, double alpha, double target_power)
{
    if (effect == 0.0 || !std::isfinite(effect))
        throw std::invalid_argument("required sample size needs a finite nonzero effect");
    check_alpha(alpha);
    check_power(target_power);
    const double z = normal_quantile(1.0 - alpha / 2.0) + normal_quantile(target_power);
    const double root = z / std::fabs(effect);
    return root * root;
}

std::size_t required_n_total(double effect, double alpha, double target_power)
{
    const double continuous = required_n_continuous(effect, alpha, target_power);
    auto n = static_cast<std::size_t>(std::ceil(continuous));
    if (n % 2 != 0)
        ++n;
    return std::max<std::size_t>(n, 2);
}

std::size_t required_n_total(const DesignSpec& spec)
{
    spec.validate();
    return required_n_total(spec.effect, spec.alpha, spec.target_power);
}

double interaction_n_factor(double relative_size)
{
    if (!(relative_size > 0.0) || !std::isfinite(relative_size))
        throw std::invalid_argument("relative interaction size must be positive");
    const double r = 2.0 / relative_size;
    return r * r;
}

BinaryDecomposition decompose_binary(double p_control, double ate, double harmed)
{
    check_fraction(p_control, "p_control");
    check_fraction(harmed, "harmed");
    BinaryDecomposition d;
    d.harmed = harmed;
    d.saved = ate + harmed;
    d.always_survive = p_control - harmed;
    d.never_survive = 1.0 - p_control - d.saved;
    check_fraction(d.saved, "saved share");
    check_fraction(d.always_survive, "always-survive share");
    check_fraction(d.never_survive, "never-survive share");
    return d;
}

double dilute_effect(double fraction_affected, double effect_when_affected)
{
    if (!(fraction_affected >= 0.0 && fraction_affected <= 1.0))
        throw std::invalid_argument("fraction affected must lie in [0, 1]");
    return fraction_affected * effect_when_affected;
}

double poststratify(std::span<const Stratum> strata)
{
    if (strata.empty())
        throw std::invalid_argument("poststratify needs at least one stratum");
    double total_weight = 0.0;
    double acc = 0.0;
    for (const auto& s : strata) {
        if (!(s.weight >= 0.0))
            throw std::invalid_argument("stratum '" + s.label + "' has a negative weight");
        total_weight += s.weight;
        acc += s.weight * s.effect;
    }
    if (std::fabs(total_weight - 1.0) > 1e-12)
        throw std::invalid_argument("stratum weights must sum to 1");
    return acc;
}

}  // namespace cquartet
