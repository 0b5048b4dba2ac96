#include "cquartet/patterns.hpp"

#include "cquartet/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace cquartet {

namespace {

struct KindInfo {
    PatternKind kind;
    char letter;
    std::string_view name;
};

constexpr std::array<KindInfo, 8> kKinds{{
    {PatternKind::constant, 'a', "constant"},
    {PatternKind::low_variation, 'b', "low_variation"},
    {PatternKind::high_variation, 'c', "high_variation"},
    {PatternKind::occasional_large, 'd', "occasional_large"},
    {PatternKind::linear, 'e', "linear"},
    {PatternKind::threshold, 'f', "threshold"},
    {PatternKind::plateau, 'g', "plateau"},
    {PatternKind::sweet_spot, 'h', "sweet_spot"},
}};

const KindInfo& info(PatternKind kind)
{
    return kKinds[static_cast<std::size_t>(kind)];
}

constexpr int kHighVariationAttempts = 16;

double mean_of(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

void require_finite(std::span<const double> x)
{
    for (double v : x)
        if (!std::isfinite(v))
            throw std::invalid_argument("predictor values must be finite");
}

EffectVector assemble(std::span<const double> x, std::vector<double> tau, double ate,
                      PatternKind kind, std::optional<double> scale = std::nullopt)
{
    EffectVector v;
    v.units.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        v.units.push_back({x[i], tau[i]});
    v.ate = ate;
    v.pattern = kind;
    v.scale = scale;
    return v;
}

// b: uniform draws, shifted onto the target mean, clipped back into bounds
// and repaired by moving the clipped mass onto units with slack.
std::vector<double> low_variation(const PatternSpec& spec, std::size_t n, double ate)
{
    if (!(spec.spread >= 0.0 && spec.spread <= 1.0))
        throw std::invalid_argument("low_variation spread must lie in [0, 1]");
    if (ate == 0.0 && spec.spread > 0.0)
        throw std::invalid_argument(
            "low_variation bounds collapse at ate = 0; use spread 0 or a nonzero ate");

    const double a = std::fabs(ate);
    const double lo = a * (1.0 - spec.spread);
    const double hi = a * (1.0 + spec.spread);

    Rng rng(spec.seed, streams::low_variation);
    std::vector<double> u(n);
    for (auto& v : u)
        v = lo + (hi - lo) * rng.uniform();

    const double shift = a - mean_of(u);
    for (auto& v : u)
        v = std::clamp(v + shift, lo, hi);

    const double deficit = a * static_cast<double>(n) - std::accumulate(u.begin(), u.end(), 0.0);
    if (deficit != 0.0) {
        std::vector<double> slack(n);
        for (std::size_t i = 0; i < n; ++i)
            slack[i] = deficit > 0.0 ? hi - u[i] : u[i] - lo;
        const double total = std::accumulate(slack.begin(), slack.end(), 0.0);
        if (total > 0.0)
            for (std::size_t i = 0; i < n; ++i)
                u[i] = std::clamp(u[i] + deficit * slack[i] / total, lo, hi);
    }

    const double s = sign_of(ate);
    for (auto& v : u)
        v *= s;
    return u;
}

std::vector<double> high_variation(const PatternSpec& spec, std::size_t n, double ate)
{
    const double sd = spec.sd.value_or(spec.sd_factor * std::fabs(ate));
    if (!(sd > 0.0) || !std::isfinite(sd))
        throw std::invalid_argument("high_variation needs a positive spread");

    for (int attempt = 0; attempt < kHighVariationAttempts; ++attempt) {
        Rng rng(spec.seed, streams::high_variation, static_cast<std::uint64_t>(attempt));
        std::vector<double> z(n);
        for (auto& v : z)
            v = ate + sd * rng.normal();
        const double shift = ate - mean_of(z);
        for (auto& v : z)
            v += shift;
        const auto [mn, mx] = std::minmax_element(z.begin(), z.end());
        if (*mn < 0.0 && *mx > 0.0)
            return z;
    }
    throw std::runtime_error("high_variation: no sign change after " +
                             std::to_string(kHighVariationAttempts) + " attempts");
}

std::vector<double> occasional_large(const PatternSpec& spec, std::size_t n, double ate,
                                     double& level)
{
    if (!(spec.p_nonzero > 0.0 && spec.p_nonzero <= 1.0))
        throw std::invalid_argument("occasional_large p_nonzero must lie in (0, 1]");
    if (!(spec.jitter >= 0.0))
        throw std::invalid_argument("occasional_large jitter must be non-negative");
    const auto k = static_cast<std::size_t>(std::floor(spec.p_nonzero * static_cast<double>(n) + 0.5));
    if (k < 1)
        throw std::invalid_argument("occasional_large: round(p_nonzero * n) must be at least 1");

    // Partial Fisher-Yates: the first k entries of order are the nonzero units.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng placement(spec.seed, streams::occasional_placement);
    for (std::size_t i = 0; i < k; ++i)
        std::swap(order[i], order[i + placement.index(n - i)]);

    level = ate * static_cast<double>(n) / static_cast<double>(k);
    std::vector<double> values(k, level);
    if (spec.jitter > 0.0 && k > 1) {
        Rng noise(spec.seed, streams::occasional_jitter);
        for (auto& v : values)
            v = level * (1.0 + spec.jitter * noise.normal());
        const double shift = level - mean_of(values);
        for (auto& v : values)
            v += shift;
    }

    std::vector<double> tau(n, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        tau[order[i]] = values[i];
    return tau;
}

struct GridRange {
    double lo;
    double hi;
    double span() const { return hi - lo; }
};

GridRange check_grid(std::span<const double> x)
{
    if (x.size() < 3)
        throw std::invalid_argument("interaction patterns need at least 3 grid points");
    require_finite(x);
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    if (!(*mx > *mn))
        throw std::invalid_argument("predictor grid is degenerate (max == min)");
    return {*mn, *mx};
}

double checked_threshold(double x0, const GridRange& r)
{
    if (!std::isfinite(x0))
        throw std::invalid_argument("threshold must be finite");
    if (x0 >= r.hi)
        throw std::invalid_argument("threshold at or beyond max(x): no units left to carry the mean");
    if (x0 <= r.lo)
        throw std::invalid_argument("threshold must lie strictly inside the x range");
    return x0;
}

// g: find slope k >= 0 with sum_i min(cap, k d_i) = target, d_i = max(0, x_i - x0).
// The sum is piecewise linear in k, so walk the breakpoints (largest d first)
// and solve the active segment exactly.
double solve_plateau_slope(std::span<const double> d, double cap, double target)
{
    std::vector<double> pos;
    for (double v : d)
        if (v > 0.0)
            pos.push_back(v);
    std::sort(pos.begin(), pos.end(), std::greater<>());
    const std::size_t m = pos.size();

    // suffix[j] = sum of pos[j..m)
    std::vector<double> suffix(m + 1, 0.0);
    for (std::size_t j = m; j-- > 0;)
        suffix[j] = suffix[j + 1] + pos[j];

    for (std::size_t j = 0; j <= m; ++j) {
        const double capped = static_cast<double>(j) * cap;
        if (j == m) {
            if (capped >= target)
                return cap / pos[m - 1];
            break;
        }
        const double k = (target - capped) / suffix[j];
        if (k < 0.0)
            break;
        const bool lower_ok = j == 0 || k * pos[j - 1] >= cap;
        const bool upper_ok = k * pos[j] <= cap;
        if (lower_ok && upper_ok)
            return k;
    }
    throw std::runtime_error("plateau: slope solve did not converge");
}

}  // namespace

char pattern_letter(PatternKind kind) { return info(kind).letter; }

std::string_view pattern_name(PatternKind kind) { return info(kind).name; }

PatternKind parse_pattern(std::string_view text)
{
    for (const auto& k : kKinds) {
        if (text.size() == 1 && text[0] == k.letter)
            return k.kind;
        if (text == k.name)
            return k.kind;
    }
    throw std::invalid_argument("unknown pattern '" + std::string(text) + "'");
}

bool is_latent(PatternKind kind)
{
    return kind == PatternKind::constant || kind == PatternKind::low_variation ||
           kind == PatternKind::high_variation || kind == PatternKind::occasional_large;
}

std::vector<double> EffectVector::xs() const
{
    std::vector<double> out;
    out.reserve(units.size());
    for (const auto& u : units)
        out.push_back(u.x);
    return out;
}

std::vector<double> EffectVector::taus() const
{
    std::vector<double> out;
    out.reserve(units.size());
    for (const auto& u : units)
        out.push_back(u.tau);
    return out;
}

double mean_effect(const EffectVector& v)
{
    if (v.units.empty())
        throw std::invalid_argument("mean_effect of an empty vector");
    double s = 0.0;
    for (const auto& u : v.units)
        s += u.tau;
    return s / static_cast<double>(v.units.size());
}

double mean_tolerance(const PatternSpec& spec)
{
    switch (spec.kind) {
    case PatternKind::low_variation:
    case PatternKind::high_variation:
        return 1e-9;
    case PatternKind::occasional_large:
        return spec.jitter > 0.0 ? 1e-9 : 1e-12;
    default:
        return 1e-12;
    }
}

std::vector<double> index_grid(std::size_t n)
{
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = static_cast<double>(i + 1);
    return x;
}

std::vector<double> even_grid(std::size_t n, double lo, double hi)
{
    if (n < 2)
        throw std::invalid_argument("even_grid needs at least 2 points");
    std::vector<double> x(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = lo + step * static_cast<double>(i);
    x.back() = hi;
    return x;
}

EffectVector generate_latent(const PatternSpec& spec, std::size_t n, double ate)
{
    const auto x = index_grid(n);
    return generate_latent(spec, x, ate);
}

EffectVector generate_latent(const PatternSpec& spec, std::span<const double> x, double ate)
{
    if (!is_latent(spec.kind))
        throw std::invalid_argument("generate_latent expects one of the kinds a-d");
    const std::size_t n = x.size();
    if (n < 2)
        throw std::invalid_argument("latent patterns need at least 2 units");
    if (!std::isfinite(ate))
        throw std::invalid_argument("ate must be finite");
    require_finite(x);

    switch (spec.kind) {
    case PatternKind::constant:
        return assemble(x, std::vector<double>(n, ate), ate, spec.kind, ate);
    case PatternKind::low_variation:
        return assemble(x, low_variation(spec, n, ate), ate, spec.kind);
    case PatternKind::high_variation:
        return assemble(x, high_variation(spec, n, ate), ate, spec.kind);
    case PatternKind::occasional_large: {
        double level = 0.0;
        auto tau = occasional_large(spec, n, ate, level);
        return assemble(x, std::move(tau), ate, spec.kind, level);
    }
    default:
        break;
    }
    throw std::logic_error("unreachable pattern kind");
}

EffectVector generate_interaction(const PatternSpec& spec, std::span<const double> x, double ate)
{
    if (is_latent(spec.kind))
        throw std::invalid_argument("generate_interaction expects one of the kinds e-h");
    if (!std::isfinite(ate))
        throw std::invalid_argument("ate must be finite");
    const GridRange range = check_grid(x);
    const std::size_t n = x.size();
    const double total = ate * static_cast<double>(n);
    std::vector<double> tau(n, 0.0);

    switch (spec.kind) {
    case PatternKind::linear: {
        const double slope = spec.slope.value_or(2.0 * ate / range.span());
        if (!std::isfinite(slope))
            throw std::invalid_argument("slope must be finite");
        const double xbar = mean_of(x);
        for (std::size_t i = 0; i < n; ++i)
            tau[i] = ate + slope * (x[i] - xbar);
        return assemble(x, std::move(tau), ate, spec.kind, slope);
    }
    case PatternKind::threshold: {
        const double x0 = checked_threshold(spec.threshold.value_or(0.5 * (range.lo + range.hi)), range);
        double support = 0.0;
        for (double xi : x)
            support += std::max(0.0, xi - x0);
        const double slope = total / support;
        for (std::size_t i = 0; i < n; ++i)
            tau[i] = x[i] > x0 ? slope * (x[i] - x0) : 0.0;
        return assemble(x, std::move(tau), ate, spec.kind, slope);
    }
    case PatternKind::plateau: {
        const double x0 = checked_threshold(spec.threshold.value_or(range.lo + 0.3 * range.span()), range);
        const double a = std::fabs(ate);
        if (a == 0.0)
            return assemble(x, std::move(tau), ate, spec.kind, 0.0);
        const double cap = spec.cap.value_or(1.8 * a);
        if (!(cap > 0.0) || !std::isfinite(cap))
            throw std::invalid_argument("plateau cap must be positive");
        if (cap < a)
            throw std::invalid_argument("plateau cap below |ate|: mean unreachable");
        std::vector<double> d(n);
        std::size_t above = 0;
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = std::max(0.0, x[i] - x0);
            if (d[i] > 0.0)
                ++above;
        }
        if (cap * static_cast<double>(above) < a * static_cast<double>(n))
            throw std::invalid_argument("plateau: cap times the share of units past the threshold "
                                        "is below |ate|; mean unreachable");
        const double k = solve_plateau_slope(d, cap, a * static_cast<double>(n));
        const double s = sign_of(ate);
        bool reached = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double raw = k * d[i];
            if (raw >= cap)
                reached = true;
            tau[i] = d[i] > 0.0 ? s * std::min(cap, raw) : 0.0;
        }
        if (!reached)
            throw std::invalid_argument("plateau: cap exceeds every effect on this grid; lower the cap");
        EffectVector v = assemble(x, std::move(tau), ate, spec.kind, s * k);
        if (std::fabs(mean_effect(v) - ate) > 1e-12)
            throw std::runtime_error("plateau: slope solve did not converge");
        return v;
    }
    case PatternKind::sweet_spot: {
        std::vector<double> sorted(x.begin(), x.end());
        std::sort(sorted.begin(), sorted.end());
        const double c = spec.center.value_or(sorted[(n - 1) / 2]);
        const double w = spec.width.value_or(range.span() / 6.0);
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("sweet_spot width must be positive");
        if (!(c >= range.lo && c <= range.hi))
            throw std::invalid_argument("sweet_spot centre must lie inside the x range");
        double mass = 0.0;
        std::vector<double> bump(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double z = (x[i] - c) / w;
            bump[i] = std::exp(-0.5 * z * z);
            mass += bump[i];
        }
        const double height = total / mass;
        for (std::size_t i = 0; i < n; ++i)
            tau[i] = height * bump[i];
        return assemble(x, std::move(tau), ate, spec.kind, height);
    }
    default:
        break;
    }
    throw std::logic_error("unreachable pattern kind");
}

EffectVector generate(const PatternSpec& spec, std::span<const double> x, double ate)
{
    return is_latent(spec.kind) ? generate_latent(spec, x, ate) : generate_interaction(spec, x, ate);
}

}  // namespace cquartet
