#include "cquartet/observables.hpp"

#include "cquartet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cquartet {

ControlModel ControlModel::constant(double level)
{
    ControlModel cm;
    cm.kind = ControlKind::constant;
    cm.level = level;
    cm.slope = 0.0;
    return cm;
}

ControlModel ControlModel::linear(double level, double slope)
{
    ControlModel cm;
    cm.kind = ControlKind::linear_in_x;
    cm.level = level;
    cm.slope = slope;
    return cm;
}

ControlModel ControlModel::from_table(std::vector<double> y0)
{
    ControlModel cm;
    cm.kind = ControlKind::table;
    cm.table = std::move(y0);
    return cm;
}

ControlModel default_control(const EffectVector& v)
{
    if (v.units.empty())
        return ControlModel::linear(0.0, 1.0);
    const auto [mn, mx] = std::minmax_element(v.units.begin(), v.units.end(),
                                              [](const EffectUnit& a, const EffectUnit& b) { return a.x < b.x; });
    const double span = mx->x - mn->x;
    if (!(span > 0.0))
        return ControlModel::constant(0.0);
    return ControlModel::linear(-mn->x / span, 1.0 / span);
}

ObservableSet synthesize(const EffectVector& v, const ControlModel& cm)
{
    const std::size_t n = v.size();
    if (cm.kind == ControlKind::table && cm.table.size() != n)
        throw std::invalid_argument("control table has " + std::to_string(cm.table.size()) +
                                    " values for " + std::to_string(n) + " units");
    if (!(cm.noise_sd >= 0.0) || !std::isfinite(cm.noise_sd))
        throw std::invalid_argument("control noise sd must be finite and non-negative");

    Rng noise(cm.seed, streams::control_noise);
    ObservableSet o;
    o.source_ate = v.ate;
    o.units.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = v.units[i];
        double y0 = 0.0;
        switch (cm.kind) {
        case ControlKind::constant:
            y0 = cm.level;
            break;
        case ControlKind::linear_in_x:
            y0 = cm.level + cm.slope * u.x;
            break;
        case ControlKind::table:
            y0 = cm.table[i];
            break;
        }
        if (cm.noise_sd > 0.0)
            y0 += cm.noise_sd * noise.normal();
        o.units.push_back({u.x, y0, y0 + u.tau});
    }
    return o;
}

std::vector<double> recover_effects(const ObservableSet& o)
{
    std::vector<double> tau;
    tau.reserve(o.size());
    for (const auto& u : o.units)
        tau.push_back(u.y1 - u.y0);
    return tau;
}

double mean_difference(const ObservableSet& o)
{
    if (o.units.empty())
        throw std::invalid_argument("mean_difference of an empty set");
    double s0 = 0.0, s1 = 0.0;
    for (const auto& u : o.units) {
        s0 += u.y0;
        s1 += u.y1;
    }
    const auto n = static_cast<double>(o.size());
    return s1 / n - s0 / n;
}

DisplaySeries assign_display(const ObservableSet& o)
{
    if (o.units.empty())
        throw std::invalid_argument("assign_display of an empty set");
    DisplaySeries d;
    d.treated.label = "treated";
    d.treated.marker = Marker::cross;
    d.control.label = "control";
    d.control.marker = Marker::circle;
    for (const auto& u : o.units) {
        d.treated.points.push_back({u.x, u.y1});
        d.control.points.push_back({u.x, u.y0});
    }
    return d;
}

}  // namespace cquartet
