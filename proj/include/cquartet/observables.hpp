#pragma once

#include "cquartet/patterns.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cquartet {

struct ObservableUnit {
    double x = 0.0;
    double y0 = 0.0;  // outcome under control
    double y1 = 0.0;  // outcome under treatment
};

// Control and treated outcomes for the same units. y1 is computed as
// y0 + tau for each unit.
struct ObservableSet {
    std::vector<ObservableUnit> units;
    double source_ate = 0.0;

    std::size_t size() const { return units.size(); }
};

enum class ControlKind { constant, linear_in_x, table };

struct ControlModel {
    ControlKind kind = ControlKind::linear_in_x;
    double level = 0.0;
    double slope = 1.0;
    std::vector<double> table;  // explicit y0 per unit (ControlKind::table)
    double noise_sd = 0.0;      // added to y0 and carried into y1
    std::uint64_t seed = 0;

    static ControlModel constant(double level);
    static ControlModel linear(double level, double slope);
    static ControlModel from_table(std::vector<double> y0);
};

// Linear in x, rising from 0 to 1 across the x range of v.
ControlModel default_control(const EffectVector& v);

ObservableSet synthesize(const EffectVector& v, const ControlModel& cm);

// y1 - y0 per unit.
std::vector<double> recover_effects(const ObservableSet& o);

double mean_difference(const ObservableSet& o);

enum class Marker { circle, cross };

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
};

struct PlotSeries {
    std::string label;
    Marker marker = Marker::circle;
    std::vector<PlotPoint> points;
};

struct DisplaySeries {
    PlotSeries treated;  // crosses
    PlotSeries control;  // circles
};

DisplaySeries assign_display(const ObservableSet& o);

}  // namespace cquartet
