#pragma once

#include "cquartet/observables.hpp"
#include "cquartet/patterns.hpp"

#include <array>
#include <string>
#include <variant>

namespace cquartet {

using PanelData = std::variant<EffectVector, ObservableSet>;

struct Panel {
    std::string label;    // "a" .. "h"
    std::string caption;  // e.g. "constant effect"
    PanelData data;
};

// Four panels on a 2x2 grid sharing one x and one y scale.
struct QuartetLayout {
    std::array<Panel, 4> panels;
    double ate = 0.0;
    double width = 720.0;
    double height = 560.0;
    double outer_margin = 12.0;
    // Space inside each panel cell for axis labels and the panel label.
    double margin_left = 48.0;
    double margin_right = 10.0;
    double margin_top = 24.0;
    double margin_bottom = 30.0;
    std::string title;
    // Written to the document's <desc> element (e.g. run provenance).
    std::string description;
};

struct PanelFrame {
    double x = 0.0;  // plot area, pixels
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
};

// Shared data ranges (already padded) and the per-panel plot areas.
struct QuartetGeometry {
    double x_lo = 0.0, x_hi = 1.0;
    double y_lo = 0.0, y_hi = 1.0;
    std::array<PanelFrame, 4> frames;

    double map_x(std::size_t panel, double x) const;
    double map_y(std::size_t panel, double y) const;
};

QuartetGeometry quartet_geometry(const QuartetLayout& q);

// Numbers in the document are written with this many decimals.
inline constexpr int kSvgDecimals = 2;
std::string svg_number(double v);

// SVG 1.1 document. Latent panels draw one dot per unit and a dashed line
// at the ate; observable panels draw control outcomes as circles and
// treated outcomes as crosses. Throws std::invalid_argument on non-finite
// data.
std::string render_quartet(const QuartetLayout& q);

}  // namespace cquartet
