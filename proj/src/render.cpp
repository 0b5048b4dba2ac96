#include "cquartet/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cquartet {

namespace {

constexpr double kMarkerRadius = 3.0;
constexpr double kCrossHalf = 3.5;
constexpr int kTicks = 5;

std::string xml_escape(const std::string& s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c; break;
        }
    }
    return out;
}

std::string tick_label(double v)
{
    if (std::fabs(v) < 1e-12)
        v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

struct Extent {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v)
    {
        if (!std::isfinite(v))
            throw std::invalid_argument("render_quartet: non-finite coordinate");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    // 10% padding each side; a flat extent gets a band around its value.
    void pad()
    {
        const double span = hi - lo;
        const double p = span > 0.0 ? 0.1 * span : (hi != 0.0 ? 0.1 * std::fabs(hi) : 1.0);
        lo -= p;
        hi += p;
    }
};

void add_panel_extent(const PanelData& data, Extent& xe, Extent& ye)
{
    if (const auto* v = std::get_if<EffectVector>(&data)) {
        if (v->units.empty())
            throw std::invalid_argument("render_quartet: empty panel");
        for (const auto& u : v->units) {
            xe.add(u.x);
            ye.add(u.tau);
        }
    } else {
        const auto& o = std::get<ObservableSet>(data);
        if (o.units.empty())
            throw std::invalid_argument("render_quartet: empty panel");
        for (const auto& u : o.units) {
            xe.add(u.x);
            ye.add(u.y0);
            ye.add(u.y1);
        }
    }
}

void emit_axes(std::ostringstream& svg, const QuartetGeometry& g, std::size_t p)
{
    const auto& f = g.frames[p];
    svg << "    <rect class=\"frame\" x=\"" << svg_number(f.x) << "\" y=\"" << svg_number(f.y)
        << "\" width=\"" << svg_number(f.w) << "\" height=\"" << svg_number(f.h)
        << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

    svg << "    <g class=\"ticks\" font-family=\"sans-serif\" font-size=\"9\" fill=\"#444444\">\n";
    for (int i = 0; i < kTicks; ++i) {
        const double t = static_cast<double>(i) / (kTicks - 1);
        const double yv = g.y_lo + t * (g.y_hi - g.y_lo);
        const double xv = g.x_lo + t * (g.x_hi - g.x_lo);
        const double py = g.map_y(p, yv);
        const double px = g.map_x(p, xv);
        svg << "      <text x=\"" << svg_number(f.x - 4.0) << "\" y=\"" << svg_number(py + 3.0)
            << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
        svg << "      <text x=\"" << svg_number(px) << "\" y=\"" << svg_number(f.y + f.h + 12.0)
            << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    }
    svg << "    </g>\n";
}

void emit_latent(std::ostringstream& svg, const QuartetGeometry& g, std::size_t p,
                 const EffectVector& v, double ate)
{
    const auto& f = g.frames[p];
    const std::string ref_y = svg_number(g.map_y(p, ate));
    svg << "    <line class=\"ate-ref\" x1=\"" << svg_number(f.x) << "\" y1=\"" << ref_y << "\" x2=\""
        << svg_number(f.x + f.w) << "\" y2=\"" << ref_y
        << "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"4,3\"/>\n";
    for (const auto& u : v.units)
        svg << "    <circle class=\"marker effect\" cx=\"" << svg_number(g.map_x(p, u.x)) << "\" cy=\""
            << svg_number(g.map_y(p, u.tau)) << "\" r=\"" << svg_number(kMarkerRadius)
            << "\" fill=\"#1f4e79\"/>\n";
}

void emit_observable(std::ostringstream& svg, const QuartetGeometry& g, std::size_t p,
                     const ObservableSet& o)
{
    const DisplaySeries d = assign_display(o);
    for (const auto& pt : d.control.points)
        svg << "    <circle class=\"marker control\" cx=\"" << svg_number(g.map_x(p, pt.x))
            << "\" cy=\"" << svg_number(g.map_y(p, pt.y)) << "\" r=\"" << svg_number(kMarkerRadius)
            << "\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1\"/>\n";
    for (const auto& pt : d.treated.points) {
        const double cx = g.map_x(p, pt.x);
        const double cy = g.map_y(p, pt.y);
        svg << "    <path class=\"marker treated\" d=\"M" << svg_number(cx - kCrossHalf) << ' '
            << svg_number(cy - kCrossHalf) << " L" << svg_number(cx + kCrossHalf) << ' '
            << svg_number(cy + kCrossHalf) << " M" << svg_number(cx - kCrossHalf) << ' '
            << svg_number(cy + kCrossHalf) << " L" << svg_number(cx + kCrossHalf) << ' '
            << svg_number(cy - kCrossHalf) << "\" stroke=\"#b22222\" stroke-width=\"1.2\"/>\n";
    }
}

}  // namespace

std::string svg_number(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", kSvgDecimals, v);
    // "-0.00" and "0.00" should not differ between runs that land on
    // opposite sides of zero by rounding.
    if (std::string_view(buf) == "-0.00")
        return "0.00";
    return buf;
}

double QuartetGeometry::map_x(std::size_t panel, double x) const
{
    const auto& f = frames[panel];
    return f.x + (x - x_lo) / (x_hi - x_lo) * f.w;
}

double QuartetGeometry::map_y(std::size_t panel, double y) const
{
    const auto& f = frames[panel];
    return f.y + (1.0 - (y - y_lo) / (y_hi - y_lo)) * f.h;
}

QuartetGeometry quartet_geometry(const QuartetLayout& q)
{
    if (!(q.width > 0.0 && q.height > 0.0) || !std::isfinite(q.width) || !std::isfinite(q.height))
        throw std::invalid_argument("render_quartet: canvas dimensions must be positive");
    Extent xe, ye;
    bool any_latent = false;
    for (const auto& panel : q.panels) {
        add_panel_extent(panel.data, xe, ye);
        any_latent = any_latent || std::holds_alternative<EffectVector>(panel.data);
    }
    if (any_latent)
        ye.add(q.ate);
    xe.pad();
    ye.pad();

    QuartetGeometry g;
    g.x_lo = xe.lo;
    g.x_hi = xe.hi;
    g.y_lo = ye.lo;
    g.y_hi = ye.hi;

    const double title_band = q.title.empty() ? 0.0 : 18.0;
    const double cell_w = (q.width - 2.0 * q.outer_margin) / 2.0;
    const double cell_h = (q.height - 2.0 * q.outer_margin - title_band) / 2.0;
    for (std::size_t p = 0; p < 4; ++p) {
        const double cx = q.outer_margin + static_cast<double>(p % 2) * cell_w;
        const double cy = q.outer_margin + title_band + static_cast<double>(p / 2) * cell_h;
        g.frames[p] = {cx + q.margin_left, cy + q.margin_top, cell_w - q.margin_left - q.margin_right,
                       cell_h - q.margin_top - q.margin_bottom};
        if (!(g.frames[p].w > 0.0 && g.frames[p].h > 0.0))
            throw std::invalid_argument("render_quartet: margins leave no room for the plot area");
    }
    return g;
}

std::string render_quartet(const QuartetLayout& q)
{
    if (!std::isfinite(q.ate))
        throw std::invalid_argument("render_quartet: non-finite ate");
    const QuartetGeometry g = quartet_geometry(q);

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << svg_number(q.width)
        << "\" height=\"" << svg_number(q.height) << "\" viewBox=\"0 0 " << svg_number(q.width) << ' '
        << svg_number(q.height) << "\">\n";
    if (!q.title.empty())
        svg << "  <title>" << xml_escape(q.title) << "</title>\n";
    if (!q.description.empty())
        svg << "  <desc>" << xml_escape(q.description) << "</desc>\n";
    svg << "  <rect x=\"0\" y=\"0\" width=\"" << svg_number(q.width) << "\" height=\""
        << svg_number(q.height) << "\" fill=\"#ffffff\"/>\n";
    if (!q.title.empty())
        svg << "  <text class=\"title\" x=\"" << svg_number(q.width / 2.0) << "\" y=\""
            << svg_number(q.outer_margin + 12.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
            << xml_escape(q.title) << "</text>\n";

    for (std::size_t p = 0; p < 4; ++p) {
        const Panel& panel = q.panels[p];
        const auto& f = g.frames[p];
        svg << "  <g class=\"panel\" id=\"panel-" << xml_escape(panel.label) << "\">\n";
        emit_axes(svg, g, p);
        if (const auto* v = std::get_if<EffectVector>(&panel.data))
            emit_latent(svg, g, p, *v, q.ate);
        else
            emit_observable(svg, g, p, std::get<ObservableSet>(panel.data));
        std::string text = "(" + panel.label + ")";
        if (!panel.caption.empty())
            text += " " + panel.caption;
        svg << "    <text class=\"panel-label\" x=\"" << svg_number(f.x) << "\" y=\""
            << svg_number(f.y - 8.0) << "\" font-family=\"sans-serif\" font-size=\"11\">"
            << xml_escape(text) << "</text>\n";
        svg << "  </g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace cquartet
