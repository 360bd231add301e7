// SVG snapshots of the chart bundle. Output depends only on the bundle
// contents: fixed canvas sizes, fixed number formatting, no timestamps.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "gazelab/error.hpp"
#include "gazelab/report.hpp"

namespace gazelab {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 50.0;

std::string f(double v) {
    if (std::abs(v) < 0.005) v = 0.0;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

class Svg {
public:
    Svg(double w, double h, std::string_view title) {
        out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + f(w) + "\" height=\"" + f(h) +
                "\" viewBox=\"0 0 " + f(w) + " " + f(h) + "\">\n";
        out_ += "<title>" + escape_xml(title) + "</title>\n";
        out_ += "<rect x=\"0\" y=\"0\" width=\"" + f(w) + "\" height=\"" + f(h) + "\" fill=\"#ffffff\"/>\n";
    }

    void raw(const std::string& s) { out_ += s; }

    void rect(std::string_view cls, double x, double y, double w, double h, std::string_view fill,
              double opacity = 1.0) {
        out_ += "<rect class=\"" + std::string(cls) + "\" x=\"" + f(x) + "\" y=\"" + f(y) + "\" width=\"" +
                f(std::max(w, 0.0)) + "\" height=\"" + f(std::max(h, 0.0)) + "\" fill=\"" + std::string(fill) + "\"";
        if (opacity != 1.0) out_ += " fill-opacity=\"" + f(opacity) + "\"";
        out_ += "/>\n";
    }

    void line(std::string_view cls, double x1, double y1, double x2, double y2, std::string_view stroke,
              bool dashed = false) {
        out_ += "<line class=\"" + std::string(cls) + "\" x1=\"" + f(x1) + "\" y1=\"" + f(y1) + "\" x2=\"" + f(x2) +
                "\" y2=\"" + f(y2) + "\" stroke=\"" + std::string(stroke) + "\"";
        if (dashed) out_ += " stroke-dasharray=\"6 4\"";
        out_ += "/>\n";
    }

    void circle(std::string_view cls, double cx, double cy, double r, std::string_view fill) {
        out_ += "<circle class=\"" + std::string(cls) + "\" cx=\"" + f(cx) + "\" cy=\"" + f(cy) + "\" r=\"" + f(r) +
                "\" fill=\"" + std::string(fill) + "\"/>\n";
    }

    void path(std::string_view cls, const std::string& d, std::string_view fill, std::string_view stroke = "none") {
        out_ += "<path class=\"" + std::string(cls) + "\" d=\"" + d + "\" fill=\"" + std::string(fill) +
                "\" stroke=\"" + std::string(stroke) + "\"/>\n";
    }

    void polyline(std::string_view cls, const std::vector<std::pair<double, double>>& pts, std::string_view stroke) {
        if (pts.empty()) return;
        out_ += "<polyline class=\"" + std::string(cls) + "\" fill=\"none\" stroke=\"" + std::string(stroke) +
                "\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) out_.push_back(' ');
            out_ += f(pts[i].first) + "," + f(pts[i].second);
        }
        out_ += "\"/>\n";
    }

    void text(double x, double y, std::string_view s, std::string_view anchor = "start", int size = 12) {
        out_ += "<text x=\"" + f(x) + "\" y=\"" + f(y) + "\" font-family=\"sans-serif\" font-size=\"" +
                std::to_string(size) + "\" text-anchor=\"" + std::string(anchor) + "\">" + escape_xml(s) + "</text>\n";
    }

    std::string finish() {
        out_ += "</svg>\n";
        return std::move(out_);
    }

private:
    std::string out_;
};

std::string_view color(ObjectType t) {
    switch (t) {
        case ObjectType::MushroomTarget: return "#2e9e44";
        case ObjectType::BlueFlower: return "#3b6fd8";
        case ObjectType::YellowPurpleFlower: return "#c7a21c";
        case ObjectType::Unknown: return "#888888";
    }
    return "#888888";
}

std::string_view color(ClickLabel l) {
    switch (l) {
        case ClickLabel::Correct: return "#e0b000";
        case ClickLabel::Incorrect: return "#d62728";
        case ClickLabel::Neutral: return "#7f7f7f";
    }
    return "#7f7f7f";
}

std::string star_path(double cx, double cy, double r) {
    std::string d;
    for (int i = 0; i < 10; ++i) {
        const double radius = i % 2 == 0 ? r : r * 0.45;
        const double ang = -std::numbers::pi / 2 + i * std::numbers::pi / 5;
        d += (i == 0 ? "M" : " L") + f(cx + radius * std::cos(ang)) + " " + f(cy + radius * std::sin(ang));
    }
    return d + " Z";
}

std::string cross_path(double cx, double cy, double r) {
    return "M" + f(cx - r) + " " + f(cy - r) + " L" + f(cx + r) + " " + f(cy + r) + " M" + f(cx - r) + " " +
           f(cy + r) + " L" + f(cx + r) + " " + f(cy - r);
}

void axes(Svg& svg, double x0, double y0, double w, double h, std::string_view xlabel, std::string_view ylabel) {
    svg.line("axis", x0, y0 + h, x0 + w, y0 + h, "#333333");
    svg.line("axis", x0, y0, x0, y0 + h, "#333333");
    svg.text(x0 + w / 2, y0 + h + 32, xlabel, "middle");
    svg.text(x0 - 36, y0 + h / 2, ylabel, "middle");
}

std::string render_timeline(const ChartBundle& b) {
    const auto& tl = b.timeline;
    Svg svg(kWidth, kHeight, "Level " + std::to_string(b.level) + " object and click timeline");
    const double x0 = kMargin + 40, y0 = kMargin, w = kWidth - x0 - kMargin, h = kHeight - 2 * kMargin;
    axes(svg, x0, y0, w, h, "time (ms)", "");
    const double span = std::max<double>(1.0, static_cast<double>(tl.end_ms));
    auto tx = [&](double t) { return x0 + w * std::clamp(t / span, 0.0, 1.0); };
    const ObjectType lanes[] = {ObjectType::MushroomTarget, ObjectType::BlueFlower, ObjectType::YellowPurpleFlower,
                                ObjectType::Unknown};
    const double lane_h = h / 5.0;
    for (int i = 0; i < 4; ++i) svg.text(x0 - 4, y0 + lane_h * (i + 0.6), to_string(lanes[i]), "end", 9);
    svg.text(x0 - 4, y0 + lane_h * 4.6, "clicks", "end", 9);

    for (const auto& bar : tl.bars) {
        const int lane = static_cast<int>(std::find(std::begin(lanes), std::end(lanes), bar.object_type) - std::begin(lanes));
        const double end = bar.disappear_ms ? static_cast<double>(*bar.disappear_ms) : span;
        svg.rect("bar", tx(static_cast<double>(bar.appear_ms)), y0 + lane_h * lane + lane_h * 0.2,
                 std::max(1.0, tx(end) - tx(static_cast<double>(bar.appear_ms))), lane_h * 0.6, color(bar.object_type));
    }
    for (const auto& c : tl.clicks) {
        const double x = tx(static_cast<double>(c.timestamp_ms));
        const double y = y0 + lane_h * 4.5;
        if (c.label == ClickLabel::Incorrect) {
            svg.path("click incorrect", cross_path(x, y, 6), "none", color(c.label));
        } else {
            svg.path(c.label == ClickLabel::Correct ? "click correct" : "click neutral", star_path(x, y, 7),
                     color(c.label));
        }
    }
    for (const auto& m : tl.matches) {
        svg.line("match", tx(static_cast<double>(m.appear_ms)), y0 + lane_h * 0.8, tx(static_cast<double>(m.click_ms)),
                 y0 + lane_h * 4.5, "#2e9e44", true);
        svg.text(tx(static_cast<double>(m.click_ms)), y0 + lane_h * 4.5 - 10, std::to_string(m.rt_ms) + " ms", "middle", 8);
    }
    return svg.finish();
}

std::string render_scanpath(const ChartBundle& b) {
    const auto& sp = b.scanpath;
    Svg svg(kWidth, kHeight, "Level " + std::to_string(b.level) + " eye movement pattern");
    const double x0 = kMargin, y0 = kMargin / 2, w = kWidth - 2 * kMargin, h = kHeight - 1.5 * kMargin;
    svg.rect("screen", x0, y0, w, h, "#f4f4f4");
    const double sx = w / std::max(1, sp.screen_w), sy = h / std::max(1, sp.screen_h);
    auto px = [&](double x) { return x0 + std::clamp(x, 0.0, static_cast<double>(sp.screen_w)) * sx; };
    auto py = [&](double y) { return y0 + std::clamp(y, 0.0, static_cast<double>(sp.screen_h)) * sy; };

    std::vector<std::pair<double, double>> path;
    for (const auto& p : sp.points) path.emplace_back(px(p.x), py(p.y));
    svg.polyline("scanpath", path, "#9ecae1");
    for (const auto& p : sp.points) {
        if (p.movement == Movement::Fixation) svg.circle("fixation", px(p.x), py(p.y), 3, "#1f77b4");
        if (p.movement == Movement::Saccade) svg.circle("saccade", px(p.x), py(p.y), 2, "#d62728");
    }
    for (const auto& c : sp.clicks) {
        if (c.label == ClickLabel::Incorrect) {
            svg.path("click incorrect", cross_path(px(c.position_px->x), py(c.position_px->y), 7), "none", color(c.label));
        } else {
            svg.path("click", star_path(px(c.position_px->x), py(c.position_px->y), 9), color(c.label));
        }
    }
    return svg.finish();
}

std::string render_heatmap(const ChartBundle& b) {
    const auto& g = b.scanpath.heatmap_display;
    Svg svg(kWidth, kHeight, "Level " + std::to_string(b.level) + " attention heatmap");
    const double x0 = kMargin, y0 = kMargin / 2, w = kWidth - 2 * kMargin, h = kHeight - 1.5 * kMargin;
    svg.rect("screen", x0, y0, w, h, "#ffffff");
    const double peak = g.cells.empty() ? 0.0 : *std::max_element(g.cells.begin(), g.cells.end());
    const double cw = w / std::max(1, g.cols), ch = h / std::max(1, g.rows);
    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c) {
            const double v = peak > 0 ? g.at(r, c) / peak : 0.0;
            if (v < 0.005) continue;
            svg.rect("cell", x0 + c * cw, y0 + r * ch, cw, ch, "#d62728", v);
        }
    }
    return svg.finish();
}

std::string render_velocity(const ChartBundle& b) {
    const auto& vs = b.velocity;
    Svg svg(kWidth, kHeight, "Level " + std::to_string(b.level) + " gaze velocity over time");
    const double x0 = kMargin + 20, y0 = kMargin / 2, w = kWidth - x0 - kMargin / 2, h = kHeight - 1.5 * kMargin - 10;
    axes(svg, x0, y0, w, h, "time (ms)", "px/s");
    const double t_end = std::max(1.0, vs.points.empty() ? 1.0 : static_cast<double>(vs.points.back().timestamp_ms));
    const double v_top = std::max({1.0, vs.peak_px_s, vs.threshold_px_s}) * 1.05;
    auto tx = [&](double t) { return x0 + w * std::clamp(t / t_end, 0.0, 1.0); };
    auto vy = [&](double v) { return y0 + h - h * std::clamp(v / v_top, 0.0, 1.0); };

    for (const auto& s : vs.spans) {
        const bool fix = s.movement == Movement::Fixation;
        svg.rect(fix ? "span fixation" : "span saccade", tx(static_cast<double>(s.start_ms)), y0,
                 std::max(1.0, tx(static_cast<double>(s.end_ms)) - tx(static_cast<double>(s.start_ms))), h,
                 fix ? "#2ca02c" : "#d62728", 0.15);
    }
    std::vector<std::pair<double, double>> line;
    for (const auto& p : vs.points) line.emplace_back(tx(static_cast<double>(p.timestamp_ms)), vy(p.velocity_px_s));
    svg.polyline("velocity", line, "#1f77b4");
    svg.line("threshold", x0, vy(vs.threshold_px_s), x0 + w, vy(vs.threshold_px_s), "#d62728", true);
    svg.text(x0 + w - 4, vy(vs.threshold_px_s) - 4, "threshold " + f(vs.threshold_px_s) + " px/s", "end", 10);
    for (const auto& c : vs.clicks) {
        svg.line(std::string("click ") + std::string(to_string(c.label)), tx(static_cast<double>(c.timestamp_ms)), y0,
                 tx(static_cast<double>(c.timestamp_ms)), y0 + h, color(c.label), true);
    }
    return svg.finish();
}

void pie(Svg& svg, double cx, double cy, double r, const std::vector<std::pair<double, std::string_view>>& parts,
         std::string_view cls) {
    double total = 0.0;
    for (const auto& p : parts) total += p.first;
    if (total <= 0.0) {
        svg.circle(std::string(cls) + " empty", cx, cy, r, "#dddddd");
        return;
    }
    double angle = -std::numbers::pi / 2;
    for (const auto& [value, fill] : parts) {
        if (value <= 0.0) continue;
        if (value >= total) {
            svg.circle(cls, cx, cy, r, fill);
            return;
        }
        const double sweep = 2 * std::numbers::pi * value / total;
        const double a1 = angle + sweep;
        const std::string d = "M" + f(cx) + " " + f(cy) + " L" + f(cx + r * std::cos(angle)) + " " +
                              f(cy + r * std::sin(angle)) + " A" + f(r) + " " + f(r) + " 0 " +
                              (sweep > std::numbers::pi ? "1" : "0") + " 1 " + f(cx + r * std::cos(a1)) + " " +
                              f(cy + r * std::sin(a1)) + " Z";
        svg.path(cls, d, fill);
        angle = a1;
    }
}

void bars(Svg& svg, double x0, double y0, double w, double h, const std::vector<double>& values,
          const std::vector<std::string>& labels, std::string_view fill, std::string_view cls) {
    axes(svg, x0, y0, w, h, "", "");
    const double top = values.empty() ? 1.0 : std::max(1e-9, *std::max_element(values.begin(), values.end()));
    const double bw = w / std::max<std::size_t>(1, values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double bh = h * values[i] / top;
        svg.rect(cls, x0 + bw * i + bw * 0.1, y0 + h - bh, bw * 0.8, bh, fill);
        if (i < labels.size()) svg.text(x0 + bw * (i + 0.5), y0 + h + 12, labels[i], "middle", 8);
    }
}

std::string render_dashboard(const ChartBundle& b) {
    const auto& d = b.dashboard;
    Svg svg(kWidth, kHeight * 1.5, "Level " + std::to_string(b.level) + " performance summary");
    const double half_w = kWidth / 2, half_h = kHeight * 0.75;

    pie(svg, half_w / 2, half_h / 2, 100, {{static_cast<double>(d.hits), "#2ca02c"}, {static_cast<double>(d.misses), "#d62728"}},
        "pie accuracy");
    svg.text(half_w / 2, half_h - 20, "hits " + format_percent(d.hit_share) + " / misses " + format_percent(d.miss_share),
             "middle");

    std::vector<double> counts(d.rt_bin_counts.begin(), d.rt_bin_counts.end());
    std::vector<std::string> labels;
    for (std::size_t i = 0; i + 1 < d.rt_bin_edges.size(); ++i) labels.push_back(std::to_string(d.rt_bin_edges[i]));
    bars(svg, half_w + 40, 30, half_w - 70, half_h - 80, counts, labels, "#1f77b4", "rt-bin");
    svg.text(half_w + half_w / 2, half_h - 12, "reaction time (ms), mean " + f(d.mean_rt_ms), "middle");

    pie(svg, half_w / 2, half_h + half_h / 2, 100,
        {{static_cast<double>(d.fixations), "#1f77b4"}, {static_cast<double>(d.saccades), "#ff7f0e"}}, "pie movement");
    svg.text(half_w / 2, 2 * half_h - 20,
             "fixations " + format_percent(d.fixation_share) + " / saccades " + format_percent(d.saccade_share), "middle");

    bars(svg, half_w + 40, half_h + 30, half_w - 70, half_h - 80,
         {static_cast<double>(d.fixations), static_cast<double>(d.saccades)}, {"fixation", "saccade"}, "#ff7f0e",
         "movement-count");
    return svg.finish();
}

std::string render_multilevel(const ChartBundle& b) {
    if (!b.multilevel) throw Error(ErrorCode::IncompleteAnalysis, "multilevel series needs at least two levels");
    const auto& ml = *b.multilevel;
    Svg svg(kWidth, kHeight * 1.5, "Multilevel performance comparison");
    std::vector<std::string> labels;
    for (int l : ml.levels) labels.push_back("Level " + std::to_string(l));
    const double half_w = kWidth / 2, half_h = kHeight * 0.75;
    struct Panel {
        const std::vector<double>* values;
        const char* title;
        const char* fill;
        double x, y;
    };
    const Panel panels[] = {{&ml.success_rate, "success rate", "#2ca02c", 0, 0},
                            {&ml.mean_rt_ms, "mean response time (ms)", "#1f77b4", half_w, 0},
                            {&ml.screen_utilization, "screen area used", "#9467bd", 0, half_h},
                            {&ml.mistakes, "mistakes", "#d62728", half_w, half_h}};
    for (const auto& p : panels) {
        bars(svg, p.x + 50, p.y + 30, half_w - 80, half_h - 80, *p.values, labels, p.fill, "level-bar");
        svg.text(p.x + half_w / 2, p.y + 20, p.title, "middle");
    }
    return svg.finish();
}

}  // namespace

const std::vector<std::string>& chart_ids() {
    static const std::vector<std::string> ids{"timeline", "scanpath", "heatmap", "velocity", "dashboard", "multilevel"};
    return ids;
}

std::string render_svg(const ChartBundle& bundle, std::string_view chart_id) {
    if (chart_id == "timeline") return render_timeline(bundle);
    if (chart_id == "scanpath") return render_scanpath(bundle);
    if (chart_id == "heatmap") return render_heatmap(bundle);
    if (chart_id == "velocity") return render_velocity(bundle);
    if (chart_id == "dashboard") return render_dashboard(bundle);
    if (chart_id == "multilevel") return render_multilevel(bundle);
    throw Error(ErrorCode::UnknownChart, std::string(chart_id));
}

}  // namespace gazelab
