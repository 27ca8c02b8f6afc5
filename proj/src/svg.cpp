#include "triage/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "triage/text.hpp"

namespace triage::svg {

namespace {

std::string num(double v) { return text::format_fixed(v, 2); }

std::string hex_color(double red, double green, double blue) {
    char buf[8];
    auto channel = [](double v) {
        return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    };
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", channel(red), channel(green), channel(blue));
    return buf;
}

}  // namespace

Doc::Doc(double width, double height) : width_(width), height_(height) {}

void Doc::rect(double x, double y, double w, double h, const std::string& fill,
               const std::string& stroke, double stroke_width) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
             "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"";
    if (!stroke.empty())
        body_ += " stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_width) + "\"";
    body_ += "/>\n";
}

void Doc::line(double x1, double y1, double x2, double y2, const std::string& stroke,
               double width, bool dashed) {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
             "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) +
             "\"";
    if (dashed) body_ += " stroke-dasharray=\"4 3\"";
    body_ += "/>\n";
}

void Doc::polyline(const std::vector<std::pair<double, double>>& points,
                   const std::string& stroke, double width) {
    if (points.size() < 2) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) +
             "\" points=\"";
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (k) body_ += " ";
        body_ += num(points[k].first) + "," + num(points[k].second);
    }
    body_ += "\"/>\n";
}

void Doc::circle(double cx, double cy, double radius, const std::string& fill) {
    body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(radius) +
             "\" fill=\"" + fill + "\"/>\n";
}

void Doc::text(double x, double y, const std::string& content, double size,
               const std::string& anchor, const std::string& transform) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
             "\" font-family=\"sans-serif\" text-anchor=\"" + anchor + "\"";
    if (!transform.empty()) body_ += " transform=\"" + transform + "\"";
    body_ += ">" + xml_escape(content) + "</text>\n";
}

std::string Doc::str() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) + "\" height=\"" +
           num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " + num(height_) + "\">\n" +
           "<rect width=\"" + num(width_) + "\" height=\"" + num(height_) +
           "\" fill=\"white\"/>\n" + body_ + "</svg>\n";
}

std::vector<double> ticks(double lo, double hi, int target) {
    std::vector<double> out;
    if (!(hi > lo) || target < 2) return out;
    double raw_step = (hi - lo) / target;
    double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
    double step = 10.0 * mag;
    for (double mult : {1.0, 2.0, 5.0})
        if (raw_step <= mult * mag) {
            step = mult * mag;
            break;
        }
    double first = std::ceil(lo / step - 1e-9) * step;
    for (double v = first; v <= hi + step * 1e-9; v += step)
        out.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
    return out;
}

std::string risk_color(double risk) {
    double v = std::clamp(risk, 0.0, 1.0);
    return hex_color(v, 0.0, 1.0 - v);
}

std::string series_color(std::size_t k, std::size_t n) {
    // Evenly spaced hues, fixed saturation/value.
    double hue = n == 0 ? 0.0 : 360.0 * static_cast<double>(k) / static_cast<double>(n);
    double c = 0.75, m = 0.15;
    double hp = hue / 60.0;
    double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1) { r = c; g = x; }
    else if (hp < 2) { r = x; g = c; }
    else if (hp < 3) { g = c; b = x; }
    else if (hp < 4) { g = x; b = c; }
    else if (hp < 5) { r = x; b = c; }
    else { r = c; b = x; }
    return hex_color(r + m, g + m, b + m);
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace triage::svg
