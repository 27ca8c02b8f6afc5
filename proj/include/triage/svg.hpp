#pragma once

#include <string>
#include <utility>
#include <vector>

namespace triage::svg {

/// Minimal SVG document builder; coordinates are emitted with fixed
/// two-decimal precision so output bytes are stable.
class Doc {
public:
    Doc(double width, double height);

    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke = "", double stroke_width = 0.0);
    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double width = 1.0, bool dashed = false);
    void polyline(const std::vector<std::pair<double, double>>& points,
                  const std::string& stroke, double width = 1.5);
    void circle(double cx, double cy, double radius, const std::string& fill);
    void text(double x, double y, const std::string& content, double size = 11.0,
              const std::string& anchor = "start", const std::string& transform = "");

    std::string str() const;

private:
    double width_, height_;
    std::string body_;
};

struct Scale {
    double domain_lo = 0.0, domain_hi = 1.0;
    double range_lo = 0.0, range_hi = 1.0;
    double operator()(double v) const {
        return range_lo + (v - domain_lo) / (domain_hi - domain_lo) * (range_hi - range_lo);
    }
};

/// Round tick positions covering [lo, hi] (1/2/5 x 10^k spacing).
std::vector<double> ticks(double lo, double hi, int target = 5);

/// Linear blue (0) to red (1) ramp, clamped; "#rrggbb".
std::string risk_color(double risk);

/// Distinguishable series color for index k of n.
std::string series_color(std::size_t k, std::size_t n);

std::string xml_escape(const std::string& s);

}  // namespace triage::svg
