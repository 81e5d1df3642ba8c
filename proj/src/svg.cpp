#include "coop/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace coop {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

std::string fixed2(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 2);
  std::string s(buf, res.ptr);
  return s == "-0.00" ? "0.00" : s;
}

std::string tick_label(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
  std::string out;
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double x) {
    if (!std::isfinite(x)) return;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }

  /// Pads by 5% and widens empty or degenerate ranges.
  Range padded() const {
    Range r = *this;
    if (!(r.lo <= r.hi)) return {0.0, 1.0};
    if (r.hi - r.lo < 1e-12 * std::max(1.0, std::abs(r.hi))) {
      const double d = std::max(1e-3, 0.05 * std::abs(r.hi));
      return {r.lo - d, r.hi + d};
    }
    const double pad = 0.05 * (r.hi - r.lo);
    return {r.lo - pad, r.hi + pad};
  }
};

std::vector<double> nice_ticks(Range r) {
  const double raw = (r.hi - r.lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double k = std::ceil(r.lo / step); k * step <= r.hi + 1e-9 * step; k += 1.0) {
    const double t = k * step;
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

class Canvas {
 public:
  Canvas(Range x, Range y) : x_(x), y_(y) {}

  double px(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom); }

  void frame(const std::string& title, const std::string& xlabel, const std::string& ylabel) {
    body_ += "<rect x=\"" + fixed2(kLeft) + "\" y=\"" + fixed2(kTop) + "\" width=\"" +
             fixed2(kWidth - kLeft - kRight) + "\" height=\"" + fixed2(kHeight - kTop - kBottom) +
             "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : nice_ticks(x_)) {
      const std::string x = fixed2(px(t)), y = fixed2(kHeight - kBottom);
      body_ += "<line x1=\"" + x + "\" y1=\"" + y + "\" x2=\"" + x + "\" y2=\"" + fixed2(kHeight - kBottom + 5) +
               "\" stroke=\"black\"/>\n";
      body_ += "<text x=\"" + x + "\" y=\"" + fixed2(kHeight - kBottom + 18) + "\" text-anchor=\"middle\">" +
               tick_label(t) + "</text>\n";
    }
    for (double t : nice_ticks(y_)) {
      const std::string y = fixed2(py(t));
      body_ += "<line x1=\"" + fixed2(kLeft - 5) + "\" y1=\"" + y + "\" x2=\"" + fixed2(kLeft) + "\" y2=\"" + y +
               "\" stroke=\"black\"/>\n";
      body_ += "<text x=\"" + fixed2(kLeft - 8) + "\" y=\"" + fixed2(py(t) + 4) + "\" text-anchor=\"end\">" +
               tick_label(t) + "</text>\n";
    }
    body_ += "<text x=\"" + fixed2(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
             escape(title) + "</text>\n";
    body_ += "<text x=\"" + fixed2((kLeft + kWidth - kRight) / 2) + "\" y=\"" + fixed2(kHeight - 12) +
             "\" text-anchor=\"middle\">" + escape(xlabel) + "</text>\n";
    body_ += "<text x=\"18\" y=\"" + fixed2((kTop + kHeight - kBottom) / 2) +
             "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " + fixed2((kTop + kHeight - kBottom) / 2) +
             ")\">" + escape(ylabel) + "</text>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, bool dashed) {
    if (pts.size() < 2) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"1.2\"";
    if (dashed) body_ += " stroke-dasharray=\"6 4\"";
    body_ += " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) body_ += ' ';
      body_ += fixed2(px(pts[i].first)) + "," + fixed2(py(pts[i].second));
    }
    body_ += "\"/>\n";
  }

  void circle(double x, double y, double r, const std::string& fill, const std::string& stroke) {
    body_ += "<circle cx=\"" + fixed2(px(x)) + "\" cy=\"" + fixed2(py(y)) + "\" r=\"" + fixed2(r) + "\" fill=\"" +
             fill + "\" stroke=\"" + stroke + "\"/>\n";
  }

  void square(double x, double y, double half) {
    body_ += "<rect x=\"" + fixed2(px(x) - half) + "\" y=\"" + fixed2(py(y) - half) + "\" width=\"" +
             fixed2(2 * half) + "\" height=\"" + fixed2(2 * half) + "\" fill=\"black\"/>\n";
  }

  void label(double x, double y, const std::string& text, double dx, double dy) {
    body_ += "<text x=\"" + fixed2(px(x) + dx) + "\" y=\"" + fixed2(py(y) + dy) + "\" font-size=\"12\">" +
             escape(text) + "</text>\n";
  }

  void vline(double x, const std::string& text) {
    const std::string sx = fixed2(px(x));
    body_ += "<line x1=\"" + sx + "\" y1=\"" + fixed2(kTop) + "\" x2=\"" + sx + "\" y2=\"" + fixed2(kHeight - kBottom) +
             "\" stroke=\"gray\" stroke-dasharray=\"3 3\"/>\n";
    body_ += "<text x=\"" + fixed2(px(x) + 3) + "\" y=\"" + fixed2(kTop + 14) + "\" font-size=\"12\" fill=\"gray\">" +
             escape(text) + "</text>\n";
  }

  std::string str() const {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\" "
           "font-family=\"sans-serif\" font-size=\"13\">\n"
           "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n" +
           body_ + "</svg>\n";
  }

  const Range& x() const { return x_; }
  const Range& y() const { return y_; }

 private:
  Range x_, y_;
  std::string body_;
};

bool stable(const std::optional<StabilityVerdict>& v) { return v && v->tag == Verdict::Stable; }

}  // namespace

std::string phase_portrait_svg(const Trajectory& tr, const EquilibriumReport& report, const std::string& title) {
  Range xr, yr;
  for (const State& s : tr.states) {
    xr.add(s.u);
    yr.add(s.v);
  }
  for (const auto& e : report.equilibria) {
    xr.add(e.point.u);
    yr.add(e.point.v);
  }
  Canvas c(xr.padded(), yr.padded());
  c.frame(title, "u (prey)", "v (predator)");

  std::vector<std::pair<double, double>> pts;
  double last_x = 0, last_y = 0;
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    const double x = c.px(tr.states[i].u), y = c.py(tr.states[i].v);
    const bool ends = i == 0 || i + 1 == tr.states.size();
    if (!ends && std::hypot(x - last_x, y - last_y) < 1.0) continue;
    pts.emplace_back(tr.states[i].u, tr.states[i].v);
    last_x = x;
    last_y = y;
  }
  c.polyline(pts, "steelblue", false);
  if (!tr.states.empty()) c.square(tr.states.front().u, tr.states.front().v, 3);

  for (const auto& e : report.equilibria) {
    c.circle(e.point.u, e.point.v, 4.5, stable(e.verdict) ? "black" : "white", "black");
    std::string text(to_string(e.kind));
    if (e.verdict) text += " " + std::string(to_string(e.verdict->tag));
    c.label(e.point.u, e.point.v, text, 7, -7);
  }
  return c.str();
}

std::string bifurcation_svg(const std::vector<SweepRow>& rows, SweepParameter parameter,
                            const std::vector<Marker>& markers, const std::string& title) {
  Range xr, yr;
  for (const SweepRow& r : rows) {
    xr.add(r.param);
    if (r.plus) yr.add(r.plus->v);
    if (r.attractor) {
      if (r.attractor->cycle) {
        yr.add(r.attractor->cycle->v_min);
        yr.add(r.attractor->cycle->v_max);
      } else {
        yr.add(r.attractor->final_state.v);
      }
    }
  }
  for (const Marker& m : markers) xr.add(m.x);
  Canvas c(xr.padded(), yr.padded());
  c.frame(title, std::string(to_string(parameter)), "v");

  // E+ branch, split wherever the stability changes.
  std::vector<std::pair<double, double>> run;
  bool run_stable = false;
  for (const SweepRow& r : rows) {
    if (!r.plus) {
      c.polyline(run, "black", !run_stable);
      run.clear();
      continue;
    }
    const bool s = r.verdict_plus == Verdict::Stable;
    if (!run.empty() && s != run_stable) {
      c.polyline(run, "black", !run_stable);
      run = {run.back()};
    }
    run_stable = s;
    run.emplace_back(r.param, r.plus->v);
  }
  c.polyline(run, "black", !run_stable);

  for (const SweepRow& r : rows) {
    if (!r.attractor) continue;
    if (r.attractor->cycle) {
      c.circle(r.param, r.attractor->cycle->v_min, 2.5, "crimson", "none");
      c.circle(r.param, r.attractor->cycle->v_max, 2.5, "crimson", "none");
    } else if (r.attractor->equilibrium) {
      c.circle(r.param, r.attractor->final_state.v, 2.5, "steelblue", "none");
    }
  }
  for (const Marker& m : markers)
    if (m.x >= c.x().lo && m.x <= c.x().hi) c.vline(m.x, m.label);
  return c.str();
}

}  // namespace coop
