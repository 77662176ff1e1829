#include "wicknls/svg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "wicknls/errors.hpp"

namespace wicknls {

namespace {

constexpr double kW = 640.0, kH = 420.0;
constexpr double kLeft = 70.0, kRight = 150.0, kTop = 40.0, kBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string esc(const std::string& s) {
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

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  std::vector<double> ticks;
};

Axis make_axis(double lo, double hi) {
  Axis ax;
  if (!(hi > lo)) {
    double c = std::isfinite(lo) ? lo : 0.0;
    lo = c - 1.0;
    hi = c + 1.0;
  }
  double pad = 0.05 * (hi - lo);
  ax.lo = lo - pad;
  ax.hi = hi + pad;
  double span = ax.hi - ax.lo;
  double raw = span / 5.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double frac = raw / mag;
  double step = (frac <= 1.5 ? 1.0 : frac <= 3.5 ? 2.0 : frac <= 7.5 ? 5.0 : 10.0) * mag;
  for (double t = std::ceil(ax.lo / step) * step; t <= ax.hi + 0.5 * step; t += step) {
    if (std::abs(t) < 1e-12 * step) t = 0.0;
    ax.ticks.push_back(t);
  }
  return ax;
}

}  // namespace

std::string render_svg(const SvgPlot& plot) {
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const SvgSeries& s : plot.series) {
    require(s.x.size() == s.y.size(), "svg: series '" + s.label + "' has ragged x/y");
    for (size_t i = 0; i < s.x.size(); ++i) {
      require(std::isfinite(s.x[i]) && std::isfinite(s.y[i]),
              "svg: non-finite point in series '" + s.label + "'");
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
    }
  }
  if (!std::isfinite(xlo)) {  // no points at all
    xlo = 0.0; xhi = 1.0; ylo = 0.0; yhi = 1.0;
  }
  Axis xa = make_axis(xlo, xhi), ya = make_axis(ylo, yhi);
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xa.lo) / (xa.hi - xa.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - ya.lo) / (ya.hi - ya.lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kW << " " << kH
     << "\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"15\">"
     << esc(plot.title) << "</text>\n";

  // frame and ticks
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\""
     << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : xa.ticks) {
    double X = px(t);
    os << "<line x1=\"" << num(X) << "\" y1=\"" << kTop + ph << "\" x2=\"" << num(X)
       << "\" y2=\"" << kTop + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(X) << "\" y=\"" << kTop + ph + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(t)
       << "</text>\n";
  }
  for (double t : ya.ticks) {
    double Y = py(t);
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(Y) << "\" x2=\"" << kLeft
       << "\" y2=\"" << num(Y) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(Y + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(t)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
     << esc(plot.xlabel) << "</text>\n";
  os << "<text x=\"18\" y=\"" << kTop + ph / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        "transform=\"rotate(-90 18 "
     << kTop + ph / 2 << ")\">" << esc(plot.ylabel) << "</text>\n";

  for (size_t si = 0; si < plot.series.size(); ++si) {
    const SvgSeries& s = plot.series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    if (s.x.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" "
            "points=\"";
      for (size_t i = 0; i < s.x.size(); ++i)
        os << (i ? " " : "") << num(px(s.x[i])) << "," << num(py(s.y[i]));
      os << "\"/>\n";
    }
    for (size_t i = 0; i < s.x.size(); ++i)
      os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
         << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    double ly = kTop + 14 + 18.0 * double(si);
    double lx = kLeft + pw + 12;
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
       << num(lx + 22) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
       << "\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << num(lx + 27) << "\" y=\"" << num(ly)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << esc(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

namespace {

bool scan_tag(const std::string& doc, size_t& pos, std::string& name, bool& closing,
              bool& self_closing, std::string& err) {
  size_t gt = std::string::npos;
  bool in_quote = false;
  for (size_t i = pos + 1; i < doc.size(); ++i) {
    if (doc[i] == '"') in_quote = !in_quote;
    else if (doc[i] == '<' && !in_quote) { err = "nested '<' inside a tag"; return false; }
    else if (doc[i] == '>' && !in_quote) { gt = i; break; }
  }
  if (gt == std::string::npos) {
    err = "unterminated tag";
    return false;
  }
  std::string body = doc.substr(pos + 1, gt - pos - 1);
  pos = gt + 1;
  closing = !body.empty() && body[0] == '/';
  if (closing) body = body.substr(1);
  self_closing = !body.empty() && body.back() == '/';
  if (self_closing) body.pop_back();
  size_t sp = body.find_first_of(" \t\r\n");
  name = body.substr(0, sp);
  if (name.empty()) {
    err = "tag with no name";
    return false;
  }
  // attributes must be name="value"
  if (sp != std::string::npos && !closing) {
    std::string attrs = body.substr(sp);
    size_t i = 0;
    while (i < attrs.size()) {
      if (std::isspace(static_cast<unsigned char>(attrs[i]))) { ++i; continue; }
      size_t eq = attrs.find('=', i);
      if (eq == std::string::npos) {
        err = "attribute without '=' in <" + name + ">";
        return false;
      }
      if (eq + 1 >= attrs.size() || attrs[eq + 1] != '"') {
        err = "unquoted attribute value in <" + name + ">";
        return false;
      }
      size_t close = attrs.find('"', eq + 2);
      if (close == std::string::npos) {
        err = "unterminated attribute value in <" + name + ">";
        return false;
      }
      std::string value = attrs.substr(eq + 2, close - eq - 2);
      for (const char* bad : {"nan", "NaN", "inf"}) {
        if (value.find(bad) != std::string::npos) {
          err = std::string("non-finite coordinate '") + bad + "' in <" + name + ">";
          return false;
        }
      }
      i = close + 1;
    }
  }
  return true;
}

}  // namespace

std::string validate_svg(const std::string& doc) {
  std::vector<std::string> stack;
  bool saw_svg = false, saw_xmlns = false, saw_viewbox = false;
  size_t pos = 0;
  while (true) {
    size_t lt = doc.find('<', pos);
    if (lt == std::string::npos) break;
    if (doc.compare(lt, 2, "<?") == 0 || doc.compare(lt, 2, "<!") == 0) {
      size_t gt = doc.find('>', lt);
      if (gt == std::string::npos) return "unterminated declaration";
      pos = gt + 1;
      continue;
    }
    pos = lt;
    std::string name, err;
    bool closing = false, self_closing = false;
    size_t tag_start = pos;
    if (!scan_tag(doc, pos, name, closing, self_closing, err)) return err;
    if (name == "svg" && !closing) {
      saw_svg = true;
      std::string tag = doc.substr(tag_start, pos - tag_start);
      saw_xmlns = tag.find("xmlns=") != std::string::npos;
      saw_viewbox = tag.find("viewBox=") != std::string::npos;
    }
    if (closing) {
      if (stack.empty() || stack.back() != name)
        return "mismatched closing tag </" + name + ">";
      stack.pop_back();
    } else if (!self_closing) {
      stack.push_back(name);
    }
  }
  if (!stack.empty()) return "unclosed tag <" + stack.back() + ">";
  if (!saw_svg) return "no <svg> root";
  if (!saw_xmlns) return "<svg> lacks xmlns";
  if (!saw_viewbox) return "<svg> lacks viewBox";
  return "";
}

}  // namespace wicknls
