#include "unlk/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace unlk {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

const char* kind_name(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::trivial: return "trivial";
    case SpectrumKind::extremum: return "extremum";
    case SpectrumKind::saddle: return "saddle";
    default: return "orbit";
  }
}

}  // namespace

std::string spectrum_csv(const std::vector<SpectrumEntry>& entries) {
  std::ostringstream out;
  out << "source,kind,area,k,level,action,negative\n";
  for (const auto& e : entries) {
    out << e.source << ',' << kind_name(e.kind) << ',' << rat_str(e.area) << ',';
    if (e.k) out << *e.k;
    out << ',' << rat_str(e.level) << ',' << rat_str(e.action) << ','
        << (e.negative ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string bifurcation_csv(const BifurcationDiagram& d) {
  std::ostringstream out;
  out << "sigma,branch_id,action,provenance\n";
  for (std::size_t j = 0; j < d.sigmas.size(); ++j) {
    const std::string sigma = format_double(rat_double(d.sigmas[j]));
    for (const auto& b : d.branches) {
      if (j >= b.values.size() || !b.values[j]) continue;
      out << sigma << ',' << b.id << ',' << format_double(rat_double(*b.values[j])) << ','
          << b.provenance << '\n';
    }
  }
  return out.str();
}

namespace {

const char* provenance_color(const std::string& p) {
  if (p == "outside") return "#1f6fb2";
  if (p == "inside") return "#c23b22";
  if (p == "tree") return "#2c8a4b";
  return "#555555";
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string bifurcation_svg(const BifurcationDiagram& d) {
  const double width = 800, height = 600, margin = 60;
  double lo = 0, hi = 1;
  bool any = false;
  for (const auto& b : d.branches)
    for (const auto& v : b.values)
      if (v) {
        const double a = rat_double(*v);
        if (!any) {
          lo = hi = a;
          any = true;
        } else {
          lo = std::min(lo, a);
          hi = std::max(hi, a);
        }
      }
  if (!any) {
    lo = 0;
    hi = 1;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto x_of = [&](const Rat& sigma) {
    return margin + rat_double(sigma) * (width - 2 * margin);
  };
  auto y_of = [&](double a) {
    return height - margin - (a - lo) / (hi - lo) * (height - 2 * margin);
  };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "  <line x1=\"" << coord(margin) << "\" y1=\"" << coord(height - margin) << "\" x2=\""
      << coord(width - margin) << "\" y2=\"" << coord(height - margin)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "  <line x1=\"" << coord(margin) << "\" y1=\"" << coord(margin) << "\" x2=\""
      << coord(margin) << "\" y2=\"" << coord(height - margin)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "  <text x=\"" << coord(width / 2) << "\" y=\"" << coord(height - margin / 3)
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">sigma</text>\n";
  out << "  <text x=\"" << coord(margin / 3) << "\" y=\"" << coord(height / 2)
      << "\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 "
      << coord(margin / 3) << ' ' << coord(height / 2) << ")\">action</text>\n";
  out << "  <text x=\"" << coord(margin) << "\" y=\"" << coord(height - margin + 18)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">0</text>\n";
  out << "  <text x=\"" << coord(width - margin) << "\" y=\"" << coord(height - margin + 18)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">1</text>\n";
  out << "  <text x=\"" << coord(margin - 8) << "\" y=\"" << coord(y_of(lo + pad))
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
      << format_double(lo + pad) << "</text>\n";
  out << "  <text x=\"" << coord(margin - 8) << "\" y=\"" << coord(y_of(hi - pad))
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
      << format_double(hi - pad) << "</text>\n";
  for (const auto& b : d.branches) {
    std::vector<std::pair<double, double>> run;
    auto flush = [&] {
      if (run.size() >= 2) {
        out << "  <polyline fill=\"none\" stroke=\"" << provenance_color(b.provenance)
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < run.size(); ++i) {
          if (i) out << ' ';
          out << coord(run[i].first) << ',' << coord(run[i].second);
        }
        out << "\"/>\n";
      } else if (run.size() == 1) {
        out << "  <circle cx=\"" << coord(run[0].first) << "\" cy=\"" << coord(run[0].second)
            << "\" r=\"2\" fill=\"" << provenance_color(b.provenance) << "\"/>\n";
      }
      run.clear();
    };
    for (std::size_t j = 0; j < d.sigmas.size() && j < b.values.size(); ++j) {
      if (b.values[j])
        run.emplace_back(x_of(d.sigmas[j]), y_of(rat_double(*b.values[j])));
      else
        flush();
    }
    flush();
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace unlk
