#include "maslov/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "maslov/error.hpp"

namespace maslov {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string shelf_csv(const PathSamples& path) {
  std::string out = "param,omega1,omega2,psi1,psi2,rho\n";
  for (std::size_t k = 0; k < path.size(); ++k) {
    const auto& v = path.values[k];
    double scale = path.log_scale.empty() ? 1.0 : std::exp(path.log_scale[k]);
    out += format_double(path.ts[k]) + "," + format_double(v.omega1 * scale) + "," +
           format_double(v.omega2 * scale) + "," + format_double(v.psi1) + "," +
           format_double(v.psi2) + "," + format_double(v.rho) + "\n";
  }
  return out;
}

std::vector<Segment> marching_squares(const Eigen::MatrixXd& f, const std::vector<double>& rows,
                                      const std::vector<double>& cols) {
  std::vector<Segment> segs;
  auto cross = [](double a, double b) { return a / (a - b); };
  for (Eigen::Index i = 0; i + 1 < f.rows(); ++i) {
    for (Eigen::Index j = 0; j + 1 < f.cols(); ++j) {
      // corners: 0 (i,j) 1 (i,j+1) 2 (i+1,j+1) 3 (i+1,j)
      double v[4] = {f(i, j), f(i, j + 1), f(i + 1, j + 1), f(i + 1, j)};
      double r0 = rows[i], r1 = rows[i + 1], c0 = cols[j], c1 = cols[j + 1];
      std::vector<std::pair<double, double>> pts;  // (col, row)
      auto edge = [&](int a, int b) {
        if ((v[a] > 0) == (v[b] > 0)) return;
        double t = cross(v[a], v[b]);
        switch (a) {
          case 0: pts.push_back({c0 + t * (c1 - c0), r0}); break;
          case 1: pts.push_back({c1, r0 + t * (r1 - r0)}); break;
          case 2: pts.push_back({c1 + t * (c0 - c1), r1}); break;
          case 3: pts.push_back({c0, r1 + t * (r0 - r1)}); break;
        }
      };
      edge(0, 1);
      edge(1, 2);
      edge(2, 3);
      edge(3, 0);
      if (pts.size() == 2) {
        segs.push_back({pts[0].first, pts[0].second, pts[1].first, pts[1].second});
      } else if (pts.size() == 4) {
        double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        if ((centre > 0) == (v[0] > 0)) {
          segs.push_back({pts[0].first, pts[0].second, pts[1].first, pts[1].second});
          segs.push_back({pts[2].first, pts[2].second, pts[3].first, pts[3].second});
        } else {
          segs.push_back({pts[0].first, pts[0].second, pts[3].first, pts[3].second});
          segs.push_back({pts[1].first, pts[1].second, pts[2].first, pts[2].second});
        }
      }
    }
  }
  return segs;
}

namespace {

constexpr double kW = 800, kH = 520, kM = 60;

struct Axes {
  double l1, l2;
  double px(double lambda) const { return kM + (lambda - l1) / (l2 - l1) * (kW - 2 * kM); }
  double py(double x) const { return kH - kM - x * (kH - 2 * kM); }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void frame_and_labels(std::ostringstream& s, const Axes& ax, const std::string& title) {
  s << "<rect x=\"" << num(kM) << "\" y=\"" << num(kM) << "\" width=\"" << num(kW - 2 * kM)
    << "\" height=\"" << num(kH - 2 * kM) << "\" fill=\"none\" stroke=\"black\"/>\n";
  s << "<text x=\"" << num(kW / 2) << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">" << title
    << "</text>\n";
  s << "<text x=\"" << num(kW / 2) << "\" y=\"" << num(kH - 15)
    << "\" text-anchor=\"middle\" font-size=\"14\">lambda</text>\n";
  s << "<text x=\"20\" y=\"" << num(kH / 2) << "\" font-size=\"14\">x</text>\n";
  for (double lam : {ax.l1, ax.l2})
    s << "<text x=\"" << num(ax.px(lam)) << "\" y=\"" << num(kH - kM + 18)
      << "\" text-anchor=\"middle\" font-size=\"12\">" << format_double(lam) << "</text>\n";
  s << "<text x=\"" << num(kM - 8) << "\" y=\"" << num(ax.py(0)) << "\" text-anchor=\"end\" font-size=\"12\">0</text>\n";
  s << "<text x=\"" << num(kM - 8) << "\" y=\"" << num(ax.py(1)) << "\" text-anchor=\"end\" font-size=\"12\">1</text>\n";
}

void markers_svg(std::ostringstream& s, const Axes& ax, const std::vector<Marker>& markers) {
  for (const auto& m : markers) {
    s << "<circle cx=\"" << num(ax.px(m.lambda)) << "\" cy=\"" << num(ax.py(m.x)) << "\" r=\"4\" fill=\""
      << m.color << "\"><title>" << m.label << "</title></circle>\n";
  }
}

}  // namespace

std::string box_svg(double lambda1, double lambda2, const std::vector<Segment>& curve,
                    const std::vector<Marker>& markers, const std::string& title) {
  Axes ax{lambda1, lambda2};
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  frame_and_labels(s, ax, title);
  s << "<path fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" d=\"";
  for (const auto& g : curve)
    s << "M" << num(ax.px(g.x0)) << " " << num(ax.py(g.y0)) << "L" << num(ax.px(g.x1)) << " "
      << num(ax.py(g.y1));
  s << "\"/>\n";
  markers_svg(s, ax, markers);
  s << "</svg>\n";
  return s.str();
}

std::string heatmap_svg(const Eigen::MatrixXd& rho, const std::vector<double>& xs,
                        const std::vector<double>& lambdas, const std::vector<Marker>& markers,
                        const std::string& title) {
  Axes ax{lambdas.front(), lambdas.back()};
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const int cells_x = std::min<int>(120, static_cast<int>(xs.size()) - 1);
  const int cells_l = std::min<int>(200, static_cast<int>(lambdas.size()) - 1);
  const double top = std::max(rho.maxCoeff(), 1e-300);
  for (int a = 0; a < cells_x; ++a) {
    for (int b = 0; b < cells_l; ++b) {
      Eigen::Index i = a * (xs.size() - 1) / cells_x;
      Eigen::Index j = b * (lambdas.size() - 1) / cells_l;
      Eigen::Index i1 = (a + 1) * (xs.size() - 1) / cells_x;
      Eigen::Index j1 = (b + 1) * (lambdas.size() - 1) / cells_l;
      double v = rho.block(i, j, i1 - i + 1, j1 - j + 1).minCoeff();
      double t = std::sqrt(std::clamp(v / top, 0.0, 1.0));
      int r = static_cast<int>(255 * t), gb = static_cast<int>(255 * (1 - t));
      double x0 = ax.px(lambdas[j]), x1 = ax.px(lambdas[j1]);
      double y0 = ax.py(xs[i1]), y1 = ax.py(xs[i]);
      s << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0 + 0.5)
        << "\" height=\"" << num(y1 - y0 + 0.5) << "\" fill=\"rgb(" << r << "," << gb / 2 << "," << gb
        << ")\"/>\n";
    }
  }
  frame_and_labels(s, ax, title);
  markers_svg(s, ax, markers);
  s << "</svg>\n";
  return s.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Config, "cannot write \"" + path + "\"");
  out << content;
}

}  // namespace maslov
