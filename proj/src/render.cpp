#include "tprm/scenarios.hpp"

#include <cstdio>
#include <sstream>
#include <string>

namespace tprm {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2",
                                    "#17becf"};

std::string f(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string render_svg(const Scenario& s, const RenderOptions& options) {
  if (s.workspace.dim() != 2) throw std::invalid_argument("render_svg: only planar scenarios can be drawn");
  if (options.size_px < 16) throw std::invalid_argument("render_svg: image too small");
  const double px = options.size_px;
  auto X = [&](double x) { return f(x * px); };
  auto Y = [&](double y) { return f((1 - y) * px); };
  auto L = [&](double l) { return f(l * px); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.size_px << "\" height=\"" << options.size_px
     << "\" viewBox=\"0 0 " << options.size_px << ' ' << options.size_px << "\">\n";
  os << "<title>" << s.name << "</title>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << L(1) << "\" height=\"" << L(1)
     << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";

  if (options.roadmaps) {
    os << "<g stroke=\"#cccccc\" stroke-width=\"0.4\">\n";
    for (const auto& rm : *options.roadmaps) {
      for (int u = 0; u < rm.vertex_count(); ++u)
        for (const auto& e : rm.neighbors(u)) {
          if (e.to < u) continue;
          os << "<line x1=\"" << X(rm.vertex(u)[0]) << "\" y1=\"" << Y(rm.vertex(u)[1]) << "\" x2=\""
             << X(rm.vertex(e.to)[0]) << "\" y2=\"" << Y(rm.vertex(e.to)[1]) << "\"/>\n";
        }
    }
    os << "</g>\n";
  }

  os << "<g fill=\"#555555\" stroke=\"none\">\n";
  for (const auto& o : s.workspace.obstacles()) {
    if (const auto* d = std::get_if<Disc>(&o)) {
      os << "<circle cx=\"" << X(d->center.x()) << "\" cy=\"" << Y(d->center.y()) << "\" r=\"" << L(d->radius)
         << "\"/>\n";
    } else if (const auto* p = std::get_if<ConvexPolygon>(&o)) {
      os << "<polygon points=\"";
      for (const auto& v : p->vertices) os << X(v.x()) << ',' << Y(v.y()) << ' ';
      os << "\"/>\n";
    } else if (const auto* b = std::get_if<HyperBox>(&o)) {
      os << "<rect x=\"" << X(b->lo[0]) << "\" y=\"" << Y(b->hi[1]) << "\" width=\"" << L(b->hi[0] - b->lo[0])
         << "\" height=\"" << L(b->hi[1] - b->lo[1]) << "\"/>\n";
    } else if (const auto* h = std::get_if<HyperSphere>(&o)) {
      os << "<circle cx=\"" << X(h->center[0]) << "\" cy=\"" << Y(h->center[1]) << "\" r=\"" << L(h->radius)
         << "\"/>\n";
    }
  }
  os << "</g>\n";

  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    const auto& r = s.robots[i];
    const char* c = kPalette[i % (sizeof kPalette / sizeof *kPalette)];
    if (options.path && i < options.path->trajectories.size()) {
      const PointSet& t = options.path->trajectories[i];
      os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
      for (Eigen::Index k = 0; k < t.cols(); ++k) os << X(t(0, k)) << ',' << Y(t(1, k)) << ' ';
      os << "\"/>\n";
    }
    os << "<circle cx=\"" << X(r.start[0]) << "\" cy=\"" << Y(r.start[1]) << "\" r=\"" << L(r.radius)
       << "\" fill=\"" << c << "\" fill-opacity=\"0.35\" stroke=\"" << c << "\"/>\n";
    os << "<circle cx=\"" << X(r.goal[0]) << "\" cy=\"" << Y(r.goal[1]) << "\" r=\"" << L(r.radius)
       << "\" fill=\"none\" stroke=\"" << c << "\" stroke-dasharray=\"4 3\"/>\n";
    os << "<text x=\"" << X(r.start[0]) << "\" y=\"" << Y(r.start[1]) << "\" font-size=\"12\" text-anchor=\"middle\""
       << " dominant-baseline=\"central\">" << i + 1 << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace tprm
