#include "qdiff/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qdiff {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Mapper {
  Complex center;
  double width, height;
  double px_w, px_h;
  double x(double re) const { return (re - center.real() + 0.5 * width) / width * px_w; }
  double y(double im) const { return (0.5 * height - (im - center.imag())) / height * px_h; }
  bool visible(Complex z) const {
    return std::abs(z.real() - center.real()) <= 0.75 * width &&
           std::abs(z.imag() - center.imag()) <= 0.75 * height;
  }
};

const char* ray_class(const Trajectory& t, bool self_loop) {
  switch (t.termination.kind) {
    case TerminationKind::HitCriticalPoint:
      return self_loop ? "loop" : "connecting";
    case TerminationKind::ClosedLoop:
      return "loop";
    case TerminationKind::EscapedToInfinity:
      return "escaping";
    case TerminationKind::Budget:
      return "budget";
  }
  return "budget";
}

std::string style_for(const RenderSpec& spec, const std::string& cls) {
  auto it = spec.styles.find(cls);
  if (it != spec.styles.end()) return it->second;
  if (cls == "connecting") return "stroke:#c0392b;stroke-width:2.4";
  if (cls == "loop") return "stroke:#d35400;stroke-width:1.6";
  if (cls == "escaping") return "stroke:#2c3e50;stroke-width:1.2";
  if (cls == "budget") return "stroke:#7f8c8d;stroke-width:1.0;stroke-dasharray:4,3";
  if (cls == "background") return "stroke:#c8d6e5;stroke-width:0.7";
  return "stroke:#000000;stroke-width:1.0";
}

void emit_polyline(std::ostringstream& svg, const Mapper& m, const std::vector<Complex>& vs,
                   const std::string& style) {
  if (vs.size() < 2) return;
  // Decimate to ~half-pixel resolution; clip far-outside runs.
  double min_gap = 0.5 * (m.width / m.px_w);
  svg << "  <polyline fill=\"none\" style=\"" << style << "\" points=\"";
  Complex last = vs.front();
  bool first = true;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    Complex v = vs[i];
    bool keep = first || i + 1 == vs.size() || std::abs(v - last) >= min_gap;
    if (!keep) continue;
    if (!m.visible(v) && !first && i + 1 != vs.size() && !m.visible(last)) continue;
    svg << fmt(m.x(v.real())) << "," << fmt(m.y(v.imag())) << " ";
    last = v;
    first = false;
  }
  svg << "\"/>\n";
}

}  // namespace

std::string render_svg(const FactoredRational& q, const CriticalGraph& graph,
                       const RenderSpec& spec, std::span<const Complex> overlay_zeros) {
  // Fit the viewport to the graph when not given.
  Mapper m;
  m.center = spec.center;
  m.width = spec.width;
  m.height = spec.height;
  if (m.width <= 0.0 || m.height <= 0.0) {
    double lo_x = -1, hi_x = 1, lo_y = -1, hi_y = 1;
    bool first = true;
    auto absorb = [&](Complex z) {
      if (first) {
        lo_x = hi_x = z.real();
        lo_y = hi_y = z.imag();
        first = false;
      } else {
        lo_x = std::min(lo_x, z.real());
        hi_x = std::max(hi_x, z.real());
        lo_y = std::min(lo_y, z.imag());
        hi_y = std::max(hi_y, z.imag());
      }
    };
    for (const auto& p : graph.points) absorb(p.location.value());
    double s = critical_scale(q);
    // Clamp the span so escaping rays do not dwarf the finite structure.
    double span = std::max({hi_x - lo_x, hi_y - lo_y, 1.0});
    m.center = Complex(0.5 * (lo_x + hi_x), 0.5 * (lo_y + hi_y));
    m.width = std::max(2.6 * span, 0.5 * s);
    m.height = m.width * 0.75;
  }
  m.px_w = spec.resolution;
  m.px_h = spec.resolution * (m.height / m.width);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(m.px_w) << "\" height=\""
      << fmt(m.px_h) << "\" viewBox=\"0 0 " << fmt(m.px_w) << " " << fmt(m.px_h) << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  if (spec.background_field) {
    // Deterministic grid of context trajectories, traced on demand.
    TraceOptions opts;
    opts.max_steps = 4000;
    opts = opts.resolved_for(q);
    opts.escape_radius = std::max(opts.escape_radius,
                                  std::abs(m.center) + m.width + m.height);
    int g = std::max(2, spec.background_grid);
    for (int iy = 0; iy < g; ++iy) {
      for (int ix = 0; ix < g; ++ix) {
        Complex seed = m.center + Complex((ix + 0.5) / g - 0.5, 0.0) * m.width +
                       Complex(0.0, (iy + 0.5) / g - 0.5) * m.height;
        bool near_critical = false;
        for (const auto& p : graph.points)
          if (std::abs(seed - p.location.value()) < 1e-3) near_critical = true;
        if (near_critical) continue;
        for (double dir : {0.0, 3.141592653589793}) {
          try {
            Trajectory t = trace(q, seed, dir, opts, FoliationKind::Horizontal);
            emit_polyline(svg, m, t.vertices, style_for(spec, "background"));
          } catch (...) {
            // context only; skip seeds the tracer rejects
          }
        }
      }
    }
  }

  for (const auto& ray : graph.rays) {
    bool self_loop =
        ray.trajectory.termination.kind == TerminationKind::HitCriticalPoint &&
        std::abs(ray.trajectory.termination.point -
                 graph.points[ray.source].location.value()) < 1e-9;
    emit_polyline(svg, m, ray.trajectory.vertices,
                  style_for(spec, ray_class(ray.trajectory, self_loop)));
  }

  for (Complex z : overlay_zeros) {
    svg << "  <circle cx=\"" << fmt(m.x(z.real())) << "\" cy=\"" << fmt(m.y(z.imag()))
        << "\" r=\"2.2\" fill=\"#27ae60\"/>\n";
  }

  for (const auto& p : graph.points) {
    Complex z = p.location.value();
    if (p.order > 0) {
      svg << "  <circle cx=\"" << fmt(m.x(z.real())) << "\" cy=\"" << fmt(m.y(z.imag()))
          << "\" r=\"3.5\" fill=\"#000000\"/>\n";
    } else {
      svg << "  <circle cx=\"" << fmt(m.x(z.real())) << "\" cy=\"" << fmt(m.y(z.imag()))
          << "\" r=\"3.5\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1.4\"/>\n";
    }
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace qdiff
