#pragma once

#include <map>
#include <span>
#include <string>

#include "qdiff/tracer.hpp"
#include "qdiff/types.hpp"

namespace qdiff {

struct RenderSpec {
  // Viewport in the z plane; non-positive width/height auto-fit the graph.
  Complex center{0.0, 0.0};
  double width = 0.0;
  double height = 0.0;
  int resolution = 900;  // pixel width; height follows the aspect ratio
  // Seed a deterministic grid of non-critical context trajectories.
  bool background_field = false;
  int background_grid = 9;
  // Stroke overrides per ray class: "connecting", "loop", "escaping",
  // "budget", "background".
  std::map<std::string, std::string> styles;
};

// Deterministic SVG figure of a critical graph: rays styled by termination
// class, zeros as filled dots, poles as open circles, optional polynomial
// zero overlay and background field.
std::string render_svg(const FactoredRational& q, const CriticalGraph& graph,
                       const RenderSpec& spec,
                       std::span<const Complex> overlay_zeros = {});

}  // namespace qdiff
