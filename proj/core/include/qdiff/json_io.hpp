#pragma once

#include <string>

#include "qdiff/detector.hpp"
#include "qdiff/families.hpp"
#include "qdiff/periods.hpp"
#include "qdiff/polygon.hpp"
#include "qdiff/tracer.hpp"
#include "qdiff/types.hpp"

namespace qdiff {

// JSON wire formats. Emission is deterministic: keys sorted, every float
// rounded to 12 significant digits, two-space indentation, trailing newline.
// Parsers throw ParseError with a message naming the offending field.

std::string to_json(const FactoredRational& q);
FactoredRational rational_from_json(const std::string& text);

std::string to_json(const Trajectory& t);
std::string to_json(const CriticalGraph& g);
std::string to_json(const ShortTrajectoryReport& r);

std::string to_json(const OrientedArc& arc);
OrientedArc arc_from_json(const std::string& text);

std::string to_json(const QuantizationResult& r);
std::string to_json(const ConditionReport& r);

std::string to_json(const SweepResult& r);

PolygonData polygon_from_json(const std::string& text);
std::string to_json(const OverlayReport& r);

}  // namespace qdiff
