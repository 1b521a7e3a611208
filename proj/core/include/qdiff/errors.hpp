#pragma once

#include <stdexcept>
#include <string>

namespace qdiff {

// Base class for every domain error raised by the library. Callers that do
// not care about the exact failure can catch this one type.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define QDIFF_ERROR_TYPE(Name) \
  struct Name : Error {        \
    explicit Name(const std::string& what) : Error(what) {} \
  }

QDIFF_ERROR_TYPE(PoleEvaluation);
QDIFF_ERROR_TYPE(BranchAmbiguity);
QDIFF_ERROR_TYPE(OddDegree);
QDIFF_ERROR_TYPE(NotDoublePole);
QDIFF_ERROR_TYPE(InfiniteCriticalPoint);
QDIFF_ERROR_TYPE(NotHigherOrderPole);
QDIFF_ERROR_TYPE(StartsAtInfiniteCriticalPoint);
QDIFF_ERROR_TYPE(NotAZero);
QDIFF_ERROR_TYPE(ZerosCoincide);
QDIFF_ERROR_TYPE(ArcThroughPole);
QDIFF_ERROR_TYPE(NoNearbyRay);
QDIFF_ERROR_TYPE(PoleOnPath);
QDIFF_ERROR_TYPE(BranchNotClosed);
QDIFF_ERROR_TYPE(DegenerateC);
QDIFF_ERROR_TYPE(ConditionABViolated);
QDIFF_ERROR_TYPE(ZeroPoleCollision);
QDIFF_ERROR_TYPE(DegenerateParams);
QDIFF_ERROR_TYPE(DegenerateSample);
QDIFF_ERROR_TYPE(DegreeTooLarge);
QDIFF_ERROR_TYPE(NonConvergence);
QDIFF_ERROR_TYPE(EdgesDontMeet);
QDIFF_ERROR_TYPE(ParseError);

#undef QDIFF_ERROR_TYPE

}  // namespace qdiff
