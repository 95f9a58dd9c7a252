#pragma once

#include <stdexcept>
#include <string>

namespace omegastab {

// Invalid region/config parameters (bad strip order, nonpositive radius, ...).
class InvalidParameter : public std::invalid_argument {
public:
  explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

// RegionSpec with no primitives at all.
class EmptySpec : public InvalidParameter {
public:
  EmptySpec() : InvalidParameter("region spec has no primitives") {}
};

// Boundary sampling found no admissible points (degenerate region).
class EmptyRegion : public std::runtime_error {
public:
  explicit EmptyRegion(const std::string& what) : std::runtime_error(what) {}
};

class NotSymmetric : public std::invalid_argument {
public:
  explicit NotSymmetric(const std::string& what) : std::invalid_argument(what) {}
};

class NotPositiveDefinite : public std::invalid_argument {
public:
  explicit NotPositiveDefinite(const std::string& what) : std::invalid_argument(what) {}
};

class NumericalBreakdown : public std::runtime_error {
public:
  explicit NumericalBreakdown(const std::string& what) : std::runtime_error(what) {}
};

class NonConvergence : public std::runtime_error {
public:
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Backtracking step length underflowed; the caller may skip the step.
class StepCollapse : public std::runtime_error {
public:
  explicit StepCollapse(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace omegastab
