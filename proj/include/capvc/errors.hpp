#pragma once

#include <stdexcept>
#include <string>

namespace capvc {

// Malformed instance or solution input. line is 1-based, 0 when not tied to a line.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg : msg),
        line(line_) {}
};

// The instance admits no assignment even with every multiplicity maxed out.
// what() carries a human-readable cut witness.
struct InfeasibleInstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An LP handed to the solver has an empty feasible region.
struct LpInfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller-supplied hypothesis does not hold; what() names the failing one.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The certificate matrix lost column rank: the point is not an extreme point.
struct RankDeficiencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A property the algorithm is supposed to maintain was observed broken.
struct InternalInvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

// Exhaustive search would exceed the configured space bound.
struct SearchSpaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace capvc
