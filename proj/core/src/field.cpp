#include "diskcurv/field.hpp"

#include <string>

#include "diskcurv/errors.hpp"

namespace diskcurv {

bool ScalarField::all_finite() const { return values_.allFinite(); }

bool BoundaryTrace::all_finite() const { return values_.allFinite(); }

void require_valid(const ScalarField& field, std::size_t node_count, std::string_view what) {
  if (field.size() != node_count) {
    throw InvalidFieldError(std::string(what) + ": expected " + std::to_string(node_count) +
                            " nodal values, got " + std::to_string(field.size()));
  }
  if (!field.all_finite()) {
    throw InvalidFieldError(std::string(what) + ": field contains NaN or Inf");
  }
}

void require_valid(const BoundaryTrace& trace, std::size_t boundary_count,
                   std::string_view what) {
  if (trace.size() != boundary_count) {
    throw InvalidFieldError(std::string(what) + ": expected " + std::to_string(boundary_count) +
                            " boundary values, got " + std::to_string(trace.size()));
  }
  if (!trace.all_finite()) {
    throw InvalidFieldError(std::string(what) + ": trace contains NaN or Inf");
  }
}

}  // namespace diskcurv
