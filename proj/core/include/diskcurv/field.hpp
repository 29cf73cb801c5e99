#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Core>

namespace diskcurv {

using Vector = Eigen::VectorXd;

// Nodal values on every node of a DiskMesh.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Vector values) : values_(std::move(values)) {}

  static ScalarField constant(std::size_t node_count, double value) {
    return ScalarField(Vector::Constant(static_cast<Eigen::Index>(node_count), value));
  }

  const Vector& values() const noexcept { return values_; }
  Vector& values() noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }

  bool all_finite() const;

 private:
  Vector values_;
};

// Values on the boundary nodes of a DiskMesh, in cyclic order.
class BoundaryTrace {
 public:
  BoundaryTrace() = default;
  explicit BoundaryTrace(Vector values) : values_(std::move(values)) {}

  static BoundaryTrace constant(std::size_t boundary_count, double value) {
    return BoundaryTrace(Vector::Constant(static_cast<Eigen::Index>(boundary_count), value));
  }

  const Vector& values() const noexcept { return values_; }
  Vector& values() noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }

  bool all_finite() const;

 private:
  Vector values_;
};

// Throws InvalidFieldError naming `what` if the field has the wrong length or
// contains NaN/Inf.
void require_valid(const ScalarField& field, std::size_t node_count, std::string_view what);
void require_valid(const BoundaryTrace& trace, std::size_t boundary_count, std::string_view what);

}  // namespace diskcurv
