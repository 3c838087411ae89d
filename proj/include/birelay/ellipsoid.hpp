#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace birelay {

struct DegenerateCut : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class CutKind { Objective, Constraint };

/// Search ellipsoid {x : (x-center)' shape^{-1} (x-center) <= 1} over the
/// active dual variables.
struct EllipsoidState {
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;  // symmetric positive definite
  int iteration = 0;
};

/// Ball of radius `radius` around `center`.
EllipsoidState make_ellipsoid(const Eigen::VectorXd& center, double radius);

/// True iff the shape matrix admits a Cholesky factorization.
bool shape_is_positive_definite(const EllipsoidState& state);

/// Central-cut update in dimension q = center.size():
///   center' = center - (1/(q+1)) * P g / sqrt(g'Pg)
///   P'      = q^2/(q^2-1) * (P - (2/(q+1)) * (P g)(P g)' / (g'Pg))
/// The formula is the same for objective cuts (g = dual subgradient; the
/// dual is minimized) and constraint cuts (g = gradient of the violated
/// constraint). Throws DegenerateCut when g'Pg <= 0 numerically.
EllipsoidState ellipsoid_step(const EllipsoidState& state,
                              const Eigen::VectorXd& cut, CutKind kind);

/// sqrt(g'Pg), the ellipsoid extent along the cut; the stopping quantity.
double cut_extent(const EllipsoidState& state, const Eigen::VectorXd& cut);

/// Closed-form per-step volume contraction factor
/// (q/(q+1)) * (q^2/(q^2-1))^((q-1)/2).
double volume_ratio(int q);

}  // namespace birelay
