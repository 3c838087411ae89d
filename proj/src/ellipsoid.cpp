#include "birelay/ellipsoid.hpp"

#include <cmath>

namespace birelay {

EllipsoidState make_ellipsoid(const Eigen::VectorXd& center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
  EllipsoidState s;
  s.center = center;
  s.shape = radius * radius *
            Eigen::MatrixXd::Identity(center.size(), center.size());
  return s;
}

bool shape_is_positive_definite(const EllipsoidState& state) {
  Eigen::LLT<Eigen::MatrixXd> llt(state.shape);
  return llt.info() == Eigen::Success;
}

double cut_extent(const EllipsoidState& state, const Eigen::VectorXd& cut) {
  return std::sqrt(std::max(0.0, cut.dot(state.shape * cut)));
}

EllipsoidState ellipsoid_step(const EllipsoidState& state,
                              const Eigen::VectorXd& cut, CutKind /*kind*/) {
  const auto q = static_cast<double>(state.center.size());
  if (cut.size() != state.center.size()) {
    throw std::invalid_argument("cut dimension mismatch");
  }
  const Eigen::VectorXd pg = state.shape * cut;
  const double denom = cut.dot(pg);
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw DegenerateCut("ellipsoid_step: g'Pg <= 0");
  }
  const double s = std::sqrt(denom);

  EllipsoidState next;
  next.center = state.center - pg / ((q + 1.0) * s);
  next.shape = (q * q / (q * q - 1.0)) *
               (state.shape - (2.0 / (q + 1.0)) * (pg * pg.transpose()) / denom);
  next.shape = 0.5 * (next.shape + next.shape.transpose().eval());
  next.iteration = state.iteration + 1;
  return next;
}

double volume_ratio(int q) {
  const double qd = q;
  return (qd / (qd + 1.0)) *
         std::pow(qd * qd / (qd * qd - 1.0), (qd - 1.0) / 2.0);
}

}  // namespace birelay
