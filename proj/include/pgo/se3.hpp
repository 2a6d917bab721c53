#pragma once

// Lie-group primitives for SO(3)/SE(3).
//
// Tangent convention used throughout the library: 6-vectors are ordered
// (translation x y z, rotation x y z), rotational units in radians.
// All maps use right-multiplicative perturbations X * exp(delta).

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <cmath>

#include "pgo/errors.hpp"

namespace pgo {

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar>
using Matrix6 = Eigen::Matrix<Scalar, 6, 6>;

using Matrix3d = Eigen::Matrix3d;
using Vector3d = Eigen::Vector3d;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector12d = Eigen::Matrix<double, 12, 1>;
using Matrix12d = Eigen::Matrix<double, 12, 12>;

using Tangent = Vector6d;
using Covariance6 = Matrix6d;
using FlatVector = Vector12d;
using Covariance12 = Matrix12d;

/// Angle below which exp/log coefficients switch to their Taylor series.
inline constexpr double kSmallAngle = 1e-6;

/// Rigid-body transform: x_world = rotation * x_local + translation.
template <typename Scalar>
struct PoseT {
  Matrix3<Scalar> rotation = Matrix3<Scalar>::Identity();
  Vector3<Scalar> translation = Vector3<Scalar>::Zero();

  PoseT() = default;
  PoseT(const Matrix3<Scalar>& r, const Vector3<Scalar>& t)
      : rotation(r), translation(t) {}

  static PoseT Identity() { return PoseT(); }

  PoseT operator*(const PoseT& other) const {
    return PoseT(rotation * other.rotation,
                 rotation * other.translation + translation);
  }

  PoseT inverse() const {
    Matrix3<Scalar> rt = rotation.transpose();
    return PoseT(rt, -(rt * translation));
  }

  Vector3<Scalar> operator*(const Vector3<Scalar>& p) const {
    return rotation * p + translation;
  }
};

using Pose = PoseT<double>;

template <typename Scalar>
Matrix3<Scalar> skew(const Vector3<Scalar>& v) {
  Matrix3<Scalar> s;
  // clang-format off
  s << Scalar(0), -v.z(),     v.y(),
       v.z(),      Scalar(0), -v.x(),
       -v.y(),     v.x(),     Scalar(0);
  // clang-format on
  return s;
}

/// sin(t)/t with Taylor fallback.
template <typename Scalar>
Scalar sinc(Scalar theta) {
  if (std::abs(theta) < Scalar(kSmallAngle)) {
    Scalar t2 = theta * theta;
    return Scalar(1) - t2 / Scalar(6) + t2 * t2 / Scalar(120);
  }
  return std::sin(theta) / theta;
}

/// (1 - cos(t))/t^2 with Taylor fallback.
template <typename Scalar>
Scalar one_minus_cos_over_sq(Scalar theta) {
  if (std::abs(theta) < Scalar(kSmallAngle)) {
    Scalar t2 = theta * theta;
    return Scalar(0.5) - t2 / Scalar(24) + t2 * t2 / Scalar(720);
  }
  return (Scalar(1) - std::cos(theta)) / (theta * theta);
}

/// (t - sin(t))/t^3 with Taylor fallback.
template <typename Scalar>
Scalar theta_minus_sin_over_cube(Scalar theta) {
  if (std::abs(theta) < Scalar(kSmallAngle)) {
    Scalar t2 = theta * theta;
    return Scalar(1) / Scalar(6) - t2 / Scalar(120) + t2 * t2 / Scalar(5040);
  }
  return (theta - std::sin(theta)) / (theta * theta * theta);
}

template <typename Scalar>
Matrix3<Scalar> so3_exp(const Vector3<Scalar>& omega) {
  Scalar theta = omega.norm();
  Matrix3<Scalar> w = skew(omega);
  return Matrix3<Scalar>::Identity() + sinc(theta) * w +
         one_minus_cos_over_sq(theta) * w * w;
}

/// Rotation angle in [0, pi]; total on SO(3), robust near pi.
template <typename Scalar>
Scalar rotation_angle(const Matrix3<Scalar>& r) {
  Eigen::Quaternion<Scalar> q(r);
  return Scalar(2) * std::atan2(q.vec().norm(), std::abs(q.w()));
}

/// SO(3) logarithm. Throws AngleAtPiError within 1e-9 of angle pi.
template <typename Scalar>
Vector3<Scalar> so3_log(const Matrix3<Scalar>& r) {
  Eigen::Quaternion<Scalar> q(r);
  q.normalize();
  if (q.w() < Scalar(0)) q.coeffs() = -q.coeffs();
  Scalar vn = q.vec().norm();
  Scalar angle = Scalar(2) * std::atan2(vn, q.w());
  if (std::abs(angle - Scalar(EIGEN_PI)) < Scalar(1e-9)) {
    throw AngleAtPiError();
  }
  if (vn < Scalar(1e-12)) {
    // q.vec() ~ omega/2 for small angles.
    return Scalar(2) * q.vec();
  }
  return (angle / vn) * q.vec();
}

/// Left Jacobian of SO(3) (the V matrix of the Rodrigues formulas).
template <typename Scalar>
Matrix3<Scalar> so3_left_jacobian(const Vector3<Scalar>& omega) {
  Scalar theta = omega.norm();
  Matrix3<Scalar> w = skew(omega);
  return Matrix3<Scalar>::Identity() + one_minus_cos_over_sq(theta) * w +
         theta_minus_sin_over_cube(theta) * w * w;
}

template <typename Scalar>
Matrix3<Scalar> so3_left_jacobian_inverse(const Vector3<Scalar>& omega) {
  Scalar theta = omega.norm();
  Matrix3<Scalar> w = skew(omega);
  Scalar coeff;
  if (theta < Scalar(kSmallAngle)) {
    Scalar t2 = theta * theta;
    coeff = Scalar(1) / Scalar(12) + t2 / Scalar(720);
  } else {
    coeff = Scalar(1) / (theta * theta) -
            (Scalar(1) + std::cos(theta)) /
                (Scalar(2) * theta * std::sin(theta));
  }
  return Matrix3<Scalar>::Identity() - Scalar(0.5) * w + coeff * w * w;
}

/// SE(3) exponential. Total function; exp_se3(0) is the identity pose.
template <typename Scalar>
PoseT<Scalar> exp_se3(const Vector6<Scalar>& v) {
  Vector3<Scalar> rho = v.template head<3>();
  Vector3<Scalar> omega = v.template tail<3>();
  return PoseT<Scalar>(so3_exp(omega), so3_left_jacobian(omega) * rho);
}

/// SE(3) logarithm. Throws AngleAtPiError when the rotation angle is
/// within 1e-9 of pi.
template <typename Scalar>
Vector6<Scalar> log_se3(const PoseT<Scalar>& x) {
  Vector3<Scalar> omega = so3_log(x.rotation);
  Vector6<Scalar> v;
  v.template head<3>() = so3_left_jacobian_inverse(omega) * x.translation;
  v.template tail<3>() = omega;
  return v;
}

/// 12-vector over-parameterization: rotation columns r1, r2, r3, then t.
template <typename Scalar>
Eigen::Matrix<Scalar, 12, 1> flat(const PoseT<Scalar>& x) {
  Eigen::Matrix<Scalar, 12, 1> z;
  z.template segment<3>(0) = x.rotation.col(0);
  z.template segment<3>(3) = x.rotation.col(1);
  z.template segment<3>(6) = x.rotation.col(2);
  z.template segment<3>(9) = x.translation;
  return z;
}

template <typename Scalar>
PoseT<Scalar> unflat(const Eigen::Matrix<Scalar, 12, 1>& z) {
  Matrix3<Scalar> r;
  r.col(0) = z.template segment<3>(0);
  r.col(1) = z.template segment<3>(3);
  r.col(2) = z.template segment<3>(6);
  return PoseT<Scalar>(r, z.template segment<3>(9));
}

/// Jacobian of flat(X * exp_se3(d)) with respect to d at d = 0.
template <typename Scalar>
Eigen::Matrix<Scalar, 12, 6> flat_jacobian(const PoseT<Scalar>& x) {
  Eigen::Matrix<Scalar, 12, 6> j = Eigen::Matrix<Scalar, 12, 6>::Zero();
  for (int k = 0; k < 3; ++k) {
    j.template block<3, 3>(3 * k, 3) =
        -x.rotation * skew(Vector3<Scalar>(Vector3<Scalar>::Unit(k)));
  }
  j.template block<3, 3>(9, 0) = x.rotation;
  return j;
}

/// First-order propagation sigma -> J sigma J^T (symmetrized).
inline Covariance12 propagate_covariance(const Covariance6& sigma,
                                         const Eigen::Matrix<double, 12, 6>& j) {
  Covariance12 out = j * sigma * j.transpose();
  return 0.5 * (out + out.transpose());
}

/// Nearest rotation in Frobenius norm: U diag(1, 1, det(UV^T)) V^T.
/// Throws RankDeficientError when a singular value falls below 1e-12.
template <typename Scalar>
Matrix3<Scalar> project_to_so3(const Matrix3<Scalar>& a) {
  Eigen::JacobiSVD<Matrix3<Scalar>> svd(
      a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() < Scalar(1e-12)) {
    throw RankDeficientError("project_to_so3: input numerically rank deficient");
  }
  Matrix3<Scalar> u = svd.matrixU();
  Matrix3<Scalar> v = svd.matrixV();
  Scalar d = (u * v.transpose()).determinant();
  Vector3<Scalar> diag(Scalar(1), Scalar(1), d);
  return u * diag.asDiagonal() * v.transpose();
}

/// Moore-Penrose inverse of a symmetric PSD matrix via eigendecomposition,
/// relative cutoff 1e-10 times the largest eigenvalue.
inline Eigen::MatrixXd pinv_psd(const Eigen::MatrixXd& m,
                                double rel_cutoff = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 *
                                                     (m + m.transpose()));
  const Eigen::VectorXd& ev = eig.eigenvalues();
  double cutoff = rel_cutoff * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] > cutoff) inv[i] = 1.0 / ev[i];
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

/// Squared Mahalanobis norm v^T sigma^+ v (Moore-Penrose weight).
inline double mahalanobis_sq(const Eigen::VectorXd& v,
                             const Eigen::MatrixXd& sigma) {
  return v.dot(pinv_psd(sigma) * v);
}

/// Adjoint of SE(3) under the (translation, rotation) tangent ordering.
template <typename Scalar>
Matrix6<Scalar> adjoint_se3(const PoseT<Scalar>& x) {
  Matrix6<Scalar> ad = Matrix6<Scalar>::Zero();
  ad.template block<3, 3>(0, 0) = x.rotation;
  ad.template block<3, 3>(0, 3) = skew(x.translation) * x.rotation;
  ad.template block<3, 3>(3, 3) = x.rotation;
  return ad;
}

/// Q block of the SE(3) left Jacobian (coupling of translation and
/// rotation perturbations).
template <typename Scalar>
Matrix3<Scalar> se3_q_matrix(const Vector3<Scalar>& rho,
                             const Vector3<Scalar>& omega) {
  Scalar theta = omega.norm();
  Matrix3<Scalar> p = skew(rho);
  Matrix3<Scalar> w = skew(omega);
  Scalar c1 = theta_minus_sin_over_cube(theta);
  Scalar c2, c3;
  if (theta < Scalar(1e-4)) {
    Scalar t2 = theta * theta;
    c2 = Scalar(1) / Scalar(24) - t2 / Scalar(720);
    c3 = -Scalar(1) / Scalar(120) + t2 / Scalar(5040);
  } else {
    Scalar t2 = theta * theta;
    Scalar t4 = t2 * t2;
    c2 = (t2 / Scalar(2) + std::cos(theta) - Scalar(1)) / t4;
    c3 = (theta - std::sin(theta) - theta * t2 / Scalar(6)) / (t4 * theta);
  }
  Matrix3<Scalar> wp = w * p;
  Matrix3<Scalar> pw = p * w;
  Matrix3<Scalar> wpw = wp * w;
  return Scalar(0.5) * p + c1 * (wp + pw + wpw) +
         c2 * (w * wp + pw * w - Scalar(3) * wpw) +
         Scalar(0.5) * (c2 - Scalar(3) * c3) * (wpw * w + w * wpw);
}

/// Inverse left Jacobian of SE(3): Log(exp(d) X) = Log(X) + Jl^-1(Log X) d.
template <typename Scalar>
Matrix6<Scalar> se3_left_jacobian_inverse(const Vector6<Scalar>& xi) {
  Vector3<Scalar> rho = xi.template head<3>();
  Vector3<Scalar> omega = xi.template tail<3>();
  Matrix3<Scalar> jinv = so3_left_jacobian_inverse(omega);
  Matrix3<Scalar> q = se3_q_matrix(rho, omega);
  Matrix6<Scalar> out = Matrix6<Scalar>::Zero();
  out.template block<3, 3>(0, 0) = jinv;
  out.template block<3, 3>(3, 3) = jinv;
  out.template block<3, 3>(0, 3) = -jinv * q * jinv;
  return out;
}

/// Inverse right Jacobian: Log(X exp(d)) = Log(X) + Jr^-1(Log X) d.
template <typename Scalar>
Matrix6<Scalar> se3_right_jacobian_inverse(const Vector6<Scalar>& xi) {
  return se3_left_jacobian_inverse<Scalar>(-xi);
}

}  // namespace pgo
