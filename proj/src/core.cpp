#include "tbq/core.hpp"

#include <cmath>

namespace tbq {

Ket2 make_timebin_qubit(const TimeBinPreparation& prep) {
  prep.validate();
  Ket2 k;
  k << cxd(prep.alpha, 0.0), prep.beta * std::exp(cxd(0.0, prep.theta_s));
  return k;
}

Ket4 bell_phi_plus() {
  Ket4 k;
  const double r = 1.0 / std::sqrt(2.0);
  k << cxd(r, 0), cxd(0, 0), cxd(0, 0), cxd(r, 0);
  return k;
}

Mat2 interferometric_projector(double theta, Port port) {
  Ket2 v;
  v << cxd(1.0, 0.0), port_sign(port) * std::exp(cxd(0.0, theta));
  v /= std::sqrt(2.0);
  return v * v.adjoint();
}

Mat2 mode1_povm(double theta, Port port) {
  return 0.25 * Mat2::Identity() + 0.5 * interferometric_projector(theta, port);
}

void validate_density(const Eigen::Ref<const Eigen::MatrixXcd>& rho) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("density matrix must be square");
  if (!is_hermitian(rho))
    throw std::invalid_argument("density matrix must be Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > kHermTol)
    throw std::invalid_argument("density matrix must have unit trace");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol)
    throw std::invalid_argument("density matrix must be positive semidefinite");
}

void validate_effect(const Eigen::Ref<const Eigen::MatrixXcd>& effect) {
  if (effect.rows() != effect.cols())
    throw std::invalid_argument("effect must be square");
  if (!is_hermitian(effect))
    throw std::invalid_argument("effect must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(effect, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol ||
      es.eigenvalues().maxCoeff() > 1.0 + kPsdTol)
    throw std::invalid_argument("effect eigenvalues must lie in [0, 1]");
}

double coincidence_rate_curve(double theta_a, double theta_b, Port port_a, Port port_b) {
  const double shift = (port_a == port_b) ? 0.0 : M_PI;
  return 0.5 * (1.0 + std::cos(theta_a + theta_b + shift));
}

Mat2 partial_trace(const Eigen::Ref<const Mat4>& rho, Subsystem keep) {
  Mat2 out = Mat2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        if (keep == Subsystem::A)
          out(i, j) += rho(2 * i + k, 2 * j + k);
        else
          out(i, j) += rho(2 * k + i, 2 * k + j);
      }
  return out;
}

namespace {

// Clip tiny negative eigenvalues; anything below -kPsdTol is a real defect.
double clipped_eigenvalue(double lam) {
  if (lam < -kPsdTol)
    throw std::runtime_error("eigenvalue below PSD tolerance");
  return std::max(0.0, lam);
}

}  // namespace

double entropy_bits(const Eigen::Ref<const Eigen::MatrixXcd>& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = clipped_eigenvalue(es.eigenvalues()(i));
    if (lam > 0.0) s -= lam * std::log2(lam);
  }
  return s;
}

double purity(const Eigen::Ref<const Eigen::MatrixXcd>& rho) {
  return (rho * rho).trace().real();
}

double fidelity_to_phi_plus(const Eigen::Ref<const Mat4>& rho) {
  const Ket4 phi = bell_phi_plus();
  return std::real((phi.adjoint() * rho * phi)(0, 0));
}

double concurrence(const Eigen::Ref<const Mat4>& rho) {
  Mat2 sy;
  sy << cxd(0, 0), cxd(0, -1), cxd(0, 1), cxd(0, 0);
  Mat4 yy = Mat4::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          yy(2 * i + k, 2 * j + l) = sy(i, j) * sy(k, l);

  const Mat4 rho_tilde = yy * rho.conjugate() * yy;

  Eigen::SelfAdjointEigenSolver<Mat4> es_rho(rho);
  Eigen::Vector4d lam = es_rho.eigenvalues();
  for (int i = 0; i < 4; ++i) lam(i) = clipped_eigenvalue(lam(i));
  const Mat4 sqrt_rho =
      es_rho.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es_rho.eigenvectors().adjoint();

  const Mat4 r2 = sqrt_rho * rho_tilde * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Mat4> es_r(0.5 * (r2 + r2.adjoint()));
  Eigen::Vector4d mu = es_r.eigenvalues();
  for (int i = 0; i < 4; ++i) mu(i) = std::sqrt(std::max(0.0, mu(i)));
  std::sort(mu.data(), mu.data() + 4, std::greater<double>());
  return std::max(0.0, mu(0) - mu(1) - mu(2) - mu(3));
}

double binary_entropy_bits(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("binary_entropy: p must be in [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

EntanglementMetrics entanglement_metrics(const Eigen::Ref<const Mat4>& rho) {
  validate_density(rho);
  EntanglementMetrics m;
  m.purity = purity(rho);
  m.fidelity_to_phi_plus = fidelity_to_phi_plus(rho);
  m.concurrence = concurrence(rho);
  const double c2 = m.concurrence * m.concurrence;
  m.entanglement_of_formation =
      binary_entropy_bits(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c2))));
  m.entropy_a = entropy_bits(partial_trace(rho, Subsystem::A));
  m.entropy_b = entropy_bits(partial_trace(rho, Subsystem::B));
  return m;
}

}  // namespace tbq
