#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

// Exact linear algebra for time-bin qubits and biphoton states: state
// construction, interferometric projectors and POVMs, Born probabilities,
// partial traces and entanglement measures. Basis convention throughout:
// |0> = early bin, |1> = late bin; two-qubit order {|00>,|01>,|10>,|11>}
// with qubit A on the left.

namespace tbq {

using cxd = std::complex<double>;
using Ket2 = Eigen::Vector2cd;
using Ket4 = Eigen::Vector4cd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

inline constexpr double kHermTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

enum class Port { plus, minus };
enum class Subsystem { A, B };

inline double port_sign(Port p) { return p == Port::plus ? 1.0 : -1.0; }

/// Preparation settings of a single time-bin qubit: real amplitudes and the
/// relative phase between the two bins.
struct TimeBinPreparation {
  double alpha = 0.0;
  double beta = 0.0;
  double theta_s = 0.0;

  void validate() const {
    if (alpha < 0.0 || beta < 0.0)
      throw std::invalid_argument("TimeBinPreparation: amplitudes must be nonnegative");
    if (std::abs(alpha * alpha + beta * beta - 1.0) > kHermTol)
      throw std::invalid_argument("TimeBinPreparation: alpha^2 + beta^2 must be 1");
  }
};

// ---------------------------------------------------------------------------
// State construction

Ket2 make_timebin_qubit(const TimeBinPreparation& prep);

/// (|00> + |11>)/sqrt(2).
Ket4 bell_phi_plus();

template <typename Derived>
auto projector(const Eigen::MatrixBase<Derived>& ket) {
  return (ket * ket.adjoint()).eval();
}

// ---------------------------------------------------------------------------
// Effects

/// Interferometric projector of the unbalanced-MZI output port:
///   P_pm(theta) = 1/2 (|0> pm e^{i theta}|1>)(<0| pm e^{-i theta}<1|).
/// Rank-1 projector (the 1/2 normalizes the ket).
Mat2 interferometric_projector(double theta, Port port);

/// Quadrature-biased three-peak POVM element: 1/4 I + 1/2 P_pm(theta).
Mat2 mode1_povm(double theta, Port port);

// ---------------------------------------------------------------------------
// Validation

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kHermTol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void validate_density(const Eigen::Ref<const Eigen::MatrixXcd>& rho);
void validate_effect(const Eigen::Ref<const Eigen::MatrixXcd>& effect);

// ---------------------------------------------------------------------------
// Born rule

/// Tr[effect * rho], checked real and clamped to [0, 1].
template <typename D1, typename D2>
double born_probability(const Eigen::MatrixBase<D1>& rho,
                        const Eigen::MatrixBase<D2>& effect) {
  if (rho.rows() != effect.rows() || rho.cols() != effect.cols() ||
      rho.rows() != rho.cols())
    throw std::invalid_argument("born_probability: dimension mismatch");
  const cxd tr = (effect.derived() * rho.derived()).trace();
  if (std::abs(tr.imag()) > 1e-10)
    throw std::runtime_error("born_probability: trace has nonreal part");
  double p = tr.real();
  if (p < -kPsdTol || p > 1.0 + kPsdTol)
    throw std::runtime_error("born_probability: probability outside [0,1]");
  return std::min(1.0, std::max(0.0, p));
}

/// Normalized two-photon coincidence fringe on |Phi+> for interferometric
/// projections: (1 + cos(theta_a + theta_b))/2 on same-side ports, with a
/// pi shift for opposite ports.
double coincidence_rate_curve(double theta_a, double theta_b, Port port_a, Port port_b);

// ---------------------------------------------------------------------------
// Reductions and measures

Mat2 partial_trace(const Eigen::Ref<const Mat4>& rho, Subsystem keep);

/// Von Neumann entropy in bits, with 0*log(0) = 0 and eigenvalues in
/// [-1e-10, 0) clipped to 0.
double entropy_bits(const Eigen::Ref<const Eigen::MatrixXcd>& rho);

double purity(const Eigen::Ref<const Eigen::MatrixXcd>& rho);
double fidelity_to_phi_plus(const Eigen::Ref<const Mat4>& rho);

/// Wootters concurrence via the Hermitian R-matrix route:
/// eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho)), rho~ = (Y(x)Y) rho* (Y(x)Y).
double concurrence(const Eigen::Ref<const Mat4>& rho);

double binary_entropy_bits(double p);

struct EntanglementMetrics {
  double purity = 0.0;
  double fidelity_to_phi_plus = 0.0;
  double concurrence = 0.0;
  double entanglement_of_formation = 0.0;
  double entropy_a = 0.0;
  double entropy_b = 0.0;
};

EntanglementMetrics entanglement_metrics(const Eigen::Ref<const Mat4>& rho);

}  // namespace tbq
