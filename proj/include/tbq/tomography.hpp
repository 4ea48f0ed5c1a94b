#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tbq/core.hpp"
#include "tbq/sim.hpp"

// Two-qubit state tomography from the receiver's three per-side
// configurations (X: overlap theta=0, Y: overlap theta=pi/2, Z: reverse).
// Nine setting combinations give the complete 36-projector set; the density
// matrix is reconstructed by maximum likelihood over a lower-triangular
// factorization rho = T'T / Tr[T'T].

namespace tbq::tomo {

enum class Basis : int { X = 0, Y = 1, Z = 2 };

struct TomographySetting {
  Basis a = Basis::X;
  Basis b = Basis::X;
};

/// The nine settings in row-major (a, b) order: XX, XY, XZ, YX, ...
std::array<TomographySetting, 9> all_settings();

/// Per-side outcome effect for a basis: X/Y give P_{+/-}, Z the
/// computational projectors (both receiver ports counted, so the mode-3
/// per-port 1/2 factors cancel and each setting's 4 effects sum to I).
Mat2 side_effect(Basis basis, int outcome);

/// Joint effect of setting s and outcome (oa, ob); index = 2*oa + ob.
Mat4 joint_effect(const TomographySetting& s, int outcome_index);

/// All 36 effects grouped by setting.
std::array<std::array<Mat4, 4>, 9> measurement_set();

struct TomographyData {
  std::array<std::array<std::uint64_t, 4>, 9> counts{};
  double acquisition_s = 0.0;

  std::uint64_t setting_total(int s) const {
    return counts[s][0] + counts[s][1] + counts[s][2] + counts[s][3];
  }
};

/// Receiver configuration (mode and drive) that measures the given basis.
device::ReceiverConfig receiver_for_basis(Basis basis,
                                          const device::ReceiverConfig& base);

/// Classifies one setting's simulated run into the 4 outcome counts.
/// X/Y outcomes come from the detector port within the central window;
/// Z outcomes from the arrival slot, summed over ports.
std::array<std::uint64_t, 4> counts_from_run(const sim::SimResult& run,
                                             const TomographySetting& setting);

/// Hermitian, trace-one least-squares solve of the Born linear system;
/// possibly non-physical. Used as the MLE initializer.
Mat4 linear_inversion(const TomographyData& data);

// Lower-triangular factorization parameters: 4 real diagonal entries
// followed by (re, im) of the strictly-lower entries in row-major order.
using TParams = Eigen::Matrix<double, 16, 1>;

Mat4 density_from_params(const TParams& p);
TParams params_from_density(const Eigen::Ref<const Mat4>& rho);

/// Multinomial log-likelihood of the data at rho (zero-count terms drop,
/// probabilities clamped at 1e-300).
double log_likelihood(const TomographyData& data, const Eigen::Ref<const Mat4>& rho);

double mle_objective(const TomographyData& data, const TParams& p);
TParams mle_gradient(const TomographyData& data, const TParams& p);

struct MleOptions {
  std::uint64_t max_iterations = 100000;
  double tolerance = 1e-10;  // log-likelihood improvement
  int settle_iterations = 5;
};

struct MleInfo {
  std::uint64_t iterations = 0;
  double log_likelihood = 0.0;
  bool converged = false;
};

class MleNotConverged : public std::runtime_error {
 public:
  MleNotConverged(const Mat4& best, const MleInfo& info)
      : std::runtime_error("mle_reconstruct: iteration cap reached"),
        best_iterate(best),
        info(info) {}
  Mat4 best_iterate;
  MleInfo info;
};

Mat4 mle_reconstruct(const TomographyData& data, MleInfo* info = nullptr,
                     const MleOptions& options = {});

}  // namespace tbq::tomo
