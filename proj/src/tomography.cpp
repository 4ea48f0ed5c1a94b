#include "tbq/tomography.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace tbq::tomo {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Mat4 tensor(const Mat2& x, const Mat2& y) {
  Mat4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = x(r / 2, c / 2) * y(r % 2, c % 2);
  return out;
}

}  // namespace

std::array<TomographySetting, 9> all_settings() {
  std::array<TomographySetting, 9> s;
  int k = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s[k++] = {static_cast<Basis>(a), static_cast<Basis>(b)};
  return s;
}

Mat2 side_effect(Basis basis, int outcome) {
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("side_effect: outcome must be 0 or 1");
  const Port port = outcome == 0 ? Port::plus : Port::minus;
  switch (basis) {
    case Basis::X:
      return interferometric_projector(0.0, port);
    case Basis::Y:
      return interferometric_projector(M_PI / 2, port);
    case Basis::Z: {
      Mat2 p = Mat2::Zero();
      p(outcome, outcome) = 1.0;
      return p;
    }
  }
  throw std::invalid_argument("side_effect: bad basis");
}

Mat4 joint_effect(const TomographySetting& s, int outcome_index) {
  if (outcome_index < 0 || outcome_index > 3)
    throw std::invalid_argument("joint_effect: outcome index must be in [0,3]");
  return tensor(side_effect(s.a, outcome_index / 2), side_effect(s.b, outcome_index % 2));
}

std::array<std::array<Mat4, 4>, 9> measurement_set() {
  std::array<std::array<Mat4, 4>, 9> out;
  const auto settings = all_settings();
  for (int s = 0; s < 9; ++s)
    for (int o = 0; o < 4; ++o) out[s][o] = joint_effect(settings[s], o);
  return out;
}

device::ReceiverConfig receiver_for_basis(Basis basis, const device::ReceiverConfig& base) {
  device::ReceiverConfig cfg = base;
  cfg.drive_voltage = 0.0;
  switch (basis) {
    case Basis::X:
      cfg.mode = device::SwitchMode::Overlap;
      cfg.theta_tps = 0.0;
      break;
    case Basis::Y:
      cfg.mode = device::SwitchMode::Overlap;
      cfg.theta_tps = M_PI / 2;
      break;
    case Basis::Z:
      cfg.mode = device::SwitchMode::Reverse;
      cfg.theta_tps = 0.0;
      break;
  }
  return cfg;
}

std::array<std::uint64_t, 4> counts_from_run(const sim::SimResult& run,
                                             const TomographySetting& setting) {
  const std::int64_t period = run.clock_period_ps;
  const std::int64_t t_bin = run.bin_separation_ps;
  struct Click {
    std::int64_t cycle;
    int outcome;
  };

  auto classify_side = [&](int side, Basis basis) {
    std::vector<Click> clicks;
    for (int det = 0; det < 2; ++det) {
      const int ch = side * 2 + det;
      for (const std::int64_t t : run.streams[ch]) {
        const std::int64_t cycle = floor_div(t + period / 2, period);
        const std::int64_t rel = t - cycle * period;
        int outcome = -1;
        if (basis == Basis::Z) {
          if (std::llabs(rel) <= t_bin / 2)
            outcome = 0;
          else if (std::llabs(rel - 2 * t_bin) <= t_bin / 2)
            outcome = 1;
        } else {
          if (std::llabs(rel - t_bin) <= t_bin / 2) outcome = det;
        }
        if (outcome >= 0) clicks.push_back({cycle, outcome});
      }
    }
    std::sort(clicks.begin(), clicks.end(),
              [](const Click& x, const Click& y) { return x.cycle < y.cycle; });
    return clicks;
  };

  const auto a = classify_side(0, setting.a);
  const auto b = classify_side(1, setting.b);

  std::array<std::uint64_t, 4> counts{};
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].cycle < b[j].cycle) {
      ++i;
      continue;
    }
    if (b[j].cycle < a[i].cycle) {
      ++j;
      continue;
    }
    const std::int64_t cycle = a[i].cycle;
    std::size_t i2 = i, j2 = j;
    while (i2 < a.size() && a[i2].cycle == cycle) ++i2;
    while (j2 < b.size() && b[j2].cycle == cycle) ++j2;
    if (i2 - i == 1 && j2 - j == 1) counts[a[i].outcome * 2 + b[j].outcome]++;
    i = i2;
    j = j2;
  }
  return counts;
}

namespace {

// Hermitian parameter basis: 4 diagonal units, then for each i<j the
// symmetric and antisymmetric pair.
std::array<Mat4, 16> hermitian_basis() {
  std::array<Mat4, 16> basis;
  int m = 0;
  for (int i = 0; i < 4; ++i) {
    basis[m] = Mat4::Zero();
    basis[m](i, i) = 1.0;
    ++m;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      Mat4 s = Mat4::Zero();
      s(i, j) = 1.0;
      s(j, i) = 1.0;
      basis[m++] = s;
      Mat4 t = Mat4::Zero();
      t(i, j) = cxd(0, -1);
      t(j, i) = cxd(0, 1);
      basis[m++] = t;
    }
  return basis;
}

void require_all_settings(const TomographyData& data) {
  for (int s = 0; s < 9; ++s)
    if (data.setting_total(s) == 0)
      throw std::invalid_argument("tomography: every setting needs counts");
}

}  // namespace

Mat4 linear_inversion(const TomographyData& data) {
  require_all_settings(data);
  const auto effects = measurement_set();
  const auto basis = hermitian_basis();

  Eigen::MatrixXd m(36, 16);
  Eigen::VectorXd f(36);
  int row = 0;
  for (int s = 0; s < 9; ++s) {
    const double total = static_cast<double>(data.setting_total(s));
    for (int o = 0; o < 4; ++o) {
      for (int p = 0; p < 16; ++p)
        m(row, p) = (effects[s][o] * basis[p]).trace().real();
      f(row) = static_cast<double>(data.counts[s][o]) / total;
      ++row;
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  if (qr.rank() < 16)
    throw std::runtime_error("linear_inversion: design matrix is rank deficient");
  const Eigen::VectorXd x = qr.solve(f);

  Mat4 rho = Mat4::Zero();
  for (int p = 0; p < 16; ++p) rho += x(p) * basis[p];
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-12)
    throw std::runtime_error("linear_inversion: traceless solution");
  return rho / tr;
}

Mat4 density_from_params(const TParams& p) {
  Mat4 t = Mat4::Zero();
  for (int i = 0; i < 4; ++i) t(i, i) = p(i);
  int m = 4;
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < r; ++c) {
      t(r, c) = cxd(p(m), p(m + 1));
      m += 2;
    }
  const Mat4 rho_un = t.adjoint() * t;
  const double n = rho_un.trace().real();
  if (n < 1e-300) throw std::runtime_error("density_from_params: null factorization");
  return rho_un / n;
}

TParams params_from_density(const Eigen::Ref<const Mat4>& rho) {
  // reverse Cholesky: lower-triangular T with T'T = rho, built bottom-up
  Mat4 t = Mat4::Zero();
  for (int i = 3; i >= 0; --i) {
    double d = rho(i, i).real();
    for (int m = i + 1; m < 4; ++m) d -= std::norm(t(m, i));
    t(i, i) = std::sqrt(std::max(d, 1e-12));
    for (int k = 0; k < i; ++k) {
      cxd v = rho(i, k);
      for (int m = i + 1; m < 4; ++m) v -= std::conj(t(m, i)) * t(m, k);
      t(i, k) = v / t(i, i).real();
    }
  }
  TParams p;
  for (int i = 0; i < 4; ++i) p(i) = t(i, i).real();
  int m = 4;
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < r; ++c) {
      p(m) = t(r, c).real();
      p(m + 1) = t(r, c).imag();
      m += 2;
    }
  return p;
}

double log_likelihood(const TomographyData& data, const Eigen::Ref<const Mat4>& rho) {
  const auto effects = measurement_set();
  double ll = 0.0;
  for (int s = 0; s < 9; ++s)
    for (int o = 0; o < 4; ++o) {
      const std::uint64_t n = data.counts[s][o];
      if (n == 0) continue;
      const double p = std::max((effects[s][o] * rho).trace().real(), 1e-300);
      ll += static_cast<double>(n) * std::log(p);
    }
  return ll;
}

double mle_objective(const TomographyData& data, const TParams& p) {
  return log_likelihood(data, density_from_params(p));
}

TParams mle_gradient(const TomographyData& data, const TParams& p) {
  const auto effects = measurement_set();

  Mat4 t = Mat4::Zero();
  for (int i = 0; i < 4; ++i) t(i, i) = p(i);
  int m = 4;
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < r; ++c) {
      t(r, c) = cxd(p(m), p(m + 1));
      m += 2;
    }
  const Mat4 rho_un = t.adjoint() * t;
  const double n_total_norm = rho_un.trace().real();

  double n_counts = 0.0;
  Mat4 w = Mat4::Zero();
  for (int s = 0; s < 9; ++s)
    for (int o = 0; o < 4; ++o) {
      const std::uint64_t n = data.counts[s][o];
      if (n == 0) continue;
      n_counts += static_cast<double>(n);
      const double u = std::max((effects[s][o] * rho_un).trace().real(), 1e-300);
      w += (static_cast<double>(n) / u) * (t * effects[s][o]);
    }
  w -= (n_counts / n_total_norm) * t;

  TParams g;
  for (int i = 0; i < 4; ++i) g(i) = 2.0 * w(i, i).real();
  m = 4;
  for (int r = 1; r < 4; ++r)
    for (int c = 0; c < r; ++c) {
      g(m) = 2.0 * w(r, c).real();
      g(m + 1) = 2.0 * w(r, c).imag();
      m += 2;
    }
  return g;
}

Mat4 mle_reconstruct(const TomographyData& data, MleInfo* info, const MleOptions& options) {
  require_all_settings(data);

  // physical projection of the linear inversion as the starting point
  Mat4 rho0 = linear_inversion(data);
  Eigen::SelfAdjointEigenSolver<Mat4> es(rho0);
  Eigen::Vector4d lam = es.eigenvalues().cwiseMax(1e-6);
  rho0 = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  rho0 /= rho0.trace().real();

  TParams p = params_from_density(rho0);
  double ll = mle_objective(data, p);
  TParams g = mle_gradient(data, p);

  double step = 1.0 / (g.norm() + 1.0);
  int settled = 0;
  std::uint64_t it = 0;
  bool converged = false;

  TParams prev_p = p;
  TParams prev_g = g;
  bool have_prev = false;

  for (; it < options.max_iterations; ++it) {
    double t_step = step;
    if (have_prev) {
      const TParams dp = p - prev_p;
      const TParams dg = g - prev_g;
      const double denom = dp.dot(dg);
      if (denom < 0.0) {  // concave direction: Barzilai-Borwein step
        const double bb = -dp.squaredNorm() / denom;
        if (std::isfinite(bb) && bb > 0.0) t_step = std::min(bb, 1e6);
      }
    }

    double improvement = 0.0;
    TParams cand;
    double ll_cand = 0.0;
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      cand = p + t_step * g;
      ll_cand = mle_objective(data, cand);
      if (ll_cand >= ll) {
        accepted = true;
        break;
      }
      t_step *= 0.5;
    }
    if (accepted) {
      improvement = ll_cand - ll;
      prev_p = p;
      prev_g = g;
      have_prev = true;
      p = cand;
      ll = ll_cand;
      g = mle_gradient(data, p);
      step = t_step * 2.0;
    }

    settled = improvement < options.tolerance ? settled + 1 : 0;
    if (settled >= options.settle_iterations) {
      converged = true;
      ++it;
      break;
    }
  }

  MleInfo result_info{it, ll, converged};
  if (info) *info = result_info;
  const Mat4 rho = density_from_params(p);
  if (!converged) throw MleNotConverged(rho, result_info);
  return rho;
}

}  // namespace tbq::tomo
