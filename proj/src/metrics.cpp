#include "senskit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "senskit/fft.hpp"
#include "senskit/serialize.hpp"

namespace senskit {

ResidualReport projection_residual(const ComplexImageStack& kspace_data,
                                   const SensitivityResult& maps) {
  kspace_data.validate();
  maps.maps.validate();
  if (kspace_data.dims != maps.maps.dims || kspace_data.channels != maps.maps.channels)
    throw DimError("data and maps must share dims and channel count");

  const Index q_count = kspace_data.channels;
  const Index n = kspace_data.voxels();
  ComplexImageStack img = kspace_data;
  for (Index q = 0; q < q_count; ++q) {
    VectorXcd vol(n);
    vol = img.channel(q);
    fft::kspace_to_image_unitary(vol.data(), img.dims);
    img.channel(q) = vol;
  }

  double num = 0, den = 0;
  VectorXcd rho(q_count), c(q_count);
  for (Index j = 0; j < n; ++j) {
    for (Index q = 0; q < q_count; ++q) {
      rho[q] = img.data[q * n + j];
      c[q] = maps.maps.data[q * n + j];
    }
    den += rho.squaredNorm();
    const double cn = c.squaredNorm();
    if (cn > 0) {
      const Cx coef = c.dot(rho) / cn;  // c^H rho / ||c||^2
      num += (rho - c * coef).squaredNorm();
    } else {
      num += rho.squaredNorm();
    }
  }

  ResidualReport report;
  report.value = den > 0 ? std::sqrt(num / den) : 0.0;
  report.config_snapshot = serialize::config_json(maps.provenance.config).dump();
  return report;
}

double gauge_aligned_max_difference(const ComplexImageStack& a, const ComplexImageStack& b) {
  if (a.dims != b.dims || a.channels != b.channels)
    throw DimError("stacks must share dims and channel count");
  const Index q_count = a.channels;
  const Index n = a.voxels();
  double worst = 0;
  for (Index j = 0; j < n; ++j) {
    Cx inner = 0;
    for (Index q = 0; q < q_count; ++q)
      inner += std::conj(b.data[q * n + j]) * a.data[q * n + j];
    const double mag = std::abs(inner);
    const Cx u = mag > 0 ? inner / mag : Cx(1, 0);
    for (Index q = 0; q < q_count; ++q)
      worst = std::max(worst, std::abs(a.data[q * n + j] - u * b.data[q * n + j]));
  }
  return worst;
}

double map_vector_angle(const VectorXcd& a, const VectorXcd& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) return 0.0;
  const double cosang = std::min(1.0, std::abs(a.dot(b)) / (na * nb));
  return std::acos(cosang);
}

double dice_coefficient(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size()) throw DimError("mask sizes differ");
  std::size_t inter = 0, ca = 0, cb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca += a[i] ? 1 : 0;
    cb += b[i] ? 1 : 0;
    inter += (a[i] && b[i]) ? 1 : 0;
  }
  if (ca + cb == 0) return 1.0;
  return 2.0 * double(inter) / double(ca + cb);
}

}  // namespace senskit
