#include "senskit/maps.hpp"

#include <chrono>
#include <cmath>

#include "senskit/fft.hpp"
#include "senskit/memlog.hpp"
#include "senskit/parallel.hpp"

namespace senskit {

PipelineConfig PipelineConfig::baseline() {
  PipelineConfig cfg;
  cfg.kernel = KernelShape::rect;
  cfg.gram = GramMethod::explicit_product;
  cfg.grid = GridMode::full;
  cfg.eig = EigMethod::dense;
  return cfg;
}

PipelineConfig PipelineConfig::pisco() {
  PipelineConfig cfg;
  cfg.kernel = KernelShape::ellipsoid;
  cfg.gram = GramMethod::fft;
  cfg.grid = GridMode::reduced;
  cfg.eig = EigMethod::power;
  return cfg;
}

const char* name_of(KernelShape v) { return v == KernelShape::rect ? "rect" : "ellipsoid"; }
const char* name_of(GramMethod v) {
  return v == GramMethod::explicit_product ? "explicit" : "fft";
}
const char* name_of(GridMode v) { return v == GridMode::full ? "full" : "reduced"; }
const char* name_of(EigMethod v) { return v == EigMethod::dense ? "dense" : "power"; }
const char* name_of(MapMethod v) { return v == MapMethod::nullspace ? "nullspace" : "espirit"; }
const char* name_of(FieldPath v) { return v == FieldPath::naive ? "naive" : "fast"; }

Dims reduced_grid_dims(const Dims& calib_dims, Index pad, const Dims& full_dims) {
  if (calib_dims.size() != full_dims.size()) throw DimError("grid rank mismatch");
  Dims out(calib_dims.size());
  for (std::size_t a = 0; a < calib_dims.size(); ++a)
    out[a] = std::min(calib_dims[a] + pad, full_dims[a]);
  return out;
}

std::vector<std::uint8_t> support_mask(const ArrayXd& lambda_min_map, double mask_threshold) {
  std::vector<std::uint8_t> mask(std::size_t(lambda_min_map.size()));
  for (Index j = 0; j < lambda_min_map.size(); ++j)
    mask[std::size_t(j)] = lambda_min_map[j] < mask_threshold ? 1 : 0;
  return mask;
}

ComplexImageStack interpolate_maps(const ComplexImageStack& lowres, const Dims& full_dims) {
  lowres.validate();
  if (lowres.dims.size() != full_dims.size()) throw DimError("interpolation rank mismatch");
  for (std::size_t a = 0; a < full_dims.size(); ++a)
    if (full_dims[a] < lowres.dims[a])
      throw DimError("interpolation target smaller than source on axis " + std::to_string(a));

  const Dims& low = lowres.dims;
  const Index n_low = numel(low);
  const Index n_full = numel(full_dims);
  const Dims c_low = centers_of(low);
  const Dims c_full = centers_of(full_dims);
  const auto s_low = strides_of(low);
  const auto s_full = strides_of(full_dims);

  ComplexImageStack out(full_dims, lowres.channels, lowres.domain);
  parallel_for(0, lowres.channels, [&](Index q) {
    VectorXcd spec(n_low);
    spec = lowres.channel(q);
    fft::image_to_kspace(spec.data(), low);

    VectorXcd padded = VectorXcd::Zero(n_full);
    std::vector<Index> idx(low.size(), 0);
    Index src = 0;
    do {
      Index dst = 0;
      for (std::size_t a = 0; a < low.size(); ++a)
        dst += (idx[a] - c_low[a] + c_full[a]) * s_full[a];
      padded[dst] = spec[src++];
    } while (next_index(idx, low));
    (void)s_low;

    fft::kspace_to_image(padded.data(), full_dims);
    out.channel(q) = padded;
  });
  return out;
}

ArrayXd interpolate_real(const ArrayXd& lowres, const Dims& low_dims, const Dims& full_dims) {
  ComplexImageStack wrap(low_dims, 1, Domain::image);
  for (Index j = 0; j < lowres.size(); ++j) wrap.data[j] = Cx(lowres[j], 0.0);
  const ComplexImageStack up = interpolate_maps(wrap, full_dims);
  ArrayXd out(up.voxels());
  for (Index j = 0; j < out.size(); ++j) out[j] = up.data[j].real();
  return out;
}

std::pair<ComplexImageStack, NormalizationRecord> normalize_maps(const ComplexImageStack& raw,
                                                                 const CalibrationRegion& calib,
                                                                 double apod_width) {
  raw.validate();
  const Index q_count = raw.channels;
  const Index n = raw.voxels();
  const Dims& dims = raw.dims;
  if (dims.size() != calib.dims().size()) throw DimError("map/calibration rank mismatch");
  for (std::size_t a = 0; a < dims.size(); ++a)
    if (dims[a] < calib.dims()[a]) throw DimError("map grid smaller than calibration region");
  if (q_count != calib.channels()) throw DimError("map/calibration channel mismatch");

  ComplexImageStack maps = raw;
  NormalizationRecord rec;
  rec.sos = true;

  Index zeroed = 0;
  for (Index j = 0; j < n; ++j) {
    double sos = 0;
    for (Index q = 0; q < q_count; ++q) sos += std::norm(maps.data[q * n + j]);
    if (sos > 0) {
      const double inv = 1.0 / std::sqrt(sos);
      for (Index q = 0; q < q_count; ++q) maps.data[q * n + j] *= inv;
    } else {
      ++zeroed;
    }
  }
  rec.zeroed_voxels = zeroed;

  // Apodized zero-filled reconstruction of the calibration data on the map
  // grid, per channel.
  const Dims& ext = calib.dims();
  rec.apod_sigma.resize(ext.size());
  for (std::size_t a = 0; a < ext.size(); ++a)
    rec.apod_sigma[a] = apod_width > 0 ? apod_width : double(ext[a]) / 4.0;

  const Dims grid_center = centers_of(dims);
  const auto grid_strides = strides_of(dims);
  const Index n_calib = calib.grid.voxels();

  ComplexImageStack recon(dims, q_count, Domain::image);
  parallel_for(0, q_count, [&](Index q) {
    VectorXcd vol = VectorXcd::Zero(n);
    std::vector<Index> idx(ext.size(), 0);
    Index src = 0;
    do {
      double w = 0;
      Index dst = 0;
      for (std::size_t a = 0; a < ext.size(); ++a) {
        const double f = double(idx[a] - calib.center_offset[a]);
        w += f * f / (2.0 * rec.apod_sigma[a] * rec.apod_sigma[a]);
        dst += (idx[a] - calib.center_offset[a] + grid_center[a]) * grid_strides[a];
      }
      vol[dst] = calib.grid.data[q * n_calib + src] * std::exp(-w);
      ++src;
    } while (next_index(idx, ext));
    fft::kspace_to_image(vol.data(), dims);
    recon.channel(q) = vol;
  });

  // Coil-combine with the current maps and cancel the combined phase so the
  // combination becomes real-valued and non-negative everywhere.
  for (Index j = 0; j < n; ++j) {
    Cx combined = 0;
    for (Index q = 0; q < q_count; ++q)
      combined += std::conj(maps.data[q * n + j]) * recon.data[q * n + j];
    const double mag = std::abs(combined);
    if (mag > 0) {
      const Cx u = combined / mag;
      for (Index q = 0; q < q_count; ++q) maps.data[q * n + j] *= u;
    }
  }
  rec.phase_referenced = true;

  return {std::move(maps), rec};
}

namespace pipeline {

GramMatrix compute_gram(const CalibrationRegion& calib, const KernelSupport& support,
                        const PipelineConfig& cfg) {
  if (cfg.gram == GramMethod::fft) return gram_fft(calib, support);
  const CalibMatrix c = build_calib_matrix(calib, support);
  memlog::Scoped c_mem(std::size_t(c.entries.size()) * sizeof(Cx));
  return gram_explicit(c);
}

Dims grid_dims_for(const CalibrationRegion& calib, const Dims& full_dims,
                   const PipelineConfig& cfg) {
  if (cfg.grid == GridMode::reduced)
    return reduced_grid_dims(calib.dims(), cfg.grid_pad, full_dims);
  return full_dims;
}

GramField compute_field(const NullspaceBasis& basis, const KernelSupport& support,
                        const Dims& grid_dims, const PipelineConfig& cfg) {
  if (cfg.field == FieldPath::naive) {
    const FilterField h = filter_field_naive(basis, support, grid_dims, cfg.field_byte_cap);
    memlog::Scoped h_mem(std::size_t(h.values.size()) * sizeof(Cx));
    return gram_field_naive(h);
  }
  const AggregateW w = aggregate_w(basis);
  memlog::Scoped w_mem(std::size_t(w.entries.size()) * sizeof(Cx));
  return gram_field_fast(w, support, grid_dims);
}

RawMaps solve_field(GramField field, Index support_size, const PipelineConfig& cfg) {
  const Index q_count = field.channels;
  const Index n = field.voxels();

  EigenResult eig;
  ArrayXd lambda(n);
  if (cfg.eig == EigMethod::dense && cfg.method == MapMethod::nullspace) {
    eig = eig_dense_field(field, Extremal::smallest);
    for (Index j = 0; j < n; ++j) lambda[j] = eig.values[j] / double(support_size);
  } else {
    espirit_inplace(field, support_size);
    eig = cfg.eig == EigMethod::dense ? eig_dense_field(field, Extremal::largest)
                                      : eig_power_field(field, cfg.power_iters);
    for (Index j = 0; j < n; ++j) lambda[j] = 1.0 - eig.values[j];
  }
  memlog::Scoped eig_mem(std::size_t(eig.vectors.size() + n) * sizeof(Cx));

  RawMaps out;
  out.maps = ComplexImageStack(field.dims, q_count, Domain::image);
  for (Index q = 0; q < q_count; ++q)
    for (Index j = 0; j < n; ++j) out.maps.data[q * n + j] = eig.vectors(q, j);
  out.lambda = std::move(lambda);
  return out;
}

SensitivityResult finalize(RawMaps&& raw, const CalibrationRegion& calib, const Dims& full_dims,
                           const PipelineConfig& cfg) {
  SensitivityResult result;
  auto [normalized, rec] = normalize_maps(raw.maps, calib, cfg.apod_width);

  if (normalized.dims != full_dims) {
    result.maps = interpolate_maps(normalized, full_dims);
    result.lambda_min_map = interpolate_real(raw.lambda, normalized.dims, full_dims);
    // Interpolation bends the per-voxel magnitudes slightly; restore the
    // unit sum-of-squares gauge without touching the (smooth) phase.
    const Index n = result.maps.voxels();
    for (Index j = 0; j < n; ++j) {
      double sos = 0;
      for (Index q = 0; q < result.maps.channels; ++q)
        sos += std::norm(result.maps.data[q * n + j]);
      if (sos > 0) {
        const double inv = 1.0 / std::sqrt(sos);
        for (Index q = 0; q < result.maps.channels; ++q) result.maps.data[q * n + j] *= inv;
      }
    }
    rec.renormalized_after_interpolation = true;
  } else {
    result.maps = std::move(normalized);
    result.lambda_min_map = std::move(raw.lambda);
  }

  result.support_mask = support_mask(result.lambda_min_map, cfg.mask_threshold);
  result.normalization = rec;
  return result;
}

}  // namespace pipeline

SensitivityResult estimate_maps(const CalibrationRegion& calib, const Dims& full_dims,
                                const PipelineConfig& cfg) {
  calib.grid.validate();
  if (full_dims.size() != calib.dims().size()) throw DimError("full_dims rank mismatch");
  for (std::size_t a = 0; a < full_dims.size(); ++a)
    if (full_dims[a] < calib.dims()[a])
      throw DimError("full_dims must be at least the calibration extent");

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };

  Provenance prov;
  prov.config = cfg;
  prov.calib_dims = calib.dims();
  prov.full_dims = full_dims;
  prov.channels = calib.channels();

  const KernelSupport support = make_support(cfg.kernel, cfg.tau, int(calib.dims().size()));
  prov.support_size = support.size();
  prov.valid_shifts = 1;
  for (Index d : calib.dims()) prov.valid_shifts *= std::max<Index>(0, d - 2 * cfg.tau);

  memlog::stage_begin();
  auto t = clock::now();
  const GramMatrix gram = pipeline::compute_gram(calib, support, cfg);
  memlog::Scoped gram_mem(std::size_t(gram.entries.size()) * sizeof(Cx));
  prov.stages["gram"] = {elapsed(t, clock::now()), memlog::stage_peak()};

  memlog::stage_begin();
  t = clock::now();
  const NullspaceBasis basis = extract_nullspace(gram, cfg.nullspace_threshold);
  memlog::Scoped basis_mem(std::size_t(basis.filters.size()) * sizeof(Cx));
  prov.nullspace_rank = basis.rank();
  prov.sigma1 = basis.spectrum[0];
  prov.spectrum_normalized = singular_spectrum_report(basis);
  prov.stages["nullspace"] = {elapsed(t, clock::now()), memlog::stage_peak()};

  const Dims grid_dims = pipeline::grid_dims_for(calib, full_dims, cfg);
  prov.grid_dims = grid_dims;

  memlog::stage_begin();
  t = clock::now();
  GramField field = pipeline::compute_field(basis, support, grid_dims, cfg);
  memlog::Scoped field_mem(field.bytes());
  prov.stages["field"] = {elapsed(t, clock::now()), memlog::stage_peak()};

  memlog::stage_begin();
  t = clock::now();
  pipeline::RawMaps raw = pipeline::solve_field(std::move(field), support.size(), cfg);
  field_mem.release();
  memlog::Scoped raw_mem(std::size_t(raw.maps.data.size() + raw.lambda.size()) * sizeof(Cx));
  prov.stages["eigensolve"] = {elapsed(t, clock::now()), memlog::stage_peak()};

  memlog::stage_begin();
  t = clock::now();
  SensitivityResult result = pipeline::finalize(std::move(raw), calib, full_dims, cfg);
  memlog::Scoped maps_mem(std::size_t(result.maps.data.size()) * sizeof(Cx));
  prov.stages["post"] = {elapsed(t, clock::now()), memlog::stage_peak()};

  prov.total_seconds = elapsed(t0, clock::now());
  result.provenance = std::move(prov);
  return result;
}

}  // namespace senskit
