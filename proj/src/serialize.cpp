#include "senskit/serialize.hpp"

namespace senskit::serialize {

nlohmann::json config_json(const PipelineConfig& cfg) {
  return nlohmann::json{{"kernel", name_of(cfg.kernel)},
                        {"tau", cfg.tau},
                        {"gram", name_of(cfg.gram)},
                        {"nullspace_threshold", cfg.nullspace_threshold},
                        {"grid", name_of(cfg.grid)},
                        {"grid_pad", cfg.grid_pad},
                        {"eig", name_of(cfg.eig)},
                        {"power_iters", cfg.power_iters},
                        {"method", name_of(cfg.method)},
                        {"field", name_of(cfg.field)},
                        {"mask_threshold", cfg.mask_threshold},
                        {"apod_width", cfg.apod_width}};
}

nlohmann::json provenance_json(const Provenance& prov) {
  nlohmann::json stages = nlohmann::json::object();
  for (const auto& [name, stats] : prov.stages)
    stages[name] = {{"seconds", stats.seconds}, {"peak_bytes", stats.peak_bytes}};
  std::vector<double> spectrum(prov.spectrum_normalized.data(),
                               prov.spectrum_normalized.data() + prov.spectrum_normalized.size());
  return nlohmann::json{{"config", config_json(prov.config)},
                        {"calib_dims", prov.calib_dims},
                        {"full_dims", prov.full_dims},
                        {"grid_dims", prov.grid_dims},
                        {"channels", prov.channels},
                        {"support_size", prov.support_size},
                        {"valid_shifts", prov.valid_shifts},
                        {"nullspace_rank", prov.nullspace_rank},
                        {"sigma1", prov.sigma1},
                        {"spectrum_normalized", spectrum},
                        {"stages", stages},
                        {"total_seconds", prov.total_seconds}};
}

nlohmann::json normalization_json(const NormalizationRecord& rec) {
  return nlohmann::json{{"sos", rec.sos},
                        {"phase_referenced", rec.phase_referenced},
                        {"renormalized_after_interpolation", rec.renormalized_after_interpolation},
                        {"apod_sigma", rec.apod_sigma},
                        {"zeroed_voxels", rec.zeroed_voxels}};
}

}  // namespace senskit::serialize
