#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "senskit/bench.hpp"
#include "senskit/io.hpp"
#include "senskit/maps.hpp"
#include "senskit/metrics.hpp"
#include "senskit/parallel.hpp"
#include "senskit/serialize.hpp"
#include "senskit/synthetic.hpp"

namespace {

using namespace senskit;

// Exit codes: 0 ok, 2 bad flags, 3 I/O, 4 empty nullspace, 5 shape mismatch.
constexpr int kExitBadFlags = 2;
constexpr int kExitIo = 3;
constexpr int kExitNullspace = 4;
constexpr int kExitShape = 5;

Dims parse_extents(const std::string& text, std::size_t rank) {
  Dims out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    out.push_back(Index(std::stoll(tok)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.size() == 1 && rank > 1) out.assign(rank, out[0]);
  if (rank != 0 && out.size() != rank)
    throw CLI::ValidationError("expected " + std::to_string(rank) + " comma-separated extents");
  return out;
}

struct EstimateFlags {
  std::string input, output, preset = "pisco";
  std::string calib;
  std::string kernel, gram, grid, eig, method, field;
  int tau = -1, power_iters = -1, threads = 0;
  double nullspace_threshold = -1, mask_threshold = -1, apod_width = 0;
  Index grid_pad = -1;
};

PipelineConfig config_from_flags(const EstimateFlags& f) {
  PipelineConfig cfg;
  if (f.preset == "baseline")
    cfg = PipelineConfig::baseline();
  else if (f.preset == "pisco")
    cfg = PipelineConfig::pisco();
  else
    throw CLI::ValidationError("unknown preset '" + f.preset + "'");

  if (!f.kernel.empty()) cfg.kernel = f.kernel == "rect" ? KernelShape::rect : KernelShape::ellipsoid;
  if (!f.gram.empty()) cfg.gram = f.gram == "explicit" ? GramMethod::explicit_product : GramMethod::fft;
  if (!f.grid.empty()) cfg.grid = f.grid == "full" ? GridMode::full : GridMode::reduced;
  if (!f.eig.empty()) cfg.eig = f.eig == "dense" ? EigMethod::dense : EigMethod::power;
  if (!f.method.empty()) cfg.method = f.method == "nullspace" ? MapMethod::nullspace : MapMethod::espirit;
  if (!f.field.empty()) cfg.field = f.field == "naive" ? FieldPath::naive : FieldPath::fast;
  if (f.tau >= 0) cfg.tau = f.tau;
  if (f.power_iters > 0) cfg.power_iters = f.power_iters;
  if (f.nullspace_threshold > 0) cfg.nullspace_threshold = f.nullspace_threshold;
  if (f.mask_threshold >= 0) cfg.mask_threshold = f.mask_threshold;
  if (f.apod_width != 0) cfg.apod_width = f.apod_width;
  if (f.grid_pad >= 0) cfg.grid_pad = f.grid_pad;
  return cfg;
}

void write_json(const nlohmann::json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << doc.dump(2) << "\n";
  if (!out.flush()) throw IoError("write failure on " + path);
}

ArrayXd magnitude_of(const ComplexImageStack& stack, Index q) {
  const Index n = stack.voxels();
  ArrayXd mag(n);
  for (Index j = 0; j < n; ++j) mag[j] = std::abs(stack.data[q * n + j]);
  return mag;
}

void save_mask_stack(const std::vector<std::uint8_t>& mask, const Dims& dims,
                     const std::string& base) {
  ComplexImageStack stack(dims, 1, Domain::image);
  for (Index j = 0; j < Index(mask.size()); ++j)
    stack.data[j] = Cx(mask[std::size_t(j)] ? 1.0 : 0.0, 0.0);
  io::save_stack(stack, base);
}

std::vector<std::uint8_t> load_mask_stack(const std::string& base) {
  const ComplexImageStack stack = io::load_stack(base);
  std::vector<std::uint8_t> mask(std::size_t(stack.voxels()));
  for (Index j = 0; j < stack.voxels(); ++j)
    mask[std::size_t(j)] = std::abs(stack.data[j]) > 0.5 ? 1 : 0;
  return mask;
}

std::string two_digits(Index q) {
  std::string s = std::to_string(q);
  return s.size() < 2 ? "0" + s : s;
}

int run_simulate(Index q, const std::string& dims_text, int tau_gen,
                 const std::string& phantom, double noise, std::uint64_t seed,
                 const std::string& output) {
  const Dims dims = parse_extents(dims_text, 2);
  const PhantomKind kind = phantom == "rectangles" ? PhantomKind::rectangles : PhantomKind::disk;
  SyntheticScene scene = make_scene(q, dims, tau_gen, seed, kind);
  scene.noise_sigma = noise;
  const ComplexImageStack kspace = forward_kspace(scene, noise, seed + 1);

  io::save_stack(kspace, output + "_kspace");
  io::save_stack(scene.true_maps, output + "_truemaps");
  save_mask_stack(scene.support_mask_true, dims, output + "_truemask");

  write_json({{"subcommand", "simulate"},
              {"q", q},
              {"dims", dims},
              {"tau_gen", tau_gen},
              {"phantom", phantom},
              {"noise", noise},
              {"seed", seed},
              {"output", output}},
             output + "_provenance.json");
  std::cout << "wrote " << output << "_kspace/_truemaps/_truemask\n";
  return 0;
}

int run_estimate(const EstimateFlags& f) {
  if (f.threads > 0) set_max_threads(f.threads);
  const ComplexImageStack stack = io::load_stack(f.input);
  if (stack.domain != Domain::kspace)
    throw IoError("estimate expects a k-space stack, got an image-domain one");
  const Dims calib_size = parse_extents(f.calib, stack.dims.size());
  const CalibrationRegion calib = extract_calibration(stack, calib_size);
  const PipelineConfig cfg = config_from_flags(f);

  const SensitivityResult result = estimate_maps(calib, stack.dims, cfg);
  const ResidualReport residual = projection_residual(stack, result);

  io::save_stack(result.maps, f.output + "_maps");
  save_mask_stack(result.support_mask, result.maps.dims, f.output + "_mask");
  {
    ComplexImageStack lam(result.maps.dims, 1, Domain::image);
    for (Index j = 0; j < lam.voxels(); ++j) lam.data[j] = Cx(result.lambda_min_map[j], 0.0);
    io::save_stack(lam, f.output + "_lambda");
  }
  if (result.maps.dims.size() == 2)
    for (Index q = 0; q < result.maps.channels; ++q)
      io::save_pgm16(magnitude_of(result.maps, q), result.maps.dims,
                     f.output + "_mag_ch" + two_digits(q) + ".pgm");
  {
    std::ofstream csv(f.output + "_spectrum.csv");
    if (!csv) throw IoError("cannot write " + f.output + "_spectrum.csv");
    csv << "index,sigma_normalized\n";
    const auto& spec = result.provenance.spectrum_normalized;
    for (Index i = 0; i < spec.size(); ++i) csv << i << "," << spec[i] << "\n";
  }

  nlohmann::json prov = serialize::provenance_json(result.provenance);
  prov["subcommand"] = "estimate";
  prov["input"] = f.input;
  prov["output"] = f.output;
  prov["preset"] = f.preset;
  prov["threads"] = max_threads();
  prov["calib"] = calib_size;
  prov["residual"] = residual.value;
  prov["normalization"] = serialize::normalization_json(result.normalization);
  write_json(prov, f.output + "_provenance.json");

  std::cout << "R=" << result.provenance.nullspace_rank << " residual=" << residual.value
            << " grid=" << numel(result.provenance.grid_dims) << " voxels\n";
  return 0;
}

int run_compare(const std::string& a_prefix, const std::string& b_prefix,
                const std::string& input, const std::string& output) {
  const ComplexImageStack a = io::load_stack(a_prefix + "_maps");
  const ComplexImageStack b = io::load_stack(b_prefix + "_maps");
  if (a.dims != b.dims || a.channels != b.channels)
    throw DimError("compared runs have different shapes");

  const double max_diff = gauge_aligned_max_difference(a, b);
  const auto mask_a = load_mask_stack(a_prefix + "_mask");
  const auto mask_b = load_mask_stack(b_prefix + "_mask");
  const double dice = dice_coefficient(mask_a, mask_b);

  nlohmann::json doc = {{"a", a_prefix},
                        {"b", b_prefix},
                        {"gauge_aligned_max_difference", max_diff},
                        {"mask_dice", dice}};

  if (!input.empty()) {
    const ComplexImageStack data = io::load_stack(input);
    SensitivityResult ra, rb;
    ra.maps = a;
    rb.maps = b;
    const double res_a = projection_residual(data, ra).value;
    const double res_b = projection_residual(data, rb).value;
    doc["residual_a"] = res_a;
    doc["residual_b"] = res_b;
    doc["residual_difference"] = std::abs(res_a - res_b);
  }

  // Gauge-aligned per-voxel difference magnitudes, one PGM per channel.
  if (a.dims.size() == 2) {
    const Index n = a.voxels();
    for (Index q = 0; q < a.channels; ++q) {
      ArrayXd diff(n);
      for (Index j = 0; j < n; ++j) {
        Cx inner = 0;
        for (Index p = 0; p < a.channels; ++p)
          inner += std::conj(b.data[p * n + j]) * a.data[p * n + j];
        const double mag = std::abs(inner);
        const Cx u = mag > 0 ? inner / mag : Cx(1, 0);
        diff[j] = std::abs(a.data[q * n + j] - u * b.data[q * n + j]);
      }
      io::save_pgm16(diff, a.dims, output + "_diff_ch" + two_digits(q) + ".pgm");
    }
  }

  write_json(doc, output + "_compare.json");
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int run_bench(const std::string& input, bool simulate, Index q, const std::string& dims_text,
              int tau_gen, const std::string& phantom, double noise, std::uint64_t seed,
              const std::string& arms, const std::string& sizes_text, int reps, int threads,
              const std::string& output) {
  if (threads > 0) set_max_threads(threads);

  ComplexImageStack kspace;
  if (simulate) {
    const Dims dims = parse_extents(dims_text, 2);
    const PhantomKind kind =
        phantom == "rectangles" ? PhantomKind::rectangles : PhantomKind::disk;
    const SyntheticScene scene = make_scene(q, dims, tau_gen, seed, kind);
    kspace = forward_kspace(scene, noise, seed + 1);
  } else {
    if (input.empty()) throw CLI::ValidationError("bench needs --input or --simulate");
    kspace = io::load_stack(input);
  }

  auto arm_config = [](const std::string& name) {
    if (name == "baseline") return PipelineConfig::baseline();
    if (name == "pisco") return PipelineConfig::pisco();
    throw CLI::ValidationError("unknown arm '" + name + "'");
  };
  const std::size_t comma = arms.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--arms needs two names");
  const std::string name_a = arms.substr(0, comma), name_b = arms.substr(comma + 1);

  std::vector<Index> sizes;
  for (Index v : parse_extents(sizes_text, 0)) sizes.push_back(v);

  BenchReport report = run_benchmark(kspace, arm_config(name_a), arm_config(name_b), sizes, reps);
  report.arm_a_name = name_a;
  report.arm_b_name = name_b;
  write_bench_csv(report, output + ".csv");
  write_bench_json(report, output + ".json");

  for (std::size_t i = 0; i < report.calib_sizes.size(); ++i)
    std::cout << "calib " << report.calib_sizes[i] << ": speedup " << report.speedups[i] << "\n";
  std::cout << "wrote " << output << ".csv and " << output << ".json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"senskit: subspace-based multichannel sensitivity map estimation"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic multichannel scene");
  Index sim_q = 8;
  std::string sim_dims = "256,256", sim_phantom = "disk", sim_output;
  int sim_tau_gen = 2;
  double sim_noise = 0.0;
  std::uint64_t sim_seed = 7;
  sim->add_option("--q", sim_q, "number of channels");
  sim->add_option("--dims", sim_dims, "grid extents, e.g. 256,256");
  sim->add_option("--tau-gen", sim_tau_gen, "map bandwidth radius");
  sim->add_option("--phantom", sim_phantom, "disk|rectangles")
      ->check(CLI::IsMember({"disk", "rectangles"}));
  sim->add_option("--noise", sim_noise, "complex noise std-dev per component");
  sim->add_option("--seed", sim_seed, "scene seed");
  sim->add_option("--output", sim_output, "output prefix")->required();

  // estimate
  auto* est = app.add_subcommand("estimate", "estimate sensitivity maps from k-space data");
  EstimateFlags ef;
  est->add_option("--input", ef.input, "input k-space stack")->required();
  est->add_option("--calib", ef.calib, "calibration extents, e.g. 24,24")->required();
  est->add_option("--preset", ef.preset, "baseline|pisco")
      ->check(CLI::IsMember({"baseline", "pisco"}));
  est->add_option("--kernel", ef.kernel, "rect|ellipsoid")
      ->check(CLI::IsMember({"rect", "ellipsoid"}));
  est->add_option("--tau", ef.tau, "kernel radius (default 3)");
  est->add_option("--gram", ef.gram, "explicit|fft")->check(CLI::IsMember({"explicit", "fft"}));
  est->add_option("--nullspace-threshold", ef.nullspace_threshold,
                  "singular value ratio cutoff (default 0.05)");
  est->add_option("--grid", ef.grid, "full|reduced")->check(CLI::IsMember({"full", "reduced"}));
  est->add_option("--grid-pad", ef.grid_pad, "reduced-grid padding (default 24)");
  est->add_option("--eig", ef.eig, "dense|power")->check(CLI::IsMember({"dense", "power"}));
  est->add_option("--power-iters", ef.power_iters, "power iterations (default 10)");
  est->add_option("--method", ef.method, "nullspace|espirit")
      ->check(CLI::IsMember({"nullspace", "espirit"}));
  est->add_option("--field", ef.field, "naive|fast")->check(CLI::IsMember({"naive", "fast"}));
  est->add_option("--mask-threshold", ef.mask_threshold, "support mask cutoff (default 0.01)");
  est->add_option("--apod-width", ef.apod_width,
                  "phase-reference apodization sigma (default extent/4)");
  est->add_option("--threads", ef.threads, "worker thread cap");
  est->add_option("--output", ef.output, "output prefix")->required();

  // compare
  auto* cmp = app.add_subcommand("compare", "compare two estimate runs");
  std::string cmp_a, cmp_b, cmp_input, cmp_output;
  cmp->add_option("--a", cmp_a, "first run prefix")->required();
  cmp->add_option("--b", cmp_b, "second run prefix")->required();
  cmp->add_option("--input", cmp_input, "k-space stack for residual comparison");
  cmp->add_option("--output", cmp_output, "output prefix")->required();

  // bench
  auto* ben = app.add_subcommand("bench", "baseline-vs-accelerated timing sweep");
  std::string ben_input, ben_arms = "baseline,pisco", ben_sizes = "24,48,96", ben_output;
  bool ben_simulate = false;
  Index ben_q = 8;
  std::string ben_dims = "256,256", ben_phantom = "disk";
  int ben_tau_gen = 2, ben_reps = 5, ben_threads = 0;
  double ben_noise = 0.01;
  std::uint64_t ben_seed = 7;
  ben->add_option("--input", ben_input, "input k-space stack");
  ben->add_flag("--simulate", ben_simulate, "generate the input scene instead");
  ben->add_option("--q", ben_q, "channels (with --simulate)");
  ben->add_option("--dims", ben_dims, "grid extents (with --simulate)");
  ben->add_option("--tau-gen", ben_tau_gen, "map bandwidth (with --simulate)");
  ben->add_option("--phantom", ben_phantom, "disk|rectangles (with --simulate)")
      ->check(CLI::IsMember({"disk", "rectangles"}));
  ben->add_option("--noise", ben_noise, "noise std-dev (with --simulate)");
  ben->add_option("--seed", ben_seed, "scene seed (with --simulate)");
  ben->add_option("--arms", ben_arms, "two arm names, e.g. baseline,pisco");
  ben->add_option("--calib-sizes", ben_sizes, "calibration sizes, e.g. 24,48,96");
  ben->add_option("--reps", ben_reps, "measured repetitions (>= 5)");
  ben->add_option("--threads", ben_threads, "worker thread cap");
  ben->add_option("--output", ben_output, "report path prefix")->required();

  try {
    app.parse(argc, argv);
    if (sim->parsed())
      return run_simulate(sim_q, sim_dims, sim_tau_gen, sim_phantom, sim_noise, sim_seed,
                          sim_output);
    if (est->parsed()) return run_estimate(ef);
    if (cmp->parsed()) return run_compare(cmp_a, cmp_b, cmp_input, cmp_output);
    if (ben->parsed())
      return run_bench(ben_input, ben_simulate, ben_q, ben_dims, ben_tau_gen, ben_phantom,
                       ben_noise, ben_seed, ben_arms, ben_sizes, ben_reps, ben_threads,
                       ben_output);
    return kExitBadFlags;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadFlags;
  } catch (const senskit::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const senskit::NullspaceEmptyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNullspace;
  } catch (const senskit::DimError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return kExitShape;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
