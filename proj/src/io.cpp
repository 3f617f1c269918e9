#include "senskit/io.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include <json.hpp>

namespace senskit::io {

namespace {

std::string base_of(const std::string& path) {
  if (path.ends_with(".json")) return path.substr(0, path.size() - 5);
  if (path.ends_with(".craw")) return path.substr(0, path.size() - 5);
  return path;
}

}  // namespace

ComplexImageStack load_stack(const std::string& path) {
  const std::string base = base_of(path);
  std::ifstream sidecar(base + ".json");
  if (!sidecar) throw IoError("cannot open sidecar " + base + ".json");
  nlohmann::json meta;
  try {
    sidecar >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed sidecar " + base + ".json: " + e.what());
  }

  if (!meta.contains("version") || meta["version"].get<int>() != 1)
    throw IoError("unsupported CStack version in " + base + ".json");

  ComplexImageStack stack;
  for (const auto& d : meta.at("dims")) stack.dims.push_back(d.get<Index>());
  stack.channels = meta.at("channels").get<Index>();
  const std::string domain = meta.at("domain").get<std::string>();
  if (domain == "kspace")
    stack.domain = Domain::kspace;
  else if (domain == "image")
    stack.domain = Domain::image;
  else
    throw IoError("unknown domain tag '" + domain + "' in " + base + ".json");

  const Index count = stack.channels * numel(stack.dims);
  stack.data.resize(count);
  stack.validate();

  const std::string raw_path = base + ".craw";
  std::error_code ec;
  const auto file_bytes = std::filesystem::file_size(raw_path, ec);
  if (ec) throw IoError("cannot stat raw file " + raw_path);
  const std::uintmax_t expected = std::uintmax_t(count) * 2 * sizeof(float);
  if (file_bytes != expected)
    throw IoError("raw size mismatch for " + raw_path + ": got " + std::to_string(file_bytes) +
                  " bytes, expected " + std::to_string(expected));

  std::ifstream raw(raw_path, std::ios::binary);
  if (!raw) throw IoError("cannot open raw file " + raw_path);
  std::vector<float> buf(std::size_t(count) * 2);
  raw.read(reinterpret_cast<char*>(buf.data()), std::streamsize(expected));
  if (!raw) throw IoError("short read from " + raw_path);
  for (Index i = 0; i < count; ++i)
    stack.data[i] = Cx(buf[std::size_t(2 * i)], buf[std::size_t(2 * i + 1)]);
  return stack;
}

void save_stack(const ComplexImageStack& stack, const std::string& path) {
  stack.validate();
  const std::string base = base_of(path);

  nlohmann::json meta;
  meta["version"] = 1;
  meta["dims"] = stack.dims;
  meta["channels"] = stack.channels;
  meta["domain"] = stack.domain == Domain::kspace ? "kspace" : "image";
  std::ofstream sidecar(base + ".json");
  if (!sidecar) throw IoError("cannot write sidecar " + base + ".json");
  sidecar << meta.dump(2) << "\n";
  if (!sidecar.flush()) throw IoError("write failure on " + base + ".json");

  std::ofstream raw(base + ".craw", std::ios::binary);
  if (!raw) throw IoError("cannot write raw file " + base + ".craw");
  const Index count = stack.data.size();
  std::vector<float> buf(std::size_t(count) * 2);
  for (Index i = 0; i < count; ++i) {
    buf[std::size_t(2 * i)] = float(stack.data[i].real());
    buf[std::size_t(2 * i + 1)] = float(stack.data[i].imag());
  }
  raw.write(reinterpret_cast<const char*>(buf.data()),
            std::streamsize(buf.size() * sizeof(float)));
  if (!raw.flush()) throw IoError("write failure on " + base + ".craw");
}

void save_pgm16(const ArrayXd& values, const Dims& dims, const std::string& path) {
  if (dims.size() != 2) throw DimError("PGM export is 2-D only");
  if (values.size() != numel(dims)) throw DimError("PGM value count mismatch");
  const double vmax = values.maxCoeff();
  const double scale = vmax > 0 ? 65535.0 / vmax : 0.0;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P5\n" << dims[1] << " " << dims[0] << "\n65535\n";
  std::vector<unsigned char> row(std::size_t(dims[1]) * 2);
  for (Index r = 0; r < dims[0]; ++r) {
    for (Index c = 0; c < dims[1]; ++c) {
      const double v = values[r * dims[1] + c];
      const auto u = std::uint16_t(std::min(65535.0, std::max(0.0, v * scale + 0.5)));
      row[std::size_t(2 * c)] = (unsigned char)(u >> 8);  // PGM 16-bit is big-endian
      row[std::size_t(2 * c + 1)] = (unsigned char)(u & 0xff);
    }
    out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size()));
  }
  if (!out.flush()) throw IoError("write failure on " + path);
}

ComplexImageStack quantize_f32(ComplexImageStack stack) {
  for (Index i = 0; i < stack.data.size(); ++i)
    stack.data[i] = Cx(float(stack.data[i].real()), float(stack.data[i].imag()));
  return stack;
}

}  // namespace senskit::io
