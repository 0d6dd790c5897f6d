#include "tdprobe/store/activations.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "json.hpp"
#include "tdprobe/errors.hpp"

namespace tdprobe {

using nlohmann::json;

const char* to_string(StoreErrc c) {
  switch (c) {
    case StoreErrc::bad_magic: return "bad magic";
    case StoreErrc::version_mismatch: return "version mismatch";
    case StoreErrc::truncated: return "truncated";
    case StoreErrc::header_mismatch: return "header mismatch";
    case StoreErrc::parse_error: return "parse error";
    case StoreErrc::order_violation: return "order violation";
    case StoreErrc::non_finite: return "non-finite value";
    case StoreErrc::io_error: return "i/o error";
  }
  return "store error";
}

const char* to_string(Dtype d) { return d == Dtype::f32 ? "f32" : "f64"; }

Dtype dtype_from_string(const std::string& s) {
  if (s == "f32") return Dtype::f32;
  if (s == "f64") return Dtype::f64;
  throw StoreError(StoreErrc::header_mismatch, "unknown dtype '" + s + "'");
}

std::size_t dtype_size(Dtype d) { return d == Dtype::f32 ? 4 : 8; }

std::uint64_t activation_payload_bytes(std::int64_t n_steps, std::int64_t dim,
                                       Dtype dtype) {
  return static_cast<std::uint64_t>(n_steps) * static_cast<std::uint64_t>(dim) *
         dtype_size(dtype);
}

namespace {

void put_u32le(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f32le(std::ostream& out, float v) {
  std::uint32_t u;
  std::memcpy(&u, &v, 4);
  put_u32le(out, u);
}

void put_f64le(std::ostream& out, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  put_u32le(out, static_cast<std::uint32_t>(u & 0xffffffffu));
  put_u32le(out, static_cast<std::uint32_t>(u >> 32));
}

float get_f32le(const unsigned char* p) {
  std::uint32_t u = get_u32le(p);
  float v;
  std::memcpy(&v, &u, 4);
  return v;
}

double get_f64le(const unsigned char* p) {
  std::uint64_t u = static_cast<std::uint64_t>(get_u32le(p)) |
                    (static_cast<std::uint64_t>(get_u32le(p + 4)) << 32);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

json header_to_json(const ActivationHeader& h) {
  json j;
  j["run_id"] = h.run_id;
  j["block"] = h.block;
  j["n_steps"] = h.n_steps;
  j["dim"] = h.dim;
  j["dtype"] = to_string(h.dtype);
  j["source"] = h.source;
  j["seed"] = h.seed;
  return j;
}

}  // namespace

void write_activations(const std::filesystem::path& path,
                       const Eigen::MatrixXd& m, const ActivationHeader& meta) {
  if (m.rows() < 1 || m.cols() < 1)
    throw StoreError(StoreErrc::header_mismatch,
                     "activation matrix must be at least 1x1");
  if (!m.allFinite())
    throw StoreError(StoreErrc::non_finite,
                     "refusing to write NaN/Inf activations to " + path.string());
  if ((meta.n_steps != 0 && meta.n_steps != m.rows()) ||
      (meta.dim != 0 && meta.dim != m.cols()))
    throw StoreError(StoreErrc::header_mismatch,
                     "matrix shape disagrees with header metadata");

  ActivationHeader h = meta;
  h.n_steps = m.rows();
  h.dim = m.cols();
  std::string header = header_to_json(h).dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw StoreError(StoreErrc::io_error, "cannot open " + path.string());

  out.write("ACTV", 4);
  put_u32le(out, kActivationVersion);
  put_u32le(out, static_cast<std::uint32_t>(header.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (h.dtype == Dtype::f32)
        put_f32le(out, static_cast<float>(m(i, j)));
      else
        put_f64le(out, m(i, j));
    }
  }
  out.flush();
  if (!out)
    throw StoreError(StoreErrc::io_error, "short write to " + path.string());
}

ActivationFile read_activations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw StoreError(StoreErrc::io_error, "cannot open " + path.string());

  unsigned char fixed[12];
  in.read(reinterpret_cast<char*>(fixed), 12);
  if (in.gcount() != 12)
    throw StoreError(StoreErrc::truncated, "file shorter than fixed prefix");
  if (std::memcmp(fixed, "ACTV", 4) != 0)
    throw StoreError(StoreErrc::bad_magic,
                     "not an ACTV container: " + path.string());
  std::uint32_t version = get_u32le(fixed + 4);
  if (version != kActivationVersion)
    throw StoreError(StoreErrc::version_mismatch,
                     "container version " + std::to_string(version) +
                         ", expected " + std::to_string(kActivationVersion));
  std::uint32_t header_len = get_u32le(fixed + 8);

  std::string header_text(header_len, '\0');
  in.read(header_text.data(), header_len);
  if (static_cast<std::uint32_t>(in.gcount()) != header_len)
    throw StoreError(StoreErrc::truncated, "header shorter than header_len");

  json j;
  try {
    j = json::parse(header_text);
  } catch (const json::exception& e) {
    throw StoreError(StoreErrc::parse_error,
                     std::string("header is not valid JSON: ") + e.what());
  }

  ActivationHeader h;
  try {
    h.run_id = j.at("run_id").get<std::string>();
    h.block = j.at("block").get<int>();
    h.n_steps = j.at("n_steps").get<std::int64_t>();
    h.dim = j.at("dim").get<std::int64_t>();
    h.dtype = dtype_from_string(j.at("dtype").get<std::string>());
    h.source = j.at("source").get<std::string>();
    h.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw StoreError(StoreErrc::header_mismatch,
                     std::string("missing or mistyped header key: ") + e.what());
  }
  if (h.block < 0 || h.n_steps < 1 || h.dim < 1)
    throw StoreError(StoreErrc::header_mismatch,
                     "header violates block>=0, n_steps>=1, dim>=1");

  std::uint64_t expected = activation_payload_bytes(h.n_steps, h.dim, h.dtype);
  std::vector<unsigned char> payload(expected);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(expected));
  if (static_cast<std::uint64_t>(in.gcount()) != expected)
    throw StoreError(StoreErrc::truncated,
                     "payload shorter than n_steps*dim*sizeof(dtype)");
  if (in.get() != std::ifstream::traits_type::eof())
    throw StoreError(StoreErrc::header_mismatch,
                     "trailing bytes after declared payload");

  ActivationFile f;
  f.header = h;
  f.values.resize(h.n_steps, h.dim);
  std::size_t stride = dtype_size(h.dtype);
  const unsigned char* p = payload.data();
  for (std::int64_t i = 0; i < h.n_steps; ++i) {
    for (std::int64_t d = 0; d < h.dim; ++d, p += stride) {
      f.values(i, d) =
          h.dtype == Dtype::f32 ? static_cast<double>(get_f32le(p)) : get_f64le(p);
    }
  }
  if (!f.values.allFinite())
    throw StoreError(StoreErrc::non_finite, "payload contains NaN/Inf");
  return f;
}

}  // namespace tdprobe
