#include "tdprobe/sae/model.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "json.hpp"
#include "tdprobe/errors.hpp"

namespace tdprobe {

using nlohmann::json;

ScalingTransform fit_scaling(const Eigen::MatrixXd& h) {
  if (h.rows() < 1 || h.cols() < 1) throw ConfigError("fit_scaling: empty matrix");
  double mean_norm = h.rowwise().norm().mean();
  if (mean_norm <= 0.0)
    throw NumericalError("fit_scaling: all-zero input has no scale");
  return {mean_norm, static_cast<int>(h.cols())};
}

Eigen::VectorXd encode(const SAEModel& m, const Eigen::VectorXd& h) {
  if (h.size() != m.input_dim())
    throw ConfigError("encode: expected dim " + std::to_string(m.input_dim()));
  return ((m.w_enc * h + m.b_enc).array().max(0.0)).matrix();
}

Eigen::MatrixXd encode(const SAEModel& m, const Eigen::MatrixXd& h) {
  if (h.cols() != m.input_dim())
    throw ConfigError("encode: expected dim " + std::to_string(m.input_dim()));
  Eigen::MatrixXd z = h * m.w_enc.transpose();
  z.rowwise() += m.b_enc.transpose();
  return z.array().max(0.0).matrix();
}

Eigen::VectorXd decode(const SAEModel& m, const Eigen::VectorXd& a) {
  if (a.size() != m.latent_dim())
    throw ConfigError("decode: expected latent dim " +
                      std::to_string(m.latent_dim()));
  return m.w_dec * a + m.b_dec;
}

Eigen::MatrixXd decode(const SAEModel& m, const Eigen::MatrixXd& a) {
  if (a.cols() != m.latent_dim())
    throw ConfigError("decode: expected latent dim " +
                      std::to_string(m.latent_dim()));
  Eigen::MatrixXd h = a * m.w_dec.transpose();
  h.rowwise() += m.b_dec.transpose();
  return h;
}

Eigen::VectorXd reconstruct(const SAEModel& m, const Eigen::VectorXd& h) {
  return decode(m, encode(m, h));
}

Eigen::MatrixXd reconstruct(const SAEModel& m, const Eigen::MatrixXd& h) {
  return decode(m, encode(m, h));
}

Eigen::MatrixXd latents_for(const SAEModel& m, const Eigen::MatrixXd& h_raw) {
  return encode(m, m.scale.apply(h_raw));
}

int default_latent_dim(Task task, int input_dim) {
  return task == Task::graph ? input_dim : 2 * input_dim;
}

namespace {

constexpr char kMagic[4] = {'S', 'A', 'E', 'M'};
constexpr std::uint32_t kVersion = 1;

void put_u32le(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void put_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double v = m(i, j);
      std::uint64_t u;
      std::memcpy(&u, &v, 8);
      put_u32le(out, static_cast<std::uint32_t>(u & 0xffffffffu));
      put_u32le(out, static_cast<std::uint32_t>(u >> 32));
    }
}

std::uint32_t get_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

Eigen::MatrixXd get_matrix(const unsigned char*& p, Eigen::Index rows,
                           Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j, p += 8) {
      std::uint64_t u = static_cast<std::uint64_t>(get_u32le(p)) |
                        (static_cast<std::uint64_t>(get_u32le(p + 4)) << 32);
      double v;
      std::memcpy(&v, &u, 8);
      m(i, j) = v;
    }
  return m;
}

}  // namespace

void save_sae(const std::filesystem::path& path, const SAEModel& m) {
  if (!m.w_enc.allFinite() || !m.w_dec.allFinite() || !m.b_enc.allFinite() ||
      !m.b_dec.allFinite())
    throw StoreError(StoreErrc::non_finite, "refusing to save non-finite SAE");

  json j;
  j["d"] = m.input_dim();
  j["m"] = m.latent_dim();
  j["scale_mean_row_norm"] = m.scale.mean_row_norm;
  j["scale_dim"] = m.scale.dim;
  std::string header = j.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StoreError(StoreErrc::io_error, "cannot open " + path.string());
  out.write(kMagic, 4);
  put_u32le(out, kVersion);
  put_u32le(out, static_cast<std::uint32_t>(header.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  put_matrix(out, m.w_enc);
  put_matrix(out, m.b_enc);
  put_matrix(out, m.w_dec);
  put_matrix(out, m.b_dec);
  if (!out) throw StoreError(StoreErrc::io_error, "short write to " + path.string());
}

SAEModel load_sae(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError(StoreErrc::io_error, "cannot open " + path.string());
  unsigned char fixed[12];
  in.read(reinterpret_cast<char*>(fixed), 12);
  if (in.gcount() != 12)
    throw StoreError(StoreErrc::truncated, "file shorter than fixed prefix");
  if (std::memcmp(fixed, kMagic, 4) != 0)
    throw StoreError(StoreErrc::bad_magic, "not an SAEM container");
  if (get_u32le(fixed + 4) != kVersion)
    throw StoreError(StoreErrc::version_mismatch, "unknown SAEM version");
  std::uint32_t header_len = get_u32le(fixed + 8);

  std::string header(header_len, '\0');
  in.read(header.data(), header_len);
  if (static_cast<std::uint32_t>(in.gcount()) != header_len)
    throw StoreError(StoreErrc::truncated, "header shorter than header_len");

  json j;
  try {
    j = json::parse(header);
  } catch (const json::exception& e) {
    throw StoreError(StoreErrc::parse_error, e.what());
  }
  Eigen::Index d = 0, m = 0;
  SAEModel model;
  try {
    d = j.at("d").get<Eigen::Index>();
    m = j.at("m").get<Eigen::Index>();
    model.scale.mean_row_norm = j.at("scale_mean_row_norm").get<double>();
    model.scale.dim = j.at("scale_dim").get<int>();
  } catch (const json::exception& e) {
    throw StoreError(StoreErrc::header_mismatch, e.what());
  }

  std::size_t expected = static_cast<std::size_t>(2 * d * m + d + m) * 8;
  std::vector<unsigned char> payload(expected);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(expected));
  if (static_cast<std::size_t>(in.gcount()) != expected)
    throw StoreError(StoreErrc::truncated, "weight payload too short");

  const unsigned char* p = payload.data();
  model.w_enc = get_matrix(p, m, d);
  model.b_enc = get_matrix(p, m, 1);
  model.w_dec = get_matrix(p, d, m);
  model.b_dec = get_matrix(p, d, 1);
  return model;
}

}  // namespace tdprobe
