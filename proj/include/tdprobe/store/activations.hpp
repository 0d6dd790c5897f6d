#ifndef TDPROBE_STORE_ACTIVATIONS_HPP
#define TDPROBE_STORE_ACTIVATIONS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>

namespace tdprobe {

// "ACTV" container: a single binary file carrying one activation matrix.
//
//   magic      4 bytes, "ACTV"
//   version    u32 little-endian
//   header_len u32 little-endian
//   header     UTF-8 JSON, header_len bytes
//   payload    n_steps x dim values, row-major, little-endian
//
// Header keys: run_id, block, n_steps, dim, dtype ("f32"|"f64"), source, seed.

inline constexpr std::uint32_t kActivationVersion = 1;

enum class Dtype { f32, f64 };

const char* to_string(Dtype d);
Dtype dtype_from_string(const std::string& s);
std::size_t dtype_size(Dtype d);

struct ActivationHeader {
  std::string run_id;
  int block = 0;
  std::int64_t n_steps = 0;  // filled from the matrix on write
  std::int64_t dim = 0;      // filled from the matrix on write
  Dtype dtype = Dtype::f64;
  std::string source;
  std::uint64_t seed = 0;
};

struct ActivationFile {
  Eigen::MatrixXd values;  // rows = steps
  ActivationHeader header;
};

// Payload size in bytes; also the arithmetic used by the reader to validate.
std::uint64_t activation_payload_bytes(std::int64_t n_steps, std::int64_t dim,
                                       Dtype dtype);

// Writes the matrix under the given metadata. n_steps/dim are taken from the
// matrix. Rejects non-finite values. Rewriting identical input produces a
// byte-identical file.
void write_activations(const std::filesystem::path& path,
                       const Eigen::MatrixXd& m, const ActivationHeader& meta);

// Exact inverse of write_activations. Distinct StoreErrc codes for bad magic,
// version mismatch, truncated payload and header/dim inconsistency.
ActivationFile read_activations(const std::filesystem::path& path);

}  // namespace tdprobe

#endif
