#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tdprobe/errors.hpp"
#include "tdprobe/rng.hpp"
#include "tdprobe/store/activations.hpp"
#include "tdprobe/store/report.hpp"
#include "tdprobe/store/trajectory.hpp"

using namespace tdprobe;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "tdprobe_store_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ActivationHeader header(Dtype dtype) {
  ActivationHeader h;
  h.run_id = "run0";
  h.block = 3;
  h.dtype = dtype;
  h.source = "test";
  h.seed = 42;
  return h;
}

}  // namespace

TEST_CASE("2x3 f64 matrix round-trips and has the documented layout") {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  fs::path p = temp_file("small.actv");
  write_activations(p, m, header(Dtype::f64));

  std::string bytes = slurp(p);
  REQUIRE(bytes.size() > 12);
  CHECK(bytes.substr(0, 4) == "ACTV");
  std::uint32_t header_len =
      static_cast<unsigned char>(bytes[8]) |
      (static_cast<unsigned char>(bytes[9]) << 8) |
      (static_cast<unsigned char>(bytes[10]) << 16) |
      (static_cast<unsigned char>(bytes[11]) << 24);
  CHECK(bytes.size() == 12 + header_len + 48);  // 2*3*8 payload bytes

  ActivationFile f = read_activations(p);
  CHECK(f.values == m);
  CHECK(f.header.run_id == "run0");
  CHECK(f.header.block == 3);
  CHECK(f.header.n_steps == 2);
  CHECK(f.header.dim == 3);
  CHECK(f.header.seed == 42);
}

TEST_CASE("f32 containers store f32(0.1), not f64(0.1)") {
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = 0.1;
  fs::path p = temp_file("f32.actv");
  write_activations(p, m, header(Dtype::f32));
  ActivationFile f = read_activations(p);
  CHECK(f.values(0, 0) == static_cast<double>(0.1f));
  CHECK(f.values(0, 0) != 0.1);
}

TEST_CASE("payload arithmetic matches the 18000 x 8192 f32 ingestion case") {
  CHECK(activation_payload_bytes(18000, 8192, Dtype::f32) == 589824000ull);
  CHECK(activation_payload_bytes(2, 3, Dtype::f64) == 48ull);
}

TEST_CASE("round-trip is bit-exact over random matrices, both dtypes") {
  Rng rng(7);
  for (int it = 0; it < 100; ++it) {
    int rows = 1 + rng.uniform_int(6);
    int cols = 1 + rng.uniform_int(6);
    Dtype dtype = it % 2 == 0 ? Dtype::f64 : Dtype::f32;
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        double v = rng.normal() * std::pow(10.0, rng.uniform(-3, 3));
        m(i, j) = dtype == Dtype::f32 ? static_cast<double>(static_cast<float>(v)) : v;
      }
    fs::path p = temp_file("prop.actv");
    write_activations(p, m, header(dtype));
    ActivationFile f = read_activations(p);
    REQUIRE(f.values.rows() == rows);
    REQUIRE(f.values.cols() == cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) REQUIRE(f.values(i, j) == m(i, j));
  }
}

TEST_CASE("rewriting identical input yields byte-identical files") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(4, 5);
  fs::path a = temp_file("rw_a.actv");
  fs::path b = temp_file("rw_b.actv");
  write_activations(a, m, header(Dtype::f64));
  write_activations(b, m, header(Dtype::f64));
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("non-finite values are rejected at write time") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(1, 1) = std::numeric_limits<double>::quiet_NaN();
  fs::path p = temp_file("nan.actv");
  CHECK_THROWS_WITH_AS(write_activations(p, m, header(Dtype::f64)),
                       doctest::Contains("NaN"), StoreError);
}

TEST_CASE("reader errors carry distinct codes") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(2, 2);
  fs::path p = temp_file("good.actv");
  write_activations(p, m, header(Dtype::f64));
  std::string good = slurp(p);

  fs::path bad = temp_file("bad.actv");

  SUBCASE("bad magic") {
    std::string b = good;
    b.replace(0, 4, "XXXX");
    spit(bad, b);
    try {
      read_activations(bad);
      FAIL("expected error");
    } catch (const StoreError& e) {
      CHECK(e.code() == StoreErrc::bad_magic);
    }
  }
  SUBCASE("version mismatch") {
    std::string b = good;
    b[4] = 9;
    spit(bad, b);
    try {
      read_activations(bad);
      FAIL("expected error");
    } catch (const StoreError& e) {
      CHECK(e.code() == StoreErrc::version_mismatch);
    }
  }
  SUBCASE("payload one byte short") {
    spit(bad, good.substr(0, good.size() - 1));
    try {
      read_activations(bad);
      FAIL("expected error");
    } catch (const StoreError& e) {
      CHECK(e.code() == StoreErrc::truncated);
    }
  }
  SUBCASE("trailing bytes beyond the declared payload") {
    spit(bad, good + "x");
    try {
      read_activations(bad);
      FAIL("expected error");
    } catch (const StoreError& e) {
      CHECK(e.code() == StoreErrc::header_mismatch);
    }
  }
  SUBCASE("header missing a required key") {
    // Rebuild the file with a header lacking "dim".
    std::string hdr = "{\"block\":0,\"dtype\":\"f64\",\"n_steps\":1,"
                      "\"run_id\":\"x\",\"seed\":0,\"source\":\"t\"}";
    std::string b = "ACTV";
    b += '\x01'; b += '\0'; b += '\0'; b += '\0';
    b += static_cast<char>(hdr.size()); b += '\0'; b += '\0'; b += '\0';
    b += hdr;
    b += std::string(8, '\0');
    spit(bad, b);
    try {
      read_activations(bad);
      FAIL("expected error");
    } catch (const StoreError& e) {
      CHECK(e.code() == StoreErrc::header_mismatch);
    }
  }
}

TEST_CASE("payload bytes are little-endian (hand-written fixture)") {
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = 1.0;  // f32 bits 0x3F800000
  fs::path p = temp_file("le.actv");
  write_activations(p, m, header(Dtype::f32));
  std::string bytes = slurp(p);
  REQUIRE(bytes.size() >= 4);
  std::string payload = bytes.substr(bytes.size() - 4);
  CHECK(static_cast<unsigned char>(payload[0]) == 0x00);
  CHECK(static_cast<unsigned char>(payload[1]) == 0x00);
  CHECK(static_cast<unsigned char>(payload[2]) == 0x80);
  CHECK(static_cast<unsigned char>(payload[3]) == 0x3F);

  // Fixed prefix: magic + version 1 + header_len, all little-endian.
  CHECK(static_cast<unsigned char>(bytes[4]) == 0x01);
  CHECK(static_cast<unsigned char>(bytes[5]) == 0x00);
  CHECK(static_cast<unsigned char>(bytes[6]) == 0x00);
  CHECK(static_cast<unsigned char>(bytes[7]) == 0x00);
}

TEST_CASE("trajectory logs append and load in order") {
  fs::path p = temp_file("traj.jsonl");
  TrajectoryWriter w(p, "run7", Task::grid_world, {{"goal_state", "24"}});
  TrajStep s;
  s.episode = 0;
  s.t = 0;
  s.state = 0;
  s.action = 2;
  s.reward = -1.0;
  s.next_state = 0;
  w.append(s);
  s.t = 1;
  s.state = 0;
  s.action = 0;
  s.next_state = 5;
  w.append(s);
  s.episode = 1;
  s.t = 0;
  w.append(s);

  TrajectoryLog log = load_trajectory(p);
  CHECK(log.run_id == "run7");
  CHECK(log.task == Task::grid_world);
  CHECK(log.meta.at("goal_state") == "24");
  REQUIRE(log.steps.size() == 3);
  CHECK(log.steps[0].t == 0);
  CHECK(log.steps[1].t == 1);
  CHECK(log.steps[2].episode == 1);
  CHECK(*log.steps[0].action == 2);
  CHECK(*log.steps[0].reward == -1.0);

  // Loading twice yields identical structures.
  TrajectoryLog again = load_trajectory(p);
  CHECK(again.steps.size() == log.steps.size());
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    CHECK(again.steps[i].episode == log.steps[i].episode);
    CHECK(again.steps[i].t == log.steps[i].t);
    CHECK(again.steps[i].state == log.steps[i].state);
  }
}

TEST_CASE("order violations are rejected at append time") {
  fs::path p = temp_file("order.jsonl");
  fs::remove(p);
  TrajStep s;
  s.episode = 0;
  s.t = 5;
  append_trajectory(p, s);
  s.episode = 1;
  s.t = 0;
  append_trajectory(p, s);  // new episode is fine
  s.episode = 0;
  s.t = 4;
  try {
    append_trajectory(p, s);
    FAIL("expected order violation");
  } catch (const StoreError& e) {
    CHECK(e.code() == StoreErrc::order_violation);
  }
}

TEST_CASE("an empty file is an empty log, not an error") {
  fs::path p = temp_file("empty.jsonl");
  spit(p, "");
  TrajectoryLog log = load_trajectory(p);
  CHECK(log.steps.empty());
}

TEST_CASE("parse failures name the offending line") {
  fs::path p = temp_file("broken.jsonl");
  spit(p, "{\"episode\":0,\"t\":0,\"state\":1,\"next_state\":2}\nnot json\n");
  try {
    load_trajectory(p);
    FAIL("expected parse error");
  } catch (const StoreError& e) {
    CHECK(e.code() == StoreErrc::parse_error);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("graph steps serialize absent actions and rewards as null") {
  fs::path p = temp_file("graph.jsonl");
  TrajectoryWriter w(p, "walk", Task::graph);
  TrajStep s;
  s.state = 3;
  s.next_state = 7;
  w.append(s);
  TrajectoryLog log = load_trajectory(p);
  REQUIRE(log.steps.size() == 1);
  CHECK(!log.steps[0].action.has_value());
  CHECK(!log.steps[0].reward.has_value());
}

TEST_CASE("report tables enforce kinds and quote CSV per RFC 4180") {
  ReportTable t("demo", {{"name", ColumnKind::text},
                         {"count", ColumnKind::integer},
                         {"score", ColumnKind::real}});
  t.add_row({std::string("plain"), std::int64_t{3}, 1.5});
  t.add_row({std::string("has,comma"), std::int64_t{-1}, 0.25});
  t.add_row({std::string("has \"quote\""), std::int64_t{0}, 2.0});

  CHECK_THROWS_AS(t.add_row({std::string("x"), 1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(t.add_row({std::string("x"), std::int64_t{1}}), ConfigError);

  std::ostringstream out;
  t.write_csv(out);
  std::string csv = out.str();
  CHECK(csv.find("name,count,score\r\n") == 0);
  CHECK(csv.find("\"has,comma\",-1,0.25\r\n") != std::string::npos);
  CHECK(csv.find("\"has \"\"quote\"\"\",0,2\r\n") != std::string::npos);

  CHECK(t.real_at(0, "score") == 1.5);
  CHECK(t.int_at(1, "count") == -1);
  CHECK(t.text_at(2, "name") == "has \"quote\"");
}
