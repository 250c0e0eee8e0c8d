/*
 * Copyright 2026 The infopursuit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ip/cli.hpp"
#include "ip/trace_io.hpp"

using namespace ip;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
  const fs::path dir = fs::path(IP_TEST_TMP) / "cli_fixtures";
  fs::create_directories(dir);
  return (dir / name).string();
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "ip");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

double field(const std::string& line, const std::string& key) {
  const auto at = line.find(key + "=");
  REQUIRE(at != std::string::npos);
  return std::stod(line.substr(at + key.size() + 1));
}

// 16-row attribute table with some label noise.
std::string toy_csv() {
  const auto path = scratch("toy.csv");
  std::mt19937_64 gen(1);
  std::ofstream f(path);
  f << "a,b,c,d,label\n";
  for (int i = 0; i < 16; ++i) {
    const int a = i & 1, b = (i >> 1) & 1, c = (i >> 2) & 1, d = (i >> 3) & 1;
    const int y = (a && b) || (c && (gen() % 4 == 0));
    f << a << "," << b << "," << c << "," << d << "," << (y ? "pos" : "neg") << "\n";
  }
  return path;
}

std::string xor_csv() {
  const auto path = scratch("xor.csv");
  std::ofstream(path) << "x1,x2,label\n0,0,even\n0,1,odd\n1,0,odd\n1,1,even\n";
  return path;
}

// Two digit-like classes of 6x6 images: a vertical and a horizontal bar.
std::string toy_idx(std::size_t n) {
  std::mt19937_64 gen(3);
  std::vector<std::vector<std::uint8_t>> imgs;
  std::vector<std::uint8_t> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const bool vertical = i % 2 == 0;
    std::vector<std::uint8_t> px(36);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) {
        const bool on = vertical ? (c == 2 || c == 3) : (r == 2 || r == 3);
        const bool flip = gen() % 10 == 0;
        px[r * 6 + c] = (on != flip) ? 230 : 20;
      }
    imgs.push_back(px);
    labels.push_back(vertical ? 1 : 0);
  }
  const auto ip = scratch("toy-images.idx"), lp = scratch("toy-labels.idx");
  write_idx_images(ip, 6, 6, imgs);
  write_idx_labels(lp, labels);
  return ip + "," + lp;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run({"verify"}).code == 0);
  CHECK(run({"verify", "--priors", "20", "--corrupt-huffman"}).code == 3);
  CHECK(run({}).code == 1);
  CHECK(run({"pursue", "--no-such-flag"}).code == 1);
  CHECK(run({"pursue", "--format", "csv", "--queryset", "patch:3", "--dataset", "x.csv"}).code == 1);
  CHECK(run({"pursue", "--dataset", "x.csv", "--format", "csv", "--queryset", "attr", "--term", "conf:0.1"}).code == 1);
  const auto missing = run({"pursue", "--format", "csv", "--queryset", "attr", "--model", "tabular", "--dataset",
                            scratch("missing.csv")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("data error") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("fit with one component round trips and reruns identically") {
  const auto ds = toy_idx(100);
  const auto a = scratch("k1a.json"), b = scratch("k1b.json");
  for (const auto& out : {a, b}) {
    const auto r = run({"fit", "--dataset", ds, "--queryset", "patch:2", "--model", "mixture:1", "--train-fraction",
                        "0.5", "--seed", "4", "--out", out});
    REQUIRE(r.code == 0);
  }
  CHECK(io::read_text_file(a) == io::read_text_file(b));
  CHECK(io::read_text_file(a + ".log.csv") == io::read_text_file(b + ".log.csv"));
  CHECK(io::read_text_file(a + ".log.csv").rfind("# config: ", 0) == 0);
  const auto model = io::load_model(a);
  const auto& mix = dynamic_cast<const BernoulliMixtureModel&>(*model);
  CHECK(mix.components() == 1);
  CHECK(mix.slots() == 36);
  // With K = 1 EM returns the clamped class means of the training split.
  const auto data = load_idx_images(scratch("toy-images.idx"), scratch("toy-labels.idx"), 0.5);
  const auto [train, test] = split(data, 0.5, 4);
  for (LabelIndex y = 0; y < 2; ++y)
    for (std::size_t j = 0; j < 36; ++j) {
      double on = 0.0, n = 0.0;
      for (const auto& it : train.items)
        if (it.label == y) {
          on += std::get<BinaryImage>(it.instance.raw).pixels[j];
          n += 1.0;
        }
      CHECK(mix.theta(y, 0, j) == doctest::Approx(std::clamp(on / n, 1e-4, 1 - 1e-4)).epsilon(1e-12));
    }
  // Pursue with the saved model, twice.
  std::string first;
  for (int rep = 0; rep < 2; ++rep) {
    const auto out = scratch("p" + std::to_string(rep) + ".jsonl");
    const auto r = run({"pursue", "--dataset", ds, "--queryset", "patch:2", "--model", "mixture:1", "--model-file", a,
                        "--train-fraction", "0.5", "--seed", "4", "--out", out});
    REQUIRE(r.code == 0);
    CHECK(field(r.out, "accuracy") > 0.9);
    if (rep == 0) first = io::read_text_file(out);
    else CHECK(io::read_text_file(out) == first);
  }
  const auto file = io::traces_from_jsonl(first);
  CHECK(file.traces.size() == 50);
  CHECK(file.config.at("labels") == io::json::array({"0", "1"}));
  CHECK_FALSE(file.config.contains("workers"));
}

TEST_CASE("mean length matches the library on a 16 instance toy") {
  const auto csv = toy_csv();
  const auto r = run({"pursue", "--format", "csv", "--queryset", "attr", "--model", "tabular", "--alpha", "0",
                      "--dataset", csv, "--test-dataset", csv, "--term", "conf:0.05:1", "--out",
                      scratch("toy.jsonl")});
  REQUIRE(r.code == 0);
  const auto data = load_attribute_csv(csv);
  const auto qs = build_attribute_queryset(data.attribute_names);
  TabularJointModel m(data, qs, 0.0);
  TerminationConfig t;
  t.epsilon = 0.05;
  CHECK(field(r.out, "mean_length") == doctest::Approx(ip_expected_length(m, qs, data, t).expected_length));
  CHECK(field(r.out, "instances") == 16);
}

TEST_CASE("single query toy") {
  const auto path = scratch("one.csv");
  std::ofstream(path) << "noise,signal,label\n0,0,n\n1,0,n\n0,1,p\n1,1,p\n";
  const auto r = run({"pursue", "--format", "csv", "--queryset", "attr", "--model", "tabular", "--alpha", "0",
                      "--dataset", path, "--test-dataset", path});
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "mean_length") == 1.0);
  CHECK(field(r.out, "accuracy") == 1.0);
  const auto file = io::traces_from_jsonl(r.out.substr(0, r.out.rfind("instances=")));
  for (const auto& t : file.traces) CHECK(t.steps.at(0).query == 1);
}

TEST_CASE("curve rows agree with direct runs") {
  const auto csv = toy_csv();
  const std::vector<std::string> common{"--format", "csv", "--queryset", "attr", "--model", "tabular",
                                        "--dataset", csv, "--test-dataset", csv};
  auto args = common;
  args.insert(args.begin(), "curve");
  for (const auto& s : {"--eps", "0.3,0.01,0.1"}) args.emplace_back(s);
  const auto r = run(args);
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# config: ", 0) == 0);
  std::getline(in, line);
  CHECK(line == "epsilon,mean_length,accuracy");
  for (const char* eps : {"0.01", "0.1", "0.3"}) {
    REQUIRE(std::getline(in, line));
    auto a = common;
    a.insert(a.begin(), "pursue");
    a.emplace_back("--term");
    a.emplace_back(std::string("conf:") + eps + ":1");
    const auto p = run(a);
    const auto summary = p.out.substr(p.out.rfind("instances="));
    std::istringstream row(line);
    std::string e, len, acc;
    std::getline(row, e, ',');
    std::getline(row, len, ',');
    std::getline(row, acc, ',');
    CHECK(std::stod(e) == std::stod(eps));
    CHECK(std::stod(len) == doctest::Approx(field(summary, "mean_length")));
    CHECK(std::stod(acc) == doctest::Approx(field(summary, "accuracy")));
  }
  CHECK(run(args).out == r.out);
}

TEST_CASE("compare on xor") {
  const auto csv = xor_csv();
  const auto r = run({"compare", "--format", "csv", "--queryset", "attr", "--model", "tabular", "--alpha", "0",
                      "--dataset", csv, "--test-dataset", csv, "--term", "mi:1e-6:1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("information_pursuit,1,2\n") != std::string::npos);
  CHECK(r.out.find("cart,1,2\n") != std::string::npos);
  CHECK(r.out.find("map_using_q,1,2\n") != std::string::npos);
  const auto shallow = run({"compare", "--format", "csv", "--queryset", "attr", "--model", "tabular", "--alpha", "0",
                            "--dataset", csv, "--test-dataset", csv, "--cart-depth", "1"});
  CHECK(shallow.out.find("cart,0.5,1\n") != std::string::npos);
}

TEST_CASE("verify writes a report file") {
  const auto out = scratch("verify.txt");
  const auto r = run({"verify", "--out", out, "--priors", "30"});
  CHECK(r.code == 0);
  CHECK(r.out == "verification passed\n");
  const auto text = io::read_text_file(out);
  CHECK(text.rfind("# config: ", 0) == 0);
  CHECK(run({"verify", "--out", out, "--priors", "30"}).code == 0);
  CHECK(io::read_text_file(out) == text);
}
