#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "commands.hpp"
#include "degsynth/pipeline.hpp"
#include "degsynth/png_io.hpp"
#include "fixtures.hpp"

using namespace degsynth;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
  }
  return files;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "degsynth");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run_main(static_cast<int>(argv.size()), argv.data());
}

// A handful of corpus images copied into a fresh HR directory.
fs::path make_hr_dir(const fs::path& root, int count) {
  const fs::path hr = root / "hr";
  fs::create_directories(hr);
  const auto paths = fixtures::corpus_paths();
  for (int i = 0; i < count; ++i) fs::copy_file(paths.at(i), hr / paths.at(i).filename());
  return hr;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("same seed gives byte-identical trees regardless of workers") {
    fixtures::TempDir tmp("cli_det");
    const fs::path hr = make_hr_dir(tmp.path(), 6);
    CHECK(run({"synth", "--hr", hr.string(), "--out", (tmp.path() / "a").string(), "--seed", "11"}) == 0);
    CHECK(run({"synth", "--hr", hr.string(), "--out", (tmp.path() / "b").string(), "--seed", "11",
               "--workers", "8"}) == 0);
    CHECK(run({"synth", "--hr", hr.string(), "--out", (tmp.path() / "c").string(), "--seed", "12"}) == 0);
    const auto a = tree(tmp.path() / "a");
    CHECK(a.size() == 6 * 3 + 1);
    CHECK(a == tree(tmp.path() / "b"));
    CHECK(a != tree(tmp.path() / "c"));
  }

  TEST_CASE("manifest replay regenerates the run bit-exactly") {
    fixtures::TempDir tmp("cli_replay");
    const fs::path hr = make_hr_dir(tmp.path(), 3);
    const fs::path first = tmp.path() / "first";
    CHECK(run({"synth", "--hr", hr.string(), "--out", first.string(), "--seed", "5", "--scale", "2"}) == 0);
    CHECK(run({"synth", "--from-manifest", (first / "manifest.json").string(), "--out",
               (tmp.path() / "again").string(), "--workers", "3"}) == 0);
    CHECK(tree(first) == tree(tmp.path() / "again"));

    // Every stored record replays to the stored pair.
    const auto m = cli::manifest_from_json(nlohmann::json::parse(slurp(first / "manifest.json")));
    CHECK(m.seed == 5);
    CHECK(m.engine_version == std::string(cli::kEngineVersion));
    REQUIRE(m.pairs.size() == 3);
    for (const auto& p : m.pairs) {
      const DegradationRecord rec = load_record(first / p.record);
      CHECK(rec.ordinal == p.ordinal);
      CHECK(rec.master_seed == 5u);
      const TrainingPair again = replay(to_rgb(load_png(hr / p.input)), rec);
      save_png(again.lr, tmp.path() / "replayed.png");
      CHECK(slurp(first / p.lr) == slurp(tmp.path() / "replayed.png"));
    }
  }

  TEST_CASE("a bad input is reported, skipped and fails the exit code") {
    fixtures::TempDir tmp("cli_bad");
    const fs::path hr = make_hr_dir(tmp.path(), 2);
    std::ofstream(hr / "broken.png") << "not a png";
    const fs::path out = tmp.path() / "out";
    CHECK(run({"synth", "--hr", hr.string(), "--out", out.string()}) != 0);
    const auto m = cli::manifest_from_json(nlohmann::json::parse(slurp(out / "manifest.json")));
    CHECK(m.pairs.size() == 2);
    REQUIRE(m.failures.size() == 1);
    CHECK(m.failures[0].input == "broken.png");
    CHECK(!m.failures[0].error.empty());
    CHECK(!fs::exists(out / "lr" / "broken.png"));
  }

  TEST_CASE("configuration errors stop the run") {
    fixtures::TempDir tmp("cli_cfg");
    const fs::path hr = make_hr_dir(tmp.path(), 1);
    std::ofstream(tmp.path() / "bad.json") << R"({"order": 2, "bogus": 1})";
    CHECK(run({"synth", "--hr", hr.string(), "--out", (tmp.path() / "o").string(), "--config",
               (tmp.path() / "bad.json").string()}) != 0);
    CHECK(!fs::exists(tmp.path() / "o" / "manifest.json"));
    CHECK(run({"synth", "--hr", (tmp.path() / "missing").string(), "--out",
               (tmp.path() / "o").string()}) != 0);
    CHECK(run({"synth", "--hr", hr.string(), "--out", (tmp.path() / "o").string(), "--scale", "3"}) != 0);
    CHECK(run({"synth", "--hr", hr.string(), "--out", (tmp.path() / "o").string(), "--config",
               (fs::path(DEGSYNTH_PROFILE_DIR) / "default.profile").string()}) == 0);
  }

  TEST_CASE("area resize by one half yields block means") {
    fixtures::TempDir tmp("cli_area");
    Image img(4, 4, 1);
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 4; ++x) img.at(0, y, x) = (16 * (y * 4 + x)) / 255.0;
    save_png(img, tmp.path() / "in.png");
    CHECK(run({"apply", "resize", "--in", (tmp.path() / "in.png").string(), "--out",
               (tmp.path() / "out.png").string(), "--mode", "area", "--scale", "0.5"}) == 0);
    const Image out = load_png(tmp.path() / "out.png");
    REQUIRE(out.height() == 2);
    REQUIRE(out.width() == 2);
    for (int by = 0; by < 2; ++by)
      for (int bx = 0; bx < 2; ++bx) {
        double mean = 0.0;
        for (int y = 0; y < 2; ++y)
          for (int x = 0; x < 2; ++x) mean += img.at(0, 2 * by + y, 2 * bx + x) / 4.0;
        CHECK(out.at(0, by, bx) == doctest::Approx(quantize_sample(mean) / 255.0));
      }
  }

  TEST_CASE("apply covers every operation") {
    fixtures::TempDir tmp("cli_apply");
    const fs::path in = fixtures::natural_image_path();
    auto out = [&](const char* name) { return (tmp.path() / name).string(); };
    CHECK(run({"apply", "blur", "--in", in.string(), "--out", out("b.png"), "--sigma1", "2"}) == 0);
    CHECK(run({"apply", "sinc", "--in", in.string(), "--out", out("s.png"), "--omega-c", "1.2"}) == 0);
    CHECK(run({"apply", "noise", "--in", in.string(), "--out", out("n.png"), "--sigma", "10"}) == 0);
    CHECK(run({"apply", "noise", "--in", in.string(), "--out", out("p.png"), "--noise", "poisson",
               "--scale", "2"}) == 0);
    CHECK(run({"apply", "jpeg", "--in", in.string(), "--out", out("j.png"), "--quality", "40"}) == 0);
    CHECK(run({"apply", "usm", "--in", in.string(), "--out", out("u.png")}) == 0);
    CHECK(run({"apply", "resize", "--in", in.string(), "--out", out("r.png"), "--height", "50",
               "--width", "70", "--mode", "bicubic"}) == 0);
    CHECK(load_png(out("r.png")).width() == 70);
    CHECK(run({"apply", "twirl", "--in", in.string(), "--out", out("x.png")}) != 0);
    CHECK(run({"apply", "resize", "--in", in.string(), "--out", out("x.png")}) != 0);

    // Same noise seed, same bytes.
    CHECK(run({"apply", "noise", "--in", in.string(), "--out", out("n2.png"), "--sigma", "10"}) == 0);
    CHECK(slurp(out("n.png")) == slurp(out("n2.png")));
  }

  TEST_CASE("kernel export keeps full precision") {
    fixtures::TempDir tmp("cli_kernel");
    KernelSpec spec;
    spec.size = 9;
    spec.shape = GeneralizedGaussianShape{2.0, 1.0, 0.4, 1.5};
    cli::cmd_kernel(spec, tmp.path() / "k", 3);
    const Kernel k = make_kernel(spec);
    std::istringstream csv(slurp(tmp.path() / "k.csv"));
    std::string line;
    int row = 0;
    while (std::getline(csv, line)) {
      std::istringstream cells(line);
      std::string cell;
      int col = 0;
      while (std::getline(cells, cell, ',')) {
        CHECK(std::stod(cell) == k.at(row - 4, col - 4));
        ++col;
      }
      CHECK(col == 9);
      ++row;
    }
    CHECK(row == 9);
    const Image png = load_png(tmp.path() / "k.png");
    CHECK(png.height() == 27);
    CHECK(png.at(0, 13, 13) == 1.0);
  }

  TEST_CASE("stats reports PSNR against a reference") {
    std::ostringstream out;
    cli::cmd_stats(fixtures::natural_image_path(), fixtures::natural_image_path(), 8, out);
    CHECK(out.str().find("psnr: identical") != std::string::npos);
    CHECK(out.str().find("channel 2") != std::string::npos);
  }

  TEST_CASE("pool bench consumes every pair") {
    cli::PoolBenchOptions opts;
    opts.producers = 2;
    opts.pairs = 6;
    opts.batch = 4;
    opts.hr_size = 160;
    const cli::PoolBenchResult r = cli::cmd_pool_bench(opts);
    CHECK(r.pairs == 6);
    CHECK(r.pairs_per_second > 0.0);
    opts.hr_size = 16;  // too small for the kernels; the producer error must surface
    CHECK_THROWS_AS(cli::cmd_pool_bench(opts), std::invalid_argument);
  }
}
