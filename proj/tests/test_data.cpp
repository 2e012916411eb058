#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <set>

#include "ailsr/data.hpp"
#include "ailsr/image_io.hpp"
#include "ailsr/rng.hpp"
#include "ailsr/serial.hpp"
#include "oracles.hpp"

using namespace ailsr;

namespace {

std::filesystem::path temp_dir(const std::string& leaf) {
  const auto dir = std::filesystem::temp_directory_path() / "ailsr_test_data" / leaf;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ImageY random_image(int h, int w, std::uint64_t seed) {
  ImageY img(h, w);
  Rng rng(seed);
  for (double& v : img.v) v = rng.uniform();
  return img;
}

ImageY checkerboard(int h, int w) {
  ImageY img(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.at(y, x) = (y + x) % 2 == 0 ? 0.9 : 0.1;
  }
  return img;
}

void write_gray_ppm(const std::filesystem::path& path, const ImageY& img) {
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(img.h) * img.w * 3);
  for (std::size_t i = 0; i < img.v.size(); ++i) {
    const auto b = static_cast<std::uint8_t>(img.v[i] * 255.0 + 0.5);
    rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = b;
  }
  write_ppm_rgb(path, rgb, img.h, img.w);
}

}  // namespace

TEST_CASE("rgb_to_y: BT.601 anchor values") {
  Image8 white{1, 1, 3, {255, 255, 255}};
  CHECK(rgb_to_y(white).v[0] == doctest::Approx(235.0 / 255.0).epsilon(1e-9));
  Image8 black{1, 1, 3, {0, 0, 0}};
  CHECK(rgb_to_y(black).v[0] == doctest::Approx(16.0 / 255.0).epsilon(1e-9));
}

TEST_CASE("rgb_to_y: gray ramp maps monotonically") {
  double prev = -1.0;
  for (int v = 0; v <= 255; v += 5) {
    const auto b = static_cast<std::uint8_t>(v);
    Image8 gray{1, 1, 3, {b, b, b}};
    const double y = rgb_to_y(gray).v[0];
    CHECK(y > prev);
    prev = y;
  }
}

TEST_CASE("rgb_to_y: single-channel input passes through") {
  Image8 gray{1, 2, 1, {0, 255}};
  const ImageY y = rgb_to_y(gray);
  CHECK(y.v[0] == 0.0);
  CHECK(y.v[1] == 1.0);
}

TEST_CASE("rgb_to_y: unsupported channel count is rejected") {
  Image8 weird{1, 1, 2, {1, 2}};
  CHECK_THROWS_AS(rgb_to_y(weird), Error);
}

TEST_CASE("bicubic: constants are preserved (partition of unity)") {
  ImageY img(9, 7);
  for (double& v : img.v) v = 0.431;
  for (double f : {0.5, 0.7, 1.3, 2.0}) {
    const ImageY out = bicubic_resize(img, f);
    for (double v : out.v) CHECK(v == doctest::Approx(0.431).epsilon(1e-12));
  }
  const ImageY up_down = bicubic_resize(bicubic_resize(img, 2.0), 0.5);
  for (double v : up_down.v) CHECK(v == doctest::Approx(0.431).epsilon(1e-12));
}

TEST_CASE("bicubic: factor 1.0 is the identity") {
  const ImageY img = random_image(12, 9, 5);
  const ImageY out = bicubic_resize(img, 1.0);
  REQUIRE(out.h == img.h);
  REQUIRE(out.w == img.w);
  for (std::size_t i = 0; i < img.v.size(); ++i) {
    CHECK(std::abs(out.v[i] - img.v[i]) <= 1e-12);
  }
}

TEST_CASE("bicubic: ramp downscale matches the direct kernel-sum oracle") {
  ImageY ramp(8, 8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) ramp.at(y, x) = (y * 8 + x) / 63.0;
  }
  const ImageY got = bicubic_resize(ramp, 0.5);
  const ImageY want = oracle::bicubic(ramp, 4, 4);
  REQUIRE(got.h == 4);
  REQUIRE(got.w == 4);
  for (std::size_t i = 0; i < got.v.size(); ++i) {
    CHECK(std::abs(got.v[i] - want.v[i]) <= 1e-10);
  }
}

TEST_CASE("bicubic: random resizes match the oracle and stay in [0,1]") {
  const ImageY img = random_image(11, 13, 6);
  for (auto [oh, ow] : {std::pair{22, 26}, {6, 7}, {8, 19}}) {
    const ImageY got = bicubic_resize_to(img, oh, ow);
    const ImageY want = oracle::bicubic(img, oh, ow);
    for (std::size_t i = 0; i < got.v.size(); ++i) {
      CHECK(std::abs(got.v[i] - want.v[i]) <= 1e-10);
      CHECK(got.v[i] >= 0.0);
      CHECK(got.v[i] <= 1.0);
    }
  }
}

TEST_CASE("bicubic: degenerate target size is rejected") {
  const ImageY img = random_image(4, 4, 7);
  CHECK_THROWS_AS(bicubic_resize_to(img, 0, 4), ShapeError);
}

TEST_CASE("make_pair: constant image and scale 1 give x == y") {
  ImageY img(12, 12);
  for (double& v : img.v) v = 0.25;
  const TrainingPair p = make_pair("c", img, 2);
  for (std::size_t i = 0; i < p.y.v.size(); ++i) {
    CHECK(p.x.v[i] == doctest::Approx(p.y.v[i]).epsilon(1e-12));
  }
  const ImageY rnd = random_image(10, 10, 8);
  const TrainingPair p1 = make_pair("r", rnd, 1);
  CHECK(p1.x.v == p1.y.v);
}

TEST_CASE("make_pair: checkerboard at scale 2 is smoothed and matches composed resizes") {
  const ImageY board = checkerboard(12, 12);
  const TrainingPair p = make_pair("b", board, 2);
  // composed oracle: down then up
  const ImageY down = oracle::bicubic(board, 6, 6);
  const ImageY up = oracle::bicubic(down, 12, 12);
  double max_dev = 0.0;
  for (std::size_t i = 0; i < p.x.v.size(); ++i) {
    CHECK(std::abs(p.x.v[i] - up.v[i]) <= 1e-10);
    max_dev = std::max(max_dev, std::abs(p.x.v[i] - p.y.v[i]));
  }
  CHECK(max_dev > 0.1);  // high-frequency content was lost
}

TEST_CASE("make_pair: odd sizes are center-cropped to a multiple of the scale") {
  const ImageY img = random_image(13, 15, 9);
  const TrainingPair p = make_pair("odd", img, 2);
  CHECK(p.y.h == 12);
  CHECK(p.y.w == 14);
  CHECK(p.x.h == 12);
}

TEST_CASE("make_pair: image smaller than the scale is rejected") {
  const ImageY img = random_image(2, 2, 10);
  CHECK_THROWS_AS(make_pair("tiny", img, 3), ShapeError);
}

TEST_CASE("augment: full recipe yields 24 variants") {
  const ImageY img = random_image(20, 20, 11);
  const auto variants = augment(img, AugmentSpec::full());
  CHECK(variants.size() == 24);  // 3 scales x (1 + 3 rotations) x 2 flips
  std::set<std::string> tags;
  for (const auto& [tag, v] : variants) tags.insert(tag);
  CHECK(tags.size() == 24);
}

TEST_CASE("augment: identity-only recipe returns just the original") {
  const ImageY img = random_image(8, 8, 12);
  const auto variants = augment(img, AugmentSpec::none());
  REQUIRE(variants.size() == 1);
  CHECK(variants[0].second.v == img.v);
}

TEST_CASE("augment: count matches the combinatorial formula for every subset") {
  const ImageY img = random_image(16, 16, 13);
  const std::vector<std::vector<int>> rot_sets = {{}, {90}, {180, 270}, {90, 180, 270}};
  const std::vector<std::vector<double>> scale_sets = {{1.0}, {1.0, 0.7}, {1.0, 0.7, 0.5}, {0.5}};
  for (const auto& rots : rot_sets) {
    for (const auto& scales : scale_sets) {
      for (bool flip : {false, true}) {
        AugmentSpec spec{rots, flip, scales};
        const auto variants = augment(img, spec);
        CHECK(variants.size() == scales.size() * (1 + rots.size()) * (flip ? 2 : 1));
        CHECK(variants.size() == spec.variants_per_image());
      }
    }
  }
}

TEST_CASE("augment: empty scale set is rejected") {
  AugmentSpec spec;
  spec.scales.clear();
  CHECK_THROWS_AS(augment(random_image(8, 8, 14), spec), DomainError);
}

TEST_CASE("rotations compose to the identity") {
  const ImageY img = random_image(9, 14, 15);
  const ImageY r180 = rotate90(img, 2);
  const ImageY back = rotate90(r180, 2);
  CHECK(back.v == img.v);
  const ImageY r90x4 = rotate90(rotate90(rotate90(rotate90(img, 1), 1), 1), 1);
  CHECK(r90x4.v == img.v);
  CHECK(flip_horizontal(flip_horizontal(img)).v == img.v);
}

TEST_CASE("extract_patches: grid arithmetic") {
  const ImageY img = random_image(84, 84, 16);
  const TrainingPair whole = make_pair("img", img, 2);
  CHECK(extract_patches(whole, 84, 84).size() == 1);
  CHECK(extract_patches(whole, 41, 41).size() == 4);
  CHECK_THROWS_AS(extract_patches(whole, 100, 41), ShapeError);
}

TEST_CASE("extract_patches: patch content equals a manual slice") {
  const ImageY img = random_image(10, 10, 17);
  const TrainingPair whole = make_pair("img:s1:r0", img, 2);
  const auto patches = extract_patches(whole, 4, 3);
  const PatchIdParts parts = parse_patch_id(patches[3].id + "");
  for (const TrainingPair& p : patches) {
    const PatchIdParts id = parse_patch_id(p.id);
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 4; ++x) {
        CHECK(p.y.at(y, x) == whole.y.at(id.row + y, id.col + x));
        CHECK(p.x.at(y, x) == whole.x.at(id.row + y, id.col + x));
      }
    }
  }
  CHECK(parts.source == "img");
}

TEST_CASE("patch ids are unique and parse back to their parts") {
  const ImageY img = random_image(48, 48, 18);
  std::set<std::string> ids;
  for (const auto& [tag, variant] : augment(img, AugmentSpec::full())) {
    if (variant.h < 12 || variant.w < 12) continue;
    const TrainingPair pair = make_pair("src:" + tag, variant, 2);
    for (const TrainingPair& p : extract_patches(pair, 12, 12)) {
      CHECK(ids.insert(p.id).second);
      const PatchIdParts parts = parse_patch_id(p.id);
      CHECK(parts.source == "src");
      CHECK((parts.rotation == 0 || parts.rotation == 90 || parts.rotation == 180 ||
             parts.rotation == 270));
      CHECK(parts.row % 12 == 0);
      CHECK(parts.col % 12 == 0);
    }
  }
  CHECK_THROWS_AS(parse_patch_id("garbage"), Error);
}

TEST_CASE("build_manifest: empty directory is an error") {
  const auto dir = temp_dir("empty_src");
  const auto out = temp_dir("empty_out");
  CHECK_THROWS_AS(build_manifest(dir, 2, AugmentSpec::none(), 41, 41, 1, out), IoError);
  CHECK_THROWS_AS(build_manifest(dir / "missing", 2, AugmentSpec::none(), 41, 41, 1, out),
                  IoError);
}

TEST_CASE("build_manifest: single 41x41 image without augmentation yields one patch") {
  const auto src = temp_dir("single_src");
  const auto out = temp_dir("single_out");
  write_gray_ppm(src / "only.ppm", random_image(41, 41, 19));
  const DatasetManifest m = build_manifest(src, 1, AugmentSpec::none(), 41, 41, 7, out);
  CHECK(m.records.size() == 1);
  // at scale 2 the pair is center-cropped to 40x40, so the default 41-pixel
  // geometry has no room; a 40-pixel patch fits exactly once
  const auto out40 = temp_dir("single_out40");
  const DatasetManifest m40 = build_manifest(src, 2, AugmentSpec::none(), 40, 40, 7, out40);
  CHECK(m40.records.size() == 1);
  const auto pairs = load_pairs(out40);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].y.h == 40);
}

TEST_CASE("build_manifest: deterministic bytes for identical inputs and seed") {
  const auto src = temp_dir("det_src");
  for (int i = 0; i < 3; ++i) {
    write_gray_ppm(src / ("img" + std::to_string(i) + ".ppm"), random_image(48, 48, 20 + i));
  }
  const auto out1 = temp_dir("det_out1");
  const auto out2 = temp_dir("det_out2");
  const DatasetManifest m1 = build_manifest(src, 2, AugmentSpec::full(), 12, 12, 9, out1);
  const DatasetManifest m2 = build_manifest(src, 2, AugmentSpec::full(), 12, 12, 9, out2);
  CHECK(m1.checksum == m2.checksum);
  CHECK(read_file(out1 / "patches.bin") == read_file(out2 / "patches.bin"));
  CHECK(read_file(out1 / "manifest.json") == read_file(out2 / "manifest.json"));
}

TEST_CASE("build_manifest: round-trip keeps every patch bit-exact and in [0,1]") {
  const auto src = temp_dir("rt_src");
  write_gray_ppm(src / "a.ppm", random_image(30, 30, 30));
  write_gray_ppm(src / "b.ppm", checkerboard(28, 28));
  const auto out = temp_dir("rt_out");
  const DatasetManifest m = build_manifest(src, 2, AugmentSpec{{90}, true, {1.0}}, 10, 10, 3, out);
  const auto pairs = load_pairs(out);
  CHECK(pairs.size() == m.records.size());
  for (const auto& p : pairs) {
    for (double v : p.x.v) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("build_manifest: undecodable file is reported with its path") {
  const auto src = temp_dir("bad_src");
  write_file(src / "broken.png", "this is not a png");
  CHECK_THROWS_WITH_AS(build_manifest(src, 2, AugmentSpec::none(), 8, 8, 1, temp_dir("bad_out")),
                       doctest::Contains("broken.png"), IoError);
}

TEST_CASE("load_pairs: corrupted archive fails the checksum") {
  const auto src = temp_dir("crc_src");
  write_gray_ppm(src / "a.ppm", random_image(20, 20, 33));
  const auto out = temp_dir("crc_out");
  build_manifest(src, 2, AugmentSpec::none(), 10, 10, 1, out);
  std::string blob = read_file(out / "patches.bin");
  blob[blob.size() / 3] ^= 0x02;
  write_file(out / "patches.bin", blob);
  CHECK_THROWS_AS(load_pairs(out), CorruptFileError);
}

TEST_CASE("sample corpus: both decoders cover the shipped formats") {
  const char* assets = std::getenv("AILSR_ASSETS");
  if (assets == nullptr) return;  // only wired up under ctest
  const auto images = load_eval_images(std::filesystem::path(assets) / "corpus" / "train");
  CHECK(images.size() >= 20);
  for (const auto& [id, img] : images) {
    CHECK(img.h >= 41);
    CHECK(img.w >= 41);
    for (double v : img.v) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}
