#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sys/wait.h>

#include "cli_support.hpp"
#include "roimark/roimark.hpp"
#include "test_support.hpp"

using namespace roimark;
using namespace roimark::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("roimark_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    pgm::save(path("in.pgm"), make_phantom({PhantomKind::Anatomy, 256, 256, 5}));
    std::ofstream(path("epr.txt")) << "PatientID=0042;Name=DOE^JOHN;Dx=none\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(ROIMARK_CLI) + " " + args + " > " + path("stdout.txt") +
                            " 2> " + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::map<std::string, std::string> doc(const std::string& file) const {
    std::map<std::string, std::string> out;
    for (auto& [k, v] : ReportDoc::parse(read_text_file(path(file)))) out[k] = v;
    return out;
  }

  std::string embed_args() const {
    return "embed --in " + path("in.pgm") + " --out " + path("wm.pgm") +
           " --roi 28,28,200,192 --epr " + path("epr.txt") + " --k1 s3cret --k 7";
  }

  fs::path dir_;
};

}  // namespace

TEST(CliSupport, ExitCodes) {
  EXPECT_EQ(exit_code_for(ErrorCode::RoiNotTileable), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::RoiOutOfBounds), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::CapacityExceeded), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::KeyInvalid), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::InsufficientRoni), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::FormatError), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::IoError), 4);
}

TEST(CliSupport, ReportDocRoundTrip) {
  ReportDoc d("verify");
  d.add("authentic", false).add("psnr", 48.13079).add("n", std::size_t{7}).add_quoted("epr", "a: b\n\"c\"");
  d.add_list("blocks", {1, 5, 9});
  const std::string text = d.render();
  EXPECT_EQ(text.substr(0, 34), "report_version: 1\ncommand: verify\n");
  const auto fields = ReportDoc::parse(text);
  EXPECT_EQ(fields, d.fields());
  EXPECT_EQ(d.find("psnr"), "48.1308");
  EXPECT_EQ(d.find("blocks"), "[1,5,9]");
  EXPECT_EQ(nlohmann::json::parse(d.find("epr")).get<std::string>(), "a: b\n\"c\"");
}

TEST(CliSupport, TamperSpecJson) {
  const TamperSpec spec{{{1, 2, 3, 4}, {5, 6, 7, 8}}, RandomFill{123}};
  const TamperSpec back = tamper_spec_from_json(tamper_spec_to_json(spec));
  EXPECT_EQ(back.regions, spec.regions);
  EXPECT_EQ(std::get<RandomFill>(back.mode).seed, 123u);
  EXPECT_TRUE(std::holds_alternative<LsbFlip>(
      tamper_spec_from_json(nlohmann::json::parse(R"({"mode":"lsb","regions":[]})")).mode));
  EXPECT_THROW(tamper_spec_from_json(nlohmann::json::parse(R"({"mode":"blur","regions":[]})")), Error);
  EXPECT_THROW(tamper_spec_from_json(nlohmann::json::parse(R"({"mode":"constant"})")), Error);
}

TEST(CliSupport, ParseRect) {
  EXPECT_EQ(parse_rect("28,28,200,192"), (Rect{28, 28, 200, 192}));
  EXPECT_THROW(parse_rect("28,28,200"), Error);
  EXPECT_THROW(parse_rect("28,28,200,192,1"), Error);
}

TEST(CliSupport, SyntheticEprIsAsciiAndSized) {
  const std::string e = synthetic_epr(512, 3);
  EXPECT_EQ(e.size(), 512u);
  EXPECT_TRUE(is_ascii(std::span(reinterpret_cast<const std::uint8_t*>(e.data()), e.size())));
  EXPECT_EQ(e, synthetic_epr(512, 3));
}

TEST_F(CliTest, EmbedVerifyClean) {
  ASSERT_EQ(run(embed_args() + " --report " + path("embed.txt")), 0) << read_text_file(path("stderr.txt"));
  auto e = doc("embed.txt");
  EXPECT_EQ(e["report_version"], "1");
  EXPECT_EQ(e["n_blocks"], "2400");
  EXPECT_EQ(run("verify --in " + path("wm.pgm") + " --k1 s3cret --k 7 --report " + path("v.txt")), 0);
  auto v = doc("v.txt");
  EXPECT_EQ(v["authentic"], "true");
  EXPECT_EQ(v["block_comparisons"], "0");
  EXPECT_EQ(v["epr"], "\"PatientID=0042;Name=DOE^JOHN;Dx=none\\n\"");

  ASSERT_EQ(run("restore --in " + path("wm.pgm") + " --out " + path("r.pgm") + " --k1 s3cret --k 7"), 0);
  EXPECT_EQ(pgm::load(path("r.pgm")), pgm::load(path("in.pgm")));
}

TEST_F(CliTest, TamperVerifyRecover) {
  ASSERT_EQ(run(embed_args()), 0);
  std::ofstream(path("spec.json"))
      << R"({"mode":"random","seed":4,"regions":[{"x":60,"y":60,"w":12,"h":12},{"x":150,"y":90,"w":12,"h":12}]})";
  ASSERT_EQ(run("tamper --in " + path("wm.pgm") + " --out " + path("t.pgm") + " --tamper-spec " +
                path("spec.json") + " --k1 s3cret --report " + path("t.txt")),
            0)
      << read_text_file(path("stderr.txt"));
  auto t = doc("t.txt");
  EXPECT_NE(t["ground_truth_count"], "0");

  EXPECT_EQ(run("verify --in " + path("t.pgm") + " --k1 s3cret --k 7 --report " + path("v.txt")), 1);
  auto v = doc("v.txt");
  EXPECT_EQ(v["authentic"], "false");
  EXPECT_EQ(v["tampered_blocks"], t["ground_truth_blocks"]);

  EXPECT_EQ(run("recover --in " + path("t.pgm") + " --out " + path("rec.pgm") +
                " --k1 s3cret --k 7 --report " + path("rec.txt")),
            1);
  auto r = doc("rec.txt");
  EXPECT_EQ(r["recovered_count"], t["ground_truth_count"]);

  ASSERT_EQ(run("metrics --in " + path("rec.pgm") + " --ref " + path("in.pgm") +
                " --roi 28,28,200,192 --report " + path("m.txt")),
            0);
  auto m = doc("m.txt");
  EXPECT_GT(std::stod(m["psnr_db"]), 30.0);
  EXPECT_EQ(run("restore --in " + path("t.pgm") + " --out " + path("x.pgm") + " --k1 s3cret --k 7"), 1);
}

TEST_F(CliTest, ErrorExitCodes) {
  EXPECT_EQ(run("embed --in " + path("in.pgm") + " --out " + path("wm.pgm") +
                " --roi 28,28,130,192 --k1 s --k 7"),
            2);
  EXPECT_NE(read_text_file(path("stderr.txt")).find("RoiNotTileable"), std::string::npos);
  EXPECT_EQ(run("embed --in " + path("in.pgm") + " --out " + path("wm.pgm") +
                " --roi 28,28,200,192 --k1 s --k 6"),
            3);
  EXPECT_EQ(run("embed --in " + path("missing.pgm") + " --out " + path("wm.pgm") +
                " --roi 28,28,200,192 --k1 s --k 7"),
            4);
  EXPECT_EQ(run("embed --in " + path("in.pgm")), 2);
  EXPECT_EQ(run("bogus"), 2);
  ASSERT_EQ(run(embed_args()), 0);
  EXPECT_EQ(run("verify --in " + path("wm.pgm") + " --k1 wrong --k 7"), 3);
}

TEST_F(CliTest, OutputsAreDeterministic) {
  ASSERT_EQ(run(embed_args() + " --report " + path("a.txt")), 0);
  const std::string first = read_text_file(path("wm.pgm"));
  ASSERT_EQ(run(embed_args() + " --report " + path("b.txt")), 0);
  EXPECT_EQ(read_text_file(path("wm.pgm")), first);

  ASSERT_EQ(run("report --synthetic 4 --k1 s --k 7 --seed 3 --report " + path("r1.txt")), 0);
  ASSERT_EQ(run("report --synthetic 4 --k1 s --k 7 --seed 3 --report " + path("r2.txt")), 0);
  EXPECT_EQ(read_text_file(path("r1.txt")), read_text_file(path("r2.txt")));
  auto r = doc("r1.txt");
  EXPECT_EQ(r["images"], "4");
  EXPECT_EQ(r["summary.exact_localization"], "4/4");
}

TEST_F(CliTest, ReportOverDirectory) {
  fs::create_directories(dir_ / "corpus");
  for (int i = 0; i < 2; ++i) {
    pgm::save(dir_ / "corpus" / ("img" + std::to_string(i) + ".pgm"),
              make_phantom({static_cast<PhantomKind>(i), 256, 256, static_cast<std::uint64_t>(i)}));
  }
  ASSERT_EQ(run("report --in " + path("corpus") + " --roi 28,28,200,192 --k1 s --k 7 --report " +
                path("r.txt")),
            0)
      << read_text_file(path("stderr.txt"));
  auto r = doc("r.txt");
  EXPECT_EQ(r["row.0"].substr(0, 21), "img0.pgm 200x192 4262");
}
