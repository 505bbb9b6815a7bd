#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "etaq/zeros.hpp"

namespace {

constexpr double kPublished[] = {14.134725141734693790, 21.022039638771554993, 25.010857580145688763};

std::string temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("etaq_zeros_" + name);
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST(LoadZeros, ParsesCommentsAndBlanks) {
  std::istringstream in("# first zeros\n14.134725141734693\n\n  21.022039638771555\n25.010857580145689\n");
  const auto z = etaq::load_zeros(in);
  ASSERT_EQ(z.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(z[i].ordinate, kPublished[i], 1e-14);
    EXPECT_EQ(z[i].source, etaq::ZeroSource::File);
    EXPECT_LE(z[i].residual, 1e-9);
  }
}

TEST(LoadZeros, FromPath) {
  const auto path = temp_file("ok.txt", "14.134725141734693\n");
  const auto z = etaq::load_zeros(path);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_THROW(etaq::load_zeros(path + ".missing"), etaq::PreconditionError);
}

TEST(LoadZeros, EmptyInput) {
  std::istringstream in("");
  EXPECT_TRUE(etaq::load_zeros(in).empty());
}

TEST(LoadZeros, MalformedLineNamesTheLine) {
  std::istringstream in("abc\n");
  try {
    etaq::load_zeros(in);
    FAIL() << "expected ParseError";
  } catch (const etaq::ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
  std::istringstream second("14.13\n21.0x\n");
  try {
    etaq::load_zeros(second);
    FAIL() << "expected ParseError";
  } catch (const etaq::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(LoadZeros, RejectsDescendingAndDropsDuplicates) {
  std::istringstream bad("21.0\n14.1\n");
  EXPECT_THROW(etaq::load_zeros(bad), etaq::ParseError);
  std::istringstream dup("14.134725141734693\n14.1347251417347\n");
  EXPECT_EQ(etaq::load_zeros(dup).size(), 1u);
}

TEST(ScanZeros, ThreeCandidatesBelowPublishedHeight) {
  const auto c = etaq::scan_zeros(0, 25.02, 0.01, 0.05);
  ASSERT_EQ(c.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(c[i].ordinate, kPublished[i], 0.011);
    EXPECT_FALSE(c[i].refined);
  }
}

TEST(ScanZeros, EmptyRegionsAndDegenerate) {
  EXPECT_TRUE(etaq::scan_zeros(0, 5, 0.01, 0.05).empty());
  EXPECT_TRUE(etaq::scan_zeros(10, 10, 0.01, 0.05).empty());
  EXPECT_THROW(etaq::scan_zeros(10, 5, 0.01, 0.05), etaq::PreconditionError);
  EXPECT_THROW(etaq::scan_zeros(0, 5, 0, 0.05), etaq::PreconditionError);
  etaq::ScanOptions tiny;
  tiny.maxGridPoints = 10;
  EXPECT_THROW(etaq::scan_zeros(0, 5, 0.01, 0.05, tiny), etaq::PreconditionError);
}

TEST(ScanZeros, ThreadCountDoesNotChangeResult) {
  etaq::ScanOptions one, four;
  four.threads = 4;
  const auto a = etaq::scan_zeros(13, 22, 0.01, 0.05, one);
  const auto b = etaq::scan_zeros(13, 22, 0.01, 0.05, four);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].ordinate, b[i].ordinate);
    EXPECT_EQ(a[i].residual, b[i].residual);
  }
}

TEST(RefineZero, Examples) {
  const auto r = etaq::refine_zero(14.13, 0.05, 1e-9);
  EXPECT_NEAR(r.ordinate, kPublished[0], 1e-8);
  EXPECT_LE(r.residual, 1e-9);
  EXPECT_TRUE(r.refined);

  try {
    etaq::refine_zero(5, 0.05, 1e-9);
    FAIL() << "expected RefinementError";
  } catch (const etaq::RefinementError& e) {
    EXPECT_FALSE(e.best().refined);
    EXPECT_GT(e.best().residual, 1e-9);
  }
}

TEST(RefineZero, Idempotent) {
  const auto once = etaq::refine_zero(21.02, 0.05, 1e-9);
  const auto twice = etaq::refine_zero(once.ordinate, 1e-6, 1e-9);
  EXPECT_NEAR(once.ordinate, twice.ordinate, 1e-9);
}

TEST(ScanAndRefine, ReproducesPublishedOrdinates) {
  const auto z = etaq::scan_and_refine(0, 30, 0.01, 0.05, 1e-9);
  ASSERT_EQ(z.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(z[i].ordinate, kPublished[i], 1e-5);
    EXPECT_LE(z[i].residual, 1e-9);
  }
}

TEST(DedupeZeros, SortsAndMerges) {
  std::vector<etaq::ZeroRecord> in = {{21, etaq::ZeroSource::Scan, 0, true},
                                      {14, etaq::ZeroSource::Scan, 0, true},
                                      {14 + 1e-8, etaq::ZeroSource::Scan, 0, true}};
  const auto out = etaq::dedupe_zeros(in);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].ordinate, 14);
  EXPECT_EQ(out[1].ordinate, 21);
}
