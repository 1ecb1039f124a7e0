#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "gpca/bench/dataset.hpp"

namespace fs = std::filesystem;
using gpca::bench::DatasetFormat;
using gpca::bench::LoadOptions;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gpca_ds_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& bytes) {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << bytes;
    return p.string();
  }

  fs::path dir_;
};

std::string idx_header(unsigned char type, std::initializer_list<std::uint32_t> dims) {
  std::string s{'\0', '\0', static_cast<char>(type), static_cast<char>(dims.size())};
  for (auto d : dims) {
    s += static_cast<char>(d >> 24);
    s += static_cast<char>(d >> 16);
    s += static_cast<char>(d >> 8);
    s += static_cast<char>(d);
  }
  return s;
}

}  // namespace

using Dataset = TempDir;

TEST_F(Dataset, IdxImagesAndLabels) {
  const std::string img = write("img", idx_header(0x08, {2, 2, 2}) + std::string("\x00\x01\x02\x03\xff\x10\x20\x30", 8));
  const std::string lab = write("lab", idx_header(0x08, {2}) + std::string("\x07\x02", 2));
  LoadOptions opt;
  opt.labels_path = lab;
  const auto ds = gpca::bench::load_dataset(img, DatasetFormat::Idx, opt);
  EXPECT_EQ(ds.size(), 2);
  EXPECT_EQ(ds.dim(), 4);
  EXPECT_EQ(ds.height, 2u);
  EXPECT_EQ(ds.samples(0, 3), 3.0);
  EXPECT_EQ(ds.samples(1, 0), 255.0);
  EXPECT_EQ(ds.labels, (std::vector<int>{7, 2}));
  EXPECT_EQ(ds.num_classes(), 8);
}

TEST_F(Dataset, IdxTruncatedNamesOffset) {
  const std::string img = write("img", idx_header(0x08, {2, 2, 2}) + std::string("\x00\x01\x02", 3));
  try {
    (void)gpca::bench::load_dataset(img, DatasetFormat::Idx);
    FAIL() << "expected LoadError";
  } catch (const gpca::LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos) << e.what();
  }
  const std::string bad = write("bad", std::string("\x01\x02\x08\x03", 4));
  EXPECT_THROW(gpca::bench::load_dataset(bad, DatasetFormat::Idx), gpca::LoadError);
  EXPECT_THROW(gpca::bench::load_dataset((dir_ / "missing").string(), DatasetFormat::Idx), gpca::LoadError);
}

TEST_F(Dataset, IdxLabelCountMismatch) {
  const std::string img = write("img", idx_header(0x08, {2, 1, 1}) + std::string("\x01\x02", 2));
  const std::string lab = write("lab", idx_header(0x08, {3}) + std::string("\x00\x01\x02", 3));
  LoadOptions opt;
  opt.labels_path = lab;
  EXPECT_THROW(gpca::bench::load_dataset(img, DatasetFormat::Idx, opt), gpca::LoadError);
}

TEST_F(Dataset, CsvRows) {
  const std::string path = write("a.csv", "3,0,255\r\n1,12.5,7\n\n");
  const auto ds = gpca::bench::load_dataset(path, DatasetFormat::CsvMatrix);
  EXPECT_EQ(ds.size(), 2);
  EXPECT_EQ(ds.dim(), 2);
  EXPECT_EQ(ds.labels, (std::vector<int>{3, 1}));
  EXPECT_EQ(ds.samples(0, 1), 255.0);
  EXPECT_EQ(ds.samples(1, 0), 12.5);

  LoadOptions unlabeled;
  unlabeled.labeled = false;
  const auto u = gpca::bench::load_dataset(path, DatasetFormat::CsvMatrix, unlabeled);
  EXPECT_EQ(u.dim(), 3);
  EXPECT_FALSE(u.labeled());
}

TEST_F(Dataset, CsvErrorsNameTheLine) {
  const std::string ragged = write("r.csv", "0,1,2\n1,2\n");
  try {
    (void)gpca::bench::load_dataset(ragged, DatasetFormat::CsvMatrix);
    FAIL();
  } catch (const gpca::LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(gpca::bench::load_dataset(write("n.csv", "0,abc\n"), DatasetFormat::CsvMatrix), gpca::LoadError);
  EXPECT_THROW(gpca::bench::load_dataset(write("s.csv", "0.5,1\n"), DatasetFormat::CsvMatrix), gpca::LoadError);
  EXPECT_THROW(gpca::bench::load_dataset(write("o.csv", "0,300\n"), DatasetFormat::CsvMatrix), gpca::DataError);
  EXPECT_THROW(gpca::bench::load_dataset(write("e.csv", ""), DatasetFormat::CsvMatrix), gpca::LoadError);
}

TEST_F(Dataset, RawBytes) {
  const std::string path = write("raw", std::string("\x01\x02\x03\x04\x05\x06", 6));
  LoadOptions opt;
  opt.height = 1;
  opt.width = 3;
  const auto ds = gpca::bench::load_dataset(path, DatasetFormat::RawU8, opt);
  EXPECT_EQ(ds.size(), 2);
  EXPECT_EQ(ds.samples(1, 2), 6.0);
  opt.width = 4;
  EXPECT_THROW(gpca::bench::load_dataset(path, DatasetFormat::RawU8, opt), gpca::LoadError);
  EXPECT_THROW(gpca::bench::load_dataset(path, DatasetFormat::RawU8), gpca::ConfigError);
}

TEST_F(Dataset, IdxRoundTrip) {
  gpca::bench::Dataset ds;
  ds.samples.resize(3, 4);
  ds.samples << 0, 1, 2, 3, 4, 5, 6, 7, 255, 254, 128, 64;
  ds.labels = {0, 1, 1};
  ds.height = 2;
  ds.width = 2;
  const auto img = (dir_ / "i").string();
  const auto lab = (dir_ / "l").string();
  gpca::bench::write_idx(ds, img, lab);
  LoadOptions opt;
  opt.labels_path = lab;
  const auto back = gpca::bench::load_dataset(img, DatasetFormat::Idx, opt);
  EXPECT_EQ(back.samples, ds.samples);
  EXPECT_EQ(back.labels, ds.labels);
  const auto cls = back.class_samples(1);
  EXPECT_EQ(cls.rows(), 2);
  EXPECT_EQ(cls(1, 0), 255.0);
}

TEST(DatasetFormat, Grammar) {
  EXPECT_EQ(gpca::bench::parse_format("idx"), DatasetFormat::Idx);
  EXPECT_EQ(gpca::bench::parse_format("csv-matrix"), DatasetFormat::CsvMatrix);
  EXPECT_EQ(gpca::bench::parse_format("raw-u8"), DatasetFormat::RawU8);
  EXPECT_THROW(gpca::bench::parse_format("png"), gpca::ConfigError);
}
