#pragma once

// Image datasets on the 0..255 intensity scale.
//
// Formats:
//   idx        big-endian IDX (magic 0x00000803 images, 0x00000801 labels),
//              element type ubyte (0x08) or float32 (0x0D)
//   csv-matrix one sample per line, label in the first column when labeled
//   raw-u8     headerless bytes, height*width per sample

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gpca/errors.hpp"
#include "gpca/pca.hpp"

namespace gpca::bench {

struct Dataset {
  std::string name;
  /// One image per row, intensities in [0, 255].
  Matrix samples;
  /// Empty for unlabeled data.
  std::vector<int> labels;
  std::size_t height = 0;
  std::size_t width = 0;

  Eigen::Index size() const noexcept { return samples.rows(); }
  Eigen::Index dim() const noexcept { return samples.cols(); }
  bool labeled() const noexcept { return !labels.empty(); }
  int num_classes() const {
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  }

  /// Throws DataError when an intensity or label is out of range.
  void validate() const {
    if (!samples.allFinite()) throw DataError(name + ": non-finite intensity");
    if (samples.size() > 0 && (samples.minCoeff() < 0.0 || samples.maxCoeff() > 255.0)) {
      throw DataError(name + ": intensities must lie in [0, 255]");
    }
    if (!labels.empty()) {
      if (static_cast<Eigen::Index>(labels.size()) != samples.rows()) {
        throw DataError(name + ": label count does not match sample count");
      }
      for (int l : labels)
        if (l < 0) throw DataError(name + ": negative label");
    }
  }

  /// Rows whose label equals `label`.
  Matrix class_samples(int label) const {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) rows.push_back(static_cast<Eigen::Index>(i));
    Matrix out(static_cast<Eigen::Index>(rows.size()), samples.cols());
    for (std::size_t r = 0; r < rows.size(); ++r)
      out.row(static_cast<Eigen::Index>(r)) = samples.row(rows[r]);
    return out;
  }
};

enum class DatasetFormat { Idx, CsvMatrix, RawU8 };

inline DatasetFormat parse_format(std::string_view text) {
  if (text == "idx") return DatasetFormat::Idx;
  if (text == "csv-matrix" || text == "csv") return DatasetFormat::CsvMatrix;
  if (text == "raw-u8") return DatasetFormat::RawU8;
  throw ConfigError("unknown dataset format '" + std::string(text) +
                    "' (expected idx, csv-matrix or raw-u8)");
}

struct LoadOptions {
  /// csv-matrix: first column is the label.
  bool labeled = true;
  /// idx: optional IDX1 label file.
  std::string labels_path;
  /// raw-u8: image shape (required).
  std::size_t height = 0;
  std::size_t width = 0;
};

namespace detail {

inline std::vector<unsigned char> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::uint32_t read_be32(const std::vector<unsigned char>& b, std::size_t offset,
                               const std::string& path) {
  if (offset + 4 > b.size()) {
    throw LoadError(path + ": truncated header at byte offset " + std::to_string(offset));
  }
  return (std::uint32_t{b[offset]} << 24) | (std::uint32_t{b[offset + 1]} << 16) |
         (std::uint32_t{b[offset + 2]} << 8) | std::uint32_t{b[offset + 3]};
}

struct IdxArray {
  std::vector<std::uint32_t> dims;
  std::vector<double> values;
};

inline IdxArray read_idx(const std::string& path) {
  const std::vector<unsigned char> bytes = read_bytes(path);
  if (bytes.size() < 4) throw LoadError(path + ": truncated header at byte offset 0");
  if (bytes[0] != 0 || bytes[1] != 0) {
    throw LoadError(path + ": bad IDX magic at byte offset 0");
  }
  const unsigned type = bytes[2];
  const unsigned ndims = bytes[3];
  if (ndims == 0) throw LoadError(path + ": IDX with zero dimensions at byte offset 3");
  std::size_t elem = 0;
  if (type == 0x08) elem = 1;
  else if (type == 0x0D) elem = 4;
  else throw LoadError(path + ": unsupported IDX element type at byte offset 2");

  IdxArray arr;
  std::size_t count = 1;
  for (unsigned i = 0; i < ndims; ++i) {
    arr.dims.push_back(read_be32(bytes, 4 + 4 * i, path));
    count *= arr.dims.back();
  }
  const std::size_t offset = 4 + 4 * std::size_t{ndims};
  if (bytes.size() - offset != count * elem) {
    throw LoadError(path + ": expected " + std::to_string(count * elem) +
                    " payload bytes after byte offset " + std::to_string(offset) + ", found " +
                    std::to_string(bytes.size() - offset));
  }
  arr.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (elem == 1) {
      arr.values[i] = bytes[offset + i];
    } else {
      const std::uint32_t raw = read_be32(bytes, offset + 4 * i, path);
      float f;
      std::memcpy(&f, &raw, sizeof f);
      arr.values[i] = f;
    }
  }
  return arr;
}

inline Dataset load_idx(const std::string& path, const LoadOptions& options) {
  const IdxArray arr = read_idx(path);
  Dataset ds;
  ds.name = path;
  const std::size_t n = arr.dims[0];
  std::size_t d = 1;
  for (std::size_t i = 1; i < arr.dims.size(); ++i) d *= arr.dims[i];
  if (arr.dims.size() == 3) {
    ds.height = arr.dims[1];
    ds.width = arr.dims[2];
  } else {
    ds.height = 1;
    ds.width = d;
  }
  ds.samples.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      ds.samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = arr.values[i * d + j];

  if (!options.labels_path.empty()) {
    const IdxArray lab = read_idx(options.labels_path);
    if (lab.dims.size() != 1 || lab.dims[0] != n) {
      throw LoadError(options.labels_path + ": label file does not hold " + std::to_string(n) +
                      " labels");
    }
    ds.labels.reserve(n);
    for (double v : lab.values) ds.labels.push_back(static_cast<int>(v));
  }
  return ds;
}

inline Dataset load_csv(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw LoadError(path + ": line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    if (options.labeled) {
      if (values.size() < 2) {
        throw LoadError(path + ": line " + std::to_string(line_no) + ": need a label and pixels");
      }
      const double label = values.front();
      if (label != std::floor(label) || label < 0) {
        throw LoadError(path + ": line " + std::to_string(line_no) + ": bad label");
      }
      labels.push_back(static_cast<int>(label));
      values.erase(values.begin());
    }
    if (rows.empty()) width = values.size();
    if (values.size() != width || width == 0) {
      throw LoadError(path + ": line " + std::to_string(line_no) + ": expected " +
                      std::to_string(width) + " values, found " + std::to_string(values.size()));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw LoadError(path + ": no samples");
  Dataset ds;
  ds.name = path;
  ds.labels = std::move(labels);
  ds.height = 1;
  ds.width = width;
  const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(width))));
  if (side * side == width) ds.height = ds.width = side;
  ds.samples.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      ds.samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return ds;
}

inline Dataset load_raw(const std::string& path, const LoadOptions& options) {
  const std::size_t d = options.height * options.width;
  if (d == 0) throw ConfigError("raw-u8 needs the image height and width");
  const std::vector<unsigned char> bytes = read_bytes(path);
  if (bytes.empty() || bytes.size() % d != 0) {
    throw LoadError(path + ": size " + std::to_string(bytes.size()) +
                    " is not a multiple of the image size " + std::to_string(d) +
                    " (trailing bytes start at byte offset " +
                    std::to_string(bytes.size() - bytes.size() % d) + ")");
  }
  Dataset ds;
  ds.name = path;
  ds.height = options.height;
  ds.width = options.width;
  const std::size_t n = bytes.size() / d;
  ds.samples.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      ds.samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = bytes[i * d + j];
  return ds;
}

inline void write_be32(std::ofstream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                              static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b.data(), 4);
}

}  // namespace detail

inline Dataset load_dataset(const std::string& path, DatasetFormat format,
                            const LoadOptions& options = {}) {
  Dataset ds;
  switch (format) {
    case DatasetFormat::Idx: ds = detail::load_idx(path, options); break;
    case DatasetFormat::CsvMatrix: ds = detail::load_csv(path, options); break;
    case DatasetFormat::RawU8: ds = detail::load_raw(path, options); break;
  }
  ds.validate();
  return ds;
}

/// Writes images (rounded to ubyte) as IDX3 and, when labeled, labels as IDX1.
inline void write_idx(const Dataset& ds, const std::string& images_path,
                      const std::string& labels_path = {}) {
  std::ofstream out(images_path, std::ios::binary);
  if (!out) throw Error("cannot write '" + images_path + "'");
  const std::size_t h = ds.height ? ds.height : 1;
  const std::size_t w = ds.height ? ds.width : static_cast<std::size_t>(ds.dim());
  out.write("\0\0\x08\x03", 4);
  detail::write_be32(out, static_cast<std::uint32_t>(ds.size()));
  detail::write_be32(out, static_cast<std::uint32_t>(h));
  detail::write_be32(out, static_cast<std::uint32_t>(w));
  for (Eigen::Index i = 0; i < ds.size(); ++i)
    for (Eigen::Index j = 0; j < ds.dim(); ++j)
      out.put(static_cast<char>(std::clamp(std::lround(ds.samples(i, j)), 0L, 255L)));
  if (!labels_path.empty() && ds.labeled()) {
    std::ofstream lab(labels_path, std::ios::binary);
    if (!lab) throw Error("cannot write '" + labels_path + "'");
    lab.write("\0\0\x08\x01", 4);
    detail::write_be32(lab, static_cast<std::uint32_t>(ds.labels.size()));
    for (int l : ds.labels) lab.put(static_cast<char>(l));
  }
}

}  // namespace gpca::bench
