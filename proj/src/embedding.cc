// Copyright 2026 The imgeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "imgeval/embedding.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>

#include "imgeval/error.h"
#include "imgeval/io.h"

namespace imgeval {

static_assert(std::endian::native == std::endian::little,
              "npy reader assumes a little-endian host");

EmbeddingSet::EmbeddingSet(RowMatrix data) : data_(std::move(data)) {
  if (data_.rows() < 1) throw DataError("embedding set has no rows (n >= 1 required)");
  if (data_.cols() < 1) throw DataError("embedding set has no columns (d >= 1 required)");
  for (Eigen::Index r = 0; r < data_.rows(); ++r) {
    for (Eigen::Index c = 0; c < data_.cols(); ++c) {
      if (!std::isfinite(data_(r, c))) {
        throw DataError("non-finite embedding entry at row " + std::to_string(r) +
                        ", col " + std::to_string(c));
      }
    }
  }
}

EmbeddingSet EmbeddingSet::FromValues(std::size_t n, std::size_t d,
                                      std::span<const double> values) {
  if (values.size() != n * d) {
    throw ShapeError("expected " + std::to_string(n * d) + " values, got " +
                     std::to_string(values.size()));
  }
  RowMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  if (!values.empty()) std::memcpy(m.data(), values.data(), values.size() * sizeof(double));
  return EmbeddingSet(std::move(m));
}

EmbeddingSet EmbeddingSet::Slice(std::size_t begin, std::size_t count) const {
  if (begin + count > n()) throw ShapeError("slice out of range");
  return EmbeddingSet(data_.middleRows(static_cast<Eigen::Index>(begin),
                                       static_cast<Eigen::Index>(count)));
}

EmbeddingSet EmbeddingSet::Select(std::span<const std::size_t> indices) const {
  RowMatrix m(static_cast<Eigen::Index>(indices.size()), data_.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= n()) {
      throw ShapeError("row index " + std::to_string(indices[i]) +
                       " out of range for " + std::to_string(n()) + " rows");
    }
    m.row(static_cast<Eigen::Index>(i)) = data_.row(static_cast<Eigen::Index>(indices[i]));
  }
  return EmbeddingSet(std::move(m));
}

EmbeddingSet Concatenate(std::span<const EmbeddingSet> parts) {
  if (parts.empty()) throw DataError("nothing to concatenate");
  Eigen::Index rows = 0;
  for (const auto& p : parts) {
    if (p.d() != parts[0].d()) throw ShapeError("dimension mismatch in concatenation");
    rows += static_cast<Eigen::Index>(p.n());
  }
  RowMatrix m(rows, static_cast<Eigen::Index>(parts[0].d()));
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    m.middleRows(at, p.matrix().rows()) = p.matrix();
    at += p.matrix().rows();
  }
  return EmbeddingSet(std::move(m));
}

namespace {

constexpr char kMagic[] = "\x93NUMPY";
constexpr std::size_t kMagicLen = 6;

// Minimal reader for the Python dict literal in a v1.0 header.
class HeaderParser {
 public:
  explicit HeaderParser(std::string_view text) : text_(text) {}

  struct Header {
    std::string descr;
    bool fortran_order = false;
    std::vector<std::int64_t> shape;
  };

  Header Parse() {
    Header h;
    bool seen_descr = false, seen_order = false, seen_shape = false;
    Expect('{');
    while (true) {
      SkipSpace();
      if (Peek() == '}') {
        ++pos_;
        break;
      }
      std::string key = ParseString();
      Expect(':');
      if (key == "descr") {
        h.descr = ParseString();
        seen_descr = true;
      } else if (key == "fortran_order") {
        h.fortran_order = ParseBool();
        seen_order = true;
      } else if (key == "shape") {
        h.shape = ParseTuple();
        seen_shape = true;
      } else {
        throw FormatError("unexpected npy header key '" + key + "'");
      }
      SkipSpace();
      if (Peek() == ',') {
        ++pos_;
      } else if (Peek() != '}') {
        throw FormatError("malformed npy header dict");
      }
    }
    SkipSpace();
    if (pos_ != text_.size()) throw FormatError("trailing bytes after npy header dict");
    if (!seen_descr || !seen_order || !seen_shape) {
      throw FormatError("npy header missing descr, fortran_order or shape");
    }
    return h;
  }

 private:
  char Peek() const {
    if (pos_ >= text_.size()) throw FormatError("truncated npy header");
    return text_[pos_];
  }
  void SkipSpace() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\n' || text_[pos_] == '\t')) {
      ++pos_;
    }
  }
  void Expect(char c) {
    SkipSpace();
    if (Peek() != c) throw FormatError(std::string("expected '") + c + "' in npy header");
    ++pos_;
  }
  std::string ParseString() {
    SkipSpace();
    char quote = Peek();
    if (quote != '\'' && quote != '"') throw FormatError("expected string in npy header");
    ++pos_;
    std::size_t end = text_.find(quote, pos_);
    if (end == std::string_view::npos) throw FormatError("unterminated string in npy header");
    std::string out(text_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }
  bool ParseBool() {
    SkipSpace();
    if (text_.substr(pos_, 4) == "True") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "False") {
      pos_ += 5;
      return false;
    }
    throw FormatError("expected True/False in npy header");
  }
  std::vector<std::int64_t> ParseTuple() {
    Expect('(');
    std::vector<std::int64_t> dims;
    while (true) {
      SkipSpace();
      if (Peek() == ')') {
        ++pos_;
        return dims;
      }
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
      std::int64_t v = 0;
      if (!ParseInt64(text_.substr(start, pos_ - start), v)) {
        throw FormatError("bad dimension in npy shape");
      }
      dims.push_back(v);
      SkipSpace();
      if (Peek() == ',') ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

EmbeddingSet ParseNpy(std::string_view bytes) {
  if (bytes.size() < kMagicLen + 4 || bytes.substr(0, kMagicLen) != std::string_view(kMagic, kMagicLen)) {
    throw FormatError("missing npy magic");
  }
  auto major = static_cast<unsigned char>(bytes[6]);
  auto minor = static_cast<unsigned char>(bytes[7]);
  if (major != 1 || minor != 0) {
    throw FormatError("unsupported npy version " + std::to_string(major) + "." +
                      std::to_string(minor));
  }
  std::size_t header_len = static_cast<unsigned char>(bytes[8]) |
                           (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
  if (bytes.size() < 10 + header_len) throw FormatError("truncated npy header");
  auto header = HeaderParser(bytes.substr(10, header_len)).Parse();

  std::size_t width;
  if (header.descr == "<f4") {
    width = 4;
  } else if (header.descr == "<f8") {
    width = 8;
  } else {
    throw UnsupportedLayout("unsupported npy dtype '" + header.descr + "'");
  }
  if (header.fortran_order) throw UnsupportedLayout("fortran_order arrays are not supported");
  if (header.shape.size() != 2) {
    throw UnsupportedLayout("expected a 2-D array, got " +
                            std::to_string(header.shape.size()) + " dimensions");
  }
  auto n = static_cast<std::size_t>(header.shape[0]);
  auto d = static_cast<std::size_t>(header.shape[1]);
  if (n < 1 || d < 1) {
    throw DataError("embedding shape (" + std::to_string(n) + ", " + std::to_string(d) +
                    ") is empty");
  }
  std::string_view payload = bytes.substr(10 + header_len);
  if (payload.size() != n * d * width) {
    throw FormatError("npy payload has " + std::to_string(payload.size()) +
                      " bytes, expected " + std::to_string(n * d * width));
  }
  std::vector<double> values(n * d);
  if (width == 4) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      float f;
      std::memcpy(&f, payload.data() + 4 * i, 4);
      values[i] = f;
    }
  } else {
    std::memcpy(values.data(), payload.data(), payload.size());
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DataError("non-finite embedding entry at row " + std::to_string(i / d) +
                      ", col " + std::to_string(i % d));
    }
  }
  return EmbeddingSet::FromValues(n, d, values);
}

EmbeddingSet LoadEmbeddings(const std::filesystem::path& path) {
  try {
    return ParseNpy(ReadFile(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const UnsupportedLayout& e) {
    throw UnsupportedLayout(path.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string EncodeNpy(const EmbeddingSet& embeddings, NpyDtype dtype) {
  const bool f32 = dtype == NpyDtype::kFloat32;
  std::string dict = std::string("{'descr': '") + (f32 ? "<f4" : "<f8") +
                     "', 'fortran_order': False, 'shape': (" +
                     std::to_string(embeddings.n()) + ", " + std::to_string(embeddings.d()) +
                     "), }";
  // Pad so the payload starts on a 64-byte boundary; header ends in '\n'.
  std::size_t total = 10 + dict.size() + 1;
  std::size_t padded = (total + 63) / 64 * 64;
  dict.append(padded - total, ' ');
  dict.push_back('\n');

  std::string out(kMagic, kMagicLen);
  out.push_back('\x01');
  out.push_back('\x00');
  out.push_back(static_cast<char>(dict.size() & 0xff));
  out.push_back(static_cast<char>((dict.size() >> 8) & 0xff));
  out += dict;

  const double* src = embeddings.matrix().data();
  const std::size_t count = embeddings.n() * embeddings.d();
  if (f32) {
    for (std::size_t i = 0; i < count; ++i) {
      auto f = static_cast<float>(src[i]);
      char buf[4];
      std::memcpy(buf, &f, 4);
      out.append(buf, 4);
    }
  } else {
    out.append(reinterpret_cast<const char*>(src), count * sizeof(double));
  }
  return out;
}

void WriteEmbeddings(const EmbeddingSet& embeddings, const std::filesystem::path& path,
                     NpyDtype dtype) {
  WriteFileAtomic(path, EncodeNpy(embeddings, dtype));
}

}  // namespace imgeval
