#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qdinpaint/error.hpp"

namespace qdi {

inline constexpr int kDrawingBox = 256;  // simplified export coordinate box

struct Point {
  int x = 0;
  int y = 0;
  bool operator==(const Point&) const = default;
};

struct Stroke {
  std::vector<Point> points;
  bool operator==(const Stroke&) const = default;
};

struct Drawing {
  std::string id;
  std::vector<Stroke> strokes;
};

class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line_no, const std::string& cause);
  std::size_t line_no() const noexcept { return line_no_; }
  const std::string& cause() const noexcept { return cause_; }

 private:
  std::size_t line_no_;
  std::string cause_;
};

enum class ParseMode { Strict, Lenient };

struct ParseReport {
  std::size_t records_read = 0;     // non-blank lines seen
  std::size_t records_skipped = 0;  // malformed, lenient mode only
  std::size_t points_clamped = 0;   // coordinates pulled into [0, 255]
  std::size_t drawings = 0;
  std::size_t strokes = 0;
  std::vector<std::string> errors;  // first few skip causes

  void merge(const ParseReport& other);
  std::string to_json() const;
};

struct ParseResult {
  std::vector<Drawing> drawings;
  ParseReport report;
};

// One JSON object per line with a `drawing` field: [[x...], [y...]] per stroke.
ParseResult parse_drawings(std::istream& in, ParseMode mode);

// Parses files concurrently; results are concatenated in file-name order.
ParseResult parse_drawing_files(std::span<const std::filesystem::path> files, ParseMode mode,
                                unsigned threads = 1);

class StrokeCorpus {
 public:
  StrokeCorpus() = default;
  StrokeCorpus(std::vector<Stroke> strokes, std::size_t source_count)
      : strokes_(std::move(strokes)), source_count_(source_count) {}

  std::size_t size() const noexcept { return strokes_.size(); }
  bool empty() const noexcept { return strokes_.empty(); }
  std::size_t source_count() const noexcept { return source_count_; }

  const Stroke& operator[](std::size_t i) const noexcept { return strokes_[i]; }
  const Stroke& at(std::size_t i) const;

  auto begin() const noexcept { return strokes_.begin(); }
  auto end() const noexcept { return strokes_.end(); }

 private:
  std::vector<Stroke> strokes_;
  std::size_t source_count_ = 0;
};

// Keeps strokes with at least min_points points, in ingestion order.
StrokeCorpus build_corpus(std::span<const Drawing> drawings, int min_points = 1);

}  // namespace qdi
