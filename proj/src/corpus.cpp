#include "qdinpaint/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>

#include <json.hpp>

#include "qdinpaint/parallel.hpp"

namespace qdi {

namespace {

constexpr std::size_t kMaxReportedErrors = 20;

using nlohmann::json;

struct BadRecord {
  std::string cause;
};

int to_coord(const json& v, std::size_t& clamped) {
  if (!v.is_number()) throw BadRecord{"non-numeric coordinate"};
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw BadRecord{"non-finite coordinate"};
  const double r = std::round(d);
  if (r < 0.0 || r > kDrawingBox - 1) {
    ++clamped;
    return r < 0.0 ? 0 : kDrawingBox - 1;
  }
  return static_cast<int>(r);
}

Drawing parse_record(const std::string& line, std::size_t line_no, std::size_t& clamped) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw BadRecord{std::string("invalid JSON: ") + e.what()};
  }
  if (!rec.is_object()) throw BadRecord{"record is not an object"};
  const auto it = rec.find("drawing");
  if (it == rec.end()) throw BadRecord{"missing `drawing` field"};
  if (!it->is_array() || it->empty()) throw BadRecord{"`drawing` must be a non-empty array"};

  Drawing d;
  if (auto key = rec.find("key_id"); key != rec.end() && key->is_string()) {
    d.id = key->get<std::string>();
  } else {
    d.id = "line:" + std::to_string(line_no);
  }

  std::size_t local_clamped = 0;
  for (const json& s : *it) {
    if (!s.is_array() || s.size() != 2) throw BadRecord{"stroke must be [x-array, y-array]"};
    const json& xs = s[0];
    const json& ys = s[1];
    if (!xs.is_array() || !ys.is_array()) throw BadRecord{"stroke coordinates must be arrays"};
    if (xs.size() != ys.size()) {
      throw BadRecord{"x/y length mismatch (" + std::to_string(xs.size()) + " vs " + std::to_string(ys.size()) +
                      ")"};
    }
    if (xs.empty()) throw BadRecord{"empty stroke"};
    Stroke stroke;
    stroke.points.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      stroke.points.push_back({to_coord(xs[i], local_clamped), to_coord(ys[i], local_clamped)});
    }
    d.strokes.push_back(std::move(stroke));
  }
  clamped += local_clamped;
  return d;
}

}  // namespace

MalformedRecord::MalformedRecord(std::size_t line_no, const std::string& cause)
    : Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": " + cause),
      line_no_(line_no),
      cause_(cause) {}

void ParseReport::merge(const ParseReport& other) {
  records_read += other.records_read;
  records_skipped += other.records_skipped;
  points_clamped += other.points_clamped;
  drawings += other.drawings;
  strokes += other.strokes;
  for (const auto& e : other.errors) {
    if (errors.size() >= kMaxReportedErrors) break;
    errors.push_back(e);
  }
}

std::string ParseReport::to_json() const {
  json j = {{"records_read", records_read},
            {"records_skipped", records_skipped},
            {"points_clamped", points_clamped},
            {"drawings", drawings},
            {"strokes", strokes},
            {"errors", errors}};
  return j.dump();
}

ParseResult parse_drawings(std::istream& in, ParseMode mode) {
  ParseResult result;
  ParseReport& rep = result.report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    ++rep.records_read;
    std::size_t clamped = 0;
    try {
      Drawing d = parse_record(line, line_no, clamped);
      rep.points_clamped += clamped;
      rep.strokes += d.strokes.size();
      ++rep.drawings;
      result.drawings.push_back(std::move(d));
    } catch (const BadRecord& bad) {
      if (mode == ParseMode::Strict) throw MalformedRecord(line_no, bad.cause);
      ++rep.records_skipped;
      if (rep.errors.size() < kMaxReportedErrors) {
        rep.errors.push_back("line " + std::to_string(line_no) + ": " + bad.cause);
      }
    }
  }
  if (in.bad()) throw Error(ErrorCode::Io, "read error after line " + std::to_string(line_no));
  return result;
}

ParseResult parse_drawing_files(std::span<const std::filesystem::path> files, ParseMode mode, unsigned threads) {
  std::vector<std::filesystem::path> ordered(files.begin(), files.end());
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

  std::vector<ParseResult> parts(ordered.size());
  parallel_for(ordered.size(), threads, [&](std::size_t i) {
    std::ifstream in(ordered[i], std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + ordered[i].string());
    try {
      parts[i] = parse_drawings(in, mode);
    } catch (const MalformedRecord& e) {
      throw MalformedRecord(e.line_no(), ordered[i].string() + ": " + e.cause());
    }
  });

  ParseResult all;
  for (auto& p : parts) {
    all.report.merge(p.report);
    std::move(p.drawings.begin(), p.drawings.end(), std::back_inserter(all.drawings));
  }
  return all;
}

const Stroke& StrokeCorpus::at(std::size_t i) const {
  if (i >= strokes_.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "stroke " + std::to_string(i) + " of corpus with " + std::to_string(strokes_.size()));
  }
  return strokes_[i];
}

StrokeCorpus build_corpus(std::span<const Drawing> drawings, int min_points) {
  if (min_points < 1) throw Error(ErrorCode::InvalidArgument, "min_points must be >= 1");
  std::vector<Stroke> strokes;
  for (const Drawing& d : drawings) {
    for (const Stroke& s : d.strokes) {
      if (s.points.size() >= static_cast<std::size_t>(min_points)) strokes.push_back(s);
    }
  }
  return StrokeCorpus(std::move(strokes), drawings.size());
}

}  // namespace qdi
