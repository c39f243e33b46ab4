#include "qdinpaint/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qdi {

namespace {

std::string fmt(const char* pattern, double a, double b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

std::string cell(const Stat& s, const char* pattern) {
  if (s.count == 0) return "-";
  return fmt(pattern, s.mean, s.std);
}

std::string num(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string render_table(const BucketReport& report, const std::string& method) {
  const std::string suffix = method.empty() ? "" : "(" + method + ")";
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"hole ratio"};
  for (std::size_t b = 0; b < kBucketCount; ++b) header.push_back(bucket_label(b));
  rows.push_back(header);

  auto add = [&](std::string name, auto pick) {
    std::vector<std::string> r{std::move(name)};
    for (const BucketStats& s : report.buckets) r.push_back(pick(s));
    rows.push_back(std::move(r));
  };
  add("count", [](const BucketStats& s) { return std::to_string(s.count); });
  add("L1" + suffix + "(%)", [](const BucketStats& s) { return cell(s.l1_percent, "%.2f±%.2f"); });
  add("PSNR" + suffix, [](const BucketStats& s) { return cell(s.psnr, "%.2f±%.2f"); });
  add("SSIM" + suffix, [](const BucketStats& s) { return cell(s.ssim, "%.3f±%.3f"); });
  if (std::any_of(report.buckets.begin(), report.buckets.end(), [](const BucketStats& s) { return s.iscore.has_value(); })) {
    add("IScore" + suffix, [](const BucketStats& s) { return s.iscore ? fmt("%.3f", *s.iscore, 0.0) : std::string("-"); });
  }

  // Display width: "±" is two bytes but one column.
  auto width_of = [](const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) w += (c & 0xC0) != 0x80;
    return w;
  };
  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) widths[c] = std::max(widths[c], width_of(r[c]));
  }

  std::ostringstream out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    for (std::size_t c = 0; c < r.size(); ++c) {
      const std::size_t pad = widths[c] - width_of(r[c]);
      if (c == 0) {
        out << r[c] << std::string(pad, ' ');
      } else {
        out << " | " << std::string(pad, ' ') << r[c];
      }
    }
    out << '\n';
    if (i == 0) {
      for (std::size_t c = 0; c < widths.size(); ++c) out << (c == 0 ? "" : "-+-") << std::string(widths[c], '-');
      out << '\n';
    }
  }
  out << "records: " << report.total << ", out of range: " << report.out_of_range << ", L1 region: "
      << report.l1_region << '\n';
  return out.str();
}

std::string render_csv(const BucketReport& report) {
  std::ostringstream out;
  out << "bucket,lo,hi,metric,mean,std,count\n";
  for (std::size_t b = 0; b < kBucketCount; ++b) {
    const BucketStats& s = report.buckets[b];
    auto line = [&](const char* metric, const Stat& st) {
      out << '"' << bucket_label(b) << "\"," << num(kBucketEdges[b]) << ',' << num(kBucketEdges[b + 1]) << ','
          << metric << ',' << num(st.mean) << ',' << num(st.std) << ',' << st.count << '\n';
    };
    line("l1_percent", s.l1_percent);
    line("psnr", s.psnr);
    line("ssim", s.ssim);
    if (s.iscore) line("iscore", Stat{*s.iscore, 0.0, s.count});
  }
  return out.str();
}

std::string render_records_csv(const std::vector<EvalRecord>& records) {
  std::ostringstream out;
  out << "image_id,hole_ratio,bucket,l1_percent,psnr_db,ssim\n";
  for (const EvalRecord& r : records) {
    const auto b = bucket_of(r.hole_ratio);
    out << r.image_id << ',' << num(r.hole_ratio) << ',' << (b ? std::to_string(*b + 1) : std::string("out")) << ','
        << num(r.l1_percent) << ',' << num(r.psnr_db) << ',' << num(r.ssim) << '\n';
  }
  return out.str();
}

}  // namespace qdi
