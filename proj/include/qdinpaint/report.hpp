#pragma once

#include <string>
#include <vector>

#include "qdinpaint/metrics.hpp"

namespace qdi {

// Aligned text table: one column per bucket, one row per metric (mean±std).
std::string render_table(const BucketReport& report, const std::string& method = "");

// Long-form CSV: bucket,lo,hi,metric,mean,std,count.
std::string render_csv(const BucketReport& report);

// Per-record CSV: image_id,hole_ratio,bucket,l1_percent,psnr_db,ssim.
std::string render_records_csv(const std::vector<EvalRecord>& records);

}  // namespace qdi
