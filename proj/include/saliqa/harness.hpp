#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saliqa/stats.hpp"

namespace saliqa {

// One evaluation row. Paths are resolved against the manifest directory at
// load time and validated eagerly.
struct ManifestRecord {
    std::string record_id;
    std::string reference_path;
    std::string distorted_path;
    std::string saliency_path;   // empty when absent
    std::string fixations_path;  // empty when absent
    std::string group_id;
    std::string preset;
    std::optional<double> bpp;
    std::optional<double> mos;
};

struct MetricCell {
    bool ok = false;
    double value = 0.0;
    bool capped = false;
    std::string error;  // set when !ok
};

struct MetricReport {
    std::vector<std::string> metric_columns;
    std::vector<std::string> record_ids;
    std::vector<std::vector<MetricCell>> rows;  // [record][metric]
    std::string toolkit_version;

    bool any_error() const;
};

struct CorrelationRow {
    std::string metric;
    double srocc = 0.0;
    double plcc = 0.0;
    double fraccp = 0.0;
};

inline const std::vector<std::string> kKnownMetrics = {"psnr", "ssim", "ms-ssim", "ew-psnr", "ew-ssim", "mse"};

// Header: record_id,reference_path,distorted_path,saliency_path,
//         fixations_path,group_id,preset,bpp,mos
std::vector<ManifestRecord> load_manifest(const std::string& path);

// Evaluates each requested metric per record on luma-converted images, with
// saliency resized to image dimensions. Per-record failures become error
// cells; row order follows the manifest. threads = 0 picks SALIQA_THREADS,
// falling back to the hardware core count.
MetricReport run_metrics(const std::vector<ManifestRecord>& manifest,
                         const std::vector<std::string>& metrics, int threads = 0);

void write_report_csv(const MetricReport& report, const std::string& path);
MetricReport read_report_csv(const std::string& path);

// Global SROCC/PLCC against MOS plus group-wise FracCP per metric column.
std::vector<CorrelationRow> run_correlate(const MetricReport& report,
                                          const std::vector<ManifestRecord>& manifest);
void write_correlations_csv(const std::vector<CorrelationRow>& rows, const std::string& path);

int worker_count(int requested);

}  // namespace saliqa
