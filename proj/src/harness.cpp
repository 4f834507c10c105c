#include "saliqa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <thread>

#include "saliqa/csv.hpp"
#include "saliqa/errors.hpp"
#include "saliqa/image.hpp"
#include "saliqa/quality.hpp"
#include "saliqa/saliency.hpp"
#include "saliqa/version.hpp"

namespace saliqa {

namespace {

namespace fs = std::filesystem;

std::optional<double> parse_optional(const std::string& s, const std::string& context) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("bad numeric value `" + s + "` " + context);
    }
}

bool metric_needs_saliency(const std::string& metric) {
    return metric == "ew-psnr" || metric == "ew-ssim";
}

struct RecordInputs {
    RasterImage ref_gray;
    RasterImage dist_gray;
    SaliencyMap sal;  // resized to image dims; empty width when absent
};

MetricCell evaluate_metric(const std::string& metric, const RecordInputs& in) {
    MetricCell cell;
    cell.ok = true;
    if (metric == "psnr") {
        QualityScore s = psnr(in.ref_gray, in.dist_gray);
        cell.value = s.value;
        cell.capped = s.capped;
    } else if (metric == "mse") {
        cell.value = mse(in.ref_gray, in.dist_gray);
    } else if (metric == "ssim") {
        cell.value = ssim(in.ref_gray, in.dist_gray).mean;
    } else if (metric == "ms-ssim") {
        cell.value = ms_ssim(in.ref_gray, in.dist_gray);
    } else if (metric == "ew-psnr") {
        QualityScore s = ew_psnr(in.ref_gray, in.dist_gray, in.sal);
        cell.value = s.value;
        cell.capped = s.capped;
    } else if (metric == "ew-ssim") {
        cell.value = ew_ssim(in.ref_gray, in.dist_gray, in.sal);
    } else {
        throw ParameterError("unknown metric: " + metric);
    }
    return cell;
}

std::vector<MetricCell> evaluate_record(const ManifestRecord& rec,
                                        const std::vector<std::string>& metrics) {
    std::vector<MetricCell> cells(metrics.size());
    RecordInputs in;
    bool loaded = false;
    std::string load_error;
    bool needs_sal = std::any_of(metrics.begin(), metrics.end(), metric_needs_saliency);
    try {
        in.ref_gray = to_grayscale(load_image(rec.reference_path));
        in.dist_gray = to_grayscale(load_image(rec.distorted_path));
        if (needs_sal && !rec.saliency_path.empty()) {
            in.sal = resize_map(map_from_image(load_image(rec.saliency_path)),
                                in.ref_gray.width, in.ref_gray.height);
        }
        loaded = true;
    } catch (const std::exception& e) {
        load_error = e.what();
    }
    for (std::size_t m = 0; m < metrics.size(); ++m) {
        if (!loaded) {
            cells[m].error = load_error;
            continue;
        }
        if (metric_needs_saliency(metrics[m]) && rec.saliency_path.empty()) {
            cells[m].error = "record " + rec.record_id + " has no saliency_path";
            continue;
        }
        try {
            cells[m] = evaluate_metric(metrics[m], in);
        } catch (const std::exception& e) {
            cells[m].ok = false;
            cells[m].error = e.what();
        }
    }
    return cells;
}

}  // namespace

bool MetricReport::any_error() const {
    for (const auto& row : rows)
        for (const auto& cell : row)
            if (!cell.ok) return true;
    return false;
}

std::vector<ManifestRecord> load_manifest(const std::string& path) {
    auto rows = read_csv(path);
    const std::vector<std::string> expected = {"record_id", "reference_path", "distorted_path",
                                               "saliency_path", "fixations_path", "group_id",
                                               "preset", "bpp", "mos"};
    if (rows.empty()) throw SchemaError("empty manifest: " + path);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i >= rows[0].size() || rows[0][i] != expected[i])
            throw SchemaError("manifest missing column `" + expected[i] + "`: " + path);
    }

    const fs::path base = fs::path(path).parent_path();
    auto resolve = [&](const std::string& rel) {
        if (rel.empty()) return std::string();
        fs::path p(rel);
        return (p.is_absolute() ? p : base / p).string();
    };

    std::vector<ManifestRecord> records;
    std::map<std::string, std::string> group_reference;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() < expected.size())
            throw SchemaError("manifest row " + std::to_string(i) + " has too few columns: " + path);
        ManifestRecord rec;
        rec.record_id = row[0];
        rec.reference_path = resolve(row[1]);
        rec.distorted_path = resolve(row[2]);
        rec.saliency_path = resolve(row[3]);
        rec.fixations_path = resolve(row[4]);
        rec.group_id = row[5];
        rec.preset = row[6];
        std::string context = "in record " + rec.record_id;
        rec.bpp = parse_optional(row[7], context);
        rec.mos = parse_optional(row[8], context);
        if (rec.record_id.empty()) throw ValidationError("manifest row " + std::to_string(i) + " lacks record_id");
        if (rec.bpp && *rec.bpp < 0.0) throw ValidationError("negative bpp " + context);
        for (const std::string* p : {&rec.reference_path, &rec.distorted_path,
                                     &rec.saliency_path, &rec.fixations_path}) {
            if (!p->empty() && !fs::exists(*p))
                throw ValidationError("record " + rec.record_id + " references missing file: " + *p);
        }
        if (!rec.group_id.empty()) {
            auto [it, inserted] = group_reference.emplace(rec.group_id, rec.reference_path);
            if (!inserted && it->second != rec.reference_path)
                throw ValidationError("group " + rec.group_id + " has inconsistent reference paths");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SALIQA_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

MetricReport run_metrics(const std::vector<ManifestRecord>& manifest,
                         const std::vector<std::string>& metrics, int threads) {
    if (metrics.empty()) throw ParameterError("no metrics requested");
    for (const auto& m : metrics) {
        if (std::find(kKnownMetrics.begin(), kKnownMetrics.end(), m) == kKnownMetrics.end())
            throw ParameterError("unknown metric: " + m);
    }

    MetricReport report;
    report.metric_columns = metrics;
    report.toolkit_version = kToolkitVersion;
    report.record_ids.reserve(manifest.size());
    for (const auto& rec : manifest) report.record_ids.push_back(rec.record_id);
    report.rows.resize(manifest.size());

    const int workers = std::min<int>(worker_count(threads), std::max<std::size_t>(manifest.size(), 1));
    if (workers <= 1 || manifest.size() <= 1) {
        for (std::size_t i = 0; i < manifest.size(); ++i)
            report.rows[i] = evaluate_record(manifest[i], metrics);
        return report;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= manifest.size()) return;
            report.rows[i] = evaluate_record(manifest[i], metrics);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return report;
}

void write_report_csv(const MetricReport& report, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"record_id"};
    header.insert(header.end(), report.metric_columns.begin(), report.metric_columns.end());
    rows.push_back(std::move(header));
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        std::vector<std::string> row = {report.record_ids[i]};
        for (const auto& cell : report.rows[i])
            row.push_back(cell.ok ? format_csv_value(cell.value) : "error");
        rows.push_back(std::move(row));
    }
    write_csv(path, rows);
}

MetricReport read_report_csv(const std::string& path) {
    auto rows = read_csv(path);
    if (rows.empty() || rows[0].empty() || rows[0][0] != "record_id")
        throw SchemaError("report CSV must start with a record_id column: " + path);
    MetricReport report;
    report.toolkit_version = kToolkitVersion;
    report.metric_columns.assign(rows[0].begin() + 1, rows[0].end());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw SchemaError("report row " + std::to_string(i) + " has wrong column count: " + path);
        report.record_ids.push_back(rows[i][0]);
        std::vector<MetricCell> cells;
        for (std::size_t c = 1; c < rows[i].size(); ++c) {
            MetricCell cell;
            if (rows[i][c] != "error") {
                try {
                    cell.value = std::stod(rows[i][c]);
                    cell.ok = true;
                } catch (const std::exception&) {
                    throw SchemaError("report cell `" + rows[i][c] + "` is not numeric: " + path);
                }
            }
            cells.push_back(cell);
        }
        report.rows.push_back(std::move(cells));
    }
    return report;
}

std::vector<CorrelationRow> run_correlate(const MetricReport& report,
                                          const std::vector<ManifestRecord>& manifest) {
    if (report.record_ids.size() != manifest.size())
        throw ValidationError("report and manifest row counts differ");
    if (manifest.size() < 3) throw ValidationError("correlation needs at least 3 records");
    std::vector<double> mos;
    mos.reserve(manifest.size());
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        if (report.record_ids[i] != manifest[i].record_id)
            throw ValidationError("report/manifest record order mismatch at " + report.record_ids[i]);
        if (!manifest[i].mos)
            throw ValidationError("record " + manifest[i].record_id + " lacks mos");
        mos.push_back(*manifest[i].mos);
    }

    std::vector<CorrelationRow> out;
    for (std::size_t m = 0; m < report.metric_columns.size(); ++m) {
        std::vector<double> pred;
        pred.reserve(manifest.size());
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const MetricCell& cell = report.rows[i][m];
            if (!cell.ok)
                throw ValidationError("record " + report.record_ids[i] + " has an error cell for " +
                                      report.metric_columns[m]);
            pred.push_back(cell.value);
        }
        std::map<std::string, ScoredGroup> groups;
        for (std::size_t i = 0; i < manifest.size(); ++i) {
            auto& g = groups[manifest[i].group_id];
            g.group_id = manifest[i].group_id;
            g.items.emplace_back(pred[i], mos[i]);
        }
        std::vector<ScoredGroup> group_list;
        group_list.reserve(groups.size());
        for (auto& [id, g] : groups) group_list.push_back(std::move(g));

        CorrelationRow row;
        row.metric = report.metric_columns[m];
        row.srocc = srocc(pred, mos);
        row.plcc = plcc(pred, mos);
        row.fraccp = fraccp(group_list);
        out.push_back(row);
    }
    return out;
}

void write_correlations_csv(const std::vector<CorrelationRow>& rows, const std::string& path) {
    std::vector<std::vector<std::string>> out;
    out.push_back({"metric", "srocc", "plcc", "fraccp"});
    for (const auto& r : rows)
        out.push_back({r.metric, format_csv_value(r.srocc), format_csv_value(r.plcc),
                       format_csv_value(r.fraccp)});
    write_csv(path, out);
}

}  // namespace saliqa
