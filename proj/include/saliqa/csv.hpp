#pragma once

#include <string>
#include <vector>

namespace saliqa {

// Minimal CSV support: comma separator, optional double-quoted fields with
// "" escapes, no embedded newlines. Enough for manifests, votes and reports.
std::vector<std::string> split_csv_line(const std::string& line);
std::vector<std::vector<std::string>> read_csv(const std::string& path);
std::string csv_quote(const std::string& field);
void write_csv(const std::string& path, const std::vector<std::vector<std::string>>& rows);

// Fixed float formatting for every CSV the toolkit emits: 6 significant
// digits, '.' separator, locale-independent.
std::string format_csv_value(double value);

}  // namespace saliqa
