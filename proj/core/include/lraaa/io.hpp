#pragma once

#include <string>

#include "lraaa/barycentric.hpp"

namespace lraaa {

inline constexpr const char* kGridFormat = "lraaa-grid/1";
inline constexpr const char* kModelFormat = "lraaa-model/1";

/// Grid documents are read with a streaming parser; benchmark grids reach ~1 GB of text.
SampleGrid load_grid(const std::string& path);
void save_grid(const SampleGrid& grid, const std::string& path, const std::vector<std::string>& axis_names = {});

SampleGrid parse_grid(const std::string& text);
std::string serialize_grid(const SampleGrid& grid, const std::vector<std::string>& axis_names = {});

BarycentricModel load_model(const std::string& path);
void save_model(const BarycentricModel& model, const std::string& path);

BarycentricModel parse_model(const std::string& text);
std::string serialize_model(const BarycentricModel& model);

/// Named numeric columns for plain-text plot data.
struct DatTable {
  std::string schema;  // optional tag written before the column names, e.g. "lraaa-trace/1"
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
};

/// One "# [schema:] name ..." header line, then whitespace-separated rows at 16 significant digits.
void emit_dat(const DatTable& table, const std::string& path);
std::string format_dat(const DatTable& table);
DatTable parse_dat(const std::string& text);

std::string read_text_file(const std::string& path);

}  // namespace lraaa
