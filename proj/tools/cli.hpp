#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "whembed/report.hpp"
#include "whembed/wh_core.hpp"

namespace whembed::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct CsvRow {
  double theta_deg = 0.0;
  double theta_i_deg = 0.0;
  double re_S = 0.0;
  double im_S = 0.0;
  double abs_S = 0.0;
};

inline constexpr const char* kCsvHeader = "theta_deg,theta_i_deg,re_S,im_S,abs_S";

// theta_i-major rows, 17 significant digits, written atomically.
std::string format_csv(const DirectivityGrid& grid);
void emit_csv(const DirectivityGrid& grid, const std::string& path);
std::vector<CsvRow> read_csv(const std::string& path);

nlohmann::json to_json(const EmbeddingReport& report);
void write_atomic(const std::string& path, const std::string& content);

}  // namespace whembed::cli
