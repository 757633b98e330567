#pragma once

#include "bia/bregman.hpp"
#include "bia/metrics.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bia {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Column header of every trace CSV.
inline constexpr const char* kTraceColumns =
    "iter,objective,rel_objective,support_match,support_error,grad_dist,step_norm,"
    "dissipation_slack,wall_ms";

using CsvHeader = std::vector<std::pair<std::string, std::string>>;

/// `# key=value` comment lines, the column header, then one row per record.
std::string format_trace_csv(const std::vector<TraceRecord>& records, const CsvHeader& header = {});
void write_trace_csv(const std::vector<TraceRecord>& records, const std::filesystem::path& path,
                     const CsvHeader& header = {});

struct TraceFile {
  CsvHeader header;
  std::vector<TraceRecord> records;
};
TraceFile parse_trace_csv(const std::string& text);
TraceFile read_trace_csv(const std::filesystem::path& path);

/// Grayscale image with row-major intensities in [0, 1].
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  Vector pixels;
};

/// Binary P5 with maxval <= 255; samples map linearly onto [0, 1].
Image decode_pgm(const std::string& bytes);
/// P5, maxval 255; intensities clamped to [0, 1] and rounded.
std::string encode_pgm(const Image& img);

Image read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Image& img);

}  // namespace bia
