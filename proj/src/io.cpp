#include "bia/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bia {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << data;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

std::string format_trace_csv(const std::vector<TraceRecord>& records, const CsvHeader& header) {
  std::ostringstream out;
  for (const auto& [key, value] : header) out << "# " << key << '=' << value << '\n';
  out << kTraceColumns << '\n';
  char wall[40];
  for (const TraceRecord& r : records) {
    std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
    out << r.iter << ',' << fmt_double(r.objective) << ',' << fmt_double(r.rel_objective) << ','
        << fmt_double(r.support_match) << ',' << fmt_double(r.support_error) << ','
        << fmt_double(r.grad_dist) << ',' << fmt_double(r.step_norm) << ','
        << fmt_double(r.dissipation_slack) << ',' << wall << '\n';
  }
  return out.str();
}

void write_trace_csv(const std::vector<TraceRecord>& records, const std::filesystem::path& path,
                     const CsvHeader& header) {
  spit(path, format_trace_csv(records, header));
}

TraceFile parse_trace_csv(const std::string& text) {
  TraceFile file;
  std::istringstream in(text);
  std::string line;
  bool seen_columns = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw IoError("trace csv line " + std::to_string(lineno) + ": header without '='");
      file.header.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    if (!seen_columns) {
      if (line != kTraceColumns)
        throw IoError("trace csv line " + std::to_string(lineno) + ": unexpected column header");
      seen_columns = true;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ',')) cells.push_back(std::strtod(cell.c_str(), nullptr));
    if (cells.size() != 9)
      throw IoError("trace csv line " + std::to_string(lineno) + ": expected 9 columns");
    TraceRecord r;
    r.iter = static_cast<long>(cells[0]);
    r.objective = cells[1];
    r.rel_objective = cells[2];
    r.support_match = cells[3];
    r.support_error = cells[4];
    r.grad_dist = cells[5];
    r.step_norm = cells[6];
    r.dissipation_slack = cells[7];
    r.wall_ms = cells[8];
    file.records.push_back(r);
  }
  if (!seen_columns) throw IoError("trace csv: missing column header");
  return file;
}

TraceFile read_trace_csv(const std::filesystem::path& path) { return parse_trace_csv(slurp(path)); }

// ---------------------------------------------------------------------------------------------

Image decode_pgm(const std::string& bytes) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) -> IoError {
    return IoError("malformed PGM at byte offset " + std::to_string(pos) + ": " + what);
  };
  auto skip_space_and_comments = [&] {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_uint = [&](const char* name) {
    skip_space_and_comments();
    if (pos >= bytes.size() || bytes[pos] < '0' || bytes[pos] > '9')
      throw fail(std::string("expected ") + name);
    unsigned long v = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      v = v * 10 + static_cast<unsigned long>(bytes[pos] - '0');
      if (v > 1000000000UL) throw fail(std::string(name) + " too large");
      ++pos;
    }
    return v;
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw fail("missing P5 magic");
  pos = 2;
  const unsigned long width = read_uint("width");
  const unsigned long height = read_uint("height");
  const unsigned long maxval = read_uint("maxval");
  if (width == 0 || height == 0) throw fail("zero image dimension");
  if (maxval == 0 || maxval > 255) throw fail("only 8-bit PGM (maxval 1..255) is supported");
  if (pos >= bytes.size()) throw fail("missing raster");
  ++pos;  // single whitespace after maxval
  const std::size_t count = width * height;
  if (bytes.size() - pos < count)
    throw fail("raster truncated: need " + std::to_string(count) + " bytes, have " +
               std::to_string(bytes.size() - pos));

  Image img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i)
    img.pixels[static_cast<Eigen::Index>(i)] =
        static_cast<double>(static_cast<unsigned char>(bytes[pos + i])) / static_cast<double>(maxval);
  return img;
}

std::string encode_pgm(const Image& img) {
  if (img.pixels.size() != static_cast<Eigen::Index>(img.width * img.height) || img.width == 0 ||
      img.height == 0)
    throw PreconditionError("encode_pgm: pixel count does not match dimensions");
  std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.reserve(out.size() + img.width * img.height);
  for (Eigen::Index i = 0; i < img.pixels.size(); ++i) {
    const double v = std::clamp(img.pixels[i], 0.0, 1.0);
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
  }
  return out;
}

Image read_pgm(const std::filesystem::path& path) {
  try {
    return decode_pgm(slurp(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_pgm(const std::filesystem::path& path, const Image& img) { spit(path, encode_pgm(img)); }

}  // namespace bia
