#include "biortho/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace biortho::io {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

double parse_cell(std::string_view s, std::size_t line_no) {
  double v = 0;
  if (!parse_double(s, v)) {
    throw ParseError("line " + std::to_string(line_no) + ": cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

// Rebuild the uniform grid implied by a sampled t column.
Gridd grid_from_abscissae(const std::vector<double>& t) {
  if (t.size() < 2) throw ParseError("need at least two samples, got " + std::to_string(t.size()));
  const Index n = static_cast<Index>(t.size());
  if (!(t.front() < t.back())) throw GridMismatch("t column is not increasing");
  const Gridd grid(t.front(), t.back(), n);
  const double h = grid.step();
  for (Index k = 0; k < n; ++k) {
    if (std::abs(t[static_cast<std::size_t>(k)] - grid.abscissa(k)) > 1e-9 * h) {
      throw GridMismatch("t column is not uniform at row " + std::to_string(k + 1));
    }
  }
  return grid;
}

std::string escape_json(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

template <typename Range>
std::string json_number_array(const Range& values) {
  std::string out = "[";
  bool first = true;
  for (double v : values) {
    if (!first) out += ", ";
    out += json_number(v);
    first = false;
  }
  out += "]";
  return out;
}

std::string json_vector(const VectorX<double>& v) {
  return json_number_array(std::vector<double>(v.data(), v.data() + v.size()));
}

std::string grid_json(const Gridd& g) {
  return "{\"t_min\": " + format_number(g.t_min()) + ", \"t_max\": " + format_number(g.t_max()) +
         ", \"n_points\": " + std::to_string(g.size()) + "}";
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw InvalidArgument("cannot format number");
  return std::string(buf, ptr);
}

Gridd parse_grid_spec(std::string_view spec) {
  const auto parts = split(trim(spec), ':');
  if (parts.size() != 3) throw InvalidArgument("grid spec must be min:max:points, got '" + std::string(spec) + "'");
  double lo = 0, hi = 0;
  if (!parse_double(parts[0], lo) || !parse_double(parts[1], hi)) {
    throw InvalidArgument("grid bounds must be numbers, got '" + std::string(spec) + "'");
  }
  long long n = 0;
  const std::string_view np = trim(parts[2]);
  const auto [ptr, ec] = std::from_chars(np.data(), np.data() + np.size(), n);
  if (ec != std::errc() || ptr != np.data() + np.size()) {
    throw InvalidArgument("grid point count must be an integer, got '" + std::string(np) + "'");
  }
  return Gridd(lo, hi, static_cast<Index>(n));
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (std::string_view part : split(text, ',')) {
    double v = 0;
    if (!parse_double(part, v)) throw InvalidArgument("not a number: '" + std::string(part) + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<AtomId> parse_id_list(std::string_view text) {
  std::vector<AtomId> out;
  if (trim(text).empty()) return out;
  for (std::string_view part : split(text, ',')) {
    part = trim(part);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
      throw InvalidArgument("not an atom id: '" + std::string(part) + "'");
    }
    out.push_back(AtomId{v});
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!os) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string signal_csv(const Signald& signal) {
  return columns_csv(signal.grid(), {"value"}, {&signal.values()});
}

void write_signal_csv(const Signald& signal, const std::filesystem::path& path) {
  write_text_file(path, signal_csv(signal));
}

Signald parse_signal_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ParseError("empty signal file");
  const auto header = split(lines[0], ',');
  if (header.size() != 2) throw ParseError("signal header must have two columns: t,value");
  std::vector<double> t, v;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    if (cells.size() != 2) throw ParseError("line " + std::to_string(i + 1) + ": expected 2 columns");
    t.push_back(parse_cell(cells[0], i + 1));
    v.push_back(parse_cell(cells[1], i + 1));
  }
  const Gridd grid = grid_from_abscissae(t);
  return Signald(grid, Eigen::Map<const VectorX<double>>(v.data(), static_cast<Index>(v.size())));
}

Signald read_signal_csv(const std::filesystem::path& path) { return parse_signal_csv(read_text_file(path)); }

std::string dictionary_csv(const Dictionaryd& dict) {
  std::vector<const VectorX<double>*> cols;
  std::vector<VectorX<double>> storage;
  storage.reserve(static_cast<std::size_t>(dict.size()));
  for (Index n = 0; n < dict.size(); ++n) storage.emplace_back(dict.column(n));
  for (const auto& c : storage) cols.push_back(&c);
  return columns_csv(dict.grid(), dict.labels(), cols);
}

void save_dictionary_csv(const Dictionaryd& dict, const std::filesystem::path& path) {
  write_text_file(path, dictionary_csv(dict));
}

Dictionaryd parse_dictionary_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ParseError("empty dictionary file");
  const auto header = split(lines[0], ',');
  if (header.size() < 2) throw ParseError("dictionary needs a t column and at least one atom column");
  const std::size_t n_atoms = header.size() - 1;

  std::vector<double> t;
  std::vector<std::vector<double>> cols(n_atoms);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i], ',');
    if (cells.size() != header.size()) {
      throw ParseError("line " + std::to_string(i + 1) + ": expected " + std::to_string(header.size()) +
                       " columns, got " + std::to_string(cells.size()));
    }
    t.push_back(parse_cell(cells[0], i + 1));
    for (std::size_t a = 0; a < n_atoms; ++a) cols[a].push_back(parse_cell(cells[a + 1], i + 1));
  }
  const Gridd grid = grid_from_abscissae(t);

  std::vector<Atomd> atoms;
  atoms.reserve(n_atoms);
  for (std::size_t a = 0; a < n_atoms; ++a) {
    Signald s(grid, Eigen::Map<const VectorX<double>>(cols[a].data(), static_cast<Index>(cols[a].size())));
    atoms.push_back({AtomId{static_cast<std::int64_t>(a) + 1}, std::move(s), std::string(trim(header[a + 1]))});
  }
  return Dictionaryd(grid, atoms);
}

Dictionaryd load_dictionary_csv(const std::filesystem::path& path) {
  return parse_dictionary_csv(read_text_file(path));
}

std::string columns_csv(const Gridd& grid, const std::vector<std::string>& names,
                        const std::vector<const VectorX<double>*>& columns) {
  if (names.size() != columns.size()) throw InvalidArgument("column names and data differ in count");
  std::string out = "t";
  for (const auto& name : names) out += "," + name;
  out += "\n";
  for (Index k = 0; k < grid.size(); ++k) {
    out += format_number(grid.abscissa(k));
    for (const auto* col : columns) {
      out += ",";
      out += format_number((*col)(k));
    }
    out += "\n";
  }
  return out;
}

std::string dual_state_json(const DualStated& state) {
  const Dictionaryd& dict = state.dictionary();
  std::string out = "{\n";
  out += "  \"grid\": " + grid_json(state.grid()) + ",\n";
  out += "  \"atom_ids\": [";
  for (Index n = 0; n < dict.size(); ++n) out += (n ? ", " : "") + to_string(dict.id(n));
  out += "],\n  \"duals\": [\n";
  for (Index n = 0; n < state.size(); ++n) {
    out += "    " + json_vector(state.duals().col(n));
    out += (n + 1 < state.size()) ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"dual_norm_sq\": " + json_vector(state.dual_norm_sq()) + "\n}\n";
  return out;
}

std::string coefficients_json(const DualStated& state, const Approximationd& approx) {
  const Dictionaryd& dict = state.dictionary();
  const double residual = norm_sq(approx.signal - approximant(state, approx));
  std::string out = "{\n  \"coefficients\": [\n";
  for (Index n = 0; n < dict.size(); ++n) {
    out += "    {\"id\": " + to_string(dict.id(n)) + ", \"label\": " + escape_json(dict.label(n)) +
           ", \"coeff\": " + json_number(approx.coeffs(n)) +
           ", \"dual_norm_sq\": " + json_number(state.dual_norm_sq()(n)) + "}";
    out += (n + 1 < dict.size()) ? ",\n" : "\n";
  }
  out += "  ],\n";
  out += "  \"approx_norm_sq\": " + json_number(approx.approx_norm_sq) + ",\n";
  out += "  \"residual_norm_sq\": " + json_number(residual) + "\n}\n";
  return out;
}

std::string trace_json(const ReductionTrace& trace) {
  std::string out = "{\n";
  out += "  \"delta\": " + (trace.delta ? json_number(*trace.delta) : std::string("null")) + ",\n";
  out += "  \"initial_norm_sq\": " + json_number(trace.initial_norm_sq) + ",\n";
  out += "  \"steps\": [";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const RemovalStep& s = trace.steps[i];
    out += i ? ",\n" : "\n";
    out += "    {\"removed_id\": " + to_string(s.removed_id) + ", \"label\": " + escape_json(s.label) +
           ", \"impact\": " + json_number(s.impact) +
           ", \"approx_norm_sq_after\": " + json_number(s.approx_norm_sq_after) +
           ", \"coeffs_after\": " + json_number_array(s.coeffs_after) + "}";
  }
  out += trace.steps.empty() ? "],\n" : "\n  ],\n";
  out += "  \"stopped_reason\": " + escape_json(to_string(trace.stopped_reason)) + ",\n";
  out += "  \"projection_residual_sq\": " + json_number(trace.projection_residual_sq) + ",\n";
  out += "  \"residual_to_signal_sq\": " + json_number(trace.residual_to_signal_sq()) + "\n}\n";
  return out;
}

}  // namespace biortho::io
