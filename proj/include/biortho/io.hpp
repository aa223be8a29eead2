#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "biortho/backward.hpp"

namespace biortho::io {

/// 17 significant digits, '.' decimal separator, independent of locale.
std::string format_number(double value);

/// Parse "min:max:points".
Gridd parse_grid_spec(std::string_view spec);

/// Parse a comma-separated list of reals ("-6,-5,0.5").
std::vector<double> parse_number_list(std::string_view text);

/// Parse a comma-separated list of atom ids. Empty text yields an empty list.
std::vector<AtomId> parse_id_list(std::string_view text);

void write_text_file(const std::filesystem::path& path, const std::string& contents);
std::string read_text_file(const std::filesystem::path& path);

// Signal CSV: header "t,value", one row per sample.
std::string signal_csv(const Signald& signal);
void write_signal_csv(const Signald& signal, const std::filesystem::path& path);
Signald parse_signal_csv(const std::string& text);
Signald read_signal_csv(const std::filesystem::path& path);

// Dictionary CSV (wide): header "t,<label_1>,...,<label_N>". Ids are the
// 1-based column positions on load.
std::string dictionary_csv(const Dictionaryd& dict);
void save_dictionary_csv(const Dictionaryd& dict, const std::filesystem::path& path);
Dictionaryd parse_dictionary_csv(const std::string& text);
Dictionaryd load_dictionary_csv(const std::filesystem::path& path);

/// CSV with a t column followed by one column per series, all on `grid`.
std::string columns_csv(const Gridd& grid, const std::vector<std::string>& names,
                        const std::vector<const VectorX<double>*>& columns);

std::string dual_state_json(const DualStated& state);
std::string coefficients_json(const DualStated& state, const Approximationd& approx);
std::string trace_json(const ReductionTrace& trace);

}  // namespace biortho::io
