#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dvpp/metrics.hpp"
#include "dvpp/scenario.hpp"
#include "dvpp/trace.hpp"

namespace dvpp {

enum class TraceFormat { Csv, Binary };

// CSV: one header line of column names, then one line per row. Numbers use the shortest
// representation that parses back to the identical double.
std::string trace_to_csv(const SimulationTrace& trace);
SimulationTrace trace_from_csv(std::string_view text, TraceHeader header = {});

// Binary: "DVPPTRC1", u32 column count, u64 row count, each name as u32 length + bytes,
// then row-major little-endian IEEE-754 doubles.
std::string trace_to_binary(const SimulationTrace& trace);
SimulationTrace trace_from_binary(std::string_view bytes, TraceHeader header = {});

nlohmann::json header_to_json(const TraceHeader& header, const ScenarioSpec* spec = nullptr);
TraceHeader header_from_json(const nlohmann::json& j);

// Writes <dir>/trace.csv or <dir>/trace.bin plus the sidecar <dir>/trace.header.json.
std::filesystem::path write_trace(const SimulationTrace& trace, const ScenarioSpec& spec,
                                  const std::filesystem::path& dir, TraceFormat format);
// Reads a trace file and its sidecar (trace.header.json in the same directory).
SimulationTrace read_trace(const std::filesystem::path& trace_file);

std::string trace_digest(const SimulationTrace& trace);

nlohmann::json metrics_to_json(const Metrics& metrics);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace dvpp
